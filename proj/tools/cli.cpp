#include "cli.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <cmath>
#include <csignal>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "ocular/error.hpp"
#include "ocular/ingest.hpp"
#include "ocular/payload.hpp"
#include "ocular/phantom.hpp"
#include "ocular/pipeline.hpp"
#include "ocular/report.hpp"
#include "ocular/service.hpp"
#include "ocular/sessions.hpp"
#include "svg_chart.hpp"

namespace ocular::cli {

using nlohmann::json;

namespace {

std::vector<double> numbers(const json& a) {
  std::vector<double> v;
  for (const json& x : a) v.push_back(x.is_null() ? std::nan("") : x.get<double>());
  return v;
}

std::string summary(payload::Module m, const json& p) {
  using payload::Module;
  switch (m) {
    case Module::Redness:
      return fmt::format("redness_score {:.2f} [{:.2f}, {:.2f}]  band {}/{}  ({} mask px)", p["redness_score"].get<double>(),
                         p["score_lo"].get<double>(), p["score_hi"].get<double>(), p["band"].get<std::string>(),
                         p["guidance"].get<std::string>(), p["mask_pixels"].get<std::size_t>());
    case Module::Blink:
      return fmt::format("blink_count {}  rate {:.1f}/min [95% CI {:.1f}, {:.1f}]  stratum {}\n{}",
                         p["blink_count"].get<int>(), p["blink_rate_per_min"].get<double>(), p["rate_ci_lo"].get<double>(),
                         p["rate_ci_hi"].get<double>(), p["stratum"].get<std::string>(), p["triage"].get<std::string>());
    case Module::Pupil: {
      std::string fit = p["fit_status"].get<std::string>();
      if (!p["fit"].is_null()) {
        fit += fmt::format(" (latency {:.0f} ms, tau {:.3f} s)", p["fit"]["latency_ms"].get<double>(),
                           p["fit"]["tau_s"].get<double>());
      }
      return fmt::format("eye {}  PIR {:.4f} -> {:.4f}  delta {:.2f}%  time-to-min {:.0f} ms  v_max {:.4f} PIR/s  Q {:.2f}\nfit {}\n{}",
                         p["eye"].get<std::string>(), p["pir_base"].get<double>(), p["pir_min"].get<double>(),
                         p["delta_rel_pct"].get<double>(), p["latency_ms"].get<double>(),
                         p["constriction_velocity"]["v_max"].get<double>(), p["quality"]["q"].get<double>(), fit,
                         p["triage"].get<std::string>());
    }
    case Module::Color:
      return fmt::format("yellow_index {:.3f} [{:.3f}, {:.3f}]  pallor_index {:.3f}\n{}", p["yellow_index"].get<double>(),
                         p["yellow_lo"].get<double>(), p["yellow_hi"].get<double>(), p["pallor_index"].get<double>(),
                         p["triage"].get<std::string>());
    case Module::Lesion: {
      std::string s = fmt::format("encroachment {:.2f} mm [{:.2f}, {:.2f}]  status {}  calibration {} (radius {:.1f} px)",
                                  p["encroachment_mm"].get<double>(), p["encroachment_lo_mm"].get<double>(),
                                  p["encroachment_hi_mm"].get<double>(), p["status"].get<std::string>(),
                                  p["calibration"]["source"].get<std::string>(),
                                  p["calibration"]["radius_px"].get<double>());
      if (!p["trend"].is_null()) {
        s += fmt::format("\ntrend {} ({:+.3f} mm over {:.1f} days)", p["trend"]["label"].get<std::string>(),
                         p["trend"]["delta_mm"].get<double>(), p["trend"]["delta_days"].get<double>());
        if (!p["trend"]["growth_mm_per_day"].is_null()) {
          s += fmt::format(", growth {:.4f} mm/day{}", p["trend"]["growth_mm_per_day"].get<double>(),
                           p["trend"]["significant"].get<bool>() ? " (significant)" : "");
        }
      }
      return s + "\n" + p["triage"].get<std::string>();
    }
  }
  return {};
}

std::string chart(payload::Module m, const json& p) {
  if (m == payload::Module::Blink) {
    const json& s = p["ear_series"];
    return svg_line_chart("Eye aspect ratio", s["fps"].get<double>(),
                          {{"raw", "#999999", numbers(s["raw"])}, {"smoothed", "#1f5fbf", numbers(s["smoothed"])}},
                          p["threshold"].get<double>(), "EAR");
  }
  if (m == payload::Module::Pupil) {
    const json& s = p["pir_series"];
    return svg_line_chart("Pupil-to-iris ratio", s["fps"].get<double>(), {{"PIR", "#bf3f1f", numbers(s["values"])}},
                          std::nullopt, "PIR");
  }
  throw Error(ErrorCode::InvalidArgument, "--svg is only available for blink and pupil");
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidArgument, "expected a comma-separated list of numbers", text);
    }
  }
  return out;
}

struct AnalyzeArgs {
  std::string module, input, session, landmarks, out, svg, sector;
  std::optional<double> t_stim, alpha;
};

struct SessionArgs {
  std::string intake_path, name, notes, email, phone, id, out;
  bool consent = false, photophobia = false, vision_changes = false;
  int age = 0, pain = 0;
};

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"ocular: eye screening measurements from photos and landmark traces", "ocular"};
  app.require_subcommand(1);
  std::string data_dir;
  app.add_option("--data-dir", data_dir, "session store directory (default: $DATA_DIR or ./data)");

  AnalyzeArgs a;
  auto* analyze = app.add_subcommand("analyze", "run one analysis module on a local file");
  analyze->add_option("module", a.module, "redness | blink | pupil | color | lesion")
      ->required()
      ->check(CLI::IsMember({"redness", "blink", "pupil", "color", "lesion"}));
  analyze->add_option("--input,-i", a.input, "photo (PNG/JPEG) or landmark trace (JSONL)")->required();
  analyze->add_option("--session", a.session, "append the result to this session");
  analyze->add_option("--t-stim", a.t_stim, "pupil stimulus time, seconds");
  analyze->add_option("--alpha", a.alpha, "blink threshold multiplier");
  analyze->add_option("--sector", a.sector, "lesion sector mode")->check(CLI::IsMember({"clinical", "literal"}));
  analyze->add_option("--landmarks", a.landmarks, "trace carrying iris landmarks for lesion calibration");
  analyze->add_option("--out,-o", a.out, "write the full JSON payload here");
  analyze->add_option("--svg", a.svg, "write an SVG chart of the time series (blink, pupil)");

  SessionArgs s;
  auto* session = app.add_subcommand("session", "manage screening sessions");
  session->require_subcommand(1);
  auto* s_create = session->add_subcommand("create", "create a session from intake data");
  s_create->add_option("--intake", s.intake_path, "intake JSON file ('-' for stdin)");
  s_create->add_flag("--consent", s.consent, "participant consents to screening");
  s_create->add_option("--name", s.name);
  s_create->add_option("--age", s.age);
  s_create->add_option("--pain", s.pain, "pain level 0-10");
  s_create->add_flag("--photophobia", s.photophobia);
  s_create->add_flag("--vision-changes", s.vision_changes);
  s_create->add_option("--notes", s.notes);
  s_create->add_option("--email", s.email);
  s_create->add_option("--phone", s.phone);
  auto* s_list = session->add_subcommand("list", "list sessions, newest first");
  auto* s_show = session->add_subcommand("show", "print a session document");
  s_show->add_option("id", s.id)->required();
  auto* s_report = session->add_subcommand("report", "render the session report");
  s_report->add_option("id", s.id)->required();
  s_report->add_option("--out,-o", s.out, "JSON report path; report.html is written beside it");

  auto* phantom_cmd = app.add_subcommand("phantom", "generate synthetic fixtures with known ground truth");
  phantom_cmd->require_subcommand(1);
  phantom::EarSpec ear;
  std::string blinks, ear_out;
  auto* p_ear = phantom_cmd->add_subcommand("ear", "blink trace");
  p_ear->add_option("--fps", ear.fps);
  p_ear->add_option("--duration", ear.duration_s);
  p_ear->add_option("--blinks", blinks, "comma-separated dip onsets, seconds");
  p_ear->add_option("--baseline", ear.baseline);
  p_ear->add_option("--dip", ear.dip);
  p_ear->add_option("--dip-frames", ear.dip_frames);
  p_ear->add_option("--noise", ear.noise_sigma);
  p_ear->add_option("--seed", ear.seed);
  p_ear->add_option("--out,-o", ear_out)->required();
  phantom::PirSpec pir;
  std::string pir_out;
  auto* p_pir = phantom_cmd->add_subcommand("pir", "pupil reflex trace");
  p_pir->add_option("--fps", pir.fps);
  p_pir->add_option("--duration", pir.duration_s);
  p_pir->add_option("--base", pir.base);
  p_pir->add_option("--min", pir.min);
  p_pir->add_option("--tau", pir.tau_s);
  p_pir->add_option("--latency-ms", pir.latency_ms);
  p_pir->add_option("--t-stim", pir.t_stim);
  p_pir->add_option("--noise", pir.noise_sigma);
  p_pir->add_option("--seed", pir.seed);
  p_pir->add_option("--out,-o", pir_out)->required();
  phantom::EyeSpec eye;
  std::optional<double> wedge_theta_deg, wedge_width_deg, wedge_depth, tint_a, tint_b;
  std::string eye_out, eye_landmarks;
  auto* p_eye = phantom_cmd->add_subcommand("eye", "eye photo");
  p_eye->add_option("--width", eye.width);
  p_eye->add_option("--height", eye.height);
  p_eye->add_option("--cx", eye.iris_center.x);
  p_eye->add_option("--cy", eye.iris_center.y);
  p_eye->add_option("--radius", eye.iris_radius_px);
  p_eye->add_option("--lesion-depth", wedge_depth, "wedge penetration, px");
  p_eye->add_option("--lesion-theta", wedge_theta_deg, "wedge centre angle, degrees (default 0)");
  p_eye->add_option("--lesion-width", wedge_width_deg, "wedge angular width, degrees");
  p_eye->add_option("--tint-a", tint_a);
  p_eye->add_option("--tint-b", tint_b);
  p_eye->add_option("--out,-o", eye_out, "PNG path")->required();
  p_eye->add_option("--landmarks-out", eye_landmarks, "also write a one-frame trace with the iris ring");

  auto* serve = app.add_subcommand("serve", "run the HTTP service");
  std::string bind;
  std::optional<int> port;
  serve->add_option("--bind", bind, "address (default: $BIND_ADDR or 0.0.0.0)");
  serve->add_option("--port", port, "port (default: $PORT or 8001)");

  std::vector<std::string> argv_store{"ocular"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (std::string& x : argv_store) argv.push_back(x.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    service::ServiceConfig config = service::ServiceConfig::from_env();
    if (!data_dir.empty()) config.data_dir = data_dir;

    if (*analyze) {
      const payload::Module module = payload::parse_module(a.module);
      pipeline::AnalysisOptions opt;
      opt.t_stim = a.t_stim;
      opt.alpha = a.alpha;
      if (!a.sector.empty()) opt.sector = lesion::parse_sector_mode(a.sector);
      if (!a.landmarks.empty()) opt.iris = pipeline::first_iris(ingest::load_trace(ingest::as_text(ingest::read_file(a.landmarks))));
      const std::vector<std::uint8_t> bytes = ingest::read_file(a.input);
      json result;
      if (!a.session.empty()) {
        sessions::FileDocumentStore store(config.data_dir);
        sessions::SessionRepository repo(store);
        repo.record(a.session, module, [&](const sessions::SessionDocument& d, Timestamp at) {
          result = pipeline::run_analysis(module, bytes, opt, sessions::lesion_history(d), at);
          return result;
        });
      } else {
        result = pipeline::run_analysis(module, bytes, opt, {}, now_utc());
      }
      out << summary(module, result) << "\n";
      if (!a.out.empty()) ingest::write_file(a.out, std::string_view(result.dump()));
      if (!a.svg.empty()) ingest::write_file(a.svg, std::string_view(chart(module, result)));
      return kExitOk;
    }

    if (*session) {
      sessions::FileDocumentStore store(config.data_dir);
      sessions::SessionRepository repo(store);
      if (*s_create) {
        sessions::IntakeRecord intake;
        if (!s.intake_path.empty()) {
          std::string text;
          if (s.intake_path == "-") {
            text.assign(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
          } else {
            text = std::string(ingest::as_text(ingest::read_file(s.intake_path)));
          }
          const json j = json::parse(text, nullptr, false);
          if (j.is_discarded()) throw Error(ErrorCode::ValidationFailed, "intake file is not JSON", "intake");
          intake = sessions::intake_from_json(j);
        } else {
          intake.consent = s.consent;
          intake.name = s.name;
          intake.age = s.age;
          intake.pain_level = s.pain;
          intake.photophobia = s.photophobia;
          intake.vision_changes = s.vision_changes;
          intake.notes = s.notes;
          if (!s.email.empty()) intake.email = s.email;
          if (!s.phone.empty()) intake.phone = s.phone;
        }
        out << repo.create(intake).id << "\n";
      } else if (*s_list) {
        for (const sessions::SessionSummary& x : repo.list()) {
          std::string mods;
          for (const std::string& m : x.modules) mods += (mods.empty() ? "" : ",") + m;
          out << x.id << "  " << format_iso8601(x.created_at) << "  " << (mods.empty() ? "-" : mods) << "\n";
        }
      } else if (*s_show) {
        out << sessions::to_json(repo.get(s.id)).dump(2) << "\n";
      } else if (*s_report) {
        const json r = report::build_report(repo.get(s.id));
        const std::string html = report::render_html(r);
        if (s.out.empty()) {
          out << html;
        } else {
          const std::filesystem::path json_path(s.out);
          const std::filesystem::path html_path = json_path.parent_path() / "report.html";
          if (!json_path.parent_path().empty()) std::filesystem::create_directories(json_path.parent_path());
          ingest::write_file(json_path, std::string_view(r.dump(2)));
          ingest::write_file(html_path, std::string_view(html));
          out << html_path.string() << "\n";
        }
      }
      return kExitOk;
    }

    if (*phantom_cmd) {
      if (*p_ear) {
        ear.blink_times = parse_list(blinks);
        const phantom::EarPhantom ph = phantom::synth_ear_trace(ear);
        ingest::write_file(ear_out, std::string_view(ingest::serialize_trace(ph.trace)));
        out << fmt::format("{} frames, {} blinks ({} detectable)\n", ph.trace.frame_count, ph.truth.blink_count,
                           ph.truth.detectable_count);
      } else if (*p_pir) {
        const phantom::PirPhantom ph = phantom::synth_pir_trace(pir);
        ingest::write_file(pir_out, std::string_view(ingest::serialize_trace(ph.trace)));
        out << fmt::format("{} frames, PIR {} -> {}\n", ph.trace.frame_count, pir.base, pir.min);
      } else if (*p_eye) {
        const double deg = std::numbers::pi / 180.0;
        if (wedge_depth) {
          phantom::LesionWedge w;
          w.max_penetration_px = *wedge_depth;
          w.theta_center = wedge_theta_deg.value_or(0.0) * deg;
          if (wedge_width_deg) w.theta_width = *wedge_width_deg * deg;
          eye.lesion = w;
        }
        if (tint_a || tint_b) eye.tint = phantom::ScleralTint{tint_a.value_or(0.0), tint_b.value_or(0.0)};
        const phantom::EyePhantom ph = phantom::synth_eye_image(eye);
        ingest::write_file(eye_out, ingest::encode_png(ph.image));
        if (!eye_landmarks.empty()) {
          ingest::LandmarkTrace t;
          t.fps = 1.0;
          t.frame_count = 1;
          ingest::TraceFrame f;
          f.detected = true;
          f.left_iris = ph.truth.landmarks;
          t.frames.push_back(f);
          ingest::write_file(eye_landmarks, std::string_view(ingest::serialize_trace(t)));
        }
        out << fmt::format("{}x{} eye, iris radius {} px, lesion penetration {} px\n", eye.width, eye.height,
                           eye.iris_radius_px, ph.truth.lesion_penetration_px);
      }
      return kExitOk;
    }

    if (*serve) {
      if (!bind.empty()) config.bind_addr = bind;
      if (port) config.port = *port;
      sessions::FileDocumentStore store(config.data_dir);
      sessions::SessionRepository repo(store);
      service::Api api(repo);
      service::HttpServer server(api);
      out << fmt::format("serving {}/ on {}:{} (data in {})\n", service::kApiPrefix, config.bind_addr, config.port,
                         config.data_dir.string())
          << std::flush;
      server.run(config.bind_addr, config.port);
      return kExitOk;
    }
  } catch (const Error& e) {
    err << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
    return kExitEngineError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitEngineError;
  }
  return kExitUsage;
}

}  // namespace ocular::cli
