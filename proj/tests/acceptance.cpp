// Acceptance run: one PASS/FAIL line per criterion, with wall time against
// its limit. Exit status is non-zero when any criterion fails.
#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>
#include <fmt/core.h>

#include "cli.hpp"
#include "ocular/blink.hpp"
#include "ocular/color_indices.hpp"
#include "ocular/colorspace.hpp"
#include "ocular/imgproc.hpp"
#include "ocular/ingest.hpp"
#include "ocular/lesion.hpp"
#include "ocular/payload.hpp"
#include "ocular/phantom.hpp"
#include "ocular/pupil.hpp"
#include "ocular/redness.hpp"
#include "ocular/schema.hpp"
#include "ocular/service.hpp"
#include "ocular/sessions.hpp"

using namespace ocular;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// Collects failed checks; the first few are echoed under the verdict line.
struct Outcome {
  std::vector<std::string> failures;
  std::vector<std::string> notes;

  void expect(bool ok, std::string what) {
    if (!ok) failures.push_back(std::move(what));
  }
  void note(std::string s) { notes.push_back(std::move(s)); }
};

struct Criterion {
  const char* name;
  double limit_s;
  std::function<void(Outcome&)> run;
};

// ---- colorimetry ----------------------------------------------------------

struct Lab {
  double L, a, b;
};

Lab scalar_lab(int B, int G, int R) {
  auto lin = [](int v) {
    const double c = v / 255.0;
    return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
  };
  const double r = lin(R), g = lin(G), b = lin(B);
  const double x = (0.4124 * r + 0.3576 * g + 0.1805 * b) / 0.9505;
  const double y = 0.2126 * r + 0.7152 * g + 0.0722 * b;
  const double z = (0.0193 * r + 0.1192 * g + 0.9505 * b) / 1.0890;
  auto f = [](double t) {
    constexpr double d = 6.0 / 29.0;
    return t > d * d * d ? std::cbrt(t) : t / (3 * d * d) + 4.0 / 29.0;
  };
  return {116 * f(y) - 16, 500 * (f(x) - f(y)), 200 * (f(y) - f(z))};
}

void colorimetry(Outcome& o) {
  std::mt19937_64 rng(101);
  std::uniform_int_distribution<int> u(0, 255);
  for (int i = 0; i < 100; ++i) {
    const auto v = static_cast<std::uint8_t>(u(rng));
    const Lab8Image lab = colorspace::bgr_to_lab8(Bgr8Image(1, 1, Pixel3{v, v, v}));
    o.expect(lab(0, 0).c1 == 128 && lab(0, 0).c2 == 128, fmt::format("gray {} not neutral", v));
  }
  int worst = 0;
  double worst_err = 0;
  for (int i = 0; i < 1000; ++i) {
    const int B = u(rng), G = u(rng), R = u(rng);
    const Pixel3 px{static_cast<std::uint8_t>(B), static_cast<std::uint8_t>(G), static_cast<std::uint8_t>(R)};
    const Pixel3 p = colorspace::bgr_to_lab8(Bgr8Image(1, 1, px))(0, 0);
    const Lab ref = scalar_lab(B, G, R);
    const double e = std::max({std::abs(p.c0 - ref.L * 255 / 100), std::abs(p.c1 - (ref.a + 128)),
                               std::abs(p.c2 - (ref.b + 128))});
    if (e > worst_err) {
      worst_err = e;
      worst = i;
    }
    o.expect(e <= 1.0, fmt::format("pixel ({},{},{}) off by {:.3f}", B, G, R, e));
  }
  o.note(fmt::format("max channel error {:.3f} counts (sample {})", worst_err, worst));
}

// ---- otsu -----------------------------------------------------------------

int exhaustive_otsu(const std::vector<std::uint8_t>& v) {
  std::array<double, 256> h{};
  for (auto x : v) h[x] += 1;
  const double n = static_cast<double>(v.size());
  int best_t = -1;
  double best = -1;
  for (int t = 1; t < 256; ++t) {
    double w0 = 0, s0 = 0, w1 = 0, s1 = 0;
    for (int k = 0; k < 256; ++k) (k < t ? w0 : w1) += h[k], (k < t ? s0 : s1) += k * h[k];
    if (w0 == 0 || w1 == 0) continue;
    const double d = s0 / w0 - s1 / w1;
    const double between = (w0 / n) * (w1 / n) * d * d;
    if (between > best * (1 + 1e-12)) best = between, best_t = t;
  }
  return best_t;
}

void otsu(Outcome& o) {
  std::mt19937_64 rng(202);
  std::uniform_int_distribution<int> modes(1, 4), centre(0, 255), spread(1, 40), count(50, 2000);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::uint8_t> v;
    const int k = modes(rng);
    for (int m = 0; m < k; ++m) {
      std::normal_distribution<double> g(centre(rng), spread(rng));
      const int c = count(rng);
      for (int i = 0; i < c; ++i) v.push_back(static_cast<std::uint8_t>(std::clamp(std::lround(g(rng)), 0L, 255L)));
    }
    if (std::all_of(v.begin(), v.end(), [&](auto x) { return x == v[0]; })) v.push_back(v[0] ^ 1);
    const int got = imgproc::otsu_threshold(GrayPlane(static_cast<int>(v.size()), 1, v));
    const int want = exhaustive_otsu(v);
    o.expect(got == want, fmt::format("histogram {}: {} vs {}", trial, got, want));
  }
}

// ---- morphology -----------------------------------------------------------

void morphology(Outcome& o) {
  std::mt19937_64 rng(303);
  std::uniform_real_distribution<double> density(0.2, 0.8);
  for (int trial = 0; trial < 100; ++trial) {
    std::bernoulli_distribution coin(density(rng));
    const BinaryMask m = BinaryMask::from_predicate(64, 64, [&](int, int) { return coin(rng); });
    for (const auto* k : {&imgproc::kSquare3, &imgproc::kSquare5}) {
      o.expect(imgproc::erode(m, *k) == imgproc::dilate(m.complement(), *k).complement(),
               fmt::format("duality, mask {}", trial));
      const BinaryMask c = imgproc::close(m, *k);
      o.expect(imgproc::close(c, *k) == c, fmt::format("closing not idempotent, mask {}", trial));
    }
  }
}

// ---- redness --------------------------------------------------------------

void redness_arith(Outcome& o) {
  o.expect(redness::redness_score(120, 0).score == 0.0, "a=120 should score 0");
  o.expect(redness::redness_score(150, 0).score == 10.0, "a=150 should score 10");
  const auto b = redness::redness_score(135, 6);
  // Score bounds come from shifting the mean by one sigma either way.
  const auto lo_ref = redness::redness_score(135 - 6, 0).score;
  const auto hi_ref = redness::redness_score(135 + 6, 0).score;
  o.expect(std::abs(b.score - 5.0) < 1e-12, fmt::format("(135,6) score {}", b.score));
  o.expect(std::abs(b.lo - 3.0) < 1e-12 && std::abs(b.hi - 7.0) < 1e-12,
           fmt::format("(135,6) bounds {}..{}", b.lo, b.hi));
  o.expect(lo_ref == b.lo && hi_ref == b.hi, "bounds differ from shifted means");
  const auto t = redness::redness_triage(3.66);
  o.expect(t.label == "mild" && t.guidance == "monitor", "3.66 triage " + t.label + "/" + t.guidance);
}

// ---- blink ----------------------------------------------------------------

struct BlinkCase {
  phantom::EarSpec spec;
};

BlinkCase random_blink_case(std::mt19937_64& rng, double noise, double duration_s) {
  static constexpr double kFps[] = {24.0, 30.0, 60.0};
  BlinkCase c;
  c.spec.fps = kFps[std::uniform_int_distribution<int>(0, 2)(rng)];
  c.spec.duration_s = duration_s;
  c.spec.dip_frames = std::max(blink::min_blink_frames(c.spec.fps) + 1, static_cast<int>(std::lround(0.15 * c.spec.fps)));
  c.spec.noise_sigma = noise;
  c.spec.seed = rng();
  const int g = std::uniform_int_distribution<int>(0, 8)(rng);
  // Onsets on a jittered grid keep dips apart and clear of the baseline window.
  const double slot = (c.spec.duration_s - 3.0) / 8.0;
  std::vector<int> slots(8);
  for (int i = 0; i < 8; ++i) slots[i] = i;
  std::shuffle(slots.begin(), slots.end(), rng);
  std::uniform_real_distribution<double> jitter(0.0, slot - 0.6);
  for (int i = 0; i < g; ++i) c.spec.blink_times.push_back(2.0 + slots[i] * slot + jitter(rng));
  std::sort(c.spec.blink_times.begin(), c.spec.blink_times.end());
  return c;
}

int count_blinks(const phantom::EarSpec& spec) {
  return blink::blink_analyze(phantom::synth_ear_trace(spec).trace).result.blink_count;
}

void blink_crit(Outcome& o) {
  std::mt19937_64 rng(404);
  int noisy_hits = 0, clean_hits = 0;
  std::vector<std::string> misses;
  for (int i = 0; i < 100; ++i) {
    BlinkCase c = random_blink_case(rng, 0.01, 30.0);
    const int truth = static_cast<int>(c.spec.blink_times.size());
    const int got = count_blinks(c.spec);
    if (got == truth) ++noisy_hits;
    else if (misses.size() < 3) misses.push_back(fmt::format("#{} fps {} truth {} got {}", i, c.spec.fps, truth, got));
    c.spec.noise_sigma = 0.0;
    const int clean = count_blinks(c.spec);
    if (clean == truth) ++clean_hits;
  }
  o.note(fmt::format("noisy (sigma 0.01, 30 s): {}/100 exact; noise-free: {}/100", noisy_hits, clean_hits));
  {
    std::mt19937_64 short_rng(404);
    int hits = 0;
    for (int i = 0; i < 100; ++i) {
      const BlinkCase c = random_blink_case(short_rng, 0.01, 10.0);
      hits += count_blinks(c.spec) == static_cast<int>(c.spec.blink_times.size());
    }
    o.note(fmt::format("same draws at 10 s: {}/100 exact", hits));
  }
  for (auto& m : misses) o.note("miss " + m);
  o.expect(noisy_hits >= 95, fmt::format("noisy exact {}/100 < 95", noisy_hits));
  o.expect(clean_hits == 100, fmt::format("noise-free exact {}/100", clean_hits));

  // Affine invariance.
  std::normal_distribution<double> noise(0, 0.02);
  std::uniform_real_distribution<double> scale(0.2, 5), shift(-1, 1);
  for (int trial = 0; trial < 50; ++trial) {
    blink::EarSeries s;
    s.fps = trial % 3 == 0 ? 24.0 : trial % 3 == 1 ? 30.0 : 60.0;
    s.values.resize(900);
    for (double& x : s.values) x = 0.3 + noise(rng);
    for (int b = 0; b < 6; ++b)
      for (int k = 0; k < 6; ++k) s.values[120 + b * 120 + trial + k] = 0.05 + noise(rng);
    blink::EarSeries t = s;
    const double a = scale(rng), c = shift(rng);
    for (double& x : t.values) x = a * x + c;
    const auto ss = blink::smooth(s), st = blink::smooth(t);
    o.expect(blink::detect_blinks(ss, blink::adaptive_threshold(ss).tau) ==
                 blink::detect_blinks(st, blink::adaptive_threshold(st).tau),
             fmt::format("affine map changed the count, series {}", trial));
  }

  // Poisson interval against boost's chi-squared quantiles.
  double worst = 0;
  for (int b = 0; b <= 60; ++b) {
    for (double T : {5.0, 10.0, 37.5, 60.0, 300.0}) {
      const auto r = blink::blink_rate_ci(b, T);
      const double hi = boost::math::quantile(boost::math::chi_squared_distribution<double>(2 * b + 2), 0.975) / 2 * 60 / T;
      worst = std::max(worst, std::abs(r.ci_hi_bpm - hi) / hi);
      if (b > 0) {
        const double lo = boost::math::quantile(boost::math::chi_squared_distribution<double>(2 * b), 0.025) / 2 * 60 / T;
        worst = std::max(worst, std::abs(r.ci_lo_bpm - lo) / lo);
      } else {
        o.expect(r.ci_lo_bpm == 0.0, "B=0 lower bound not 0");
      }
    }
  }
  o.expect(worst <= 1e-6, fmt::format("interval relative error {:.2e}", worst));
  const auto r3 = blink::blink_rate_ci(3, 10);
  o.note(fmt::format("B=3 T=10: {:.2f} [{:.3f}, {:.3f}]", r3.rate_bpm, r3.ci_lo_bpm, r3.ci_hi_bpm));
  o.expect(r3.rate_bpm == 18.0 && std::abs(r3.ci_lo_bpm - 3.7) < 0.05 && std::abs(r3.ci_hi_bpm - 52.6) < 0.05,
           "B=3 T=10 interval");
}

// ---- pupil ----------------------------------------------------------------

void pupil_crit(Outcome& o) {
  for (double tau : {0.15, 0.3, 0.6}) {
    for (double fps : {30.0, 60.0}) {
      phantom::PirSpec spec;
      spec.fps = fps;
      spec.duration_s = 15.0;
      spec.t_stim = 3.0;
      spec.tau_s = tau;
      const auto a = pupil::pupil_analyze(phantom::synth_pir_trace(spec).trace, 3.0);
      const auto& m = a.metrics;
      const std::string tag = fmt::format("tau {} fps {}", tau, fps);
      o.expect(std::abs(m.delta - 0.15) <= 1e-3, tag + fmt::format(" delta {}", m.delta));
      o.expect(m.quality.q == 1.0, tag + fmt::format(" Q {}", m.quality.q));
      if (!m.fit) {
        o.expect(false, tag + " not fitted (" + pupil::to_string(m.fit_status) + ")");
        continue;
      }
      o.expect(std::abs(m.fit->latency_ms - spec.latency_ms) <= 1000.0 / fps,
               tag + fmt::format(" latency {:.2f} ms", m.fit->latency_ms));
      o.expect(std::abs(m.fit->tau_s - tau) <= 0.02 * tau, tag + fmt::format(" tau {:.4f}", m.fit->tau_s));
    }
  }
  // Quality gate: knock out most detections.
  pupil::PirSeries s;
  s.fps = 30;
  for (int k = 0; k < 300; ++k) {
    s.values.push_back(pupil::pir_model(k / 30.0, 0.5, 0.35, 250, 0.4, 3.0));
    s.eye_widths.push_back(100);
    s.detected.push_back(k % 4 == 0);
  }
  const auto low = pupil::plr_metrics(s, 3.0);
  o.expect(low.quality.q < 0.8 && !low.fit && low.fit_status == pupil::FitStatus::SkippedQuality,
           fmt::format("Q {:.3f} fit {}", low.quality.q, pupil::to_string(low.fit_status)));
}

// Phantom Monte Carlo reported alongside the criteria, not one of them.
std::string pupil_monte_carlo() {
  int within = 0;
  for (int seed = 1; seed <= 100; ++seed) {
    phantom::PirSpec spec;
    spec.noise_sigma = 0.02;
    spec.seed = static_cast<std::uint64_t>(seed);
    const auto a = pupil::pupil_analyze(phantom::synth_pir_trace(spec).trace, spec.t_stim);
    if (std::abs(a.metrics.delta - 0.15) <= 0.06) ++within;
  }
  return fmt::format("pupil noise 0.02 Monte Carlo (generator defaults): delta within 0.06 on {}/100 seeds (target 95)", within);
}

// ---- color indices --------------------------------------------------------

void color_crit(Outcome& o) {
  using color_indices::yellow_index;
  o.expect(yellow_index(128, 0).index == 0.0, "b=128");
  o.expect(yellow_index(144, 0).index == 0.5, "b=144");
  o.expect(yellow_index(160, 0).index == 1.0, "b=160");
  double worst = 0;
  for (double db : {0.0, 4.0, 8.0, 12.0, 16.0, 20.0}) {
    phantom::EyeSpec spec;
    spec.tint = phantom::ScleralTint{0.0, db};
    const auto r = color_indices::color_analyze(phantom::synth_eye_image(spec).image);
    worst = std::max(worst, std::abs(r.yellow_index - db / 32.0));
  }
  o.note(fmt::format("tinted phantoms: worst yellow error {:.4f}", worst));
  o.expect(worst <= 0.04, fmt::format("tint error {:.4f}", worst));

  Bgr8Image gray(3, 1);
  gray(0, 0) = {10, 10, 10};
  gray(1, 0) = {90, 90, 90};
  gray(2, 0) = {200, 200, 200};
  const auto fixed = colorspace::gray_world_correct(gray);
  o.expect(fixed.image == gray && fixed.gains.b == 1 && fixed.gains.g == 1 && fixed.gains.r == 1,
           "gray-world moved a gray image");
  const auto cast = colorspace::gray_world_correct(Bgr8Image(2, 1, Pixel3{100, 150, 200}));
  o.expect(cast.gains.b == 1.5 && cast.gains.g == 1.0 && cast.gains.r == 0.75 && cast.gains.reference_gray == 150,
           "gain arithmetic for means 100,150,200");
}

// ---- lesion ---------------------------------------------------------------

lesion::LesionMeasurement at_day(double d_mm, double day) {
  lesion::LesionMeasurement m;
  m.d_mm = d_mm;
  m.captured_at = Timestamp(std::chrono::milliseconds(static_cast<long long>(day * 86400000.0)));
  return m;
}

void lesion_crit(Outcome& o) {
  const auto c = lesion::calibration_from_radius({0, 0}, 100, lesion::CalibrationSource::Landmarks);
  o.expect(std::abs(c.lambda_mm_per_px - 0.059) < 1e-15, fmt::format("lambda {}", c.lambda_mm_per_px));
  o.expect(c.epsilon_rel >= 0.092 && c.epsilon_rel <= 0.094, fmt::format("eps {}", c.epsilon_rel));

  std::mt19937_64 rng(505);
  std::uniform_real_distribution<double> frac(0.06, 0.3), theta(-1.0, 1.0), radius(70, 110);
  std::bernoulli_distribution far_side(0.5);
  double worst = 0;
  for (int i = 0; i < 20; ++i) {
    phantom::EyeSpec spec;
    spec.width = 480;
    spec.height = 360;
    spec.iris_center = {240, 180};
    spec.iris_radius_px = radius(rng);
    double th = theta(rng);
    if (far_side(rng)) th = th > 0 ? std::numbers::pi - th : -std::numbers::pi - th;
    spec.lesion = phantom::LesionWedge{th, 0.35, frac(rng) * spec.iris_radius_px, std::nullopt};
    const auto ph = phantom::synth_eye_image(spec);
    const auto m = lesion::measure(ph.image, lesion::calibrate(ph.image, ph.truth.landmarks));
    worst = std::max(worst, std::abs(m.d_px - ph.truth.lesion_penetration_px));
  }
  o.note(fmt::format("20 wedges: worst penetration error {:.2f} px", worst));
  o.expect(worst <= 2.0, fmt::format("wedge error {:.2f} px", worst));

  const auto ph = phantom::synth_eye_image({});
  const auto h = lesion::calibrate(ph.image, std::nullopt);
  const double expected_r = 80 * 1.05;
  o.note(fmt::format("Hough radius {:.2f} (corrected; disk 80), centre ({:.2f}, {:.2f})", h.radius_px, h.center.x,
                     h.center.y));
  o.expect(h.source == lesion::CalibrationSource::Hough, "Hough not used");
  o.expect(std::abs(h.radius_px - expected_r) <= 0.04 * expected_r, "Hough radius outside 4%");
  o.expect(std::hypot(h.center.x - 200, h.center.y - 150) <= 2.0, "Hough centre outside 2 px");

  o.expect(lesion::trend_step(at_day(1.7, 0), at_day(2.0, 30)).label == lesion::TrendLabel::Increased, "increase");
  o.expect(lesion::trend_step(at_day(2.0, 0), at_day(1.95, 1)).label == lesion::TrendLabel::Stable, "stable");
  o.expect(lesion::trend_step(at_day(2.0, 0), at_day(1.7, 1)).label == lesion::TrendLabel::Decreased, "decrease");
  const std::vector<double> days{0, 100, 200};
  const auto g6 = lesion::growth_rate(days, std::vector<double>{1.0, 1.6, 2.2});
  const auto g5 = lesion::growth_rate(days, std::vector<double>{1.0, 1.5, 2.0});
  o.expect(std::abs(g6.mm_per_day - 0.006) < 1e-12 && g6.significant, "0.006 mm/day case");
  o.expect(std::abs(g5.mm_per_day - 0.005) < 1e-12 && !g5.significant, "0.005 mm/day case");
}

// ---- sessions and service -------------------------------------------------

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

void sessions_crit(Outcome& o) {
  const fs::path dir = fs::temp_directory_path() / fmt::format("ocular-accept-{}", std::random_device{}());
  fs::create_directories(dir);
  struct Cleanup {
    fs::path p;
    ~Cleanup() {
      std::error_code ec;
      fs::remove_all(p, ec);
    }
  } cleanup{dir};

  const std::string intake = R"({"consent":true,"name":"A","age":30,"pain_level":1})";
  std::string id, before;
  std::map<std::string, std::string> inputs;
  {
    phantom::EarSpec ear;
    ear.duration_s = 10;
    ear.blink_times = {2, 5, 8};
    const auto png = ingest::encode_png(phantom::synth_eye_image({.tint = phantom::ScleralTint{0, 0}}).image);
    inputs["redness"] = inputs["color"] = inputs["lesion"] = std::string(png.begin(), png.end());
    inputs["blink"] = ingest::serialize_trace(phantom::synth_ear_trace(ear).trace);
    inputs["pupil"] = ingest::serialize_trace(phantom::synth_pir_trace({}).trace);
  }
  {
    sessions::FileDocumentStore store(dir / "data");
    sessions::SessionRepository repo(store);
    service::Api api(repo);
    auto call = [&](std::string method, std::string path, std::map<std::string, std::string> form, std::string body) {
      return api.handle({std::move(method), std::move(path), std::move(form), {}, std::move(body)});
    };
    o.expect(call("POST", "/api/sessions", {}, R"({"consent":false,"age":30,"pain_level":1})").status == 403,
             "consent=false accepted");
    const auto created = call("POST", "/api/sessions", {}, intake);
    o.expect(created.status == 201, "session create failed");
    id = json::parse(created.body)["session_id"];

    std::size_t expected_entries = 0;
    for (payload::Module m : payload::kAllModules) {
      const std::string name = payload::to_string(m);
      const auto r = call("POST", "/api/analyze/" + name, {{"file", inputs[name]}, {"session_id", id}}, {});
      if (r.status != 200) {
        o.expect(false, name + " analyze status " + std::to_string(r.status) + " " + r.body);
        continue;
      }
      ++expected_entries;
      const json p = json::parse(r.body);
      const auto problems = schema::validate(payload::schema_for(m), p);
      o.expect(problems.empty(), name + " payload: " + (problems.empty() ? "" : problems.front()));
      const auto doc = repo.get(id);
      o.expect(doc.results.size() == expected_entries, name + " did not append exactly one entry");
      o.expect(!doc.results.empty() && doc.results.back().payload == p, name + " stored payload differs");
    }
    before = *store.load(id);
  }
  {
    sessions::FileDocumentStore store(dir / "data");
    sessions::SessionRepository repo(store);
    o.expect(sessions::canonical(repo.get(id)) == before, "document changed across restart");
    o.expect(slurp(dir / "data" / (id + ".json")) == before, "stored bytes differ from canonical form");
  }

  // Command line against HTTP for the same bytes.
  sessions::MemoryDocumentStore mem;
  sessions::SessionRepository repo(mem);
  service::Api api(repo);
  for (const auto& [name, bytes] : inputs) {
    const fs::path in = dir / ("in-" + name);
    const fs::path out = dir / ("out-" + name + ".json");
    std::ofstream(in, std::ios::binary) << bytes;
    std::ostringstream so, se;
    const int rc = cli::cli_main({"analyze", name, "-i", in.string(), "-o", out.string()}, so, se);
    const auto r = api.handle({"POST", "/api/analyze/" + name, {{"file", bytes}}, {}, {}});
    o.expect(rc == 0 && r.status == 200 && slurp(out) == r.body, name + ": command line and HTTP payloads differ");
  }
  o.note("no landmark adapter or other secondary component is used");
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"Colorimetry", 1, colorimetry},         {"Otsu oracle", 1, otsu},
      {"Morphology algebra", 5, morphology},   {"Redness arithmetic", 1, redness_arith},
      {"Blink", 30, blink_crit},               {"Pupil", 30, pupil_crit},
      {"Color indices", 5, color_crit},        {"Lesion", 60, lesion_crit},
      {"Sessions/service", 30, sessions_crit},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.failures.push_back(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs >= c.limit_s) o.failures.push_back(fmt::format("runtime {:.2f} s over {} s", secs, c.limit_s));
    const bool pass = o.failures.empty();
    failed += !pass;
    std::printf("%s  %-20s %7.3f s (limit %g s)\n", pass ? "PASS" : "FAIL", c.name, secs, c.limit_s);
    for (const auto& n : o.notes) std::printf("        %s\n", n.c_str());
    for (std::size_t i = 0; i < o.failures.size() && i < 5; ++i) std::printf("        x %s\n", o.failures[i].c_str());
    if (o.failures.size() > 5) std::printf("        x ... %zu more\n", o.failures.size() - 5);
  }
  std::printf("info  %s\n", pupil_monte_carlo().c_str());
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
