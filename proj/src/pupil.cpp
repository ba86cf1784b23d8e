#include "ocular/pupil.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ocular/error.hpp"
#include "ocular/ingest.hpp"
#include "ocular/stats.hpp"

namespace ocular::pupil {

namespace {
constexpr double kTimeSlack = 1e-9;
constexpr int kMaxIterations = 200;
constexpr double kStepTolerance = 1e-8;
}  // namespace

std::string to_string(FitStatus s) {
  switch (s) {
    case FitStatus::Fitted: return "fitted";
    case FitStatus::SkippedQuality: return "skipped-quality";
    case FitStatus::SkippedShortLimb: return "skipped-short-limb";
    case FitStatus::NoConvergence: return "no-convergence";
  }
  return "skipped-quality";
}

double pir(const IrisFrame& frame) {
  const double width = distance(frame.outer_canthus, frame.inner_canthus);
  if (!(width > 0.0)) throw Error(ErrorCode::InvalidArgument, "canthal landmarks coincide");
  return 2.0 * iris_radius(frame.iris) / width;
}

double pir_model(double t, double base, double min, double latency_ms, double tau_s, double t_stim) {
  const double onset = t_stim + latency_ms / 1000.0;
  if (t <= onset) return base;
  return min + (base - min) * std::exp(-(t - onset) / tau_s);
}

Segmentation segment(const PirSeries& series) {
  const std::size_t n = series.size();
  Segmentation seg;
  double sum = 0.0;
  bool any_window = false;
  for (std::size_t k = 3; k < n; ++k) {
    if (series.time(k) > kBaselineEnd + kTimeSlack) break;
    any_window = true;
    seg.baseline_last = k;
    if (!series.detected[k]) continue;
    sum += series.values[k];
    ++seg.baseline_count;
  }
  if (!any_window || series.time(n - 1) <= kBaselineEnd) {
    throw Error(ErrorCode::TooShort, "PIR series must extend beyond the 1.5 s baseline");
  }
  if (seg.baseline_count < 3) {
    throw Error(ErrorCode::EmptyBaseline, "fewer than 3 detected frames in the baseline window");
  }
  seg.pir_base = sum / static_cast<double>(seg.baseline_count);

  bool found = false;
  for (std::size_t k = 0; k < n; ++k) {
    if (series.time(k) < kBaselineEnd - kTimeSlack || !series.detected[k]) continue;
    if (!found || series.values[k] < seg.pir_min) {
      seg.pir_min = series.values[k];
      seg.k_min = k;
      found = true;
    }
  }
  if (!found) throw Error(ErrorCode::TooShort, "no detected frames after the baseline window");
  return seg;
}

QualityScore quality(const PirSeries& series, double delta_rel_pct) {
  QualityScore q;
  std::vector<double> widths;
  std::size_t detected = 0;
  for (std::size_t k = 0; k < series.size(); ++k) {
    if (!series.detected[k]) continue;
    ++detected;
    widths.push_back(series.eye_widths[k]);
  }
  q.detect = series.size() ? static_cast<double>(detected) / series.size() : 0.0;
  if (!widths.empty()) {
    const double m = stats::mean(widths);
    const double cv = m > 0.0 ? stats::population_sd(widths) / m : 1.0;
    q.stable = 1.0 - std::clamp(cv, 0.0, 1.0);
  }
  q.resp = delta_rel_pct > 5.0 ? 1.0 : 0.0;
  q.q = (q.detect + q.stable + q.resp) / 3.0;
  return q;
}

ExponentialFit fit_exponential(const PirSeries& series, const Segmentation& seg, double t_stim) {
  // Constriction limb frames, undetected ones linearly interpolated.
  std::vector<double> t, y;
  for (std::size_t k = 0; k <= seg.k_min && k < series.size(); ++k) {
    if (series.time(k) < t_stim - kTimeSlack) continue;
    double v;
    if (series.detected[k]) {
      v = series.values[k];
    } else {
      std::ptrdiff_t lo = static_cast<std::ptrdiff_t>(k) - 1;
      std::size_t hi = k + 1;
      while (lo >= 0 && !series.detected[lo]) --lo;
      while (hi < series.size() && !series.detected[hi]) ++hi;
      if (lo < 0 && hi >= series.size()) continue;
      if (lo < 0) {
        v = series.values[hi];
      } else if (hi >= series.size()) {
        v = series.values[lo];
      } else {
        const double w = static_cast<double>(k - lo) / static_cast<double>(hi - lo);
        v = (1.0 - w) * series.values[lo] + w * series.values[hi];
      }
    }
    t.push_back(series.time(k));
    y.push_back(v);
  }
  if (t.size() < kMinLimbFrames) throw Error(ErrorCode::TooShort, "constriction limb too short to fit");

  const double base = seg.pir_base, amp = seg.pir_base - seg.pir_min;

  auto cost = [&](double latency, double tau) {
    double c = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
      const double r = pir_model(t[i], base, seg.pir_min, latency, tau, t_stim) - y[i];
      c += r * r;
    }
    return c;
  };

  double latency = (series.time(seg.k_min) - t_stim) / 2.0 * 1000.0;
  double tau = 0.3;
  double lambda = 1e-3;
  double current = cost(latency, tau);

  ExponentialFit fit;
  fit.limb_frames = t.size();
  bool converged = false;
  int iter = 0;
  for (; iter < kMaxIterations; ++iter) {
    // Normal equations J^T J and gradient J^T r for the two parameters.
    double a11 = 0.0, a12 = 0.0, a22 = 0.0, g1 = 0.0, g2 = 0.0;
    const double onset = t_stim + latency / 1000.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
      const double r = pir_model(t[i], base, seg.pir_min, latency, tau, t_stim) - y[i];
      if (t[i] <= onset) continue;
      const double e = amp * std::exp(-(t[i] - onset) / tau);
      const double dl = e / (1000.0 * tau);
      const double dt = e * (t[i] - onset) / (tau * tau);
      a11 += dl * dl;
      a12 += dl * dt;
      a22 += dt * dt;
      g1 += dl * r;
      g2 += dt * r;
    }
    if (current == 0.0 || (g1 == 0.0 && g2 == 0.0 && a11 + a22 > 0.0)) {
      converged = true;
      break;
    }

    bool accepted = false;
    double step_norm = 0.0;
    for (int tries = 0; tries < 40; ++tries) {
      const double m11 = a11 + lambda * (a11 > 0 ? a11 : 1.0);
      const double m22 = a22 + lambda * (a22 > 0 ? a22 : 1.0);
      const double det = m11 * m22 - a12 * a12;
      if (!(std::abs(det) > 0.0)) {
        lambda *= 10.0;
        continue;
      }
      const double dl = -(m22 * g1 - a12 * g2) / det;
      const double dtau = -(m11 * g2 - a12 * g1) / det;
      const double nl = latency + dl, nt = tau + dtau;
      if (nt > 0.0 && std::isfinite(nl)) {
        const double next = cost(nl, nt);
        if (next < current) {
          latency = nl;
          tau = nt;
          current = next;
          step_norm = std::hypot(dl, dtau);
          lambda = std::max(lambda / 10.0, 1e-12);
          accepted = true;
          break;
        }
      }
      lambda *= 10.0;
    }
    // No damped step reduces the cost: the current point is stationary.
    if (!accepted || step_norm < kStepTolerance) {
      converged = true;
      ++iter;
      break;
    }
  }
  if (!converged) throw Error(ErrorCode::NoConvergence, "exponential fit did not converge");

  fit.latency_ms = latency;
  fit.tau_s = tau;
  fit.iterations = iter;
  fit.residual_rms = std::sqrt(current / static_cast<double>(t.size()));
  return fit;
}

PlrMetrics plr_metrics(const PirSeries& series, double t_stim) {
  const Segmentation seg = segment(series);
  PlrMetrics m;
  m.t_stim = t_stim;
  m.pir_base = seg.pir_base;
  m.pir_min = seg.pir_min;
  m.delta = seg.pir_base - seg.pir_min;
  m.delta_rel_pct = m.delta / seg.pir_base * 100.0;
  m.t_min_s = series.time(seg.k_min);
  m.latency_ms = (m.t_min_s - t_stim) * 1000.0;
  if (m.latency_ms != 0.0) m.v_mean = m.delta / m.latency_ms;

  for (std::size_t k = seg.baseline_last + 1; k < series.size(); ++k) {
    if (!series.detected[k] || !series.detected[k - 1]) continue;
    m.v_max = std::max(m.v_max, std::abs((series.values[k] - series.values[k - 1]) * series.fps));
  }

  m.quality = quality(series, m.delta_rel_pct);
  if (m.quality.q < kFitQualityGate) {
    m.fit_status = FitStatus::SkippedQuality;
    return m;
  }
  try {
    m.fit = fit_exponential(series, seg, t_stim);
    m.fit_status = FitStatus::Fitted;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::TooShort) {
      m.fit_status = FitStatus::SkippedShortLimb;
    } else if (e.code() == ErrorCode::NoConvergence) {
      m.fit_status = FitStatus::NoConvergence;
    } else {
      throw;
    }
  }
  return m;
}

PirSeries pir_series(const ingest::LandmarkTrace& trace, EyeSide side) {
  PirSeries s;
  s.fps = trace.fps;
  for (const ingest::TraceFrame& f : trace.frames) {
    const auto& eye = side == EyeSide::Left ? f.left_eye : f.right_eye;
    const auto& iris = side == EyeSide::Left ? f.left_iris : f.right_iris;
    double value = std::numeric_limits<double>::quiet_NaN(), width = value;
    bool ok = false;
    if (f.detected && eye && iris) {
      const IrisFrame frame{*iris, (*eye)[1], (*eye)[4]};
      width = distance(frame.outer_canthus, frame.inner_canthus);
      if (width > 0.0) {
        value = pir(frame);
        ok = true;
      }
    }
    s.values.push_back(value);
    s.eye_widths.push_back(width);
    s.detected.push_back(ok);
  }
  return s;
}

PupilAnalysis pupil_analyze(const ingest::LandmarkTrace& trace, double t_stim) {
  PirSeries left = pir_series(trace, EyeSide::Left);
  PirSeries right = pir_series(trace, EyeSide::Right);
  const auto score = [](const PirSeries& s) { return std::count(s.detected.begin(), s.detected.end(), true); };

  PupilAnalysis out;
  if (score(right) > score(left)) {
    out.eye = EyeSide::Right;
    out.series = std::move(right);
  } else {
    out.eye = EyeSide::Left;
    out.series = std::move(left);
  }
  if (score(out.series) == 0) throw Error(ErrorCode::NoLandmarks, "no frame has iris and canthal landmarks");
  out.metrics = plr_metrics(out.series, t_stim);
  return out;
}

}  // namespace ocular::pupil
