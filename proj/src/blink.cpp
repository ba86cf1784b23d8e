#include "ocular/blink.hpp"

#include <algorithm>
#include <cmath>

#include "ocular/error.hpp"
#include "ocular/ingest.hpp"
#include "ocular/stats.hpp"

namespace ocular::blink {

double ear(const EyeLandmarks& eye) {
  const double width = distance(eye[1], eye[4]);
  if (!(width > 0.0)) throw Error(ErrorCode::InvalidArgument, "eye landmarks have zero canthal width");
  return (distance(eye[2], eye[6]) + distance(eye[3], eye[5])) / (2.0 * width);
}

double ear_bilateral(const EyeFramePair& frame) {
  if (frame.left && frame.right) return 0.5 * (ear(*frame.left) + ear(*frame.right));
  if (frame.left) return ear(*frame.left);
  if (frame.right) return ear(*frame.right);
  throw Error(ErrorCode::NoLandmarks, "no eye landmarks in frame");
}

int smooth_window(double fps) { return std::max(1, static_cast<int>(std::round(0.04 * fps))); }
int baseline_frame_count(double fps) { return static_cast<int>(std::round(1.5 * fps)); }
int min_blink_frames(double fps) { return std::max(2, static_cast<int>(std::round(0.033 * fps))); }

EarSeries smooth(const EarSeries& series) {
  const int w = smooth_window(series.fps);
  EarSeries out = series;
  if (w == 1) return out;
  for (std::size_t k = 0; k < series.values.size(); ++k) {
    const std::size_t first = k + 1 >= static_cast<std::size_t>(w) ? k + 1 - w : 0;
    double s = 0.0;
    for (std::size_t j = first; j <= k; ++j) s += series.values[j];
    out.values[k] = s / static_cast<double>(k + 1 - first);
  }
  return out;
}

Threshold adaptive_threshold(const EarSeries& series, double alpha) {
  const int nb = baseline_frame_count(series.fps);
  if (nb < 2 || series.values.size() < static_cast<std::size_t>(nb)) {
    throw Error(ErrorCode::TooShort, "EAR series shorter than the baseline window");
  }
  const std::span<const double> base(series.values.data(), static_cast<std::size_t>(nb));
  Threshold t;
  t.baseline_frames = nb;
  t.median = stats::median(base);
  t.sigma = stats::sample_sd_about(base, t.median);
  t.tau = t.median - alpha * t.sigma;
  return t;
}

int detect_blinks(const EarSeries& series, double tau) {
  const int f_min = min_blink_frames(series.fps);
  int count = 0, run = 0;
  for (double v : series.values) {
    if (v < tau) {
      if (++run == f_min) ++count;
    } else {
      run = 0;
    }
  }
  return count;
}

RateInterval blink_rate_ci(int blink_count, double duration_s) {
  if (!(duration_s > 0.0)) throw Error(ErrorCode::NonPositiveDuration, "recording duration must be positive");
  if (blink_count < 0) throw Error(ErrorCode::InvalidArgument, "blink count must be non-negative");
  const double per_min = 60.0 / duration_s;
  RateInterval r;
  r.rate_bpm = blink_count * per_min;
  r.ci_lo_bpm = blink_count == 0 ? 0.0 : stats::chi_squared_quantile(0.025, 2.0 * blink_count) / 2.0 * per_min;
  r.ci_hi_bpm = stats::chi_squared_quantile(0.975, 2.0 * blink_count + 2.0) / 2.0 * per_min;
  return r;
}

Stratum blink_stratum(double rate_bpm) {
  if (rate_bpm < 8.0) return Stratum::HighRisk;
  if (rate_bpm < 12.0) return Stratum::Elevated;
  if (rate_bpm < 20.5) return Stratum::Normal;
  return Stratum::ElevatedIrritation;
}

std::string to_string(Stratum s) {
  switch (s) {
    case Stratum::HighRisk: return "high-risk";
    case Stratum::Elevated: return "elevated";
    case Stratum::Normal: return "normal";
    case Stratum::ElevatedIrritation: return "elevated-irritation";
  }
  return "normal";
}

std::string stratum_guidance(Stratum s) {
  switch (s) {
    case Stratum::HighRisk:
      return "low blink rate; high dry-eye risk, consider an eye-care evaluation";
    case Stratum::Elevated:
      return "blink rate below the typical adult range; monitor for dry-eye symptoms";
    case Stratum::Normal:
      return "blink rate within the typical adult range";
    case Stratum::ElevatedIrritation:
      return "blink rate above the typical adult range; possible irritation reflex, "
             "re-record with a stable head position";
  }
  return {};
}

BlinkAnalysis blink_analyze(const ingest::LandmarkTrace& trace, double alpha) {
  BlinkAnalysis out;
  out.raw.fps = trace.fps;
  out.raw.duration_s = trace.duration_s();
  for (const ingest::TraceFrame& f : trace.frames) {
    if (!f.detected || (!f.left_eye && !f.right_eye)) {
      ++out.dropped_frames;
      continue;
    }
    out.raw.values.push_back(ear_bilateral(EyeFramePair{f.left_eye, f.right_eye}));
  }
  out.smoothed = smooth(out.raw);
  const Threshold th = adaptive_threshold(out.smoothed, alpha);
  const int count = detect_blinks(out.smoothed, th.tau);
  const RateInterval rate = blink_rate_ci(count, trace.duration_s());

  BlinkResult& r = out.result;
  r.blink_count = count;
  r.rate_bpm = rate.rate_bpm;
  r.ci_lo_bpm = rate.ci_lo_bpm;
  r.ci_hi_bpm = rate.ci_hi_bpm;
  r.threshold = th.tau;
  r.baseline_median = th.median;
  r.baseline_sigma = th.sigma;
  r.baseline_frames = th.baseline_frames;
  r.min_frames = min_blink_frames(trace.fps);
  r.smooth_window = smooth_window(trace.fps);
  r.alpha = alpha;
  r.duration_s = trace.duration_s();
  r.stratum = blink_stratum(rate.rate_bpm);
  return out;
}

}  // namespace ocular::blink
