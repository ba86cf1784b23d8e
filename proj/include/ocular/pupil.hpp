#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ocular/landmarks.hpp"

namespace ocular::ingest {
struct LandmarkTrace;
}

namespace ocular::pupil {

struct IrisFrame {
  IrisLandmarks iris;
  Point2 outer_canthus;
  Point2 inner_canthus;
};

// Per-frame pupil-to-iris ratio. values[k] and eye_widths[k] are only
// meaningful where detected[k] is set.
struct PirSeries {
  double fps = 30.0;
  std::vector<double> values;
  std::vector<double> eye_widths;
  std::vector<bool> detected;

  std::size_t size() const noexcept { return values.size(); }
  double time(std::size_t k) const noexcept { return static_cast<double>(k) / fps; }
};

struct Segmentation {
  double pir_base = 0.0;
  double pir_min = 0.0;
  std::size_t k_min = 0;          // argmin frame
  std::size_t baseline_last = 0;  // last frame index inside the baseline window
  std::size_t baseline_count = 0;
};

struct QualityScore {
  double q = 0.0;
  double detect = 0.0;
  double stable = 0.0;
  double resp = 0.0;
};

struct ExponentialFit {
  double latency_ms = 0.0;
  double tau_s = 0.0;
  double residual_rms = 0.0;
  int iterations = 0;
  std::size_t limb_frames = 0;
};

enum class FitStatus { Fitted, SkippedQuality, SkippedShortLimb, NoConvergence };
std::string to_string(FitStatus s);

struct PlrMetrics {
  double pir_base = 0.0;
  double pir_min = 0.0;
  double delta = 0.0;
  double delta_rel_pct = 0.0;
  double latency_ms = 0.0;
  std::optional<double> v_mean;  // PIR per millisecond; absent at zero latency
  double v_max = 0.0;            // PIR per second
  double t_stim = 3.0;
  double t_min_s = 0.0;
  QualityScore quality;
  FitStatus fit_status = FitStatus::SkippedQuality;
  std::optional<ExponentialFit> fit;
};

struct PupilAnalysis {
  PlrMetrics metrics;
  PirSeries series;
  EyeSide eye = EyeSide::Left;
};

inline constexpr double kDefaultStimulus = 3.0;
inline constexpr double kBaselineEnd = 1.5;
inline constexpr double kFitQualityGate = 0.8;
inline constexpr std::size_t kMinLimbFrames = 8;

// 2 * iris radius / canthal width. Throws InvalidArgument for coincident canthi.
double pir(const IrisFrame& frame);

// Piecewise exponential constriction: flat at `base` until
// t_stim + latency, then decaying toward `min` with time constant tau.
double pir_model(double t, double base, double min, double latency_ms, double tau_s, double t_stim);

// Baseline over t in [3/fps, 1.5 s], minimum over t >= 1.5 s.
// Throws EmptyBaseline (fewer than 3 detected baseline frames) or TooShort.
Segmentation segment(const PirSeries& series);

QualityScore quality(const PirSeries& series, double delta_rel_pct);

// Levenberg-Marquardt over (latency, tau) with base/min held at the
// segmentation values, on the frames in [t_stim, t_min]. Throws TooShort
// for a limb under kMinLimbFrames and NoConvergence after 200 iterations.
ExponentialFit fit_exponential(const PirSeries& series, const Segmentation& seg, double t_stim);

// Amplitude, latency, velocities, quality and the quality-gated fit.
PlrMetrics plr_metrics(const PirSeries& series, double t_stim = kDefaultStimulus);

PirSeries pir_series(const ingest::LandmarkTrace& trace, EyeSide side);

// Picks the eye with the higher detection fraction (left on ties).
PupilAnalysis pupil_analyze(const ingest::LandmarkTrace& trace, double t_stim = kDefaultStimulus);

}  // namespace ocular::pupil
