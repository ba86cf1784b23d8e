#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ocular/landmarks.hpp"

namespace ocular::ingest {
struct LandmarkTrace;
}

namespace ocular::blink {

// One frame of bilateral lid landmarks; a missing side was not detected.
struct EyeFramePair {
  std::optional<EyeLandmarks> left;
  std::optional<EyeLandmarks> right;
};

struct EarSeries {
  std::vector<double> values;
  double fps = 30.0;
  double duration_s = 0.0;  // wall-clock length, frames / fps
};

struct Threshold {
  double tau = 0.0;
  double median = 0.0;
  double sigma = 0.0;
  int baseline_frames = 0;
};

struct RateInterval {
  double rate_bpm = 0.0;
  double ci_lo_bpm = 0.0;
  double ci_hi_bpm = 0.0;
};

enum class Stratum { HighRisk, Elevated, Normal, ElevatedIrritation };

struct BlinkResult {
  int blink_count = 0;
  double rate_bpm = 0.0;
  double ci_lo_bpm = 0.0;
  double ci_hi_bpm = 0.0;
  double threshold = 0.0;
  double baseline_median = 0.0;
  double baseline_sigma = 0.0;
  int min_frames = 0;
  int smooth_window = 0;
  int baseline_frames = 0;
  double alpha = 2.0;
  double duration_s = 0.0;
  Stratum stratum = Stratum::Normal;
};

struct BlinkAnalysis {
  BlinkResult result;
  EarSeries raw;
  EarSeries smoothed;
  int dropped_frames = 0;
};

inline constexpr double kDefaultAlpha = 2.0;

double ear(const EyeLandmarks& eye);

// Mean of the detected sides. Throws NoLandmarks when neither side is present.
double ear_bilateral(const EyeFramePair& frame);

int smooth_window(double fps);
int baseline_frame_count(double fps);
int min_blink_frames(double fps);

// Causal moving average; the window is truncated at the start of the series.
EarSeries smooth(const EarSeries& series);

// Median / spread of the first baseline_frame_count(fps) values. Throws TooShort.
Threshold adaptive_threshold(const EarSeries& series, double alpha = kDefaultAlpha);

// Number of maximal runs strictly below tau lasting at least min_blink_frames.
int detect_blinks(const EarSeries& series, double tau);

// Poisson rate with exact chi-squared 95% bounds. Throws NonPositiveDuration.
RateInterval blink_rate_ci(int blink_count, double duration_s);

Stratum blink_stratum(double rate_bpm);
std::string to_string(Stratum s);
std::string stratum_guidance(Stratum s);

// Full pipeline over a trace. Undetected frames are dropped from the EAR
// series; the rate still uses the trace's wall-clock duration.
BlinkAnalysis blink_analyze(const ingest::LandmarkTrace& trace, double alpha = kDefaultAlpha);

}  // namespace ocular::blink
