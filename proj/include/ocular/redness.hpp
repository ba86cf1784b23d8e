#pragma once

#include <cstddef>
#include <string>

#include "ocular/image.hpp"

namespace ocular::redness {

struct RednessConfig {
  double a_low = 120.0;   // a_cv that maps to score 0
  double a_high = 150.0;  // a_cv that maps to score 10
  std::size_t min_mask_pixels = 50;
};

enum class Band { Normal, Mild, Moderate, Severe };

struct Triage {
  Band band = Band::Normal;
  std::string label;     // "normal", "mild", ...
  std::string guidance;  // "monitor", "seek evaluation", ...
};

struct ScoreBounds {
  double score = 0.0;
  double lo = 0.0;
  double hi = 0.0;
};

struct RednessResult {
  double weighted_mean_a = 0.0;  // luminance-weighted mean a_cv over the mask
  double sigma_a = 0.0;          // unweighted spread about that mean
  double score = 0.0;
  double score_lo = 0.0;
  double score_hi = 0.0;
  std::size_t mask_pixels = 0;
  int luminance_threshold = 0;
  Triage triage;
};

ScoreBounds redness_score(double weighted_mean_a, double sigma_a, const RednessConfig& config = {});

// Band edges sit midway between the published decimal bands, and an edge
// value belongs to the lower band: [0,2.05] (2.05,4.05] (4.05,7.05] (7.05,10].
Triage redness_triage(double score);

// Throws InsufficientSclera when the luminance-gated mask is below the floor.
RednessResult redness_analyze(const Bgr8Image& img, const RednessConfig& config = {});

}  // namespace ocular::redness
