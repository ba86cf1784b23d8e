#pragma once

#include <cstddef>
#include <string>

#include "ocular/colorspace.hpp"
#include "ocular/image.hpp"

namespace ocular::color_indices {

struct ColorConfig {
  std::size_t min_mask_pixels = 50;
  double yellow_flag = 0.3;  // index at or above which evaluation is suggested
  double pallor_flag = 0.3;
};

struct YellowIndex {
  double index = 0.0;
  double lo = 0.0;
  double hi = 0.0;
};

struct PallorIndex {
  double index = 0.0;
  double l_term = 0.0;
  double a_term = 0.0;
};

struct ColorIndexResult {
  double yellow_index = 0.0;
  double yellow_lo = 0.0;
  double yellow_hi = 0.0;
  double pallor_index = 0.0;
  double mean_b = 0.0;
  double sigma_b = 0.0;
  double mean_L = 0.0;
  double mean_a = 0.0;
  double l_term = 0.0;
  double a_term = 0.0;
  colorspace::ChannelGains gains;
  std::size_t mask_pixels = 0;
  bool yellow_flagged = false;
  bool pallor_flagged = false;
  std::string triage;
};

YellowIndex yellow_index(double mean_b, double sigma_b);
PallorIndex pallor_index(double mean_L, double mean_a);
std::string color_triage(double yellow, double pallor, const ColorConfig& config = {});

// Gray-world correction, then unweighted LAB statistics over the three-gate
// sclera mask. Throws InsufficientSclera or ZeroChannelMean.
ColorIndexResult color_analyze(const Bgr8Image& img, const ColorConfig& config = {});

}  // namespace ocular::color_indices
