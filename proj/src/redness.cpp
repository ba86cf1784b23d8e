#include "ocular/redness.hpp"

#include <algorithm>
#include <cmath>

#include "ocular/colorspace.hpp"
#include "ocular/imgproc.hpp"

namespace ocular::redness {

namespace {
double normalized(double v, const RednessConfig& c) {
  return 10.0 * std::clamp((v - c.a_low) / (c.a_high - c.a_low), 0.0, 1.0);
}
}  // namespace

ScoreBounds redness_score(double weighted_mean_a, double sigma_a, const RednessConfig& config) {
  return ScoreBounds{normalized(weighted_mean_a, config), normalized(weighted_mean_a - sigma_a, config),
                     normalized(weighted_mean_a + sigma_a, config)};
}

Triage redness_triage(double score) {
  if (score <= 2.05) return {Band::Normal, "normal", "no action needed"};
  if (score <= 4.05) return {Band::Mild, "mild", "monitor"};
  if (score <= 7.05) return {Band::Moderate, "moderate", "seek evaluation"};
  return {Band::Severe, "severe", "seek prompt ophthalmic care"};
}

RednessResult redness_analyze(const Bgr8Image& img, const RednessConfig& config) {
  const Lab8Image lab = colorspace::bgr_to_lab8(img);
  const int tau = imgproc::scleral_luminance_threshold(lab);
  const BinaryMask mask = imgproc::scleral_mask_luminance(lab);
  if (mask.count() < config.min_mask_pixels) {
    throw Error(ErrorCode::InsufficientSclera, "scleral mask has too few pixels for a redness estimate");
  }

  double weight_sum = 0.0, weighted_a = 0.0;
  const auto px = lab.pixels();
  const auto bits = mask.bits();
  for (std::size_t i = 0; i < px.size(); ++i) {
    if (!bits[i]) continue;
    weight_sum += px[i].c0;
    weighted_a += static_cast<double>(px[i].c0) * px[i].c1;
  }
  const double mean_a = weighted_a / weight_sum;

  double ss = 0.0;
  for (std::size_t i = 0; i < px.size(); ++i) {
    if (!bits[i]) continue;
    const double d = px[i].c1 - mean_a;
    ss += d * d;
  }
  const double sigma = std::sqrt(ss / static_cast<double>(mask.count()));

  const ScoreBounds s = redness_score(mean_a, sigma, config);
  RednessResult out;
  out.weighted_mean_a = mean_a;
  out.sigma_a = sigma;
  out.score = s.score;
  out.score_lo = s.lo;
  out.score_hi = s.hi;
  out.mask_pixels = mask.count();
  out.luminance_threshold = tau;
  out.triage = redness_triage(s.score);
  return out;
}

}  // namespace ocular::redness
