#include "ocular/color_indices.hpp"

#include <algorithm>
#include <cmath>

#include "ocular/imgproc.hpp"

namespace ocular::color_indices {

namespace {
double unit_clip(double v) { return std::clamp(v, 0.0, 1.0); }
}  // namespace

YellowIndex yellow_index(double mean_b, double sigma_b) {
  return YellowIndex{unit_clip((mean_b - 128.0) / 32.0), unit_clip((mean_b - sigma_b - 128.0) / 32.0),
                     unit_clip((mean_b + sigma_b - 128.0) / 32.0)};
}

PallorIndex pallor_index(double mean_L, double mean_a) {
  PallorIndex p;
  p.l_term = unit_clip((mean_L - 200.0) / 40.0);
  p.a_term = 1.0 - unit_clip((mean_a - 120.0) / 20.0);
  p.index = 0.5 * p.l_term + 0.5 * p.a_term;
  return p;
}

std::string color_triage(double yellow, double pallor, const ColorConfig& config) {
  const bool y = yellow >= config.yellow_flag;
  const bool p = pallor >= config.pallor_flag;
  if (y && p) return "scleral yellowing and pallor indices elevated; recommend clinical evaluation";
  if (y) return "scleral yellowing index elevated; recommend clinical evaluation";
  if (p) return "pallor index elevated; recommend clinical evaluation";
  return "color indices unremarkable";
}

ColorIndexResult color_analyze(const Bgr8Image& img, const ColorConfig& config) {
  const colorspace::GrayWorldResult corrected = colorspace::gray_world_correct(img);
  const Lab8Image lab = colorspace::bgr_to_lab8(corrected.image);
  const Hsv8Image hsv = colorspace::bgr_to_hsv8(corrected.image);
  const BinaryMask mask = imgproc::scleral_mask_three_gate(lab, hsv);
  if (mask.count() < config.min_mask_pixels) {
    throw Error(ErrorCode::InsufficientSclera, "three-gate scleral mask has too few pixels");
  }

  double sum_L = 0.0, sum_a = 0.0, sum_b = 0.0;
  const auto px = lab.pixels();
  const auto bits = mask.bits();
  for (std::size_t i = 0; i < px.size(); ++i) {
    if (!bits[i]) continue;
    sum_L += px[i].c0;
    sum_a += px[i].c1;
    sum_b += px[i].c2;
  }
  const double n = static_cast<double>(mask.count());
  ColorIndexResult out;
  out.mean_L = sum_L / n;
  out.mean_a = sum_a / n;
  out.mean_b = sum_b / n;

  double ss = 0.0;
  for (std::size_t i = 0; i < px.size(); ++i) {
    if (!bits[i]) continue;
    const double d = px[i].c2 - out.mean_b;
    ss += d * d;
  }
  out.sigma_b = std::sqrt(ss / n);

  const YellowIndex y = yellow_index(out.mean_b, out.sigma_b);
  const PallorIndex p = pallor_index(out.mean_L, out.mean_a);
  out.yellow_index = y.index;
  out.yellow_lo = y.lo;
  out.yellow_hi = y.hi;
  out.pallor_index = p.index;
  out.l_term = p.l_term;
  out.a_term = p.a_term;
  out.gains = corrected.gains;
  out.mask_pixels = mask.count();
  out.yellow_flagged = y.index >= config.yellow_flag;
  out.pallor_flagged = p.index >= config.pallor_flag;
  out.triage = color_triage(y.index, p.index, config);
  return out;
}

}  // namespace ocular::color_indices
