#include "ocular/colorspace.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace ocular::colorspace {

namespace {

const std::array<double, 256>& linear_table() {
  static const std::array<double, 256> table = [] {
    std::array<double, 256> t{};
    for (int v = 0; v < 256; ++v) {
      const double n = v / 255.0;
      t[v] = n <= 0.04045 ? n / 12.92 : std::pow((n + 0.055) / 1.055, 2.4);
    }
    return t;
  }();
  return table;
}

constexpr double kDelta = 6.0 / 29.0;

}  // namespace

std::uint8_t saturate_round(double v) noexcept {
  if (!(v > 0.0)) return 0;  // also catches NaN
  const double r = std::round(v);
  return r >= 255.0 ? 255 : static_cast<std::uint8_t>(r);
}

double srgb_to_linear(std::uint8_t v) noexcept { return linear_table()[v]; }

double lab_f(double t) noexcept {
  if (t > kDelta * kDelta * kDelta) return std::cbrt(t);
  return t / (3.0 * kDelta * kDelta) + 4.0 / 29.0;
}

LabD bgr_to_lab(Pixel3 bgr) noexcept {
  const double b = srgb_to_linear(bgr.c0);
  const double g = srgb_to_linear(bgr.c1);
  const double r = srgb_to_linear(bgr.c2);

  const double x = 0.4124 * r + 0.3576 * g + 0.1805 * b;
  const double y = 0.2126 * r + 0.7152 * g + 0.0722 * b;
  const double z = 0.0193 * r + 0.1192 * g + 0.9505 * b;

  const double fx = lab_f(x / kWhiteX);
  const double fy = lab_f(y / kWhiteY);
  const double fz = lab_f(z / kWhiteZ);

  return LabD{116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)};
}

Pixel3 quantize_lab(const LabD& lab) noexcept {
  return Pixel3{saturate_round(lab.L * 255.0 / 100.0), saturate_round(lab.a + 128.0),
                saturate_round(lab.b + 128.0)};
}

Lab8Image bgr_to_lab8(const Bgr8Image& img) {
  Lab8Image out(img.width(), img.height());
  auto src = img.pixels();
  auto dst = out.pixels();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = quantize_lab(bgr_to_lab(src[i]));
  return out;
}

Pixel3 bgr_to_hsv(Pixel3 bgr) noexcept {
  const int b = bgr.c0, g = bgr.c1, r = bgr.c2;
  const int vmax = std::max({b, g, r});
  const int vmin = std::min({b, g, r});
  const int diff = vmax - vmin;

  Pixel3 out;
  out.c2 = static_cast<std::uint8_t>(vmax);
  if (vmax == 0 || diff == 0) return out;  // achromatic: H=0, S=0

  out.c1 = saturate_round(255.0 * diff / vmax);

  double h;
  if (vmax == r) {
    h = 60.0 * (g - b) / diff;
  } else if (vmax == g) {
    h = 120.0 + 60.0 * (b - r) / diff;
  } else {
    h = 240.0 + 60.0 * (r - g) / diff;
  }
  if (h < 0.0) h += 360.0;
  int half = static_cast<int>(std::round(h / 2.0));
  if (half >= 180) half -= 180;
  out.c0 = static_cast<std::uint8_t>(half);
  return out;
}

Hsv8Image bgr_to_hsv8(const Bgr8Image& img) {
  Hsv8Image out(img.width(), img.height());
  auto src = img.pixels();
  auto dst = out.pixels();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = bgr_to_hsv(src[i]);
  return out;
}

GrayWorldResult gray_world_correct(const Bgr8Image& img) {
  double sum_b = 0.0, sum_g = 0.0, sum_r = 0.0;
  for (const Pixel3& p : img.pixels()) {
    sum_b += p.c0;
    sum_g += p.c1;
    sum_r += p.c2;
  }
  const double n = static_cast<double>(img.size());
  const double mean_b = sum_b / n, mean_g = sum_g / n, mean_r = sum_r / n;
  if (mean_b == 0.0 || mean_g == 0.0 || mean_r == 0.0) {
    throw Error(ErrorCode::ZeroChannelMean, "gray-world correction needs non-zero channel means");
  }

  ChannelGains gains;
  gains.reference_gray = (mean_b + mean_g + mean_r) / 3.0;
  gains.b = gains.reference_gray / mean_b;
  gains.g = gains.reference_gray / mean_g;
  gains.r = gains.reference_gray / mean_r;

  Bgr8Image out = img;
  for (Pixel3& p : out.pixels()) {
    p.c0 = saturate_round(p.c0 * gains.b);
    p.c1 = saturate_round(p.c1 * gains.g);
    p.c2 = saturate_round(p.c2 * gains.r);
  }
  return GrayWorldResult{std::move(out), gains};
}

}  // namespace ocular::colorspace
