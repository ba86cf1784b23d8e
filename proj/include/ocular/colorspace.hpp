#pragma once

#include <cstdint>

#include "ocular/image.hpp"

namespace ocular::colorspace {

// D65 reference white used for the XYZ normalization.
inline constexpr double kWhiteX = 0.9505;
inline constexpr double kWhiteY = 1.0;
inline constexpr double kWhiteZ = 1.0890;

// Unscaled CIE L*a*b*: L* in [0,100], a*/b* centered on zero.
struct LabD {
  double L = 0.0;
  double a = 0.0;
  double b = 0.0;
};

struct ChannelGains {
  double b = 1.0;
  double g = 1.0;
  double r = 1.0;
  double reference_gray = 0.0;
};

struct GrayWorldResult {
  Bgr8Image image;
  ChannelGains gains;
};

// Float to 8-bit store: round half away from zero, then clip to [0,255].
std::uint8_t saturate_round(double v) noexcept;

double srgb_to_linear(std::uint8_t v) noexcept;

// CIE f companding function.
double lab_f(double t) noexcept;

LabD bgr_to_lab(Pixel3 bgr) noexcept;
Pixel3 quantize_lab(const LabD& lab) noexcept;
Lab8Image bgr_to_lab8(const Bgr8Image& img);

Pixel3 bgr_to_hsv(Pixel3 bgr) noexcept;
Hsv8Image bgr_to_hsv8(const Bgr8Image& img);

// Gray-world white balance with whole-frame channel means.
// Throws ZeroChannelMean when any channel averages to zero.
GrayWorldResult gray_world_correct(const Bgr8Image& img);

}  // namespace ocular::colorspace
