#pragma once

#include <cstdint>

#include "ocular/image.hpp"

namespace ocular::imgproc {

// Full square element, side 3 or 5.
class StructuringElement {
 public:
  static StructuringElement square(int size);
  int size() const noexcept { return size_; }
  int radius() const noexcept { return size_ / 2; }

 private:
  explicit StructuringElement(int size) : size_(size) {}
  int size_;
};

inline const StructuringElement kSquare3 = StructuringElement::square(3);
inline const StructuringElement kSquare5 = StructuringElement::square(5);

enum class MorphOp { Dilate, Erode, Close };

// Pixels outside the raster are the identity of each operator: background
// for dilation, foreground for erosion.
BinaryMask morph(const BinaryMask& mask, MorphOp op, const StructuringElement& k);
inline BinaryMask dilate(const BinaryMask& m, const StructuringElement& k) {
  return morph(m, MorphOp::Dilate, k);
}
inline BinaryMask erode(const BinaryMask& m, const StructuringElement& k) {
  return morph(m, MorphOp::Erode, k);
}
inline BinaryMask close(const BinaryMask& m, const StructuringElement& k) {
  return morph(m, MorphOp::Close, k);
}

// Global Otsu threshold t over the 256-bin histogram. Pixels split into
// {v < t} and {v >= t}; ties go to the lowest t. Throws ConstantImage.
std::uint8_t otsu_threshold(const GrayPlane& plane);

struct RadiusRange {
  double min = 0.0;
  double max = 0.0;
};

struct CircleEstimate {
  double cx = 0.0;
  double cy = 0.0;
  double radius = 0.0;  // includes kHoughRadiusCorrection
  double accumulator_score = 0.0;
};

inline constexpr double kHoughRadiusCorrection = 1.05;
inline constexpr double kHoughScoreFloor = 0.25;

RadiusRange default_radius_range(int width, int height) noexcept;

// Gradient-directed circular Hough transform. The accumulator score is the
// peak vote count over the perimeter 2*pi*r; anything under the floor throws
// NoCircleFound.
CircleEstimate hough_iris(const Bgr8Image& img, RadiusRange range);
CircleEstimate hough_iris(const Bgr8Image& img);

inline constexpr int kScleraLuminanceFloor = 160;
inline constexpr int kScleraRednessCeiling = 160;

// Luminance threshold used by the redness sclera gate: max(160, Otsu(L)),
// or the floor alone when the L plane is constant.
int scleral_luminance_threshold(const Lab8Image& lab);
BinaryMask scleral_mask_luminance(const Lab8Image& lab);

BinaryMask scleral_mask_three_gate_raw(const Lab8Image& lab, const Hsv8Image& hsv);
BinaryMask scleral_mask_three_gate(const Lab8Image& lab, const Hsv8Image& hsv);

BinaryMask lesion_mask_raw(const Lab8Image& lab, const Hsv8Image& hsv);
BinaryMask lesion_mask(const Lab8Image& lab, const Hsv8Image& hsv);

}  // namespace ocular::imgproc
