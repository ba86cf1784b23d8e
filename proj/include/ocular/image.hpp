#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "ocular/error.hpp"

namespace ocular {

// One 8-bit triplet. Channel meaning depends on the raster it lives in:
// (B,G,R), (L_cv,a_cv,b_cv) or (H,S,V).
struct Pixel3 {
  std::uint8_t c0 = 0;
  std::uint8_t c1 = 0;
  std::uint8_t c2 = 0;

  std::uint8_t operator[](int channel) const noexcept {
    return channel == 0 ? c0 : (channel == 1 ? c1 : c2);
  }
  auto operator<=>(const Pixel3&) const = default;
};

template <class Tag>
class Raster3 {
 public:
  Raster3(int width, int height, Pixel3 fill = {}) : width_(width), height_(height) {
    check_dims(width, height);
    data_.assign(static_cast<std::size_t>(width) * height, fill);
  }

  Raster3(int width, int height, std::vector<Pixel3> data)
      : width_(width), height_(height), data_(std::move(data)) {
    check_dims(width, height);
    if (data_.size() != static_cast<std::size_t>(width) * height) {
      throw Error(ErrorCode::InvalidArgument, "raster data size does not match dimensions");
    }
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return data_.size(); }

  Pixel3 operator()(int x, int y) const noexcept { return data_[index(x, y)]; }
  Pixel3& operator()(int x, int y) noexcept { return data_[index(x, y)]; }

  std::span<const Pixel3> pixels() const noexcept { return data_; }
  std::span<Pixel3> pixels() noexcept { return data_; }

  bool operator==(const Raster3&) const = default;

 private:
  static void check_dims(int width, int height) {
    if (width < 1 || height < 1) {
      throw Error(ErrorCode::InvalidArgument, "raster dimensions must be at least 1x1");
    }
  }
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * width_ + x;
  }

  int width_;
  int height_;
  std::vector<Pixel3> data_;
};

struct BgrTag {};
struct LabTag {};
struct HsvTag {};

using Bgr8Image = Raster3<BgrTag>;
// L_cv = L*·255/100, a_cv = a* + 128, b_cv = b* + 128.
using Lab8Image = Raster3<LabTag>;
// H in [0,179] (half degrees), S and V in [0,255].
using Hsv8Image = Raster3<HsvTag>;

// Single 8-bit plane.
class GrayPlane {
 public:
  GrayPlane(int width, int height, std::vector<std::uint8_t> values);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::uint8_t operator()(int x, int y) const noexcept {
    return values_[static_cast<std::size_t>(y) * width_ + x];
  }
  std::span<const std::uint8_t> values() const noexcept { return values_; }

 private:
  int width_;
  int height_;
  std::vector<std::uint8_t> values_;
};

template <class Tag>
GrayPlane channel_plane(const Raster3<Tag>& img, int channel) {
  std::vector<std::uint8_t> values;
  values.reserve(img.size());
  for (const Pixel3& p : img.pixels()) values.push_back(p[channel]);
  return GrayPlane(img.width(), img.height(), std::move(values));
}

// Region-of-interest raster. Immutable; the pixel count is computed once.
class BinaryMask {
 public:
  BinaryMask(int width, int height);  // all zero
  BinaryMask(int width, int height, std::vector<std::uint8_t> bits);

  template <class Pred>
  static BinaryMask from_predicate(int width, int height, Pred&& pred) {
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(width) * height);
    for (int y = 0; y < height; ++y)
      for (int x = 0; x < width; ++x)
        bits[static_cast<std::size_t>(y) * width + x] = pred(x, y) ? 1 : 0;
    return BinaryMask(width, height, std::move(bits));
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t count() const noexcept { return count_; }
  bool empty() const noexcept { return count_ == 0; }

  bool operator()(int x, int y) const noexcept {
    return bits_[static_cast<std::size_t>(y) * width_ + x] != 0;
  }
  std::span<const std::uint8_t> bits() const noexcept { return bits_; }

  BinaryMask complement() const;
  BinaryMask intersect(const BinaryMask& other) const;

  bool operator==(const BinaryMask& other) const {
    return width_ == other.width_ && height_ == other.height_ && bits_ == other.bits_;
  }

 private:
  int width_;
  int height_;
  std::vector<std::uint8_t> bits_;
  std::size_t count_ = 0;
};

}  // namespace ocular
