#include "ocular/image.hpp"

#include <algorithm>

namespace ocular {

GrayPlane::GrayPlane(int width, int height, std::vector<std::uint8_t> values)
    : width_(width), height_(height), values_(std::move(values)) {
  if (width < 1 || height < 1 || values_.size() != static_cast<std::size_t>(width) * height) {
    throw Error(ErrorCode::InvalidArgument, "gray plane dimensions do not match data");
  }
}

BinaryMask::BinaryMask(int width, int height)
    : BinaryMask(width, height, std::vector<std::uint8_t>(
                                    static_cast<std::size_t>(std::max(width, 0)) *
                                    static_cast<std::size_t>(std::max(height, 0)))) {}

BinaryMask::BinaryMask(int width, int height, std::vector<std::uint8_t> bits)
    : width_(width), height_(height), bits_(std::move(bits)) {
  if (width < 1 || height < 1 || bits_.size() != static_cast<std::size_t>(width) * height) {
    throw Error(ErrorCode::InvalidArgument, "mask dimensions do not match data");
  }
  for (auto& b : bits_) {
    b = b ? 1 : 0;
    count_ += b;
  }
}

BinaryMask BinaryMask::complement() const {
  std::vector<std::uint8_t> out(bits_.size());
  std::transform(bits_.begin(), bits_.end(), out.begin(), [](std::uint8_t b) { return b ? 0 : 1; });
  return BinaryMask(width_, height_, std::move(out));
}

BinaryMask BinaryMask::intersect(const BinaryMask& other) const {
  if (other.width_ != width_ || other.height_ != height_) {
    throw Error(ErrorCode::InvalidArgument, "mask dimensions differ");
  }
  std::vector<std::uint8_t> out(bits_.size());
  for (std::size_t i = 0; i < bits_.size(); ++i) out[i] = bits_[i] & other.bits_[i];
  return BinaryMask(width_, height_, std::move(out));
}

}  // namespace ocular
