#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ocular/image.hpp"
#include "ocular/landmarks.hpp"

namespace ocular::ingest {

inline constexpr int kTraceVersion = 1;

struct TraceFrame {
  int index = 0;
  bool detected = false;
  std::optional<EyeLandmarks> left_eye;
  std::optional<EyeLandmarks> right_eye;
  std::optional<IrisLandmarks> left_iris;
  std::optional<IrisLandmarks> right_iris;

  bool operator==(const TraceFrame&) const = default;
};

// Per-frame named landmarks plus frame rate. Frame k sits at t_k = k / fps.
struct LandmarkTrace {
  double fps = 30.0;
  int frame_count = 0;
  std::vector<TraceFrame> frames;

  double duration_s() const noexcept { return frame_count / fps; }
  bool operator==(const LandmarkTrace&) const = default;
};

// JSON Lines trace. Throws SchemaViolation (detail = 1-based line number)
// or NonMonotonicFrames.
LandmarkTrace load_trace(std::string_view text);
std::string serialize_trace(const LandmarkTrace& trace);

enum class MediaKind { Photo, Trace, Unknown };
MediaKind detect_media_kind(std::span<const std::uint8_t> bytes) noexcept;

// PNG or 8-bit JPEG; alpha is dropped, gray and palette are expanded.
// Throws UnsupportedFormat or CorruptFile.
Bgr8Image decode_photo(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> encode_png(const Bgr8Image& img);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);
void write_file(const std::filesystem::path& path, std::string_view text);

inline std::string_view as_text(std::span<const std::uint8_t> bytes) noexcept {
  return {reinterpret_cast<const char*>(bytes.data()), bytes.size()};
}

}  // namespace ocular::ingest
