#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ocular/colorspace.hpp"
#include "ocular/image.hpp"
#include "ocular/ingest.hpp"
#include "ocular/landmarks.hpp"

namespace ocular::phantom {

// Canonical eye template: canthi 100 px apart, lids at 1/3 and 2/3 of the span.
inline constexpr double kTemplateWidth = 100.0;

struct EarSpec {
  double fps = 30.0;
  double duration_s = 30.0;
  std::vector<double> blink_times;  // dip onsets, seconds
  double baseline = 0.3;
  double dip = 0.05;
  int dip_frames = 4;
  double noise_sigma = 0.0;  // EAR units
  std::uint64_t seed = 0;
};

struct EarTruth {
  int blink_count = 0;       // every synthesized dip
  int detectable_count = 0;  // dips long enough to survive the minimum-duration rule
  int sub_minimal_count = 0;
  std::vector<double> ear;   // target waveform, noise included
};

struct EarPhantom {
  ingest::LandmarkTrace trace;
  EarTruth truth;
};

// Throws InvalidSpec.
EarPhantom synth_ear_trace(const EarSpec& spec);

// Both eyes share one template per frame; vertical lid gap = 100 * ear.
EyeLandmarks eye_template(Point2 outer_canthus, double ear);

struct PirSpec {
  double fps = 30.0;
  double duration_s = 5.0;
  double base = 0.5;
  double min = 0.35;
  double tau_s = 0.4;
  double latency_ms = 250.0;
  double t_stim = 1.5;
  double noise_sigma = 0.0;  // PIR units
  std::uint64_t seed = 0;
};

struct PirPhantom {
  ingest::LandmarkTrace trace;
  std::vector<double> pir;  // target series, noise included
  PirSpec params;
};

// Throws InvalidSpec.
PirPhantom synth_pir_trace(const PirSpec& spec);

struct LesionWedge {
  double theta_center = 0.0;  // radians, image-space atan2 convention
  double theta_width = 0.5;   // full angular width, radians
  double max_penetration_px = 20.0;
  std::optional<Pixel3> color;  // BGR; defaults to a tone passing the lesion gates
};

struct ScleralTint {
  double delta_a = 0.0;  // 8-bit LAB offsets from neutral
  double delta_b = 0.0;
};

struct EyeSpec {
  int width = 400;
  int height = 300;
  Point2 iris_center{200.0, 150.0};
  double iris_radius_px = 80.0;
  std::optional<LesionWedge> lesion;
  std::optional<ScleralTint> tint;
};

struct EyeTruth {
  Point2 iris_center;
  double iris_radius_px = 0.0;
  IrisLandmarks landmarks;
  double lesion_penetration_px = 0.0;    // as requested
  double rasterized_penetration_px = 0.0;  // max over painted wedge pixels
  std::size_t lesion_pixels = 0;
  Pixel3 sclera_bgr;
  Pixel3 lesion_bgr;
};

struct EyePhantom {
  Bgr8Image image;
  EyeTruth truth;
};

// White sclera, dark iris disk, dark lid strips top and bottom. A tint is
// balanced by the strips so whole-frame channel means stay equal.
// Throws InvalidSpec.
EyePhantom synth_eye_image(const EyeSpec& spec);

// Inverse of bgr_to_lab, rounded to 8 bits.
Pixel3 lab_to_bgr(const colorspace::LabD& lab) noexcept;

Pixel3 default_lesion_color() noexcept;

}  // namespace ocular::phantom
