#include "ocular/phantom.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "ocular/blink.hpp"
#include "ocular/error.hpp"
#include "ocular/pupil.hpp"

namespace ocular::phantom {

namespace {

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorCode::InvalidSpec, what); }

constexpr Pixel3 kScleraGray{235, 235, 235};
constexpr Pixel3 kIrisColor{45, 55, 75};
constexpr int kStripBase = 60;

Point2 left_canthus() { return {100.0, 200.0}; }
Point2 right_canthus() { return {300.0, 200.0}; }

int frame_total(double fps, double duration_s) {
  if (!(fps > 0.0) || !std::isfinite(fps)) invalid("fps must be positive");
  if (!(duration_s > 0.0) || !std::isfinite(duration_s)) invalid("duration must be positive");
  const int n = static_cast<int>(std::lround(duration_s * fps));
  if (n < 1) invalid("duration shorter than one frame");
  return n;
}

IrisLandmarks iris_ring(Point2 c, double r) {
  IrisLandmarks iris;
  iris.center = c;
  iris.ring = {Point2{c.x + r, c.y}, Point2{c.x, c.y - r}, Point2{c.x - r, c.y}, Point2{c.x, c.y + r}};
  return iris;
}

using Mat3 = std::array<std::array<double, 3>, 3>;

// Inverse of the linear-RGB to XYZ matrix used by the forward transform.
const Mat3& xyz_to_rgb() {
  static const Mat3 inv = [] {
    const Mat3 m{{{0.4124, 0.3576, 0.1805}, {0.2126, 0.7152, 0.0722}, {0.0193, 0.1192, 0.9505}}};
    const double det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                       m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                       m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    Mat3 r{};
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        const int a0 = (j + 1) % 3, a1 = (j + 2) % 3, b0 = (i + 1) % 3, b1 = (i + 2) % 3;
        r[i][j] = (m[a0][b0] * m[a1][b1] - m[a0][b1] * m[a1][b0]) / det;
      }
    }
    return r;
  }();
  return inv;
}

double lab_f_inv(double f) {
  constexpr double d = 6.0 / 29.0;
  return f > d ? f * f * f : 3.0 * d * d * (f - 4.0 / 29.0);
}

double linear_to_srgb(double v) {
  v = std::clamp(v, 0.0, 1.0);
  return v <= 0.0031308 ? 12.92 * v : 1.055 * std::pow(v, 1.0 / 2.4) - 0.055;
}

}  // namespace

EyeLandmarks eye_template(Point2 p1, double ear) {
  const double gap = kTemplateWidth * ear;
  EyeLandmarks e;
  e.p[0] = p1;
  e.p[1] = {p1.x + kTemplateWidth / 3.0, p1.y - gap / 2.0};
  e.p[2] = {p1.x + 2.0 * kTemplateWidth / 3.0, p1.y - gap / 2.0};
  e.p[3] = {p1.x + kTemplateWidth, p1.y};
  e.p[4] = {p1.x + 2.0 * kTemplateWidth / 3.0, p1.y + gap / 2.0};
  e.p[5] = {p1.x + kTemplateWidth / 3.0, p1.y + gap / 2.0};
  return e;
}

EarPhantom synth_ear_trace(const EarSpec& spec) {
  const int n = frame_total(spec.fps, spec.duration_s);
  if (!(spec.baseline > 0.0) || spec.dip < 0.0 || !(spec.dip < spec.baseline)) {
    invalid("need baseline > dip >= 0");
  }
  if (spec.dip_frames < 1) invalid("dip_frames must be >= 1");
  if (spec.noise_sigma < 0.0) invalid("noise_sigma must be >= 0");

  std::vector<double> times = spec.blink_times;
  std::sort(times.begin(), times.end());
  const int window = blink::smooth_window(spec.fps);
  std::vector<double> ear(n, spec.baseline);
  int prev_end = -1;
  for (double t : times) {
    if (t < 0.0 || t > spec.duration_s) invalid(fmt::format("blink at {} s outside the record", t));
    const int start = static_cast<int>(std::lround(t * spec.fps));
    if (start + spec.dip_frames > n) invalid(fmt::format("blink at {} s runs past the end", t));
    if (prev_end >= 0 && start < prev_end + window) invalid("blinks overlap or touch after smoothing");
    std::fill(ear.begin() + start, ear.begin() + start + spec.dip_frames, spec.dip);
    prev_end = start + spec.dip_frames;
  }

  EarPhantom out;
  out.truth.blink_count = static_cast<int>(times.size());
  const bool long_enough = spec.dip_frames + window - 1 >= blink::min_blink_frames(spec.fps);
  out.truth.detectable_count = long_enough ? out.truth.blink_count : 0;
  out.truth.sub_minimal_count = out.truth.blink_count - out.truth.detectable_count;

  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  out.trace.fps = spec.fps;
  out.trace.frame_count = n;
  for (int k = 0; k < n; ++k) {
    double v = ear[k];
    if (spec.noise_sigma > 0.0) v = std::max(0.0, v + spec.noise_sigma * noise(rng));
    ear[k] = v;
    ingest::TraceFrame f;
    f.index = k;
    f.detected = true;
    f.left_eye = eye_template(left_canthus(), v);
    f.right_eye = eye_template(right_canthus(), v);
    out.trace.frames.push_back(std::move(f));
  }
  out.truth.ear = std::move(ear);
  return out;
}

PirPhantom synth_pir_trace(const PirSpec& spec) {
  const int n = frame_total(spec.fps, spec.duration_s);
  if (!(spec.min > 0.0) || spec.base < spec.min) invalid("need base >= min > 0");
  if (!(spec.tau_s > 0.0)) invalid("tau must be positive");
  if (spec.latency_ms < 0.0 || spec.t_stim < 0.0) invalid("latency and stimulus time must be >= 0");
  if (spec.t_stim + spec.latency_ms / 1000.0 > spec.duration_s) invalid("response onset beyond the record");
  if (spec.noise_sigma < 0.0) invalid("noise_sigma must be >= 0");

  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  PirPhantom out;
  out.params = spec;
  out.trace.fps = spec.fps;
  out.trace.frame_count = n;
  for (int k = 0; k < n; ++k) {
    double v = pupil::pir_model(k / spec.fps, spec.base, spec.min, spec.latency_ms, spec.tau_s, spec.t_stim);
    if (spec.noise_sigma > 0.0) v = std::max(0.0, v + spec.noise_sigma * noise(rng));
    out.pir.push_back(v);
    const double r = v * kTemplateWidth / 2.0;
    ingest::TraceFrame f;
    f.index = k;
    f.detected = true;
    f.left_eye = eye_template(left_canthus(), 0.3);
    f.right_eye = eye_template(right_canthus(), 0.3);
    f.left_iris = iris_ring({left_canthus().x + kTemplateWidth / 2.0, left_canthus().y}, r);
    f.right_iris = iris_ring({right_canthus().x + kTemplateWidth / 2.0, right_canthus().y}, r);
    out.trace.frames.push_back(std::move(f));
  }
  return out;
}

Pixel3 lab_to_bgr(const colorspace::LabD& lab) noexcept {
  const double fy = (lab.L + 16.0) / 116.0;
  const double fx = fy + lab.a / 500.0;
  const double fz = fy - lab.b / 200.0;
  const double x = colorspace::kWhiteX * lab_f_inv(fx);
  const double y = colorspace::kWhiteY * lab_f_inv(fy);
  const double z = colorspace::kWhiteZ * lab_f_inv(fz);
  const Mat3& m = xyz_to_rgb();
  const double r = m[0][0] * x + m[0][1] * y + m[0][2] * z;
  const double g = m[1][0] * x + m[1][1] * y + m[1][2] * z;
  const double b = m[2][0] * x + m[2][1] * y + m[2][2] * z;
  return Pixel3{colorspace::saturate_round(255.0 * linear_to_srgb(b)),
                colorspace::saturate_round(255.0 * linear_to_srgb(g)),
                colorspace::saturate_round(255.0 * linear_to_srgb(r))};
}

Pixel3 default_lesion_color() noexcept { return lab_to_bgr({88.0, 4.0, 20.0}); }

EyePhantom synth_eye_image(const EyeSpec& spec) {
  if (spec.width < 8 || spec.height < 8) invalid("phantom must be at least 8x8");
  const double R = spec.iris_radius_px;
  const Point2 c = spec.iris_center;
  if (!(R > 0.0)) invalid("iris radius must be positive");
  if (c.x - R < 0.0 || c.y - R < 0.0 || c.x + R > spec.width - 1 || c.y + R > spec.height - 1) {
    invalid("iris disk does not fit in the frame");
  }
  if (spec.lesion) {
    const LesionWedge& w = *spec.lesion;
    if (!(w.max_penetration_px > 0.0) || w.max_penetration_px > R) invalid("wedge penetration must be in (0, R]");
    if (!(w.theta_width > 0.0) || w.theta_width > 2.0 * std::numbers::pi) invalid("wedge width out of range");
  }

  const int strip = static_cast<int>(std::floor(std::min(c.y - R, spec.height - 1 - c.y - R) / 2.0));

  EyeTruth truth;
  truth.iris_center = c;
  truth.iris_radius_px = R;
  truth.landmarks = iris_ring(c, R);
  truth.sclera_bgr = kScleraGray;
  if (spec.tint) {
    const double L = colorspace::bgr_to_lab(kScleraGray).L;
    truth.sclera_bgr = lab_to_bgr({L, spec.tint->delta_a, spec.tint->delta_b});
  }
  truth.lesion_bgr = spec.lesion ? spec.lesion->color.value_or(default_lesion_color()) : Pixel3{};

  Bgr8Image img(spec.width, spec.height);
  std::vector<std::size_t> strip_pixels;
  for (int y = 0; y < spec.height; ++y) {
    for (int x = 0; x < spec.width; ++x) {
      const std::size_t idx = static_cast<std::size_t>(y) * spec.width + x;
      if (y < strip || y >= spec.height - strip) {
        strip_pixels.push_back(idx);
        img(x, y) = Pixel3{kStripBase, kStripBase, kStripBase};
        continue;
      }
      const double dx = x - c.x, dy = y - c.y;
      const double rho = std::hypot(dx, dy);
      if (rho > R) {
        img(x, y) = truth.sclera_bgr;
        continue;
      }
      img(x, y) = kIrisColor;
      if (!spec.lesion) continue;
      const LesionWedge& w = *spec.lesion;
      const double dtheta = std::remainder(std::atan2(dy, dx) - w.theta_center, 2.0 * std::numbers::pi);
      if (std::abs(dtheta) <= w.theta_width / 2.0 && rho >= R - w.max_penetration_px) {
        img(x, y) = truth.lesion_bgr;
        ++truth.lesion_pixels;
        truth.rasterized_penetration_px = std::max(truth.rasterized_penetration_px, R - rho);
      }
    }
  }
  if (spec.lesion) truth.lesion_penetration_px = spec.lesion->max_penetration_px;

  if (spec.tint) {
    if (strip_pixels.empty()) invalid("no room for balancing lid strips");
    // Equalize whole-frame channel sums through the strip pixels.
    std::array<long long, 3> sums{0, 0, 0};
    for (const Pixel3& p : img.pixels()) {
      for (int ch = 0; ch < 3; ++ch) sums[ch] += p[ch];
    }
    const long long top = std::max({sums[0], sums[1], sums[2]});
    const long long count = static_cast<long long>(strip_pixels.size());
    auto px = img.pixels();
    for (int ch = 0; ch < 3; ++ch) {
      const long long need = count * kStripBase + (top - sums[ch]);
      const long long each = need / count, extra = need % count;
      if (each + (extra ? 1 : 0) > 255) invalid("tint too strong to balance with the lid strips");
      for (long long i = 0; i < count; ++i) {
        const auto v = static_cast<std::uint8_t>(each + (i < extra ? 1 : 0));
        Pixel3& p = px[strip_pixels[static_cast<std::size_t>(i)]];
        if (ch == 0) p.c0 = v;
        else if (ch == 1) p.c1 = v;
        else p.c2 = v;
      }
    }
  }
  return EyePhantom{std::move(img), std::move(truth)};
}

}  // namespace ocular::phantom
