#include "ocular/lesion.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "ocular/colorspace.hpp"
#include "ocular/error.hpp"
#include "ocular/imgproc.hpp"
#include "ocular/stats.hpp"

namespace ocular::lesion {

namespace {
constexpr double kSectorHalfWidth = 4.0 * std::numbers::pi / 9.0;
}

std::string to_string(CalibrationSource s) { return s == CalibrationSource::Landmarks ? "landmarks" : "hough"; }

std::string to_string(SectorMode m) { return m == SectorMode::Clinical ? "clinical" : "literal"; }

SectorMode parse_sector_mode(std::string_view text) {
  if (text == "clinical") return SectorMode::Clinical;
  if (text == "literal") return SectorMode::Literal;
  throw Error(ErrorCode::InvalidArgument, "sector must be 'clinical' or 'literal'", std::string(text));
}

std::string to_string(Status s) {
  switch (s) {
    case Status::Absent: return "absent";
    case Status::Trace: return "trace";
    case Status::Present: return "present";
  }
  return "absent";
}

std::string to_string(TrendLabel t) {
  switch (t) {
    case TrendLabel::Increased: return "increased";
    case TrendLabel::Stable: return "stable";
    case TrendLabel::Decreased: return "decreased";
  }
  return "stable";
}

IrisCalibration calibration_from_radius(Point2 center, double radius_px, CalibrationSource source) {
  if (!(radius_px > 0.0) || !std::isfinite(radius_px)) {
    throw Error(ErrorCode::InvalidArgument, "iris radius must be positive");
  }
  IrisCalibration c;
  c.center = center;
  c.radius_px = radius_px;
  c.lambda_mm_per_px = kHvidMeanMm / (2.0 * radius_px);
  c.lambda_lo = kHvidLoMm / (2.0 * radius_px);
  c.lambda_hi = kHvidHiMm / (2.0 * radius_px);
  c.epsilon_rel = (c.lambda_hi - c.lambda_lo) / (2.0 * c.lambda_mm_per_px);
  c.source = source;
  return c;
}

IrisCalibration calibrate(const Bgr8Image& img, const std::optional<IrisLandmarks>& landmarks) {
  if (landmarks) {
    const double r = iris_radius(*landmarks);
    if (r > 0.0 && std::isfinite(r)) return calibration_from_radius(landmarks->center, r, CalibrationSource::Landmarks);
  }
  try {
    const imgproc::CircleEstimate c = imgproc::hough_iris(img);
    return calibration_from_radius({c.cx, c.cy}, c.radius, CalibrationSource::Hough);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NoCircleFound && e.code() != ErrorCode::InvalidArgument) throw;
    throw Error(ErrorCode::NoIrisFound, "no iris landmarks and no Hough circle", e.what());
  }
}

bool in_sector(double theta, SectorMode mode) noexcept {
  const double a = std::abs(theta);
  if (a <= kSectorHalfWidth) return true;
  return mode == SectorMode::Clinical && a >= std::numbers::pi - kSectorHalfWidth;
}

Status classify(double d_px, double d_mm) noexcept {
  if (!(d_px > 0.0)) return Status::Absent;
  return d_mm < kTraceThresholdMm ? Status::Trace : Status::Present;
}

LesionMeasurement measure_mask(const BinaryMask& lesion, const IrisCalibration& calib, SectorMode mode) {
  if (!(calib.radius_px > 0.0)) throw Error(ErrorCode::InvalidArgument, "calibration radius must be positive");
  const double rho_lo = kBandInner * calib.radius_px;
  const double rho_hi = kBandOuter * calib.radius_px;

  LesionMeasurement m;
  m.calibration = calib;
  m.sector = mode;
  m.lesion_pixels_total = lesion.count();
  double best = 0.0;
  for (int y = 0; y < lesion.height(); ++y) {
    for (int x = 0; x < lesion.width(); ++x) {
      if (!lesion(x, y)) continue;
      const double dx = x - calib.center.x, dy = y - calib.center.y;
      const double rho = std::hypot(dx, dy);
      if (rho < rho_lo || rho > rho_hi) continue;
      if (!in_sector(std::atan2(dy, dx), mode)) continue;
      ++m.lesion_pixels_in_band;
      best = std::max(best, calib.radius_px - rho);
    }
  }
  m.d_px = m.lesion_pixels_in_band ? best : 0.0;
  m.d_mm = m.d_px * calib.lambda_mm_per_px;
  m.d_lo_mm = m.d_px * calib.lambda_lo;
  m.d_hi_mm = m.d_px * calib.lambda_hi;
  m.status = classify(m.d_px, m.d_mm);
  return m;
}

LesionMeasurement measure(const Bgr8Image& img, const IrisCalibration& calib, SectorMode mode) {
  const Lab8Image lab = colorspace::bgr_to_lab8(img);
  const Hsv8Image hsv = colorspace::bgr_to_hsv8(img);
  return measure_mask(imgproc::lesion_mask(lab, hsv), calib, mode);
}

TrendLabel trend_label(double delta_mm) noexcept {
  if (delta_mm > kTrendBandMm) return TrendLabel::Increased;
  if (delta_mm < -kTrendBandMm) return TrendLabel::Decreased;
  return TrendLabel::Stable;
}

TrendAssessment trend_step(const LesionMeasurement& prev, const LesionMeasurement& cur) {
  if (!(prev.captured_at < cur.captured_at)) {
    throw Error(ErrorCode::NonMonotonicTimestamps, "previous measurement must precede the current one",
                format_iso8601(prev.captured_at) + " >= " + format_iso8601(cur.captured_at));
  }
  TrendAssessment t;
  t.delta_mm = cur.d_mm - prev.d_mm;
  t.delta_days = days_between(prev.captured_at, cur.captured_at);
  t.label = trend_label(t.delta_mm);
  return t;
}

GrowthRate growth_rate(std::span<const double> days, std::span<const double> d_mm) {
  if (days.size() != d_mm.size() || days.size() < 3) {
    throw Error(ErrorCode::InvalidArgument, "growth rate needs at least 3 paired points");
  }
  GrowthRate g;
  g.mm_per_day = stats::ols_slope(days, d_mm);
  g.significant = g.mm_per_day > kSignificantGrowthMmPerDay;
  return g;
}

GrowthRate growth_rate(std::span<const LesionMeasurement> history) {
  if (history.size() < 3) throw Error(ErrorCode::InvalidArgument, "growth rate needs at least 3 measurements");
  std::vector<double> days, d;
  for (const LesionMeasurement& m : history) {
    days.push_back(days_between(history.front().captured_at, m.captured_at));
    d.push_back(m.d_mm);
  }
  return growth_rate(days, d);
}

TrendAssessment assess_history(std::span<const LesionMeasurement> history) {
  if (history.size() < 2) throw Error(ErrorCode::InvalidArgument, "trend needs at least 2 measurements");
  for (std::size_t i = 1; i < history.size(); ++i) {
    if (!(history[i - 1].captured_at < history[i].captured_at)) {
      throw Error(ErrorCode::NonMonotonicTimestamps, "lesion history timestamps must increase strictly");
    }
  }
  TrendAssessment t = trend_step(history[history.size() - 2], history.back());
  if (history.size() >= 3) {
    const GrowthRate g = growth_rate(history);
    t.growth_mm_per_day = g.mm_per_day;
    t.significant = g.significant;
  }
  return t;
}

}  // namespace ocular::lesion
