#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>

#include "ocular/image.hpp"
#include "ocular/landmarks.hpp"
#include "ocular/timestamp.hpp"

namespace ocular::lesion {

inline constexpr double kHvidMeanMm = 11.8;
inline constexpr double kHvidLoMm = 10.7;
inline constexpr double kHvidHiMm = 12.9;
inline constexpr double kBandInner = 0.65;
inline constexpr double kBandOuter = 0.98;
inline constexpr double kTraceThresholdMm = 0.5;
inline constexpr double kTrendBandMm = 0.2;
inline constexpr double kSignificantGrowthMmPerDay = 0.005;

enum class CalibrationSource { Landmarks, Hough };
std::string to_string(CalibrationSource s);

struct IrisCalibration {
  Point2 center;
  double radius_px = 0.0;
  double lambda_mm_per_px = 0.0;
  double lambda_lo = 0.0;
  double lambda_hi = 0.0;
  double epsilon_rel = 0.0;
  CalibrationSource source = CalibrationSource::Landmarks;
};

// Literal: |theta| <= 80 deg only. Clinical adds the mirrored |theta| >= 100 deg.
enum class SectorMode { Clinical, Literal };
std::string to_string(SectorMode m);
SectorMode parse_sector_mode(std::string_view text);  // InvalidArgument

enum class Status { Absent, Trace, Present };
std::string to_string(Status s);

struct LesionMeasurement {
  double d_px = 0.0;
  double d_mm = 0.0;
  double d_lo_mm = 0.0;
  double d_hi_mm = 0.0;
  Status status = Status::Absent;
  std::size_t lesion_pixels_in_band = 0;
  std::size_t lesion_pixels_total = 0;
  IrisCalibration calibration;
  SectorMode sector = SectorMode::Clinical;
  Timestamp captured_at{};
};

enum class TrendLabel { Increased, Stable, Decreased };
std::string to_string(TrendLabel t);

struct TrendAssessment {
  double delta_mm = 0.0;
  double delta_days = 0.0;
  TrendLabel label = TrendLabel::Stable;
  std::optional<double> growth_mm_per_day;
  std::optional<bool> significant;
};

struct GrowthRate {
  double mm_per_day = 0.0;
  bool significant = false;
};

IrisCalibration calibration_from_radius(Point2 center, double radius_px, CalibrationSource source);

// Landmarks when given and non-degenerate, else the Hough fallback.
// Throws NoIrisFound when neither yields a circle.
IrisCalibration calibrate(const Bgr8Image& img, const std::optional<IrisLandmarks>& landmarks);

bool in_sector(double theta, SectorMode mode) noexcept;
Status classify(double d_px, double d_mm) noexcept;

// Band, sector and max-penetration over an already segmented lesion mask.
LesionMeasurement measure_mask(const BinaryMask& lesion, const IrisCalibration& calib,
                               SectorMode mode = SectorMode::Clinical);
LesionMeasurement measure(const Bgr8Image& img, const IrisCalibration& calib,
                          SectorMode mode = SectorMode::Clinical);

TrendLabel trend_label(double delta_mm) noexcept;
// Throws NonMonotonicTimestamps unless prev precedes cur.
TrendAssessment trend_step(const LesionMeasurement& prev, const LesionMeasurement& cur);

// Needs >= 3 points. Throws InvalidArgument or DegenerateTimeAxis.
GrowthRate growth_rate(std::span<const double> days, std::span<const double> d_mm);
GrowthRate growth_rate(std::span<const LesionMeasurement> history);

// Trend across a time-ordered history: the last step, plus growth once
// >= 3 points exist. Needs >= 2 entries.
TrendAssessment assess_history(std::span<const LesionMeasurement> history);

}  // namespace ocular::lesion
