#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "json.hpp"
#include "ocular/landmarks.hpp"
#include "ocular/lesion.hpp"
#include "ocular/payload.hpp"
#include "ocular/timestamp.hpp"

namespace ocular::pipeline {

struct AnalysisOptions {
  std::optional<double> t_stim;
  std::optional<double> alpha;
  std::optional<lesion::SectorMode> sector;
  std::optional<IrisLandmarks> iris;  // lesion calibration; Hough when absent
};

// Earlier lesion results for the same session, oldest first. Only d_mm and
// captured_at are read.
using LesionHistory = std::span<const lesion::LesionMeasurement>;

// Decodes `bytes` for the module, runs it and returns the payload. Photo
// modules reject traces and trace modules reject photos (UnsupportedFormat).
nlohmann::json run_analysis(payload::Module module, std::span<const std::uint8_t> bytes,
                            const AnalysisOptions& options, LesionHistory history, Timestamp now);

// First detected iris in a trace, left side preferred.
std::optional<IrisLandmarks> first_iris(const ingest::LandmarkTrace& trace);

}  // namespace ocular::pipeline
