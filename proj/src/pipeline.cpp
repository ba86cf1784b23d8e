#include "ocular/pipeline.hpp"

#include "ocular/blink.hpp"
#include "ocular/color_indices.hpp"
#include "ocular/error.hpp"
#include "ocular/ingest.hpp"
#include "ocular/pupil.hpp"
#include "ocular/redness.hpp"

namespace ocular::pipeline {

namespace {

Bgr8Image photo(std::span<const std::uint8_t> bytes, payload::Module m) {
  if (ingest::detect_media_kind(bytes) == ingest::MediaKind::Trace) {
    throw Error(ErrorCode::UnsupportedFormat, payload::to_string(m) + " analysis needs a photo, got a trace");
  }
  return ingest::decode_photo(bytes);
}

ingest::LandmarkTrace trace(std::span<const std::uint8_t> bytes, payload::Module m) {
  if (ingest::detect_media_kind(bytes) != ingest::MediaKind::Trace) {
    throw Error(ErrorCode::UnsupportedFormat, payload::to_string(m) + " analysis needs a landmark trace");
  }
  return ingest::load_trace(ingest::as_text(bytes));
}

}  // namespace

std::optional<IrisLandmarks> first_iris(const ingest::LandmarkTrace& t) {
  for (const ingest::TraceFrame& f : t.frames) {
    if (!f.detected) continue;
    if (f.left_iris) return f.left_iris;
    if (f.right_iris) return f.right_iris;
  }
  return std::nullopt;
}

nlohmann::json run_analysis(payload::Module module, std::span<const std::uint8_t> bytes,
                            const AnalysisOptions& options, LesionHistory history, Timestamp now) {
  using payload::Module;
  switch (module) {
    case Module::Redness:
      return payload::to_json(redness::redness_analyze(photo(bytes, module)));
    case Module::Color:
      return payload::to_json(color_indices::color_analyze(photo(bytes, module)));
    case Module::Blink:
      return payload::to_json(blink::blink_analyze(trace(bytes, module), options.alpha.value_or(blink::kDefaultAlpha)));
    case Module::Pupil:
      return payload::to_json(pupil::pupil_analyze(trace(bytes, module), options.t_stim.value_or(pupil::kDefaultStimulus)));
    case Module::Lesion: {
      const Bgr8Image img = photo(bytes, module);
      const lesion::IrisCalibration calib = lesion::calibrate(img, options.iris);
      lesion::LesionMeasurement m = lesion::measure(img, calib, options.sector.value_or(lesion::SectorMode::Clinical));
      m.captured_at = now;
      std::optional<lesion::TrendAssessment> trend;
      if (!history.empty()) {
        std::vector<lesion::LesionMeasurement> all(history.begin(), history.end());
        all.push_back(m);
        trend = lesion::assess_history(all);
      }
      return payload::to_json(m, trend);
    }
  }
  throw Error(ErrorCode::InvalidArgument, "unknown module");
}

}  // namespace ocular::pipeline
