#include "ocular/ingest.hpp"

#include <fmt/format.h>
#include <jpeglib.h>
#include <png.h>

#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <fstream>
#include "json.hpp"

#include "ocular/error.hpp"

namespace ocular::ingest {

using nlohmann::json;

namespace {

[[noreturn]] void schema(std::size_t line, const std::string& what) {
  throw Error(ErrorCode::SchemaViolation, fmt::format("trace line {}: {}", line, what), std::to_string(line));
}

Point2 parse_point(const json& j, std::size_t line, const char* field) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    schema(line, fmt::format("'{}' must be [x, y]", field));
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

EyeLandmarks parse_eye(const json& j, std::size_t line, const char* group) {
  if (!j.is_object()) schema(line, fmt::format("'{}' must be an object", group));
  EyeLandmarks eye;
  for (int i = 0; i < 6; ++i) {
    const std::string key = fmt::format("p{}", i + 1);
    const auto it = j.find(key);
    if (it == j.end()) schema(line, fmt::format("'{}' lacks '{}'", group, key));
    eye.p[i] = parse_point(*it, line, key.c_str());
  }
  return eye;
}

IrisLandmarks parse_iris(const json& j, std::size_t line, const char* group) {
  if (!j.is_object() || !j.contains("c") || !j.contains("r")) {
    schema(line, fmt::format("'{}' needs 'c' and 'r'", group));
  }
  IrisLandmarks iris;
  iris.center = parse_point(j["c"], line, "c");
  const json& r = j["r"];
  if (!r.is_array() || r.size() != 4) schema(line, fmt::format("'{}.r' must hold 4 points", group));
  for (int i = 0; i < 4; ++i) iris.ring[i] = parse_point(r[i], line, "r");
  return iris;
}

json point_json(Point2 p) { return json::array({p.x, p.y}); }

json eye_json(const EyeLandmarks& e) {
  json j = json::object();
  for (int i = 0; i < 6; ++i) j[fmt::format("p{}", i + 1)] = point_json(e.p[i]);
  return j;
}

json iris_json(const IrisLandmarks& iris) {
  json r = json::array();
  for (const Point2& p : iris.ring) r.push_back(point_json(p));
  return json{{"c", point_json(iris.center)}, {"r", r}};
}

}  // namespace

LandmarkTrace load_trace(std::string_view text) {
  LandmarkTrace trace;
  bool have_header = false;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) {
      if (end == text.size()) break;
      continue;
    }

    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) schema(line_no, "not a JSON object");
    const auto kind = j.find("kind");
    if (kind == j.end() || !kind->is_string()) schema(line_no, "missing 'kind'");

    if (!have_header) {
      if (*kind != "header") schema(line_no, "first record must be the header");
      const auto version = j.find("version");
      if (version == j.end() || !version->is_number_integer() || version->get<int>() != kTraceVersion) {
        schema(line_no, fmt::format("'version' must be {}", kTraceVersion));
      }
      const auto fps = j.find("fps");
      if (fps == j.end() || !fps->is_number() || !(fps->get<double>() > 0.0)) {
        schema(line_no, "'fps' must be a positive number");
      }
      const auto frames = j.find("frames");
      if (frames == j.end() || !frames->is_number_integer() || frames->get<long long>() < 0) {
        schema(line_no, "'frames' must be a non-negative integer");
      }
      trace.fps = fps->get<double>();
      trace.frame_count = frames->get<int>();
      have_header = true;
      continue;
    }

    if (*kind != "frame") schema(line_no, "expected a frame record");
    TraceFrame f;
    const auto index = j.find("index");
    if (index == j.end() || !index->is_number_integer()) schema(line_no, "'index' must be an integer");
    const auto detected = j.find("detected");
    if (detected == j.end() || !detected->is_boolean()) schema(line_no, "'detected' must be a boolean");
    f.index = index->get<int>();
    f.detected = detected->get<bool>();
    if (!trace.frames.empty() && f.index <= trace.frames.back().index) {
      throw Error(ErrorCode::NonMonotonicFrames,
                  fmt::format("frame index {} does not follow {}", f.index, trace.frames.back().index),
                  std::to_string(line_no));
    }
    if (f.index != static_cast<int>(trace.frames.size())) {
      schema(line_no, fmt::format("frame index {} leaves a gap", f.index));
    }
    if (f.index >= trace.frame_count) schema(line_no, "frame index beyond the declared frame count");

    if (const auto it = j.find("left_eye"); it != j.end()) f.left_eye = parse_eye(*it, line_no, "left_eye");
    if (const auto it = j.find("right_eye"); it != j.end()) f.right_eye = parse_eye(*it, line_no, "right_eye");
    if (const auto it = j.find("left_iris"); it != j.end()) f.left_iris = parse_iris(*it, line_no, "left_iris");
    if (const auto it = j.find("right_iris"); it != j.end()) f.right_iris = parse_iris(*it, line_no, "right_iris");
    if (f.detected && !f.left_eye && !f.right_eye && !f.left_iris && !f.right_iris) {
      schema(line_no, "detected frame carries no landmark group");
    }
    trace.frames.push_back(std::move(f));
  }
  if (!have_header) schema(1, "missing header record");
  if (static_cast<int>(trace.frames.size()) != trace.frame_count) {
    schema(line_no, fmt::format("header declares {} frames, found {}", trace.frame_count, trace.frames.size()));
  }
  return trace;
}

std::string serialize_trace(const LandmarkTrace& trace) {
  std::string out = json{{"kind", "header"}, {"version", kTraceVersion}, {"fps", trace.fps},
                         {"frames", trace.frame_count}}
                        .dump();
  out += '\n';
  for (const TraceFrame& f : trace.frames) {
    json j{{"kind", "frame"}, {"index", f.index}, {"detected", f.detected}};
    if (f.left_eye) j["left_eye"] = eye_json(*f.left_eye);
    if (f.right_eye) j["right_eye"] = eye_json(*f.right_eye);
    if (f.left_iris) j["left_iris"] = iris_json(*f.left_iris);
    if (f.right_iris) j["right_iris"] = iris_json(*f.right_iris);
    out += j.dump();
    out += '\n';
  }
  return out;
}

MediaKind detect_media_kind(std::span<const std::uint8_t> bytes) noexcept {
  static constexpr std::uint8_t png_sig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  if (bytes.size() >= 8 && std::memcmp(bytes.data(), png_sig, 8) == 0) return MediaKind::Photo;
  if (bytes.size() >= 3 && bytes[0] == 0xff && bytes[1] == 0xd8 && bytes[2] == 0xff) return MediaKind::Photo;
  for (std::uint8_t b : bytes) {
    if (b == ' ' || b == '\t' || b == '\r' || b == '\n') continue;
    return b == '{' ? MediaKind::Trace : MediaKind::Unknown;
  }
  return MediaKind::Unknown;
}

namespace {

struct PngReader {
  std::span<const std::uint8_t> data;
  std::size_t offset = 0;
};

void png_read_cb(png_structp png, png_bytep out, png_size_t len) {
  auto* r = static_cast<PngReader*>(png_get_io_ptr(png));
  if (r->offset + len > r->data.size()) png_error(png, "truncated PNG");
  std::memcpy(out, r->data.data() + r->offset, len);
  r->offset += len;
}

void png_warn_cb(png_structp, png_const_charp) {}

Bgr8Image decode_png(std::span<const std::uint8_t> bytes) {
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, png_warn_cb);
  if (!png) throw Error(ErrorCode::CorruptFile, "libpng init failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw Error(ErrorCode::CorruptFile, "libpng init failed");
  }
  PngReader reader{bytes, 0};
  std::vector<png_bytep> rows;
  std::vector<std::uint8_t> buffer;
  bool sixteen = false;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw Error(ErrorCode::CorruptFile, "PNG stream is corrupt or truncated");
  }
  png_set_read_fn(png, &reader, png_read_cb);
  png_read_info(png, info);
  const png_uint_32 w = png_get_image_width(png, info);
  const png_uint_32 h = png_get_image_height(png, info);
  const int depth = png_get_bit_depth(png, info);
  const int color = png_get_color_type(png, info);
  if (depth == 16) {
    sixteen = true;
  } else {
    if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    if (color == PNG_COLOR_TYPE_GRAY || color == PNG_COLOR_TYPE_GRAY_ALPHA) png_set_gray_to_rgb(png);
    png_set_strip_alpha(png);
    png_set_bgr(png);
    png_read_update_info(png, info);
    buffer.resize(static_cast<std::size_t>(w) * h * 3);
    rows.resize(h);
    for (png_uint_32 y = 0; y < h; ++y) rows[y] = buffer.data() + static_cast<std::size_t>(y) * w * 3;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
  }
  png_destroy_read_struct(&png, &info, nullptr);
  if (sixteen) throw Error(ErrorCode::UnsupportedFormat, "16-bit PNG is not supported");
  if (w == 0 || h == 0) throw Error(ErrorCode::CorruptFile, "PNG has zero size");

  Bgr8Image img(static_cast<int>(w), static_cast<int>(h));
  auto px = img.pixels();
  for (std::size_t i = 0; i < px.size(); ++i) px[i] = {buffer[3 * i], buffer[3 * i + 1], buffer[3 * i + 2]};
  return img;
}

struct JpegError {
  jpeg_error_mgr mgr;
  std::jmp_buf jump;
  char message[JMSG_LENGTH_MAX];
};

void jpeg_error_exit(j_common_ptr cinfo) {
  auto* err = reinterpret_cast<JpegError*>(cinfo->err);
  (*cinfo->err->format_message)(cinfo, err->message);
  std::longjmp(err->jump, 1);
}

void jpeg_silence(j_common_ptr, int) {}

Bgr8Image decode_jpeg(std::span<const std::uint8_t> bytes) {
  jpeg_decompress_struct cinfo{};
  JpegError err{};
  cinfo.err = jpeg_std_error(&err.mgr);
  err.mgr.error_exit = jpeg_error_exit;
  err.mgr.emit_message = jpeg_silence;
  std::vector<std::uint8_t> buffer;
  if (setjmp(err.jump)) {
    jpeg_destroy_decompress(&cinfo);
    throw Error(ErrorCode::CorruptFile, "JPEG stream is corrupt or truncated", err.message);
  }
  jpeg_create_decompress(&cinfo);
  jpeg_mem_src(&cinfo, bytes.data(), static_cast<unsigned long>(bytes.size()));
  jpeg_read_header(&cinfo, TRUE);
  cinfo.out_color_space = JCS_RGB;
  jpeg_start_decompress(&cinfo);
  const unsigned w = cinfo.output_width, h = cinfo.output_height;
  buffer.resize(static_cast<std::size_t>(w) * h * 3);
  while (cinfo.output_scanline < h) {
    JSAMPROW row = buffer.data() + static_cast<std::size_t>(cinfo.output_scanline) * w * 3;
    jpeg_read_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_decompress(&cinfo);
  jpeg_destroy_decompress(&cinfo);

  Bgr8Image img(static_cast<int>(w), static_cast<int>(h));
  auto px = img.pixels();
  for (std::size_t i = 0; i < px.size(); ++i) px[i] = {buffer[3 * i + 2], buffer[3 * i + 1], buffer[3 * i]};
  return img;
}

void png_write_cb(png_structp png, png_bytep data, png_size_t len) {
  auto* out = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
  out->insert(out->end(), data, data + len);
}

void png_flush_cb(png_structp) {}

}  // namespace

Bgr8Image decode_photo(std::span<const std::uint8_t> bytes) {
  static constexpr std::uint8_t png_sig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  if (bytes.size() >= 8 && std::memcmp(bytes.data(), png_sig, 8) == 0) return decode_png(bytes);
  if (bytes.size() >= 3 && bytes[0] == 0xff && bytes[1] == 0xd8 && bytes[2] == 0xff) return decode_jpeg(bytes);
  throw Error(ErrorCode::UnsupportedFormat, "expected a PNG or JPEG photo");
}

std::vector<std::uint8_t> encode_png(const Bgr8Image& img) {
  std::vector<std::uint8_t> out;
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, png_warn_cb);
  if (!png) throw Error(ErrorCode::StoreFailure, "libpng init failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw Error(ErrorCode::StoreFailure, "libpng init failed");
  }
  const int w = img.width(), h = img.height();
  std::vector<std::uint8_t> buffer(static_cast<std::size_t>(w) * h * 3);
  const auto px = img.pixels();
  for (std::size_t i = 0; i < px.size(); ++i) {
    buffer[3 * i] = px[i].c0;
    buffer[3 * i + 1] = px[i].c1;
    buffer[3 * i + 2] = px[i].c2;
  }
  std::vector<png_bytep> rows(h);
  for (int y = 0; y < h; ++y) rows[y] = buffer.data() + static_cast<std::size_t>(y) * w * 3;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw Error(ErrorCode::StoreFailure, "PNG encoding failed");
  }
  png_set_write_fn(png, &out, png_write_cb, png_flush_cb);
  png_set_IHDR(png, info, w, h, 8, PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_set_bgr(png);
  png_write_info(png, info);
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return out;
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::NotFound, fmt::format("cannot open '{}'", path.string()));
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::StoreFailure, fmt::format("cannot write '{}'", path.string()));
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::StoreFailure, fmt::format("short write to '{}'", path.string()));
}

void write_file(const std::filesystem::path& path, std::string_view text) {
  write_file(path, std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

}  // namespace ocular::ingest
