#include "ocular/imgproc.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <vector>

namespace ocular::imgproc {

StructuringElement StructuringElement::square(int size) {
  if (size != 3 && size != 5) {
    throw Error(ErrorCode::InvalidArgument, "structuring element size must be 3 or 5");
  }
  return StructuringElement(size);
}

namespace {

// Separable square max (dilate) or min (erode) filter. Out-of-raster
// samples are skipped, which makes them neutral for either operator.
std::vector<std::uint8_t> square_filter(std::span<const std::uint8_t> src, int w, int h, int r,
                                        bool take_max) {
  std::vector<std::uint8_t> rows(src.size());
  for (int y = 0; y < h; ++y) {
    const std::uint8_t* in = src.data() + static_cast<std::size_t>(y) * w;
    std::uint8_t* out = rows.data() + static_cast<std::size_t>(y) * w;
    for (int x = 0; x < w; ++x) {
      const int x0 = std::max(0, x - r), x1 = std::min(w - 1, x + r);
      std::uint8_t acc = take_max ? 0 : 1;
      for (int i = x0; i <= x1; ++i) acc = take_max ? (acc | in[i]) : (acc & in[i]);
      out[x] = acc;
    }
  }
  std::vector<std::uint8_t> cols(src.size());
  for (int y = 0; y < h; ++y) {
    const int y0 = std::max(0, y - r), y1 = std::min(h - 1, y + r);
    for (int x = 0; x < w; ++x) {
      std::uint8_t acc = take_max ? 0 : 1;
      for (int j = y0; j <= y1; ++j) {
        const std::uint8_t v = rows[static_cast<std::size_t>(j) * w + x];
        acc = take_max ? (acc | v) : (acc & v);
      }
      cols[static_cast<std::size_t>(y) * w + x] = acc;
    }
  }
  return cols;
}

}  // namespace

BinaryMask morph(const BinaryMask& mask, MorphOp op, const StructuringElement& k) {
  const int w = mask.width(), h = mask.height(), r = k.radius();
  switch (op) {
    case MorphOp::Dilate:
      return BinaryMask(w, h, square_filter(mask.bits(), w, h, r, true));
    case MorphOp::Erode:
      return BinaryMask(w, h, square_filter(mask.bits(), w, h, r, false));
    case MorphOp::Close: {
      auto dilated = square_filter(mask.bits(), w, h, r, true);
      return BinaryMask(w, h, square_filter(dilated, w, h, r, false));
    }
  }
  return mask;
}

std::uint8_t otsu_threshold(const GrayPlane& plane) {
  std::array<std::int64_t, 256> hist{};
  for (std::uint8_t v : plane.values()) ++hist[v];

  const std::int64_t total = static_cast<std::int64_t>(plane.values().size());
  std::int64_t total_sum = 0;
  for (int v = 0; v < 256; ++v) total_sum += hist[v] * v;

  std::int64_t below_count = 0, below_sum = 0;
  long double best = -1.0L;
  int best_t = -1;
  for (int t = 1; t < 256; ++t) {
    below_count += hist[t - 1];
    below_sum += hist[t - 1] * (t - 1);
    const std::int64_t above_count = total - below_count;
    if (below_count == 0 || above_count == 0) continue;
    // N^2 * between-class variance = (N*S0 - w0*S)^2 / (w0*w1); integer numerator is exact.
    const __int128 diff = static_cast<__int128>(total) * below_sum -
                          static_cast<__int128>(below_count) * total_sum;
    const long double var = static_cast<long double>(diff) * static_cast<long double>(diff) /
                            (static_cast<long double>(below_count) * above_count);
    if (var > best) {
      best = var;
      best_t = t;
    }
  }
  if (best_t < 0 || best <= 0.0L) {
    throw Error(ErrorCode::ConstantImage, "Otsu threshold undefined on a constant plane");
  }
  return static_cast<std::uint8_t>(best_t);
}

RadiusRange default_radius_range(int width, int height) noexcept {
  const double m = std::min(width, height);
  return RadiusRange{0.08 * m, 0.35 * m};
}

CircleEstimate hough_iris(const Bgr8Image& img) {
  return hough_iris(img, default_radius_range(img.width(), img.height()));
}

CircleEstimate hough_iris(const Bgr8Image& img, RadiusRange range) {
  const int w = img.width(), h = img.height();
  if (!(range.min > 0.0) || !(range.min < range.max) || !(range.max < std::min(w, h) / 2.0)) {
    throw Error(ErrorCode::InvalidArgument, "Hough radius range must satisfy 0 < min < max < min(w,h)/2");
  }

  std::vector<double> gray(img.size());
  {
    auto px = img.pixels();
    for (std::size_t i = 0; i < px.size(); ++i)
      gray[i] = 0.114 * px[i].c0 + 0.587 * px[i].c1 + 0.299 * px[i].c2;
  }
  // Separable 5-tap binomial blur steadies gradient directions on aliased edges.
  {
    constexpr double k[5] = {1 / 16.0, 4 / 16.0, 6 / 16.0, 4 / 16.0, 1 / 16.0};
    std::vector<double> tmp(gray.size());
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        double s = 0.0;
        for (int d = -2; d <= 2; ++d) s += k[d + 2] * gray[static_cast<std::size_t>(y) * w + std::clamp(x + d, 0, w - 1)];
        tmp[static_cast<std::size_t>(y) * w + x] = s;
      }
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        double s = 0.0;
        for (int d = -2; d <= 2; ++d) s += k[d + 2] * tmp[static_cast<std::size_t>(std::clamp(y + d, 0, h - 1)) * w + x];
        gray[static_cast<std::size_t>(y) * w + x] = s;
      }
  }
  auto g = [&](int x, int y) {
    x = std::clamp(x, 0, w - 1);
    y = std::clamp(y, 0, h - 1);
    return gray[static_cast<std::size_t>(y) * w + x];
  };

  struct Edge {
    int x, y;
    double ux, uy, mag;
  };
  std::vector<double> magnitude(img.size());
  std::vector<double> gxs(img.size()), gys(img.size());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double gx = (g(x + 1, y - 1) + 2 * g(x + 1, y) + g(x + 1, y + 1)) -
                        (g(x - 1, y - 1) + 2 * g(x - 1, y) + g(x - 1, y + 1));
      const double gy = (g(x - 1, y + 1) + 2 * g(x, y + 1) + g(x + 1, y + 1)) -
                        (g(x - 1, y - 1) + 2 * g(x, y - 1) + g(x + 1, y - 1));
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      gxs[i] = gx;
      gys[i] = gy;
      magnitude[i] = std::hypot(gx, gy);
    }
  }

  std::vector<double> sorted = magnitude;
  const std::size_t p90 = std::min(sorted.size() - 1, static_cast<std::size_t>(0.9 * sorted.size()));
  std::nth_element(sorted.begin(), sorted.begin() + p90, sorted.end());
  const double edge_threshold = sorted[p90];

  std::vector<Edge> edges;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      const double m = magnitude[i];
      if (m > 0.0 && m >= edge_threshold) edges.push_back({x, y, gxs[i] / m, gys[i] / m, m});
    }
  }
  if (edges.empty()) throw Error(ErrorCode::NoCircleFound, "no gradient edges in image");

  const int r_lo = static_cast<int>(std::ceil(range.min));
  const int r_hi = static_cast<int>(std::floor(range.max));

  std::vector<int> acc(img.size(), 0);
  std::vector<std::size_t> touched;
  double best_score = -1.0;
  int best_r = 0, best_x = 0, best_y = 0;

  for (int r = r_lo; r <= r_hi; ++r) {
    touched.clear();
    for (const Edge& e : edges) {
      for (int sign : {-1, 1}) {
        const int cx = static_cast<int>(std::lround(e.x + sign * r * e.ux));
        const int cy = static_cast<int>(std::lround(e.y + sign * r * e.uy));
        if (cx < 0 || cy < 0 || cx >= w || cy >= h) continue;
        const std::size_t i = static_cast<std::size_t>(cy) * w + cx;
        if (acc[i]++ == 0) touched.push_back(i);
      }
    }
    // Score a 3x3 neighbourhood so sub-pixel centers are not split across cells.
    const double perimeter = 2.0 * std::numbers::pi * r;
    for (std::size_t i : touched) {
      const int x = static_cast<int>(i % w), y = static_cast<int>(i / w);
      int votes = 0;
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
          const int xx = x + dx, yy = y + dy;
          if (xx >= 0 && yy >= 0 && xx < w && yy < h) votes += acc[static_cast<std::size_t>(yy) * w + xx];
        }
      const double score = votes / perimeter;
      if (score > best_score) {
        best_score = score;
        best_r = r;
        best_x = x;
        best_y = y;
      }
    }
    for (std::size_t i : touched) acc[i] = 0;
  }

  if (best_score < kHoughScoreFloor) {
    throw Error(ErrorCode::NoCircleFound, "Hough accumulator peak below floor");
  }

  // Refine the center as the vote centroid around the peak at the winning radius.
  double sx = 0.0, sy = 0.0, sw = 0.0;
  for (const Edge& e : edges) {
    for (int sign : {-1, 1}) {
      const double vx = e.x + sign * best_r * e.ux;
      const double vy = e.y + sign * best_r * e.uy;
      if (std::abs(vx - best_x) <= 1.5 && std::abs(vy - best_y) <= 1.5) {
        sx += vx;
        sy += vy;
        sw += 1.0;
      }
    }
  }
  const double cx = sw > 0 ? sx / sw : best_x;
  const double cy = sw > 0 ? sy / sw : best_y;

  // Refine the radius as the magnitude-weighted mean distance of edge pixels
  // lying near the winning circle.
  double sr = 0.0, swr = 0.0;
  for (const Edge& e : edges) {
    const double d = std::hypot(e.x - cx, e.y - cy);
    if (std::abs(d - best_r) <= 2.5) {
      sr += d * e.mag;
      swr += e.mag;
    }
  }
  const double radius = swr > 0 ? sr / swr : best_r;

  return CircleEstimate{cx, cy, radius * kHoughRadiusCorrection, best_score};
}

int scleral_luminance_threshold(const Lab8Image& lab) {
  int otsu = kScleraLuminanceFloor;
  try {
    otsu = otsu_threshold(channel_plane(lab, 0));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::ConstantImage) throw;
  }
  return std::max(kScleraLuminanceFloor, otsu);
}

BinaryMask scleral_mask_luminance(const Lab8Image& lab) {
  const int tau = scleral_luminance_threshold(lab);
  return BinaryMask::from_predicate(lab.width(), lab.height(), [&](int x, int y) {
    const Pixel3 p = lab(x, y);
    return p.c0 >= tau && p.c1 < kScleraRednessCeiling;
  });
}

namespace {
void require_same_size(const Lab8Image& lab, const Hsv8Image& hsv) {
  if (lab.width() != hsv.width() || lab.height() != hsv.height()) {
    throw Error(ErrorCode::InvalidArgument, "LAB and HSV rasters differ in size");
  }
}
}  // namespace

BinaryMask scleral_mask_three_gate_raw(const Lab8Image& lab, const Hsv8Image& hsv) {
  require_same_size(lab, hsv);
  return BinaryMask::from_predicate(lab.width(), lab.height(), [&](int x, int y) {
    return lab(x, y).c0 >= 190 && hsv(x, y).c1 <= 60;
  });
}

BinaryMask scleral_mask_three_gate(const Lab8Image& lab, const Hsv8Image& hsv) {
  return close(scleral_mask_three_gate_raw(lab, hsv), kSquare3);
}

BinaryMask lesion_mask_raw(const Lab8Image& lab, const Hsv8Image& hsv) {
  require_same_size(lab, hsv);
  return BinaryMask::from_predicate(lab.width(), lab.height(), [&](int x, int y) {
    const Pixel3 l = lab(x, y);
    const Pixel3 s = hsv(x, y);
    const bool bright = l.c0 >= 180;
    const bool yellow = l.c2 >= 140;
    const bool red_hue = s.c0 <= 25 || (s.c0 >= 155 && s.c0 <= 179);
    const bool low_sat = s.c1 <= 80;
    return bright && (yellow || red_hue) && low_sat;
  });
}

BinaryMask lesion_mask(const Lab8Image& lab, const Hsv8Image& hsv) {
  const BinaryMask smoothed = erode(dilate(lesion_mask_raw(lab, hsv), kSquare3), kSquare3);
  return close(smoothed, kSquare5);
}

}  // namespace ocular::imgproc
