#include "analysis/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ostream>

#include "common/error.hpp"
#include "signals/image_io.hpp"

namespace lift::analysis {

namespace {

// 3x5 glyphs, one row per 3-bit mask, top row first.
struct Glyph {
  char c;
  std::uint8_t rows[5];
};

constexpr Glyph kFont[] = {
    {'0', {7, 5, 5, 5, 7}}, {'1', {2, 6, 2, 2, 7}}, {'2', {7, 1, 7, 4, 7}}, {'3', {7, 1, 7, 1, 7}},
    {'4', {5, 5, 7, 1, 1}}, {'5', {7, 4, 7, 1, 7}}, {'6', {7, 4, 7, 5, 7}}, {'7', {7, 1, 1, 1, 1}},
    {'8', {7, 5, 7, 5, 7}}, {'9', {7, 5, 7, 1, 7}}, {'.', {0, 0, 0, 0, 2}}, {'-', {0, 0, 7, 0, 0}},
    {'+', {0, 2, 7, 2, 0}}, {'e', {0, 7, 7, 4, 7}},
};

const Glyph* glyph(char c) {
  for (const auto& g : kFont) {
    if (g.c == c) return &g;
  }
  return nullptr;
}

std::string label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

}  // namespace

Canvas::Canvas(std::size_t width, std::size_t height, Rgb background)
    : width_(width), height_(height), pixels_(width * height, background) {
  require(width > 0 && height > 0, ErrorKind::Config, "canvas must be non-empty");
}

void Canvas::set(long x, long y, Rgb colour) {
  if (x < 0 || y < 0 || x >= static_cast<long>(width_) || y >= static_cast<long>(height_)) return;
  pixels_[static_cast<std::size_t>(y) * width_ + static_cast<std::size_t>(x)] = colour;
}

Rgb Canvas::get(std::size_t x, std::size_t y) const { return pixels_.at(y * width_ + x); }

void Canvas::line(long x0, long y0, long x1, long y1, Rgb colour) {
  const long dx = std::labs(x1 - x0), dy = -std::labs(y1 - y0);
  const long sx = x0 < x1 ? 1 : -1, sy = y0 < y1 ? 1 : -1;
  long err = dx + dy;
  while (true) {
    set(x0, y0, colour);
    if (x0 == x1 && y0 == y1) break;
    const long e2 = 2 * err;
    if (e2 >= dy) {
      err += dy;
      x0 += sx;
    }
    if (e2 <= dx) {
      err += dx;
      y0 += sy;
    }
  }
}

void Canvas::fill_rect(long x0, long y0, long x1, long y1, Rgb colour) {
  for (long y = std::min(y0, y1); y <= std::max(y0, y1); ++y) {
    for (long x = std::min(x0, x1); x <= std::max(x0, x1); ++x) set(x, y, colour);
  }
}

void Canvas::text(long x, long y, const std::string& s, Rgb colour, int scale) {
  for (char c : s) {
    if (const Glyph* g = glyph(c)) {
      for (int row = 0; row < 5; ++row) {
        for (int col = 0; col < 3; ++col) {
          if (g->rows[row] & (4 >> col)) {
            fill_rect(x + col * scale, y + row * scale, x + col * scale + scale - 1, y + row * scale + scale - 1,
                      colour);
          }
        }
      }
    }
    x += 4 * scale;
  }
}

ndgrad::Tensor Canvas::to_tensor() const {
  std::vector<double> v(pixels_.size() * 3);
  for (std::size_t i = 0; i < pixels_.size(); ++i) {
    for (int c = 0; c < 3; ++c) v[i * 3 + c] = pixels_[i][c] / 255.0;
  }
  return ndgrad::Tensor({height_, width_, 3}, std::move(v));
}

void Canvas::save(const std::string& path) const { signals::save_image(path, to_tensor()); }

Rgb colormap(double t) {
  static constexpr double kStops[4][3] = {{68, 1, 84}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}};
  if (std::isnan(t)) return {160, 160, 160};
  t = std::clamp(t, 0.0, 1.0) * 3.0;
  const int i = std::min(2, static_cast<int>(t));
  const double f = t - i;
  Rgb out;
  for (int c = 0; c < 3; ++c) {
    out[c] = static_cast<std::uint8_t>(std::lround(kStops[i][c] + f * (kStops[i + 1][c] - kStops[i][c])));
  }
  return out;
}

void line_plot(const std::string& path, const std::vector<Series>& series, std::size_t width, std::size_t height) {
  require(!series.empty(), ErrorKind::Config, "line_plot needs at least one series");
  double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
  for (const auto& s : series) {
    require(s.x.size() == s.y.size(), ErrorKind::Dimension, "series x and y differ in length");
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.y[i])) continue;
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, s.y[i]);
      ymax = std::max(ymax, s.y[i]);
    }
  }
  if (!(xmax > xmin)) xmax = xmin + 1;
  if (!(ymax > ymin)) ymax = ymin + 1;
  Canvas canvas(width, height);
  const long left = 44, right = static_cast<long>(width) - 10, top = 10, bottom = static_cast<long>(height) - 24;
  const Rgb axis{0, 0, 0};
  canvas.line(left, top, left, bottom, axis);
  canvas.line(left, bottom, right, bottom, axis);
  auto px = [&](double x) { return left + std::lround((x - xmin) / (xmax - xmin) * (right - left)); };
  auto py = [&](double y) { return bottom - std::lround((y - ymin) / (ymax - ymin) * (bottom - top)); };
  for (int k = 0; k <= 4; ++k) {
    const double fx = xmin + (xmax - xmin) * k / 4, fy = ymin + (ymax - ymin) * k / 4;
    canvas.line(px(fx), bottom, px(fx), bottom + 4, axis);
    canvas.text(px(fx) - 6, bottom + 8, label(fx), axis);
    canvas.line(left - 4, py(fy), left, py(fy), axis);
    canvas.text(2, py(fy) - 2, label(fy), axis);
  }
  for (const auto& s : series) {
    bool have = false;
    long lx = 0, ly = 0;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.y[i])) {
        have = false;
        continue;
      }
      const long x = px(s.x[i]), y = py(s.y[i]);
      if (have) canvas.line(lx, ly, x, y, s.colour);
      canvas.set(x, y, s.colour);
      lx = x;
      ly = y;
      have = true;
    }
  }
  canvas.save(path);
}

void heatmap(const std::string& path, const std::vector<std::vector<double>>& matrix, double lo, double hi,
             std::size_t cell) {
  require(!matrix.empty() && !matrix[0].empty(), ErrorKind::Config, "heatmap needs a non-empty matrix");
  require(hi > lo, ErrorKind::Config, "heatmap range must satisfy hi > lo");
  const std::size_t rows = matrix.size(), cols = matrix[0].size();
  const std::size_t bar = 12;
  Canvas canvas(cols * cell + bar + 6, rows * cell);
  for (std::size_t r = 0; r < rows; ++r) {
    require(matrix[r].size() == cols, ErrorKind::Dimension, "heatmap rows differ in length");
    for (std::size_t c = 0; c < cols; ++c) {
      const Rgb colour = colormap((matrix[r][c] - lo) / (hi - lo));
      canvas.fill_rect(static_cast<long>(c * cell), static_cast<long>(r * cell),
                       static_cast<long>((c + 1) * cell - 1), static_cast<long>((r + 1) * cell - 1), colour);
    }
  }
  const long x0 = static_cast<long>(cols * cell + 6);
  const long h = static_cast<long>(rows * cell);
  for (long y = 0; y < h; ++y) {
    const double t = h > 1 ? 1.0 - static_cast<double>(y) / static_cast<double>(h - 1) : 1.0;
    canvas.line(x0, y, x0 + static_cast<long>(bar) - 1, y, colormap(t));
  }
  canvas.save(path);
}

std::vector<std::size_t> histogram(const std::vector<double>& values, std::size_t bins, double lo, double hi) {
  require(bins >= 1 && hi > lo, ErrorKind::Config, "histogram needs bins >= 1 and hi > lo");
  std::vector<std::size_t> counts(bins, 0);
  for (double v : values) {
    if (!(v >= lo && v <= hi)) continue;
    auto b = static_cast<std::size_t>((v - lo) / (hi - lo) * static_cast<double>(bins));
    counts[std::min(b, bins - 1)]++;
  }
  return counts;
}

void write_histogram_csv(std::ostream& out, const std::string& label_text, const std::vector<std::size_t>& counts,
                         double lo, double hi, bool header) {
  if (header) out << "label,bin_lo,bin_hi,count\n";
  const double w = (hi - lo) / static_cast<double>(counts.size());
  for (std::size_t b = 0; b < counts.size(); ++b) {
    out << label_text << ',' << lo + w * b << ',' << lo + w * (b + 1) << ',' << counts[b] << '\n';
  }
}

}  // namespace lift::analysis
