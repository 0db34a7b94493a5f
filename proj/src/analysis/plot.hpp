#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ndgrad/tensor.hpp"

// Minimal rasterizer for PNG line plots and heatmaps. Tick labels use a
// built-in 3x5 pixel font covering digits, '.', '-', '+' and 'e'.
namespace lift::analysis {

using Rgb = std::array<std::uint8_t, 3>;

class Canvas {
 public:
  Canvas(std::size_t width, std::size_t height, Rgb background = {255, 255, 255});

  std::size_t width() const { return width_; }
  std::size_t height() const { return height_; }
  void set(long x, long y, Rgb colour);
  Rgb get(std::size_t x, std::size_t y) const;
  void line(long x0, long y0, long x1, long y1, Rgb colour);
  void fill_rect(long x0, long y0, long x1, long y1, Rgb colour);  // inclusive corners
  void text(long x, long y, const std::string& s, Rgb colour, int scale = 1);

  ndgrad::Tensor to_tensor() const;  // [H, W, 3] in [0, 1]
  void save(const std::string& path) const;

 private:
  std::size_t width_, height_;
  std::vector<Rgb> pixels_;
};

// Colormap on [0, 1]: piecewise-linear through dark blue (0), teal (0.33),
// green (0.66) and yellow (1). Values outside are clamped.
Rgb colormap(double t);

struct Series {
  std::vector<double> x;
  std::vector<double> y;
  Rgb colour{31, 119, 180};
};

void line_plot(const std::string& path, const std::vector<Series>& series, std::size_t width = 480,
               std::size_t height = 320);
// rows x cols matrix; each cell drawn as a block. NaN cells are grey.
void heatmap(const std::string& path, const std::vector<std::vector<double>>& matrix, double lo, double hi,
             std::size_t cell = 8);

std::vector<std::size_t> histogram(const std::vector<double>& values, std::size_t bins, double lo, double hi);
// Rows: label,bin_lo,bin_hi,count.
void write_histogram_csv(std::ostream& out, const std::string& label, const std::vector<std::size_t>& counts,
                         double lo, double hi, bool header);

}  // namespace lift::analysis
