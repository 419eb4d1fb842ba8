#pragma once

#include <nlohmann/json.hpp>

namespace qimage {

// Symmetric detection window [-half_length, half_length) split into `count`
// pixels of width dx. Pixel i spans [x_s, x_s + dx) with x_s = s dx and
// s = i - count / 2, so count must be even.
class PixelGrid {
 public:
  PixelGrid(double dx, int count);

  // Grid whose window equals [-half_length, half_length); requires
  // 2 half_length / dx to be an even integer within 1e-12.
  static PixelGrid from_half_length(double dx, double half_length);
  // Largest symmetric grid of pixels of width dx that fits inside
  // [-max_half_length, max_half_length].
  static PixelGrid fitting(double dx, double max_half_length);

  double dx() const { return dx_; }
  int count() const { return count_; }
  double half_length() const { return 0.5 * count_ * dx_; }
  double left_edge(int i) const { return (i - count_ / 2) * dx_; }
  double right_edge(int i) const { return left_edge(i) + dx_; }
  double center(int i) const { return left_edge(i) + 0.5 * dx_; }
  // Half-open membership; returns -1 outside the window.
  int pixel_of(double x) const;

 private:
  double dx_;
  int count_;
};

void to_json(nlohmann::json& j, const PixelGrid& g);

}  // namespace qimage
