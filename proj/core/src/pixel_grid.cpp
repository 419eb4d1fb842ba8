#include "qimage/pixel_grid.hpp"

#include <cmath>
#include <sstream>

#include "qimage/errors.hpp"

namespace qimage {

PixelGrid::PixelGrid(double dx, int count) : dx_(dx), count_(count) {
  if (!(std::isfinite(dx) && dx > 0.0)) throw InvalidParameter("pixel width must be positive");
  if (count < 2 || count % 2 != 0) {
    throw InvalidParameter("pixel count must be an even integer >= 2");
  }
}

PixelGrid PixelGrid::from_half_length(double dx, double half_length) {
  if (!(dx > 0.0 && half_length > 0.0)) {
    throw InvalidParameter("pixel width and window half-length must be positive");
  }
  const double ratio = 2.0 * half_length / dx;
  const long m = std::lround(ratio);
  if (std::abs(m * dx - 2.0 * half_length) > 1e-12 * std::max(1.0, 2.0 * half_length)) {
    std::ostringstream msg;
    msg << "window 2*" << half_length << " is not a whole number of pixels of width " << dx;
    throw InvalidParameter(msg.str());
  }
  return PixelGrid(dx, static_cast<int>(m));
}

PixelGrid PixelGrid::fitting(double dx, double max_half_length) {
  if (!(dx > 0.0 && max_half_length >= dx)) {
    throw InvalidParameter("window must hold at least one pixel on each side");
  }
  const long half = static_cast<long>(std::floor(max_half_length / dx + 1e-12));
  return PixelGrid(dx, static_cast<int>(2 * half));
}

int PixelGrid::pixel_of(double x) const {
  const double s = std::floor(x / dx_);
  const double i = s + count_ / 2;
  if (i < 0 || i >= count_) return -1;
  return static_cast<int>(i);
}

void to_json(nlohmann::json& j, const PixelGrid& g) {
  j = {{"dx", g.dx()}, {"count", g.count()}, {"half_length", g.half_length()}};
}

}  // namespace qimage
