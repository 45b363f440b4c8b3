#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "owf/error.hpp"

namespace owf {

struct PixelCoord {
  int row = 0;
  int col = 0;

  friend bool operator==(const PixelCoord&, const PixelCoord&) = default;
};

inline PixelCoord operator+(PixelCoord a, PixelCoord b) {
  return {a.row + b.row, a.col + b.col};
}

inline PixelCoord operator-(PixelCoord a, PixelCoord b) {
  return {a.row - b.row, a.col - b.col};
}

/// Square window of side 2*radius+1 around center.
struct WindowSpec {
  PixelCoord center;
  int radius = 0;

  std::size_t cardinality() const {
    const auto side = static_cast<std::size_t>(2 * radius + 1);
    return side * side;
  }
};

/// Row-major grid of real intensities. Values are nominally in [0, 255] but
/// carry no clamp: noisy observations routinely leave that range.
class GrayImage {
 public:
  GrayImage() = default;

  /// Constant image. Throws InvalidParameter on empty dimensions.
  GrayImage(int width, int height, double fill = 0.0);

  /// Takes ownership of values (row-major). Throws InvalidParameter when the
  /// size does not match or a value is not finite.
  GrayImage(int width, int height, std::vector<double> values);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }

  double at(int row, int col) const;
  double& at(int row, int col);

  double operator()(int row, int col) const noexcept {
    return values_[static_cast<std::size_t>(row) * width_ + col];
  }
  double& operator()(int row, int col) noexcept {
    return values_[static_cast<std::size_t>(row) * width_ + col];
  }

  bool contains(PixelCoord p) const noexcept {
    return p.row >= 0 && p.row < height_ && p.col >= 0 && p.col < width_;
  }

  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }

  friend bool operator==(const GrayImage&, const GrayImage&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<double> values_;
};

/// Symmetric reflection of an index about the border pixel lines:
/// -k -> k and (n-1)+k -> (n-1)-k. Throws InvalidWindow when one reflection
/// is not enough to land inside [0, n).
int mirror_index(int index, int n);

/// Reads img at p, reflecting each axis independently when p lies outside.
double mirror_read(const GrayImage& img, PixelCoord p);

/// All (2r+1)^2 coordinates of the window in row-major order. Coordinates may
/// fall outside any image; resolve them with mirror_read.
std::vector<PixelCoord> window_pixels(const WindowSpec& spec);

/// Row-major offsets {-r..r}^2 relative to a center.
std::vector<PixelCoord> window_offsets(int radius);

/// Copy of img extended by `margin` mirrored pixels on every side. The result
/// has width()+2*margin columns; pixel (r, c) of img sits at (r+margin,
/// c+margin). Throws InvalidWindow when margin >= min(width, height).
GrayImage mirror_pad(const GrayImage& img, int margin);

/// Sub-image of img with top-left corner `origin`. Throws InvalidParameter if
/// the rectangle leaves the image.
GrayImage crop(const GrayImage& img, PixelCoord origin, int width, int height);

}  // namespace owf
