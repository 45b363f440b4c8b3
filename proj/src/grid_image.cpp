#include "owf/grid_image.hpp"

#include <cmath>
#include <string>

namespace owf {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidParameter: return "invalid parameter";
    case ErrorCode::InvalidWindow: return "invalid window";
    case ErrorCode::DegenerateInput: return "degenerate input";
    case ErrorCode::DimensionMismatch: return "dimension mismatch";
    case ErrorCode::MalformedHeader: return "malformed header";
    case ErrorCode::UnsupportedFormat: return "unsupported format";
    case ErrorCode::FileNotFound: return "file not found";
    case ErrorCode::IoFailure: return "i/o failure";
  }
  return "unknown error";
}

namespace {

void check_dims(int width, int height) {
  if (width < 1 || height < 1) {
    throw Error(ErrorCode::InvalidParameter,
                "image dimensions must be positive, got " +
                    std::to_string(width) + "x" + std::to_string(height));
  }
}

}  // namespace

GrayImage::GrayImage(int width, int height, double fill) {
  check_dims(width, height);
  if (!std::isfinite(fill)) {
    throw Error(ErrorCode::InvalidParameter, "fill value must be finite");
  }
  width_ = width;
  height_ = height;
  values_.assign(static_cast<std::size_t>(width) * height, fill);
}

GrayImage::GrayImage(int width, int height, std::vector<double> values) {
  check_dims(width, height);
  if (values.size() != static_cast<std::size_t>(width) * height) {
    throw Error(ErrorCode::InvalidParameter,
                "expected " + std::to_string(static_cast<std::size_t>(width) * height) +
                    " values, got " + std::to_string(values.size()));
  }
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::InvalidParameter, "image values must be finite");
    }
  }
  width_ = width;
  height_ = height;
  values_ = std::move(values);
}

double GrayImage::at(int row, int col) const {
  if (!contains({row, col})) {
    throw Error(ErrorCode::InvalidParameter, "pixel index out of range");
  }
  return (*this)(row, col);
}

double& GrayImage::at(int row, int col) {
  if (!contains({row, col})) {
    throw Error(ErrorCode::InvalidParameter, "pixel index out of range");
  }
  return (*this)(row, col);
}

int mirror_index(int index, int n) {
  int r = index;
  if (r < 0) {
    r = -r;
  } else if (r > n - 1) {
    r = 2 * (n - 1) - r;
  }
  if (r < 0 || r > n - 1) {
    throw Error(ErrorCode::InvalidWindow,
                "index " + std::to_string(index) +
                    " reaches past the mirrored border of an axis of length " +
                    std::to_string(n));
  }
  return r;
}

double mirror_read(const GrayImage& img, PixelCoord p) {
  return img(mirror_index(p.row, img.height()), mirror_index(p.col, img.width()));
}

std::vector<PixelCoord> window_offsets(int radius) {
  if (radius < 0) {
    throw Error(ErrorCode::InvalidParameter, "window radius must be nonnegative");
  }
  std::vector<PixelCoord> out;
  out.reserve(static_cast<std::size_t>(2 * radius + 1) * (2 * radius + 1));
  for (int dr = -radius; dr <= radius; ++dr) {
    for (int dc = -radius; dc <= radius; ++dc) {
      out.push_back({dr, dc});
    }
  }
  return out;
}

std::vector<PixelCoord> window_pixels(const WindowSpec& spec) {
  auto out = window_offsets(spec.radius);
  for (auto& p : out) {
    p = p + spec.center;
  }
  return out;
}

GrayImage mirror_pad(const GrayImage& img, int margin) {
  if (margin < 0 || margin >= img.width() || margin >= img.height()) {
    throw Error(ErrorCode::InvalidWindow,
                "mirror margin " + std::to_string(margin) +
                    " must be smaller than both image dimensions");
  }
  const int w = img.width() + 2 * margin;
  const int h = img.height() + 2 * margin;
  std::vector<double> values(static_cast<std::size_t>(w) * h);
  for (int r = 0; r < h; ++r) {
    const int src_r = mirror_index(r - margin, img.height());
    for (int c = 0; c < w; ++c) {
      values[static_cast<std::size_t>(r) * w + c] =
          img(src_r, mirror_index(c - margin, img.width()));
    }
  }
  return GrayImage(w, h, std::move(values));
}

GrayImage crop(const GrayImage& img, PixelCoord origin, int width, int height) {
  if (width < 1 || height < 1 || !img.contains(origin) ||
      !img.contains({origin.row + height - 1, origin.col + width - 1})) {
    throw Error(ErrorCode::InvalidParameter, "crop rectangle leaves the image");
  }
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(width) * height);
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) {
      values.push_back(img(origin.row + r, origin.col + c));
    }
  }
  return GrayImage(width, height, std::move(values));
}

}  // namespace owf
