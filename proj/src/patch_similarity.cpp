#include "owf/patch_similarity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace owf {

std::string kernel_name(SimilarityKernel::Kind kind) {
  switch (kind) {
    case SimilarityKernel::Kind::Rect: return "rect";
    case SimilarityKernel::Kind::Gauss: return "gauss";
    case SimilarityKernel::Kind::K0: return "k0";
  }
  return "?";
}

SimilarityKernel::Kind parse_kernel(const std::string& name) {
  if (name == "rect") return SimilarityKernel::Kind::Rect;
  if (name == "gauss") return SimilarityKernel::Kind::Gauss;
  if (name == "k0") return SimilarityKernel::Kind::K0;
  throw Error(ErrorCode::InvalidParameter, "unknown kernel '" + name + "'");
}

double effective_gauss_bandwidth(const SimilarityKernel& k, int patch_radius) {
  if (k.gauss_bandwidth > 0.0) return k.gauss_bandwidth;
  return std::max(1.0, static_cast<double>(patch_radius) * patch_radius);
}

double kernel_weight(const SimilarityKernel& k, PixelCoord offset, PixelCoord center,
                     int patch_radius) {
  const int dr = offset.row - center.row;
  const int dc = offset.col - center.col;
  const int inf_dist = std::max(std::abs(dr), std::abs(dc));
  if (patch_radius < 0 || inf_dist > patch_radius) {
    throw Error(ErrorCode::InvalidParameter, "offset lies outside the patch");
  }
  switch (k.kind) {
    case SimilarityKernel::Kind::Rect:
      return 1.0;
    case SimilarityKernel::Kind::Gauss: {
      const double d2 = static_cast<double>(dr) * dr + static_cast<double>(dc) * dc;
      return std::exp(-d2 / (2.0 * effective_gauss_bandwidth(k, patch_radius)));
    }
    case SimilarityKernel::Kind::K0: {
      if (patch_radius < 1) {
        throw Error(ErrorCode::InvalidParameter, "the K0 kernel needs patch radius >= 1");
      }
      double sum = 0.0;
      for (int j = std::max(1, inf_dist); j <= patch_radius; ++j) {
        const double side = 2.0 * j + 1.0;
        sum += 1.0 / (side * side);
      }
      return sum;
    }
  }
  return 0.0;
}

std::vector<double> kernel_mask(const SimilarityKernel& k, int patch_radius) {
  std::vector<double> mask;
  for (const auto& z : window_offsets(patch_radius)) {
    mask.push_back(kernel_weight(k, z, {0, 0}, patch_radius));
  }
  return mask;
}

double mask_sum(const std::vector<double>& mask) {
  double s = 0.0;
  for (double v : mask) s += v;
  return s;
}

namespace {

double weighted_distance(const GrayImage& img, PixelCoord x, PixelCoord x0,
                         const std::vector<PixelCoord>& offsets,
                         const std::vector<double>& weights) {
  double acc = 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < offsets.size(); ++i) {
    const double d = mirror_read(img, x + offsets[i]) - mirror_read(img, x0 + offsets[i]);
    acc += weights[i] * (d * d);
    total += weights[i];
  }
  return std::sqrt(acc / total);
}

void require_sigma(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw Error(ErrorCode::InvalidParameter, "sigma must be positive and finite");
  }
}

}  // namespace

double patch_distance(const GrayImage& img, PixelCoord x, PixelCoord x0, int patch_radius,
                      const SimilarityKernel& k) {
  return weighted_distance(img, x, x0, window_offsets(patch_radius), kernel_mask(k, patch_radius));
}

double rho_hat(const GrayImage& img, PixelCoord x, PixelCoord x0, int patch_radius,
               const SimilarityKernel& k, double sigma) {
  require_sigma(sigma);
  const double r = patch_distance(img, x, x0, patch_radius, k) - std::sqrt(2.0) * sigma;
  return r > 0.0 ? r : 0.0;
}

std::vector<PixelCoord> parity_filter(const std::vector<PixelCoord>& coords, PixelCoord origin,
                                      PixelParity parity) {
  const int want = parity == PixelParity::Even ? 0 : 1;
  std::vector<PixelCoord> out;
  for (const auto& p : coords) {
    const int s = (p.row - origin.row) + (p.col - origin.col);
    if (((s % 2) + 2) % 2 == want) out.push_back(p);
  }
  return out;
}

std::vector<PixelCoord> split_patch_offsets(int patch_radius) {
  if (patch_radius < 1) {
    throw Error(ErrorCode::InvalidParameter,
                "the split estimator needs patch radius >= 1 for a nonempty odd set");
  }
  return parity_filter(window_offsets(patch_radius), {0, 0}, PixelParity::Odd);
}

double split_rho_hat(const GrayImage& img, PixelCoord x, PixelCoord x0, int patch_radius,
                     double sigma) {
  require_sigma(sigma);
  const auto offsets = split_patch_offsets(patch_radius);
  const std::vector<double> ones(offsets.size(), 1.0);
  const double r = weighted_distance(img, x, x0, offsets, ones) - std::sqrt(2.0) * sigma;
  return r > 0.0 ? r : 0.0;
}

}  // namespace owf
