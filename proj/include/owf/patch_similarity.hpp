#pragma once

#include <string>
#include <vector>

#include "owf/grid_image.hpp"

namespace owf {

/// Weighting applied to squared pixel differences inside a patch.
struct SimilarityKernel {
  enum class Kind { Rect, Gauss, K0 };

  Kind kind = Kind::K0;
  /// Gaussian bandwidth h_g in pixel^2; <= 0 selects the default
  /// max(1, patch_radius^2).
  double gauss_bandwidth = 0.0;

  static SimilarityKernel rect() { return {Kind::Rect, 0.0}; }
  static SimilarityKernel gauss(double bandwidth = 0.0) { return {Kind::Gauss, bandwidth}; }
  static SimilarityKernel k0() { return {Kind::K0, 0.0}; }

  friend bool operator==(const SimilarityKernel&, const SimilarityKernel&) = default;
};

/// "rect", "gauss" or "k0".
std::string kernel_name(SimilarityKernel::Kind kind);
/// Inverse of kernel_name. Throws InvalidParameter for anything else.
SimilarityKernel::Kind parse_kernel(const std::string& name);

/// Gaussian bandwidth actually used for a patch radius.
double effective_gauss_bandwidth(const SimilarityKernel& k, int patch_radius);

/// Unnormalised kernel weight of patch pixel `offset` for a patch centred at
/// `center`. The K0 kernel uses p = patch_radius:
///   K0(y) = sum_{j=max(1,|y-c|_inf)}^{p} 1/(2j+1)^2.
/// Throws InvalidParameter when offset lies outside the patch, or for K0 with
/// patch_radius < 1.
double kernel_weight(const SimilarityKernel& k, PixelCoord offset, PixelCoord center,
                     int patch_radius);

/// kernel_weight over the whole patch in row-major order.
std::vector<double> kernel_mask(const SimilarityKernel& k, int patch_radius);

/// Sum of a mask accumulated in row-major order.
double mask_sum(const std::vector<double>& mask);

/// Weighted RMS distance between the patches at x and x0:
///   sqrt( sum_z K(z) (Y(x+z) - Y(x0+z))^2 / sum_z K(z) ).
/// With the rect kernel this is ||Y_x - Y_x0||_2 / sqrt(m). Out-of-image reads
/// are mirrored.
double patch_distance(const GrayImage& img, PixelCoord x, PixelCoord x0, int patch_radius,
                      const SimilarityKernel& k);

/// (patch_distance - sqrt(2) sigma)^+. Throws InvalidParameter if sigma <= 0.
double rho_hat(const GrayImage& img, PixelCoord x, PixelCoord x0, int patch_radius,
               const SimilarityKernel& k, double sigma);

enum class PixelParity { Even, Odd };

/// Keeps coordinates whose offset from origin has the requested coordinate-sum
/// parity. Order is preserved.
std::vector<PixelCoord> parity_filter(const std::vector<PixelCoord>& coords, PixelCoord origin,
                                      PixelParity parity);

/// Patch offsets (relative to the patch centre) with odd coordinate sum, in
/// row-major order. These are the pixels the split estimator compares.
std::vector<PixelCoord> split_patch_offsets(int patch_radius);

/// rho_hat restricted to odd-parity patch offsets with uniform weights,
/// normalised by their count. Throws InvalidParameter if patch_radius < 1 or
/// sigma <= 0.
double split_rho_hat(const GrayImage& img, PixelCoord x, PixelCoord x0, int patch_radius,
                     double sigma);

}  // namespace owf
