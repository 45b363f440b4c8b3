#pragma once

#include <optional>
#include <string>
#include <vector>

#include "owf/grid_image.hpp"
#include "owf/patch_similarity.hpp"
#include "owf/weight_solver.hpp"

namespace owf {

enum class FilterVariant { Owf, OwfSplit, Oracle, Nlm };

/// "owf", "owf-split", "oracle", "nlm".
std::string variant_name(FilterVariant v);
FilterVariant parse_variant(const std::string& name);

struct FilterConfig {
  double sigma = 20.0;
  /// Patch side is 2*patch_radius+1; 10 gives the 21x21 default.
  int patch_radius = 10;
  /// Search side is 2*search_radius+1; 6 gives the 13x13 default.
  int search_radius = 6;
  SimilarityKernel kernel = SimilarityKernel::k0();
  FilterVariant variant = FilterVariant::Owf;
  /// NLM smoothing h in intensity units; <= 0 selects 0.55*sigma.
  double nlm_smoothing = 0.0;
  /// Threads used for the per-pixel loop. Output does not depend on it.
  int workers = 1;
  /// Fill DenoiseResult::per_pixel_bandwidth.
  bool record_bandwidth = false;
};

/// Throws InvalidParameter for out-of-range fields.
void validate(const FilterConfig& cfg);

/// NLM smoothing actually used.
double effective_nlm_smoothing(const FilterConfig& cfg);

/// Weights one output pixel was built from.
struct WeightDump {
  PixelCoord x0;
  /// Window pixels (possibly outside the image, mirrored on read) in the order
  /// of weights.weights.
  std::vector<PixelCoord> coords;
  WeightMap weights;
  /// Bandwidth of the triangular kernel; 0 for NLM and degenerate profiles.
  double bandwidth = 0.0;
  bool degenerate = false;
};

struct DenoiseResult {
  GrayImage output;
  /// Bandwidth a at every pixel (0 where the profile was degenerate).
  std::optional<GrayImage> per_pixel_bandwidth;
};

/// Triangular weights driven by the true |f(x) - f(x0)|; needs the clean image.
DenoiseResult oracle_filter(const GrayImage& noisy, const GrayImage& clean,
                            const FilterConfig& cfg);

/// Optimal Weights Filter: rho estimated from patch distances minus the
/// sqrt(2)*sigma noise floor, bandwidth solved per pixel.
DenoiseResult owf_denoise(const GrayImage& noisy, const FilterConfig& cfg);

/// Checkerboard variant: dissimilarities from odd-parity patch pixels,
/// averaging over even-parity search pixels.
DenoiseResult owf_split_denoise(const GrayImage& noisy, const FilterConfig& cfg);

/// Non-local means with weights exp(-d_K^2 / h^2) and a Gaussian patch kernel.
DenoiseResult nlm_denoise(const GrayImage& noisy, const FilterConfig& cfg);

/// NLM for several smoothing values in one pass; patch distances are shared.
std::vector<GrayImage> nlm_denoise_sweep(const GrayImage& noisy, const FilterConfig& cfg,
                                         const std::vector<double>& smoothings);

/// Dispatches on cfg.variant. `clean` is required for the oracle.
DenoiseResult denoise(const GrayImage& noisy, const FilterConfig& cfg,
                      const GrayImage* clean = nullptr);

/// The exact weights the configured filter uses at x0. Dotting them with the
/// noisy values at `coords` reproduces the output pixel bit for bit.
WeightDump export_weight_map(const GrayImage& noisy, const FilterConfig& cfg, PixelCoord x0,
                             const GrayImage* clean = nullptr);

}  // namespace owf
