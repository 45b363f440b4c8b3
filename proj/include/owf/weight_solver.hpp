#pragma once

// Minimisation of the bias/variance bound
//
//     g(w) = (sum_x w(x) rho(x))^2 + sigma^2 sum_x w(x)^2
//
// over the probability simplex. The minimiser is a triangular kernel in
// rho/a, where the bandwidth a is the unique positive root of
//
//     M(t) = sum_x rho(x) (t - rho(x))^+ = sigma^2.
//
// The root is found exactly by scanning the sorted profile with running sums
// (O(M log M)); no iteration or tolerance is involved.

#include <cstddef>
#include <span>
#include <vector>

namespace owf {

/// Nonnegative dissimilarities over a search window, in window order.
class RhoProfile {
 public:
  RhoProfile() = default;

  /// Throws InvalidParameter if a value is negative or not finite.
  explicit RhoProfile(std::vector<double> values, std::size_t center_index = 0);

  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  std::size_t center_index() const noexcept { return center_index_; }
  double operator[](std::size_t i) const noexcept { return values_[i]; }

 private:
  std::vector<double> values_;
  std::size_t center_index_ = 0;
};

struct BandwidthSolution {
  /// Root of M(a) = sigma^2. Meaningless when degenerate.
  double a = 0.0;
  /// Number of leading sorted entries taking part in the root equation.
  std::size_t k_star = 0;
  /// True exactly when every rho is zero (M vanishes identically).
  bool degenerate = false;
  /// Stable ascending order of the profile used by the scan.
  std::vector<std::size_t> sorted_order;
};

/// Nonnegative weights in window order summing to one.
struct WeightMap {
  std::vector<double> weights;

  std::size_t size() const noexcept { return weights.size(); }
  double operator[](std::size_t i) const noexcept { return weights[i]; }
};

/// sum_x rho(x) (t - rho(x))^+. Throws InvalidParameter for t < 0.
double eval_m_rho(const RhoProfile& rho, double t);

/// Exact bandwidth via sorted running sums. Throws InvalidParameter when
/// sigma <= 0 or the profile is empty.
BandwidthSolution solve_bandwidth(const RhoProfile& rho, double sigma);

/// Triangular-kernel weights (1 - rho/a)^+ normalised to one; uniform when the
/// profile is all zeros.
WeightMap optimal_weights(const RhoProfile& rho, double sigma);

/// Same as optimal_weights but reuses an already computed bandwidth.
WeightMap triangular_weights(const RhoProfile& rho, const BandwidthSolution& bw);

/// g(w). Throws InvalidParameter on a length mismatch or sigma <= 0.
double eval_objective(const RhoProfile& rho, const WeightMap& w, double sigma);

/// Lagrange multipliers of the simplex-constrained problem.
struct KktSolution {
  WeightMap weights;
  double lambda = 0.0;  // equals sum_x w(x) rho(x) at the optimum
  double b = 0.0;       // equals lambda * a
  double a = 0.0;
};

/// Weights written as (b - lambda rho)^+ / sigma^2. Used as an independent
/// cross-check of optimal_weights. Throws DegenerateInput for an all-zero
/// profile.
KktSolution kkt_weights(const RhoProfile& rho, double sigma);

}  // namespace owf
