#include "owf/weight_solver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "owf/error.hpp"

namespace owf {

namespace {

void require_sigma(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw Error(ErrorCode::InvalidParameter, "sigma must be positive and finite");
  }
}

}  // namespace

RhoProfile::RhoProfile(std::vector<double> values, std::size_t center_index)
    : values_(std::move(values)), center_index_(center_index) {
  for (double v : values_) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw Error(ErrorCode::InvalidParameter,
                  "rho values must be finite and nonnegative");
    }
  }
  if (!values_.empty() && center_index_ >= values_.size()) {
    throw Error(ErrorCode::InvalidParameter, "center index outside the profile");
  }
}

double eval_m_rho(const RhoProfile& rho, double t) {
  if (!(t >= 0.0)) {
    throw Error(ErrorCode::InvalidParameter, "M_rho is defined for t >= 0");
  }
  double sum = 0.0;
  for (double r : rho.values()) {
    if (t > r) sum += r * (t - r);
  }
  return sum;
}

BandwidthSolution solve_bandwidth(const RhoProfile& rho, double sigma) {
  require_sigma(sigma);
  if (rho.size() == 0) {
    throw Error(ErrorCode::InvalidParameter, "empty rho profile");
  }
  const auto values = rho.values();

  BandwidthSolution out;
  out.sorted_order.resize(values.size());
  std::iota(out.sorted_order.begin(), out.sorted_order.end(), std::size_t{0});
  std::stable_sort(out.sorted_order.begin(), out.sorted_order.end(),
                   [&](std::size_t i, std::size_t j) { return values[i] < values[j]; });

  const double s2 = sigma * sigma;
  double sum = 0.0;
  double sum_sq = 0.0;
  bool have_root = false;
  for (std::size_t k = 0; k < values.size(); ++k) {
    const double r = values[out.sorted_order[k]];
    sum += r;
    sum_sq += r * r;
    if (sum == 0.0) {
      // a_k is +inf while only zeros have been seen.
      out.k_star = k + 1;
      continue;
    }
    const double a_k = (s2 + sum_sq) / sum;
    if (a_k < r) break;
    out.a = a_k;
    out.k_star = k + 1;
    have_root = true;
  }
  out.degenerate = !have_root;
  if (out.degenerate) out.a = 0.0;
  return out;
}

WeightMap triangular_weights(const RhoProfile& rho, const BandwidthSolution& bw) {
  const auto values = rho.values();
  WeightMap w;
  w.weights.resize(values.size());
  if (bw.degenerate) {
    std::fill(w.weights.begin(), w.weights.end(), 1.0 / static_cast<double>(values.size()));
    return w;
  }
  double total = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double k = 1.0 - values[i] / bw.a;
    w.weights[i] = k > 0.0 ? k : 0.0;
    total += w.weights[i];
  }
  for (double& x : w.weights) x /= total;
  return w;
}

WeightMap optimal_weights(const RhoProfile& rho, double sigma) {
  return triangular_weights(rho, solve_bandwidth(rho, sigma));
}

double eval_objective(const RhoProfile& rho, const WeightMap& w, double sigma) {
  require_sigma(sigma);
  if (w.size() != rho.size()) {
    throw Error(ErrorCode::InvalidParameter,
                "weight map has " + std::to_string(w.size()) + " entries, profile has " +
                    std::to_string(rho.size()));
  }
  double bias = 0.0;
  double var = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    bias += w[i] * rho[i];
    var += w[i] * w[i];
  }
  return bias * bias + sigma * sigma * var;
}

KktSolution kkt_weights(const RhoProfile& rho, double sigma) {
  const auto bw = solve_bandwidth(rho, sigma);
  if (bw.degenerate) {
    throw Error(ErrorCode::DegenerateInput,
                "KKT form needs at least one positive rho value");
  }
  const double s2 = sigma * sigma;
  double mass = 0.0;
  for (double r : rho.values()) {
    if (bw.a > r) mass += bw.a - r;
  }

  KktSolution out;
  out.a = bw.a;
  out.lambda = s2 / mass;
  out.b = out.lambda * bw.a;
  out.weights.weights.reserve(rho.size());
  for (double r : rho.values()) {
    const double v = out.b - out.lambda * r;
    out.weights.weights.push_back(v > 0.0 ? v / s2 : 0.0);
  }
  return out;
}

}  // namespace owf
