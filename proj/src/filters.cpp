#include "owf/filters.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace owf {

std::string variant_name(FilterVariant v) {
  switch (v) {
    case FilterVariant::Owf: return "owf";
    case FilterVariant::OwfSplit: return "owf-split";
    case FilterVariant::Oracle: return "oracle";
    case FilterVariant::Nlm: return "nlm";
  }
  return "?";
}

FilterVariant parse_variant(const std::string& name) {
  if (name == "owf") return FilterVariant::Owf;
  if (name == "owf-split") return FilterVariant::OwfSplit;
  if (name == "oracle") return FilterVariant::Oracle;
  if (name == "nlm") return FilterVariant::Nlm;
  throw Error(ErrorCode::InvalidParameter, "unknown filter '" + name + "'");
}

void validate(const FilterConfig& cfg) {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::InvalidParameter, msg); };
  if (!(cfg.sigma > 0.0) || !std::isfinite(cfg.sigma)) fail("sigma must be positive and finite");
  if (cfg.patch_radius < 0) fail("patch radius must be nonnegative");
  if (cfg.search_radius < 1) fail("search radius must be at least 1");
  if (cfg.workers < 1) fail("worker count must be at least 1");
  if (!std::isfinite(cfg.nlm_smoothing)) fail("nlm smoothing must be finite");
  if (!std::isfinite(cfg.kernel.gauss_bandwidth)) fail("gaussian bandwidth must be finite");
  if (cfg.variant == FilterVariant::OwfSplit && cfg.patch_radius < 1) {
    fail("the split filter needs patch radius >= 1");
  }
  if (cfg.variant == FilterVariant::Owf && cfg.kernel.kind == SimilarityKernel::Kind::K0 &&
      cfg.patch_radius < 1) {
    fail("the K0 kernel needs patch radius >= 1");
  }
}

double effective_nlm_smoothing(const FilterConfig& cfg) {
  return cfg.nlm_smoothing > 0.0 ? cfg.nlm_smoothing : 0.55 * cfg.sigma;
}

namespace {

// Immutable state shared by every row worker.
struct Plan {
  FilterVariant variant;
  int width = 0;
  int height = 0;
  int patch_radius = 0;
  double sigma = 0.0;
  double noise_floor = 0.0;  // sqrt(2) * sigma
  std::vector<PixelCoord> search;  // offsets in window order
  std::vector<double> mask;        // (2p+1)^2 patch weights, zeros are skipped
  double mask_total = 0.0;
  GrayImage padded;        // noisy image mirrored by search + patch radius
  int margin = 0;
  GrayImage padded_clean;  // oracle only, same margin
};

SimilarityKernel nlm_kernel(const FilterConfig& cfg) {
  if (cfg.kernel.kind == SimilarityKernel::Kind::Gauss) return cfg.kernel;
  return SimilarityKernel::gauss();
}

Plan make_plan(const GrayImage& noisy, const FilterConfig& cfg, const GrayImage* clean) {
  validate(cfg);
  if (noisy.empty()) throw Error(ErrorCode::InvalidParameter, "empty input image");

  Plan plan;
  plan.variant = cfg.variant;
  plan.width = noisy.width();
  plan.height = noisy.height();
  plan.sigma = cfg.sigma;
  plan.noise_floor = std::sqrt(2.0) * cfg.sigma;

  const auto full = window_offsets(cfg.search_radius);
  plan.search = cfg.variant == FilterVariant::OwfSplit
                    ? parity_filter(full, {0, 0}, PixelParity::Even)
                    : full;

  switch (cfg.variant) {
    case FilterVariant::Oracle:
      if (clean == nullptr) {
        throw Error(ErrorCode::InvalidParameter, "the oracle filter needs the clean image");
      }
      if (clean->width() != noisy.width() || clean->height() != noisy.height()) {
        throw Error(ErrorCode::InvalidParameter, "clean and noisy images differ in size");
      }
      plan.patch_radius = 0;
      break;
    case FilterVariant::Owf:
      plan.patch_radius = cfg.patch_radius;
      plan.mask = kernel_mask(cfg.kernel, cfg.patch_radius);
      break;
    case FilterVariant::OwfSplit: {
      plan.patch_radius = cfg.patch_radius;
      const auto all = window_offsets(cfg.patch_radius);
      plan.mask.assign(all.size(), 0.0);
      for (std::size_t i = 0; i < all.size(); ++i) {
        if (((all[i].row + all[i].col) % 2 + 2) % 2 == 1) plan.mask[i] = 1.0;
      }
      break;
    }
    case FilterVariant::Nlm:
      plan.patch_radius = cfg.patch_radius;
      plan.mask = kernel_mask(nlm_kernel(cfg), cfg.patch_radius);
      break;
  }
  plan.mask_total = mask_sum(plan.mask);

  plan.margin = cfg.search_radius + plan.patch_radius;
  plan.padded = mirror_pad(noisy, plan.margin);
  if (cfg.variant == FilterVariant::Oracle) plan.padded_clean = mirror_pad(*clean, plan.margin);
  return plan;
}

// Per-worker scratch space.
struct RowBuffers {
  std::vector<double> dist;  // search.size() x width, patch distance accumulators
  std::vector<double> rho;
  std::vector<double> values;
};

// Fills buf.dist[s * width + c] with sum_z K(z) (Y(x0+s+z) - Y(x0+z))^2 for all
// pixels of row r0. Each accumulator sees its terms in patch row-major order,
// the same order patch_distance uses.
void accumulate_row(const Plan& plan, int r0, RowBuffers& buf) {
  const int w = plan.width;
  const int p = plan.patch_radius;
  const int side = 2 * p + 1;
  const int stride = plan.padded.width();
  const double* base = plan.padded.values().data();
  buf.dist.assign(plan.search.size() * static_cast<std::size_t>(w), 0.0);

  for (std::size_t s = 0; s < plan.search.size(); ++s) {
    double* acc = buf.dist.data() + s * w;
    const PixelCoord off = plan.search[s];
    for (int dr = -p; dr <= p; ++dr) {
      const double* row_x =
          base + static_cast<std::ptrdiff_t>(r0 + plan.margin + off.row + dr) * stride +
          (plan.margin + off.col - p);
      const double* row_x0 =
          base + static_cast<std::ptrdiff_t>(r0 + plan.margin + dr) * stride + (plan.margin - p);
      for (int j = 0; j < side; ++j) {
        const double kw = plan.mask[static_cast<std::size_t>(dr + p) * side + j];
        if (kw == 0.0) continue;
        const double* a = row_x + j;
        const double* b = row_x0 + j;
        for (int c = 0; c < w; ++c) {
          const double d = a[c] - b[c];
          acc[c] += kw * (d * d);
        }
      }
    }
  }
}

// Scalar version of accumulate_row for one pixel and one search offset.
double accumulate_pixel(const Plan& plan, PixelCoord x0, PixelCoord off) {
  const int p = plan.patch_radius;
  const int side = 2 * p + 1;
  double acc = 0.0;
  for (int dr = -p; dr <= p; ++dr) {
    for (int j = 0; j < side; ++j) {
      const double kw = plan.mask[static_cast<std::size_t>(dr + p) * side + j];
      if (kw == 0.0) continue;
      const int dc = j - p;
      const double d = plan.padded(x0.row + plan.margin + off.row + dr,
                                   x0.col + plan.margin + off.col + dc) -
                       plan.padded(x0.row + plan.margin + dr, x0.col + plan.margin + dc);
      acc += kw * (d * d);
    }
  }
  return acc;
}

double noisy_at(const Plan& plan, PixelCoord x0, PixelCoord off) {
  return plan.padded(x0.row + plan.margin + off.row, x0.col + plan.margin + off.col);
}

// rho profile (or squared NLM distances) for pixel x0 given its accumulators.
template <typename AccFn>
void fill_profile(const Plan& plan, PixelCoord x0, AccFn&& acc_of, std::vector<double>& out) {
  out.resize(plan.search.size());
  for (std::size_t s = 0; s < plan.search.size(); ++s) {
    if (plan.variant == FilterVariant::Oracle) {
      const PixelCoord x = x0 + plan.search[s];
      out[s] = std::abs(plan.padded_clean(x.row + plan.margin, x.col + plan.margin) -
                        plan.padded_clean(x0.row + plan.margin, x0.col + plan.margin));
    } else if (plan.variant == FilterVariant::Nlm) {
      out[s] = acc_of(s) / plan.mask_total;
    } else {
      const double r = std::sqrt(acc_of(s) / plan.mask_total) - plan.noise_floor;
      out[s] = r > 0.0 ? r : 0.0;
    }
  }
}

std::vector<double> nlm_weights(const std::vector<double>& dist2, double h) {
  std::vector<double> w(dist2.size());
  const double inv = 1.0 / (h * h);
  double total = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    w[i] = std::exp(-dist2[i] * inv);
    total += w[i];
  }
  for (double& x : w) x /= total;
  return w;
}

double dot(const std::vector<double>& w, const std::vector<double>& y) {
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * y[i];
  return s;
}

struct Outputs {
  std::vector<GrayImage> images;  // one per NLM smoothing, otherwise one
  std::optional<GrayImage> bandwidth;
};

void process_row(const Plan& plan, int r0, const std::vector<double>& smoothings,
                 RowBuffers& buf, Outputs& out) {
  const int w = plan.width;
  const std::size_t n = plan.search.size();
  if (plan.variant != FilterVariant::Oracle) accumulate_row(plan, r0, buf);
  buf.values.resize(n);

  for (int c = 0; c < w; ++c) {
    const PixelCoord x0{r0, c};
    fill_profile(plan, x0, [&](std::size_t s) { return buf.dist[s * w + c]; }, buf.rho);
    for (std::size_t s = 0; s < n; ++s) buf.values[s] = noisy_at(plan, x0, plan.search[s]);

    if (plan.variant == FilterVariant::Nlm) {
      for (std::size_t k = 0; k < smoothings.size(); ++k) {
        out.images[k](r0, c) = dot(nlm_weights(buf.rho, smoothings[k]), buf.values);
      }
      continue;
    }
    const RhoProfile profile(buf.rho);
    const auto bw = solve_bandwidth(profile, plan.sigma);
    const auto weights = triangular_weights(profile, bw);
    out.images[0](r0, c) = dot(weights.weights, buf.values);
    if (out.bandwidth) (*out.bandwidth)(r0, c) = bw.degenerate ? 0.0 : bw.a;
  }
}

Outputs run(const Plan& plan, int workers, const std::vector<double>& smoothings,
            bool record_bandwidth) {
  Outputs out;
  const std::size_t count = plan.variant == FilterVariant::Nlm ? smoothings.size() : 1;
  for (std::size_t k = 0; k < count; ++k) out.images.emplace_back(plan.width, plan.height);
  if (record_bandwidth && plan.variant != FilterVariant::Nlm) {
    out.bandwidth.emplace(plan.width, plan.height);
  }

  // Rows are dealt round-robin; every pixel is computed by exactly one worker
  // from immutable inputs, so the result does not depend on `workers`.
  const int nthreads = std::max(1, std::min(workers, plan.height));
  auto work = [&](int first) {
    RowBuffers buf;
    for (int r = first; r < plan.height; r += nthreads) process_row(plan, r, smoothings, buf, out);
  };
  if (nthreads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(work, t);
    for (auto& t : pool) t.join();
  }
  return out;
}

DenoiseResult single(const GrayImage& noisy, FilterConfig cfg, FilterVariant variant,
                     const GrayImage* clean) {
  cfg.variant = variant;
  const Plan plan = make_plan(noisy, cfg, clean);
  auto out = run(plan, cfg.workers, {effective_nlm_smoothing(cfg)}, cfg.record_bandwidth);
  return {std::move(out.images.front()), std::move(out.bandwidth)};
}

}  // namespace

DenoiseResult oracle_filter(const GrayImage& noisy, const GrayImage& clean,
                            const FilterConfig& cfg) {
  return single(noisy, cfg, FilterVariant::Oracle, &clean);
}

DenoiseResult owf_denoise(const GrayImage& noisy, const FilterConfig& cfg) {
  return single(noisy, cfg, FilterVariant::Owf, nullptr);
}

DenoiseResult owf_split_denoise(const GrayImage& noisy, const FilterConfig& cfg) {
  return single(noisy, cfg, FilterVariant::OwfSplit, nullptr);
}

DenoiseResult nlm_denoise(const GrayImage& noisy, const FilterConfig& cfg) {
  return single(noisy, cfg, FilterVariant::Nlm, nullptr);
}

std::vector<GrayImage> nlm_denoise_sweep(const GrayImage& noisy, const FilterConfig& cfg,
                                         const std::vector<double>& smoothings) {
  for (double h : smoothings) {
    if (!(h > 0.0) || !std::isfinite(h)) {
      throw Error(ErrorCode::InvalidParameter, "nlm smoothing values must be positive");
    }
  }
  if (smoothings.empty()) return {};
  FilterConfig c = cfg;
  c.variant = FilterVariant::Nlm;
  const Plan plan = make_plan(noisy, c, nullptr);
  return run(plan, c.workers, smoothings, false).images;
}

DenoiseResult denoise(const GrayImage& noisy, const FilterConfig& cfg, const GrayImage* clean) {
  switch (cfg.variant) {
    case FilterVariant::Owf: return owf_denoise(noisy, cfg);
    case FilterVariant::OwfSplit: return owf_split_denoise(noisy, cfg);
    case FilterVariant::Oracle:
      if (clean == nullptr) {
        throw Error(ErrorCode::InvalidParameter, "the oracle filter needs the clean image");
      }
      return oracle_filter(noisy, *clean, cfg);
    case FilterVariant::Nlm: return nlm_denoise(noisy, cfg);
  }
  throw Error(ErrorCode::InvalidParameter, "unknown filter variant");
}

WeightDump export_weight_map(const GrayImage& noisy, const FilterConfig& cfg, PixelCoord x0,
                             const GrayImage* clean) {
  if (!noisy.contains(x0)) {
    throw Error(ErrorCode::InvalidParameter, "pixel lies outside the image");
  }
  const Plan plan = make_plan(noisy, cfg, clean);

  WeightDump dump;
  dump.x0 = x0;
  for (const auto& s : plan.search) dump.coords.push_back(x0 + s);

  std::vector<double> profile;
  fill_profile(plan, x0, [&](std::size_t s) { return accumulate_pixel(plan, x0, plan.search[s]); },
               profile);
  if (plan.variant == FilterVariant::Nlm) {
    dump.weights.weights = nlm_weights(profile, effective_nlm_smoothing(cfg));
    return dump;
  }
  const RhoProfile rho(profile);
  const auto bw = solve_bandwidth(rho, plan.sigma);
  dump.weights = triangular_weights(rho, bw);
  dump.degenerate = bw.degenerate;
  dump.bandwidth = bw.degenerate ? 0.0 : bw.a;
  return dump;
}

}  // namespace owf
