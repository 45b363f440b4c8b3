#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

#include "owf/harness.hpp"

namespace owf {

GrayImage add_noise(const GrayImage& clean, const NoiseSpec& spec) {
  if (!(spec.sigma > 0.0) || !std::isfinite(spec.sigma)) {
    throw Error(ErrorCode::InvalidParameter, "noise sigma must be positive and finite");
  }
  std::mt19937_64 gen(spec.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  GrayImage out = clean;
  for (double& v : out.values()) v += spec.sigma * normal(gen);
  return out;
}

MetricsReport compute_metrics(const GrayImage& reference, const GrayImage& candidate) {
  if (reference.width() != candidate.width() || reference.height() != candidate.height()) {
    throw Error(ErrorCode::DimensionMismatch, "images differ in size");
  }
  const auto a = reference.values();
  const auto b = candidate.values();
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  MetricsReport r;
  r.mse = sum / static_cast<double>(a.size());
  r.psnr_db = r.mse > 0.0 ? 10.0 * std::log10(255.0 * 255.0 / r.mse)
                          : std::numeric_limits<double>::infinity();
  return r;
}

std::string format_psnr(double psnr_db, int digits) {
  if (std::isinf(psnr_db)) return "inf";
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << psnr_db;
  return os.str();
}

std::vector<double> default_nlm_factors() {
  std::vector<double> f;
  for (int i = 30; i <= 150; i += 5) f.push_back(i / 100.0);
  return f;
}

std::vector<BenchConfig> variant_configs() {
  return {
      {FilterVariant::Oracle, SimilarityKernel::rect(), 0, 13},
      {FilterVariant::Owf, SimilarityKernel::rect(), 21, 13},
      {FilterVariant::Owf, SimilarityKernel::gauss(), 21, 13},
      {FilterVariant::Owf, SimilarityKernel::k0(), 21, 13},
      {FilterVariant::OwfSplit, SimilarityKernel::rect(), 21, 13},
      {FilterVariant::Nlm, SimilarityKernel::gauss(), 21, 13},
  };
}

std::vector<BenchConfig> table_configs() {
  std::vector<BenchConfig> out;
  for (int search = 11; search <= 17; search += 2) {
    out.push_back({FilterVariant::Oracle, SimilarityKernel::rect(), 0, search});
  }
  for (int search = 11; search <= 17; search += 2) {
    for (int patch = 11; patch <= 21; patch += 2) {
      out.push_back({FilterVariant::Owf, SimilarityKernel::k0(), patch, search});
    }
  }
  return out;
}

std::uint64_t derive_seed(std::uint64_t base, const std::string& image, double sigma) {
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a
  for (unsigned char ch : image) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  std::uint64_t z = base ^ h ^ (static_cast<std::uint64_t>(std::llround(sigma * 1000.0)) *
                                0x9E3779B97F4A7C15ull);
  // splitmix64 finaliser
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

namespace {

std::string kernel_column(const BenchConfig& c) {
  switch (c.variant) {
    case FilterVariant::Oracle: return "none";
    case FilterVariant::OwfSplit: return "rect";
    case FilterVariant::Nlm: return "gauss";
    case FilterVariant::Owf: return kernel_name(c.kernel.kind);
  }
  return "?";
}

FilterConfig to_filter_config(const BenchConfig& c, double sigma, int workers) {
  FilterConfig cfg;
  cfg.sigma = sigma;
  cfg.variant = c.variant;
  cfg.kernel = c.kernel;
  cfg.patch_radius = c.variant == FilterVariant::Oracle ? 0 : (c.patch_side - 1) / 2;
  cfg.search_radius = (c.search_side - 1) / 2;
  cfg.workers = workers;
  return cfg;
}

}  // namespace

std::vector<BenchRow> run_bench(const std::vector<NamedImage>& corpus,
                                const std::vector<double>& sigmas,
                                const std::vector<BenchConfig>& configs,
                                const BenchOptions& options) {
  using clock = std::chrono::steady_clock;
  const auto factors = options.nlm_factors.empty() ? default_nlm_factors() : options.nlm_factors;

  std::vector<NamedImage> images = corpus;
  std::stable_sort(images.begin(), images.end(),
                   [](const NamedImage& a, const NamedImage& b) { return a.name < b.name; });
  std::vector<double> sig = sigmas;
  std::sort(sig.begin(), sig.end());

  std::vector<BenchRow> rows;
  for (const auto& img : images) {
    for (double sigma : sig) {
      const GrayImage noisy =
          add_noise(img.image, {sigma, derive_seed(options.seed, img.name, sigma)});
      for (const auto& c : configs) {
        const FilterConfig cfg = to_filter_config(c, sigma, options.workers);
        BenchRow row{img.name, sigma, variant_name(c.variant), kernel_column(c),
                     c.variant == FilterVariant::Oracle ? 0 : c.patch_side, c.search_side};
        const auto start = clock::now();
        if (c.variant == FilterVariant::Nlm) {
          std::vector<double> hs;
          for (double f : factors) hs.push_back(f * sigma);
          const auto outs = nlm_denoise_sweep(noisy, cfg, hs);
          row.psnr_db = -std::numeric_limits<double>::infinity();
          for (std::size_t k = 0; k < outs.size(); ++k) {
            const double p = compute_metrics(img.image, clamp_to_8bit(outs[k])).psnr_db;
            if (p > row.psnr_db) {
              row.psnr_db = p;
              row.nlm_smoothing = hs[k];
            }
          }
        } else {
          const auto res = denoise(noisy, cfg, &img.image);
          row.psnr_db = compute_metrics(img.image, clamp_to_8bit(res.output)).psnr_db;
        }
        row.seconds = std::chrono::duration<double>(clock::now() - start).count();
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

std::vector<NamedImage> load_corpus(const std::filesystem::path& dir, std::ostream& log) {
  std::vector<std::filesystem::path> files;
  std::error_code ec;
  for (const auto& entry : std::filesystem::directory_iterator(dir, ec)) {
    const auto ext = entry.path().extension().string();
    if (entry.is_regular_file() && (ext == ".pgm" || ext == ".png")) files.push_back(entry.path());
  }
  if (ec) log << "cannot list " << dir << ": " << ec.message() << '\n';
  std::sort(files.begin(), files.end());

  std::vector<NamedImage> out;
  for (const auto& f : files) {
    try {
      out.push_back({f.stem().string(), read_image(f)});
    } catch (const Error& e) {
      log << "skipping " << f.string() << ": " << e.what() << '\n';
    }
  }
  return out;
}

void write_csv(const std::vector<BenchRow>& rows, std::ostream& out, bool timing) {
  out << "image,sigma,filter,kernel,patch,search,psnr_db,seconds\n";
  char buf[64];
  for (const auto& r : rows) {
    out << r.image << ',';
    std::snprintf(buf, sizeof buf, "%g", r.sigma);
    out << buf << ',' << r.filter << ',' << r.kernel << ',' << r.patch_side << ','
        << r.search_side << ',' << format_psnr(r.psnr_db, 4) << ',';
    std::snprintf(buf, sizeof buf, "%.3f", timing ? r.seconds : 0.0);
    out << buf << '\n';
  }
}

void write_table(const std::vector<BenchRow>& rows, std::ostream& out) {
  out << std::left << std::setw(12) << "image" << std::right << std::setw(7) << "sigma"
      << "  " << std::left << std::setw(10) << "filter" << std::setw(7) << "kernel"
      << std::right << std::setw(9) << "m" << std::setw(9) << "M" << std::setw(10) << "PSNR"
      << std::setw(10) << "seconds" << '\n';
  for (const auto& r : rows) {
    const auto side = [](int s) { return s == 0 ? std::string("-") : std::to_string(s) + "x" + std::to_string(s); };
    out << std::left << std::setw(12) << r.image << std::right << std::setw(7) << r.sigma << "  "
        << std::left << std::setw(10) << r.filter << std::setw(7) << r.kernel << std::right
        << std::setw(9) << side(r.patch_side) << std::setw(9) << side(r.search_side)
        << std::setw(10) << format_psnr(r.psnr_db) << std::setw(10) << std::fixed
        << std::setprecision(2) << r.seconds << '\n';
    out << std::defaultfloat;
  }
}

}  // namespace owf
