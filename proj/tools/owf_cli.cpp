// owf: command-line front end for the denoising library.
//
//   owf denoise   --input noisy.pgm --output out.pgm --sigma 20 [--filter owf]
//   owf add-noise --input clean.pgm --output noisy.pgm --sigma 20 --seed 1
//   owf psnr      --reference clean.pgm --input out.pgm
//   owf bench     --images data/ --sigmas 10,20,30 --out table.csv

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "owf/filters.hpp"
#include "owf/harness.hpp"

namespace {

constexpr int kUsageError = 2;
constexpr int kRuntimeError = 1;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int side_to_radius(int side, int min_side, const char* flag) {
  if (side < min_side || side % 2 == 0) {
    throw UsageError(std::string(flag) + " must be an odd integer >= " + std::to_string(min_side));
  }
  return (side - 1) / 2;
}

owf::PixelCoord parse_coord(const std::string& s) {
  owf::PixelCoord p;
  char comma = 0;
  std::istringstream is(s);
  if (!(is >> p.row >> comma >> p.col) || comma != ',' || !is.eof()) {
    throw UsageError("--dump-weights expects ROW,COL");
  }
  return p;
}

void write_grid(const owf::GrayImage& img, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw owf::Error(owf::ErrorCode::IoFailure, "cannot write " + path);
  out << std::setprecision(17);
  for (int r = 0; r < img.height(); ++r) {
    for (int c = 0; c < img.width(); ++c) out << (c ? " " : "") << img(r, c);
    out << '\n';
  }
}

struct DenoiseArgs {
  std::string input, output, clean, dump_weights, dump_bandwidth;
  std::string filter = "owf", kernel = "k0";
  double sigma = 0.0, nlm_smoothing = 0.0, gauss_bandwidth = 0.0;
  int patch = 21, search = 13, workers = 1;
};

int run_denoise(const DenoiseArgs& a) {
  owf::FilterConfig cfg;
  cfg.sigma = a.sigma;
  cfg.variant = owf::parse_variant(a.filter);
  cfg.kernel.kind = owf::parse_kernel(a.kernel);
  cfg.kernel.gauss_bandwidth = a.gauss_bandwidth;
  cfg.patch_radius = side_to_radius(a.patch, 1, "--patch");
  cfg.search_radius = side_to_radius(a.search, 3, "--search");
  cfg.nlm_smoothing = a.nlm_smoothing;
  cfg.workers = a.workers;
  cfg.record_bandwidth = !a.dump_bandwidth.empty();
  if (cfg.variant == owf::FilterVariant::Oracle && a.clean.empty()) {
    throw UsageError("--filter oracle requires --clean");
  }

  const auto noisy = owf::read_image(a.input);
  std::optional<owf::GrayImage> clean;
  if (!a.clean.empty()) clean = owf::read_image(a.clean);
  const owf::GrayImage* clean_ptr = clean ? &*clean : nullptr;

  if (!a.dump_weights.empty()) {
    const auto dump = owf::export_weight_map(noisy, cfg, parse_coord(a.dump_weights), clean_ptr);
    std::cout << "# x0=" << dump.x0.row << ',' << dump.x0.col << " bandwidth="
              << std::setprecision(17) << dump.bandwidth << " degenerate=" << dump.degenerate
              << "\nrow,col,weight\n";
    for (std::size_t i = 0; i < dump.coords.size(); ++i) {
      std::cout << dump.coords[i].row << ',' << dump.coords[i].col << ',' << dump.weights[i]
                << '\n';
    }
  }

  const auto res = owf::denoise(noisy, cfg, clean_ptr);
  owf::write_image(res.output, a.output);
  if (res.per_pixel_bandwidth) write_grid(*res.per_pixel_bandwidth, a.dump_bandwidth);
  if (clean) {
    const auto m = owf::compute_metrics(*clean, owf::clamp_to_8bit(res.output));
    std::cerr << "psnr " << owf::format_psnr(m.psnr_db) << " dB\n";
  }
  return 0;
}

std::vector<double> parse_sigmas(const std::string& s) {
  std::vector<double> out;
  std::istringstream is(s);
  std::string tok;
  while (std::getline(is, tok, ',')) {
    if (tok.empty()) continue;
    try {
      std::size_t used = 0;
      out.push_back(std::stod(tok, &used));
      if (used != tok.size() || !(out.back() > 0.0)) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw UsageError("--sigmas expects positive numbers, got '" + tok + "'");
    }
  }
  return out;
}

struct BenchArgs {
  std::string images, out, sigmas = "10,20,30", grid = "variants", filters;
  std::uint64_t seed = 2012;
  int workers = 1;
  bool deterministic = false;
};

int run_bench_cmd(const BenchArgs& a) {
  const auto sigmas = parse_sigmas(a.sigmas);
  auto configs = a.grid == "tables" ? owf::table_configs() : owf::variant_configs();
  if (a.grid != "tables" && a.grid != "variants") throw UsageError("--grid must be variants or tables");
  if (!a.filters.empty()) {
    std::vector<owf::FilterVariant> keep;
    std::istringstream is(a.filters);
    for (std::string tok; std::getline(is, tok, ',');) keep.push_back(owf::parse_variant(tok));
    std::erase_if(configs, [&](const owf::BenchConfig& c) {
      return std::find(keep.begin(), keep.end(), c.variant) == keep.end();
    });
  }

  std::vector<owf::NamedImage> corpus;
  if (!sigmas.empty()) {
    corpus = owf::load_corpus(a.images, std::cerr);
    if (corpus.empty()) std::cerr << "no readable images in " << a.images << '\n';
  }
  owf::BenchOptions opt;
  opt.seed = a.seed;
  opt.workers = a.workers;
  const auto rows = owf::run_bench(corpus, sigmas, configs, opt);

  owf::write_table(rows, std::cout);
  if (!a.out.empty()) {
    std::ofstream out(a.out);
    if (!out) throw owf::Error(owf::ErrorCode::IoFailure, "cannot write " + a.out);
    owf::write_csv(rows, out, !a.deterministic);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal Weights Filter denoising"};
  app.require_subcommand(1);

  DenoiseArgs dn;
  auto* den = app.add_subcommand("denoise", "denoise a grayscale image");
  den->add_option("--input", dn.input, "noisy image (PGM/PNG)")->required();
  den->add_option("--output", dn.output, "denoised image (PGM)")->required();
  den->add_option("--sigma", dn.sigma, "noise standard deviation")->required();
  den->add_option("--filter", dn.filter, "owf | owf-split | oracle | nlm")
      ->check(CLI::IsMember({"owf", "owf-split", "oracle", "nlm"}));
  den->add_option("--kernel", dn.kernel, "patch kernel: rect | gauss | k0")
      ->check(CLI::IsMember({"rect", "gauss", "k0"}));
  den->add_option("--patch", dn.patch, "patch side length (odd)");
  den->add_option("--search", dn.search, "search window side length (odd)");
  den->add_option("--clean", dn.clean, "clean reference (required by oracle)");
  den->add_option("--dump-weights", dn.dump_weights, "print the weight map at ROW,COL");
  den->add_option("--dump-bandwidth", dn.dump_bandwidth, "write per-pixel bandwidth grid");
  den->add_option("--nlm-smoothing", dn.nlm_smoothing, "NLM h (default 0.55*sigma)");
  den->add_option("--gauss-bandwidth", dn.gauss_bandwidth, "h_g in pixel^2 (default r^2)");
  den->add_option("--workers", dn.workers, "worker threads")->check(CLI::PositiveNumber);

  std::string an_in, an_out;
  owf::NoiseSpec noise;
  auto* add = app.add_subcommand("add-noise", "add seeded Gaussian noise");
  add->add_option("--input", an_in, "clean image")->required();
  add->add_option("--output", an_out, "noisy image (clamped and rounded to 8 bits)")->required();
  add->add_option("--sigma", noise.sigma, "noise standard deviation")->required();
  add->add_option("--seed", noise.seed, "generator seed");

  std::string ps_ref, ps_in;
  bool ps_mse = false;
  auto* psnr = app.add_subcommand("psnr", "PSNR of an image against a reference");
  psnr->add_option("--reference", ps_ref, "reference image")->required();
  psnr->add_option("--input", ps_in, "image to score")->required();
  psnr->add_flag("--mse", ps_mse, "also print the MSE");

  BenchArgs bn;
  auto* bench = app.add_subcommand("bench", "PSNR benchmark over a directory of clean images");
  bench->add_option("--images", bn.images, "directory with clean .pgm/.png images")->required();
  bench->add_option("--sigmas", bn.sigmas, "comma-separated noise levels");
  bench->add_option("--out", bn.out, "CSV output path");
  bench->add_option("--grid", bn.grid, "variants | tables");
  bench->add_option("--filters", bn.filters, "restrict to these filters (comma-separated)");
  bench->add_option("--seed", bn.seed, "base noise seed");
  bench->add_option("--workers", bn.workers, "worker threads")->check(CLI::PositiveNumber);
  bench->add_flag("--deterministic", bn.deterministic, "write 0 in the seconds column");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kUsageError;
  }

  try {
    if (*den) return run_denoise(dn);
    if (*add) {
      owf::write_image(owf::add_noise(owf::read_image(an_in), noise), an_out);
      return 0;
    }
    if (*psnr) {
      const auto m = owf::compute_metrics(owf::read_image(ps_ref), owf::read_image(ps_in));
      std::cout << owf::format_psnr(m.psnr_db) << '\n';
      if (ps_mse) std::cout << "mse " << std::setprecision(10) << m.mse << '\n';
      return 0;
    }
    if (*bench) return run_bench_cmd(bn);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsageError;
  } catch (const owf::Error& e) {
    std::cerr << "error (" << owf::to_string(e.code()) << "): " << e.what() << '\n';
    return kRuntimeError;
  }
  return kUsageError;
}
