#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "owf/filters.hpp"
#include "owf/grid_image.hpp"

namespace owf {

// ---- image files ---------------------------------------------------------

/// Reads an 8-bit binary PGM (P5, maxval 255) or, when built with libpng, an
/// 8-bit grayscale PNG. Distinct errors: FileNotFound, MalformedHeader,
/// UnsupportedFormat, IoFailure.
GrayImage read_image(const std::filesystem::path& path);

/// Clamps to [0, 255], rounds half away from zero and writes P5 with maxval
/// 255. Throws IoFailure if the file cannot be written.
void write_image(const GrayImage& img, const std::filesystem::path& path);

GrayImage read_pgm(std::istream& in);
void write_pgm(const GrayImage& img, std::ostream& out);

/// The byte write_image stores for a value.
std::uint8_t quantize(double v);

/// Copy of img with every value clamped to [0, 255].
GrayImage clamp_to_8bit(const GrayImage& img);

bool png_supported();

// ---- noise ---------------------------------------------------------------

struct NoiseSpec {
  double sigma = 20.0;
  std::uint64_t seed = 0;
};

/// clean + sigma * z with z drawn in row-major order from a mt19937_64 seeded
/// with spec.seed. Unclamped. Throws InvalidParameter if sigma <= 0.
GrayImage add_noise(const GrayImage& clean, const NoiseSpec& spec);

// ---- metrics -------------------------------------------------------------

struct MetricsReport {
  double mse = 0.0;
  /// +infinity when mse == 0.
  double psnr_db = std::numeric_limits<double>::infinity();
};

/// Throws DimensionMismatch when the images differ in size.
MetricsReport compute_metrics(const GrayImage& reference, const GrayImage& candidate);

/// "inf" for an infinite PSNR, otherwise fixed with `digits` decimals.
std::string format_psnr(double psnr_db, int digits = 2);

// ---- benchmark -----------------------------------------------------------

struct NamedImage {
  std::string name;
  GrayImage image;
};

/// One benchmark configuration; sigma comes from the sweep.
struct BenchConfig {
  FilterVariant variant = FilterVariant::Owf;
  SimilarityKernel kernel = SimilarityKernel::k0();
  int patch_side = 21;
  int search_side = 13;
};

struct BenchRow {
  std::string image;
  double sigma = 0.0;
  std::string filter;
  std::string kernel;
  int patch_side = 0;
  int search_side = 0;
  double psnr_db = 0.0;
  double seconds = 0.0;
  /// Best smoothing for NLM rows; 0 otherwise. Not part of the CSV.
  double nlm_smoothing = 0.0;
};

struct BenchOptions {
  std::uint64_t seed = 0;
  int workers = 1;
  /// NLM smoothing grid as multiples of sigma.
  std::vector<double> nlm_factors;
};

/// 0.30, 0.35, ..., 1.50.
std::vector<double> default_nlm_factors();

/// One row per filter variant at the 21x21 / 13x13 defaults: oracle, OWF with
/// K_r, K_g and K_0, the split variant and NLM.
std::vector<BenchConfig> variant_configs();

/// Oracle with M in {11..17}^2 and OWF-K_0 with m in {11..21}^2, M in
/// {11..17}^2.
std::vector<BenchConfig> table_configs();

/// Noise seed for one (image, sigma) pair, derived from the base seed.
std::uint64_t derive_seed(std::uint64_t base, const std::string& image, double sigma);

/// Runs every (image, sigma, config) combination. Rows come back sorted by
/// image, sigma and then config order. NLM rows report the best PSNR over
/// options.nlm_factors.
std::vector<BenchRow> run_bench(const std::vector<NamedImage>& corpus,
                                const std::vector<double>& sigmas,
                                const std::vector<BenchConfig>& configs,
                                const BenchOptions& options);

/// Loads every .pgm/.png in dir (sorted by name). Unreadable files are
/// reported on `log` and skipped.
std::vector<NamedImage> load_corpus(const std::filesystem::path& dir, std::ostream& log);

/// CSV with header image,sigma,filter,kernel,patch,search,psnr_db,seconds.
/// With `timing` false the seconds column is written as 0 so repeated runs
/// produce identical bytes.
void write_csv(const std::vector<BenchRow>& rows, std::ostream& out, bool timing = true);

/// Aligned human-readable table.
void write_table(const std::vector<BenchRow>& rows, std::ostream& out);

}  // namespace owf
