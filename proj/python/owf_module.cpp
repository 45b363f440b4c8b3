#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>

#include "owf/filters.hpp"
#include "owf/harness.hpp"
#include "owf/weight_solver.hpp"

namespace py = pybind11;
using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

namespace {

owf::GrayImage to_image(const Array& a) {
  if (a.ndim() != 2) throw owf::Error(owf::ErrorCode::InvalidParameter, "expected a 2-D array");
  const auto h = static_cast<int>(a.shape(0));
  const auto w = static_cast<int>(a.shape(1));
  std::vector<double> v(a.data(), a.data() + a.size());
  return owf::GrayImage(w, h, std::move(v));
}

Array to_array(const owf::GrayImage& img) {
  Array out({img.height(), img.width()});
  std::copy(img.values().begin(), img.values().end(), out.mutable_data());
  return out;
}

int side_to_radius(int side, const char* what) {
  if (side < 1 || side % 2 == 0) {
    throw owf::Error(owf::ErrorCode::InvalidParameter, std::string(what) + " must be odd and >= 1");
  }
  return (side - 1) / 2;
}

owf::FilterConfig make_config(double sigma, const std::string& filter, const std::string& kernel,
                              int patch, int search, double nlm_smoothing, double gauss_bandwidth,
                              int workers) {
  owf::FilterConfig cfg;
  cfg.sigma = sigma;
  cfg.variant = owf::parse_variant(filter);
  cfg.kernel.kind = owf::parse_kernel(kernel);
  cfg.kernel.gauss_bandwidth = gauss_bandwidth;
  cfg.patch_radius = side_to_radius(patch, "patch");
  cfg.search_radius = side_to_radius(search, "search");
  cfg.nlm_smoothing = nlm_smoothing;
  cfg.workers = workers;
  return cfg;
}

py::object run(const Array& noisy, const owf::FilterConfig& cfg, const Array* clean,
               bool return_bandwidth) {
  std::optional<owf::GrayImage> c;
  if (clean) c = to_image(*clean);
  owf::FilterConfig local = cfg;
  local.record_bandwidth = return_bandwidth;
  owf::DenoiseResult res;
  {
    const auto y = to_image(noisy);
    py::gil_scoped_release release;
    res = owf::denoise(y, local, c ? &*c : nullptr);
  }
  if (!return_bandwidth) return to_array(res.output);
  return py::make_tuple(to_array(res.output), to_array(*res.per_pixel_bandwidth));
}

#define FILTER_ARGS                                                                    \
  py::arg("sigma"), py::arg("kernel") = "k0", py::arg("patch") = 21,                  \
      py::arg("search") = 13, py::arg("nlm_smoothing") = 0.0,                          \
      py::arg("gauss_bandwidth") = 0.0, py::arg("workers") = 1,                        \
      py::arg("return_bandwidth") = false

}  // namespace

PYBIND11_MODULE(_owf, m) {
  m.doc() = "Optimal Weights Filter denoising";

  static py::exception<owf::Error> error(m, "Error", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const owf::Error& e) {
      py::set_error(error, (std::string(owf::to_string(e.code())) + ": " + e.what()).c_str());
    }
  });

  m.def("read_image", [](const std::string& path) { return to_array(owf::read_image(path)); },
        py::arg("path"));
  m.def("write_image",
        [](const Array& img, const std::string& path) { owf::write_image(to_image(img), path); },
        py::arg("image"), py::arg("path"));

  m.def("add_noise",
        [](const Array& clean, double sigma, std::uint64_t seed) {
          return to_array(owf::add_noise(to_image(clean), {sigma, seed}));
        },
        py::arg("clean"), py::arg("sigma"), py::arg("seed") = 0);

  m.def("compute_metrics",
        [](const Array& ref, const Array& cand) {
          const auto r = owf::compute_metrics(to_image(ref), to_image(cand));
          return py::dict(py::arg("mse") = r.mse, py::arg("psnr_db") = r.psnr_db);
        },
        py::arg("reference"), py::arg("candidate"));
  m.def("psnr",
        [](const Array& ref, const Array& cand, bool clamp) {
          auto c = to_image(cand);
          if (clamp) c = owf::clamp_to_8bit(c);
          return owf::compute_metrics(to_image(ref), c).psnr_db;
        },
        py::arg("reference"), py::arg("candidate"), py::arg("clamp") = true,
        "PSNR in dB; the candidate is clamped to [0, 255] first unless clamp=False.");

  m.def("solve_bandwidth",
        [](const std::vector<double>& rho, double sigma) {
          const auto bw = owf::solve_bandwidth(owf::RhoProfile(rho), sigma);
          return py::dict(py::arg("a") = bw.degenerate ? INFINITY : bw.a,
                          py::arg("k_star") = bw.k_star, py::arg("degenerate") = bw.degenerate);
        },
        py::arg("rho"), py::arg("sigma"));
  m.def("optimal_weights",
        [](const std::vector<double>& rho, double sigma) {
          return owf::optimal_weights(owf::RhoProfile(rho), sigma).weights;
        },
        py::arg("rho"), py::arg("sigma"));
  m.def("kkt_weights",
        [](const std::vector<double>& rho, double sigma) {
          const auto k = owf::kkt_weights(owf::RhoProfile(rho), sigma);
          return py::dict(py::arg("weights") = k.weights.weights, py::arg("lambda_") = k.lambda,
                          py::arg("b") = k.b, py::arg("a") = k.a);
        },
        py::arg("rho"), py::arg("sigma"));

  m.def("denoise",
        [](const Array& noisy, double sigma, const std::string& filter, const std::string& kernel,
           int patch, int search, double nlm_h, double hg, int workers, bool bw,
           std::optional<Array> clean) {
          const auto cfg = make_config(sigma, filter, kernel, patch, search, nlm_h, hg, workers);
          return run(noisy, cfg, clean ? &*clean : nullptr, bw);
        },
        py::arg("noisy"), py::arg("sigma"), py::arg("filter") = "owf", py::arg("kernel") = "k0",
        py::arg("patch") = 21, py::arg("search") = 13, py::arg("nlm_smoothing") = 0.0,
        py::arg("gauss_bandwidth") = 0.0, py::arg("workers") = 1,
        py::arg("return_bandwidth") = false, py::arg("clean") = py::none());

  auto variant = [&m](const char* name, const char* filter, const char* doc) {
    m.def(
        name,
        [filter](const Array& noisy, double sigma, const std::string& kernel, int patch,
                 int search, double nlm_h, double hg, int workers, bool bw) {
          const auto cfg = make_config(sigma, filter, kernel, patch, search, nlm_h, hg, workers);
          return run(noisy, cfg, nullptr, bw);
        },
        py::arg("noisy"), FILTER_ARGS, doc);
  };
  variant("owf_denoise", "owf", "Optimal Weights Filter.");
  variant("owf_split_denoise", "owf-split", "Checkerboard split variant.");
  variant("nlm_denoise", "nlm", "Non-local means baseline.");

  m.def("oracle_filter",
        [](const Array& noisy, const Array& clean, double sigma, int search, int workers,
           bool bw) {
          auto cfg = make_config(sigma, "oracle", "rect", 1, search, 0.0, 0.0, workers);
          cfg.patch_radius = 0;
          return run(noisy, cfg, &clean, bw);
        },
        py::arg("noisy"), py::arg("clean"), py::arg("sigma"), py::arg("search") = 13,
        py::arg("workers") = 1, py::arg("return_bandwidth") = false);

  m.def("export_weight_map",
        [](const Array& noisy, int row, int col, double sigma, const std::string& filter,
           const std::string& kernel, int patch, int search, double nlm_h, double hg,
           std::optional<Array> clean) {
          auto cfg = make_config(sigma, filter, kernel, patch, search, nlm_h, hg, 1);
          if (cfg.variant == owf::FilterVariant::Oracle) cfg.patch_radius = 0;
          std::optional<owf::GrayImage> c;
          if (clean) c = to_image(*clean);
          const auto d = owf::export_weight_map(to_image(noisy), cfg, {row, col}, c ? &*c : nullptr);
          std::vector<std::pair<int, int>> coords;
          for (const auto& p : d.coords) coords.emplace_back(p.row, p.col);
          return py::dict(py::arg("coords") = coords, py::arg("weights") = d.weights.weights,
                          py::arg("bandwidth") = d.bandwidth, py::arg("degenerate") = d.degenerate);
        },
        py::arg("noisy"), py::arg("row"), py::arg("col"), py::arg("sigma"),
        py::arg("filter") = "owf", py::arg("kernel") = "k0", py::arg("patch") = 21,
        py::arg("search") = 13, py::arg("nlm_smoothing") = 0.0, py::arg("gauss_bandwidth") = 0.0,
        py::arg("clean") = py::none());
}
