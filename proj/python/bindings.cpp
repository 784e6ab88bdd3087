#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <algorithm>
#include <optional>

#include "phaseswap/dataset.hpp"
#include "phaseswap/fft.hpp"
#include "phaseswap/image_io.hpp"
#include "phaseswap/metrics.hpp"
#include "phaseswap/phase_sim.hpp"
#include "phaseswap/speckle.hpp"

namespace py = pybind11;
using namespace phaseswap;

namespace {

template <typename T>
using Array = py::array_t<T, py::array::c_style | py::array::forcecast>;

template <typename T>
void require_2d(const Array<T>& a) {
  if (a.ndim() != 2) throw Error(ErrorCode::InvalidArgument, "expected a 2D array");
}

// numpy arrays are (rows, cols) = (height, width), matching the grid layout.
template <typename G, typename T>
G to_grid(const Array<T>& a) {
  require_2d(a);
  const auto h = static_cast<int>(a.shape(0));
  const auto w = static_cast<int>(a.shape(1));
  G g(w, h);
  std::copy(a.data(), a.data() + a.size(), g.data());
  return g;
}

template <typename T>
Array<T> to_array(const Grid<T>& g) {
  Array<T> out({g.height(), g.width()});
  std::copy(g.begin(), g.end(), out.mutable_data());
  return out;
}

RealImage image_arg(const Array<double>& a) { return to_grid<RealImage>(a); }

BinaryMask mask_arg(const Array<double>& a, double threshold) {
  return BinaryMask::from_image(image_arg(a), threshold);
}

ResampleMode mode_arg(const std::string& mode) {
  if (mode == "bilinear") return ResampleMode::bilinear;
  if (mode == "nearest") return ResampleMode::nearest;
  throw Error(ErrorCode::InvalidArgument, "mode must be 'bilinear' or 'nearest'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Fourier phase-substitution ultrasound simulation";

  static PyObject* error_type = py::exception<Error>(m, "Error", PyExc_ValueError).ptr();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = py::reinterpret_borrow<py::object>(error_type)(e.what());
      exc.attr("code") = std::string(to_string(e.code()));
      PyErr_SetObject(error_type, exc.ptr());
    }
  });

  m.attr("ALPHA_DEFAULT") = AlphaParam::kDefault;
  m.attr("ALPHA_MAX") = AlphaParam::kMax;

  m.def(
      "forward_transform",
      [](const Array<double>& img) { return to_array(forward_transform(image_arg(img))); },
      py::arg("image"), "DC-centered 2D DFT of a real image (even sides).");
  m.def(
      "inverse_transform",
      [](const Array<std::complex<double>>& spec) {
        return to_array<double>(inverse_transform(to_grid<Spectrum>(spec)));
      },
      py::arg("spectrum"), "Real inverse of a DC-centered spectrum; raises on non-real output.");
  m.def(
      "inverse_transform_with_residual",
      [](const Array<std::complex<double>>& spec) {
        auto r = inverse_transform_with_residual(to_grid<Spectrum>(spec));
        return py::make_tuple(to_array<double>(r.image), r.max_imag_residual,
                              r.max_real_magnitude);
      },
      py::arg("spectrum"));
  m.def(
      "to_polar",
      [](const Array<std::complex<double>>& spec) {
        const auto p = to_polar(to_grid<Spectrum>(spec));
        return py::make_tuple(to_array(p.magnitude), to_array(p.phase));
      },
      py::arg("spectrum"));
  m.def(
      "from_polar",
      [](const Array<double>& magnitude, const Array<double>& phase) {
        return to_array(from_polar(
            {to_grid<Grid<double>>(magnitude), to_grid<Grid<double>>(phase)}));
      },
      py::arg("magnitude"), py::arg("phase"));

  m.def(
      "build_lowfreq_mask",
      [](int width, int height, double alpha) {
        return to_array<std::uint8_t>(build_lowfreq_mask(width, height, AlphaParam(alpha)));
      },
      py::arg("width"), py::arg("height"), py::arg("alpha") = AlphaParam::kDefault);
  m.def(
      "simulate",
      [](const Array<double>& real, const Array<double>& mask_img, double alpha) {
        return to_array<double>(simulate(image_arg(real), image_arg(mask_img), AlphaParam(alpha)));
      },
      py::arg("real"), py::arg("mask_image"), py::arg("alpha") = AlphaParam::kDefault,
      "Phase substitution followed by min-max normalization to [0, 1].");
  m.def(
      "simulate_raw",
      [](const Array<double>& real, const Array<double>& mask_img, double alpha) {
        const auto r = simulate_raw(image_arg(real), image_arg(mask_img), AlphaParam(alpha));
        return py::make_tuple(to_array<double>(r.raw), r.max_imag_residual, r.max_real_magnitude);
      },
      py::arg("real"), py::arg("mask_image"), py::arg("alpha") = AlphaParam::kDefault);
  m.def(
      "normalize_output",
      [](const Array<double>& img) { return to_array<double>(normalize_output(image_arg(img))); },
      py::arg("image"));
  m.def(
      "phase_source_from_mask",
      [](const Array<double>& mask, bool invert) {
        return to_array<double>(phase_source_from_mask(image_arg(mask), invert));
      },
      py::arg("mask"), py::arg("invert") = false);

  m.def(
      "dsc",
      [](const Array<double>& a, const Array<double>& b, double epsilon, double threshold) {
        return dsc(mask_arg(a, threshold), mask_arg(b, threshold), epsilon);
      },
      py::arg("a"), py::arg("b"), py::arg("epsilon") = kDefaultDiceEpsilon,
      py::arg("threshold") = 0.5, "Dice similarity of two masks binarized at threshold.");

  m.def(
      "resample",
      [](const Array<double>& img, int width, int height, const std::string& mode) {
        return to_array<double>(resample(image_arg(img), width, height, mode_arg(mode)));
      },
      py::arg("image"), py::arg("width"), py::arg("height"), py::arg("mode") = "bilinear");
  m.def(
      "read_image", [](const std::filesystem::path& p) { return to_array<double>(read_image(p)); },
      py::arg("path"));
  m.def(
      "write_image",
      [](const std::filesystem::path& p, const Array<double>& img) {
        write_image(p, image_arg(img));
      },
      py::arg("path"), py::arg("image"));

  m.def(
      "render_bmode",
      [](int width, int height, std::int64_t scatterers, std::uint64_t seed,
         std::optional<Array<double>> anechoic_mask, double width_mm, double depth_mm,
         double dynamic_range_db) {
        PhantomSpec spec;
        spec.grid_width = width;
        spec.grid_height = height;
        spec.num_scatterers = scatterers;
        spec.width_mm = width_mm;
        spec.depth_mm = depth_mm;
        spec.validate();
        auto field = sample_scatterers(spec, seed);
        if (anechoic_mask) field = apply_anechoic_mask(field, image_arg(*anechoic_mask), spec);
        return to_array<double>(render_bmode(field, spec, PSFSpec{}, dynamic_range_db));
      },
      py::arg("width") = 256, py::arg("height") = 256, py::arg("scatterers") = 100'000,
      py::arg("seed") = 0, py::arg("anechoic_mask") = py::none(), py::arg("width_mm") = 50.0,
      py::arg("depth_mm") = 50.0, py::arg("dynamic_range_db") = kDefaultDynamicRangeDb,
      "Convolutional speckle phantom, log-compressed to [0, 1].");
}
