// numpy-facing bindings for the core operations. Arrays are indexed
// [z, y, x] (C order, x fastest) to match the library's linearization;
// spacing tuples are (sx, sy, sz) in mm.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lvthick/cohorts.hpp"
#include "lvthick/metrics.hpp"
#include "lvthick/morphology.hpp"
#include "lvthick/phantom.hpp"
#include "lvthick/pipeline.hpp"
#include "lvthick/thickness.hpp"
#include "lvthick/volume.hpp"

namespace py = pybind11;
using namespace lvthick;

namespace {

using Array3U8 = py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>;

template <typename T>
Volume<T> volume_from_array(const py::array_t<T, py::array::c_style | py::array::forcecast>& arr,
                            const Spacing3& spacing) {
  if (arr.ndim() != 3) throw py::value_error("expected a 3D array indexed [z, y, x]");
  const Index3 dims = {arr.shape(2), arr.shape(1), arr.shape(0)};
  std::vector<T> data(arr.data(), arr.data() + arr.size());
  return Volume<T>(dims, spacing, std::move(data));
}

template <typename T>
py::array_t<T> array_from_volume(const Volume<T>& vol) {
  const Index3 d = vol.dims();
  py::array_t<T> arr({d[2], d[1], d[0]});
  std::copy(vol.data().begin(), vol.data().end(), arr.mutable_data());
  return arr;
}

LabelVolume labels_from(const Array3U8& arr, const Spacing3& spacing) {
  LabelVolume v = volume_from_array<std::uint8_t>(arr, spacing);
  validate_labels(v);
  return v;
}

py::dict stats_dict(const ThicknessMap& map, const PotentialField& field) {
  py::dict out;
  if (map.stats) {
    out["median_mm"] = map.stats->median_mm;
    out["p95_mm"] = map.stats->p95_mm;
    out["max_mm"] = map.stats->max_mm;
  } else {
    out["median_mm"] = py::none();
    out["p95_mm"] = py::none();
    out["max_mm"] = py::none();
  }
  out["reached_fraction"] = map.reached_fraction;
  out["seeds"] = map.entries.size();
  out["converged"] = field.converged;
  out["iterations"] = field.iterations_used;
  return out;
}

}  // namespace

PYBIND11_MODULE(_lvthick, m) {
  m.doc() = "Laplace-equation LVM wall thickness measurement and segmentation metrics";

  py::register_exception<Error>(m, "LvthickError");

  m.def(
      "read_volume",
      [](const std::string& path) -> py::object {
        const AnyVolume vol = read_volume_file(path);
        const Spacing3 sp = spacing_of(vol);
        py::object arr = std::visit(
            [](const auto& v) -> py::object { return array_from_volume(v); }, vol);
        return py::make_tuple(arr, py::make_tuple(sp[0], sp[1], sp[2]));
      },
      py::arg("path"), "Read a VVOL1 file -> (array[z,y,x], (sx, sy, sz)).");

  m.def(
      "write_volume",
      [](const std::string& path, py::array arr, const Spacing3& spacing) {
        if (py::isinstance<py::array_t<std::uint8_t>>(arr))
          write_volume_file(path, volume_from_array<std::uint8_t>(arr.cast<Array3U8>(), spacing));
        else if (py::isinstance<py::array_t<std::int16_t>>(arr))
          write_volume_file(
              path, volume_from_array<std::int16_t>(
                        arr.cast<py::array_t<std::int16_t, py::array::c_style>>(), spacing));
        else if (py::isinstance<py::array_t<float>>(arr))
          write_volume_file(path,
                            volume_from_array<float>(
                                arr.cast<py::array_t<float, py::array::c_style>>(), spacing));
        else
          throw py::value_error("supported dtypes: uint8, int16, float32");
      },
      py::arg("path"), py::arg("array"), py::arg("spacing_mm"));

  m.def(
      "resample_isotropic",
      [](const Array3U8& arr, const Spacing3& spacing, double target_mm, const std::string& mode) {
        const ResampleMode rmode =
            mode == "trilinear" ? ResampleMode::Trilinear : ResampleMode::Nearest;
        return array_from_volume(
            resample_isotropic(volume_from_array<std::uint8_t>(arr, spacing), target_mm, rmode));
      },
      py::arg("labels"), py::arg("spacing_mm"), py::arg("target_mm"), py::arg("mode") = "nearest");

  m.def(
      "largest_component",
      [](const Array3U8& arr, int connectivity) {
        return array_from_volume(
            largest_component(volume_from_array<std::uint8_t>(arr, {1, 1, 1}), connectivity));
      },
      py::arg("mask"), py::arg("connectivity") = 6);

  m.def(
      "fill_holes",
      [](const Array3U8& arr, int connectivity) {
        return array_from_volume(
            fill_holes(volume_from_array<std::uint8_t>(arr, {1, 1, 1}), connectivity));
      },
      py::arg("mask"), py::arg("connectivity") = 6);

  m.def(
      "dilate",
      [](const Array3U8& arr, int radius) {
        return array_from_volume(dilate(volume_from_array<std::uint8_t>(arr, {1, 1, 1}), radius));
      },
      py::arg("mask"), py::arg("radius_voxels"));

  m.def(
      "erode",
      [](const Array3U8& arr, int radius) {
        return array_from_volume(erode(volume_from_array<std::uint8_t>(arr, {1, 1, 1}), radius));
      },
      py::arg("mask"), py::arg("radius_voxels"));

  m.def(
      "close",
      [](const Array3U8& arr, int radius) {
        return array_from_volume(close(volume_from_array<std::uint8_t>(arr, {1, 1, 1}), radius));
      },
      py::arg("mask"), py::arg("radius_voxels"));

  m.def(
      "repair_labels",
      [](const Array3U8& arr, const Spacing3& spacing, int radius, int connectivity) {
        return array_from_volume(repair_labels(labels_from(arr, spacing), {radius, connectivity}));
      },
      py::arg("labels"), py::arg("spacing_mm") = Spacing3{1, 1, 1}, py::arg("radius_voxels") = 5,
      py::arg("connectivity") = 6);

  m.def(
      "make_shell",
      [](double r_in, double r_out, double spacing, double margin) {
        return array_from_volume(make_shell({r_in, r_out, spacing, margin}));
      },
      py::arg("r_in_mm"), py::arg("r_out_mm"), py::arg("spacing_mm") = 1.0,
      py::arg("margin_mm") = 8.0);

  m.def(
      "make_slab",
      [](double thickness, double spacing, double extent) {
        return array_from_volume(make_slab(thickness, spacing, extent));
      },
      py::arg("thickness_mm"), py::arg("spacing_mm") = 1.0, py::arg("extent_mm") = 20.0);

  m.def(
      "inject_defect",
      [](const Array3U8& arr, const Spacing3& spacing, const std::string& kind,
         const std::array<double, 3>& center, double radius, int ring_voxels) {
        DefectSpec spec;
        spec.kind = kind == "hole" ? DefectKind::Hole : DefectKind::GapRing;
        spec.center_mm = center;
        spec.radius_mm = radius;
        spec.ring_voxels = ring_voxels;
        return array_from_volume(inject_defect(labels_from(arr, spacing), spec));
      },
      py::arg("labels"), py::arg("spacing_mm"), py::arg("kind"),
      py::arg("center_mm") = std::array<double, 3>{0, 0, 0}, py::arg("radius_mm") = 0.0,
      py::arg("ring_voxels") = 1);

  m.def(
      "solve_laplace",
      [](const Array3U8& arr, const Spacing3& spacing, double tol, std::int64_t max_iter) {
        const PotentialField field =
            solve_laplace(classify_surfaces(labels_from(arr, spacing)), tol, max_iter);
        return py::make_tuple(array_from_volume(field.psi), field.converged,
                              field.iterations_used);
      },
      py::arg("labels"), py::arg("spacing_mm") = Spacing3{1, 1, 1}, py::arg("tol") = 1e-6,
      py::arg("max_iter") = 20000, "Returns (psi[z,y,x] float32, converged, iterations).");

  m.def(
      "measure_thickness",
      [](const Array3U8& arr, const Spacing3& spacing, double step_mm, double tol,
         std::int64_t max_iter) {
        const LabelVolume labels = labels_from(arr, spacing);
        const PotentialField field = solve_laplace(classify_surfaces(labels), tol, max_iter);
        const double step = step_mm > 0.0 ? step_mm : default_step_mm(spacing);
        return stats_dict(thickness_map(field, step), field);
      },
      py::arg("labels"), py::arg("spacing_mm") = Spacing3{1, 1, 1}, py::arg("step_mm") = 0.0,
      py::arg("tol") = 1e-6, py::arg("max_iter") = 20000);

  m.def(
      "repair_and_measure",
      [](const Array3U8& arr, const Spacing3& spacing, double resample_mm, int radius,
         double step_mm, double tol, std::int64_t max_iter) {
        PipelineConfig config;
        config.repair.radius_voxels = radius;
        config.resample_mm = resample_mm;
        config.step_mm = step_mm;
        config.tol = tol;
        config.max_iter = max_iter;
        const auto outcome = run_thickness_case(labels_from(arr, spacing), config);
        py::dict out;
        out["repaired"] = array_from_volume(outcome.repaired);
        if (outcome.map.stats) {
          out["median_mm"] = outcome.map.stats->median_mm;
          out["p95_mm"] = outcome.map.stats->p95_mm;
          out["max_mm"] = outcome.map.stats->max_mm;
        }
        out["reached_fraction"] = outcome.map.reached_fraction;
        out["converged"] = outcome.converged;
        return out;
      },
      py::arg("labels"), py::arg("spacing_mm") = Spacing3{1, 1, 1}, py::arg("resample_mm") = 1.0,
      py::arg("radius_voxels") = 5, py::arg("step_mm") = 0.0, py::arg("tol") = 1e-6,
      py::arg("max_iter") = 20000);

  m.def(
      "dice",
      [](const Array3U8& pred, const Array3U8& gt, int label) {
        return dice(labels_from(pred, {1, 1, 1}), labels_from(gt, {1, 1, 1}), label);
      },
      py::arg("pred"), py::arg("gt"), py::arg("label"));

  m.def(
      "dice_case",
      [](const Array3U8& pred, const Array3U8& gt) {
        const DiceCase d = dice_case(labels_from(pred, {1, 1, 1}), labels_from(gt, {1, 1, 1}));
        return py::make_tuple(d.blood_pool, d.lvm, d.mean);
      },
      py::arg("pred"), py::arg("gt"));

  m.def(
      "pearson",
      [](const std::vector<double>& x, const std::vector<double>& y) { return pearson(x, y); },
      py::arg("x"), py::arg("y"));

  m.def(
      "make_nested_cohorts",
      [](std::vector<std::string> ids, int step, std::uint64_t seed) {
        const CohortPlan plan = make_nested_cohorts(std::move(ids), step, seed);
        py::dict out;
        out["case_ids"] = plan.case_ids;
        out["groups"] = plan.groups;
        out["step"] = plan.step;
        out["seed"] = plan.seed;
        return out;
      },
      py::arg("case_ids"), py::arg("step"), py::arg("seed"));

#ifdef LVTHICK_VERSION
  m.attr("__version__") = LVTHICK_VERSION;
#else
  m.attr("__version__") = "dev";
#endif
}
