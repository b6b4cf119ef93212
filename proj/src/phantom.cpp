#include "lvthick/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace lvthick {

LabelVolume make_shell(const ShellSpec& spec) {
  if (!(spec.r_in_mm > 0.0) || !(spec.r_out_mm > spec.r_in_mm))
    fail(Errc::InvalidArgument, "shell radii must satisfy 0 < r_in < r_out");
  if (!(spec.spacing_mm > 0.0)) fail(Errc::InvalidArgument, "spacing must be positive");
  if (spec.margin_mm < 2.0 * spec.spacing_mm)
    fail(Errc::InvalidArgument, "margin must be at least two voxels");

  const std::int64_t n = static_cast<std::int64_t>(
      std::ceil(2.0 * (spec.r_out_mm + spec.margin_mm) / spec.spacing_mm));
  LabelVolume out({n, n, n}, {spec.spacing_mm, spec.spacing_mm, spec.spacing_mm});
  const double c = 0.5 * n * spec.spacing_mm;  // physical midpoint of the grid

  std::int64_t i = 0;
  for (std::int64_t z = 0; z < n; ++z) {
    const double dz = (z + 0.5) * spec.spacing_mm - c;
    for (std::int64_t y = 0; y < n; ++y) {
      const double dy = (y + 0.5) * spec.spacing_mm - c;
      for (std::int64_t x = 0; x < n; ++x, ++i) {
        const double dx = (x + 0.5) * spec.spacing_mm - c;
        const double d = std::sqrt(dx * dx + dy * dy + dz * dz);
        if (d < spec.r_in_mm)
          out[i] = kBloodPool;
        else if (d < spec.r_out_mm)
          out[i] = kLvm;
      }
    }
  }
  return out;
}

LabelVolume make_slab(double thickness_mm, double spacing_mm, double extent_mm) {
  if (!(thickness_mm > 0.0) || !(spacing_mm > 0.0) || !(extent_mm > 0.0))
    fail(Errc::InvalidArgument, "slab parameters must be positive");

  const std::int64_t nlat =
      std::max<std::int64_t>(1, std::llround(extent_mm / spacing_mm));
  const std::int64_t nwall =
      std::max<std::int64_t>(1, std::llround(thickness_mm / spacing_mm));
  // padding tall enough that a radius-5 closing cannot reach the border
  const std::int64_t npad =
      std::max<std::int64_t>(8, static_cast<std::int64_t>(std::ceil(2.0 / spacing_mm)));

  LabelVolume out({nlat, nlat, nwall + 2 * npad}, {spacing_mm, spacing_mm, spacing_mm});
  for (std::int64_t z = 0; z < out.nz(); ++z) {
    const std::uint8_t value =
        z < npad ? kBloodPool : (z < npad + nwall ? kLvm : kBackground);
    if (value == kBackground) continue;
    for (std::int64_t y = 0; y < nlat; ++y)
      for (std::int64_t x = 0; x < nlat; ++x) out.at(x, y, z) = value;
  }
  return out;
}

LabelVolume inject_defect(const LabelVolume& labels, const DefectSpec& defect) {
  validate_labels(labels);
  LabelVolume out = labels;
  const Index3 dims = labels.dims();
  const Spacing3 sp = labels.spacing_mm();

  if (defect.kind == DefectKind::Hole) {
    if (!(defect.radius_mm > 0.0)) fail(Errc::InvalidArgument, "hole radius must be positive");
    const auto ext = labels.extent_mm();
    for (int a = 0; a < 3; ++a)
      if (defect.center_mm[a] - defect.radius_mm < 0.0 ||
          defect.center_mm[a] + defect.radius_mm > ext[a])
        fail(Errc::DefectOutsideVolume, "hole extends past the volume");
    std::int64_t i = 0;
    for (std::int64_t z = 0; z < dims[2]; ++z) {
      const double dz = (z + 0.5) * sp[2] - defect.center_mm[2];
      for (std::int64_t y = 0; y < dims[1]; ++y) {
        const double dy = (y + 0.5) * sp[1] - defect.center_mm[1];
        for (std::int64_t x = 0; x < dims[0]; ++x, ++i) {
          const double dx = (x + 0.5) * sp[0] - defect.center_mm[0];
          if (out[i] == kBloodPool &&
              dx * dx + dy * dy + dz * dz <= defect.radius_mm * defect.radius_mm)
            out[i] = kBackground;
        }
      }
    }
    return out;
  }

  // GapRing: LVM voxels within ring_voxels 6-connected steps of the
  // blood-pool, i.e. the interface layer between labels 1 and 2.
  if (defect.ring_voxels < 1) fail(Errc::InvalidArgument, "ring thickness must be >= 1");
  std::vector<std::int32_t> dist(static_cast<std::size_t>(labels.voxel_count()), -1);
  std::deque<std::int64_t> queue;
  for (std::int64_t i = 0; i < labels.voxel_count(); ++i)
    if (labels[i] == kBloodPool) {
      dist[static_cast<std::size_t>(i)] = 0;
      queue.push_back(i);
    }
  constexpr std::array<std::array<int, 3>, 6> faces = {
      {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}}};
  bool removed_any = false;
  while (!queue.empty()) {
    const std::int64_t cur = queue.front();
    queue.pop_front();
    const std::int32_t d = dist[static_cast<std::size_t>(cur)];
    if (d >= defect.ring_voxels) continue;
    const Index3 c = labels.unravel(cur);
    for (const auto& f : faces) {
      const std::int64_t x = c[0] + f[0], y = c[1] + f[1], z = c[2] + f[2];
      if (!labels.in_bounds(x, y, z)) continue;
      const std::int64_t ni = labels.linear(x, y, z);
      if (dist[static_cast<std::size_t>(ni)] >= 0) continue;
      dist[static_cast<std::size_t>(ni)] = d + 1;
      if (labels[ni] == kLvm) {
        out[ni] = kBackground;
        removed_any = true;
        queue.push_back(ni);
      }
    }
  }
  if (!removed_any) fail(Errc::DefectOutsideVolume, "no label-1/2 interface to open");
  return out;
}

}  // namespace lvthick
