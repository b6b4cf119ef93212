#include "lvthick/morphology.hpp"

#include <algorithm>
#include <deque>

namespace lvthick {

namespace {

void check_binary(const VolumeU8& mask) {
  for (std::uint8_t v : mask.data())
    if (v > 1) fail(Errc::InvalidArgument, "mask values must be in {0,1}");
}

std::vector<std::array<int, 3>> face_neighbors() {
  return {{{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}}};
}

std::vector<std::array<int, 3>> flood_neighbors(int connectivity) {
  if (connectivity == 6) return face_neighbors();
  if (connectivity != 26) fail(Errc::InvalidArgument, "connectivity must be 6 or 26");
  std::vector<std::array<int, 3>> offs;
  for (int dz = -1; dz <= 1; ++dz)
    for (int dy = -1; dy <= 1; ++dy)
      for (int dx = -1; dx <= 1; ++dx)
        if (dx || dy || dz) offs.push_back({dx, dy, dz});
  return offs;
}

// Offsets of the discrete Euclidean ball dx^2+dy^2+dz^2 <= r^2.
std::vector<std::array<int, 3>> ball_offsets(int radius) {
  if (radius < 1) fail(Errc::InvalidArgument, "radius must be >= 1");
  std::vector<std::array<int, 3>> offs;
  const int r2 = radius * radius;
  for (int dz = -radius; dz <= radius; ++dz)
    for (int dy = -radius; dy <= radius; ++dy)
      for (int dx = -radius; dx <= radius; ++dx)
        if (dx * dx + dy * dy + dz * dz <= r2) offs.push_back({dx, dy, dz});
  return offs;
}

// Background voxels reachable from the volume border through background.
std::vector<std::uint8_t> border_reachable_background(const VolumeU8& mask, int connectivity) {
  const auto offs = flood_neighbors(connectivity);
  const Index3 dims = mask.dims();
  std::vector<std::uint8_t> reach(static_cast<std::size_t>(mask.voxel_count()), 0);
  std::deque<std::int64_t> queue;

  auto seed = [&](std::int64_t x, std::int64_t y, std::int64_t z) {
    const std::int64_t i = mask.linear(x, y, z);
    if (mask[i] == 0 && !reach[i]) {
      reach[i] = 1;
      queue.push_back(i);
    }
  };
  for (std::int64_t z = 0; z < dims[2]; ++z)
    for (std::int64_t y = 0; y < dims[1]; ++y)
      for (std::int64_t x = 0; x < dims[0]; ++x)
        if (x == 0 || x == dims[0] - 1 || y == 0 || y == dims[1] - 1 || z == 0 || z == dims[2] - 1)
          seed(x, y, z);

  while (!queue.empty()) {
    const std::int64_t cur = queue.front();
    queue.pop_front();
    const Index3 c = mask.unravel(cur);
    for (const auto& d : offs) {
      const std::int64_t x = c[0] + d[0], y = c[1] + d[1], z = c[2] + d[2];
      if (!mask.in_bounds(x, y, z)) continue;
      const std::int64_t ni = mask.linear(x, y, z);
      if (mask[ni] == 0 && !reach[ni]) {
        reach[ni] = 1;
        queue.push_back(ni);
      }
    }
  }
  return reach;
}

}  // namespace

VolumeU8 fill_holes(const VolumeU8& mask, int connectivity) {
  check_binary(mask);
  const auto reach = border_reachable_background(mask, connectivity);
  VolumeU8 out = mask;
  for (std::int64_t i = 0; i < mask.voxel_count(); ++i)
    if (mask[i] == 0 && !reach[static_cast<std::size_t>(i)]) out[i] = 1;
  return out;
}

VolumeU8 dilate(const VolumeU8& mask, int radius_voxels) {
  check_binary(mask);
  const auto offs = ball_offsets(radius_voxels);
  const Index3 dims = mask.dims();
  VolumeU8 out(dims, mask.spacing_mm());
  // scatter: stamp the ball around every foreground voxel
  for (std::int64_t z = 0; z < dims[2]; ++z)
    for (std::int64_t y = 0; y < dims[1]; ++y)
      for (std::int64_t x = 0; x < dims[0]; ++x) {
        if (mask.at(x, y, z) == 0) continue;
        for (const auto& d : offs) {
          const std::int64_t a = x + d[0], b = y + d[1], c = z + d[2];
          if (mask.in_bounds(a, b, c)) out.at(a, b, c) = 1;
        }
      }
  return out;
}

VolumeU8 erode(const VolumeU8& mask, int radius_voxels) {
  check_binary(mask);
  const auto offs = ball_offsets(radius_voxels);
  const Index3 dims = mask.dims();
  VolumeU8 out(dims, mask.spacing_mm());
  for (std::int64_t z = 0; z < dims[2]; ++z)
    for (std::int64_t y = 0; y < dims[1]; ++y)
      for (std::int64_t x = 0; x < dims[0]; ++x) {
        if (mask.at(x, y, z) == 0) continue;
        bool keep = true;
        for (const auto& d : offs) {
          const std::int64_t a = x + d[0], b = y + d[1], c = z + d[2];
          if (!mask.in_bounds(a, b, c)) continue;  // clipped at the border
          if (mask.at(a, b, c) == 0) {
            keep = false;
            break;
          }
        }
        out.at(x, y, z) = keep ? 1 : 0;
      }
  return out;
}

VolumeU8 close(const VolumeU8& mask, int radius_voxels) {
  return erode(dilate(mask, radius_voxels), radius_voxels);
}

VolumeU8 close(const VolumeU8& mask, const RepairConfig& config) {
  return close(mask, config.radius_voxels);
}

LabelVolume repair_labels(const LabelVolume& labels, const RepairConfig& config) {
  validate_labels(labels);
  if (config.radius_voxels < 1) fail(Errc::InvalidArgument, "repair radius must be >= 1");
  const Index3 dims = labels.dims();
  LabelVolume out = labels;

  // 1. holes enclosed by the blood-pool become blood-pool
  VolumeU8 bp(dims, labels.spacing_mm());
  for (std::int64_t i = 0; i < out.voxel_count(); ++i) bp[i] = (out[i] == kBloodPool) ? 1 : 0;
  const VolumeU8 bp_filled = fill_holes(bp, config.connectivity);
  for (std::int64_t i = 0; i < out.voxel_count(); ++i)
    if (bp_filled[i] && !bp[i]) out[i] = kBloodPool;

  // 2. close the {1,2} union; new voxels take label 2 when 6-adjacent to LVM
  VolumeU8 uni(dims, labels.spacing_mm());
  for (std::int64_t i = 0; i < out.voxel_count(); ++i) uni[i] = (out[i] != kBackground) ? 1 : 0;
  const VolumeU8 closed = close(uni, config.radius_voxels);
  const LabelVolume before = out;
  const auto faces = face_neighbors();
  for (std::int64_t z = 0; z < dims[2]; ++z)
    for (std::int64_t y = 0; y < dims[1]; ++y)
      for (std::int64_t x = 0; x < dims[0]; ++x) {
        const std::int64_t i = out.linear(x, y, z);
        if (!closed[i] || uni[i]) continue;
        bool lvm_adjacent = false;
        for (const auto& d : faces) {
          const std::int64_t a = x + d[0], b = y + d[1], c = z + d[2];
          if (before.in_bounds(a, b, c) && before.at(a, b, c) == kLvm) {
            lvm_adjacent = true;
            break;
          }
        }
        out[i] = lvm_adjacent ? kLvm : kBloodPool;
      }
  return out;
}

PhaseSeries build_phase_series(std::vector<AnyVolume> images, const LabelVolume& ed_mask,
                               const LabelVolume& es_mask, int ed_index, int es_index) {
  if (images.size() != static_cast<std::size_t>(kPhaseCount))
    fail(Errc::DimensionMismatch,
         "expected " + std::to_string(kPhaseCount) + " phase images, got " +
             std::to_string(images.size()));
  if (ed_index < 0 || ed_index >= kPhaseCount || es_index < 0 || es_index >= kPhaseCount)
    fail(Errc::PhaseIndexOutOfRange, "phase indices must lie in [0, 19]");
  if (ed_index == es_index) fail(Errc::DuplicatePhaseIndex, "ED and ES phases must differ");
  validate_labels(ed_mask);
  validate_labels(es_mask);

  const Index3 dims = dims_of(images.front());
  const Spacing3 spacing = spacing_of(images.front());
  for (const auto& img : images)
    if (dims_of(img) != dims || spacing_of(img) != spacing)
      fail(Errc::DimensionMismatch, "phase images do not share dims/spacing");
  if (ed_mask.dims() != dims || ed_mask.spacing_mm() != spacing || !ed_mask.same_grid(es_mask))
    fail(Errc::DimensionMismatch, "masks do not share the image grid");

  PhaseSeries series;
  series.images = std::move(images);
  series.ed_index = ed_index;
  series.es_index = es_index;
  series.masks.assign(kPhaseCount, LabelVolume(dims, spacing));
  series.masks[static_cast<std::size_t>(ed_index)] = ed_mask;
  series.masks[static_cast<std::size_t>(es_index)] = es_mask;
  return series;
}

}  // namespace lvthick
