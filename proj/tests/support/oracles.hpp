#pragma once

// Test-only reference implementations, kept deliberately independent of the
// library code paths they check: direct per-voxel evaluation of definitions,
// no shared offset tables or traversal helpers.

#include <array>
#include <cstdint>
#include <deque>
#include <random>
#include <vector>

#include "lvthick/volume.hpp"

namespace oracle {

using lvthick::Index3;
using lvthick::VolumeU8;

// Dilation straight from the definition: v is set iff some foreground voxel
// lies within dx^2+dy^2+dz^2 <= r^2 of v.
inline VolumeU8 dilate(const VolumeU8& mask, int r) {
  VolumeU8 out(mask.dims(), mask.spacing_mm());
  const Index3 d = mask.dims();
  for (std::int64_t z = 0; z < d[2]; ++z)
    for (std::int64_t y = 0; y < d[1]; ++y)
      for (std::int64_t x = 0; x < d[0]; ++x) {
        std::uint8_t hit = 0;
        for (std::int64_t cz = 0; cz < d[2] && !hit; ++cz)
          for (std::int64_t cy = 0; cy < d[1] && !hit; ++cy)
            for (std::int64_t cx = 0; cx < d[0] && !hit; ++cx) {
              if (!mask.at(cx, cy, cz)) continue;
              const std::int64_t dx = cx - x, dy = cy - y, dz = cz - z;
              if (dx * dx + dy * dy + dz * dz <= static_cast<std::int64_t>(r) * r) hit = 1;
            }
        out.at(x, y, z) = hit;
      }
  return out;
}

// Erosion with the ball clipped to the volume: v stays iff every in-volume
// voxel of the ball is foreground.
inline VolumeU8 erode(const VolumeU8& mask, int r) {
  VolumeU8 out(mask.dims(), mask.spacing_mm());
  const Index3 d = mask.dims();
  for (std::int64_t z = 0; z < d[2]; ++z)
    for (std::int64_t y = 0; y < d[1]; ++y)
      for (std::int64_t x = 0; x < d[0]; ++x) {
        if (!mask.at(x, y, z)) continue;
        std::uint8_t keep = 1;
        for (std::int64_t dz = -r; dz <= r && keep; ++dz)
          for (std::int64_t dy = -r; dy <= r && keep; ++dy)
            for (std::int64_t dx = -r; dx <= r && keep; ++dx) {
              if (dx * dx + dy * dy + dz * dz > static_cast<std::int64_t>(r) * r) continue;
              const std::int64_t a = x + dx, b = y + dy, c = z + dz;
              if (a < 0 || a >= d[0] || b < 0 || b >= d[1] || c < 0 || c >= d[2]) continue;
              if (!mask.at(a, b, c)) keep = 0;
            }
        out.at(x, y, z) = keep;
      }
  return out;
}

inline VolumeU8 close(const VolumeU8& mask, int r) {
  return oracle::erode(oracle::dilate(mask, r), r);
}

// Dice by explicit set counting over enumerated voxel index sets.
inline double dice(const lvthick::LabelVolume& a, const lvthick::LabelVolume& b, int label) {
  std::vector<std::int64_t> sa, sb;
  for (std::int64_t i = 0; i < a.voxel_count(); ++i) {
    if (a[i] == label) sa.push_back(i);
    if (b[i] == label) sb.push_back(i);
  }
  std::int64_t inter = 0;
  std::size_t j = 0;
  for (std::int64_t v : sa) {
    while (j < sb.size() && sb[j] < v) ++j;
    if (j < sb.size() && sb[j] == v) ++inter;
  }
  if (sa.empty() && sb.empty()) return 1.0;
  return 2.0 * static_cast<double>(inter) / static_cast<double>(sa.size() + sb.size());
}

// Number of connected components of the foreground.
inline int count_components(const VolumeU8& mask, int connectivity) {
  const Index3 d = mask.dims();
  std::vector<std::uint8_t> seen(static_cast<std::size_t>(mask.voxel_count()), 0);
  int components = 0;
  for (std::int64_t start = 0; start < mask.voxel_count(); ++start) {
    if (!mask[start] || seen[static_cast<std::size_t>(start)]) continue;
    ++components;
    std::deque<std::int64_t> queue{start};
    seen[static_cast<std::size_t>(start)] = 1;
    while (!queue.empty()) {
      const std::int64_t cur = queue.front();
      queue.pop_front();
      const Index3 c = mask.unravel(cur);
      for (int dz = -1; dz <= 1; ++dz)
        for (int dy = -1; dy <= 1; ++dy)
          for (int dx = -1; dx <= 1; ++dx) {
            const int manhattan = std::abs(dx) + std::abs(dy) + std::abs(dz);
            if (manhattan == 0) continue;
            if (connectivity == 6 && manhattan != 1) continue;
            const std::int64_t a = c[0] + dx, b = c[1] + dy, cc = c[2] + dz;
            if (a < 0 || a >= d[0] || b < 0 || b >= d[1] || cc < 0 || cc >= d[2]) continue;
            const std::int64_t ni = mask.linear(a, b, cc);
            if (mask[ni] && !seen[static_cast<std::size_t>(ni)]) {
              seen[static_cast<std::size_t>(ni)] = 1;
              queue.push_back(ni);
            }
          }
    }
  }
  return components;
}

inline bool is_connected(const VolumeU8& mask, int connectivity) {
  return count_components(mask, connectivity) == 1;
}

// Background voxels 6-reachable from the volume border through background.
inline std::vector<std::uint8_t> border_reachable_background(const VolumeU8& mask) {
  const Index3 d = mask.dims();
  std::vector<std::uint8_t> reach(static_cast<std::size_t>(mask.voxel_count()), 0);
  std::deque<std::int64_t> queue;
  for (std::int64_t z = 0; z < d[2]; ++z)
    for (std::int64_t y = 0; y < d[1]; ++y)
      for (std::int64_t x = 0; x < d[0]; ++x) {
        if (x != 0 && x != d[0] - 1 && y != 0 && y != d[1] - 1 && z != 0 && z != d[2] - 1)
          continue;
        const std::int64_t i = mask.linear(x, y, z);
        if (!mask[i] && !reach[static_cast<std::size_t>(i)]) {
          reach[static_cast<std::size_t>(i)] = 1;
          queue.push_back(i);
        }
      }
  constexpr std::array<std::array<int, 3>, 6> faces = {
      {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}}};
  while (!queue.empty()) {
    const std::int64_t cur = queue.front();
    queue.pop_front();
    const Index3 c = mask.unravel(cur);
    for (const auto& f : faces) {
      const std::int64_t x = c[0] + f[0], y = c[1] + f[1], z = c[2] + f[2];
      if (x < 0 || x >= d[0] || y < 0 || y >= d[1] || z < 0 || z >= d[2]) continue;
      const std::int64_t ni = mask.linear(x, y, z);
      if (!mask[ni] && !reach[static_cast<std::size_t>(ni)]) {
        reach[static_cast<std::size_t>(ni)] = 1;
        queue.push_back(ni);
      }
    }
  }
  return reach;
}

inline VolumeU8 random_mask(std::mt19937& rng, Index3 dims, double density) {
  VolumeU8 mask(dims, {1.0, 1.0, 1.0});
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::int64_t i = 0; i < mask.voxel_count(); ++i) mask[i] = u(rng) < density ? 1 : 0;
  return mask;
}

}  // namespace oracle
