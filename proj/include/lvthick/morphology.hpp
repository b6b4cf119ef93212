#pragma once

#include <vector>

#include "lvthick/volume.hpp"

namespace lvthick {

struct RepairConfig {
  int radius_voxels = 5;  // structuring-element radius, in voxels
  int connectivity = 6;   // flood-fill connectivity for hole detection
};

/// Background voxels with no background-connected path to the volume border
/// become foreground; everything else is unchanged.
VolumeU8 fill_holes(const VolumeU8& mask, int connectivity = 6);

/// Dilation by the discrete Euclidean ball: v becomes 1 iff some foreground
/// voxel lies within dx^2+dy^2+dz^2 <= r^2 of v.
VolumeU8 dilate(const VolumeU8& mask, int radius_voxels);

/// Erosion by the same ball, clipped to the volume: v stays 1 iff every
/// in-volume voxel of the ball centered at v is foreground. Border voxels
/// are not automatically eroded.
VolumeU8 erode(const VolumeU8& mask, int radius_voxels);

/// Morphological closing: erode(dilate(mask, r), r).
VolumeU8 close(const VolumeU8& mask, int radius_voxels);
VolumeU8 close(const VolumeU8& mask, const RepairConfig& config);

/// Label-map repair pipeline:
///   1. fill holes in the blood-pool mask (filled voxels take label 1),
///   2. close the union of labels {1,2}; voxels the closing adds take
///      label 2 when any 6-neighbor already carries label 2, else label 1.
/// Input-foreground voxels are never relabeled to background.
LabelVolume repair_labels(const LabelVolume& labels, const RepairConfig& config = {});

// --- Sparse 4D phase series --------------------------------------------------

inline constexpr int kPhaseCount = 20;

/// A 20-phase image/mask pair where only the ED and ES mask phases carry
/// labels; every other mask is all-zero.
struct PhaseSeries {
  std::vector<AnyVolume> images;    // kPhaseCount entries, shared grid
  std::vector<LabelVolume> masks;   // kPhaseCount entries, shared grid
  int ed_index = 0;
  int es_index = 0;
};

PhaseSeries build_phase_series(std::vector<AnyVolume> images, const LabelVolume& ed_mask,
                               const LabelVolume& es_mask, int ed_index, int es_index);

}  // namespace lvthick
