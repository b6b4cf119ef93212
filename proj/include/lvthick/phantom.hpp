#pragma once

#include <array>

#include "lvthick/volume.hpp"

namespace lvthick {

/// Spherical wall phantom: blood-pool sphere of radius r_in inside an LVM
/// shell reaching r_out, centered in a cube of background. The margin keeps
/// later morphology (default closing radius 5) away from the volume border.
struct ShellSpec {
  double r_in_mm = 10.0;
  double r_out_mm = 15.0;
  double spacing_mm = 1.0;
  double margin_mm = 8.0;
};

/// Voxel centers at distance d from the volume's physical midpoint get
/// label 1 for d < r_in, label 2 for r_in <= d < r_out, else 0.
LabelVolume make_shell(const ShellSpec& spec);

/// Flat wall phantom: label 2 fills thickness_mm of z, blood-pool below,
/// background above, spanning the full lateral extent so the potential is
/// one-dimensional. Padding above and below is at least 8 voxels.
LabelVolume make_slab(double thickness_mm, double spacing_mm, double extent_mm);

enum class DefectKind { Hole, GapRing };

struct DefectSpec {
  DefectKind kind = DefectKind::Hole;
  std::array<double, 3> center_mm{0.0, 0.0, 0.0};  // hole center, physical mm
  double radius_mm = 0.0;                          // hole radius
  int ring_voxels = 1;                             // gap-ring thickness, voxels
};

/// Hole: blood-pool voxels whose centers lie within radius_mm of the center
/// become background. GapRing: the LVM voxels within ring_voxels 6-connected
/// steps of the blood-pool (the label-1/2 interface layer) become background.
LabelVolume inject_defect(const LabelVolume& labels, const DefectSpec& defect);

}  // namespace lvthick
