#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lvthick/volume.hpp"

namespace lvthick {

/// Partition of the LVM wall (reduced to its largest 26-connected component)
/// into epicardial boundary, endocardial boundary and interior. A voxel
/// adjacent to both background and blood-pool is counted in
/// overlapping_boundary_count and assigned to the endocardial set.
struct SurfaceClassification {
  LabelVolume labels;               // input with LVM reduced to its main component
  std::vector<std::int64_t> epi;    // sorted linear indices, Dirichlet psi = 1
  std::vector<std::int64_t> endo;   // sorted linear indices, Dirichlet psi = 0
  VolumeU8 domain;                  // 1 = interior wall voxel
  std::int64_t interior_count = 0;
  std::int64_t overlapping_boundary_count = 0;
};

SurfaceClassification classify_surfaces(const LabelVolume& labels);

/// Converged (or stopped) Jacobi solution of the Laplace potential over the
/// wall interior, with the epicardium held at 1 and the endocardium at 0.
struct PotentialField {
  VolumeF32 psi;
  SurfaceClassification surfaces;
  std::vector<double> residual_history;  // max |update| per completed sweep
  std::int64_t iterations_used = 0;
  bool converged = false;
  double tol = 1e-6;
};

/// Jacobi relaxation: each sweep replaces every interior value with the mean
/// of its six face-neighbors' previous-sweep values (neighbors outside the
/// wall and its boundaries are excluded from the mean). Stops when the
/// largest update falls below tol or after max_iter sweeps; an interior-free
/// wall returns the boundary-only field with converged = true.
PotentialField solve_laplace(SurfaceClassification surfaces, double tol = 1e-6,
                             std::int64_t max_iter = 20000);

enum class Termination { ReachedEndo, LeftDomain, MaxSteps };

const char* termination_name(Termination t);

struct Streamline {
  std::int64_t seed = 0;                       // linear index of the epicardial seed voxel
  std::vector<std::array<double, 3>> points;   // physical coordinates, mm
  double step_mm = 0.0;
  double length_mm = 0.0;                      // sum of consecutive point distances
  Termination termination = Termination::LeftDomain;
  bool zero_gradient = false;                  // |grad| underflow forced the stop
};

/// Per-voxel gradient of the potential, extended past the wall (blood-pool
/// joins the 0-level, background the 1-level) so descent directions stay
/// defined up to the boundaries. Built once, shared by many traces.
struct GradientField {
  VolumeF32 gx, gy, gz;
};

GradientField make_gradient(const PotentialField& field);

/// Explicit-Euler descent of the potential from the seed voxel's center:
/// each step moves step_mm along the unit-normalized negative gradient
/// (central differences, trilinearly interpolated). The trace runs through
/// the endocardial voxel layer and terminates ReachedEndo once it enters the
/// blood-pool (wall depth past the endocardial surface counts toward the
/// length); it ends LeftDomain on background or outside the grid, and
/// MaxSteps after ceil(50 * max_extent / step_mm) steps. A vanishing
/// gradient (< 1e-12) stops the trace: ReachedEndo when already inside the
/// endocardial layer, otherwise LeftDomain with zero_gradient set.
Streamline trace_streamline(const PotentialField& field, const GradientField& gradient,
                            std::int64_t seed, double step_mm);
Streamline trace_streamline(const PotentialField& field, std::int64_t seed, double step_mm);

struct ThicknessStats {
  double median_mm = 0.0;
  double p95_mm = 0.0;
  double max_mm = 0.0;
};

struct ThicknessMap {
  std::vector<Streamline> entries;        // one per epicardial seed, seed-ordered
  std::optional<ThicknessStats> stats;    // over ReachedEndo entries; empty when none reached
  double reached_fraction = 0.0;
};

/// One streamline per epicardial voxel; stats (median, linearly interpolated
/// 95th percentile, max) over the ReachedEndo lengths.
ThicknessMap thickness_map(const PotentialField& field, double step_mm);

/// Default integration step: 0.25 * min spacing.
double default_step_mm(const Spacing3& spacing);

struct PhaseStatsPair {
  ThicknessStats ed;
  ThicknessStats es;
};

PhaseStatsPair thickness_stats_pair(const ThicknessMap& ed_map, const ThicknessMap& es_map);

/// Linear-interpolated percentile (q in [0,1]) of an ascending-sorted range.
double linear_percentile(std::span<const double> sorted_values, double q);

// --- Serialization -----------------------------------------------------------

/// {"ed":{...},"es":{...}|null,"reached_fraction":...,"units":"mm"}
std::string thickness_stats_json(const std::optional<ThicknessStats>& ed,
                                 const std::optional<ThicknessStats>& es,
                                 double reached_fraction);

struct PhaseStatsRecord {
  std::optional<ThicknessStats> ed;
  std::optional<ThicknessStats> es;
  double reached_fraction = 0.0;
};

PhaseStatsRecord phase_stats_from_json(const std::string& text);

/// CSV: seed_x,seed_y,seed_z,point_index,px_mm,py_mm,pz_mm,termination
std::string streamlines_csv(const ThicknessMap& map, const Index3& dims);

}  // namespace lvthick
