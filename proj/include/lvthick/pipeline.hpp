#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lvthick/morphology.hpp"
#include "lvthick/thickness.hpp"

namespace lvthick {

struct PipelineConfig {
  RepairConfig repair;
  double resample_mm = 1.0;
  double step_mm = 0.0;  // 0 selects 0.25 * min spacing after resampling
  double tol = 1e-6;
  std::int64_t max_iter = 20000;
};

/// repair -> resample(isotropic, nearest) -> classify -> solve -> trace.
struct ThicknessOutcome {
  LabelVolume repaired;   // at the resampled grid
  ThicknessMap map;
  bool converged = false;
  std::int64_t iterations_used = 0;
};

ThicknessOutcome run_thickness_case(const LabelVolume& labels, const PipelineConfig& config);

/// File-level pipeline for one case: reads VVOL1 label volumes, writes
/// <case_id>_gt_stats.json (and, with a prediction, <case_id>_pred_stats.json
/// plus <case_id>_dice.json) into out_dir. Returns the written paths in
/// deterministic order.
std::vector<std::string> run_pipeline(const std::string& gt_mask_path,
                                      const std::optional<std::string>& pred_mask_path,
                                      const PipelineConfig& config, const std::string& out_dir,
                                      const std::string& case_id);

}  // namespace lvthick
