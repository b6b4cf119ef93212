#include "lvthick/pipeline.hpp"

#include <filesystem>
#include <fstream>

#include "lvthick/metrics.hpp"

namespace lvthick {

ThicknessOutcome run_thickness_case(const LabelVolume& labels, const PipelineConfig& config) {
  ThicknessOutcome outcome;
  const LabelVolume repaired = repair_labels(labels, config.repair);
  outcome.repaired = resample_isotropic(repaired, config.resample_mm, ResampleMode::Nearest);

  PotentialField field =
      solve_laplace(classify_surfaces(outcome.repaired), config.tol, config.max_iter);
  outcome.converged = field.converged;
  outcome.iterations_used = field.iterations_used;

  const double step =
      config.step_mm > 0.0 ? config.step_mm : default_step_mm(outcome.repaired.spacing_mm());
  outcome.map = thickness_map(field, step);
  return outcome;
}

namespace {

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(Errc::IoFailure, "cannot create " + path);
  out << text;
  if (!out) fail(Errc::IoFailure, "write failed for " + path);
}

}  // namespace

std::vector<std::string> run_pipeline(const std::string& gt_mask_path,
                                      const std::optional<std::string>& pred_mask_path,
                                      const PipelineConfig& config, const std::string& out_dir,
                                      const std::string& case_id) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) fail(Errc::IoFailure, "cannot create output directory " + out_dir);

  const LabelVolume gt = require_labels(read_volume_file(gt_mask_path));
  const ThicknessOutcome gt_outcome = run_thickness_case(gt, config);

  std::vector<std::string> written;
  const std::string gt_stats_path =
      (std::filesystem::path(out_dir) / (case_id + "_gt_stats.json")).string();
  write_text(gt_stats_path, thickness_stats_json(gt_outcome.map.stats, std::nullopt,
                                                 gt_outcome.map.reached_fraction));
  written.push_back(gt_stats_path);

  if (pred_mask_path) {
    const LabelVolume pred = require_labels(read_volume_file(*pred_mask_path));
    const ThicknessOutcome pred_outcome = run_thickness_case(pred, config);
    const std::string pred_stats_path =
        (std::filesystem::path(out_dir) / (case_id + "_pred_stats.json")).string();
    write_text(pred_stats_path, thickness_stats_json(pred_outcome.map.stats, std::nullopt,
                                                     pred_outcome.map.reached_fraction));
    written.push_back(pred_stats_path);

    // Dice compares the repaired volumes on the common resampled grid.
    if (pred_outcome.repaired.dims() != gt_outcome.repaired.dims())
      fail(Errc::DimensionMismatch, "prediction and ground truth disagree on the resampled grid");
    const DiceCase d = dice_case(pred_outcome.repaired, gt_outcome.repaired);
    const DiceReport report = make_dice_report({{case_id, d.blood_pool, d.lvm, d.mean}});
    const std::string dice_path =
        (std::filesystem::path(out_dir) / (case_id + "_dice.json")).string();
    write_text(dice_path, to_json(report));
    written.push_back(dice_path);
  }
  return written;
}

}  // namespace lvthick
