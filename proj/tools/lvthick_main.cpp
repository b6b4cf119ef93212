// lvthick: repair labeled cardiac CT volumes, measure LVM wall thickness via
// the Laplace potential, and evaluate segmentations.

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "lvthick/cohorts.hpp"
#include "lvthick/metrics.hpp"
#include "lvthick/morphology.hpp"
#include "lvthick/phantom.hpp"
#include "lvthick/pipeline.hpp"
#include "lvthick/reports.hpp"
#include "lvthick/thickness.hpp"
#include "lvthick/volume.hpp"

namespace fs = std::filesystem;
using namespace lvthick;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::IoFailure, "cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void spill(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(Errc::IoFailure, "cannot create " + path);
  out << text;
  if (!out) fail(Errc::IoFailure, "write failed for " + path);
}

LabelVolume load_labels(const std::string& path) { return require_labels(read_volume_file(path)); }

struct RepairArgs {
  std::string in, out;
  int radius = 5;
  int connectivity = 6;
};

struct ResampleArgs {
  std::string in, out, mode = "nearest";
  double mm = 1.0;
};

struct ThicknessArgs {
  std::string labels, labels_es, stats_out, streamlines_out, streamlines_es_out;
  double step_mm = 0.0;  // 0 -> 0.25 * min spacing
  double tol = 1e-6;
  std::int64_t max_iter = 20000;
};

struct DiceArgs {
  std::string pred, gt, out, id = "case";
};

struct CorrelateArgs {
  std::string pred_dir, gt_dir, out;
};

struct ShellArgs {
  double r_in = 10.0, r_out = 15.0, spacing = 1.0, margin = 8.0;
  std::vector<double> hole_center;
  double hole_radius = 0.0;
  int gap_ring = 0;
  std::string out;
};

struct SlabArgs {
  double thickness = 10.0, spacing = 1.0, extent = 20.0;
  std::vector<double> hole_center;
  double hole_radius = 0.0;
  int gap_ring = 0;
  std::string out;
};

struct CohortArgs {
  std::string ids, out;
  int step = 5;
  std::uint64_t seed = 0;
};

struct ReportArgs {
  std::string dice, corr, curves, out_dir;
};

struct PipelineArgs {
  std::string gt, pred, out_dir, id = "case";
  int radius = 5;
  int connectivity = 6;
  double mm = 1.0;
  double step_mm = 0.0;
  double tol = 1e-6;
  std::int64_t max_iter = 20000;
};

LabelVolume apply_defects(LabelVolume labels, const std::vector<double>& hole_center,
                          double hole_radius, int gap_ring) {
  if (hole_radius > 0.0) {
    if (hole_center.size() != 3)
      fail(Errc::InvalidArgument, "--hole-center needs three coordinates");
    labels = inject_defect(
        labels, {DefectKind::Hole, {hole_center[0], hole_center[1], hole_center[2]}, hole_radius, 1});
  }
  if (gap_ring > 0)
    labels = inject_defect(labels, {DefectKind::GapRing, {0.0, 0.0, 0.0}, 0.0, gap_ring});
  return labels;
}

void cmd_thickness(const ThicknessArgs& args) {
  const LabelVolume ed_labels = load_labels(args.labels);
  PotentialField ed_field = solve_laplace(classify_surfaces(ed_labels), args.tol, args.max_iter);
  const double step =
      args.step_mm > 0.0 ? args.step_mm : default_step_mm(ed_labels.spacing_mm());
  const ThicknessMap ed_map = thickness_map(ed_field, step);

  std::optional<ThicknessStats> es_stats;
  double reached = ed_map.reached_fraction;
  if (!args.labels_es.empty()) {
    const LabelVolume es_labels = load_labels(args.labels_es);
    PotentialField es_field =
        solve_laplace(classify_surfaces(es_labels), args.tol, args.max_iter);
    const ThicknessMap es_map = thickness_map(es_field, step);
    es_stats = es_map.stats;
    // pool the reach over both phases
    const auto n_ed = static_cast<double>(ed_map.entries.size());
    const auto n_es = static_cast<double>(es_map.entries.size());
    reached = (ed_map.reached_fraction * n_ed + es_map.reached_fraction * n_es) / (n_ed + n_es);
    if (!args.streamlines_es_out.empty())
      spill(args.streamlines_es_out, streamlines_csv(es_map, es_labels.dims()));
  }

  spill(args.stats_out, thickness_stats_json(ed_map.stats, es_stats, reached));
  if (!args.streamlines_out.empty())
    spill(args.streamlines_out, streamlines_csv(ed_map, ed_labels.dims()));
}

void cmd_correlate(const CorrelateArgs& args) {
  auto read_dir = [](const std::string& dir) {
    std::vector<CaseThicknessStats> cases;
    if (!fs::is_directory(dir)) fail(Errc::IoFailure, dir + " is not a directory");
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir))
      if (entry.path().extension() == ".json") files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    for (const auto& file : files) {
      const PhaseStatsRecord rec = phase_stats_from_json(slurp(file.string()));
      if (!rec.ed || !rec.es)
        fail(Errc::InvalidArgument, file.string() + " is missing ed or es stats");
      cases.push_back({file.stem().string(), {*rec.ed, *rec.es}});
    }
    return cases;
  };
  const auto pred = read_dir(args.pred_dir);
  const auto gt = read_dir(args.gt_dir);
  spill(args.out, to_json(correlation_report(pred, gt)));
}

void cmd_report(const ReportArgs& args) {
  std::optional<DiceTable> dice_table;
  std::optional<CorrelationTable> corr_table;
  std::optional<std::vector<CurveRow>> curves;
  if (!args.dice.empty()) dice_table = dice_table_from_json(slurp(args.dice));
  if (!args.corr.empty()) corr_table = correlation_table_from_json(slurp(args.corr));
  if (!args.curves.empty()) curves = curves_from_csv(slurp(args.curves));

  const RenderedReports rendered = emit_reports(dice_table, corr_table, curves);
  std::error_code ec;
  fs::create_directories(args.out_dir, ec);
  if (ec) fail(Errc::IoFailure, "cannot create " + args.out_dir);
  if (rendered.dice_summary_txt)
    spill((fs::path(args.out_dir) / "dice_summary.txt").string(), *rendered.dice_summary_txt);
  if (rendered.correlation_table_txt)
    spill((fs::path(args.out_dir) / "correlation_table.txt").string(),
          *rendered.correlation_table_txt);
  if (rendered.curves_csv)
    spill((fs::path(args.out_dir) / "curves.csv").string(), *rendered.curves_csv);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LVM wall thickness measurement and segmentation evaluation"};
  app.require_subcommand(1);

  RepairArgs repair_args;
  auto* repair_cmd = app.add_subcommand("repair", "Fill holes and close label-map gaps");
  repair_cmd->add_option("--in", repair_args.in, "input VVOL1 label volume")->required();
  repair_cmd->add_option("--out", repair_args.out, "output VVOL1 path")->required();
  repair_cmd->add_option("--radius", repair_args.radius, "structuring radius in voxels");
  repair_cmd->add_option("--connectivity", repair_args.connectivity, "hole-fill connectivity (6|26)");

  ResampleArgs resample_args;
  auto* resample_cmd = app.add_subcommand("resample", "Resample to isotropic spacing");
  resample_cmd->add_option("--in", resample_args.in)->required();
  resample_cmd->add_option("--out", resample_args.out)->required();
  resample_cmd->add_option("--mm", resample_args.mm, "target spacing in mm");
  resample_cmd->add_option("--mode", resample_args.mode, "nearest|trilinear");

  ThicknessArgs thickness_args;
  auto* thickness_cmd =
      app.add_subcommand("thickness", "Solve the Laplace potential and trace streamlines");
  thickness_cmd->add_option("--labels", thickness_args.labels, "ED-phase label volume")->required();
  thickness_cmd->add_option("--labels-es", thickness_args.labels_es, "optional ES-phase labels");
  thickness_cmd->add_option("--stats-out", thickness_args.stats_out)->required();
  thickness_cmd->add_option("--streamlines-out", thickness_args.streamlines_out,
                            "ED-phase streamline CSV");
  thickness_cmd->add_option("--streamlines-es-out", thickness_args.streamlines_es_out,
                            "ES-phase streamline CSV");
  thickness_cmd->add_option("--step-mm", thickness_args.step_mm, "integration step (default 0.25*spacing)");
  thickness_cmd->add_option("--tol", thickness_args.tol, "Jacobi stop tolerance");
  thickness_cmd->add_option("--max-iter", thickness_args.max_iter);

  DiceArgs dice_args;
  auto* dice_cmd = app.add_subcommand("dice", "Per-label Dice of two label volumes");
  dice_cmd->add_option("--pred", dice_args.pred)->required();
  dice_cmd->add_option("--gt", dice_args.gt)->required();
  dice_cmd->add_option("--out", dice_args.out)->required();
  dice_cmd->add_option("--id", dice_args.id, "case id recorded in the report");

  CorrelateArgs correlate_args;
  auto* correlate_cmd =
      app.add_subcommand("correlate", "Pearson cells across per-case thickness stats");
  correlate_cmd->add_option("--pred-stats", correlate_args.pred_dir)->required();
  correlate_cmd->add_option("--gt-stats", correlate_args.gt_dir)->required();
  correlate_cmd->add_option("--out", correlate_args.out)->required();

  auto* phantom_cmd = app.add_subcommand("phantom", "Generate analytic label phantoms");
  phantom_cmd->require_subcommand(1);
  ShellArgs shell_args;
  auto* shell_cmd = phantom_cmd->add_subcommand("shell", "spherical shell phantom");
  shell_cmd->add_option("--r-in", shell_args.r_in);
  shell_cmd->add_option("--r-out", shell_args.r_out);
  shell_cmd->add_option("--spacing", shell_args.spacing);
  shell_cmd->add_option("--margin", shell_args.margin);
  shell_cmd->add_option("--hole-center", shell_args.hole_center, "hole center x y z (mm)")
      ->expected(3);
  shell_cmd->add_option("--hole-radius", shell_args.hole_radius);
  shell_cmd->add_option("--gap-ring", shell_args.gap_ring, "gap-ring thickness in voxels");
  shell_cmd->add_option("--out", shell_args.out)->required();
  SlabArgs slab_args;
  auto* slab_cmd = phantom_cmd->add_subcommand("slab", "flat wall phantom");
  slab_cmd->add_option("--thickness", slab_args.thickness);
  slab_cmd->add_option("--spacing", slab_args.spacing);
  slab_cmd->add_option("--extent", slab_args.extent);
  slab_cmd->add_option("--hole-center", slab_args.hole_center)->expected(3);
  slab_cmd->add_option("--hole-radius", slab_args.hole_radius);
  slab_cmd->add_option("--gap-ring", slab_args.gap_ring);
  slab_cmd->add_option("--out", slab_args.out)->required();

  CohortArgs cohort_args;
  auto* cohort_cmd = app.add_subcommand("cohorts", "Nested training cohorts from a case list");
  cohort_cmd->add_option("--ids", cohort_args.ids, "text file, one case id per line")->required();
  cohort_cmd->add_option("--step", cohort_args.step)->required();
  cohort_cmd->add_option("--seed", cohort_args.seed)->required();
  cohort_cmd->add_option("--out", cohort_args.out)->required();

  ReportArgs report_args;
  auto* report_cmd = app.add_subcommand("report", "Render tables and plotting CSVs");
  report_cmd->add_option("--dice", report_args.dice, "dice report or summary fixture JSON");
  report_cmd->add_option("--corr", report_args.corr, "correlation report or fixture JSON");
  report_cmd->add_option("--curves", report_args.curves, "training-curve CSV");
  report_cmd->add_option("--out", report_args.out_dir, "output directory")->required();

  PipelineArgs pipeline_args;
  auto* pipeline_cmd =
      app.add_subcommand("pipeline", "repair -> resample -> thickness (-> dice) for one case");
  pipeline_cmd->add_option("--gt", pipeline_args.gt)->required();
  pipeline_cmd->add_option("--pred", pipeline_args.pred);
  pipeline_cmd->add_option("--out-dir", pipeline_args.out_dir)->required();
  pipeline_cmd->add_option("--id", pipeline_args.id);
  pipeline_cmd->add_option("--radius", pipeline_args.radius);
  pipeline_cmd->add_option("--connectivity", pipeline_args.connectivity);
  pipeline_cmd->add_option("--mm", pipeline_args.mm, "resample target spacing");
  pipeline_cmd->add_option("--step-mm", pipeline_args.step_mm);
  pipeline_cmd->add_option("--tol", pipeline_args.tol);
  pipeline_cmd->add_option("--max-iter", pipeline_args.max_iter);

  CLI11_PARSE(app, argc, argv);

  try {
    if (repair_cmd->parsed()) {
      const LabelVolume labels = load_labels(repair_args.in);
      write_volume_file(repair_args.out,
                        repair_labels(labels, {repair_args.radius, repair_args.connectivity}));
    } else if (resample_cmd->parsed()) {
      ResampleMode mode;
      if (resample_args.mode == "nearest")
        mode = ResampleMode::Nearest;
      else if (resample_args.mode == "trilinear")
        mode = ResampleMode::Trilinear;
      else
        fail(Errc::InvalidArgument, "mode must be nearest or trilinear");
      const AnyVolume vol = read_volume_file(resample_args.in);
      if (mode == ResampleMode::Trilinear && std::holds_alternative<VolumeU8>(vol)) {
        // protect label volumes: u8 inputs resample with nearest semantics only
        bool labelish = true;
        for (auto v : std::get<VolumeU8>(vol).data()) labelish &= (v <= 2);
        if (labelish) fail(Errc::InvalidArgument, "label volumes require --mode nearest");
      }
      write_volume_file(resample_args.out, resample_isotropic(vol, resample_args.mm, mode));
    } else if (thickness_cmd->parsed()) {
      cmd_thickness(thickness_args);
    } else if (dice_cmd->parsed()) {
      const LabelVolume pred = load_labels(dice_args.pred);
      const LabelVolume gt = load_labels(dice_args.gt);
      const DiceCase d = dice_case(pred, gt);
      spill(dice_args.out,
            to_json(make_dice_report({{dice_args.id, d.blood_pool, d.lvm, d.mean}})));
    } else if (correlate_cmd->parsed()) {
      cmd_correlate(correlate_args);
    } else if (shell_cmd->parsed()) {
      LabelVolume labels =
          make_shell({shell_args.r_in, shell_args.r_out, shell_args.spacing, shell_args.margin});
      labels = apply_defects(std::move(labels), shell_args.hole_center, shell_args.hole_radius,
                             shell_args.gap_ring);
      write_volume_file(shell_args.out, labels);
    } else if (slab_cmd->parsed()) {
      LabelVolume labels = make_slab(slab_args.thickness, slab_args.spacing, slab_args.extent);
      labels = apply_defects(std::move(labels), slab_args.hole_center, slab_args.hole_radius,
                             slab_args.gap_ring);
      write_volume_file(slab_args.out, labels);
    } else if (cohort_cmd->parsed()) {
      std::vector<std::string> ids;
      std::istringstream in(slurp(cohort_args.ids));
      std::string line;
      while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) ids.push_back(line);
      }
      spill(cohort_args.out, to_json(make_nested_cohorts(ids, cohort_args.step, cohort_args.seed)));
    } else if (report_cmd->parsed()) {
      cmd_report(report_args);
    } else if (pipeline_cmd->parsed()) {
      PipelineConfig config;
      config.repair = {pipeline_args.radius, pipeline_args.connectivity};
      config.resample_mm = pipeline_args.mm;
      config.step_mm = pipeline_args.step_mm;
      config.tol = pipeline_args.tol;
      config.max_iter = pipeline_args.max_iter;
      std::optional<std::string> pred;
      if (!pipeline_args.pred.empty()) pred = pipeline_args.pred;
      run_pipeline(pipeline_args.gt, pred, config, pipeline_args.out_dir, pipeline_args.id);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << errc_name(e.code()) << ": " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
