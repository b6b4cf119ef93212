#pragma once

#include <span>
#include <string>
#include <vector>

#include "lvthick/thickness.hpp"
#include "lvthick/volume.hpp"

namespace lvthick {

/// Dice overlap 2|A∩B| / (|A|+|B|) for the voxel sets carrying the given
/// label; 1.0 when both sets are empty.
double dice(const LabelVolume& pred, const LabelVolume& gt, int label);

struct DiceCase {
  double blood_pool = 0.0;
  double lvm = 0.0;
  double mean = 0.0;  // unweighted mean of the two foreground labels
};

DiceCase dice_case(const LabelVolume& pred, const LabelVolume& gt);

struct DiceSummary {
  double mean = 0.0;
  double max = 0.0;
};

/// Mean and maximum of the per-case mean Dice values.
DiceSummary dice_summary(std::span<const DiceCase> cases);
DiceSummary dice_summary(std::span<const double> case_means);

/// Sample Pearson correlation, clamped to [-1, 1] against rounding.
double pearson(std::span<const double> x, std::span<const double> y);

// --- Reports ------------------------------------------------------------------

struct DiceReport {
  struct Entry {
    std::string id;
    double blood_pool = 0.0;
    double lvm = 0.0;
    double mean = 0.0;
  };
  std::vector<Entry> per_case;
  DiceSummary summary;
};

DiceReport make_dice_report(std::vector<DiceReport::Entry> per_case);
std::string to_json(const DiceReport& report);
DiceReport dice_report_from_json(const std::string& text);

struct CaseThicknessStats {
  std::string case_id;
  PhaseStatsPair stats;
};

/// Pearson r for each (phase, statistic) cell of the wall-thickness table.
struct CorrelationReport {
  int n = 0;
  double ed_median = 0.0, ed_p95 = 0.0, ed_max = 0.0;
  double es_median = 0.0, es_p95 = 0.0, es_max = 0.0;
};

CorrelationReport correlation_report(std::span<const CaseThicknessStats> pred,
                                     std::span<const CaseThicknessStats> gt);

std::string to_json(const CorrelationReport& report);
CorrelationReport correlation_report_from_json(const std::string& text);

}  // namespace lvthick
