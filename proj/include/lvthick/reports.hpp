#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lvthick/metrics.hpp"

namespace lvthick {

/// Dice summary rows, one per labeled condition (e.g. "random-init",
/// "fine-tuned"), as rendered in the summary table.
struct DiceTable {
  struct Condition {
    std::string label;
    DiceSummary summary;
    std::optional<int> n_train;
  };
  std::vector<Condition> conditions;
};

/// Wall-thickness Pearson cells per condition; rendered as the two-column
/// ED/ES x median/p95/max table.
struct CorrelationTable {
  int n = 0;
  std::vector<std::pair<std::string, CorrelationReport>> conditions;
};

struct CurveRow {
  int n_train = 0;
  std::string condition;
  double mean_dice = 0.0;
  double max_dice = 0.0;
};

/// Accepts either a computed DiceReport ({"per_case":...,"summary":...}) or
/// a multi-condition summary fixture ({"conditions":[{"label","mean","max"}]}).
DiceTable dice_table_from_json(const std::string& text);

/// Accepts either a computed CorrelationReport ({"n","rows":...}) or a
/// multi-condition fixture ({"n","conditions":[{"label","rows":...}]}).
CorrelationTable correlation_table_from_json(const std::string& text);

/// CSV with header n_train,condition,mean_dice,max_dice.
std::vector<CurveRow> curves_from_csv(const std::string& text);
std::string curves_to_csv(const std::vector<CurveRow>& rows);

struct RenderedReports {
  std::optional<std::string> dice_summary_txt;
  std::optional<std::string> correlation_table_txt;
  std::optional<std::string> curves_csv;
};

/// Renders whatever is present (at least one input required). All numbers
/// print with 4 decimal places; output is byte-deterministic.
RenderedReports emit_reports(const std::optional<DiceTable>& dice,
                             const std::optional<CorrelationTable>& correlation,
                             const std::optional<std::vector<CurveRow>>& curves);

}  // namespace lvthick
