#include "lvthick/reports.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include <json.hpp>

namespace lvthick {

namespace {

std::string fmt4(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

CorrelationReport cells_from_rows(const nlohmann::json& rows) {
  CorrelationReport r;
  const auto& ed = rows.at("ed");
  const auto& es = rows.at("es");
  r.ed_median = ed.at("median").get<double>();
  r.ed_p95 = ed.at("p95").get<double>();
  r.ed_max = ed.at("max").get<double>();
  r.es_median = es.at("median").get<double>();
  r.es_p95 = es.at("p95").get<double>();
  r.es_max = es.at("max").get<double>();
  return r;
}

}  // namespace

DiceTable dice_table_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::HeaderParse, std::string("bad dice JSON: ") + e.what());
  }
  DiceTable table;
  try {
    if (j.contains("conditions")) {
      for (const auto& c : j["conditions"]) {
        DiceTable::Condition cond;
        cond.label = c.at("label").get<std::string>();
        cond.summary = {c.at("mean").get<double>(), c.at("max").get<double>()};
        if (c.contains("n_train")) cond.n_train = c["n_train"].get<int>();
        table.conditions.push_back(std::move(cond));
      }
    } else {
      // a computed DiceReport becomes a single condition
      const DiceReport report = dice_report_from_json(text);
      table.conditions.push_back(
          {j.value("label", std::string("computed")), report.summary, std::nullopt});
    }
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::HeaderParse, std::string("bad dice table field: ") + e.what());
  }
  if (table.conditions.empty()) fail(Errc::NothingToEmit, "dice table has no conditions");
  return table;
}

CorrelationTable correlation_table_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::HeaderParse, std::string("bad correlation JSON: ") + e.what());
  }
  CorrelationTable table;
  try {
    table.n = j.at("n").get<int>();
    if (j.contains("conditions")) {
      for (const auto& c : j["conditions"])
        table.conditions.emplace_back(c.at("label").get<std::string>(),
                                      cells_from_rows(c.at("rows")));
    } else {
      table.conditions.emplace_back(j.value("label", std::string("computed")),
                                    cells_from_rows(j.at("rows")));
    }
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::HeaderParse, std::string("bad correlation table field: ") + e.what());
  }
  if (table.conditions.empty()) fail(Errc::NothingToEmit, "correlation table has no conditions");
  return table;
}

std::vector<CurveRow> curves_from_csv(const std::string& text) {
  std::vector<CurveRow> rows;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (first) {
      first = false;
      if (line != "n_train,condition,mean_dice,max_dice")
        fail(Errc::HeaderParse, "unexpected curves CSV header: " + line);
      continue;
    }
    std::istringstream ls(line);
    std::string field;
    CurveRow row;
    try {
      std::getline(ls, field, ',');
      row.n_train = std::stoi(field);
      std::getline(ls, row.condition, ',');
      std::getline(ls, field, ',');
      row.mean_dice = std::stod(field);
      std::getline(ls, field, ',');
      row.max_dice = std::stod(field);
    } catch (const std::exception&) {
      fail(Errc::HeaderParse, "bad curves CSV row: " + line);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string curves_to_csv(const std::vector<CurveRow>& rows) {
  std::string out = "n_train,condition,mean_dice,max_dice\n";
  for (const auto& r : rows)
    out += std::to_string(r.n_train) + "," + r.condition + "," + fmt4(r.mean_dice) + "," +
           fmt4(r.max_dice) + "\n";
  return out;
}

namespace {

std::string render_dice_table(const DiceTable& table) {
  std::size_t label_width = 9;  // "Condition"
  for (const auto& c : table.conditions) label_width = std::max(label_width, c.label.size());

  std::string out = "Dice summary\n\n";
  out += "Condition";
  out.append(label_width - 9 + 2, ' ');
  out += "   Mean     Max  n_train\n";
  for (const auto& c : table.conditions) {
    out += c.label;
    out.append(label_width - c.label.size() + 2, ' ');
    out += fmt4(c.summary.mean) + "  " + fmt4(c.summary.max);
    out += c.n_train ? "  " + std::to_string(*c.n_train) : "  -";
    out += "\n";
  }
  return out;
}

std::string render_correlation_table(const CorrelationTable& table) {
  std::string out =
      "LVM wall thickness (mm): Pearson correlation, predicted vs ground truth (n=" +
      std::to_string(table.n) + ")\n\n";

  constexpr int kStatWidth = 17;  // "  95 percentile"
  constexpr int kCellWidth = 12;

  auto pad_left = [](const std::string& s, int width) {
    std::string r;
    if (static_cast<int>(s.size()) < width) r.append(width - s.size(), ' ');
    return r + s;
  };

  out.append(kStatWidth, ' ');
  for (const auto& [label, cells] : table.conditions) out += pad_left(label, kCellWidth);
  out += "\n";

  struct Row {
    const char* name;
    double CorrelationReport::*ed;
    double CorrelationReport::*es;
  };
  const Row rows[] = {{"Median", &CorrelationReport::ed_median, &CorrelationReport::es_median},
                      {"95 percentile", &CorrelationReport::ed_p95, &CorrelationReport::es_p95},
                      {"Max", &CorrelationReport::ed_max, &CorrelationReport::es_max}};

  for (const bool is_es : {false, true}) {
    out += is_es ? "End-Systole\n" : "End-Diastole\n";
    for (const auto& row : rows) {
      std::string line = "  ";
      line += row.name;
      line.append(kStatWidth - 2 - std::string(row.name).size(), ' ');
      for (const auto& [label, cells] : table.conditions)
        line += pad_left(fmt4(is_es ? cells.*row.es : cells.*row.ed), kCellWidth);
      out += line + "\n";
    }
  }
  return out;
}

}  // namespace

RenderedReports emit_reports(const std::optional<DiceTable>& dice,
                             const std::optional<CorrelationTable>& correlation,
                             const std::optional<std::vector<CurveRow>>& curves) {
  if (!dice && !correlation && !curves)
    fail(Errc::NothingToEmit, "no report inputs were provided");
  RenderedReports out;
  if (dice) out.dice_summary_txt = render_dice_table(*dice);
  if (correlation) out.correlation_table_txt = render_correlation_table(*correlation);
  if (curves) out.curves_csv = curves_to_csv(*curves);
  return out;
}

}  // namespace lvthick
