#include "lvthick/metrics.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

namespace lvthick {

double dice(const LabelVolume& pred, const LabelVolume& gt, int label) {
  if (pred.dims() != gt.dims())
    fail(Errc::DimensionMismatch, "pred and gt volumes must share dims");
  std::int64_t a = 0, b = 0, both = 0;
  const auto pd = pred.data();
  const auto gd = gt.data();
  for (std::int64_t i = 0; i < pred.voxel_count(); ++i) {
    const bool in_a = pd[static_cast<std::size_t>(i)] == label;
    const bool in_b = gd[static_cast<std::size_t>(i)] == label;
    a += in_a;
    b += in_b;
    both += in_a && in_b;
  }
  if (a + b == 0) return 1.0;  // agreement on absence
  return 2.0 * static_cast<double>(both) / static_cast<double>(a + b);
}

DiceCase dice_case(const LabelVolume& pred, const LabelVolume& gt) {
  DiceCase result;
  result.blood_pool = dice(pred, gt, kBloodPool);
  result.lvm = dice(pred, gt, kLvm);
  result.mean = 0.5 * (result.blood_pool + result.lvm);
  return result;
}

DiceSummary dice_summary(std::span<const double> case_means) {
  if (case_means.empty()) fail(Errc::EmptyInput, "no cases to summarize");
  double sum = 0.0, max = case_means[0];
  for (double v : case_means) {
    sum += v;
    max = std::max(max, v);
  }
  return {sum / static_cast<double>(case_means.size()), max};
}

DiceSummary dice_summary(std::span<const DiceCase> cases) {
  std::vector<double> means;
  means.reserve(cases.size());
  for (const auto& c : cases) means.push_back(c.mean);
  return dice_summary(std::span<const double>(means));
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) fail(Errc::LengthMismatch, "sequences must have equal length");
  if (x.size() < 2) fail(Errc::TooFewSamples, "Pearson needs at least 2 samples");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) fail(Errc::ZeroVariance, "constant sequence has no correlation");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

// --- Reports ---------------------------------------------------------------------

DiceReport make_dice_report(std::vector<DiceReport::Entry> per_case) {
  DiceReport report;
  report.per_case = std::move(per_case);
  std::vector<double> means;
  means.reserve(report.per_case.size());
  for (const auto& e : report.per_case) means.push_back(e.mean);
  report.summary = dice_summary(std::span<const double>(means));
  return report;
}

std::string to_json(const DiceReport& report) {
  nlohmann::json j;
  j["per_case"] = nlohmann::json::array();
  for (const auto& e : report.per_case)
    j["per_case"].push_back(
        {{"id", e.id}, {"bp", e.blood_pool}, {"lvm", e.lvm}, {"mean", e.mean}});
  j["summary"] = {{"mean", report.summary.mean}, {"max", report.summary.max}};
  return j.dump(2) + "\n";
}

DiceReport dice_report_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
    std::vector<DiceReport::Entry> entries;
    for (const auto& e : j.at("per_case"))
      entries.push_back({e.at("id").get<std::string>(), e.at("bp").get<double>(),
                         e.at("lvm").get<double>(), e.at("mean").get<double>()});
    return make_dice_report(std::move(entries));
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::HeaderParse, std::string("bad dice report JSON: ") + e.what());
  }
}

CorrelationReport correlation_report(std::span<const CaseThicknessStats> pred,
                                     std::span<const CaseThicknessStats> gt) {
  if (pred.size() != gt.size())
    fail(Errc::CaseIdMismatch, "prediction and ground-truth case counts differ");
  if (pred.size() < 2) fail(Errc::TooFewSamples, "correlation needs at least 2 cases");
  for (std::size_t i = 0; i < pred.size(); ++i)
    if (pred[i].case_id != gt[i].case_id)
      fail(Errc::CaseIdMismatch, "case id mismatch: \"" + pred[i].case_id + "\" vs \"" +
                                     gt[i].case_id + "\"");

  auto column = [&](auto select) {
    std::vector<double> px, gx;
    px.reserve(pred.size());
    gx.reserve(gt.size());
    for (std::size_t i = 0; i < pred.size(); ++i) {
      px.push_back(select(pred[i].stats));
      gx.push_back(select(gt[i].stats));
    }
    return pearson(px, gx);
  };

  CorrelationReport report;
  report.n = static_cast<int>(pred.size());
  report.ed_median = column([](const PhaseStatsPair& s) { return s.ed.median_mm; });
  report.ed_p95 = column([](const PhaseStatsPair& s) { return s.ed.p95_mm; });
  report.ed_max = column([](const PhaseStatsPair& s) { return s.ed.max_mm; });
  report.es_median = column([](const PhaseStatsPair& s) { return s.es.median_mm; });
  report.es_p95 = column([](const PhaseStatsPair& s) { return s.es.p95_mm; });
  report.es_max = column([](const PhaseStatsPair& s) { return s.es.max_mm; });
  return report;
}

std::string to_json(const CorrelationReport& report) {
  nlohmann::json j;
  j["n"] = report.n;
  j["rows"] = {{"ed", {{"median", report.ed_median}, {"p95", report.ed_p95}, {"max", report.ed_max}}},
               {"es", {{"median", report.es_median}, {"p95", report.es_p95}, {"max", report.es_max}}}};
  return j.dump(2) + "\n";
}

CorrelationReport correlation_report_from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    CorrelationReport report;
    report.n = j.at("n").get<int>();
    const auto& ed = j.at("rows").at("ed");
    const auto& es = j.at("rows").at("es");
    report.ed_median = ed.at("median").get<double>();
    report.ed_p95 = ed.at("p95").get<double>();
    report.ed_max = ed.at("max").get<double>();
    report.es_median = es.at("median").get<double>();
    report.es_p95 = es.at("p95").get<double>();
    report.es_max = es.at("max").get<double>();
    return report;
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::HeaderParse, std::string("bad correlation report JSON: ") + e.what());
  }
}

}  // namespace lvthick
