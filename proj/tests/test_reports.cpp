#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>

#include "lvthick/reports.hpp"

using namespace lvthick;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

const std::string kFixtures = LVTHICK_FIXTURE_DIR;

}  // namespace

TEST_CASE("the published correlation fixture renders all twelve cells") {
  const auto table = correlation_table_from_json(slurp(kFixtures + "/published/wall_thickness_pearson.json"));
  REQUIRE(table.conditions.size() == 2);
  CHECK(table.n == 45);
  CHECK(table.conditions[0].first == "Before TL");
  CHECK(table.conditions[1].first == "After TL");

  const auto rendered = emit_reports(std::nullopt, table, std::nullopt);
  REQUIRE(rendered.correlation_table_txt.has_value());
  const std::string& txt = *rendered.correlation_table_txt;

  for (const char* cell : {"0.7200", "0.6400", "0.4200", "0.7400", "0.6900", "0.5400",
                           "0.8100", "0.6700", "0.9200", "0.9000", "0.7800"})
    CHECK_MESSAGE(txt.find(cell) != std::string::npos, "missing cell ", cell);
  CHECK(txt.find("End-Diastole") != std::string::npos);
  CHECK(txt.find("End-Systole") != std::string::npos);
  CHECK(txt.find("(n=45)") != std::string::npos);

  // ES median moves 0.72 -> 0.92 across the two labeled conditions
  CHECK(table.conditions[0].second.es_median == doctest::Approx(0.72));
  CHECK(table.conditions[1].second.es_median == doctest::Approx(0.92));
  CHECK(table.conditions[1].second.ed_median == doctest::Approx(0.74));
}

TEST_CASE("the published dice fixture renders the summary numbers verbatim") {
  const auto table = dice_table_from_json(slurp(kFixtures + "/published/dice_summary.json"));
  const auto rendered = emit_reports(table, std::nullopt, std::nullopt);
  REQUIRE(rendered.dice_summary_txt.has_value());
  const std::string& txt = *rendered.dice_summary_txt;
  for (const char* value : {"0.6359", "0.8326", "0.8925", "0.9541"})
    CHECK_MESSAGE(txt.find(value) != std::string::npos, "missing value ", value);
  CHECK(txt.find("random-init") != std::string::npos);
  CHECK(txt.find("fine-tuned") != std::string::npos);
}

TEST_CASE("curves CSV round-trips through parse and render") {
  const std::string text = slurp(kFixtures + "/published/training_curves.csv");
  const auto rows = curves_from_csv(text);
  REQUIRE(rows.size() == 3);
  CHECK(rows[1].n_train == 30);
  CHECK(rows[1].condition == "random-init");
  CHECK(rows[1].mean_dice == doctest::Approx(0.6359));
  CHECK(rows[1].max_dice == doctest::Approx(0.8326));

  const std::string rendered = curves_to_csv(rows);
  CHECK(rendered == text);  // fixture is already in canonical 4-decimal form
  CHECK(rendered.find("30,random-init,0.6359,0.8326") != std::string::npos);
}

TEST_CASE("a computed DiceReport renders as a single condition") {
  const DiceReport report = make_dice_report({{"caseA", 0.9, 0.8, 0.85}});
  const auto table = dice_table_from_json(to_json(report));
  REQUIRE(table.conditions.size() == 1);
  CHECK(table.conditions[0].summary.mean == doctest::Approx(0.85));
  const auto rendered = emit_reports(table, std::nullopt, std::nullopt);
  CHECK(rendered.dice_summary_txt->find("0.8500") != std::string::npos);
}

TEST_CASE("emit_reports is deterministic") {
  const auto table = correlation_table_from_json(slurp(kFixtures + "/published/wall_thickness_pearson.json"));
  const auto dice = dice_table_from_json(slurp(kFixtures + "/published/dice_summary.json"));
  const auto curves = curves_from_csv(slurp(kFixtures + "/published/training_curves.csv"));
  const auto a = emit_reports(dice, table, curves);
  const auto b = emit_reports(dice, table, curves);
  CHECK(*a.dice_summary_txt == *b.dice_summary_txt);
  CHECK(*a.correlation_table_txt == *b.correlation_table_txt);
  CHECK(*a.curves_csv == *b.curves_csv);
}

TEST_CASE("emitting nothing is an error") {
  try {
    emit_reports(std::nullopt, std::nullopt, std::nullopt);
    FAIL("expected NothingToEmit");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NothingToEmit);
  }
}

TEST_CASE("malformed report inputs fail cleanly") {
  try {
    curves_from_csv("bogus,header\n1,2,3,4\n");
    FAIL("expected HeaderParseError");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::HeaderParse);
  }
  try {
    correlation_table_from_json("{\"n\": 2}");
    FAIL("expected HeaderParseError");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::HeaderParse);
  }
}
