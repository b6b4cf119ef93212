#include "lvthick/cohorts.hpp"

#include <limits>
#include <random>

#include <json.hpp>

#include "lvthick/errors.hpp"

namespace lvthick {

namespace {

// Uniform draw from [0, bound) built from whole mt19937_64 outputs by
// rejection, so the result depends only on the standardized engine sequence.
std::uint64_t bounded_draw(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() -
      std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t v = rng();
  while (v >= limit) v = rng();
  return v % bound;
}

}  // namespace

CohortPlan make_nested_cohorts(std::vector<std::string> case_ids, int step, std::uint64_t seed) {
  if (step < 1) fail(Errc::InvalidArgument, "step must be positive");
  if (case_ids.empty()) fail(Errc::EmptyInput, "no case ids");
  if (case_ids.size() % static_cast<std::size_t>(step) != 0)
    fail(Errc::NotDivisible, "case count " + std::to_string(case_ids.size()) +
                                 " is not divisible by step " + std::to_string(step));

  // Fisher-Yates, descending
  std::mt19937_64 rng(seed);
  for (std::size_t i = case_ids.size() - 1; i > 0; --i) {
    const std::uint64_t j = bounded_draw(rng, static_cast<std::uint64_t>(i) + 1);
    std::swap(case_ids[i], case_ids[static_cast<std::size_t>(j)]);
  }

  CohortPlan plan;
  plan.step = step;
  plan.seed = seed;
  plan.case_ids = std::move(case_ids);
  for (std::size_t size = static_cast<std::size_t>(step); size <= plan.case_ids.size();
       size += static_cast<std::size_t>(step))
    plan.groups.emplace_back(plan.case_ids.begin(), plan.case_ids.begin() + size);
  return plan;
}

std::string to_json(const CohortPlan& plan) {
  nlohmann::json j;
  j["case_ids"] = plan.case_ids;
  j["step"] = plan.step;
  j["seed"] = plan.seed;
  j["groups"] = plan.groups;
  return j.dump(2) + "\n";
}

}  // namespace lvthick
