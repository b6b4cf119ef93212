#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace lvthick {

/// Nested training cohorts: groups[i] is a prefix of a seeded shuffle with
/// |groups[i]| = (i+1)*step, so every group is a superset of the previous.
struct CohortPlan {
  std::vector<std::string> case_ids;  // shuffled order
  int step = 0;
  std::uint64_t seed = 0;
  std::vector<std::vector<std::string>> groups;
};

/// Deterministic across platforms: mt19937_64 seeded with `seed` drives a
/// Fisher-Yates shuffle whose bounded draws come from rejection sampling of
/// whole 64-bit outputs (see README for the exact procedure).
CohortPlan make_nested_cohorts(std::vector<std::string> case_ids, int step, std::uint64_t seed);

std::string to_json(const CohortPlan& plan);

}  // namespace lvthick
