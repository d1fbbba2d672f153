#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace weylspec::runner {

struct PropertyCounts {
  int pairs = 200;
  int pair_size = 20;
  int quadruples = 100;
  int quadruple_size = 16;
  int sets = 500;
  int symbols = 200;
};

struct PropertyCheck {
  std::string name;
  int trials = 0;
  int failures = 0;
  double max_violation = 0.0;  // largest amount by which the checked inequality or identity failed; 0 when none
};

/// Randomized invariant checks over matrices, finite sets, parsed symbols and
/// their quantizations. Same seed, same results.
std::vector<PropertyCheck> run_property_suite(const PropertyCounts& counts, std::uint64_t seed);

/// Random admissible symbol text in `dim` variables; may use the parameter `b`.
std::string random_symbol_text(std::uint64_t seed, int dim);

}  // namespace weylspec::runner
