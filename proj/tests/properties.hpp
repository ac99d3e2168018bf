#pragma once

#include <functional>
#include <string>
#include <vector>

namespace props {

struct Outcome {
  std::string name;
  int cases = 0;
  int failures = 0;
  std::string first_failure;
  bool ok() const { return failures == 0; }
};

Outcome parse_print_identity(int n);
Outcome print_parse_idempotence(int n);
Outcome flattening_idempotence(int n);
Outcome parallel_assign_swap(int n);
Outcome add_matches_brute_force();
Outcome modified_vars_monotone(int n);
Outcome lint_deterministic(int n);

std::vector<Outcome> all(int n);

}  // namespace props
