#pragma once

#include <cstdint>
#include <string>

namespace definetti {

// Caps on problem sizes. Exceeding one raises ErrorKind::BudgetExceeded.
struct Budget {
  std::int64_t max_dim = 1024;          // side of any dense operator built
  std::int64_t max_tuples = 10000000;   // deterministic strategies enumerated
  std::int64_t max_lp_vars = 200000;
  std::int64_t max_branches = 2000000;  // measurement outcome sequences

  // Defaults, with max_dim replaced by $DEFINETTI_BUDGET when it is set.
  static Budget from_environment();

  void check_dim(double dim, const std::string& what) const;
  void check_tuples(double count, const std::string& what) const;
  void check_lp_vars(double count, const std::string& what) const;
  void check_branches(double count, const std::string& what) const;
};

}  // namespace definetti
