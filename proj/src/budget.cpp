#include "definetti/budget.hpp"

#include <cstdlib>
#include <sstream>

#include "definetti/errors.hpp"

namespace definetti {

namespace {

void check(double value, std::int64_t cap, const std::string& what, const char* unit) {
  if (value > static_cast<double>(cap)) {
    std::ostringstream os;
    os << what << " needs " << value << ' ' << unit << ", cap is " << cap;
    fail(ErrorKind::BudgetExceeded, os.str());
  }
}

}  // namespace

Budget Budget::from_environment() {
  Budget b;
  if (const char* env = std::getenv("DEFINETTI_BUDGET")) {
    char* end = nullptr;
    const long long v = std::strtoll(env, &end, 10);
    require(end != env && *end == '\0' && v > 0, ErrorKind::InvalidInput,
            "DEFINETTI_BUDGET must be a positive integer");
    b.max_dim = v;
  }
  return b;
}

void Budget::check_dim(double dim, const std::string& what) const { check(dim, max_dim, what, "dimensions"); }
void Budget::check_tuples(double count, const std::string& what) const {
  check(count, max_tuples, what, "strategy tuples");
}
void Budget::check_lp_vars(double count, const std::string& what) const {
  check(count, max_lp_vars, what, "LP variables");
}
void Budget::check_branches(double count, const std::string& what) const {
  check(count, max_branches, what, "measurement branches");
}

}  // namespace definetti
