// Observations: a real measurement, a vector of counts, or a
// (trials, successes) pair shared by the Bernoulli-process models.
#pragma once

#include <compare>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

namespace possim {

struct BernoulliOutcome {
  int trials = 0;
  int successes = 0;
  auto operator<=>(const BernoulliOutcome&) const = default;
};

using Observation = std::variant<double, std::vector<int>, BernoulliOutcome>;

inline std::string to_string(const Observation& x) {
  std::ostringstream os;
  if (auto* d = std::get_if<double>(&x)) {
    os << *d;
  } else if (auto* v = std::get_if<std::vector<int>>(&x)) {
    os << '(';
    for (std::size_t i = 0; i < v->size(); ++i) {
      if (i) os << ',';
      os << (*v)[i];
    }
    os << ')';
  } else {
    auto& b = std::get<BernoulliOutcome>(x);
    os << '(' << b.trials << ',' << b.successes << ')';
  }
  return os.str();
}

}  // namespace possim
