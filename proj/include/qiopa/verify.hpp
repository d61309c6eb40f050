#pragma once

// Oracle-equivalence suite: numeric pipelines against closed forms, plus the
// adjudication of the misprinted formulas.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace qiopa::verify {

enum class Kind {
  /// Closed-form identity; threshold fixed.
  exact,
  /// Limited by truncation or series convergence; threshold follows --tol.
  numeric,
  /// Printed formula versus its corrected counterpart.
  adjudication,
  /// Wall-clock budget in seconds.
  runtime,
};

enum class Relation { equal, greater, less };

struct Check {
  int criterion = 0;
  std::string name;
  Kind kind = Kind::exact;
  Relation relation = Relation::equal;
  double expected = 0.0;
  double got = 0.0;
  /// |got - expected| for equalities, got - expected otherwise.
  double deviation = 0.0;
  double threshold = 0.0;
  bool pass = false;
  std::string note;
};

struct Options {
  /// Overrides the threshold of every numeric check.
  std::optional<double> tolerance;
  /// Restrict to these criteria (empty = all of 1..10).
  std::vector<int> criteria;
};

struct Report {
  std::vector<Check> checks;
  bool all_pass() const;
  int failures() const;
  /// Checks of one criterion all pass (false when there are none).
  bool criterion_pass(int c) const;
};

Report run(const Options& options = {});

std::string to_string(Kind k);
std::string to_string(Relation r);
nlohmann::json to_json(const Report& report, const Options& options);
/// One line per check.
std::string to_text(const Report& report);

}  // namespace qiopa::verify
