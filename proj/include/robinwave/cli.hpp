#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "robinwave/simulate.hpp"

namespace robinwave::cli {

/// Entry point shared by the binary and the tests. `args` excludes the
/// program name. Exit codes: 0 success (scientific findings such as
/// "criterion unsatisfied" or "no blow-up" are still success), 2 config
/// or flag error, 3 precondition/applicability error, 4 I/O error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Formatters shared with the tests.
std::string format_verdict(const ScenarioReport& rep);
std::string format_report(const ScenarioReport& rep);
std::string series_csv(const SimSeries& series);

}  // namespace robinwave::cli
