#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "growthlab/index.hpp"
#include "growthlab/window.hpp"

namespace growthlab {

enum class State { Holds, Fails, Inconclusive };

std::string_view state_name(State s);

/// Outcome of a finite probe of an asymptotic condition.
///
/// A Fails verdict always carries a witness: the sample point(s) at which the
/// violation was observed, stored as log-arguments so they can be re-evaluated
/// exactly, plus the observed value of the violated quantity.
struct Verdict {
  std::string condition;
  State state = State::Inconclusive;
  std::map<std::string, double> witness;
  std::map<std::string, Index> witness_index;
  std::optional<Window> window;
  std::map<std::string, double> statistics;
  std::vector<std::string> diagnostics;
  /// Decided by a closed form or exact enumeration rather than a trend.
  bool exact = false;

  bool holds() const { return state == State::Holds; }
  bool fails() const { return state == State::Fails; }
  bool has_witness() const { return !witness.empty() || !witness_index.empty(); }
};

/// Exit status contract of the CLI: 0 Holds, 1 Fails, 2 Inconclusive.
int exit_code(State s);

}  // namespace growthlab
