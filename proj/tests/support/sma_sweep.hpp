#pragma once

#include <cstddef>
#include <string>

namespace mids::testing {

struct SweepStats {
  std::size_t runs = 0;
  std::size_t agreement_failures = 0;
  std::size_t validity_failures = 0;
  std::size_t bound_failures = 0;
  std::size_t forgery_failures = 0;
  std::size_t max_messages = 0;
  std::string first_failure;

  bool ok() const { return agreement_failures + validity_failures + bound_failures + forgery_failures == 0; }
};

// Host 0 leads. Every traitor subset of size <= n-2 and every assignment of
// Silent / ConstantLie(0) / ConstantLie(1) / SplitSend (each 2-coloring of
// the other hosts) to the traitors; an honest leader is tried with both
// values. Checks that safe hosts agree, that an honest leader's value is
// chosen, the message bound 2n(n-1)+(n-1), and unforgeability.
SweepStats sweep_sma(std::size_t n);

}  // namespace mids::testing
