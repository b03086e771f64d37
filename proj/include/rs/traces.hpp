#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rs/core.hpp"
#include "rs/semantics.hpp"

namespace rs {

struct NotIndependent : Error {
  NotIndependent(const StepLabel& a, const StepLabel& b)
      : Error("steps are not independent: " + a.text() + " / " + b.text()) {}
};

struct NotEnabledAfterSwap : Error {
  explicit NotEnabledAfterSwap(const StepLabel& label)
      : Error("independent swap fails to replay: " + label.text() + " not enabled in new order") {}
};

struct NotConverse : Error {
  NotConverse(const StepLabel& a, const StepLabel& b)
      : Error("steps are not a converse pair: " + a.text() + " / " + b.text()) {}
};

struct TraceTooLong : Error {
  explicit TraceTooLong(std::size_t length, std::size_t bound)
      : Error("trace length " + std::to_string(length) + " exceeds equivalence bound " +
              std::to_string(bound)) {}
};

// Causal independence of step labels: different gate species AND different
// touched signal names. Two steps on a same signal are never independent,
// since one cannot tell whether they compete for one occurrence or use two.
bool independent(const StepLabel& a, const StepLabel& b);

// Exchange steps i and i+1. Requires independence and that both orders
// replay; the final state is checked to be unchanged. Throws NotIndependent,
// NotEnabledAfterSwap, or std::out_of_range.
Trace swap_adjacent(const Trace& trace, std::size_t i);

// Remove steps i and i+1 when steps[i+1] undoes steps[i]. Throws NotConverse
// or std::out_of_range.
Trace cancel_converse(const Trace& trace, std::size_t i);

struct StuckAdjacency {
  std::size_t index;   // position of the fwd step of a fwd-bwd adjacency
  std::string reason;  // why it could neither cancel nor swap
};

struct StandardizeResult {
  Trace trace;
  std::vector<StuckAdjacency> stuck;
};

// Normalize a replayable trace: repeatedly take the leftmost applicable
// rewrite, preferring cancellation of an adjacent converse pair over swapping
// an independent fwd-bwd pair into bwd-fwd order. Preserves the initial and
// final state, never lengthens the trace, and terminates. Any remaining
// fwd-bwd adjacency is reported in `stuck`.
StandardizeResult standardize(const Trace& trace);

// Whether b is reachable from a by exchanging adjacent independent steps
// (breadth-first over the permutation class; cancellation is not part of the
// relation). Traces longer than `bound` raise TraceTooLong.
bool perm_equiv(const Trace& a, const Trace& b, std::size_t bound = 12);

}  // namespace rs
