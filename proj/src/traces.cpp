#include "rs/traces.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>

namespace rs {

bool independent(const StepLabel& a, const StepLabel& b) {
  return a.gate_before() != b.gate_before() && a.touched_name() != b.touched_name();
}

namespace {

enum class SwapFailure { none, not_independent, not_enabled };

// Attempt to run steps[i+1] then steps[i] from the state before position i.
// On success returns the common state after both, which must equal the state
// the original order reaches (all step effects are commuting multiset
// deltas).
SwapFailure try_swap_at(const Structure& before, const StepLabel& first, const StepLabel& second,
                        const Structure& after_both) {
  if (!independent(first, second)) return SwapFailure::not_independent;
  Structure state = before;
  try {
    state = apply_step(state, second);
    state = apply_step(state, first);
  } catch (const NotEnabled&) {
    return SwapFailure::not_enabled;
  }
  if (state != after_both)
    throw Error("swapped order reaches a different state; step effects are inconsistent");
  return SwapFailure::none;
}

void check_index(const Trace& trace, std::size_t i) {
  if (trace.steps.size() < 2 || i >= trace.steps.size() - 1)
    throw std::out_of_range("no adjacent step pair at index " + std::to_string(i));
}

}  // namespace

Trace swap_adjacent(const Trace& trace, std::size_t i) {
  check_index(trace, i);
  std::vector<Structure> states = trace.replay();
  switch (try_swap_at(states[i], trace.steps[i], trace.steps[i + 1], states[i + 2])) {
    case SwapFailure::not_independent:
      throw NotIndependent(trace.steps[i], trace.steps[i + 1]);
    case SwapFailure::not_enabled:
      throw NotEnabledAfterSwap(trace.steps[i + 1]);
    case SwapFailure::none:
      break;
  }
  Trace result = trace;
  std::swap(result.steps[i], result.steps[i + 1]);
  return result;
}

Trace cancel_converse(const Trace& trace, std::size_t i) {
  check_index(trace, i);
  if (!(trace.steps[i + 1] == converse(trace.steps[i])))
    throw NotConverse(trace.steps[i], trace.steps[i + 1]);
  trace.replay();
  Trace result = trace;
  result.steps.erase(result.steps.begin() + i, result.steps.begin() + i + 2);
  return result;
}

StandardizeResult standardize(const Trace& trace) {
  StandardizeResult result;
  result.trace = trace;
  std::vector<StepLabel>& steps = result.trace.steps;
  std::vector<Structure> states = result.trace.replay();

  for (;;) {
    bool rewrote = false;
    for (std::size_t i = 0; i + 1 < steps.size(); ++i) {
      if (steps[i + 1] == converse(steps[i])) {
        steps.erase(steps.begin() + i, steps.begin() + i + 2);
        rewrote = true;
        break;
      }
      if (steps[i].direction() == Direction::forward &&
          steps[i + 1].direction() == Direction::backward &&
          try_swap_at(states[i], steps[i], steps[i + 1], states[i + 2]) == SwapFailure::none) {
        std::swap(steps[i], steps[i + 1]);
        rewrote = true;
        break;
      }
    }
    if (!rewrote) break;
    states = result.trace.replay();
  }

  for (std::size_t i = 0; i + 1 < steps.size(); ++i) {
    if (steps[i].direction() != Direction::forward ||
        steps[i + 1].direction() != Direction::backward)
      continue;
    switch (try_swap_at(states[i], steps[i], steps[i + 1], states[i + 2])) {
      case SwapFailure::not_independent:
        result.stuck.push_back({i, "not a converse pair and not independent"});
        break;
      case SwapFailure::not_enabled:
        result.stuck.push_back({i, "independent but not enabled in swapped order"});
        break;
      case SwapFailure::none:
        throw Error("standardize left an applicable swap behind");
    }
  }
  return result;
}

bool perm_equiv(const Trace& a, const Trace& b, std::size_t bound) {
  if (a.steps.size() > bound) throw TraceTooLong(a.steps.size(), bound);
  if (b.steps.size() > bound) throw TraceTooLong(b.steps.size(), bound);
  a.replay();
  b.replay();
  if (a.init != b.init || a.steps.size() != b.steps.size()) return false;

  // Swaps permute labels, so unequal label multisets can never meet.
  auto label_multiset = [](const Trace& t) {
    std::multiset<std::string> labels;
    for (const StepLabel& step : t.steps) labels.insert(step.text());
    return labels;
  };
  if (label_multiset(a) != label_multiset(b)) return false;

  auto key = [](const std::vector<StepLabel>& steps) {
    std::string k;
    for (const StepLabel& step : steps) {
      k += step.text();
      k += '\n';
    }
    return k;
  };

  const std::string target = key(b.steps);
  std::set<std::string> seen{key(a.steps)};
  std::deque<std::vector<StepLabel>> frontier{a.steps};
  if (seen.count(target)) return true;

  while (!frontier.empty()) {
    std::vector<StepLabel> current = std::move(frontier.front());
    frontier.pop_front();
    Trace node{a.init, current};
    std::vector<Structure> states = node.replay();
    for (std::size_t i = 0; i + 1 < current.size(); ++i) {
      if (try_swap_at(states[i], current[i], current[i + 1], states[i + 2]) != SwapFailure::none)
        continue;
      std::vector<StepLabel> swapped = current;
      std::swap(swapped[i], swapped[i + 1]);
      std::string k = key(swapped);
      if (k == target) return true;
      if (seen.insert(k).second) frontier.push_back(std::move(swapped));
    }
  }
  return false;
}

}  // namespace rs
