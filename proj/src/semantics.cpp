#include "rs/semantics.hpp"

#include <algorithm>
#include <random>

namespace rs {

const char* direction_text(Direction dir) {
  return dir == Direction::forward ? "fwd" : "bwd";
}

StepLabel::StepLabel(Gate gate_before, Direction dir)
    : gate_before_(std::move(gate_before)), dir_(dir) {
  if (dir_ == Direction::forward && gate_before_.marker() >= gate_before_.arity())
    throw InvalidLabel("no forward step from fully traversed gate " + gate_before_.text());
  if (dir_ == Direction::backward && gate_before_.marker() == 0)
    throw InvalidLabel("no backward step from untraversed gate " + gate_before_.text());
  text_ = std::string(direction_text(dir_)) + " " + gate_before_.text();
}

std::size_t StepLabel::touched_position() const {
  return dir_ == Direction::forward ? gate_before_.marker() : gate_before_.marker() - 1;
}

bool StepLabel::touches_input() const {
  return touched_position() < gate_before_.input_count();
}

const Name& StepLabel::touched_name() const {
  const std::size_t pos = touched_position();
  const std::size_t n = gate_before_.input_count();
  return pos < n ? gate_before_.inputs()[pos] : gate_before_.outputs()[pos - n];
}

namespace {

// Signal the step needs free in the current state, if any. Forward input
// steps consume one token; backward output steps reabsorb one.
std::optional<Name> required_signal(const StepLabel& label) {
  if (label.direction() == Direction::forward && label.touches_input()) return label.touched_name();
  if (label.direction() == Direction::backward && !label.touches_input())
    return label.touched_name();
  return std::nullopt;
}

}  // namespace

std::vector<StepLabel> enabled_steps(const Structure& s) {
  std::vector<StepLabel> result;
  for (const auto& [gate, count] : s.gates()) {
    (void)count;  // multiplicity >= 1 by canonical form
    if (gate.marker() < gate.arity()) {
      StepLabel label(gate, Direction::forward);
      auto need = required_signal(label);
      if (!need || s.signal_count(*need) >= 1) result.push_back(std::move(label));
    }
    if (gate.marker() > 0) {
      StepLabel label(gate, Direction::backward);
      auto need = required_signal(label);
      if (!need || s.signal_count(*need) >= 1) result.push_back(std::move(label));
    }
  }
  std::sort(result.begin(), result.end());
  return result;
}

Structure apply_step(const Structure& s, const StepLabel& label) {
  const Gate& gate = label.gate_before();
  if (s.gate_count(gate) == 0)
    throw NotEnabled("gate species " + gate.text() + " not present");
  auto need = required_signal(label);
  if (need && s.signal_count(*need) == 0)
    throw NotEnabled("signal <" + need->text() + "> not present for " + label.text());

  Structure result = s;
  const std::size_t next_marker =
      label.direction() == Direction::forward ? gate.marker() + 1 : gate.marker() - 1;
  result.remove_gate(gate);
  result.add_gate(gate.with_marker(next_marker));
  if (label.direction() == Direction::forward) {
    if (label.touches_input())
      result.remove_signal(label.touched_name());
    else
      result.add_signal(label.touched_name());
  } else {
    if (label.touches_input())
      result.add_signal(label.touched_name());
    else
      result.remove_signal(label.touched_name());
  }
  return result;
}

StepLabel converse(const StepLabel& label) {
  const Gate& gate = label.gate_before();
  if (label.direction() == Direction::forward)
    return StepLabel(gate.with_marker(gate.marker() + 1), Direction::backward);
  return StepLabel(gate.with_marker(gate.marker() - 1), Direction::forward);
}

std::vector<Structure> Trace::replay() const {
  std::vector<Structure> states;
  states.reserve(steps.size() + 1);
  states.push_back(init);
  for (std::size_t i = 0; i < steps.size(); ++i) {
    try {
      states.push_back(apply_step(states.back(), steps[i]));
    } catch (const NotEnabled& e) {
      throw NotEnabled("step " + std::to_string(i + 1) + " cannot fire: " + e.what(), i + 1);
    }
  }
  return states;
}

Structure Trace::final_state() const { return replay().back(); }

std::pair<Structure, Trace> backward_normal_form(const Structure& s) {
  Trace trace{s, {}};
  Structure current = s;
  for (;;) {
    std::optional<StepLabel> pick;
    for (const StepLabel& label : enabled_steps(current)) {
      if (label.direction() == Direction::backward) {
        pick = label;
        break;  // canonical order: least backward label first
      }
    }
    if (!pick) break;
    current = apply_step(current, *pick);
    trace.steps.push_back(std::move(*pick));
  }
  return {current, std::move(trace)};
}

RunResult run(const Structure& s, const Policy& policy, std::uint64_t fuel) {
  RunResult result;
  result.trace.init = s;
  result.stop = StopReason::fuel_exhausted;
  Structure current = s;
  std::mt19937_64 rng(policy.seed);

  for (std::uint64_t step = 0; step < fuel; ++step) {
    std::vector<StepLabel> enabled = enabled_steps(current);
    std::vector<StepLabel> candidates;
    for (StepLabel& label : enabled) {
      if (policy.kind == Policy::Kind::forward_only && label.direction() != Direction::forward)
        continue;
      if (policy.kind == Policy::Kind::backward_only && label.direction() != Direction::backward)
        continue;
      candidates.push_back(std::move(label));
    }
    if (candidates.empty()) {
      result.stop = StopReason::no_enabled_step;
      break;
    }

    std::size_t choice = 0;
    if (policy.kind == Policy::Kind::random) {
      choice = std::uniform_int_distribution<std::size_t>(0, candidates.size() - 1)(rng);
    } else if (policy.kind == Policy::Kind::interactive) {
      auto picked = policy.chooser(current, candidates);
      if (!picked || *picked >= candidates.size()) {
        result.stop = StopReason::stopped_by_chooser;
        break;
      }
      choice = *picked;
    }
    current = apply_step(current, candidates[choice]);
    result.trace.steps.push_back(std::move(candidates[choice]));
  }
  return result;
}

}  // namespace rs
