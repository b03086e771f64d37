#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rs/core.hpp"

namespace rs {

struct NotEnabled : Error {
  explicit NotEnabled(const std::string& what, std::size_t step_index = 0)
      : Error(what), step_index(step_index) {}
  // 1-based index of the offending step when raised during trace replay,
  // 0 otherwise.
  std::size_t step_index = 0;
};

struct InvalidLabel : Error {
  using Error::Error;
};

enum class Direction { forward, backward };

const char* direction_text(Direction dir);

// A species-level reduction event: the gate species as it stands before the
// step, plus the direction the marker moves.
class StepLabel {
 public:
  StepLabel(Gate gate_before, Direction dir);

  const Gate& gate_before() const { return gate_before_; }
  Direction direction() const { return dir_; }

  // Position the step traverses (forward) or retreats over (backward).
  std::size_t touched_position() const;
  bool touches_input() const;
  const Name& touched_name() const;

  // "fwd [^a.b > c]" form; doubles as the canonical label order, so all
  // backward labels sort before all forward ones.
  const std::string& text() const { return text_; }

  bool operator==(const StepLabel& other) const { return text_ == other.text_; }
  std::strong_ordering operator<=>(const StepLabel& other) const { return text_ <=> other.text_; }

 private:
  Gate gate_before_;
  Direction dir_;
  std::string text_;
};

// All step labels enabled in s, in canonical label order, without duplicates.
std::vector<StepLabel> enabled_steps(const Structure& s);

// Apply one reduction step. Throws NotEnabled when the gate species is absent
// or a required signal is missing.
Structure apply_step(const Structure& s, const StepLabel& label);

// The label that undoes the given one; an involution.
StepLabel converse(const StepLabel& label);

// An initial structure plus a replayable step sequence.
struct Trace {
  Structure init;
  std::vector<StepLabel> steps;

  // States S0..Sk visited by the steps. Throws NotEnabled (with 1-based
  // step_index) if some step cannot fire.
  std::vector<Structure> replay() const;
  Structure final_state() const;
};

// Exhaustively applies backward steps, least label first. Returns the normal
// form and the backward trace taken. Always terminates: the marker sum
// strictly decreases.
std::pair<Structure, Trace> backward_normal_form(const Structure& s);

// Step-selection policy for run(). The random policy is fully reproducible
// from its seed; the interactive policy delegates to a callback and stops
// when it returns nullopt.
struct Policy {
  enum class Kind { first, random, forward_only, backward_only, interactive };

  using Chooser =
      std::function<std::optional<std::size_t>(const Structure&, const std::vector<StepLabel>&)>;

  Kind kind = Kind::first;
  std::uint64_t seed = 0;
  Chooser chooser;

  static Policy first() { return {Kind::first, 0, nullptr}; }
  static Policy random(std::uint64_t seed) { return {Kind::random, seed, nullptr}; }
  static Policy forward_only() { return {Kind::forward_only, 0, nullptr}; }
  static Policy backward_only() { return {Kind::backward_only, 0, nullptr}; }
  static Policy interactive(Chooser chooser) { return {Kind::interactive, 0, std::move(chooser)}; }
};

enum class StopReason { fuel_exhausted, no_enabled_step, stopped_by_chooser };

struct RunResult {
  Trace trace;
  StopReason stop = StopReason::no_enabled_step;
};

// Applies up to fuel steps chosen by the policy, stopping early when no
// enabled step matches it.
RunResult run(const Structure& s, const Policy& policy, std::uint64_t fuel);

}  // namespace rs
