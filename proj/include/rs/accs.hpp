#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "rs/core.hpp"
#include "rs/semantics.hpp"

namespace rs {

struct NotLinear : Error {
  explicit NotLinear(const Name& offender)
      : Error("process is not linear: name \"" + offender.text() +
              "\" is used more than once in the same role"),
        name(offender) {}
  Name name;
};

// An asynchronous process term in canonical form: parallel compositions are
// flattened and sorted, nil components absorbed. Outputs carry no
// continuation.
class Process {
 public:
  enum class Kind { nil, output, input, par };

  static Process nil();
  static Process output(Name name);
  static Process input(Name name, Process continuation);
  static Process par(std::vector<Process> parts);

  Kind kind() const { return kind_; }
  bool is_nil() const { return kind_ == Kind::nil; }
  const Name& name() const;                  // output and input terms
  const Process& continuation() const;       // input terms
  const std::vector<Process>& parts() const; // par terms (always >= 2)

  // Top-level components: the par parts, or the term itself, or nothing
  // for nil.
  std::vector<Process> components() const;

  const std::string& text() const { return text_; }

  bool operator==(const Process& other) const { return text_ == other.text_; }
  std::strong_ordering operator<=>(const Process& other) const { return text_ <=> other.text_; }

 private:
  Process() = default;

  Kind kind_ = Kind::nil;
  std::optional<Name> name_;
  std::vector<Process> children_;  // input: one continuation; par: the parts
  std::string text_ = "0";
};

// Grammar: proc := term ('|' term)* ; term := '0' | name '!' | name '?' '.'
// term | '(' proc ')'. Whitespace-insensitive, '#' comments.
Process parse_process(const std::string& text);

std::string print_process(const Process& p);

// ---------------------------------------------------------------------------
// Reference interpreter for the asynchronous fragment with memory stacks.
// Processes are monitored by memories that record, per consumption event,
// everything needed to backtrack causally consistently.
// ---------------------------------------------------------------------------

using EventKey = std::uint64_t;
using Origin = std::optional<EventKey>;  // nullopt: minted by the initial term

struct MemoryMarker {
  EventKey key;  // the event that spawned this thread
};

struct MemoryEvent {
  EventKey key;
  Name action;                           // input name consumed by the event
  Origin consumed_origin;                // where the consumed particle came from
  std::vector<Name> minted_particles;    // sorted
  std::vector<Process> minted_children;  // sorted
};

using MemoryEntry = std::variant<MemoryMarker, MemoryEvent>;

struct RccsThread {
  std::vector<MemoryEntry> memory;  // bottom to top; only the top is undoable
  Process process;
};

struct RccsConfig {
  // particle species (name, origin) -> multiplicity
  std::map<std::pair<Name, Origin>, std::uint64_t> particles;
  std::vector<RccsThread> threads;
  EventKey next_key = 0;

  static RccsConfig initial(const Process& p);

  // Key-renumbering-invariant form: event keys are replaced by their full
  // causal signatures, so two configurations print equally exactly when they
  // differ only in key choice.
  std::string canonical_text() const;

  // Free particle names, origins erased.
  std::map<Name, std::uint64_t> observable() const;
};

struct RccsLabel {
  Direction dir;
  Name action;
  std::string text() const;
};

// All forward communications and causally consistent backward steps.
// Forward: a thread waiting on `a` meets a particle (a, o); the continuation
// decomposes into fresh particles and child threads, all recorded in a new
// memory event. Backward: a top memory event whose minted particles are
// unconsumed and whose minted children are pristine is undone.
std::vector<std::pair<RccsLabel, RccsConfig>> rccs_step(const RccsConfig& config);

// ---------------------------------------------------------------------------
// Compilation into coherent structures.
// ---------------------------------------------------------------------------

struct Encoding {
  Structure structure;
  std::vector<Name> triggers;  // in allocation order t0, t1, ...
  std::set<Name> source_names;
  std::map<Name, Name> trigger_guards;  // trigger -> the input name it guards
};

// Compile a linear process (each name at most once as input subject and at
// most once as output) into a coherent structure. Every input prefix becomes
// a gate; nested inputs are guarded by fresh trigger names allocated in
// leftmost-innermost order. Throws NotLinear.
Encoding encode(const Process& p);

// ---------------------------------------------------------------------------
// Correspondence harness.
// ---------------------------------------------------------------------------

enum class CheckOutcome { pass, fail, inconclusive };

const char* check_outcome_text(CheckOutcome outcome);

struct CorrespondenceReport {
  CheckOutcome outcome = CheckOutcome::fail;
  bool observations_equal = false;
  bool rccs_causally_consistent = false;
  bool structure_causally_consistent = false;
  bool rccs_loop_lemma = false;
  bool structure_loop_lemma = false;
  bool trigger_hygiene = false;
  std::uint64_t rccs_states = 0;
  std::uint64_t structure_states = 0;
  std::vector<std::string> notes;
};

// Explores the reachable interpreter configurations and the reachable
// structures of the encoding, then checks that both sides expose the same set
// of observable name multisets, that the initial state is reachable from
// every reachable state on both sides, and that every edge can be undone.
// Structure observables are taken at rest states only (every gate marker at 0
// or fully traversed); a gate mid-traversal is a communication in flight,
// which the interpreter performs atomically. Exceeding max_states on either
// side yields an inconclusive outcome.
CorrespondenceReport correspondence_check(const Process& p, std::uint64_t max_states);

}  // namespace rs
