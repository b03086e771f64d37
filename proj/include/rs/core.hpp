#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace rs {

// Base class for all domain errors raised by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BadName : Error {
  explicit BadName(const std::string& text) : Error("invalid name: \"" + text + "\"") {}
};

struct EmptyGate : Error {
  EmptyGate() : Error("gate needs at least one input or output") {}
};

struct BadMarker : Error {
  explicit BadMarker(std::size_t marker, std::size_t arity)
      : Error("marker " + std::to_string(marker) + " out of range 0.." + std::to_string(arity)) {}
};

struct BadMultiplicity : Error {
  BadMultiplicity() : Error("species multiplicity must be at least 1") {}
};

// A signal species name. Identity is the text itself; two occurrences of the
// same name are indistinguishable.
class Name {
 public:
  explicit Name(std::string text);

  const std::string& text() const { return text_; }

  auto operator<=>(const Name&) const = default;
  bool operator==(const Name&) const = default;

  static bool is_valid(const std::string& text);

 private:
  std::string text_;
};

// A gate species: an input sequence, an output sequence, and a traversal
// marker in [0, inputs+outputs]. Positions before the marker have been
// traversed (inputs consumed, outputs emitted); the rest are pending.
//
// The canonical text form is computed once at construction and doubles as the
// total order used for canonical storage, e.g. "[a.^b > c]".
class Gate {
 public:
  Gate(std::vector<Name> inputs, std::vector<Name> outputs, std::size_t marker);

  const std::vector<Name>& inputs() const { return inputs_; }
  const std::vector<Name>& outputs() const { return outputs_; }
  std::size_t marker() const { return marker_; }
  std::size_t input_count() const { return inputs_.size(); }
  std::size_t output_count() const { return outputs_.size(); }
  std::size_t arity() const { return inputs_.size() + outputs_.size(); }

  // Same inputs/outputs, different traversal point.
  Gate with_marker(std::size_t marker) const;

  const std::string& text() const { return text_; }

  bool operator==(const Gate& other) const { return text_ == other.text_; }
  std::strong_ordering operator<=>(const Gate& other) const { return text_ <=> other.text_; }

 private:
  std::vector<Name> inputs_;
  std::vector<Name> outputs_;
  std::size_t marker_ = 0;
  std::string text_;
};

using Term = std::variant<Name, Gate>;

// A multiset of signal and gate species in canonical form: multiplicities are
// strictly positive and species are kept in text order, so structural
// equality is plain equality.
class Structure {
 public:
  Structure() = default;

  const std::map<Name, std::uint64_t>& signals() const { return signals_; }
  const std::map<Gate, std::uint64_t>& gates() const { return gates_; }

  bool empty() const { return signals_.empty() && gates_.empty(); }

  std::uint64_t signal_count(const Name& name) const;
  std::uint64_t gate_count(const Gate& gate) const;

  void add_signal(const Name& name, std::uint64_t count = 1);
  void add_gate(const Gate& gate, std::uint64_t count = 1);
  // Throw Error when the species is not present with sufficient multiplicity.
  void remove_signal(const Name& name, std::uint64_t count = 1);
  void remove_gate(const Gate& gate, std::uint64_t count = 1);

  // Multiset union.
  Structure merged_with(const Structure& other) const;

  bool operator==(const Structure&) const = default;
  std::strong_ordering operator<=>(const Structure&) const = default;

 private:
  std::map<Name, std::uint64_t> signals_;
  std::map<Gate, std::uint64_t> gates_;
};

// Merge a raw species list into canonical form. Duplicate species sum their
// multiplicities. Throws BadMultiplicity on a count below 1. (Empty gates are
// already rejected by the Gate constructor.)
Structure canonicalize(const std::vector<std::pair<Term, std::uint64_t>>& raw);

// Per-name conserved quantity M(a) = free(a) + held(a) + unemitted(a):
// free signals, inputs already consumed by some gate, and outputs not yet
// emitted. Invariant under every forward and backward step. Names with
// M(a) = 0 are absent from the map.
using ResourceCount = std::map<Name, std::uint64_t>;

ResourceCount resource_count(const Structure& s);

// Zero-defaulting accessor.
std::uint64_t resource_count_of(const ResourceCount& counts, const Name& name);

// Size measure: total signal multiplicity plus, per gate species,
// multiplicity * (inputs + outputs + 1).
std::uint64_t structure_size(const Structure& s);

}  // namespace rs
