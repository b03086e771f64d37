#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rs/core.hpp"

namespace rs {

enum class ViolationKind { duplicate_signal, duplicate_gate, multi_source, multi_consumer };

const char* violation_kind_text(ViolationKind kind);

struct Violation {
  std::string subject;  // printed name or gate species
  ViolationKind kind;
  std::uint64_t count;
};

struct CoherenceReport {
  bool coherent = true;
  std::vector<Violation> violations;  // exhaustive, in a deterministic order
};

// A structure is coherent when every species has multiplicity one, every
// name has at most one source (M(a) <= 1), and every name is consumed by at
// most one gate input occurrence. Coherent structures reduce conflict-free
// and keep these properties under every step.
CoherenceReport is_coherent(const Structure& s);

// Exhaustively explores every state within `depth` steps (both directions)
// of a coherent structure and reports whether all of them are coherent.
// Throws Error when s itself is not coherent.
bool check_preservation(const Structure& s, std::size_t depth);

}  // namespace rs
