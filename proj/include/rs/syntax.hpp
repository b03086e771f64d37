#pragma once

#include <string>
#include <vector>

#include "rs/core.hpp"
#include "rs/semantics.hpp"

namespace rs {

// Parse failure with a 1-based position into the input and the token kinds
// that would have been accepted there.
struct SourceError : Error {
  SourceError(std::size_t line, std::size_t column, const std::string& message,
              std::vector<std::string> expected = {});

  std::size_t line;
  std::size_t column;
  std::string message;
  std::vector<std::string> expected;
};

struct DuplicateMarker : Error {
  DuplicateMarker() : Error("gate has more than one '^' marker") {}
};

// Structure text, e.g. "2*<a> | [a.^b > c]". Whitespace-insensitive; '#'
// starts a comment to end of line. The result is canonical.
Structure parse_structure(const std::string& text);

// Canonical one-line form; parse_structure(print_structure(s)) == s,
// bit-exact. The empty structure prints as "".
std::string print_structure(const Structure& s);

// Trace file: first content line "init: <structure>", then one step per line,
// "fwd <gate>" or "bwd <gate>" giving the gate species before the step.
// Validates that every step is enabled in sequence (NotEnabled with the
// 1-based step index otherwise).
Trace parse_trace(const std::string& text);

std::string print_trace(const Trace& trace);

}  // namespace rs
