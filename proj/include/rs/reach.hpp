#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rs/core.hpp"
#include "rs/semantics.hpp"

namespace rs {

struct MalformedQuery : Error {
  using Error::Error;
};

enum class Verdict { reachable, unreachable, inconclusive };

const char* verdict_text(Verdict verdict);

struct ReachStats {
  std::uint64_t explored = 0;  // steps applied (coherent procedure) or distinct states (oracle)
  double seconds = 0.0;
};

struct ReachAnswer {
  Verdict verdict = Verdict::unreachable;
  std::optional<Trace> witness;  // present iff reachable and requested; replays source -> target
  ReachStats stats;
};

// Decision procedure for coherent structures: fully reverse the source, then
// greedily replay forward, never advancing a gate past its marker in the
// target. Worst case quadratic in structure size. Requires both structures
// coherent and over the same gate shapes (same input/output sequences, any
// markers); throws MalformedQuery otherwise. Never returns inconclusive.
ReachAnswer reachable_coherent(const Structure& source, const Structure& target,
                               bool want_witness = true);

// Explicit-state oracle for arbitrary structures: breadth-first search over
// the reduction graph in both directions, deduplicating on canonical printed
// form, until the target is found or max_states distinct states have been
// seen. Unreachable is only reported when the frontier is exhausted below the
// bound; hitting the bound yields inconclusive.
ReachAnswer reachable_bfs(const Structure& source, const Structure& target,
                          std::uint64_t max_states, bool want_witness = true);

// Cascade family used for scaling measurements: gates [^x_i > x_{i+1}] for
// i in [0, gates) plus the seed signal <x_0>. The target has every gate fully
// traversed and the last signal free.
Structure chain_source(std::size_t gates);
Structure chain_target(std::size_t gates);

struct BenchRow {
  std::size_t gates = 0;
  std::uint64_t size = 0;   // structure_size of the source
  std::uint64_t steps = 0;  // steps applied by reachable_coherent
  double seconds = 0.0;     // best-of-reps wall time for one decision
};

// Times reachable_coherent on the chain family at the given gate counts.
std::vector<BenchRow> chain_bench(const std::vector<std::size_t>& sizes);

// Least-squares slope of log(seconds) against log(size).
double log_log_slope(const std::vector<BenchRow>& rows);

}  // namespace rs
