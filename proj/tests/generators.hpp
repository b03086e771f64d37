#pragma once

// Deterministic random-instance generators shared by the property-style
// tests and the acceptance suite.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "rs/accs.hpp"
#include "rs/core.hpp"
#include "rs/semantics.hpp"

namespace testgen {

using Rng = std::mt19937_64;

inline std::size_t pick(Rng& rng, std::size_t bound) {
  return std::uniform_int_distribution<std::size_t>(0, bound - 1)(rng);
}

inline rs::Name letter_name(std::size_t index) {
  return rs::Name(std::string(1, static_cast<char>('a' + index)));
}

inline rs::Gate random_gate(Rng& rng, std::size_t alphabet = 5, std::size_t max_seq = 3) {
  for (;;) {
    std::vector<rs::Name> inputs, outputs;
    std::size_t n = pick(rng, max_seq + 1);
    std::size_t m = pick(rng, max_seq + 1);
    if (n + m == 0) continue;
    for (std::size_t i = 0; i < n; ++i) inputs.push_back(letter_name(pick(rng, alphabet)));
    for (std::size_t j = 0; j < m; ++j) outputs.push_back(letter_name(pick(rng, alphabet)));
    std::size_t marker = pick(rng, n + m + 1);
    return rs::Gate(std::move(inputs), std::move(outputs), marker);
  }
}

// Arbitrary structure (not necessarily coherent) of size at most max_size.
inline rs::Structure random_structure(Rng& rng, std::uint64_t max_size = 20,
                                      std::size_t alphabet = 5) {
  rs::Structure s;
  while (rs::structure_size(s) < max_size) {
    std::uint64_t budget = max_size - rs::structure_size(s);
    if (pick(rng, 3) == 0 || budget < 2) {
      std::uint64_t count = 1 + pick(rng, std::min<std::uint64_t>(3, budget));
      s.add_signal(letter_name(pick(rng, alphabet)), count);
    } else {
      rs::Gate gate = random_gate(rng, alphabet);
      if (rs::structure_size(s) + gate.arity() + 1 > max_size) break;
      s.add_gate(gate);
    }
    if (pick(rng, 4) == 0) break;  // allow small structures too
  }
  return s;
}

// Coherent structure with all markers at zero: globally distinct consumer
// names, globally distinct source names (pending outputs and free signals).
inline rs::Structure random_coherent_base(Rng& rng, std::size_t alphabet = 8) {
  std::vector<std::size_t> consumers(alphabet), sources(alphabet);
  for (std::size_t i = 0; i < alphabet; ++i) consumers[i] = sources[i] = i;
  std::shuffle(consumers.begin(), consumers.end(), rng);
  std::shuffle(sources.begin(), sources.end(), rng);
  std::size_t next_consumer = 0, next_source = 0;

  rs::Structure s;
  std::size_t gates = pick(rng, 4);
  for (std::size_t g = 0; g < gates; ++g) {
    std::vector<rs::Name> inputs, outputs;
    std::size_t n = pick(rng, 3);
    std::size_t m = pick(rng, 3);
    if (n + m == 0) m = 1;
    for (std::size_t i = 0; i < n && next_consumer < alphabet; ++i)
      inputs.push_back(letter_name(consumers[next_consumer++]));
    for (std::size_t j = 0; j < m && next_source < alphabet; ++j)
      outputs.push_back(letter_name(sources[next_source++]));
    if (inputs.empty() && outputs.empty()) continue;
    s.add_gate(rs::Gate(std::move(inputs), std::move(outputs), 0));
  }
  std::size_t signals = pick(rng, 3);
  for (std::size_t i = 0; i < signals && next_source < alphabet; ++i)
    s.add_signal(letter_name(sources[next_source++]));
  return s;
}

// Random replayable walk (both directions) of at most max_steps.
inline rs::Trace random_walk(Rng& rng, const rs::Structure& init, std::size_t max_steps) {
  rs::Trace trace{init, {}};
  rs::Structure current = init;
  for (std::size_t i = 0; i < max_steps; ++i) {
    std::vector<rs::StepLabel> enabled = rs::enabled_steps(current);
    if (enabled.empty()) break;
    rs::StepLabel label = enabled[pick(rng, enabled.size())];
    current = rs::apply_step(current, label);
    trace.steps.push_back(std::move(label));
  }
  return trace;
}

// Random linear asynchronous process over at most `alphabet` names. Input
// subjects are distinct, output names are distinct, and the two sets may
// overlap (a name used once as input and once as output).
inline rs::Process random_linear_process(Rng& rng, std::size_t alphabet = 6) {
  std::vector<std::size_t> in_names(alphabet), out_names(alphabet);
  for (std::size_t i = 0; i < alphabet; ++i) in_names[i] = out_names[i] = i;
  std::shuffle(in_names.begin(), in_names.end(), rng);
  std::shuffle(out_names.begin(), out_names.end(), rng);
  std::size_t inputs = pick(rng, std::min<std::size_t>(4, alphabet + 1));
  std::size_t outputs = pick(rng, std::min<std::size_t>(4, alphabet + 1));

  // Each input name owns a node; every node and output is attached either to
  // the top level or below some input that is not its own descendant.
  std::vector<std::optional<std::size_t>> parent(inputs);
  for (std::size_t i = 0; i < inputs; ++i) {
    // attach to an earlier node or the top level; keeps the forest acyclic
    std::size_t choice = pick(rng, i + 1);
    parent[i] = choice == i ? std::nullopt : std::optional<std::size_t>(choice);
  }
  std::vector<std::vector<rs::Process>> below(inputs + 1);
  for (std::size_t o = 0; o < outputs; ++o) {
    std::size_t slot = pick(rng, inputs + 1);
    below[slot].push_back(rs::Process::output(letter_name(out_names[o])));
  }

  // Build bottom-up: children with higher index attach only to lower ones.
  std::vector<std::vector<rs::Process>> kids(inputs + 1);
  for (std::size_t i = inputs; i-- > 0;) {
    std::vector<rs::Process> parts = below[i + 1];
    for (rs::Process& kid : kids[i + 1]) parts.push_back(std::move(kid));
    rs::Process node =
        rs::Process::input(letter_name(in_names[i]), rs::Process::par(std::move(parts)));
    std::size_t slot = parent[i] ? *parent[i] + 1 : 0;
    kids[slot].push_back(std::move(node));
  }
  std::vector<rs::Process> top = below[0];
  for (rs::Process& kid : kids[0]) top.push_back(std::move(kid));
  return rs::Process::par(std::move(top));
}

}  // namespace testgen
