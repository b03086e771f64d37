#include "rs/coherence.hpp"

#include <deque>
#include <set>

#include "rs/semantics.hpp"

namespace rs {

const char* violation_kind_text(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::duplicate_signal: return "duplicate-signal";
    case ViolationKind::duplicate_gate: return "duplicate-gate";
    case ViolationKind::multi_source: return "multi-source";
    case ViolationKind::multi_consumer: return "multi-consumer";
  }
  return "?";
}

CoherenceReport is_coherent(const Structure& s) {
  CoherenceReport report;
  auto flag = [&](std::string subject, ViolationKind kind, std::uint64_t count) {
    report.coherent = false;
    report.violations.push_back({std::move(subject), kind, count});
  };

  for (const auto& [name, count] : s.signals())
    if (count > 1) flag(name.text(), ViolationKind::duplicate_signal, count);
  for (const auto& [gate, count] : s.gates())
    if (count > 1) flag(gate.text(), ViolationKind::duplicate_gate, count);

  for (const auto& [name, count] : resource_count(s))
    if (count > 1) flag(name.text(), ViolationKind::multi_source, count);

  ResourceCount consumers;
  for (const auto& [gate, count] : s.gates())
    for (const Name& input : gate.inputs()) consumers[input] += count;
  for (const auto& [name, count] : consumers)
    if (count > 1) flag(name.text(), ViolationKind::multi_consumer, count);

  return report;
}

bool check_preservation(const Structure& s, std::size_t depth) {
  if (!is_coherent(s).coherent) throw Error("check_preservation requires a coherent structure");
  std::set<Structure> seen{s};
  std::deque<std::pair<Structure, std::size_t>> frontier{{s, 0}};
  while (!frontier.empty()) {
    auto [state, dist] = std::move(frontier.front());
    frontier.pop_front();
    if (dist == depth) continue;
    for (const StepLabel& label : enabled_steps(state)) {
      Structure next = apply_step(state, label);
      if (!seen.insert(next).second) continue;
      if (!is_coherent(next).coherent) return false;
      frontier.push_back({std::move(next), dist + 1});
    }
  }
  return true;
}

}  // namespace rs
