#include "rs/reach.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <map>
#include <string>

#include "rs/coherence.hpp"
#include "rs/syntax.hpp"

namespace rs {

const char* verdict_text(Verdict verdict) {
  switch (verdict) {
    case Verdict::reachable: return "reachable";
    case Verdict::unreachable: return "unreachable";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "?";
}

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_seconds(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Gate species with the marker erased; reachability never changes shapes.
std::map<std::string, std::uint64_t> shape_multiset(const Structure& s) {
  std::map<std::string, std::uint64_t> shapes;
  for (const auto& [gate, count] : s.gates()) shapes[gate.with_marker(0).text()] += count;
  return shapes;
}

// Per shape, the sorted markers the target wants. Coherent structures carry
// each species once, so same-shape markers are distinct.
std::map<std::string, std::vector<std::size_t>> target_marker_ranks(const Structure& target) {
  std::map<std::string, std::vector<std::size_t>> ranks;
  for (const auto& [gate, count] : target.gates()) {
    (void)count;
    ranks[gate.with_marker(0).text()].push_back(gate.marker());
  }
  for (auto& [shape, markers] : ranks) std::sort(markers.begin(), markers.end());
  return ranks;
}

}  // namespace

ReachAnswer reachable_coherent(const Structure& source, const Structure& target,
                               bool want_witness) {
  if (!is_coherent(source).coherent)
    throw MalformedQuery("reachable_coherent: source is not coherent");
  if (!is_coherent(target).coherent)
    throw MalformedQuery("reachable_coherent: target is not coherent");
  if (shape_multiset(source) != shape_multiset(target))
    throw MalformedQuery("reachable_coherent: source and target differ in gate shapes");

  const auto start = Clock::now();
  ReachAnswer answer;

  // Conservation makes mismatched resource counts unreachable outright.
  if (resource_count(source) != resource_count(target)) {
    answer.verdict = Verdict::unreachable;
    answer.stats.seconds = elapsed_seconds(start);
    return answer;
  }

  auto [current, back_trace] = backward_normal_form(source);
  answer.stats.explored = back_trace.steps.size();

  const auto wanted = target_marker_ranks(target);
  std::vector<StepLabel> forward_steps;
  std::map<std::string, std::string> shape_memo;
  auto shape_of = [&](const Gate& gate) -> const std::string& {
    auto [it, inserted] = shape_memo.try_emplace(gate.text());
    if (inserted) it->second = gate.with_marker(0).text();
    return it->second;
  };

  for (;;) {
    // Rank-pair current markers with target markers, per shape.
    std::map<std::string, std::vector<Gate>> by_shape;
    for (const auto& [gate, count] : current.gates()) {
      (void)count;
      by_shape[shape_of(gate)].push_back(gate);
    }

    bool advanced = false;
    for (const auto& [shape, gates] : by_shape) {
      auto want_it = wanted.find(shape);
      if (want_it == wanted.end()) continue;
      const std::vector<std::size_t>& goal = want_it->second;
      for (std::size_t rank = 0; rank < gates.size() && rank < goal.size(); ++rank) {
        const Gate& gate = gates[rank];  // by_shape lists are in text order = marker order
        if (gate.marker() >= goal[rank]) continue;
        if (gate.marker() < gate.input_count() &&
            current.signal_count(gate.inputs()[gate.marker()]) == 0)
          continue;  // forward input step not enabled yet
        if (current.gate_count(gate.with_marker(gate.marker() + 1)) > 0)
          continue;  // would collide with a same-shape sibling; advance it first
        StepLabel label(gate, Direction::forward);
        current = apply_step(current, label);
        forward_steps.push_back(std::move(label));
        ++answer.stats.explored;
        advanced = true;
        break;
      }
      if (advanced) break;
    }
    if (!advanced) break;
  }

  answer.verdict = current == target ? Verdict::reachable : Verdict::unreachable;
  if (answer.verdict == Verdict::reachable && want_witness) {
    Trace witness{source, back_trace.steps};
    witness.steps.insert(witness.steps.end(), forward_steps.begin(), forward_steps.end());
    if (witness.final_state() != target)
      throw Error("reachable_coherent produced a witness that does not replay to the target");
    answer.witness = std::move(witness);
  }
  answer.stats.seconds = elapsed_seconds(start);
  return answer;
}

ReachAnswer reachable_bfs(const Structure& source, const Structure& target,
                          std::uint64_t max_states, bool want_witness) {
  if (max_states < 1) throw Error("reachable_bfs: max_states must be at least 1");

  const auto start = Clock::now();
  ReachAnswer answer;

  std::vector<Structure> states{source};
  std::vector<std::size_t> parent{0};
  std::vector<std::optional<StepLabel>> via{std::nullopt};
  std::map<std::string, std::size_t> index{{print_structure(source), 0}};
  const std::string target_key = print_structure(target);

  auto finish = [&](Verdict verdict, std::optional<std::size_t> found) {
    answer.verdict = verdict;
    answer.stats.explored = states.size();
    if (verdict == Verdict::reachable && want_witness) {
      std::vector<StepLabel> path;
      for (std::size_t at = *found; via[at]; at = parent[at]) path.push_back(*via[at]);
      std::reverse(path.begin(), path.end());
      answer.witness = Trace{source, std::move(path)};
    }
    answer.stats.seconds = elapsed_seconds(start);
    return answer;
  };

  if (index.count(target_key)) return finish(Verdict::reachable, 0);

  std::deque<std::size_t> frontier{0};
  bool truncated = false;
  while (!frontier.empty()) {
    std::size_t at = frontier.front();
    frontier.pop_front();
    for (const StepLabel& label : enabled_steps(states[at])) {
      Structure next = apply_step(states[at], label);
      std::string key = print_structure(next);
      if (index.count(key)) continue;
      const bool is_target = key == target_key;
      if (!is_target && states.size() >= max_states) {
        truncated = true;
        continue;
      }
      std::size_t id = states.size();
      index.emplace(std::move(key), id);
      states.push_back(std::move(next));
      parent.push_back(at);
      via.emplace_back(label);
      if (is_target) return finish(Verdict::reachable, id);
      frontier.push_back(id);
    }
  }
  return finish(truncated ? Verdict::inconclusive : Verdict::unreachable, std::nullopt);
}

Structure chain_source(std::size_t gates) {
  Structure s;
  auto name = [&](std::size_t i) {
    std::string digits = std::to_string(i);
    return Name("x" + std::string(digits.size() < 5 ? 5 - digits.size() : 0, '0') + digits);
  };
  for (std::size_t i = 0; i < gates; ++i) s.add_gate(Gate({name(i)}, {name(i + 1)}, 0));
  s.add_signal(name(0));
  return s;
}

Structure chain_target(std::size_t gates) {
  Structure s;
  auto name = [&](std::size_t i) {
    std::string digits = std::to_string(i);
    return Name("x" + std::string(digits.size() < 5 ? 5 - digits.size() : 0, '0') + digits);
  };
  for (std::size_t i = 0; i < gates; ++i) s.add_gate(Gate({name(i)}, {name(i + 1)}, 2));
  s.add_signal(name(gates));
  return s;
}

std::vector<BenchRow> chain_bench(const std::vector<std::size_t>& sizes) {
  std::vector<BenchRow> rows;
  for (std::size_t n : sizes) {
    Structure source = chain_source(n);
    Structure target = chain_target(n);
    BenchRow row;
    row.gates = n;
    row.size = structure_size(source);

    auto time_once = [&]() {
      auto begin = Clock::now();
      ReachAnswer answer = reachable_coherent(source, target, /*want_witness=*/false);
      double t = elapsed_seconds(begin);
      if (answer.verdict != Verdict::reachable)
        throw Error("chain_bench: chain target unexpectedly unreachable");
      row.steps = answer.stats.explored;
      return t;
    };

    double best = time_once();
    // Repeat small instances until the measurement rises above timer noise.
    int reps = static_cast<int>(std::clamp(0.2 / std::max(best, 1e-6), 1.0, 64.0));
    for (int r = 1; r < reps; ++r) best = std::min(best, time_once());
    row.seconds = std::max(best, 1e-9);
    rows.push_back(row);
  }
  return rows;
}

double log_log_slope(const std::vector<BenchRow>& rows) {
  if (rows.size() < 2) throw Error("log_log_slope needs at least two rows");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double k = static_cast<double>(rows.size());
  for (const BenchRow& row : rows) {
    double x = std::log(static_cast<double>(row.size));
    double y = std::log(row.seconds);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

}  // namespace rs
