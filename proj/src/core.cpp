#include "rs/core.hpp"

#include <algorithm>

namespace rs {

bool Name::is_valid(const std::string& text) {
  if (text.empty()) return false;
  if (text.front() < 'a' || text.front() > 'z') return false;
  return std::all_of(text.begin(), text.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
  });
}

Name::Name(std::string text) : text_(std::move(text)) {
  if (!is_valid(text_)) throw BadName(text_);
}

namespace {

std::string gate_text(const std::vector<Name>& inputs, const std::vector<Name>& outputs,
                      std::size_t marker) {
  std::string out = "[";
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    if (i > 0) out += '.';
    if (marker == i) out += '^';
    out += inputs[i].text();
  }
  out += " > ";
  for (std::size_t j = 0; j < outputs.size(); ++j) {
    if (j > 0) out += '.';
    if (marker == inputs.size() + j) out += '^';
    out += outputs[j].text();
  }
  if (marker == inputs.size() + outputs.size()) out += '^';
  out += ']';
  return out;
}

}  // namespace

Gate::Gate(std::vector<Name> inputs, std::vector<Name> outputs, std::size_t marker)
    : inputs_(std::move(inputs)), outputs_(std::move(outputs)), marker_(marker) {
  if (inputs_.empty() && outputs_.empty()) throw EmptyGate();
  if (marker_ > arity()) throw BadMarker(marker_, arity());
  text_ = gate_text(inputs_, outputs_, marker_);
}

Gate Gate::with_marker(std::size_t marker) const { return Gate(inputs_, outputs_, marker); }

std::uint64_t Structure::signal_count(const Name& name) const {
  auto it = signals_.find(name);
  return it == signals_.end() ? 0 : it->second;
}

std::uint64_t Structure::gate_count(const Gate& gate) const {
  auto it = gates_.find(gate);
  return it == gates_.end() ? 0 : it->second;
}

void Structure::add_signal(const Name& name, std::uint64_t count) {
  if (count == 0) return;
  signals_[name] += count;
}

void Structure::add_gate(const Gate& gate, std::uint64_t count) {
  if (count == 0) return;
  gates_[gate] += count;
}

void Structure::remove_signal(const Name& name, std::uint64_t count) {
  if (count == 0) return;
  auto it = signals_.find(name);
  if (it == signals_.end() || it->second < count)
    throw Error("cannot remove " + std::to_string(count) + " of signal <" + name.text() + ">");
  it->second -= count;
  if (it->second == 0) signals_.erase(it);
}

void Structure::remove_gate(const Gate& gate, std::uint64_t count) {
  if (count == 0) return;
  auto it = gates_.find(gate);
  if (it == gates_.end() || it->second < count)
    throw Error("cannot remove " + std::to_string(count) + " of gate " + gate.text());
  it->second -= count;
  if (it->second == 0) gates_.erase(it);
}

Structure Structure::merged_with(const Structure& other) const {
  Structure result = *this;
  for (const auto& [name, count] : other.signals_) result.add_signal(name, count);
  for (const auto& [gate, count] : other.gates_) result.add_gate(gate, count);
  return result;
}

Structure canonicalize(const std::vector<std::pair<Term, std::uint64_t>>& raw) {
  Structure result;
  for (const auto& [term, count] : raw) {
    if (count < 1) throw BadMultiplicity();
    if (const Name* name = std::get_if<Name>(&term)) {
      result.add_signal(*name, count);
    } else {
      result.add_gate(std::get<Gate>(term), count);
    }
  }
  return result;
}

ResourceCount resource_count(const Structure& s) {
  ResourceCount counts;
  for (const auto& [name, count] : s.signals()) counts[name] += count;
  for (const auto& [gate, count] : s.gates()) {
    const std::size_t n = gate.input_count();
    for (std::size_t i = 0; i < n && i < gate.marker(); ++i)
      counts[gate.inputs()[i]] += count;  // held
    for (std::size_t j = 0; j < gate.output_count(); ++j)
      if (n + j >= gate.marker()) counts[gate.outputs()[j]] += count;  // unemitted
  }
  return counts;
}

std::uint64_t resource_count_of(const ResourceCount& counts, const Name& name) {
  auto it = counts.find(name);
  return it == counts.end() ? 0 : it->second;
}

std::uint64_t structure_size(const Structure& s) {
  std::uint64_t size = 0;
  for (const auto& [name, count] : s.signals()) size += count;
  for (const auto& [gate, count] : s.gates()) size += count * (gate.arity() + 1);
  return size;
}

}  // namespace rs
