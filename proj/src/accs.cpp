#include "rs/accs.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <functional>
#include <utility>

#include "rs/coherence.hpp"
#include "rs/syntax.hpp"

namespace rs {

// ---------------------------------------------------------------------------
// Process terms
// ---------------------------------------------------------------------------

Process Process::nil() { return Process(); }

Process Process::output(Name name) {
  Process p;
  p.kind_ = Kind::output;
  p.text_ = name.text() + "!";
  p.name_ = std::move(name);
  return p;
}

Process Process::input(Name name, Process continuation) {
  Process p;
  p.kind_ = Kind::input;
  p.text_ = name.text() + "?." +
            (continuation.kind() == Kind::par ? "(" + continuation.text() + ")"
                                              : continuation.text());
  p.name_ = std::move(name);
  p.children_.push_back(std::move(continuation));
  return p;
}

Process Process::par(std::vector<Process> parts) {
  std::vector<Process> flat;
  for (Process& part : parts) {
    if (part.kind_ == Kind::par) {
      for (Process& inner : part.children_) flat.push_back(std::move(inner));
    } else if (part.kind_ != Kind::nil) {
      flat.push_back(std::move(part));
    }
  }
  if (flat.empty()) return nil();
  if (flat.size() == 1) return std::move(flat.front());
  std::sort(flat.begin(), flat.end());
  Process p;
  p.kind_ = Kind::par;
  p.text_.clear();
  for (std::size_t i = 0; i < flat.size(); ++i) {
    if (i > 0) p.text_ += " | ";
    p.text_ += flat[i].text();
  }
  p.children_ = std::move(flat);
  return p;
}

const Name& Process::name() const {
  if (!name_) throw Error("process term has no subject name");
  return *name_;
}

const Process& Process::continuation() const {
  if (kind_ != Kind::input) throw Error("only input terms have a continuation");
  return children_.front();
}

const std::vector<Process>& Process::parts() const {
  if (kind_ != Kind::par) throw Error("only par terms have parts");
  return children_;
}

std::vector<Process> Process::components() const {
  switch (kind_) {
    case Kind::nil: return {};
    case Kind::par: return children_;
    default: return {*this};
  }
}

std::string print_process(const Process& p) { return p.text(); }

// ---------------------------------------------------------------------------
// Process parser
// ---------------------------------------------------------------------------

namespace {

class ProcLexer {
 public:
  explicit ProcLexer(const std::string& text) : text_(text) { advance(); }

  char peek() const { return kind_; }
  const std::string& word() const { return word_; }
  std::size_t line() const { return token_line_; }
  std::size_t column() const { return token_column_; }

  void next() { advance(); }

  [[noreturn]] void fail(const std::vector<std::string>& expected) const {
    std::string got = kind_ == 0 ? "end of input" : "\"" + word_ + "\"";
    throw SourceError(token_line_, token_column_, "unexpected " + got, expected);
  }

  void expect(char kind, const std::string& what) {
    if (kind_ != kind) fail({what});
    advance();
  }

 private:
  void advance() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') bump();
      } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        bump();
      } else {
        break;
      }
    }
    token_line_ = line_;
    token_column_ = column_;
    word_.clear();
    if (pos_ >= text_.size()) {
      kind_ = 0;
      return;
    }
    char c = text_[pos_];
    if (c >= 'a' && c <= 'z') {
      kind_ = 'n';
      while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                                     text_[pos_] == '_'))
        take();
      return;
    }
    if (c == '0' || c == '!' || c == '?' || c == '.' || c == '|' || c == '(' || c == ')') {
      kind_ = c;
      take();
      return;
    }
    throw SourceError(line_, column_, std::string("stray character '") + c + "'");
  }

  void take() {
    word_ += text_[pos_];
    bump();
  }

  void bump() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
  char kind_ = 0;
  std::string word_;
  std::size_t token_line_ = 1;
  std::size_t token_column_ = 1;
};

Process parse_proc(ProcLexer& lex);

// term := '0' | name '!' | name '?' '.' term | '(' proc ')'
Process parse_proc_term(ProcLexer& lex) {
  if (lex.peek() == '0') {
    lex.next();
    return Process::nil();
  }
  if (lex.peek() == '(') {
    lex.next();
    Process inner = parse_proc(lex);
    lex.expect(')', "')'");
    return inner;
  }
  if (lex.peek() != 'n') lex.fail({"name", "'0'", "'('"});
  Name subject(lex.word());
  lex.next();
  if (lex.peek() == '!') {
    lex.next();
    return Process::output(std::move(subject));
  }
  if (lex.peek() == '?') {
    lex.next();
    lex.expect('.', "'.'");
    Process continuation = parse_proc_term(lex);
    return Process::input(std::move(subject), std::move(continuation));
  }
  lex.fail({"'!'", "'?'"});
}

Process parse_proc(ProcLexer& lex) {
  std::vector<Process> parts{parse_proc_term(lex)};
  while (lex.peek() == '|') {
    lex.next();
    parts.push_back(parse_proc_term(lex));
  }
  return Process::par(std::move(parts));
}

}  // namespace

Process parse_process(const std::string& text) {
  ProcLexer lex(text);
  Process p = parse_proc(lex);
  if (lex.peek() != 0) lex.fail({"'|'", "end of input"});
  return p;
}

// ---------------------------------------------------------------------------
// RCCS-mini configurations
// ---------------------------------------------------------------------------

std::string RccsLabel::text() const {
  return std::string(direction_text(dir)) + " " + action.text();
}

RccsConfig RccsConfig::initial(const Process& p) {
  RccsConfig config;
  for (const Process& part : p.components()) {
    if (part.kind() == Process::Kind::output)
      ++config.particles[{part.name(), std::nullopt}];
    else
      config.threads.push_back({{}, part});
  }
  return config;
}

std::map<Name, std::uint64_t> RccsConfig::observable() const {
  std::map<Name, std::uint64_t> obs;
  for (const auto& [species, count] : particles) obs[species.first] += count;
  return obs;
}

namespace {

bool is_pristine_child_of(const RccsThread& thread, EventKey key) {
  if (thread.memory.size() != 1) return false;
  const MemoryMarker* marker = std::get_if<MemoryMarker>(&thread.memory.front());
  return marker != nullptr && marker->key == key;
}

// Causal signature machinery: event keys are opaque, so canonical equality
// replaces each key by the full description of the event it names.
class KeySignatures {
 public:
  explicit KeySignatures(const RccsConfig& config) : config_(config) {
    for (std::size_t ti = 0; ti < config.threads.size(); ++ti)
      for (std::size_t ei = 0; ei < config.threads[ti].memory.size(); ++ei)
        if (const MemoryEvent* e = std::get_if<MemoryEvent>(&config.threads[ti].memory[ei]))
          where_[e->key] = {ti, ei};
  }

  std::string origin(const Origin& o) { return o ? key(*o) : "_"; }

  std::string key(EventKey k) {
    auto memo = memo_.find(k);
    if (memo != memo_.end()) return memo->second;
    auto loc = where_.find(k);
    std::string sig;
    if (loc == where_.end()) {
      sig = "dangling";  // unreachable for configs built via initial/rccs_step
    } else {
      const auto& [ti, ei] = loc->second;
      const MemoryEvent& e = std::get<MemoryEvent>(config_.threads[ti].memory[ei]);
      sig = "e(" + e.action.text() + ";" + origin(e.consumed_origin) + ";p[";
      for (std::size_t i = 0; i < e.minted_particles.size(); ++i)
        sig += (i ? "," : "") + e.minted_particles[i].text();
      sig += "];c[";
      for (std::size_t i = 0; i < e.minted_children.size(); ++i)
        sig += (i ? "," : "") + e.minted_children[i].text();
      sig += "];b[";
      for (std::size_t i = 0; i < ei; ++i)
        sig += (i ? "," : "") + entry(config_.threads[ti].memory[i]);
      sig += "])";
    }
    memo_[k] = sig;
    return sig;
  }

  std::string entry(const MemoryEntry& item) {
    if (const MemoryMarker* marker = std::get_if<MemoryMarker>(&item))
      return "m(" + key(marker->key) + ")";
    return key(std::get<MemoryEvent>(item).key);
  }

 private:
  const RccsConfig& config_;
  std::map<EventKey, std::pair<std::size_t, std::size_t>> where_;
  std::map<EventKey, std::string> memo_;
};

}  // namespace

std::string RccsConfig::canonical_text() const {
  KeySignatures sigs(*this);
  std::vector<std::string> particle_items;
  for (const auto& [species, count] : particles)
    particle_items.push_back(std::to_string(count) + "*" + species.first.text() + "@" +
                             sigs.origin(species.second));
  std::vector<std::string> thread_items;
  for (const RccsThread& thread : threads) {
    std::string item = "{";
    for (std::size_t i = 0; i < thread.memory.size(); ++i)
      item += (i ? " " : "") + sigs.entry(thread.memory[i]);
    item += " : " + thread.process.text() + "}";
    thread_items.push_back(std::move(item));
  }
  std::sort(particle_items.begin(), particle_items.end());
  std::sort(thread_items.begin(), thread_items.end());
  std::string out = "particles{";
  for (std::size_t i = 0; i < particle_items.size(); ++i) out += (i ? ", " : "") + particle_items[i];
  out += "} threads{";
  for (std::size_t i = 0; i < thread_items.size(); ++i) out += (i ? ", " : "") + thread_items[i];
  out += "}";
  return out;
}

std::vector<std::pair<RccsLabel, RccsConfig>> rccs_step(const RccsConfig& config) {
  std::vector<std::pair<RccsLabel, RccsConfig>> result;
  std::set<std::pair<std::string, std::string>> seen;
  auto emit = [&](RccsLabel label, RccsConfig successor) {
    if (seen.insert({label.text(), successor.canonical_text()}).second)
      result.emplace_back(std::move(label), std::move(successor));
  };

  for (std::size_t ti = 0; ti < config.threads.size(); ++ti) {
    const RccsThread& thread = config.threads[ti];

    if (thread.process.kind() == Process::Kind::input) {
      const Name& subject = thread.process.name();
      for (const auto& [species, count] : config.particles) {
        (void)count;
        if (species.first != subject) continue;
        RccsConfig next = config;
        auto it = next.particles.find(species);
        if (--it->second == 0) next.particles.erase(it);

        MemoryEvent event{next.next_key++, subject, species.second, {}, {}};
        for (const Process& part : thread.process.continuation().components()) {
          if (part.kind() == Process::Kind::output) {
            event.minted_particles.push_back(part.name());
            ++next.particles[{part.name(), event.key}];
          } else {
            event.minted_children.push_back(part);
            next.threads.push_back({{MemoryMarker{event.key}}, part});
          }
        }
        std::sort(event.minted_particles.begin(), event.minted_particles.end());
        std::sort(event.minted_children.begin(), event.minted_children.end());
        next.threads[ti].memory.push_back(std::move(event));
        next.threads[ti].process = Process::nil();
        emit({Direction::forward, subject}, std::move(next));
      }
    }

    if (!thread.memory.empty() && std::holds_alternative<MemoryEvent>(thread.memory.back()) &&
        thread.process.is_nil()) {
      const MemoryEvent& e = std::get<MemoryEvent>(thread.memory.back());

      std::map<Name, std::uint64_t> need_particles;
      for (const Name& minted : e.minted_particles) ++need_particles[minted];
      bool undoable = true;
      for (const auto& [name, count] : need_particles) {
        auto it = config.particles.find({name, e.key});
        if (it == config.particles.end() || it->second != count) {
          undoable = false;  // some minted particle was consumed downstream
          break;
        }
      }

      std::map<std::string, std::uint64_t> need_children;
      for (const Process& child : e.minted_children) ++need_children[child.text()];
      if (undoable) {
        std::map<std::string, std::uint64_t> pristine;
        for (const RccsThread& other : config.threads)
          if (is_pristine_child_of(other, e.key)) ++pristine[other.process.text()];
        undoable = pristine == need_children;
      }

      if (undoable) {
        RccsConfig next = config;
        for (const auto& [name, count] : need_particles) {
          auto it = next.particles.find({name, e.key});
          it->second -= count;
          if (it->second == 0) next.particles.erase(it);
        }

        std::vector<Process> restored;
        for (const Name& minted : e.minted_particles) restored.push_back(Process::output(minted));
        for (const Process& child : e.minted_children) restored.push_back(child);

        std::map<std::string, std::uint64_t> to_drop = need_children;
        std::vector<RccsThread> kept;
        for (std::size_t i = 0; i < next.threads.size(); ++i) {
          if (i != ti && is_pristine_child_of(next.threads[i], e.key)) {
            auto drop = to_drop.find(next.threads[i].process.text());
            if (drop != to_drop.end() && drop->second > 0) {
              --drop->second;
              continue;
            }
          }
          kept.push_back(std::move(next.threads[i]));
        }
        next.threads = std::move(kept);

        // The undone thread kept its position up to earlier removals; find it
        // by its memory top still being event e.
        for (RccsThread& t : next.threads) {
          if (!t.memory.empty() && std::holds_alternative<MemoryEvent>(t.memory.back()) &&
              std::get<MemoryEvent>(t.memory.back()).key == e.key) {
            t.memory.pop_back();
            t.process = Process::input(e.action, Process::par(std::move(restored)));
            break;
          }
        }
        ++next.particles[{e.action, e.consumed_origin}];
        emit({Direction::backward, e.action}, std::move(next));
      }
    }
  }
  return result;
}

// ---------------------------------------------------------------------------
// Encoding
// ---------------------------------------------------------------------------

namespace {

void role_counts(const Process& p, std::map<Name, std::uint64_t>& inputs,
                 std::map<Name, std::uint64_t>& outputs) {
  switch (p.kind()) {
    case Process::Kind::nil:
      break;
    case Process::Kind::output:
      ++outputs[p.name()];
      break;
    case Process::Kind::input:
      ++inputs[p.name()];
      role_counts(p.continuation(), inputs, outputs);
      break;
    case Process::Kind::par:
      for (const Process& part : p.parts()) role_counts(part, inputs, outputs);
      break;
  }
}

}  // namespace

Encoding encode(const Process& p) {
  std::map<Name, std::uint64_t> input_uses, output_uses;
  role_counts(p, input_uses, output_uses);
  for (const auto& [name, count] : input_uses)
    if (count > 1) throw NotLinear(name);
  for (const auto& [name, count] : output_uses)
    if (count > 1) throw NotLinear(name);

  Encoding enc;
  for (const auto& [name, count] : input_uses) enc.source_names.insert(name);
  for (const auto& [name, count] : output_uses) enc.source_names.insert(name);

  std::uint64_t trigger_index = 0;
  auto next_trigger = [&]() {
    for (;;) {
      Name candidate("t" + std::to_string(trigger_index++));
      if (!enc.source_names.count(candidate)) return candidate;
    }
  };

  // One gate per input prefix: [^guard.subject > triggers...outputs...].
  // Triggers are assigned depth-first, descending into each nested input
  // before moving to the next sibling.
  std::function<void(const std::optional<Name>&, const Name&, const Process&)> emit_gate =
      [&](const std::optional<Name>& guard, const Name& subject, const Process& continuation) {
        std::vector<Name> trigger_outs;
        std::vector<Name> plain_outs;
        for (const Process& part : continuation.components()) {
          if (part.kind() == Process::Kind::output) {
            plain_outs.push_back(part.name());
          } else {
            Name trigger = next_trigger();
            enc.triggers.push_back(trigger);
            enc.trigger_guards.emplace(trigger, part.name());
            trigger_outs.push_back(trigger);
            emit_gate(trigger, part.name(), part.continuation());
          }
        }
        std::vector<Name> gate_inputs;
        if (guard) gate_inputs.push_back(*guard);
        gate_inputs.push_back(subject);
        std::vector<Name> gate_outputs = std::move(trigger_outs);
        gate_outputs.insert(gate_outputs.end(), plain_outs.begin(), plain_outs.end());
        enc.structure.add_gate(Gate(std::move(gate_inputs), std::move(gate_outputs), 0));
      };

  for (const Process& part : p.components()) {
    if (part.kind() == Process::Kind::output)
      enc.structure.add_signal(part.name());
    else
      emit_gate(std::nullopt, part.name(), part.continuation());
  }

  if (!is_coherent(enc.structure).coherent)
    throw Error("encoding of a linear process came out incoherent");
  return enc;
}

// ---------------------------------------------------------------------------
// Correspondence harness
// ---------------------------------------------------------------------------

const char* check_outcome_text(CheckOutcome outcome) {
  switch (outcome) {
    case CheckOutcome::pass: return "pass";
    case CheckOutcome::fail: return "fail";
    case CheckOutcome::inconclusive: return "inconclusive";
  }
  return "?";
}

namespace {

// Initial state reachable from every node, over the given edge lists.
bool initial_reachable_from_all(const std::vector<std::vector<std::pair<Direction, std::size_t>>>& edges) {
  std::vector<std::vector<std::size_t>> reverse(edges.size());
  for (std::size_t from = 0; from < edges.size(); ++from)
    for (const auto& [dir, to] : edges[from]) reverse[to].push_back(from);
  std::vector<bool> seen(edges.size(), false);
  std::deque<std::size_t> frontier{0};
  seen[0] = true;
  std::size_t count = 1;
  while (!frontier.empty()) {
    std::size_t at = frontier.front();
    frontier.pop_front();
    for (std::size_t prev : reverse[at]) {
      if (!seen[prev]) {
        seen[prev] = true;
        ++count;
        frontier.push_back(prev);
      }
    }
  }
  return count == edges.size();
}

}  // namespace

CorrespondenceReport correspondence_check(const Process& p, std::uint64_t max_states) {
  if (max_states < 1) throw Error("correspondence_check: max_states must be at least 1");
  Encoding enc = encode(p);
  CorrespondenceReport report;

  // Interpreter side.
  std::vector<RccsConfig> configs{RccsConfig::initial(p)};
  std::map<std::string, std::size_t> config_index{{configs[0].canonical_text(), 0}};
  std::vector<std::vector<std::pair<Direction, std::size_t>>> config_edges;
  bool config_truncated = false;
  {
    std::deque<std::size_t> frontier{0};
    config_edges.emplace_back();
    while (!frontier.empty()) {
      std::size_t at = frontier.front();
      frontier.pop_front();
      for (auto& [label, successor] : rccs_step(configs[at])) {
        std::string key = successor.canonical_text();
        auto found = config_index.find(key);
        std::size_t id;
        if (found != config_index.end()) {
          id = found->second;
        } else if (configs.size() >= max_states) {
          config_truncated = true;
          continue;
        } else {
          id = configs.size();
          config_index.emplace(std::move(key), id);
          configs.push_back(std::move(successor));
          config_edges.emplace_back();
          frontier.push_back(id);
        }
        config_edges[at].push_back({label.dir, id});
      }
    }
  }
  report.rccs_states = configs.size();

  // Structure side.
  std::vector<Structure> states{enc.structure};
  std::map<std::string, std::size_t> state_index{{print_structure(states[0]), 0}};
  std::vector<std::vector<std::pair<StepLabel, std::size_t>>> state_edges;
  bool state_truncated = false;
  bool hygiene = true;
  {
    std::deque<std::size_t> frontier{0};
    state_edges.emplace_back();
    while (!frontier.empty()) {
      std::size_t at = frontier.front();
      frontier.pop_front();
      ResourceCount counts = resource_count(states[at]);
      for (const Name& trigger : enc.triggers)
        if (resource_count_of(counts, trigger) > 1) hygiene = false;
      for (const StepLabel& label : enabled_steps(states[at])) {
        Structure successor = apply_step(states[at], label);
        std::string key = print_structure(successor);
        auto found = state_index.find(key);
        std::size_t id;
        if (found != state_index.end()) {
          id = found->second;
        } else if (states.size() >= max_states) {
          state_truncated = true;
          continue;
        } else {
          id = states.size();
          state_index.emplace(std::move(key), id);
          states.push_back(std::move(successor));
          state_edges.emplace_back();
          frontier.push_back(id);
        }
        state_edges[at].push_back({label, id});
      }
    }
  }
  report.structure_states = states.size();

  if (config_truncated || state_truncated) {
    report.outcome = CheckOutcome::inconclusive;
    report.notes.push_back("state bound " + std::to_string(max_states) +
                           " hit; graphs not fully explored");
    return report;
  }

  // Same observable name multisets on both sides, triggers erased. An
  // interpreter communication is atomic while a gate traverses its positions
  // one step at a time, so only structure states with every gate at rest
  // (marker 0 or fully traversed) have an interpreter counterpart; states
  // with a communication in flight are administrative.
  std::set<std::map<Name, std::uint64_t>> config_obs, state_obs;
  for (const RccsConfig& config : configs) config_obs.insert(config.observable());
  for (const Structure& state : states) {
    bool at_rest = true;
    for (const auto& [gate, count] : state.gates()) {
      (void)count;
      if (gate.marker() != 0 && gate.marker() != gate.arity()) at_rest = false;
    }
    if (!at_rest) continue;
    std::map<Name, std::uint64_t> obs;
    for (const auto& [name, count] : state.signals())
      if (enc.source_names.count(name)) obs[name] = count;
    state_obs.insert(std::move(obs));
  }
  report.observations_equal = config_obs == state_obs;
  if (!report.observations_equal)
    report.notes.push_back("observable sets differ: " + std::to_string(config_obs.size()) +
                           " interpreter vs " + std::to_string(state_obs.size()) +
                           " structure multisets");

  report.rccs_causally_consistent = initial_reachable_from_all(config_edges);
  if (!report.rccs_causally_consistent)
    report.notes.push_back("some interpreter state cannot backtrack to the initial one");
  {
    std::vector<std::vector<std::pair<Direction, std::size_t>>> plain(state_edges.size());
    for (std::size_t from = 0; from < state_edges.size(); ++from)
      for (const auto& [label, to] : state_edges[from])
        plain[from].push_back({label.direction(), to});
    report.structure_causally_consistent = initial_reachable_from_all(plain);
  }
  if (!report.structure_causally_consistent)
    report.notes.push_back("some structure state cannot backtrack to the initial one");

  report.rccs_loop_lemma = true;
  for (std::size_t from = 0; from < config_edges.size() && report.rccs_loop_lemma; ++from) {
    for (const auto& [dir, to] : config_edges[from]) {
      bool inverted = false;
      for (const auto& [back_dir, back_to] : config_edges[to])
        if (back_dir != dir && back_to == from) inverted = true;
      if (!inverted) {
        report.rccs_loop_lemma = false;
        report.notes.push_back("interpreter edge without an inverse edge");
        break;
      }
    }
  }

  report.structure_loop_lemma = true;
  for (std::size_t from = 0; from < state_edges.size() && report.structure_loop_lemma; ++from) {
    for (const auto& [label, to] : state_edges[from]) {
      bool ok = false;
      try {
        ok = apply_step(states[to], converse(label)) == states[from];
      } catch (const NotEnabled&) {
        ok = false;
      }
      if (!ok) {
        report.structure_loop_lemma = false;
        report.notes.push_back("structure step " + label.text() + " cannot be undone");
        break;
      }
    }
  }

  report.trigger_hygiene = hygiene;
  if (!hygiene) report.notes.push_back("a trigger name reached multiplicity above one");

  const bool all_good = report.observations_equal && report.rccs_causally_consistent &&
                        report.structure_causally_consistent && report.rccs_loop_lemma &&
                        report.structure_loop_lemma && report.trigger_hygiene;
  report.outcome = all_good ? CheckOutcome::pass : CheckOutcome::fail;
  return report;
}

}  // namespace rs
