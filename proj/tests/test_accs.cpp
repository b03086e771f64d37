#include "doctest.h"

#include <deque>
#include <set>

#include "generators.hpp"
#include "rs/accs.hpp"
#include "rs/coherence.hpp"
#include "rs/syntax.hpp"

using namespace rs;

TEST_CASE("process grammar and canonical form") {
  Process p = parse_process("a! | a?.b!");
  CHECK(p.kind() == Process::Kind::par);
  REQUIRE(p.parts().size() == 2);
  CHECK(p.parts()[0].text() == "a!");
  CHECK(p.parts()[1].text() == "a?.b!");
  CHECK(p.text() == "a! | a?.b!");

  Process nested = parse_process("a?.(b! | c?.d!)");
  CHECK(nested.kind() == Process::Kind::input);
  CHECK(nested.name() == Name("a"));
  CHECK(nested.continuation().text() == "b! | c?.d!");
  CHECK(nested.text() == "a?.(b! | c?.d!)");

  CHECK(parse_process("0 | a! | 0").text() == "a!");
  CHECK(parse_process("(a! | b!) | c!").text() == "a! | b! | c!");
  CHECK(parse_process("a?.b?.c!").text() == "a?.b?.c!");

  CHECK_THROWS_AS(parse_process("a?."), SourceError);
  CHECK_THROWS_AS(parse_process("a"), SourceError);
  CHECK_THROWS_AS(parse_process("a! |"), SourceError);
}

TEST_CASE("process text round trips") {
  testgen::Rng rng(7001);
  for (int i = 0; i < 200; ++i) {
    Process p = testgen::random_linear_process(rng);
    CHECK(parse_process(p.text()) == p);
  }
}

TEST_CASE("the interpreter communicates and backtracks") {
  RccsConfig initial = RccsConfig::initial(parse_process("a! | a?.b!"));
  CHECK(initial.particles.size() == 1);
  CHECK(initial.threads.size() == 1);

  auto steps = rccs_step(initial);
  REQUIRE(steps.size() == 1);
  CHECK(steps[0].first.dir == Direction::forward);
  CHECK(steps[0].first.action == Name("a"));
  const RccsConfig& after = steps[0].second;
  CHECK(after.observable() == std::map<Name, std::uint64_t>{{Name("b"), 1}});
  REQUIRE(after.threads.size() == 1);
  CHECK(after.threads[0].memory.size() == 1);
  CHECK(after.threads[0].process.is_nil());

  auto undo = rccs_step(after);
  REQUIRE(undo.size() == 1);
  CHECK(undo[0].first.dir == Direction::backward);
  CHECK(undo[0].second.canonical_text() == initial.canonical_text());

  CHECK(rccs_step(RccsConfig::initial(parse_process("a?.b!"))).empty());
}

TEST_CASE("backtracking waits for minted material to be returned") {
  // after both communications, the first event is frozen until the second
  // is undone: its minted child is no longer pristine
  RccsConfig config = RccsConfig::initial(parse_process("a! | b! | a?.b?.c!"));
  auto first = rccs_step(config);
  REQUIRE(first.size() == 1);
  auto second_steps = rccs_step(first[0].second);
  // one forward consumption of b, one undo of the a event
  REQUIRE(second_steps.size() == 2);
  std::size_t forward_index = second_steps[0].first.dir == Direction::forward ? 0 : 1;
  const RccsConfig& deep = second_steps[forward_index].second;
  auto third = rccs_step(deep);
  REQUIRE(third.size() == 1);  // only the b event can be undone
  CHECK(third[0].first.dir == Direction::backward);
  CHECK(third[0].first.action == Name("b"));
}

TEST_CASE("encoding the worked examples") {
  CHECK(print_structure(encode(parse_process("a?.b!")).structure) == "[^a > b]");
  CHECK(print_structure(encode(parse_process("a! | a?.0")).structure) == "<a> | [^a > ]");

  Encoding nested = encode(parse_process("a?.(b! | c?.d!)"));
  CHECK(print_structure(nested.structure) == "[^a > t0.b] | [^t0.c > d]");
  REQUIRE(nested.triggers.size() == 1);
  CHECK(nested.triggers[0] == Name("t0"));
  CHECK(nested.trigger_guards.at(Name("t0")) == Name("c"));
  CHECK(nested.source_names == std::set<Name>{Name("a"), Name("b"), Name("c"), Name("d")});

  CHECK_THROWS_AS(encode(parse_process("a?.b! | a?.c!")), NotLinear);
  CHECK_THROWS_AS(encode(parse_process("b! | b! | a?.0")), NotLinear);
}

TEST_CASE("trigger names dodge source names") {
  Encoding enc = encode(parse_process("a?.(t0! | b?.0)"));
  REQUIRE(enc.triggers.size() == 1);
  CHECK(enc.triggers[0] == Name("t1"));
  CHECK(print_structure(enc.structure) == "[^a > t1.t0] | [^t1.b > ]");
}

TEST_CASE("triggers number off depth-first") {
  Encoding enc = encode(parse_process("a?.(c?.g?.0 | d?.0)"));
  REQUIRE(enc.triggers.size() == 3);
  CHECK(enc.trigger_guards.at(Name("t0")) == Name("c"));
  CHECK(enc.trigger_guards.at(Name("t1")) == Name("g"));
  CHECK(enc.trigger_guards.at(Name("t2")) == Name("d"));
}

TEST_CASE("encodings of linear processes are coherent") {
  testgen::Rng rng(7002);
  for (int i = 0; i < 300; ++i) {
    Encoding enc = encode(testgen::random_linear_process(rng));
    CHECK(is_coherent(enc.structure).coherent);
    for (const Name& trigger : enc.triggers) CHECK(enc.source_names.count(trigger) == 0);
  }
}

TEST_CASE("interpreter loop lemma on random linear processes") {
  testgen::Rng rng(7003);
  for (int i = 0; i < 60; ++i) {
    RccsConfig initial = RccsConfig::initial(testgen::random_linear_process(rng, 5));
    // small bounded exploration, checking every edge has an inverse
    std::deque<RccsConfig> frontier{initial};
    std::set<std::string> seen{initial.canonical_text()};
    std::size_t budget = 200;
    while (!frontier.empty() && budget > 0) {
      RccsConfig config = std::move(frontier.front());
      frontier.pop_front();
      for (auto& [label, successor] : rccs_step(config)) {
        bool undone = false;
        for (auto& [back, restored] : rccs_step(successor))
          if (back.dir != label.dir && restored.canonical_text() == config.canonical_text())
            undone = true;
        CHECK(undone);
        if (seen.insert(successor.canonical_text()).second && budget > 0) {
          --budget;
          frontier.push_back(std::move(successor));
        }
      }
    }
  }
}

TEST_CASE("correspondence passes on the worked examples") {
  CorrespondenceReport simple = correspondence_check(parse_process("a! | a?.b!"), 10000);
  CHECK(simple.outcome == CheckOutcome::pass);
  CHECK(simple.observations_equal);
  CHECK(simple.rccs_loop_lemma);
  CHECK(simple.structure_loop_lemma);

  // independently recompute the observable sets on both sides
  {
    Process p = parse_process("a! | a?.b!");
    std::set<std::map<Name, std::uint64_t>> interpreter_obs, structure_obs;
    std::deque<RccsConfig> cfrontier{RccsConfig::initial(p)};
    std::set<std::string> cseen{cfrontier.front().canonical_text()};
    while (!cfrontier.empty()) {
      RccsConfig config = std::move(cfrontier.front());
      cfrontier.pop_front();
      interpreter_obs.insert(config.observable());
      for (auto& [label, successor] : rccs_step(config))
        if (cseen.insert(successor.canonical_text()).second)
          cfrontier.push_back(std::move(successor));
    }
    Encoding enc = encode(p);
    std::deque<Structure> sfrontier{enc.structure};
    std::set<std::string> sseen{print_structure(enc.structure)};
    while (!sfrontier.empty()) {
      Structure state = std::move(sfrontier.front());
      sfrontier.pop_front();
      bool at_rest = true;
      for (const auto& [gate, count] : state.gates()) {
        (void)count;
        if (gate.marker() != 0 && gate.marker() != gate.arity()) at_rest = false;
      }
      if (at_rest) {
        std::map<Name, std::uint64_t> obs;
        for (const auto& [name, count] : state.signals())
          if (enc.source_names.count(name)) obs[name] = count;
        structure_obs.insert(obs);
      }
      for (const StepLabel& label : enabled_steps(state)) {
        Structure next = apply_step(state, label);
        if (sseen.insert(print_structure(next)).second) sfrontier.push_back(std::move(next));
      }
    }
    std::set<std::map<Name, std::uint64_t>> expected{{{Name("a"), 1}}, {{Name("b"), 1}}};
    CHECK(interpreter_obs == expected);
    CHECK(structure_obs == expected);
  }

  CorrespondenceReport wider =
      correspondence_check(parse_process("a! | a?.(b! | c?.d!) | c!"), 10000);
  CHECK(wider.outcome == CheckOutcome::pass);

  CHECK_THROWS_AS(correspondence_check(parse_process("a?.b! | a?.c!"), 1000), NotLinear);

  CorrespondenceReport capped = correspondence_check(parse_process("a! | a?.b!"), 1);
  CHECK(capped.outcome == CheckOutcome::inconclusive);
}

TEST_CASE("correspondence passes on random linear processes") {
  testgen::Rng rng(7004);
  for (int i = 0; i < 40; ++i) {
    Process p = testgen::random_linear_process(rng, 5);
    CorrespondenceReport report = correspondence_check(p, 20000);
    CHECK(report.outcome == CheckOutcome::pass);
  }
}
