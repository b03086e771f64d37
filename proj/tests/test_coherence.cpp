#include "doctest.h"

#include "generators.hpp"
#include "rs/coherence.hpp"
#include "rs/syntax.hpp"

using namespace rs;

TEST_CASE("coherence verdicts on the worked examples") {
  CHECK(is_coherent(parse_structure("<a> | <b> | [^a.b > c]")).coherent);
  CHECK(is_coherent(Structure{}).coherent);

  CoherenceReport doubled = is_coherent(parse_structure("2*<a> | [^a > b]"));
  CHECK_FALSE(doubled.coherent);
  REQUIRE(doubled.violations.size() == 2);
  CHECK(doubled.violations[0].subject == "a");
  CHECK(doubled.violations[0].kind == ViolationKind::duplicate_signal);
  CHECK(doubled.violations[0].count == 2);
  CHECK(doubled.violations[1].subject == "a");
  CHECK(doubled.violations[1].kind == ViolationKind::multi_source);
  CHECK(doubled.violations[1].count == 2);

  CoherenceReport contended = is_coherent(parse_structure("<a> | [^a > b] | [^a > c]"));
  CHECK_FALSE(contended.coherent);
  REQUIRE(contended.violations.size() == 1);
  CHECK(contended.violations[0].subject == "a");
  CHECK(contended.violations[0].kind == ViolationKind::multi_consumer);
  CHECK(contended.violations[0].count == 2);

  CoherenceReport dup_gate = is_coherent(parse_structure("2*[a > b^]"));
  CHECK_FALSE(dup_gate.coherent);
  CHECK(dup_gate.violations[0].kind == ViolationKind::duplicate_gate);
}

TEST_CASE("preservation holds around the worked examples") {
  CHECK(check_preservation(parse_structure("<a> | <b> | [^a.b > c]"), 6));
  CHECK(check_preservation(parse_structure("[^a > b]"), 3));
  CHECK(check_preservation(parse_structure("<a>"), 0));
  CHECK_THROWS_AS(check_preservation(parse_structure("2*<a>"), 1), Error);
}

TEST_CASE("reduction preserves coherence from coherent starting points") {
  testgen::Rng rng(5001);
  for (int i = 0; i < 200; ++i) {
    Structure base = testgen::random_coherent_base(rng);
    REQUIRE(is_coherent(base).coherent);
    Trace walk = testgen::random_walk(rng, base, 10);
    for (const Structure& state : walk.replay()) CHECK(is_coherent(state).coherent);
  }
}

TEST_CASE("coherent structures have at most one forward consumer per name") {
  testgen::Rng rng(5002);
  for (int i = 0; i < 200; ++i) {
    Structure base = testgen::random_coherent_base(rng);
    Trace walk = testgen::random_walk(rng, base, 6);
    for (const Structure& state : walk.replay()) {
      std::map<Name, int> consuming;
      for (const StepLabel& label : enabled_steps(state))
        if (label.direction() == Direction::forward && label.touches_input())
          ++consuming[label.touched_name()];
      for (const auto& [name, count] : consuming) CHECK(count == 1);
    }
  }
}
