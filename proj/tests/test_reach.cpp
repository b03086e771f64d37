#include "doctest.h"

#include <set>

#include "generators.hpp"
#include "rs/coherence.hpp"
#include "rs/reach.hpp"
#include "rs/syntax.hpp"

using namespace rs;

TEST_CASE("coherent reachability on the join gate") {
  Structure start = parse_structure("<a> | <b> | [^a.b > c]");
  Structure done = parse_structure("<c> | [a.b > c^]");

  ReachAnswer forward = reachable_coherent(start, done);
  CHECK(forward.verdict == Verdict::reachable);
  REQUIRE(forward.witness.has_value());
  CHECK(forward.witness->steps.size() == 3);
  for (const StepLabel& label : forward.witness->steps)
    CHECK(label.direction() == Direction::forward);
  CHECK(forward.witness->final_state() == done);

  ReachAnswer backward = reachable_coherent(parse_structure("[a.^b > c]"),
                                            parse_structure("<a> | [^a.b > c]"));
  CHECK(backward.verdict == Verdict::reachable);
  REQUIRE(backward.witness.has_value());
  CHECK(backward.witness->final_state() == parse_structure("<a> | [^a.b > c]"));

  // missing <b>: the conserved counts differ, so the target is out of reach
  ReachAnswer missing = reachable_coherent(parse_structure("<a> | [^a.b > c]"), done);
  CHECK(missing.verdict == Verdict::unreachable);
}

TEST_CASE("malformed coherent queries are rejected") {
  Structure incoherent = parse_structure("2*<a> | [^a > b]");
  Structure fine = parse_structure("<a> | [^a > b]");
  CHECK_THROWS_AS(reachable_coherent(incoherent, fine), MalformedQuery);
  CHECK_THROWS_AS(reachable_coherent(fine, incoherent), MalformedQuery);
  CHECK_THROWS_AS(reachable_coherent(fine, parse_structure("<a> | [^a > c]")), MalformedQuery);
  CHECK_THROWS_AS(reachable_coherent(fine, parse_structure("<a>")), MalformedQuery);
}

TEST_CASE("explicit-state oracle verdicts") {
  Structure start = parse_structure("<a> | <b> | [^a.b > c]");
  Structure done = parse_structure("<c> | [a.b > c^]");

  ReachAnswer found = reachable_bfs(start, done, 10000);
  CHECK(found.verdict == Verdict::reachable);
  REQUIRE(found.witness.has_value());
  CHECK(found.witness->steps.size() == 3);  // shortest
  CHECK(found.witness->final_state() == done);

  ReachAnswer isolated = reachable_bfs(parse_structure("<a>"), parse_structure("<b>"), 10000);
  CHECK(isolated.verdict == Verdict::unreachable);
  CHECK(isolated.stats.explored == 1);

  ReachAnswer trivial = reachable_bfs(start, start, 10000);
  CHECK(trivial.verdict == Verdict::reachable);
  CHECK(trivial.witness->steps.empty());

  ReachAnswer capped = reachable_bfs(start, done, 2);
  CHECK(capped.verdict == Verdict::inconclusive);

  CHECK_THROWS_AS(reachable_bfs(start, done, 0), Error);
}

TEST_CASE("stuck cyclic states agree across both procedures") {
  // neither gate can retreat (its output is held by the other) or advance
  Structure deadlock = parse_structure("[b > a^] | [a > b^]");
  Structure fresh = parse_structure("[^b > a] | [^a > b]");
  REQUIRE(is_coherent(deadlock).coherent);
  REQUIRE(is_coherent(fresh).coherent);

  CHECK(reachable_coherent(deadlock, fresh).verdict == Verdict::unreachable);
  CHECK(reachable_coherent(fresh, deadlock).verdict == Verdict::unreachable);
  CHECK(reachable_coherent(deadlock, deadlock).verdict == Verdict::reachable);
  CHECK(reachable_bfs(deadlock, fresh, 10000).verdict == Verdict::unreachable);
  CHECK(reachable_bfs(fresh, deadlock, 10000).verdict == Verdict::unreachable);
}

TEST_CASE("same-shape gates pair up by marker rank") {
  Structure low = parse_structure("[ > ^a] | [ > a^]");
  REQUIRE(is_coherent(low).coherent);
  CHECK(reachable_coherent(low, low).verdict == Verdict::reachable);

  // advancing the pending gate would duplicate the emitted species; the
  // procedure must not get stuck on that and must agree with the oracle
  Structure shifted = parse_structure("<a> | 2*[ > a^]");
  CHECK_FALSE(is_coherent(shifted).coherent);
  CHECK(reachable_bfs(low, shifted, 10000).verdict == Verdict::reachable);
}

TEST_CASE("witnesses replay and reachability is symmetric") {
  testgen::Rng rng(6001);
  int checked_pairs = 0;
  for (int i = 0; i < 60; ++i) {
    Structure base = testgen::random_coherent_base(rng, 6);
    Structure from = testgen::random_walk(rng, base, 6).final_state();
    Structure to = testgen::random_walk(rng, base, 6).final_state();
    ReachAnswer forward = reachable_coherent(from, to);
    ReachAnswer backward = reachable_coherent(to, from);
    CHECK(forward.verdict == backward.verdict);
    CHECK(forward.verdict == reachable_bfs(from, to, 200000, false).verdict);
    if (forward.verdict == Verdict::reachable) {
      CHECK(forward.witness->init == from);
      CHECK(forward.witness->final_state() == to);
      ++checked_pairs;
    }
  }
  CHECK(checked_pairs > 0);
}

TEST_CASE("extra material in the target is unreachable under conservation") {
  testgen::Rng rng(6002);
  for (int i = 0; i < 40; ++i) {
    Structure base = testgen::random_coherent_base(rng, 6);
    Structure from = testgen::random_walk(rng, base, 5).final_state();
    Structure to = testgen::random_walk(rng, base, 5).final_state();
    to.add_signal(Name("zz"));
    REQUIRE(is_coherent(to).coherent);
    CHECK(reachable_coherent(from, to).verdict == Verdict::unreachable);
    CHECK(reachable_bfs(from, to, 100000, false).verdict == Verdict::unreachable);
  }
}

TEST_CASE("rank pairing advances the trailing sibling first") {
  Structure source = parse_structure("[ > ^a.b] | [ > a.b^]");
  Structure target = parse_structure("<a> | [ > a.^b] | [ > a.b^]");
  REQUIRE(is_coherent(source).coherent);
  REQUIRE(is_coherent(target).coherent);
  ReachAnswer greedy = reachable_coherent(source, target);
  CHECK(greedy.verdict == Verdict::reachable);
  CHECK(greedy.witness->final_state() == target);
  CHECK(reachable_bfs(source, target, 10000).verdict == Verdict::reachable);
}

TEST_CASE("chain instances scale and stay reachable") {
  for (std::size_t n : {1, 2, 17}) {
    ReachAnswer answer = reachable_coherent(chain_source(n), chain_target(n));
    CHECK(answer.verdict == Verdict::reachable);
    REQUIRE(answer.witness.has_value());
    CHECK(answer.witness->steps.size() == 2 * n);
  }
  std::vector<BenchRow> rows = chain_bench({8, 16});
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].steps == 16);
  CHECK(rows[1].steps == 32);
  CHECK(rows[0].seconds > 0);
}
