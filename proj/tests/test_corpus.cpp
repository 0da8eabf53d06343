#include "cubeprover/corpus.hpp"
#include "doctest.h"

#include <set>

using namespace cube;

TEST_CASE("corpus generation is deterministic") {
  auto a = random_corpus(120, 7);
  auto b = random_corpus(120, 7);
  auto c = random_corpus(120, 8);
  CHECK(a.size() == 120);
  CHECK(a == b);
  CHECK(a != c);
  for (Formula f : a) CHECK(modal_depth(f) <= 3);
  std::set<Formula> uniq(a.begin(), a.end());
  CHECK(uniq.size() == a.size());
}

TEST_CASE("modal depth") {
  CHECK(modal_depth(parse("p")) == 0);
  CHECK(modal_depth(parse("[]p & <>[]q")) == 2);
  CHECK(modal_depth(parse("[](p | <>[]<>q)")) == 4);
}

TEST_CASE("parallel corpus runs match the serial path") {
  auto goals = random_corpus(40, 11);
  auto logics = cube_logics();
  auto s = run_corpus(goals, logics, Exec::Serial);
  auto p = run_corpus(goals, logics, Exec::Parallel);
  REQUIRE(s.size() == goals.size() * logics.size());
  CHECK(same_results(s, p));
  auto sum = summarize(s);
  CHECK(sum.errors == 0);
  CHECK(sum.bound_violations == 0);
  CHECK(sum.artifact_failures == 0);
  CHECK(sum.proved + sum.refuted == sum.runs);
}

TEST_CASE("frame counts") {
  CHECK(count_frames(1, 0) == 2);
  CHECK(count_frames(2, 0) == 16);
  CHECK(count_frames(3, 0) == 512);
  // Reflexive relations on two states: the two off-diagonal bits are free.
  CHECK(count_frames(2, AX_T) == 4);
  // Serial relations: every row nonempty.
  CHECK(count_frames(2, AX_D) == 9);
  CHECK(count_frames(3, AX_D) == 343);
  // Equivalence relations counted by the Bell numbers.
  CHECK(count_frames(3, AX_T | AX_5) == 5);
  CHECK(count_frames(4, AX_T | AX_B | AX_4) == 15);
  // Symmetric relations: diagonal and upper triangle free.
  CHECK(count_frames(3, AX_B) == 64);
}

TEST_CASE("brute-force countermodels") {
  Formula f = parse("<>p -> []<>p");
  auto r = brute_force_countermodel(f, 0, 3);
  REQUIRE(r.found);
  CHECK(r.states == 2);
  CHECK_FALSE(model_check(r.model(), r.root, f));
  CHECK_FALSE(brute_force_countermodel(f, AX_T | AX_5, 3).found);
  CHECK_FALSE(brute_force_countermodel(parse("[]p -> p"), AX_T, 3).found);
  CHECK(brute_force_countermodel(parse("[]p -> p"), AX_D, 3).found);
  auto q = brute_force_countermodel(parse("p"), 0, 3);
  CHECK(q.states == 1);
}

TEST_CASE("parallel brute force matches the serial path") {
  auto goals = random_corpus(30, 5);
  for (Formula g : goals)
    for (AxSet X : {AxSet(0), AxSet(AX_T), AxSet(AX_B | AX_4)})
      CHECK(brute_force_countermodel(g, X, 3, Exec::Serial) == brute_force_countermodel(g, X, 3, Exec::Parallel));
}

TEST_CASE("randomized rule soundness") {
  auto rep = rule_soundness_check(200, 3);
  CHECK(rep.instances == 200);
  CHECK(rep.violations == 0);
  CHECK(rep.nonvacuous > rep.checks / 2);
  CHECK(rep.per_rule.size() >= 10);
}
