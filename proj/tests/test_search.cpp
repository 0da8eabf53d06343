#include "cubeprover/corpus.hpp"
#include "cubeprover/io.hpp"
#include "cubeprover/search.hpp"
#include "doctest.h"

using namespace cube;

namespace {
Sequent S(const char* text) { return parse_sequent(text); }
SearchOptions no_close() {
  SearchOptions o;
  o.auto_close_45 = false;
  return o;
}
}  // namespace

TEST_CASE("45-closure") {
  CHECK(closure45(AX_T | AX_5) == (AX_T | AX_4 | AX_5));
  CHECK(closure45(AX_B | AX_4) == (AX_B | AX_4 | AX_5));
  CHECK(closure45(AX_D | AX_B | AX_4) == (AX_D | AX_B | AX_4 | AX_5));
  CHECK(is_45_closed(AX_T | AX_4 | AX_5));
  CHECK_FALSE(is_45_closed(AX_T | AX_5));
  CHECK(is_45_closed(0));
  for (const auto& l : named_logics()) CHECK(is_45_closed(l.axioms));
  CHECK(cube_logics().size() == 15);
}

TEST_CASE("logic names") {
  CHECK(parse_logic("S4").axioms == (AX_T | AX_4));
  CHECK(parse_logic("s5").axioms == closure45(AX_T | AX_5));
  CHECK(parse_logic("d,4").axioms == (AX_D | AX_4));
  CHECK(parse_logic("K").axioms == 0);
  CHECK_THROWS(parse_logic("nonsense"));
}

TEST_CASE("the k example is proved in K") {
  auto out = prove(parse("[](a|b) -> ([]a | <>b)"), 0);
  REQUIRE(out.verdict == Verdict::Proved);
  CHECK(check_proof(out.proof, System::logical(0)).ok);
  CHECK(check_proof(out.circle_proof, System::logical_circle(0)).ok);
}

TEST_CASE("incompleteness without 45-closure") {
  Formula f = parse("[]p -> [][]p");
  auto off = prove(f, AX_T | AX_5, no_close());
  CHECK(off.verdict == Verdict::FailedUnverified);
  CHECK_FALSE(off.model.has_value());
  auto on = prove(f, AX_T | AX_5);
  CHECK(on.verdict == Verdict::Proved);
  CHECK(on.X == (AX_T | AX_4 | AX_5));
  CHECK_FALSE(on.notice.empty());
  CHECK(prove(f, AX_T | AX_4 | AX_5).verdict == Verdict::Proved);

  Formula g = parse("<>p -> []<>p");
  CHECK(prove(g, AX_B | AX_4, no_close()).verdict == Verdict::FailedUnverified);
  CHECK(prove(g, AX_B | AX_4 | AX_5).verdict == Verdict::Proved);
  auto k = prove(g, 0);
  REQUIRE(k.verdict == Verdict::Refuted);
  CHECK(verify_countermodel(k.model->model, k.model->root, Sequent::of({g}), 0));
  CHECK(brute_force_countermodel(g, 0, 3).found);
}

TEST_CASE("an atom is refuted by a one-state model") {
  auto out = prove(parse("p"), 0);
  REQUIRE(out.verdict == Verdict::Refuted);
  CHECK(out.model->model.num_states == 1);
  CHECK_FALSE(out.model->model.holds("p", out.model->root));
  CHECK(out.model->model.rel.count() == 0);
}

TEST_CASE("finished and cyclic nodes") {
  Sequent c = S("p, [p, [q]], [p]");
  REQUIRE(cyclic_leaves(c).size() == 1);
  CHECK(resolve(c, cyclic_leaves(c).front()) == S("p"));
  CHECK(is_cyclic(c, cyclic_leaves(c).front()));
  CHECK(is_node_finished(S("p, ~q"), {}, 0));
  CHECK(is_node_finished(S("<>p"), {}, 0));
  CHECK_FALSE(is_node_finished(S("<>p"), {}, AX_D));
  CHECK_FALSE(is_node_finished(S("p | q"), {}, 0));
}

TEST_CASE("circle instances respect the set-sequent proviso") {
  Sequent s = S("<>p, [p]");
  CHECK(circle_instances_at(s, {}, 0, true).empty());
  CHECK_FALSE(circle_instances_at(S("<>p, [q]"), {}, 0, true).empty());
  CHECK(circle_instances_at(S("[]p, [p]"), {}, 0, false).empty());
}

TEST_CASE("instance limit") {
  SearchOptions o;
  o.instance_limit = 2;
  auto out = prove(parse("[]p -> [][]p"), AX_T | AX_4, o);
  CHECK(out.verdict == Verdict::LimitExceeded);
  CHECK(out.stats.instances <= 3);
}

TEST_CASE("search is deterministic") {
  Formula f = parse("<>[]p -> []<>p");
  auto a = prove(f, AX_T | AX_4 | AX_5);
  auto b = prove(f, AX_T | AX_4 | AX_5);
  REQUIRE(a.verdict == Verdict::Proved);
  CHECK(proof_to_json(a.proof) == proof_to_json(b.proof));
  CHECK(a.stats.iterations == b.stats.iterations);
}

TEST_CASE("verdict stability and the iteration bound on a corpus sample") {
  auto goals = random_corpus(60, 5);
  for (Formula g : goals) {
    for (const auto& l : cube_logics()) {
      auto a = prove(g, l.axioms);
      auto b = prove(g, closure45(l.axioms));
      CHECK(a.verdict == b.verdict);
      CHECK(a.stats.iterations <= (std::size_t{1} << std::min<std::size_t>(a.stats.sf_size, 62)));
      if (a.verdict == Verdict::Proved) CHECK(check_proof(a.proof, System::logical(a.X)).ok);
    }
    // Closure never turns a proof into a refutation.
    for (AxSet X : {AxSet(AX_T | AX_5), AxSet(AX_B | AX_4), AxSet(AX_D | AX_5)}) {
      auto raw = prove(g, X, no_close());
      if (raw.verdict == Verdict::Proved) CHECK(prove(g, X).verdict == Verdict::Proved);
    }
  }
}
