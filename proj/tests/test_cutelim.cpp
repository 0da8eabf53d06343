#include "cubeprover/corpus.hpp"
#include "cubeprover/io.hpp"
#include "cubeprover/transform.hpp"
#include "doctest.h"

using namespace cube;

namespace {
Sequent S(const char* text) { return parse_sequent(text); }
Proof load(const char* name) { return proof_from_json(read_json_file(std::string(CUBE_FIXTURES) + "/" + name)); }

Proof cut_at_root(const Sequent& concl, Formula A, Proof left, Proof right) {
  RuleInstance c = inst(Rule::cut, concl, {Slot{{}, -1}});
  c.cutf = A;
  return make_proof(c, {std::move(left), std::move(right)});
}

// Cut of a proof of G against the identity proof of ~G, G.
Proof self_cut(const Proof& p, AxSet X) {
  Formula G = p->concl().fs.front();
  return cut_at_root(p->concl(), G, weaken(p, {}, Sequent::of({G})), structural_to_logical(identity_proof(G), X));
}

std::vector<AxSet> closed_sets() {
  std::vector<AxSet> out;
  for (AxSet X = 0; X <= kAllAxioms; ++X)
    if (is_45_closed(X)) out.push_back(X);
  return out;
}
}  // namespace

TEST_CASE("cut-free input is returned unchanged") {
  Proof k = load("k_example.json");
  Proof out = eliminate_cuts_logical(k, 0);
  CHECK(proof_to_json(out) == proof_to_json(k));
}

TEST_CASE("atomic cut over axioms") {
  Sequent g = S("p, ~p");
  Proof left = make_proof(*axiom_instance(S("p, ~p, p")));
  Proof right = make_proof(*axiom_instance(S("p, ~p, ~p")));
  Proof c = cut_at_root(g, parse("p"), left, right);
  REQUIRE(check_proof(c, System::logical(0, true)).ok);
  Proof out = eliminate_cuts_logical(c, 0);
  CHECK(out->step.rule == Rule::axiom);
  CHECK(out->concl() == g);
}

TEST_CASE("the cut fixture is eliminated with a decreasing trace") {
  Proof p = load("cut_logical.json");
  ElimTrace trace;
  Proof out = eliminate_cuts_logical(p, 0, &trace);
  CHECK(is_cut_free(out));
  CHECK(check_proof(out, System::logical(0)).ok);
  CHECK(out->concl() == p->concl());
  REQUIRE_FALSE(trace.empty());
  CHECK(trace.front().max_rank == 2);
  CHECK(trace.back().max_rank == 0);
}

TEST_CASE("X must be 45-closed") {
  Proof p = load("cut_logical.json");
  CHECK_THROWS(eliminate_cuts_logical(p, AX_T | AX_5));
}

TEST_CASE("MP-shaped cut from a Hilbert proof of the t axiom") {
  std::vector<HilbertStep> h(3);
  h[0].kind = HilbertStep::AxiomInstance;
  h[0].axiom = AX_T;
  h[0].a = parse("p");
  Formula F = hilbert_formula(h, 0);
  h[1].kind = HilbertStep::Tautology;
  h[1].a = implies(F, Formula::mk_or(parse("q"), F));
  h[2].kind = HilbertStep::ModusPonens;
  h[2].from1 = 0;
  h[2].from2 = 1;
  Proof s = hilbert_to_nested(h, AX_T);
  Proof l = structural_to_logical(s, AX_T);
  REQUIRE(check_proof(l, System::logical(AX_T, true)).ok);
  REQUIRE_FALSE(is_cut_free(l));
  Proof out = eliminate_cuts_logical(l, AX_T);
  CHECK(is_cut_free(out));
  CHECK(check_proof(out, System::logical(AX_T)).ok);
  CHECK(out->concl() == Sequent::of({hilbert_formula(h, 2)}));
}

TEST_CASE("self cuts on corpus theorems for every 45-closed set") {
  auto goals = random_corpus(40, 77);
  std::size_t done = 0;
  for (AxSet X : closed_sets()) {
    std::size_t here = 0;
    for (Formula g : goals) {
      if (here == 2) break;
      auto out = prove(g, X);
      if (out.verdict != Verdict::Proved) continue;
      Proof c = self_cut(out.proof, X);
      REQUIRE(check_proof(c, System::logical(X, true)).ok);
      Proof e = eliminate_cuts_logical(c, X);
      CHECK(is_cut_free(e));
      CHECK(check_proof(e, System::logical(X)).ok);
      CHECK(e->concl() == c->concl());
      ++here;
      ++done;
    }
  }
  CHECK(done >= 20);
}
