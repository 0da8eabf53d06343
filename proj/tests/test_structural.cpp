#include "cubeprover/io.hpp"
#include "cubeprover/transform.hpp"
#include "doctest.h"

using namespace cube;

namespace {
Proof load(const char* name) { return proof_from_json(read_json_file(std::string(CUBE_FIXTURES) + "/" + name)); }

HilbertStep ax(Axiom a, const char* f) {
  HilbertStep s;
  s.kind = HilbertStep::AxiomInstance;
  s.axiom = a;
  s.a = parse(f);
  return s;
}
HilbertStep taut(Formula f) {
  HilbertStep s;
  s.kind = HilbertStep::Tautology;
  s.a = f;
  return s;
}
HilbertStep mp(int a, int b) {
  HilbertStep s;
  s.kind = HilbertStep::ModusPonens;
  s.from1 = a;
  s.from2 = b;
  return s;
}
HilbertStep nec(int a) {
  HilbertStep s;
  s.kind = HilbertStep::Necessitation;
  s.from1 = a;
  return s;
}
System with_cut(AxSet X) { return System::structural(X, true).with(Rule::nec).with(Rule::wk); }

// Str rules outside X.
bool foreign_str(const Proof& p, AxSet X) {
  for (Axiom a : {AX_D, AX_T, AX_B, AX_4, AX_5})
    if (!has(X, a) && uses_rule(p, str_rule(a))) return true;
  return false;
}
}  // namespace

TEST_CASE("structural fixtures check") {
  Proof t5 = load("structural_t5.json");
  CHECK(check_proof(t5, System::structural(AX_T | AX_5)).ok);
  CHECK(t5->concl() == Sequent::of({parse("[]p -> [][]p")}));
  CHECK_FALSE(check_proof(t5, System::structural(AX_T)).ok);
  Proof b4 = load("structural_b4.json");
  CHECK(check_proof(b4, System::structural(AX_B | AX_4)).ok);
  CHECK(b4->concl() == Sequent::of({parse("<>p -> []<>p")}));
  CHECK(is_cut_free(t5));
  CHECK(is_cut_free(b4));
}

TEST_CASE("axiom templates") {
  struct Case {
    Axiom a;
    Rule str;
    std::size_t ks;
  };
  for (Case c : {Case{AX_D, Rule::str_d, 2}, Case{AX_T, Rule::str_t, 1}, Case{AX_B, Rule::str_b, 1},
                 Case{AX_4, Rule::str_4, 1}, Case{AX_5, Rule::str_5, 1}}) {
    Proof p = hilbert_to_nested({ax(c.a, "p")}, c.a);
    CHECK(check_proof(p, System::structural(c.a)).ok);
    CHECK(count_rule(p, c.str) == 1);
    CHECK(count_rule(p, Rule::k) == c.ks);
    CHECK(p->concl() == Sequent::of({hilbert_formula({ax(c.a, "p")}, 0)}));
  }
  CHECK(hilbert_formula({ax(AX_T, "p")}, 0) == parse("p -> <>p"));
  CHECK(hilbert_formula({ax(AX_D, "p")}, 0) == parse("[]p -> <>p"));
  CHECK(hilbert_formula({ax(AX_B, "p")}, 0) == parse("p -> []<>p"));
  CHECK(hilbert_formula({ax(AX_4, "p")}, 0) == parse("[]p -> [][]p"));
  CHECK(hilbert_formula({ax(AX_5, "p")}, 0) == parse("<>p -> []<>p"));
}

TEST_CASE("Hilbert proofs translate with cuts") {
  std::vector<HilbertStep> h = {ax(AX_4, "p")};
  Formula F = hilbert_formula(h, 0);
  h.push_back(taut(implies(F, Formula::mk_or(F, parse("q")))));
  h.push_back(mp(0, 1));
  Proof p = hilbert_to_nested(h, AX_4);
  CHECK(check_proof(p, with_cut(AX_4)).ok);
  CHECK(count_rule(p, Rule::cut) == 1);
  CHECK_THROWS_AS(hilbert_to_nested(h, AX_5), TransformError);
  CHECK_THROWS_AS(hilbert_to_nested({taut(parse("p | q"))}, 0), TransformError);
}

TEST_CASE("necessitation steps") {
  HilbertStep k;
  k.kind = HilbertStep::AxiomK;
  k.a = parse("p");
  k.b = parse("q");
  std::vector<HilbertStep> h = {taut(parse("p | ~p")), nec(0), k};
  Proof p = hilbert_to_nested(h, 0);
  CHECK(check_proof(p, with_cut(0)).ok);
  Proof n = hilbert_to_nested({taut(parse("p | ~p")), nec(0)}, 0);
  CHECK(count_rule(n, Rule::nec) == 1);
  CHECK(n->concl() == Sequent::of({parse("[](p | ~p)")}));
  Proof e = eliminate_cuts_structural(n, 0);
  CHECK_FALSE(uses_rule(e, Rule::nec));
  CHECK(check_proof(e, System::structural(0)).ok);
}

TEST_CASE("Hilbert JSON") {
  std::vector<HilbertStep> h = {ax(AX_4, "p")};
  Formula F = hilbert_formula(h, 0);
  h.push_back(taut(implies(F, Formula::mk_or(F, parse("q")))));
  h.push_back(mp(0, 1));
  h.push_back(nec(2));
  json j = hilbert_to_json(h);
  auto back = hilbert_from_json(j);
  REQUIRE(back.size() == h.size());
  for (std::size_t i = 0; i < h.size(); ++i) CHECK(hilbert_formula(back, i) == hilbert_formula(h, i));
  auto file = hilbert_from_json(read_json_file(std::string(CUBE_FIXTURES) + "/mp_chain_4.json"));
  CHECK(file.size() == 3);
  CHECK_THROWS(hilbert_from_json(json::parse(R"([{"mp":[0,5]}])")));
  CHECK_THROWS(hilbert_from_json(json::parse(R"([{"ax":{"name":"x","A":"p"}}])")));
}

TEST_CASE("identity proofs") {
  for (const char* f : {"p", "~q", "[](p|q)", "<>(p & []~q)", "p & q | r"}) {
    Proof p = identity_proof(parse(f));
    CHECK(check_proof(p, System::structural(0)).ok);
    CHECK(p->concl() == Sequent::of({parse(f), negate(parse(f))}));
  }
}

TEST_CASE("structural cut elimination") {
  Proof t5 = load("structural_t5.json");
  CHECK(proof_to_json(eliminate_cuts_structural(t5, AX_T | AX_5)) == proof_to_json(t5));

  Proof c = load("cut_structural.json");
  ElimTrace trace;
  Proof e = eliminate_cuts_structural(c, AX_4, &trace);
  CHECK(is_cut_free(e));
  CHECK(check_proof(e, System::structural(AX_4)).ok);
  CHECK(e->concl() == c->concl());
  CHECK(trace.back().max_rank == 0);
  CHECK(trace.front().phase == "input");
}

TEST_CASE("MP chains over every axiom") {
  const char* atoms[] = {"p", "q"};
  for (Axiom a : {AX_D, AX_T, AX_B, AX_4, AX_5}) {
    for (const char* at : atoms) {
      std::vector<HilbertStep> h = {ax(a, at)};
      Formula F = hilbert_formula(h, 0);
      h.push_back(taut(implies(F, Formula::mk_or(parse("r"), F))));
      h.push_back(mp(0, 1));
      Formula G = hilbert_formula(h, 2);
      h.push_back(taut(implies(G, Formula::mk_and(G, G))));
      h.push_back(mp(2, 3));
      Proof p = hilbert_to_nested(h, a);
      REQUIRE(check_proof(p, with_cut(a)).ok);
      Proof e = eliminate_cuts_structural(p, a);
      CHECK(is_cut_free(e));
      CHECK(check_proof(e, System::structural(a)).ok);
      CHECK(e->concl() == p->concl());
      CHECK_FALSE(foreign_str(e, a));
    }
  }
}

TEST_CASE("translation to the structural system is local for k and d only") {
  Proof b4 = load("structural_b4.json");
  Proof l = structural_to_logical(b4, AX_B | AX_4 | AX_5);
  CHECK(check_proof(l, System::logical(AX_B | AX_4 | AX_5)).ok);
  CHECK_THROWS_AS(logical_to_structural(l, AX_B | AX_4 | AX_5), TransformError);
}

TEST_CASE("structural proofs with str_d translate to the logical system") {
  Proof p = hilbert_to_nested({ax(AX_D, "p")}, AX_D);
  REQUIRE(uses_rule(p, Rule::str_d));
  for (AxSet X : {AxSet(AX_D), AxSet(AX_D | AX_4), AxSet(AX_D | AX_T | AX_B | AX_4 | AX_5)}) {
    Proof l = structural_to_logical(p, X);
    CHECK_FALSE(uses_rule(l, Rule::str_d));
    CHECK(check_proof(l, System::logical(X)).ok);
    CHECK(l->concl() == p->concl());
  }
}
