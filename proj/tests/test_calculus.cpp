#include <fstream>

#include "cubeprover/io.hpp"
#include "cubeprover/search.hpp"
#include "doctest.h"

using namespace cube;

namespace {
Sequent S(const char* text) { return parse_sequent(text); }
Slot slot_of(const Sequent& s, const Path& p, const char* f) {
  return Slot{p, find_formula(resolve(s, p), parse(f))};
}
System only(Rule r) {
  System s;
  s.fam = Family::Custom;
  s.rules.set(static_cast<std::size_t>(r));
  return s;
}
Proof load(const char* name) { return proof_from_json(read_json_file(std::string(CUBE_FIXTURES) + "/" + name)); }
}  // namespace

TEST_CASE("axiom sets") {
  CHECK(axset_from_string("d,t,4") == (AX_D | AX_T | AX_4));
  CHECK(axset_from_string("dt4") == (AX_D | AX_T | AX_4));
  CHECK(axset_to_string(AX_B | AX_5) == "b,5");
  CHECK(axset_from_string("") == 0);
  CHECK_THROWS(axset_from_string("x"));
}

TEST_CASE("rule names round trip") {
  for (std::size_t i = 0; i < kRuleCount; ++i) {
    Rule r = static_cast<Rule>(i);
    auto back = rule_from_name(rule_name(r));
    REQUIRE(back.has_value());
    CHECK(back->first == r);
  }
  CHECK(rule_arity(Rule::and_) == 2);
  CHECK(rule_arity(Rule::axiom) == 0);
  CHECK(is_cut_rule(Rule::mcut));
}

TEST_CASE("applicable instances include the k example step") {
  Sequent s = S("<>(~a&~b), [a], <>b");
  auto all = applicable_instances(s, System::logical(0));
  bool found = false;
  for (const auto& r : all)
    if (r.rule == Rule::dia_k_c && print(resolve(s, r.act[0].node).fs[static_cast<std::size_t>(r.act[0].index)]) ==
                                       "<>(~a&~b)")
      found = found || premises_of(r).front() == S("<>(~a&~b), [a, ~a&~b], <>b");
  CHECK(found);
  CHECK(applicable_instances(s, System::logical(0)).size() == all.size());
  for (const auto& r : all) CHECK(premises_of(r) == r.prems);
}

TEST_CASE("axiom instance and 5 proviso") {
  CHECK(is_axiomatic(S("p, ~p")));
  CHECK(axiom_instance(S("q, [p, ~p]")).has_value());
  CHECK_FALSE(is_axiomatic(S("p, [~p]")));
  auto five = applicable_instances(S("<>p"), only(Rule::dia_5_c));
  CHECK(five.empty());
  auto deep = applicable_instances(S("[<>p], [q]"), only(Rule::dia_5_c));
  CHECK_FALSE(deep.empty());
  for (const auto& r : deep) CHECK(premises_of(r).front().formula_count() == 3);
}

TEST_CASE("premises of structural rules") {
  Sequent c = S("q, [p, [r]]");
  RuleInstance ctr = inst(Rule::ctr, c, {Slot{{0}, -1}});
  ctr.delta = S("p, [r]");
  CHECK(premises_of(ctr).front() == S("q, [p, [r], p, [r]]"));

  // [4]: conclusion G{[[D], E]}, premise G{[D], [E]}.
  Sequent four = S("q, [[p], r]");
  CHECK(premises_of(inst(Rule::str_4, four, {Slot{{0, 0}, -1}})).front() == S("q, [p], [r]"));
  CHECK_THROWS_AS(premises_of(inst(Rule::str_4, four, {Slot{{0}, -1}})), MalformedInstance);

  Sequent b = S("[s], p");
  RuleInstance sb = inst(Rule::str_b, b, {Slot{{}, -1}, Slot{{0}, -1}});
  sb.delta = S("p");
  CHECK(premises_of(sb).front() == S("[s, [p]]"));

  Sequent t = S("p, q");
  RuleInstance st = inst(Rule::str_t, t, {Slot{{}, -1}});
  st.delta = S("p");
  CHECK(premises_of(st).front() == S("q, [p]"));

  CHECK(premises_of(inst(Rule::str_d, S("p"), {Slot{{}, -1}})).front() == S("p, []"));
  CHECK_THROWS_AS(premises_of(inst(Rule::str_5, S("[[p]], [q]"), {Slot{{0, 0}, -1}, Slot{{}, -1}})),
                  MalformedInstance);
  CHECK(premises_of(inst(Rule::str_5, S("[[p]], [q]"), {Slot{{0, 0}, -1}, Slot{{1}, -1}})).front() ==
        S("[], [q, [p]]"));
}

TEST_CASE("dia_5_c copies the diamond to the target") {
  Sequent s = S("[<>p], [q]");
  Path src{0};
  Path dst{1};
  if (resolve(s, src).fs.front() != parse("<>p")) std::swap(src, dst);
  RuleInstance r = inst(Rule::dia_5_c, s, {slot_of(s, src, "<>p"), Slot{dst, -1}});
  CHECK(premises_of(r).front() == S("[<>p], [q, <>p]"));
}

TEST_CASE("the transcribed k example checks in K only") {
  Proof p = load("k_example.json");
  CHECK(check_proof(p, System::logical(0)).ok);
  CHECK(p->concl() == Sequent::of({parse("[](a|b) -> ([]a | <>b)")}));
  auto bad = check_proof(p, System::structural(0));
  CHECK_FALSE(bad.ok);
  CHECK(bad.message.find("dia_k_c") != std::string::npos);
}

TEST_CASE("the checker names a tampered step") {
  json j = proof_to_json(load("k_example.json"));
  j["prems"][0]["concl"]["fs"][0] = "q";
  Proof p = proof_from_json(j);
  auto rep = check_proof(p, System::logical(0));
  CHECK_FALSE(rep.ok);
  CHECK(rep.where == std::vector<int>{});
  CHECK_THROWS_AS(make_proof(p->step, p->subs), ProofError);
}

TEST_CASE("cut ranks") {
  Proof p = load("cut_logical.json");
  CHECK(check_proof(p, System::logical(0, true)).ok);
  CHECK_FALSE(check_proof(p, System::logical(0)).ok);
  CHECK(cut_ranks(p) == std::vector<int>{depth(parse("[]q")) + 1});
  CHECK(max_cut_rank(p) == 2);
  CHECK_FALSE(is_cut_free(p));
  CHECK(count_rule(p, Rule::cut) == 1);
}

TEST_CASE("ycut proviso") {
  RuleInstance r = inst(Rule::ycut, S("p, [q]"), {Slot{{}, -1}});
  r.cutf = parse("p");
  r.Y = 0;
  CHECK(ycut_proviso_holds(r));
  r.Y = AX_4 | AX_5;
  r.act = {Slot{{}, -1}, Slot{{0}, -1}};
  CHECK(ycut_proviso_holds(r));
  r.Y = AX_5;
  CHECK_FALSE(ycut_proviso_holds(r));
  r.act = {Slot{{0}, -1}, Slot{{}, -1}};
  CHECK(ycut_proviso_holds(r));
  CHECK(ystr_proviso_holds(AX_4 | AX_5, Path{}, Path{0, 1}));
  CHECK(ystr_proviso_holds(AX_4, Path{0}, Path{0, 1}));
  CHECK_FALSE(ystr_proviso_holds(AX_5, Path{}, Path{0}));
}

TEST_CASE("systems") {
  CHECK(System::logical(AX_T).allows(Rule::dia_t_c));
  CHECK_FALSE(System::logical(AX_T).allows(Rule::dia_b_c));
  CHECK(System::structural(AX_5).allows(Rule::str_5));
  CHECK(System::structural(AX_5).allows(Rule::ctr));
  CHECK_FALSE(System::structural(0).allows(Rule::cut));
  CHECK(System::structural(0, true).allows(Rule::cut));
  CHECK(System::km(0).allows(Rule::med));
}
