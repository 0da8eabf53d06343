#include "cubeprover/io.hpp"
#include "cubeprover/search.hpp"
#include "cubeprover/transform.hpp"
#include "doctest.h"

using namespace cube;

namespace {
Sequent S(const char* text) { return parse_sequent(text); }
Proof load(const char* name) { return proof_from_json(read_json_file(std::string(CUBE_FIXTURES) + "/" + name)); }
Proof proved(const char* f, AxSet X) {
  auto out = prove(parse(f), X);
  REQUIRE(out.verdict == Verdict::Proved);
  return out.proof;
}
Slot slot_of(const Sequent& s, const Path& p, const char* f) {
  return Slot{p, find_formula(resolve(s, p), parse(f))};
}
}  // namespace

TEST_CASE("weakening") {
  Proof ax = make_proof(*axiom_instance(S("p, ~p")));
  Proof w = weaken(ax, {}, S("q, [r]"));
  CHECK(w->step.rule == Rule::axiom);
  CHECK(w->concl() == S("p, ~p, q, [r]"));

  Proof k = load("k_example.json");
  Proof kq = weaken(k, {}, S("q"));
  CHECK(check_proof(kq, System::logical(0)).ok);
  CHECK(kq->depth <= k->depth);
  CHECK(kq->concl() == graft(k->concl(), {}, S("q")));

  Proof inner = proved("[]p -> [][]p", AX_T | AX_4 | AX_5);
  Sequent boxed = Sequent::boxed(inner->concl());
  Proof nb = necessitate(inner);
  CHECK(nb->concl() == boxed);
  Proof deep = weaken(nb, {0}, S("<>q"));
  CHECK(check_proof(deep, System::logical(AX_T | AX_4 | AX_5)).ok);
  CHECK(deep->depth <= nb->depth);
  CHECK_THROWS(weaken(k, {4}, S("q")));
}

TEST_CASE("contraction") {
  Proof ax = make_proof(*axiom_instance(S("p, ~p, p, ~p")));
  Proof c = contract(ax, {}, S("p, ~p"));
  CHECK(c->step.rule == Rule::axiom);
  CHECK(c->concl() == S("p, ~p"));

  Proof k = load("k_example.json");
  Proof doubled = weaken(k, {}, k->concl());
  Proof back = contract(doubled, {}, k->concl());
  CHECK(back->concl() == k->concl());
  CHECK(check_proof(back, System::logical(0)).ok);
  CHECK(back->depth <= doubled->depth);
  CHECK_THROWS(contract(k, {}, S("q")));
}

TEST_CASE("necessitation of the k axiom proof") {
  Proof k = load("k_example.json");
  Proof n = necessitate(k);
  CHECK(n->concl() == Sequent::boxed(k->concl()));
  CHECK(check_proof(n, System::logical(0)).ok);
  CHECK(n->depth <= k->depth);
}

TEST_CASE("inversion") {
  Proof k = load("k_example.json");
  Proof inv = invert(k, Rule::or_, Slot{{}, 0});
  CHECK(inv->concl() == S("<>(~a&~b), []a|<>b"));
  CHECK(check_proof(inv, System::logical(0)).ok);
  CHECK(inv->depth <= k->depth);

  Proof inv2 = invert(inv, Rule::or_, slot_of(inv->concl(), {}, "[]a|<>b"));
  Proof ib = invert(inv2, Rule::box, slot_of(inv2->concl(), {}, "[]a"));
  CHECK(ib->concl() == S("<>(~a&~b), [a], <>b"));
  CHECK(check_proof(ib, System::logical(0)).ok);

  Proof both = proved("[]p & []q -> [](p & q)", 0);
  Proof s1 = invert(both, Rule::or_, Slot{{}, 0});
  Sequent c = s1->concl();
  Proof box = invert(s1, Rule::box, slot_of(c, {}, "[](p&q)"));
  Slot conj = slot_of(box->concl(), {0}, "p&q");
  for (int branch : {0, 1}) {
    Proof b = invert(box, Rule::and_, conj, branch);
    CHECK(check_proof(b, System::logical(0)).ok);
    CHECK(b->depth <= box->depth);
  }

  Proof t = proved("[]p -> p", AX_T);
  Proof t1 = invert(t, Rule::or_, Slot{{}, 0});
  Proof tt = invert(t1, Rule::dia_t_c, slot_of(t1->concl(), {}, "<>~p"));
  CHECK(tt->concl() == S("<>~p, ~p, p"));
  CHECK(check_proof(tt, System::logical(AX_T)).ok);
  CHECK_THROWS(invert(k, Rule::and_, Slot{{}, 0}));
}

TEST_CASE("diamond rules with and without contraction") {
  Sequent s = S("<>p, ~p");
  RuleInstance t = inst(Rule::dia_t, s, {Slot{{}, find_formula(s, parse("<>p"))}});
  Proof single = make_proof(t, {make_proof(*axiom_instance(premises_of(t).front()))});
  System plain = System::logical(0).with(Rule::dia_t);
  CHECK(check_proof(single, plain).ok);
  Proof to = dia_vs_diac(single, DiaDirection::ToContracting);
  CHECK(check_proof(to, System::logical(AX_T)).ok);
  CHECK(to->concl() == s);

  Proof tc = proved("[]p -> p", AX_T);
  Proof from = dia_vs_diac(tc, DiaDirection::FromContracting);
  CHECK(check_proof(from, System::structural(0).with(Rule::dia_t).with(Rule::or_)).ok == true);
  CHECK_FALSE(uses_rule(from, Rule::dia_t_c));

  Proof k = load("k_example.json");
  Proof same = dia_vs_diac(make_proof(*axiom_instance(S("p, ~p"))), DiaDirection::FromContracting);
  CHECK(same->concl() == S("p, ~p"));
  CHECK(check_proof(dia_vs_diac(k, DiaDirection::FromContracting), System::structural(0).with(Rule::dia_k)).ok);
}

TEST_CASE("decomposing dia_5_c") {
  Proof p = proved("<>p -> []<>p", AX_5);
  REQUIRE(uses_rule(p, Rule::dia_5_c));
  Proof d = decompose_dia5(p);
  CHECK_FALSE(uses_rule(d, Rule::dia_5_c));
  System sys = System::logical(0).with(Rule::dia_5_1).with(Rule::dia_5_2).with(Rule::dia_5_3).with(Rule::ctr);
  CHECK(check_proof(d, sys).ok);
  CHECK(d->concl() == p->concl());
}

TEST_CASE("circle proofs translate to base rules") {
  auto out = prove(parse("<>[]p -> p"), AX_T | AX_B);
  REQUIRE(out.verdict == Verdict::Proved);
  Proof base = circle_to_base(out.circle_proof);
  CHECK(check_proof(base, System::logical(AX_T | AX_B)).ok);
  CHECK(base->concl() == out.circle_proof->concl());
}

TEST_CASE("weakening steps are eliminated") {
  Proof k = load("k_example.json");
  RuleInstance w = inst(Rule::wk, graft(k->concl(), {}, S("q")), {Slot{{}, -1}});
  w.delta = S("q");
  REQUIRE(tag_instance_params(w));
  Proof with_wk = make_proof(w, {k});
  Proof out = eliminate_wk(with_wk);
  CHECK_FALSE(uses_rule(out, Rule::wk));
  CHECK(check_proof(out, System::logical(0)).ok);
}

namespace {

constexpr std::uint64_t kMark = 0xabcdef;

// Conclusions C of a str_rule step whose premise is Q, one per choice.
std::vector<RuleInstance> str_steps_onto(const Sequent& Q, Rule r) {
  std::vector<RuleInstance> out;
  auto finish = [&](Sequent C, std::vector<std::uint64_t> marks, Sequent delta) {
    C.normalize();
    RuleInstance in;
    in.rule = r;
    std::vector<Slot> act;
    for (auto m : marks) {
      auto path = find_tag(C, m);
      if (!path) return;
      act.push_back(Slot{*path, -1});
    }
    clear_tags(C);
    in.concl = C;
    in.act = act;
    in.delta = delta;
    if ((r == Rule::str_t || r == Rule::str_b) && !tag_instance_params(in)) return;
    try {
      auto ps = premises_of(in);
      if (ps.size() == 1 && ps[0] == Q) out.push_back(in);
    } catch (const MalformedInstance&) {
    }
  };
  for (const auto& n : all_paths(Q)) {
    const Sequent& node = resolve(Q, n);
    for (std::uint32_t i = 0; i < node.kids.size(); ++i) {
      if (r == Rule::str_4) {
        // Premise n{[D],[S]}; conclusion n{[[D],S]}.
        for (std::uint32_t j = 0; j < node.kids.size(); ++j) {
          if (j == i) continue;
          Sequent C = Q;
          Sequent& cn = resolve_mut(C, n);
          Sequent moved = cn.kids[i];
          moved.tag = kMark;
          cn.kids[j].add_kid(moved);
          cn.kids.erase(cn.kids.begin() + i);
          finish(C, {kMark}, {});
        }
      } else if (r == Rule::str_5 && !n.empty()) {
        // Premise has box i under the non-root node n; the conclusion puts it elsewhere.
        for (const auto& t : all_paths(Q)) {
          if (t == n || is_prefix(child_path(n, i), t)) continue;
          Sequent C = Q;
          Sequent moved = resolve(C, n).kids[i];
          moved.tag = kMark;
          resolve_mut(C, t).tag = kMark + 1;
          Sequent& cn = resolve_mut(C, n);
          cn.tag = kMark + 2;
          cn.kids.erase(cn.kids.begin() + i);
          auto tp = find_tag(C, kMark + 1);
          resolve_mut(C, *tp).add_kid(moved);
          finish(C, {kMark, kMark + 2}, {});
        }
      } else if (r == Rule::str_t) {
        // Premise n{[D]}; conclusion n{D}.
        Sequent C = Q;
        Sequent& cn = resolve_mut(C, n);
        Sequent moved = cn.kids[i];
        cn.kids.erase(cn.kids.begin() + i);
        cn.append(moved);
        cn.tag = kMark;
        finish(C, {kMark}, moved);
      } else if (r == Rule::str_b) {
        // Premise n{[S,[D]]}; conclusion n{[S],D}.
        const Sequent& c = node.kids[i];
        for (std::uint32_t g = 0; g < c.kids.size(); ++g) {
          Sequent C = Q;
          Sequent& cn = resolve_mut(C, n);
          Sequent moved = cn.kids[i].kids[g];
          cn.kids[i].kids.erase(cn.kids[i].kids.begin() + g);
          cn.kids[i].tag = kMark + 1;
          cn.append(moved);
          cn.tag = kMark;
          finish(C, {kMark, kMark + 1}, moved);
        }
      }
    }
  }
  return out;
}

void collect_nodes(const Proof& p, std::vector<Proof>& out) {
  out.push_back(p);
  for (const auto& s : p->subs) collect_nodes(s, out);
}

}  // namespace

TEST_CASE("modal structural rules are admissible in the logical system") {
  const char* goals[] = {"[](a|b) -> ([]a | <>b)", "[]p -> [][]p", "<>p -> []<>p", "[]p -> p", "<>[]p -> p",
                         "[]p & <>q -> <>(p & q)"};
  std::size_t tested = 0;
  for (AxSet X : {AxSet(AX_T), AxSet(AX_B), AxSet(AX_4), AxSet(AX_5), AxSet(AX_4 | AX_5), AxSet(AX_T | AX_4 | AX_5),
                  AxSet(AX_B | AX_4 | AX_5), AxSet(AX_T | AX_4), AxSet(AX_T | AX_B)}) {
    for (const char* g : goals) {
      auto out = prove(parse(g), X);
      if (out.verdict != Verdict::Proved) continue;
      std::vector<Proof> nodes;
      collect_nodes(out.proof, nodes);
      for (Axiom a : {AX_T, AX_B, AX_4, AX_5}) {
        if (!has(X, a)) continue;
        Rule r = str_rule(a);
        for (const auto& q : nodes) {
          for (auto& step : str_steps_onto(q->concl(), r)) {
            Proof with = make_proof(step, {q});
            REQUIRE(check_proof(with, System::logical(X).with(r)).ok);
            Proof adm = admit_structural(with, X);
            CHECK(check_proof(adm, System::logical(X)).ok);
            CHECK(adm->concl() == with->concl());
            CHECK_FALSE(uses_rule(adm, r));
            ++tested;
          }
        }
      }
    }
  }
  CHECK(tested > 100);
}

TEST_CASE("logical and structural systems translate") {
  Proof k = load("k_example.json");
  Proof s = logical_to_structural(k, 0);
  CHECK(check_proof(s, System::structural(0)).ok);
  Proof back = structural_to_logical(s, 0);
  CHECK(check_proof(back, System::logical(0)).ok);

  Proof d = proved("[]p -> <>p", AX_D);
  CHECK(check_proof(logical_to_structural(d, AX_D), System::structural(AX_D)).ok);

  Proof t5 = load("structural_t5.json");
  Proof lt5 = structural_to_logical(t5, AX_T | AX_4 | AX_5);
  CHECK(check_proof(lt5, System::logical(AX_T | AX_4 | AX_5)).ok);
  Proof b4 = load("structural_b4.json");
  CHECK(check_proof(structural_to_logical(b4, AX_B | AX_4 | AX_5), System::logical(AX_B | AX_4 | AX_5)).ok);

  Proof t = proved("[]p -> p", AX_T);
  CHECK_THROWS_AS(logical_to_structural(t, AX_T), TransformError);
}
