#include <functional>

#include "edit_internal.hpp"

namespace cube {

namespace {

using detail::build;

Slot slot_of(const Sequent& s, const Path& node, Formula f) {
  int i = find_formula(resolve(s, node), f);
  if (i < 0) throw TransformError("template lost formula " + print(f));
  return Slot{node, i};
}

Path kid_with(const Sequent& s, const Path& node, const Sequent& content) {
  const Sequent& n = resolve(s, node);
  for (std::uint32_t i = 0; i < n.kids.size(); ++i)
    if (n.kids[i] == content) return child_path(node, i);
  throw TransformError("template lost a box");
}

Proof step1(Rule r, const Sequent& c, std::vector<Slot> act, Proof sub) {
  return build(inst(r, c, std::move(act)), {std::move(sub)});
}

Proof or_step(Formula F, Proof sub) {
  Sequent c = Sequent::of({F});
  return step1(Rule::or_, c, {slot_of(c, {}, F)}, std::move(sub));
}

Proof boxed_identity(Formula a, int depth) {
  Proof p = identity_proof(a);
  for (int i = 0; i < depth; ++i) p = necessitate(p);
  return p;
}

Formula axiom_formula(Axiom ax, Formula A) {
  const Formula nA = negate(A);
  switch (ax) {
    case AX_D: return Formula::mk_or(Formula::dia(nA), Formula::dia(A));
    case AX_T: return Formula::mk_or(nA, Formula::dia(A));
    case AX_B: return Formula::mk_or(nA, Formula::box(Formula::dia(A)));
    case AX_4: return Formula::mk_or(Formula::dia(nA), Formula::box(Formula::box(A)));
    case AX_5: return Formula::mk_or(Formula::box(nA), Formula::box(Formula::dia(A)));
  }
  throw TransformError("unknown axiom");
}

Formula axiom_k_formula(Formula A, Formula B) {
  return implies(Formula::box(Formula::mk_or(A, B)), Formula::mk_or(Formula::box(A), Formula::dia(B)));
}

Proof axiom_template(Axiom ax, Formula A) {
  const Formula nA = negate(A);
  const Formula F = axiom_formula(ax, A);
  switch (ax) {
    case AX_D: {
      Sequent s2 = Sequent::of({Formula::dia(A)}, {Sequent::of({nA})});
      Proof p = step1(Rule::k, s2, {slot_of(s2, {}, Formula::dia(A)), Slot{Path{0}, -1}}, boxed_identity(A, 1));
      Sequent s1 = Sequent::of({Formula::dia(nA), Formula::dia(A)}, {Sequent{}});
      p = step1(Rule::k, s1, {slot_of(s1, {}, Formula::dia(nA)), Slot{Path{0}, -1}}, p);
      Sequent s0 = Sequent::of({Formula::dia(nA), Formula::dia(A)});
      p = step1(Rule::str_d, s0, {Slot{{}, -1}}, p);
      return or_step(F, p);
    }
    case AX_T: {
      Sequent s1 = Sequent::of({Formula::dia(A)}, {Sequent::of({nA})});
      Proof p = step1(Rule::k, s1, {slot_of(s1, {}, Formula::dia(A)), Slot{Path{0}, -1}}, boxed_identity(A, 1));
      Sequent s0 = Sequent::of({nA, Formula::dia(A)});
      RuleInstance in = inst(Rule::str_t, s0, {Slot{{}, -1}});
      in.delta = Sequent::of({nA});
      p = build(std::move(in), {p});
      return or_step(F, p);
    }
    case AX_B: {
      Sequent s2 = Sequent::of({}, {Sequent::of({Formula::dia(A)}, {Sequent::of({nA})})});
      Path inner = kid_with(s2, {0}, Sequent::of({nA}));
      Proof p = step1(Rule::k, s2, {slot_of(s2, {0}, Formula::dia(A)), Slot{inner, -1}}, boxed_identity(A, 2));
      Sequent s1 = Sequent::of({nA}, {Sequent::of({Formula::dia(A)})});
      RuleInstance in = inst(Rule::str_b, s1, {Slot{{}, -1}, Slot{Path{0}, -1}});
      in.delta = Sequent::of({nA});
      p = build(std::move(in), {p});
      Sequent s0 = Sequent::of({nA, Formula::box(Formula::dia(A))});
      p = step1(Rule::box, s0, {slot_of(s0, {}, Formula::box(Formula::dia(A)))}, p);
      return or_step(F, p);
    }
    case AX_4: {
      Sequent s2 = Sequent::of({Formula::dia(nA)}, {Sequent::of({A}), Sequent{}});
      Path ka = kid_with(s2, {}, Sequent::of({A}));
      Proof leaf = weaken(boxed_identity(A, 1), {}, Sequent::boxed(Sequent{}));
      Proof p = step1(Rule::k, s2, {slot_of(s2, {}, Formula::dia(nA)), Slot{ka, -1}}, leaf);
      Sequent s1 = Sequent::of({Formula::dia(nA)}, {Sequent::of({}, {Sequent::of({A})})});
      p = step1(Rule::str_4, s1, {Slot{Path{0, 0}, -1}}, p);
      Sequent sb = Sequent::of({Formula::dia(nA)}, {Sequent::of({Formula::box(A)})});
      p = step1(Rule::box, sb, {slot_of(sb, {0}, Formula::box(A))}, p);
      Sequent s0 = Sequent::of({Formula::dia(nA), Formula::box(Formula::box(A))});
      p = step1(Rule::box, s0, {slot_of(s0, {}, Formula::box(Formula::box(A)))}, p);
      return or_step(F, p);
    }
    case AX_5: {
      Sequent s2 = Sequent::of({}, {Sequent::of({Formula::dia(A)}, {Sequent::of({nA})})});
      Path inner = kid_with(s2, {0}, Sequent::of({nA}));
      Proof p = step1(Rule::k, s2, {slot_of(s2, {0}, Formula::dia(A)), Slot{inner, -1}}, boxed_identity(A, 2));
      Sequent s1 = Sequent::of({}, {Sequent::of({nA}), Sequent::of({Formula::dia(A)})});
      Path d = kid_with(s1, {}, Sequent::of({nA}));
      Path t = kid_with(s1, {}, Sequent::of({Formula::dia(A)}));
      p = step1(Rule::str_5, s1, {Slot{d, -1}, Slot{t, -1}}, p);
      Sequent sb = Sequent::of({Formula::box(nA)}, {Sequent::of({Formula::dia(A)})});
      p = step1(Rule::box, sb, {slot_of(sb, {}, Formula::box(nA))}, p);
      Sequent s0 = Sequent::of({Formula::box(nA), Formula::box(Formula::dia(A))});
      p = step1(Rule::box, s0, {slot_of(s0, {}, Formula::box(Formula::dia(A)))}, p);
      return or_step(F, p);
    }
  }
  throw TransformError("unknown axiom");
}

Proof axiom_k_proof(Formula A, Formula B) {
  const Formula nA = negate(A), nB = negate(B);
  const Formula D = Formula::dia(Formula::mk_and(nA, nB));
  // [~A, A] and [~B, A, B] under the remaining diamond.
  Sequent sa = Sequent::of({Formula::dia(B)}, {Sequent::of({nA, A})});
  Proof pa = weaken(boxed_identity(A, 1), {}, Sequent::of({Formula::dia(B)}));
  Sequent sb = Sequent::of({Formula::dia(B)}, {Sequent::of({nB, A})});
  Proof pb = step1(Rule::k, sb, {slot_of(sb, {}, Formula::dia(B)), Slot{Path{0}, -1}},
                   weaken(boxed_identity(B, 1), {0}, Sequent::of({A})));
  Sequent sand = Sequent::of({Formula::dia(B)}, {Sequent::of({Formula::mk_and(nA, nB), A})});
  Proof p = build(inst(Rule::and_, sand, {slot_of(sand, {0}, Formula::mk_and(nA, nB))}), {pa, pb});
  Sequent sk = Sequent::of({D, Formula::dia(B)}, {Sequent::of({A})});
  p = step1(Rule::k, sk, {slot_of(sk, {}, D), Slot{Path{0}, -1}}, p);
  Sequent s2 = Sequent::of({D, Formula::box(A), Formula::dia(B)});
  p = step1(Rule::box, s2, {slot_of(s2, {}, Formula::box(A))}, p);
  Formula rhs = Formula::mk_or(Formula::box(A), Formula::dia(B));
  Sequent s1 = Sequent::of({D, rhs});
  p = step1(Rule::or_, s1, {slot_of(s1, {}, rhs)}, p);
  return or_step(axiom_k_formula(A, B), p);
}

// Propositional decomposition at the root; complementary non-atomic pairs
// are closed by identity proofs.
Proof tautology_proof(const Sequent& s) {
  for (std::size_t i = 0; i < s.fs.size(); ++i) {
    Formula f = s.fs[i];
    if (f.op() == Op::Or) {
      Sequent p = s;
      p.erase_formula(i);
      p.add(f.left());
      p.add(f.right());
      p.normalize();
      return build(inst(Rule::or_, s, {Slot{{}, static_cast<int>(i)}}), {tautology_proof(p)});
    }
  }
  for (std::size_t i = 0; i < s.fs.size(); ++i) {
    Formula f = s.fs[i];
    if (f.op() == Op::And) {
      std::vector<Proof> subs;
      for (Formula part : {f.left(), f.right()}) {
        Sequent p = s;
        p.erase_formula(i);
        p.add(part);
        p.normalize();
        subs.push_back(tautology_proof(p));
      }
      return build(inst(Rule::and_, s, {Slot{{}, static_cast<int>(i)}}), std::move(subs));
    }
  }
  if (auto ax = axiom_instance(s)) return build(*ax, {});
  for (std::size_t i = 0; i < s.fs.size(); ++i) {
    int j = find_formula(s, negate(s.fs[i]));
    if (j < 0) continue;
    Sequent rest = s;
    Formula f = s.fs[i];
    rest.erase_formula(std::max(i, static_cast<std::size_t>(j)));
    rest.erase_formula(std::min(i, static_cast<std::size_t>(j)));
    Proof id = identity_proof(f);
    return rest.empty() ? id : weaken(id, {}, rest);
  }
  throw TransformError("tautology leaf not provable propositionally: " + print(s));
}

}  // namespace

Proof identity_proof(Formula a) {
  const Formula na = negate(a);
  const Sequent s = Sequent::of({a, na});
  switch (a.op()) {
    case Op::Atom: return build(inst(Rule::axiom, s, {slot_of(s, {}, a), slot_of(s, {}, na)}), {});
    case Op::And:
    case Op::Or: {
      const Formula conj = a.op() == Op::And ? a : na;
      const Formula disj = a.op() == Op::And ? na : a;
      Sequent s1 = Sequent::of({conj, disj.left(), disj.right()});
      std::vector<Proof> subs;
      for (Formula part : {conj.left(), conj.right()}) {
        Sequent rest = Sequent::of({negate(part) == disj.left() ? disj.right() : disj.left()});
        subs.push_back(weaken(identity_proof(part), {}, rest));
      }
      Proof p = build(inst(Rule::and_, s1, {slot_of(s1, {}, conj)}), std::move(subs));
      return step1(Rule::or_, s, {slot_of(s, {}, disj)}, p);
    }
    case Op::Box:
    case Op::Dia: {
      const Formula bx = a.op() == Op::Box ? a : na;
      const Formula dm = a.op() == Op::Box ? na : a;
      Sequent s1 = Sequent::of({dm}, {Sequent::of({bx.body()})});
      Proof p = step1(Rule::k, s1, {slot_of(s1, {}, dm), Slot{Path{0}, -1}}, necessitate(identity_proof(bx.body())));
      return step1(Rule::box, s, {slot_of(s, {}, bx)}, p);
    }
  }
  throw TransformError("unknown connective");
}

Formula hilbert_formula(const std::vector<HilbertStep>& steps, std::size_t i) {
  if (i >= steps.size()) throw TransformError("Hilbert step index out of range");
  const HilbertStep& st = steps[i];
  auto earlier = [&](int j) {
    if (j < 0 || static_cast<std::size_t>(j) >= i) throw TransformError("Hilbert step refers to a later step");
    return hilbert_formula(steps, static_cast<std::size_t>(j));
  };
  switch (st.kind) {
    case HilbertStep::Tautology: return st.a;
    case HilbertStep::AxiomK: return axiom_k_formula(st.a, st.b);
    case HilbertStep::AxiomInstance: return axiom_formula(st.axiom, st.a);
    case HilbertStep::ModusPonens: {
      Formula A = earlier(st.from1), I = earlier(st.from2);
      if (I.op() != Op::Or || I.left() != negate(A))
        throw TransformError("modus ponens: step " + std::to_string(st.from2) + " is not an implication from step " +
                             std::to_string(st.from1));
      return I.right();
    }
    case HilbertStep::Necessitation: return Formula::box(earlier(st.from1));
  }
  throw TransformError("unknown Hilbert step");
}

std::vector<HilbertStep> hilbert_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw TransformError("Hilbert proof must be a JSON array");
  std::vector<HilbertStep> out;
  try {
    for (const auto& e : j) {
      HilbertStep st;
      if (e.contains("tau")) {
        st.kind = HilbertStep::Tautology;
        st.a = parse(e.at("tau").get<std::string>());
      } else if (e.contains("axK")) {
        st.kind = HilbertStep::AxiomK;
        st.a = parse(e.at("axK").at(0).get<std::string>());
        st.b = parse(e.at("axK").at(1).get<std::string>());
      } else if (e.contains("ax")) {
        st.kind = HilbertStep::AxiomInstance;
        AxSet x = axset_from_string(e.at("ax").at("name").get<std::string>());
        if (x != AX_D && x != AX_T && x != AX_B && x != AX_4 && x != AX_5)
          throw TransformError("axiom name must be one of d, t, b, 4, 5");
        st.axiom = static_cast<Axiom>(x);
        st.a = parse(e.at("ax").at("A").get<std::string>());
      } else if (e.contains("mp")) {
        st.kind = HilbertStep::ModusPonens;
        st.from1 = e.at("mp").at(0).get<int>();
        st.from2 = e.at("mp").at(1).get<int>();
      } else if (e.contains("nec")) {
        st.kind = HilbertStep::Necessitation;
        st.from1 = e.at("nec").get<int>();
      } else {
        throw TransformError("unknown Hilbert step " + e.dump());
      }
      out.push_back(st);
    }
  } catch (const nlohmann::json::exception& e) {
    throw TransformError(std::string("malformed Hilbert step: ") + e.what());
  }
  for (std::size_t i = 0; i < out.size(); ++i) hilbert_formula(out, i);
  return out;
}

nlohmann::json hilbert_to_json(const std::vector<HilbertStep>& steps) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& st : steps) {
    switch (st.kind) {
      case HilbertStep::Tautology: j.push_back({{"tau", print(st.a)}}); break;
      case HilbertStep::AxiomK: j.push_back({{"axK", {print(st.a), print(st.b)}}}); break;
      case HilbertStep::AxiomInstance:
        j.push_back({{"ax", {{"name", axset_to_string(st.axiom)}, {"A", print(st.a)}}}});
        break;
      case HilbertStep::ModusPonens: j.push_back({{"mp", {st.from1, st.from2}}}); break;
      case HilbertStep::Necessitation: j.push_back({{"nec", st.from1}}); break;
    }
  }
  return j;
}

Proof hilbert_to_nested(const std::vector<HilbertStep>& steps, AxSet X) {
  if (steps.empty()) throw TransformError("empty Hilbert proof");
  std::vector<Proof> proofs;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const HilbertStep& st = steps[i];
    const Formula F = hilbert_formula(steps, i);
    switch (st.kind) {
      case HilbertStep::Tautology: proofs.push_back(tautology_proof(Sequent::of({F}))); break;
      case HilbertStep::AxiomK: proofs.push_back(axiom_k_proof(st.a, st.b)); break;
      case HilbertStep::AxiomInstance:
        if (!has(X, st.axiom)) throw TransformError("axiom " + axset_to_string(st.axiom) + " is not in X");
        proofs.push_back(axiom_template(st.axiom, st.a));
        break;
      case HilbertStep::ModusPonens: {
        const Formula A = hilbert_formula(steps, static_cast<std::size_t>(st.from1));
        const Proof& PA = proofs[static_cast<std::size_t>(st.from1)];
        const Proof& PI = proofs[static_cast<std::size_t>(st.from2)];
        Sequent si = PI->concl();
        Proof right = invert(PI, Rule::or_, slot_of(si, {}, implies(A, F)));
        Proof left = weaken(PA, {}, Sequent::of({F}));
        RuleInstance in = inst(Rule::cut, Sequent::of({F}), {Slot{{}, -1}});
        in.cutf = A;
        proofs.push_back(build(std::move(in), {left, right}));
        break;
      }
      case HilbertStep::Necessitation: {
        const Proof& P = proofs[static_cast<std::size_t>(st.from1)];
        Proof n = build(inst(Rule::nec, Sequent::boxed(P->concl()), {}), {P});
        Sequent s = Sequent::of({F});
        proofs.push_back(step1(Rule::box, s, {slot_of(s, {}, F)}, n));
        break;
      }
    }
  }
  return proofs.back();
}

}  // namespace cube
