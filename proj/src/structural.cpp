#include "edit_internal.hpp"

namespace cube {

Proof structural_to_logical(const Proof& p, AxSet X) {
  std::vector<Proof> subs;
  for (const auto& s : p->subs) subs.push_back(structural_to_logical(s, X));
  const RuleInstance& st = p->step;
  RuleInstance in = st;
  in.prems.clear();
  switch (st.rule) {
    case Rule::k:
    case Rule::dia_k:
    case Rule::dia_d:
    case Rule::dia_t:
    case Rule::dia_b:
    case Rule::dia_4:
    case Rule::dia_5:
    case Rule::dia_5_1:
    case Rule::dia_5_2:
    case Rule::dia_5_3: {
      if (st.rule == Rule::k) in.rule = Rule::dia_k;
      Proof q = make_proof(in, {subs[0]});
      return dia_vs_diac(q, DiaDirection::ToContracting);
    }
    case Rule::ctr:
    case Rule::fctr: {
      Sequent dup = st.delta;
      if (st.rule == Rule::fctr) dup = Sequent::of({resolve(st.concl, st.act[0].node).fs[static_cast<std::size_t>(st.act[0].index)]});
      return contract(subs[0], st.act[0].node, dup);
    }
    case Rule::wk: {
      detail::Ctx ctx;
      RuleInstance t = st;
      t.prems.clear();
      detail::relabel(t.concl, ctx);
      std::uint64_t node = resolve(t.concl, st.act[0].node).tag;
      tag_instance_params(t);
      Sequent prem = premises_of(t)[0];
      return weaken(subs[0], *detail::node_path(prem, node), st.delta);
    }
    case Rule::nec:
      return necessitate(subs[0]);
    case Rule::str_d:
    case Rule::str_t:
    case Rule::str_b:
    case Rule::str_4:
    case Rule::str_5:
    case Rule::ystr:
      return detail::admit_step(st, subs[0], X);
    default:
      return detail::build(std::move(in), std::move(subs));
  }
}

}  // namespace cube

namespace cube {
namespace detail {
namespace {

std::vector<std::uint64_t> ancestors(const Sequent& s, std::uint64_t h) {
  Path p = must_path(s, h);
  std::vector<std::uint64_t> out;
  const Sequent* cur = &s;
  out.push_back(cur->tag);
  for (auto i : p) {
    cur = &cur->kids[i];
    out.push_back(cur->tag);
  }
  return out;
}

// Counts marked occurrences; false if one sits outside the node h.
bool count_marked(const Ctx& ctx, const Sequent& s, std::uint32_t op, std::uint64_t h, int& count) {
  bool ok = true;
  count = 0;
  std::function<void(const Sequent&)> rec = [&](const Sequent& n) {
    for (std::size_t i = 0; i < n.fs.size(); ++i) {
      if (!ctx.marked(n.ftag(i), op)) continue;
      ++count;
      if (n.tag != h) ok = false;
    }
    for (const auto& k : n.kids) rec(k);
  };
  rec(s);
  return ok;
}

Sequent remove_marked(const Ctx& ctx, Sequent s, std::uint32_t op) {
  std::function<void(Sequent&)> rec = [&](Sequent& n) {
    for (std::size_t i = n.fs.size(); i-- > 0;)
      if (ctx.marked(n.ftag(i), op)) n.erase_formula(i);
    for (auto& k : n.kids) rec(k);
  };
  rec(s);
  s.normalize();
  return s;
}

Sequent plain(Sequent s) {
  clear_tags(s);
  return s;
}

Sequent with_at(Ctx& ctx, const Sequent& C, std::uint64_t node, const Sequent& extra) {
  Sequent out = C;
  resolve_mut(out, must_path(out, node)).append(plain(extra));
  out.normalize();
  relabel(out, ctx);
  return out;
}

Proof ctr_step(const Sequent& C, std::uint64_t node, const Sequent& delta, Proof sub) {
  RuleInstance in = inst(Rule::ctr, C, {Slot{must_path(C, node), -1}});
  in.delta = plain(delta);
  return build(std::move(in), {std::move(sub)});
}

struct Side {
  Proof P;
  Sequent T;
  std::uint32_t op = 0;
  int mult = 1;
};

struct Move {
  bool ok = false;          // passive and leaves the cut copies in place
  bool principal = false;
  bool invertible = false;  // and, or, box on a context formula
};

class SElim {
 public:
  Ctx ctx;
  AxSet X = 0;
  ElimTrace* trace = nullptr;
  std::size_t budget = 5'000'000;
  std::size_t calls = 0;

  Proof elim(const Proof& p);
  Proof reduce(const Sequent& C, Formula A, std::uint64_t h, int m, int n, const Proof& L, const Proof& R);

 private:
  Move classify(const Side& s, std::uint64_t h);
  Proof permute(const Sequent& C, Formula A, std::uint64_t h, Side& s, Side& o, bool s_left);
  Proof principal(const Sequent& C, Formula A, std::uint64_t h, const Side& l, const Side& r);
  Proof contract_copies(const Sequent& C, std::uint64_t h, Formula f, int k, Proof p);
  Proof call(bool s_left, const Sequent& C, Formula A, std::uint64_t h, int ms, int mo, const Proof& S,
             const Proof& O) {
    return s_left ? reduce(C, A, h, ms, mo, S, O) : reduce(C, A, h, mo, ms, O, S);
  }
};

Proof SElim::elim(const Proof& p) {
  if (is_cut_free(p)) return p;
  std::vector<Proof> subs;
  for (const auto& s : p->subs) subs.push_back(elim(s));
  if (p->step.rule == Rule::cut) {
    Sequent C = tagged_concl(p, ctx);
    std::uint64_t h = resolve(C, p->step.act[0].node).tag;
    if (trace) trace->push_back(ElimSnapshot{"reduce cut on " + print(p->step.cutf), p->size, max_cut_rank(p)});
    return elim(reduce(C, p->step.cutf, h, 1, 1, subs[0], subs[1]));
  }
  RuleInstance in = p->step;
  in.prems.clear();
  return build(std::move(in), std::move(subs));
}

// C, f^k at h  from  C, f^(k+1) ... by k contractions against the copy in C.
Proof SElim::contract_copies(const Sequent& C, std::uint64_t h, Formula f, int k, Proof p) {
  for (int i = k; i >= 1; --i) {
    Sequent Ci = C;
    for (int j = 0; j < i - 1; ++j) resolve_mut(Ci, must_path(Ci, h)).add(f);
    Ci.normalize();
    relabel(Ci, ctx);
    p = ctr_step(Ci, h, Sequent::of({f}), p);
  }
  return p;
}

Move SElim::classify(const Side& s, std::uint64_t h) {
  Move mv;
  RuleInstance a = s.P->step;
  a.concl = s.T;
  a.prems.clear();
  if (!tag_instance_params(a)) throw TransformError("parameter of " + rule_name(a.rule) + " does not fit");
  std::uint64_t pid = principal_id(a, s.T);
  switch (a.rule) {
    case Rule::and_:
    case Rule::or_:
    case Rule::box:
    case Rule::k:
      if (pid != 0 && ctx.marked(pid, s.op)) {
        mv.principal = true;
        return mv;
      }
      mv.ok = true;
      mv.invertible = a.rule != Rule::k;
      return mv;
    case Rule::ctr:
    case Rule::str_d:
    case Rule::str_t:
    case Rule::str_b:
    case Rule::str_4:
    case Rule::str_5:
    case Rule::ystr: {
      Sequent prem = premises_of(a)[0];
      relabel(prem, ctx);
      int cnt = 0;
      if (!count_marked(ctx, prem, s.op, h, cnt)) return mv;
      if (!node_path(prem, h) || ancestors(prem, h) != ancestors(s.T, h)) return mv;
      if (a.rule != Rule::ctr && cnt != s.mult) return mv;
      mv.ok = true;
      return mv;
    }
    default:
      throw TransformError("structural cut elimination does not handle " + rule_name(a.rule));
  }
}

Proof SElim::permute(const Sequent& C, Formula A, std::uint64_t h, Side& s, Side& o, bool s_left) {
  RuleInstance a = s.P->step;
  a.concl = s.T;
  a.prems.clear();
  tag_instance_params(a);
  auto prems = premises_of(a);
  for (auto& pr : prems) relabel(pr, ctx);
  const Rule r = a.rule;

  if (r == Rule::and_ || r == Rule::or_ || r == Rule::box) {
    std::uint64_t g = principal_id(a, s.T);
    RuleInstance b = a;
    b.concl = C;
    b.act = {occ_slot(C, g)};
    std::vector<Proof> subs;
    for (std::size_t i = 0; i < prems.size(); ++i) {
      Proof Oi = invert_t(ctx, o.P, o.T, g, static_cast<int>(i)).p;
      subs.push_back(call(s_left, remove_marked(ctx, prems[i], s.op), A, h, s.mult, o.mult, s.P->subs[i], Oi));
    }
    return build(std::move(b), std::move(subs));
  }

  auto tag_of = [&](const Slot& sl) { return resolve(s.T, sl.node).tag; };
  if (r == Rule::ctr) {
    Sequent keep;
    for (std::size_t i = 0; i < a.delta.fs.size(); ++i)
      if (!ctx.marked(a.delta.ftag(i), s.op)) keep.add(a.delta.fs[i]);
    keep.kids = a.delta.kids;
    int cnt = 0;
    count_marked(ctx, prems[0], s.op, h, cnt);
    if (keep.empty()) return call(s_left, C, A, h, cnt, o.mult, s.P->subs[0], o.P);
    std::uint64_t y = tag_of(a.act[0]);
    Sequent G = with_at(ctx, C, y, keep);
    Proof Ow = weaken_t(ctx, o.P, o.T, y, keep).p;
    return ctr_step(C, y, keep, call(s_left, G, A, h, cnt, o.mult, s.P->subs[0], Ow));
  }

  // Non-invertible step: contract what it consumes, apply it to the copy.
  std::uint64_t rem_node = 0, add_node = 0;
  Sequent removed, added;
  switch (r) {
    case Rule::k: {
      Formula D = resolve(s.T, a.act[0].node).fs[static_cast<std::size_t>(a.act[0].index)];
      rem_node = tag_of(a.act[0]);
      removed = Sequent::of({D});
      add_node = tag_of(a.act[1]);
      added = Sequent::of({D.body()});
      break;
    }
    case Rule::str_d:
      add_node = tag_of(a.act[0]);
      added = Sequent::boxed(Sequent{});
      break;
    case Rule::str_t:
      rem_node = add_node = tag_of(a.act[0]);
      removed = plain(a.delta);
      added = Sequent::boxed(removed);
      break;
    case Rule::str_b:
      rem_node = tag_of(a.act[0]);
      removed = plain(a.delta);
      add_node = tag_of(a.act[1]);
      added = Sequent::boxed(removed);
      break;
    default: {
      const Path& d = a.act[0].node;
      rem_node = resolve(s.T, parent_path(d)).tag;
      removed = Sequent::boxed(plain(resolve(s.T, d)));
      Path dest = r == Rule::str_4 ? Path(d.begin(), d.end() - 2) : a.act[1].node;
      add_node = resolve(s.T, dest).tag;
      added = removed;
    }
  }
  Sequent C1 = removed.empty() ? C : with_at(ctx, C, rem_node, removed);
  RuleInstance b = a;
  b.concl = C1;
  b.delta = plain(a.delta);
  for (auto& sl : b.act) {
    if (sl.index >= 0) {
      sl = occ_slot(C1, resolve(s.T, sl.node).ftag(static_cast<std::size_t>(sl.index)));
    } else {
      sl = Slot{must_path(C1, resolve(s.T, sl.node).tag), -1};
    }
  }
  Sequent G;
  try {
    G = premises_of(b)[0];
  } catch (const MalformedInstance& e) {
    throw TransformError(std::string("structural cut elimination: ") + e.what());
  }
  relabel(G, ctx);
  Proof Sw = removed.empty() ? s.P->subs[0] : weaken_t(ctx, s.P->subs[0], prems[0], rem_node, removed).p;
  Proof Ow = weaken_t(ctx, o.P, o.T, add_node, added).p;
  Proof inner = call(s_left, G, A, h, s.mult, o.mult, Sw, Ow);
  Proof q = build(std::move(b), {std::move(inner)});
  return removed.empty() ? q : ctr_step(C, rem_node, removed, q);
}

Proof SElim::principal(const Sequent& C, Formula A, std::uint64_t h, const Side& l, const Side& r) {
  const int m = l.mult, n = r.mult;
  RuleInstance la = l.P->step;
  la.concl = l.T;
  la.prems.clear();
  auto lp = premises_of(la);
  for (auto& pr : lp) relabel(pr, ctx);
  RuleInstance ra = r.P->step;
  ra.concl = r.T;
  ra.prems.clear();
  auto rp = premises_of(ra);
  for (auto& pr : rp) relabel(pr, ctx);

  if (A.op() == Op::And) {
    if (la.rule != Rule::and_ || ra.rule != Rule::or_) throw TransformError("unexpected principal rules at a cut");
    const Formula B = A.left(), Cf = A.right();
    Proof Li[2];
    Sequent Ci[2];
    for (int i = 0; i < 2; ++i) {
      Formula Bi = i == 0 ? B : Cf;
      Ci[i] = with_at(ctx, C, h, Sequent::of({Bi}));
      const Proof& sub = l.P->subs[static_cast<std::size_t>(i)];
      Li[i] = m > 1 ? reduce(Ci[i], A, h, m - 1, n, sub, weaken_t(ctx, r.P, r.T, h, Sequent::of({Bi})).p) : sub;
    }
    Sequent negs = Sequent::of({negate(B), negate(Cf)});
    Proof Rr = n > 1 ? reduce(with_at(ctx, C, h, negs), A, h, m, n - 1, weaken_t(ctx, l.P, l.T, h, negs).p,
                              r.P->subs[0])
                     : r.P->subs[0];
    Sequent mid = with_at(ctx, C, h, Sequent::of({negate(B)}));
    Proof L1w = weaken(Li[1], must_path(Ci[1], h), Sequent::of({negate(B)}));
    return make_cut(C, h, B, Li[0], make_cut(mid, h, Cf, L1w, Rr));
  }
  if (A.op() != Op::Box || la.rule != Rule::box || ra.rule != Rule::k)
    throw TransformError("unexpected principal rules at a cut");
  const Formula F = A.body();
  Sequent Ck = remove_marked(ctx, lp[0], l.op);
  std::uint64_t kbox = 0;
  for (const auto& kd : resolve(Ck, must_path(Ck, h)).kids)
    if (!node_path(C, kd.tag)) kbox = kd.tag;
  Proof Lx = m > 1 ? reduce(Ck, A, h, m - 1, n, l.P->subs[0],
                            weaken_t(ctx, r.P, r.T, h, Sequent::boxed(Sequent::of({F}))).p)
                   : l.P->subs[0];
  const std::uint64_t c = resolve(r.T, ra.act[1].node).tag;
  const Sequent Dc = plain(resolve(C, must_path(C, c)));
  Proof W = weaken(Lx, must_path(Ck, kbox), Dc);
  Sequent Cr = remove_marked(ctx, rp[0], r.op);
  Proof Rr = n > 1 ? reduce(Cr, A, h, m, n - 1, weaken_t(ctx, l.P, l.T, c, Sequent::of({negate(F)})).p, r.P->subs[0])
                   : r.P->subs[0];
  Proof R1 = weaken(Rr, must_path(Cr, h), Sequent::boxed(Dc));
  Sequent G = with_at(ctx, C, h, Sequent::boxed(Dc));
  return ctr_step(C, h, Sequent::boxed(Dc), make_cut(G, c, F, W, R1));
}

Proof SElim::reduce(const Sequent& C, Formula A, std::uint64_t h, int m, int n, const Proof& L, const Proof& R) {
  if (++calls > budget) throw TransformError("structural cut elimination exceeded its step budget");
  if (A.op() == Op::Or || A.op() == Op::Dia) return reduce(C, negate(A), h, n, m, R, L);
  Side l{L, C, ctx.new_op(), m}, r{R, C, ctx.new_op(), n};
  Path hp = must_path(C, h);
  for (int i = 0; i < m; ++i) {
    std::uint64_t id = ctx.fresh();
    ctx.mark(id, l.op);
    resolve_mut(l.T, hp).add(A, id);
  }
  for (int i = 0; i < n; ++i) {
    std::uint64_t id = ctx.fresh();
    ctx.mark(id, r.op);
    resolve_mut(r.T, hp).add(negate(A), id);
  }
  l.T.normalize();
  r.T.normalize();
  if (L->concl() != l.T || R->concl() != r.T) throw TransformError("cut premises do not match the cut");
  auto axiom_uses = [&](const Side& s) {
    const RuleInstance& st = s.P->step;
    for (int i = 0; i < 2; ++i) {
      const Slot& sl = st.act[static_cast<std::size_t>(i)];
      if (ctx.marked(resolve(s.T, sl.node).ftag(static_cast<std::size_t>(sl.index)), s.op)) return true;
    }
    return false;
  };
  if (L->step.rule == Rule::axiom || R->step.rule == Rule::axiom) {
    if (L->step.rule == Rule::axiom && axiom_uses(l)) return contract_copies(C, h, negate(A), n, R);
    if (R->step.rule == Rule::axiom && axiom_uses(r)) return contract_copies(C, h, A, m, L);
    auto ax = axiom_instance(C);
    if (!ax) throw TransformError("axiom lost in cut reduction");
    return build(*ax, {});
  }
  Move ml = classify(l, h);
  if (ml.ok) return permute(C, A, h, l, r, true);
  Move mr = classify(r, h);
  if (mr.ok) return permute(C, A, h, r, l, false);
  if (ml.principal && mr.principal) return principal(C, A, h, l, r);
  throw TransformError("structural cut elimination: no reduction for a cut on " + print(A) + " between " +
                       rule_name(L->step.rule) + " and " + rule_name(R->step.rule) +
                       " steps that relocate the cut formula");
}

}  // namespace
}  // namespace detail
}  // namespace cube

namespace cube {

namespace {

Proof drop_wk_nec(const Proof& p) {
  std::vector<Proof> subs;
  for (const auto& s : p->subs) subs.push_back(drop_wk_nec(s));
  const RuleInstance& st = p->step;
  if (st.rule == Rule::nec) return necessitate(subs[0]);
  if (st.rule == Rule::wk) {
    detail::Ctx ctx;
    RuleInstance t = st;
    t.prems.clear();
    detail::relabel(t.concl, ctx);
    std::uint64_t node = resolve(t.concl, st.act[0].node).tag;
    tag_instance_params(t);
    Sequent prem = premises_of(t)[0];
    return weaken(subs[0], *detail::node_path(prem, node), st.delta);
  }
  RuleInstance in = st;
  in.prems.clear();
  return detail::build(std::move(in), std::move(subs));
}

}  // namespace

Proof eliminate_cuts_structural(const Proof& p, AxSet X, ElimTrace* trace) {
  Proof q = drop_wk_nec(p);
  if (trace) trace->push_back(ElimSnapshot{"input", q->size, max_cut_rank(q)});
  detail::SElim el;
  el.X = X;
  el.trace = trace;
  q = el.elim(q);
  if (trace) trace->push_back(ElimSnapshot{"cut-free", q->size, 0});
  return q;
}

}  // namespace cube

namespace cube {

Proof logical_to_structural(const Proof& p, AxSet X) {
  std::vector<Proof> subs;
  for (const auto& s : p->subs) subs.push_back(logical_to_structural(s, X));
  const RuleInstance& st = p->step;
  if (st.circ) throw TransformError("logical_to_structural expects base rules");
  switch (st.rule) {
    case Rule::axiom:
    case Rule::and_:
    case Rule::or_:
    case Rule::box:
    case Rule::cut: {
      RuleInstance in = st;
      in.prems.clear();
      return detail::build(std::move(in), std::move(subs));
    }
    case Rule::dia_k_c:
    case Rule::dia_d_c: {
      if (st.rule == Rule::dia_d_c && !has(X, AX_D)) throw TransformError("dia_d_c needs d in X");
      const Slot& a = st.act[0];
      const Formula D = resolve(st.concl, a.node).fs[static_cast<std::size_t>(a.index)];
      Sequent dup = graft(st.concl, a.node, Sequent::of({D}));
      Proof q;
      Slot dslot{a.node, find_formula(resolve(dup, a.node), D)};
      if (st.rule == Rule::dia_k_c) {
        RuleInstance k = inst(Rule::k, dup, {dslot, Slot{st.act[1].node, -1}});
        q = detail::build(std::move(k), {subs[0]});
      } else {
        Sequent with_box = graft(dup, a.node, Sequent::boxed(Sequent{}));
        Path empty_kid;
        const Sequent& n = resolve(with_box, a.node);
        for (std::uint32_t i = 0; i < n.kids.size(); ++i)
          if (n.kids[i].empty()) empty_kid = child_path(a.node, i);
        Slot ds{a.node, find_formula(n, D)};
        Proof kq = detail::build(inst(Rule::k, with_box, {ds, Slot{empty_kid, -1}}), {subs[0]});
        q = detail::build(inst(Rule::str_d, dup, {Slot{a.node, -1}}), {kq});
      }
      RuleInstance c = inst(Rule::ctr, st.concl, {Slot{a.node, -1}});
      c.delta = Sequent::of({D});
      return detail::build(std::move(c), {q});
    }
    default:
      throw TransformError("no local translation of " + rule_name(st.rule) + " into the structural system");
  }
}

}  // namespace cube
