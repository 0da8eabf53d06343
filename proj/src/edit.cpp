#include <algorithm>

#include "edit_internal.hpp"

namespace cube {
namespace detail {

// ---- ids and marks

void Ctx::mark(std::uint64_t id, std::uint32_t op) {
  auto& v = marks_[id];
  if (std::find(v.begin(), v.end(), op) == v.end()) v.push_back(op);
}

void Ctx::unmark(std::uint64_t id, std::uint32_t op) {
  auto it = marks_.find(id);
  if (it == marks_.end()) return;
  auto& v = it->second;
  v.erase(std::remove(v.begin(), v.end(), op), v.end());
}

bool Ctx::marked(std::uint64_t id, std::uint32_t op) const {
  if (id == 0) return false;
  auto it = marks_.find(id);
  return it != marks_.end() && std::find(it->second.begin(), it->second.end(), op) != it->second.end();
}

void Ctx::copy_marks(std::uint64_t from, std::uint64_t to) {
  auto it = marks_.find(from);
  if (it != marks_.end()) {
    auto v = it->second;
    marks_[to] = std::move(v);
  }
}

namespace {
void relabel_rec(Sequent& s, Ctx& ctx, std::unordered_set<std::uint64_t>& seen) {
  auto fix = [&](std::uint64_t& t) {
    if (t == 0) {
      t = ctx.fresh();
      seen.insert(t);
    } else if (!seen.insert(t).second) {
      std::uint64_t n = ctx.fresh();
      ctx.copy_marks(t, n);
      t = n;
      seen.insert(n);
    }
  };
  fix(s.tag);
  s.ft.resize(s.fs.size(), 0);
  for (auto& t : s.ft) fix(t);
  for (auto& k : s.kids) relabel_rec(k, ctx, seen);
}

bool find_node_rec(const Sequent& s, const std::function<bool(std::uint64_t)>& pred, Path& cur, Path& out) {
  if (pred(s.tag)) {
    out = cur;
    return true;
  }
  for (std::uint32_t i = 0; i < s.kids.size(); ++i) {
    cur.push_back(i);
    bool found = find_node_rec(s.kids[i], pred, cur, out);
    cur.pop_back();
    if (found) return true;
  }
  return false;
}

std::optional<Path> find_node(const Sequent& s, const std::function<bool(std::uint64_t)>& pred) {
  Path cur, out;
  if (find_node_rec(s, pred, cur, out)) return out;
  return std::nullopt;
}

void walk_nodes(Sequent& s, const std::function<void(Sequent&)>& f) {
  f(s);
  for (auto& k : s.kids) walk_nodes(k, f);
}

void walk_nodes(const Sequent& s, const std::function<void(const Sequent&)>& f) {
  f(s);
  for (const auto& k : s.kids) walk_nodes(k, f);
}

bool has_delta(Rule r) {
  return r == Rule::wk || r == Rule::ctr || r == Rule::str_t || r == Rule::str_b || r == Rule::med;
}

}  // namespace

void relabel(Sequent& s, Ctx& ctx) {
  std::unordered_set<std::uint64_t> seen;
  relabel_rec(s, ctx, seen);
}

Sequent tagged_concl(const Proof& p, Ctx& ctx) {
  Sequent c = p->concl();
  clear_tags(c);
  relabel(c, ctx);
  return c;
}

std::optional<Path> node_path(const Sequent& s, std::uint64_t id) {
  return find_node(s, [id](std::uint64_t t) { return t == id; });
}

std::optional<OccLoc> occ_loc(const Sequent& s, std::uint64_t id) {
  for (const auto& p : all_paths(s)) {
    int i = find_occ(resolve(s, p), id);
    if (i >= 0) return OccLoc{p, i};
  }
  return std::nullopt;
}

std::optional<Slot> map_slot(const Slot& sl, const Sequent& from, const Sequent& to) {
  if (!valid_path(from, sl.node)) return std::nullopt;
  const Sequent& n = resolve(from, sl.node);
  auto p = node_path(to, n.tag);
  if (!p) return std::nullopt;
  if (sl.index < 0) return Slot{*p, -1};
  int i = find_occ(resolve(to, *p), n.ftag(static_cast<std::size_t>(sl.index)));
  if (i < 0) return std::nullopt;
  return Slot{*p, i};
}

Proof build(RuleInstance in, std::vector<Proof> subs) {
  try {
    return make_proof(std::move(in), std::move(subs));
  } catch (const ProofError& e) {
    throw TransformError(std::string("rewrite produced an invalid step: ") + e.what());
  }
}

// ---- the generic pusher

TProof push(Ctx& ctx, const Proof& p, Sequent C, const EditFn& edit, const HookFn& hook) {
  relabel(C, ctx);
  if (hook) {
    if (auto r = hook(p, C)) {
      relabel(r->t, ctx);
      return std::move(*r);
    }
  }
  RuleInstance in = p->step;
  in.concl = C;
  in.prems.clear();
  if (!tag_instance_params(in)) throw TransformError("parameter of " + rule_name(in.rule) + " does not fit");
  std::vector<Sequent> olds;
  try {
    olds = premises_of(in);
  } catch (const MalformedInstance& e) {
    throw TransformError(std::string("input step is malformed: ") + e.what());
  }
  RuleInstance in2 = in;
  edit(in2.concl);
  if (has_delta(in.rule)) edit(in2.delta);
  bool mapped = true;
  for (auto& a : in2.act) {
    auto m = map_slot(a, C, in2.concl);
    if (!m) {
      mapped = false;
      break;
    }
    a = *m;
  }
  if (!mapped) {
    if (in.rule == Rule::axiom) {
      auto ax = axiom_instance(in2.concl);
      if (!ax) throw TransformError("edit destroyed an axiom");
      relabel(in2.concl, ctx);
      return TProof{build(*ax, {}), in2.concl};
    }
    throw TransformError("edit removed an active position of " + rule_name(in.rule, in.circ));
  }
  std::vector<Proof> subs;
  for (std::size_t i = 0; i < olds.size(); ++i) subs.push_back(push(ctx, p->subs[i], olds[i], edit, hook).p);
  Sequent out = in2.concl;
  Proof q = build(std::move(in2), std::move(subs));
  relabel(out, ctx);
  return TProof{q, out};
}

// ---- weakening

TProof weaken_t(Ctx& ctx, const Proof& p, Sequent C, std::uint64_t node_id, const Sequent& extra_in) {
  std::uint32_t op = ctx.new_op();
  ctx.mark(node_id, op);
  Sequent extra = extra_in;
  clear_tags(extra);
  EditFn edit = [&](Sequent& s) {
    walk_nodes(s, [&](Sequent& n) {
      if (ctx.marked(n.tag, op)) n.append(extra);
    });
    s.normalize();
  };
  return push(ctx, p, std::move(C), edit, nullptr);
}

// ---- inversion

TProof invert_t(Ctx& ctx, const Proof& p, Sequent C, std::uint64_t occ_id, int branch) {
  auto loc = occ_loc(C, occ_id);
  if (!loc) throw TransformError("inversion target not found");
  Formula F = resolve(C, loc->node).fs[static_cast<std::size_t>(loc->index)];
  Rule rule;
  switch (F.op()) {
    case Op::And: rule = Rule::and_; break;
    case Op::Or: rule = Rule::or_; break;
    case Op::Box: rule = Rule::box; break;
    default: throw TransformError("formula " + print(F) + " has no invertible rule");
  }
  std::uint32_t op = ctx.new_op();
  ctx.mark(occ_id, op);
  EditFn edit = [&ctx, op, F, branch](Sequent& s) {
    walk_nodes(s, [&](Sequent& n) {
      n.ft.resize(n.fs.size(), 0);
      for (std::size_t i = n.fs.size(); i-- > 0;) {
        if (n.fs[i] != F || !ctx.marked(n.ft[i], op)) continue;
        switch (F.op()) {
          case Op::And: n.fs[i] = branch == 0 ? F.left() : F.right(); break;
          case Op::Or:
            n.fs[i] = F.left();
            n.add(F.right());
            break;
          default: {
            n.erase_formula(i);
            Sequent k;
            k.add(F.body());
            n.add_kid(std::move(k));
          }
        }
      }
    });
    s.normalize();
  };
  HookFn hook;
  hook = [&](const Proof& q, Sequent& c) -> std::optional<TProof> {
    const RuleInstance& st = q->step;
    if (st.rule != rule || st.circ || st.act.empty()) return std::nullopt;
    const Sequent& n = resolve(c, st.act[0].node);
    if (!ctx.marked(n.ftag(static_cast<std::size_t>(st.act[0].index)), op)) return std::nullopt;
    RuleInstance in = st;
    in.concl = c;
    auto olds = premises_of(in);
    std::size_t br = rule == Rule::and_ ? static_cast<std::size_t>(branch) : 0;
    return push(ctx, q->subs[br], olds[br], edit, hook);
  };
  return push(ctx, p, std::move(C), edit, hook);
}

// ---- contraction

std::optional<std::pair<std::uint64_t, std::uint64_t>> two_occurrences(const Sequent& s, std::uint64_t node_id,
                                                                         Formula f) {
  auto p = node_path(s, node_id);
  if (!p) return std::nullopt;
  const Sequent& n = resolve(s, *p);
  std::vector<std::uint64_t> ids;
  for (std::size_t i = 0; i < n.fs.size() && ids.size() < 2; ++i)
    if (n.fs[i] == f) ids.push_back(n.ftag(i));
  if (ids.size() < 2) return std::nullopt;
  return std::make_pair(ids[0], ids[1]);
}

std::optional<std::pair<std::uint64_t, std::uint64_t>> two_kids(const Sequent& s, std::uint64_t node_id,
                                                                  const Sequent& kid) {
  auto p = node_path(s, node_id);
  if (!p) return std::nullopt;
  const Sequent& n = resolve(s, *p);
  std::vector<std::uint64_t> ids;
  for (const auto& k : n.kids)
    if (k == kid && ids.size() < 2) ids.push_back(k.tag);
  if (ids.size() < 2) return std::nullopt;
  return std::make_pair(ids[0], ids[1]);
}

TProof contract_formula_t(Ctx& ctx, const Proof& p, Sequent C, std::uint64_t id1, std::uint64_t id2) {
  std::uint32_t op1 = ctx.new_op(), op2 = ctx.new_op();
  ctx.mark(id1, op1);
  ctx.mark(id2, op2);
  EditFn edit = [&ctx, op2](Sequent& s) {
    walk_nodes(s, [&](Sequent& n) {
      n.ft.resize(n.fs.size(), 0);
      for (std::size_t i = n.fs.size(); i-- > 0;)
        if (ctx.marked(n.ft[i], op2)) n.erase_formula(i);
    });
    s.normalize();
  };
  auto occ_id = [](const Sequent& c, const Slot& a) {
    return resolve(c, a.node).ftag(static_cast<std::size_t>(a.index));
  };
  HookFn hook = [&](const Proof& q, Sequent& c) -> std::optional<TProof> {
    const RuleInstance& st = q->step;
    if (st.rule == Rule::axiom) {
      Sequent c2 = c;
      edit(c2);
      auto ax = axiom_instance(c2);
      if (!ax) throw TransformError("contraction destroyed an axiom");
      return TProof{build(*ax, {}), c2};
    }
    bool has1 = false, has2 = false;
    for (const auto& a : st.act) {
      if (a.index < 0) continue;
      has1 |= ctx.marked(occ_id(c, a), op1);
      has2 |= ctx.marked(occ_id(c, a), op2);
    }
    if (has2 && !has1) {
      std::vector<std::uint64_t> m1, m2;
      walk_nodes(static_cast<const Sequent&>(c), [&](const Sequent& n) {
        for (std::size_t i = 0; i < n.fs.size(); ++i) {
          if (ctx.marked(n.ftag(i), op1)) m1.push_back(n.ftag(i));
          if (ctx.marked(n.ftag(i), op2)) m2.push_back(n.ftag(i));
        }
      });
      for (auto t : m1) { ctx.unmark(t, op1); ctx.mark(t, op2); }
      for (auto t : m2) { ctx.unmark(t, op2); ctx.mark(t, op1); }
    }
    bool principal = (st.rule == Rule::and_ || st.rule == Rule::or_ || st.rule == Rule::box) && !st.circ &&
                     ctx.marked(occ_id(c, st.act[0]), op1);
    if (!principal) return std::nullopt;
    Formula F = resolve(c, st.act[0].node).fs[static_cast<std::size_t>(st.act[0].index)];
    std::uint64_t node = resolve(c, st.act[0].node).tag;
    std::uint64_t other = 0;
    walk_nodes(static_cast<const Sequent&>(c), [&](const Sequent& n) {
      for (std::size_t i = 0; i < n.fs.size(); ++i)
        if (other == 0 && ctx.marked(n.ftag(i), op2)) other = n.ftag(i);
    });
    if (other == 0) throw TransformError("contraction partner vanished");
    RuleInstance in = st;
    in.concl = c;
    auto olds = premises_of(in);
    RuleInstance in2 = in;
    edit(in2.concl);
    in2.act[0] = *map_slot(st.act[0], c, in2.concl);
    std::vector<Proof> subs;
    for (std::size_t br = 0; br < olds.size(); ++br) {
      TProof r = invert_t(ctx, q->subs[br], olds[br], other, static_cast<int>(br));
      auto contract_pair = [&](Formula part) {
        auto pr = two_occurrences(r.t, node, part);
        if (!pr) throw TransformError("no pair of " + print(part) + " after inversion");
        r = contract_formula_t(ctx, r.p, r.t, pr->first, pr->second);
      };
      if (F.op() == Op::And) {
        contract_pair(br == 0 ? F.left() : F.right());
      } else if (F.op() == Op::Or) {
        contract_pair(F.left());
        contract_pair(F.right());
      } else {
        Sequent kid;
        kid.add(F.body());
        auto pr = two_kids(r.t, node, kid);
        if (!pr) throw TransformError("no pair of boxes after inversion");
        r = contract_kids_t(ctx, r.p, r.t, pr->first, pr->second);
      }
      subs.push_back(r.p);
    }
    Sequent out = in2.concl;
    return TProof{build(std::move(in2), std::move(subs)), out};
  };
  return push(ctx, p, std::move(C), edit, hook);
}

namespace {

struct Mirror {
  std::unordered_map<std::uint64_t, std::uint64_t> fwd, back;  // side-2 id -> side-1 id and inverse
};

void mirror_rec(const Sequent& a, const Sequent& b, Mirror& m) {
  m.fwd[b.tag] = a.tag;
  m.back[a.tag] = b.tag;
  for (std::size_t i = 0; i < a.fs.size(); ++i) {
    m.fwd[b.ftag(i)] = a.ftag(i);
    m.back[a.ftag(i)] = b.ftag(i);
  }
  for (std::size_t i = 0; i < a.kids.size(); ++i) mirror_rec(a.kids[i], b.kids[i], m);
}

struct SideChange {
  std::vector<std::uint64_t> removed;
  std::vector<std::pair<std::uint64_t, Sequent>> added;  // node id, extra
};

SideChange side_change(const Sequent& before, const Sequent& after) {
  std::unordered_set<std::uint64_t> now;
  walk_nodes(after, [&](const Sequent& n) {
    for (std::size_t i = 0; i < n.fs.size(); ++i) now.insert(n.ftag(i));
  });
  SideChange ch;
  walk_nodes(before, [&](const Sequent& n) {
    for (std::size_t i = 0; i < n.fs.size(); ++i)
      if (!now.count(n.ftag(i))) ch.removed.push_back(n.ftag(i));
  });
  walk_nodes(after, [&](const Sequent& n) {
    if (n.tag == 0) return;
    Sequent extra;
    for (std::size_t i = 0; i < n.fs.size(); ++i)
      if (n.ftag(i) == 0) extra.add(n.fs[i]);
    for (const auto& k : n.kids)
      if (k.tag == 0) extra.kids.push_back(k);
    if (!extra.empty()) ch.added.emplace_back(n.tag, extra);
  });
  return ch;
}

bool kid_contract_supported(Rule r) {
  switch (r) {
    case Rule::axiom: case Rule::and_: case Rule::or_: case Rule::box:
    case Rule::dia_k_c: case Rule::dia_d_c: case Rule::dia_t_c: case Rule::dia_b_c:
    case Rule::dia_4_c: case Rule::dia_5_c: case Rule::str_d: case Rule::cut:
      return true;
    default:
      return false;
  }
}

}  // namespace

TProof contract_kids_t(Ctx& ctx, const Proof& p, Sequent C, std::uint64_t kid1, std::uint64_t kid2) {
  std::uint32_t op1 = ctx.new_op(), op2 = ctx.new_op();
  ctx.mark(kid1, op1);
  ctx.mark(kid2, op2);
  auto locate = [&](const Sequent& s, std::uint32_t op) {
    auto r = find_node(s, [&](std::uint64_t t) { return ctx.marked(t, op); });
    if (!r) throw TransformError("contracted box vanished");
    return *r;
  };
  std::function<TProof(const Proof&, Sequent)> ck = [&](const Proof& q, Sequent c) -> TProof {
    relabel(c, ctx);
    const RuleInstance& st = q->step;
    if (st.circ || !kid_contract_supported(st.rule))
      throw TransformError("box contraction across " + rule_name(st.rule, st.circ) + " is not supported");
    Path p1 = locate(c, op1), p2 = locate(c, op2);
    if (parent_path(p1) != parent_path(p2) || resolve(c, p1) != resolve(c, p2))
      throw TransformError("contracted boxes differ");
    Sequent c2 = c;
    resolve_mut(c2, parent_path(p2)).kids.erase(resolve_mut(c2, parent_path(p2)).kids.begin() + p2.back());
    c2.normalize();
    if (st.rule == Rule::axiom) {
      auto ax = axiom_instance(c2);
      if (!ax) throw TransformError("box contraction destroyed an axiom");
      relabel(c2, ctx);
      return TProof{build(*ax, {}), c2};
    }
    Mirror m;
    mirror_rec(resolve(c, p1), resolve(c, p2), m);
    RuleInstance in = st;
    in.concl = c;
    auto olds = premises_of(in);
    RuleInstance in2 = in;
    in2.concl = c2;
    for (auto& a : in2.act) {
      const Sequent& n = resolve(c, a.node);
      std::uint64_t nid = m.fwd.count(n.tag) ? m.fwd.at(n.tag) : n.tag;
      auto np = node_path(c2, nid);
      if (!np) throw TransformError("active node lost in box contraction");
      int idx = -1;
      if (a.index >= 0) {
        std::uint64_t oid = n.ftag(static_cast<std::size_t>(a.index));
        if (m.fwd.count(oid)) oid = m.fwd.at(oid);
        idx = find_occ(resolve(c2, *np), oid);
        if (idx < 0) throw TransformError("active occurrence lost in box contraction");
      }
      a = Slot{*np, idx};
    }
    const Sequent side1 = resolve(c, p1), side2 = resolve(c, p2);
    std::vector<Proof> subs;
    for (std::size_t i = 0; i < olds.size(); ++i) {
      TProof cur{q->subs[i], olds[i]};
      Path q1 = locate(cur.t, op1), q2 = locate(cur.t, op2);
      if (resolve(cur.t, q1) != resolve(cur.t, q2)) {
        SideChange ch1 = side_change(side1, resolve(cur.t, q1));
        SideChange ch2 = side_change(side2, resolve(cur.t, q2));
        relabel(cur.t, ctx);
        if (!ch2.removed.empty()) {
          cur = invert_t(ctx, cur.p, cur.t, m.fwd.at(ch2.removed[0]), static_cast<int>(i));
        } else if (!ch1.removed.empty()) {
          cur = invert_t(ctx, cur.p, cur.t, m.back.at(ch1.removed[0]), static_cast<int>(i));
        } else {
          for (const auto& [x, extra] : ch2.added) cur = weaken_t(ctx, cur.p, cur.t, m.fwd.at(x), extra);
          for (const auto& [x, extra] : ch1.added) cur = weaken_t(ctx, cur.p, cur.t, m.back.at(x), extra);
        }
        if (resolve(cur.t, locate(cur.t, op1)) != resolve(cur.t, locate(cur.t, op2)))
          throw TransformError("cannot equalize contracted boxes across " + rule_name(st.rule));
      }
      subs.push_back(ck(cur.p, cur.t).p);
    }
    relabel(in2.concl, ctx);
    Sequent out = in2.concl;
    return TProof{build(std::move(in2), std::move(subs)), out};
  };
  return ck(p, std::move(C));
}

}  // namespace detail

// ---- public entry points

using detail::Ctx;
using detail::TProof;

Proof weaken(const Proof& p, const Path& a, const Sequent& extra) {
  Ctx ctx;
  Sequent C = detail::tagged_concl(p, ctx);
  if (!valid_path(C, a)) throw TransformError("weakening position does not exist");
  return detail::weaken_t(ctx, p, C, resolve(C, a).tag, extra).p;
}

Proof contract(const Proof& p, const Path& a, const Sequent& dup) {
  Ctx ctx;
  TProof cur{p, detail::tagged_concl(p, ctx)};
  if (!valid_path(cur.t, a)) throw TransformError("contraction position does not exist");
  std::uint64_t node = resolve(cur.t, a).tag;
  for (Formula f : dup.fs) {
    auto pr = detail::two_occurrences(cur.t, node, f);
    if (!pr) throw TransformError("no two occurrences of " + print(f) + " to contract");
    cur = detail::contract_formula_t(ctx, cur.p, cur.t, pr->first, pr->second);
  }
  for (const auto& k : dup.kids) {
    auto pr = detail::two_kids(cur.t, node, k);
    if (!pr) throw TransformError("no two copies of [" + print(k) + "] to contract");
    cur = detail::contract_kids_t(ctx, cur.p, cur.t, pr->first, pr->second);
  }
  return cur.p;
}

Proof necessitate(const Proof& p) {
  RuleInstance in = p->step;
  in.concl = Sequent::boxed(p->concl());
  in.prems.clear();
  for (auto& a : in.act) a.node.insert(a.node.begin(), 0u);
  std::vector<Proof> subs;
  for (const auto& s : p->subs) subs.push_back(necessitate(s));
  return detail::build(std::move(in), std::move(subs));
}

Proof invert(const Proof& p, Rule rule, const std::vector<Slot>& act, int branch) {
  Ctx ctx;
  Sequent C = detail::tagged_concl(p, ctx);
  if (act.empty() || !valid_path(C, act[0].node)) throw TransformError("inversion position does not exist");
  if ((rule == Rule::and_ || rule == Rule::or_ || rule == Rule::box) && act[0].index >= 0) {
    const Sequent& n = resolve(C, act[0].node);
    if (static_cast<std::size_t>(act[0].index) >= n.fs.size()) throw TransformError("inversion slot does not exist");
    Op want = rule == Rule::and_ ? Op::And : rule == Rule::or_ ? Op::Or : Op::Box;
    if (n.fs[static_cast<std::size_t>(act[0].index)].op() != want)
      throw TransformError("inversion slot does not match " + rule_name(rule));
    return detail::invert_t(ctx, p, C, n.ftag(static_cast<std::size_t>(act[0].index)), branch).p;
  }
  RuleInstance in;
  in.rule = rule;
  in.concl = C;
  in.act = act;
  std::vector<Sequent> prems;
  try {
    prems = premises_of(in);
  } catch (const MalformedInstance& e) {
    throw TransformError(std::string("cannot invert: ") + e.what());
  }
  if (branch < 0 || static_cast<std::size_t>(branch) >= prems.size()) throw TransformError("no such premise");
  const Sequent& prem = prems[static_cast<std::size_t>(branch)];
  std::vector<std::pair<std::uint64_t, Sequent>> adds;
  std::size_t kept = 0;
  std::function<void(const Sequent&)> scan = [&](const Sequent& n) {
    if (n.tag == 0) return;
    Sequent extra;
    for (std::size_t i = 0; i < n.fs.size(); ++i) {
      if (n.ftag(i) == 0) extra.add(n.fs[i]);
      else ++kept;
    }
    for (const auto& k : n.kids) {
      if (k.tag == 0) extra.kids.push_back(k);
      else scan(k);
    }
    if (!extra.empty()) adds.emplace_back(n.tag, extra);
  };
  scan(prem);
  if (kept != C.formula_count() || prem.node_count() < C.node_count())
    throw TransformError(rule_name(rule) + " is not invertible by weakening here");
  TProof cur{p, C};
  for (const auto& [id, extra] : adds) cur = detail::weaken_t(ctx, cur.p, cur.t, id, extra);
  return cur.p;
}

Proof invert(const Proof& p, Rule rule, const Slot& slot, int branch) {
  return invert(p, rule, std::vector<Slot>{slot}, branch);
}

Proof circle_to_base(const Proof& p) {
  std::vector<Proof> subs;
  for (const auto& s : p->subs) subs.push_back(circle_to_base(s));
  RuleInstance base = p->step;
  base.circ = false;
  base.prems.clear();
  Rule r = base.rule;
  if (!p->step.circ || (r != Rule::and_ && r != Rule::or_ && r != Rule::box))
    return detail::build(std::move(base), std::move(subs));
  Ctx ctx;
  Sequent C = detail::tagged_concl(p, ctx);
  RuleInstance in = p->step;
  in.concl = C;
  auto olds = premises_of(in);
  const Sequent& nd = resolve(C, in.act[0].node);
  std::uint64_t node = nd.tag;
  std::uint64_t occ = nd.ftag(static_cast<std::size_t>(in.act[0].index));
  Formula F = nd.fs[static_cast<std::size_t>(in.act[0].index)];
  std::vector<Proof> fixed;
  for (std::size_t i = 0; i < subs.size(); ++i) {
    Sequent prem = olds[i];
    detail::relabel(prem, ctx);
    TProof cur = detail::invert_t(ctx, subs[i], prem, occ, static_cast<int>(i));
    auto contract_pair = [&](Formula part) {
      auto pr = detail::two_occurrences(cur.t, node, part);
      if (!pr) throw TransformError("circle translation lost a copy of " + print(part));
      cur = detail::contract_formula_t(ctx, cur.p, cur.t, pr->first, pr->second);
    };
    if (r == Rule::and_) {
      contract_pair(i == 0 ? F.left() : F.right());
    } else if (r == Rule::or_) {
      contract_pair(F.left());
      contract_pair(F.right());
    } else {
      Sequent kid;
      kid.add(F.body());
      auto pr = detail::two_kids(cur.t, node, kid);
      if (!pr) throw TransformError("circle translation lost a box");
      cur = detail::contract_kids_t(ctx, cur.p, cur.t, pr->first, pr->second);
    }
    fixed.push_back(cur.p);
  }
  return detail::build(std::move(base), std::move(fixed));
}

}  // namespace cube
