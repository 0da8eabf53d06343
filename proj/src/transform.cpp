#include <algorithm>

#include "edit_internal.hpp"

namespace cube {

namespace {

// Path in `to` of the node whose tag equals that of the node at p in `from`.
Path repath(const Sequent& from, const Path& p, const Sequent& to) {
  auto q = detail::node_path(to, resolve(from, p).tag);
  if (!q) throw TransformError("node lost while rewriting");
  return *q;
}

Formula formula_at_slot(const Sequent& s, const Slot& a) {
  return resolve(s, a.node).fs.at(static_cast<std::size_t>(a.index));
}

Sequent tagged(const Sequent& s) {
  Sequent t = s;
  std::uint64_t c = 1;
  assign_tags(t, c);
  return t;
}

std::optional<Rule> contracting_version(Rule r) {
  switch (r) {
    case Rule::dia_k: case Rule::k: return Rule::dia_k_c;
    case Rule::dia_d: return Rule::dia_d_c;
    case Rule::dia_t: return Rule::dia_t_c;
    case Rule::dia_b: return Rule::dia_b_c;
    case Rule::dia_4: return Rule::dia_4_c;
    case Rule::dia_5: case Rule::dia_5_1: case Rule::dia_5_2: case Rule::dia_5_3: return Rule::dia_5_c;
    default: return std::nullopt;
  }
}

std::optional<Rule> plain_version(Rule r) {
  switch (r) {
    case Rule::dia_k_c: return Rule::dia_k;
    case Rule::dia_d_c: return Rule::dia_d;
    case Rule::dia_t_c: return Rule::dia_t;
    case Rule::dia_b_c: return Rule::dia_b;
    case Rule::dia_4_c: return Rule::dia_4;
    case Rule::dia_5_c: return Rule::dia_5;
    default: return std::nullopt;
  }
}

// ◇A at slot a moved to the target node: dia_5_1 / dia_5_2 / dia_5_3 chain on
// top of sub (a proof of the dia_5 premise).
Proof dia5_chain(const Sequent& concl, const Slot& a, const Path& target, const Proof& sub) {
  Sequent C = tagged(concl);
  const Sequent& src = resolve(C, a.node);
  std::uint64_t occ = src.ftag(static_cast<std::size_t>(a.index));
  std::vector<std::uint64_t> up, down;  // node tags along the route
  std::size_t lca = 0;
  while (lca < a.node.size() && lca < target.size() && a.node[lca] == target[lca]) ++lca;
  for (std::size_t d = a.node.size(); d-- > lca;) up.push_back(resolve(C, Path(a.node.begin(), a.node.begin() + d)).tag);
  for (std::size_t d = lca + 1; d <= target.size(); ++d)
    down.push_back(resolve(C, Path(target.begin(), target.begin() + d)).tag);
  // Steps: 5_1 to each node in `up` except the last when a sibling jump follows.
  struct Step {
    Rule r;
    std::uint64_t to;
  };
  std::vector<Step> steps;
  if (down.empty()) {
    for (auto t : up) steps.push_back({Rule::dia_5_1, t});
  } else if (up.empty()) {
    for (auto t : down) steps.push_back({Rule::dia_5_3, t});
  } else {
    for (std::size_t i = 0; i + 1 < up.size(); ++i) steps.push_back({Rule::dia_5_1, up[i]});
    steps.push_back({Rule::dia_5_2, down[0]});
    for (std::size_t i = 1; i < down.size(); ++i) steps.push_back({Rule::dia_5_3, down[i]});
  }
  std::vector<RuleInstance> ins;
  Sequent cur = C;
  for (const auto& st : steps) {
    RuleInstance in;
    in.rule = st.r;
    in.concl = cur;
    auto loc = detail::occ_loc(cur, occ);
    if (!loc) throw TransformError("diamond lost in dia_5 decomposition");
    in.act.push_back(Slot{loc->node, loc->index});
    if (st.r != Rule::dia_5_1) {
      auto tp = detail::node_path(cur, st.to);
      in.act.push_back(Slot{*tp, -1});
    }
    cur = premises_of(in)[0];
    ins.push_back(in);
  }
  Proof p = sub;
  for (auto it = ins.rbegin(); it != ins.rend(); ++it) {
    clear_tags(it->concl);
    p = detail::build(*it, {p});
  }
  return p;
}

Proof rebuild(const Proof& p, std::vector<Proof> subs) {
  RuleInstance in = p->step;
  in.prems.clear();
  return detail::build(std::move(in), std::move(subs));
}

}  // namespace

Proof dia_vs_diac(const Proof& p, DiaDirection dir) {
  std::vector<Proof> subs;
  for (const auto& s : p->subs) subs.push_back(dia_vs_diac(s, dir));
  const RuleInstance& st = p->step;
  if (dir == DiaDirection::ToContracting) {
    auto rc = contracting_version(st.rule);
    if (!rc) return rebuild(p, std::move(subs));
    Sequent C = tagged(st.concl);
    RuleInstance in = st;
    in.concl = C;
    Sequent prem = premises_of(in)[0];
    Formula f = formula_at_slot(C, st.act[0]);
    Path where = repath(C, st.act[0].node, prem);
    Sequent extra;
    extra.add(f);
    Proof w = weaken(subs[0], where, extra);
    RuleInstance out;
    out.rule = *rc;
    out.concl = st.concl;
    out.act = st.act;
    if (st.rule == Rule::dia_5_1) out.act.push_back(Slot{parent_path(st.act[0].node), -1});
    return detail::build(std::move(out), {w});
  }
  auto rp = plain_version(st.rule);
  if (!rp || st.circ) return rebuild(p, std::move(subs));
  Formula f = formula_at_slot(st.concl, st.act[0]);
  if (st.rule == Rule::dia_5_c && st.act[1].node == st.act[0].node) {
    RuleInstance c = inst(Rule::ctr, st.concl, {Slot{st.act[0].node, -1}});
    c.delta.add(f);
    return detail::build(std::move(c), {subs[0]});
  }
  RuleInstance c = inst(Rule::ctr, st.concl, {Slot{st.act[0].node, -1}});
  c.delta.add(f);
  Sequent mid = tagged(st.concl);
  RuleInstance ct = c;
  ct.concl = mid;
  Sequent P = premises_of(ct)[0];
  RuleInstance d;
  d.rule = *rp;
  d.concl = P;
  Path n = repath(mid, st.act[0].node, P);
  d.act.push_back(Slot{n, find_formula(resolve(P, n), f)});
  if (st.act.size() > 1) d.act.push_back(Slot{repath(mid, st.act[1].node, P), -1});
  clear_tags(d.concl);
  Proof dp = detail::build(std::move(d), {subs[0]});
  return detail::build(std::move(c), {dp});
}

Proof decompose_dia5(const Proof& p) {
  std::vector<Proof> subs;
  for (const auto& s : p->subs) subs.push_back(decompose_dia5(s));
  const RuleInstance& st = p->step;
  if (st.rule == Rule::dia_5)
    return dia5_chain(st.concl, st.act[0], st.act[1].node, subs[0]);
  if (st.rule != Rule::dia_5_c || st.circ) return rebuild(p, std::move(subs));
  Formula f = formula_at_slot(st.concl, st.act[0]);
  RuleInstance c = inst(Rule::ctr, st.concl, {Slot{st.act[0].node, -1}});
  c.delta.add(f);
  if (st.act[1].node == st.act[0].node) return detail::build(std::move(c), {subs[0]});
  Sequent mid = tagged(st.concl);
  RuleInstance ct = c;
  ct.concl = mid;
  Sequent P = premises_of(ct)[0];
  Path n = repath(mid, st.act[0].node, P);
  Path t = repath(mid, st.act[1].node, P);
  clear_tags(P);
  Proof chain = dia5_chain(P, Slot{n, find_formula(resolve(P, n), f)}, t, subs[0]);
  return detail::build(std::move(c), {chain});
}

Proof eliminate_wk(const Proof& p) {
  std::vector<Proof> subs;
  for (const auto& s : p->subs) subs.push_back(eliminate_wk(s));
  const RuleInstance& st = p->step;
  if (st.rule != Rule::wk) return rebuild(p, std::move(subs));
  Sequent C = tagged(st.concl);
  RuleInstance in = st;
  in.concl = C;
  if (!tag_instance_params(in)) throw TransformError("wk parameter does not fit");
  Sequent prem = premises_of(in)[0];
  Path where = repath(C, st.act[0].node, prem);
  Sequent extra = st.delta;
  clear_tags(extra);
  return weaken(subs[0], where, extra);
}

}  // namespace cube
