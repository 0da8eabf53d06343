#include <algorithm>
#include <deque>
#include <functional>

#include "cubeprover/search.hpp"
#include "edit_internal.hpp"

namespace cube {
namespace detail {

Path must_path(const Sequent& s, std::uint64_t id) {
  auto p = node_path(s, id);
  if (!p) throw TransformError("rewrite lost track of a node");
  return *p;
}

Slot occ_slot(const Sequent& s, std::uint64_t id) {
  auto l = occ_loc(s, id);
  if (!l) throw TransformError("rewrite lost track of an occurrence");
  return Slot{l->node, l->index};
}

Proof make_cut(const Sequent& C, std::uint64_t node, Formula F, Proof left, Proof right) {
  RuleInstance in = inst(Rule::cut, C, {Slot{must_path(C, node), -1}});
  in.cutf = F;
  return build(std::move(in), {std::move(left), std::move(right)});
}

std::uint64_t principal_id(const RuleInstance& st, const Sequent& T) {
  if (st.act.empty() || st.act[0].index < 0) return 0;
  return resolve(T, st.act[0].node).ftag(static_cast<std::size_t>(st.act[0].index));
}

namespace {

bool is_child(const Path& c, const Path& n) { return c.size() == n.size() + 1 && is_prefix(n, c); }

// Gives the same fresh ids to two equal subtrees and maps their nodes.
void tag_pair(Ctx& ctx, Sequent& a, Sequent& b, NodeMap& phi) {
  a.tag = ctx.fresh();
  b.tag = ctx.fresh();
  phi[a.tag] = b.tag;
  a.ft.resize(a.fs.size(), 0);
  b.ft.resize(b.fs.size(), 0);
  for (std::size_t i = 0; i < a.fs.size(); ++i) {
    std::uint64_t id = ctx.fresh();
    a.ft[i] = id;
    b.ft[i] = id;
  }
  for (std::size_t i = 0; i < a.kids.size(); ++i) tag_pair(ctx, a.kids[i], b.kids[i], phi);
}

// Matches the items that are new (tag 0) in a premise on the Sp side with the
// new items of the corresponding premise on the S side.
void match_new(Ctx& ctx, Sequent& a, Sequent& b, NodeMap& phi) {
  std::function<void(Sequent&)> rec = [&](Sequent& n) {
    n.ft.resize(n.fs.size(), 0);
    bool fresh_here = std::find(n.ft.begin(), n.ft.end(), 0) != n.ft.end();
    for (const auto& k : n.kids) fresh_here |= k.tag == 0;
    if (fresh_here) {
      auto it = phi.find(n.tag);
      if (it == phi.end()) throw TransformError("surgery: rule acts inside an unmapped node");
      Sequent& m = resolve_mut(b, must_path(b, it->second));
      m.ft.resize(m.fs.size(), 0);
      for (std::size_t i = 0; i < n.fs.size(); ++i) {
        if (n.ft[i] != 0) continue;
        bool done = false;
        for (std::size_t j = 0; j < m.fs.size() && !done; ++j) {
          if (m.ft[j] == 0 && m.fs[j] == n.fs[i]) {
            n.ft[i] = m.ft[j] = ctx.fresh();
            done = true;
          }
        }
        if (!done) throw TransformError("surgery: premises diverge");
      }
      for (auto& k : n.kids) {
        if (k.tag != 0) continue;
        bool done = false;
        for (auto& k2 : m.kids) {
          if (k2.tag == 0 && k2 == k) {
            tag_pair(ctx, k, k2, phi);
            done = true;
            break;
          }
        }
        if (!done) throw TransformError("surgery: premises diverge");
      }
    }
    for (auto& k : n.kids) rec(k);
  };
  rec(a);
  std::function<void(const Sequent&)> check = [&](const Sequent& n) {
    if (n.tag == 0) throw TransformError("surgery: unmatched new box");
    for (std::size_t i = 0; i < n.fs.size(); ++i)
      if (n.ftag(i) == 0) throw TransformError("surgery: unmatched new formula");
    for (const auto& k : n.kids) check(k);
  };
  check(b);
}

// Tags the single new occurrence of f at the node with the given id.
void tag_new_at(Sequent& s, std::uint64_t node, Formula f, std::uint64_t id) {
  Sequent& n = resolve_mut(s, must_path(s, node));
  n.ft.resize(n.fs.size(), 0);
  for (std::size_t i = 0; i < n.fs.size(); ++i) {
    if (n.ft[i] == 0 && n.fs[i] == f) {
      n.ft[i] = id;
      return;
    }
  }
  throw TransformError("surgery: new occurrence not found");
}

struct Junk {
  std::uint64_t node;
  Formula f;
  std::uint64_t id;
};

struct Surgeon {
  Ctx& ctx;
  AxSet X;

  Proof run(const Proof& P, const Sequent& Sp, const Sequent& S, const NodeMap& phi);
  Proof local(const Proof& P, const Sequent& Sp, const Sequent& S, const NodeMap& phi);
  Proof diamond(const Proof& P, const Sequent& Sp, const Sequent& S, const NodeMap& phi);
};

Proof Surgeon::run(const Proof& P, const Sequent& Sp, const Sequent& S, const NodeMap& phi) {
  const RuleInstance& st = P->step;
  if (st.circ) throw TransformError("surgery expects base rules");
  switch (st.rule) {
    case Rule::axiom: {
      auto id = [&](const Slot& a) { return resolve(Sp, a.node).ftag(static_cast<std::size_t>(a.index)); };
      Slot a = occ_slot(S, id(st.act[0])), b = occ_slot(S, id(st.act[1]));
      if (a.node != b.node) throw TransformError("surgery separated an axiom");
      return build(inst(Rule::axiom, S, {a, b}), {});
    }
    case Rule::and_:
    case Rule::or_:
    case Rule::box:
    case Rule::cut:
    case Rule::str_d:
    case Rule::dia_d_c:
      return local(P, Sp, S, phi);
    case Rule::dia_k_c:
    case Rule::dia_t_c:
    case Rule::dia_b_c:
    case Rule::dia_4_c:
    case Rule::dia_5_c:
      return diamond(P, Sp, S, phi);
    default:
      throw TransformError("surgery does not handle " + rule_name(st.rule));
  }
}

Proof Surgeon::local(const Proof& P, const Sequent& Sp, const Sequent& S, const NodeMap& phi) {
  RuleInstance a = P->step;
  a.concl = Sp;
  a.prems.clear();
  RuleInstance b = a;
  b.concl = S;
  for (auto& sl : b.act) {
    const Sequent& n = resolve(Sp, sl.node);
    if (sl.index >= 0) {
      sl = occ_slot(S, n.ftag(static_cast<std::size_t>(sl.index)));
    } else {
      auto it = phi.find(n.tag);
      if (it == phi.end()) throw TransformError("surgery: rule acts on an unmapped node");
      sl = Slot{must_path(S, it->second), -1};
    }
  }
  auto pa = premises_of(a);
  auto pb = premises_of(b);
  std::vector<Proof> subs;
  for (std::size_t i = 0; i < pa.size(); ++i) {
    NodeMap phi2 = phi;
    match_new(ctx, pa[i], pb[i], phi2);
    subs.push_back(run(P->subs[i], pa[i], pb[i], phi2));
  }
  return build(std::move(b), std::move(subs));
}


Proof Surgeon::diamond(const Proof& P, const Sequent& Sp, const Sequent& S, const NodeMap& phi) {
  const RuleInstance& st = P->step;
  const Rule r = st.rule;
  const Path& up = st.act[0].node;
  const Sequent& un = resolve(Sp, up);
  const std::size_t ui = static_cast<std::size_t>(st.act[0].index);
  const std::uint64_t o = un.ftag(ui);
  const Formula D = un.fs[ui];
  const Formula A = D.body();
  const bool boxedB = r == Rule::dia_4_c || r == Rule::dia_5_c;
  const Formula B = boxedB ? D : A;
  Path tp = r == Rule::dia_t_c ? up : r == Rule::dia_b_c ? parent_path(up) : st.act[1].node;
  const std::uint64_t vt = resolve(Sp, tp).tag;

  RuleInstance a = st;
  a.concl = Sp;
  a.prems.clear();
  Sequent P0 = premises_of(a)[0];
  const std::uint64_t bid = ctx.fresh();
  tag_new_at(P0, vt, B, bid);

  auto uit = phi.find(un.tag);
  if (uit == phi.end()) throw TransformError("surgery: diamond in an unmapped node");
  const std::uint64_t U = uit->second;
  const Path Up = must_path(S, U);
  auto vit = phi.find(vt);
  const bool create = vit == phi.end();

  if (!create) {
    const std::uint64_t V = vit->second;
    const Path Vp = must_path(S, V);
    bool direct = false;
    switch (r) {
      case Rule::dia_k_c:
      case Rule::dia_4_c: direct = is_child(Vp, Up); break;
      case Rule::dia_t_c: direct = Vp == Up; break;
      case Rule::dia_b_c: direct = is_child(Up, Vp); break;
      default: direct = !Up.empty(); break;
    }
    if (direct) {
      RuleInstance b = a;
      b.concl = S;
      b.act[0] = occ_slot(S, o);
      if (b.act.size() > 1) b.act[1] = Slot{Vp, -1};
      Sequent S0 = premises_of(b)[0];
      tag_new_at(S0, V, B, bid);
      Proof q = run(P->subs[0], P0, S0, phi);
      return build(std::move(b), {q});
    }
    if (boxedB && resolve(S, Vp).count(D) > 0) {
      Sequent S0 = S;
      resolve_mut(S0, Vp).add(D, bid);
      S0.normalize();
      Proof q = run(P->subs[0], P0, S0, phi);
      return contract(q, must_path(S0, V), Sequent::of({D}));
    }
  }

  // Search for a chain of diamond steps carrying D from U to the target.
  std::uint64_t W = 0;  // parent of the node to create
  std::uint64_t V = 0;
  if (create) {
    if (!has(X, AX_D)) throw TransformError("surgery needs seriality to create a box");
    auto wit = phi.find(resolve(Sp, parent_path(tp)).tag);
    if (wit == phi.end()) throw TransformError("surgery: parent of a new box is unmapped");
    W = wit->second;
  } else {
    V = vit->second;
  }
  std::vector<Path> paths = all_paths(S);
  std::unordered_map<std::uint64_t, std::size_t> idx;
  for (std::size_t i = 0; i < paths.size(); ++i) idx[resolve(S, paths[i]).tag] = i;
  const std::size_t nU = idx.at(U);
  const std::size_t nV = create ? 0 : idx.at(V);
  const std::size_t nW = create ? idx.at(W) : 0;

  enum class Fin { None, K, T, B, Four, Five, Create };
  std::vector<int> prev(paths.size(), -1);
  std::vector<char> seen(paths.size(), 0);
  std::deque<std::size_t> queue{nU};
  seen[nU] = 1;
  auto on_path_deep = [&](std::size_t w) -> int {
    for (int x = static_cast<int>(w); x >= 0; x = prev[static_cast<std::size_t>(x)])
      if (!paths[static_cast<std::size_t>(x)].empty()) return x;
    return -1;
  };
  std::optional<std::pair<std::size_t, Fin>> goal;
  int five_src = -1;
  while (!queue.empty() && !goal) {
    std::size_t w = queue.front();
    queue.pop_front();
    const Path& wp = paths[w];
    if (create) {
      if (w == nW) {
        if (!boxedB) {
          goal = {w, Fin::Create};
        } else if (has(X, AX_4)) {
          goal = {w, Fin::Four};
        } else if (has(X, AX_5) && (five_src = on_path_deep(w)) >= 0) {
          goal = {w, Fin::Five};
        }
      }
    } else {
      const Path& vp = paths[nV];
      if (!boxedB) {
        if (is_child(vp, wp)) goal = {w, Fin::K};
        else if (has(X, AX_T) && w == nV) goal = {w, Fin::T};
        else if (has(X, AX_B) && is_child(wp, vp)) goal = {w, Fin::B};
      } else {
        if (w == nV && w != nU) goal = {w, Fin::None};
        else if (has(X, AX_4) && is_child(vp, wp)) goal = {w, Fin::Four};
        else if (has(X, AX_5) && !wp.empty() && w != nV) goal = {w, Fin::Five};
      }
    }
    if (goal) break;
    for (std::size_t z = 0; z < paths.size(); ++z) {
      if (seen[z]) continue;
      bool edge = (has(X, AX_4) && is_child(paths[z], wp)) || (has(X, AX_5) && !wp.empty());
      if (!edge) continue;
      seen[z] = 1;
      prev[z] = static_cast<int>(w);
      queue.push_back(z);
    }
  }
  if (!goal) throw TransformError("surgery: no chain of diamond rules reaches the target");

  std::vector<std::size_t> route;
  for (int x = static_cast<int>(goal->first); x >= 0; x = prev[static_cast<std::size_t>(x)])
    route.push_back(static_cast<std::size_t>(x));
  std::reverse(route.begin(), route.end());
  const std::vector<std::uint64_t> route_ids = [&] {
    std::vector<std::uint64_t> v;
    for (auto i : route) v.push_back(resolve(S, paths[i]).tag);
    return v;
  }();

  Sequent cur = S;
  std::vector<RuleInstance> chain;
  std::vector<Junk> junk;
  std::unordered_map<std::uint64_t, std::uint64_t> copy_at{{U, o}};
  auto step = [&](Rule rr, std::uint64_t from, std::optional<std::uint64_t> to, Formula added,
                  std::uint64_t added_node, bool keep) {
    RuleInstance in;
    in.rule = rr;
    in.concl = cur;
    in.act.push_back(occ_slot(cur, copy_at.at(from)));
    if (to) in.act.push_back(Slot{must_path(cur, *to), -1});
    Sequent next = premises_of(in)[0];
    std::uint64_t id = keep ? bid : ctx.fresh();
    if (rr == Rule::dia_d_c) {
      Sequent& n = resolve_mut(next, must_path(next, from));
      for (auto& k : n.kids) {
        if (k.tag == 0) {
          k.tag = ctx.fresh();
          k.ft.assign(1, id);
          added_node = k.tag;
        }
      }
    } else {
      tag_new_at(next, added_node, added, id);
    }
    if (!keep) junk.push_back(Junk{added_node, added, id});
    if (added == D) copy_at[added_node] = id;
    chain.push_back(std::move(in));
    cur = std::move(next);
    return added_node;
  };
  for (std::size_t i = 1; i < route.size(); ++i) {
    std::uint64_t from = route_ids[i - 1], to = route_ids[i];
    Rule rr = has(X, AX_4) && is_child(paths[route[i]], paths[route[i - 1]]) ? Rule::dia_4_c : Rule::dia_5_c;
    bool last_is_b = goal->second == Fin::None && i + 1 == route.size();
    step(rr, from, to, D, to, last_is_b);
  }
  const std::uint64_t w = route_ids.back();
  std::uint64_t created = 0;
  switch (goal->second) {
    case Fin::None: break;
    case Fin::K: step(Rule::dia_k_c, w, V, A, V, true); break;
    case Fin::T: step(Rule::dia_t_c, w, std::nullopt, A, w, true); break;
    case Fin::B: step(Rule::dia_b_c, w, std::nullopt, A, V, true); break;
    case Fin::Create: created = step(Rule::dia_d_c, w, std::nullopt, A, 0, true); break;
    case Fin::Four:
    case Fin::Five: {
      std::uint64_t target = V;
      if (create) target = created = step(Rule::dia_d_c, w, std::nullopt, A, 0, false);
      std::uint64_t src = w;
      if (goal->second == Fin::Five && create) src = resolve(S, paths[static_cast<std::size_t>(five_src)]).tag;
      step(goal->second == Fin::Four ? Rule::dia_4_c : Rule::dia_5_c, src, target, D, target, true);
      break;
    }
  }

  Sequent S0 = cur;
  for (const auto& j : junk) {
    Sequent& n = resolve_mut(S0, must_path(S0, j.node));
    n.erase_formula(static_cast<std::size_t>(find_occ(n, j.id)));
  }
  S0.normalize();
  NodeMap phi2 = phi;
  if (create) phi2[vt] = created;
  Proof q = run(P->subs[0], P0, S0, phi2);
  TProof t{q, S0};
  for (const auto& j : junk) t = weaken_t(ctx, t.p, t.t, j.node, Sequent::of({j.f}));
  Proof out = t.p;
  for (std::size_t i = chain.size(); i-- > 0;) out = build(chain[i], {out});
  return out;
}

}  // namespace

Proof surgery(Ctx& ctx, AxSet X, const Proof& p, const Sequent& Sp, const Sequent& S, const NodeMap& phi) {
  if (Sp != p->concl()) throw TransformError("surgery: premise does not match the subproof");
  Surgeon sg{ctx, X};
  return sg.run(p, Sp, S, phi);
}

Proof admit_step(const RuleInstance& step, const Proof& sub, AxSet X) {
  Ctx ctx;
  RuleInstance in = step;
  in.circ = false;
  in.prems.clear();
  clear_tags(in.concl);
  relabel(in.concl, ctx);
  if (!tag_instance_params(in)) throw TransformError("parameter of " + rule_name(in.rule) + " does not fit");
  Sequent Sp = premises_of(in)[0];
  relabel(Sp, ctx);
  const Sequent& C = in.concl;
  NodeMap phi;
  std::function<void(const Sequent&)> walk = [&](const Sequent& n) {
    if (node_path(C, n.tag)) phi[n.tag] = n.tag;
    for (const auto& k : n.kids) walk(k);
  };
  walk(Sp);
  std::uint64_t fresh_node = 0;
  std::function<void(const Sequent&)> find_new = [&](const Sequent& n) {
    if (!phi.count(n.tag)) fresh_node = n.tag;
    for (const auto& k : n.kids) find_new(k);
  };
  find_new(Sp);
  switch (in.rule) {
    case Rule::str_t:
    case Rule::str_b:
      phi[fresh_node] = resolve(C, in.act[0].node).tag;
      break;
    case Rule::str_d:
    case Rule::str_4:
    case Rule::str_5:
    case Rule::ystr:
      break;
    default:
      throw TransformError(rule_name(in.rule) + " is not a structural rule");
  }
  return surgery(ctx, X, sub, Sp, C, phi);
}

namespace {
bool is_str(Rule r) {
  return r == Rule::str_d || r == Rule::str_t || r == Rule::str_b || r == Rule::str_4 || r == Rule::str_5 ||
         r == Rule::ystr;
}

Proof admit_rules(const Proof& p, AxSet X, bool only_d) {
  std::vector<Proof> subs;
  for (const auto& s : p->subs) subs.push_back(admit_rules(s, X, only_d));
  const Rule r = p->step.rule;
  if (is_str(r) && (!only_d || r == Rule::str_d)) return admit_step(p->step, subs[0], X);
  RuleInstance in = p->step;
  in.prems.clear();
  return build(std::move(in), std::move(subs));
}
}  // namespace

Proof eliminate_str_d(const Proof& p, AxSet X) { return admit_rules(p, X, true); }

Proof split_dia_d(const Proof& p) {
  std::vector<Proof> subs;
  for (const auto& s : p->subs) subs.push_back(split_dia_d(s));
  const RuleInstance& st = p->step;
  if (st.rule != Rule::dia_d_c || st.circ) {
    RuleInstance in = st;
    in.prems.clear();
    return build(std::move(in), std::move(subs));
  }
  Ctx ctx;
  Sequent C = tagged_concl(p, ctx);
  const Sequent& n = resolve(C, st.act[0].node);
  std::uint64_t node = n.tag, occ = n.ftag(static_cast<std::size_t>(st.act[0].index));
  Sequent mid = C;
  Sequent e;
  e.tag = ctx.fresh();
  resolve_mut(mid, st.act[0].node).add_kid(e);
  mid.normalize();
  RuleInstance k = inst(Rule::dia_k_c, mid, {occ_slot(mid, occ), Slot{*node_path(mid, e.tag), -1}});
  Proof inner = build(std::move(k), {subs[0]});
  return build(inst(Rule::str_d, C, {Slot{*node_path(C, node), -1}}), {inner});
}

}  // namespace detail

Proof admit_structural(const Proof& p, AxSet X) { return detail::admit_rules(p, X, false); }


namespace detail {
namespace {

struct CutSpec {
  Sequent C;  // tagged conclusion
  bool modal = false;
  Formula f;  // left cut formula, or the body of the left box
  std::vector<std::uint64_t> holes;
  AxSet Y = 0;
};

struct Sides {
  Sequent L, R;
  std::uint64_t lid = 0;
  std::vector<std::uint64_t> rids;
};

Path path_with(const Sequent& C, std::uint64_t node, const std::vector<Formula>& add, Ctx& ctx,
               Sequent* out = nullptr) {
  Sequent t = C;
  for (Formula f : add) resolve_mut(t, must_path(t, node)).add(f, ctx.fresh());
  t.normalize();
  if (out) *out = t;
  return must_path(t, node);
}

std::vector<Slot> map_act(const std::vector<Slot>& act, const Sequent& from, const Sequent& to) {
  std::vector<Slot> out;
  for (const auto& a : act) {
    auto m = map_slot(a, from, to);
    if (!m) throw TransformError("cut reduction lost an active position");
    out.push_back(*m);
  }
  return out;
}

Sequent without_ids(Sequent s, const std::vector<std::uint64_t>& ids) {
  for (auto id : ids) {
    auto l = occ_loc(s, id);
    if (!l) throw TransformError("cut formula vanished from a passive premise");
    resolve_mut(s, l->node).erase_formula(static_cast<std::size_t>(l->index));
  }
  s.normalize();
  return s;
}

struct Eliminator {
  Ctx ctx;
  AxSet X = 0;
  ElimTrace* trace = nullptr;
  std::size_t budget = 0;
  std::size_t calls = 0;

  Sides sides(const CutSpec& c) {
    Sides sd;
    sd.L = c.C;
    sd.R = c.C;
    Formula lf = c.modal ? Formula::box(c.f) : c.f;
    Formula rf = negate(lf);
    sd.lid = ctx.fresh();
    resolve_mut(sd.L, must_path(sd.L, c.holes[0])).add(lf, sd.lid);
    for (auto h : c.holes) {
      sd.rids.push_back(ctx.fresh());
      resolve_mut(sd.R, must_path(sd.R, h)).add(rf, sd.rids.back());
    }
    sd.L.normalize();
    sd.R.normalize();
    return sd;
  }

  Proof elim(const Proof& p);
  Proof cut_step(const Proof& p, const std::vector<Proof>& subs);
  Proof reduce(const CutSpec& c, const Proof& L, const Proof& R);
  Proof passive_left(const CutSpec& c, const Sides& sd, const Proof& L, const Proof& R);
  Proof passive_right(const CutSpec& c, const Sides& sd, const Proof& L, const Proof& R);
  Proof modal_case(const CutSpec& c, const Sides& sd, const Proof& L, const Proof& R);
};

Proof Eliminator::elim(const Proof& p) {
  if (is_cut_free(p)) return p;
  std::vector<Proof> subs;
  for (const auto& s : p->subs) subs.push_back(elim(s));
  const Rule r = p->step.rule;
  if (r == Rule::cut || r == Rule::ycut) {
    Proof q = cut_step(p, subs);
    return elim(q);
  }
  RuleInstance in = p->step;
  in.prems.clear();
  return build(std::move(in), std::move(subs));
}

Proof Eliminator::cut_step(const Proof& p, const std::vector<Proof>& subs) {
  const RuleInstance& st = p->step;
  CutSpec c;
  c.C = tagged_concl(p, ctx);
  Proof L = subs[0], R = subs[1];
  if (st.rule == Rule::ycut) {
    c.modal = true;
    c.f = st.cutf;
    c.Y = st.Y;
    for (const auto& h : st.act) c.holes.push_back(resolve(c.C, h.node).tag);
  } else {
    c.holes.push_back(resolve(c.C, st.act[0].node).tag);
    Formula F = st.cutf;
    switch (F.op()) {
      case Op::Box: c.modal = true; c.f = F.body(); break;
      case Op::Dia: c.modal = true; c.f = negate(F.body()); std::swap(L, R); break;
      case Op::Or: c.f = negate(F); std::swap(L, R); break;
      default: c.f = F; break;
    }
  }
  if (trace) trace->push_back(ElimSnapshot{"reduce " + rule_name(st.rule) + " on " + print(st.cutf), p->size,
                                           max_cut_rank(p)});
  return reduce(c, L, R);
}

Proof Eliminator::reduce(const CutSpec& c, const Proof& L, const Proof& R) {
  if (++calls > budget) throw TransformError("cut elimination exceeded its step budget");
  Sides sd = sides(c);
  if (L->concl() != sd.L || R->concl() != sd.R) throw TransformError("cut premises do not match the cut");
  const RuleInstance& ls = L->step;
  const RuleInstance& rs = R->step;
  if (ls.rule == Rule::axiom) {
    std::uint64_t a = principal_id(ls, sd.L);
    std::uint64_t b = resolve(sd.L, ls.act[1].node).ftag(static_cast<std::size_t>(ls.act[1].index));
    if (!c.modal && (a == sd.lid || b == sd.lid))
      return contract(R, must_path(sd.R, c.holes[0]), Sequent::of({negate(c.f)}));
    auto ax = axiom_instance(c.C);
    if (!ax) throw TransformError("axiom lost in cut reduction");
    return build(*ax, {});
  }
  if (rs.rule == Rule::axiom) {
    std::uint64_t a = principal_id(rs, sd.R);
    std::uint64_t b = resolve(sd.R, rs.act[1].node).ftag(static_cast<std::size_t>(rs.act[1].index));
    bool uses = std::find(sd.rids.begin(), sd.rids.end(), a) != sd.rids.end() ||
                std::find(sd.rids.begin(), sd.rids.end(), b) != sd.rids.end();
    if (!c.modal && uses) return contract(L, must_path(sd.L, c.holes[0]), Sequent::of({c.f}));
    auto ax = axiom_instance(c.C);
    if (!ax) throw TransformError("axiom lost in cut reduction");
    return build(*ax, {});
  }
  const bool l_active = principal_id(ls, sd.L) == sd.lid;
  const std::uint64_t rp = principal_id(rs, sd.R);
  const bool r_active = std::find(sd.rids.begin(), sd.rids.end(), rp) != sd.rids.end() && rp != 0;
  if (!l_active) return passive_left(c, sd, L, R);
  if (!r_active) return passive_right(c, sd, L, R);
  if (c.modal) return modal_case(c, sd, L, R);
  if (ls.rule != Rule::and_ || rs.rule != Rule::or_) throw TransformError("unexpected principal rules at a cut");
  const Formula B = c.f.left(), Cf = c.f.right();
  Sequent mid;
  path_with(c.C, c.holes[0], {negate(B)}, ctx, &mid);
  Path wpath = path_with(c.C, c.holes[0], {Cf}, ctx);
  Proof inner = make_cut(mid, c.holes[0], Cf, weaken(L->subs[1], wpath, Sequent::of({negate(B)})), R->subs[0]);
  return make_cut(c.C, c.holes[0], B, L->subs[0], inner);
}

Proof Eliminator::passive_left(const CutSpec& c, const Sides& sd, const Proof& L, const Proof& R) {
  RuleInstance a = L->step;
  a.concl = sd.L;
  a.prems.clear();
  auto prems = premises_of(a);
  RuleInstance b = a;
  b.concl = c.C;
  b.act = map_act(a.act, sd.L, c.C);
  const auto ract = map_act(a.act, sd.L, sd.R);
  std::vector<Proof> subs;
  for (std::size_t i = 0; i < prems.size(); ++i) {
    relabel(prems[i], ctx);
    CutSpec ci = c;
    ci.C = without_ids(prems[i], {sd.lid});
    Proof Ri = invert(R, a.rule, ract, static_cast<int>(i));
    subs.push_back(reduce(ci, L->subs[i], Ri));
  }
  return build(std::move(b), std::move(subs));
}

Proof Eliminator::passive_right(const CutSpec& c, const Sides& sd, const Proof& L, const Proof& R) {
  RuleInstance a = R->step;
  a.concl = sd.R;
  a.prems.clear();
  auto prems = premises_of(a);
  RuleInstance b = a;
  b.concl = c.C;
  b.act = map_act(a.act, sd.R, c.C);
  const auto lact = map_act(a.act, sd.R, sd.L);
  std::vector<Proof> subs;
  for (std::size_t i = 0; i < prems.size(); ++i) {
    relabel(prems[i], ctx);
    CutSpec ci = c;
    ci.C = without_ids(prems[i], sd.rids);
    Proof Li = invert(L, a.rule, lact, static_cast<int>(i));
    subs.push_back(reduce(ci, Li, R->subs[i]));
  }
  return build(std::move(b), std::move(subs));
}

Proof Eliminator::modal_case(const CutSpec& c, const Sides& sd, const Proof& L, const Proof& R) {
  if (L->step.rule != Rule::box) throw TransformError("unexpected left rule at a modal cut");
  const RuleInstance& rs = R->step;
  const Sequent& hn = resolve(sd.R, rs.act[0].node);
  std::uint64_t target = 0;
  switch (rs.rule) {
    case Rule::dia_k_c: target = resolve(sd.R, rs.act[1].node).tag; break;
    case Rule::dia_t_c: target = hn.tag; break;
    case Rule::dia_b_c: target = resolve(sd.R, parent_path(rs.act[0].node)).tag; break;
    case Rule::dia_4_c:
    case Rule::dia_5_c: {
      CutSpec c2 = c;
      c2.holes.push_back(resolve(sd.R, rs.act[1].node).tag);
      c2.Y |= rs.rule == Rule::dia_4_c ? AX_4 : AX_5;
      return reduce(c2, L, R->subs[0]);
    }
    default:
      throw TransformError("unexpected right rule " + rule_name(rs.rule) + " at a modal cut");
  }
  // Left: the box [f] created by L lands in the target node.
  RuleInstance lb = L->step;
  lb.concl = sd.L;
  lb.prems.clear();
  Sequent Lsub = premises_of(lb)[0];
  relabel(Lsub, ctx);
  NodeMap phi;
  std::uint64_t kid = 0, fid = 0;
  std::function<void(const Sequent&)> walk = [&](const Sequent& n) {
    if (node_path(c.C, n.tag)) {
      phi[n.tag] = n.tag;
    } else {
      kid = n.tag;
      fid = n.ftag(0);
    }
    for (const auto& k : n.kids) walk(k);
  };
  walk(Lsub);
  phi[kid] = target;
  Sequent S = c.C;
  resolve_mut(S, must_path(S, target)).add(c.f, fid);
  S.normalize();
  Proof left = surgery(ctx, X, L->subs[0], Lsub, S, phi);
  // Right: the same cut one level up, against the premise of the diamond step.
  CutSpec c2 = c;
  c2.C = c.C;
  resolve_mut(c2.C, must_path(c2.C, target)).add(negate(c.f), ctx.fresh());
  c2.C.normalize();
  Path tpath = must_path(sd.L, target);
  Proof Lw = weaken(L, tpath, Sequent::of({negate(c.f)}));
  Proof right = reduce(c2, Lw, R->subs[0]);
  return make_cut(c.C, target, c.f, left, right);
}

}  // namespace
}  // namespace detail

Proof eliminate_cuts_logical(const Proof& p, AxSet X, ElimTrace* trace) {
  if (!is_45_closed(X))
    throw TransformError("logical cut elimination needs a 45-closed axiom set, got {" + axset_to_string(X) + "}");
  Proof q = p;
  bool logical = true;
  for (std::size_t r = 0; r < kRuleCount; ++r) {
    Rule rr = static_cast<Rule>(r);
    bool ok = rr == Rule::axiom || rr == Rule::and_ || rr == Rule::or_ || rr == Rule::box || rr == Rule::cut ||
              rr == Rule::ycut || rr == Rule::str_d || rr == Rule::dia_d_c || rr == Rule::dia_k_c ||
              rr == Rule::dia_t_c || rr == Rule::dia_b_c || rr == Rule::dia_4_c || rr == Rule::dia_5_c;
    if (!ok && uses_rule(q, rr)) logical = false;
  }
  if (!logical) q = structural_to_logical(q, X);
  q = circle_to_base(q);
  if (trace) trace->push_back(ElimSnapshot{"input", q->size, max_cut_rank(q)});
  if (has(X, AX_D)) q = detail::split_dia_d(q);
  detail::Eliminator el;
  el.X = X;
  el.trace = trace;
  el.budget = 20'000'000;
  q = el.elim(q);
  if (trace) trace->push_back(ElimSnapshot{"cut-free", q->size, 0});
  if (has(X, AX_D)) {
    q = detail::eliminate_str_d(q, X);
    if (trace) trace->push_back(ElimSnapshot{"seriality restored", q->size, 0});
  }
  return q;
}

}  // namespace cube
