#include "cubeprover/calculus.hpp"

#include <algorithm>
#include <functional>

namespace cube {

// ---- axiom sets

std::string axset_to_string(AxSet x) {
  static const std::pair<Axiom, char> names[] = {
      {AX_D, 'd'}, {AX_T, 't'}, {AX_B, 'b'}, {AX_4, '4'}, {AX_5, '5'}};
  std::string out;
  for (auto [a, c] : names) {
    if (!has(x, a)) continue;
    if (!out.empty()) out += ',';
    out += c;
  }
  return out;
}

AxSet axset_from_string(std::string_view s) {
  AxSet x = 0;
  for (char c : s) {
    switch (c) {
      case 'd': case 'D': x |= AX_D; break;
      case 't': case 'T': x |= AX_T; break;
      case 'b': case 'B': x |= AX_B; break;
      case '4': x |= AX_4; break;
      case '5': x |= AX_5; break;
      case ',': case ' ': case '{': case '}': break;
      default: throw std::invalid_argument(std::string("unknown axiom '") + c + "'");
    }
  }
  return x;
}

// ---- rule table

namespace {

struct RuleInfo {
  const char* name;
  int arity;
  bool circle;
};

const RuleInfo kInfo[kRuleCount] = {
    {"axiom", 0, false},   {"and", 2, true},      {"or", 1, true},       {"box", 1, true},
    {"dia_k_c", 1, true},  {"dia_d_c", 1, true},  {"dia_t_c", 1, true},  {"dia_b_c", 1, true},
    {"dia_4_c", 1, true},  {"dia_5_c", 1, true},  {"dia_k", 1, false},   {"dia_d", 1, false},
    {"dia_t", 1, false},   {"dia_b", 1, false},   {"dia_4", 1, false},   {"dia_5", 1, false},
    {"dia_5_1", 1, false}, {"dia_5_2", 1, false}, {"dia_5_3", 1, false}, {"str_d", 1, false},
    {"str_t", 1, false},   {"str_b", 1, false},   {"str_4", 1, false},   {"str_5", 1, false},
    {"k", 1, false},       {"ctr", 1, false},     {"wk", 1, false},      {"nec", 1, false},
    {"cut", 2, false},     {"ycut", 2, false},    {"ystr", 1, false},    {"fctr", 1, false},
    {"med", 1, false},     {"m_box", 1, false},   {"m_and", 2, false},   {"mcut", 2, false},
};

std::size_t idx(Rule r) { return static_cast<std::size_t>(r); }

}  // namespace

std::string rule_name(Rule r, bool circ) {
  std::string n = kInfo[idx(r)].name;
  if (circ) n += "_o";
  return n;
}

std::optional<std::pair<Rule, bool>> rule_from_name(std::string_view name) {
  bool circ = false;
  if (name.size() > 2 && name.substr(name.size() - 2) == "_o") {
    circ = true;
    name.remove_suffix(2);
  }
  for (std::size_t i = 0; i < kRuleCount; ++i) {
    if (name == kInfo[i].name) {
      if (circ && !kInfo[i].circle) return std::nullopt;
      return std::make_pair(static_cast<Rule>(i), circ);
    }
  }
  return std::nullopt;
}

int rule_arity(Rule r) { return kInfo[idx(r)].arity; }
bool has_circle_variant(Rule r) { return kInfo[idx(r)].circle; }
bool is_cut_rule(Rule r) { return r == Rule::cut || r == Rule::mcut || r == Rule::ycut; }

Rule dia_c_rule(Axiom a) {
  switch (a) {
    case AX_D: return Rule::dia_d_c;
    case AX_T: return Rule::dia_t_c;
    case AX_B: return Rule::dia_b_c;
    case AX_4: return Rule::dia_4_c;
    case AX_5: return Rule::dia_5_c;
  }
  return Rule::dia_k_c;
}

Rule str_rule(Axiom a) {
  switch (a) {
    case AX_D: return Rule::str_d;
    case AX_T: return Rule::str_t;
    case AX_B: return Rule::str_b;
    case AX_4: return Rule::str_4;
    case AX_5: return Rule::str_5;
  }
  return Rule::str_d;
}

// ---- premise computation

namespace {

[[noreturn]] void bad(const std::string& msg) { throw MalformedInstance(msg); }

const Sequent& node_at(const Sequent& s, const Path& p) {
  if (!valid_path(s, p)) bad("active node address does not resolve");
  return resolve(s, p);
}

Formula formula_at(const Sequent& s, const Slot& sl) {
  const Sequent& n = node_at(s, sl.node);
  if (sl.index < 0 || static_cast<std::size_t>(sl.index) >= n.fs.size())
    bad("active slot does not resolve");
  return n.fs[static_cast<std::size_t>(sl.index)];
}

void need_acts(const RuleInstance& r, std::size_t k) {
  if (r.act.size() != k) bad(rule_name(r.rule) + ": wrong number of active positions");
}

bool is_child_of(const Path& c, const Path& n) {
  return c.size() == n.size() + 1 && is_prefix(n, c);
}

struct Selection {
  std::vector<std::size_t> fidx, kidx;
};

// Pick occurrences of sub's formulas and children inside node, preferring
// equal tags, never using the child at index `exclude`.
std::optional<Selection> select_sub(const Sequent& node, const Sequent& sub, long exclude = -1) {
  Selection sel;
  std::vector<bool> fused(node.fs.size(), false), kused(node.kids.size(), false);
  if (exclude >= 0) kused[static_cast<std::size_t>(exclude)] = true;
  for (std::size_t i = 0; i < sub.fs.size(); ++i) {
    long pick = -1;
    std::uint64_t t = sub.ftag(i);
    for (std::size_t j = 0; j < node.fs.size(); ++j) {
      if (fused[j] || node.fs[j] != sub.fs[i]) continue;
      if (t != 0 && node.ftag(j) == t) { pick = static_cast<long>(j); break; }
      if (pick < 0) pick = static_cast<long>(j);
    }
    if (pick < 0) return std::nullopt;
    fused[static_cast<std::size_t>(pick)] = true;
    sel.fidx.push_back(static_cast<std::size_t>(pick));
  }
  for (const auto& k : sub.kids) {
    long pick = -1;
    for (std::size_t j = 0; j < node.kids.size(); ++j) {
      if (kused[j] || node.kids[j] != k) continue;
      if (k.tag != 0 && node.kids[j].tag == k.tag) { pick = static_cast<long>(j); break; }
      if (pick < 0) pick = static_cast<long>(j);
    }
    if (pick < 0) return std::nullopt;
    kused[static_cast<std::size_t>(pick)] = true;
    sel.kidx.push_back(static_cast<std::size_t>(pick));
  }
  return sel;
}

// Remove the selected part from node and return it.
Sequent extract(Sequent& node, Selection sel) {
  Sequent out;
  std::sort(sel.fidx.begin(), sel.fidx.end());
  std::sort(sel.kidx.begin(), sel.kidx.end());
  for (auto i : sel.fidx) out.add(node.fs[i], node.ftag(i));
  for (auto i : sel.kidx) out.kids.push_back(node.kids[i]);
  node.ft.resize(node.fs.size(), 0);
  for (auto it = sel.fidx.rbegin(); it != sel.fidx.rend(); ++it) node.erase_formula(*it);
  for (auto it = sel.kidx.rbegin(); it != sel.kidx.rend(); ++it)
    node.kids.erase(node.kids.begin() + static_cast<long>(*it));
  return out;
}

// Move the subtree at path d so that it becomes a child of the node at t.
void move_kid(Sequent& s, const Path& d, Path t) {
  if (d.empty()) bad("cannot move the root");
  if (is_prefix(d, t)) bad("target lies inside the moved box");
  Path par = parent_path(d);
  std::uint32_t j = d.back();
  Sequent& p = resolve_mut(s, par);
  Sequent moved = std::move(p.kids[j]);
  p.kids.erase(p.kids.begin() + j);
  if (is_prefix(par, t) && t.size() > par.size() && t[par.size()] > j) --t[par.size()];
  resolve_mut(s, t).kids.push_back(std::move(moved));
}

void add_copies(Sequent& node, Formula f, int k) {
  for (int i = 0; i < k; ++i) node.add(f);
}

void check_circle(const RuleInstance& r, const std::vector<Sequent>& prems) {
  Sequent sc = set_sequent(r.concl);
  for (const auto& p : prems)
    if (set_sequent(p) == sc) bad(rule_name(r.rule, true) + ": premise has the same set sequent");
}

}  // namespace

bool ystr_proviso_holds(AxSet Y, const Path& source, const Path& target) {
  bool y4 = has(Y, AX_4), y5 = has(Y, AX_5);
  if ((Y & ~(AX_4 | AX_5)) != 0) return false;
  if (y4 && y5) return true;
  if (y4) return is_prefix(source, target);
  if (y5) return !source.empty();
  return source == target;
}

bool ycut_proviso_holds(const RuleInstance& r) {
  if (r.rule != Rule::ycut || r.act.empty()) return false;
  AxSet Y = r.Y;
  if ((Y & ~(AX_4 | AX_5)) != 0) return false;
  std::size_t n = r.act.size() - 1;
  bool y4 = has(Y, AX_4), y5 = has(Y, AX_5);
  if (y4 && y5) return true;
  if (n == 0) return true;
  if (y4) {
    for (std::size_t i = 1; i <= n; ++i)
      if (!is_prefix(r.act[0].node, r.act[i].node)) return false;
    return true;
  }
  if (y5) return !r.act[0].node.empty();
  return false;
}

std::vector<Sequent> premises_of(const RuleInstance& r) {
  const Sequent& C = r.concl;
  std::vector<Sequent> out;
  auto single = [&]() -> Sequent& {
    out.push_back(C);
    return out.back();
  };
  auto main_formula = [&](Op op) -> Formula {
    if (r.act.empty()) bad(rule_name(r.rule) + ": missing active slot");
    Formula f = formula_at(C, r.act[0]);
    if (f.op() != op) bad(rule_name(r.rule) + ": active formula has the wrong connective");
    return f;
  };
  auto main_index = [&]() { return static_cast<std::size_t>(r.act[0].index); };
  const Path& n = r.act.empty() ? Path{} : r.act[0].node;

  if (r.circ && !has_circle_variant(r.rule)) bad(rule_name(r.rule) + " has no circle variant");

  switch (r.rule) {
    case Rule::axiom: {
      need_acts(r, 2);
      if (r.act[0].node != r.act[1].node) bad("axiom: slots at different nodes");
      Formula a = formula_at(C, r.act[0]), b = formula_at(C, r.act[1]);
      if (!a.is_atom() || !b.is_atom() || negate(a) != b) bad("axiom: slots are not p, ~p");
      break;
    }
    case Rule::and_: {
      need_acts(r, 1);
      Formula f = main_formula(Op::And);
      for (Formula part : {f.left(), f.right()}) {
        Sequent& p = single();
        Sequent& nd = resolve_mut(p, n);
        if (!r.circ) nd.erase_formula(main_index());
        nd.add(part);
      }
      break;
    }
    case Rule::or_: {
      need_acts(r, 1);
      Formula f = main_formula(Op::Or);
      Sequent& p = single();
      Sequent& nd = resolve_mut(p, n);
      if (!r.circ) nd.erase_formula(main_index());
      nd.add(f.left());
      nd.add(f.right());
      break;
    }
    case Rule::box: {
      need_acts(r, 1);
      Formula f = main_formula(Op::Box);
      if (r.circ) {
        for (const auto& k : resolve(C, n).kids)
          if (k.count(f.body()) > 0) bad("box_o: a child already contains the body");
      }
      Sequent& p = single();
      Sequent& nd = resolve_mut(p, n);
      if (!r.circ) nd.erase_formula(main_index());
      Sequent kid;
      kid.add(f.body());
      nd.add_kid(std::move(kid));
      break;
    }
    case Rule::dia_k_c:
    case Rule::dia_4_c: {
      need_acts(r, 2);
      Formula f = main_formula(Op::Dia);
      const Path& c = r.act[1].node;
      if (!is_child_of(c, n) || !valid_path(C, c)) bad(rule_name(r.rule) + ": target is not a child");
      Sequent& p = single();
      resolve_mut(p, c).add(r.rule == Rule::dia_k_c ? f.body() : f);
      break;
    }
    case Rule::dia_d_c: {
      need_acts(r, 1);
      Formula f = main_formula(Op::Dia);
      if (r.circ && !resolve(C, n).kids.empty()) bad("dia_d_c_o: node already has a child");
      Sequent& p = single();
      Sequent kid;
      kid.add(f.body());
      resolve_mut(p, n).add_kid(std::move(kid));
      break;
    }
    case Rule::dia_t_c: {
      need_acts(r, 1);
      Formula f = main_formula(Op::Dia);
      Sequent& p = single();
      resolve_mut(p, n).add(f.body());
      break;
    }
    case Rule::dia_b_c: {
      need_acts(r, 1);
      Formula f = main_formula(Op::Dia);
      if (n.empty()) bad("dia_b_c: principal formula at the root");
      Sequent& p = single();
      resolve_mut(p, parent_path(n)).add(f.body());
      break;
    }
    case Rule::dia_5_c: {
      need_acts(r, 2);
      Formula f = main_formula(Op::Dia);
      if (n.empty()) bad("dia_5_c: principal formula at the root");
      if (!valid_path(C, r.act[1].node)) bad("dia_5_c: invalid target");
      Sequent& p = single();
      resolve_mut(p, r.act[1].node).add(f);
      break;
    }
    case Rule::dia_k:
    case Rule::k:
    case Rule::dia_4: {
      need_acts(r, 2);
      Formula f = main_formula(Op::Dia);
      const Path& c = r.act[1].node;
      if (!is_child_of(c, n) || !valid_path(C, c)) bad(rule_name(r.rule) + ": target is not a child");
      Sequent& p = single();
      std::uint64_t t = resolve(C, n).ftag(main_index());
      resolve_mut(p, n).erase_formula(main_index());
      if (r.rule == Rule::dia_4) resolve_mut(p, c).add(f, t);
      else resolve_mut(p, c).add(f.body());
      break;
    }
    case Rule::dia_d: {
      need_acts(r, 1);
      Formula f = main_formula(Op::Dia);
      Sequent& p = single();
      Sequent& nd = resolve_mut(p, n);
      nd.erase_formula(main_index());
      Sequent kid;
      kid.add(f.body());
      nd.add_kid(std::move(kid));
      break;
    }
    case Rule::dia_t: {
      need_acts(r, 1);
      Formula f = main_formula(Op::Dia);
      Sequent& p = single();
      Sequent& nd = resolve_mut(p, n);
      nd.erase_formula(main_index());
      nd.add(f.body());
      break;
    }
    case Rule::dia_b: {
      need_acts(r, 1);
      Formula f = main_formula(Op::Dia);
      if (n.empty()) bad("dia_b: principal formula at the root");
      Sequent& p = single();
      resolve_mut(p, n).erase_formula(main_index());
      resolve_mut(p, parent_path(n)).add(f.body());
      break;
    }
    case Rule::dia_5:
    case Rule::dia_5_1:
    case Rule::dia_5_2:
    case Rule::dia_5_3: {
      Formula f = main_formula(Op::Dia);
      if (n.empty()) bad(rule_name(r.rule) + ": principal formula at the root");
      Path t;
      if (r.rule == Rule::dia_5_1) {
        need_acts(r, 1);
        t = parent_path(n);
      } else {
        need_acts(r, 2);
        t = r.act[1].node;
        if (!valid_path(C, t)) bad(rule_name(r.rule) + ": invalid target");
        if (r.rule == Rule::dia_5_2 &&
            (t.size() != n.size() || t == n || parent_path(t) != parent_path(n)))
          bad("dia_5_2: target is not a sibling");
        if (r.rule == Rule::dia_5_3 && !is_child_of(t, n)) bad("dia_5_3: target is not a child");
        if (r.rule == Rule::dia_5 && t == n) bad("dia_5: target equals source");
      }
      Sequent& p = single();
      std::uint64_t tg = resolve(C, n).ftag(main_index());
      resolve_mut(p, n).erase_formula(main_index());
      resolve_mut(p, t).add(f, tg);
      break;
    }
    case Rule::str_d: {
      need_acts(r, 1);
      node_at(C, n);
      Sequent& p = single();
      resolve_mut(p, n).add_kid(Sequent{});
      break;
    }
    case Rule::str_t: {
      need_acts(r, 1);
      auto sel = select_sub(node_at(C, n), r.delta);
      if (!sel) bad("str_t: parameter is not part of the node");
      Sequent& p = single();
      Sequent moved = extract(resolve_mut(p, n), *sel);
      moved.tag = 0;
      resolve_mut(p, n).add_kid(std::move(moved));
      break;
    }
    case Rule::str_b: {
      need_acts(r, 2);
      const Path& c = r.act[1].node;
      if (!is_child_of(c, n) || !valid_path(C, c)) bad("str_b: second position is not a child");
      auto sel = select_sub(node_at(C, n), r.delta, static_cast<long>(c.back()));
      if (!sel) bad("str_b: parameter is not part of the node");
      Sequent& p = single();
      // The kid index of c shifts when earlier kids move into the new box.
      std::uint32_t ci = c.back();
      std::uint32_t shift = 0;
      for (auto k : sel->kidx)
        if (k < ci) ++shift;
      Sequent moved = extract(resolve_mut(p, n), *sel);
      moved.tag = 0;
      resolve_mut(p, n).kids[ci - shift].add_kid(std::move(moved));
      break;
    }
    case Rule::str_4: {
      need_acts(r, 1);
      const Path& d = r.act[0].node;
      if (d.size() < 2 || !valid_path(C, d)) bad("str_4: box must be at depth at least 2");
      Sequent& p = single();
      move_kid(p, d, Path(d.begin(), d.end() - 2));
      break;
    }
    case Rule::str_5:
    case Rule::ystr: {
      need_acts(r, 2);
      const Path& d = r.act[0].node;
      const Path& s = r.act[1].node;
      if (d.empty() || !valid_path(C, d) || !valid_path(C, s)) bad(rule_name(r.rule) + ": invalid address");
      if (is_prefix(d, s)) bad(rule_name(r.rule) + ": destination inside the moved box");
      if (r.rule == Rule::str_5 && s.empty()) bad("str_5: destination at the root");
      if (r.rule == Rule::ystr && !ystr_proviso_holds(r.Y, s, parent_path(d)))
        bad("ystr: proviso fails");
      Sequent& p = single();
      move_kid(p, d, s);
      break;
    }
    case Rule::nec: {
      need_acts(r, 0);
      if (!C.fs.empty() || C.kids.size() != 1) bad("nec: conclusion is not a single box");
      out.push_back(C.kids[0]);
      break;
    }
    case Rule::wk: {
      need_acts(r, 1);
      auto sel = select_sub(node_at(C, n), r.delta);
      if (!sel) bad("wk: parameter is not part of the node");
      Sequent& p = single();
      extract(resolve_mut(p, n), *sel);
      break;
    }
    case Rule::ctr: {
      need_acts(r, 1);
      auto sel = select_sub(node_at(C, n), r.delta);
      if (!sel) bad("ctr: parameter is not part of the node");
      Sequent& p = single();
      Sequent& nd = resolve_mut(p, n);
      Sequent copy;
      for (auto i : sel->fidx) copy.add(nd.fs[i], nd.ftag(i));
      for (auto i : sel->kidx) copy.kids.push_back(nd.kids[i]);
      nd.append(copy);
      break;
    }
    case Rule::fctr: {
      need_acts(r, 1);
      Formula f = formula_at(C, r.act[0]);
      Sequent& p = single();
      resolve_mut(p, n).add(f, resolve(C, n).ftag(main_index()));
      break;
    }
    case Rule::med: {
      need_acts(r, 1);
      if (n.empty()) bad("med: node must be a box");
      auto sel = select_sub(node_at(C, n), r.delta);
      if (!sel) bad("med: parameter is not part of the box");
      Sequent& p = single();
      Sequent moved = extract(resolve_mut(p, n), *sel);
      moved.tag = 0;
      resolve_mut(p, parent_path(n)).add_kid(std::move(moved));
      break;
    }
    case Rule::m_box: {
      need_acts(r, 1);
      Formula f = main_formula(Op::Box);
      if (r.n < 1) bad("m_box: multiplicity must be positive");
      Sequent& p = single();
      Sequent& nd = resolve_mut(p, n);
      nd.erase_formula(main_index());
      Sequent kid;
      add_copies(kid, f.body(), r.n);
      nd.add_kid(std::move(kid));
      break;
    }
    case Rule::m_and: {
      need_acts(r, 1);
      Formula f = main_formula(Op::And);
      if (r.m < 1 || r.n < 1) bad("m_and: multiplicities must be positive");
      for (int side = 0; side < 2; ++side) {
        Sequent& p = single();
        Sequent& nd = resolve_mut(p, n);
        nd.erase_formula(main_index());
        add_copies(nd, side == 0 ? f.left() : f.right(), side == 0 ? r.m : r.n);
      }
      break;
    }
    case Rule::cut:
    case Rule::mcut: {
      need_acts(r, 1);
      node_at(C, n);
      if (!r.cutf.valid()) bad("cut: missing cut formula");
      int m = r.rule == Rule::cut ? 1 : r.m, k = r.rule == Rule::cut ? 1 : r.n;
      if (m < 1 || k < 1) bad("mcut: multiplicities must be positive");
      add_copies(resolve_mut(single(), n), r.cutf, m);
      add_copies(resolve_mut(single(), n), negate(r.cutf), k);
      break;
    }
    case Rule::ycut: {
      if (r.act.empty()) bad("ycut: missing holes");
      if (!r.cutf.valid()) bad("ycut: missing cut formula");
      for (const auto& h : r.act) node_at(C, h.node);
      if (!ycut_proviso_holds(r)) bad("ycut: proviso fails");
      Sequent& p1 = single();
      resolve_mut(p1, r.act[0].node).add(Formula::box(r.cutf));
      Sequent& p2 = single();
      Formula d = Formula::dia(negate(r.cutf));
      for (const auto& h : r.act) resolve_mut(p2, h.node).add(d);
      break;
    }
    case Rule::count_: bad("invalid rule");
  }
  for (auto& p : out) p.normalize();
  if (r.circ) check_circle(r, out);
  return out;
}

// ---- systems

namespace {
std::bitset<kRuleCount> rule_set(std::initializer_list<Rule> rs) {
  std::bitset<kRuleCount> b;
  for (Rule r : rs) b.set(idx(r));
  return b;
}
}  // namespace

System System::logical(AxSet X, bool cut) {
  System s;
  s.fam = Family::Logical;
  s.X = X;
  s.rules = rule_set({Rule::axiom, Rule::and_, Rule::or_, Rule::box, Rule::dia_k_c});
  for (Axiom a : {AX_D, AX_T, AX_B, AX_4, AX_5})
    if (has(X, a)) s.rules.set(idx(dia_c_rule(a)));
  if (cut) s.rules.set(idx(Rule::cut));
  return s;
}

System System::logical_circle(AxSet X) {
  System s = logical(X);
  s.fam = Family::LogicalCircle;
  s.circ = true;
  return s;
}

System System::structural(AxSet X, bool cut) {
  System s;
  s.fam = Family::Structural;
  s.X = X;
  s.rules = rule_set({Rule::axiom, Rule::and_, Rule::or_, Rule::box, Rule::k, Rule::ctr});
  for (Axiom a : {AX_D, AX_T, AX_B, AX_4, AX_5})
    if (has(X, a)) s.rules.set(idx(str_rule(a)));
  if (cut) s.rules.set(idx(Rule::cut));
  return s;
}

System System::km(AxSet X, bool mcut) {
  System s;
  s.fam = Family::Km;
  s.X = X;
  s.rules = rule_set({Rule::axiom, Rule::and_, Rule::or_, Rule::box, Rule::k, Rule::med,
                      Rule::m_box, Rule::m_and});
  for (Axiom a : {AX_D, AX_T, AX_B, AX_4, AX_5})
    if (has(X, a)) s.rules.set(idx(str_rule(a)));
  if (mcut) s.rules.set(idx(Rule::mcut));
  return s;
}

System System::with(Rule r) const {
  System s = *this;
  s.rules.set(idx(r));
  return s;
}

System System::without(Rule r) const {
  System s = *this;
  s.rules.reset(idx(r));
  return s;
}

std::string System::describe() const {
  std::string base;
  switch (fam) {
    case Family::Logical: base = "K+X_c"; break;
    case Family::LogicalCircle: base = "(K+X_c)o"; break;
    case Family::Structural: base = "Kc+[X]"; break;
    case Family::Km: base = "Km+[X]"; break;
    case Family::Custom: base = "custom"; break;
  }
  return base + " with X={" + axset_to_string(X) + "}";
}

// ---- proofs

namespace {

void finish(ProofNode& n) {
  int d = -1;
  std::size_t sz = 1;
  for (const auto& s : n.subs) {
    d = std::max(d, s->depth);
    sz += s->size;
  }
  n.depth = n.subs.empty() ? 0 : d + 1;
  n.size = sz;
}

}  // namespace

Proof make_proof(RuleInstance inst, std::vector<Proof> subs) {
  std::vector<Sequent> prems;
  try {
    prems = premises_of(inst);
  } catch (const MalformedInstance& e) {
    throw ProofError(std::string("malformed ") + rule_name(inst.rule, inst.circ) + ": " + e.what() +
                     " in " + print(inst.concl));
  }
  if (prems.size() != subs.size())
    throw ProofError(rule_name(inst.rule) + ": premise count mismatch");
  for (std::size_t i = 0; i < prems.size(); ++i) {
    if (prems[i] != subs[i]->concl())
      throw ProofError(rule_name(inst.rule, inst.circ) + ": subproof " + std::to_string(i) +
                       " proves " + print(subs[i]->concl()) + " but the premise is " +
                       print(prems[i]));
  }
  for (auto& p : prems) clear_tags(p);
  clear_tags(inst.concl);
  inst.delta.tag = 0;
  inst.prems = std::move(prems);
  auto node = std::make_shared<ProofNode>();
  node->step = std::move(inst);
  node->subs = std::move(subs);
  finish(*node);
  return node;
}

Proof make_proof_unchecked(RuleInstance inst, std::vector<Proof> subs) {
  auto node = std::make_shared<ProofNode>();
  node->step = std::move(inst);
  node->subs = std::move(subs);
  finish(*node);
  return node;
}

RuleInstance inst(Rule r, const Sequent& concl, std::vector<Slot> act) {
  RuleInstance i;
  i.rule = r;
  i.concl = concl;
  i.act = std::move(act);
  return i;
}

int find_formula(const Sequent& node, Formula f) {
  for (std::size_t i = 0; i < node.fs.size(); ++i)
    if (node.fs[i] == f) return static_cast<int>(i);
  return -1;
}

std::optional<RuleInstance> axiom_instance(const Sequent& s) {
  for (const auto& p : all_paths(s)) {
    const Sequent& nd = resolve(s, p);
    for (std::size_t i = 0; i < nd.fs.size(); ++i) {
      Formula f = nd.fs[i];
      if (!f.is_atom() || f.negated()) continue;
      int j = find_formula(nd, negate(f));
      if (j >= 0) return inst(Rule::axiom, s, {Slot{p, static_cast<int>(i)}, Slot{p, j}});
    }
  }
  return std::nullopt;
}

bool is_axiomatic(const Sequent& s) { return axiom_instance(s).has_value(); }

namespace {

bool is_canonical(const Sequent& s) {
  for (std::size_t i = 1; i < s.fs.size(); ++i)
    if (s.fs[i] < s.fs[i - 1]) return false;
  for (std::size_t i = 1; i < s.kids.size(); ++i)
    if (s.kids[i] < s.kids[i - 1]) return false;
  for (const auto& k : s.kids)
    if (!is_canonical(k)) return false;
  return true;
}

bool check_rec(const Proof& p, const System& sys, CheckReport& rep, std::vector<int>& where) {
  const RuleInstance& in = p->step;
  auto fail = [&](const std::string& msg) {
    rep.ok = false;
    rep.message = rule_name(in.rule, in.circ) + " step with conclusion `" + print(in.concl) + "`: " + msg;
    rep.where = where;
    return false;
  };
  if (!sys.allows(in.rule)) return fail("rule not in " + sys.describe());
  if (has_circle_variant(in.rule) && in.circ != sys.circ)
    return fail(sys.circ ? "circle variant required" : "circle variant not allowed");
  if (!is_canonical(in.concl)) return fail("conclusion is not in canonical order");
  std::vector<Sequent> prems;
  try {
    prems = premises_of(in);
  } catch (const MalformedInstance& e) {
    return fail(e.what());
  }
  if (prems.size() != in.prems.size()) return fail("stored premise count differs");
  if (prems.size() != p->subs.size()) return fail("subproof count differs");
  for (std::size_t i = 0; i < prems.size(); ++i) {
    if (prems[i] != in.prems[i]) return fail("stored premise " + std::to_string(i) + " differs from the rule");
    if (p->subs[i]->concl() != prems[i])
      return fail("subproof " + std::to_string(i) + " does not prove the premise");
  }
  for (std::size_t i = 0; i < p->subs.size(); ++i) {
    where.push_back(static_cast<int>(i));
    if (!check_rec(p->subs[i], sys, rep, where)) return false;
    where.pop_back();
  }
  return true;
}

void walk(const Proof& p, const std::function<void(const ProofNode&)>& f) {
  std::vector<const ProofNode*> stack{p.get()};
  while (!stack.empty()) {
    const ProofNode* n = stack.back();
    stack.pop_back();
    f(*n);
    for (const auto& s : n->subs) stack.push_back(s.get());
  }
}

}  // namespace

CheckReport check_proof(const Proof& p, const System& sys) {
  CheckReport rep;
  std::vector<int> where;
  if (!p) {
    rep.ok = false;
    rep.message = "empty proof";
    return rep;
  }
  check_rec(p, sys, rep, where);
  return rep;
}

std::vector<int> cut_ranks(const Proof& p) {
  std::vector<int> out;
  walk(p, [&](const ProofNode& n) {
    const auto& s = n.step;
    if (s.rule == Rule::cut || s.rule == Rule::mcut) out.push_back(depth(s.cutf) + 1);
    if (s.rule == Rule::ycut) out.push_back(depth(Formula::box(s.cutf)) + 1);
  });
  return out;
}

int max_cut_rank(const Proof& p) {
  int m = 0;
  for (int r : cut_ranks(p)) m = std::max(m, r);
  return m;
}

std::vector<std::size_t> rule_histogram(const Proof& p) {
  std::vector<std::size_t> h(kRuleCount, 0);
  walk(p, [&](const ProofNode& n) { ++h[idx(n.step.rule)]; });
  return h;
}

std::size_t count_rule(const Proof& p, Rule r) { return rule_histogram(p)[idx(r)]; }
bool uses_rule(const Proof& p, Rule r) { return count_rule(p, r) > 0; }

bool is_cut_free(const Proof& p) {
  auto h = rule_histogram(p);
  return h[idx(Rule::cut)] == 0 && h[idx(Rule::mcut)] == 0 && h[idx(Rule::ycut)] == 0;
}

bool tag_instance_params(RuleInstance& r) {
  Rule k = r.rule;
  if (k != Rule::wk && k != Rule::ctr && k != Rule::str_t && k != Rule::str_b && k != Rule::med) return true;
  if (r.act.empty() || !valid_path(r.concl, r.act[0].node)) return false;
  const Sequent& node = resolve(r.concl, r.act[0].node);
  long exclude = -1;
  if (k == Rule::str_b) {
    if (r.act.size() < 2 || r.act[1].node.empty()) return false;
    exclude = static_cast<long>(r.act[1].node.back());
  }
  auto sel = select_sub(node, r.delta, exclude);
  if (!sel) return false;
  r.delta.ft.resize(r.delta.fs.size(), 0);
  for (std::size_t i = 0; i < sel->fidx.size(); ++i) r.delta.ft[i] = node.ftag(sel->fidx[i]);
  for (std::size_t i = 0; i < sel->kidx.size(); ++i) r.delta.kids[i] = node.kids[sel->kidx[i]];
  return true;
}

// ---- applicable instances

std::vector<RuleInstance> applicable_instances(const Sequent& s, const System& sys) {
  std::vector<RuleInstance> out;
  auto paths = all_paths(s);
  auto try_add = [&](RuleInstance in) {
    in.circ = sys.circ && has_circle_variant(in.rule);
    try {
      in.prems = premises_of(in);
    } catch (const MalformedInstance&) {
      return;
    }
    out.push_back(std::move(in));
  };
  static const Rule order[] = {Rule::axiom,   Rule::or_,     Rule::and_,    Rule::box,
                               Rule::dia_k_c, Rule::dia_d_c, Rule::dia_t_c, Rule::dia_b_c,
                               Rule::dia_4_c, Rule::dia_5_c, Rule::k,       Rule::dia_k,
                               Rule::dia_d,   Rule::dia_t,   Rule::dia_b,   Rule::dia_4,
                               Rule::dia_5,   Rule::str_d,   Rule::str_4,   Rule::str_5,
                               Rule::nec};
  for (const auto& p : paths) {
    const Sequent& nd = resolve(s, p);
    for (Rule r : order) {
      if (!sys.allows(r)) continue;
      if (r == Rule::axiom) {
        for (std::size_t i = 0; i < nd.fs.size(); ++i) {
          Formula f = nd.fs[i];
          if (!f.is_atom() || f.negated()) continue;
          for (std::size_t j = 0; j < nd.fs.size(); ++j)
            if (nd.fs[j] == negate(f))
              try_add(inst(r, s, {Slot{p, static_cast<int>(i)}, Slot{p, static_cast<int>(j)}}));
        }
        continue;
      }
      if (r == Rule::str_d) {
        try_add(inst(r, s, {Slot{p, -1}}));
        continue;
      }
      if (r == Rule::str_4) {
        if (p.size() >= 2) try_add(inst(r, s, {Slot{p, -1}}));
        continue;
      }
      if (r == Rule::str_5) {
        if (p.empty()) continue;
        for (const auto& t : paths)
          if (!t.empty() && !is_prefix(p, t) && t != parent_path(p)) try_add(inst(r, s, {Slot{p, -1}, Slot{t, -1}}));
        continue;
      }
      if (r == Rule::nec) {
        if (p.empty()) try_add(inst(r, s, {}));
        continue;
      }
      for (std::size_t i = 0; i < nd.fs.size(); ++i) {
        Slot sl{p, static_cast<int>(i)};
        if (i > 0 && nd.fs[i] == nd.fs[i - 1]) continue;  // equal occurrences give equal instances
        switch (r) {
          case Rule::dia_k_c: case Rule::dia_4_c: case Rule::k: case Rule::dia_k: case Rule::dia_4:
            for (std::uint32_t c = 0; c < nd.kids.size(); ++c) try_add(inst(r, s, {sl, Slot{child_path(p, c), -1}}));
            break;
          case Rule::dia_5_c: case Rule::dia_5:
            for (const auto& t : paths) try_add(inst(r, s, {sl, Slot{t, -1}}));
            break;
          default:
            try_add(inst(r, s, {sl}));
        }
      }
    }
  }
  return out;
}

}  // namespace cube
