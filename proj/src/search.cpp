#include "cubeprover/search.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

#include "cubeprover/transform.hpp"

namespace cube {

AxSet closure45(AxSet X) {
  AxSet out = X;
  while (true) {
    AxSet next = out;
    if ((has(next, AX_T) && has(next, AX_5)) || (has(next, AX_B) && has(next, AX_5))) next |= AX_4;
    if (has(next, AX_B) && has(next, AX_4)) next |= AX_5;
    if (next == out) return out;
    out = next;
  }
}

bool is_45_closed(AxSet X) { return closure45(X) == X; }

const std::vector<LogicSpec>& named_logics() {
  static const std::vector<LogicSpec> table = {
      {0, "K"},
      {AX_D, "KD"},
      {AX_T, "T"},
      {AX_B, "KB"},
      {AX_4, "K4"},
      {AX_5, "K5"},
      {AX_D | AX_4, "KD4"},
      {AX_D | AX_5, "KD5"},
      {AX_4 | AX_5, "K45"},
      {AX_D | AX_4 | AX_5, "KD45"},
      {AX_B | AX_4 | AX_5, "KB5"},
      {AX_D | AX_B, "KDB"},
      {AX_T | AX_B, "KTB"},
      {AX_T | AX_4, "S4"},
      {AX_T | AX_4 | AX_5, "S5"},
      {AX_D | AX_B | AX_4 | AX_5, "S5alt"},
  };
  return table;
}

std::vector<LogicSpec> cube_logics() {
  std::vector<LogicSpec> out;
  for (const auto& l : named_logics())
    if (l.name != "S5alt") out.push_back(l);
  return out;
}

LogicSpec parse_logic(std::string_view text) {
  auto lower = [](std::string_view s) {
    std::string o(s);
    for (auto& c : o) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return o;
  };
  for (const auto& l : named_logics())
    if (lower(l.name) == lower(text)) return l;
  return LogicSpec{axset_from_string(text), ""};
}

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Proved: return "proved";
    case Verdict::Refuted: return "refuted";
    case Verdict::FailedUnverified: return "failed-unverified";
    case Verdict::LimitExceeded: return "limit-exceeded";
  }
  return "error";
}

// ---- instance enumeration

namespace {

bool node_has(const Sequent& n, Formula f) { return std::binary_search(n.fs.begin(), n.fs.end(), f); }

// Calls visit for candidate circle instances at `p` in search order until
// visit returns true. Candidates failing the circle proviso are skipped.
bool for_instances_at(const Sequent& s, const Path& p, AxSet X, bool step1_only,
                      const std::vector<Path>* all,
                      const std::function<bool(RuleInstance&)>& visit) {
  const Sequent& nd = resolve(s, p);
  auto attempt = [&](Rule r, std::vector<Slot> act) {
    RuleInstance in = inst(r, s, std::move(act));
    in.circ = true;
    try {
      in.prems = premises_of(in);
    } catch (const MalformedInstance&) {
      return false;
    }
    return visit(in);
  };
  auto slots_with = [&](Op op, const std::function<bool(std::size_t, Formula)>& f) {
    for (std::size_t i = 0; i < nd.fs.size(); ++i) {
      if (nd.fs[i].op() != op || (i > 0 && nd.fs[i] == nd.fs[i - 1])) continue;
      if (f(i, nd.fs[i])) return true;
    }
    return false;
  };
  auto slot = [&](std::size_t i) { return Slot{p, static_cast<int>(i)}; };

  if (slots_with(Op::Or, [&](std::size_t i, Formula f) {
        if (node_has(nd, f.left()) && node_has(nd, f.right())) return false;
        return attempt(Rule::or_, {slot(i)});
      }))
    return true;
  if (slots_with(Op::And, [&](std::size_t i, Formula f) {
        if (node_has(nd, f.left()) || node_has(nd, f.right())) return false;
        return attempt(Rule::and_, {slot(i)});
      }))
    return true;
  if (slots_with(Op::Dia, [&](std::size_t i, Formula f) {
        for (std::uint32_t c = 0; c < nd.kids.size(); ++c)
          if (!node_has(nd.kids[c], f.body()) && attempt(Rule::dia_k_c, {slot(i), Slot{child_path(p, c), -1}}))
            return true;
        return false;
      }))
    return true;
  if (has(X, AX_T) && slots_with(Op::Dia, [&](std::size_t i, Formula f) {
        return !node_has(nd, f.body()) && attempt(Rule::dia_t_c, {slot(i)});
      }))
    return true;
  if (has(X, AX_B) && !p.empty() && slots_with(Op::Dia, [&](std::size_t i, Formula f) {
        return !node_has(resolve(s, parent_path(p)), f.body()) && attempt(Rule::dia_b_c, {slot(i)});
      }))
    return true;
  if (has(X, AX_4) && slots_with(Op::Dia, [&](std::size_t i, Formula f) {
        for (std::uint32_t c = 0; c < nd.kids.size(); ++c)
          if (!node_has(nd.kids[c], f) && attempt(Rule::dia_4_c, {slot(i), Slot{child_path(p, c), -1}}))
            return true;
        return false;
      }))
    return true;
  if (has(X, AX_5) && !p.empty() && slots_with(Op::Dia, [&](std::size_t i, Formula f) {
        for (const auto& t : *all)
          if (!node_has(resolve(s, t), f) && attempt(Rule::dia_5_c, {slot(i), Slot{t, -1}})) return true;
        return false;
      }))
    return true;
  if (step1_only) return false;
  if (slots_with(Op::Box, [&](std::size_t i, Formula f) {
        for (const auto& k : nd.kids)
          if (node_has(k, f.body())) return false;
        return attempt(Rule::box, {slot(i)});
      }))
    return true;
  if (has(X, AX_D) && nd.kids.empty() &&
      slots_with(Op::Dia, [&](std::size_t i, Formula) { return attempt(Rule::dia_d_c, {slot(i)}); }))
    return true;
  return false;
}

}  // namespace

std::vector<RuleInstance> circle_instances_at(const Sequent& s, const Path& node, AxSet X, bool step1_only) {
  auto all = all_paths(s);
  std::vector<RuleInstance> out;
  for_instances_at(s, node, X, step1_only, &all, [&](RuleInstance& in) {
    out.push_back(in);
    return false;
  });
  return out;
}

bool is_node_finished(const Sequent& s, const Path& node, AxSet X) {
  auto all = all_paths(s);
  return !for_instances_at(s, node, X, false, &all, [](RuleInstance&) { return true; });
}

bool is_finished(const Sequent& s, AxSet X) {
  auto all = all_paths(s);
  auto cyc = cyclic_leaves(s);
  for (const auto& p : all) {
    if (std::find(cyc.begin(), cyc.end(), p) != cyc.end()) continue;
    if (for_instances_at(s, p, X, false, &all, [](RuleInstance&) { return true; })) return false;
  }
  return true;
}

// ---- the search loop

namespace {

struct LimitHit {};

struct Engine {
  AxSet X;
  std::size_t limit;
  std::size_t bound;  // 2^|sf|, saturated
  SearchStats stats;
  std::optional<Sequent> failed;

  void count() {
    ++stats.instances;
    if (limit != 0 && stats.instances > limit) throw LimitHit{};
  }

  std::optional<RuleInstance> first_step1(const Sequent& s) {
    auto all = all_paths(s);
    std::optional<RuleInstance> found;
    for (const auto& p : all) {
      if (for_instances_at(s, p, X, true, &all, [&](RuleInstance& in) {
            found = std::move(in);
            return true;
          }))
        break;
    }
    return found;
  }

  // Step 2 as a chain of single-premise steps; empty when nothing applies.
  std::vector<RuleInstance> step2(Sequent s) {
    std::uint64_t counter = 1;
    assign_tags(s, counter);
    auto cyc = cyclic_leaves(s);
    struct Cand {
      std::uint64_t node;
      Formula f;
      Rule r;
    };
    std::vector<Cand> cands;
    for (const auto& p : all_paths(s)) {
      if (std::find(cyc.begin(), cyc.end(), p) != cyc.end()) continue;
      const Sequent& nd = resolve(s, p);
      for (std::size_t i = 0; i < nd.fs.size(); ++i)
        if (nd.fs[i].op() == Op::Box && (i == 0 || nd.fs[i] != nd.fs[i - 1]))
          cands.push_back({nd.tag, nd.fs[i], Rule::box});
      if (has(X, AX_D))
        for (std::size_t i = 0; i < nd.fs.size(); ++i)
          if (nd.fs[i].op() == Op::Dia) {
            cands.push_back({nd.tag, nd.fs[i], Rule::dia_d_c});
            break;
          }
    }
    std::vector<RuleInstance> chain;
    for (const auto& c : cands) {
      auto p = find_tag(s, c.node);
      if (!p) continue;
      const Sequent& nd = resolve(s, *p);
      int i = find_formula(nd, c.f);
      if (c.r == Rule::dia_d_c) {
        if (!nd.kids.empty()) continue;
      } else {
        bool blocked = false;
        for (const auto& k : nd.kids) blocked |= node_has(k, c.f.body());
        if (blocked) continue;
      }
      RuleInstance in = inst(c.r, s, {Slot{*p, i}});
      in.circ = true;
      try {
        in.prems = premises_of(in);
      } catch (const MalformedInstance&) {
        continue;
      }
      count();
      s = in.prems[0];
      chain.push_back(std::move(in));
    }
    for (auto& in : chain) {
      clear_tags(in.concl);
      for (auto& p : in.prems) clear_tags(p);
    }
    return chain;
  }

  static Proof fold(std::vector<RuleInstance>& chain, Proof top) {
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) top = make_proof_unchecked(std::move(*it), {top});
    chain.clear();
    return top;
  }

  // Returns a circle proof, or nullptr after recording the finished leaf.
  Proof run(Sequent s, std::size_t iter) {
    std::vector<RuleInstance> chain;
    while (true) {
      stats.iterations = std::max(stats.iterations, iter);
      if (iter > bound) throw std::logic_error("search exceeded the termination bound");
      if (auto ax = axiom_instance(s)) return fold(chain, make_proof_unchecked(std::move(*ax), {}));
      if (auto in = first_step1(s)) {
        count();
        if (in->rule == Rule::and_) {
          Proof a = run(in->prems[0], iter);
          if (!a) return nullptr;
          Proof b = run(in->prems[1], iter);
          if (!b) return nullptr;
          return fold(chain, make_proof_unchecked(std::move(*in), {a, b}));
        }
        s = in->prems[0];
        chain.push_back(std::move(*in));
        continue;
      }
      auto more = step2(s);
      if (more.empty()) {
        failed = s;
        return nullptr;
      }
      s = more.back().prems[0];
      for (auto& m : more) chain.push_back(std::move(m));
      ++iter;
    }
  }
};

std::vector<std::string> goal_atoms(const Sequent& s) {
  std::vector<std::string> out;
  for (Formula f : sequent_subformulas(s))
    if (f.is_atom() && !f.is_reserved()) out.push_back(f.name());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

SearchOutcome prove(const Sequent& goal_in, AxSet X, const SearchOptions& opts) {
  SearchOutcome out;
  Sequent goal = goal_in;
  clear_tags(goal);
  goal.normalize();
  if (!is_45_closed(X) && opts.auto_close_45) {
    AxSet c = closure45(X);
    out.notice = "axioms {" + axset_to_string(X) + "} are not 45-closed; using {" + axset_to_string(c) + "}";
    X = c;
  }
  out.X = X;
  Engine e;
  e.X = X;
  e.limit = opts.instance_limit;
  e.stats.sf_size = sequent_subformulas(goal).size();
  e.bound = e.stats.sf_size >= 63 ? SIZE_MAX : (std::size_t{1} << e.stats.sf_size);
  Proof circ;
  try {
    circ = e.run(goal, 1);
  } catch (const LimitHit&) {
    out.verdict = Verdict::LimitExceeded;
    out.stats = e.stats;
    return out;
  }
  out.stats = e.stats;
  if (circ) {
    out.verdict = Verdict::Proved;
    out.circle_proof = circ;
    if (opts.translate) out.proof = circle_to_base(circ);
    return out;
  }
  out.finished = set_sequent(*e.failed);
  out.cyclic = cyclic_leaves(out.finished);
  out.verdict = Verdict::FailedUnverified;
  if (is_45_closed(X) && opts.extract) {
    auto cm = extract_model(out.finished, X, goal_atoms(goal));
    if (!verify_countermodel(cm.model, cm.root, goal, X))
      throw std::logic_error("extracted countermodel does not verify");
    out.model = std::move(cm);
    out.verdict = Verdict::Refuted;
  } else if (is_45_closed(X)) {
    out.verdict = Verdict::Refuted;
  }
  return out;
}

SearchOutcome prove(Formula goal, AxSet X, const SearchOptions& opts) {
  Sequent s;
  s.add(goal);
  return prove(s, X, opts);
}

}  // namespace cube
