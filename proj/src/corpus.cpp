#include "cubeprover/corpus.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <unordered_map>

#include "cubeprover/io.hpp"

namespace cube {

namespace {

std::uint64_t pick(std::mt19937_64& rng, std::uint64_t n) { return rng() % n; }

// ---- independent evaluator over small models

struct Compiled {
  struct N {
    Op op = Op::Atom;
    int a = -1, b = -1;
    int atom = -1;
    bool neg = false;
  };
  std::vector<N> nodes;  // post-order, operands first
  std::vector<std::string> atoms;
};

int compile_into(Formula f, Compiled& c, std::unordered_map<Formula, int>& memo) {
  auto it = memo.find(f);
  if (it != memo.end()) return it->second;
  Compiled::N n;
  n.op = f.op();
  switch (f.op()) {
    case Op::Atom: {
      auto pos = std::find(c.atoms.begin(), c.atoms.end(), f.name());
      if (pos == c.atoms.end()) {
        c.atoms.push_back(f.name());
        pos = c.atoms.end() - 1;
      }
      n.atom = static_cast<int>(pos - c.atoms.begin());
      n.neg = f.negated();
      break;
    }
    case Op::And:
    case Op::Or:
      n.a = compile_into(f.left(), c, memo);
      n.b = compile_into(f.right(), c, memo);
      break;
    case Op::Box:
    case Op::Dia:
      n.a = compile_into(f.body(), c, memo);
      break;
  }
  c.nodes.push_back(n);
  int id = static_cast<int>(c.nodes.size()) - 1;
  memo.emplace(f, id);
  return id;
}

// Compiles several formulas sharing one atom table; returns their node ids.
std::vector<int> compile(const std::vector<Formula>& fs, Compiled& c) {
  std::unordered_map<Formula, int> memo;
  std::vector<int> roots;
  for (Formula f : fs) roots.push_back(compile_into(f, c, memo));
  return roots;
}

struct SmallModel {
  int n = 0;
  std::uint32_t full = 0;
  std::uint32_t succ[8] = {};
};

SmallModel model_of_code(int n, std::uint32_t code) {
  SmallModel m;
  m.n = n;
  m.full = (1u << n) - 1;
  for (int s = 0; s < n; ++s) m.succ[s] = (code >> (s * n)) & m.full;
  return m;
}

bool rel(const SmallModel& m, int s, int t) { return (m.succ[s] >> t) & 1u; }

// Frame conditions by direct quantification.
bool frame_ok(const SmallModel& m, AxSet X) {
  int n = m.n;
  for (int s = 0; s < n; ++s) {
    if (has(X, AX_D) && m.succ[s] == 0) return false;
    if (has(X, AX_T) && !rel(m, s, s)) return false;
    for (int t = 0; t < n; ++t) {
      if (!rel(m, s, t)) continue;
      if (has(X, AX_B) && !rel(m, t, s)) return false;
      for (int u = 0; u < n; ++u) {
        if (has(X, AX_4) && rel(m, t, u) && !rel(m, s, u)) return false;
        if (has(X, AX_5) && rel(m, s, u) && !rel(m, t, u)) return false;
      }
    }
  }
  return true;
}

// Truth sets (state bitmasks) of every compiled node.
void evaluate(const Compiled& c, const SmallModel& m, std::uint32_t val, std::vector<std::uint32_t>& out) {
  out.resize(c.nodes.size());
  for (std::size_t i = 0; i < c.nodes.size(); ++i) {
    const auto& nd = c.nodes[i];
    std::uint32_t r = 0;
    switch (nd.op) {
      case Op::Atom:
        r = (val >> (nd.atom * m.n)) & m.full;
        if (nd.neg) r = ~r & m.full;
        break;
      case Op::And: r = out[static_cast<std::size_t>(nd.a)] & out[static_cast<std::size_t>(nd.b)]; break;
      case Op::Or: r = out[static_cast<std::size_t>(nd.a)] | out[static_cast<std::size_t>(nd.b)]; break;
      case Op::Box: {
        std::uint32_t a = out[static_cast<std::size_t>(nd.a)];
        for (int s = 0; s < m.n; ++s)
          if ((m.succ[s] & ~a) == 0) r |= 1u << s;
        break;
      }
      case Op::Dia: {
        std::uint32_t a = out[static_cast<std::size_t>(nd.a)];
        for (int s = 0; s < m.n; ++s)
          if (m.succ[s] & a) r |= 1u << s;
        break;
      }
    }
    out[i] = r;
  }
}

// First falsifying valuation for one relation, or none.
std::optional<std::uint32_t> first_falsifying(const Compiled& c, int root, const SmallModel& m,
                                              std::vector<std::uint32_t>& buf) {
  std::uint64_t nval = std::uint64_t{1} << (c.atoms.size() * static_cast<std::size_t>(m.n));
  for (std::uint64_t v = 0; v < nval; ++v) {
    evaluate(c, m, static_cast<std::uint32_t>(v), buf);
    if (buf[static_cast<std::size_t>(root)] != m.full) return static_cast<std::uint32_t>(v);
  }
  return std::nullopt;
}

// ---- random generation

Formula gen(std::mt19937_64& rng, const GenOptions& o, int mdepth, int& budget) {
  static const char* names[] = {"p", "q", "r", "s", "u", "v"};
  int na = std::clamp(o.num_atoms, 1, 6);
  if (budget <= 0 || pick(rng, 4) == 0) return Formula::atom(names[pick(rng, static_cast<std::uint64_t>(na))], pick(rng, 3) == 0);
  --budget;
  int k = static_cast<int>(pick(rng, 10));
  if (mdepth >= o.max_modal_depth && k >= 6) k = static_cast<int>(pick(rng, 6));
  switch (k) {
    case 0: case 1: {
      Formula a = gen(rng, o, mdepth, budget);
      return Formula::mk_and(a, gen(rng, o, mdepth, budget));
    }
    case 2: case 3: {
      Formula a = gen(rng, o, mdepth, budget);
      return Formula::mk_or(a, gen(rng, o, mdepth, budget));
    }
    case 4: case 5: {
      Formula a = gen(rng, o, mdepth, budget);
      return implies(a, gen(rng, o, mdepth, budget));
    }
    case 6: case 7: return Formula::box(gen(rng, o, mdepth + 1, budget));
    default: return Formula::dia(gen(rng, o, mdepth + 1, budget));
  }
}

// ---- corpus runs

CorpusEntry run_one(Formula goal, const LogicSpec& logic, const SearchOptions& opts) {
  CorpusEntry e;
  auto t0 = std::chrono::steady_clock::now();
  try {
    SearchOutcome out = prove(goal, logic.axioms, opts);
    e.X = out.X;
    e.verdict = out.verdict;
    e.stats = out.stats;
    e.bound_ok = out.stats.sf_size >= 63 || out.stats.iterations <= (std::size_t{1} << out.stats.sf_size);
    if (out.verdict == Verdict::Proved) {
      e.proof = out.proof;
      e.artifact_ok = out.proof && check_proof(out.proof, System::logical(out.X)).ok &&
                      out.proof->concl() == Sequent::of({goal});
    } else if (out.verdict == Verdict::Refuted && out.model) {
      e.model = out.model;
      e.artifact_ok = verify_countermodel(out.model->model, out.model->root, Sequent::of({goal}), out.X);
    }
  } catch (const std::exception& ex) {
    e.error = ex.what();
  }
  e.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return e;
}

bool proof_equal(const Proof& a, const Proof& b) {
  if (!a || !b) return !a && !b;
  if (a.get() == b.get()) return true;
  const auto& x = a->step;
  const auto& y = b->step;
  if (x.rule != y.rule || x.circ != y.circ || x.act != y.act || x.concl != y.concl) return false;
  if (a->subs.size() != b->subs.size()) return false;
  for (std::size_t i = 0; i < a->subs.size(); ++i)
    if (!proof_equal(a->subs[i], b->subs[i])) return false;
  return true;
}

}  // namespace

int modal_depth(Formula f) {
  switch (f.op()) {
    case Op::Atom: return 0;
    case Op::And:
    case Op::Or: return std::max(modal_depth(f.left()), modal_depth(f.right()));
    default: return 1 + modal_depth(f.body());
  }
}

Formula random_formula(std::mt19937_64& rng, const GenOptions& opts) {
  int budget = 1 + static_cast<int>(pick(rng, static_cast<std::uint64_t>(std::max(1, opts.max_connectives))));
  if (opts.max_modal_depth < 3 || pick(rng, 3) != 0) return gen(rng, opts, 0, budget);
  // Modal schema instances over small operands, valid in some logics only.
  GenOptions sub{1, opts.num_atoms, 1};
  int b1 = 1, b2 = 1;
  Formula a = gen(rng, sub, 0, b1);
  Formula b = gen(rng, sub, 0, b2);
  using F = Formula;
  switch (pick(rng, 10)) {
    case 0: return implies(F::box(a), a);
    case 1: return implies(a, F::dia(a));
    case 2: return implies(F::box(a), F::dia(a));
    case 3: return implies(F::box(a), F::box(F::box(a)));
    case 4: return implies(F::dia(a), F::box(F::dia(a)));
    case 5: return implies(a, F::box(F::dia(a)));
    case 6: return implies(F::dia(F::box(a)), a);
    case 7: return implies(F::box(F::mk_or(a, b)), F::mk_or(F::box(a), F::dia(b)));
    case 8: return implies(F::mk_and(F::box(a), F::dia(b)), F::dia(F::mk_and(a, b)));
    default: return implies(F::dia(F::dia(a)), F::dia(a));
  }
}

std::vector<Formula> random_corpus(std::size_t count, std::uint64_t seed, const GenOptions& opts) {
  std::mt19937_64 rng(seed);
  std::vector<Formula> out;
  std::unordered_map<Formula, bool> seen;
  std::size_t attempts = 0;
  while (out.size() < count && attempts < count * 50) {
    ++attempts;
    Formula f = random_formula(rng, opts);
    if (seen.emplace(f, true).second) out.push_back(f);
  }
  return out;
}

std::vector<CorpusEntry> run_corpus(const std::vector<Formula>& goals, const std::vector<LogicSpec>& logics,
                                    Exec exec, const SearchOptions& opts) {
  const long total = static_cast<long>(goals.size() * logics.size());
  std::vector<CorpusEntry> out(static_cast<std::size_t>(total));
  auto job = [&](long k) {
    auto i = static_cast<std::size_t>(k) / logics.size();
    auto j = static_cast<std::size_t>(k) % logics.size();
    CorpusEntry e = run_one(goals[i], logics[j], opts);
    e.goal = i;
    e.logic = j;
    out[static_cast<std::size_t>(k)] = std::move(e);
  };
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic, 4)
    for (long k = 0; k < total; ++k) job(k);
  } else {
    for (long k = 0; k < total; ++k) job(k);
  }
  return out;
}

CorpusSummary summarize(const std::vector<CorpusEntry>& entries) {
  CorpusSummary s;
  for (const auto& e : entries) {
    ++s.runs;
    s.millis += e.millis;
    if (!e.error.empty()) {
      ++s.errors;
      continue;
    }
    switch (e.verdict) {
      case Verdict::Proved: ++s.proved; break;
      case Verdict::Refuted: ++s.refuted; break;
      case Verdict::FailedUnverified: ++s.failed; break;
      case Verdict::LimitExceeded: ++s.limit; break;
    }
    if (!e.bound_ok) ++s.bound_violations;
    if ((e.verdict == Verdict::Proved || e.verdict == Verdict::Refuted) && !e.artifact_ok) ++s.artifact_failures;
    s.max_iterations = std::max(s.max_iterations, e.stats.iterations);
  }
  return s;
}

bool same_results(const std::vector<CorpusEntry>& a, const std::vector<CorpusEntry>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto& x = a[i];
    const auto& y = b[i];
    if (x.goal != y.goal || x.logic != y.logic || x.X != y.X || x.verdict != y.verdict || x.error != y.error ||
        x.bound_ok != y.bound_ok || x.artifact_ok != y.artifact_ok || x.stats.iterations != y.stats.iterations ||
        x.stats.instances != y.stats.instances || x.stats.sf_size != y.stats.sf_size)
      return false;
    if (!proof_equal(x.proof, y.proof)) return false;
    if (x.model.has_value() != y.model.has_value()) return false;
    if (x.model && model_to_json(x.model->model, x.model->root) != model_to_json(y.model->model, y.model->root))
      return false;
  }
  return true;
}

// ---- brute force

KripkeModel BruteForceResult::model() const {
  KripkeModel m;
  m.num_states = states;
  m.origin.assign(static_cast<std::size_t>(states), "");
  m.rel = Relation(states);
  for (int s = 0; s < states; ++s)
    for (int t = 0; t < states; ++t)
      if ((relation >> (s * states + t)) & 1u) m.rel.set(s, t);
  for (std::size_t a = 0; a < atoms.size(); ++a) {
    auto& v = m.val[atoms[a]];
    for (int s = 0; s < states; ++s)
      if ((valuation >> (static_cast<int>(a) * states + s)) & 1u) v.push_back(s);
  }
  return m;
}

std::size_t count_frames(int n, AxSet X) {
  std::size_t c = 0;
  std::uint32_t codes = 1u << (n * n);
  for (std::uint32_t code = 0; code < codes; ++code)
    if (frame_ok(model_of_code(n, code), X)) ++c;
  return c;
}

BruteForceResult brute_force_countermodel(Formula goal, AxSet X, int max_states, Exec exec) {
  Compiled c;
  int root = compile({goal}, c).front();
  if (max_states < 1 || max_states > 5) throw std::invalid_argument("brute force supports 1 to 5 states");
  BruteForceResult res;
  res.atoms = c.atoms;
  for (int n = 1; n <= max_states; ++n) {
    if (c.atoms.size() * static_cast<std::size_t>(n) > 24) throw std::invalid_argument("too many atoms for brute force");
    const long codes = 1L << (n * n);
    constexpr std::uint64_t none = std::numeric_limits<std::uint64_t>::max();
    std::uint64_t best = none;
    if (exec == Exec::Parallel) {
#pragma omp parallel
      {
        std::vector<std::uint32_t> buf;
#pragma omp for schedule(dynamic, 16) reduction(min : best)
        for (long code = 0; code < codes; ++code) {
          SmallModel m = model_of_code(n, static_cast<std::uint32_t>(code));
          if (!frame_ok(m, X)) continue;
          if (auto v = first_falsifying(c, root, m, buf))
            best = std::min(best, (static_cast<std::uint64_t>(code) << 32) | *v);
        }
      }
    } else {
      std::vector<std::uint32_t> buf;
      for (long code = 0; code < codes && best == none; ++code) {
        SmallModel m = model_of_code(n, static_cast<std::uint32_t>(code));
        if (!frame_ok(m, X)) continue;
        if (auto v = first_falsifying(c, root, m, buf)) best = (static_cast<std::uint64_t>(code) << 32) | *v;
      }
    }
    if (best != none) {
      res.found = true;
      res.states = n;
      res.relation = static_cast<std::uint32_t>(best >> 32);
      res.valuation = static_cast<std::uint32_t>(best & 0xffffffffu);
      SmallModel m = model_of_code(n, res.relation);
      std::vector<std::uint32_t> buf;
      evaluate(c, m, res.valuation, buf);
      std::uint32_t bad = ~buf[static_cast<std::size_t>(root)] & m.full;
      while (!((bad >> res.root) & 1u)) ++res.root;
      return res;
    }
  }
  return res;
}

// ---- rule soundness

namespace {

struct RuleCase {
  Rule rule;
  AxSet X;
};

const std::vector<RuleCase>& soundness_cases() {
  static const std::vector<RuleCase> cases = {
      {Rule::k, 0},          {Rule::dia_k_c, 0},    {Rule::dia_d_c, AX_D}, {Rule::dia_t_c, AX_T},
      {Rule::dia_b_c, AX_B}, {Rule::dia_4_c, AX_4}, {Rule::dia_5_c, AX_5}, {Rule::str_d, AX_D},
      {Rule::str_t, AX_T},   {Rule::str_b, AX_B},   {Rule::str_4, AX_4},   {Rule::str_5, AX_5},
  };
  return cases;
}

Sequent random_tree(std::mt19937_64& rng) {
  GenOptions small{2, 2, 2};
  int nodes = 1 + static_cast<int>(pick(rng, 4));
  Sequent root;
  std::vector<Path> paths{Path{}};
  for (int i = 1; i < nodes; ++i) {
    Path parent = paths[pick(rng, paths.size())];
    Sequent& p = resolve_mut(root, parent);
    p.add_kid(Sequent{});
    paths.push_back(child_path(parent, static_cast<std::uint32_t>(p.kids.size() - 1)));
  }
  for (const auto& p : paths) {
    int k = static_cast<int>(pick(rng, 3));
    for (int i = 0; i < k; ++i) resolve_mut(root, p).add(random_formula(rng, small));
  }
  // A diamond formula somewhere, so that diamond rules have a principal formula.
  const Path& d = paths[pick(rng, paths.size())];
  resolve_mut(root, d).add(Formula::dia(random_formula(rng, small)));
  root.normalize();
  return root;
}

Sequent random_part(std::mt19937_64& rng, const Sequent& node, long exclude_kid) {
  Sequent d;
  for (Formula f : node.fs)
    if (pick(rng, 2)) d.add(f);
  for (std::size_t k = 0; k < node.kids.size(); ++k)
    if (static_cast<long>(k) != exclude_kid && pick(rng, 2)) d.add_kid(node.kids[k]);
  return d;
}

std::optional<RuleInstance> random_instance(std::mt19937_64& rng, Rule rule) {
  for (int attempt = 0; attempt < 200; ++attempt) {
    Sequent s = random_tree(rng);
    auto paths = all_paths(s);
    RuleInstance r;
    if (rule == Rule::str_t) {
      Path y = paths[pick(rng, paths.size())];
      r = inst(rule, s, {Slot{y, -1}});
      r.delta = random_part(rng, resolve(s, y), -1);
    } else if (rule == Rule::str_b) {
      std::vector<Path> inner;
      for (const auto& p : paths)
        if (!resolve(s, p).kids.empty()) inner.push_back(p);
      if (inner.empty()) continue;
      Path n = inner[pick(rng, inner.size())];
      auto c = static_cast<std::uint32_t>(pick(rng, resolve(s, n).kids.size()));
      r = inst(rule, s, {Slot{n, -1}, Slot{child_path(n, c), -1}});
      r.delta = random_part(rng, resolve(s, n), c);
    } else {
      System sys;
      sys.fam = Family::Custom;
      sys.rules.set(static_cast<std::size_t>(rule));
      auto all = applicable_instances(s, sys);
      if (all.empty()) continue;
      r = all[pick(rng, all.size())];
    }
    try {
      r.prems = premises_of(r);
    } catch (const MalformedInstance&) {
      continue;
    }
    return r;
  }
  return std::nullopt;
}

SmallModel random_frame(std::mt19937_64& rng, int max_states, AxSet X) {
  int n = 1 + static_cast<int>(pick(rng, static_cast<std::uint64_t>(max_states)));
  Relation r(n);
  for (int s = 0; s < n; ++s)
    for (int t = 0; t < n; ++t)
      if (pick(rng, 3) == 0) r.set(s, t);
  Relation c = close(r, X);
  SmallModel m;
  m.n = n;
  m.full = (1u << n) - 1;
  for (int s = 0; s < n; ++s)
    for (int t = 0; t < n; ++t)
      if (c.get(s, t)) m.succ[s] |= 1u << t;
  return m;
}

}  // namespace

SoundnessReport rule_soundness_check(std::size_t instances, std::uint64_t seed, int max_states,
                                     int models_per_instance) {
  if (max_states < 1 || max_states > 5) throw std::invalid_argument("rule soundness supports 1 to 5 states");
  std::mt19937_64 rng(seed);
  SoundnessReport rep;
  const auto& cases = soundness_cases();
  std::vector<std::uint32_t> buf;
  while (rep.instances < instances) {
    const RuleCase& rc = cases[rep.instances % cases.size()];
    auto r = random_instance(rng, rc.rule);
    if (!r) throw std::runtime_error("could not generate an instance of " + rule_name(rc.rule));
    ++rep.instances;
    ++rep.per_rule[rule_name(rc.rule)];
    std::vector<Formula> fs{corresponding_formula(r->concl)};
    for (const auto& p : r->prems) fs.push_back(corresponding_formula(p));
    Compiled c;
    auto roots = compile(fs, c);
    for (int k = 0; k < models_per_instance; ++k) {
      SmallModel m = random_frame(rng, max_states, rc.X);
      if (!frame_ok(m, rc.X)) throw std::logic_error("random frame violates its condition");
      auto val = static_cast<std::uint32_t>(pick(rng, std::uint64_t{1} << (c.atoms.size() * static_cast<std::size_t>(m.n))));
      evaluate(c, m, val, buf);
      std::uint32_t prem = m.full;
      for (std::size_t i = 1; i < roots.size(); ++i) prem &= buf[static_cast<std::size_t>(roots[i])];
      std::uint32_t concl = buf[static_cast<std::size_t>(roots[0])];
      rep.checks += static_cast<std::size_t>(m.n);
      for (int s = 0; s < m.n; ++s) {
        if (!((prem >> s) & 1u)) continue;
        ++rep.nonvacuous;
        if ((concl >> s) & 1u) continue;
        ++rep.violations;
        if (rep.samples.size() < 5) rep.samples.push_back(rule_name(rc.rule) + ": " + print(r->concl));
      }
    }
  }
  return rep;
}

}  // namespace cube
