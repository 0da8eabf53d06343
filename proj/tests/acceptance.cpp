// Acceptance run: one PASS/FAIL line per criterion with wall time.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "cubeprover/corpus.hpp"
#include "cubeprover/io.hpp"
#include "cubeprover/transform.hpp"
#include "oracles.hpp"

using namespace cube;

namespace {

using Clock = std::chrono::steady_clock;

struct Result {
  bool ok = false;
  std::string detail;
};

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

Proof load(const char* name) { return proof_from_json(read_json_file(std::string(CUBE_FIXTURES) + "/" + name)); }

std::vector<AxSet> closed_sets() {
  std::vector<AxSet> out;
  for (AxSet X = 0; X <= kAllAxioms; ++X)
    if (is_45_closed(X)) out.push_back(X);
  return out;
}

Proof cut_at_root(const Sequent& concl, Formula A, Proof left, Proof right) {
  RuleInstance c = inst(Rule::cut, concl, {Slot{{}, -1}});
  c.cutf = A;
  return make_proof(c, {std::move(left), std::move(right)});
}

HilbertStep axiom_step(Axiom a, Formula f) {
  HilbertStep s;
  s.kind = HilbertStep::AxiomInstance;
  s.axiom = a;
  s.a = f;
  return s;
}

// Axiom instance followed by `length` modus ponens steps with propositional
// tautologies F -> F' where F' varies over a few shapes.
std::vector<HilbertStep> mp_chain(Axiom a, Formula atom, int length, int shape) {
  std::vector<HilbertStep> h = {axiom_step(a, atom)};
  Formula r = parse("r");
  for (int i = 0; i < length; ++i) {
    Formula F = hilbert_formula(h, h.size() - 1);
    Formula G;
    switch ((shape + i) % 3) {
      case 0: G = Formula::mk_or(F, r); break;
      case 1: G = Formula::mk_or(r, F); break;
      default: G = Formula::mk_and(F, F); break;
    }
    HilbertStep t;
    t.kind = HilbertStep::Tautology;
    t.a = implies(F, G);
    h.push_back(t);
    HilbertStep m;
    m.kind = HilbertStep::ModusPonens;
    m.from1 = static_cast<int>(h.size()) - 2;
    m.from2 = static_cast<int>(h.size()) - 1;
    h.push_back(m);
  }
  return h;
}

// Shared corpus from criterion 4.
std::vector<Formula> g_goals;
std::vector<LogicSpec> g_logics;
std::vector<CorpusEntry> g_entries;

Result c1_example() {
  Formula goal = parse("[](a | b) -> ([]a | <>b)");
  auto out = prove(goal, 0);
  if (out.verdict != Verdict::Proved) return {false, "verdict " + verdict_name(out.verdict)};
  auto rep = check_proof(out.proof, System::logical(0));
  if (!rep.ok) return {false, "emitted proof: " + rep.message};
  Proof fx = load("k_example.json");
  auto frep = check_proof(fx, System::logical(0));
  if (!frep.ok) return {false, "fixture: " + frep.message};
  if (fx->concl() != Sequent::of({goal})) return {false, "fixture conclusion differs"};
  return {true, "prove + check, fixture checks in K"};
}

Result c2_incompleteness() {
  SearchOptions open;
  open.auto_close_45 = false;
  struct Case {
    const char* f;
    AxSet X;
    Verdict want;
  };
  Case cases[] = {{"[]p -> [][]p", AX_T | AX_5, Verdict::FailedUnverified},
                  {"[]p -> [][]p", AX_T | AX_4 | AX_5, Verdict::Proved},
                  {"<>p -> []<>p", AX_B | AX_4, Verdict::FailedUnverified},
                  {"<>p -> []<>p", AX_B | AX_4 | AX_5, Verdict::Proved}};
  std::ostringstream os;
  bool ok = true;
  for (const auto& c : cases) {
    auto t0 = Clock::now();
    auto out = prove(parse(c.f), c.X, open);
    double ms = ms_since(t0);
    bool good = out.verdict == c.want && ms < 1000;
    ok = ok && good;
    os << "{" << axset_to_string(c.X) << "}:" << verdict_name(out.verdict) << " ";
  }
  return {ok, os.str()};
}

Result c3_structural() {
  Proof t5 = load("structural_t5.json");
  Proof b4 = load("structural_b4.json");
  auto r1 = check_proof(t5, System::structural(AX_T | AX_5));
  auto r2 = check_proof(b4, System::structural(AX_B | AX_4));
  bool ok = r1.ok && r2.ok && t5->concl() == Sequent::of({parse("[]p -> [][]p")}) &&
            b4->concl() == Sequent::of({parse("<>p -> []<>p")});
  return {ok, ok ? "both derivations check" : r1.message + " " + r2.message};
}

Result c4_termination() {
  g_goals = random_corpus(500, 2024);
  g_logics = cube_logics();
  g_entries = run_corpus(g_goals, g_logics, Exec::Parallel);
  auto s = summarize(g_entries);
  std::size_t depth_bad = 0;
  for (Formula g : g_goals)
    if (modal_depth(g) > 3) ++depth_bad;
  std::ostringstream os;
  os << g_goals.size() << " formulas x " << g_logics.size() << " logics: " << s.runs << " runs, " << s.proved
     << " proved, " << s.refuted << " refuted, " << s.failed << " failed, max iterations " << s.max_iterations
     << ", bound violations " << s.bound_violations;
  bool ok = g_goals.size() >= 500 && g_logics.size() == 15 && depth_bad == 0 && s.errors == 0 &&
            s.limit == 0 && s.bound_violations == 0 && s.runs == g_goals.size() * 15;
  return {ok, os.str()};
}

Result c5_countermodels() {
  std::size_t refuted = 0, small = 0, bad = 0, unconfirmed = 0;
  for (const auto& e : g_entries) {
    if (e.verdict != Verdict::Refuted) continue;
    ++refuted;
    const auto& m = *e.model;
    Formula goal = g_goals[e.goal];
    bool frame = verify_frame(m.model, e.X) && oracle::satisfies(oracle::to_matrix(m.model.rel), e.X);
    if (!frame || model_check(m.model, m.root, goal)) ++bad;
    if (m.model.num_states <= 3) {
      ++small;
      if (!brute_force_countermodel(goal, e.X, 3, Exec::Parallel).found) ++unconfirmed;
    }
  }
  std::ostringstream os;
  os << refuted << " refuted verified (" << bad << " bad); " << small << " with <=3 states, " << unconfirmed
     << " unconfirmed by enumeration";
  return {refuted > 0 && bad == 0 && unconfirmed == 0, os.str()};
}

Result c6_soundness() {
  std::size_t checked = 0, found = 0;
  for (const auto& e : g_entries) {
    if (e.verdict != Verdict::Proved || e.stats.sf_size > 5) continue;
    ++checked;
    if (brute_force_countermodel(g_goals[e.goal], e.X, 3, Exec::Parallel).found) ++found;
  }
  auto rep = rule_soundness_check(1000, 99);
  std::ostringstream os;
  os << checked << " small theorems, " << found << " with countermodels; rule soundness: " << rep.instances
     << " instances, " << rep.checks << " checks (" << rep.nonvacuous << " non-vacuous), " << rep.violations
     << " violations";
  return {checked > 0 && found == 0 && rep.instances >= 1000 && rep.violations == 0, os.str()};
}

Result c7_closures() {
  std::mt19937_64 rng(7);
  std::size_t n_rel = 0, mismatch = 0, serial_bad = 0;
  for (; n_rel < 1000; ++n_rel) {
    int n = 1 + static_cast<int>(rng() % 5);
    Relation r(n);
    for (int s = 0; s < n; ++s)
      for (int t = 0; t < n; ++t)
        if (rng() % 3 == 0) r.set(s, t);
    auto m = oracle::to_matrix(r);
    Relation e = close(r, AX_5);
    Relation te = close(r, AX_4 | AX_5);
    if (!(e == euclidean_connection_closure(r)) || oracle::to_matrix(e) != oracle::saturate(m, AX_5)) ++mismatch;
    if (!(te == transitive_euclidean_connection_closure(r)) ||
        oracle::to_matrix(te) != oracle::saturate(m, AX_4 | AX_5))
      ++mismatch;
    auto sc = oracle::to_matrix(serial_closure(r));
    if (!oracle::serial(sc)) ++serial_bad;
    for (AxSet X = 0; X <= kAllAxioms; ++X) {
      AxSet Y = X & ~AxSet(AX_D);
      if (oracle::satisfies(m, Y) && !oracle::satisfies(sc, Y)) ++serial_bad;
      if (oracle::to_matrix(close(r, X)) != oracle::saturate(m, X)) ++mismatch;
    }
  }
  std::ostringstream os;
  os << n_rel << " relations: " << mismatch << " closure mismatches, " << serial_bad
     << " serial-closure violations";
  return {mismatch == 0 && serial_bad == 0, os.str()};
}

Result c8_admissibility() {
  std::mt19937_64 rng(8);
  std::vector<const CorpusEntry*> proofs;
  for (const auto& e : g_entries)
    if (e.verdict == Verdict::Proved) proofs.push_back(&e);
  if (proofs.empty()) return {false, "no corpus proofs"};
  std::size_t apps = 0, fails = 0;
  std::size_t per_op[4] = {0, 0, 0, 0};
  std::string first;
  auto fail = [&](const std::string& why) {
    ++fails;
    if (first.empty()) first = why;
  };
  auto pick = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };
  while (apps < 1200) {
    const CorpusEntry& e = *proofs[pick(proofs.size())];
    const Proof& P = e.proof;
    System sys = System::logical(e.X);
    const Sequent& C = P->concl();
    auto paths = all_paths(C);
    int op = static_cast<int>(apps % 4);
    try {
      Proof in = P, out;
      if (op == 0) {
        Path a = paths[pick(paths.size())];
        Formula f = g_goals[pick(g_goals.size())];
        Sequent extra = rng() % 2 ? Sequent::of({f}) : Sequent::boxed(Sequent::of({f}));
        out = weaken(P, a, extra);
        if (out->concl() != graft(C, a, extra)) fail("weaken conclusion");
      } else if (op == 1) {
        Path a = paths[pick(paths.size())];
        const Sequent& node = resolve(C, a);
        Sequent dup;
        for (Formula f : node.fs)
          if (rng() % 2) dup.add(f);
        if (!node.kids.empty() && rng() % 2) dup.add_kid(node.kids[pick(node.kids.size())]);
        if (dup.empty()) {
          if (node.fs.empty()) continue;
          dup.add(node.fs[pick(node.fs.size())]);
        }
        dup.normalize();
        in = weaken(P, a, dup);
        out = contract(in, a, dup);
        if (out->concl() != C) fail("contract conclusion");
      } else if (op == 2) {
        out = necessitate(P);
        if (out->concl() != Sequent::boxed(C)) fail("necessitate conclusion");
      } else {
        std::vector<std::pair<Slot, Rule>> slots;
        for (const auto& a : paths) {
          const Sequent& node = resolve(C, a);
          for (std::size_t i = 0; i < node.fs.size(); ++i) {
            Op o = node.fs[i].op();
            if (o == Op::And) slots.push_back({Slot{a, static_cast<int>(i)}, Rule::and_});
            if (o == Op::Or) slots.push_back({Slot{a, static_cast<int>(i)}, Rule::or_});
            if (o == Op::Box) slots.push_back({Slot{a, static_cast<int>(i)}, Rule::box});
          }
        }
        if (slots.empty()) continue;
        auto [slot, rule] = slots[pick(slots.size())];
        out = invert(P, rule, slot, static_cast<int>(rng() % 2));
      }
      ++apps;
      ++per_op[op];
      auto rep = check_proof(out, sys);
      if (!rep.ok) fail("op " + std::to_string(op) + ": " + rep.message);
      if (out->depth > in->depth) fail("op " + std::to_string(op) + ": depth grew");
    } catch (const std::exception& ex) {
      ++apps;
      fail(std::string("op ") + std::to_string(op) + " threw: " + ex.what());
    }
  }
  std::ostringstream os;
  os << apps << " applications (weaken " << per_op[0] << ", contract " << per_op[1] << ", necessitate "
     << per_op[2] << ", invert " << per_op[3] << "), " << fails << " failures";
  if (!first.empty()) os << "; first: " << first;
  return {fails == 0 && apps >= 1000, os.str()};
}

Result c9_cut_logical() {
  std::mt19937_64 rng(9);
  std::size_t total = 0, fails = 0, min_per_set = SIZE_MAX;
  double worst = 0;
  std::string first;
  auto sets = closed_sets();
  for (AxSet X : sets) {
    std::vector<Proof> cuts;
    for (Formula g : g_goals) {
      if (cuts.size() >= 100) break;
      auto out = prove(g, X);
      if (out.verdict != Verdict::Proved) continue;
      const Proof& P = out.proof;
      Formula G = P->concl().fs.front();
      cuts.push_back(cut_at_root(P->concl(), G, weaken(P, {}, Sequent::of({G})),
                                 structural_to_logical(identity_proof(G), X)));
      Formula A = g_goals[rng() % g_goals.size()];
      cuts.push_back(cut_at_root(P->concl(), A, weaken(P, {}, Sequent::of({A})),
                                 weaken(P, {}, Sequent::of({negate(A)}))));
    }
    for (Axiom a : {AX_D, AX_T, AX_B, AX_4, AX_5}) {
      if (!has(X, a)) continue;
      for (int len = 1; len <= 2; ++len)
        cuts.push_back(structural_to_logical(hilbert_to_nested(mp_chain(a, parse("p"), len, len), a), X));
    }
    min_per_set = std::min(min_per_set, cuts.size());
    for (const Proof& c : cuts) {
      ++total;
      auto in = check_proof(c, System::logical(X, true));
      if (is_cut_free(c) || !in.ok) {
        ++fails;
        if (first.empty()) first = "{" + axset_to_string(X) + "}: input does not check: " + in.message;
        continue;
      }
      auto t0 = Clock::now();
      try {
        Proof e = eliminate_cuts_logical(c, X);
        double ms = ms_since(t0);
        worst = std::max(worst, ms);
        auto rep = check_proof(e, System::logical(X));
        if (!is_cut_free(e) || !rep.ok || e->concl() != c->concl() || ms > 30000) {
          ++fails;
          if (first.empty()) first = "{" + axset_to_string(X) + "}: " + rep.message;
        }
      } catch (const std::exception& ex) {
        ++fails;
        if (first.empty()) first = "{" + axset_to_string(X) + "} threw: " + ex.what();
      }
    }
  }
  std::ostringstream os;
  os << total << " cut proofs over " << sets.size() << " 45-closed sets (min " << min_per_set << " per set), "
     << fails << " failures, slowest " << static_cast<long>(worst) << " ms";
  if (!first.empty()) os << "; first: " << first;
  return {fails == 0 && min_per_set >= 100, os.str()};
}

bool foreign_str(const Proof& p, AxSet X) {
  for (Axiom a : {AX_D, AX_T, AX_B, AX_4, AX_5})
    if (!has(X, a) && uses_rule(p, str_rule(a))) return true;
  return false;
}

Result c10_cut_structural() {
  std::size_t total = 0, fails = 0;
  std::string first;
  for (Axiom a : {AX_D, AX_T, AX_B, AX_4, AX_5})
    for (const char* atom : {"p", "q", "r"})
      for (int len = 0; len <= 3; ++len)
        for (int shape = 0; shape < 3; ++shape) {
          if (len == 0 && shape > 0) continue;
          ++total;
          try {
            auto h = mp_chain(a, parse(atom), len, shape);
            Proof p = hilbert_to_nested(h, a);
            Proof e = eliminate_cuts_structural(p, a);
            auto rep = check_proof(e, System::structural(a));
            if (!is_cut_free(e) || !rep.ok || e->concl() != Sequent::of({hilbert_formula(h, h.size() - 1)}) ||
                foreign_str(e, a)) {
              ++fails;
              if (first.empty()) first = "{" + axset_to_string(a) + "} " + atom + " length " + std::to_string(len);
            }
          } catch (const std::exception& ex) {
            ++fails;
            if (first.empty()) first = "{" + axset_to_string(a) + "} threw: " + ex.what();
          }
        }
  std::ostringstream os;
  os << total << " chains over d,t,b,4,5, " << fails << " failures";
  if (!first.empty()) os << "; first: " << first;
  return {fails == 0, os.str()};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Result()> run;
    double limit_ms;
  };
  std::vector<Criterion> all = {
      {1, "K example", c1_example, 1000},
      {2, "incompleteness verdicts", c2_incompleteness, 4000},
      {3, "structural derivations", c3_structural, 0},
      {4, "termination bound", c4_termination, 300000},
      {5, "countermodel soundness", c5_countermodels, 0},
      {6, "proof soundness", c6_soundness, 0},
      {7, "closure oracles", c7_closures, 0},
      {8, "admissibility", c8_admissibility, 0},
      {9, "logical cut elimination", c9_cut_logical, 0},
      {10, "structural cut elimination", c10_cut_structural, 0},
  };
  int failed = 0;
  for (const auto& c : all) {
    auto t0 = Clock::now();
    Result r;
    try {
      r = c.run();
    } catch (const std::exception& ex) {
      r = {false, std::string("exception: ") + ex.what()};
    }
    double ms = ms_since(t0);
    if (c.limit_ms > 0 && ms > c.limit_ms) {
      r.ok = false;
      r.detail += " (time limit exceeded)";
    }
    if (!r.ok) ++failed;
    std::printf("[%s] criterion %2d %-27s %10.1f ms  %s\n", r.ok ? "PASS" : "FAIL", c.id, c.name, ms,
                r.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(all.size()) - failed, all.size());
  return failed == 0 ? 0 : 1;
}
