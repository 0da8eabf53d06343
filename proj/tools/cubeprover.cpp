// Command-line front end: prove, check, elim, model, corpus.
// Exit codes: 0 proved / valid, 1 refuted / invalid, 2 failed-unverified,
// 3 error or resource limit.

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "cubeprover/corpus.hpp"
#include "cubeprover/io.hpp"
#include "cubeprover/transform.hpp"

using namespace cube;

namespace {

enum Exit { kProved = 0, kRefuted = 1, kUnverified = 2, kError = 3 };

struct Common {
  std::string logic = "K";
  bool no_close45 = false;
  std::string system = "logical";
  std::string out;
  std::string dot;
  bool trace = false;
  long limit = -1;
};

void emit(const json& report) { std::cout << report.dump() << std::endl; }

std::size_t effective_limit(const Common& c) {
  if (c.limit >= 0) return static_cast<std::size_t>(c.limit);
  if (const char* env = std::getenv("CUBEPROVER_LIMIT")) {
    try {
      return static_cast<std::size_t>(std::stoul(env));
    } catch (const std::exception&) {
      throw std::invalid_argument(std::string("CUBEPROVER_LIMIT is not a number: ") + env);
    }
  }
  return 0;
}

bool structural(const Common& c) {
  if (c.system == "structural") return true;
  if (c.system == "logical") return false;
  throw std::invalid_argument("--system must be logical or structural");
}

// Stores the artifact in --out, or inline in the report.
void attach(json& report, const Common& c, const char* key, const json& artifact) {
  if (c.out.empty()) {
    report[key] = artifact;
  } else {
    write_file_atomic(c.out, artifact.dump(2) + "\n");
    report["artifact"] = c.out;
  }
}

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

int cmd_prove(const std::string& text, const Common& c) {
  auto t0 = std::chrono::steady_clock::now();
  Formula goal = parse(text);
  LogicSpec logic = parse_logic(c.logic);
  SearchOptions opts;
  opts.auto_close_45 = !c.no_close45;
  opts.instance_limit = effective_limit(c);
  bool st = structural(c);
  SearchOutcome out = prove(goal, logic.axioms, opts);

  json report;
  report["goal"] = print(goal);
  report["logic"] = logic.name.empty() ? axset_to_string(logic.axioms) : logic.name;
  report["axioms"] = axset_to_string(out.X);
  if (!out.notice.empty()) {
    report["notice"] = out.notice;
    std::cerr << out.notice << "\n";
  }
  report["stats"] = {{"iterations", out.stats.iterations},
                     {"instances", out.stats.instances},
                     {"sf_size", out.stats.sf_size}};
  int code = kError;
  switch (out.verdict) {
    case Verdict::Proved: {
      Proof p = out.proof;
      System sys = System::logical(out.X);
      if (st) {
        p = logical_to_structural(p, out.X);
        sys = System::structural(out.X);
      }
      auto rep = check_proof(p, sys);
      if (!rep.ok) throw std::logic_error("emitted proof fails the checker: " + rep.message);
      report["verdict"] = "proved";
      report["system"] = sys.describe();
      attach(report, c, "proof", proof_to_json(p));
      code = kProved;
      break;
    }
    case Verdict::Refuted: {
      const Countermodel& m = *out.model;
      if (!verify_countermodel(m.model, m.root, Sequent::of({goal}), out.X))
        throw std::logic_error("extracted countermodel fails verification");
      report["verdict"] = "refuted";
      if (!c.dot.empty()) {
        write_file_atomic(c.dot, model_to_dot(m.model, m.root));
        report["dot"] = c.dot;
      }
      attach(report, c, "model", model_to_json(m.model, m.root));
      code = kRefuted;
      break;
    }
    case Verdict::FailedUnverified:
      report["verdict"] = "failed-unverified";
      report["finished"] = print(out.finished);
      code = kUnverified;
      break;
    case Verdict::LimitExceeded:
      report["verdict"] = "error";
      report["error"] = "instance limit exceeded";
      code = kError;
      break;
  }
  if (c.trace && out.verdict != Verdict::Proved) std::cerr << "finished leaf: " << print(out.finished) << "\n";
  report["stats"]["wall_ms"] = ms_since(t0);
  emit(report);
  return code;
}

System checking_system(const Common& c, AxSet X, bool with_cut) {
  if (structural(c)) {
    System s = System::structural(X, with_cut);
    return with_cut ? s.with(Rule::nec).with(Rule::wk) : s;
  }
  return System::logical(X, with_cut);
}

int cmd_check(const std::string& file, const Common& c) {
  Proof p = proof_from_json(read_json_file(file));
  AxSet X = parse_logic(c.logic).axioms;
  System sys = checking_system(c, X, true);
  auto rep = check_proof(p, sys);
  json report;
  report["file"] = file;
  report["system"] = sys.describe();
  report["valid"] = rep.ok;
  if (!rep.ok) {
    report["message"] = rep.message;
    report["where"] = rep.where;
  } else {
    report["conclusion"] = print(p->concl());
    report["depth"] = p->depth;
    report["size"] = p->size;
    report["max_cut_rank"] = max_cut_rank(p);
    report["cut_free"] = is_cut_free(p);
  }
  emit(report);
  return rep.ok ? kProved : kRefuted;
}

int cmd_elim(const std::string& file, const Common& c) {
  auto t0 = std::chrono::steady_clock::now();
  Proof p = proof_from_json(read_json_file(file));
  AxSet X = parse_logic(c.logic).axioms;
  bool st = structural(c);
  auto in = check_proof(p, checking_system(c, X, true));
  if (!in.ok) throw std::invalid_argument("input proof does not check: " + in.message);
  ElimTrace trace;
  Proof q = st ? eliminate_cuts_structural(p, X, &trace) : eliminate_cuts_logical(p, X, &trace);
  System target = checking_system(c, X, false);
  auto rep = check_proof(q, target);
  json report;
  report["file"] = file;
  report["system"] = target.describe();
  if (!rep.ok || !is_cut_free(q) || q->concl() != p->concl()) {
    report["verdict"] = "failed-unverified";
    report["message"] = rep.ok ? "output is not a cut-free proof of the input conclusion" : rep.message;
    emit(report);
    return kUnverified;
  }
  report["verdict"] = "proved";
  report["size_in"] = p->size;
  report["size_out"] = q->size;
  report["max_cut_rank_in"] = max_cut_rank(p);
  if (c.trace)
    for (const auto& s : trace) emit({{"phase", s.phase}, {"size", s.size}, {"max_rank", s.max_rank}});
  attach(report, c, "proof", proof_to_json(q));
  report["wall_ms"] = ms_since(t0);
  emit(report);
  return kProved;
}

int cmd_model(const std::string& file, const std::string& text, const Common& c, bool logic_given) {
  Countermodel m = model_from_json(read_json_file(file));
  Formula f = parse(text);
  bool sat = model_check(m.model, m.root, f);
  json report;
  report["file"] = file;
  report["formula"] = print(f);
  report["root"] = m.root;
  report["result"] = sat ? "satisfied at root" : "falsified at root";
  if (logic_given) report["frame_ok"] = verify_frame(m.model, parse_logic(c.logic).axioms);
  if (!c.dot.empty()) {
    write_file_atomic(c.dot, model_to_dot(m.model, m.root));
    report["dot"] = c.dot;
  }
  emit(report);
  return kProved;
}

int cmd_corpus(std::size_t count, std::uint64_t seed, bool serial, const Common& c) {
  SearchOptions opts;
  opts.instance_limit = effective_limit(c);
  auto goals = random_corpus(count, seed);
  auto logics = cube_logics();
  auto t0 = std::chrono::steady_clock::now();
  auto entries = run_corpus(goals, logics, serial ? Exec::Serial : Exec::Parallel, opts);
  double wall = ms_since(t0);
  std::vector<std::vector<CorpusEntry>> by_logic(logics.size());
  for (auto& e : entries) by_logic[e.logic].push_back(e);
  std::printf("%-8s %-10s %7s %7s %7s %7s %7s %8s %6s\n", "logic", "axioms", "proved", "refuted", "failed",
              "limit", "errors", "max-iter", "bound");
  bool ok = true;
  for (std::size_t j = 0; j < logics.size(); ++j) {
    auto s = summarize(by_logic[j]);
    ok = ok && s.errors == 0 && s.bound_violations == 0 && s.artifact_failures == 0;
    std::printf("%-8s %-10s %7zu %7zu %7zu %7zu %7zu %8zu %6s\n", logics[j].name.c_str(),
                axset_to_string(logics[j].axioms).c_str(), s.proved, s.refuted, s.failed, s.limit, s.errors,
                s.max_iterations, s.bound_violations == 0 ? "ok" : "FAIL");
  }
  auto s = summarize(entries);
  std::printf("total: %zu runs, %zu proved, %zu refuted, %zu artifact failures, %.0f ms\n", s.runs, s.proved,
              s.refuted, s.artifact_failures, wall);
  return ok ? kProved : kError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nested-sequent prover for the modal cube"};
  app.require_subcommand(1);
  Common c;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--logic", c.logic, "cube logic name or axiom list such as d,t,4");
    sub->add_flag("--no-close45", c.no_close45, "do not close the axiom set under 4 and 5");
    sub->add_option("--system", c.system, "logical or structural")->check(CLI::IsMember({"logical", "structural"}));
    sub->add_option("--out", c.out, "artifact file");
    sub->add_option("--dot", c.dot, "DOT file for models");
    sub->add_flag("--trace", c.trace, "print progress information");
    sub->add_option("--limit", c.limit, "cap on rule applications (0: none)");
  };

  std::string formula, file;
  auto* prove_cmd = app.add_subcommand("prove", "search for a proof or a countermodel");
  prove_cmd->add_option("formula", formula, "goal formula")->required();
  common(prove_cmd);

  auto* check_cmd = app.add_subcommand("check", "check a proof file");
  check_cmd->add_option("proof", file, "proof JSON")->required();
  common(check_cmd);

  auto* elim_cmd = app.add_subcommand("elim", "eliminate cuts from a proof file");
  elim_cmd->add_option("proof", file, "proof JSON")->required();
  common(elim_cmd);

  auto* model_cmd = app.add_subcommand("model", "evaluate a formula at the root of a model");
  model_cmd->add_option("model", file, "model JSON")->required();
  model_cmd->add_option("formula", formula, "formula")->required();
  common(model_cmd);

  std::size_t count = 500;
  std::uint64_t seed = 2024;
  bool serial = false;
  auto* corpus_cmd = app.add_subcommand("corpus", "run the regression corpus over the 15 logics");
  corpus_cmd->add_option("--count", count, "number of random formulas");
  corpus_cmd->add_option("--seed", seed, "generator seed");
  corpus_cmd->add_flag("--serial", serial, "run without threads");
  common(corpus_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kError;
  }

  try {
    if (prove_cmd->parsed()) return cmd_prove(formula, c);
    if (check_cmd->parsed()) return cmd_check(file, c);
    if (elim_cmd->parsed()) return cmd_elim(file, c);
    if (model_cmd->parsed()) return cmd_model(file, formula, c, model_cmd->count("--logic") > 0);
    if (corpus_cmd->parsed()) return cmd_corpus(count, seed, serial, c);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    if (!formula.empty()) std::cerr << "  " << formula << "\n  " << std::string(e.pos, ' ') << "^\n";
  } catch (const SchemaError& e) {
    std::cerr << "schema error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  json report;
  report["verdict"] = "error";
  emit(report);
  return kError;
}
