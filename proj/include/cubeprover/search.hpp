#pragma once
// The terminating proof search prove(goal, X) over the circle variants of
// K+X_c, with cyclicity detection and countermodel extraction on failure.

#include <optional>
#include <string>
#include <vector>

#include "cubeprover/countermodel.hpp"

namespace cube {

AxSet closure45(AxSet X);
bool is_45_closed(AxSet X);

struct LogicSpec {
  AxSet axioms = 0;
  std::string name;  // empty for raw axiom sets
};

// The cube logics with their 45-closed axiomatizations; S5 appears twice.
const std::vector<LogicSpec>& named_logics();
// The 15 distinct logics, one axiomatization each.
std::vector<LogicSpec> cube_logics();
// Accepts a cube name (case-insensitive, "S5alt" for {d,b,4,5}) or an axiom list.
LogicSpec parse_logic(std::string_view text);

struct SearchOptions {
  bool auto_close_45 = true;
  std::size_t instance_limit = 0;  // 0: unlimited
  bool translate = true;           // translate circle steps into base rules
  bool extract = true;             // build and verify a countermodel on failure
};

enum class Verdict { Proved, Refuted, FailedUnverified, LimitExceeded };
std::string verdict_name(Verdict v);

struct SearchStats {
  std::size_t iterations = 0;  // repeat-loop passes along the longest branch
  std::size_t instances = 0;   // rule applications
  std::size_t sf_size = 0;     // |sf(goal)|
};

struct SearchOutcome {
  Verdict verdict = Verdict::FailedUnverified;
  AxSet X = 0;           // axioms actually used by the search
  std::string notice;    // e.g. the 45-closure notice
  Proof proof;           // base-rule proof (Proved, when translated)
  Proof circle_proof;    // proof over the circle variants (Proved)
  Sequent finished;      // set sequent of the finished leaf (otherwise)
  std::vector<Path> cyclic;
  std::optional<Countermodel> model;  // Refuted
  SearchStats stats;
};

SearchOutcome prove(const Sequent& goal, AxSet X, const SearchOptions& opts = {});
SearchOutcome prove(Formula goal, AxSet X, const SearchOptions& opts = {});

// A node is finished when no circle rule of K+X_c has its principal formula there.
bool is_node_finished(const Sequent& s, const Path& node, AxSet X);
// Every node finished or a cyclic leaf.
bool is_finished(const Sequent& s, AxSet X);

// Circle-rule instances with principal formula at `node`, in search order.
// step1_only excludes box and dia_d_c.
std::vector<RuleInstance> circle_instances_at(const Sequent& s, const Path& node, AxSet X, bool step1_only);

}  // namespace cube
