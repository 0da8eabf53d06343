#pragma once
// Rules, rule instances, proofs and an independent proof checker for the
// logical systems K+X_c, their circle variants, and the structural systems
// Kc+[X] and Km+[X].

#include <bitset>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cubeprover/sequent.hpp"

namespace cube {

// ---- modal axiom sets

enum Axiom : std::uint8_t { AX_D = 1, AX_T = 2, AX_B = 4, AX_4 = 8, AX_5 = 16 };
using AxSet = std::uint8_t;
inline constexpr AxSet kAllAxioms = AX_D | AX_T | AX_B | AX_4 | AX_5;

std::string axset_to_string(AxSet x);   // e.g. "d,t,4"; "" for the empty set
AxSet axset_from_string(std::string_view s);  // accepts "d,t,4", "dt4", "" ; throws on junk
inline bool has(AxSet x, Axiom a) { return (x & a) != 0; }

// ---- rules

enum class Rule : std::uint8_t {
  axiom, and_, or_, box,
  dia_k_c, dia_d_c, dia_t_c, dia_b_c, dia_4_c, dia_5_c,
  dia_k, dia_d, dia_t, dia_b, dia_4, dia_5, dia_5_1, dia_5_2, dia_5_3,
  str_d, str_t, str_b, str_4, str_5,
  k, ctr, wk, nec, cut, ycut, ystr, fctr, med, m_box, m_and, mcut,
  count_
};
inline constexpr std::size_t kRuleCount = static_cast<std::size_t>(Rule::count_);

std::string rule_name(Rule r, bool circ = false);
std::optional<std::pair<Rule, bool>> rule_from_name(std::string_view name);
int rule_arity(Rule r);
bool is_cut_rule(Rule r);  // cut, mcut, ycut
bool has_circle_variant(Rule r);
Rule dia_c_rule(Axiom a);  // d -> dia_d_c, ...
Rule str_rule(Axiom a);    // d -> str_d, ...

struct RuleInstance {
  Rule rule = Rule::axiom;
  bool circ = false;
  Sequent concl;
  std::vector<Slot> act;
  Formula cutf;        // cut, mcut, ycut (ycut: left premise carries []cutf)
  Sequent delta;       // wk, ctr, str_t, str_b (Sigma), med
  int m = 1, n = 1;    // multiplicities for m_box (n), m_and, mcut
  AxSet Y = 0;         // ycut, ystr
  std::vector<Sequent> prems;
};

struct MalformedInstance : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Premises determined by rule, conclusion, actives and parameters. Node and
// occurrence tags of the conclusion are carried over to the premises; new
// nodes and occurrences get tag 0. Throws MalformedInstance.
std::vector<Sequent> premises_of(const RuleInstance& r);

// Context-shape characterization of the ycut / ystr provisos.
bool ycut_proviso_holds(const RuleInstance& r);
bool ystr_proviso_holds(AxSet Y, const Path& source, const Path& target);

// ---- systems

enum class Family : std::uint8_t { Logical, LogicalCircle, Structural, Km, Custom };

struct System {
  Family fam = Family::Logical;
  AxSet X = 0;
  std::bitset<kRuleCount> rules;
  bool circ = false;  // rules must be the circle variants

  static System logical(AxSet X, bool cut = false);
  static System logical_circle(AxSet X);
  static System structural(AxSet X, bool cut = false);
  static System km(AxSet X, bool mcut = false);
  System with(Rule r) const;
  System without(Rule r) const;
  bool allows(Rule r) const { return rules.test(static_cast<std::size_t>(r)); }
  std::string describe() const;
};

// ---- proofs

struct ProofNode;
using Proof = std::shared_ptr<const ProofNode>;

struct ProofNode {
  RuleInstance step;
  std::vector<Proof> subs;
  int depth = 0;
  std::size_t size = 1;
  const Sequent& concl() const { return step.concl; }
};

struct ProofError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Builds a proof node, computing the premises and checking that each
// subproof proves the corresponding premise. Throws ProofError.
Proof make_proof(RuleInstance inst, std::vector<Proof> subs = {});
// Builds without validation (deserialization, tampering tests).
Proof make_proof_unchecked(RuleInstance inst, std::vector<Proof> subs);

// Convenience constructors.
RuleInstance inst(Rule r, const Sequent& concl, std::vector<Slot> act);
// Axiom instance on any node carrying p and ~p, if there is one.
std::optional<RuleInstance> axiom_instance(const Sequent& s);
bool is_axiomatic(const Sequent& s);

struct CheckReport {
  bool ok = true;
  std::string message;
  std::vector<int> where;  // premise indices from the root to the failing step
  explicit operator bool() const { return ok; }
};

CheckReport check_proof(const Proof& p, const System& sys);

int max_cut_rank(const Proof& p);
std::vector<int> cut_ranks(const Proof& p);
std::size_t count_rule(const Proof& p, Rule r);
bool uses_rule(const Proof& p, Rule r);
bool is_cut_free(const Proof& p);
// Multiset of rules (counts indexed by Rule).
std::vector<std::size_t> rule_histogram(const Proof& p);

// All bottom-up applicable instances of parameter-free rules of sys at every
// node, in DFS node order, then rule order, then slot order.
std::vector<RuleInstance> applicable_instances(const Sequent& s, const System& sys);

// Copies onto the delta parameter the tags of the conclusion occurrences it
// selects (wk, ctr, str_t, str_b, med). Returns false if it does not fit.
bool tag_instance_params(RuleInstance& r);

// Locate a formula occurrence; -1 if absent.
int find_formula(const Sequent& node, Formula f);

}  // namespace cube
