#pragma once
// Proof transformations: admissibility of weakening, contraction and
// necessitation, inversion, circle-to-base translation, diamond-rule
// conversions, both cut eliminations and the Hilbert translation.

#include <string>
#include <vector>

#include "cubeprover/calculus.hpp"
#include "json.hpp"

namespace cube {

struct TransformError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---- admissibility and invertibility

// Proof of graft(concl, a, extra); same depth.
Proof weaken(const Proof& p, const Path& a, const Sequent& extra);
// p proves Gamma{dup, dup} at a; returns a proof of Gamma{dup}.
// Supported for proofs over axiom, and, or, box, the dia_c rules, str_d and cut.
Proof contract(const Proof& p, const Path& a, const Sequent& dup);
// Proof of [concl].
Proof necessitate(const Proof& p);
// Proof of premise `branch` of the given rule applied to p's conclusion at
// `act`. and/or/box are inverted by a rewrite, every other rule by weakening.
Proof invert(const Proof& p, Rule rule, const std::vector<Slot>& act, int branch = 0);
Proof invert(const Proof& p, Rule rule, const Slot& slot, int branch = 0);

// Proof over circle variants into a proof over the base rules.
Proof circle_to_base(const Proof& p);

enum class DiaDirection {
  ToContracting,    // dia_r  ->  dia_r_c + wk, then wk eliminated
  FromContracting,  // dia_r_c -> ctr + dia_r
};
Proof dia_vs_diac(const Proof& p, DiaDirection dir);
// Replaces dia_5 steps by ctr-free chains of dia_5_1, dia_5_2, dia_5_3, and
// dia_5_c steps by ctr followed by such a chain.
Proof decompose_dia5(const Proof& p);
// Removes wk steps by pushing the weakening into the subproof.
Proof eliminate_wk(const Proof& p);

// ---- cut elimination

struct ElimSnapshot {
  std::string phase;
  std::size_t size = 0;
  int max_rank = 0;
};
using ElimTrace = std::vector<ElimSnapshot>;

// p checks in K+X_c+cut (X 45-closed), possibly with ycut; returns a cut-free
// proof in K+X_c of the same conclusion.
Proof eliminate_cuts_logical(const Proof& p, AxSet X, ElimTrace* trace = nullptr);
// p checks in Kc+[X]+cut (with wk and nec allowed); returns a cut-free proof
// in Kc+[X] of the same conclusion.
Proof eliminate_cuts_structural(const Proof& p, AxSet X, ElimTrace* trace = nullptr);

// Removes str_d/str_t/str_b/str_4/str_5 and ystr steps from a proof over
// K+X_c (X 45-closed) whose other rules are logical; cut-rank preserving.
Proof admit_structural(const Proof& p, AxSet X);

// Translations between the logical and the structural systems. The logical
// side may use dia_k_c and dia_d_c only (each becomes ctr, k and possibly
// str_d); other diamond rules raise TransformError.
Proof logical_to_structural(const Proof& p, AxSet X);
// Proof over K+X_c (+cut) from a proof over Kc+[X] (+cut, wk, nec).
Proof structural_to_logical(const Proof& p, AxSet X);

// ---- Hilbert proofs

struct HilbertStep {
  enum Kind { Tautology, AxiomK, AxiomInstance, ModusPonens, Necessitation } kind = Tautology;
  Formula a, b;       // Tautology: a; AxiomK: a, b; AxiomInstance: a
  Axiom axiom = AX_D; // AxiomInstance
  int from1 = -1, from2 = -1;  // ModusPonens: from1 proves A, from2 proves A -> B; Necessitation: from1
};

// Formula proved by step i (throws TransformError on bad indices).
Formula hilbert_formula(const std::vector<HilbertStep>& steps, std::size_t i);
std::vector<HilbertStep> hilbert_from_json(const nlohmann::json& j);
nlohmann::json hilbert_to_json(const std::vector<HilbertStep>& steps);
// Proof in Kc+[X]+cut (with nec) of the last step's formula.
Proof hilbert_to_nested(const std::vector<HilbertStep>& steps, AxSet X);
// Cut-free proof of A, ~A (or ~A, A) for any formula, in Kc.
Proof identity_proof(Formula a);

}  // namespace cube
