#pragma once
// Tag-driven proof rewriting shared by the admissibility transforms and the
// cut eliminators. Sequents passed around here carry unique item ids in their
// tags; operations mark ids in a side table and edit every item they mark.

#include <functional>
#include <optional>
#include <unordered_map>
#include <unordered_set>

#include "cubeprover/transform.hpp"

namespace cube::detail {

struct TProof {
  Proof p;
  Sequent t;  // p's conclusion with ids
};

class Ctx {
 public:
  std::uint64_t fresh() { return next_id_++; }
  std::uint32_t new_op() { return next_op_++; }
  void mark(std::uint64_t id, std::uint32_t op);
  void unmark(std::uint64_t id, std::uint32_t op);
  bool marked(std::uint64_t id, std::uint32_t op) const;
  void copy_marks(std::uint64_t from, std::uint64_t to);

 private:
  std::uint64_t next_id_ = 1;
  std::uint32_t next_op_ = 1;
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> marks_;
};

// Gives fresh ids to untagged and duplicated items; duplicates inherit marks.
void relabel(Sequent& s, Ctx& ctx);
Sequent tagged_concl(const Proof& p, Ctx& ctx);

std::optional<Path> node_path(const Sequent& s, std::uint64_t id);
struct OccLoc {
  Path node;
  int index;
};
std::optional<OccLoc> occ_loc(const Sequent& s, std::uint64_t id);
std::optional<Slot> map_slot(const Slot& sl, const Sequent& from, const Sequent& to);

// Proof node with an error message naming the rule on failure.
Proof build(RuleInstance in, std::vector<Proof> subs);

using EditFn = std::function<void(Sequent&)>;
using HookFn = std::function<std::optional<TProof>(const Proof&, Sequent&)>;

// Rewrites p (proving C by value) into a proof of edit(C): every step is
// re-instantiated on the edited conclusion with actives mapped by id, unless
// the hook takes over.
TProof push(Ctx& ctx, const Proof& p, Sequent C, const EditFn& edit, const HookFn& hook);

TProof weaken_t(Ctx& ctx, const Proof& p, Sequent C, std::uint64_t node_id, const Sequent& extra);
// Inverts and/or/box on the occurrence with the given id (branch selects the
// conjunct).
TProof invert_t(Ctx& ctx, const Proof& p, Sequent C, std::uint64_t occ_id, int branch);
TProof contract_formula_t(Ctx& ctx, const Proof& p, Sequent C, std::uint64_t id1, std::uint64_t id2);
TProof contract_kids_t(Ctx& ctx, const Proof& p, Sequent C, std::uint64_t kid1, std::uint64_t kid2);

// Two distinct occurrences of f at the node with the given id (ids).
std::optional<std::pair<std::uint64_t, std::uint64_t>> two_occurrences(const Sequent& s, std::uint64_t node_id,
                                                                         Formula f);
std::optional<std::pair<std::uint64_t, std::uint64_t>> two_kids(const Sequent& s, std::uint64_t node_id,
                                                                  const Sequent& kid);

Path must_path(const Sequent& s, std::uint64_t id);
Slot occ_slot(const Sequent& s, std::uint64_t id);
Proof make_cut(const Sequent& C, std::uint64_t node, Formula F, Proof left, Proof right);
// Id of the occurrence at act[0], or 0.
std::uint64_t principal_id(const RuleInstance& st, const Sequent& T);

// ---- surgery: rewriting a proof of Sp into a proof of S where every node
// of Sp is sent to a node of S by phi and occurrences keep their ids.
// Diamond steps whose positions no longer fit are replaced by chains of
// diamond rules of X found by search. Nodes absent from phi must be empty;
// they are created with dia_d_c (d in X) when first used.

using NodeMap = std::unordered_map<std::uint64_t, std::uint64_t>;

Proof surgery(Ctx& ctx, AxSet X, const Proof& p, const Sequent& Sp, const Sequent& S, const NodeMap& phi);

// Eliminates a single str_d/str_t/str_b/str_4/str_5/ystr step on top of a
// proof of its premise.
Proof admit_step(const RuleInstance& step, const Proof& sub, AxSet X);

// Cut-free parts of the logical cut eliminator, exposed for the structural one.
Proof eliminate_str_d(const Proof& p, AxSet X);
Proof split_dia_d(const Proof& p);

}  // namespace cube::detail
