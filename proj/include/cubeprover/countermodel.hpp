#pragma once
// Finite Kripke models, relation closures, frame conditions, model checking
// and countermodel extraction from finished set sequents.

#include <map>
#include <string>
#include <vector>

#include "cubeprover/calculus.hpp"
#include "json.hpp"

namespace cube {

// Binary relation over states 0..n-1, stored as an adjacency matrix.
class Relation {
 public:
  Relation() = default;
  explicit Relation(int n) : n_(n), bits_(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0) {}
  static Relation from_pairs(int n, const std::vector<std::pair<int, int>>& pairs);

  int size() const { return n_; }
  bool get(int s, int t) const { return bits_[idx(s, t)] != 0; }
  // Returns true when the pair is new.
  bool set(int s, int t) {
    auto& b = bits_[idx(s, t)];
    if (b) return false;
    b = 1;
    return true;
  }
  void reset(int s, int t) { bits_[idx(s, t)] = 0; }
  std::vector<std::pair<int, int>> pairs() const;
  std::size_t count() const;
  bool contains(const Relation& o) const;
  bool operator==(const Relation& o) const { return n_ == o.n_ && bits_ == o.bits_; }

 private:
  std::size_t idx(int s, int t) const {
    return static_cast<std::size_t>(s) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(t);
  }
  int n_ = 0;
  std::vector<std::uint8_t> bits_;
};

bool frame_condition_holds(const Relation& r, Axiom a);
bool satisfies_frame(const Relation& r, AxSet X);

// Least relation containing r with the conditions in X\{d} (joint fixpoint),
// followed by the serial closure when d is in X.
Relation close(const Relation& r, AxSet X);
Relation serial_closure(const Relation& r);
// Connection-based characterizations, used as independent oracles.
Relation euclidean_connection_closure(const Relation& r);
Relation transitive_euclidean_connection_closure(const Relation& r);

struct KripkeModel {
  int num_states = 0;
  std::vector<std::string> origin;  // DFS address of the subtree each state stems from
  Relation rel;
  std::map<std::string, std::vector<int>> val;  // sorted state lists

  bool holds(const std::string& atom, int s) const;
};

struct UnknownState : std::out_of_range {
  using std::out_of_range::out_of_range;
};

bool model_check(const KripkeModel& m, int s, Formula f);
bool verify_frame(const KripkeModel& m, AxSet X);
bool verify_countermodel(const KripkeModel& m, int root, const Sequent& goal, AxSet X);

struct Countermodel {
  KripkeModel model;
  int root = 0;
};

struct ExtractionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Cyclic leaves of a sequent (leaves whose formula set equals that of some inner node).
std::vector<Path> cyclic_leaves(const Sequent& s);
bool is_cyclic(const Sequent& s, const Path& leaf);

// Builds the model from the set sequent of a finished non-axiomatic leaf.
// `atoms` lists the propositions that receive a valuation.
Countermodel extract_model(const Sequent& finished, AxSet X, const std::vector<std::string>& atoms);

nlohmann::json model_to_json(const KripkeModel& m, int root);
Countermodel model_from_json(const nlohmann::json& j);
std::string model_to_dot(const KripkeModel& m, int root);

}  // namespace cube
