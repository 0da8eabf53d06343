#pragma once
// Nested sequents: trees whose nodes carry formula multisets. Every stored
// sequent is kept in canonical order (formulas sorted, children sorted), so
// paths and slots are stable and equality is a linear scan.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cubeprover/formula.hpp"

namespace cube {

using Path = std::vector<std::uint32_t>;

struct Slot {
  Path node;
  int index = -1;  // -1 when only the node is meant
  bool operator==(const Slot&) const = default;
};

struct Sequent {
  std::vector<Formula> fs;
  std::vector<Sequent> kids;
  // Identity tags used by proof transformations. Ignored by comparison,
  // printing and serialization.
  std::uint64_t tag = 0;
  std::vector<std::uint64_t> ft;  // parallel to fs

  void add(Formula f, std::uint64_t t = 0);
  void add_kid(Sequent k);
  void erase_formula(std::size_t i);
  void append(const Sequent& other);  // multiset union at this node
  void normalize();                   // canonical order, recursively
  bool empty() const { return fs.empty() && kids.empty(); }
  std::size_t node_count() const;
  std::size_t formula_count() const;
  std::uint64_t ftag(std::size_t i) const { return i < ft.size() ? ft[i] : 0; }
  int count(Formula f) const;

  static Sequent of(std::vector<Formula> fs, std::vector<Sequent> kids = {});
  static Sequent boxed(Sequent inner);  // the sequent [inner]
};

int compare(const Sequent& a, const Sequent& b);
inline bool operator==(const Sequent& a, const Sequent& b) { return compare(a, b) == 0; }
inline bool operator!=(const Sequent& a, const Sequent& b) { return compare(a, b) != 0; }
inline bool operator<(const Sequent& a, const Sequent& b) { return compare(a, b) < 0; }

struct AddressError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

bool valid_path(const Sequent& s, const Path& a);
const Sequent& resolve(const Sequent& s, const Path& a);
Sequent& resolve_mut(Sequent& s, const Path& a);
Sequent graft(const Sequent& s, const Path& a, const Sequent& extra);
int context_depth(const Path& a);
bool is_prefix(const Path& p, const Path& q);  // p is an ancestor-or-self of q
Path child_path(const Path& p, std::uint32_t i);
Path parent_path(const Path& p);

// Preorder (DFS) list of all node paths, root first.
std::vector<Path> all_paths(const Sequent& s);
std::vector<Path> leaf_paths(const Sequent& s);

Sequent set_sequent(const Sequent& s);
bool is_set_sequent(const Sequent& s);
Formula corresponding_formula(const Sequent& s);
std::vector<Formula> sequent_subformulas(const Sequent& s);
// Node formulas as a sorted, duplicate-free set.
std::vector<Formula> formula_set(const Sequent& node);

// Tag helpers.
void clear_tags(Sequent& s);
// Assign fresh tags (counter++) to every node and formula occurrence.
void assign_tags(Sequent& s, std::uint64_t& counter);
std::optional<Path> find_tag(const Sequent& s, std::uint64_t tag);
std::vector<Path> find_all_tags(const Sequent& s, std::uint64_t tag);
// Index of the occurrence with tag t at node, or -1.
int find_occ(const Sequent& node, std::uint64_t t);
// Copy tags from `from` onto `to` (same shape; used after value equality).
void copy_tags(const Sequent& from, Sequent& to);

// Text syntax: `a, [b, [c]], [d]`; an empty child is `[]`.
std::string print(const Sequent& s);
Sequent parse_sequent(std::string_view text, ParseOptions opts = {});

}  // namespace cube
