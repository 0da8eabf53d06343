#pragma once
// Modal formulas in negation normal form. Nodes are interned, so equal
// formulas share one node and equality is a pointer comparison.

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cube {

// Declaration order is the constructor order used by the canonical ordering.
enum class Op : std::uint8_t { Atom, Or, And, Dia, Box };

struct FNode;

class Formula {
public:
  Formula() = default;

  static Formula atom(std::string_view name, bool negated = false);
  static Formula mk_or(Formula a, Formula b);
  static Formula mk_and(Formula a, Formula b);
  static Formula dia(Formula a);
  static Formula box(Formula a);
  static Formula bottom();
  static Formula top();

  Op op() const;
  bool negated() const;           // atoms only
  const std::string& name() const;  // atoms only
  std::uint32_t atom_id() const;
  Formula left() const;   // binary: left operand, modal: body
  Formula right() const;  // binary only
  Formula body() const { return left(); }
  int depth() const;
  std::size_t size() const;  // number of nodes in the term
  bool is_atom() const { return op() == Op::Atom; }
  bool is_reserved() const;  // atom over the reserved proposition
  bool valid() const { return n_ != nullptr; }
  const FNode* node() const { return n_; }

  friend bool operator==(Formula a, Formula b) { return a.n_ == b.n_; }
  friend bool operator!=(Formula a, Formula b) { return a.n_ != b.n_; }

private:
  explicit Formula(const FNode* n) : n_(n) {}
  const FNode* n_ = nullptr;
  friend struct Interner;
};

// Canonical total order: constructor tag, then recursive comparison.
int compare(Formula a, Formula b);
inline bool operator<(Formula a, Formula b) { return compare(a, b) < 0; }

Formula negate(Formula f);
int depth(Formula f);
std::vector<Formula> subformulas(Formula f);  // sorted, deduplicated
void collect_subformulas(Formula f, std::vector<Formula>& out);  // unsorted, may repeat
std::vector<std::string> atoms_of(Formula f);

// Derived connectives, expanded into NNF.
Formula implies(Formula a, Formula b);
Formula iff(Formula a, Formula b);

struct ParseError : std::runtime_error {
  std::size_t pos;
  ParseError(const std::string& msg, std::size_t p)
      : std::runtime_error(msg + " at position " + std::to_string(p)), pos(p) {}
};

struct ParseOptions {
  bool allow_reserved = false;  // accept the internal `$0` atom
};

Formula parse(std::string_view text, ParseOptions opts = {});
std::string print(Formula f);

// Low-level parser entry used by the sequent reader.
class FormulaParser {
public:
  FormulaParser(std::string_view text, std::size_t pos, ParseOptions opts);
  Formula parse_formula();
  std::size_t pos() const { return pos_; }
  void skip_ws();

private:
  Formula parse_iff();
  Formula parse_imp();
  Formula parse_or();
  Formula parse_and();
  Formula parse_unary();
  bool eat(std::string_view tok);
  bool peek(std::string_view tok);
  [[noreturn]] void fail(const std::string& msg);

  std::string_view s_;
  std::size_t pos_;
  ParseOptions opts_;
  int nesting_ = 0;
};

inline constexpr const char* kReservedAtom = "$0";

}  // namespace cube

template <>
struct std::hash<cube::Formula> {
  std::size_t operator()(cube::Formula f) const noexcept {
    return std::hash<const void*>()(f.node());
  }
};
