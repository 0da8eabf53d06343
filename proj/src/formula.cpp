#include "cubeprover/formula.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <mutex>
#include <unordered_map>

namespace cube {

struct FNode {
  Op op;
  bool neg;
  std::uint32_t atom;
  const FNode* l;
  const FNode* r;
  int depth;
  std::size_t size;
  const std::string* nm;
};

namespace {

struct Key {
  Op op;
  bool neg;
  std::uint32_t atom;
  const FNode* l;
  const FNode* r;
  bool operator==(const Key&) const = default;
};

struct KeyHash {
  std::size_t operator()(const Key& k) const noexcept {
    std::size_t h = static_cast<std::size_t>(k.op) * 0x9e3779b97f4a7c15ULL;
    h ^= (k.atom + 0x7f4a7c15ULL + (h << 6) + (h >> 2));
    h ^= std::hash<const void*>()(k.l) + 0x9e3779b9 + (h << 6) + (h >> 2);
    h ^= std::hash<const void*>()(k.r) + 0x9e3779b9 + (h << 6) + (h >> 2);
    return h ^ (k.neg ? 0x5bd1e995 : 0);
  }
};

}  // namespace

struct Interner {
  std::mutex mu;
  std::deque<FNode> nodes;
  std::unordered_map<Key, const FNode*, KeyHash> table;
  std::deque<std::string> names;
  std::unordered_map<std::string, std::uint32_t> name_ids;

  static Interner& get() {
    static Interner in;
    return in;
  }

  std::uint32_t name_id(std::string_view s) {
    std::lock_guard lk(mu);
    auto it = name_ids.find(std::string(s));
    if (it != name_ids.end()) return it->second;
    auto id = static_cast<std::uint32_t>(names.size());
    names.emplace_back(s);
    name_ids.emplace(std::string(s), id);
    return id;
  }


  Formula make(Op op, bool neg, std::uint32_t atom, const FNode* l, const FNode* r) {
    Key k{op, neg, atom, l, r};
    std::lock_guard lk(mu);
    auto it = table.find(k);
    if (it != table.end()) return Formula(it->second);
    int d = 0;
    std::size_t sz = 1;
    if (l) { d = l->depth + 1; sz += l->size; }
    if (r) { d = std::max(d, r->depth + 1); sz += r->size; }
    const std::string* nm = op == Op::Atom ? &names[atom] : nullptr;
    nodes.push_back(FNode{op, neg, atom, l, r, d, sz, nm});
    const FNode* n = &nodes.back();
    table.emplace(k, n);
    return Formula(n);
  }
};

Formula Formula::atom(std::string_view name, bool negated) {
  auto& in = Interner::get();
  return in.make(Op::Atom, negated, in.name_id(name), nullptr, nullptr);
}
Formula Formula::mk_or(Formula a, Formula b) {
  return Interner::get().make(Op::Or, false, 0, a.n_, b.n_);
}
Formula Formula::mk_and(Formula a, Formula b) {
  return Interner::get().make(Op::And, false, 0, a.n_, b.n_);
}
Formula Formula::dia(Formula a) { return Interner::get().make(Op::Dia, false, 0, a.n_, nullptr); }
Formula Formula::box(Formula a) { return Interner::get().make(Op::Box, false, 0, a.n_, nullptr); }
Formula Formula::bottom() {
  static const Formula f = mk_and(atom(kReservedAtom), atom(kReservedAtom, true));
  return f;
}
Formula Formula::top() {
  static const Formula f = mk_or(atom(kReservedAtom), atom(kReservedAtom, true));
  return f;
}

Op Formula::op() const { return n_->op; }
bool Formula::negated() const { return n_->neg; }
const std::string& Formula::name() const { return *n_->nm; }
std::uint32_t Formula::atom_id() const { return n_->atom; }
Formula Formula::left() const { return Formula(n_->l); }
Formula Formula::right() const { return Formula(n_->r); }
int Formula::depth() const { return n_->depth; }
std::size_t Formula::size() const { return n_->size; }
bool Formula::is_reserved() const {
  static const std::uint32_t id = Interner::get().name_id(kReservedAtom);
  return is_atom() && n_->atom == id;
}

int compare(Formula a, Formula b) {
  if (a == b) return 0;
  if (a.op() != b.op()) return a.op() < b.op() ? -1 : 1;
  switch (a.op()) {
    case Op::Atom: {
      if (a.atom_id() != b.atom_id()) {
        int c = a.name().compare(b.name());
        if (c != 0) return c < 0 ? -1 : 1;
      }
      if (a.negated() != b.negated()) return a.negated() ? 1 : -1;
      return 0;
    }
    case Op::Or:
    case Op::And: {
      int c = compare(a.left(), b.left());
      return c != 0 ? c : compare(a.right(), b.right());
    }
    case Op::Dia:
    case Op::Box:
      return compare(a.body(), b.body());
  }
  return 0;
}

Formula negate(Formula f) {
  switch (f.op()) {
    case Op::Atom: return Formula::atom(f.name(), !f.negated());
    case Op::Or: return Formula::mk_and(negate(f.left()), negate(f.right()));
    case Op::And: return Formula::mk_or(negate(f.left()), negate(f.right()));
    case Op::Dia: return Formula::box(negate(f.body()));
    case Op::Box: return Formula::dia(negate(f.body()));
  }
  return f;
}

int depth(Formula f) { return f.depth(); }

void collect_subformulas(Formula f, std::vector<Formula>& out) {
  out.push_back(f);
  switch (f.op()) {
    case Op::Atom: break;
    case Op::Or:
    case Op::And:
      collect_subformulas(f.left(), out);
      collect_subformulas(f.right(), out);
      break;
    case Op::Dia:
    case Op::Box: collect_subformulas(f.body(), out); break;
  }
}

std::vector<Formula> subformulas(Formula f) {
  std::vector<Formula> out;
  collect_subformulas(f, out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::string> atoms_of(Formula f) {
  std::vector<std::string> out;
  for (Formula g : subformulas(f))
    if (g.is_atom() && !g.is_reserved()) out.push_back(g.name());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Formula implies(Formula a, Formula b) { return Formula::mk_or(negate(a), b); }
Formula iff(Formula a, Formula b) { return Formula::mk_and(implies(a, b), implies(b, a)); }

// ---- printing

namespace {

int prec(Formula f) {
  if (f == Formula::bottom() || f == Formula::top()) return 3;
  switch (f.op()) {
    case Op::Or: return 1;
    case Op::And: return 2;
    default: return 3;
  }
}

void print_rec(Formula f, std::string& out) {
  if (f == Formula::bottom()) { out += "false"; return; }
  if (f == Formula::top()) { out += "true"; return; }
  auto sub = [&](Formula g, int need) {
    if (prec(g) < need) {
      out += '(';
      print_rec(g, out);
      out += ')';
    } else {
      print_rec(g, out);
    }
  };
  switch (f.op()) {
    case Op::Atom:
      if (f.negated()) out += '~';
      out += f.name();
      break;
    case Op::Or:
      sub(f.left(), 1);
      out += '|';
      sub(f.right(), 2);
      break;
    case Op::And:
      sub(f.left(), 2);
      out += '&';
      sub(f.right(), 3);
      break;
    case Op::Dia:
      out += "<>";
      sub(f.body(), 3);
      break;
    case Op::Box:
      out += "[]";
      sub(f.body(), 3);
      break;
  }
}

}  // namespace

std::string print(Formula f) {
  std::string out;
  print_rec(f, out);
  return out;
}

// ---- parsing

FormulaParser::FormulaParser(std::string_view text, std::size_t pos, ParseOptions opts)
    : s_(text), pos_(pos), opts_(opts) {}

void FormulaParser::skip_ws() {
  while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
}

bool FormulaParser::peek(std::string_view tok) {
  skip_ws();
  return s_.substr(pos_, tok.size()) == tok;
}

bool FormulaParser::eat(std::string_view tok) {
  if (!peek(tok)) return false;
  pos_ += tok.size();
  return true;
}

void FormulaParser::fail(const std::string& msg) { throw ParseError(msg, pos_); }

Formula FormulaParser::parse_formula() { return parse_iff(); }

Formula FormulaParser::parse_iff() {
  Formula f = parse_imp();
  while (eat("<->")) f = iff(f, parse_imp());
  return f;
}

Formula FormulaParser::parse_imp() {
  Formula f = parse_or();
  if (eat("->")) return implies(f, parse_imp());
  return f;
}

Formula FormulaParser::parse_or() {
  Formula f = parse_and();
  while (eat("|")) f = Formula::mk_or(f, parse_and());
  return f;
}

Formula FormulaParser::parse_and() {
  Formula f = parse_unary();
  while (eat("&")) f = Formula::mk_and(f, parse_unary());
  return f;
}

Formula FormulaParser::parse_unary() {
  skip_ws();
  if (pos_ >= s_.size()) fail("unexpected end of input");
  if (eat("~")) return negate(parse_unary());
  if (eat("[]")) return Formula::box(parse_unary());
  if (eat("<>")) return Formula::dia(parse_unary());
  if (peek("(")) {
    std::size_t open = pos_;
    ++pos_;
    ++nesting_;
    Formula f = parse_iff();
    if (!eat(")")) throw ParseError("unbalanced parenthesis opened", open);
    --nesting_;
    return f;
  }
  char c = s_[pos_];
  if (c == '$' && opts_.allow_reserved && s_.substr(pos_, 2) == kReservedAtom) {
    pos_ += 2;
    return Formula::atom(kReservedAtom);
  }
  if (c >= 'a' && c <= 'z') {
    std::size_t start = pos_;
    while (pos_ < s_.size()) {
      char d = s_[pos_];
      if ((d >= 'a' && d <= 'z') || (d >= '0' && d <= '9') || d == '_') ++pos_;
      else break;
    }
    std::string_view word = s_.substr(start, pos_ - start);
    if (word == "true") return Formula::top();
    if (word == "false") return Formula::bottom();
    return Formula::atom(word);
  }
  if (c == ')') fail("unbalanced parenthesis");
  fail(std::string("unexpected character '") + c + "'");
}

Formula parse(std::string_view text, ParseOptions opts) {
  FormulaParser p(text, 0, opts);
  Formula f = p.parse_formula();
  p.skip_ws();
  if (p.pos() != text.size()) {
    if (text[p.pos()] == ')') throw ParseError("unbalanced parenthesis", p.pos());
    throw ParseError("trailing input", p.pos());
  }
  return f;
}

}  // namespace cube
