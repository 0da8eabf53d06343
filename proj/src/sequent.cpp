#include "cubeprover/sequent.hpp"

#include <algorithm>
#include <numeric>

namespace cube {

void Sequent::add(Formula f, std::uint64_t t) {
  ft.resize(fs.size(), 0);
  fs.push_back(f);
  ft.push_back(t);
}

void Sequent::add_kid(Sequent k) { kids.push_back(std::move(k)); }

void Sequent::erase_formula(std::size_t i) {
  ft.resize(fs.size(), 0);
  fs.erase(fs.begin() + static_cast<long>(i));
  ft.erase(ft.begin() + static_cast<long>(i));
}

void Sequent::append(const Sequent& other) {
  for (std::size_t i = 0; i < other.fs.size(); ++i) add(other.fs[i], other.ftag(i));
  for (const auto& k : other.kids) kids.push_back(k);
}

void Sequent::normalize() {
  for (auto& k : kids) k.normalize();
  std::stable_sort(kids.begin(), kids.end(),
                   [](const Sequent& a, const Sequent& b) { return compare(a, b) < 0; });
  ft.resize(fs.size(), 0);
  bool sorted = true;
  for (std::size_t i = 1; i < fs.size() && sorted; ++i)
    if (fs[i] < fs[i - 1]) sorted = false;
  if (sorted) return;
  std::vector<std::size_t> idx(fs.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return fs[a] < fs[b]; });
  std::vector<Formula> nf;
  std::vector<std::uint64_t> nt;
  nf.reserve(fs.size());
  nt.reserve(fs.size());
  for (auto i : idx) {
    nf.push_back(fs[i]);
    nt.push_back(ft[i]);
  }
  fs = std::move(nf);
  ft = std::move(nt);
}

std::size_t Sequent::node_count() const {
  std::size_t n = 1;
  for (const auto& k : kids) n += k.node_count();
  return n;
}

std::size_t Sequent::formula_count() const {
  std::size_t n = fs.size();
  for (const auto& k : kids) n += k.formula_count();
  return n;
}

int Sequent::count(Formula f) const {
  return static_cast<int>(std::count(fs.begin(), fs.end(), f));
}

Sequent Sequent::of(std::vector<Formula> fs, std::vector<Sequent> kids) {
  Sequent s;
  s.fs = std::move(fs);
  s.kids = std::move(kids);
  s.normalize();
  return s;
}

Sequent Sequent::boxed(Sequent inner) {
  Sequent s;
  s.kids.push_back(std::move(inner));
  return s;
}

int compare(const Sequent& a, const Sequent& b) {
  std::size_t n = std::min(a.fs.size(), b.fs.size());
  for (std::size_t i = 0; i < n; ++i) {
    int c = compare(a.fs[i], b.fs[i]);
    if (c != 0) return c;
  }
  if (a.fs.size() != b.fs.size()) return a.fs.size() < b.fs.size() ? -1 : 1;
  n = std::min(a.kids.size(), b.kids.size());
  for (std::size_t i = 0; i < n; ++i) {
    int c = compare(a.kids[i], b.kids[i]);
    if (c != 0) return c;
  }
  if (a.kids.size() != b.kids.size()) return a.kids.size() < b.kids.size() ? -1 : 1;
  return 0;
}

bool valid_path(const Sequent& s, const Path& a) {
  const Sequent* cur = &s;
  for (auto i : a) {
    if (i >= cur->kids.size()) return false;
    cur = &cur->kids[i];
  }
  return true;
}

const Sequent& resolve(const Sequent& s, const Path& a) {
  const Sequent* cur = &s;
  for (auto i : a) {
    if (i >= cur->kids.size()) throw AddressError("invalid node address");
    cur = &cur->kids[i];
  }
  return *cur;
}

Sequent& resolve_mut(Sequent& s, const Path& a) {
  return const_cast<Sequent&>(resolve(s, a));
}

Sequent graft(const Sequent& s, const Path& a, const Sequent& extra) {
  Sequent out = s;
  resolve_mut(out, a).append(extra);
  out.normalize();
  return out;
}

int context_depth(const Path& a) { return static_cast<int>(a.size()); }

bool is_prefix(const Path& p, const Path& q) {
  return p.size() <= q.size() && std::equal(p.begin(), p.end(), q.begin());
}

Path child_path(const Path& p, std::uint32_t i) {
  Path q = p;
  q.push_back(i);
  return q;
}

Path parent_path(const Path& p) {
  Path q = p;
  if (!q.empty()) q.pop_back();
  return q;
}

namespace {
void paths_rec(const Sequent& s, Path& cur, std::vector<Path>& out, bool leaves_only) {
  if (!leaves_only || s.kids.empty()) out.push_back(cur);
  for (std::uint32_t i = 0; i < s.kids.size(); ++i) {
    cur.push_back(i);
    paths_rec(s.kids[i], cur, out, leaves_only);
    cur.pop_back();
  }
}
}  // namespace

std::vector<Path> all_paths(const Sequent& s) {
  std::vector<Path> out;
  Path cur;
  paths_rec(s, cur, out, false);
  return out;
}

std::vector<Path> leaf_paths(const Sequent& s) {
  std::vector<Path> out;
  Path cur;
  paths_rec(s, cur, out, true);
  return out;
}

Sequent set_sequent(const Sequent& s) {
  Sequent out;
  out.fs = s.fs;
  std::sort(out.fs.begin(), out.fs.end());
  out.fs.erase(std::unique(out.fs.begin(), out.fs.end()), out.fs.end());
  out.ft.assign(out.fs.size(), 0);
  for (const auto& k : s.kids) out.kids.push_back(set_sequent(k));
  std::sort(out.kids.begin(), out.kids.end());
  out.kids.erase(std::unique(out.kids.begin(), out.kids.end()), out.kids.end());
  return out;
}

bool is_set_sequent(const Sequent& s) { return set_sequent(s) == s; }

std::vector<Formula> formula_set(const Sequent& node) {
  std::vector<Formula> v = node.fs;
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

Formula corresponding_formula(const Sequent& s) {
  std::vector<Formula> parts;
  std::vector<Formula> fs = s.fs;
  std::sort(fs.begin(), fs.end());
  for (Formula f : fs) parts.push_back(f);
  std::vector<Sequent> kids = s.kids;
  std::sort(kids.begin(), kids.end());
  for (const auto& k : kids) parts.push_back(Formula::box(corresponding_formula(k)));
  if (parts.empty()) return Formula::bottom();
  Formula acc = parts[0];
  for (std::size_t i = 1; i < parts.size(); ++i) acc = Formula::mk_or(acc, parts[i]);
  return acc;
}

namespace {
void sf_rec(const Sequent& s, std::vector<Formula>& out) {
  for (Formula f : s.fs) collect_subformulas(f, out);
  for (const auto& k : s.kids) sf_rec(k, out);
}
}  // namespace

std::vector<Formula> sequent_subformulas(const Sequent& s) {
  std::vector<Formula> out;
  sf_rec(s, out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void clear_tags(Sequent& s) {
  s.tag = 0;
  s.ft.assign(s.fs.size(), 0);
  for (auto& k : s.kids) clear_tags(k);
}

void assign_tags(Sequent& s, std::uint64_t& counter) {
  s.tag = counter++;
  s.ft.resize(s.fs.size());
  for (auto& t : s.ft) t = counter++;
  for (auto& k : s.kids) assign_tags(k, counter);
}

namespace {
bool find_tag_rec(const Sequent& s, std::uint64_t tag, Path& cur, std::vector<Path>& out, bool all) {
  if (s.tag == tag) {
    out.push_back(cur);
    if (!all) return true;
  }
  for (std::uint32_t i = 0; i < s.kids.size(); ++i) {
    cur.push_back(i);
    bool done = find_tag_rec(s.kids[i], tag, cur, out, all);
    cur.pop_back();
    if (done) return true;
  }
  return false;
}
}  // namespace

std::optional<Path> find_tag(const Sequent& s, std::uint64_t tag) {
  std::vector<Path> out;
  Path cur;
  find_tag_rec(s, tag, cur, out, false);
  if (out.empty()) return std::nullopt;
  return out[0];
}

std::vector<Path> find_all_tags(const Sequent& s, std::uint64_t tag) {
  std::vector<Path> out;
  Path cur;
  find_tag_rec(s, tag, cur, out, true);
  return out;
}

int find_occ(const Sequent& node, std::uint64_t t) {
  for (std::size_t i = 0; i < node.fs.size(); ++i)
    if (node.ftag(i) == t) return static_cast<int>(i);
  return -1;
}

void copy_tags(const Sequent& from, Sequent& to) {
  to.tag = from.tag;
  to.ft.assign(to.fs.size(), 0);
  for (std::size_t i = 0; i < to.fs.size() && i < from.fs.size(); ++i) to.ft[i] = from.ftag(i);
  for (std::size_t i = 0; i < to.kids.size() && i < from.kids.size(); ++i)
    copy_tags(from.kids[i], to.kids[i]);
}

// ---- text syntax

namespace {

void print_rec(const Sequent& s, std::string& out) {
  bool first = true;
  for (Formula f : s.fs) {
    if (!first) out += ", ";
    first = false;
    out += print(f);
  }
  for (const auto& k : s.kids) {
    if (!first) out += ", ";
    first = false;
    out += '[';
    print_rec(k, out);
    out += ']';
  }
}

struct SeqReader {
  std::string_view s;
  std::size_t pos = 0;
  ParseOptions opts;

  void ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }

  bool empty_child_here() {
    // `[]` followed by a delimiter is an empty child, otherwise a box.
    if (pos + 1 >= s.size() || s[pos] != '[' || s[pos + 1] != ']') return false;
    std::size_t q = pos + 2;
    while (q < s.size() && std::isspace(static_cast<unsigned char>(s[q]))) ++q;
    return q >= s.size() || s[q] == ',' || s[q] == ']';
  }

  Sequent list(bool nested) {
    Sequent out;
    ws();
    if (nested && pos < s.size() && s[pos] == ']') return out;
    if (!nested && pos >= s.size()) return out;
    while (true) {
      ws();
      if (pos >= s.size()) throw ParseError("unexpected end of sequent", pos);
      if (s[pos] == '[' && (empty_child_here() || (pos + 1 < s.size() && s[pos + 1] != ']'))) {
        std::size_t open = pos;
        ++pos;
        Sequent k = list(true);
        ws();
        if (pos >= s.size() || s[pos] != ']') throw ParseError("unbalanced bracket opened", open);
        ++pos;
        out.add_kid(std::move(k));
      } else {
        FormulaParser fp(s, pos, opts);
        out.add(fp.parse_formula());
        pos = fp.pos();
      }
      ws();
      if (pos < s.size() && s[pos] == ',') {
        ++pos;
        continue;
      }
      break;
    }
    return out;
  }
};

}  // namespace

std::string print(const Sequent& s) {
  std::string out;
  print_rec(s, out);
  return out;
}

Sequent parse_sequent(std::string_view text, ParseOptions opts) {
  SeqReader r{text, 0, opts};
  Sequent s = r.list(false);
  r.ws();
  if (r.pos != text.size()) throw ParseError("trailing input in sequent", r.pos);
  s.normalize();
  return s;
}

}  // namespace cube
