#include "cubeprover/countermodel.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

#include "cubeprover/io.hpp"

namespace cube {

// ---- relations

Relation Relation::from_pairs(int n, const std::vector<std::pair<int, int>>& pairs) {
  Relation r(n);
  for (auto [s, t] : pairs) r.set(s, t);
  return r;
}

std::vector<std::pair<int, int>> Relation::pairs() const {
  std::vector<std::pair<int, int>> out;
  for (int s = 0; s < n_; ++s)
    for (int t = 0; t < n_; ++t)
      if (get(s, t)) out.emplace_back(s, t);
  return out;
}

std::size_t Relation::count() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), 1));
}

bool Relation::contains(const Relation& o) const {
  if (o.n_ != n_) return false;
  for (std::size_t i = 0; i < bits_.size(); ++i)
    if (o.bits_[i] && !bits_[i]) return false;
  return true;
}

bool frame_condition_holds(const Relation& r, Axiom a) {
  int n = r.size();
  switch (a) {
    case AX_D:
      for (int s = 0; s < n; ++s) {
        bool any = false;
        for (int t = 0; t < n && !any; ++t) any = r.get(s, t);
        if (!any) return false;
      }
      return true;
    case AX_T:
      for (int s = 0; s < n; ++s)
        if (!r.get(s, s)) return false;
      return true;
    case AX_B:
      for (int s = 0; s < n; ++s)
        for (int t = 0; t < n; ++t)
          if (r.get(s, t) && !r.get(t, s)) return false;
      return true;
    case AX_4:
      for (int s = 0; s < n; ++s)
        for (int t = 0; t < n; ++t) {
          if (!r.get(s, t)) continue;
          for (int u = 0; u < n; ++u)
            if (r.get(t, u) && !r.get(s, u)) return false;
        }
      return true;
    case AX_5:
      for (int s = 0; s < n; ++s)
        for (int t = 0; t < n; ++t) {
          if (!r.get(s, t)) continue;
          for (int u = 0; u < n; ++u)
            if (r.get(s, u) && !r.get(t, u)) return false;
        }
      return true;
  }
  return false;
}

bool satisfies_frame(const Relation& r, AxSet X) {
  for (Axiom a : {AX_D, AX_T, AX_B, AX_4, AX_5})
    if (has(X, a) && !frame_condition_holds(r, a)) return false;
  return true;
}

Relation serial_closure(const Relation& r) {
  Relation out = r;
  for (int s = 0; s < r.size(); ++s) {
    bool any = false;
    for (int t = 0; t < r.size() && !any; ++t) any = r.get(s, t);
    if (!any) out.set(s, s);
  }
  return out;
}

Relation close(const Relation& r, AxSet X) {
  Relation out = r;
  int n = r.size();
  bool changed = true;
  while (changed) {
    changed = false;
    for (int s = 0; s < n; ++s) {
      if (has(X, AX_T)) changed |= out.set(s, s);
      for (int t = 0; t < n; ++t) {
        if (!out.get(s, t)) continue;
        if (has(X, AX_B)) changed |= out.set(t, s);
        for (int u = 0; u < n; ++u) {
          if (has(X, AX_4) && out.get(t, u)) changed |= out.set(s, u);
          if (has(X, AX_5) && out.get(s, u)) changed |= out.set(t, u);
        }
      }
    }
  }
  if (has(X, AX_D)) out = serial_closure(out);
  return out;
}

namespace {

// States reachable from `from` along the symmetric closure of r, including `from`.
std::vector<bool> sym_reach(const Relation& r, int from) {
  std::vector<bool> seen(static_cast<std::size_t>(r.size()), false);
  std::deque<int> q{from};
  seen[static_cast<std::size_t>(from)] = true;
  while (!q.empty()) {
    int x = q.front();
    q.pop_front();
    for (int y = 0; y < r.size(); ++y) {
      if (seen[static_cast<std::size_t>(y)] || !(r.get(x, y) || r.get(y, x))) continue;
      seen[static_cast<std::size_t>(y)] = true;
      q.push_back(y);
    }
  }
  return seen;
}

}  // namespace

Relation euclidean_connection_closure(const Relation& r) {
  Relation out = r;
  int n = r.size();
  for (int s1 = 0; s1 < n; ++s1) {
    auto reach = sym_reach(r, s1);
    for (int s = 0; s < n; ++s) {
      if (!r.get(s1, s)) continue;
      for (int sn = 0; sn < n; ++sn) {
        if (!reach[static_cast<std::size_t>(sn)]) continue;
        for (int t = 0; t < n; ++t)
          if (r.get(sn, t)) out.set(s, t);
      }
    }
  }
  return out;
}

Relation transitive_euclidean_connection_closure(const Relation& r) {
  Relation out(r.size());
  int n = r.size();
  for (int s = 0; s < n; ++s) {
    auto reach = sym_reach(r, s);
    for (int sn = 0; sn < n; ++sn) {
      if (!reach[static_cast<std::size_t>(sn)]) continue;
      for (int t = 0; t < n; ++t)
        if (r.get(sn, t)) out.set(s, t);
    }
  }
  return out;
}

// ---- models

bool KripkeModel::holds(const std::string& atom, int s) const {
  auto it = val.find(atom);
  if (it == val.end()) return false;
  return std::binary_search(it->second.begin(), it->second.end(), s);
}

namespace {

bool mc(const KripkeModel& m, int s, Formula f) {
  switch (f.op()) {
    case Op::Atom: {
      bool v = !f.is_reserved() && m.holds(f.name(), s);
      return f.negated() ? !v : v;
    }
    case Op::Or: return mc(m, s, f.left()) || mc(m, s, f.right());
    case Op::And: return mc(m, s, f.left()) && mc(m, s, f.right());
    case Op::Dia:
      for (int t = 0; t < m.num_states; ++t)
        if (m.rel.get(s, t) && mc(m, t, f.body())) return true;
      return false;
    case Op::Box:
      for (int t = 0; t < m.num_states; ++t)
        if (m.rel.get(s, t) && !mc(m, t, f.body())) return false;
      return true;
  }
  return false;
}

}  // namespace

bool model_check(const KripkeModel& m, int s, Formula f) {
  if (s < 0 || s >= m.num_states) throw UnknownState("unknown state " + std::to_string(s));
  return mc(m, s, f);
}

bool verify_frame(const KripkeModel& m, AxSet X) { return satisfies_frame(m.rel, X); }

bool verify_countermodel(const KripkeModel& m, int root, const Sequent& goal, AxSet X) {
  if (m.num_states <= 0 || root < 0 || root >= m.num_states) return false;
  return verify_frame(m, X) && !model_check(m, root, corresponding_formula(goal));
}

// ---- extraction

std::vector<Path> cyclic_leaves(const Sequent& s) {
  std::vector<std::vector<Formula>> inner;
  for (const auto& p : all_paths(s)) {
    const Sequent& n = resolve(s, p);
    if (!n.kids.empty()) inner.push_back(formula_set(n));
  }
  std::vector<Path> out;
  for (const auto& p : leaf_paths(s)) {
    auto fs = formula_set(resolve(s, p));
    if (std::find(inner.begin(), inner.end(), fs) != inner.end()) out.push_back(p);
  }
  return out;
}

bool is_cyclic(const Sequent& s, const Path& leaf) {
  const Sequent& l = resolve(s, leaf);
  if (!l.kids.empty()) return false;
  auto fs = formula_set(l);
  for (const auto& p : all_paths(s)) {
    const Sequent& n = resolve(s, p);
    if (!n.kids.empty() && formula_set(n) == fs) return true;
  }
  return false;
}

namespace {

std::string path_text(const Path& p) {
  std::string s = "[";
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(p[i]);
  }
  return s + "]";
}

}  // namespace

Countermodel extract_model(const Sequent& finished, AxSet X, const std::vector<std::string>& atoms) {
  if (is_axiomatic(finished)) throw ExtractionError("sequent is axiomatic");
  auto paths = all_paths(finished);
  auto cyc = cyclic_leaves(finished);
  auto is_cyc = [&](const Path& p) { return std::find(cyc.begin(), cyc.end(), p) != cyc.end(); };

  std::map<Path, int> state_of;
  KripkeModel m;
  for (const auto& p : paths) {
    if (is_cyc(p)) continue;
    state_of[p] = m.num_states++;
    m.origin.push_back(path_text(p));
  }
  // f: first inner node in DFS order with the same formula set.
  auto f = [&](const Path& leaf) -> int {
    auto fs = formula_set(resolve(finished, leaf));
    for (const auto& p : paths) {
      const Sequent& n = resolve(finished, p);
      if (!n.kids.empty() && formula_set(n) == fs) return state_of.at(p);
    }
    throw ExtractionError("cyclic leaf without a matching inner node");
  };
  Relation base(m.num_states);
  for (const auto& p : paths) {
    if (is_cyc(p)) continue;
    int s = state_of.at(p);
    const Sequent& n = resolve(finished, p);
    for (std::uint32_t i = 0; i < n.kids.size(); ++i) {
      Path c = child_path(p, i);
      base.set(s, is_cyc(c) ? f(c) : state_of.at(c));
    }
  }
  m.rel = close(base, X);
  for (const auto& a : atoms) {
    Formula neg = Formula::atom(a, true);
    std::vector<int> states;
    for (const auto& [p, s] : state_of)
      if (resolve(finished, p).count(neg) > 0) states.push_back(s);
    std::sort(states.begin(), states.end());
    m.val[a] = states;
  }
  return Countermodel{std::move(m), state_of.at(Path{})};
}

// ---- serialization

nlohmann::json model_to_json(const KripkeModel& m, int root) {
  nlohmann::json j;
  std::vector<int> states(static_cast<std::size_t>(m.num_states));
  for (int i = 0; i < m.num_states; ++i) states[static_cast<std::size_t>(i)] = i;
  j["states"] = states;
  nlohmann::json rel = nlohmann::json::array();
  for (auto [s, t] : m.rel.pairs()) rel.push_back({s, t});
  j["rel"] = rel;
  nlohmann::json val = nlohmann::json::object();
  for (const auto& [a, ss] : m.val) val[a] = ss;
  j["val"] = val;
  j["root"] = root;
  if (!m.origin.empty()) j["origin"] = m.origin;
  return j;
}

Countermodel model_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw SchemaError("expected an object", "");
  for (const char* k : {"states", "rel", "val", "root"})
    if (!j.contains(k)) throw SchemaError(std::string("missing field \"") + k + "\"", "");
  const auto& st = j["states"];
  if (!st.is_array() || st.empty()) throw SchemaError("states must be a nonempty array", "/states");
  std::map<long, int> id;
  for (std::size_t i = 0; i < st.size(); ++i) {
    if (!st[i].is_number_integer()) throw SchemaError("state ids must be integers", "/states/" + std::to_string(i));
    id[st[i].get<long>()] = static_cast<int>(i);
  }
  auto state = [&](const nlohmann::json& v, const std::string& where) {
    if (!v.is_number_integer() || !id.count(v.get<long>())) throw SchemaError("unknown state", where);
    return id.at(v.get<long>());
  };
  Countermodel cm;
  cm.model.num_states = static_cast<int>(st.size());
  cm.model.rel = Relation(cm.model.num_states);
  const auto& rel = j["rel"];
  if (!rel.is_array()) throw SchemaError("rel must be an array", "/rel");
  for (std::size_t i = 0; i < rel.size(); ++i) {
    std::string w = "/rel/" + std::to_string(i);
    if (!rel[i].is_array() || rel[i].size() != 2) throw SchemaError("edge must be a pair", w);
    cm.model.rel.set(state(rel[i][0], w + "/0"), state(rel[i][1], w + "/1"));
  }
  const auto& val = j["val"];
  if (!val.is_object()) throw SchemaError("val must be an object", "/val");
  for (auto it = val.begin(); it != val.end(); ++it) {
    std::string w = "/val/" + it.key();
    if (!it.value().is_array()) throw SchemaError("valuation must be an array", w);
    std::vector<int> ss;
    for (std::size_t i = 0; i < it.value().size(); ++i) ss.push_back(state(it.value()[i], w + "/" + std::to_string(i)));
    std::sort(ss.begin(), ss.end());
    ss.erase(std::unique(ss.begin(), ss.end()), ss.end());
    cm.model.val[it.key()] = ss;
  }
  cm.root = state(j["root"], "/root");
  return cm;
}

std::string model_to_dot(const KripkeModel& m, int root) {
  std::ostringstream o;
  o << "digraph model {\n";
  for (int s = 0; s < m.num_states; ++s) {
    std::string label;
    for (const auto& [a, ss] : m.val)
      if (std::binary_search(ss.begin(), ss.end(), s)) label += (label.empty() ? "" : ",") + a;
    o << "  s" << s << " [label=\"s" << s << (label.empty() ? "" : ": " + label) << "\""
      << (s == root ? ", shape=doublecircle" : "") << "];\n";
  }
  for (auto [s, t] : m.rel.pairs()) o << "  s" << s << " -> s" << t << ";\n";
  o << "}\n";
  return o.str();
}

}  // namespace cube
