#include "cubeprover/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace cube {

namespace {

ParseOptions loader_opts() {
  ParseOptions o;
  o.allow_reserved = true;
  return o;
}

const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object()) throw SchemaError("expected an object", where);
  auto it = j.find(key);
  if (it == j.end()) throw SchemaError(std::string("missing field \"") + key + "\"", where);
  return *it;
}

Path path_from_json(const json& j, const std::string& where) {
  if (!j.is_array()) throw SchemaError("expected a node path array", where);
  Path p;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number_unsigned()) throw SchemaError("expected a child index", where + "/" + std::to_string(i));
    p.push_back(j[i].get<std::uint32_t>());
  }
  return p;
}

}  // namespace

json sequent_to_json(const Sequent& s) {
  json fs = json::array();
  for (Formula f : s.fs) fs.push_back(print(f));
  json kids = json::array();
  for (const auto& k : s.kids) kids.push_back(sequent_to_json(k));
  return json{{"fs", fs}, {"kids", kids}};
}

Sequent sequent_from_json(const json& j, const std::string& where) {
  Sequent s;
  const json& fs = field(j, "fs", where);
  if (!fs.is_array()) throw SchemaError("\"fs\" must be an array", where + "/fs");
  for (std::size_t i = 0; i < fs.size(); ++i) {
    std::string w = where + "/fs/" + std::to_string(i);
    if (!fs[i].is_string()) throw SchemaError("formula must be a string", w);
    try {
      s.add(parse(fs[i].get<std::string>(), loader_opts()));
    } catch (const ParseError& e) {
      throw SchemaError(e.what(), w);
    }
  }
  if (j.contains("kids")) {
    const json& kids = j["kids"];
    if (!kids.is_array()) throw SchemaError("\"kids\" must be an array", where + "/kids");
    for (std::size_t i = 0; i < kids.size(); ++i)
      s.kids.push_back(sequent_from_json(kids[i], where + "/kids/" + std::to_string(i)));
  }
  s.normalize();
  return s;
}

json proof_to_json(const Proof& p) {
  const RuleInstance& in = p->step;
  json j;
  j["concl"] = sequent_to_json(in.concl);
  j["rule"] = rule_name(in.rule, in.circ);
  json act = json::array();
  for (const auto& a : in.act) {
    json sj{{"node", a.node}};
    if (a.index >= 0) sj["slot"] = a.index;
    act.push_back(sj);
  }
  j["active"] = act;
  if (in.cutf.valid()) j["cut"] = print(in.cutf);
  if (in.rule == Rule::wk || in.rule == Rule::ctr || in.rule == Rule::str_t ||
      in.rule == Rule::str_b || in.rule == Rule::med)
    j["delta"] = sequent_to_json(in.delta);
  if (in.rule == Rule::m_and || in.rule == Rule::mcut) j["m"] = in.m;
  if (in.rule == Rule::m_box || in.rule == Rule::m_and || in.rule == Rule::mcut) j["n"] = in.n;
  if (in.rule == Rule::ycut || in.rule == Rule::ystr) j["Y"] = axset_to_string(in.Y);
  json prems = json::array();
  for (const auto& s : p->subs) prems.push_back(proof_to_json(s));
  j["prems"] = prems;
  return j;
}

Proof proof_from_json(const json& j, const std::string& where) {
  RuleInstance in;
  in.concl = sequent_from_json(field(j, "concl", where), where + "/concl");
  const json& rn = field(j, "rule", where);
  if (!rn.is_string()) throw SchemaError("\"rule\" must be a string", where + "/rule");
  auto r = rule_from_name(rn.get<std::string>());
  if (!r) throw SchemaError("unknown rule \"" + rn.get<std::string>() + "\"", where + "/rule");
  in.rule = r->first;
  in.circ = r->second;
  if (j.contains("active")) {
    const json& act = j["active"];
    if (!act.is_array()) throw SchemaError("\"active\" must be an array", where + "/active");
    for (std::size_t i = 0; i < act.size(); ++i) {
      std::string w = where + "/active/" + std::to_string(i);
      Slot s;
      s.node = path_from_json(field(act[i], "node", w), w + "/node");
      if (act[i].contains("slot")) {
        if (!act[i]["slot"].is_number_integer()) throw SchemaError("slot must be an integer", w + "/slot");
        s.index = act[i]["slot"].get<int>();
      }
      in.act.push_back(std::move(s));
    }
  }
  if (j.contains("cut")) {
    if (!j["cut"].is_string()) throw SchemaError("\"cut\" must be a string", where + "/cut");
    try {
      in.cutf = parse(j["cut"].get<std::string>(), loader_opts());
    } catch (const ParseError& e) {
      throw SchemaError(e.what(), where + "/cut");
    }
  }
  if (j.contains("delta")) in.delta = sequent_from_json(j["delta"], where + "/delta");
  for (const char* key : {"m", "n"}) {
    if (!j.contains(key)) continue;
    if (!j[key].is_number_integer()) throw SchemaError("multiplicity must be an integer", where + "/" + key);
    (key[0] == 'm' ? in.m : in.n) = j[key].get<int>();
  }
  if (j.contains("Y")) {
    if (!j["Y"].is_string()) throw SchemaError("\"Y\" must be a string", where + "/Y");
    try {
      in.Y = axset_from_string(j["Y"].get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw SchemaError(e.what(), where + "/Y");
    }
  }
  std::vector<Proof> subs;
  const json& prems = field(j, "prems", where);
  if (!prems.is_array()) throw SchemaError("\"prems\" must be an array", where + "/prems");
  for (std::size_t i = 0; i < prems.size(); ++i) {
    subs.push_back(proof_from_json(prems[i], where + "/prems/" + std::to_string(i)));
    in.prems.push_back(subs.back()->concl());
  }
  return make_proof_unchecked(std::move(in), std::move(subs));
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("invalid JSON: ") + e.what(), "");
  }
}

void write_file_atomic(const std::string& path, const std::string& content) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp);
    out << content;
    if (!out.flush()) throw std::runtime_error("cannot write " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw std::runtime_error("cannot rename " + tmp + " to " + path);
  }
}

}  // namespace cube
