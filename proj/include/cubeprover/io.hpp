#pragma once
// JSON encodings of sequents and proofs, and file helpers.

#include <string>

#include "cubeprover/calculus.hpp"
#include "json.hpp"

namespace cube {

using json = nlohmann::json;

// Schema violation; `where` is a JSON pointer into the offending document.
struct SchemaError : std::runtime_error {
  std::string where;
  SchemaError(const std::string& msg, std::string w)
      : std::runtime_error(msg + " at " + (w.empty() ? std::string("/") : w)), where(std::move(w)) {}
};

json sequent_to_json(const Sequent& s);
Sequent sequent_from_json(const json& j, const std::string& where = "");

json proof_to_json(const Proof& p);
// Loads a proof tree without validating it; run check_proof afterwards.
Proof proof_from_json(const json& j, const std::string& where = "");

json read_json_file(const std::string& path);
// Writes via a temporary file and rename.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace cube
