#include "cubeprover/io.hpp"
#include "cubeprover/sequent.hpp"
#include "doctest.h"

using namespace cube;

namespace {
Sequent S(const char* text) { return parse_sequent(text); }
}  // namespace

TEST_CASE("resolve and subtrees") {
  Sequent s = S("x, [[y], z]");
  CHECK(resolve(s, {}) == s);
  CHECK(resolve(s, {0, 0}) == S("y"));
  CHECK_THROWS_AS(resolve(s, {3}), AddressError);
  CHECK(all_paths(S("a, [b], [c]")).size() == 3);
  CHECK(leaf_paths(S("a, [b], [c]")).size() == 2);
}

TEST_CASE("context filling") {
  Sequent ctx = S("x, [[y]]");
  CHECK(graft(ctx, {0}, S("z, [w]")) == S("x, [[y], z, [w]]"));
  CHECK(graft(ctx, {0}, Sequent{}) == ctx);
  Sequent s = S("a, [b], [c]");
  CHECK(graft(graft(s, {0}, S("x")), {1}, S("y")) == graft(graft(s, {1}, S("y")), {0}, S("x")));
  CHECK(resolve(graft(s, {1}, S("q, q")), {1}).count(parse("q")) == 2);
}

TEST_CASE("context depth") {
  CHECK(context_depth({}) == 0);
  CHECK(context_depth({2, 0}) == 2);
  CHECK(context_depth(child_path({1}, 0)) == context_depth({1}) + 1);
}

TEST_CASE("set sequents") {
  CHECK(set_sequent(S("p, p, [q], [q]")) == S("p, [q]"));
  CHECK(set_sequent(S("p, [q, q], [q]")) == S("p, [q]"));
  Sequent s = S("p, [q, q, [r]], [q, [r, r]]");
  CHECK(set_sequent(set_sequent(s)) == set_sequent(s));
  CHECK(is_set_sequent(set_sequent(s)));
  CHECK_FALSE(is_set_sequent(s));
  CHECK(sequent_subformulas(set_sequent(s)) == sequent_subformulas(s));
}

TEST_CASE("equality ignores presentation order") {
  CHECK(S("a, [b], [c, d]") == S("[d, c], a, [b]"));
  CHECK(S("a, [b]") != S("a, [b], [b]"));
  CHECK(S("p, q, [r]").formula_count() == 3);
  CHECK(S("p, q, [r]").node_count() == 2);
}

TEST_CASE("corresponding formula") {
  CHECK(corresponding_formula(Sequent{}) == Formula::bottom());
  Sequent s = S("a, [b]");
  CHECK(corresponding_formula(s) == Formula::mk_or(parse("a"), Formula::box(parse("b"))));
  Formula f = corresponding_formula(S("p, ~p"));
  CHECK((f == parse("p | ~p") || f == parse("~p | p")));
  CHECK(corresponding_formula(S("~p, p")) == f);
}

TEST_CASE("sequent subformulas") {
  CHECK(sequent_subformulas(S("p, [p]")) == std::vector<Formula>{parse("p")});
  CHECK(sequent_subformulas(S("p, [[]q]")).size() == 3);
}

TEST_CASE("textual and JSON round trips") {
  Sequent s = S("<>(~a&~b), [a, ~a&~b], <>b");
  CHECK(parse_sequent(print(s)) == s);
  CHECK(sequent_from_json(sequent_to_json(s)) == s);
  CHECK(print(S("a, [b, [c]], [d]")) == "a, [b, [c]], [d]");
  CHECK_THROWS_AS(sequent_from_json(json::parse(R"({"fs":[1],"kids":[]})")), SchemaError);
  CHECK_THROWS_AS(parse_sequent("a, [b"), ParseError);
}

TEST_CASE("tags are ignored by comparison") {
  Sequent a = S("p, [q]");
  Sequent b = a;
  std::uint64_t counter = 1;
  assign_tags(b, counter);
  CHECK(a == b);
  CHECK(find_tag(b, b.kids[0].tag).has_value());
  clear_tags(b);
  CHECK(b.kids[0].tag == 0);
}
