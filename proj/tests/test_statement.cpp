#include "verity/errors.hpp"
#include "verity/statement.hpp"

#include "support/build.hpp"

#include <doctest.h>

#include <string>

using namespace verity;
using namespace verity::testing;

TEST_CASE("multiple-choice group with one correct statement validates") {
    StatementGroup g = group("g1", GroupKind::multiple_choice,
                             {stmt("a", false), stmt("b", false), stmt("c", true),
                              stmt("d", false)});
    CHECK(validate_group(g).ok());
    CHECK(g.correct_index() == 2);
}

TEST_CASE("two correct statements violate the one-correct invariant") {
    StatementGroup g = group("g1", GroupKind::multiple_choice,
                             {stmt("a", true), stmt("b", true), stmt("c", false)});
    ValidationResult r = validate_group(g);
    REQUIRE_FALSE(r.ok());
    CHECK(r.violations.front().invariant == "multiple_choice_one_correct");
}

TEST_CASE("boolean group must hold exactly one statement") {
    StatementGroup g =
        group("g1", GroupKind::boolean, {stmt("a", true, Origin::boolean),
                                         stmt("b", false, Origin::boolean)});
    ValidationResult r = validate_group(g);
    REQUIRE_FALSE(r.ok());
    CHECK(r.violations.front().invariant == "boolean_singleton");

    g.statements.pop_back();
    CHECK(validate_group(g).ok());
}

TEST_CASE("duplicate statement texts inside a group are rejected") {
    StatementGroup g = group("g1", GroupKind::multiple_choice,
                             {stmt("same", true), stmt("same", false)});
    ValidationResult r = validate_group(g);
    REQUIRE_FALSE(r.ok());
    CHECK(r.violations.front().invariant == "statement_texts_distinct");
}

TEST_CASE("empty group id, empty texts, and empty groups are violations") {
    CHECK_FALSE(validate_group(group("", GroupKind::boolean, {stmt("a", true)})).ok());
    CHECK_FALSE(validate_group(group("g", GroupKind::boolean, {stmt("  ", true)})).ok());
    CHECK_FALSE(validate_group(group("g", GroupKind::multiple_choice, {})).ok());
}

TEST_CASE("a multiple-choice group needs at least two statements") {
    StatementGroup g = group("g1", GroupKind::multiple_choice, {stmt("only", true)});
    ValidationResult r = validate_group(g);
    REQUIRE_FALSE(r.ok());
    CHECK(r.violations.front().invariant == "multiple_choice_size");
}

TEST_CASE("require_valid raises InvalidGroup naming the first violation") {
    StatementGroup g = group("bad", GroupKind::multiple_choice,
                             {stmt("a", true), stmt("b", true)});
    CHECK_THROWS_AS(require_valid(g), InvalidGroup);
    try {
        require_valid(g);
    } catch (const VerityError& e) {
        CHECK(std::string(e.code()) == "InvalidGroup");
        CHECK(std::string(e.what()).find("multiple_choice_one_correct") != std::string::npos);
    }
}

TEST_CASE("enum names round-trip through their string forms") {
    for (Origin o : {Origin::question_choice, Origin::boolean, Origin::kb_original,
                     Origin::kb_perturbed, Origin::lm_falsehood}) {
        CHECK(origin_from_string(to_string(o)) == o);
    }
    for (GroupKind k : {GroupKind::multiple_choice, GroupKind::boolean}) {
        CHECK(kind_from_string(to_string(k)) == k);
    }
    for (Stage s : {Stage::stage_a, Stage::stage_b, Stage::eval_only}) {
        CHECK(stage_from_string(to_string(s)) == s);
    }
    CHECK_THROWS_AS(origin_from_string("made_up"), InvalidArgument);
    CHECK_THROWS_AS(kind_from_string("made_up"), InvalidArgument);
    CHECK_THROWS_AS(stage_from_string("made_up"), InvalidArgument);
}

TEST_CASE("trim strips ascii whitespace from both ends") {
    CHECK(trim("  x y  ") == "x y");
    CHECK(trim("\t\n x \r\n") == "x");
    CHECK(trim("") == "");
    CHECK(trim("   ") == "");
}
