#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "xentropy/core.hpp"

using namespace xentropy;
using namespace xentropy::core;

TEST_CASE("alphabet ids are dense and the delimiter is reserved") {
    Alphabet a({"p", "t", "k"});
    CHECK(a.size() == 3);
    CHECK(a.delimiter_id() == 3);
    CHECK(a.delimiter() == "#");
    CHECK(a.id("t") == 1);
    CHECK(a.token(2) == "k");
    CHECK(a.has("p"));
    CHECK(!a.has("x"));
    CHECK_THROWS_AS(a.id("x"), input_error);
}

TEST_CASE("alphabet rejects duplicates and delimiter collisions") {
    CHECK_THROWS_AS(Alphabet({"a", "a"}), input_error);
    CHECK_THROWS_AS(Alphabet({"a", "#"}), input_error);
    CHECK_THROWS_AS(Alphabet({"a", "b"}, "b"), input_error);
    Alphabet custom({"a", "#"}, "<d>");  // '#' usable once the delimiter moves
    CHECK(custom.id("#") == 1);
    CHECK(custom.delimiter() == "<d>");
}

TEST_CASE("char_alphabet splits on characters") {
    Alphabet a = char_alphabet("ab");
    CHECK(a.size() == 2);
    CHECK(a.token(0) == "a");
    CHECK(a.token(1) == "b");
}

TEST_CASE("utf8_tokens groups continuation bytes") {
    auto t = utf8_tokens("hajó");
    REQUIRE(t.size() == 4);
    CHECK(t[3] == "ó");
    auto u = utf8_tokens("ʔaqlāmun");
    REQUIRE(u.size() == 8);
    CHECK(u[0] == "ʔ");
    CHECK(u[4] == "ā");
    CHECK(utf8_tokens("abc").size() == 3);
    CHECK(utf8_tokens("").empty());
}

TEST_CASE("factored space uses first-component-most-significant order") {
    FactoredSpace s({2, 2, 2});
    CHECK(s.size() == 8);
    CHECK(s.num_components() == 3);
    CHECK(s.encode({1, 0, 0}) == 4);
    CHECK(s.encode({0, 1, 1}) == 3);
    for (std::size_t m = 0; m < s.size(); ++m) {
        CHECK(s.encode(s.decode(m)) == m);
        for (std::size_t j = 0; j < 3; ++j) CHECK(s.component(m, j) == s.decode(m)[j]);
    }
    FactoredSpace mixed({2, 3, 5});
    CHECK(mixed.size() == 30);
    CHECK(mixed.encode({1, 2, 4}) == 29);
    CHECK_THROWS_AS(FactoredSpace({2, 0}), input_error);
}

TEST_CASE("source validation") {
    auto s = make_source({0.25, 0.75});
    CHECK(s.probabilities[1] == 0.75);
    CHECK(!s.factored.has_value());
    CHECK_THROWS_AS(make_source({0.5, 0.6}), input_error);
    CHECK_THROWS_AS(make_source({-0.1, 1.1}), input_error);
    CHECK_THROWS_AS(make_source({0.5, 0.5, 0.0}, FactoredSpace({2})), input_error);
    auto u = uniform_source(4);
    for (double p : u.probabilities) CHECK(p == 0.25);
}

TEST_CASE("language construction validates forms") {
    Alphabet a = char_alphabet("ab");
    auto lang = make_language({{0, 1}, {1, 0}}, a);
    CHECK(lang.forms.size() == 2);
    CHECK_THROWS_AS(make_language({{}}, a), input_error);                // empty form
    CHECK_THROWS_AS(make_language({{0, 2}}, a), input_error);           // delimiter id
    CHECK_THROWS_AS(make_language({{0, 7}}, a), input_error);           // out of range
}

TEST_CASE("form parsing round-trips") {
    Alphabet a = char_alphabet("ab");
    Form f = parse_form(a, "aba");
    CHECK(f == Form{0, 1, 0});
    CHECK(form_text(a, f) == "aba");
    CHECK_THROWS_AS(parse_form(a, "abc"), input_error);
    CHECK(make_form(a, {"b", "a"}) == Form{1, 0});
}

TEST_CASE("form distributions are sorted, merged, and validated") {
    Alphabet a = char_alphabet("ab");
    auto fd = make_form_distribution({{parse_form(a, "b"), 0.25},
                                      {parse_form(a, "a"), 0.5},
                                      {parse_form(a, "b"), 0.25},
                                      {parse_form(a, "ab"), 0.0}});
    REQUIRE(fd.entries.size() == 2);  // zero mass dropped, duplicates merged
    CHECK(fd.entries[0].first == Form{0});
    CHECK(fd.entries[1].second == doctest::Approx(0.5));
    CHECK_THROWS_AS(make_form_distribution({{Form{0}, 0.5}}), input_error);
    CHECK_THROWS_AS(make_form_distribution({{Form{0}, -0.1}, {Form{1}, 1.1}}), input_error);
}

TEST_CASE("form_distribution pairs language with source") {
    Alphabet a = char_alphabet("ab");
    auto lang = make_language({{0}, {1}}, a);
    auto fd = form_distribution(lang, make_source({0.75, 0.25}));
    CHECK(fd.entries.size() == 2);
    CHECK(max_extended_length(fd) == 2);
    CHECK_THROWS_AS(form_distribution(lang, uniform_source(3)), input_error);
}

TEST_CASE("duplicate forms in a language merge their mass") {
    Alphabet a = char_alphabet("ab");
    auto lang = make_language({{0}, {0}, {1}}, a);
    auto fd = form_distribution(lang, make_source({0.25, 0.25, 0.5}));
    REQUIRE(fd.entries.size() == 2);
    CHECK(fd.entries[0].second == doctest::Approx(0.5));
}

TEST_CASE("normalize_counts applies additive smoothing") {
    std::map<std::string, double> c = {{"x", 3}, {"y", 0}};
    auto p = normalize_counts(c, 0.5);
    CHECK(p["x"] == doctest::Approx(3.5 / 4.0));
    CHECK(p["y"] == doctest::Approx(0.5 / 4.0));
    std::map<std::string, double> zero = {{"x", 0}};
    CHECK_THROWS_AS(normalize_counts(zero, 0.0), input_error);
    CHECK_THROWS_AS(normalize_counts(std::map<std::string, double>{}, 0.5), input_error);
}
