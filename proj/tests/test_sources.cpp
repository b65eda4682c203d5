#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "xentropy/core.hpp"
#include "xentropy/infotheory.hpp"
#include "xentropy/sources.hpp"

using namespace xentropy;

namespace {

double sum(const std::vector<double>& p) {
    double t = 0;
    for (double x : p) t += x;
    return t;
}

double pair_mi(const core::SourceDistribution& source, std::size_t i, std::size_t j) {
    infotheory::JointTable full(source.factored->cardinalities(), source.probabilities);
    const auto cards = source.factored->cardinalities();
    return infotheory::mutual_information(
        infotheory::JointTable({cards[i], cards[j]}, full.marginal({i, j})));
}

}  // namespace

TEST_CASE("bernoulli product indexes value 1 of the first component highest") {
    auto s = sources::bernoulli_product({2.0 / 3, 2.0 / 3, 2.0 / 3});
    REQUIRE(s.probabilities.size() == 8);
    CHECK(s.probabilities[7] == doctest::Approx(8.0 / 27).epsilon(1e-12));
    CHECK(s.probabilities[0] == doctest::Approx(1.0 / 27).epsilon(1e-12));
    CHECK(s.probabilities[4] == doctest::Approx(2.0 / 27).epsilon(1e-12));  // (1,0,0)
    CHECK(sum(s.probabilities) == doctest::Approx(1.0).epsilon(1e-12));
    REQUIRE(s.factored.has_value());
    CHECK(s.factored->num_components() == 3);
    CHECK_THROWS_AS(sources::bernoulli_product({1.5}), input_error);
    CHECK_THROWS_AS(sources::bernoulli_product({}), input_error);
}

TEST_CASE("zipf matches the harmonic normalization") {
    auto s = sources::zipf(100, 1.0);
    REQUIRE(s.probabilities.size() == 100);
    CHECK(s.probabilities[0] == doctest::Approx(0.19277563597396005).epsilon(1e-12));
    CHECK(s.probabilities[1] == doctest::Approx(0.19277563597396005 / 2).epsilon(1e-12));
    CHECK(sum(s.probabilities) == doctest::Approx(1.0).epsilon(1e-12));
    for (std::size_t i = 1; i < 100; ++i)
        CHECK(s.probabilities[i] <= s.probabilities[i - 1]);
    auto flat = sources::zipf(5, 0.0);
    CHECK(flat.probabilities[4] == doctest::Approx(0.2).epsilon(1e-12));
    CHECK_THROWS_AS(sources::zipf(0, 1.0), input_error);
}

TEST_CASE("three-feature mixture interpolates between independence and identity") {
    const double eps = 0.05;
    auto indep = sources::three_feature_mixture(eps, 0.0);
    CHECK(pair_mi(indep, 1, 2) == doctest::Approx(0.0).epsilon(1e-12));
    auto prod = sources::bernoulli_product({2.0 / 3, 2.0 / 3 + eps, 2.0 / 3 + 2 * eps});
    for (std::size_t m = 0; m < 8; ++m)
        CHECK(indep.probabilities[m] == doctest::Approx(prod.probabilities[m]).epsilon(1e-12));

    auto fused = sources::three_feature_mixture(eps, 1.0);
    CHECK(pair_mi(fused, 1, 2) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(sum(fused.probabilities) == doctest::Approx(1.0).epsilon(1e-12));

    auto half = sources::three_feature_mixture(eps, 0.5);
    CHECK(pair_mi(half, 0, 1) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(pair_mi(half, 1, 2) > 0.1);
    CHECK_THROWS_AS(sources::three_feature_mixture(eps, 1.5), input_error);
}

TEST_CASE("hierarchical source couples nearer components more tightly") {
    auto s = sources::hierarchical_source(0.01, 0.20, 0.99);
    REQUIRE(s.factored.has_value());
    CHECK(s.factored->num_components() == 6);
    CHECK(s.probabilities.size() == 15625);
    CHECK(sum(s.probabilities) == doctest::Approx(1.0).epsilon(1e-10));
    const double i12 = pair_mi(s, 0, 1);
    const double i23 = pair_mi(s, 1, 2);
    const double i34 = pair_mi(s, 2, 3);
    const double i45 = pair_mi(s, 3, 4);
    CHECK(i12 > i23);
    CHECK(i23 > i34);
    CHECK(i34 >= 0);
    CHECK(i45 > i34);  // the second half mirrors the first
}

TEST_CASE("two-feature joint hits requested marginals and correlation") {
    sources::TwoFeatureSpec spec{0.7, 0.6, 0.25};
    auto s = sources::two_feature_joint(spec);
    infotheory::JointTable t({2, 2}, s.probabilities);
    CHECK(t.marginal({0})[1] == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(t.marginal({1})[1] == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(infotheory::pearson_binary(t) == doctest::Approx(0.25).epsilon(1e-12));

    auto anti = sources::two_feature_joint({0.5, 0.5, -1.0});
    CHECK(anti.probabilities[0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(anti.probabilities[1] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK_THROWS_AS(sources::two_feature_joint({0.9, 0.5, 1.0}), input_error);
}

TEST_CASE("simplex grid skips infeasible cells") {
    auto grid = sources::simplex_grid({0.5, 0.6, 0.7, 0.8, 0.9},
                                      {-1, -0.75, -0.5, -0.25, 0, 0.25, 0.5, 0.75, 1});
    CHECK(grid.size() == 121);
    for (const auto& [spec, source] : grid) {
        CHECK(sum(source.probabilities) == doctest::Approx(1.0).epsilon(1e-10));
        for (double p : source.probabilities) CHECK(p >= -1e-12);
        infotheory::JointTable t({2, 2}, source.probabilities);
        CHECK(infotheory::pearson_binary(t) == doctest::Approx(spec.r).epsilon(1e-9));
    }
    auto tiny = sources::simplex_grid({0.5}, {0.0});
    CHECK(tiny.size() == 1);
}
