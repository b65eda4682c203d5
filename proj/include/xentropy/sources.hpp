#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "xentropy/core.hpp"

namespace xentropy::sources {

core::SourceDistribution bernoulli_product(const std::vector<double>& ps);

// p(M1) x [(1-alpha) p(M2) p(M3) + (alpha/2) delta_{M2,M3}] over binary
// components (2/3, 2/3+eps, 2/3+2*eps); I[M2:M3] grows from 0 to 1 bit.
core::SourceDistribution three_feature_mixture(double eps, double alpha);

// p(rank r) proportional to r^-exponent, rank = index + 1.
core::SourceDistribution zipf(std::size_t n, double exponent);

// Six 5-ary components; nested mixture of Zipfian blocks coupling (M1,M2)
// tightly, M3 loosely, (M4,M5,M6) mirror-wise, and the halves very weakly.
core::SourceDistribution hierarchical_source(double alpha, double beta, double gamma);

struct TwoFeatureSpec {
    double a;  // p(M1 = 1)
    double b;  // p(M2 = 1)
    double r;  // Pearson correlation
};

core::SourceDistribution two_feature_joint(const TwoFeatureSpec& spec);

// Cartesian product of marginal pairs and correlations; infeasible cells
// (any joint entry below -1e-12) are skipped rather than raised.
std::vector<std::pair<TwoFeatureSpec, core::SourceDistribution>> simplex_grid(
    const std::vector<double>& marginals, const std::vector<double>& correlations);

}  // namespace xentropy::sources
