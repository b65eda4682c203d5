#include "xentropy/sources.hpp"

#include <algorithm>
#include <cmath>

namespace xentropy::sources {

core::SourceDistribution bernoulli_product(const std::vector<double>& ps) {
    if (ps.empty()) throw input_error("bernoulli product: no components");
    for (double p : ps)
        if (!(p >= 0 && p <= 1)) throw input_error("bernoulli product: probability out of [0,1]");
    core::FactoredSpace space(std::vector<std::uint32_t>(ps.size(), 2));
    std::vector<double> prob(space.size());
    for (std::size_t m = 0; m < space.size(); ++m) {
        double p = 1;
        for (std::size_t j = 0; j < ps.size(); ++j)
            p *= space.component(m, j) == 1 ? ps[j] : 1 - ps[j];
        prob[m] = p;
    }
    return core::make_source(std::move(prob), std::move(space));
}

core::SourceDistribution three_feature_mixture(double eps, double alpha) {
    if (!(alpha >= 0 && alpha <= 1)) throw input_error("three-feature mixture: alpha out of [0,1]");
    const double p1 = 2.0 / 3.0;
    const double p2 = 2.0 / 3.0 + eps;
    const double p3 = 2.0 / 3.0 + 2 * eps;
    if (!(p2 >= 0 && p2 <= 1 && p3 >= 0 && p3 <= 1))
        throw input_error("three-feature mixture: eps pushes a marginal out of [0,1]");
    core::FactoredSpace space({2, 2, 2});
    std::vector<double> prob(8);
    for (std::size_t m = 0; m < 8; ++m) {
        const auto i = space.component(m, 0);
        const auto j = space.component(m, 1);
        const auto k = space.component(m, 2);
        const double pm1 = i == 1 ? p1 : 1 - p1;
        const double pm2 = j == 1 ? p2 : 1 - p2;
        const double pm3 = k == 1 ? p3 : 1 - p3;
        prob[m] = pm1 * ((1 - alpha) * pm2 * pm3 + (j == k ? alpha / 2 : 0.0));
    }
    return core::make_source(std::move(prob), std::move(space));
}

core::SourceDistribution zipf(std::size_t n, double exponent) {
    if (n == 0) throw input_error("zipf: empty support");
    if (!(exponent >= 0)) throw input_error("zipf: exponent must be nonnegative");
    std::vector<double> prob(n);
    double total = 0;
    for (std::size_t i = 0; i < n; ++i) {
        prob[i] = std::pow(static_cast<double>(i + 1), -exponent);
        total += prob[i];
    }
    for (double& p : prob) p /= total;
    return core::make_source(std::move(prob));
}

namespace {

// Zipfian weights over a block of components, ranked by mixed-radix index.
std::vector<double> zipf_block(std::size_t size) {
    std::vector<double> prob(size);
    double total = 0;
    for (std::size_t i = 0; i < size; ++i) {
        prob[i] = 1.0 / static_cast<double>(i + 1);
        total += prob[i];
    }
    for (double& p : prob) p /= total;
    return prob;
}

}  // namespace

core::SourceDistribution hierarchical_source(double alpha, double beta, double gamma) {
    for (double c : {alpha, beta, gamma})
        if (!(c >= 0 && c <= 1)) throw input_error("hierarchical source: coupling out of [0,1]");
    core::FactoredSpace space(std::vector<std::uint32_t>(6, 5));
    const auto q1 = zipf_block(5);
    const auto q2 = zipf_block(25);
    const auto q3 = zipf_block(125);
    const auto q6 = zipf_block(15625);
    std::vector<double> prob(space.size());
    for (std::size_t m = 0; m < space.size(); ++m) {
        const auto t = space.decode(m);
        auto half = [&](std::uint32_t a, std::uint32_t b, std::uint32_t c) {
            const std::size_t ab = a * 5 + b;
            const std::size_t abc = (ab * 5) + c;
            const double pair = gamma * q2[ab] + (1 - gamma) * q1[a] * q1[b];
            return beta * q3[abc] + (1 - beta) * pair * q1[c];
        };
        prob[m] = alpha * q6[m] +
                  (1 - alpha) * half(t[0], t[1], t[2]) * half(t[3], t[4], t[5]);
    }
    return core::make_source(std::move(prob), std::move(space));
}

core::SourceDistribution two_feature_joint(const TwoFeatureSpec& spec) {
    if (!(spec.a > 0 && spec.a < 1 && spec.b > 0 && spec.b < 1))
        throw input_error("two-feature joint: marginals must be inside (0,1)");
    const double p11 = spec.a * spec.b + spec.r * std::sqrt(spec.a * (1 - spec.a) * spec.b * (1 - spec.b));
    const double p10 = spec.a - p11;
    const double p01 = spec.b - p11;
    const double p00 = 1 - spec.a - spec.b + p11;
    std::vector<double> cells{p00, p01, p10, p11};
    for (double& c : cells) {
        if (c < -core::prob_tolerance) throw input_error("two-feature joint: infeasible marginal/correlation combination");
        c = std::max(c, 0.0);
    }
    return core::make_source(std::move(cells), core::FactoredSpace({2, 2}));
}

std::vector<std::pair<TwoFeatureSpec, core::SourceDistribution>> simplex_grid(
    const std::vector<double>& marginals, const std::vector<double>& correlations) {
    if (marginals.empty() || correlations.empty()) throw input_error("simplex grid: empty axis");
    std::vector<std::pair<TwoFeatureSpec, core::SourceDistribution>> out;
    for (double a : marginals)
        for (double b : marginals)
            for (double r : correlations) {
                const TwoFeatureSpec spec{a, b, r};
                try {
                    out.emplace_back(spec, two_feature_joint(spec));
                } catch (const input_error&) {
                    // infeasible cell: skipped by contract
                }
            }
    return out;
}

}  // namespace xentropy::sources
