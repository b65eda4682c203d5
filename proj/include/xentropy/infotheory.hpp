#pragma once

#include <cstdint>
#include <vector>

#include "xentropy/core.hpp"

namespace xentropy::infotheory {

// Dense joint probability table over k discrete variables (k <= 6 in practice),
// flattened with the first variable most significant.
class JointTable {
public:
    JointTable(std::vector<std::uint32_t> cardinalities, std::vector<double> probabilities);

    std::size_t arity() const { return space_.num_components(); }
    std::uint32_t cardinality(std::size_t i) const { return space_.cardinalities()[i]; }
    const std::vector<double>& probabilities() const { return p_; }
    double at(const std::vector<std::uint32_t>& cell) const { return p_[space_.encode(cell)]; }

    // Dense marginal over the kept variables, in the order given.
    std::vector<double> marginal(const std::vector<std::size_t>& keep) const;

private:
    core::FactoredSpace space_;
    std::vector<double> p_;
};

double entropy(const std::vector<double>& dist);
double entropy(const JointTable& joint);

double mutual_information(const JointTable& joint);               // arity 2
double conditional_mutual_information(const JointTable& joint);   // arity 3: I[X1:X3 | X2]
double total_correlation(const JointTable& joint);                // arity >= 2
// Arity 3; positive values indicate redundancy, negative synergy.
double interaction_information(const JointTable& joint);
double pearson_binary(const JointTable& joint);                   // 2x2

// Per-position symbol joint induced by a bijective fixed-length language with
// pairwise-disjoint position alphabets.
JointTable position_joint(const core::Language& language, const core::SourceDistribution& source,
                          std::size_t expected_length);

struct Length2Report {
    double mi;
    double predicted_e;  // log2(3) + mi/3
};
Length2Report length2_analysis(const core::Language& language, const core::SourceDistribution& source);

struct Length3Report {
    double tc;
    double ii;
    double i13;
    double predicted_e;  // 2 + (tc - ii + i13)/4
};
Length3Report length3_analysis(const core::Language& language, const core::SourceDistribution& source);

}  // namespace xentropy::infotheory
