#include "xentropy/infotheory.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "xentropy/numeric.hpp"

namespace xentropy::infotheory {

JointTable::JointTable(std::vector<std::uint32_t> cardinalities, std::vector<double> probabilities)
    : space_(std::move(cardinalities)), p_(std::move(probabilities)) {
    if (p_.size() != space_.size()) throw input_error("joint table: probability array size mismatch");
    core::validate_distribution(p_);
}

std::vector<double> JointTable::marginal(const std::vector<std::size_t>& keep) const {
    for (std::size_t v : keep)
        if (v >= arity()) throw input_error("joint table: marginal variable out of range");
    std::size_t out_size = 1;
    for (std::size_t v : keep) out_size *= cardinality(v);
    std::vector<double> out(out_size, 0.0);
    for (std::size_t i = 0; i < p_.size(); ++i) {
        std::size_t idx = 0;
        for (std::size_t v : keep) idx = idx * cardinality(v) + space_.component(i, v);
        out[idx] += p_[i];
    }
    return out;
}

namespace {

// Marginals carry accumulated rounding; validation happens at construction.
double entropy_unchecked(const std::vector<double>& dist) {
    numeric::NeumaierSum h;
    for (double p : dist) h.add(numeric::entropy_term(p));
    return h.value();
}

}  // namespace

double entropy(const std::vector<double>& dist) {
    core::validate_distribution(dist);
    return entropy_unchecked(dist);
}

double entropy(const JointTable& joint) { return entropy_unchecked(joint.probabilities()); }

double mutual_information(const JointTable& joint) {
    if (joint.arity() != 2) throw input_error("mutual information: expected 2 variables");
    return entropy_unchecked(joint.marginal({0})) + entropy_unchecked(joint.marginal({1})) -
           entropy(joint);
}

double conditional_mutual_information(const JointTable& joint) {
    if (joint.arity() != 3) throw input_error("conditional mutual information: expected 3 variables");
    return entropy_unchecked(joint.marginal({0, 1})) + entropy_unchecked(joint.marginal({1, 2})) -
           entropy_unchecked(joint.marginal({1})) - entropy(joint);
}

double total_correlation(const JointTable& joint) {
    if (joint.arity() < 2) throw input_error("total correlation: expected at least 2 variables");
    numeric::NeumaierSum tc;
    for (std::size_t v = 0; v < joint.arity(); ++v) tc.add(entropy_unchecked(joint.marginal({v})));
    tc.add(-entropy(joint));
    return tc.value();
}

double interaction_information(const JointTable& joint) {
    if (joint.arity() != 3) throw input_error("interaction information: expected 3 variables");
    const double i12 = entropy_unchecked(joint.marginal({0})) + entropy_unchecked(joint.marginal({1})) -
                       entropy_unchecked(joint.marginal({0, 1}));
    const double i12_given_3 = entropy_unchecked(joint.marginal({0, 2})) +
                               entropy_unchecked(joint.marginal({1, 2})) -
                               entropy_unchecked(joint.marginal({2})) - entropy(joint);
    return i12 - i12_given_3;
}

double pearson_binary(const JointTable& joint) {
    if (joint.arity() != 2 || joint.cardinality(0) != 2 || joint.cardinality(1) != 2)
        throw input_error("pearson correlation: expected a 2x2 table");
    const double a = joint.at({1, 0}) + joint.at({1, 1});
    const double b = joint.at({0, 1}) + joint.at({1, 1});
    const double var_a = a * (1 - a);
    const double var_b = b * (1 - b);
    if (var_a <= core::prob_tolerance || var_b <= core::prob_tolerance)
        throw input_error("pearson correlation: degenerate marginal");
    const double cov = joint.at({1, 1}) - a * b;
    return cov / std::sqrt(var_a * var_b);
}

JointTable position_joint(const core::Language& language, const core::SourceDistribution& source,
                          std::size_t expected_length) {
    if (language.forms.size() != source.probabilities.size())
        throw input_error("position joint: language/source size mismatch");
    for (const auto& form : language.forms)
        if (form.size() != expected_length) throw input_error("position joint: form length mismatch");
    std::set<core::Form> distinct(language.forms.begin(), language.forms.end());
    if (distinct.size() != language.forms.size())
        throw input_error("position joint: language is not bijective");

    std::vector<std::set<core::Symbol>> per_position(expected_length);
    for (const auto& form : language.forms)
        for (std::size_t i = 0; i < expected_length; ++i) per_position[i].insert(form[i]);
    for (std::size_t i = 0; i < expected_length; ++i)
        for (std::size_t j = i + 1; j < expected_length; ++j)
            for (core::Symbol s : per_position[i])
                if (per_position[j].count(s))
                    throw input_error("position joint: position alphabets not disjoint");

    std::vector<std::vector<core::Symbol>> values(expected_length);
    std::vector<std::uint32_t> cards(expected_length);
    for (std::size_t i = 0; i < expected_length; ++i) {
        values[i].assign(per_position[i].begin(), per_position[i].end());
        cards[i] = static_cast<std::uint32_t>(values[i].size());
    }
    core::FactoredSpace cells(cards);
    std::vector<double> p(cells.size(), 0.0);
    std::vector<std::uint32_t> cell(expected_length);
    for (std::size_t m = 0; m < language.forms.size(); ++m) {
        for (std::size_t i = 0; i < expected_length; ++i) {
            const auto& vals = values[i];
            cell[i] = static_cast<std::uint32_t>(
                std::lower_bound(vals.begin(), vals.end(), language.forms[m][i]) - vals.begin());
        }
        p[cells.encode(cell)] += source.probabilities[m];
    }
    return JointTable(std::move(cards), std::move(p));
}

Length2Report length2_analysis(const core::Language& language, const core::SourceDistribution& source) {
    const JointTable joint = position_joint(language, source, 2);
    const double mi = mutual_information(joint);
    return {mi, std::log2(3.0) + mi / 3.0};
}

Length3Report length3_analysis(const core::Language& language, const core::SourceDistribution& source) {
    const JointTable joint = position_joint(language, source, 3);
    const double tc = total_correlation(joint);
    const double ii = interaction_information(joint);
    const auto m13 = joint.marginal({0, 2});
    const double i13 = mutual_information(JointTable({joint.cardinality(0), joint.cardinality(2)}, m13));
    return {tc, ii, i13, 2.0 + (tc - ii + i13) / 4.0};
}

}  // namespace xentropy::infotheory
