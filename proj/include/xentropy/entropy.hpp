#pragma once

#include <cstdint>
#include <vector>

#include "xentropy/core.hpp"

namespace xentropy::entropy {

// n-gram rates of the delimiter-padded stationary process. h holds h_1..h_{N+1}
// where N is the longest form length plus one (the appended delimiter);
// entropy_rate equals h.back() and excess_entropy = sum_{n<=N} (h_n - rate).
struct EntropyProfile {
    std::vector<double> h;
    double entropy_rate = 0;
    double excess_entropy = 0;
};

struct PositionWeight {
    std::size_t entry;  // index into fd.entries
    std::uint32_t t;    // 1-based; t == length+1 is the delimiter slot
    double weight;
};

// Stationary cut distribution: w(s,t) = p(s)/Z for t in 1..|s|+1 with
// Z = sum_s p(s)*(|s|+1). Context positions t' <= 0 read as the delimiter.
std::vector<PositionWeight> position_weights(const core::FormDistribution& fd);

double ngram_entropy_rate(const core::FormDistribution& fd, std::size_t n);

EntropyProfile entropy_profile(const core::FormDistribution& fd);

double excess_entropy(const core::FormDistribution& fd);
double excess_entropy(const core::Language& language, const core::SourceDistribution& source);

// Independent cross-check: mutual information between delimiter-padded past and
// future windows of width N around a stationary cut. Shares no aggregation code
// with the profile computation.
double excess_entropy_window_oracle(const core::FormDistribution& fd);

// Throws oracle_error when profile and window oracle disagree beyond tol.
double verified_excess_entropy(const core::FormDistribution& fd, double tol = core::info_tolerance);

}  // namespace xentropy::entropy
