#pragma once

#include <cmath>

namespace xentropy::numeric {

// Neumaier-compensated accumulator; keeps information-theoretic sums stable
// across ~1e5 sparse contexts at the 1e-9 tolerance used throughout.
class NeumaierSum {
public:
    void add(double x) {
        double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0;
    double comp_ = 0;
};

// -p*log2(p) with the 0*log(0) = 0 convention.
inline double entropy_term(double p) { return p > 0 ? -p * std::log2(p) : 0.0; }

}  // namespace xentropy::numeric
