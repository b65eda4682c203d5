#include "xentropy/entropy.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>

#include "xentropy/numeric.hpp"

namespace xentropy::entropy {
namespace {

struct ProcessView {
    const core::FormDistribution* fd;
    core::Symbol delim;  // one past the largest symbol id in use
    unsigned bits;       // bits per symbol in packed window keys
    double z;            // length-reweighting normalizer
    std::size_t positions;
};

ProcessView view_of(const core::FormDistribution& fd) {
    if (fd.entries.empty()) throw input_error("form distribution: empty");
    core::Symbol top = 0;
    double z = 0;
    std::size_t positions = 0;
    for (const auto& [form, p] : fd.entries) {
        for (core::Symbol s : form) top = std::max(top, s);
        z += p * static_cast<double>(form.size() + 1);
        positions += form.size() + 1;
    }
    const core::Symbol delim = top + 1;
    return {&fd, delim, static_cast<unsigned>(std::bit_width(delim)), z, positions};
}

inline core::Symbol symbol_at(const core::Form& form, long t, core::Symbol delim) {
    return (t >= 1 && t <= static_cast<long>(form.size())) ? form[static_cast<std::size_t>(t - 1)] : delim;
}

// h_n from packed window keys: the n symbols ending at the cut, first symbol
// most significant, so sorting by key also groups windows by their context
// (key >> bits strips the predicted symbol).
double h_order_packed(const ProcessView& v, std::size_t n,
                      std::vector<std::pair<std::uint64_t, double>>& scratch) {
    scratch.clear();
    scratch.reserve(v.positions);
    for (const auto& [form, p] : v.fd->entries) {
        const long ext = static_cast<long>(form.size()) + 1;
        const double w = p / v.z;
        for (long t = 1; t <= ext; ++t) {
            std::uint64_t key = 0;
            for (long k = t - static_cast<long>(n) + 1; k <= t; ++k)
                key = (key << v.bits) | symbol_at(form, k, v.delim);
            scratch.emplace_back(key, w);
        }
    }
    std::sort(scratch.begin(), scratch.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    numeric::NeumaierSum joint, contexts;
    std::size_t i = 0;
    while (i < scratch.size()) {
        const std::uint64_t ctx = scratch[i].first >> v.bits;
        double ctx_mass = 0;
        while (i < scratch.size() && (scratch[i].first >> v.bits) == ctx) {
            const std::uint64_t key = scratch[i].first;
            double mass = 0;
            while (i < scratch.size() && scratch[i].first == key) mass += scratch[i++].second;
            joint.add(numeric::entropy_term(mass));
            ctx_mass += mass;
        }
        contexts.add(numeric::entropy_term(ctx_mass));
    }
    return joint.value() - contexts.value();
}

// Fallback for windows wider than 64 bits: flat symbol buffer plus index sort.
double h_order_flat(const ProcessView& v, std::size_t n) {
    std::vector<core::Symbol> windows;
    windows.reserve(v.positions * n);
    std::vector<double> weights;
    weights.reserve(v.positions);
    for (const auto& [form, p] : v.fd->entries) {
        const long ext = static_cast<long>(form.size()) + 1;
        const double w = p / v.z;
        for (long t = 1; t <= ext; ++t) {
            for (long k = t - static_cast<long>(n) + 1; k <= t; ++k)
                windows.push_back(symbol_at(form, k, v.delim));
            weights.push_back(w);
        }
    }
    std::vector<std::uint32_t> order(weights.size());
    std::iota(order.begin(), order.end(), 0u);
    auto cmp_prefix = [&](std::uint32_t a, std::uint32_t b, std::size_t len) {
        const core::Symbol* pa = windows.data() + static_cast<std::size_t>(a) * n;
        const core::Symbol* pb = windows.data() + static_cast<std::size_t>(b) * n;
        for (std::size_t k = 0; k < len; ++k) {
            if (pa[k] != pb[k]) return pa[k] < pb[k] ? -1 : 1;
        }
        return 0;
    };
    std::sort(order.begin(), order.end(),
              [&](std::uint32_t a, std::uint32_t b) { return cmp_prefix(a, b, n) < 0; });
    numeric::NeumaierSum joint, contexts;
    std::size_t i = 0;
    while (i < order.size()) {
        double ctx_mass = 0;
        const std::size_t ctx_start = i;
        while (i < order.size() && cmp_prefix(order[ctx_start], order[i], n - 1) == 0) {
            const std::size_t key_start = i;
            double mass = 0;
            while (i < order.size() && cmp_prefix(order[key_start], order[i], n) == 0)
                mass += weights[order[i++]];
            joint.add(numeric::entropy_term(mass));
            ctx_mass += mass;
        }
        contexts.add(numeric::entropy_term(ctx_mass));
    }
    return joint.value() - contexts.value();
}

double h_order(const ProcessView& v, std::size_t n,
               std::vector<std::pair<std::uint64_t, double>>& scratch) {
    if (n == 0) throw input_error("ngram entropy rate: order must be positive");
    return (v.bits * n <= 64) ? h_order_packed(v, n, scratch) : h_order_flat(v, n);
}

}  // namespace

std::vector<PositionWeight> position_weights(const core::FormDistribution& fd) {
    const ProcessView v = view_of(fd);
    std::vector<PositionWeight> out;
    out.reserve(v.positions);
    for (std::size_t e = 0; e < fd.entries.size(); ++e) {
        const auto& [form, p] = fd.entries[e];
        for (std::uint32_t t = 1; t <= form.size() + 1; ++t)
            out.push_back({e, t, p / v.z});
    }
    return out;
}

double ngram_entropy_rate(const core::FormDistribution& fd, std::size_t n) {
    const ProcessView v = view_of(fd);
    std::vector<std::pair<std::uint64_t, double>> scratch;
    return h_order(v, n, scratch);
}

EntropyProfile entropy_profile(const core::FormDistribution& fd) {
    const ProcessView v = view_of(fd);
    const std::size_t n_max = core::max_extended_length(fd);
    EntropyProfile prof;
    prof.h.resize(n_max + 1);
    std::vector<std::pair<std::uint64_t, double>> scratch;
    for (std::size_t n = 1; n <= n_max + 1; ++n) prof.h[n - 1] = h_order(v, n, scratch);
    prof.entropy_rate = prof.h.back();
    numeric::NeumaierSum e;
    for (std::size_t n = 1; n <= n_max; ++n) e.add(prof.h[n - 1] - prof.entropy_rate);
    prof.excess_entropy = e.value();
    assert(std::abs(h_order(v, n_max + 2, scratch) - prof.entropy_rate) <= 1e-12);
    return prof;
}

double excess_entropy(const core::FormDistribution& fd) { return entropy_profile(fd).excess_entropy; }

double excess_entropy(const core::Language& language, const core::SourceDistribution& source) {
    return excess_entropy(core::form_distribution(language, source));
}

double excess_entropy_window_oracle(const core::FormDistribution& fd) {
    core::Symbol top = 0;
    std::size_t longest = 0;
    double z = 0;
    for (const auto& [form, p] : fd.entries) {
        for (core::Symbol s : form) top = std::max(top, s);
        longest = std::max(longest, form.size());
        z += p * static_cast<double>(form.size() + 1);
    }
    const core::Symbol delim = top + 1;
    const long w_len = static_cast<long>(longest) + 1;

    std::map<std::pair<core::Form, core::Form>, double> joint;
    for (const auto& [form, p] : fd.entries) {
        const long ext = static_cast<long>(form.size()) + 1;
        const double w = p / z;
        for (long t = 1; t <= ext; ++t) {
            core::Form past(static_cast<std::size_t>(w_len));
            core::Form future(static_cast<std::size_t>(w_len));
            for (long k = 0; k < w_len; ++k) {
                past[static_cast<std::size_t>(k)] = symbol_at(form, t - w_len + k, delim);
                future[static_cast<std::size_t>(k)] = symbol_at(form, t + k, delim);
            }
            joint[{std::move(past), std::move(future)}] += w;
        }
    }
    std::map<core::Form, double> past_marginal, future_marginal;
    for (const auto& [key, p] : joint) {
        past_marginal[key.first] += p;
        future_marginal[key.second] += p;
    }
    numeric::NeumaierSum mi;
    for (const auto& [key, p] : joint)
        mi.add(p * std::log2(p / (past_marginal[key.first] * future_marginal[key.second])));
    return mi.value();
}

double verified_excess_entropy(const core::FormDistribution& fd, double tol) {
    const double e = excess_entropy(fd);
    const double oracle = excess_entropy_window_oracle(fd);
    if (std::abs(e - oracle) > tol)
        throw oracle_error("excess entropy mismatch: profile " + std::to_string(e) +
                           " vs window oracle " + std::to_string(oracle));
    return e;
}

}  // namespace xentropy::entropy
