#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace xentropy {

// Raised for malformed user input (files, CLI arguments, infeasible parameters).
struct input_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raised when an internal cross-check (independent recomputation) disagrees.
struct oracle_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace core {

using Symbol = std::uint32_t;
using Form = std::vector<Symbol>;

inline constexpr double prob_tolerance = 1e-12;
inline constexpr double info_tolerance = 1e-9;

// Symbols are opaque string tokens indexed densely in construction order.
// The delimiter is reserved: it is not a member of the symbol set and always
// takes id == size().
class Alphabet {
public:
    explicit Alphabet(std::vector<std::string> symbols, std::string delimiter = "#");

    std::size_t size() const { return tokens_.size() - 1; }
    Symbol delimiter_id() const { return static_cast<Symbol>(tokens_.size() - 1); }
    const std::string& delimiter() const { return tokens_.back(); }
    bool has(std::string_view token) const;
    Symbol id(std::string_view token) const;
    const std::string& token(Symbol id) const;

private:
    std::vector<std::string> tokens_;  // symbols followed by the delimiter
    std::map<std::string, Symbol, std::less<>> index_;
};

Alphabet char_alphabet(std::string_view chars, std::string delimiter = "#");

// Splits text into UTF-8 codepoint tokens (continuation bytes 0b10xxxxxx attach
// to the preceding lead byte).
std::vector<std::string> utf8_tokens(std::string_view text);

// Tuple space (m1..mK), mj in 0..cj-1, flattened with the first component most
// significant: index = ((m1*c2 + m2)*c3 + m3)...
class FactoredSpace {
public:
    explicit FactoredSpace(std::vector<std::uint32_t> cardinalities);

    std::size_t size() const { return size_; }
    std::size_t num_components() const { return cards_.size(); }
    const std::vector<std::uint32_t>& cardinalities() const { return cards_; }
    std::size_t encode(const std::vector<std::uint32_t>& tuple) const;
    std::vector<std::uint32_t> decode(std::size_t index) const;
    std::uint32_t component(std::size_t index, std::size_t j) const;

private:
    std::vector<std::uint32_t> cards_;
    std::vector<std::size_t> strides_;
    std::size_t size_;
};

struct SourceDistribution {
    std::vector<double> probabilities;
    std::optional<FactoredSpace> factored;
};

void validate_distribution(const std::vector<double>& p, double tol = prob_tolerance);

SourceDistribution make_source(std::vector<double> probabilities);
SourceDistribution make_source(std::vector<double> probabilities, FactoredSpace factored);
SourceDistribution uniform_source(std::size_t n);

struct Language {
    Alphabet alphabet;
    std::vector<Form> forms;  // indexed by meaning
};

Language make_language(std::vector<Form> forms, Alphabet alphabet);
Form make_form(const Alphabet& alphabet, const std::vector<std::string>& tokens);
// One symbol per UTF-8 codepoint.
Form parse_form(const Alphabet& alphabet, std::string_view text);
std::string form_text(const Alphabet& alphabet, const Form& form);

// Probability over distinct forms; entries kept sorted by form, zero-mass
// entries dropped. The sole input to the entropy computations.
struct FormDistribution {
    std::vector<std::pair<Form, double>> entries;
};

FormDistribution make_form_distribution(std::vector<std::pair<Form, double>> entries);
FormDistribution form_distribution(const Language& language, const SourceDistribution& source);
std::size_t max_extended_length(const FormDistribution& fd);

// p(k) = (count(k) + smoothing) / sum over keys. Throws if the total is zero.
template <class Key>
std::map<Key, double> normalize_counts(const std::map<Key, double>& counts, double smoothing) {
    if (counts.empty()) throw input_error("normalize_counts: no keys");
    if (smoothing < 0) throw input_error("normalize_counts: negative smoothing");
    double total = 0;
    for (const auto& [key, count] : counts) {
        if (!(count >= 0)) throw input_error("normalize_counts: negative or non-finite count");
        total += count + smoothing;
    }
    if (total <= 0) throw input_error("normalize_counts: zero total mass");
    std::map<Key, double> out;
    for (const auto& [key, count] : counts) out.emplace(key, (count + smoothing) / total);
    return out;
}

}  // namespace core
}  // namespace xentropy
