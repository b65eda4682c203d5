#include "xentropy/core.hpp"

#include <algorithm>
#include <cmath>

#include "xentropy/numeric.hpp"

namespace xentropy::core {

Alphabet::Alphabet(std::vector<std::string> symbols, std::string delimiter) {
    if (delimiter.empty()) throw input_error("alphabet: empty delimiter");
    tokens_ = std::move(symbols);
    for (std::size_t i = 0; i < tokens_.size(); ++i) {
        if (tokens_[i].empty()) throw input_error("alphabet: empty symbol token");
        if (tokens_[i] == delimiter) throw input_error("alphabet: delimiter listed as a symbol");
        auto [it, fresh] = index_.emplace(tokens_[i], static_cast<Symbol>(i));
        if (!fresh) throw input_error("alphabet: duplicate symbol '" + tokens_[i] + "'");
    }
    index_.emplace(delimiter, static_cast<Symbol>(tokens_.size()));
    tokens_.push_back(std::move(delimiter));
}

bool Alphabet::has(std::string_view token) const { return index_.find(token) != index_.end(); }

Symbol Alphabet::id(std::string_view token) const {
    auto it = index_.find(token);
    if (it == index_.end()) throw input_error("alphabet: unknown symbol '" + std::string(token) + "'");
    return it->second;
}

const std::string& Alphabet::token(Symbol id) const {
    if (id >= tokens_.size()) throw std::out_of_range("alphabet: symbol id out of range");
    return tokens_[id];
}

Alphabet char_alphabet(std::string_view chars, std::string delimiter) {
    std::vector<std::string> symbols;
    for (const auto& tok : utf8_tokens(chars)) symbols.push_back(tok);
    return Alphabet(std::move(symbols), std::move(delimiter));
}

std::vector<std::string> utf8_tokens(std::string_view text) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < text.size();) {
        std::size_t len = 1;
        while (i + len < text.size() && (static_cast<unsigned char>(text[i + len]) & 0xC0) == 0x80) ++len;
        out.emplace_back(text.substr(i, len));
        i += len;
    }
    return out;
}

FactoredSpace::FactoredSpace(std::vector<std::uint32_t> cardinalities) : cards_(std::move(cardinalities)) {
    if (cards_.empty()) throw input_error("factored space: no components");
    size_ = 1;
    for (auto c : cards_) {
        if (c == 0) throw input_error("factored space: zero cardinality");
        if (size_ > (std::size_t(1) << 40) / c) throw input_error("factored space: too large");
        size_ *= c;
    }
    strides_.assign(cards_.size(), 1);
    for (std::size_t j = cards_.size(); j-- > 1;) strides_[j - 1] = strides_[j] * cards_[j];
}

std::size_t FactoredSpace::encode(const std::vector<std::uint32_t>& tuple) const {
    if (tuple.size() != cards_.size()) throw input_error("factored space: tuple arity mismatch");
    std::size_t index = 0;
    for (std::size_t j = 0; j < tuple.size(); ++j) {
        if (tuple[j] >= cards_[j]) throw input_error("factored space: component value out of range");
        index += tuple[j] * strides_[j];
    }
    return index;
}

std::vector<std::uint32_t> FactoredSpace::decode(std::size_t index) const {
    if (index >= size_) throw std::out_of_range("factored space: index out of range");
    std::vector<std::uint32_t> tuple(cards_.size());
    for (std::size_t j = 0; j < cards_.size(); ++j) tuple[j] = static_cast<std::uint32_t>((index / strides_[j]) % cards_[j]);
    return tuple;
}

std::uint32_t FactoredSpace::component(std::size_t index, std::size_t j) const {
    if (index >= size_) throw std::out_of_range("factored space: index out of range");
    if (j >= cards_.size()) throw std::out_of_range("factored space: component out of range");
    return static_cast<std::uint32_t>((index / strides_[j]) % cards_[j]);
}

void validate_distribution(const std::vector<double>& p, double tol) {
    if (p.empty()) throw input_error("distribution: empty");
    numeric::NeumaierSum total;
    for (double x : p) {
        if (!(x >= 0) || !std::isfinite(x)) throw input_error("distribution: negative or non-finite entry");
        total.add(x);
    }
    if (std::abs(total.value() - 1.0) > tol) throw input_error("distribution: does not sum to 1");
}

SourceDistribution make_source(std::vector<double> probabilities) {
    validate_distribution(probabilities);
    return SourceDistribution{std::move(probabilities), std::nullopt};
}

SourceDistribution make_source(std::vector<double> probabilities, FactoredSpace factored) {
    validate_distribution(probabilities);
    if (probabilities.size() != factored.size()) throw input_error("source: factored space size mismatch");
    return SourceDistribution{std::move(probabilities), std::move(factored)};
}

SourceDistribution uniform_source(std::size_t n) {
    if (n == 0) throw input_error("source: empty support");
    return SourceDistribution{std::vector<double>(n, 1.0 / static_cast<double>(n)), std::nullopt};
}

Language make_language(std::vector<Form> forms, Alphabet alphabet) {
    if (forms.empty()) throw input_error("language: no forms");
    const Symbol limit = static_cast<Symbol>(alphabet.size());
    for (const auto& form : forms) {
        if (form.empty()) throw input_error("language: empty form");
        for (Symbol s : form) {
            if (s == alphabet.delimiter_id()) throw input_error("language: delimiter inside form");
            if (s >= limit) throw input_error("language: unknown symbol id");
        }
    }
    return Language{std::move(alphabet), std::move(forms)};
}

Form make_form(const Alphabet& alphabet, const std::vector<std::string>& tokens) {
    Form form;
    form.reserve(tokens.size());
    for (const auto& tok : tokens) form.push_back(alphabet.id(tok));
    return form;
}

Form parse_form(const Alphabet& alphabet, std::string_view text) {
    return make_form(alphabet, utf8_tokens(text));
}

std::string form_text(const Alphabet& alphabet, const Form& form) {
    std::string out;
    for (Symbol s : form) out += alphabet.token(s);
    return out;
}

FormDistribution make_form_distribution(std::vector<std::pair<Form, double>> entries) {
    if (entries.empty()) throw input_error("form distribution: empty");
    std::sort(entries.begin(), entries.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<std::pair<Form, double>> merged;
    for (auto& [form, p] : entries) {
        if (form.empty()) throw input_error("form distribution: empty form");
        if (!(p >= 0) || !std::isfinite(p)) throw input_error("form distribution: negative or non-finite probability");
        if (!merged.empty() && merged.back().first == form)
            merged.back().second += p;
        else
            merged.emplace_back(std::move(form), p);
    }
    numeric::NeumaierSum total;
    for (const auto& [form, p] : merged) total.add(p);
    if (std::abs(total.value() - 1.0) > prob_tolerance) throw input_error("form distribution: does not sum to 1");
    std::erase_if(merged, [](const auto& e) { return e.second == 0; });
    if (merged.empty()) throw input_error("form distribution: no support");
    return FormDistribution{std::move(merged)};
}

FormDistribution form_distribution(const Language& language, const SourceDistribution& source) {
    if (language.forms.size() != source.probabilities.size())
        throw input_error("form distribution: language/source size mismatch");
    std::vector<std::pair<Form, double>> entries;
    entries.reserve(language.forms.size());
    for (std::size_t m = 0; m < language.forms.size(); ++m)
        entries.emplace_back(language.forms[m], source.probabilities[m]);
    return make_form_distribution(std::move(entries));
}

std::size_t max_extended_length(const FormDistribution& fd) {
    std::size_t longest = 0;
    for (const auto& [form, p] : fd.entries) longest = std::max(longest, form.size());
    return longest + 1;
}

}  // namespace xentropy::core
