#include "xentropy/codes.hpp"

#include <algorithm>
#include <array>
#include <cstddef>
#include <limits>
#include <numeric>
#include <set>
#include <string>

#include "xentropy/parallel.hpp"

namespace xentropy::codes {

namespace {

constexpr core::Symbol kUnset = std::numeric_limits<core::Symbol>::max();
constexpr std::size_t kNoMatch = std::numeric_limits<std::size_t>::max();

std::uint64_t factorial_checked(std::size_t n) {
    if (n > 20) throw input_error("bijection enumeration: more than 20 meanings");
    std::uint64_t f = 1;
    for (std::size_t i = 2; i <= n; ++i) f *= i;
    return f;
}

std::vector<std::size_t> unrank_permutation(std::uint64_t rank, std::size_t n) {
    std::vector<std::size_t> avail(n);
    std::iota(avail.begin(), avail.end(), std::size_t{0});
    std::vector<std::size_t> perm(n);
    std::uint64_t f = factorial_checked(n);
    for (std::size_t i = 0; i < n; ++i) {
        f /= (n - i);
        const std::size_t d = static_cast<std::size_t>(rank / f);
        rank %= f;
        perm[i] = avail[d];
        avail.erase(avail.begin() + static_cast<std::ptrdiff_t>(d));
    }
    return perm;
}

std::size_t uniform_form_length(const std::vector<core::Form>& forms) {
    if (forms.empty()) throw input_error("systematicity: no forms");
    const std::size_t len = forms.front().size();
    for (const auto& form : forms)
        if (form.size() != len) throw input_error("systematicity: ragged form lengths");
    return len;
}

// Whether meaning -> forms[m][position] factors through `value_of` and is
// injective on its range 0..cardinality-1.
bool factors_injectively(const std::vector<core::Form>& forms, std::size_t position,
                         std::uint32_t cardinality, const auto& value_of) {
    std::vector<core::Symbol> symbol_for(cardinality, kUnset);
    for (std::size_t m = 0; m < forms.size(); ++m) {
        const std::uint32_t v = value_of(m);
        const core::Symbol s = forms[m][position];
        if (symbol_for[v] == kUnset)
            symbol_for[v] = s;
        else if (symbol_for[v] != s)
            return false;
    }
    std::sort(symbol_for.begin(), symbol_for.end());
    return std::adjacent_find(symbol_for.begin(), symbol_for.end()) == symbol_for.end();
}

bool kuhn_augment(std::size_t j, const std::vector<std::vector<char>>& ok,
                  std::vector<char>& visited, std::vector<std::size_t>& position_match) {
    for (std::size_t i = 0; i < ok[j].size(); ++i) {
        if (!ok[j][i] || visited[i]) continue;
        visited[i] = 1;
        if (position_match[i] == kNoMatch || kuhn_augment(position_match[i], ok, visited, position_match)) {
            position_match[i] = j;
            return true;
        }
    }
    return false;
}

}  // namespace

PositionPermutation make_permutation(std::vector<std::size_t> mapping) {
    std::vector<char> seen(mapping.size(), 0);
    for (std::size_t p : mapping) {
        if (p >= mapping.size() || seen[p]) throw input_error("permutation: not a permutation");
        seen[p] = 1;
    }
    return PositionPermutation{std::move(mapping)};
}

PositionPermutation identity_permutation(std::size_t length) {
    std::vector<std::size_t> mapping(length);
    std::iota(mapping.begin(), mapping.end(), std::size_t{0});
    return PositionPermutation{std::move(mapping)};
}

PositionPermutation inverse(const PositionPermutation& perm) {
    std::vector<std::size_t> mapping(perm.mapping.size());
    for (std::size_t i = 0; i < perm.mapping.size(); ++i) mapping[perm.mapping[i]] = i;
    return PositionPermutation{std::move(mapping)};
}

PositionPermutation nth_permutation(std::size_t length, std::uint64_t rank) {
    if (rank >= factorial_checked(length)) throw input_error("permutation: rank out of range");
    return PositionPermutation{unrank_permutation(rank, length)};
}

BijectionEnumerator::BijectionEnumerator(core::Alphabet alphabet, std::vector<core::Form> form_space,
                                         std::size_t meaning_count)
    : alphabet_(std::move(alphabet)), form_space_(std::move(form_space)) {
    if (form_space_.size() != meaning_count)
        throw input_error("bijection enumeration: form space size != meaning count");
    std::set<core::Form> distinct(form_space_.begin(), form_space_.end());
    if (distinct.size() != form_space_.size())
        throw input_error("bijection enumeration: duplicate forms");
    count_ = factorial_checked(form_space_.size());
}

std::vector<core::Form> BijectionEnumerator::forms_at(std::uint64_t rank) const {
    if (rank >= count_) throw input_error("bijection enumeration: rank out of range");
    const auto perm = unrank_permutation(rank, form_space_.size());
    std::vector<core::Form> forms(form_space_.size());
    for (std::size_t m = 0; m < forms.size(); ++m) forms[m] = form_space_[perm[m]];
    return forms;
}

core::Language BijectionEnumerator::at(std::uint64_t rank) const {
    return core::Language{alphabet_, forms_at(rank)};
}

SystematicityReport systematicity_degree(const std::vector<core::Form>& forms,
                                         const core::FactoredSpace& space) {
    if (forms.size() != space.size()) throw input_error("systematicity: language/space size mismatch");
    const std::size_t len = uniform_form_length(forms);
    const std::size_t k = space.num_components();

    std::vector<std::vector<char>> ok(k, std::vector<char>(len, 0));
    for (std::size_t j = 0; j < k; ++j) {
        const std::uint32_t card = space.cardinalities()[j];
        for (std::size_t i = 0; i < len; ++i)
            ok[j][i] = factors_injectively(forms, i, card,
                                           [&](std::size_t m) { return space.component(m, j); });
    }

    std::vector<std::size_t> position_match(len, kNoMatch);
    for (std::size_t j = 0; j < k; ++j) {
        std::vector<char> visited(len, 0);
        kuhn_augment(j, ok, visited, position_match);
    }

    SystematicityReport report;
    for (std::size_t i = 0; i < len; ++i)
        if (position_match[i] != kNoMatch) report.matching.emplace_back(position_match[i], i);
    std::sort(report.matching.begin(), report.matching.end());
    report.degree = report.matching.size();
    return report;
}

SystematicityReport systematicity_degree(const core::Language& language,
                                         const core::FactoredSpace& space) {
    return systematicity_degree(language.forms, space);
}

std::map<std::size_t, std::uint64_t> degree_histogram(const core::FactoredSpace& space,
                                                      const std::vector<core::Form>& form_space,
                                                      unsigned threads) {
    std::set<core::Form> distinct(form_space.begin(), form_space.end());
    if (form_space.size() != space.size() || distinct.size() != form_space.size())
        throw input_error("degree histogram: form space must be distinct and match the space size");
    const std::uint64_t total = factorial_checked(form_space.size());

    std::vector<std::uint8_t> degrees(total);
    numeric::parallel_for(total, numeric::resolve_threads(threads), [&](std::uint64_t rank) {
        const auto perm = unrank_permutation(rank, form_space.size());
        std::vector<core::Form> forms(form_space.size());
        for (std::size_t m = 0; m < forms.size(); ++m) forms[m] = form_space[perm[m]];
        degrees[rank] = static_cast<std::uint8_t>(systematicity_degree(forms, space).degree);
    });

    std::map<std::size_t, std::uint64_t> histogram;
    for (std::uint8_t d : degrees) ++histogram[d];
    return histogram;
}

std::uint64_t count_holistic(const core::FactoredSpace& space,
                             const std::vector<core::Form>& form_space, unsigned threads) {
    const auto histogram = degree_histogram(space, form_space, threads);
    const auto it = histogram.find(0);
    return it == histogram.end() ? 0 : it->second;
}

core::Language apply_permutation(const core::Language& language, const PositionPermutation& perm) {
    std::vector<core::Form> forms;
    forms.reserve(language.forms.size());
    for (const auto& form : language.forms) {
        if (form.size() != perm.mapping.size())
            throw input_error("apply_permutation: form length != permutation length");
        core::Form out(form.size());
        for (std::size_t i = 0; i < form.size(); ++i) out[i] = form[perm.mapping[i]];
        forms.push_back(std::move(out));
    }
    return core::Language{language.alphabet, std::move(forms)};
}

bool is_contiguous(const PositionPermutation& perm, const std::vector<std::vector<std::size_t>>& blocks) {
    const std::size_t len = perm.mapping.size();
    std::vector<std::size_t> block_of(len, kNoMatch);
    std::size_t covered = 0;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        if (blocks[b].empty()) throw input_error("is_contiguous: empty block");
        for (std::size_t p : blocks[b]) {
            if (p >= len || block_of[p] != kNoMatch)
                throw input_error("is_contiguous: blocks are not a partition");
            block_of[p] = b;
            ++covered;
        }
    }
    if (covered != len) throw input_error("is_contiguous: blocks are not a partition");

    std::vector<std::size_t> lo(blocks.size(), len), hi(blocks.size(), 0), count(blocks.size(), 0);
    for (std::size_t i = 0; i < len; ++i) {
        const std::size_t b = block_of[perm.mapping[i]];
        lo[b] = std::min(lo[b], i);
        hi[b] = std::max(hi[b], i);
        ++count[b];
    }
    for (std::size_t b = 0; b < blocks.size(); ++b)
        if (hi[b] - lo[b] + 1 != count[b]) return false;
    return true;
}

bool is_well_nested(const PositionPermutation& perm, const std::vector<std::vector<std::size_t>>& groups) {
    const std::size_t len = perm.mapping.size();
    std::vector<std::set<std::size_t>> sets;
    sets.reserve(groups.size());
    for (const auto& group : groups) {
        if (group.empty()) throw input_error("is_well_nested: empty group");
        std::set<std::size_t> s(group.begin(), group.end());
        if (s.size() != group.size() || *s.rbegin() >= len)
            throw input_error("is_well_nested: invalid group positions");
        sets.push_back(std::move(s));
    }
    for (std::size_t a = 0; a < sets.size(); ++a) {
        for (std::size_t b = a + 1; b < sets.size(); ++b) {
            std::vector<std::size_t> common;
            std::set_intersection(sets[a].begin(), sets[a].end(), sets[b].begin(), sets[b].end(),
                                  std::back_inserter(common));
            const bool nested = common.size() == std::min(sets[a].size(), sets[b].size());
            if (!common.empty() && !nested)
                throw input_error("is_well_nested: groups are not laminar");
        }
    }

    for (const auto& group : sets) {
        std::size_t lo = len, hi = 0, count = 0;
        for (std::size_t i = 0; i < len; ++i) {
            if (!group.contains(perm.mapping[i])) continue;
            lo = std::min(lo, i);
            hi = std::max(hi, i);
            ++count;
        }
        if (count != group.size() || hi - lo + 1 != count) return false;
    }
    return true;
}

core::Form seeded_shuffle(const core::Form& form, std::uint64_t seed) {
    core::Form out = form;
    SplitMix64 gen(mix_key(seed, out.size()));
    for (std::size_t i = out.size(); i > 1; --i)
        std::swap(out[i - 1], out[gen.below(i)]);
    return out;
}

core::Form class_preserving_shuffle(const core::Form& form, const std::vector<core::Symbol>& classes,
                                    std::uint64_t seed) {
    if (classes.size() != form.size())
        throw input_error("class_preserving_shuffle: class sequence length mismatch");
    std::map<core::Symbol, std::vector<std::size_t>> positions_by_class;
    for (std::size_t i = 0; i < classes.size(); ++i) positions_by_class[classes[i]].push_back(i);

    core::Form out = form;
    for (const auto& [cls, positions] : positions_by_class) {
        core::Form gathered;
        gathered.reserve(positions.size());
        for (std::size_t p : positions) gathered.push_back(form[p]);
        const core::Form shuffled = seeded_shuffle(gathered, seed);
        for (std::size_t k = 0; k < positions.size(); ++k) out[positions[k]] = shuffled[k];
    }
    return out;
}

core::Language permute_assignment(const core::Language& language, std::uint64_t seed,
                                  bool length_preserving) {
    const std::size_t n = language.forms.size();
    std::map<std::size_t, std::vector<std::size_t>> groups;
    for (std::size_t m = 0; m < n; ++m)
        groups[length_preserving ? language.forms[m].size() : 0].push_back(m);

    SplitMix64 gen(mix_key(seed, n));
    std::vector<core::Form> forms(n);
    for (const auto& [length, members] : groups) {
        std::vector<std::size_t> idx(members.size());
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        for (std::size_t i = idx.size(); i > 1; --i)
            std::swap(idx[i - 1], idx[gen.below(i)]);
        for (std::size_t k = 0; k < members.size(); ++k)
            forms[members[k]] = language.forms[members[idx[k]]];
    }
    return core::Language{language.alphabet, std::move(forms)};
}

core::Language partition_language(const core::FactoredSpace& space, core::Alphabet alphabet,
                                  const std::vector<std::vector<std::size_t>>& partition,
                                  const std::vector<std::vector<core::Form>>& codebooks) {
    const std::size_t k = space.num_components();
    std::vector<char> seen(k, 0);
    for (const auto& block : partition) {
        if (block.empty()) throw input_error("partition_language: empty block");
        for (std::size_t c : block) {
            if (c >= k || seen[c]) throw input_error("partition_language: blocks must partition the components");
            seen[c] = 1;
        }
    }
    if (static_cast<std::size_t>(std::count(seen.begin(), seen.end(), 1)) != k)
        throw input_error("partition_language: blocks must partition the components");
    if (codebooks.size() != partition.size())
        throw input_error("partition_language: one codebook per block required");

    for (std::size_t b = 0; b < partition.size(); ++b) {
        std::size_t block_size = 1;
        for (std::size_t c : partition[b]) block_size *= space.cardinalities()[c];
        if (codebooks[b].size() != block_size)
            throw input_error("partition_language: codebook size != block outcome count");
        std::set<core::Form> distinct(codebooks[b].begin(), codebooks[b].end());
        if (distinct.size() != codebooks[b].size())
            throw input_error("partition_language: codebook is not bijective");
        for (const auto& entry : codebooks[b])
            if (entry.size() != codebooks[b].front().size())
                throw input_error("partition_language: ragged codebook entries");
    }

    std::vector<core::Form> forms;
    forms.reserve(space.size());
    for (std::size_t m = 0; m < space.size(); ++m) {
        core::Form form;
        for (std::size_t b = 0; b < partition.size(); ++b) {
            std::size_t idx = 0;
            for (std::size_t c : partition[b])
                idx = idx * space.cardinalities()[c] + space.component(m, c);
            const auto& piece = codebooks[b][idx];
            form.insert(form.end(), piece.begin(), piece.end());
        }
        forms.push_back(std::move(form));
    }
    return core::make_language(std::move(forms), std::move(alphabet));
}

const char* to_string(TwoFeatureClass cls) {
    switch (cls) {
        case TwoFeatureClass::systematic: return "systematic";
        case TwoFeatureClass::cnot12: return "cnot12";
        case TwoFeatureClass::cnot21: return "cnot21";
        case TwoFeatureClass::other: return "other";
    }
    return "other";
}

TwoFeatureClass classify_two_feature_code(const core::Language& language) {
    const core::FactoredSpace space({2, 2});
    if (language.forms.size() != space.size())
        throw input_error("two-feature classification: expected 4 meanings");
    for (const auto& form : language.forms)
        if (form.size() != 2) throw input_error("two-feature classification: expected length-2 forms");

    if (systematicity_degree(language.forms, space).degree == 2) return TwoFeatureClass::systematic;

    const auto m1 = [&](std::size_t m) { return space.component(m, 0); };
    const auto m2 = [&](std::size_t m) { return space.component(m, 1); };
    const auto m1_xor_m2 = [&](std::size_t m) { return m1(m) ^ m2(m); };
    if (factors_injectively(language.forms, 0, 2, m1) &&
        factors_injectively(language.forms, 1, 2, m1_xor_m2))
        return TwoFeatureClass::cnot12;
    if (factors_injectively(language.forms, 1, 2, m2) &&
        factors_injectively(language.forms, 0, 2, m1_xor_m2))
        return TwoFeatureClass::cnot21;
    return TwoFeatureClass::other;
}

core::Language word_language(const core::FactoredSpace& space, std::uint64_t lexicon_seed) {
    constexpr std::size_t word_length = 4;
    constexpr std::uint64_t word_count = 1ULL << word_length;

    std::vector<std::vector<core::Form>> words(space.num_components());
    for (std::size_t j = 0; j < space.num_components(); ++j) {
        const std::uint32_t card = space.cardinalities()[j];
        if (card > word_count)
            throw input_error("word_language: component cardinality exceeds the distinct word supply");
        SplitMix64 gen(mix_key(lexicon_seed, j));
        std::array<bool, word_count> used{};
        words[j].reserve(card);
        for (std::uint32_t v = 0; v < card; ++v) {
            std::uint64_t w = gen.next() & (word_count - 1);
            while (used[w]) w = gen.next() & (word_count - 1);
            used[w] = true;
            core::Form form(word_length);
            for (std::size_t t = 0; t < word_length; ++t)
                form[t] = static_cast<core::Symbol>((w >> (word_length - 1 - t)) & 1);
            words[j].push_back(std::move(form));
        }
    }

    std::vector<core::Form> forms;
    forms.reserve(space.size());
    for (std::size_t m = 0; m < space.size(); ++m) {
        core::Form form;
        form.reserve(word_length * space.num_components());
        for (std::size_t j = 0; j < space.num_components(); ++j) {
            const auto& piece = words[j][space.component(m, j)];
            form.insert(form.end(), piece.begin(), piece.end());
        }
        forms.push_back(std::move(form));
    }
    return core::make_language(std::move(forms), core::char_alphabet("01"));
}

}  // namespace xentropy::codes
