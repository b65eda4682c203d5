#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "xentropy/core.hpp"

namespace xentropy::codes {

// ---------------------------------------------------------------------------
// Deterministic PRNG.
//
// splitmix64: state advances by the golden-gamma constant, output is the
// murmur-style finalizer. Bit-exact on every platform; bounded draws use the
// modulo of the raw output (the bias is irrelevant at the sizes used here and
// keeps the draw sequence trivially reproducible).
// ---------------------------------------------------------------------------

class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform draw in [0, bound); bound must be nonzero.
    std::uint64_t below(std::uint64_t bound) { return next() % bound; }

private:
    std::uint64_t state_;
};

// Finalizer alone, for key derivation.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Derives the PRNG state for a (seed, context) pair, so that independent
// contexts (form length, class-group size, component index, ...) get
// independent streams under one user-facing seed.
constexpr std::uint64_t mix_key(std::uint64_t seed, std::uint64_t context) {
    return mix64(seed + 0x9E3779B97F4A7C15ULL * (context + 1));
}

// ---------------------------------------------------------------------------
// Code transforms and classification.
// ---------------------------------------------------------------------------

// mapping[i] = source position of output slot i.
struct PositionPermutation {
    std::vector<std::size_t> mapping;
};

PositionPermutation make_permutation(std::vector<std::size_t> mapping);
PositionPermutation identity_permutation(std::size_t length);
PositionPermutation inverse(const PositionPermutation& perm);
// rank-th permutation of 0..length-1 in lexicographic order.
PositionPermutation nth_permutation(std::size_t length, std::uint64_t rank);

struct SystematicityReport {
    std::size_t degree = 0;
    std::vector<std::pair<std::size_t, std::size_t>> matching;  // (component j, position i)
};

// Yields all |M|! assignments of the given distinct forms to meanings, in
// lexicographic order of the underlying permutation sequence (rank 0 is the
// identity assignment). Random access by rank so consumers can fan out.
class BijectionEnumerator {
public:
    BijectionEnumerator(core::Alphabet alphabet, std::vector<core::Form> form_space,
                        std::size_t meaning_count);

    std::uint64_t size() const { return count_; }
    std::vector<core::Form> forms_at(std::uint64_t rank) const;
    core::Language at(std::uint64_t rank) const;

private:
    core::Alphabet alphabet_;
    std::vector<core::Form> form_space_;
    std::uint64_t count_;
};

// Position i is systematic for component j iff meaning -> form[i] factors
// through m_j alone and is injective on m_j's values; the degree is the size
// of a maximum matching between components and positions under that relation,
// with ties broken toward the lowest (j, i) pairs.
SystematicityReport systematicity_degree(const std::vector<core::Form>& forms,
                                         const core::FactoredSpace& space);
SystematicityReport systematicity_degree(const core::Language& language,
                                         const core::FactoredSpace& space);

// Number of degree-0 bijections between the factored meanings and the given
// form space, plus the full degree histogram over all bijections.
std::map<std::size_t, std::uint64_t> degree_histogram(const core::FactoredSpace& space,
                                                      const std::vector<core::Form>& form_space,
                                                      unsigned threads = 0);
std::uint64_t count_holistic(const core::FactoredSpace& space,
                             const std::vector<core::Form>& form_space, unsigned threads = 0);

core::Language apply_permutation(const core::Language& language, const PositionPermutation& perm);

// True iff the image of every block is a contiguous interval of output slots.
// blocks must partition 0..len-1.
bool is_contiguous(const PositionPermutation& perm, const std::vector<std::vector<std::size_t>>& blocks);

// True iff every group's image is contiguous. groups must form a laminar
// family over 0..len-1.
bool is_well_nested(const PositionPermutation& perm, const std::vector<std::vector<std::size_t>>& groups);

// Fisher-Yates over token positions, PRNG keyed by (seed, form length): equal
// lengths under one seed receive the identical position permutation.
core::Form seeded_shuffle(const core::Form& form, std::uint64_t seed);

// Permutes tokens only within equal-class position sets; each class group is
// shuffled exactly as seeded_shuffle would shuffle a form of that group's
// size. The class sequence of the output equals the input's.
core::Form class_preserving_shuffle(const core::Form& form, const std::vector<core::Symbol>& classes,
                                    std::uint64_t seed);

// Reassigns forms to meanings by one seeded permutation; when
// length_preserving, the permutation acts within groups of equal-length forms
// (groups processed in ascending length order from a single draw stream).
core::Language permute_assignment(const core::Language& language, std::uint64_t seed,
                                  bool length_preserving);

// L(m) = concatenation over partition blocks of codebook_b applied to m
// restricted to block b. codebooks[b] is indexed by the mixed-radix index of
// the block's component values (first listed component most significant).
core::Language partition_language(const core::FactoredSpace& space, core::Alphabet alphabet,
                                  const std::vector<std::vector<std::size_t>>& partition,
                                  const std::vector<std::vector<core::Form>>& codebooks);

enum class TwoFeatureClass { systematic, cnot12, cnot21, other };

const char* to_string(TwoFeatureClass cls);

// Classifies a 4-meaning, length-2 code: systematic (degree 2), cnot12 (first
// position encodes m1, second encodes m1 XOR m2), cnot21 (mirror), or other.
// Relabeling symbols within a position never changes the class.
TwoFeatureClass classify_two_feature_code(const core::Language& language);

// Assigns each feature value a random length-4 binary word (distinct within a
// component, rejection sampled; stream keyed by (seed, component index)) and
// maps each meaning to the concatenation of its feature words.
core::Language word_language(const core::FactoredSpace& space, std::uint64_t lexicon_seed);

}  // namespace xentropy::codes
