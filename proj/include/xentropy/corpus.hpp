#pragma once

#include <array>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "xentropy/core.hpp"

namespace xentropy::corpus {

// ---------------------------------------------------------------------------
// Wordlists (one form per line, optional frequency and per-token classes).
// ---------------------------------------------------------------------------

struct WordRecord {
    std::string text;
    std::vector<std::string> tokens;
    double frequency = 0;
    std::vector<std::string> classes;  // empty when the line carried none
};

struct Wordlist {
    std::vector<WordRecord> words;  // distinct forms, file order of first occurrence
};

// Lines: form<TAB>[count]<TAB>[classes], '#' comments, duplicate forms summed.
// A two-column line is (form, count) when the second column parses as a
// number, otherwise (form, classes). Forms are split into UTF-8 codepoints
// unless whitespace_tokens is set (pre-segmented transcriptions).
Wordlist parse_wordlist(std::istream& stream, bool whitespace_tokens = false);

// token<TAB>class map, '#' comments.
std::map<std::string, std::string> parse_token_classes(std::istream& stream);

// A wordlist lifted into entropy-ready structures. classes[i] aligns with
// language.forms[i] and holds ids into class_names.
struct WordlistSystem {
    core::Language language;
    core::SourceDistribution source;
    bool has_classes = false;
    std::vector<std::vector<core::Symbol>> classes;
    std::vector<std::string> class_names;
};

// Per-line class strings take precedence; token_classes (optional) fills the
// rest. Covering some words but not all is an error.
WordlistSystem wordlist_system(const Wordlist& wordlist,
                               const std::map<std::string, std::string>* token_classes = nullptr);

// ---------------------------------------------------------------------------
// Dependency treebanks (10-column CoNLL-U subset).
// ---------------------------------------------------------------------------

struct TokenRecord {
    int id = 0;
    std::string form;
    std::string lemma;
    std::string upos;
    std::map<std::string, std::string> feats;
    int head = 0;  // 0 = root
    std::string deprel;
};

using Sentence = std::vector<TokenRecord>;

// Skips multiword-token ranges ("3-4") and empty nodes ("3.1"); '_' FEATS
// yield an empty map. Errors carry 1-based line numbers.
std::vector<Sentence> parse_conllu(std::istream& stream);

// ---------------------------------------------------------------------------
// Noun phrases (determiner, numeral, adjective, noun head).
// ---------------------------------------------------------------------------

inline constexpr std::array<const char*, 4> np_slot_names = {"D", "N", "A", "n"};

struct NounPhraseCounts {
    // key = (det lemma, num lemma, adj lemma, noun lemma), "" = absent slot
    std::map<std::array<std::string, 4>, double> counts;
    std::uint64_t multiple_det = 0;  // NPs where extra determiners were dropped
    std::uint64_t multiple_num = 0;
};

// One tuple per NOUN head: det/DET, nummod/NUM, amod/ADJ dependents by lemma
// (case-folded ASCII, punctuation-only lemmas treated as absent). Multiple
// adjectives are resolved by a seeded uniform choice keyed by (seed, sentence
// index, head id); multiple determiners or numerals keep the leftmost.
NounPhraseCounts extract_noun_phrases(const std::vector<Sentence>& sentences, std::uint64_t seed);

struct NpOrderRow {
    std::string order;  // e.g. "D-N-A-n"
    double excess_entropy = 0;
};

// Excess entropy at the word level for all 24 slot orders, rows sorted by E
// ascending then order name. Absent slots are omitted from forms. Raises
// oracle_error if any reversal pair disagrees beyond the info tolerance.
std::vector<NpOrderRow> np_order_sweep(const NounPhraseCounts& counts, bool verify = false);

// ---------------------------------------------------------------------------
// Word pairs.
// ---------------------------------------------------------------------------

// word1<TAB>word2<TAB>count, '#' comments.
std::map<std::pair<std::string, std::string>, double> parse_pair_counts(std::istream& stream);

// (verb lemma, object noun lemma) counts: head VERB --obj--> dependent NOUN.
std::map<std::pair<std::string, std::string>, double> extract_verb_object_pairs(
    const std::vector<Sentence>& sentences);

// Adjacent amod pairs: NOUN head, ADJ dependent, |head id - dependent id| = 1.
// Key = the two wordforms in sentence order joined by a single space.
std::map<std::string, double> extract_adjective_noun_pairs(const std::vector<Sentence>& sentences);

// ---------------------------------------------------------------------------
// Morphological paradigms.
// ---------------------------------------------------------------------------

struct ParadigmTable {
    std::vector<std::string> feature_names;
    std::vector<std::vector<std::string>> bundles;  // one value per feature
    std::vector<std::string> forms;
    std::vector<double> counts;
};

// Header row: feat1..featK form count. Feature bundles must be distinct.
ParadigmTable parse_paradigm(std::istream& stream);

struct ParadigmSource {
    core::SourceDistribution source;  // smoothed bundle probabilities
    core::Language language;          // character-tokenized forms, aligned
    std::vector<std::vector<std::string>> bundles;
    std::vector<std::string> feature_names;
};

ParadigmSource paradigm_source(const ParadigmTable& table, double smoothing = 0.5);

// ---------------------------------------------------------------------------
// Semantic feature norms.
// ---------------------------------------------------------------------------

struct NormsTable {
    std::vector<std::string> words;
    std::vector<std::string> features;
    std::vector<std::vector<double>> values;  // row per word
};

// Header row: word feat1..featK; real-valued cells.
NormsTable parse_norms(std::istream& stream);

struct FeatureMatrix {
    std::vector<std::string> words;
    std::vector<std::string> features;
    std::vector<std::vector<std::uint8_t>> values;  // binary, row per word
    std::vector<double> weights;                    // sums to 1
};

// Cell = 1 iff it strictly exceeds the feature's unweighted mean across all
// words. weights: empty = uniform; otherwise per-word nonnegative masses,
// normalized here.
FeatureMatrix binarize_norms(const NormsTable& norms, std::vector<double> weights = {});

// Reweights by word->mass (words missing from the map get 0). The remaining
// total must be positive.
FeatureMatrix apply_frequencies(const FeatureMatrix& fm,
                                const std::map<std::string, double>& frequencies);

// K x K symmetric matrix: off-diagonal = MI of the 2x2 joint of two feature
// columns under the word weights; diagonal = column entropy.
std::vector<std::vector<double>> pairwise_feature_mi(const FeatureMatrix& fm);

// matrix[i][j] = MI[feature_i of first word : feature_j of second word] under
// the pair distribution, restricted to pairs whose both words carry norms.
std::vector<std::vector<double>> across_word_mi(
    const FeatureMatrix& fm, const std::map<std::pair<std::string, std::string>, double>& pairs);

}  // namespace xentropy::corpus
