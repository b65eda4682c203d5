#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace xentropy::cli {

struct RunConfig {
    std::uint64_t seed = 0;
    unsigned threads = 0;  // 0 = auto
    bool verify = false;
};

// A finished result: preformatted cells plus '# key=value' footer notes.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::pair<std::string, std::string>> footer;
};

std::string to_csv(const Table& table);
std::string to_json(const Table& table);
std::string format_double(double value);  // 12 significant digits, C locale

// ---------------------------------------------------------------------------
// Simulations.
// ---------------------------------------------------------------------------

struct SystematicityResult {
    struct Row {
        std::uint64_t language_id = 0;
        double excess_entropy = 0;
        std::size_t degree = 0;
    };
    std::vector<Row> rows;  // sorted by E ascending, then id
    std::size_t min_set_size = 0;
    std::map<std::size_t, std::uint64_t> min_set_degrees;
    std::map<std::size_t, std::uint64_t> degree_histogram;
};

SystematicityResult run_systematicity(double eps, const RunConfig& config);

struct CorrelatedRow {
    double alpha = 0;
    double mi_m2_m3 = 0;
    double e_local = 0;
    double e_nonlocal = 0;
    double e_natural = 0;
    double e_unnatural = 0;
    double e_holistic_min = 0;
    double e_holistic_median = 0;
};

struct CorrelatedResult {
    std::vector<CorrelatedRow> rows;
    bool has_crossover = false;
    double crossover_alpha = 0;  // first grid alpha where natural beats local
    CorrelatedRow table_source;  // alpha slot unused; E values at the pinned source
    double table_e_holistic_sample = 0;
};

CorrelatedResult run_correlated(const std::vector<double>& alphas, const RunConfig& config);

struct PermutationRow {
    std::uint64_t rank = 0;
    std::string permutation;
    double excess_entropy = 0;
    bool marked = false;  // locality: contiguous; hierarchy: well-nested
};

struct PermutationSweepResult {
    std::vector<PermutationRow> rows;  // sorted by E ascending, then rank
    std::uint64_t marked_count = 0;
    std::uint64_t min_tie_count = 0;  // rows within tolerance of the minimum
};

PermutationSweepResult run_locality(const RunConfig& config);
PermutationSweepResult run_hierarchy(double alpha, double beta, double gamma,
                                     const RunConfig& config);

struct TwoFeatureRow {
    double a = 0;
    double b = 0;
    double r = 0;
    double mi = 0;
    std::uint64_t language_id = 0;
    std::string code_class;
    double excess_entropy = 0;
};

std::vector<TwoFeatureRow> run_two_feature(const std::vector<double>& marginals,
                                           const std::vector<double>& correlations,
                                           const RunConfig& config);

// ---------------------------------------------------------------------------
// Corpus analyses.
// ---------------------------------------------------------------------------

enum class Baseline { nonconcat, nonsyst, nonsyst_lenpres, class_shuffle };

struct AnalysisRow {
    std::string system;        // "real" or a baseline name
    std::uint64_t sample = 0;  // 0 for deterministic systems
    double excess_entropy = 0;
};

struct AnalysisResult {
    std::vector<AnalysisRow> rows;
    std::vector<std::pair<std::string, std::string>> footer;
};

struct PhonotacticsLanguageResult {
    std::string language;  // input file stem
    double real = 0;
    bool has_class_shuffle = false;
    double class_shuffle = 0;
    bool has_nonconcat = false;
    double nonconcat = 0;
};

std::vector<PhonotacticsLanguageResult> run_phonotactics(
    const std::vector<std::string>& input_paths, const std::string& classes_path,
    bool whitespace_tokens, const std::vector<Baseline>& baselines, const RunConfig& config);

AnalysisResult run_morphology(const std::string& input_path, double smoothing,
                              const std::vector<Baseline>& baselines, std::uint64_t samples,
                              const RunConfig& config);

AnalysisResult run_adjnoun(const std::string& input_path, const std::vector<Baseline>& baselines,
                           std::uint64_t samples, const RunConfig& config);

struct NpOrderResult {
    std::vector<std::pair<std::string, double>> rows;  // (order, E) sorted by E
    std::map<std::string, double> genera;              // optional user-supplied counts
    std::uint64_t multiple_det = 0;
    std::uint64_t multiple_num = 0;
    double total_count = 0;
};

NpOrderResult run_np_order(const std::string& input_path, const std::string& genera_path,
                           const RunConfig& config);

struct SemanticsResult {
    std::vector<std::string> features;
    std::vector<std::vector<double>> within;   // symmetric, diagonal = entropy
    bool has_across = false;
    std::vector<std::vector<double>> across;   // feature of word1 x feature of word2
    std::size_t weighted_words = 0;
    std::size_t pairs_used = 0;
};

SemanticsResult run_semantics(const std::string& norms_path, const std::string& freqs_path,
                              const std::string& pairs_path, const RunConfig& config);

// Entry point used by the binary: parses arguments, writes CSV/JSON to the
// requested output, maps input_error to exit 2 and oracle_error to exit 3.
int run(int argc, const char* const* argv);

}  // namespace xentropy::cli
