#include "xentropy/cli.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "xentropy/codes.hpp"
#include "xentropy/core.hpp"
#include "xentropy/corpus.hpp"
#include "xentropy/entropy.hpp"
#include "xentropy/infotheory.hpp"
#include "xentropy/numeric.hpp"
#include "xentropy/parallel.hpp"
#include "xentropy/sources.hpp"

namespace xentropy::cli {

namespace {

double e_of(const core::FormDistribution& fd, bool verify) {
    return verify ? entropy::verified_excess_entropy(fd) : entropy::excess_entropy(fd);
}

core::FormDistribution fd_of(const std::vector<core::Form>& forms, const std::vector<double>& probs) {
    std::vector<std::pair<core::Form, double>> entries;
    entries.reserve(forms.size());
    for (std::size_t m = 0; m < forms.size(); ++m) entries.emplace_back(forms[m], probs[m]);
    return core::make_form_distribution(std::move(entries));
}

std::string perm_string(const std::vector<std::size_t>& mapping) {
    std::string out;
    out.reserve(mapping.size());
    for (std::size_t v : mapping) out += static_cast<char>('0' + v);
    return out;
}

double lower_median(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    return values[(values.size() - 1) / 2];
}

std::ifstream open_input(const std::string& path) {
    std::ifstream file(path);
    if (!file) throw input_error(path + ": cannot open");
    return file;
}

template <class Fn>
auto with_path(const std::string& path, Fn&& fn) {
    try {
        return fn();
    } catch (const input_error& e) {
        throw input_error(path + ": " + e.what());
    }
}

// The eight {a,b}^3 forms in binary order (a = 0).
std::vector<core::Form> cube_forms() {
    std::vector<core::Form> forms;
    forms.reserve(8);
    for (core::Symbol m = 0; m < 8; ++m)
        forms.push_back({(m >> 2) & 1, (m >> 1) & 1, m & 1});
    return forms;
}

double source_mi_m2_m3(const core::SourceDistribution& source) {
    const infotheory::JointTable full({2, 2, 2}, source.probabilities);
    return infotheory::mutual_information(infotheory::JointTable({2, 2}, full.marginal({1, 2})));
}

std::string histogram_text(const std::map<std::size_t, std::uint64_t>& histogram) {
    std::string out;
    for (const auto& [degree, count] : histogram) {
        if (!out.empty()) out += ' ';
        out += std::to_string(degree) + ':' + std::to_string(count);
    }
    return out;
}

}  // namespace

std::string format_double(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.12g", value);
    return buffer;
}

namespace {

std::string csv_field(const std::string& value) {
    if (value.find_first_of(",\"\n") == std::string::npos) return value;
    std::string out = "\"";
    for (char c : value) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

}  // namespace

std::string to_csv(const Table& table) {
    std::string out;
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        if (i) out += ',';
        out += csv_field(table.columns[i]);
    }
    out += '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += csv_field(row[i]);
        }
        out += '\n';
    }
    for (const auto& [key, value] : table.footer) out += "# " + key + "=" + value + "\n";
    return out;
}

std::string to_json(const Table& table) {
    nlohmann::ordered_json j;
    j["columns"] = table.columns;
    j["rows"] = table.rows;
    nlohmann::ordered_json footer = nlohmann::ordered_json::object();
    for (const auto& [key, value] : table.footer) footer[key] = value;
    j["footer"] = footer;
    return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// sim systematicity
// ---------------------------------------------------------------------------

SystematicityResult run_systematicity(double eps, const RunConfig& config) {
    const auto source = sources::bernoulli_product({2.0 / 3, 2.0 / 3 + eps, 2.0 / 3 + 2 * eps});
    const core::FactoredSpace space({2, 2, 2});
    const codes::BijectionEnumerator enumerator(core::char_alphabet("ab"), cube_forms(), 8);
    const std::uint64_t total = enumerator.size();

    std::vector<double> e(total);
    std::vector<std::uint8_t> degree(total);
    numeric::parallel_for(total, numeric::resolve_threads(config.threads), [&](std::size_t rank) {
        const auto forms = enumerator.forms_at(rank);
        degree[rank] =
            static_cast<std::uint8_t>(codes::systematicity_degree(forms, space).degree);
        e[rank] = e_of(fd_of(forms, source.probabilities), config.verify);
    });

    SystematicityResult result;
    result.rows.resize(total);
    for (std::uint64_t rank = 0; rank < total; ++rank)
        result.rows[rank] = {rank, e[rank], degree[rank]};
    std::sort(result.rows.begin(), result.rows.end(), [](const auto& a, const auto& b) {
        return a.excess_entropy != b.excess_entropy ? a.excess_entropy < b.excess_entropy
                                                    : a.language_id < b.language_id;
    });
    const double min_e = result.rows.front().excess_entropy;
    for (const auto& row : result.rows) {
        if (row.excess_entropy > min_e + core::info_tolerance) break;
        ++result.min_set_size;
        ++result.min_set_degrees[row.degree];
    }
    for (std::uint8_t d : degree) ++result.degree_histogram[d];
    return result;
}

// ---------------------------------------------------------------------------
// sim correlated
// ---------------------------------------------------------------------------

namespace {

struct CorrelatedLanguages {
    core::Language local;
    core::Language nonlocal;
    core::Language natural;
    core::Language unnatural;
};

CorrelatedLanguages correlated_languages() {
    const core::FactoredSpace space({2, 2, 2});
    const core::Alphabet ab = core::char_alphabet("ab");
    // Value 1 is the high-probability outcome and is written 'a'; pair blocks
    // write (1,1) as "aa", (1,0) as "ab", (0,1) as "bb", (0,0) as "ba".
    const std::vector<core::Form> unary = {{1}, {0}};
    const std::vector<core::Form> pair = {{1, 0}, {1, 1}, {0, 1}, {0, 0}};
    CorrelatedLanguages out{
        codes::partition_language(space, ab, {{0}, {1}, {2}}, {unary, unary, unary}),
        core::Language{ab, {}},
        codes::partition_language(space, ab, {{0}, {1, 2}}, {unary, pair}),
        codes::partition_language(space, ab, {{0, 1}, {2}}, {pair, unary}),
    };
    out.nonlocal = codes::apply_permutation(out.local, codes::make_permutation({1, 0, 2}));
    return out;
}

// The pinned eight-row source, listed with the all-ones meaning first.
std::vector<double> table_source_probabilities() {
    const std::array<double, 8> by_table_row = {
        2.0 / 3 * 5 / 9, 2.0 / 3 * 1 / 9, 2.0 / 3 * 1 / 9, 2.0 / 3 * 2 / 9,
        1.0 / 3 * 5 / 9, 1.0 / 3 * 1 / 9, 1.0 / 3 * 1 / 9, 1.0 / 3 * 2 / 9,
    };
    std::vector<double> probs(8);
    for (std::size_t m = 0; m < 8; ++m) probs[m] = by_table_row[7 - m];
    return probs;
}

std::vector<core::Form> table_holistic_forms(const core::Alphabet& ab) {
    const std::array<const char*, 8> by_table_row = {"bba", "aaa", "baa", "bab",
                                                     "aba", "bbb", "abb", "aab"};
    std::vector<core::Form> forms(8);
    for (std::size_t m = 0; m < 8; ++m) forms[m] = core::parse_form(ab, by_table_row[7 - m]);
    return forms;
}

}  // namespace

CorrelatedResult run_correlated(const std::vector<double>& alphas, const RunConfig& config) {
    constexpr double eps = 0.05;
    const core::FactoredSpace space({2, 2, 2});
    const CorrelatedLanguages langs = correlated_languages();
    const codes::BijectionEnumerator enumerator(core::char_alphabet("ab"), cube_forms(), 8);
    const unsigned threads = numeric::resolve_threads(config.threads);

    std::vector<std::uint8_t> degree(enumerator.size());
    numeric::parallel_for(enumerator.size(), threads, [&](std::size_t rank) {
        degree[rank] = static_cast<std::uint8_t>(
            codes::systematicity_degree(enumerator.forms_at(rank), space).degree);
    });
    std::vector<std::uint64_t> holistic_ranks;
    for (std::uint64_t rank = 0; rank < enumerator.size(); ++rank)
        if (degree[rank] == 0) holistic_ranks.push_back(rank);

    const auto evaluate = [&](const core::SourceDistribution& source, double alpha) {
        CorrelatedRow row;
        row.alpha = alpha;
        row.mi_m2_m3 = source_mi_m2_m3(source);
        row.e_local = e_of(core::form_distribution(langs.local, source), config.verify);
        row.e_nonlocal = e_of(core::form_distribution(langs.nonlocal, source), config.verify);
        row.e_natural = e_of(core::form_distribution(langs.natural, source), config.verify);
        row.e_unnatural = e_of(core::form_distribution(langs.unnatural, source), config.verify);

        std::vector<double> es(holistic_ranks.size());
        numeric::parallel_for(holistic_ranks.size(), threads, [&](std::size_t i) {
            es[i] = e_of(fd_of(enumerator.forms_at(holistic_ranks[i]), source.probabilities),
                         config.verify);
        });
        std::sort(es.begin(), es.end());
        row.e_holistic_min = es.front();
        row.e_holistic_median = es[(es.size() - 1) / 2];
        return row;
    };

    CorrelatedResult result;
    for (double alpha : alphas)
        result.rows.push_back(evaluate(sources::three_feature_mixture(eps, alpha), alpha));
    for (const auto& row : result.rows) {
        if (row.e_natural < row.e_local - core::info_tolerance) {
            result.has_crossover = true;
            result.crossover_alpha = row.alpha;
            break;
        }
    }

    const auto table_source = core::make_source(table_source_probabilities(), space);
    result.table_source = evaluate(table_source, 0);
    result.table_source.alpha = std::numeric_limits<double>::quiet_NaN();
    result.table_e_holistic_sample =
        e_of(fd_of(table_holistic_forms(core::char_alphabet("ab")), table_source.probabilities),
             config.verify);
    return result;
}

// ---------------------------------------------------------------------------
// sim locality / sim hierarchy
// ---------------------------------------------------------------------------

namespace {

PermutationSweepResult sweep_permutations(const core::Language& base,
                                          const core::SourceDistribution& source,
                                          std::size_t length,
                                          const std::vector<std::vector<std::size_t>>& groups,
                                          bool contiguity, const RunConfig& config) {
    std::uint64_t total = 1;
    for (std::size_t i = 2; i <= length; ++i) total *= i;

    std::vector<double> e(total);
    std::vector<std::uint8_t> marked(total);
    numeric::parallel_for(total, numeric::resolve_threads(config.threads), [&](std::size_t rank) {
        const auto perm = codes::nth_permutation(length, rank);
        const auto language = codes::apply_permutation(base, perm);
        e[rank] = e_of(core::form_distribution(language, source), config.verify);
        marked[rank] = contiguity ? codes::is_contiguous(perm, groups)
                                  : codes::is_well_nested(perm, groups);
    });

    PermutationSweepResult result;
    result.rows.resize(total);
    for (std::uint64_t rank = 0; rank < total; ++rank)
        result.rows[rank] = {rank, perm_string(codes::nth_permutation(length, rank).mapping),
                             e[rank], marked[rank] != 0};
    std::sort(result.rows.begin(), result.rows.end(), [](const auto& a, const auto& b) {
        return a.excess_entropy != b.excess_entropy ? a.excess_entropy < b.excess_entropy
                                                    : a.rank < b.rank;
    });
    const double min_e = result.rows.front().excess_entropy;
    for (const auto& row : result.rows) {
        if (row.excess_entropy > min_e + core::info_tolerance) break;
        ++result.min_tie_count;
    }
    for (std::uint8_t m : marked) result.marked_count += m;
    return result;
}

}  // namespace

PermutationSweepResult run_locality(const RunConfig& config) {
    const core::FactoredSpace space({10, 10});
    const auto source = sources::zipf(100, 1.0);
    const auto base = codes::word_language(space, config.seed);
    auto result = sweep_permutations(base, source, 8, {{0, 1, 2, 3}, {4, 5, 6, 7}}, true, config);
    if (!result.rows.front().marked)
        throw oracle_error("locality: the minimal permutation is not block-contiguous");
    return result;
}

PermutationSweepResult run_hierarchy(double alpha, double beta, double gamma,
                                     const RunConfig& config) {
    const auto source = sources::hierarchical_source(alpha, beta, gamma);
    const core::FactoredSpace space({5, 5, 5, 5, 5, 5});

    std::vector<std::string> tokens;
    for (std::size_t pos = 0; pos < 6; ++pos)
        for (std::size_t v = 0; v < 5; ++v)
            tokens.push_back(std::string(1, static_cast<char>('a' + pos)) +
                             static_cast<char>('0' + v));
    std::vector<core::Form> forms(space.size());
    for (std::size_t m = 0; m < space.size(); ++m) {
        core::Form form(6);
        for (std::size_t pos = 0; pos < 6; ++pos)
            form[pos] = static_cast<core::Symbol>(5 * pos + space.component(m, pos));
        forms[m] = std::move(form);
    }
    const auto base = core::make_language(std::move(forms), core::Alphabet(std::move(tokens)));

    auto result = sweep_permutations(base, source, 6, {{0, 1}, {3, 4}, {0, 1, 2}, {3, 4, 5}},
                                     false, config);
    for (const auto& row : result.rows) {
        if (row.excess_entropy > result.rows.front().excess_entropy + core::info_tolerance) break;
        if (!row.marked)
            throw oracle_error("hierarchy: a minimal permutation is not well-nested: " +
                               row.permutation);
    }
    return result;
}

// ---------------------------------------------------------------------------
// sweep two-feature
// ---------------------------------------------------------------------------

std::vector<TwoFeatureRow> run_two_feature(const std::vector<double>& marginals,
                                           const std::vector<double>& correlations,
                                           const RunConfig& config) {
    const auto grid = sources::simplex_grid(marginals, correlations);
    const core::Alphabet abcd = core::char_alphabet("abcd");
    const std::vector<core::Form> form_space = {{0, 2}, {0, 3}, {1, 2}, {1, 3}};
    const codes::BijectionEnumerator enumerator(abcd, form_space, 4);

    std::vector<TwoFeatureRow> rows(grid.size() * enumerator.size());
    numeric::parallel_for(rows.size(), numeric::resolve_threads(config.threads),
                           [&](std::size_t i) {
        const auto& [spec, source] = grid[i / enumerator.size()];
        const std::uint64_t rank = i % enumerator.size();
        const auto forms = enumerator.forms_at(rank);
        rows[i] = {spec.a,
                   spec.b,
                   spec.r,
                   infotheory::mutual_information(infotheory::JointTable({2, 2},
                                                                         source.probabilities)),
                   rank,
                   codes::to_string(codes::classify_two_feature_code(core::Language{abcd, forms})),
                   e_of(fd_of(forms, source.probabilities), config.verify)};
    });
    return rows;
}

// ---------------------------------------------------------------------------
// analyze helpers
// ---------------------------------------------------------------------------

namespace {

std::vector<core::Form> shuffled_forms(const std::vector<core::Form>& forms, std::uint64_t seed) {
    std::vector<core::Form> out;
    out.reserve(forms.size());
    for (const auto& form : forms) out.push_back(codes::seeded_shuffle(form, seed));
    return out;
}

// Sampled assignment-shuffle baseline with p-value and median bookkeeping.
void sampled_baseline(AnalysisResult& result, const std::string& name, std::uint64_t tag,
                      const core::Language& language, const core::SourceDistribution& source,
                      double real_e, bool length_preserving, std::uint64_t samples,
                      const RunConfig& config) {
    if (samples == 0) throw input_error("analyze: --samples must be positive");
    const double real_rate =
        config.verify && length_preserving
            ? entropy::entropy_profile(core::form_distribution(language, source)).entropy_rate
            : 0;

    std::vector<double> es(samples);
    numeric::parallel_for(samples, numeric::resolve_threads(config.threads), [&](std::size_t i) {
        const std::uint64_t sample_seed = codes::mix_key(codes::mix_key(config.seed, tag), i + 1);
        const auto shuffled = codes::permute_assignment(language, sample_seed, length_preserving);
        const auto fd = core::form_distribution(shuffled, source);
        es[i] = e_of(fd, config.verify);
        if (config.verify && length_preserving) {
            const double rate = entropy::entropy_profile(fd).entropy_rate;
            if (std::abs(rate - real_rate) > core::prob_tolerance)
                throw oracle_error(name + ": length-preserving shuffle changed the entropy rate");
        }
    });

    std::uint64_t below = 0;
    for (std::size_t i = 0; i < samples; ++i) {
        if (es[i] < real_e) ++below;
        result.rows.push_back({name, i + 1, es[i]});
    }
    result.footer.emplace_back("p_" + name,
                               format_double(static_cast<double>(below) /
                                             static_cast<double>(samples)));
    result.footer.emplace_back("median_" + name, format_double(lower_median(es)));
}

AnalysisResult analyze_language(const core::Language& language,
                                const core::SourceDistribution& source,
                                const std::vector<Baseline>& baselines, std::uint64_t samples,
                                const RunConfig& config) {
    AnalysisResult result;
    const double real_e = e_of(core::form_distribution(language, source), config.verify);
    result.rows.push_back({"real", 0, real_e});

    for (Baseline baseline : baselines) {
        switch (baseline) {
            case Baseline::nonconcat: {
                const auto fd = fd_of(shuffled_forms(language.forms, config.seed),
                                      source.probabilities);
                result.rows.push_back({"nonconcat", 0, e_of(fd, config.verify)});
                break;
            }
            case Baseline::nonsyst:
                sampled_baseline(result, "nonsyst", 1, language, source, real_e, false, samples,
                                 config);
                break;
            case Baseline::nonsyst_lenpres:
                sampled_baseline(result, "nonsyst-lenpres", 2, language, source, real_e, true,
                                 samples, config);
                break;
            case Baseline::class_shuffle:
                throw input_error("analyze: class-shuffle requires per-token class annotation");
        }
    }
    result.footer.emplace_back("samples", std::to_string(samples));
    return result;
}

std::string underscored(std::string name) {
    std::replace(name.begin(), name.end(), '-', '_');
    return name;
}

}  // namespace

// ---------------------------------------------------------------------------
// analyze subcommands
// ---------------------------------------------------------------------------

std::vector<PhonotacticsLanguageResult> run_phonotactics(
    const std::vector<std::string>& input_paths, const std::string& classes_path,
    bool whitespace_tokens, const std::vector<Baseline>& baselines, const RunConfig& config) {
    std::map<std::string, std::string> token_classes;
    if (!classes_path.empty()) {
        auto stream = open_input(classes_path);
        token_classes = with_path(classes_path, [&] { return corpus::parse_token_classes(stream); });
    }
    for (Baseline baseline : baselines)
        if (baseline == Baseline::nonsyst || baseline == Baseline::nonsyst_lenpres)
            throw input_error(
                "analyze phonotactics: supported baselines are nonconcat and class-shuffle");

    std::vector<PhonotacticsLanguageResult> results;
    for (const auto& path : input_paths) {
        auto stream = open_input(path);
        const auto wordlist =
            with_path(path, [&] { return corpus::parse_wordlist(stream, whitespace_tokens); });
        const auto system = with_path(path, [&] {
            return corpus::wordlist_system(wordlist,
                                           classes_path.empty() ? nullptr : &token_classes);
        });

        PhonotacticsLanguageResult row;
        row.language = std::filesystem::path(path).stem().string();
        row.real = e_of(core::form_distribution(system.language, system.source), config.verify);
        for (Baseline baseline : baselines) {
            if (baseline == Baseline::nonconcat) {
                row.has_nonconcat = true;
                row.nonconcat = e_of(fd_of(shuffled_forms(system.language.forms, config.seed),
                                           system.source.probabilities),
                                     config.verify);
            } else if (baseline == Baseline::class_shuffle && system.has_classes) {
                std::vector<core::Form> forms;
                forms.reserve(system.language.forms.size());
                for (std::size_t i = 0; i < system.language.forms.size(); ++i)
                    forms.push_back(codes::class_preserving_shuffle(system.language.forms[i],
                                                                    system.classes[i],
                                                                    config.seed));
                row.has_class_shuffle = true;
                row.class_shuffle =
                    e_of(fd_of(forms, system.source.probabilities), config.verify);
            }
        }
        results.push_back(std::move(row));
    }
    return results;
}

AnalysisResult run_morphology(const std::string& input_path, double smoothing,
                              const std::vector<Baseline>& baselines, std::uint64_t samples,
                              const RunConfig& config) {
    auto stream = open_input(input_path);
    const auto table = with_path(input_path, [&] { return corpus::parse_paradigm(stream); });
    const auto paradigm =
        with_path(input_path, [&] { return corpus::paradigm_source(table, smoothing); });
    auto result = analyze_language(paradigm.language, paradigm.source, baselines, samples, config);
    result.footer.emplace_back("smoothing", format_double(smoothing));
    result.footer.emplace_back("bundles", std::to_string(paradigm.bundles.size()));
    return result;
}

AnalysisResult run_adjnoun(const std::string& input_path, const std::vector<Baseline>& baselines,
                           std::uint64_t samples, const RunConfig& config) {
    std::map<std::string, double> counts;
    if (std::filesystem::path(input_path).extension() == ".conllu") {
        auto stream = open_input(input_path);
        const auto sentences = with_path(input_path, [&] { return corpus::parse_conllu(stream); });
        counts = corpus::extract_adjective_noun_pairs(sentences);
    } else {
        auto stream = open_input(input_path);
        const auto pairs = with_path(input_path, [&] { return corpus::parse_pair_counts(stream); });
        for (const auto& [pair, count] : pairs) counts[pair.first + " " + pair.second] += count;
    }
    if (counts.empty()) throw input_error(input_path + ": no adjective-noun pairs");

    std::set<std::string> token_set;
    std::vector<std::vector<std::string>> token_rows;
    std::vector<double> masses;
    for (const auto& [text, count] : counts) {
        token_rows.push_back(core::utf8_tokens(text));
        token_set.insert(token_rows.back().begin(), token_rows.back().end());
        masses.push_back(count);
    }
    core::Alphabet alphabet(std::vector<std::string>(token_set.begin(), token_set.end()));
    std::vector<core::Form> forms;
    forms.reserve(token_rows.size());
    for (const auto& tokens : token_rows) forms.push_back(core::make_form(alphabet, tokens));

    numeric::NeumaierSum total;
    for (double m : masses) total.add(m);
    if (!(total.value() > 0)) throw input_error(input_path + ": zero total pair count");
    std::vector<double> probs(masses.size());
    for (std::size_t i = 0; i < masses.size(); ++i) probs[i] = masses[i] / total.value();

    auto result = analyze_language(core::make_language(std::move(forms), std::move(alphabet)),
                                   core::make_source(std::move(probs)), baselines, samples, config);
    result.footer.emplace_back("pairs", std::to_string(counts.size()));
    return result;
}

NpOrderResult run_np_order(const std::string& input_path, const std::string& genera_path,
                           const RunConfig& config) {
    auto stream = open_input(input_path);
    const auto sentences = with_path(input_path, [&] { return corpus::parse_conllu(stream); });
    const auto np = corpus::extract_noun_phrases(sentences, config.seed);
    const auto rows = with_path(input_path, [&] {
        return corpus::np_order_sweep(np, config.verify);
    });

    NpOrderResult result;
    for (const auto& row : rows) result.rows.emplace_back(row.order, row.excess_entropy);
    result.multiple_det = np.multiple_det;
    result.multiple_num = np.multiple_num;
    for (const auto& [tuple, count] : np.counts) result.total_count += count;

    if (!genera_path.empty()) {
        auto genera_stream = open_input(genera_path);
        with_path(genera_path, [&] {
            std::string line;
            std::size_t line_no = 0;
            while (std::getline(genera_stream, line)) {
                ++line_no;
                if (!line.empty() && line.back() == '\r') line.pop_back();
                if (line.empty() || line.front() == '#') continue;
                const auto tab = line.find('\t');
                double count = 0;
                if (tab == std::string::npos)
                    throw input_error("line " + std::to_string(line_no) +
                                      ": expected order<TAB>genera");
                try {
                    count = std::stod(line.substr(tab + 1));
                } catch (const std::exception&) {
                    throw input_error("line " + std::to_string(line_no) + ": malformed count");
                }
                result.genera[line.substr(0, tab)] = count;
            }
            return 0;
        });
    }
    return result;
}

SemanticsResult run_semantics(const std::string& norms_path, const std::string& freqs_path,
                              const std::string& pairs_path, const RunConfig& config) {
    (void)config;
    auto norms_stream = open_input(norms_path);
    const auto norms = with_path(norms_path, [&] { return corpus::parse_norms(norms_stream); });
    auto fm = corpus::binarize_norms(norms);

    if (!freqs_path.empty()) {
        auto freq_stream = open_input(freqs_path);
        const auto wordlist =
            with_path(freqs_path, [&] { return corpus::parse_wordlist(freq_stream); });
        std::map<std::string, double> frequencies;
        for (const auto& word : wordlist.words) frequencies[word.text] += word.frequency;
        fm = with_path(freqs_path, [&] { return corpus::apply_frequencies(fm, frequencies); });
    }

    SemanticsResult result;
    result.features = fm.features;
    result.within = corpus::pairwise_feature_mi(fm);
    for (double w : fm.weights)
        if (w > 0) ++result.weighted_words;

    if (!pairs_path.empty()) {
        std::map<std::pair<std::string, std::string>, double> pairs;
        auto pair_stream = open_input(pairs_path);
        if (std::filesystem::path(pairs_path).extension() == ".conllu") {
            const auto sentences =
                with_path(pairs_path, [&] { return corpus::parse_conllu(pair_stream); });
            pairs = corpus::extract_verb_object_pairs(sentences);
        } else {
            pairs = with_path(pairs_path, [&] { return corpus::parse_pair_counts(pair_stream); });
        }
        result.across = with_path(pairs_path, [&] { return corpus::across_word_mi(fm, pairs); });
        result.has_across = true;
        std::set<std::string> known(fm.words.begin(), fm.words.end());
        for (const auto& [pair, count] : pairs)
            if (known.contains(pair.first) && known.contains(pair.second)) ++result.pairs_used;
    }
    return result;
}

// ---------------------------------------------------------------------------
// Table rendering
// ---------------------------------------------------------------------------

namespace {

Table table_systematicity(const SystematicityResult& result) {
    Table table;
    table.columns = {"language_id", "excess_entropy", "degree"};
    for (const auto& row : result.rows)
        table.rows.push_back({std::to_string(row.language_id), format_double(row.excess_entropy),
                              std::to_string(row.degree)});
    table.footer = {
        {"min_excess_entropy", format_double(result.rows.front().excess_entropy)},
        {"min_set_size", std::to_string(result.min_set_size)},
        {"min_set_degrees", histogram_text(result.min_set_degrees)},
        {"degree_histogram", histogram_text(result.degree_histogram)},
    };
    return table;
}

Table table_correlated(const CorrelatedResult& result) {
    Table table;
    table.columns = {"alpha",          "mi_m2_m3",        "e_local_systematic",
                     "e_nonlocal_systematic", "e_natural_l1l23", "e_unnatural_l12l3",
                     "e_holistic_min", "e_holistic_median"};
    const auto render = [](const CorrelatedRow& row) {
        return std::vector<std::string>{
            format_double(row.alpha),      format_double(row.mi_m2_m3),
            format_double(row.e_local),    format_double(row.e_nonlocal),
            format_double(row.e_natural),  format_double(row.e_unnatural),
            format_double(row.e_holistic_min), format_double(row.e_holistic_median)};
    };
    for (const auto& row : result.rows) table.rows.push_back(render(row));
    table.footer = {
        {"crossover_alpha",
         result.has_crossover ? format_double(result.crossover_alpha) : "none"},
        {"table_source_mi", format_double(result.table_source.mi_m2_m3)},
        {"table_e_local_systematic", format_double(result.table_source.e_local)},
        {"table_e_nonlocal_systematic", format_double(result.table_source.e_nonlocal)},
        {"table_e_natural_l1l23", format_double(result.table_source.e_natural)},
        {"table_e_unnatural_l12l3", format_double(result.table_source.e_unnatural)},
        {"table_e_holistic_min", format_double(result.table_source.e_holistic_min)},
        {"table_e_holistic_median", format_double(result.table_source.e_holistic_median)},
        {"table_e_holistic_sample", format_double(result.table_e_holistic_sample)},
    };
    return table;
}

Table table_permutations(const PermutationSweepResult& result, const std::string& flag_column,
                         const std::string& count_key) {
    Table table;
    table.columns = {"permutation", "excess_entropy", flag_column};
    for (const auto& row : result.rows)
        table.rows.push_back({row.permutation, format_double(row.excess_entropy),
                              row.marked ? "true" : "false"});
    table.footer = {
        {"argmin_permutation", result.rows.front().permutation},
        {"min_excess_entropy", format_double(result.rows.front().excess_entropy)},
        {count_key, std::to_string(result.marked_count)},
        {"min_tie_count", std::to_string(result.min_tie_count)},
    };
    return table;
}

Table table_two_feature(const std::vector<TwoFeatureRow>& rows) {
    Table table;
    table.columns = {"a", "b", "r", "mi", "language_id", "code_class", "excess_entropy"};
    for (const auto& row : rows)
        table.rows.push_back({format_double(row.a), format_double(row.b), format_double(row.r),
                              format_double(row.mi), std::to_string(row.language_id),
                              row.code_class, format_double(row.excess_entropy)});
    return table;
}

Table table_phonotactics(const std::vector<PhonotacticsLanguageResult>& results) {
    Table table;
    table.columns = {"language", "real", "class_shuffle", "nonconcat"};
    for (const auto& row : results)
        table.rows.push_back({row.language, format_double(row.real),
                              row.has_class_shuffle ? format_double(row.class_shuffle) : "",
                              row.has_nonconcat ? format_double(row.nonconcat) : ""});
    return table;
}

Table table_analysis(const AnalysisResult& result) {
    Table table;
    table.columns = {"system", "sample", "excess_entropy"};
    for (const auto& row : result.rows)
        table.rows.push_back({row.system, std::to_string(row.sample),
                              format_double(row.excess_entropy)});
    for (const auto& [key, value] : result.footer)
        table.footer.emplace_back(underscored(key), value);
    return table;
}

Table table_np_order(const NpOrderResult& result) {
    Table table;
    table.columns = {"order", "excess_entropy", "genera"};
    for (const auto& [order, e] : result.rows) {
        const auto it = result.genera.find(order);
        table.rows.push_back({order, format_double(e),
                              it == result.genera.end() ? "" : format_double(it->second)});
    }
    table.footer = {
        {"noun_phrases", format_double(result.total_count)},
        {"multiple_det", std::to_string(result.multiple_det)},
        {"multiple_num", std::to_string(result.multiple_num)},
    };
    return table;
}

Table table_semantics(const SemanticsResult& result) {
    Table table;
    table.columns = {"mode", "feature1", "feature2", "mi"};
    const std::size_t k = result.features.size();
    numeric::NeumaierSum within_sum;
    std::size_t within_count = 0;
    for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = a; b < k; ++b) {
            table.rows.push_back({"within", result.features[a], result.features[b],
                                  format_double(result.within[a][b])});
            if (a != b) {
                within_sum.add(result.within[a][b]);
                ++within_count;
            }
        }
    }
    numeric::NeumaierSum across_sum;
    if (result.has_across) {
        for (std::size_t a = 0; a < k; ++a) {
            for (std::size_t b = 0; b < k; ++b) {
                table.rows.push_back({"across", result.features[a], result.features[b],
                                      format_double(result.across[a][b])});
                across_sum.add(result.across[a][b]);
            }
        }
    }
    table.footer.emplace_back("weighted_words", std::to_string(result.weighted_words));
    if (within_count)
        table.footer.emplace_back(
            "mean_within_mi",
            format_double(within_sum.value() / static_cast<double>(within_count)));
    if (result.has_across) {
        table.footer.emplace_back(
            "mean_across_mi", format_double(across_sum.value() / static_cast<double>(k * k)));
        table.footer.emplace_back("pairs_used", std::to_string(result.pairs_used));
    }
    return table;
}

// ---------------------------------------------------------------------------
// Argument parsing
// ---------------------------------------------------------------------------

struct CommonOptions {
    std::string format = "csv";
    std::string threads = "auto";
    std::string output;
    std::uint64_t seed = 0;
    bool verify = false;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
    cmd->add_option("--format", opts.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--seed", opts.seed, "PRNG seed");
    cmd->add_option("--threads", opts.threads, "Worker thread count or 'auto'");
    cmd->add_option("-o,--output", opts.output, "Write output to a file instead of stdout");
    cmd->add_flag("--verify", opts.verify,
                  "Cross-check every excess entropy against the window oracle");
}

RunConfig to_config(const CommonOptions& opts) {
    RunConfig config;
    config.seed = opts.seed;
    config.verify = opts.verify;
    if (opts.threads == "auto") {
        config.threads = 0;
    } else {
        try {
            const unsigned long value = std::stoul(opts.threads);
            if (value == 0 || value > 1024) throw std::out_of_range("threads");
            config.threads = static_cast<unsigned>(value);
        } catch (const std::exception&) {
            throw input_error("--threads must be a positive integer or 'auto'");
        }
    }
    return config;
}

void emit(const Table& table, const CommonOptions& opts) {
    const std::string payload = opts.format == "json" ? to_json(table) : to_csv(table);
    if (opts.output.empty()) {
        std::cout << payload;
        return;
    }
    std::ofstream file(opts.output, std::ios::binary);
    if (!file) throw input_error(opts.output + ": cannot open for writing");
    file << payload;
    if (!file) throw input_error(opts.output + ": write failed");
}

Baseline baseline_from(const std::string& name) {
    if (name == "nonconcat") return Baseline::nonconcat;
    if (name == "nonsyst") return Baseline::nonsyst;
    if (name == "nonsyst-lenpres") return Baseline::nonsyst_lenpres;
    if (name == "class-shuffle") return Baseline::class_shuffle;
    throw input_error("unknown baseline '" + name + "'");
}

std::vector<Baseline> baselines_from(const std::vector<std::string>& names,
                                     std::vector<Baseline> defaults) {
    if (names.empty()) return defaults;
    std::vector<Baseline> out;
    out.reserve(names.size());
    for (const auto& name : names) out.push_back(baseline_from(name));
    return out;
}

}  // namespace

int run(int argc, const char* const* argv) {
    try {
        CLI::App app{"Exact excess entropy of finite meaning-to-string codes"};
        app.require_subcommand(1);

        auto* sim = app.add_subcommand("sim", "Source/code simulations");
        sim->require_subcommand(1);
        CommonOptions sys_opts;
        double sys_eps = 0.05;
        auto* sys_cmd = sim->add_subcommand("systematicity",
                                            "All bijections of three binary features");
        sys_cmd->add_option("--eps", sys_eps, "Feature probability stagger");
        add_common(sys_cmd, sys_opts);

        CommonOptions corr_opts;
        std::vector<double> corr_alphas;
        auto* corr_cmd = sim->add_subcommand("correlated",
                                             "Named code families under correlated features");
        corr_cmd->add_option("--alphas", corr_alphas, "Correlation mixture weights")
            ->delimiter(',');
        add_common(corr_cmd, corr_opts);

        CommonOptions loc_opts;
        auto* loc_cmd = sim->add_subcommand("locality",
                                            "All position permutations of a two-word code");
        add_common(loc_cmd, loc_opts);

        CommonOptions hier_opts;
        double hier_alpha = 0.01, hier_beta = 0.20, hier_gamma = 0.99;
        auto* hier_cmd = sim->add_subcommand("hierarchy",
                                             "All position permutations of six nested features");
        hier_cmd->add_option("--alpha", hier_alpha, "Cross-half coupling");
        hier_cmd->add_option("--beta", hier_beta, "Within-half coupling");
        hier_cmd->add_option("--gamma", hier_gamma, "Pair coupling");
        add_common(hier_cmd, hier_opts);

        auto* sweep = app.add_subcommand("sweep", "Grid sweeps");
        sweep->require_subcommand(1);
        CommonOptions two_opts;
        std::vector<double> two_marginals = {0.5, 0.6, 0.7, 0.8, 0.9};
        std::vector<double> two_correlations = {-1, -0.75, -0.5, -0.25, 0, 0.25, 0.5, 0.75, 1};
        auto* two_cmd = sweep->add_subcommand("two-feature",
                                              "All 24 length-2 codes over a source grid");
        two_cmd->add_option("--marginals", two_marginals, "Marginal probabilities")
            ->delimiter(',');
        two_cmd->add_option("--correlations", two_correlations, "Pearson correlations")
            ->delimiter(',');
        add_common(two_cmd, two_opts);

        auto* analyze = app.add_subcommand("analyze", "Corpus analyses");
        analyze->require_subcommand(1);

        CommonOptions phon_opts;
        std::vector<std::string> phon_inputs;
        std::string phon_classes;
        bool phon_whitespace = false;
        std::vector<std::string> phon_baselines;
        auto* phon_cmd = analyze->add_subcommand("phonotactics", "Wordlist excess entropy");
        phon_cmd->add_option("--input", phon_inputs, "Wordlist TSV file(s)")->required();
        phon_cmd->add_option("--classes", phon_classes, "token<TAB>class map file");
        phon_cmd->add_flag("--whitespace-tokens", phon_whitespace,
                           "Split forms on whitespace instead of codepoints");
        phon_cmd->add_option("--baseline", phon_baselines, "Baselines to compute")
            ->check(CLI::IsMember({"nonconcat", "class-shuffle"}));
        add_common(phon_cmd, phon_opts);

        CommonOptions morph_opts;
        std::string morph_input;
        double morph_smoothing = 0.5;
        std::uint64_t morph_samples = 1000;
        std::vector<std::string> morph_baselines;
        auto* morph_cmd = analyze->add_subcommand("morphology", "Paradigm excess entropy");
        morph_cmd->add_option("--input", morph_input, "Paradigm TSV file")->required();
        morph_cmd->add_option("--smoothing", morph_smoothing, "Additive smoothing");
        morph_cmd->add_option("--samples", morph_samples, "Assignment-shuffle sample count");
        morph_cmd->add_option("--baseline", morph_baselines, "Baselines to compute")
            ->check(CLI::IsMember({"nonconcat", "nonsyst", "nonsyst-lenpres"}));
        add_common(morph_cmd, morph_opts);

        CommonOptions adj_opts;
        std::string adj_input;
        std::uint64_t adj_samples = 1000;
        std::vector<std::string> adj_baselines;
        auto* adj_cmd = analyze->add_subcommand("adjnoun", "Adjacent adjective-noun pairs");
        adj_cmd->add_option("--input", adj_input, "CoNLL-U file or pair-counts TSV")->required();
        adj_cmd->add_option("--samples", adj_samples, "Assignment-shuffle sample count");
        adj_cmd->add_option("--baseline", adj_baselines, "Baselines to compute")
            ->check(CLI::IsMember({"nonconcat", "nonsyst", "nonsyst-lenpres"}));
        add_common(adj_cmd, adj_opts);

        CommonOptions np_opts;
        std::string np_input, np_genera;
        auto* np_cmd = analyze->add_subcommand("np-order", "Noun phrase order sweep");
        np_cmd->add_option("--input", np_input, "CoNLL-U file")->required();
        np_cmd->add_option("--genera", np_genera, "order<TAB>genera counts file");
        add_common(np_cmd, np_opts);

        CommonOptions sem_opts;
        std::string sem_norms, sem_freqs, sem_pairs;
        auto* sem_cmd = analyze->add_subcommand("semantics", "Pairwise feature MI");
        sem_cmd->add_option("--norms", sem_norms, "word x feature norms TSV")->required();
        sem_cmd->add_option("--freqs", sem_freqs, "Lemma frequency wordlist");
        sem_cmd->add_option("--pairs", sem_pairs, "CoNLL-U file or pair-counts TSV");
        add_common(sem_cmd, sem_opts);

        try {
            app.parse(argc, argv);
        } catch (const CLI::ParseError& e) {
            return app.exit(e) == 0 ? 0 : 2;
        }

        if (sys_cmd->parsed()) {
            emit(table_systematicity(run_systematicity(sys_eps, to_config(sys_opts))), sys_opts);
        } else if (corr_cmd->parsed()) {
            if (corr_alphas.empty())
                for (int i = 0; i <= 20; ++i) corr_alphas.push_back(i * 0.05);
            emit(table_correlated(run_correlated(corr_alphas, to_config(corr_opts))), corr_opts);
        } else if (loc_cmd->parsed()) {
            emit(table_permutations(run_locality(to_config(loc_opts)), "is_contiguous",
                                    "contiguous_count"),
                 loc_opts);
        } else if (hier_cmd->parsed()) {
            emit(table_permutations(
                     run_hierarchy(hier_alpha, hier_beta, hier_gamma, to_config(hier_opts)),
                     "is_well_nested", "well_nested_count"),
                 hier_opts);
        } else if (two_cmd->parsed()) {
            const auto rows =
                run_two_feature(two_marginals, two_correlations, to_config(two_opts));
            auto table = table_two_feature(rows);
            const std::size_t cells =
                two_marginals.size() * two_marginals.size() * two_correlations.size();
            table.footer.emplace_back("skipped_infeasible",
                                      std::to_string(cells - rows.size() / 24));
            emit(std::move(table), two_opts);
        } else if (phon_cmd->parsed()) {
            const auto baselines = baselines_from(
                phon_baselines, {Baseline::nonconcat, Baseline::class_shuffle});
            emit(table_phonotactics(run_phonotactics(phon_inputs, phon_classes, phon_whitespace,
                                                     baselines, to_config(phon_opts))),
                 phon_opts);
        } else if (morph_cmd->parsed()) {
            const auto baselines = baselines_from(
                morph_baselines,
                {Baseline::nonconcat, Baseline::nonsyst, Baseline::nonsyst_lenpres});
            emit(table_analysis(run_morphology(morph_input, morph_smoothing, baselines,
                                               morph_samples, to_config(morph_opts))),
                 morph_opts);
        } else if (adj_cmd->parsed()) {
            const auto baselines = baselines_from(
                adj_baselines, {Baseline::nonsyst, Baseline::nonsyst_lenpres});
            emit(table_analysis(
                     run_adjnoun(adj_input, baselines, adj_samples, to_config(adj_opts))),
                 adj_opts);
        } else if (np_cmd->parsed()) {
            emit(table_np_order(run_np_order(np_input, np_genera, to_config(np_opts))), np_opts);
        } else if (sem_cmd->parsed()) {
            emit(table_semantics(run_semantics(sem_norms, sem_freqs, sem_pairs,
                                               to_config(sem_opts))),
                 sem_opts);
        }
        return 0;
    } catch (const oracle_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const input_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace xentropy::cli
