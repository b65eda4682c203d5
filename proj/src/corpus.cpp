#include "xentropy/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <set>
#include <sstream>

#include "xentropy/codes.hpp"
#include "xentropy/entropy.hpp"
#include "xentropy/infotheory.hpp"
#include "xentropy/numeric.hpp"

namespace xentropy::corpus {

namespace {

[[noreturn]] void line_error(std::size_t line, const std::string& message) {
    throw input_error("line " + std::to_string(line) + ": " + message);
}

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> cols;
    std::size_t start = 0;
    while (true) {
        const std::size_t tab = line.find('\t', start);
        if (tab == std::string::npos) {
            cols.push_back(line.substr(start));
            return cols;
        }
        cols.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
}

std::vector<std::string> split_whitespace(const std::string& text) {
    std::vector<std::string> tokens;
    std::istringstream in(text);
    std::string tok;
    while (in >> tok) tokens.push_back(tok);
    return tokens;
}

std::string strip_cr(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

bool parse_double(const std::string& text, double& out) {
    const char* begin = text.data();
    const char* end = begin + text.size();
    const auto result = std::from_chars(begin, end, out);
    return result.ec == std::errc{} && result.ptr == end && std::isfinite(out);
}

bool parse_int(const std::string& text, int& out) {
    const char* begin = text.data();
    const char* end = begin + text.size();
    const auto result = std::from_chars(begin, end, out);
    return result.ec == std::errc{} && result.ptr == end;
}

std::string fold_ascii(std::string text) {
    for (char& c : text)
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return text;
}

bool punctuation_only(const std::string& text) {
    if (text.empty()) return true;
    for (unsigned char c : text)
        if (c >= 0x80 || !std::ispunct(c)) return false;
    return true;
}

// An unusable lemma slot: missing annotation or pure punctuation.
bool absent_lemma(const std::string& lemma) {
    return lemma.empty() || lemma == "_" || punctuation_only(lemma);
}

std::string base_relation(const std::string& deprel) {
    const std::size_t colon = deprel.find(':');
    return colon == std::string::npos ? deprel : deprel.substr(0, colon);
}

std::map<std::string, std::string> parse_feats(const std::string& text, std::size_t line) {
    std::map<std::string, std::string> feats;
    if (text == "_" || text.empty()) return feats;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t bar = text.find('|', start);
        const std::string item =
            text.substr(start, bar == std::string::npos ? std::string::npos : bar - start);
        const std::size_t eq = item.find('=');
        if (eq == std::string::npos || eq == 0) line_error(line, "malformed FEATS entry '" + item + "'");
        if (!feats.emplace(item.substr(0, eq), item.substr(eq + 1)).second)
            line_error(line, "duplicate FEATS key in '" + text + "'");
        if (bar == std::string::npos) break;
        start = bar + 1;
    }
    return feats;
}

core::Alphabet alphabet_from_tokens(const std::set<std::string>& tokens) {
    return core::Alphabet(std::vector<std::string>(tokens.begin(), tokens.end()));
}

std::vector<double> normalized(const std::vector<double>& masses, const char* what) {
    numeric::NeumaierSum total;
    for (double m : masses) {
        if (!(m >= 0) || !std::isfinite(m)) throw input_error(std::string(what) + ": negative mass");
        total.add(m);
    }
    if (!(total.value() > 0)) throw input_error(std::string(what) + ": zero total mass");
    std::vector<double> out(masses.size());
    for (std::size_t i = 0; i < masses.size(); ++i) out[i] = masses[i] / total.value();
    return out;
}

}  // namespace

Wordlist parse_wordlist(std::istream& stream, bool whitespace_tokens) {
    Wordlist out;
    std::map<std::vector<std::string>, std::size_t> index;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(stream, line)) {
        ++line_no;
        line = strip_cr(line);
        if (line.empty() || line.front() == '#') continue;
        const auto cols = split_tabs(line);
        if (cols.size() > 3) line_error(line_no, "expected at most 3 columns");
        if (cols.front().empty()) line_error(line_no, "empty form");

        double freq = 1;
        std::string class_text;
        if (cols.size() == 2) {
            if (!parse_double(cols[1], freq)) class_text = cols[1];
        } else if (cols.size() == 3) {
            if (!parse_double(cols[1], freq)) line_error(line_no, "malformed count '" + cols[1] + "'");
            class_text = cols[2];
        }
        if (!(freq >= 0)) line_error(line_no, "negative count");

        WordRecord record;
        record.text = cols.front();
        record.tokens =
            whitespace_tokens ? split_whitespace(cols.front()) : core::utf8_tokens(cols.front());
        if (record.tokens.empty()) line_error(line_no, "form has no tokens");
        record.frequency = freq;
        if (!class_text.empty()) {
            record.classes = core::utf8_tokens(class_text);
            if (record.classes.size() != record.tokens.size())
                line_error(line_no, "class string length != token count");
        }

        const auto [it, inserted] = index.emplace(record.tokens, out.words.size());
        if (inserted) {
            out.words.push_back(std::move(record));
        } else {
            WordRecord& prev = out.words[it->second];
            prev.frequency += record.frequency;
            if (prev.classes.empty())
                prev.classes = std::move(record.classes);
            else if (!record.classes.empty() && record.classes != prev.classes)
                line_error(line_no, "conflicting classes for duplicate form");
        }
    }
    return out;
}

std::map<std::string, std::string> parse_token_classes(std::istream& stream) {
    std::map<std::string, std::string> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(stream, line)) {
        ++line_no;
        line = strip_cr(line);
        if (line.empty() || line.front() == '#') continue;
        const auto cols = split_tabs(line);
        if (cols.size() != 2 || cols[0].empty() || cols[1].empty())
            line_error(line_no, "expected token<TAB>class");
        const auto [it, inserted] = out.emplace(cols[0], cols[1]);
        if (!inserted && it->second != cols[1])
            line_error(line_no, "conflicting class for token '" + cols[0] + "'");
    }
    return out;
}

WordlistSystem wordlist_system(const Wordlist& wordlist,
                               const std::map<std::string, std::string>* token_classes) {
    if (wordlist.words.empty()) throw input_error("wordlist: empty");

    std::set<std::string> token_set;
    for (const auto& word : wordlist.words) token_set.insert(word.tokens.begin(), word.tokens.end());
    core::Alphabet alphabet = alphabet_from_tokens(token_set);

    std::vector<core::Form> forms;
    std::vector<double> masses;
    forms.reserve(wordlist.words.size());
    for (const auto& word : wordlist.words) {
        forms.push_back(core::make_form(alphabet, word.tokens));
        masses.push_back(word.frequency);
    }

    std::vector<std::vector<std::string>> class_seqs(wordlist.words.size());
    std::size_t covered = 0;
    for (std::size_t i = 0; i < wordlist.words.size(); ++i) {
        const auto& word = wordlist.words[i];
        if (!word.classes.empty()) {
            class_seqs[i] = word.classes;
            ++covered;
        } else if (token_classes) {
            class_seqs[i].reserve(word.tokens.size());
            for (const auto& tok : word.tokens) {
                const auto it = token_classes->find(tok);
                if (it == token_classes->end())
                    throw input_error("wordlist: no class for token '" + tok + "'");
                class_seqs[i].push_back(it->second);
            }
            ++covered;
        }
    }
    if (covered != 0 && covered != wordlist.words.size())
        throw input_error("wordlist: class annotation covers only part of the words");

    WordlistSystem system{core::make_language(std::move(forms), std::move(alphabet)),
                          core::make_source(normalized(masses, "wordlist")),
                          covered == wordlist.words.size(),
                          {},
                          {}};
    if (system.has_classes) {
        std::set<std::string> class_set;
        for (const auto& seq : class_seqs) class_set.insert(seq.begin(), seq.end());
        system.class_names.assign(class_set.begin(), class_set.end());
        const auto class_id = [&](const std::string& name) {
            return static_cast<core::Symbol>(
                std::lower_bound(system.class_names.begin(), system.class_names.end(), name) -
                system.class_names.begin());
        };
        system.classes.resize(class_seqs.size());
        for (std::size_t i = 0; i < class_seqs.size(); ++i)
            for (const auto& name : class_seqs[i]) system.classes[i].push_back(class_id(name));
    }
    return system;
}

std::vector<Sentence> parse_conllu(std::istream& stream) {
    std::vector<Sentence> sentences;
    Sentence current;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(stream, line)) {
        ++line_no;
        line = strip_cr(line);
        if (line.empty()) {
            if (!current.empty()) sentences.push_back(std::move(current));
            current.clear();
            continue;
        }
        if (line.front() == '#') continue;
        const auto cols = split_tabs(line);
        if (cols.size() != 10) line_error(line_no, "expected 10 columns");
        if (cols[0].find('-') != std::string::npos) continue;  // multiword token range
        if (cols[0].find('.') != std::string::npos) continue;  // empty node

        TokenRecord token;
        if (!parse_int(cols[0], token.id) || token.id < 1)
            line_error(line_no, "malformed token id '" + cols[0] + "'");
        token.form = cols[1];
        token.lemma = cols[2];
        token.upos = cols[3];
        token.feats = parse_feats(cols[5], line_no);
        if (!parse_int(cols[6], token.head) || token.head < 0)
            line_error(line_no, "non-integer head '" + cols[6] + "'");
        token.deprel = cols[7];
        current.push_back(std::move(token));
    }
    if (!current.empty()) sentences.push_back(std::move(current));
    return sentences;
}

NounPhraseCounts extract_noun_phrases(const std::vector<Sentence>& sentences, std::uint64_t seed) {
    NounPhraseCounts out;
    for (std::size_t si = 0; si < sentences.size(); ++si) {
        const Sentence& sentence = sentences[si];
        for (const TokenRecord& noun : sentence) {
            if (noun.upos != "NOUN") continue;
            const std::string noun_lemma = fold_ascii(noun.lemma);
            if (absent_lemma(noun_lemma)) continue;

            std::vector<std::string> dets, nums, adjs;
            for (const TokenRecord& dep : sentence) {
                if (dep.head != noun.id) continue;
                const std::string relation = base_relation(dep.deprel);
                const std::string lemma = fold_ascii(dep.lemma);
                if (absent_lemma(lemma)) continue;
                if (relation == "det" && dep.upos == "DET") dets.push_back(lemma);
                else if (relation == "nummod" && dep.upos == "NUM") nums.push_back(lemma);
                else if (relation == "amod" && dep.upos == "ADJ") adjs.push_back(lemma);
            }
            if (dets.size() > 1) ++out.multiple_det;
            if (nums.size() > 1) ++out.multiple_num;

            std::string adj;
            if (adjs.size() == 1) {
                adj = adjs.front();
            } else if (adjs.size() > 1) {
                codes::SplitMix64 gen(codes::mix_key(codes::mix_key(seed, si),
                                                     static_cast<std::uint64_t>(noun.id)));
                adj = adjs[gen.below(adjs.size())];
            }
            out.counts[{dets.empty() ? "" : dets.front(), nums.empty() ? "" : nums.front(), adj,
                        noun_lemma}] += 1;
        }
    }
    return out;
}

std::vector<NpOrderRow> np_order_sweep(const NounPhraseCounts& counts, bool verify) {
    if (counts.counts.empty()) throw input_error("noun phrases: empty counts");

    std::set<std::string> vocab;
    std::vector<double> masses;
    for (const auto& [tuple, count] : counts.counts) {
        for (const auto& lemma : tuple)
            if (!lemma.empty()) vocab.insert(lemma);
        masses.push_back(count);
    }
    const core::Alphabet alphabet = alphabet_from_tokens(vocab);
    const std::vector<double> probs = normalized(masses, "noun phrases");

    std::vector<NpOrderRow> rows;
    std::array<std::size_t, 4> perm = {0, 1, 2, 3};
    do {
        std::vector<std::pair<core::Form, double>> entries;
        entries.reserve(counts.counts.size());
        std::size_t row = 0;
        for (const auto& [tuple, count] : counts.counts) {
            core::Form form;
            for (std::size_t slot : perm)
                if (!tuple[slot].empty()) form.push_back(alphabet.id(tuple[slot]));
            entries.emplace_back(std::move(form), probs[row++]);
        }
        std::string order;
        for (std::size_t slot : perm) {
            if (!order.empty()) order += '-';
            order += np_slot_names[slot];
        }
        auto fd = core::make_form_distribution(std::move(entries));
        rows.push_back({std::move(order), verify ? entropy::verified_excess_entropy(fd)
                                                 : entropy::excess_entropy(fd)});
    } while (std::next_permutation(perm.begin(), perm.end()));

    std::map<std::string, double> by_order;
    for (const auto& row : rows) by_order.emplace(row.order, row.excess_entropy);
    for (const auto& row : rows) {
        std::string reversed;
        for (auto it = row.order.rbegin(); it != row.order.rend(); ++it)
            if (*it != '-') {
                if (!reversed.empty()) reversed += '-';
                reversed += *it;
            }
        if (std::abs(by_order.at(reversed) - row.excess_entropy) > core::info_tolerance)
            throw oracle_error("noun phrase sweep: reversal symmetry violated for " + row.order);
    }

    std::sort(rows.begin(), rows.end(), [](const NpOrderRow& a, const NpOrderRow& b) {
        return a.excess_entropy != b.excess_entropy ? a.excess_entropy < b.excess_entropy
                                                    : a.order < b.order;
    });
    return rows;
}

std::map<std::pair<std::string, std::string>, double> parse_pair_counts(std::istream& stream) {
    std::map<std::pair<std::string, std::string>, double> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(stream, line)) {
        ++line_no;
        line = strip_cr(line);
        if (line.empty() || line.front() == '#') continue;
        const auto cols = split_tabs(line);
        double count = 0;
        if (cols.size() != 3 || cols[0].empty() || cols[1].empty())
            line_error(line_no, "expected word1<TAB>word2<TAB>count");
        if (!parse_double(cols[2], count) || count < 0)
            line_error(line_no, "malformed count '" + cols[2] + "'");
        out[{cols[0], cols[1]}] += count;
    }
    return out;
}

std::map<std::pair<std::string, std::string>, double> extract_verb_object_pairs(
    const std::vector<Sentence>& sentences) {
    std::map<std::pair<std::string, std::string>, double> out;
    for (const Sentence& sentence : sentences) {
        std::map<int, const TokenRecord*> by_id;
        for (const TokenRecord& token : sentence) by_id.emplace(token.id, &token);
        for (const TokenRecord& dep : sentence) {
            if (dep.upos != "NOUN" || base_relation(dep.deprel) != "obj") continue;
            const auto head = by_id.find(dep.head);
            if (head == by_id.end() || head->second->upos != "VERB") continue;
            const std::string verb = fold_ascii(head->second->lemma);
            const std::string object = fold_ascii(dep.lemma);
            if (absent_lemma(verb) || absent_lemma(object)) continue;
            out[{verb, object}] += 1;
        }
    }
    return out;
}

std::map<std::string, double> extract_adjective_noun_pairs(const std::vector<Sentence>& sentences) {
    std::map<std::string, double> out;
    for (const Sentence& sentence : sentences) {
        std::map<int, const TokenRecord*> by_id;
        for (const TokenRecord& token : sentence) by_id.emplace(token.id, &token);
        for (const TokenRecord& dep : sentence) {
            if (dep.upos != "ADJ" || base_relation(dep.deprel) != "amod") continue;
            const auto head = by_id.find(dep.head);
            if (head == by_id.end() || head->second->upos != "NOUN") continue;
            if (std::abs(head->second->id - dep.id) != 1) continue;
            const TokenRecord& first = dep.id < head->second->id ? dep : *head->second;
            const TokenRecord& second = dep.id < head->second->id ? *head->second : dep;
            if (first.form.empty() || first.form == "_" || second.form.empty() || second.form == "_")
                continue;
            out[first.form + " " + second.form] += 1;
        }
    }
    return out;
}

ParadigmTable parse_paradigm(std::istream& stream) {
    ParadigmTable table;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    std::size_t width = 0;
    std::set<std::vector<std::string>> bundles_seen;
    while (std::getline(stream, line)) {
        ++line_no;
        line = strip_cr(line);
        if (line.empty() || line.front() == '#') continue;
        const auto cols = split_tabs(line);
        if (!header_seen) {
            if (cols.size() < 3 || cols[cols.size() - 2] != "form" || cols.back() != "count")
                line_error(line_no, "header must be feat1..featK<TAB>form<TAB>count");
            table.feature_names.assign(cols.begin(), cols.end() - 2);
            width = cols.size();
            header_seen = true;
            continue;
        }
        if (cols.size() != width) line_error(line_no, "expected " + std::to_string(width) + " columns");
        std::vector<std::string> bundle(cols.begin(), cols.end() - 2);
        if (!bundles_seen.insert(bundle).second) line_error(line_no, "duplicate feature bundle");
        if (cols[cols.size() - 2].empty()) line_error(line_no, "empty form");
        double count = 0;
        if (!parse_double(cols.back(), count) || count < 0)
            line_error(line_no, "malformed count '" + cols.back() + "'");
        table.bundles.push_back(std::move(bundle));
        table.forms.push_back(cols[cols.size() - 2]);
        table.counts.push_back(count);
    }
    if (!header_seen) throw input_error("paradigm: missing header row");
    return table;
}

ParadigmSource paradigm_source(const ParadigmTable& table, double smoothing) {
    if (table.forms.empty()) throw input_error("paradigm: empty table");
    if (smoothing < 0) throw input_error("paradigm: negative smoothing");

    std::vector<double> masses(table.counts.size());
    for (std::size_t i = 0; i < masses.size(); ++i) masses[i] = table.counts[i] + smoothing;

    std::set<std::string> token_set;
    std::vector<std::vector<std::string>> token_rows;
    token_rows.reserve(table.forms.size());
    for (const auto& text : table.forms) {
        token_rows.push_back(core::utf8_tokens(text));
        token_set.insert(token_rows.back().begin(), token_rows.back().end());
    }
    core::Alphabet alphabet = alphabet_from_tokens(token_set);
    std::vector<core::Form> forms;
    forms.reserve(token_rows.size());
    for (const auto& tokens : token_rows) forms.push_back(core::make_form(alphabet, tokens));

    return ParadigmSource{core::make_source(normalized(masses, "paradigm")),
                          core::make_language(std::move(forms), std::move(alphabet)), table.bundles,
                          table.feature_names};
}

NormsTable parse_norms(std::istream& stream) {
    NormsTable table;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    std::set<std::string> words_seen;
    while (std::getline(stream, line)) {
        ++line_no;
        line = strip_cr(line);
        if (line.empty() || line.front() == '#') continue;
        const auto cols = split_tabs(line);
        if (!header_seen) {
            if (cols.size() < 2) line_error(line_no, "header must be word<TAB>feat1..featK");
            table.features.assign(cols.begin() + 1, cols.end());
            header_seen = true;
            continue;
        }
        if (cols.size() != table.features.size() + 1)
            line_error(line_no, "expected " + std::to_string(table.features.size() + 1) + " columns");
        if (cols.front().empty()) line_error(line_no, "empty word");
        if (!words_seen.insert(cols.front()).second)
            line_error(line_no, "duplicate word '" + cols.front() + "'");
        std::vector<double> row(table.features.size());
        for (std::size_t j = 0; j < row.size(); ++j)
            if (!parse_double(cols[j + 1], row[j]))
                line_error(line_no, "malformed value '" + cols[j + 1] + "'");
        table.words.push_back(cols.front());
        table.values.push_back(std::move(row));
    }
    if (!header_seen) throw input_error("norms: missing header row");
    return table;
}

FeatureMatrix binarize_norms(const NormsTable& norms, std::vector<double> weights) {
    if (norms.words.empty()) throw input_error("norms: empty table");
    if (weights.empty()) weights.assign(norms.words.size(), 1.0);
    if (weights.size() != norms.words.size())
        throw input_error("norms: weight count != word count");

    FeatureMatrix fm;
    fm.words = norms.words;
    fm.features = norms.features;
    fm.weights = normalized(weights, "norms weights");
    fm.values.resize(norms.words.size(), std::vector<std::uint8_t>(norms.features.size(), 0));
    for (std::size_t j = 0; j < norms.features.size(); ++j) {
        numeric::NeumaierSum sum;
        for (const auto& row : norms.values) sum.add(row[j]);
        const double mean = sum.value() / static_cast<double>(norms.words.size());
        for (std::size_t i = 0; i < norms.words.size(); ++i)
            fm.values[i][j] = norms.values[i][j] > mean ? 1 : 0;
    }
    return fm;
}

FeatureMatrix apply_frequencies(const FeatureMatrix& fm,
                                const std::map<std::string, double>& frequencies) {
    FeatureMatrix out = fm;
    for (std::size_t i = 0; i < out.words.size(); ++i) {
        const auto it = frequencies.find(out.words[i]);
        out.weights[i] = it == frequencies.end() ? 0 : it->second;
    }
    out.weights = normalized(out.weights, "feature matrix frequencies");
    return out;
}

std::vector<std::vector<double>> pairwise_feature_mi(const FeatureMatrix& fm) {
    const std::size_t k = fm.features.size();
    std::vector<std::vector<double>> matrix(k, std::vector<double>(k, 0.0));
    for (std::size_t a = 0; a < k; ++a) {
        numeric::NeumaierSum on;
        for (std::size_t w = 0; w < fm.words.size(); ++w)
            if (fm.values[w][a]) on.add(fm.weights[w]);
        const double p = on.value();
        matrix[a][a] = infotheory::entropy(std::vector<double>{1.0 - p, p});
        for (std::size_t b = a + 1; b < k; ++b) {
            std::array<numeric::NeumaierSum, 4> cells;
            for (std::size_t w = 0; w < fm.words.size(); ++w)
                cells[2 * fm.values[w][a] + fm.values[w][b]].add(fm.weights[w]);
            const infotheory::JointTable joint(
                {2, 2}, {cells[0].value(), cells[1].value(), cells[2].value(), cells[3].value()});
            matrix[a][b] = matrix[b][a] = infotheory::mutual_information(joint);
        }
    }
    return matrix;
}

std::vector<std::vector<double>> across_word_mi(
    const FeatureMatrix& fm, const std::map<std::pair<std::string, std::string>, double>& pairs) {
    std::map<std::string, std::size_t> row_of;
    for (std::size_t i = 0; i < fm.words.size(); ++i) row_of.emplace(fm.words[i], i);

    std::vector<std::pair<std::pair<std::size_t, std::size_t>, double>> usable;
    numeric::NeumaierSum total;
    for (const auto& [pair, count] : pairs) {
        const auto first = row_of.find(pair.first);
        const auto second = row_of.find(pair.second);
        if (first == row_of.end() || second == row_of.end()) continue;
        if (!(count >= 0)) throw input_error("across-word pairs: negative count");
        usable.push_back({{first->second, second->second}, count});
        total.add(count);
    }
    if (!(total.value() > 0)) throw input_error("across-word pairs: no pair has norms for both words");

    const std::size_t k = fm.features.size();
    std::vector<std::vector<double>> matrix(k, std::vector<double>(k, 0.0));
    for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = 0; b < k; ++b) {
            std::array<numeric::NeumaierSum, 4> cells;
            for (const auto& [rows, count] : usable)
                cells[2 * fm.values[rows.first][a] + fm.values[rows.second][b]].add(count /
                                                                                    total.value());
            const infotheory::JointTable joint(
                {2, 2}, {cells[0].value(), cells[1].value(), cells[2].value(), cells[3].value()});
            matrix[a][b] = infotheory::mutual_information(joint);
        }
    }
    return matrix;
}

}  // namespace xentropy::corpus
