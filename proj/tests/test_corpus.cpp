#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include "xentropy/core.hpp"
#include "xentropy/corpus.hpp"
#include "xentropy/infotheory.hpp"

using namespace xentropy;
using corpus::NounPhraseCounts;

namespace {

std::ifstream open_fixture(const std::string& name) {
    std::ifstream in(std::string(XENTROPY_FIXTURES) + "/" + name);
    REQUIRE(in.good());
    return in;
}

corpus::Wordlist fixture_wordlist(const std::string& name) {
    auto in = open_fixture(name);
    return corpus::parse_wordlist(in);
}

std::map<std::string, std::string> fixture_classes(const std::string& name) {
    auto in = open_fixture(name);
    return corpus::parse_token_classes(in);
}

std::vector<corpus::Sentence> fixture_conllu(const std::string& name) {
    auto in = open_fixture(name);
    return corpus::parse_conllu(in);
}

std::map<std::pair<std::string, std::string>, double> fixture_pairs(const std::string& name) {
    auto in = open_fixture(name);
    return corpus::parse_pair_counts(in);
}

corpus::ParadigmTable fixture_paradigm(const std::string& name) {
    auto in = open_fixture(name);
    return corpus::parse_paradigm(in);
}

corpus::NormsTable fixture_norms(const std::string& name) {
    auto in = open_fixture(name);
    return corpus::parse_norms(in);
}

bool mentions_line(const std::exception& e, const std::string& needle) {
    return std::string(e.what()).find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("wordlist parsing handles counts, classes and duplicates") {
    std::istringstream basic("# comment\nkata\n\npeti\t3\r\n");
    auto wl = corpus::parse_wordlist(basic);
    REQUIRE(wl.words.size() == 2);
    CHECK(wl.words[0].text == "kata");
    CHECK(wl.words[0].frequency == 1.0);
    CHECK(wl.words[0].tokens == std::vector<std::string>{"k", "a", "t", "a"});
    CHECK(wl.words[0].classes.empty());
    CHECK(wl.words[1].frequency == 3.0);

    // Second column: a number is a count, anything else is a class string.
    std::istringstream two_col("pa\t2.5\npi\tCV\nta\t4\tCV\n");
    wl = corpus::parse_wordlist(two_col);
    CHECK(wl.words[0].frequency == 2.5);
    CHECK(wl.words[1].classes == std::vector<std::string>{"C", "V"});
    CHECK(wl.words[2].frequency == 4.0);
    CHECK(wl.words[2].classes == std::vector<std::string>{"C", "V"});

    std::istringstream dup("pa\t2\npi\t1\npa\t3\tCV\n");
    wl = corpus::parse_wordlist(dup);
    REQUIRE(wl.words.size() == 2);
    CHECK(wl.words[0].text == "pa");
    CHECK(wl.words[0].frequency == 5.0);
    CHECK(wl.words[0].classes == std::vector<std::string>{"C", "V"});

    std::istringstream utf8("hajó\n");
    CHECK(corpus::parse_wordlist(utf8).words[0].tokens.size() == 4);

    std::istringstream segmented("p a t\t2\n");
    wl = corpus::parse_wordlist(segmented, true);
    CHECK(wl.words[0].tokens == std::vector<std::string>{"p", "a", "t"});

    std::istringstream conflict("pa\t1\tCV\npa\t1\tCC\n");
    CHECK_THROWS_AS(corpus::parse_wordlist(conflict), input_error);
    std::istringstream short_classes("pat\t1\tCV\n");
    CHECK_THROWS_AS(corpus::parse_wordlist(short_classes), input_error);
    std::istringstream wide("a\t1\tV\textra\n");
    CHECK_THROWS_AS(corpus::parse_wordlist(wide), input_error);
    std::istringstream negative("pa\t-1\n");
    CHECK_THROWS_AS(corpus::parse_wordlist(negative), input_error);
    std::istringstream bad_count("pa\tx\tCV\n");
    try {
        corpus::parse_wordlist(bad_count);
        FAIL("expected input_error");
    } catch (const input_error& e) {
        CHECK(mentions_line(e, "line 1"));
    }
}

TEST_CASE("token class maps fill in unannotated wordlists") {
    auto classes = fixture_classes("cv_classes.tsv");
    CHECK(classes.size() == 11);
    CHECK(classes.at("p") == "C");
    CHECK(classes.at("u") == "V");

    auto wl = fixture_wordlist("cv_lexicon.tsv");
    REQUIRE(wl.words.size() == 120);
    auto system = corpus::wordlist_system(wl, &classes);
    CHECK(system.has_classes);
    CHECK(system.class_names == std::vector<std::string>{"C", "V"});
    REQUIRE(system.classes.size() == 120);
    for (std::size_t i = 0; i < system.classes.size(); ++i)
        CHECK(system.classes[i].size() == system.language.forms[i].size());
    // kapate -> CVCVCV
    CHECK(system.classes[0] == std::vector<core::Symbol>{0, 1, 0, 1, 0, 1});

    double total = 0;
    for (double p : system.source.probabilities) total += p;
    CHECK(std::abs(total - 1.0) < 1e-12);

    auto incomplete = classes;
    incomplete.erase("k");
    CHECK_THROWS_AS(corpus::wordlist_system(wl, &incomplete), input_error);

    auto plain = corpus::wordlist_system(wl, nullptr);
    CHECK(!plain.has_classes);

    // Inline classes on some words but not all is an annotation error.
    std::istringstream partial("pa\t1\tCV\nti\t1\n");
    CHECK_THROWS_AS(corpus::wordlist_system(corpus::parse_wordlist(partial), nullptr),
                    input_error);
}

TEST_CASE("conllu parsing skips ranges and reports malformed lines") {
    auto sentences = fixture_conllu("np_german.conllu");
    REQUIRE(sentences.size() == 25);
    CHECK(sentences[0].size() == 5);
    // f3 lists a multiword range "6-7" that must not become a token.
    CHECK(sentences[2].size() == 9);
    for (const auto& token : sentences[2]) CHECK(token.id >= 1);
    CHECK(sentences[0][0].feats.at("Case") == "Nom");
    CHECK(sentences[0][0].feats.at("Gender") == "Masc");
    CHECK(sentences[0][3].feats.empty());
    CHECK(sentences[0][2].head == 4);
    CHECK(sentences[0][2].deprel == "nsubj");

    std::istringstream empty_node(
        "1\tx\tx\tNOUN\t_\t_\t0\troot\t_\t_\n"
        "1.1\ty\ty\tNOUN\t_\t_\t1\tobj\t_\t_\n");
    CHECK(corpus::parse_conllu(empty_node)[0].size() == 1);

    std::istringstream short_line("1\tonly\tthree\n");
    try {
        corpus::parse_conllu(short_line);
        FAIL("expected input_error");
    } catch (const input_error& e) {
        CHECK(mentions_line(e, "line 1"));
    }
    std::istringstream bad_id("x\ta\ta\tNOUN\t_\t_\t0\troot\t_\t_\n");
    CHECK_THROWS_AS(corpus::parse_conllu(bad_id), input_error);
    std::istringstream bad_feats(
        "1\ta\ta\tNOUN\t_\tCase\t0\troot\t_\t_\n");
    try {
        corpus::parse_conllu(bad_feats);
        FAIL("expected input_error");
    } catch (const input_error& e) {
        CHECK(mentions_line(e, "line 1"));
    }
}

TEST_CASE("noun phrase extraction produces one tuple per noun head") {
    auto sentences = fixture_conllu("np_german.conllu");
    auto np = corpus::extract_noun_phrases(sentences, 0);

    double total = 0;
    for (const auto& [key, count] : np.counts) total += count;
    CHECK(total == 28.0);
    CHECK(np.counts.size() == 27);
    CHECK(np.multiple_det == 1);
    CHECK(np.multiple_num == 0);

    using Key = std::array<std::string, 4>;
    CHECK(np.counts.at(Key{"der", "", "", "wagen"}) == 2.0);
    CHECK(np.counts.at(Key{"der", "drei", "alt", "haus"}) == 1.0);
    CHECK(np.counts.at(Key{"der", "", "", "hang"}) == 1.0);
    CHECK(np.counts.at(Key{"", "", "", "katze"}) == 1.0);
    // Leftmost of the two determiners of "Kinder" wins.
    CHECK(np.counts.at(Key{"all", "", "", "kind"}) == 1.0);
    // det:poss reduces to det.
    CHECK(np.counts.at(Key{"sein", "zwei", "", "hund"}) == 1.0);
    // "gebraucht" is tagged VERB, so its amod edge is not an adjective slot.
    CHECK(np.counts.find(Key{"der", "", "gebraucht", "wagen"}) == np.counts.end());

    // Two adjectives on one head: the seeded choice picks exactly one, and the
    // whole extraction is reproducible.
    const double gross = np.counts.count(Key{"der", "", "gross", "baum"})
                             ? np.counts.at(Key{"der", "", "gross", "baum"})
                             : 0.0;
    const double alt = np.counts.count(Key{"der", "", "alt", "baum"})
                           ? np.counts.at(Key{"der", "", "alt", "baum"})
                           : 0.0;
    CHECK(gross + alt == 1.0);
    auto again = corpus::extract_noun_phrases(sentences, 0);
    CHECK(again.counts == np.counts);
}

TEST_CASE("np order sweep covers all slot orders with reversal symmetry") {
    auto sentences = fixture_conllu("np_german.conllu");
    auto np = corpus::extract_noun_phrases(sentences, 0);
    auto rows = corpus::np_order_sweep(np, true);
    REQUIRE(rows.size() == 24);
    for (std::size_t i = 1; i < rows.size(); ++i)
        CHECK(rows[i - 1].excess_entropy <= rows[i].excess_entropy + 1e-15);

    std::map<std::string, double> by_order;
    for (const auto& row : rows) by_order[row.order] = row.excess_entropy;
    REQUIRE(by_order.size() == 24);
    for (const auto& [order, e] : by_order) {
        CHECK(e >= -1e-12);
        std::string reversed;
        for (auto it = order.rbegin(); it != order.rend(); ++it)
            if (*it != '-') reversed += (reversed.empty() ? "" : "-"), reversed += *it;
        CHECK(std::abs(by_order.at(reversed) - e) <= 1e-9);
    }

    NounPhraseCounts empty;
    CHECK_THROWS_AS(corpus::np_order_sweep(empty), input_error);
}

TEST_CASE("pair count tables and treebank pair extraction") {
    auto pairs = fixture_pairs("adjnoun_pairs.tsv");
    CHECK(pairs.size() == 10);
    CHECK(pairs.at({"big", "dog"}) == 120.0);
    CHECK(pairs.at({"young", "hen"}) == 10.0);

    std::istringstream bad("big\tdog\n");
    CHECK_THROWS_AS(corpus::parse_pair_counts(bad), input_error);

    auto sentences = fixture_conllu("verbobj.conllu");
    auto vo = corpus::extract_verb_object_pairs(sentences);
    REQUIRE(vo.size() == 5);
    CHECK(vo.at({"chase", "cat"}) == 2.0);
    CHECK(vo.at({"eat", "apple"}) == 1.0);
    CHECK(vo.at({"make", "dinner"}) == 2.0);  // "Dinner" folds to "dinner"
    CHECK(vo.at({"give", "bone"}) == 1.0);    // iobj "dog" is not an object
    CHECK(vo.at({"take", "nap"}) == 1.0);     // obj:lvc reduces to obj

    auto an = corpus::extract_adjective_noun_pairs(fixture_conllu("adjnoun.conllu"));
    REQUIRE(an.size() == 7);
    CHECK(an.at("big dog") == 2.0);
    CHECK(an.at("small cat") == 1.0);
    CHECK(an.at("red dog") == 1.0);
    CHECK(an.at("casa blanca") == 1.0);  // noun-adjective order is kept
    CHECK(an.at("Old houses") == 1.0);   // wordforms, not lemmas
    CHECK(an.at("red hen") == 1.0);
    CHECK(an.at("old dog") == 1.0);
}

TEST_CASE("paradigm tables parse and smooth into sources") {
    auto table = fixture_paradigm("hungarian.tsv");
    CHECK(table.feature_names == std::vector<std::string>{"number", "case"});
    REQUIRE(table.bundles.size() == 8);
    CHECK(table.bundles[0] == std::vector<std::string>{"sg", "nom"});
    CHECK(table.forms[0] == "ember");
    CHECK(table.counts[0] == 750.0);

    auto table3 = fixture_paradigm("hungarian3.tsv");
    CHECK(table3.feature_names == std::vector<std::string>{"lexeme", "number", "case"});
    CHECK(table3.bundles.size() == 24);

    auto src = corpus::paradigm_source(table, 0.5);
    REQUIRE(src.source.probabilities.size() == 8);
    CHECK(std::abs(src.source.probabilities[0] - 750.5 / 1369.0) <= 1e-15);
    CHECK(core::form_text(src.language.alphabet, src.language.forms[0]) == "ember");
    CHECK(src.bundles == table.bundles);

    auto raw = corpus::paradigm_source(table, 0.0);
    CHECK(std::abs(raw.source.probabilities[0] - 750.0 / 1365.0) <= 1e-15);

    auto arabic = corpus::paradigm_source(fixture_paradigm("arabic.tsv"));
    REQUIRE(arabic.language.forms.size() == 6);
    // ʔaqlāmun: eight codepoints, two of them beyond ASCII.
    CHECK(arabic.language.forms[3].size() == 8);
    CHECK(core::form_text(arabic.language.alphabet, arabic.language.forms[3]) ==
          "\xca\x94" "aql\xc4\x81mun");

    std::istringstream dup_bundle(
        "number\tform\tcount\nsg\tx\t1\nsg\ty\t2\n");
    CHECK_THROWS_AS(corpus::parse_paradigm(dup_bundle), input_error);
    std::istringstream bad_header("number\tform\tfreq\nsg\tx\t1\n");
    CHECK_THROWS_AS(corpus::parse_paradigm(bad_header), input_error);
}

TEST_CASE("semantic norms binarize against feature means") {
    auto norms = fixture_norms("norms.tsv");
    CHECK(norms.words.size() == 16);
    CHECK(norms.features ==
          std::vector<std::string>{"concreteness", "valence", "arousal", "number"});
    CHECK(norms.values[0] == std::vector<double>{4.8, 3.9, 3.1, 0.0});

    std::istringstream dup("word\tf\na\t1\na\t2\n");
    CHECK_THROWS_AS(corpus::parse_norms(dup), input_error);
    std::istringstream bad_cell("word\tf\na\tx\n");
    CHECK_THROWS_AS(corpus::parse_norms(bad_cell), input_error);

    auto fm = corpus::binarize_norms(norms);
    REQUIRE(fm.values.size() == 16);
    CHECK(fm.weights.size() == 16);
    for (double w : fm.weights) CHECK(std::abs(w - 1.0 / 16.0) <= 1e-15);

    // number: mean 0.125, so only the two plural rows exceed it.
    std::size_t plural = 0;
    for (std::size_t i = 0; i < fm.values.size(); ++i) plural += fm.values[i][3];
    CHECK(plural == 2);
    CHECK(fm.values[14][3] == 1);  // cats
    CHECK(fm.values[15][3] == 1);  // dogs

    // concreteness: mean 3.5875 splits the rows 8/8.
    std::size_t concrete = 0;
    for (std::size_t i = 0; i < fm.values.size(); ++i) concrete += fm.values[i][0];
    CHECK(concrete == 8);
    CHECK(fm.values[0][0] == 1);  // dog 4.8
    CHECK(fm.values[6][0] == 0);  // idea 1.8
}

TEST_CASE("frequency weighting and feature mutual information") {
    auto fm = corpus::binarize_norms(fixture_norms("norms.tsv"));

    std::map<std::string, double> freqs;
    std::string word, count_text;
    auto in = open_fixture("lemma_freqs.tsv");
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line.front() == '#') continue;
        const auto tab = line.find('\t');
        freqs[line.substr(0, tab)] = std::stod(line.substr(tab + 1));
    }
    REQUIRE(freqs.size() == 17);

    auto weighted = corpus::apply_frequencies(fm, freqs);
    CHECK(std::abs(weighted.weights[0] - 620.0 / 4490.0) <= 1e-12);
    double total = 0;
    for (double w : weighted.weights) total += w;
    CHECK(std::abs(total - 1.0) <= 1e-12);

    auto only_dog = corpus::apply_frequencies(fm, {{"dog", 5.0}});
    CHECK(only_dog.weights[0] == 1.0);
    for (std::size_t i = 1; i < only_dog.weights.size(); ++i) CHECK(only_dog.weights[i] == 0.0);
    CHECK_THROWS_AS(corpus::apply_frequencies(fm, {{"zzz", 1.0}}), input_error);

    auto mi = corpus::pairwise_feature_mi(fm);
    REQUIRE(mi.size() == 4);
    for (std::size_t a = 0; a < 4; ++a)
        for (std::size_t b = 0; b < 4; ++b) CHECK(std::abs(mi[a][b] - mi[b][a]) <= 1e-12);
    CHECK(std::abs(mi[3][3] - infotheory::entropy({0.125, 0.875})) <= 1e-12);
    for (std::size_t a = 0; a < 4; ++a)
        for (std::size_t b = 0; b < 4; ++b) {
            CHECK(mi[a][b] >= -1e-12);
            if (a != b) CHECK(mi[a][b] <= std::min(mi[a][a], mi[b][b]) + 1e-12);
        }

    auto pairs = corpus::extract_verb_object_pairs(fixture_conllu("verbobj.conllu"));
    auto across = corpus::across_word_mi(fm, pairs);
    REQUIRE(across.size() == 4);
    REQUIRE(across[0].size() == 4);
    for (const auto& row : across)
        for (double v : row) CHECK(v >= -1e-12);

    // Pairs with a word outside the norms are dropped without effect.
    auto noisy = pairs;
    noisy[{"see", "unknownword"}] = 100.0;
    CHECK(corpus::across_word_mi(fm, noisy) == across);
    CHECK_THROWS_AS(corpus::across_word_mi(fm, {{{"zz", "qq"}, 1.0}}), input_error);
}
