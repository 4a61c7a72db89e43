#include "helpers.hpp"

#include "semdrift/error.hpp"
#include "semdrift/quality.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace semdrift;
using testing_helpers::gaussian;

namespace {

// Anchor "en" plus one target whose resolved tokens are `neighbours`.
ConceptSet resolved(const std::vector<std::string>& concepts, const std::string& target,
                    const std::vector<std::string>& neighbours) {
  const auto n = static_cast<Index>(concepts.size());
  ConceptSet set = testing_helpers::make_set({"en", target}, {MatrixXd::Identity(n, n), MatrixXd::Identity(n, n)},
                                             concepts);
  set.resolutions[1].tokens = neighbours;
  return set;
}

BilingualDictionary dict(const std::string& target, const std::string& tsv) {
  std::istringstream in(tsv);
  return read_dictionary_tsv(in, LanguageId("en"), LanguageId(target));
}

}  // namespace

// Reference values from a sequence matcher without junk heuristics.
TEST(SimilarityRatio, KnownValues) {
  EXPECT_EQ(similarity_ratio("abcd", "bcde"), 0.75);
  EXPECT_EQ(similarity_ratio("abc", "xyz"), 0.0);
  EXPECT_EQ(similarity_ratio("", ""), 1.0);
  EXPECT_EQ(similarity_ratio("same", "same"), 1.0);
  EXPECT_NEAR(similarity_ratio("pequeño", "pequeños"), 0.9333333333333333, 1e-15);
  EXPECT_NEAR(similarity_ratio("lächerlich", "albern"), 0.375, 1e-15);
  EXPECT_EQ(similarity_ratio("lächerlich", "dumm"), 0.0);
  EXPECT_NEAR(similarity_ratio("gauche", "gauches"), 0.9230769230769231, 1e-15);
  EXPECT_NEAR(similarity_ratio("qabxcd", "abycdf"), 0.6666666666666666, 1e-15);
  EXPECT_NEAR(similarity_ratio("небольшие", "небольшой"), 0.7777777777777778, 1e-15);
  EXPECT_NEAR(similarity_ratio("dolor", "dolores"), 0.8333333333333334, 1e-15);
}

TEST(SimilarityRatio, SymmetricWhereBlockSearchIsNot) {
  // The greedy block decomposition finds 2 matches one way and 3 the other.
  EXPECT_EQ(similarity_ratio("acbc", "bccabbcb"), similarity_ratio("bccabbcb", "acbc"));
  EXPECT_NEAR(similarity_ratio("acbc", "bccabbcb"), 0.5, 1e-15);
  EXPECT_NEAR(similarity_ratio("aaca", "cba"), 4.0 / 7.0, 1e-15);
  std::mt19937_64 gen(31);
  std::uniform_int_distribution<int> len(0, 8), ch(0, 2);
  for (int t = 0; t < 500; ++t) {
    std::string a, b;
    for (int i = len(gen); i > 0; --i) a += static_cast<char>('a' + ch(gen));
    for (int i = len(gen); i > 0; --i) b += static_cast<char>('a' + ch(gen));
    const double r = similarity_ratio(a, b);
    EXPECT_EQ(r, similarity_ratio(b, a));
    EXPECT_EQ(r == 1.0, a == b);
    EXPECT_GE(r, 0.0);
    EXPECT_LE(r, 1.0);
  }
}

TEST(Dictionary, ReadAndMerge) {
  auto d = dict("de", "dog\tHund\ndog\tRüde\r\n\ncat\tKatze\n");
  EXPECT_EQ(d.entries.at("dog").size(), 2u);
  d.merge(dict("de", "cat\tKater\n"));
  EXPECT_EQ(d.entries.at("cat").size(), 2u);
  EXPECT_THROW(d.merge(dict("fr", "cat\tchat\n")), ValidationError);
  EXPECT_THROW(dict("de", "dog Hund\n"), ValidationError);
}

TEST(WordQuality, MatchKinds) {
  const auto set = resolved({"small", "silly", "taxi", "dog", "cat", "unknown"}, "de",
                            {"klein", "lächerlich", "taxi", "Hunde", "Cat", "x"});
  const auto d = dict("de", "small\tklein\nsilly\talbern\nsilly\tdumm\ntaxi\tTaxi\ndog\tHund\ncat\tKatze\n");
  const auto report = word_quality(set, {d});
  ASSERT_EQ(report.languages.size(), 1u);
  const auto& q = report.languages[0];
  EXPECT_EQ(q.evaluated, 5u);
  EXPECT_EQ(q.exact, 1u);     // klein
  EXPECT_EQ(q.fuzzy, 2u);     // Hunde ~ Hund, taxi ~ Taxi
  EXPECT_EQ(q.loanword, 0u);
  EXPECT_EQ(q.matched, 3u);
  EXPECT_DOUBLE_EQ(q.accuracy, 60.0);
  EXPECT_EQ(q.identical_after_lowercasing, 1u);  // Cat vs cat
  ASSERT_EQ(report.skipped.size(), 1u);
  EXPECT_EQ(report.skipped[0].term, "unknown");

  bool silly_recorded = false;
  for (const auto& m : report.near_misses) {
    if (m.term == "silly") {
      silly_recorded = true;
      EXPECT_EQ(m.neighbor, "lächerlich");
      EXPECT_EQ(m.closest_translation, "albern");
      EXPECT_NEAR(m.ratio, 0.375, 1e-15);
    }
  }
  EXPECT_TRUE(silly_recorded);
}

TEST(WordQuality, LoanwordIdentity) {
  const auto set = resolved({"sushi"}, "fi", {"sushi"});
  const auto report = word_quality(set, {dict("fi", "sushi\txyzw\n")});
  EXPECT_EQ(report.languages[0].loanword, 1u);
  EXPECT_EQ(report.languages[0].accuracy, 100.0);
}

TEST(WordQuality, FuzzyCutoffMonotone) {
  const auto set = resolved({"small", "big", "house"}, "es", {"pequeños", "grandes", "casita"});
  const auto d = dict("es", "small\tpequeño\nbig\tgrande\nhouse\tcasa\n");
  double previous = -1.0;
  for (double cutoff : {1.0, 0.95, 0.9, 0.8, 0.6, 0.3}) {
    const double acc = word_quality(set, {d}, cutoff).languages[0].accuracy;
    EXPECT_GE(acc, previous);
    previous = acc;
  }
  EXPECT_EQ(word_quality(set, {d}, 0.6).languages[0].fuzzy, 3u);
}

TEST(WordQuality, Errors) {
  const auto set = resolved({"small"}, "es", {"pequeño"});
  EXPECT_THROW(word_quality(set, {}), ValidationError);
  EXPECT_THROW(word_quality(set, {dict("es", "small\tpequeño\n")}, 0.0), ValidationError);
}

TEST(SimilaritySearch, IdenticalAndSwapped) {
  std::mt19937_64 gen(32);
  const MatrixXd m = gaussian(10, 6, gen);
  AlignedItemSet items;
  for (int i = 0; i < 10; ++i) items.item_ids.push_back("s" + std::to_string(i));
  items.languages = {LanguageId("en"), LanguageId("de"), LanguageId("fr")};
  MatrixXd swapped = m;
  swapped.row(2).swap(swapped.row(7));
  items.matrices = {m, m, swapped};

  EXPECT_EQ(similarity_search_accuracy(items, LanguageId("en"), LanguageId("de")).languages[0].accuracy, 100.0);
  const auto r = similarity_search_accuracy(items, LanguageId("en"), LanguageId("fr"));
  EXPECT_EQ(r.languages[0].matched, 8u);
  EXPECT_EQ(r.languages[0].accuracy, 80.0);
  EXPECT_THROW(similarity_search_accuracy(items, LanguageId("en"), LanguageId("xx")), ValidationError);
}

TEST(QualityCsv, LanguagesAsColumns) {
  const auto set = resolved({"small"}, "es", {"pequeño"});
  std::ostringstream out;
  write_csv(out, word_quality(set, {dict("es", "small\tpequeño\n")}));
  EXPECT_EQ(out.str().rfind("metric,es\naccuracy,100\n", 0), 0u);
}
