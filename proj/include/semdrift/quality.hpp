#pragma once

#include "semdrift/aligner.hpp"
#include "semdrift/embedding.hpp"

#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace semdrift {

/// Ratcliff/Obershelp-style similarity 2*M/T on Unicode scalar values, where
/// M is the total size of the matching blocks found by recursive
/// longest-common-substring decomposition. The decomposition is evaluated
/// in both argument orders and the larger value kept, so the ratio is
/// symmetric. Two empty strings give 1.
double similarity_ratio(std::string_view a, std::string_view b);

struct BilingualDictionary {
  LanguageId source;
  LanguageId target;
  std::map<std::string, std::set<std::string>, std::less<>> entries;

  /// Unions the accepted translations of `other` (same language pair).
  void merge(const BilingualDictionary& other);
};

/// `source<TAB>target` per line; repeated sources accumulate.
BilingualDictionary read_dictionary_tsv(std::istream& in, LanguageId source, LanguageId target);
BilingualDictionary load_dictionary_tsv(const std::filesystem::path& path, LanguageId source,
                                        LanguageId target);

enum class MatchKind { Exact, Fuzzy, Loanword };

struct LanguageQuality {
  LanguageId language;
  std::size_t evaluated = 0;
  std::size_t matched = 0;
  double accuracy = 0.0;  // percent
  std::size_t exact = 0;
  std::size_t fuzzy = 0;
  std::size_t loanword = 0;
  /// Non-matches whose neighbour equals the concept after ASCII lowercasing.
  std::size_t identical_after_lowercasing = 0;
};

struct NearMiss {
  std::string term;
  LanguageId language;
  std::string neighbor;
  std::string closest_translation;
  double ratio = 0.0;
};

struct SkippedConcept {
  std::string term;
  LanguageId language;
  std::string reason;
};

struct QualityReport {
  std::string method;  // "dictionary" or "similarity-search"
  std::vector<LanguageQuality> languages;
  std::vector<SkippedConcept> skipped;
  std::vector<NearMiss> near_misses;
};

/// Checks each nearest-neighbour translation against the dictionaries. A
/// neighbour matches when it is an accepted translation (exact), has
/// similarity_ratio >= fuzzy_cutoff with one (fuzzy), or equals the anchor
/// concept itself (loanword). `languages` defaults to every non-anchor
/// language of the set; each needs at least one dictionary.
QualityReport word_quality(const ConceptSet& set, const std::vector<BilingualDictionary>& dicts,
                           double fuzzy_cutoff = 0.6, std::vector<LanguageId> languages = {});

/// Percentage of items whose nearest target row (by cosine, over the item
/// set) is their aligned counterpart.
QualityReport similarity_search_accuracy(const AlignedItemSet& items, const LanguageId& source,
                                         const LanguageId& target);

/// Languages as columns, one row per statistic.
void write_csv(std::ostream& out, const QualityReport& report);

}  // namespace semdrift
