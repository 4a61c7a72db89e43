#pragma once

#include "semdrift/aligner.hpp"
#include "semdrift/rsa.hpp"

#include <array>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace semdrift {

/// Mutually exclusive language groups chosen from a research hypothesis.
struct ClusterPartition {
  std::vector<std::vector<LanguageId>> clusters;

  std::vector<LanguageId> members() const;
};

/// Parses a JSON list of lists of language codes.
ClusterPartition parse_partition(std::string_view json_text);

/// Throws ValidationError unless the partition has at least two non-empty,
/// disjoint clusters, at least one same-cluster pair, and every member is
/// resolved in `set`.
void validate_partition(const ClusterPartition& partition, const ConceptSet& set);

using LanguagePair = std::pair<LanguageId, LanguageId>;

struct DriftRecord {
  std::string term;
  std::vector<double> ics;  // one per intra-cluster pair, in report pair order
  std::vector<double> ccs;  // one per cross-cluster pair
  double ics_mean = 0.0;
  double ccs_mean = 0.0;
  double drift = 0.0;
  std::size_t degenerate = 0;
};

struct DriftReport {
  ClusterPartition partition;
  std::vector<LanguagePair> intra_pairs;
  std::vector<LanguagePair> cross_pairs;
  std::vector<DriftRecord> records;  // drift descending, ties by term
  std::size_t degenerate = 0;
};

/// Semantic drift of every concept: mean intra-cluster minus mean
/// cross-cluster Spearman correlation of its similarity vectors.
/// Pairs are unordered and never pair a language with itself.
DriftReport compute_drift(const ConceptSet& set, const ClusterPartition& partition,
                          const RsaOptions& options = {});

struct Neighbor {
  std::string term;
  double cosine = 0.0;
};

/// The k concepts (excluding `term`) with highest cosine to `term` in the
/// language's resolution. Ties keep list order.
std::vector<Neighbor> nearest_in_list(const ConceptSet& set, const LanguageId& language,
                                      std::string_view term, Index k);

struct ProjectedPoint {
  LanguageId language;
  std::string term;
  std::string focus;  // focus concept this point belongs to
  double x = 0.0;
  double y = 0.0;
};

struct Projection2D {
  std::vector<ProjectedPoint> points;
  std::array<double, 2> explained_ratio{};
};

/// Fits a 2-component PCA on every resolved concept vector of `languages`
/// and projects each focus concept plus its `neighbors` nearest in-list
/// concepts, per language.
Projection2D project_concepts(const ConceptSet& set, const std::vector<LanguageId>& languages,
                              const std::vector<std::string>& focus, Index neighbors = 5);

void write_csv(std::ostream& out, const DriftReport& report);
void write_csv(std::ostream& out, const Projection2D& projection);

}  // namespace semdrift
