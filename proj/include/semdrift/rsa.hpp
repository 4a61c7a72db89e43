#pragma once

#include "semdrift/aligner.hpp"
#include "semdrift/types.hpp"

#include <algorithm>
#include <cmath>
#include <iosfwd>
#include <numeric>
#include <string>
#include <vector>

namespace semdrift {

/// Pairwise cosine of the rows of `rows`. The result is exactly symmetric
/// (the upper triangle is mirrored) and the diagonal is exactly 1 for every
/// non-zero row.
template <typename Derived>
MatrixXd cosine_matrix(const Eigen::MatrixBase<Derived>& rows) {
  const MatrixXd x = rows.template cast<double>();
  const VectorXd norms = x.rowwise().norm();
  const MatrixXd gram = x * x.transpose();
  const Index n = x.rows();
  MatrixXd out(n, n);
  for (Index i = 0; i < n; ++i) {
    out(i, i) = norms[i] > 0.0 ? 1.0 : 0.0;
    for (Index j = i + 1; j < n; ++j) {
      const double denom = norms[i] * norms[j];
      const double c = denom > 0.0 ? std::clamp(gram(i, j) / denom, -1.0, 1.0) : 0.0;
      out(i, j) = c;
      out(j, i) = c;
    }
  }
  return out;
}

/// Ranks starting at 1; tied values share the mean of the ranks they span.
template <typename Derived>
VectorXd average_ranks(const Eigen::DenseBase<Derived>& values) {
  const Index n = values.size();
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return values(a) < values(b); });
  VectorXd ranks(n);
  for (Index start = 0; start < n;) {
    Index end = start + 1;
    while (end < n && values(order[end]) == values(order[start])) ++end;
    const double rank = 0.5 * static_cast<double>(start + end - 1) + 1.0;
    for (Index k = start; k < end; ++k) ranks[order[k]] = rank;
    start = end;
  }
  return ranks;
}

struct SpearmanResult {
  double rho = 0.0;
  /// Set when either input is constant; rho is then reported as 0.
  bool degenerate = false;
};

/// Spearman rank correlation: Pearson correlation of average ranks.
template <typename DerivedX, typename DerivedY>
SpearmanResult spearman(const Eigen::DenseBase<DerivedX>& x, const Eigen::DenseBase<DerivedY>& y);

// Non-template core so both Eigen expressions and plain vectors share one
// implementation.
SpearmanResult spearman_ranked(const Eigen::Ref<const VectorXd>& rank_x,
                               const Eigen::Ref<const VectorXd>& rank_y);

void check_spearman_lengths(Index nx, Index ny);

template <typename DerivedX, typename DerivedY>
SpearmanResult spearman(const Eigen::DenseBase<DerivedX>& x,
                        const Eigen::DenseBase<DerivedY>& y) {
  check_spearman_lengths(x.size(), y.size());
  return spearman_ranked(average_ranks(x), average_ranks(y));
}

struct RepresentationalSimilarityMatrix {
  LanguageId language;
  std::vector<std::string> concepts;
  MatrixXd values;
};
using Rsm = RepresentationalSimilarityMatrix;

Rsm build_rsm(const ConceptSet& set, const LanguageId& language);

struct RsaOptions {
  /// Keep the self-similarity entry in every similarity vector.
  bool include_self = true;
};

struct PairSimilarity {
  double value = 0.0;
  /// Rows whose Spearman value was degenerate (counted as 0 in the mean).
  std::size_t degenerate = 0;
};

/// Mean over concepts of the Spearman correlation between matching rows.
PairSimilarity language_pair_similarity(const Rsm& w, const Rsm& v, const RsaOptions& options = {});

/// Spearman correlation of row `i` of two RSMs, honouring `include_self`.
SpearmanResult row_similarity(const MatrixXd& w, const MatrixXd& v, Index i,
                              const RsaOptions& options = {});

struct LanguageSimilarityMatrix {
  std::vector<LanguageId> languages;
  MatrixXd values;
  std::size_t degenerate = 0;

  Index size() const noexcept { return values.rows(); }
};

LanguageSimilarityMatrix build_language_matrix(const ConceptSet& set,
                                               const RsaOptions& options = {});

/// Same, from precomputed RSMs sharing one concept order.
LanguageSimilarityMatrix build_language_matrix(const std::vector<Rsm>& rsms,
                                               const RsaOptions& options = {});

struct WordPairVariance {
  std::string a;
  std::string b;
  std::vector<double> cosines;  // one per language, in set order
  double variance = 0.0;
};

struct WordPairVarianceReport {
  std::vector<LanguageId> languages;
  std::vector<WordPairVariance> pairs;  // variance descending
};

/// Population variance across languages of every unordered concept pair's cosine.
WordPairVarianceReport word_pair_variance(const ConceptSet& set);

// Serialization. CSV matrices carry a header row and column of labels and
// use 9 significant digits.
void write_matrix_csv(std::ostream& out, const std::vector<std::string>& labels,
                      const MatrixXd& values);
void write_csv(std::ostream& out, const Rsm& rsm);
void write_csv(std::ostream& out, const LanguageSimilarityMatrix& matrix);
void write_csv(std::ostream& out, const WordPairVarianceReport& report);

/// Reads a labelled square matrix as written by write_matrix_csv. Lines
/// starting with '#' are ignored.
LanguageSimilarityMatrix read_language_matrix_csv(std::istream& in);

std::string format_number(double value);

}  // namespace semdrift
