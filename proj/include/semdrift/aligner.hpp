#pragma once

#include "semdrift/embedding.hpp"
#include "semdrift/types.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace semdrift {

struct Candidate {
  std::string token;
  Index row = -1;
  double cosine = 0.0;
};

/// Top-k nearest target tokens for one query, cosine descending.
struct TranslationCandidates {
  std::string query;
  LanguageId language;
  std::vector<Candidate> top_k;
};

/// Exhaustive exact cosine search over every row of `target`.
///
/// Ranking happens in the space's own scalar type (one matrix-vector
/// product); the reported cosines of the k winners are then recomputed in
/// double precision. Ties go to the earlier vocabulary row.
template <typename Scalar>
TranslationCandidates translate(const Eigen::Ref<const VectorXd>& source,
                                const BasicEmbeddingSpace<Scalar>& target, Index k = 1,
                                std::string query = {});

/// How one language realises every retained concept.
struct Resolution {
  LanguageId language;
  std::vector<std::string> tokens;
  MatrixXd vectors;  // N x dim, row i belongs to concept i
  VectorXd scores;   // cosine between the anchor vector and this row
};

struct DroppedConcept {
  std::string term;
  std::string reason;
};

/// Anchor concepts together with their vector in every analysed language.
/// Every resolution covers every retained concept.
struct ConceptSet {
  LanguageId anchor;
  std::vector<std::string> concepts;
  std::vector<Resolution> resolutions;
  std::vector<DroppedConcept> dropped;

  Index size() const noexcept { return static_cast<Index>(concepts.size()); }
  Index dim() const noexcept {
    return resolutions.empty() ? 0 : resolutions.front().vectors.cols();
  }
  std::vector<LanguageId> languages() const;
  bool has_language(const LanguageId& language) const noexcept;
  const Resolution& resolution(const LanguageId& language) const;
  std::optional<Index> concept_index(std::string_view term) const;
};

/// Starts a concept set from the anchor space. Concepts missing from the
/// anchor vocabulary are dropped with reason "anchor-oov"; duplicates in the
/// input list are dropped with reason "duplicate".
template <typename Scalar>
ConceptSet anchor_concept_set(std::span<const std::string> concepts,
                              const BasicEmbeddingSpace<Scalar>& anchor);

/// Resolves every concept of `set` in `target` by its nearest neighbour
/// and appends the resolution. Lets callers stream large target spaces one
/// at a time.
template <typename Scalar>
void add_language(ConceptSet& set, const BasicEmbeddingSpace<Scalar>& target);

template <typename Scalar>
ConceptSet build_concept_set(std::span<const std::string> concepts,
                             const BasicEmbeddingSpace<Scalar>& anchor,
                             std::span<const BasicEmbeddingSpace<Scalar>> targets);

/// Uses corpus alignment instead of nearest-neighbour search. The anchor
/// defaults to the first language of the set.
ConceptSet concept_set_from_aligned(const AlignedItemSet& items,
                                    std::optional<LanguageId> anchor = std::nullopt);

/// Keeps only the listed languages, in the given order.
ConceptSet restrict_languages(const ConceptSet& set, std::span<const LanguageId> languages);

/// One concept per line, blank lines and "#" comments ignored.
std::vector<std::string> read_concept_list(std::istream& in);
std::vector<std::string> load_concept_list(const std::filesystem::path& path);

}  // namespace semdrift
