#include "semdrift/aligner.hpp"

#include "semdrift/error.hpp"
#include "semdrift/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>

namespace semdrift {

std::vector<LanguageId> ConceptSet::languages() const {
  std::vector<LanguageId> out;
  out.reserve(resolutions.size());
  for (const auto& r : resolutions) out.push_back(r.language);
  return out;
}

bool ConceptSet::has_language(const LanguageId& language) const noexcept {
  return std::any_of(resolutions.begin(), resolutions.end(),
                     [&](const Resolution& r) { return r.language == language; });
}

const Resolution& ConceptSet::resolution(const LanguageId& language) const {
  for (const auto& r : resolutions) {
    if (r.language == language) return r;
  }
  throw ValidationError("language '" + language.code() + "' is not resolved in the concept set");
}

std::optional<Index> ConceptSet::concept_index(std::string_view term) const {
  auto it = std::find(concepts.begin(), concepts.end(), term);
  if (it == concepts.end()) return std::nullopt;
  return static_cast<Index>(it - concepts.begin());
}

namespace {

double clamp_cosine(double c) { return std::clamp(c, -1.0, 1.0); }

double cosine(const Eigen::Ref<const VectorXd>& a, const Eigen::Ref<const VectorXd>& b) {
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 || nb == 0.0) return 0.0;
  return clamp_cosine(a.dot(b) / (na * nb));
}

}  // namespace

template <typename Scalar>
TranslationCandidates translate(const Eigen::Ref<const VectorXd>& source,
                                const BasicEmbeddingSpace<Scalar>& target, Index k,
                                std::string query) {
  if (source.size() != target.dim()) {
    throw ValidationError("query has dimension " + std::to_string(source.size()) + ", space '" +
                          target.language().code() + "' has " + std::to_string(target.dim()));
  }
  if (k < 1) throw ValidationError("k must be positive");
  if (target.size() == 0) throw ValidationError("target space is empty");
  const double source_norm = source.norm();
  if (source_norm == 0.0) throw ValidationError("query vector has zero norm");

  const Vector<Scalar> q = (source / source_norm).template cast<Scalar>();
  Vector<Scalar> scores = target.matrix() * q;
  if (!target.unit_normalized()) {
    const Vector<Scalar> norms = target.matrix().rowwise().norm();
    for (Index i = 0; i < scores.size(); ++i) {
      scores[i] = norms[i] > Scalar(0) ? scores[i] / norms[i] : Scalar(0);
    }
  }

  k = std::min(k, target.size());
  std::vector<Index> winners;
  if (k == 1) {
    Index best = 0;
    for (Index i = 1; i < scores.size(); ++i) {
      if (scores[i] > scores[best]) best = i;
    }
    winners.push_back(best);
  } else {
    winners.resize(static_cast<std::size_t>(target.size()));
    std::iota(winners.begin(), winners.end(), Index{0});
    std::partial_sort(winners.begin(), winners.begin() + k, winners.end(),
                      [&](Index a, Index b) {
                        return scores[a] > scores[b] || (scores[a] == scores[b] && a < b);
                      });
    winners.resize(static_cast<std::size_t>(k));
  }

  TranslationCandidates out;
  out.query = std::move(query);
  out.language = target.language();
  out.top_k.reserve(winners.size());
  for (Index row : winners) {
    const VectorXd r = target.row(row).transpose().template cast<double>();
    out.top_k.push_back({target.token(row), row, cosine(source, r)});
  }
  std::stable_sort(out.top_k.begin(), out.top_k.end(), [](const Candidate& a, const Candidate& b) {
    return a.cosine > b.cosine || (a.cosine == b.cosine && a.row < b.row);
  });
  return out;
}

template <typename Scalar>
ConceptSet anchor_concept_set(std::span<const std::string> concepts,
                              const BasicEmbeddingSpace<Scalar>& anchor) {
  ConceptSet set;
  set.anchor = anchor.language();
  std::vector<Index> rows;
  std::set<std::string, std::less<>> seen;
  for (const auto& term : concepts) {
    if (!seen.insert(term).second) {
      set.dropped.push_back({term, "duplicate"});
      continue;
    }
    auto row = anchor.index_of(term);
    if (!row) {
      set.dropped.push_back({term, "anchor-oov"});
      continue;
    }
    set.concepts.push_back(term);
    rows.push_back(*row);
  }
  if (set.concepts.empty()) {
    throw ValidationError("no concept of the list is in the vocabulary of anchor '" +
                          anchor.language().code() + "'");
  }

  Resolution self;
  self.language = anchor.language();
  self.tokens = set.concepts;
  self.vectors.resize(set.size(), anchor.dim());
  for (Index i = 0; i < set.size(); ++i) {
    self.vectors.row(i) = anchor.row(rows[static_cast<std::size_t>(i)]).template cast<double>();
  }
  self.scores = VectorXd::Ones(set.size());
  set.resolutions.push_back(std::move(self));
  return set;
}

template <typename Scalar>
void add_language(ConceptSet& set, const BasicEmbeddingSpace<Scalar>& target) {
  if (set.has_language(target.language())) {
    throw ValidationError("language '" + target.language().code() + "' resolved twice");
  }
  const Resolution& anchor = set.resolution(set.anchor);
  if (target.dim() != anchor.vectors.cols()) {
    throw ValidationError("space '" + target.language().code() + "' has dimension " +
                          std::to_string(target.dim()) + ", anchor has " +
                          std::to_string(anchor.vectors.cols()));
  }

  Resolution res;
  res.language = target.language();
  res.tokens.resize(set.concepts.size());
  res.vectors.resize(set.size(), target.dim());
  res.scores.resize(set.size());
  parallel_for(set.concepts.size(), [&](std::size_t i) {
    const auto row = static_cast<Index>(i);
    auto found = translate(anchor.vectors.row(row).transpose(), target, 1, set.concepts[i]);
    const Candidate& best = found.top_k.front();
    res.tokens[i] = best.token;
    res.vectors.row(row) = target.row(best.row).template cast<double>();
    res.scores[row] = best.cosine;
  });
  set.resolutions.push_back(std::move(res));
}

template <typename Scalar>
ConceptSet build_concept_set(std::span<const std::string> concepts,
                             const BasicEmbeddingSpace<Scalar>& anchor,
                             std::span<const BasicEmbeddingSpace<Scalar>> targets) {
  ConceptSet set = anchor_concept_set(concepts, anchor);
  for (const auto& target : targets) {
    if (target.language() == anchor.language()) continue;
    add_language(set, target);
  }
  return set;
}

#define SEMDRIFT_INSTANTIATE(Scalar)                                                          \
  template TranslationCandidates translate(const Eigen::Ref<const VectorXd>&,                 \
                                           const BasicEmbeddingSpace<Scalar>&, Index,         \
                                           std::string);                                      \
  template ConceptSet anchor_concept_set(std::span<const std::string>,                        \
                                         const BasicEmbeddingSpace<Scalar>&);                 \
  template void add_language(ConceptSet&, const BasicEmbeddingSpace<Scalar>&);                \
  template ConceptSet build_concept_set(std::span<const std::string>,                         \
                                        const BasicEmbeddingSpace<Scalar>&,                   \
                                        std::span<const BasicEmbeddingSpace<Scalar>>);

SEMDRIFT_INSTANTIATE(float)
SEMDRIFT_INSTANTIATE(double)
#undef SEMDRIFT_INSTANTIATE

ConceptSet concept_set_from_aligned(const AlignedItemSet& items,
                                    std::optional<LanguageId> anchor) {
  if (items.languages.empty() || items.size() == 0) {
    throw ValidationError("aligned item set is empty");
  }
  const LanguageId anchor_id = anchor.value_or(items.languages.front());
  const MatrixXd& anchor_rows = items.matrix(anchor_id);

  ConceptSet set;
  set.anchor = anchor_id;
  set.concepts = items.item_ids;
  for (std::size_t l = 0; l < items.languages.size(); ++l) {
    Resolution res;
    res.language = items.languages[l];
    res.tokens = items.item_ids;
    res.vectors = items.matrices[l];
    res.scores.resize(items.size());
    for (Index i = 0; i < items.size(); ++i) {
      res.scores[i] = cosine(anchor_rows.row(i).transpose(), res.vectors.row(i).transpose());
    }
    set.resolutions.push_back(std::move(res));
  }
  return set;
}

ConceptSet restrict_languages(const ConceptSet& set, std::span<const LanguageId> languages) {
  ConceptSet out;
  out.anchor = set.anchor;
  out.concepts = set.concepts;
  out.dropped = set.dropped;
  for (const auto& language : languages) {
    if (out.has_language(language)) {
      throw ValidationError("language '" + language.code() + "' listed twice");
    }
    out.resolutions.push_back(set.resolution(language));
  }
  return out;
}

std::vector<std::string> read_concept_list(std::istream& in) {
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    out.push_back(line.substr(first, last - first + 1));
  }
  return out;
}

std::vector<std::string> load_concept_list(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open concept list " + path.string());
  return read_concept_list(in);
}

}  // namespace semdrift
