#pragma once

#include "semdrift/types.hpp"

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace semdrift {

inline constexpr std::size_t kDefaultVocabCap = 200'000;

/// One language's vocabulary mapped to fixed-dimension vectors.
///
/// Rows are stored row-major so that a nearest-neighbour scan is a single
/// matrix-vector product. The space is immutable once constructed; the
/// constructor checks every invariant (finite entries, unique tokens and,
/// when `unit_normalized` is set, unit row norms within 1e-6).
template <typename Scalar>
class BasicEmbeddingSpace {
 public:
  using MatrixType = RowMatrix<Scalar>;
  using VectorType = Vector<Scalar>;

  BasicEmbeddingSpace() = default;
  BasicEmbeddingSpace(LanguageId language, std::vector<std::string> tokens, MatrixType matrix,
                      bool unit_normalized);

  const LanguageId& language() const noexcept { return language_; }
  Index dim() const noexcept { return matrix_.cols(); }
  Index size() const noexcept { return matrix_.rows(); }
  bool unit_normalized() const noexcept { return unit_normalized_; }

  const std::vector<std::string>& tokens() const noexcept { return tokens_; }
  const std::string& token(Index row) const { return tokens_.at(static_cast<std::size_t>(row)); }
  const MatrixType& matrix() const noexcept { return matrix_; }
  auto row(Index i) const { return matrix_.row(i); }

  /// Byte-exact token lookup; no case folding or Unicode normalization.
  std::optional<Index> index_of(std::string_view token) const;
  std::optional<VectorType> lookup(std::string_view token) const;

 private:
  LanguageId language_;
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, Index> index_;
  MatrixType matrix_;
  bool unit_normalized_ = false;
};

using EmbeddingSpace = BasicEmbeddingSpace<float>;
using EmbeddingSpaceD = BasicEmbeddingSpace<double>;

/// Returns a copy with every row scaled to unit L2 norm. A space already
/// flagged as normalized is returned unchanged. Zero rows are rejected.
template <typename Scalar>
BasicEmbeddingSpace<Scalar> normalized(const BasicEmbeddingSpace<Scalar>& space);

struct VecLoadOptions {
  std::size_t vocab_cap = kDefaultVocabCap;
  bool normalize = true;
  /// Aligned item files must not repeat ids; word spaces keep the first.
  bool reject_duplicates = false;
};

/// Reads the text `.vec` format: a "<count> <dim>" header, then one
/// "token v1 ... v_dim" line per row. LF and CRLF are both accepted.
/// Errors name the offending line number.
template <typename Scalar>
BasicEmbeddingSpace<Scalar> read_vec(std::istream& in, const LanguageId& language,
                                     const VecLoadOptions& options = {},
                                     const std::string& source_name = "<stream>");

template <typename Scalar>
BasicEmbeddingSpace<Scalar> load_vec_file(const std::filesystem::path& path,
                                          const LanguageId& language,
                                          const VecLoadOptions& options = {});

template <typename Scalar>
void write_vec(std::ostream& out, const BasicEmbeddingSpace<Scalar>& space);

template <typename Scalar>
void write_vec_file(const std::filesystem::path& path, const BasicEmbeddingSpace<Scalar>& space);

/// Item vectors aligned across languages: row r of every language matrix
/// belongs to item_ids[r].
struct AlignedItemSet {
  std::vector<std::string> item_ids;
  std::vector<LanguageId> languages;
  std::vector<MatrixXd> matrices;

  Index size() const noexcept { return static_cast<Index>(item_ids.size()); }
  Index dim() const noexcept { return matrices.empty() ? 0 : matrices.front().cols(); }
  std::optional<std::size_t> language_index(const LanguageId& language) const;
  const MatrixXd& matrix(const LanguageId& language) const;
};

/// Loads one `.vec`-style file per language. Item order follows the first
/// file; every other file must carry exactly the same id set.
AlignedItemSet load_aligned_items(
    const std::vector<std::pair<LanguageId, std::filesystem::path>>& paths);

/// Same as load_aligned_items but over already-parsed spaces.
AlignedItemSet align_items(const std::vector<EmbeddingSpaceD>& spaces);

enum class ManifestRole { WordSpace, AlignedItems };

struct ManifestEntry {
  LanguageId language;
  std::filesystem::path path;
  ManifestRole role = ManifestRole::WordSpace;
};

/// Workspace manifest: a JSON list of {language, path, role}. Relative
/// paths resolve against the manifest's directory.
struct Manifest {
  std::vector<ManifestEntry> entries;

  std::vector<ManifestEntry> with_role(ManifestRole role) const;
};

Manifest parse_manifest(std::string_view json_text, const std::filesystem::path& base_dir);
Manifest load_manifest(const std::filesystem::path& path);

}  // namespace semdrift
