#include "semdrift/embedding.hpp"

#include "semdrift/error.hpp"

#include <json.hpp>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace semdrift {

LanguageId::LanguageId(std::string code) : code_(std::move(code)) {
  if (code_.empty()) throw ValidationError("language code must not be empty");
  for (char c : code_) {
    if (!((c >= 'a' && c <= 'z') || c == '-' || c == '_' || (c >= '0' && c <= '9'))) {
      throw ValidationError("language code '" + code_ + "' must be lowercase");
    }
  }
}

template <typename Scalar>
BasicEmbeddingSpace<Scalar>::BasicEmbeddingSpace(LanguageId language,
                                                 std::vector<std::string> tokens,
                                                 MatrixType matrix, bool unit_normalized)
    : language_(std::move(language)),
      tokens_(std::move(tokens)),
      matrix_(std::move(matrix)),
      unit_normalized_(unit_normalized) {
  if (static_cast<Index>(tokens_.size()) != matrix_.rows()) {
    throw ValidationError("token count does not match matrix rows");
  }
  if (matrix_.rows() > 0 && matrix_.cols() == 0) {
    throw ValidationError("embedding dimension must be positive");
  }
  if (!matrix_.allFinite()) throw ValidationError("embedding matrix has non-finite entries");
  if (unit_normalized_) {
    for (Index i = 0; i < matrix_.rows(); ++i) {
      const double norm = matrix_.row(i).template cast<double>().norm();
      if (std::abs(norm - 1.0) > 1e-6) {
        throw ValidationError("row '" + tokens_[static_cast<std::size_t>(i)] +
                              "' is not unit-normalized");
      }
    }
  }
  index_.reserve(tokens_.size());
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    if (!index_.emplace(tokens_[i], static_cast<Index>(i)).second) {
      throw ValidationError("duplicate token '" + tokens_[i] + "'");
    }
  }
}

template <typename Scalar>
std::optional<Index> BasicEmbeddingSpace<Scalar>::index_of(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

template <typename Scalar>
auto BasicEmbeddingSpace<Scalar>::lookup(std::string_view token) const
    -> std::optional<VectorType> {
  auto i = index_of(token);
  if (!i) return std::nullopt;
  return VectorType(matrix_.row(*i).transpose());
}

template <typename Scalar>
BasicEmbeddingSpace<Scalar> normalized(const BasicEmbeddingSpace<Scalar>& space) {
  if (space.unit_normalized()) return space;
  RowMatrix<Scalar> m = space.matrix();
  for (Index i = 0; i < m.rows(); ++i) {
    const double norm = m.row(i).template cast<double>().norm();
    if (norm == 0.0) {
      throw ValidationError("cannot normalize zero row '" + space.token(i) + "'");
    }
    m.row(i) = (m.row(i).template cast<double>() / norm).template cast<Scalar>();
  }
  return BasicEmbeddingSpace<Scalar>(space.language(), space.tokens(), std::move(m), true);
}

namespace {

[[noreturn]] void fail_at(const std::string& source, std::size_t line, const std::string& what) {
  throw ValidationError(source + ":" + std::to_string(line) + ": " + what);
}

template <typename T>
bool parse_number(std::string_view text, T& value) {
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  return ec == std::errc() && ptr == text.data() + text.size();
}

// Splits on single spaces, dropping empty fields so trailing blanks (common
// in fastText dumps) do not count towards the arity.
void split_fields(std::string_view line, std::vector<std::string_view>& fields) {
  fields.clear();
  std::size_t start = 0;
  while (start <= line.size()) {
    std::size_t end = line.find(' ', start);
    if (end == std::string_view::npos) end = line.size();
    if (end > start) fields.push_back(line.substr(start, end - start));
    start = end + 1;
  }
}

}  // namespace

template <typename Scalar>
BasicEmbeddingSpace<Scalar> read_vec(std::istream& in, const LanguageId& language,
                                     const VecLoadOptions& options,
                                     const std::string& source_name) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string_view> fields;

  if (!std::getline(in, line)) fail_at(source_name, 1, "missing header");
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  split_fields(line, fields);
  std::size_t header_count = 0;
  std::size_t dim = 0;
  if (fields.size() != 2 || !parse_number(fields[0], header_count) ||
      !parse_number(fields[1], dim) || dim == 0) {
    fail_at(source_name, line_no, "malformed header, expected \"<count> <dim>\"");
  }

  const std::size_t expected = std::min(header_count, options.vocab_cap);
  std::vector<std::string> tokens;
  std::vector<Scalar> values;
  tokens.reserve(expected);
  values.reserve(expected * dim);
  std::set<std::string, std::less<>> seen;
  std::vector<double> row(dim);
  std::size_t data_lines = 0;
  std::size_t duplicates = 0;
  bool capped = false;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(' ') == std::string::npos) continue;
    if (tokens.size() >= options.vocab_cap) {
      capped = true;
      break;
    }
    ++data_lines;
    split_fields(line, fields);
    if (fields.size() != dim + 1) {
      fail_at(source_name, line_no,
              "expected " + std::to_string(dim) + " values, found " +
                  std::to_string(fields.empty() ? 0 : fields.size() - 1));
    }
    double sq = 0.0;
    for (std::size_t j = 0; j < dim; ++j) {
      if (!parse_number(fields[j + 1], row[j])) {
        fail_at(source_name, line_no, "cannot parse value '" + std::string(fields[j + 1]) + "'");
      }
      if (!std::isfinite(row[j])) fail_at(source_name, line_no, "non-finite value");
      sq += row[j] * row[j];
    }
    if (options.normalize && sq == 0.0) fail_at(source_name, line_no, "zero-norm row");

    if (!seen.emplace(fields[0]).second) {
      if (options.reject_duplicates) {
        fail_at(source_name, line_no, "duplicate id '" + std::string(fields[0]) + "'");
      }
      ++duplicates;
      continue;
    }
    tokens.emplace_back(fields[0]);
    const double scale = options.normalize ? 1.0 / std::sqrt(sq) : 1.0;
    for (std::size_t j = 0; j < dim; ++j) values.push_back(static_cast<Scalar>(row[j] * scale));
  }

  if (!capped && data_lines != header_count) {
    spdlog::warn("{}: header announces {} rows, file has {}", source_name, header_count,
                 data_lines);
  } else if (capped && header_count < options.vocab_cap) {
    spdlog::warn("{}: header announces {} rows, file has more", source_name, header_count);
  }
  if (duplicates > 0) {
    spdlog::warn("{}: skipped {} duplicate token(s), first occurrence kept", source_name,
                 duplicates);
  }

  RowMatrix<Scalar> matrix =
      Eigen::Map<const RowMatrix<Scalar>>(values.data(), static_cast<Index>(tokens.size()),
                                          static_cast<Index>(dim));
  return BasicEmbeddingSpace<Scalar>(language, std::move(tokens), std::move(matrix),
                                     options.normalize);
}

template <typename Scalar>
BasicEmbeddingSpace<Scalar> load_vec_file(const std::filesystem::path& path,
                                          const LanguageId& language,
                                          const VecLoadOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path.string());
  return read_vec<Scalar>(in, language, options, path.string());
}

template <typename Scalar>
void write_vec(std::ostream& out, const BasicEmbeddingSpace<Scalar>& space) {
  out << space.size() << ' ' << space.dim() << '\n';
  char buf[64];
  for (Index i = 0; i < space.size(); ++i) {
    out << space.token(i);
    for (Index j = 0; j < space.dim(); ++j) {
      auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), space.matrix()(i, j));
      out << ' ' << std::string_view(buf, static_cast<std::size_t>(ptr - buf));
    }
    out << '\n';
  }
}

template <typename Scalar>
void write_vec_file(const std::filesystem::path& path, const BasicEmbeddingSpace<Scalar>& space) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path.string());
  write_vec(out, space);
}

#define SEMDRIFT_INSTANTIATE(Scalar)                                                          \
  template class BasicEmbeddingSpace<Scalar>;                                                 \
  template BasicEmbeddingSpace<Scalar> normalized(const BasicEmbeddingSpace<Scalar>&);        \
  template BasicEmbeddingSpace<Scalar> read_vec<Scalar>(std::istream&, const LanguageId&,     \
                                                        const VecLoadOptions&,                \
                                                        const std::string&);                  \
  template BasicEmbeddingSpace<Scalar> load_vec_file<Scalar>(                                 \
      const std::filesystem::path&, const LanguageId&, const VecLoadOptions&);                \
  template void write_vec(std::ostream&, const BasicEmbeddingSpace<Scalar>&);                 \
  template void write_vec_file(const std::filesystem::path&, const BasicEmbeddingSpace<Scalar>&);

SEMDRIFT_INSTANTIATE(float)
SEMDRIFT_INSTANTIATE(double)
#undef SEMDRIFT_INSTANTIATE

// --- aligned items ---------------------------------------------------------

std::optional<std::size_t> AlignedItemSet::language_index(const LanguageId& language) const {
  auto it = std::find(languages.begin(), languages.end(), language);
  if (it == languages.end()) return std::nullopt;
  return static_cast<std::size_t>(it - languages.begin());
}

const MatrixXd& AlignedItemSet::matrix(const LanguageId& language) const {
  auto i = language_index(language);
  if (!i) throw ValidationError("language '" + language.code() + "' not in aligned item set");
  return matrices[*i];
}

AlignedItemSet align_items(const std::vector<EmbeddingSpaceD>& spaces) {
  if (spaces.empty()) throw ValidationError("no aligned item files given");
  AlignedItemSet items;
  items.item_ids = spaces.front().tokens();
  const std::set<std::string> reference(items.item_ids.begin(), items.item_ids.end());

  for (const auto& space : spaces) {
    if (items.language_index(space.language())) {
      throw ValidationError("language '" + space.language().code() + "' given twice");
    }
    if (space.dim() != spaces.front().dim()) {
      throw ValidationError("aligned items for '" + space.language().code() +
                            "' have dimension " + std::to_string(space.dim()) + ", expected " +
                            std::to_string(spaces.front().dim()));
    }
    const std::set<std::string> ids(space.tokens().begin(), space.tokens().end());
    if (ids != reference) {
      std::vector<std::string> diff;
      std::set_symmetric_difference(reference.begin(), reference.end(), ids.begin(), ids.end(),
                                    std::back_inserter(diff));
      std::string listed;
      for (const auto& id : diff) listed += (listed.empty() ? "" : ", ") + id;
      throw ValidationError("item ids of '" + space.language().code() + "' differ from '" +
                            spaces.front().language().code() + "': " + listed);
    }
    MatrixXd m(items.size(), space.dim());
    for (Index r = 0; r < items.size(); ++r) {
      m.row(r) = space.row(*space.index_of(items.item_ids[static_cast<std::size_t>(r)]));
    }
    items.languages.push_back(space.language());
    items.matrices.push_back(std::move(m));
  }
  return items;
}

AlignedItemSet load_aligned_items(
    const std::vector<std::pair<LanguageId, std::filesystem::path>>& paths) {
  VecLoadOptions options;
  options.vocab_cap = static_cast<std::size_t>(-1);
  options.normalize = false;
  options.reject_duplicates = true;
  std::vector<EmbeddingSpaceD> spaces;
  spaces.reserve(paths.size());
  for (const auto& [language, path] : paths) {
    spaces.push_back(load_vec_file<double>(path, language, options));
  }
  return align_items(spaces);
}

// --- manifest --------------------------------------------------------------

std::vector<ManifestEntry> Manifest::with_role(ManifestRole role) const {
  std::vector<ManifestEntry> out;
  std::copy_if(entries.begin(), entries.end(), std::back_inserter(out),
               [role](const ManifestEntry& e) { return e.role == role; });
  return out;
}

Manifest parse_manifest(std::string_view json_text, const std::filesystem::path& base_dir) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("manifest is not valid JSON: ") + e.what());
  }
  if (doc.is_object() && doc.contains("entries")) doc = doc["entries"];
  if (!doc.is_array()) throw ValidationError("manifest must be a JSON list of entries");

  Manifest manifest;
  std::set<std::pair<std::string, int>> seen;
  for (const auto& item : doc) {
    if (!item.is_object() || !item.contains("language") || !item.contains("path")) {
      throw ValidationError("manifest entry needs \"language\" and \"path\"");
    }
    ManifestEntry entry;
    entry.language = LanguageId(item["language"].get<std::string>());
    std::filesystem::path p = item["path"].get<std::string>();
    entry.path = p.is_absolute() ? p : base_dir / p;
    const std::string role = item.value("role", "word-space");
    if (role == "word-space") {
      entry.role = ManifestRole::WordSpace;
    } else if (role == "aligned-items") {
      entry.role = ManifestRole::AlignedItems;
    } else {
      throw ValidationError("unknown manifest role '" + role + "'");
    }
    if (!seen.emplace(entry.language.code(), static_cast<int>(entry.role)).second) {
      throw ValidationError("language '" + entry.language.code() +
                            "' listed twice for the same role");
    }
    manifest.entries.push_back(std::move(entry));
  }
  return manifest;
}

Manifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open manifest " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_manifest(buffer.str(), path.parent_path());
}

}  // namespace semdrift
