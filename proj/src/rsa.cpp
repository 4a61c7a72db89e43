#include "semdrift/rsa.hpp"

#include "semdrift/error.hpp"
#include "semdrift/parallel.hpp"

#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace semdrift {

void check_spearman_lengths(Index nx, Index ny) {
  if (nx != ny) {
    throw ValidationError("spearman: length mismatch (" + std::to_string(nx) + " vs " +
                          std::to_string(ny) + ")");
  }
  if (nx < 2) throw ValidationError("spearman: need at least 2 values");
}

SpearmanResult spearman_ranked(const Eigen::Ref<const VectorXd>& rank_x,
                               const Eigen::Ref<const VectorXd>& rank_y) {
  const Index n = rank_x.size();
  const double mean = 0.5 * static_cast<double>(n + 1);
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (Index i = 0; i < n; ++i) {
    const double dx = rank_x[i] - mean;
    const double dy = rank_y[i] - mean;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0 || syy == 0.0) return {0.0, true};
  return {std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0), false};
}

Rsm build_rsm(const ConceptSet& set, const LanguageId& language) {
  const Resolution& res = set.resolution(language);
  return {language, set.concepts, cosine_matrix(res.vectors)};
}

SpearmanResult row_similarity(const MatrixXd& w, const MatrixXd& v, Index i,
                              const RsaOptions& options) {
  if (options.include_self) return spearman(w.row(i), v.row(i));
  const Index n = w.cols();
  VectorXd a(n - 1), b(n - 1);
  for (Index j = 0, k = 0; j < n; ++j) {
    if (j == i) continue;
    a[k] = w(i, j);
    b[k] = v(i, j);
    ++k;
  }
  return spearman(a, b);
}

PairSimilarity language_pair_similarity(const Rsm& w, const Rsm& v, const RsaOptions& options) {
  if (w.concepts != v.concepts) {
    throw ValidationError("RSMs of '" + w.language.code() + "' and '" + v.language.code() +
                          "' do not share a concept order");
  }
  const Index n = w.values.rows();
  if (n < (options.include_self ? 2 : 3)) {
    throw ValidationError("need more concepts to compare similarity vectors");
  }
  PairSimilarity out;
  double sum = 0.0;
  for (Index i = 0; i < n; ++i) {
    const auto r = row_similarity(w.values, v.values, i, options);
    sum += r.rho;
    out.degenerate += r.degenerate ? 1 : 0;
  }
  out.value = sum / static_cast<double>(n);
  return out;
}

LanguageSimilarityMatrix build_language_matrix(const std::vector<Rsm>& rsms,
                                               const RsaOptions& options) {
  const Index l = static_cast<Index>(rsms.size());
  if (l < 2) throw ValidationError("language matrix needs at least 2 languages");

  std::vector<std::pair<Index, Index>> pairs;
  for (Index a = 0; a < l; ++a) {
    for (Index b = a + 1; b < l; ++b) pairs.emplace_back(a, b);
  }
  std::vector<PairSimilarity> results(pairs.size());
  parallel_for(pairs.size(), [&](std::size_t p) {
    results[p] = language_pair_similarity(rsms[static_cast<std::size_t>(pairs[p].first)],
                                          rsms[static_cast<std::size_t>(pairs[p].second)],
                                          options);
  });

  LanguageSimilarityMatrix out;
  out.values = MatrixXd::Identity(l, l);
  for (const auto& rsm : rsms) out.languages.push_back(rsm.language);
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const auto [a, b] = pairs[p];
    out.values(a, b) = results[p].value;
    out.values(b, a) = results[p].value;
    out.degenerate += results[p].degenerate;
  }
  return out;
}

LanguageSimilarityMatrix build_language_matrix(const ConceptSet& set,
                                               const RsaOptions& options) {
  if (set.resolutions.size() < 2) {
    throw ValidationError("language matrix needs at least 2 languages");
  }
  std::vector<Rsm> rsms(set.resolutions.size());
  parallel_for(rsms.size(), [&](std::size_t i) {
    rsms[i] = build_rsm(set, set.resolutions[i].language);
  });
  return build_language_matrix(rsms, options);
}

WordPairVarianceReport word_pair_variance(const ConceptSet& set) {
  if (set.resolutions.size() < 2) {
    throw ValidationError("word pair variance needs at least 2 languages");
  }
  std::vector<MatrixXd> cosines;
  for (const auto& res : set.resolutions) cosines.push_back(cosine_matrix(res.vectors));

  WordPairVarianceReport report;
  report.languages = set.languages();
  const Index n = set.size();
  const double count = static_cast<double>(cosines.size());
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      WordPairVariance entry;
      entry.a = set.concepts[static_cast<std::size_t>(i)];
      entry.b = set.concepts[static_cast<std::size_t>(j)];
      double mean = 0.0;
      for (const auto& m : cosines) {
        entry.cosines.push_back(m(i, j));
        mean += m(i, j);
      }
      mean /= count;
      double var = 0.0;
      for (double c : entry.cosines) var += (c - mean) * (c - mean);
      entry.variance = var / count;
      report.pairs.push_back(std::move(entry));
    }
  }
  std::stable_sort(report.pairs.begin(), report.pairs.end(),
                   [](const WordPairVariance& a, const WordPairVariance& b) {
                     return a.variance > b.variance;
                   });
  return report;
}

std::string format_number(double value) {
  char buf[32];
  const int len = std::snprintf(buf, sizeof(buf), "%.9g", value == 0.0 ? 0.0 : value);
  return std::string(buf, static_cast<std::size_t>(len));
}

void write_matrix_csv(std::ostream& out, const std::vector<std::string>& labels,
                      const MatrixXd& values) {
  out << "label";
  for (const auto& l : labels) out << ',' << l;
  out << '\n';
  for (Index i = 0; i < values.rows(); ++i) {
    out << labels[static_cast<std::size_t>(i)];
    for (Index j = 0; j < values.cols(); ++j) out << ',' << format_number(values(i, j));
    out << '\n';
  }
}

namespace {
std::vector<std::string> codes(const std::vector<LanguageId>& ids) {
  std::vector<std::string> out;
  for (const auto& id : ids) out.push_back(id.code());
  return out;
}
}  // namespace

void write_csv(std::ostream& out, const Rsm& rsm) { write_matrix_csv(out, rsm.concepts, rsm.values); }

void write_csv(std::ostream& out, const LanguageSimilarityMatrix& matrix) {
  write_matrix_csv(out, codes(matrix.languages), matrix.values);
}

void write_csv(std::ostream& out, const WordPairVarianceReport& report) {
  out << "word_a,word_b,variance";
  for (const auto& l : report.languages) out << ',' << l.code();
  out << '\n';
  for (const auto& p : report.pairs) {
    out << p.a << ',' << p.b << ',' << format_number(p.variance);
    for (double c : p.cosines) out << ',' << format_number(c);
    out << '\n';
  }
}

LanguageSimilarityMatrix read_language_matrix_csv(std::istream& in) {
  auto split = [](const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      if (!cell.empty() && cell.back() == '\r') cell.pop_back();
      cells.push_back(cell);
    }
    return cells;
  };

  std::string line;
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || line == "\r") continue;
    rows.push_back(split(line));
  }
  if (rows.empty()) throw ValidationError("language matrix CSV is empty");
  const auto& header = rows.front();
  const Index l = static_cast<Index>(header.size()) - 1;
  if (l < 2 || static_cast<Index>(rows.size()) != l + 1) {
    throw ValidationError("language matrix CSV must be square with a label row and column");
  }

  LanguageSimilarityMatrix out;
  out.values.resize(l, l);
  for (Index j = 0; j < l; ++j) out.languages.emplace_back(header[static_cast<std::size_t>(j + 1)]);
  for (Index i = 0; i < l; ++i) {
    const auto& row = rows[static_cast<std::size_t>(i + 1)];
    if (static_cast<Index>(row.size()) != l + 1 || row[0] != out.languages[i].code()) {
      throw ValidationError("language matrix CSV row " + std::to_string(i + 2) +
                            " does not match the header");
    }
    for (Index j = 0; j < l; ++j) {
      const std::string& cell = row[static_cast<std::size_t>(j + 1)];
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (ec != std::errc() || ptr != cell.data() + cell.size()) {
        throw ValidationError("language matrix CSV: cannot parse '" + cell + "'");
      }
      out.values(i, j) = v;
    }
  }
  return out;
}

}  // namespace semdrift
