#include "semdrift/quality.hpp"

#include "semdrift/error.hpp"
#include "semdrift/rsa.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>

namespace semdrift {

namespace {

std::u32string decode_utf8(std::string_view s) {
  std::u32string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size();) {
    const auto c = static_cast<unsigned char>(s[i]);
    int extra = 0;
    char32_t cp = 0;
    if (c < 0x80) {
      cp = c;
    } else if ((c & 0xE0) == 0xC0) {
      cp = c & 0x1F;
      extra = 1;
    } else if ((c & 0xF0) == 0xE0) {
      cp = c & 0x0F;
      extra = 2;
    } else if ((c & 0xF8) == 0xF0) {
      cp = c & 0x07;
      extra = 3;
    } else {
      extra = -1;
    }
    bool valid = extra >= 0;
    if (extra > 0) {
      valid = i + static_cast<std::size_t>(extra) < s.size();
      for (int k = 1; valid && k <= extra; ++k) {
        const auto cc = static_cast<unsigned char>(s[i + static_cast<std::size_t>(k)]);
        if ((cc & 0xC0) != 0x80) valid = false;
        cp = (cp << 6) | (cc & 0x3F);
      }
    }
    if (!valid) {
      // Invalid bytes stay distinct from every real scalar value.
      out.push_back(static_cast<char32_t>(0x110000 + c));
      ++i;
      continue;
    }
    out.push_back(cp);
    i += static_cast<std::size_t>(extra) + 1;
  }
  return out;
}

struct Block {
  std::size_t a = 0;
  std::size_t b = 0;
  std::size_t size = 0;
};

// Longest common substring of a[alo:ahi] and b[blo:bhi]; among equally long
// blocks the one starting earliest in a, then earliest in b.
Block longest_match(const std::u32string& a, const std::u32string& b, std::size_t alo,
                    std::size_t ahi, std::size_t blo, std::size_t bhi) {
  Block best{alo, blo, 0};
  std::vector<std::size_t> prev(bhi - blo + 1, 0), cur(bhi - blo + 1, 0);
  for (std::size_t i = alo; i < ahi; ++i) {
    for (std::size_t j = blo; j < bhi; ++j) {
      const std::size_t k = a[i] == b[j] ? prev[j - blo] + 1 : 0;
      cur[j - blo + 1] = k;
      if (k > best.size) best = {i + 1 - k, j + 1 - k, k};
    }
    std::swap(prev, cur);
    std::fill(cur.begin(), cur.end(), 0);
  }
  return best;
}

std::size_t matched_characters(const std::u32string& a, const std::u32string& b) {
  struct Range {
    std::size_t alo, ahi, blo, bhi;
  };
  std::vector<Range> queue{{0, a.size(), 0, b.size()}};
  std::size_t total = 0;
  while (!queue.empty()) {
    const Range r = queue.back();
    queue.pop_back();
    const Block m = longest_match(a, b, r.alo, r.ahi, r.blo, r.bhi);
    if (m.size == 0) continue;
    total += m.size;
    if (r.alo < m.a && r.blo < m.b) queue.push_back({r.alo, m.a, r.blo, m.b});
    if (m.a + m.size < r.ahi && m.b + m.size < r.bhi) {
      queue.push_back({m.a + m.size, r.ahi, m.b + m.size, r.bhi});
    }
  }
  return total;
}

std::string ascii_lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; });
  return s;
}

}  // namespace

double similarity_ratio(std::string_view a, std::string_view b) {
  const std::u32string ua = decode_utf8(a);
  const std::u32string ub = decode_utf8(b);
  const std::size_t total = ua.size() + ub.size();
  if (total == 0) return 1.0;
  const std::size_t m = std::max(matched_characters(ua, ub), matched_characters(ub, ua));
  return 2.0 * static_cast<double>(m) / static_cast<double>(total);
}

void BilingualDictionary::merge(const BilingualDictionary& other) {
  if (other.source != source || other.target != target) {
    throw ValidationError("cannot merge dictionaries of different language pairs");
  }
  for (const auto& [src, targets] : other.entries) entries[src].insert(targets.begin(), targets.end());
}

BilingualDictionary read_dictionary_tsv(std::istream& in, LanguageId source, LanguageId target) {
  BilingualDictionary dict{std::move(source), std::move(target), {}};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 1 == line.size() ||
        line.find('\t', tab + 1) != std::string::npos) {
      throw ValidationError("dictionary line " + std::to_string(line_no) +
                            ": expected source<TAB>target");
    }
    dict.entries[line.substr(0, tab)].insert(line.substr(tab + 1));
  }
  return dict;
}

BilingualDictionary load_dictionary_tsv(const std::filesystem::path& path, LanguageId source,
                                        LanguageId target) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open dictionary " + path.string());
  return read_dictionary_tsv(in, std::move(source), std::move(target));
}

QualityReport word_quality(const ConceptSet& set, const std::vector<BilingualDictionary>& dicts,
                           double fuzzy_cutoff, std::vector<LanguageId> languages) {
  if (!(fuzzy_cutoff > 0.0 && fuzzy_cutoff <= 1.0)) {
    throw ValidationError("fuzzy cutoff must lie in (0, 1]");
  }
  if (languages.empty()) {
    for (const auto& language : set.languages()) {
      if (language != set.anchor) languages.push_back(language);
    }
  }

  QualityReport report;
  report.method = "dictionary";
  for (const auto& language : languages) {
    const Resolution& res = set.resolution(language);
    BilingualDictionary dict{set.anchor, language, {}};
    bool found = false;
    for (const auto& d : dicts) {
      if (d.source == set.anchor && d.target == language) {
        dict.merge(d);
        found = true;
      }
    }
    if (!found) {
      throw ValidationError("no " + set.anchor.code() + "-" + language.code() + " dictionary given");
    }

    LanguageQuality q;
    q.language = language;
    for (std::size_t i = 0; i < set.concepts.size(); ++i) {
      const std::string& term = set.concepts[i];
      auto entry = dict.entries.find(term);
      if (entry == dict.entries.end()) {
        report.skipped.push_back({term, language, "no-dictionary-entry"});
        continue;
      }
      ++q.evaluated;
      const std::string& neighbor = res.tokens[i];
      const auto& accepted = entry->second;
      if (accepted.count(neighbor) > 0) {
        ++q.exact;
        continue;
      }
      double best_ratio = -1.0;
      std::string closest;
      for (const auto& candidate : accepted) {
        const double r = similarity_ratio(neighbor, candidate);
        if (r > best_ratio) {
          best_ratio = r;
          closest = candidate;
        }
      }
      if (best_ratio >= fuzzy_cutoff) {
        ++q.fuzzy;
      } else if (neighbor == term) {
        ++q.loanword;
      } else {
        report.near_misses.push_back({term, language, neighbor, closest, best_ratio});
        if (ascii_lower(neighbor) == ascii_lower(term)) ++q.identical_after_lowercasing;
      }
    }
    q.matched = q.exact + q.fuzzy + q.loanword;
    q.accuracy = q.evaluated > 0
                     ? 100.0 * static_cast<double>(q.matched) / static_cast<double>(q.evaluated)
                     : 0.0;
    report.languages.push_back(q);
  }
  return report;
}

QualityReport similarity_search_accuracy(const AlignedItemSet& items, const LanguageId& source,
                                         const LanguageId& target) {
  const MatrixXd& s = items.matrix(source);
  const MatrixXd& t = items.matrix(target);
  auto unit_rows = [](const MatrixXd& m) {
    MatrixXd out = m;
    for (Index i = 0; i < out.rows(); ++i) {
      const double n = out.row(i).norm();
      if (n > 0.0) out.row(i) /= n;
    }
    return out;
  };
  const MatrixXd cosines = unit_rows(s) * unit_rows(t).transpose();

  LanguageQuality q;
  q.language = target;
  q.evaluated = static_cast<std::size_t>(items.size());
  for (Index i = 0; i < cosines.rows(); ++i) {
    Index best = 0;
    for (Index j = 1; j < cosines.cols(); ++j) {
      if (cosines(i, j) > cosines(i, best)) best = j;
    }
    if (best == i) ++q.matched;
  }
  q.exact = q.matched;
  q.accuracy = q.evaluated > 0
                   ? 100.0 * static_cast<double>(q.matched) / static_cast<double>(q.evaluated)
                   : 0.0;

  QualityReport report;
  report.method = "similarity-search";
  report.languages.push_back(q);
  return report;
}

void write_csv(std::ostream& out, const QualityReport& report) {
  out << "metric";
  for (const auto& q : report.languages) out << ',' << q.language.code();
  out << '\n';
  auto row = [&](const char* name, auto get) {
    out << name;
    for (const auto& q : report.languages) out << ',' << get(q);
    out << '\n';
  };
  row("accuracy", [](const LanguageQuality& q) { return format_number(q.accuracy); });
  row("evaluated", [](const LanguageQuality& q) { return q.evaluated; });
  row("matched", [](const LanguageQuality& q) { return q.matched; });
  row("exact", [](const LanguageQuality& q) { return q.exact; });
  row("fuzzy", [](const LanguageQuality& q) { return q.fuzzy; });
  row("loanword", [](const LanguageQuality& q) { return q.loanword; });
}

}  // namespace semdrift
