#include "semdrift/drift.hpp"

#include "semdrift/error.hpp"
#include "semdrift/parallel.hpp"
#include "semdrift/pca.hpp"

#include <json.hpp>

#include <algorithm>
#include <numeric>
#include <ostream>
#include <set>

namespace semdrift {

void throw_rank_deficient(Index rank, Index k) {
  throw ValidationError("projection needs rank >= " + std::to_string(k) + ", input has rank " +
                        std::to_string(rank));
}

std::vector<LanguageId> ClusterPartition::members() const {
  std::vector<LanguageId> out;
  for (const auto& c : clusters) out.insert(out.end(), c.begin(), c.end());
  return out;
}

ClusterPartition parse_partition(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("cluster config is not valid JSON: ") + e.what());
  }
  if (doc.is_object() && doc.contains("clusters")) doc = doc["clusters"];
  if (!doc.is_array()) throw ValidationError("cluster config must be a list of lists");
  ClusterPartition partition;
  for (const auto& cluster : doc) {
    if (!cluster.is_array()) throw ValidationError("cluster config must be a list of lists");
    std::vector<LanguageId> members;
    for (const auto& code : cluster) {
      if (!code.is_string()) throw ValidationError("cluster members must be language codes");
      members.emplace_back(code.get<std::string>());
    }
    partition.clusters.push_back(std::move(members));
  }
  return partition;
}

void validate_partition(const ClusterPartition& partition, const ConceptSet& set) {
  if (partition.clusters.size() < 2) {
    throw ValidationError("drift needs at least two clusters (no cross-cluster pairs otherwise)");
  }
  std::set<LanguageId> seen;
  bool has_intra_pair = false;
  for (const auto& cluster : partition.clusters) {
    if (cluster.empty()) throw ValidationError("cluster partition contains an empty cluster");
    has_intra_pair = has_intra_pair || cluster.size() >= 2;
    for (const auto& language : cluster) {
      if (!seen.insert(language).second) {
        throw ValidationError("language '" + language.code() + "' appears in more than one cluster");
      }
      if (!set.has_language(language)) {
        throw ValidationError("cluster language '" + language.code() + "' is not resolved");
      }
    }
  }
  if (!has_intra_pair) {
    throw ValidationError("every cluster has a single language, so no intra-cluster pair exists");
  }
}

DriftReport compute_drift(const ConceptSet& set, const ClusterPartition& partition,
                          const RsaOptions& options) {
  validate_partition(partition, set);

  DriftReport report;
  report.partition = partition;
  std::vector<LanguageId> members;
  std::vector<std::size_t> cluster_of;
  for (std::size_t c = 0; c < partition.clusters.size(); ++c) {
    for (const auto& language : partition.clusters[c]) {
      members.push_back(language);
      cluster_of.push_back(c);
    }
  }
  std::vector<std::pair<std::size_t, std::size_t>> intra, cross;
  for (std::size_t a = 0; a < members.size(); ++a) {
    for (std::size_t b = a + 1; b < members.size(); ++b) {
      (cluster_of[a] == cluster_of[b] ? intra : cross).emplace_back(a, b);
      (cluster_of[a] == cluster_of[b] ? report.intra_pairs : report.cross_pairs)
          .emplace_back(members[a], members[b]);
    }
  }

  std::vector<MatrixXd> rsms(members.size());
  parallel_for(members.size(), [&](std::size_t m) {
    rsms[m] = cosine_matrix(set.resolution(members[m]).vectors);
  });

  report.records.resize(set.concepts.size());
  parallel_for(set.concepts.size(), [&](std::size_t i) {
    const auto row = static_cast<Index>(i);
    DriftRecord& rec = report.records[i];
    rec.term = set.concepts[i];
    auto collect = [&](const auto& pairs, std::vector<double>& out) {
      double sum = 0.0;
      for (const auto& [a, b] : pairs) {
        const auto r = row_similarity(rsms[a], rsms[b], row, options);
        out.push_back(r.rho);
        sum += r.rho;
        rec.degenerate += r.degenerate ? 1 : 0;
      }
      return sum / static_cast<double>(pairs.size());
    };
    rec.ics_mean = collect(intra, rec.ics);
    rec.ccs_mean = collect(cross, rec.ccs);
    rec.drift = rec.ics_mean - rec.ccs_mean;
  });

  for (const auto& rec : report.records) report.degenerate += rec.degenerate;
  std::sort(report.records.begin(), report.records.end(),
            [](const DriftRecord& a, const DriftRecord& b) {
              return a.drift > b.drift || (a.drift == b.drift && a.term < b.term);
            });
  return report;
}

std::vector<Neighbor> nearest_in_list(const ConceptSet& set, const LanguageId& language,
                                      std::string_view term, Index k) {
  if (k < 1) throw ValidationError("k must be positive");
  const auto index = set.concept_index(term);
  if (!index) throw ValidationError("concept '" + std::string(term) + "' is not in the concept set");
  const VectorXd cosines = cosine_matrix(set.resolution(language).vectors).row(*index);

  std::vector<Index> order;
  for (Index j = 0; j < cosines.size(); ++j) {
    if (j != *index) order.push_back(j);
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return cosines[a] > cosines[b]; });
  order.resize(std::min<std::size_t>(order.size(), static_cast<std::size_t>(k)));

  std::vector<Neighbor> out;
  for (Index j : order) out.push_back({set.concepts[static_cast<std::size_t>(j)], cosines[j]});
  return out;
}

Projection2D project_concepts(const ConceptSet& set, const std::vector<LanguageId>& languages,
                              const std::vector<std::string>& focus, Index neighbors) {
  if (languages.size() < 2) throw ValidationError("projection needs at least 2 languages");
  const Index n = set.size();
  MatrixXd joint(n * static_cast<Index>(languages.size()), set.dim());
  for (std::size_t l = 0; l < languages.size(); ++l) {
    joint.middleRows(static_cast<Index>(l) * n, n) = set.resolution(languages[l]).vectors;
  }
  if (joint.rows() < 3) throw ValidationError("projection needs at least 3 vectors");
  const Pca<double> pca = fit_pca<double>(joint, 2);

  Projection2D out;
  out.explained_ratio = {pca.explained_ratio[0], pca.explained_ratio[1]};
  for (const auto& term : focus) {
    if (!set.concept_index(term)) {
      throw ValidationError("focus concept '" + term + "' is not in the concept set");
    }
  }
  for (const auto& language : languages) {
    const MatrixXd& vectors = set.resolution(language).vectors;
    for (const auto& term : focus) {
      std::vector<std::string> group{term};
      if (neighbors > 0) {
        for (const auto& nb : nearest_in_list(set, language, term, neighbors)) {
          group.push_back(nb.term);
        }
      }
      for (const auto& member : group) {
        const Index row = *set.concept_index(member);
        const MatrixXd xy = pca.transform(vectors.row(row));
        out.points.push_back({language, member, term, xy(0, 0), xy(0, 1)});
      }
    }
  }
  return out;
}

void write_csv(std::ostream& out, const DriftReport& report) {
  out << "concept,drift,ics_mean,ccs_mean,n_ics,n_ccs\n";
  for (const auto& r : report.records) {
    out << r.term << ',' << format_number(r.drift) << ',' << format_number(r.ics_mean) << ','
        << format_number(r.ccs_mean) << ',' << r.ics.size() << ',' << r.ccs.size() << '\n';
  }
}

void write_csv(std::ostream& out, const Projection2D& projection) {
  out << "language,concept,focus,x,y\n";
  for (const auto& p : projection.points) {
    out << p.language.code() << ',' << p.term << ',' << p.focus << ',' << format_number(p.x)
        << ',' << format_number(p.y) << '\n';
  }
}

}  // namespace semdrift
