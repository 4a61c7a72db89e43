#include "semdrift/json_io.hpp"

namespace semdrift {

namespace {

Json codes(const std::vector<LanguageId>& languages) {
  Json out = Json::array();
  for (const auto& l : languages) out.push_back(l.code());
  return out;
}

}  // namespace

Json as_json(const MatrixXd& values) {
  Json rows = Json::array();
  for (Index i = 0; i < values.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < values.cols(); ++j) row.push_back(values(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json as_json(const Rsm& rsm) {
  return Json{{"language", rsm.language.code()},
              {"concepts", rsm.concepts},
              {"values", as_json(rsm.values)}};
}

Json as_json(const LanguageSimilarityMatrix& matrix) {
  return Json{{"languages", codes(matrix.languages)},
              {"values", as_json(matrix.values)},
              {"degenerate_rows", matrix.degenerate}};
}

Json as_json(const WordPairVarianceReport& report) {
  Json pairs = Json::array();
  for (const auto& p : report.pairs) {
    pairs.push_back(Json{{"word_a", p.a}, {"word_b", p.b}, {"variance", p.variance}, {"cosines", p.cosines}});
  }
  return Json{{"languages", codes(report.languages)}, {"pairs", std::move(pairs)}};
}

Json as_json(const BaselineResult& baseline) {
  return Json{{"kind", std::string(to_string(baseline.kind))},
              {"iterations", baseline.iterations},
              {"seed", baseline.seed},
              {"mean", baseline.mean},
              {"std", baseline.stddev},
              {"lo", baseline.lo},
              {"hi", baseline.hi}};
}

Json as_json(const TreeScore& score, const BaselineResult& baseline) {
  return Json{{"model_distance", score.model_distance},
              {"baseline", as_json(baseline)},
              {"quality_change_pct", score.quality_change_pct}};
}

Json as_json(const DriftReport& report) {
  Json clusters = Json::array();
  for (const auto& c : report.partition.clusters) clusters.push_back(codes(c));
  auto pairs = [](const std::vector<LanguagePair>& ps) {
    Json out = Json::array();
    for (const auto& [a, b] : ps) out.push_back(Json::array({a.code(), b.code()}));
    return out;
  };
  Json records = Json::array();
  for (const auto& r : report.records) {
    records.push_back(Json{{"concept", r.term},
                           {"drift", r.drift},
                           {"ics_mean", r.ics_mean},
                           {"ccs_mean", r.ccs_mean},
                           {"ics", r.ics},
                           {"ccs", r.ccs},
                           {"degenerate", r.degenerate}});
  }
  return Json{{"clusters", std::move(clusters)},
              {"intra_pairs", pairs(report.intra_pairs)},
              {"cross_pairs", pairs(report.cross_pairs)},
              {"degenerate", report.degenerate},
              {"records", std::move(records)}};
}

Json as_json(const QualityReport& report) {
  Json languages = Json::array();
  for (const auto& q : report.languages) {
    languages.push_back(Json{{"language", q.language.code()},
                             {"evaluated", q.evaluated},
                             {"matched", q.matched},
                             {"accuracy", q.accuracy},
                             {"match_kinds", Json{{"exact", q.exact}, {"fuzzy", q.fuzzy}, {"loanword", q.loanword}}},
                             {"identical_after_lowercasing", q.identical_after_lowercasing}});
  }
  Json skipped = Json::array();
  for (const auto& s : report.skipped) {
    skipped.push_back(Json{{"concept", s.term}, {"language", s.language.code()}, {"reason", s.reason}});
  }
  Json near = Json::array();
  for (const auto& m : report.near_misses) {
    near.push_back(Json{{"concept", m.term},
                        {"language", m.language.code()},
                        {"neighbor", m.neighbor},
                        {"closest_translation", m.closest_translation},
                        {"ratio", m.ratio}});
  }
  return Json{{"method", report.method},
              {"languages", std::move(languages)},
              {"skipped", std::move(skipped)},
              {"near_misses", std::move(near)}};
}

Json as_json(const Projection2D& projection) {
  Json points = Json::array();
  for (const auto& p : projection.points) {
    points.push_back(Json{{"language", p.language.code()},
                          {"concept", p.term},
                          {"focus", p.focus},
                          {"x", p.x},
                          {"y", p.y}});
  }
  return Json{{"explained_variance_ratio", projection.explained_ratio},
              {"points", std::move(points)}};
}

Json as_json(const TranslationCandidates& candidates) {
  Json top = Json::array();
  for (const auto& c : candidates.top_k) top.push_back(Json{{"token", c.token}, {"cosine", c.cosine}});
  return Json{{"query", candidates.query},
              {"language", candidates.language.code()},
              {"top_k", std::move(top)}};
}

}  // namespace semdrift
