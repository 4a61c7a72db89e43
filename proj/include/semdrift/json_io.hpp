#pragma once

#include "semdrift/drift.hpp"
#include "semdrift/phylo.hpp"
#include "semdrift/quality.hpp"
#include "semdrift/rsa.hpp"

#include <json.hpp>

namespace semdrift {

using Json = nlohmann::ordered_json;

Json as_json(const MatrixXd& values);
Json as_json(const Rsm& rsm);
Json as_json(const LanguageSimilarityMatrix& matrix);
Json as_json(const WordPairVarianceReport& report);
Json as_json(const BaselineResult& baseline);
Json as_json(const DriftReport& report);
Json as_json(const QualityReport& report);
Json as_json(const Projection2D& projection);
Json as_json(const TranslationCandidates& candidates);

/// {model_distance, baseline: {...}, quality_change_pct}
Json as_json(const TreeScore& score, const BaselineResult& baseline);

}  // namespace semdrift
