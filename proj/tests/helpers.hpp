#pragma once

#include "semdrift/aligner.hpp"

#include <Eigen/Dense>

#include <filesystem>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace testing_helpers {

// Concept set whose language `codes[l]` resolves concept i to row i of `mats[l]`.
inline semdrift::ConceptSet make_set(const std::vector<std::string>& codes,
                                     const std::vector<Eigen::MatrixXd>& mats,
                                     std::vector<std::string> concepts = {}) {
  semdrift::ConceptSet set;
  set.anchor = semdrift::LanguageId(codes.front());
  const auto n = mats.front().rows();
  if (concepts.empty()) {
    for (Eigen::Index i = 0; i < n; ++i) concepts.push_back("w" + std::to_string(i));
  }
  set.concepts = concepts;
  for (std::size_t l = 0; l < codes.size(); ++l) {
    semdrift::Resolution r;
    r.language = semdrift::LanguageId(codes[l]);
    r.tokens = concepts;
    r.vectors = mats[l];
    r.scores = Eigen::VectorXd::Ones(n);
    set.resolutions.push_back(std::move(r));
  }
  return set;
}

inline Eigen::MatrixXd gaussian(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& gen) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = g(gen);
  return m;
}

inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("semdrift_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace testing_helpers
