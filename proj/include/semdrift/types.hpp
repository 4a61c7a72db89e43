#pragma once

#include <Eigen/Dense>

#include <compare>
#include <functional>
#include <string>
#include <string_view>

namespace semdrift {

template <typename Scalar>
using RowMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Lowercase ISO-639 language code ("es", "pt", ...).
class LanguageId {
 public:
  LanguageId() = default;
  explicit LanguageId(std::string code);

  const std::string& code() const noexcept { return code_; }
  bool empty() const noexcept { return code_.empty(); }

  friend auto operator<=>(const LanguageId&, const LanguageId&) = default;
  friend bool operator==(const LanguageId&, const LanguageId&) = default;

 private:
  std::string code_;
};

}  // namespace semdrift

template <>
struct std::hash<semdrift::LanguageId> {
  std::size_t operator()(const semdrift::LanguageId& id) const noexcept {
    return std::hash<std::string>{}(id.code());
  }
};
