#pragma once

#include "semdrift/types.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace semdrift {

/// Principal axes of a sample matrix (one observation per row).
template <typename Scalar>
struct Pca {
  Vector<Scalar> mean;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> components;  // dim x k, unit columns
  Vector<Scalar> variances;        // eigenvalues of the sample covariance, descending
  Vector<Scalar> explained_ratio;  // variances / total variance

  template <typename Derived>
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> transform(
      const Eigen::MatrixBase<Derived>& rows) const {
    return (rows.rowwise() - mean.transpose()) * components;
  }
};

/// Fits the top `k` principal components through a thin SVD of the centred
/// data. Each component is oriented so that its largest-magnitude loading is
/// positive. Throws ValidationError when the centred data has rank < k.
template <typename Scalar, typename Derived>
Pca<Scalar> fit_pca(const Eigen::MatrixBase<Derived>& samples, Index k);

void throw_rank_deficient(Index rank, Index k);

template <typename Scalar, typename Derived>
Pca<Scalar> fit_pca(const Eigen::MatrixBase<Derived>& samples, Index k) {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Matrix x = samples.template cast<Scalar>();
  const Index n = x.rows();

  Pca<Scalar> pca;
  pca.mean = x.colwise().mean().transpose();
  const Matrix centred = x.rowwise() - pca.mean.transpose();

  Eigen::BDCSVD<Matrix> svd(centred, Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  const Scalar tol = std::max<Scalar>(Scalar(1e-10) * (s.size() > 0 ? s[0] : Scalar(0)),
                                      std::numeric_limits<Scalar>::min());
  Index rank = 0;
  for (Index i = 0; i < s.size(); ++i) rank += s[i] > tol ? 1 : 0;
  if (n < 2 || rank < k) throw_rank_deficient(rank, k);

  const Scalar denom = static_cast<Scalar>(n - 1);
  pca.components = svd.matrixV().leftCols(k);
  pca.variances = s.head(k).array().square() / denom;
  const Scalar total = s.squaredNorm() / denom;
  pca.explained_ratio = pca.variances / total;

  for (Index c = 0; c < k; ++c) {
    Index arg = 0;
    for (Index r = 1; r < pca.components.rows(); ++r) {
      if (std::abs(pca.components(r, c)) > std::abs(pca.components(arg, c))) arg = r;
    }
    if (pca.components(arg, c) < Scalar(0)) pca.components.col(c) *= Scalar(-1);
  }
  return pca;
}

}  // namespace semdrift
