#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "usim/common/error.hpp"
#include "usim/eval/metrics.hpp"

namespace usim::eval {

namespace {

Eigen::MatrixXd to_matrix(const EmbeddingSet& set, std::size_t dim) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(set.size()), static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (set[i].size() != dim) throw Error("fid: dimension mismatch");
    for (std::size_t j = 0; j < dim; ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = set[i][j];
    }
  }
  return m;
}

// Sample covariance (n - 1 normalization) with eps on the diagonal.
Eigen::MatrixXd covariance(const Eigen::MatrixXd& samples, const Eigen::RowVectorXd& mean,
                           double eps) {
  const Eigen::MatrixXd centered = samples.rowwise() - mean;
  Eigen::MatrixXd cov =
      centered.transpose() * centered / static_cast<double>(samples.rows() - 1);
  cov.diagonal().array() += eps;
  return cov;
}

// Symmetric PSD square root; negative eigenvalues are clamped to zero.
Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& m) {
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
  const Eigen::VectorXd clamped = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return solver.eigenvectors() * clamped.asDiagonal() * solver.eigenvectors().transpose();
}

}  // namespace

double fid(const EmbeddingSet& p, const EmbeddingSet& q, double eps) {
  if (p.size() < 2 || q.size() < 2) throw Error("fid requires at least 2 points per set");
  const std::size_t dim = p.front().size();
  if (q.front().size() != dim) throw Error("fid: dimension mismatch");

  const Eigen::MatrixXd mp = to_matrix(p, dim);
  const Eigen::MatrixXd mq = to_matrix(q, dim);
  const Eigen::RowVectorXd mean_p = mp.colwise().mean();
  const Eigen::RowVectorXd mean_q = mq.colwise().mean();
  const Eigen::MatrixXd cov_p = covariance(mp, mean_p, eps);
  const Eigen::MatrixXd cov_q = covariance(mq, mean_q, eps);

  // Tr((Cp Cq)^(1/2)) through the symmetrized product Cp^(1/2) Cq Cp^(1/2),
  // which shares its eigenvalues and stays symmetric.
  const Eigen::MatrixXd sqrt_p = psd_sqrt(cov_p);
  Eigen::MatrixXd inner = sqrt_p * cov_q * sqrt_p;
  inner = (inner + inner.transpose()) / 2.0;
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(inner);
  const double trace_sqrt = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();

  const double mean_term = (mean_p - mean_q).squaredNorm();
  const double value = mean_term + cov_p.trace() + cov_q.trace() - 2.0 * trace_sqrt;
  return std::max(0.0, value);
}

}  // namespace usim::eval
