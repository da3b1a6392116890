#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <cmath>

#include "mibench/classifiers.hpp"

namespace mibench {

using TE = TrainingError;

double LdaModel::decision(std::span<const double> x) const {
  double s = b;
  for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * x[i];
  return s;
}

LdaModel train_lda(const LabeledSet& train, double shrinkage) {
  const std::size_t d = train.dim();
  if (d == 0) throw TE(TE::Kind::ZeroDimension, "LDA: zero-dimensional features");
  if (!(shrinkage >= 0.0 && shrinkage <= 1.0))
    throw TE(TE::Kind::BadParameter, "LDA: shrinkage must lie in [0, 1]");
  const std::size_t n1 = train.count(Label::Left);
  const std::size_t n0 = train.size() - n1;
  if (n0 == 0 || n1 == 0) throw TE(TE::Kind::ClassAbsent, "LDA: a class is absent");

  using Mat = Eigen::MatrixXd;
  using Vec = Eigen::VectorXd;
  Vec mu[2] = {Vec::Zero(static_cast<Eigen::Index>(d)), Vec::Zero(static_cast<Eigen::Index>(d))};
  for (std::size_t i = 0; i < train.size(); ++i) {
    const auto r = train.row(i);
    for (double v : r)
      if (!std::isfinite(v)) throw TE(TE::Kind::NonFinite, "LDA: non-finite feature value");
    mu[to_int(train.label(i))] += Eigen::Map<const Vec>(r.data(), static_cast<Eigen::Index>(d));
  }
  mu[0] /= static_cast<double>(n0);
  mu[1] /= static_cast<double>(n1);

  // Pooled covariance: summed within-class scatter over n0 + n1 - 2.
  Mat scatter = Mat::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < train.size(); ++i) {
    const auto r = train.row(i);
    const Vec dev = Eigen::Map<const Vec>(r.data(), static_cast<Eigen::Index>(d)) - mu[to_int(train.label(i))];
    scatter.selfadjointView<Eigen::Lower>().rankUpdate(dev);
  }
  Mat cov = scatter.selfadjointView<Eigen::Lower>();
  const double dof = n0 + n1 > 2 ? static_cast<double>(n0 + n1 - 2) : 1.0;
  cov /= dof;

  const double target = cov.trace() / static_cast<double>(d);
  cov *= (1.0 - shrinkage);
  cov.diagonal().array() += shrinkage * target;

  const Eigen::LLT<Mat> llt(cov);
  if (llt.info() != Eigen::Success)
    throw TE(TE::Kind::Degenerate, "LDA: regularized covariance is not positive definite");

  const Vec diff = mu[1] - mu[0];
  const Vec w = llt.solve(diff);
  if (!w.allFinite()) throw TE(TE::Kind::Degenerate, "LDA: covariance solve produced non-finite weights");

  LdaModel m;
  m.w.assign(w.data(), w.data() + d);
  m.b = -0.5 * w.dot(mu[0] + mu[1]);
  m.mean0.assign(mu[0].data(), mu[0].data() + d);
  m.mean1.assign(mu[1].data(), mu[1].data() + d);
  m.covariance.resize(d * d);
  Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      m.covariance.data(), static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d)) = cov;
  return m;
}

}  // namespace mibench
