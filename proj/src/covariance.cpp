#include "assure/covariance.hpp"

#include <cmath>

namespace assure {

CovarianceMatrix::CovarianceMatrix(Eigen::MatrixXd entries) : entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols() || entries_.rows() == 0) {
        throw std::invalid_argument("CovarianceMatrix: matrix must be square and nonempty");
    }
    const double scale = entries_.cwiseAbs().maxCoeff();
    const double asym = (entries_ - entries_.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-10 * std::max(scale, 1.0)) {
        throw NotPsdError("CovarianceMatrix: matrix is not symmetric");
    }
    // Use the exactly symmetric part so downstream factorizations are stable.
    entries_ = 0.5 * (entries_ + entries_.transpose().eval());
}

CovarianceMatrix CovarianceMatrix::identity(Eigen::Index dim) {
    return CovarianceMatrix(Eigen::MatrixXd::Identity(dim, dim));
}

Eigen::MatrixXd CovarianceMatrix::sampling_factor() const {
    const Eigen::Index d = dimension();
    if (entries_.isZero(0.0)) {
        return Eigen::MatrixXd::Zero(d, d);
    }
    // Cholesky covers the common positive-definite case cheaply.
    Eigen::LLT<Eigen::MatrixXd> llt(entries_);
    if (llt.info() == Eigen::Success) {
        return llt.matrixL();
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(entries_);
    if (es.info() != Eigen::Success) {
        throw NotPsdError("CovarianceMatrix: eigendecomposition failed");
    }
    const Eigen::VectorXd evals = es.eigenvalues();
    const double max_ev = evals.maxCoeff();
    if (evals.minCoeff() < -1e-10 * std::max(max_ev, 0.0)) {
        throw NotPsdError("CovarianceMatrix: matrix is not positive semidefinite");
    }
    Eigen::VectorXd scaled = evals.cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * scaled.asDiagonal();
}

}  // namespace assure
