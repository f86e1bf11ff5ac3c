#pragma once

#include <Eigen/Dense>

#include "gbnn/error.hpp"

namespace gbnn {

struct LinearModel {
    Eigen::VectorXd weights;
    double bias = 0;

    double predict(const Eigen::Ref<const Eigen::VectorXd>& x) const { return weights.dot(x) + bias; }

    /// One prediction per row of X.
    Eigen::VectorXd predict_rows(const Eigen::MatrixXd& X) const {
        return (X * weights).array() + bias;
    }
};

inline constexpr double kLinearRidge = 1e-8;

/// Least squares with intercept via ridge-stabilized normal equations.
/// The intercept is not penalized.
inline LinearModel fit_linear_regression(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
    if (X.rows() == 0 || y.size() == 0) throw ArgumentError("fit_linear_regression: empty input");
    if (X.rows() != y.size()) throw DimensionError("fit_linear_regression: rows(X) != len(y)");
    const Eigen::Index p = X.cols();
    Eigen::MatrixXd A(X.rows(), p + 1);
    A.leftCols(p) = X;
    A.col(p).setOnes();
    Eigen::MatrixXd normal = A.transpose() * A;
    normal.diagonal().head(p).array() += kLinearRidge;
    Eigen::VectorXd rhs = A.transpose() * y;
    Eigen::VectorXd beta = normal.ldlt().solve(rhs);
    if (!beta.allFinite()) {
        // Fully singular system (e.g. a single row): fall back to an
        // orthogonal decomposition, which returns the minimum-norm solution.
        beta = normal.completeOrthogonalDecomposition().solve(rhs);
    }
    LinearModel model;
    model.weights = beta.head(p);
    model.bias = beta(p);
    return model;
}

}  // namespace gbnn
