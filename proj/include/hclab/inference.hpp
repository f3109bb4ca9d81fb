#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <string>
#include <vector>

#include "hclab/dynamics.hpp"
#include "hclab/network.hpp"

namespace hclab {

/// Regressor matrix with named columns.
struct DesignMatrix {
    Eigen::MatrixXd values;
    std::vector<std::string> names;

    std::size_t rows() const noexcept { return static_cast<std::size_t>(values.rows()); }
    std::size_t columns() const noexcept { return static_cast<std::size_t>(values.cols()); }
};

enum class FitKind { ols, logistic };

struct RegressionFit {
    FitKind kind = FitKind::ols;
    std::vector<std::string> names;
    Eigen::VectorXd coefficients;
    Eigen::MatrixXd covariance;
    Eigen::VectorXd standard_errors;
    /// t statistics for OLS, Wald z for logistic.
    Eigen::VectorXd statistics;
    Eigen::VectorXd residuals;
    /// Residual degrees of freedom (OLS); 0 for logistic fits.
    double dof = 0.0;
    bool converged = true;
    /// Logistic only: coefficients diverged (complete or quasi-complete separation).
    bool separated = false;
    int iterations = 0;
    double log_likelihood = 0.0;
};

/// Relative tolerance on |R(k,k)| used to detect rank deficiency.
inline constexpr double kRankTolerance = 1e-10;

/// Least squares via column-pivoted QR. Covariance s^2 (X'X)^-1 with
/// s^2 = RSS / (rows - columns).
/// Throws InsufficientDataError when rows <= columns, SingularDesignError
/// when X is rank deficient, DimensionError when y has the wrong length.
RegressionFit ols(const DesignMatrix& X, const Eigen::VectorXd& y);

struct ContrastResult {
    double estimate = 0.0;
    double standard_error = 0.0;
    /// estimate / standard_error, defined as 0 when the standard error is 0.
    double statistic = 0.0;
};

ContrastResult contrast(const RegressionFit& fit, const Eigen::VectorXd& c);

struct LogisticOptions {
    int max_iter = 50;
    double tol = 1e-10;
    /// |coefficient| beyond this is treated as divergence.
    double separation_threshold = 30.0;
};

/// Logistic regression (logit link) by iteratively reweighted least squares.
/// Converges when the largest coefficient change falls below tol. Separation
/// is reported through `separated`, not thrown. Covariance is the inverse
/// Fisher information at the final iterate.
RegressionFit logistic_irls(const DesignMatrix& X, const Eigen::VectorXd& y, const LogisticOptions& options = {});

/// Bernoulli log-likelihood of a logit model.
double logistic_log_likelihood(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const Eigen::VectorXd& beta);

struct Interval {
    double lower = 0.0;
    double upper = 0.0;
};

/// Wald interval estimate +/- z * SE (z = 1.96 gives the 95% interval).
Interval wald_interval(const RegressionFit& fit, std::size_t k, double z = 1.96);

struct AsymmetryDesignOptions {
    /// Drop nodes that neither nominate nor are nominated.
    bool exclude_isolates = false;
    /// Append the node's own Y(0) as an extra control column.
    bool own_lag0 = false;
};

struct AsymmetryDesign {
    DesignMatrix X;
    Eigen::VectorXd y;
    std::vector<NodeId> nodes;  // node behind each row
};

/// Column order of the asymmetry regression: alpha, beta1..beta5.
inline const std::vector<std::string>& asymmetry_column_names() {
    static const std::vector<std::string> names{"intercept",   "own_t1",      "nominee_t1",
                                                "nominator_t1", "nominee_t0", "nominator_t0"};
    return names;
}

/// Response Y(2); columns [1, Y_i(1), sum_j A_ij Y_j(1), sum_j A_ji Y_j(1),
/// sum_j A_ij Y_j(0), sum_j A_ji Y_j(0)] (+ Y_i(0) when own_lag0).
AsymmetryDesign build_asymmetry_design(const SocialNetwork& net, const OutcomePanel& panel,
                                       const AsymmetryDesignOptions& options = {});

}  // namespace hclab
