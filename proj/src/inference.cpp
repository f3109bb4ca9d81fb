#include "hclab/inference.hpp"

#include <cmath>
#include <limits>

#include "hclab/errors.hpp"

namespace hclab {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

struct QrSolve {
    Eigen::ColPivHouseholderQR<MatrixXd> qr;
    /// (A'A)^-1 in original column order.
    MatrixXd inverse_gram;
};

bool full_rank(const MatrixXd& A) {
    const Eigen::ColPivHouseholderQR<MatrixXd> qr(A);
    const auto diag = qr.matrixR().diagonal().head(A.cols()).cwiseAbs();
    const double largest = diag.maxCoeff();
    return largest > 0.0 && diag.minCoeff() > kRankTolerance * largest;
}

// First column, in the caller's order, spanned by the columns before it.
Eigen::Index first_dependent_column(const MatrixXd& A) {
    for (Eigen::Index k = 0; k < A.cols(); ++k)
        if (!full_rank(A.leftCols(k + 1))) return k;
    return A.cols() - 1;
}

// Factorizes A, checks rank, and returns (A'A)^-1 = P R^-1 R^-T P'.
QrSolve factorize(const MatrixXd& A, const std::vector<std::string>& names) {
    QrSolve out{Eigen::ColPivHouseholderQR<MatrixXd>(A), {}};
    const auto& qr = out.qr;
    const Eigen::Index p = A.cols();
    const MatrixXd R = qr.matrixR().topLeftCorner(p, p).triangularView<Eigen::Upper>();
    double largest = 0.0;
    for (Eigen::Index k = 0; k < p; ++k) largest = std::max(largest, std::abs(R(k, k)));
    for (Eigen::Index k = 0; k < p; ++k) {
        if (largest == 0.0 || std::abs(R(k, k)) <= kRankTolerance * largest) {
            const auto col = static_cast<std::size_t>(first_dependent_column(A));
            throw SingularDesignError(col, col < names.size() ? names[col] : std::string());
        }
    }
    const MatrixXd R_inv = R.triangularView<Eigen::Upper>().solve(MatrixXd::Identity(p, p));
    const MatrixXd permuted = R_inv * R_inv.transpose();
    const auto& perm = qr.colsPermutation();
    out.inverse_gram = perm * permuted * perm.transpose();
    return out;
}

std::vector<std::string> column_names(const DesignMatrix& X) {
    if (X.names.size() == X.columns()) return X.names;
    std::vector<std::string> names;
    for (std::size_t k = 0; k < X.columns(); ++k) names.push_back("x" + std::to_string(k));
    return names;
}

void finish_statistics(RegressionFit& fit) {
    fit.standard_errors = fit.covariance.diagonal().cwiseMax(0.0).cwiseSqrt();
    fit.statistics.resize(fit.coefficients.size());
    for (Eigen::Index k = 0; k < fit.coefficients.size(); ++k) {
        const double se = fit.standard_errors(k);
        fit.statistics(k) = se > 0.0 ? fit.coefficients(k) / se : 0.0;
    }
}

}  // namespace

RegressionFit ols(const DesignMatrix& X, const VectorXd& y) {
    if (static_cast<std::size_t>(y.size()) != X.rows()) throw DimensionError("ols: response length != design rows");
    if (X.rows() <= X.columns())
        throw InsufficientDataError("ols: need more rows (" + std::to_string(X.rows()) + ") than columns (" +
                                    std::to_string(X.columns()) + ")");
    RegressionFit fit;
    fit.kind = FitKind::ols;
    fit.names = column_names(X);
    QrSolve solved = factorize(X.values, fit.names);
    fit.coefficients = solved.qr.solve(y);
    fit.residuals = y - X.values * fit.coefficients;
    fit.dof = static_cast<double>(X.rows() - X.columns());
    const double s2 = fit.residuals.squaredNorm() / fit.dof;
    fit.covariance = s2 * solved.inverse_gram;
    fit.covariance = 0.5 * (fit.covariance + fit.covariance.transpose());
    finish_statistics(fit);
    return fit;
}

ContrastResult contrast(const RegressionFit& fit, const VectorXd& c) {
    if (c.size() != fit.coefficients.size()) throw DimensionError("contrast: vector length != coefficient count");
    ContrastResult r;
    r.estimate = c.dot(fit.coefficients);
    const double variance = c.dot(fit.covariance * c);
    r.standard_error = std::sqrt(std::max(variance, 0.0));
    r.statistic = r.standard_error > 0.0 ? r.estimate / r.standard_error : 0.0;
    return r;
}

double logistic_log_likelihood(const MatrixXd& X, const VectorXd& y, const VectorXd& beta) {
    const VectorXd eta = X * beta;
    double ll = 0.0;
    for (Eigen::Index i = 0; i < eta.size(); ++i) {
        // log(1 + e^eta) computed without overflow
        const double e = eta(i);
        const double softplus = e > 0.0 ? e + std::log1p(std::exp(-e)) : std::log1p(std::exp(e));
        ll += y(i) * e - softplus;
    }
    return ll;
}

RegressionFit logistic_irls(const DesignMatrix& X, const VectorXd& y, const LogisticOptions& options) {
    if (static_cast<std::size_t>(y.size()) != X.rows())
        throw DimensionError("logistic_irls: response length != design rows");
    for (Eigen::Index i = 0; i < y.size(); ++i)
        if (y(i) != 0.0 && y(i) != 1.0) throw ArgumentError("logistic_irls: response must be binary");
    if (X.rows() < X.columns()) throw InsufficientDataError("logistic_irls: fewer rows than columns");

    RegressionFit fit;
    fit.kind = FitKind::logistic;
    fit.names = column_names(X);
    // Rank is a property of X alone; check it before iterating.
    factorize(X.values, fit.names);

    const Eigen::Index n = X.values.rows();
    const Eigen::Index p = X.values.cols();
    VectorXd beta = VectorXd::Zero(p);
    VectorXd weights(n);
    QrSolve last;
    fit.converged = false;

    for (int iter = 1; iter <= options.max_iter; ++iter) {
        fit.iterations = iter;
        const VectorXd eta = X.values * beta;
        VectorXd working(n);
        bool underflow = false;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double mu = logistic(eta(i));
            const double w = mu * (1.0 - mu);
            if (w < std::numeric_limits<double>::min() * 1e6) underflow = true;
            weights(i) = std::max(w, std::numeric_limits<double>::min());
            working(i) = eta(i) + (y(i) - mu) / weights(i);
        }
        if (underflow) {
            fit.separated = true;
            break;
        }
        const VectorXd root_w = weights.cwiseSqrt();
        const MatrixXd weighted_X = root_w.asDiagonal() * X.values;
        const VectorXd weighted_z = root_w.cwiseProduct(working);
        try {
            last = factorize(weighted_X, fit.names);
        } catch (const SingularDesignError&) {
            fit.separated = true;
            break;
        }
        const VectorXd next = last.qr.solve(weighted_z);
        const double change = (next - beta).cwiseAbs().maxCoeff();
        beta = next;
        if (beta.cwiseAbs().maxCoeff() > options.separation_threshold) {
            fit.separated = true;
            break;
        }
        if (change < options.tol) {
            fit.converged = true;
            break;
        }
    }

    fit.coefficients = beta;
    // Fisher information at the final iterate.
    const VectorXd eta = X.values * beta;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double mu = logistic(eta(i));
        weights(i) = mu * (1.0 - mu);
    }
    try {
        const MatrixXd weighted_X = weights.cwiseSqrt().asDiagonal() * X.values;
        fit.covariance = factorize(weighted_X, fit.names).inverse_gram;
        fit.covariance = 0.5 * (fit.covariance + fit.covariance.transpose());
    } catch (const SingularDesignError&) {
        fit.separated = true;
        fit.covariance = MatrixXd::Constant(p, p, std::numeric_limits<double>::infinity());
    }
    VectorXd mu(n);
    for (Eigen::Index i = 0; i < n; ++i) mu(i) = logistic(eta(i));
    fit.residuals = y - mu;
    fit.log_likelihood = logistic_log_likelihood(X.values, y, beta);
    if (fit.separated) fit.converged = false;
    finish_statistics(fit);
    return fit;
}

Interval wald_interval(const RegressionFit& fit, std::size_t k, double z) {
    const auto idx = static_cast<Eigen::Index>(k);
    if (idx >= fit.coefficients.size()) throw DimensionError("wald_interval: coefficient index out of range");
    const double half = z * fit.standard_errors(idx);
    return {fit.coefficients(idx) - half, fit.coefficients(idx) + half};
}

AsymmetryDesign build_asymmetry_design(const SocialNetwork& net, const OutcomePanel& panel,
                                       const AsymmetryDesignOptions& options) {
    if (panel.kind() != OutcomeKind::continuous) throw ArgumentError("asymmetry design needs a continuous panel");
    if (panel.slices() != 3) throw DimensionError("asymmetry design needs exactly three time slices");
    if (panel.nodes() != net.size()) throw DimensionError("asymmetry design: panel and network sizes differ");

    const auto nominee_t1 = exposure(net, Direction::out, panel.slice(1));
    const auto nominator_t1 = exposure(net, Direction::in, panel.slice(1));
    const auto nominee_t0 = exposure(net, Direction::out, panel.slice(0));
    const auto nominator_t0 = exposure(net, Direction::in, panel.slice(0));

    AsymmetryDesign design;
    for (NodeId i = 0; i < net.size(); ++i) {
        if (options.exclude_isolates && net.out_degree(i) == 0 && net.in_degree(i) == 0) continue;
        design.nodes.push_back(i);
    }
    const auto rows = static_cast<Eigen::Index>(design.nodes.size());
    const Eigen::Index cols = options.own_lag0 ? 7 : 6;
    design.X.values.resize(rows, cols);
    design.X.names = asymmetry_column_names();
    if (options.own_lag0) design.X.names.push_back("own_t0");
    design.y.resize(rows);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const NodeId i = design.nodes[static_cast<std::size_t>(r)];
        design.X.values(r, 0) = 1.0;
        design.X.values(r, 1) = panel.at(1, i);
        design.X.values(r, 2) = nominee_t1[i];
        design.X.values(r, 3) = nominator_t1[i];
        design.X.values(r, 4) = nominee_t0[i];
        design.X.values(r, 5) = nominator_t0[i];
        if (options.own_lag0) design.X.values(r, 6) = panel.at(0, i);
        design.y(r) = panel.at(2, i);
    }
    return design;
}

}  // namespace hclab
