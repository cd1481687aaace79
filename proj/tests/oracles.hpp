#pragma once

// Brute-force reference computations. Deliberately naive and independent of the
// library code paths they check.

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Core>

namespace oracle {

inline Eigen::MatrixXd matmul(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(a.rows(), b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < b.cols(); ++j) {
            double s = 0.0;
            for (Eigen::Index k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, j);
            c(i, j) = s;
        }
    return c;
}

inline Eigen::MatrixXd power(const Eigen::MatrixXd& p, int n) {
    Eigen::MatrixXd r = Eigen::MatrixXd::Identity(p.rows(), p.cols());
    for (int k = 0; k < n; ++k) r = matmul(r, p);
    return r;
}

inline Eigen::VectorXd step(const Eigen::VectorXd& v, const Eigen::MatrixXd& p) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(v.size());
    for (Eigen::Index j = 0; j < p.cols(); ++j)
        for (Eigen::Index i = 0; i < p.rows(); ++i) out(j) += v(i) * p(i, j);
    return out;
}

inline Eigen::VectorXd propagate(Eigen::VectorXd v, const Eigen::MatrixXd& p, int n) {
    for (int k = 0; k < n; ++k) v = step(v, p);
    return v;
}

inline Eigen::MatrixXd damped(const Eigen::MatrixXd& p0, const Eigen::VectorXd& d, double eps) {
    Eigen::MatrixXd p(p0.rows(), p0.cols());
    for (Eigen::Index i = 0; i < p0.rows(); ++i)
        for (Eigen::Index j = 0; j < p0.cols(); ++j) p(i, j) = (1.0 - eps) * p0(i, j) + eps * d(j);
    return p;
}

/// Stationary law of an ergodic aperiodic chain as a row of P^(2^k).
inline Eigen::VectorXd stationary_by_squaring(const Eigen::MatrixXd& p, int squarings = 60) {
    Eigen::MatrixXd q = p;
    for (int k = 0; k < squarings; ++k) q = matmul(q, q);
    Eigen::VectorXd v = q.row(0).transpose();
    return v / v.sum();
}

inline double tv(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < a.size(); ++i) s += std::abs(a(i) - b(i));
    return s / 2.0;
}

inline double row_overlap(const Eigen::MatrixXd& a, Eigen::Index i, Eigen::Index j) {
    double s = 0.0;
    for (Eigen::Index k = 0; k < a.cols(); ++k) s += std::min(a(i, k), a(j, k));
    return s;
}

/// Q(A) by enumerating every ordered pair of rows (including i == j).
inline double matrix_overlap(const Eigen::MatrixXd& a) {
    double q = 1.0;
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.rows(); ++j) q = std::min(q, row_overlap(a, i, j));
    return q;
}

/// Delta_N straight from the half-L1 form: (max_ij tv(row_i, row_j))^(1/N).
inline double delta_n(const Eigen::MatrixXd& p, int N) {
    const Eigen::MatrixXd pn = power(p, N);
    double worst = 0.0;
    for (Eigen::Index i = 0; i < pn.rows(); ++i)
        for (Eigen::Index j = 0; j < pn.rows(); ++j)
            worst = std::max(worst, tv(pn.row(i).transpose(), pn.row(j).transpose()));
    return std::pow(worst, 1.0 / N);
}

inline double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

/// Taylor coefficients of eps * sum_l (1-eps)^l d P0^l around eps = 0, by summing
/// (-1)^(k-1) C(l, k-1) (d P0^l - pi0) over l. Needs a geometrically mixing P0.
/// The deviation is propagated on its own, with its eigenvalue-1 component projected
/// out each step, so rounding in pi0 cannot feed the binomial weights.
inline Eigen::MatrixXd expansion_by_series(const Eigen::MatrixXd& p0, const Eigen::VectorXd& d,
                                           const Eigen::VectorXd& pi0, int order, int terms = 600) {
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(order, p0.rows());
    Eigen::VectorXd dev = d - pi0;
    for (int l = 0; l < terms; ++l) {
        for (int k = 1; k <= order; ++k) {
            const double w = ((k - 1) % 2 == 0 ? 1.0 : -1.0) * binomial(l, k - 1);
            out.row(k - 1) += w * dev.transpose();
        }
        dev = step(dev, p0);
        dev -= dev.sum() * pi0;
    }
    return out;
}

}  // namespace oracle
