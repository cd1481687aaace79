#include "dampchain/stationary.hpp"

#include <cmath>

#include <Eigen/LU>

namespace dampchain {

std::string_view to_string(StationaryMethod m) {
    switch (m) {
        case StationaryMethod::Direct: return "direct";
        case StationaryMethod::Power: return "power";
        case StationaryMethod::Series: return "series";
    }
    return "unknown";
}

double stationary_residual(const Eigen::VectorXd& pi, const StochasticMatrix& p) {
    const Eigen::RowVectorXd next = pi.transpose() * p.values();
    return (next.transpose() - pi).cwiseAbs().maxCoeff();
}

StationarySolution stationary_direct(const StochasticMatrix& p) {
    const auto m = static_cast<Eigen::Index>(p.dim());
    Eigen::MatrixXd a = p.values().transpose() - Eigen::MatrixXd::Identity(m, m);
    a.row(m - 1).setOnes();
    Eigen::VectorXd b = Eigen::VectorXd::Zero(m);
    b(m - 1) = 1.0;

    Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
    const double rcond = lu.rcond();
    if (!(rcond > 1e-12)) {
        throw Error(ErrorCode::SingularSystem,
                    "stationary system is singular (several closed classes?); "
                    "solve per class with limit_stationary");
    }
    Eigen::VectorXd pi = lu.solve(b);
    for (Eigen::Index i = 0; i < m; ++i) {
        if (pi(i) < 0.0) {
            if (pi(i) < -1e-9) {
                throw Error(ErrorCode::SingularSystem,
                            "stationary solve produced a negative entry");
            }
            pi(i) = 0.0;
        }
    }
    pi /= pi.sum();
    StationarySolution out{Distribution::trusted(pi), StationaryMethod::Direct, 0, 0.0};
    out.residual = stationary_residual(pi, p);
    return out;
}

StationarySolution stationary_power(const StochasticMatrix& p, const Distribution& start,
                                    const PowerOptions& opts) {
    require_same_dim(p.dim(), start.dim(), "power method");
    if (!(opts.tol > 0.0)) throw Error(ErrorCode::InvalidInput, "power method tol must be > 0");
    Eigen::RowVectorXd cur = start.values().transpose();
    long iter = 0;
    double delta = 0.0;
    while (true) {
        Eigen::RowVectorXd next = cur * p.values();
        delta = 0.5 * (next - cur).cwiseAbs().sum();
        if (delta < opts.tol) break;
        if (iter >= opts.max_iter) {
            throw PowerIterationError("power method did not converge within max_iter",
                                      cur.transpose(), delta, iter);
        }
        cur = std::move(next);
        ++iter;
    }
    Eigen::VectorXd pi = cur.transpose();
    pi /= pi.sum();
    StationarySolution out{Distribution::trusted(pi), StationaryMethod::Power, iter, 0.0};
    out.residual = stationary_residual(pi, p);
    return out;
}

StationarySolution stationary_series(const StochasticMatrix& p0, const DampingVector& d,
                                     double epsilon, double tol) {
    require_same_dim(p0.dim(), d.dim(), "series");
    if (!(epsilon > 0.0 && epsilon <= 1.0)) {
        throw Error(ErrorCode::InvalidInput, "series representation needs epsilon in (0,1]");
    }
    if (!(tol > 0.0)) throw Error(ErrorCode::InvalidInput, "series tol must be > 0");
    Eigen::RowVectorXd traj = d.values().transpose();
    Eigen::RowVectorXd acc = Eigen::RowVectorXd::Zero(traj.size());
    double weight = epsilon;  // eps (1-eps)^l
    double tail = 1.0 - epsilon;  // (1-eps)^(l+1)
    long terms = 0;
    while (true) {
        acc += weight * traj;
        ++terms;
        if (tail < tol) break;
        traj = traj * p0.values();
        weight *= (1.0 - epsilon);
        tail *= (1.0 - epsilon);
    }
    Eigen::VectorXd pi = acc.transpose();
    pi /= pi.sum();
    const StochasticMatrix pe = build_damped_matrix(DampedChain(p0, d, epsilon));
    StationarySolution out{Distribution::trusted(pi), StationaryMethod::Series, terms, 0.0};
    out.residual = stationary_residual(pi, pe);
    return out;
}

Distribution limit_stationary(const StochasticMatrix& p0, const Distribution& p,
                              const ChainStructure& s) {
    require_same_dim(p0.dim(), p.dim(), "limit stationary");
    if (s.regime == Regime::Unsupported) {
        throw Error(ErrorCode::RegimeMismatch, "limit stationary: " + s.diagnostic);
    }
    if (s.regime == Regime::Regular) return stationary_direct(p0).pi;
    const std::vector<double> f = class_mass(p, s);
    Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(p0.dim()));
    for (std::size_t j = 0; j < s.classes.size(); ++j) {
        if (f[j] == 0.0) continue;
        const auto& cls = s.classes[j];
        const Distribution local = stationary_direct(restrict_matrix(p0, cls)).pi;
        for (std::size_t a = 0; a < cls.states.size(); ++a) {
            out(static_cast<Eigen::Index>(cls.states[a])) = f[j] * local[a];
        }
    }
    return Distribution::trusted(std::move(out));
}

}  // namespace dampchain
