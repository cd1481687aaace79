#include "dampchain/chain.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dampchain {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidInput: return "invalid_input";
        case ErrorCode::DimensionMismatch: return "dimension_mismatch";
        case ErrorCode::SingularSystem: return "singular_system";
        case ErrorCode::NotConverged: return "not_converged";
        case ErrorCode::IllConditioned: return "ill_conditioned";
        case ErrorCode::NonSemisimple: return "non_semisimple";
        case ErrorCode::RegimeMismatch: return "regime_mismatch";
        case ErrorCode::ConditionViolated: return "condition_violated";
        case ErrorCode::Io: return "io";
    }
    return "unknown";
}

void require_same_dim(std::size_t a, std::size_t b, const char* what) {
    if (a != b) {
        std::ostringstream os;
        os << what << ": dimension mismatch (" << a << " vs " << b << ")";
        throw Error(ErrorCode::DimensionMismatch, os.str());
    }
}

namespace {

void check_probability_vector(const Eigen::VectorXd& v, double row_tol, bool strictly_positive,
                              const char* what) {
    if (v.size() == 0) throw Error(ErrorCode::InvalidInput, std::string(what) + ": empty");
    double sum = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double x = v(i);
        if (!std::isfinite(x)) {
            throw Error(ErrorCode::InvalidInput,
                        std::string(what) + ": non-finite entry at " + std::to_string(i + 1));
        }
        if (strictly_positive ? !(x > 0.0) : (x < 0.0)) {
            throw Error(ErrorCode::InvalidInput,
                        std::string(what) + ": entry " + std::to_string(i + 1) +
                            (strictly_positive ? " must be > 0" : " is negative"));
        }
        if (x > 1.0 + row_tol) {
            throw Error(ErrorCode::InvalidInput,
                        std::string(what) + ": entry " + std::to_string(i + 1) + " exceeds 1");
        }
        sum += x;
    }
    if (std::abs(sum - 1.0) > row_tol) {
        std::ostringstream os;
        os.precision(17);
        os << what << ": entries sum to " << sum << ", expected 1";
        throw Error(ErrorCode::InvalidInput, os.str());
    }
}

}  // namespace

StochasticMatrix::StochasticMatrix(Eigen::MatrixXd values, double row_tol) : p_(std::move(values)) {
    if (p_.rows() == 0 || p_.rows() != p_.cols()) {
        throw Error(ErrorCode::DimensionMismatch, "stochastic matrix must be square and non-empty");
    }
    for (Eigen::Index i = 0; i < p_.rows(); ++i) {
        double sum = 0.0;
        for (Eigen::Index j = 0; j < p_.cols(); ++j) {
            const double x = p_(i, j);
            if (!std::isfinite(x) || x < 0.0 || x > 1.0 + row_tol) {
                std::ostringstream os;
                os << "stochastic matrix: entry (" << i + 1 << "," << j + 1 << ") = " << x
                   << " outside [0,1]";
                throw Error(ErrorCode::InvalidInput, os.str());
            }
            sum += x;
        }
        if (std::abs(sum - 1.0) > row_tol) {
            std::ostringstream os;
            os.precision(17);
            os << "stochastic matrix: row " << i + 1 << " sums to " << sum;
            throw Error(ErrorCode::InvalidInput, os.str());
        }
    }
}

StochasticMatrix StochasticMatrix::identity(std::size_t m) {
    const auto n = static_cast<Eigen::Index>(m);
    return StochasticMatrix(Eigen::MatrixXd::Identity(n, n), TrustedTag{});
}

StochasticMatrix StochasticMatrix::trusted(Eigen::MatrixXd values) {
    return StochasticMatrix(std::move(values), TrustedTag{});
}

double StochasticMatrix::max_row_defect() const {
    return (p_.rowwise().sum().array() - 1.0).abs().maxCoeff();
}

Distribution::Distribution(Eigen::VectorXd probs, double row_tol) : p_(std::move(probs)) {
    check_probability_vector(p_, row_tol, false, "distribution");
}

Distribution Distribution::uniform(std::size_t m) {
    const auto n = static_cast<Eigen::Index>(m);
    return Distribution(Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(m)), TrustedTag{});
}

Distribution Distribution::point_mass(std::size_t m, std::size_t state) {
    if (state >= m) throw Error(ErrorCode::InvalidInput, "point mass state out of range");
    Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
    v(static_cast<Eigen::Index>(state)) = 1.0;
    return Distribution(std::move(v), TrustedTag{});
}

Distribution Distribution::trusted(Eigen::VectorXd probs) {
    return Distribution(std::move(probs), TrustedTag{});
}

DampingVector::DampingVector(Eigen::VectorXd weights, double row_tol) : d_(std::move(weights)) {
    check_probability_vector(d_, row_tol, true, "damping vector");
}

DampingVector DampingVector::uniform(std::size_t m) {
    const auto n = static_cast<Eigen::Index>(m);
    return DampingVector(Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(m)));
}

DampedChain::DampedChain(StochasticMatrix p0, DampingVector damping, double epsilon)
    : p0_(std::move(p0)), damping_(std::move(damping)), epsilon_(epsilon) {
    require_same_dim(p0_.dim(), damping_.dim(), "damped chain");
    if (!(epsilon_ >= 0.0 && epsilon_ <= 1.0)) {
        throw Error(ErrorCode::InvalidInput, "epsilon must lie in [0,1]");
    }
}

StochasticMatrix build_damped_matrix(const DampedChain& chain) {
    const double eps = chain.epsilon();
    Eigen::MatrixXd out = (1.0 - eps) * chain.p0().values();
    out.rowwise() += eps * chain.damping().values().transpose();
    return StochasticMatrix(std::move(out));
}

StochasticMatrix matrix_power(const StochasticMatrix& p, int n) {
    if (n < 0) throw Error(ErrorCode::InvalidInput, "matrix power must be >= 0");
    const auto m = static_cast<Eigen::Index>(p.dim());
    Eigen::MatrixXd result = Eigen::MatrixXd::Identity(m, m);
    Eigen::MatrixXd base = p.values();
    bool first = true;
    while (n > 0) {
        if (n & 1) {
            if (first) {
                result = base;
                first = false;
            } else {
                result = result * base;
            }
        }
        n >>= 1;
        if (n > 0) base = base * base;
    }
    return StochasticMatrix::trusted(std::move(result));
}

Distribution propagate(const Distribution& p, const StochasticMatrix& matrix, int n) {
    require_same_dim(p.dim(), matrix.dim(), "propagate");
    if (n < 0) throw Error(ErrorCode::InvalidInput, "step count must be >= 0");
    Eigen::RowVectorXd v = p.values().transpose();
    for (int k = 0; k < n; ++k) v = v * matrix.values();
    return Distribution::trusted(v.transpose());
}

std::vector<Distribution> trajectory(const Distribution& p, const StochasticMatrix& matrix,
                                     int n) {
    require_same_dim(p.dim(), matrix.dim(), "trajectory");
    if (n < 0) throw Error(ErrorCode::InvalidInput, "step count must be >= 0");
    std::vector<Distribution> out;
    out.reserve(static_cast<std::size_t>(n) + 1);
    out.push_back(p);
    Eigen::RowVectorXd v = p.values().transpose();
    for (int k = 0; k < n; ++k) {
        v = v * matrix.values();
        out.push_back(Distribution::trusted(v.transpose()));
    }
    return out;
}

double total_variation(const Eigen::VectorXd& p, const Eigen::VectorXd& q) {
    require_same_dim(static_cast<std::size_t>(p.size()), static_cast<std::size_t>(q.size()),
                     "total variation");
    return 0.5 * (p - q).cwiseAbs().sum();
}

double tv_distance(const Distribution& p, const Distribution& q) {
    return total_variation(p.values(), q.values());
}

double overlap(const Eigen::VectorXd& p, const Eigen::VectorXd& q) {
    require_same_dim(static_cast<std::size_t>(p.size()), static_cast<std::size_t>(q.size()),
                     "overlap");
    return p.cwiseMin(q).sum();
}

double matrix_overlap(const Eigen::MatrixXd& a) {
    double best = 1.0;
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = i + 1; j < a.rows(); ++j) {
            best = std::min(best, a.row(i).cwiseMin(a.row(j)).sum());
        }
    }
    return std::clamp(best, 0.0, 1.0);
}

}  // namespace dampchain
