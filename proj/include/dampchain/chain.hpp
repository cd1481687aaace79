#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Core>

#include "dampchain/error.hpp"

namespace dampchain {

inline constexpr double kDefaultRowTol = 1e-12;

/// Dense row-stochastic m x m matrix. Entries lie in [0, 1] and every row sums
/// to one within the tolerance given at construction.
class StochasticMatrix {
public:
    explicit StochasticMatrix(Eigen::MatrixXd values, double row_tol = kDefaultRowTol);

    static StochasticMatrix identity(std::size_t m);

    /// Skips validation. Only for matrices produced by operations that preserve
    /// stochasticity up to rounding (products, convex combinations).
    static StochasticMatrix trusted(Eigen::MatrixXd values);

    std::size_t dim() const noexcept { return static_cast<std::size_t>(p_.rows()); }
    double operator()(std::size_t i, std::size_t j) const {
        return p_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
    Eigen::VectorXd row(std::size_t i) const {
        return p_.row(static_cast<Eigen::Index>(i)).transpose();
    }
    const Eigen::MatrixXd& values() const noexcept { return p_; }

    /// Largest |row sum - 1|.
    double max_row_defect() const;

private:
    struct TrustedTag {};
    StochasticMatrix(Eigen::MatrixXd values, TrustedTag) : p_(std::move(values)) {}

    Eigen::MatrixXd p_;
};

/// Probability vector over states. Zeros are allowed.
class Distribution {
public:
    explicit Distribution(Eigen::VectorXd probs, double row_tol = kDefaultRowTol);

    static Distribution uniform(std::size_t m);
    static Distribution point_mass(std::size_t m, std::size_t state);
    static Distribution trusted(Eigen::VectorXd probs);

    std::size_t dim() const noexcept { return static_cast<std::size_t>(p_.size()); }
    double operator[](std::size_t i) const { return p_(static_cast<Eigen::Index>(i)); }
    const Eigen::VectorXd& values() const noexcept { return p_; }

private:
    struct TrustedTag {};
    Distribution(Eigen::VectorXd probs, TrustedTag) : p_(std::move(probs)) {}

    Eigen::VectorXd p_;
};

/// The common row d of the damping matrix D. All weights strictly positive.
class DampingVector {
public:
    explicit DampingVector(Eigen::VectorXd weights, double row_tol = kDefaultRowTol);

    static DampingVector uniform(std::size_t m);

    std::size_t dim() const noexcept { return static_cast<std::size_t>(d_.size()); }
    double operator[](std::size_t i) const { return d_(static_cast<Eigen::Index>(i)); }
    const Eigen::VectorXd& values() const noexcept { return d_; }

    Distribution as_distribution() const { return Distribution::trusted(d_); }

private:
    Eigen::VectorXd d_;
};

/// P0 together with its damping row and the mixing weight epsilon.
class DampedChain {
public:
    DampedChain(StochasticMatrix p0, DampingVector damping, double epsilon);

    const StochasticMatrix& p0() const noexcept { return p0_; }
    const DampingVector& damping() const noexcept { return damping_; }
    double epsilon() const noexcept { return epsilon_; }

private:
    StochasticMatrix p0_;
    DampingVector damping_;
    double epsilon_;
};

/// (1 - eps) * P0 + eps * D, where every row of D is the damping vector.
StochasticMatrix build_damped_matrix(const DampedChain& chain);

/// P^n by repeated squaring. P^0 is the identity.
StochasticMatrix matrix_power(const StochasticMatrix& p, int n);

/// p * P^n computed by n vector-matrix products.
Distribution propagate(const Distribution& p, const StochasticMatrix& matrix, int n);

/// p * P^l for l = 0..n, inclusive.
std::vector<Distribution> trajectory(const Distribution& p, const StochasticMatrix& matrix,
                                     int n);

/// Half the L1 distance. Works on any pair of equal-length vectors.
double total_variation(const Eigen::VectorXd& p, const Eigen::VectorXd& q);
double tv_distance(const Distribution& p, const Distribution& q);

/// Sum_i min(p_i, q_i), the mass a maximal coupling can put on the diagonal.
double overlap(const Eigen::VectorXd& p, const Eigen::VectorXd& q);

/// Q(A) = min over row pairs of the row overlap.
double matrix_overlap(const Eigen::MatrixXd& a);

void require_same_dim(std::size_t a, std::size_t b, const char* what);

}  // namespace dampchain
