#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dampchain/chain.hpp"
#include "dampchain/structure.hpp"

namespace dampchain {

/// Limit value of eps * n. Infinity is its own state so exp(-t) is exactly 0.
class MixingTime {
public:
    explicit MixingTime(double t);
    static MixingTime infinity();

    bool is_infinite() const noexcept { return infinite_; }
    double value() const noexcept { return t_; }  // meaningless when infinite
    double decay() const;                         // exp(-t)
    std::string str() const;

private:
    MixingTime() = default;
    double t_ = 0.0;
    bool infinite_ = false;
};

struct TriangularLimit {
    MixingTime t;
    Eigen::VectorXd pi0_p;  // limit started from p
    Eigen::VectorXd pi0_d;  // limit started from d
    double weight = 1.0;    // exp(-t)
    Eigen::VectorXd pi_of_t;
};

TriangularLimit triangular_limit(const StochasticMatrix& p0, const DampingVector& d,
                                 const Distribution& p, const ChainStructure& s, MixingTime t);

/// Per-state upper bound on |p_eps,p,k(n) - pi(t)_k|. Throws ConditionViolated
/// when Delta_N >= 1 on some class.
Eigen::VectorXd triangular_bound(const StochasticMatrix& p0, const DampingVector& d,
                                 const Distribution& p, const ChainStructure& s, double epsilon,
                                 int n, int N, MixingTime t);

/// n = round(t / eps).
int steps_for(double t, double epsilon);

struct SweepRow {
    int n = 0;
    double eps_n = 0.0;
    Eigen::VectorXd trajectory;  // p P_eps^n
    Eigen::VectorXd limit;       // pi(eps n)
    double tracked_value = 0.0;
    double tracked_limit = 0.0;
    double relative_error = 0.0;  // |pi(t)_k - pi_{0,d,k}| / pi_{0,d,k} at the tracked state
    double max_deviation = 0.0;   // max_k |trajectory_k - limit_k|
    std::optional<Eigen::VectorXd> bound;
};

struct SweepOptions {
    std::size_t tracked_state = 0;
    int N = 0;  // 0 picks the smallest N <= 64 with Delta_N < 1 on every class
};

std::vector<SweepRow> triangular_sweep(const StochasticMatrix& p0, const DampingVector& d,
                                       const Distribution& p, const ChainStructure& s,
                                       double epsilon, const std::vector<int>& n_grid,
                                       const SweepOptions& opts = {});

/// Smallest N in 1..n_max with Delta^(j)_N < 1 on all classes, or nullopt.
std::optional<int> smallest_contracting_N(const StochasticMatrix& p0, const ChainStructure& s,
                                          int n_max = 64);

}  // namespace dampchain
