#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "dampchain/chain.hpp"
#include "dampchain/structure.hpp"

namespace dampchain {

struct CouplingJoint {
    Eigen::MatrixXd joint;  // joint(a, b) = P{X' = a, X'' = b}
    double diagonal_mass = 0.0;
};

/// Joint law with marginals p1, p2 and diagonal mass sum_i min(p1_i, p2_i).
CouplingJoint maximal_coupling(const Eigen::VectorXd& p1, const Eigen::VectorXd& p2);
CouplingJoint maximal_coupling(const Distribution& p1, const Distribution& p2);

struct ErgodicityReport {
    int N = 1;
    double q_n = 0.0;      // Q(P^N)
    double delta_n = 0.0;  // (1 - Q_N)^(1/N)
    bool degenerate = false;  // 1 - Q_N == 0, so delta^0 counts as 1
};

ErgodicityReport ergodicity_coefficient(const StochasticMatrix& p, int N);
/// N = 1..n_max, reusing powers.
std::vector<ErgodicityReport> ergodicity_sequence(const StochasticMatrix& p, int n_max);
/// Delta^(j)_N on each closed class.
std::vector<ErgodicityReport> class_ergodicity(const StochasticMatrix& p0, const ChainStructure& s,
                                               int N);

// ---- deviation bounds |pi_eps - pi_0|

struct DeviationConstants {
    double C = 0.0;
    double lambda = 0.0;
    int horizon = 0;      // 0 when user supplied
    bool estimated = false;
};

/// lambda = |rho_2|, C = max_{1<=n<=H} max_ij |p_ij(n) - pi_j| / lambda^n. Singular
/// chains take the max over classes.
DeviationConstants estimate_deviation_constants(const StochasticMatrix& p0,
                                                const ChainStructure& s, int horizon = 200);

/// eps (|d_j - pi_j| + C lambda / (1 - lambda)) per state. Pass pi_0 for the
/// regular regime and pi_{0,d} (the limit started from d) for the singular one.
Eigen::VectorXd bound_theorem1(double C, double lambda, const DampingVector& d,
                               const Distribution& pi0, double epsilon);
Eigen::VectorXd bound_theorem2(double C, double lambda, const DampingVector& d,
                               const Distribution& pi0d, double epsilon);

// ---- rate bounds |p_eps,p(n) - pi_eps|

enum class Theorem { T1, T2, T5, T6, T7 };
std::string_view to_string(Theorem t);

struct RateBound {
    Theorem theorem = Theorem::T5;
    double epsilon = 0.0;
    int N = 1;
    double q_eps_p = 0.0;  // sum_i min(p_i, pi_eps,i)
    double q_n = 0.0;      // Q(P0^N)
    double delta_n = 0.0;

    double evaluate(int n) const;
};

RateBound bound_theorem5(const StochasticMatrix& p0, const Distribution& p,
                         const Distribution& pi_eps, double epsilon);
RateBound bound_theorem6(const StochasticMatrix& p0, const Distribution& p,
                         const Distribution& pi_eps, double epsilon, int N);

struct SingularClassTerms {
    double f_d = 0.0;
    double f_p = 0.0;
    double overlap_pi = 1.0;  // Q(pi_eps^(j), pi_0^(j))
    double overlap_p = 1.0;   // Q(p^(j), pi_0^(j)); unused when f_p = 0
    double overlap_d = 1.0;   // Q(d^(j), pi_0^(j))
    ErgodicityReport ergodicity;
    Eigen::VectorXd pi0_local;
};

/// Per-class quantities shared by the singular rate bound and the triangular bound.
/// Throws ConditionViolated when some Delta^(j)_N >= 1.
std::vector<SingularClassTerms> singular_class_terms(const StochasticMatrix& p0,
                                                     const DampingVector& d, const Distribution& p,
                                                     const Distribution* pi_eps,
                                                     const ChainStructure& s, int N);

struct SingularRateBound {
    double epsilon = 0.0;
    int N = 1;
    std::vector<SingularClassTerms> classes;
    std::vector<std::size_t> class_of;  // per state
    std::vector<std::size_t> local_index;

    double evaluate(int n, std::size_t k) const;
    Eigen::VectorXd evaluate_all(int n) const;
};

SingularRateBound bound_theorem7(const StochasticMatrix& p0, const DampingVector& d,
                                 const Distribution& p, const Distribution& pi_eps,
                                 double epsilon, int N, const ChainStructure& s);

// ---- coupled chain

/// Transition law on ordered pairs: row (i,j) is the maximal coupling of rows i
/// and j. Rows are built on first use and cached; safe to share across threads.
class CouplingKernel {
public:
    explicit CouplingKernel(StochasticMatrix p);

    std::size_t dim() const noexcept { return p_.dim(); }
    const StochasticMatrix& matrix() const noexcept { return p_; }

    /// m x m joint law of the next pair.
    const CouplingJoint& row(std::size_t i, std::size_t j) const;
    /// Draw the next pair given uniform u in [0,1).
    std::pair<std::size_t, std::size_t> sample(std::size_t i, std::size_t j, double u) const;

private:
    struct Row {
        CouplingJoint joint;
        std::vector<double> cdf;
    };
    const Row& ensure(std::size_t i, std::size_t j) const;

    StochasticMatrix p_;
    mutable std::vector<Row> rows_;
    std::unique_ptr<std::once_flag[]> flags_;
};

CouplingKernel build_coupling_kernel(const StochasticMatrix& p_eps);

struct CouplingTail {
    std::vector<double> tail;      // P{T > n}, n = 0..horizon
    std::vector<double> std_error; // binomial
    long trials = 0;
    std::uint64_t seed = 0;
    std::string rng;
};

inline constexpr const char* kRngAlgorithm = "splitmix64/trial-stream";

/// Threads: DAMPED_CHAIN_THREADS if set, else hardware concurrency. Output does
/// not depend on the thread count.
CouplingTail simulate_coupling_time(const CouplingKernel& kernel, const CouplingJoint& start,
                                    long trials, std::uint64_t seed, int horizon);

unsigned worker_threads();

}  // namespace dampchain
