#pragma once

#include <string_view>

#include "dampchain/chain.hpp"
#include "dampchain/structure.hpp"

namespace dampchain {

enum class StationaryMethod { Direct, Power, Series };
std::string_view to_string(StationaryMethod m);

struct StationarySolution {
    Distribution pi;
    StationaryMethod method;
    long iterations_or_terms = 0;
    double residual = 0.0;  // max_j |(pi P)_j - pi_j|
};

struct PowerOptions {
    double tol = 1e-10;
    long max_iter = 1'000'000;
};

double stationary_residual(const Eigen::VectorXd& pi, const StochasticMatrix& p);

StationarySolution stationary_direct(const StochasticMatrix& p);
StationarySolution stationary_power(const StochasticMatrix& p, const Distribution& start,
                                    const PowerOptions& opts = {});
/// eps * sum_l (1-eps)^l d P0^l, truncated once (1-eps)^(L+1) < tol.
StationarySolution stationary_series(const StochasticMatrix& p0, const DampingVector& d,
                                     double epsilon, double tol = 1e-12);

/// eps -> 0 limit of the stationary law started from `p`. In the singular
/// regime this is f^(j)_p times the per-class stationary law.
Distribution limit_stationary(const StochasticMatrix& p0, const Distribution& p,
                              const ChainStructure& s);

}  // namespace dampchain
