#pragma once

#include <complex>
#include <vector>

#include "dampchain/chain.hpp"
#include "dampchain/structure.hpp"

namespace dampchain {

using cplx = std::complex<double>;

struct EigenCluster {
    cplx value;
    int multiplicity = 1;
};

struct Spectrum {
    std::vector<cplx> eigenvalues;   // all m, by |.| descending then real part descending
    std::vector<EigenCluster> distinct;  // same order, clustered
    double cluster_tol = 1e-8;

    /// Largest |rho| over distinct values other than the leading 1; 0 for m = 1.
    double second_modulus() const;
};

Spectrum spectrum(const StochasticMatrix& p0, double cluster_tol = 1e-8);

/// d P0^n = pi0 + sum_l rho_l^n c_l for n >= 1. Zero eigenvalues are dropped
/// since they never show up after the first step.
struct SpectralCoefficients {
    Eigen::VectorXd pi0;
    std::vector<cplx> rho;               // distinct non-unit, non-zero eigenvalues
    Eigen::MatrixXcd c;                  // rho.size() x m
    double vandermonde_cond = 1.0;

    /// Evaluate the decomposition at step n >= 1.
    Eigen::VectorXcd reconstruct(int n) const;
};

SpectralCoefficients spectral_coefficients(const StochasticMatrix& p0, const DampingVector& d,
                                           const Spectrum& spec);

struct ExpansionSeries {
    Eigen::VectorXd base;    // eps -> 0 limit
    Eigen::MatrixXd coeffs;  // row k-1 holds the eps^k coefficients
    int order() const noexcept { return static_cast<int>(coeffs.rows()); }
};

struct ExpansionValue {
    Eigen::VectorXd values;
    double mass_defect = 0.0;  // sum(values) - 1
};

/// Regular regime: direct. Singular regime: per-class series with the
/// renormalized damping restriction, scaled by f^(j)_d.
ExpansionSeries expansion(const StochasticMatrix& p0, const DampingVector& d,
                          const ChainStructure& s, int n_max = 2, double cluster_tol = 1e-8);

ExpansionValue evaluate_expansion(const ExpansionSeries& series, double epsilon);
/// Same, truncated after `order` terms (order <= series.order()).
ExpansionValue evaluate_expansion(const ExpansionSeries& series, double epsilon, int order);

}  // namespace dampchain
