#include "dampchain/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "dampchain/stationary.hpp"

namespace dampchain {

namespace {

bool spectral_order(const cplx& a, const cplx& b) {
    const double ma = std::abs(a), mb = std::abs(b);
    if (std::abs(ma - mb) > 1e-12) return ma > mb;
    if (a.real() != b.real()) return a.real() > b.real();
    return a.imag() > b.imag();
}

constexpr double kImagTol = 1e-10;

}  // namespace

double Spectrum::second_modulus() const {
    double best = 0.0;
    for (std::size_t k = 1; k < distinct.size(); ++k) best = std::max(best, std::abs(distinct[k].value));
    return best;
}

Spectrum spectrum(const StochasticMatrix& p0, double cluster_tol) {
    Eigen::EigenSolver<Eigen::MatrixXd> solver(p0.values(), false);
    if (solver.info() != Eigen::Success) {
        throw Error(ErrorCode::NotConverged, "eigensolver failed to converge");
    }
    Spectrum s;
    s.cluster_tol = cluster_tol;
    const Eigen::VectorXcd ev = solver.eigenvalues();
    s.eigenvalues.assign(ev.data(), ev.data() + ev.size());
    for (auto& z : s.eigenvalues) {
        if (std::abs(z.imag()) < 1e-14) z = cplx(z.real(), 0.0);
    }
    std::sort(s.eigenvalues.begin(), s.eigenvalues.end(), spectral_order);

    // Greedy clustering around running means.
    std::vector<cplx> sums;
    for (const cplx& z : s.eigenvalues) {
        bool merged = false;
        for (std::size_t k = 0; k < s.distinct.size(); ++k) {
            if (std::abs(z - s.distinct[k].value) < cluster_tol) {
                sums[k] += z;
                ++s.distinct[k].multiplicity;
                s.distinct[k].value = sums[k] / static_cast<double>(s.distinct[k].multiplicity);
                merged = true;
                break;
            }
        }
        if (!merged) {
            s.distinct.push_back({z, 1});
            sums.push_back(z);
        }
    }
    std::sort(s.distinct.begin(), s.distinct.end(),
              [](const EigenCluster& a, const EigenCluster& b) {
                  return spectral_order(a.value, b.value);
              });
    if (std::abs(s.distinct.front().value - 1.0) > 1e-8) {
        throw Error(ErrorCode::InvalidInput, "leading eigenvalue is not 1; matrix not stochastic?");
    }
    s.distinct.front().value = 1.0;
    return s;
}

Eigen::VectorXcd SpectralCoefficients::reconstruct(int n) const {
    Eigen::VectorXcd out = pi0.cast<cplx>();
    for (std::size_t l = 0; l < rho.size(); ++l) {
        out += std::pow(rho[l], n) * c.row(static_cast<Eigen::Index>(l)).transpose();
    }
    return out;
}

SpectralCoefficients spectral_coefficients(const StochasticMatrix& p0, const DampingVector& d,
                                           const Spectrum& spec) {
    require_same_dim(p0.dim(), d.dim(), "spectral coefficients");
    if (spec.distinct.front().multiplicity != 1) {
        throw Error(ErrorCode::RegimeMismatch,
                    "eigenvalue 1 is not simple; use the per-class expansion");
    }
    const auto m = static_cast<Eigen::Index>(p0.dim());
    SpectralCoefficients out;
    out.pi0 = stationary_direct(p0).pi.values();
    for (std::size_t k = 1; k < spec.distinct.size(); ++k) {
        const cplx r = spec.distinct[k].value;
        if (std::abs(r) < spec.cluster_tol) continue;
        if (std::abs(r - 1.0) < spec.cluster_tol) {
            throw Error(ErrorCode::RegimeMismatch, "second eigenvalue at 1; wrong regime");
        }
        out.rho.push_back(r);
    }
    const auto k = static_cast<Eigen::Index>(out.rho.size()) + 1;

    // Samples n = 1..k of d P0^n, with unknowns (a0, rho_l c_l) against powers 0..k-1.
    Eigen::MatrixXcd v(k, k);
    Eigen::MatrixXcd b(k, m);
    Eigen::RowVectorXd traj = d.values().transpose();
    std::vector<Eigen::RowVectorXd> samples;
    for (Eigen::Index n = 1; n <= 2 * k; ++n) {
        traj = traj * p0.values();
        samples.push_back(traj);
    }
    for (Eigen::Index n = 0; n < k; ++n) {
        v(n, 0) = 1.0;
        for (Eigen::Index l = 1; l < k; ++l) {
            v(n, l) = std::pow(out.rho[static_cast<std::size_t>(l - 1)], static_cast<int>(n));
        }
        b.row(n) = samples[static_cast<std::size_t>(n)].cast<cplx>();
    }
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(v);
    const double rcond = lu.rcond();
    out.vandermonde_cond = rcond > 0.0 ? 1.0 / rcond : INFINITY;
    if (!(out.vandermonde_cond <= 1e12)) {
        std::ostringstream os;
        os << "Vandermonde system ill-conditioned (cond ~ " << out.vandermonde_cond
           << "); try a larger cluster_tol";
        throw Error(ErrorCode::IllConditioned, os.str());
    }
    const Eigen::MatrixXcd sol = lu.solve(b);

    const double const_err = (sol.row(0).transpose() - out.pi0.cast<cplx>()).cwiseAbs().maxCoeff();
    if (const_err > 1e-6) {
        throw Error(ErrorCode::NonSemisimple,
                    "constant term disagrees with the stationary law; P0 may be defective");
    }
    out.c.resize(k - 1, m);
    for (Eigen::Index l = 1; l < k; ++l) {
        out.c.row(l - 1) = sol.row(l) / out.rho[static_cast<std::size_t>(l - 1)];
    }

    const double recon_tol = std::max(1e-8, 1e-15 * out.vandermonde_cond);
    for (std::size_t n = 0; n < samples.size(); ++n) {
        const Eigen::VectorXcd r = out.reconstruct(static_cast<int>(n) + 1);
        const double err = (r - samples[n].transpose().cast<cplx>()).cwiseAbs().maxCoeff();
        if (err > recon_tol) {
            std::ostringstream os;
            os << "spectral reconstruction fails at n=" << n + 1 << " (error " << err
               << "); P0 may be defective";
            throw Error(ErrorCode::NonSemisimple, os.str());
        }
    }
    return out;
}

namespace {

// Series for a single aperiodic class with damping row d.
ExpansionSeries regular_expansion(const StochasticMatrix& p0, const DampingVector& d, int n_max,
                                  double cluster_tol) {
    const Spectrum spec = spectrum(p0, cluster_tol);
    const SpectralCoefficients sc = spectral_coefficients(p0, d, spec);
    const auto m = static_cast<Eigen::Index>(p0.dim());
    ExpansionSeries out;
    out.base = sc.pi0;
    out.coeffs.resize(n_max, m);
    for (int n = 1; n <= n_max; ++n) {
        Eigen::VectorXcd row = Eigen::VectorXcd::Zero(m);
        for (std::size_t l = 0; l < sc.rho.size(); ++l) {
            const cplx r = sc.rho[l];
            const cplx w = (n == 1) ? r / (1.0 - r)
                                    : ((n % 2 == 0) ? -1.0 : 1.0) * std::pow(r, n - 1) /
                                          std::pow(1.0 - r, n);
            row += w * sc.c.row(static_cast<Eigen::Index>(l)).transpose();
        }
        if (n == 1) row += (d.values() - sc.pi0).cast<cplx>();
        const double imag = row.imag().cwiseAbs().maxCoeff();
        if (imag > kImagTol) {
            std::ostringstream os;
            os << "expansion coefficient of order " << n << " has imaginary residue " << imag;
            throw Error(ErrorCode::IllConditioned, os.str());
        }
        out.coeffs.row(n - 1) = row.real().transpose();
    }
    return out;
}

}  // namespace

ExpansionSeries expansion(const StochasticMatrix& p0, const DampingVector& d,
                          const ChainStructure& s, int n_max, double cluster_tol) {
    require_same_dim(p0.dim(), d.dim(), "expansion");
    if (n_max < 1) throw Error(ErrorCode::InvalidInput, "expansion order must be >= 1");
    if (s.regime == Regime::Unsupported) {
        throw Error(ErrorCode::RegimeMismatch, "expansion: " + s.diagnostic);
    }
    if (s.regime == Regime::Regular) return regular_expansion(p0, d, n_max, cluster_tol);

    const auto m = static_cast<Eigen::Index>(p0.dim());
    const std::vector<double> f = class_mass(d.values(), s);
    ExpansionSeries out;
    out.base = Eigen::VectorXd::Zero(m);
    out.coeffs = Eigen::MatrixXd::Zero(n_max, m);
    for (std::size_t j = 0; j < s.classes.size(); ++j) {
        const auto& cls = s.classes[j];
        const ExpansionSeries local = regular_expansion(
            restrict_matrix(p0, cls), restrict_damping(d, cls), n_max, cluster_tol);
        for (std::size_t a = 0; a < cls.states.size(); ++a) {
            const auto g = static_cast<Eigen::Index>(cls.states[a]);
            const auto la = static_cast<Eigen::Index>(a);
            out.base(g) = f[j] * local.base(la);
            out.coeffs.col(g) = f[j] * local.coeffs.col(la);
        }
    }
    return out;
}

ExpansionValue evaluate_expansion(const ExpansionSeries& series, double epsilon, int order) {
    if (order < 0 || order > series.order()) {
        throw Error(ErrorCode::InvalidInput, "evaluation order out of range");
    }
    ExpansionValue out;
    if (order == 0) {
        out.values = series.base;
    } else {
        Eigen::VectorXd acc = series.coeffs.row(order - 1).transpose();
        for (int k = order - 1; k >= 1; --k) {
            acc = acc * epsilon + series.coeffs.row(k - 1).transpose();
        }
        out.values = series.base + epsilon * acc;
    }
    out.mass_defect = out.values.sum() - 1.0;
    return out;
}

ExpansionValue evaluate_expansion(const ExpansionSeries& series, double epsilon) {
    return evaluate_expansion(series, epsilon, series.order());
}

}  // namespace dampchain
