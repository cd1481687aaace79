#include "dampchain/triangular.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dampchain/coupling.hpp"
#include "dampchain/stationary.hpp"

namespace dampchain {

MixingTime::MixingTime(double t) : t_(t) {
    if (std::isinf(t) && t > 0) {
        infinite_ = true;
    } else if (!(t >= 0.0) || !std::isfinite(t)) {
        throw Error(ErrorCode::InvalidInput, "t must be >= 0 or infinity");
    }
}

MixingTime MixingTime::infinity() {
    MixingTime m;
    m.infinite_ = true;
    return m;
}

double MixingTime::decay() const { return infinite_ ? 0.0 : std::exp(-t_); }

std::string MixingTime::str() const {
    if (infinite_) return "inf";
    std::ostringstream os;
    os.precision(12);
    os << t_;
    return os.str();
}

TriangularLimit triangular_limit(const StochasticMatrix& p0, const DampingVector& d,
                                 const Distribution& p, const ChainStructure& s, MixingTime t) {
    require_same_dim(p0.dim(), d.dim(), "triangular limit");
    require_same_dim(p0.dim(), p.dim(), "triangular limit");
    TriangularLimit out{t, {}, {}, t.decay(), {}};
    out.pi0_d = limit_stationary(p0, d.as_distribution(), s).values();
    out.pi0_p = s.regime == Regime::Regular ? out.pi0_d : limit_stationary(p0, p, s).values();
    if (s.regime == Regime::Regular) {
        out.pi_of_t = out.pi0_d;
    } else {
        out.pi_of_t = out.pi0_p * out.weight + out.pi0_d * (1.0 - out.weight);
    }
    return out;
}

namespace {

double decay_blocks(double q_n, int n, int N) {
    return std::pow(std::max(0.0, 1.0 - q_n), n / N);
}

}  // namespace

Eigen::VectorXd triangular_bound(const StochasticMatrix& p0, const DampingVector& d,
                                 const Distribution& p, const ChainStructure& s, double epsilon,
                                 int n, int N, MixingTime t) {
    require_same_dim(p0.dim(), d.dim(), "triangular bound");
    require_same_dim(p0.dim(), p.dim(), "triangular bound");
    if (n < 0 || N < 1) throw Error(ErrorCode::InvalidInput, "need n >= 0 and N >= 1");
    if (!(epsilon > 0.0 && epsilon <= 1.0)) {
        throw Error(ErrorCode::InvalidInput, "epsilon must lie in (0,1]");
    }
    const auto m = static_cast<Eigen::Index>(p0.dim());
    if (s.regime == Regime::Unsupported) {
        throw Error(ErrorCode::RegimeMismatch, "triangular bound: " + s.diagnostic);
    }
    if (s.regime == Regime::Regular) {
        const ErgodicityReport e = ergodicity_coefficient(p0, N);
        if (!(e.delta_n < 1.0)) {
            std::ostringstream os;
            os << "Delta_" << N << " = 1; choose a larger N";
            throw Error(ErrorCode::ConditionViolated, os.str());
        }
        const Eigen::VectorXd pi0 = stationary_direct(p0).pi.values();
        const double value =
            (1.0 - overlap(p.values(), pi0)) * decay_blocks(e.q_n, n, N) +
            (1.0 - overlap(d.values(), pi0)) * epsilon * N / e.q_n;
        return Eigen::VectorXd::Constant(m, value);
    }

    const auto terms = singular_class_terms(p0, d, p, nullptr, s, N);
    const double r = std::abs(std::pow(1.0 - epsilon, n) - t.decay());
    Eigen::VectorXd out(m);
    for (std::size_t j = 0; j < s.classes.size(); ++j) {
        const auto& c = terms[j];
        double shared = c.f_d * (1.0 - c.overlap_d) * epsilon * N / c.ergodicity.q_n;
        if (c.f_p > 0.0) shared += c.f_p * (1.0 - c.overlap_p) * decay_blocks(c.ergodicity.q_n, n, N);
        const double gap = std::abs(c.f_p - c.f_d) * r;
        for (std::size_t a = 0; a < s.classes[j].states.size(); ++a) {
            out(static_cast<Eigen::Index>(s.classes[j].states[a])) =
                shared + gap * c.pi0_local(static_cast<Eigen::Index>(a));
        }
    }
    return out;
}

int steps_for(double t, double epsilon) {
    if (!(epsilon > 0.0)) throw Error(ErrorCode::InvalidInput, "epsilon must be > 0");
    return static_cast<int>(std::lround(t / epsilon));
}

std::optional<int> smallest_contracting_N(const StochasticMatrix& p0, const ChainStructure& s,
                                          int n_max) {
    if (s.regime == Regime::Unsupported) return std::nullopt;
    std::vector<StochasticMatrix> locals;
    if (s.regime == Regime::Regular) {
        locals.push_back(p0);
    } else {
        for (const auto& cls : s.classes) locals.push_back(restrict_matrix(p0, cls));
    }
    std::vector<Eigen::MatrixXd> powers;
    for (const auto& l : locals) powers.push_back(l.values());
    for (int N = 1; N <= n_max; ++N) {
        bool ok = true;
        for (std::size_t j = 0; j < locals.size(); ++j) {
            if (N > 1) powers[j] = powers[j] * locals[j].values();
            if (!(matrix_overlap(powers[j]) > 0.0)) ok = false;
        }
        if (ok) return N;
    }
    return std::nullopt;
}

std::vector<SweepRow> triangular_sweep(const StochasticMatrix& p0, const DampingVector& d,
                                       const Distribution& p, const ChainStructure& s,
                                       double epsilon, const std::vector<int>& n_grid,
                                       const SweepOptions& opts) {
    if (!(epsilon > 0.0 && epsilon <= 1.0)) {
        throw Error(ErrorCode::InvalidInput, "epsilon must lie in (0,1]");
    }
    if (opts.tracked_state >= p0.dim()) {
        throw Error(ErrorCode::InvalidInput, "tracked state out of range");
    }
    for (int n : n_grid) {
        if (n < 0) throw Error(ErrorCode::InvalidInput, "sweep steps must be >= 0");
    }
    const StochasticMatrix pe = build_damped_matrix(DampedChain(p0, d, epsilon));
    const TriangularLimit base = triangular_limit(p0, d, p, s, MixingTime(0.0));
    std::optional<int> N = opts.N > 0 ? std::optional<int>(opts.N) : smallest_contracting_N(p0, s);

    std::vector<int> sorted = n_grid;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

    std::vector<SweepRow> rows;
    Eigen::RowVectorXd cur = p.values().transpose();
    int at = 0;
    const auto k = static_cast<Eigen::Index>(opts.tracked_state);
    for (int n : sorted) {
        for (; at < n; ++at) cur = cur * pe.values();
        SweepRow row;
        row.n = n;
        row.eps_n = epsilon * n;
        const double w = std::exp(-row.eps_n);
        row.trajectory = cur.transpose();
        row.limit = s.regime == Regime::Regular ? base.pi0_d
                                                : Eigen::VectorXd(base.pi0_p * w + base.pi0_d * (1.0 - w));
        row.tracked_value = row.trajectory(k);
        row.tracked_limit = row.limit(k);
        const double ref = base.pi0_d(k);
        row.relative_error = ref > 0.0 ? std::abs(row.tracked_limit - ref) / ref : 0.0;
        row.max_deviation = (row.trajectory - row.limit).cwiseAbs().maxCoeff();
        if (N) row.bound = triangular_bound(p0, d, p, s, epsilon, n, *N, MixingTime(row.eps_n));
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace dampchain
