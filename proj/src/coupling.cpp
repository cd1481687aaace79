#include "dampchain/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <thread>

#include "dampchain/spectral.hpp"
#include "dampchain/stationary.hpp"

namespace dampchain {

std::string_view to_string(Theorem t) {
    switch (t) {
        case Theorem::T1: return "T1";
        case Theorem::T2: return "T2";
        case Theorem::T5: return "T5";
        case Theorem::T6: return "T6";
        case Theorem::T7: return "T7";
    }
    return "unknown";
}

CouplingJoint maximal_coupling(const Eigen::VectorXd& p1, const Eigen::VectorXd& p2) {
    require_same_dim(static_cast<std::size_t>(p1.size()), static_cast<std::size_t>(p2.size()),
                     "maximal coupling");
    const Eigen::VectorXd common = p1.cwiseMin(p2);
    const Eigen::VectorXd e1 = p1 - common;
    const Eigen::VectorXd e2 = p2 - common;
    CouplingJoint out;
    out.diagonal_mass = common.sum();
    out.joint = common.asDiagonal();
    const double excess = e2.sum();
    if (excess > 1e-15) out.joint += e1 * e2.transpose() / excess;
    return out;
}

CouplingJoint maximal_coupling(const Distribution& p1, const Distribution& p2) {
    return maximal_coupling(p1.values(), p2.values());
}

namespace {

ErgodicityReport report_from_power(const Eigen::MatrixXd& pn, int N) {
    ErgodicityReport r;
    r.N = N;
    r.q_n = matrix_overlap(pn);
    const double gap = std::max(0.0, 1.0 - r.q_n);
    r.degenerate = gap == 0.0;
    r.delta_n = r.degenerate ? 0.0 : std::pow(gap, 1.0 / N);
    return r;
}

}  // namespace

ErgodicityReport ergodicity_coefficient(const StochasticMatrix& p, int N) {
    if (N < 1) throw Error(ErrorCode::InvalidInput, "N must be >= 1");
    return report_from_power(matrix_power(p, N).values(), N);
}

std::vector<ErgodicityReport> ergodicity_sequence(const StochasticMatrix& p, int n_max) {
    if (n_max < 1) throw Error(ErrorCode::InvalidInput, "N must be >= 1");
    std::vector<ErgodicityReport> out;
    Eigen::MatrixXd pn = p.values();
    for (int N = 1; N <= n_max; ++N) {
        if (N > 1) pn = pn * p.values();
        out.push_back(report_from_power(pn, N));
    }
    return out;
}

std::vector<ErgodicityReport> class_ergodicity(const StochasticMatrix& p0, const ChainStructure& s,
                                               int N) {
    std::vector<ErgodicityReport> out;
    for (const auto& cls : s.classes) {
        out.push_back(ergodicity_coefficient(restrict_matrix(p0, cls), N));
    }
    return out;
}

namespace {

DeviationConstants class_constants(const StochasticMatrix& p, int horizon) {
    DeviationConstants dc;
    dc.horizon = horizon;
    dc.estimated = true;
    dc.lambda = spectrum(p).second_modulus();
    const Eigen::RowVectorXd pi = stationary_direct(p).pi.values().transpose();
    if (dc.lambda < 1e-14) return dc;
    Eigen::MatrixXd pn = p.values();
    for (int n = 1; n <= horizon; ++n) {
        if (n > 1) pn = pn * p.values();
        const double dev = (pn.rowwise() - pi).cwiseAbs().maxCoeff();
        if (dev < 1e-12) break;
        dc.C = std::max(dc.C, dev / std::pow(dc.lambda, n));
    }
    return dc;
}

}  // namespace

DeviationConstants estimate_deviation_constants(const StochasticMatrix& p0,
                                                const ChainStructure& s, int horizon) {
    if (horizon < 1) throw Error(ErrorCode::InvalidInput, "horizon must be >= 1");
    if (s.regime == Regime::Unsupported) {
        throw Error(ErrorCode::RegimeMismatch, "deviation constants: " + s.diagnostic);
    }
    if (s.regime == Regime::Regular) return class_constants(p0, horizon);
    DeviationConstants out;
    out.horizon = horizon;
    out.estimated = true;
    for (const auto& cls : s.classes) {
        const DeviationConstants c = class_constants(restrict_matrix(p0, cls), horizon);
        out.C = std::max(out.C, c.C);
        out.lambda = std::max(out.lambda, c.lambda);
    }
    return out;
}

Eigen::VectorXd bound_theorem1(double C, double lambda, const DampingVector& d,
                               const Distribution& pi0, double epsilon) {
    require_same_dim(d.dim(), pi0.dim(), "theorem 1 bound");
    if (!(lambda >= 0.0 && lambda < 1.0)) {
        throw Error(ErrorCode::InvalidInput, "lambda must lie in [0,1)");
    }
    if (!(C >= 0.0)) throw Error(ErrorCode::InvalidInput, "C must be >= 0");
    const double tail = C * lambda / (1.0 - lambda);
    return epsilon * ((d.values() - pi0.values()).cwiseAbs().array() + tail).matrix();
}

Eigen::VectorXd bound_theorem2(double C, double lambda, const DampingVector& d,
                               const Distribution& pi0d, double epsilon) {
    return bound_theorem1(C, lambda, d, pi0d, epsilon);
}

double RateBound::evaluate(int n) const {
    if (n < 0) throw Error(ErrorCode::InvalidInput, "n must be >= 0");
    const int blocks = n / N;
    // Delta_N^(kN) = (1 - Q_N)^k, with x^0 = 1.
    return (1.0 - q_eps_p) * std::pow(std::max(0.0, 1.0 - q_n), blocks) *
           std::pow(1.0 - epsilon, blocks * N);
}

RateBound bound_theorem6(const StochasticMatrix& p0, const Distribution& p,
                         const Distribution& pi_eps, double epsilon, int N) {
    require_same_dim(p0.dim(), p.dim(), "rate bound");
    require_same_dim(p0.dim(), pi_eps.dim(), "rate bound");
    if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
        throw Error(ErrorCode::InvalidInput, "epsilon must lie in [0,1]");
    }
    const ErgodicityReport e = ergodicity_coefficient(p0, N);
    RateBound b;
    b.theorem = Theorem::T6;
    b.epsilon = epsilon;
    b.N = N;
    b.q_eps_p = std::min(1.0, overlap(p.values(), pi_eps.values()));
    b.q_n = e.q_n;
    b.delta_n = e.delta_n;
    return b;
}

RateBound bound_theorem5(const StochasticMatrix& p0, const Distribution& p,
                         const Distribution& pi_eps, double epsilon) {
    RateBound b = bound_theorem6(p0, p, pi_eps, epsilon, 1);
    b.theorem = Theorem::T5;
    return b;
}

std::vector<SingularClassTerms> singular_class_terms(const StochasticMatrix& p0,
                                                     const DampingVector& d, const Distribution& p,
                                                     const Distribution* pi_eps,
                                                     const ChainStructure& s, int N) {
    if (s.regime != Regime::Singular) {
        throw Error(ErrorCode::RegimeMismatch,
                    "singular bound needs several aperiodic closed classes; regime is " +
                        std::string(to_string(s.regime)));
    }
    const std::vector<double> fd = class_mass(d.values(), s);
    const std::vector<double> fp = class_mass(p, s);
    std::vector<SingularClassTerms> out;
    for (std::size_t j = 0; j < s.classes.size(); ++j) {
        const auto& cls = s.classes[j];
        const StochasticMatrix local = restrict_matrix(p0, cls);
        SingularClassTerms t;
        t.f_d = fd[j];
        t.f_p = fp[j];
        t.ergodicity = ergodicity_coefficient(local, N);
        if (!(t.ergodicity.delta_n < 1.0)) {
            std::ostringstream os;
            os << "Delta_" << N << " = " << t.ergodicity.delta_n << " on class " << j + 1
               << "; choose a larger N";
            throw Error(ErrorCode::ConditionViolated, os.str());
        }
        t.pi0_local = stationary_direct(local).pi.values();
        t.overlap_d = overlap(restrict_damping(d, cls).values(), t.pi0_local);
        if (auto pj = restrict_distribution(p, cls)) {
            t.overlap_p = overlap(pj->values(), t.pi0_local);
        }
        if (pi_eps != nullptr) {
            if (auto pe = restrict_distribution(*pi_eps, cls)) {
                t.overlap_pi = overlap(pe->values(), t.pi0_local);
            }
        }
        out.push_back(std::move(t));
    }
    return out;
}

double SingularRateBound::evaluate(int n, std::size_t k) const {
    if (n < 0) throw Error(ErrorCode::InvalidInput, "n must be >= 0");
    const SingularClassTerms& t = classes.at(class_of.at(k));
    const int blocks = n / N;
    const double decay = std::pow(std::max(0.0, 1.0 - t.ergodicity.q_n), blocks);
    double mixing = t.f_d * (1.0 - t.overlap_pi);
    if (t.f_p > 0.0) mixing += t.f_p * (1.0 - t.overlap_p);
    const double gap = std::abs(t.f_p - t.f_d) * t.pi0_local(static_cast<Eigen::Index>(local_index[k]));
    return (mixing * decay + gap) * std::pow(1.0 - epsilon, n);
}

Eigen::VectorXd SingularRateBound::evaluate_all(int n) const {
    Eigen::VectorXd out(static_cast<Eigen::Index>(class_of.size()));
    for (std::size_t k = 0; k < class_of.size(); ++k) out(static_cast<Eigen::Index>(k)) = evaluate(n, k);
    return out;
}

SingularRateBound bound_theorem7(const StochasticMatrix& p0, const DampingVector& d,
                                 const Distribution& p, const Distribution& pi_eps,
                                 double epsilon, int N, const ChainStructure& s) {
    SingularRateBound b;
    b.epsilon = epsilon;
    b.N = N;
    b.classes = singular_class_terms(p0, d, p, &pi_eps, s, N);
    b.class_of.resize(s.dim);
    b.local_index.resize(s.dim);
    for (std::size_t j = 0; j < s.classes.size(); ++j) {
        for (std::size_t a = 0; a < s.classes[j].states.size(); ++a) {
            b.class_of[s.classes[j].states[a]] = j;
            b.local_index[s.classes[j].states[a]] = a;
        }
    }
    return b;
}

// ---- coupled chain

CouplingKernel::CouplingKernel(StochasticMatrix p)
    : p_(std::move(p)), rows_(p_.dim() * p_.dim()),
      flags_(std::make_unique<std::once_flag[]>(p_.dim() * p_.dim())) {}

const CouplingKernel::Row& CouplingKernel::ensure(std::size_t i, std::size_t j) const {
    const std::size_t m = p_.dim();
    if (i >= m || j >= m) throw Error(ErrorCode::InvalidInput, "coupling kernel: state out of range");
    const std::size_t idx = i * m + j;
    std::call_once(flags_[idx], [&] {
        Row r;
        r.joint = maximal_coupling(p_.row(i), p_.row(j));
        r.cdf.resize(m * m);
        double acc = 0.0;
        for (std::size_t a = 0; a < m; ++a) {
            for (std::size_t b = 0; b < m; ++b) {
                acc += r.joint.joint(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
                r.cdf[a * m + b] = acc;
            }
        }
        rows_[idx] = std::move(r);
    });
    return rows_[idx];
}

const CouplingJoint& CouplingKernel::row(std::size_t i, std::size_t j) const {
    return ensure(i, j).joint;
}

namespace {

std::size_t draw(const std::vector<double>& cdf, double u) {
    const double target = u * cdf.back();
    auto it = std::upper_bound(cdf.begin(), cdf.end(), target);
    if (it == cdf.end()) --it;
    return static_cast<std::size_t>(it - cdf.begin());
}

struct SplitMix64 {
    std::uint64_t state;
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

SplitMix64 trial_stream(std::uint64_t seed, long trial) {
    SplitMix64 mix{seed};
    const std::uint64_t base = mix.next();
    SplitMix64 s{base ^ (0xD1B54A32D192ED03ULL * (static_cast<std::uint64_t>(trial) + 1))};
    s.next();
    return s;
}

}  // namespace

std::pair<std::size_t, std::size_t> CouplingKernel::sample(std::size_t i, std::size_t j,
                                                           double u) const {
    const std::size_t cell = draw(ensure(i, j).cdf, u);
    return {cell / p_.dim(), cell % p_.dim()};
}

CouplingKernel build_coupling_kernel(const StochasticMatrix& p_eps) {
    return CouplingKernel(p_eps);
}

unsigned worker_threads() {
    if (const char* env = std::getenv("DAMPED_CHAIN_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && v >= 1) return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

CouplingTail simulate_coupling_time(const CouplingKernel& kernel, const CouplingJoint& start,
                                    long trials, std::uint64_t seed, int horizon) {
    const std::size_t m = kernel.dim();
    if (trials < 1) throw Error(ErrorCode::InvalidInput, "trials must be >= 1");
    if (horizon < 0) throw Error(ErrorCode::InvalidInput, "horizon must be >= 0");
    if (static_cast<std::size_t>(start.joint.rows()) != m ||
        static_cast<std::size_t>(start.joint.cols()) != m) {
        throw Error(ErrorCode::DimensionMismatch, "start joint does not match kernel");
    }
    std::vector<double> start_cdf(m * m);
    double acc = 0.0;
    for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = 0; b < m; ++b) {
            acc += start.joint(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
            start_cdf[a * m + b] = acc;
        }
    }

    const auto h = static_cast<std::size_t>(horizon);
    // hist[t] counts meeting times t = 0..horizon; hist[horizon+1] counts censored runs.
    auto run = [&](long begin, long end, std::vector<long>& hist) {
        for (long trial = begin; trial < end; ++trial) {
            SplitMix64 rng = trial_stream(seed, trial);
            const std::size_t cell = draw(start_cdf, rng.uniform());
            std::size_t x = cell / m, y = cell % m;
            std::size_t t = 0;
            while (x != y) {
                if (t == h) {
                    t = h + 1;
                    break;
                }
                ++t;
                std::tie(x, y) = kernel.sample(x, y, rng.uniform());
            }
            ++hist[std::min(t, h + 1)];
        }
    };

    const unsigned nthreads =
        static_cast<unsigned>(std::min<long>(static_cast<long>(worker_threads()), trials));
    std::vector<std::vector<long>> hists(nthreads, std::vector<long>(h + 2, 0));
    if (nthreads == 1) {
        run(0, trials, hists[0]);
    } else {
        std::vector<std::thread> pool;
        const long chunk = (trials + nthreads - 1) / nthreads;
        for (unsigned w = 0; w < nthreads; ++w) {
            const long b = std::min(trials, static_cast<long>(w) * chunk);
            const long e = std::min(trials, b + chunk);
            pool.emplace_back(run, b, e, std::ref(hists[w]));
        }
        for (auto& th : pool) th.join();
    }
    std::vector<long> hist(h + 2, 0);
    for (const auto& part : hists) {
        for (std::size_t t = 0; t < hist.size(); ++t) hist[t] += part[t];
    }

    CouplingTail out;
    out.trials = trials;
    out.seed = seed;
    out.rng = kRngAlgorithm;
    long survivors = trials;
    const double nt = static_cast<double>(trials);
    for (std::size_t n = 0; n <= h; ++n) {
        survivors -= hist[n];  // P{T > n}
        const double q = static_cast<double>(survivors) / nt;
        out.tail.push_back(q);
        out.std_error.push_back(std::sqrt(q * (1.0 - q) / nt));
    }
    return out;
}

}  // namespace dampchain
