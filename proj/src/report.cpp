#include "dampchain/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <sstream>

#include "dampchain/coupling.hpp"
#include "dampchain/spectral.hpp"
#include "dampchain/stationary.hpp"
#include "dampchain/structure.hpp"
#include "dampchain/triangular.hpp"

namespace dampchain {

double round_significant(double x, int digits) {
    if (!std::isfinite(x) || x == 0.0) return x;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, x);
    return std::strtod(buf, nullptr);
}

namespace {

void round_floats(ordered_json& j) {
    if (j.is_number_float()) {
        j = round_significant(j.get<double>());
    } else if (j.is_array() || j.is_object()) {
        for (auto& child : j) round_floats(child);
    }
}

}  // namespace

std::string dump_report(const ordered_json& report) {
    ordered_json copy = report;
    round_floats(copy);
    return copy.dump(2) + "\n";
}

ordered_json error_report(const std::string& command, const std::string& code,
                          const std::string& message) {
    ordered_json j;
    j["tool"] = "dampchain";
    j["version"] = kVersion;
    j["command"] = command;
    j["error"] = {{"code", code}, {"message", message}};
    return j;
}

namespace {

struct Context {
    StochasticMatrix p0;
    DampingVector d;
    Distribution initial;
    ChainStructure s;
};

ordered_json vec(const Eigen::VectorXd& v) {
    ordered_json a = ordered_json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
}

ordered_json states1(const std::vector<std::size_t>& s) {
    ordered_json a = ordered_json::array();
    for (std::size_t x : s) a.push_back(x + 1);
    return a;
}

template <class T>
ordered_json opt(const std::optional<T>& v) {
    return v ? ordered_json(*v) : ordered_json(nullptr);
}

Distribution parse_initial(const std::string& spec, std::size_t m, const DampingVector& d) {
    if (spec == "uniform") return Distribution::uniform(m);
    if (spec == "damping") return d.as_distribution();
    if (spec.rfind("state:", 0) == 0) {
        const std::string idx = spec.substr(6);
        char* end = nullptr;
        const long k = std::strtol(idx.c_str(), &end, 10);
        if (idx.empty() || *end != '\0' || k < 1 || static_cast<std::size_t>(k) > m) {
            throw Error(ErrorCode::InvalidInput, "initial state '" + idx + "' out of range 1.." +
                                                     std::to_string(m));
        }
        return Distribution::point_mass(m, static_cast<std::size_t>(k - 1));
    }
    Eigen::VectorXd v = read_vector_file(spec);
    require_same_dim(static_cast<std::size_t>(v.size()), m, "initial distribution");
    return Distribution(std::move(v));
}

Context load(const RunConfig& cfg) {
    if (cfg.input.empty()) throw Error(ErrorCode::InvalidInput, "--input is required");
    IngestOptions io;
    io.format = cfg.format;
    io.dangling = cfg.dangling;
    Ingested in = ingest(cfg.input, io);
    const std::size_t m = in.p0.dim();
    DampingVector d = DampingVector::uniform(m);
    if (cfg.damping != "uniform") {
        Eigen::VectorXd v = read_vector_file(cfg.damping);
        require_same_dim(static_cast<std::size_t>(v.size()), m, "damping");
        d = DampingVector(std::move(v));
    } else if (in.damping) {
        d = *in.damping;
    }
    Distribution initial = parse_initial(cfg.initial, m, d);
    ChainStructure s = decompose(in.p0);
    return {std::move(in.p0), std::move(d), std::move(initial), std::move(s)};
}

ordered_json echo_inputs(const RunConfig& cfg) {
    ordered_json j;
    j["input"] = cfg.input;
    j["format"] = to_string(cfg.format);
    j["dangling_policy"] = to_string(cfg.dangling);
    j["damping"] = cfg.damping;
    j["initial"] = cfg.initial;
    j["epsilon"] = cfg.epsilons;
    j["order"] = cfg.order;
    j["coupling_N"] = cfg.coupling_N;
    j["seed"] = opt(cfg.seed);
    j["trials"] = cfg.trials;
    j["horizon"] = cfg.horizon;
    j["tol"] = cfg.tol;
    j["C"] = opt(cfg.C);
    j["lambda"] = opt(cfg.lambda);
    j["theorem"] = cfg.theorem;
    if (cfg.t && *cfg.t < 0) {
        j["t"] = "inf";
    } else {
        j["t"] = opt(cfg.t);
    }
    j["n_grid"] = cfg.n_grid;
    j["tracked_state"] = cfg.tracked_state;
    return j;
}

double first_epsilon(const RunConfig& cfg) {
    if (cfg.epsilons.empty()) throw Error(ErrorCode::InvalidInput, "no epsilon given");
    return cfg.epsilons.front();
}

void check_epsilon(double eps) {
    if (!(eps >= 0.0 && eps <= 1.0)) throw Error(ErrorCode::InvalidInput, "epsilon must lie in [0,1]");
}

StochasticMatrix damped(const Context& c, double eps) {
    return build_damped_matrix(DampedChain(c.p0, c.d, eps));
}

/// pi_eps for eps > 0; the eps -> 0 limit from d at eps = 0.
Distribution pi_epsilon(const Context& c, double eps) {
    if (eps == 0.0) return limit_stationary(c.p0, c.d.as_distribution(), c.s);
    return stationary_direct(damped(c, eps)).pi;
}

// ---- structure

ordered_json structure_json(const ChainStructure& s) {
    ordered_json j;
    j["dim"] = s.dim;
    j["regime"] = to_string(s.regime);
    j["diagnostic"] = s.diagnostic;
    ordered_json classes = ordered_json::array();
    for (const auto& c : s.classes) {
        ordered_json cj;
        cj["states"] = states1(c.states);
        cj["period"] = c.period;
        cj["aperiodic"] = c.aperiodic();
        classes.push_back(std::move(cj));
    }
    j["classes"] = std::move(classes);
    j["transient_states"] = states1(s.transient_states);
    return j;
}

// ---- stationary

ordered_json stationary_json(const Context& c, const RunConfig& cfg) {
    ordered_json rows = ordered_json::array();
    for (double eps : cfg.epsilons) {
        check_epsilon(eps);
        ordered_json r;
        r["epsilon"] = eps;
        if (eps == 0.0) {
            r["limit"] = {{"pi", vec(limit_stationary(c.p0, c.d.as_distribution(), c.s).values())}};
            rows.push_back(std::move(r));
            continue;
        }
        const StochasticMatrix pe = damped(c, eps);
        const StationarySolution direct = stationary_direct(pe);
        const StationarySolution power = stationary_power(pe, c.initial, {cfg.tol, 1'000'000});
        const StationarySolution series = stationary_series(c.p0, c.d, eps, cfg.tol);
        r["direct"] = {{"pi", vec(direct.pi.values())}, {"residual", direct.residual}};
        r["power"] = {{"pi", vec(power.pi.values())},
                      {"iterations", power.iterations_or_terms},
                      {"residual", power.residual}};
        r["series"] = {{"pi", vec(series.pi.values())},
                       {"terms", series.iterations_or_terms},
                       {"residual", series.residual}};
        r["max_pairwise_tv"] = std::max({tv_distance(direct.pi, power.pi),
                                         tv_distance(direct.pi, series.pi),
                                         tv_distance(power.pi, series.pi)});
        if (c.s.regime == Regime::Singular) {
            std::vector<double> f = class_mass(direct.pi, c.s);
            r["class_mass"] = f;
        }
        rows.push_back(std::move(r));
    }
    ordered_json j;
    j["solutions"] = std::move(rows);
    if (c.s.regime != Regime::Unsupported) {
        j["limit_from_damping"] = vec(limit_stationary(c.p0, c.d.as_distribution(), c.s).values());
        j["limit_from_initial"] = vec(limit_stationary(c.p0, c.initial, c.s).values());
    }
    return j;
}

// ---- expansion

ordered_json spectrum_json(const Spectrum& sp, const std::vector<std::size_t>& states) {
    ordered_json j;
    j["states"] = states1(states);
    ordered_json ev = ordered_json::array();
    for (const auto& e : sp.distinct) {
        ev.push_back({{"re", e.value.real()}, {"im", e.value.imag()}, {"multiplicity", e.multiplicity}});
    }
    j["eigenvalues"] = std::move(ev);
    j["second_modulus"] = sp.second_modulus();
    return j;
}

ordered_json expansion_json(const Context& c, const RunConfig& cfg) {
    const ExpansionSeries series = expansion(c.p0, c.d, c.s, cfg.order);
    ordered_json j;
    j["order"] = cfg.order;
    j["regime"] = to_string(c.s.regime);
    j["base"] = vec(series.base);
    ordered_json coeffs = ordered_json::array();
    ordered_json sums = ordered_json::array();
    for (int k = 0; k < series.order(); ++k) {
        coeffs.push_back(vec(series.coeffs.row(k).transpose()));
        sums.push_back(series.coeffs.row(k).sum());
    }
    j["coefficients"] = std::move(coeffs);
    j["row_sums"] = std::move(sums);

    ordered_json spectra = ordered_json::array();
    if (c.s.regime == Regime::Regular) {
        std::vector<std::size_t> all(c.p0.dim());
        for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
        spectra.push_back(spectrum_json(spectrum(c.p0), all));
    } else {
        for (const auto& cls : c.s.classes) {
            spectra.push_back(spectrum_json(spectrum(restrict_matrix(c.p0, cls)), cls.states));
        }
    }
    j["spectra"] = std::move(spectra);

    ordered_json evals = ordered_json::array();
    for (double eps : cfg.epsilons) {
        check_epsilon(eps);
        const ExpansionValue v = evaluate_expansion(series, eps);
        ordered_json e;
        e["epsilon"] = eps;
        e["expansion"] = vec(v.values);
        e["mass_defect"] = v.mass_defect;
        if (eps > 0.0) {
            const Eigen::VectorXd truth = stationary_series(c.p0, c.d, eps, 1e-14).pi.values();
            e["stationary"] = vec(truth);
            e["max_error"] = (v.values - truth).cwiseAbs().maxCoeff();
        }
        evals.push_back(std::move(e));
    }
    j["evaluations"] = std::move(evals);
    return j;
}

// ---- bounds

int contracting_N(const Context& c, const RunConfig& cfg) {
    if (cfg.coupling_N > 0) return cfg.coupling_N;
    return smallest_contracting_N(c.p0, c.s).value_or(1);
}

ordered_json ergodicity_json(const std::vector<ErgodicityReport>& seq) {
    ordered_json a = ordered_json::array();
    for (const auto& e : seq) {
        a.push_back({{"N", e.N}, {"q_n", e.q_n}, {"delta_n", e.delta_n}, {"degenerate", e.degenerate}});
    }
    return a;
}

std::string ergodicity_csv(const std::vector<ErgodicityReport>& seq) {
    std::ostringstream os;
    os.precision(12);
    os << "N,q_n,delta_n\n";
    for (const auto& e : seq) os << e.N << ',' << e.q_n << ',' << e.delta_n << '\n';
    return os.str();
}

ordered_json deviation_bound_json(const Context& c, const RunConfig& cfg, int theorem) {
    if (theorem == 1 && c.s.regime != Regime::Regular) {
        throw Error(ErrorCode::RegimeMismatch,
                    "theorem 1 needs the regular regime; use --theorem 2 (regime is " +
                        std::string(to_string(c.s.regime)) + ")");
    }
    DeviationConstants dc;
    std::string source = "user";
    if (!cfg.C || !cfg.lambda) {
        dc = estimate_deviation_constants(c.p0, c.s);
        source = (cfg.C || cfg.lambda) ? "mixed" : "estimated";
    }
    if (cfg.C) dc.C = *cfg.C;
    if (cfg.lambda) dc.lambda = *cfg.lambda;
    const Distribution ref = limit_stationary(c.p0, c.d.as_distribution(), c.s);

    ordered_json rows = ordered_json::array();
    for (double eps : cfg.epsilons) {
        check_epsilon(eps);
        const Distribution pe = pi_epsilon(c, eps);
        const Eigen::VectorXd bound = bound_theorem1(dc.C, dc.lambda, c.d, ref, eps);
        const Eigen::VectorXd dev = (pe.values() - ref.values()).cwiseAbs();
        ordered_json r;
        r["epsilon"] = eps;
        r["pi_eps"] = vec(pe.values());
        r["deviation"] = vec(dev);
        r["bound"] = vec(bound);
        r["dominated"] = ((bound - dev).array() >= -1e-12).all();
        rows.push_back(std::move(r));
    }
    ordered_json j;
    j["theorem"] = theorem == 1 ? "T1" : "T2";
    j["C"] = dc.C;
    j["lambda"] = dc.lambda;
    j["constants_source"] = source;
    j["horizon"] = dc.horizon;
    j["pi0"] = vec(ref.values());
    j["rows"] = std::move(rows);
    return j;
}

ordered_json rate_bound_json(const Context& c, const RunConfig& cfg, int theorem,
                             std::string* csv) {
    const double eps = first_epsilon(cfg);
    if (!(eps > 0.0 && eps <= 1.0)) throw Error(ErrorCode::InvalidInput, "rate bounds need epsilon in (0,1]");
    if (cfg.horizon < 0) throw Error(ErrorCode::InvalidInput, "horizon must be >= 0");
    const StochasticMatrix pe = damped(c, eps);
    const Distribution pi = stationary_direct(pe).pi;
    const int N = theorem == 5 ? 1 : contracting_N(c, cfg);

    ordered_json j;
    j["epsilon"] = eps;
    j["N"] = N;
    ordered_json table = ordered_json::array();
    bool dominated = true;
    Eigen::RowVectorXd cur = c.initial.values().transpose();

    if (theorem == 7) {
        const SingularRateBound b = bound_theorem7(c.p0, c.d, c.initial, pi, eps, N, c.s);
        j["theorem"] = "T7";
        ordered_json classes = ordered_json::array();
        for (std::size_t k = 0; k < b.classes.size(); ++k) {
            const auto& t = b.classes[k];
            classes.push_back({{"states", states1(c.s.classes[k].states)},
                               {"f_d", t.f_d},
                               {"f_p", t.f_p},
                               {"overlap_pi", t.overlap_pi},
                               {"overlap_p", t.overlap_p},
                               {"q_n", t.ergodicity.q_n},
                               {"delta_n", t.ergodicity.delta_n}});
        }
        j["classes"] = std::move(classes);
        for (int n = 0; n <= cfg.horizon; ++n) {
            if (n > 0) cur = cur * pe.values();
            const Eigen::VectorXd dev = (cur.transpose() - pi.values()).cwiseAbs();
            const Eigen::VectorXd bound = b.evaluate_all(n);
            const bool ok = ((bound - dev).array() >= -1e-12).all();
            dominated = dominated && ok;
            table.push_back({{"n", n}, {"bound", vec(bound)}, {"deviation", vec(dev)}, {"dominated", ok}});
        }
        j["table"] = std::move(table);
        j["dominated"] = dominated;
        ordered_json ce = ordered_json::array();
        std::ostringstream os;
        os.precision(12);
        os << "class,N,q_n,delta_n\n";
        for (std::size_t k = 0; k < c.s.classes.size(); ++k) {
            const auto seq = ergodicity_sequence(restrict_matrix(c.p0, c.s.classes[k]), cfg.delta_max_N);
            for (const auto& e : seq) os << k + 1 << ',' << e.N << ',' << e.q_n << ',' << e.delta_n << '\n';
            ce.push_back(ergodicity_json(seq));
        }
        j["class_ergodicity"] = std::move(ce);
        if (csv) *csv = os.str();
        return j;
    }

    const RateBound b = theorem == 5 ? bound_theorem5(c.p0, c.initial, pi, eps)
                                     : bound_theorem6(c.p0, c.initial, pi, eps, N);
    j["theorem"] = to_string(b.theorem);
    j["q_eps_p"] = b.q_eps_p;
    j["q_n"] = b.q_n;
    j["delta_n"] = b.delta_n;
    for (int n = 0; n <= cfg.horizon; ++n) {
        if (n > 0) cur = cur * pe.values();
        const double dev = (cur.transpose() - pi.values()).cwiseAbs().maxCoeff();
        const double bound = b.evaluate(n);
        const bool ok = dev <= bound + 1e-12;
        dominated = dominated && ok;
        table.push_back({{"n", n}, {"bound", bound}, {"deviation", dev}, {"dominated", ok}});
    }
    j["table"] = std::move(table);
    j["dominated"] = dominated;
    const auto seq = ergodicity_sequence(c.p0, cfg.delta_max_N);
    j["ergodicity"] = ergodicity_json(seq);
    if (csv) *csv = ergodicity_csv(seq);
    return j;
}

ordered_json bounds_json(const Context& c, const RunConfig& cfg, std::string* csv) {
    switch (cfg.theorem) {
        case 1:
        case 2: return deviation_bound_json(c, cfg, cfg.theorem);
        case 5:
        case 6:
        case 7: return rate_bound_json(c, cfg, cfg.theorem, csv);
        default:
            throw Error(ErrorCode::InvalidInput, "--theorem must be one of 1, 2, 5, 6, 7");
    }
}

// ---- coupling simulation

ordered_json coupling_json(const Context& c, const RunConfig& cfg, std::string* csv) {
    if (!cfg.seed) throw Error(ErrorCode::InvalidInput, "coupling-sim requires --seed");
    const double eps = first_epsilon(cfg);
    if (!(eps > 0.0 && eps <= 1.0)) throw Error(ErrorCode::InvalidInput, "coupling-sim needs epsilon in (0,1]");
    const int N = std::max(1, cfg.coupling_N);
    const StochasticMatrix pe = damped(c, eps);
    const Distribution pi = stationary_direct(pe).pi;
    const CouplingKernel kernel = build_coupling_kernel(matrix_power(pe, N));
    const CouplingJoint start = maximal_coupling(c.initial, pi);
    const CouplingTail tail = simulate_coupling_time(kernel, start, cfg.trials, *cfg.seed, cfg.horizon);
    const RateBound b = N == 1 ? bound_theorem5(c.p0, c.initial, pi, eps)
                               : bound_theorem6(c.p0, c.initial, pi, eps, N);

    ordered_json j;
    j["epsilon"] = eps;
    j["N"] = N;
    j["seed"] = *cfg.seed;
    j["trials"] = tail.trials;
    j["rng"] = tail.rng;
    j["q_start"] = start.diagonal_mass;
    j["bound_theorem"] = to_string(b.theorem);
    ordered_json table = ordered_json::array();
    bool ok_all = true;
    std::ostringstream os;
    os.precision(12);
    os << "step,time,tail,std_error,bound\n";
    for (std::size_t n = 0; n < tail.tail.size(); ++n) {
        const int time = static_cast<int>(n) * N;
        const double bound = b.evaluate(time);
        const bool ok = tail.tail[n] <= bound + 3.0 * tail.std_error[n] + 1e-15;
        ok_all = ok_all && ok;
        table.push_back({{"step", n}, {"time", time}, {"tail", tail.tail[n]},
                         {"std_error", tail.std_error[n]}, {"bound", bound}});
        os << n << ',' << time << ',' << tail.tail[n] << ',' << tail.std_error[n] << ',' << bound << '\n';
    }
    j["table"] = std::move(table);
    j["within_3se"] = ok_all;
    if (csv) *csv = os.str();
    return j;
}

// ---- triangular

ordered_json triangular_json(const Context& c, const RunConfig& cfg, std::string* csv) {
    const double eps = first_epsilon(cfg);
    if (!(eps > 0.0 && eps <= 1.0)) throw Error(ErrorCode::InvalidInput, "triangular needs epsilon in (0,1]");
    if (cfg.tracked_state < 1 || static_cast<std::size_t>(cfg.tracked_state) > c.p0.dim()) {
        throw Error(ErrorCode::InvalidInput, "tracked state out of range");
    }
    std::vector<int> grid = cfg.n_grid;
    if (grid.empty()) {
        for (int n = 0; n <= steps_for(3.0, eps); ++n) grid.push_back(n);
    }
    SweepOptions so;
    so.tracked_state = static_cast<std::size_t>(cfg.tracked_state - 1);
    so.N = cfg.coupling_N;
    const std::optional<int> N = so.N > 0 ? std::optional<int>(so.N) : smallest_contracting_N(c.p0, c.s);
    const auto rows = triangular_sweep(c.p0, c.d, c.initial, c.s, eps, grid, so);

    ordered_json j;
    j["epsilon"] = eps;
    j["N"] = opt(N);
    j["tracked_state"] = cfg.tracked_state;
    if (cfg.t) {
        const MixingTime mt = *cfg.t < 0 ? MixingTime::infinity() : MixingTime(*cfg.t);
        const TriangularLimit lim = triangular_limit(c.p0, c.d, c.initial, c.s, mt);
        ordered_json l;
        l["t"] = mt.str();
        l["weight"] = lim.weight;
        l["pi0_p"] = vec(lim.pi0_p);
        l["pi0_d"] = vec(lim.pi0_d);
        l["pi_of_t"] = vec(lim.pi_of_t);
        j["limit"] = std::move(l);
    }
    ordered_json out = ordered_json::array();
    bool dominated = true;
    std::ostringstream os;
    os.precision(12);
    os << "n,eps_n,trajectory,limit,relative_error,max_deviation,bound_max\n";
    for (const auto& r : rows) {
        ordered_json row;
        row["n"] = r.n;
        row["eps_n"] = r.eps_n;
        row["tracked_value"] = r.tracked_value;
        row["tracked_limit"] = r.tracked_limit;
        row["relative_error"] = r.relative_error;
        row["max_deviation"] = r.max_deviation;
        if (r.bound) {
            const bool ok = ((*r.bound - (r.trajectory - r.limit).cwiseAbs()).array() >= -1e-12).all();
            dominated = dominated && ok;
            row["bound_max"] = r.bound->maxCoeff();
            row["dominated"] = ok;
        } else {
            row["bound_max"] = nullptr;
            row["dominated"] = nullptr;
        }
        os << r.n << ',' << r.eps_n << ',' << r.tracked_value << ',' << r.tracked_limit << ','
           << r.relative_error << ',' << r.max_deviation << ',';
        if (r.bound) os << r.bound->maxCoeff();
        os << '\n';
        out.push_back(std::move(row));
    }
    j["rows"] = std::move(out);
    j["dominated"] = N ? ordered_json(dominated) : ordered_json(nullptr);
    if (csv) *csv = os.str();
    return j;
}

ordered_json guarded(const std::function<ordered_json()>& f) {
    try {
        return f();
    } catch (const Error& e) {
        return {{"error", {{"code", to_string(e.code())}, {"message", e.what()}}}};
    }
}

}  // namespace

CommandResult run_command(const std::string& command, const RunConfig& cfg) {
    CommandResult out;
    if (std::find(command_names().begin(), command_names().end(), command) == command_names().end()) {
        throw Error(ErrorCode::InvalidInput, "unknown command '" + command + "'");
    }
    const Context c = load(cfg);

    if (command == "convert") {
        if (cfg.to == "json") {
            out.raw = emit_matrix_json(c.p0, &c.d);
        } else if (cfg.to == "csv") {
            out.raw = emit_matrix_csv(c.p0);
        } else {
            throw Error(ErrorCode::InvalidInput, "--to must be json or csv");
        }
        return out;
    }

    ordered_json& j = out.report;
    j["tool"] = "dampchain";
    j["version"] = kVersion;
    j["command"] = command;
    j["inputs"] = echo_inputs(cfg);
    std::string* csv = &out.plot_csv;

    if (command == "structure") {
        j["result"] = structure_json(c.s);
    } else if (command == "stationary") {
        j["result"] = stationary_json(c, cfg);
    } else if (command == "expand") {
        j["result"] = expansion_json(c, cfg);
    } else if (command == "bounds") {
        j["result"] = bounds_json(c, cfg, csv);
    } else if (command == "coupling-sim") {
        j["result"] = coupling_json(c, cfg, csv);
    } else if (command == "triangular") {
        j["result"] = triangular_json(c, cfg, csv);
    } else {
        ordered_json r;
        r["structure"] = structure_json(c.s);
        r["stationary"] = guarded([&] { return stationary_json(c, cfg); });
        r["expansion"] = guarded([&] { return expansion_json(c, cfg); });
        ordered_json b;
        RunConfig sub = cfg;
        sub.theorem = c.s.regime == Regime::Singular ? 2 : 1;
        b["deviation"] = guarded([&] { return deviation_bound_json(c, sub, sub.theorem); });
        if (c.s.regime == Regime::Singular) {
            b["rate"] = guarded([&] { return rate_bound_json(c, cfg, 7, nullptr); });
        } else {
            b["rate_t5"] = guarded([&] { return rate_bound_json(c, cfg, 5, csv); });
            b["rate_t6"] = guarded([&] { return rate_bound_json(c, cfg, 6, nullptr); });
        }
        r["bounds"] = std::move(b);
        if (cfg.seed) {
            r["coupling"] = guarded([&] { return coupling_json(c, cfg, nullptr); });
        } else {
            r["coupling"] = {{"skipped", "no --seed given"}};
        }
        r["triangular"] = guarded([&] { return triangular_json(c, cfg, nullptr); });
        j["result"] = std::move(r);
    }
    return out;
}

}  // namespace dampchain
