// Command-line front end. Every command prints a JSON report (or writes it to --out).

#include <cstdint>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "dampchain/report.hpp"

namespace {

std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> out;
    std::string tok;
    std::istringstream in(text);
    while (std::getline(in, tok, ',')) {
        if (!tok.empty()) out.push_back(dampchain::parse_number(tok));
    }
    return out;
}

// "0:30" (inclusive range), "0:30:5" (with step) or "10,20,30".
std::vector<int> parse_int_grid(const std::string& text) {
    std::vector<int> out;
    if (text.find(':') != std::string::npos) {
        std::vector<int> parts;
        std::string tok;
        std::istringstream in(text);
        while (std::getline(in, tok, ':')) parts.push_back(std::stoi(tok));
        if (parts.size() < 2 || parts.size() > 3) throw std::invalid_argument("bad range");
        const int step = parts.size() == 3 ? parts[2] : 1;
        if (step < 1) throw std::invalid_argument("bad step");
        for (int n = parts[0]; n <= parts[1]; n += step) out.push_back(n);
        return out;
    }
    std::string tok;
    std::istringstream in(text);
    while (std::getline(in, tok, ',')) {
        if (!tok.empty()) out.push_back(std::stoi(tok));
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    using namespace dampchain;
    CLI::App app{"Perturbation analysis of Markov chains with a damping component"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    RunConfig cfg;
    std::string format, dangling = "reject", epsilon, epsilon_grid, out_path, plot_path, t_text,
                n_grid;
    std::uint64_t seed = 0;
    std::string C, lambda;

    for (const std::string& name : command_names()) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--input,-i", cfg.input, "matrix or edge-list file")->required();
        sub->add_option("--format", format, "edges | csv | json (default: from extension)");
        sub->add_option("--damping", cfg.damping, "uniform, or a file holding the damping row");
        sub->add_option("--initial", cfg.initial, "uniform | damping | state:K | vector file");
        sub->add_option("--epsilon", epsilon, "damping weight (single value)");
        sub->add_option("--epsilon-grid", epsilon_grid, "comma separated epsilon values");
        sub->add_option("--order,--epsilon-order", cfg.order, "expansion order");
        sub->add_option("--coupling-N", cfg.coupling_N, "block length N (0 picks the smallest contracting N)");
        sub->add_option("--seed", seed, "Monte Carlo seed");
        sub->add_option("--trials", cfg.trials, "Monte Carlo trials");
        sub->add_option("--horizon", cfg.horizon, "largest n in bound tables and simulations");
        sub->add_option("--out,-o", out_path, "write the report here instead of stdout");
        sub->add_option("--plot-data", plot_path, "write CSV plot data here");
        sub->add_option("--tol", cfg.tol, "solver tolerance");
        sub->add_option("--dangling-policy", dangling, "reject | self-loop | uniform-jump");
        sub->add_option("--theorem", cfg.theorem, "bounds: 1, 2, 5, 6 or 7");
        sub->add_option("--C", C, "deviation constant C (decimal or a/b)");
        sub->add_option("--lambda", lambda, "deviation rate lambda (decimal or a/b)");
        sub->add_option("--t", t_text, "mixing time t for the triangular limit (or 'inf')");
        sub->add_option("--n-grid", n_grid, "triangular sweep steps, e.g. 10:30 or 10,20,30");
        sub->add_option("--track", cfg.tracked_state, "1-based state followed by the sweep");
        sub->add_option("--delta-max-N", cfg.delta_max_N, "largest N in the Delta_N table");
        sub->add_option("--to", cfg.to, "convert: json | csv");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }
    CLI::App* sub = app.get_subcommands().front();
    const std::string command = sub->get_name();

    auto fail = [&](const std::string& code, const std::string& message) {
        const std::string text = dump_report(error_report(command, code, message));
        std::cout << text;
        return 1;
    };

    try {
        cfg.format = format.empty() ? format_from_path(cfg.input) : parse_format(format);
        cfg.dangling = parse_dangling_policy(dangling);
        if (!epsilon.empty() && !epsilon_grid.empty()) {
            throw Error(ErrorCode::InvalidInput, "give either --epsilon or --epsilon-grid");
        }
        if (!epsilon.empty()) cfg.epsilons = {parse_number(epsilon)};
        if (!epsilon_grid.empty()) cfg.epsilons = parse_grid(epsilon_grid);
        if (sub->count("--seed")) cfg.seed = seed;
        if (!C.empty()) cfg.C = parse_number(C);
        if (!lambda.empty()) cfg.lambda = parse_number(lambda);
        if (!t_text.empty()) cfg.t = (t_text == "inf") ? -1.0 : parse_number(t_text);
        if (cfg.t && *cfg.t < 0 && t_text != "inf") {
            throw Error(ErrorCode::InvalidInput, "--t must be >= 0 or 'inf'");
        }
        if (!n_grid.empty()) {
            try {
                cfg.n_grid = parse_int_grid(n_grid);
            } catch (const std::exception&) {
                throw Error(ErrorCode::InvalidInput, "cannot parse --n-grid '" + n_grid + "'");
            }
        }

        const CommandResult res = run_command(command, cfg);
        const std::string text = res.raw.empty() ? dump_report(res.report) : res.raw;
        if (out_path.empty()) {
            std::cout << text;
        } else {
            write_file(out_path, text);
        }
        if (!plot_path.empty()) {
            if (res.plot_csv.empty()) {
                throw Error(ErrorCode::InvalidInput, "command '" + command + "' has no plot data");
            }
            write_file(plot_path, res.plot_csv);
        }
        return 0;
    } catch (const Error& e) {
        return fail(std::string(to_string(e.code())), e.what());
    } catch (const std::exception& e) {
        return fail("internal", e.what());
    }
}
