#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dampchain/io.hpp"

namespace dampchain {

using ordered_json = nlohmann::ordered_json;

inline constexpr const char* kVersion = DAMPCHAIN_VERSION;

/// Everything a command reads. Echoed verbatim under "inputs".
struct RunConfig {
    std::string input;
    InputFormat format = InputFormat::EdgeList;
    DanglingPolicy dangling = DanglingPolicy::Reject;
    std::string damping = "uniform";  // "uniform" or a vector file
    std::string initial = "uniform";  // uniform | damping | state:K | vector file
    std::vector<double> epsilons{0.15};
    int order = 2;
    int coupling_N = 0;  // 0 = smallest N with Delta_N < 1
    std::optional<std::uint64_t> seed;
    long trials = 100000;
    int horizon = 30;
    double tol = 1e-10;
    std::optional<double> C;
    std::optional<double> lambda;
    int theorem = 5;
    std::optional<double> t;  // mixing time for `triangular`; negative means infinity
    std::vector<int> n_grid;
    int tracked_state = 1;  // 1-based
    int delta_max_N = 12;
    std::string to = "json";  // output format for `convert`
};

struct CommandResult {
    ordered_json report;
    std::string plot_csv;  // empty when the command has no plot data
    std::string raw;       // `convert` writes this instead of the report
};

inline const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names{"structure", "stationary", "expand", "bounds",
                                                "coupling-sim", "triangular", "report", "convert"};
    return names;
}

CommandResult run_command(const std::string& command, const RunConfig& cfg);

ordered_json error_report(const std::string& command, const std::string& code,
                          const std::string& message);

/// Rounds every float to 12 significant digits and pretty-prints.
std::string dump_report(const ordered_json& report);

double round_significant(double x, int digits = 12);

}  // namespace dampchain
