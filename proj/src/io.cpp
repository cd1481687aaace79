#include "dampchain/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <vector>

#include <json.hpp>

namespace dampchain {

using json = nlohmann::json;

std::string_view to_string(InputFormat f) {
    switch (f) {
        case InputFormat::EdgeList: return "edges";
        case InputFormat::Csv: return "csv";
        case InputFormat::Json: return "json";
    }
    return "unknown";
}

std::string_view to_string(DanglingPolicy p) {
    switch (p) {
        case DanglingPolicy::Reject: return "reject";
        case DanglingPolicy::SelfLoop: return "self-loop";
        case DanglingPolicy::UniformJump: return "uniform-jump";
    }
    return "unknown";
}

InputFormat parse_format(std::string_view name) {
    if (name == "edges" || name == "edge-list" || name == "edgelist") return InputFormat::EdgeList;
    if (name == "csv") return InputFormat::Csv;
    if (name == "json") return InputFormat::Json;
    throw Error(ErrorCode::InvalidInput, "unknown format '" + std::string(name) + "'");
}

InputFormat format_from_path(std::string_view path) {
    std::string lower(path);
    for (char& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    auto ends_with = [&](std::string_view ext) {
        return lower.size() >= ext.size() && lower.compare(lower.size() - ext.size(), ext.size(), ext) == 0;
    };
    if (ends_with(".csv")) return InputFormat::Csv;
    if (ends_with(".json")) return InputFormat::Json;
    return InputFormat::EdgeList;
}

DanglingPolicy parse_dangling_policy(std::string_view name) {
    if (name == "reject") return DanglingPolicy::Reject;
    if (name == "self-loop") return DanglingPolicy::SelfLoop;
    if (name == "uniform-jump") return DanglingPolicy::UniformJump;
    throw Error(ErrorCode::InvalidInput, "unknown dangling policy '" + std::string(name) + "'");
}

namespace {

double parse_decimal(std::string_view tok, std::string_view whole) {
    double v = 0.0;
    const char* b = tok.data();
    const char* e = tok.data() + tok.size();
    if (!tok.empty() && *b == '+') ++b;
    auto [ptr, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || ptr != e) {
        throw Error(ErrorCode::InvalidInput, "cannot parse number '" + std::string(whole) + "'");
    }
    return v;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',' || c == ';' || std::isspace(static_cast<unsigned char>(c))) {
            if (!cur.empty()) out.push_back(std::move(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

std::string strip_comment(const std::string& line) {
    const auto pos = line.find('#');
    return pos == std::string::npos ? line : line.substr(0, pos);
}

double json_number(const json& v) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) return parse_number(v.get<std::string>());
    throw Error(ErrorCode::InvalidInput, "expected a number or fraction string in JSON input");
}

Eigen::VectorXd json_vector(const json& arr) {
    if (!arr.is_array()) throw Error(ErrorCode::InvalidInput, "expected a JSON array");
    Eigen::VectorXd v(static_cast<Eigen::Index>(arr.size()));
    for (std::size_t i = 0; i < arr.size(); ++i) v(static_cast<Eigen::Index>(i)) = json_number(arr[i]);
    return v;
}

}  // namespace

double parse_number(std::string_view token) {
    while (!token.empty() && std::isspace(static_cast<unsigned char>(token.front()))) token.remove_prefix(1);
    while (!token.empty() && std::isspace(static_cast<unsigned char>(token.back()))) token.remove_suffix(1);
    const auto slash = token.find('/');
    if (slash == std::string_view::npos) return parse_decimal(token, token);
    const double num = parse_decimal(token.substr(0, slash), token);
    const double den = parse_decimal(token.substr(slash + 1), token);
    if (den == 0.0) throw Error(ErrorCode::InvalidInput, "zero denominator in '" + std::string(token) + "'");
    return num / den;
}

Ingested parse_edge_list(const std::string& text, const IngestOptions& opts) {
    std::istringstream in(text);
    std::string line;
    std::vector<std::pair<long, long>> edges;
    long max_id = 0;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto fields = split_fields(strip_comment(line));
        if (fields.empty()) continue;
        if (fields.size() != 2) {
            throw Error(ErrorCode::InvalidInput,
                        "edge list line " + std::to_string(lineno) + ": expected 'src dst'");
        }
        long ids[2];
        for (int k = 0; k < 2; ++k) {
            const std::string& f = fields[static_cast<std::size_t>(k)];
            auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), ids[k]);
            if (ec != std::errc() || ptr != f.data() + f.size() || ids[k] < 1) {
                throw Error(ErrorCode::InvalidInput, "edge list line " + std::to_string(lineno) +
                                                         ": bad node id '" + f + "'");
            }
        }
        edges.emplace_back(ids[0], ids[1]);
        max_id = std::max({max_id, ids[0], ids[1]});
    }
    if (max_id == 0) throw Error(ErrorCode::InvalidInput, "edge list is empty");
    const auto m = static_cast<std::size_t>(max_id);
    std::vector<std::set<std::size_t>> out(m);
    for (auto [s, t] : edges) out[static_cast<std::size_t>(s - 1)].insert(static_cast<std::size_t>(t - 1));

    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(max_id, max_id);
    for (std::size_t i = 0; i < m; ++i) {
        const auto r = static_cast<Eigen::Index>(i);
        if (out[i].empty()) {
            switch (opts.dangling) {
                case DanglingPolicy::Reject:
                    throw Error(ErrorCode::InvalidInput,
                                "node " + std::to_string(i + 1) +
                                    " has no out-links; pass --dangling-policy self-loop or uniform-jump");
                case DanglingPolicy::SelfLoop: p(r, r) = 1.0; break;
                case DanglingPolicy::UniformJump: p.row(r).setConstant(1.0 / static_cast<double>(m)); break;
            }
            continue;
        }
        const double w = 1.0 / static_cast<double>(out[i].size());
        for (std::size_t j : out[i]) p(r, static_cast<Eigen::Index>(j)) = w;
    }
    return {StochasticMatrix(std::move(p), opts.row_tol), std::nullopt};
}

Ingested parse_matrix_csv(const std::string& text, const IngestOptions& opts) {
    std::istringstream in(text);
    std::string line;
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        const auto fields = split_fields(strip_comment(line));
        if (fields.empty()) continue;
        std::vector<double> row;
        for (const auto& f : fields) row.push_back(parse_number(f));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw Error(ErrorCode::InvalidInput, "matrix CSV is empty");
    const auto m = static_cast<Eigen::Index>(rows.size());
    Eigen::MatrixXd p(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
        const auto& r = rows[static_cast<std::size_t>(i)];
        if (static_cast<Eigen::Index>(r.size()) != m) {
            throw Error(ErrorCode::DimensionMismatch,
                        "matrix CSV row " + std::to_string(i + 1) + " has " +
                            std::to_string(r.size()) + " entries, expected " + std::to_string(m));
        }
        for (Eigen::Index j = 0; j < m; ++j) p(i, j) = r[static_cast<std::size_t>(j)];
    }
    return {StochasticMatrix(std::move(p), opts.row_tol), std::nullopt};
}

Ingested parse_matrix_json(const std::string& text, const IngestOptions& opts) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::InvalidInput, std::string("matrix JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("matrix")) {
        throw Error(ErrorCode::InvalidInput, "matrix JSON needs a \"matrix\" field");
    }
    const json& rows = doc["matrix"];
    if (!rows.is_array() || rows.empty()) throw Error(ErrorCode::InvalidInput, "\"matrix\" must be a non-empty array");
    const auto m = static_cast<Eigen::Index>(rows.size());
    Eigen::MatrixXd p(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
        const Eigen::VectorXd r = json_vector(rows[static_cast<std::size_t>(i)]);
        if (r.size() != m) {
            throw Error(ErrorCode::DimensionMismatch, "matrix JSON row " + std::to_string(i + 1) + " has wrong length");
        }
        p.row(i) = r.transpose();
    }
    Ingested out{StochasticMatrix(std::move(p), opts.row_tol), std::nullopt};
    if (doc.contains("damping") && !doc["damping"].is_null()) {
        Eigen::VectorXd d = json_vector(doc["damping"]);
        require_same_dim(static_cast<std::size_t>(d.size()), out.p0.dim(), "damping");
        out.damping = DampingVector(std::move(d), opts.row_tol);
    }
    return out;
}

Ingested ingest_text(const std::string& text, const IngestOptions& opts) {
    switch (opts.format) {
        case InputFormat::EdgeList: return parse_edge_list(text, opts);
        case InputFormat::Csv: return parse_matrix_csv(text, opts);
        case InputFormat::Json: return parse_matrix_json(text, opts);
    }
    throw Error(ErrorCode::InvalidInput, "unknown format");
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::Io, "cannot write '" + path + "'");
    out << content;
    if (!out) throw Error(ErrorCode::Io, "write failed for '" + path + "'");
}

Ingested ingest(const std::string& path, const IngestOptions& opts) {
    return ingest_text(read_file(path), opts);
}

Eigen::VectorXd read_vector_file(const std::string& path) {
    const std::string text = read_file(path);
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '[') {
        try {
            return json_vector(json::parse(text));
        } catch (const json::parse_error& e) {
            throw Error(ErrorCode::InvalidInput, std::string("vector JSON: ") + e.what());
        }
    }
    std::vector<double> vals;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        for (const auto& f : split_fields(strip_comment(line))) vals.push_back(parse_number(f));
    }
    if (vals.empty()) throw Error(ErrorCode::InvalidInput, "vector file '" + path + "' is empty");
    return Eigen::Map<Eigen::VectorXd>(vals.data(), static_cast<Eigen::Index>(vals.size()));
}

std::string emit_matrix_json(const StochasticMatrix& p, const DampingVector* d) {
    json doc = json::object();
    json rows = json::array();
    for (std::size_t i = 0; i < p.dim(); ++i) {
        json r = json::array();
        for (std::size_t j = 0; j < p.dim(); ++j) r.push_back(p(i, j));
        rows.push_back(std::move(r));
    }
    doc["matrix"] = std::move(rows);
    if (d != nullptr) {
        json dv = json::array();
        for (std::size_t i = 0; i < d->dim(); ++i) dv.push_back((*d)[i]);
        doc["damping"] = std::move(dv);
    }
    return doc.dump() + "\n";
}

std::string emit_matrix_csv(const StochasticMatrix& p) {
    std::string out;
    for (std::size_t i = 0; i < p.dim(); ++i) {
        for (std::size_t j = 0; j < p.dim(); ++j) {
            if (j) out += ',';
            // json's number formatting is the shortest round-trip form.
            out += json(p(i, j)).dump();
        }
        out += '\n';
    }
    return out;
}

}  // namespace dampchain
