#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "dampchain/chain.hpp"

namespace dampchain {

enum class InputFormat { EdgeList, Csv, Json };
enum class DanglingPolicy { Reject, SelfLoop, UniformJump };

InputFormat parse_format(std::string_view name);
/// edges / csv / json from the file extension; edges when unknown.
InputFormat format_from_path(std::string_view path);
DanglingPolicy parse_dangling_policy(std::string_view name);
std::string_view to_string(InputFormat f);
std::string_view to_string(DanglingPolicy p);

struct IngestOptions {
    InputFormat format = InputFormat::EdgeList;
    DanglingPolicy dangling = DanglingPolicy::Reject;
    double row_tol = kDefaultRowTol;
};

struct Ingested {
    StochasticMatrix p0;
    std::optional<DampingVector> damping;
};

/// Accepts plain decimals and "a/b" fractions.
double parse_number(std::string_view token);

/// Edge list: one "src dst" per line, 1-based ids, '#' starts a comment. Rows are
/// uniform over distinct out-neighbours; the state count is the largest id.
Ingested parse_edge_list(const std::string& text, const IngestOptions& opts);
/// One matrix row per line, separated by commas and/or whitespace.
Ingested parse_matrix_csv(const std::string& text, const IngestOptions& opts);
/// {"matrix": [[...]], "damping": [...]}; damping optional.
Ingested parse_matrix_json(const std::string& text, const IngestOptions& opts);

Ingested ingest_text(const std::string& text, const IngestOptions& opts);
Ingested ingest(const std::string& path, const IngestOptions& opts);

/// A single vector (damping or initial distribution) from a file: numbers
/// separated by commas/whitespace, or a JSON array.
Eigen::VectorXd read_vector_file(const std::string& path);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

/// Shortest round-trip representation, so emit -> ingest -> emit is stable.
std::string emit_matrix_json(const StochasticMatrix& p, const DampingVector* d = nullptr);
std::string emit_matrix_csv(const StochasticMatrix& p);

}  // namespace dampchain
