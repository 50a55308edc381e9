// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "json.hpp"

#include "admgid/estimate.hpp"
#include "admgid/graph.hpp"
#include "admgid/ident.hpp"
#include "admgid/params.hpp"
#include "admgid/simulate.hpp"

namespace admgid {

/// A graph file: plain ADMG, or a pure latent factor graph whose
/// bidirected part is the latent projection.
struct GraphDocument {
  MixedGraph graph;
  std::optional<LatentFactorGraph> factors;
};

/// Parses {"vertices", "directed", "bidirected"} and, for factor graphs,
/// {"latents", "loadings", "weights"}. Unknown keys and malformed values
/// throw Error{ParseError}; structural problems throw the graph errors.
GraphDocument graph_document_from_json(const nlohmann::json &doc);
MixedGraph graph_from_json(const nlohmann::json &doc);
nlohmann::json graph_to_json(const MixedGraph &g);

/// Reads and parses a file; Error{ParseError} when unreadable.
nlohmann::json read_json_file(const std::filesystem::path &path);
void write_text_file(const std::filesystem::path &path, const std::string &text);
GraphDocument load_graph_document(const std::filesystem::path &path);

std::string edge_key(const MixedGraph &g, Vertex u, Vertex v);

nlohmann::json report_to_json(const MixedGraph &g, const IdentReport &report);

/// {"edges": {"u->v": value}}.
nlohmann::json params_to_json(const ParamMatrix &lam);
/// Every directed edge of g must be present, and nothing else.
ParamMatrix params_from_json(const MixedGraph &g, const nlohmann::json &doc);

/// Shortest round-trip decimal form.
std::string format_double(double x);

/// Header of column ids, one sample per row.
std::string dataset_to_csv(const Dataset &ds);
Dataset dataset_from_csv(const std::string &text);
nlohmann::json provenance_to_json(const Provenance &p);

/// Writes <path> and <path>.provenance.json.
void write_dataset(const std::filesystem::path &path, const Dataset &ds);
/// Reads the CSV and, when present, its provenance sidecar.
Dataset read_dataset(const std::filesystem::path &path);
std::filesystem::path provenance_path(const std::filesystem::path &data_path);

nlohmann::json estimate_to_json(const MixedGraph &g, const EstimateResult &result,
                                const ParamMatrix *truth = nullptr);

}  // namespace admgid
