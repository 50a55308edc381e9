// SPDX-License-Identifier: Apache-2.0

#include "admgid/io.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "admgid/error.hpp"

namespace admgid {

using nlohmann::json;

namespace {

[[noreturn]] void parse_fail(const std::string &what) {
  throw Error(ErrorCode::ParseError, what);
}

std::vector<std::string> string_list(const json &doc, const char *key) {
  if (!doc.contains(key))
    return {};
  const json &v = doc.at(key);
  if (!v.is_array())
    parse_fail(std::string("\"") + key + "\" must be an array");
  std::vector<std::string> out;
  for (const auto &e : v) {
    if (!e.is_string())
      parse_fail(std::string("\"") + key + "\" must hold strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

std::vector<NamedEdge> edge_list(const json &doc, const char *key) {
  if (!doc.contains(key))
    return {};
  const json &v = doc.at(key);
  if (!v.is_array())
    parse_fail(std::string("\"") + key + "\" must be an array of pairs");
  std::vector<NamedEdge> out;
  for (const auto &e : v) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_string())
      parse_fail(std::string("\"") + key + "\" entries must be [from, to] string pairs");
    out.emplace_back(e[0].get<std::string>(), e[1].get<std::string>());
  }
  return out;
}

}  // namespace

GraphDocument graph_document_from_json(const json &doc) {
  if (!doc.is_object())
    parse_fail("graph document must be a JSON object");
  static const std::set<std::string> plain{"vertices", "directed", "bidirected"};
  static const std::set<std::string> factor{"vertices", "directed", "bidirected",
                                            "latents", "loadings", "weights"};
  const bool is_factor = doc.contains("latents") || doc.contains("loadings");
  for (const auto &[key, value] : doc.items()) {
    (void)value;
    if (!(is_factor ? factor : plain).count(key))
      parse_fail("unknown key \"" + key + "\"");
  }
  if (!doc.contains("vertices"))
    parse_fail("missing \"vertices\"");

  const auto vertices = string_list(doc, "vertices");
  const auto directed = edge_list(doc, "directed");
  const auto bidirected = edge_list(doc, "bidirected");
  if (!is_factor)
    return {MixedGraph(vertices, directed, bidirected), std::nullopt};

  std::optional<std::vector<double>> weights;
  if (doc.contains("weights")) {
    const json &w = doc.at("weights");
    if (!w.is_array())
      parse_fail("\"weights\" must be an array of numbers");
    weights.emplace();
    for (const auto &x : w) {
      if (!x.is_number())
        parse_fail("\"weights\" must be an array of numbers");
      weights->push_back(x.get<double>());
    }
  }
  LatentFactorGraph l(vertices, string_list(doc, "latents"), edge_list(doc, "loadings"),
                      weights);
  const MixedGraph projected = latent_projection_bidirected(l);
  if (doc.contains("bidirected")) {
    const MixedGraph listed(vertices, {}, bidirected);
    if (listed.bidirected_edges() != projected.bidirected_edges())
      throw Error(ErrorCode::InvalidFactorGraph,
                  "listed bidirected edges differ from the latent projection");
  }
  std::vector<NamedEdge> proj_edges;
  for (const auto &[u, v] : projected.bidirected_edges())
    proj_edges.emplace_back(vertices[u], vertices[v]);
  return {MixedGraph(vertices, directed, proj_edges), std::move(l)};
}

MixedGraph graph_from_json(const json &doc) { return graph_document_from_json(doc).graph; }

json graph_to_json(const MixedGraph &g) {
  json out;
  out["vertices"] = g.vertices();
  out["directed"] = json::array();
  for (const auto &[u, v] : g.directed_edges())
    out["directed"].push_back({g.name(u), g.name(v)});
  out["bidirected"] = json::array();
  for (const auto &[u, v] : g.bidirected_edges())
    out["bidirected"].push_back({g.name(u), g.name(v)});
  return out;
}

json read_json_file(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in)
    parse_fail("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception &e) {
    parse_fail(path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    parse_fail("cannot write " + path.string());
  out << text;
  if (!out)
    parse_fail("write failed for " + path.string());
}

GraphDocument load_graph_document(const std::filesystem::path &path) {
  return graph_document_from_json(read_json_file(path));
}

std::string edge_key(const MixedGraph &g, Vertex u, Vertex v) {
  return g.name(u) + "->" + g.name(v);
}

json report_to_json(const MixedGraph &g, const IdentReport &report) {
  json out;
  if (!report.graph_id.empty())
    out["graph"] = report.graph_id;
  out["identifiable"] = report.all_identifiable();
  json columns = json::object();
  for (const auto &c : report.columns) {
    json witness = json::array();
    for (const auto &path : c.witness) {
      json p = json::array();
      for (Vertex u : path)
        p.push_back(g.name(u));
      witness.push_back(std::move(p));
    }
    columns[g.name(c.vertex)] = {{"removable", g.names_of(c.removable)},
                                 {"rank", c.rank},
                                 {"identifiable", c.identifiable},
                                 {"witness", std::move(witness)}};
  }
  out["columns"] = std::move(columns);
  json edges = json::object();
  for (const auto &e : report.edges)
    edges[edge_key(g, e.from, e.to)] = e.identifiable;
  out["edges"] = std::move(edges);
  return out;
}

json params_to_json(const ParamMatrix &lam) {
  const auto &names = lam.binding().vertices;
  json edges = json::object();
  for (const auto &[u, v] : lam.edges())
    edges[names[u] + "->" + names[v]] = lam.get(u, v);
  return {{"edges", std::move(edges)}};
}

ParamMatrix params_from_json(const MixedGraph &g, const json &doc) {
  if (!doc.is_object() || !doc.contains("edges") || !doc.at("edges").is_object())
    parse_fail("parameter document needs an \"edges\" object");
  for (const auto &[key, value] : doc.items()) {
    (void)value;
    if (key != "edges")
      parse_fail("unknown key \"" + key + "\"");
  }
  const json &edges = doc.at("edges");
  ParamMatrix lam(g);
  std::size_t seen = 0;
  for (const auto &[u, v] : g.directed_edges()) {
    const std::string key = edge_key(g, u, v);
    if (!edges.contains(key))
      parse_fail("missing parameter for " + key);
    if (!edges.at(key).is_number())
      parse_fail("parameter " + key + " is not a number");
    lam.set(u, v, edges.at(key).get<double>());
    ++seen;
  }
  if (seen != edges.size())
    throw Error(ErrorCode::BindingMismatch, "parameter document lists edges not in the graph");
  return lam;
}

std::string format_double(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  (void)ec;
  return std::string(buf, end);
}

std::string dataset_to_csv(const Dataset &ds) {
  std::string out;
  for (std::size_t j = 0; j < ds.columns().size(); ++j)
    out += (j ? "," : "") + ds.columns()[j];
  out += '\n';
  const auto &x = ds.values();
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      if (j)
        out += ',';
      out += format_double(x(i, j));
    }
    out += '\n';
  }
  return out;
}

namespace {

std::vector<std::string> split_csv_line(const std::string &line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ','))
    out.push_back(cell);
  if (!line.empty() && line.back() == ',')
    out.emplace_back();
  return out;
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos)
    return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

Dataset dataset_from_csv(const std::string &text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line))
    parse_fail("empty CSV");
  std::vector<std::string> header;
  for (auto &h : split_csv_line(line))
    header.push_back(trim(h));
  if (header.empty())
    parse_fail("CSV header has no columns");

  std::vector<double> values;
  Eigen::Index rows = 0;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty())
      continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != header.size())
      parse_fail("CSV line " + std::to_string(line_no) + " has " +
                 std::to_string(cells.size()) + " fields, expected " +
                 std::to_string(header.size()));
    for (const auto &c : cells) {
      const std::string t = trim(c);
      double x = 0.0;
      auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), x);
      if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
        parse_fail("CSV line " + std::to_string(line_no) + ": bad number \"" + t + "\"");
      values.push_back(x);
    }
    ++rows;
  }
  if (rows == 0)
    parse_fail("CSV has no data rows");
  const auto cols = static_cast<Eigen::Index>(header.size());
  Eigen::MatrixXd m = Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                               Eigen::RowMajor>>(values.data(), rows, cols);
  return Dataset(std::move(header), std::move(m));
}

json provenance_to_json(const Provenance &p) {
  return {{"seed", p.seed}, {"generator", p.generator}, {"params", p.params}};
}

std::filesystem::path provenance_path(const std::filesystem::path &data_path) {
  return data_path.string() + ".provenance.json";
}

void write_dataset(const std::filesystem::path &path, const Dataset &ds) {
  write_text_file(path, dataset_to_csv(ds));
  write_text_file(provenance_path(path), provenance_to_json(ds.provenance()).dump(2) + "\n");
}

Dataset read_dataset(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    parse_fail("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  Dataset ds = dataset_from_csv(ss.str());
  const auto side = provenance_path(path);
  if (!std::filesystem::exists(side))
    return ds;
  const json doc = read_json_file(side);
  Provenance prov;
  try {
    prov.seed = doc.at("seed").get<std::uint64_t>();
    prov.generator = doc.at("generator").get<std::string>();
    prov.params = doc.value("params", json::object());
  } catch (const json::exception &e) {
    parse_fail(side.string() + ": " + e.what());
  }
  return Dataset(ds.columns(), ds.values(), std::move(prov));
}

json estimate_to_json(const MixedGraph &g, const EstimateResult &result,
                      const ParamMatrix *truth) {
  json out = params_to_json(result.lam_hat);
  out["objective_trace"] = result.objective_trace;
  out["final_objective"] = result.final_objective();
  out["iterations"] = result.iterations;
  out["converged"] = result.converged;
  out["stop_reason"] = result.stop_reason;
  out["init"] = to_string(result.init_kind);
  json kernels = json::object();
  for (std::size_t v = 0; v < result.kernels.size(); ++v) {
    const auto &k = result.kernels[v];
    json kj;
    if (k.kind == KernelSpec::Kind::Polynomial)
      kj = {{"kind", "polynomial"}, {"degree", k.degree}, {"offset", k.offset}};
    else
      kj = {{"kind", "rbf"}, {"bandwidth", k.bandwidth.value_or(0.0)}};
    kernels[g.name(static_cast<Vertex>(v))] = std::move(kj);
  }
  out["kernels"] = std::move(kernels);
  if (truth) {
    out["loss"] = normalized_frobenius_loss(result.lam_hat, *truth);
    json errs = json::object();
    for (const auto &[u, v] : g.directed_edges())
      errs[edge_key(g, u, v)] = std::abs(result.lam_hat.get(u, v) - truth->get(u, v));
    out["abs_errors"] = std::move(errs);
  }
  return out;
}

}  // namespace admgid
