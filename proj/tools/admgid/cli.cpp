// SPDX-License-Identifier: Apache-2.0

#include "cli.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "admgid/error.hpp"
#include "admgid/estimate.hpp"
#include "admgid/ident.hpp"
#include "admgid/io.hpp"
#include "admgid/oracle.hpp"
#include "admgid/random.hpp"
#include "admgid/simulate.hpp"

namespace admgid::cli {

using nlohmann::json;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int exit_code_for(ErrorCode code) {
  switch (code) {
  case ErrorCode::ParseError: return kParseError;
  case ErrorCode::NonFiniteObjective: return kDiverged;
  default: return kInvalidInput;
  }
}

std::vector<std::string> split(const std::string &s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep))
    if (!item.empty())
      out.push_back(item);
  return out;
}

void emit(std::ostream &out, const json &doc) { out << doc.dump(2) << '\n'; }

// Writes to `path` when given, else to out.
void deliver(std::ostream &out, const std::string &path, const std::string &text) {
  if (path.empty())
    out << text;
  else
    write_text_file(path, text);
}

json path_names(const MixedGraph &g, const std::vector<std::vector<Vertex>> &paths) {
  json out = json::array();
  for (const auto &p : paths) {
    json names = json::array();
    for (Vertex u : p)
      names.push_back(g.name(u));
    out.push_back(std::move(names));
  }
  return out;
}

// ---------------------------------------------------------------- check

struct CheckArgs {
  std::string graph;
  std::string edge;
  std::string known;
  bool cyclic = false;
  std::string out_file;
};

json genericity_json(const GraphDocument &doc) {
  json out = json::array();
  const MixedGraph &g = doc.graph;
  for (const auto &e : genericity_sufficient(*doc.factors)) {
    out.push_back({{"edge", g.name(e.u) + "<->" + g.name(e.v)},
                   {"sufficient", e.sufficient},
                   {"clique", g.names_of(e.clique)}});
  }
  return out;
}

json cyclic_json(const MixedGraph &g) {
  json out;
  out["cyclic"] = !is_acyclic(g);
  const auto necessary = cyclic_necessary_condition(g);
  json nec = json::object();
  std::vector<std::string> failing;
  for (std::size_t v = 0; v < g.size(); ++v) {
    nec[g.name(static_cast<Vertex>(v))] = static_cast<bool>(necessary[v]);
    if (!necessary[v])
      failing.push_back(g.name(static_cast<Vertex>(v)));
  }
  out["necessary_condition"] = nec;
  out["necessary_satisfied"] = failing.empty();

  json decomp;
  std::string verdict;
  try {
    const auto cycles = cycle_decomposition(g);
    decomp["applicable"] = true;
    decomp["cycles"] = path_names(g, cycles);
    const auto bad = offending_two_cycle(g);
    decomp["identifiable"] = !bad.has_value();
    decomp["offending_two_cycle"] =
        bad ? json{g.name(bad->first), g.name(bad->second)} : json(nullptr);
    if (bad)
      verdict = "not identifiable (2-cycle " + g.name(bad->first) + "," + g.name(bad->second) +
                " with identical outside parents)";
    else if (failing.empty())
      verdict = "identifiable";
  } catch (const Error &e) {
    if (e.code() != ErrorCode::NotCycleDecomposable)
      throw;
    decomp["applicable"] = false;
    decomp["reason"] = e.what();
  }
  out["cycle_decomposition"] = decomp;
  if (!failing.empty()) {
    std::string names;
    for (const auto &f : failing)
      names += (names.empty() ? "" : ",") + f;
    verdict = "not identifiable (necessary condition fails at " + names + ")";
  } else if (verdict.empty()) {
    verdict = "necessary-only";
  }
  out["verdict"] = verdict;
  return out;
}

void print_report_human(std::ostream &out, const MixedGraph &g, const IdentReport &r) {
  for (const auto &c : r.columns) {
    out << g.name(c.vertex) << ": rank " << c.rank << "/" << c.parents.size()
        << (c.identifiable ? "  identifiable" : "  NOT identifiable") << '\n';
  }
  for (const auto &e : r.edges)
    out << "  " << edge_key(g, e.from, e.to) << ": "
        << (e.identifiable ? "identifiable" : "not identifiable") << '\n';
}

int cmd_check(const CheckArgs &a, bool human, std::ostream &out) {
  const GraphDocument doc = load_graph_document(a.graph);
  const MixedGraph &g = doc.graph;
  json result;

  if (!a.edge.empty()) {
    const auto ends = split(a.edge, ',');
    if (ends.size() != 2)
      throw UsageError("--edge expects u,v");
    const Vertex u = g.index(ends[0]), v = g.index(ends[1]);
    if (!g.has_directed(u, v))
      throw Error(ErrorCode::NotAParentSubset, ends[0] + "->" + ends[1] + " is not a directed edge");
    const VertexSet known = g.to_set(split(a.known, ','));
    const bool ok = is_identifiable_with_knowledge(g, v, VertexSet{u}, known);
    result = {{"edge", edge_key(g, u, v)}, {"known", g.names_of(known)}, {"identifiable", ok}};
    if (human)
      out << edge_key(g, u, v) << ": " << (ok ? "identifiable" : "not identifiable") << '\n';
  } else if (!a.known.empty()) {
    throw UsageError("--known needs --edge");
  } else if (a.cyclic || !is_acyclic(g)) {
    result = cyclic_json(g);
    if (human)
      out << result["verdict"].get<std::string>() << '\n';
  } else {
    const IdentReport report = is_matrix_identifiable(g, a.graph);
    result = report_to_json(g, report);
    if (human)
      print_report_human(out, g, report);
  }
  if (doc.factors) {
    result["genericity"] = genericity_json(doc);
    if (human)
      for (const auto &e : result["genericity"])
        out << "  " << e["edge"].get<std::string>() << ": genericity "
            << (e["sufficient"].get<bool>() ? "holds" : "not certified") << '\n';
  }

  if (!human || !a.out_file.empty())
    deliver(out, a.out_file, result.dump(2) + "\n");
  return kOk;
}

// --------------------------------------------------------------- verify

struct VerifyArgs {
  int max_vertices = 4;
  std::uint64_t seed = 1;
  int samples = 1000;
  bool inject_fault = false;
};

int cmd_verify(const VerifyArgs &a, bool human, std::ostream &out) {
  if (a.max_vertices < 1 || a.max_vertices > 6)
    throw UsageError("--max-vertices must be between 1 and 6");
  NetworkOptions opts;
  if (a.inject_fault)
    opts.node_capacity = 2;

  std::size_t graphs = 0, checks = 0;
  std::optional<std::pair<MixedGraph, RankMismatch>> bad;
  auto visit = [&](const MixedGraph &g) {
    if (bad)
      return;
    ++graphs;
    const RankCrossCheck r = cross_check_ranks(g, a.seed, opts);
    checks += r.checks;
    if (r.mismatch)
      bad.emplace(g, *r.mismatch);
  };

  for (int p = 1; p <= std::min(a.max_vertices, 4) && !bad; ++p)
    for_each_admg(p, visit);
  for (int p = 5; p <= a.max_vertices && !bad; ++p)
    for (int i = 0; i < a.samples && !bad; ++i)
      visit(sampled_admg(p, a.seed, static_cast<std::uint64_t>(i)));

  json result = {{"max_vertices", a.max_vertices},
                 {"seed", a.seed},
                 {"graphs", graphs},
                 {"checks", checks},
                 {"status", bad ? "fail" : "pass"}};
  if (bad) {
    const auto &[g, m] = *bad;
    result["counterexample"] = {{"graph", graph_to_json(g)},
                                {"vertex", g.name(m.vertex)},
                                {"set", g.names_of(m.set)},
                                {"flow", m.flow},
                                {"brute_force", m.brute_force},
                                {"numeric_rank", m.numeric},
                                {"witness", path_names(g, m.witness)}};
  }
  if (human) {
    out << (bad ? "FAIL" : "PASS") << ": " << graphs << " graphs, " << checks << " (v,Q) checks\n";
    if (bad)
      out << result["counterexample"].dump(2) << '\n';
  } else {
    emit(out, result);
  }
  return bad ? kVerifyMismatch : kOk;
}

// --------------------------------------------------------------- survey

struct SurveyArgs {
  int p = 25;
  std::string densities = "0.1:0.9:0.1";
  int reps = 500;
  std::uint64_t seed = 1;
  std::string out_file;
};

std::vector<double> parse_densities(const std::string &spec) {
  const auto parts = split(spec, ':');
  auto num = [&](const std::string &s) {
    try {
      std::size_t used = 0;
      const double x = std::stod(s, &used);
      if (used != s.size())
        throw UsageError("bad number in --densities: " + s);
      return x;
    } catch (const std::logic_error &) {
      throw UsageError("bad number in --densities: " + s);
    }
  };
  if (parts.size() == 1)
    return {num(parts[0])};
  if (parts.size() != 3)
    throw UsageError("--densities expects a:b:step");
  const double lo = num(parts[0]), hi = num(parts[1]), step = num(parts[2]);
  if (!(step > 0) || hi < lo)
    throw UsageError("--densities needs step > 0 and a <= b");
  std::vector<double> out;
  for (int i = 0;; ++i) {
    const double d = std::round((lo + i * step) * 1e12) / 1e12;
    if (d > hi + 1e-12)
      break;
    out.push_back(d);
  }
  return out;
}

unsigned worker_count() {
  if (const char *env = std::getenv(kWorkersEnv)) {
    const int n = std::atoi(env);
    if (n > 0)
      return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

int cmd_survey(const SurveyArgs &a, std::ostream &out) {
  if (a.p < 2)
    throw UsageError("--p must be at least 2");
  if (a.reps < 0)
    throw UsageError("--reps must be >= 0");
  const auto densities = parse_densities(a.densities);
  for (double d : densities)
    if (!(d > 0.0 && d <= 1.0))
      throw Error(ErrorCode::InvalidDensity, "density " + format_double(d) + " outside (0,1]");

  const std::size_t reps = static_cast<std::size_t>(a.reps);
  const std::size_t total = densities.size() * reps;
  std::vector<char> identifiable(total, 0);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t k; (k = next.fetch_add(1)) < total;) {
      try {
        const std::size_t di = k / reps, r = k % reps;
        const MixedGraph g = random_admg(a.p, densities[di], derive_seed(a.seed, {di, r}));
        identifiable[k] = is_globally_identifiable(g);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure)
          failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  const unsigned n_workers = std::min<std::size_t>(worker_count(), std::max<std::size_t>(total, 1));
  for (unsigned i = 1; i < n_workers; ++i)
    pool.emplace_back(worker);
  worker();
  for (auto &t : pool)
    t.join();
  if (failure)
    std::rethrow_exception(failure);

  std::string csv = "p,density,graphs_sampled,proportion_identifiable,seed\n";
  for (std::size_t di = 0; di < densities.size() && reps > 0; ++di) {
    std::size_t count = 0;
    for (std::size_t r = 0; r < reps; ++r)
      count += identifiable[di * reps + r];
    csv += std::to_string(a.p) + "," + format_double(densities[di]) + "," + std::to_string(reps) +
           "," + format_double(static_cast<double>(count) / static_cast<double>(reps)) + "," +
           std::to_string(a.seed) + "\n";
  }
  deliver(out, a.out_file, csv);
  return kOk;
}

// ------------------------------------------------------------- simulate

struct SimulateArgs {
  std::string graph;
  long n = 1000;
  std::string dist = "laplace";
  std::uint64_t seed = 1;
  std::string params_out;
  std::string data_out;
  std::string errors_out;
};

int cmd_simulate(const SimulateArgs &a, std::ostream &out) {
  if (a.n < 1)
    throw UsageError("--n must be positive");
  if (a.dist != "laplace" && a.dist != "uniform")
    throw UsageError("--dist must be laplace or uniform");
  const GraphDocument doc = load_graph_document(a.graph);
  const MixedGraph &g = doc.graph;
  ErrorModel model;
  model.kind =
      a.dist == "uniform" ? ErrorKind::SharedLatentUniform : ErrorKind::SharedLatentLaplace;
  const ErrorKind kind = model.kind;

  const ParamMatrix lam = sample_parameters(g, a.seed);
  Dataset errors = doc.factors ? sample_factor_errors(*doc.factors, a.n, a.seed, kind)
                               : sample_errors(g, model, a.n, a.seed);
  const Dataset data = generate_data(g, lam, errors);

  const json params = params_to_json(lam);
  Provenance prov{a.seed, "admgid simulate",
                  {{"graph", graph_to_json(g)}, {"n", a.n}, {"dist", a.dist},
                   {"lambda", params["edges"]}, {"errors", errors.provenance().params}}};
  const Dataset stamped(data.columns(), data.values(), prov);

  json summary = {{"n", a.n}, {"p", g.size()}, {"seed", a.seed}};
  if (!a.params_out.empty()) {
    write_text_file(a.params_out, params.dump(2) + "\n");
    summary["params_out"] = a.params_out;
  }
  if (!a.data_out.empty()) {
    write_dataset(a.data_out, stamped);
    summary["data_out"] = a.data_out;
  }
  if (!a.errors_out.empty()) {
    Provenance eprov = prov;
    eprov.generator = "admgid simulate (errors)";
    write_dataset(a.errors_out, Dataset(errors.columns(), errors.values(), eprov));
    summary["errors_out"] = a.errors_out;
  }
  if (a.params_out.empty() && a.data_out.empty())
    summary["lambda"] = params["edges"];
  emit(out, summary);
  return kOk;
}

// ------------------------------------------------------------- estimate

struct EstimateArgs {
  std::string graph;
  std::string data;
  std::string kernel = "poly2";
  std::string init = "reg";
  std::string true_params;
  std::uint64_t seed = 1;
  int max_iterations = 500;
  std::string out_file;
};

int cmd_estimate(const EstimateArgs &a, std::ostream &out) {
  KernelSpec kernel;
  if (a.kernel == "poly2")
    kernel = KernelSpec::polynomial(2, 1.0);
  else if (a.kernel == "rbf")
    kernel = KernelSpec::rbf();
  else
    throw UsageError("--kernel must be poly2 or rbf");
  if (a.init != "reg" && a.init != "tv" && a.init != "random")
    throw UsageError("--init must be reg, tv or random");
  if (a.init == "tv" && a.true_params.empty())
    throw UsageError("--init tv needs --true-params");

  const MixedGraph g = load_graph_document(a.graph).graph;
  const Dataset ds = read_dataset(a.data);
  if (ds.columns() != g.vertices())
    throw Error(ErrorCode::BindingMismatch, "data columns do not match the graph's vertices");
  std::optional<ParamMatrix> truth;
  if (!a.true_params.empty())
    truth = params_from_json(g, read_json_file(a.true_params));

  ParamMatrix init(g);
  InitKind kind = InitKind::Regression;
  if (a.init == "reg") {
    init = regression_init(g, ds);
  } else if (a.init == "tv") {
    init = *truth;
    kind = InitKind::TrueValue;
  } else {
    init = random_init(g, a.seed);
    kind = InitKind::Random;
  }

  FitOptions opts;
  opts.max_iterations = a.max_iterations;
  json result;
  int code = kOk;
  try {
    const EstimateResult r = fit(g, ds, kernel, init, opts, kind);
    result = estimate_to_json(g, r, truth ? &*truth : nullptr);
  } catch (const DivergenceError &e) {
    result = estimate_to_json(g, e.last(), nullptr);
    result["error"] = e.what();
    code = kDiverged;
  }
  if (truth && code == kOk) {
    try {
      result["init_loss"] = normalized_frobenius_loss(init, *truth);
    } catch (const Error &) {
      // zero true matrix: no normalized loss
    }
  }
  deliver(out, a.out_file, result.dump(2) + "\n");
  return code;
}

// ----------------------------------------------------------------- flow

struct FlowArgs {
  std::string graph;
  std::string node;
  std::string set;
};

int cmd_flow(const FlowArgs &a, bool human, std::ostream &out) {
  const MixedGraph g = load_graph_document(a.graph).graph;
  const Vertex v = g.index(a.node);
  const VertexSet q = g.to_set(split(a.set, ','));
  const auto net = build_flow_network(g, v, q);
  const auto flow = max_flow(net.network);
  const auto witness = flow_witness(net, flow);

  json nodes = json::array();
  for (int i = 0; i < net.network.node_count(); ++i)
    nodes.push_back(net.network.label(i));
  json arcs = json::array();
  const auto &list = net.network.arcs();
  for (std::size_t k = 0; k < list.size(); ++k)
    arcs.push_back({{"from", net.network.label(list[k].from)},
                    {"to", net.network.label(list[k].to)},
                    {"capacity", list[k].capacity},
                    {"flow", flow.arc_flow[k]}});
  const json result = {{"vertex", g.name(v)},
                       {"set", g.names_of(q)},
                       {"removable", g.names_of(removable_ancestors(g, v))},
                       {"value", flow.value},
                       {"nodes", nodes},
                       {"arcs", arcs},
                       {"witness", path_names(g, witness)}};
  if (human) {
    out << "flow into " << g.name(v) << " from R onto {" << a.set << "}: " << flow.value << '\n';
    for (const auto &arc : result["arcs"])
      out << "  " << arc["from"].get<std::string>() << " -> " << arc["to"].get<std::string>()
          << "  " << arc["flow"] << "/" << arc["capacity"] << '\n';
    for (const auto &p : result["witness"])
      out << "  path " << p.dump() << '\n';
  } else {
    emit(out, result);
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  CLI::App app{"Identifiability, simulation and estimation for linear non-Gaussian mixed-graph models",
               "admgid"};
  app.require_subcommand(1);
  bool human = false;
  app.add_flag("--human", human, "Plain-text output instead of JSON");

  CheckArgs check;
  auto *c = app.add_subcommand("check", "Identifiability report for a graph");
  c->add_option("graph", check.graph, "Graph JSON")->required();
  c->add_option("--edge", check.edge, "Single edge verdict, as u,v");
  c->add_option("--known", check.known, "Parents of v whose coefficients are known (a,b,...)");
  c->add_flag("--cyclic", check.cyclic, "Run the cyclic-graph checks");
  c->add_option("--out", check.out_file, "Write the report here");

  VerifyArgs verify;
  auto *vf = app.add_subcommand("verify", "Cross-check flow, path search and numeric ranks");
  vf->add_option("--max-vertices", verify.max_vertices, "Largest graph size (<= 6)");
  vf->add_option("--seed", verify.seed, "Seed for parameter draws and sampled graphs");
  vf->add_option("--samples", verify.samples, "Random graphs per size above 4");
  vf->add_flag("--inject-fault", verify.inject_fault, "Use node capacity 2 (tests the tester)");

  SurveyArgs survey;
  auto *sv = app.add_subcommand("survey", "Share of identifiable random ADMGs per density");
  sv->add_option("--p", survey.p, "Vertices per graph");
  sv->add_option("--densities", survey.densities, "a:b:step or a single value");
  sv->add_option("--reps", survey.reps, "Graphs per density");
  sv->add_option("--seed", survey.seed, "Seed");
  sv->add_option("--out", survey.out_file, "CSV output file");

  SimulateArgs sim;
  auto *sm = app.add_subcommand("simulate", "Sample parameters, errors and data for a graph");
  sm->add_option("graph", sim.graph, "Graph JSON")->required();
  sm->add_option("--n", sim.n, "Sample size");
  sm->add_option("--dist", sim.dist, "laplace or uniform");
  sm->add_option("--seed", sim.seed, "Seed");
  sm->add_option("--params-out", sim.params_out, "Parameter JSON output");
  sm->add_option("--data-out", sim.data_out, "Data CSV output");
  sm->add_option("--errors-out", sim.errors_out, "Error CSV output");

  EstimateArgs est;
  auto *es = app.add_subcommand("estimate", "Fit coefficients by HSIC minimization");
  es->add_option("graph", est.graph, "Graph JSON")->required();
  es->add_option("data", est.data, "Data CSV")->required();
  es->add_option("--kernel", est.kernel, "poly2 or rbf");
  es->add_option("--init", est.init, "reg, tv or random");
  es->add_option("--true-params", est.true_params, "Parameter JSON with the true values");
  es->add_option("--seed", est.seed, "Seed for --init random");
  es->add_option("--max-iter", est.max_iterations, "Iteration cap");
  es->add_option("--out", est.out_file, "Result JSON output");

  FlowArgs fl;
  auto *fw = app.add_subcommand("flow", "Dump the flow network for one vertex");
  fw->add_option("graph", fl.graph, "Graph JSON")->required();
  fw->add_option("--node", fl.node, "Target vertex")->required();
  fw->add_option("--set", fl.set, "Sink set Q (comma separated parents)");

  std::vector<const char *> argv;
  for (const auto &s : args)
    argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kParseError;
  }

  try {
    if (c->parsed())
      return cmd_check(check, human, out);
    if (vf->parsed())
      return cmd_verify(verify, human, out);
    if (sv->parsed())
      return cmd_survey(survey, out);
    if (sm->parsed())
      return cmd_simulate(sim, out);
    if (es->parsed())
      return cmd_estimate(est, out);
    if (fw->parsed())
      return cmd_flow(fl, human, out);
  } catch (const UsageError &e) {
    err << "usage error: " << e.what() << '\n';
    return kParseError;
  } catch (const Error &e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception &e) {
    err << "error: " << e.what() << '\n';
    return kInvalidInput;
  }
  return kParseError;
}

}  // namespace admgid::cli
