#include "roydennet/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "roydennet/dirichlet.hpp"
#include "roydennet/error.hpp"
#include "roydennet/generate.hpp"
#include "roydennet/io.hpp"
#include "roydennet/net.hpp"
#include "roydennet/parallel.hpp"
#include "roydennet/transfer.hpp"
#include "roydennet/verify.hpp"

namespace roydennet {

namespace {

struct RunConfig {
  // shared
  std::string space_path;
  std::string net_path;
  std::string field_path;
  std::string out;
  std::optional<std::size_t> threads;
  // net
  double kappa = 0.0;
  std::string order_path;
  double adjacency_factor = 3.0;
  std::vector<double> audit_radii;
  bool qi = false;
  // energy and solver
  double p = 2.0;
  std::string mode = "natural";
  std::string boundary_path;
  double tol = 1e-8;
  std::size_t max_sweeps = 100000;
  bool jacobi = false;
  // decompose
  Label base = 0;
  bool base_given = false;
  std::vector<double> radii;
  // verify
  std::string check;
  std::uint64_t seed = 1;
  std::size_t trials = 32;
  bool timing = false;
  std::string csv_prefix;
  // generate
  std::string kind;
  std::size_t n = 64, rows = 32, cols = 32, degree = 3, depth = 8, subdivisions = 2;
  double radius = 5.0;
};

void require_positive(double value, const std::string& field) {
  if (!(value > 0.0) || !std::isfinite(value)) throw InputError(field + " must be positive");
}

EnergySpec energy_spec(const RunConfig& cfg, const ProxySpace& space) {
  EnergyMode mode;
  if (cfg.mode == "natural")
    mode = natural_mode(space);
  else if (cfg.mode == "combinatorial")
    mode = EnergyMode::combinatorial;
  else if (cfg.mode == "length-weighted")
    mode = EnergyMode::length_weighted;
  else
    throw InputError("--mode must be natural, combinatorial or length-weighted");
  return EnergySpec::make(cfg.p, mode);
}

SolveOptions solve_options(const RunConfig& cfg) {
  require_positive(cfg.tol, "--tol");
  if (cfg.max_sweeps == 0) throw InputError("--max-sweeps must be at least 1");
  SolveOptions options;
  options.tol = cfg.tol;
  options.max_sweeps = cfg.max_sweeps;
  options.mode = cfg.jacobi ? SolveMode::jacobi : SolveMode::gauss_seidel;
  return options;
}

std::vector<Vertex> read_order(const ProxySpace& space, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path + ": cannot open file");
  std::vector<Vertex> order;
  std::string token;
  while (in >> token) {
    if (token.front() == '#') {
      std::getline(in, token);
      continue;
    }
    try {
      std::size_t used = 0;
      const Label id = std::stoll(token, &used);
      if (used != token.size()) throw std::invalid_argument(token);
      order.push_back(space.vertex(id));
    } catch (const std::logic_error&) {
      throw InputError(path + ": '" + token + "' is not a vertex id");
    }
  }
  std::vector<Vertex> sorted_order = order;
  std::sort(sorted_order.begin(), sorted_order.end());
  if (sorted_order.size() != space.size() ||
      std::adjacent_find(sorted_order.begin(), sorted_order.end()) != sorted_order.end())
    throw InputError(path + ": order must list every vertex exactly once");
  return order;
}

KappaNet obtain_net(const RunConfig& cfg, const ProxySpace& space) {
  if (!cfg.net_path.empty()) return net_from_json(space, read_json_file(cfg.net_path));
  if (cfg.kappa == 0.0) throw InputError("give a net.json or --kappa");
  require_positive(cfg.kappa, "--kappa");
  return extract_net(space, cfg.kappa, {}, {cfg.adjacency_factor});
}

Json space_summary(const ProxySpace& space) {
  Json doc;
  doc["schema"] = kSchema;
  doc["vertices"] = space.size();
  doc["edges"] = space.edge_count();
  doc["kind"] = to_string(space.kind());
  doc["degree_bound"] = space.degree_bound();
  doc["max_edge_length"] = space.max_edge_length();
  doc["designated_boundary"] = space.designated_boundary().size();
  doc["diameter_estimate"] = diameter_estimate(space);
  return doc;
}

int cmd_space_validate(const RunConfig& cfg, std::ostream&) {
  const ProxySpace space = load_space_file(cfg.space_path);
  write_json_file(cfg.out, space_summary(space));
  return kExitOk;
}

int cmd_space_profile(const RunConfig& cfg, std::ostream&) {
  const ProxySpace space = load_space_file(cfg.space_path);
  if (cfg.radii.empty()) throw InputError("--radii needs at least one value");
  for (double r : cfg.radii)
    if (!(r >= 0.0)) throw InputError("--radii must be non-negative");
  std::vector<Vertex> centers(space.size());
  for (Vertex x = 0; x < space.size(); ++x) centers[x] = x;
  const auto profile = volume_profile(space, cfg.radii, centers);
  Json doc;
  doc["schema"] = kSchema;
  doc["centers"] = "all";
  doc["radii"] = profile.radii;
  doc["vmin"] = profile.vmin;
  doc["vmax"] = profile.vmax;
  write_json_file(cfg.out, doc);
  return kExitOk;
}

int cmd_space_generate(const RunConfig& cfg, std::ostream&) {
  SpaceData data;
  if (cfg.kind == "path") {
    data = generate_path(cfg.n);
  } else if (cfg.kind == "lattice2d") {
    data = generate_lattice2d(cfg.rows, cfg.cols);
  } else if (cfg.kind == "regular-tree") {
    data = generate_regular_tree(cfg.degree, cfg.depth);
  } else if (cfg.kind == "hyperbolic-disk-mesh") {
    HyperbolicMeshOptions options;
    options.radius = cfg.radius;
    options.subdivisions = cfg.subdivisions;
    data = generate_hyperbolic_disk_mesh(options);
  } else {
    throw InputError("unknown space kind '" + cfg.kind +
                     "' (path, lattice2d, regular-tree, hyperbolic-disk-mesh)");
  }
  const ProxySpace space(std::move(data));
  if (cfg.out == "-") {
    write_space(std::cout, space);
    return kExitOk;
  }
  std::ofstream out(cfg.out);
  if (!out) throw InputError(cfg.out + ": cannot write file");
  write_space(out, space);
  return kExitOk;
}

int cmd_net_extract(const RunConfig& cfg, std::ostream& err) {
  const ProxySpace space = load_space_file(cfg.space_path);
  require_positive(cfg.kappa, "--kappa");
  require_positive(cfg.adjacency_factor, "--adjacency-factor");
  std::vector<Vertex> order;
  if (!cfg.order_path.empty()) order = read_order(space, cfg.order_path);
  const KappaNet net = extract_net(space, cfg.kappa, order, {cfg.adjacency_factor});
  for (const auto& w : net.warnings) err << "warning: " << w << '\n';
  write_json_file(cfg.out, net_to_json(space, net));
  return kExitOk;
}

int cmd_net_audit(const RunConfig& cfg, std::ostream&) {
  const ProxySpace space = load_space_file(cfg.space_path);
  const KappaNet net = net_from_json(space, read_json_file(cfg.net_path));
  const NetAudit audit = audit_net(space, net);
  Json doc;
  doc["schema"] = kSchema;
  doc["kappa"] = net.kappa;
  doc["points"] = net.size();
  doc["degree_bound"] = net.degree_bound;
  doc["separated"] = audit.separated;
  doc["maximal"] = audit.maximal;
  doc["adjacency_rule"] = audit.adjacency_rule;
  doc["symmetric"] = audit.symmetric;
  doc["connected"] = audit.connected;
  doc["min_separation"] = audit.min_separation;
  doc["covering_radius"] = audit.covering_radius;
  doc["violations"] = audit.violations;
  const KappaDiagnostics diag = check_kappa(space, net.kappa);
  doc["kappa_diagnostics"] = diag.messages;
  Json overlap = Json::array();
  for (double r : cfg.audit_radii) {
    require_positive(r, "--r");
    overlap.push_back({{"r", r}, {"max_net_points", bounded_geometry(space, net, r)}});
  }
  doc["bounded_geometry"] = std::move(overlap);
  if (cfg.qi) {
    QiOptions options;
    options.seed = cfg.seed;
    const QiEstimate qi = estimate_qi(space, net, options);
    doc["qi"] = {{"a", qi.a},
                 {"b", qi.b},
                 {"c", qi.c},
                 {"full_scan", qi.full_scan},
                 {"pairs", qi.sampled_pairs},
                 {"binding", {{"g", space.label(net.points[qi.binding.g])},
                              {"h", space.label(net.points[qi.binding.h])},
                              {"ambient", qi.binding.ambient},
                              {"hops", qi.binding.hops}}}};
  }
  doc["pass"] = audit.ok();
  write_json_file(cfg.out, doc);
  return audit.ok() ? kExitOk : kExitCheckFailed;
}

int cmd_transfer(const RunConfig& cfg, bool smoothing, std::ostream&) {
  const ProxySpace space = load_space_file(cfg.space_path);
  const KappaNet net = net_from_json(space, read_json_file(cfg.net_path));
  const ScalarField in = field_from_json(space, &net, read_json_file(cfg.field_path));
  ScalarField out;
  if (smoothing) {
    if (in.domain != FieldDomain::net) throw InputError("smooth expects a field with domain 'net'");
    out = smooth(in, build_partition(space, net));
  } else {
    if (in.domain != FieldDomain::proxy) throw InputError("discretize expects a field with domain 'proxy'");
    out = discretize(in, space, net);
  }
  write_json_file(cfg.out, field_to_json(space, &net, out));
  return kExitOk;
}

int cmd_solve(const RunConfig& cfg, std::ostream&) {
  const ProxySpace space = load_space_file(cfg.space_path);
  const EnergySpec spec = energy_spec(cfg, space);
  const SolveOptions options = solve_options(cfg);
  if (cfg.boundary_path.empty()) throw InputError("--boundary is required");
  const PartialField data = partial_field_from_json(space, read_json_file(cfg.boundary_path));
  const DirichletProblem problem(space, spec, data.vertices, data.values);
  const SolveResult result = solve(problem, options);
  Json doc = field_to_json(space, nullptr, proxy_field(result.values));
  doc["p"] = spec.p;
  doc["mode"] = spec.mode == EnergyMode::combinatorial ? "combinatorial" : "length-weighted";
  doc["sweeps"] = result.sweeps;
  doc["final_residual"] = result.final_residual;
  doc["energy"] = result.energy;
  write_json_file(cfg.out, doc);
  return kExitOk;
}

int cmd_decompose(const RunConfig& cfg, std::ostream&) {
  const ProxySpace space = load_space_file(cfg.space_path);
  const EnergySpec spec = energy_spec(cfg, space);
  const SolveOptions options = solve_options(cfg);
  const ScalarField f = field_from_json(space, nullptr, read_json_file(cfg.field_path));
  if (f.domain != FieldDomain::proxy) throw InputError("decompose expects a field with domain 'proxy'");
  const Vertex base = space.vertex(cfg.base);
  const RoydenSplit split = royden_split(space, f.values, spec, base, cfg.radii, options);
  Json doc;
  doc["schema"] = kSchema;
  doc["base"] = space.label(base);
  doc["p"] = spec.p;
  Json levels = Json::array();
  for (const RoydenLevel& level : split.levels) {
    Json entry;
    entry["radius"] = level.radius;
    entry["sphere_size"] = level.sphere.size();
    entry["energy"] = level.energy;
    entry["sweeps"] = level.sweeps;
    entry["final_residual"] = level.final_residual;
    entry["stabilization"] = level.stabilization ? Json(*level.stabilization) : Json(nullptr);
    Json harmonic = Json::object();
    for (Vertex x = 0; x < space.size(); ++x) harmonic[std::to_string(space.label(x))] = level.harmonic[x];
    entry["harmonic"] = std::move(harmonic);
    levels.push_back(std::move(entry));
  }
  doc["levels"] = std::move(levels);
  write_json_file(cfg.out, doc);
  return kExitOk;
}

void write_csv(const std::string& prefix, const VerificationReport& report) {
  const std::string path = prefix + report.check + ".csv";
  std::ofstream out(path);
  if (!out) throw InputError(path + ": cannot write file");
  write_curve_csv(out, report);
}

int cmd_verify(const RunConfig& cfg, std::ostream& err) {
  const ProxySpace space = load_space_file(cfg.space_path);
  EnergySpec::make(cfg.p);
  if (cfg.trials == 0) throw InputError("--trials must be at least 1");
  if (cfg.check != "all" && std::find(check_names().begin(), check_names().end(), cfg.check) == check_names().end())
    throw InputError("unknown check '" + cfg.check + "'");
  const KappaNet net = obtain_net(cfg, space);
  for (const auto& w : net.warnings) err << "warning: " << w << '\n';
  VerifyConfig config;
  config.p = cfg.p;
  config.seed = cfg.seed;
  config.trials = cfg.trials;
  config.base = cfg.base_given ? space.vertex(cfg.base) : Vertex{0};

  std::vector<VerificationReport> reports;
  if (cfg.check == "all") {
    reports = verify_all(space, net, config);
  } else {
    reports.push_back(run_check(cfg.check, space, net, config));
    reports.back().seed = cfg.seed;
  }
  bool pass = true;
  for (const auto& r : reports) {
    pass = pass && r.pass;
    err << (r.pass ? "PASS " : "FAIL ") << r.check << " measured=" << r.measured;
    if (r.ceiling) err << " ceiling=" << *r.ceiling;
    err << '\n';
    if (!cfg.csv_prefix.empty()) write_csv(cfg.csv_prefix, r);
  }
  Json doc;
  if (reports.size() == 1) {
    doc = report_to_json(reports.front(), cfg.timing);
  } else {
    doc["schema"] = kSchema;
    doc["kappa"] = net.kappa;
    doc["p"] = cfg.p;
    doc["seed"] = cfg.seed;
    doc["pass"] = pass;
    Json list = Json::array();
    for (const auto& r : reports) list.push_back(report_to_json(r, cfg.timing));
    doc["reports"] = std::move(list);
  }
  write_json_file(cfg.out, doc);
  return pass ? kExitOk : kExitCheckFailed;
}

std::optional<std::size_t> threads_from_env() {
  const char* value = std::getenv("ROYDENNET_THREADS");
  if (!value || !*value) return std::nullopt;
  std::string s(value);
  if (!std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); }))
    throw InputError("ROYDENNET_THREADS must be a non-negative integer");
  return static_cast<std::size_t>(std::stoull(s));
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Nets, transfers and p-harmonic solvers on metric-measure graphs", "roydennet"};
  app.require_subcommand(1);
  std::size_t threads = 0;
  auto* threads_opt = app.add_option("--threads", threads, "Worker threads (0 = hardware); overrides ROYDENNET_THREADS");

  auto add_out = [&](CLI::App* sub, const std::string& fallback) {
    return sub->add_option("--out,-o", cfg.out, "Output path ('-' for stdout), default " + fallback);
  };
  auto add_energy = [&](CLI::App* sub) {
    sub->add_option("--p", cfg.p, "Exponent p > 1")->capture_default_str();
    sub->add_option("--mode", cfg.mode, "natural, combinatorial or length-weighted")->capture_default_str();
  };
  auto add_solver = [&](CLI::App* sub) {
    sub->add_option("--tol", cfg.tol, "Residual sup-norm tolerance")->capture_default_str();
    sub->add_option("--max-sweeps", cfg.max_sweeps, "Sweep cap")->capture_default_str();
    sub->add_flag("--jacobi", cfg.jacobi, "Jacobi updates instead of Gauss-Seidel");
  };

  auto* space_cmd = app.add_subcommand("space", "Space files");
  space_cmd->require_subcommand(1);
  auto* validate = space_cmd->add_subcommand("validate", "Load a space file and print a summary");
  validate->add_option("space", cfg.space_path)->required();
  add_out(validate, "-");
  auto* profile = space_cmd->add_subcommand("profile", "Min/max ball volume per radius");
  profile->add_option("space", cfg.space_path)->required();
  profile->add_option("--radii", cfg.radii)->required()->delimiter(',');
  add_out(profile, "-");
  auto* generate = space_cmd->add_subcommand("generate", "Write a generated space");
  generate->add_option("kind", cfg.kind, "path, lattice2d, regular-tree, hyperbolic-disk-mesh")->required();
  generate->add_option("--n", cfg.n, "path length")->capture_default_str();
  generate->add_option("--rows", cfg.rows)->capture_default_str();
  generate->add_option("--cols", cfg.cols)->capture_default_str();
  generate->add_option("--degree", cfg.degree)->capture_default_str();
  generate->add_option("--depth", cfg.depth)->capture_default_str();
  generate->add_option("--radius", cfg.radius, "hyperbolic patch radius")->capture_default_str();
  generate->add_option("--subdivisions", cfg.subdivisions)->capture_default_str();
  add_out(generate, "-");

  auto* net_cmd = app.add_subcommand("net", "Kappa-nets");
  net_cmd->require_subcommand(1);
  auto* extract = net_cmd->add_subcommand("extract", "Greedy maximal kappa-separated net");
  extract->add_option("space", cfg.space_path)->required();
  extract->add_option("--kappa", cfg.kappa)->required();
  extract->add_option("--order", cfg.order_path, "File listing every vertex id in admission order");
  extract->add_option("--adjacency-factor", cfg.adjacency_factor)->capture_default_str();
  add_out(extract, "-");
  auto* audit = net_cmd->add_subcommand("audit", "Exhaustive net audit");
  audit->add_option("space", cfg.space_path)->required();
  audit->add_option("net", cfg.net_path)->required();
  audit->add_option("--r", cfg.audit_radii, "Radii for the bounded-geometry count")->delimiter(',');
  audit->add_flag("--qi", cfg.qi, "Estimate quasi-isometry constants");
  audit->add_option("--seed", cfg.seed)->capture_default_str();
  add_out(audit, "-");

  auto* transfer_cmd = app.add_subcommand("transfer", "Move fields between a net and its space");
  transfer_cmd->require_subcommand(1);
  auto* smooth_cmd = transfer_cmd->add_subcommand("smooth", "net field -> proxy field");
  auto* discretize_cmd = transfer_cmd->add_subcommand("discretize", "proxy field -> net field");
  for (auto* sub : {smooth_cmd, discretize_cmd}) {
    sub->add_option("space", cfg.space_path)->required();
    sub->add_option("net", cfg.net_path)->required();
    sub->add_option("field", cfg.field_path)->required();
    add_out(sub, "-");
  }

  auto* solve_cmd = app.add_subcommand("solve", "p-harmonic Dirichlet problem");
  solve_cmd->add_option("space", cfg.space_path)->required();
  solve_cmd->add_option("--boundary", cfg.boundary_path, "JSON boundary values keyed by vertex id")->required();
  add_energy(solve_cmd);
  add_solver(solve_cmd);
  add_out(solve_cmd, "-");

  auto* decompose_cmd = app.add_subcommand("decompose", "Royden split over an exhaustion by balls");
  decompose_cmd->add_option("space", cfg.space_path)->required();
  decompose_cmd->add_option("field", cfg.field_path)->required();
  auto* base_opt = decompose_cmd->add_option("--base", cfg.base, "Base vertex id");
  decompose_cmd->add_option("--radii", cfg.radii)->required()->delimiter(',');
  add_energy(decompose_cmd);
  add_solver(decompose_cmd);
  add_out(decompose_cmd, "-");

  auto* verify_cmd = app.add_subcommand("verify", "Run verification checks");
  verify_cmd->add_option("check", cfg.check, "Check name or 'all'")->required();
  verify_cmd->add_option("space", cfg.space_path)->required();
  verify_cmd->add_option("net", cfg.net_path, "net.json (or give --kappa)");
  verify_cmd->add_option("--kappa", cfg.kappa);
  verify_cmd->add_option("--adjacency-factor", cfg.adjacency_factor)->capture_default_str();
  verify_cmd->add_option("--p", cfg.p)->capture_default_str();
  verify_cmd->add_option("--seed", cfg.seed)->capture_default_str();
  verify_cmd->add_option("--trials", cfg.trials)->capture_default_str();
  auto* verify_base = verify_cmd->add_option("--base", cfg.base, "Base vertex id for rays and boundary data");
  verify_cmd->add_flag("--timing", cfg.timing, "Include runtime_ms (reports are then not reproducible)");
  verify_cmd->add_option("--csv", cfg.csv_prefix, "Write curves to <prefix><check>.csv");
  add_out(verify_cmd, "report.json");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      err << app.help();
      return kExitOk;
    }
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }

  try {
    if (threads_opt->count() > 0)
      set_thread_count(threads);
    else if (auto env = threads_from_env())
      set_thread_count(*env);
    if (cfg.out.empty()) cfg.out = verify_cmd->parsed() ? "report.json" : "-";
    cfg.base_given = base_opt->count() > 0 || verify_base->count() > 0;

    if (validate->parsed()) return cmd_space_validate(cfg, err);
    if (profile->parsed()) return cmd_space_profile(cfg, err);
    if (generate->parsed()) return cmd_space_generate(cfg, err);
    if (extract->parsed()) return cmd_net_extract(cfg, err);
    if (audit->parsed()) return cmd_net_audit(cfg, err);
    if (smooth_cmd->parsed()) return cmd_transfer(cfg, true, err);
    if (discretize_cmd->parsed()) return cmd_transfer(cfg, false, err);
    if (solve_cmd->parsed()) return cmd_solve(cfg, err);
    if (decompose_cmd->parsed()) {
      if (!cfg.base_given) throw InputError("--base is required");
      return cmd_decompose(cfg, err);
    }
    if (verify_cmd->parsed()) return cmd_verify(cfg, err);
    err << app.help();
    return kExitInputError;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const ConvergenceError& e) {
    err << "error: " << e.what() << " (final residual " << e.final_residual() << ")\n";
    return kExitCheckFailed;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitCheckFailed;
  }
}

}  // namespace roydennet
