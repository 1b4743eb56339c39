// steklov: command-line front end for the graph, surface, solver and experiment modules.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "steklov/error.hpp"
#include "steklov/experiments.hpp"
#include "steklov/fem.hpp"
#include "steklov/graph.hpp"
#include "steklov/io.hpp"
#include "steklov/mesh.hpp"
#include "steklov/report.hpp"
#include "steklov/surface.hpp"
#include "steklov/version.hpp"

namespace fs = std::filesystem;
using namespace steklov;
using nlohmann::json;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

constexpr int kExitUsage = 2;
constexpr int kExitValidation = 3;
constexpr int kExitSolver = 4;
constexpr int kExitIO = 5;

int exit_code(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::Usage: return kExitUsage;
    case ErrorCategory::Validation: return kExitValidation;
    case ErrorCategory::Solver: return kExitSolver;
    case ErrorCategory::IO: return kExitIO;
  }
  return kExitValidation;
}

const char* category_name(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::Usage: return "UsageError";
    case ErrorCategory::Validation: return "ValidationError";
    case ErrorCategory::Solver: return "SolverError";
    case ErrorCategory::IO: return "IOError";
  }
  return "ValidationError";
}

std::string one_line(std::string s) {
  for (char& c : s)
    if (c == '\n' || c == '\r') c = ' ';
  return s;
}

void print_line(const std::string& label, double value) {
  std::cout << label << ' ' << format_double(value) << '\n';
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    int value = 0;
    try {
      value = std::stoi(item, &used);
    } catch (const std::exception&) {
      throw UsageError("not an integer list: '" + text + "'");
    }
    if (used != item.size()) throw UsageError("not an integer list: '" + text + "'");
    out.push_back(value);
  }
  if (out.empty()) throw UsageError("empty integer list");
  return out;
}

// key = value lines; '#' starts a comment.
std::map<std::string, std::string> read_config_file(const fs::path& path) {
  std::map<std::string, std::string> out;
  std::istringstream in(read_text_file(path));
  std::string line;
  int lineno = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return std::string{};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw UsageError(path.string() + ":" + std::to_string(lineno) + ": expected key = value");
    out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return out;
}

// Growth parameters shared by the growth and verify subcommands. Flags given on
// the command line override values read from --config.
struct GrowthFlags {
  std::string config_path;
  int k = 4;
  std::string sizes = "8,12,16,24,32";
  std::uint64_t seed = 7;
  double gap = 0.2;
  int n_b = 16;
  int resolution = 4;
  int jobs = 1;
  int max_attempts = 1000;
  int n_eigs = 8;
  double tol = 1e-8;
  int max_iterations = 1000;
  int dense_threshold = 2000;
  double shift = 0.1;
  std::map<std::string, CLI::Option*> options;

  void add_to(CLI::App* app, bool with_sizes) {
    app->add_option("--config", config_path, "key = value file; flags override it");
    options["k"] = app->add_option("--k", k, "graph degree")->capture_default_str();
    if (with_sizes)
      options["sizes"] = app->add_option("--sizes", sizes, "comma-separated N values")->capture_default_str();
    options["seed"] = app->add_option("--seed", seed, "master seed")->capture_default_str();
    options["gap"] = app->add_option("--gap", gap, "required lambda1 of each graph")->capture_default_str();
    options["nb"] = app->add_option("--nb", n_b, "vertices per boundary loop")->capture_default_str();
    options["resolution"] =
        app->add_option("--resolution", resolution, "layers per collar")->capture_default_str();
    options["jobs"] = app->add_option("--jobs", jobs, "parallel workers over N")->capture_default_str();
    options["max-attempts"] =
        app->add_option("--max-attempts", max_attempts, "graph sampling attempts")->capture_default_str();
    options["n-eigs"] = app->add_option("--n-eigs", n_eigs, "eigenpairs per solve")->capture_default_str();
    options["tol"] = app->add_option("--tol", tol, "eigen residual tolerance")->capture_default_str();
    options["max-iterations"] =
        app->add_option("--max-iterations", max_iterations, "iterative solver cap")->capture_default_str();
    options["dense-threshold"] = app->add_option("--dense-threshold", dense_threshold,
                                                 "largest problem solved densely")
                                     ->capture_default_str();
    options["shift"] = app->add_option("--shift", shift, "shift-invert shift")->capture_default_str();
  }

  GrowthRunConfig resolve() const {
    std::map<std::string, std::string> file;
    if (!config_path.empty()) file = read_config_file(config_path);
    for (const auto& [key, value] : file)
      if (!options.count(key)) throw UsageError("unknown config key '" + key + "'");

    GrowthRunConfig c;
    auto pick = [&](const std::string& key, auto flag_value, auto parse) {
      if (options.at(key)->count() == 0) {
        if (auto it = file.find(key); it != file.end()) {
          try {
            return parse(it->second);
          } catch (const UsageError&) {
            throw;
          } catch (const std::exception&) {
            throw UsageError("bad value for config key '" + key + "': " + it->second);
          }
        }
      }
      return flag_value;
    };
    auto as_int = [](const std::string& s) {
      std::size_t used = 0;
      const int v = std::stoi(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return v;
    };
    auto as_double = [](const std::string& s) {
      std::size_t used = 0;
      const double v = std::stod(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return v;
    };
    auto as_u64 = [](const std::string& s) {
      std::size_t used = 0;
      const auto v = std::stoull(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return static_cast<std::uint64_t>(v);
    };
    c.k = pick("k", k, as_int);
    if (options.count("sizes")) c.sizes = parse_int_list(pick("sizes", sizes, [](const std::string& s) { return s; }));
    c.seed = pick("seed", seed, as_u64);
    c.gap = pick("gap", gap, as_double);
    c.n_b = pick("nb", n_b, as_int);
    c.resolution = pick("resolution", resolution, as_int);
    c.jobs = pick("jobs", jobs, as_int);
    c.max_attempts = pick("max-attempts", max_attempts, as_int);
    c.eigen.n_eigs = pick("n-eigs", n_eigs, as_int);
    c.eigen.tol_res = pick("tol", tol, as_double);
    c.eigen.max_iterations = pick("max-iterations", max_iterations, as_int);
    c.eigen.dense_fallback_threshold = pick("dense-threshold", dense_threshold, as_int);
    c.eigen.shift = pick("shift", shift, as_double);
    return c;
  }
};

int cmd_graph_gen(int n, int k, double gap, std::uint64_t seed, const std::string& out, int max_attempts) {
  const std::vector<int> sizes{n};
  const auto graphs = generate_expander_family(sizes, k, gap, seed, ExpanderOptions{max_attempts});
  const std::string text = to_text(graphs.front());
  if (out.empty())
    std::cout << text;
  else
    write_text_file_atomic(out, text);
  return 0;
}

int cmd_graph_spectrum(const std::string& path) {
  const RegularGraph g = read_graph(path);
  const GraphSpectrum spec = laplacian_spectrum(g);
  print_line("lambda1", spec.lambda1);
  for (Eigen::Index i = 0; i < spec.eigenvalues.size(); ++i)
    print_line("eigenvalue" + std::to_string(i), spec.eigenvalues[i]);
  return 0;
}

fs::path sidecar_path(const fs::path& mesh_path) { return fs::path(mesh_path.string() + ".json"); }

int cmd_piece_build(int k, int n_b, int resolution, const std::string& out) {
  const FundamentalPiece piece = build_fundamental_piece(k, n_b, resolution);
  const Topology topo = euler_genus(piece.mesh);
  write_text_file_atomic(out, to_imesh_text(piece.mesh));
  const json meta{{"tool", {{"name", kToolName}, {"version", kToolVersion}}},
                  {"k", k},
                  {"n_b", n_b},
                  {"resolution", resolution},
                  {"genus0", piece.genus0},
                  {"mesh_id", mesh_fingerprint(piece.mesh)}};
  write_text_file_atomic(sidecar_path(out), meta.dump(2) + "\n");
  std::cout << "vertices " << piece.mesh.n_vertices << "\ntriangles " << piece.mesh.triangles.size()
            << "\nboundary_loops " << topo.boundary_components << "\ngenus " << topo.genus << '\n';
  return 0;
}

int cmd_glue(const std::string& piece_path, const std::string& graph_path, const std::string& out, int offset,
             int layers_flag) {
  int layers = layers_flag;
  if (layers <= 0) {
    const fs::path side = sidecar_path(piece_path);
    if (!fs::exists(side))
      throw UsageError("no sidecar " + side.string() + "; pass --layers");
    try {
      layers = json::parse(read_text_file(side)).at("resolution").get<int>();
    } catch (const json::exception& e) {
      throw Error(ErrorKind::ParseError, side.string() + ": " + e.what());
    }
  }
  const FundamentalPiece piece = piece_from_mesh(read_imesh(piece_path), layers);
  const RegularGraph g = read_graph(graph_path);
  const GluedSurface s = glue_surface(piece, g, offset);
  const Topology topo = euler_genus(s.mesh);
  write_text_file_atomic(out, to_imesh_text(s.mesh));
  std::cout << "vertices " << s.mesh.n_vertices << "\ntriangles " << s.mesh.triangles.size()
            << "\nboundary_loops " << topo.boundary_components << "\ngenus " << topo.genus << '\n';
  return 0;
}

int cmd_solve(const std::string& mesh_path, const EigenOptions& opts, const std::string& json_out) {
  const IntrinsicMesh m = read_imesh(mesh_path);
  const SteklovSpectrum spec = steklov_spectrum(m, opts);
  for (std::size_t i = 0; i < spec.sigmas.size(); ++i)
    print_line("sigma" + std::to_string(i), spec.sigmas[i]);
  if (!json_out.empty()) write_text_file_atomic(json_out, spectrum_json(spec).dump(2) + "\n");
  return 0;
}

int cmd_sloshing(int n_b, int layers, double circumference, double length, const EigenOptions& opts) {
  const IntrinsicMesh cyl = build_flat_cylinder(n_b, layers, circumference, length);
  const double mu = sloshing_mu1(cyl, BoundaryCondition::sloshing(cyl, "bottom"), opts);
  const double w = 2.0 * std::numbers::pi / circumference;
  print_line("mu1", mu);
  print_line("oracle", w * std::tanh(w * length));
  return 0;
}

int cmd_growth(const GrowthRunConfig& config, const std::string& out, ExportFormats formats) {
  const fs::path dir(out);
  const fs::path marker = dir / "PARTIAL";
  try {
    const GrowthRun run = run_growth(config);
    export_report(run, dir, formats);
    if (fs::exists(marker)) fs::remove(marker);
    for (const auto& r : run.records)
      std::cout << "N " << r.n << " sigma1 " << format_double(r.sigma1) << " sigma1_times_L "
                << format_double(r.sigma1_times_length) << '\n';
    return 0;
  } catch (const GrowthAborted& e) {
    if (!e.partial().records.empty()) export_report(e.partial(), dir, formats);
    write_text_file_atomic(marker, std::string(e.what()) + "\n");
    throw;
  }
}

int cmd_verify(const GrowthRunConfig& config, int n) {
  validate(config);
  const FundamentalPiece piece = build_fundamental_piece(config.k, config.n_b, config.resolution);
  const double mu = collar_mu(piece, config.eigen);
  const GrowthRecord r = run_single(config, piece, mu, n);
  const std::string violation = record_violation(r, config.k);
  auto check = [](const char* name, bool ok) { std::cout << (ok ? "PASS " : "FAIL ") << name << '\n'; };
  check("boundary_length", std::abs(r.boundary_length - r.n) <= 1e-6);
  check("genus", r.genus == r.genus_formula);
  check("kokarev", check_kokarev(r));
  check("trial_upper", r.sigma1 <= r.trial_quotient + 1e-8);
  check("chain_lower", r.sigma1 >= r.chain_bound - 1e-6);
  check("local_estimate", r.local_lhs <= r.local_rhs + kEstimateSlack);
  check("split_estimate", r.split_lhs <= r.split_rhs + kEstimateSlack);
  print_line("sigma1", r.sigma1);
  print_line("lambda1_graph", r.lambda1_graph);
  print_line("mu_collar", r.mu_collar);
  print_line("c_emp", r.c_emp);
  if (!violation.empty()) throw Error(ErrorKind::InvariantViolated, violation);
  return 0;
}

int cmd_report(const std::string& in, const std::string& out, ExportFormats formats) {
  const fs::path src = fs::path(in) / "report.json";
  json j;
  try {
    j = json::parse(read_text_file(src));
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::ParseError, src.string() + ": " + e.what());
  }
  export_report(growth_run_from_json(j), out.empty() ? fs::path(in) : fs::path(out), formats);
  return 0;
}

ExportFormats parse_formats(const std::string& text) {
  ExportFormats f{false, false, false};
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == "csv")
      f.csv = true;
    else if (item == "json")
      f.json = true;
    else if (item == "svg")
      f.svg = true;
    else
      throw UsageError("unknown format '" + item + "'");
  }
  return f;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Steklov eigenvalue experiments on surfaces glued along expander graphs", kToolName};
  app.set_version_flag("--version", std::string(kToolName) + " " + kToolVersion);
  app.require_subcommand(1);

  std::function<int()> action;

  // graph-gen
  int gg_n = 8, gg_k = 4, gg_attempts = 1000;
  double gg_gap = 0.2;
  std::uint64_t gg_seed = 7;
  std::string gg_out;
  auto* gg = app.add_subcommand("graph-gen", "sample a connected k-regular graph with lambda1 >= gap");
  gg->add_option("--n", gg_n, "vertices")->capture_default_str();
  gg->add_option("--k", gg_k, "degree")->capture_default_str();
  gg->add_option("--gap", gg_gap, "required lambda1")->capture_default_str();
  gg->add_option("--seed", gg_seed, "master seed")->capture_default_str();
  gg->add_option("--max-attempts", gg_attempts, "sampling attempts")->capture_default_str();
  gg->add_option("--out", gg_out, "output graph file (stdout if omitted)");
  gg->callback([&] { action = [&] { return cmd_graph_gen(gg_n, gg_k, gg_gap, gg_seed, gg_out, gg_attempts); }; });

  // graph-spectrum
  std::string gs_path;
  auto* gs = app.add_subcommand("graph-spectrum", "Laplacian spectrum of a graph file");
  gs->add_option("--graph", gs_path, "graph file")->required();
  gs->callback([&] { action = [&] { return cmd_graph_spectrum(gs_path); }; });

  // piece-build
  int pb_k = 4, pb_nb = 16, pb_res = 4;
  std::string pb_out;
  auto* pb = app.add_subcommand("piece-build", "build the fundamental piece");
  pb->add_option("--k", pb_k, "number of attaching loops")->capture_default_str();
  pb->add_option("--nb", pb_nb, "vertices per boundary loop")->capture_default_str();
  pb->add_option("--resolution", pb_res, "layers per collar")->capture_default_str();
  pb->add_option("--out", pb_out, "output IMESH file")->required();
  pb->callback([&] { action = [&] { return cmd_piece_build(pb_k, pb_nb, pb_res, pb_out); }; });

  // glue
  std::string gl_piece, gl_graph, gl_out;
  int gl_offset = 0, gl_layers = 0;
  auto* gl = app.add_subcommand("glue", "glue copies of a piece along a graph");
  gl->add_option("--piece", gl_piece, "piece IMESH file")->required();
  gl->add_option("--graph", gl_graph, "graph file")->required();
  gl->add_option("--out", gl_out, "output IMESH file")->required();
  gl->add_option("--offset", gl_offset, "rotational offset of each seam")->capture_default_str();
  gl->add_option("--layers", gl_layers, "collar layers (read from the piece sidecar if omitted)");
  gl->callback([&] { action = [&] { return cmd_glue(gl_piece, gl_graph, gl_out, gl_offset, gl_layers); }; });

  // solve
  std::string sv_mesh, sv_json;
  EigenOptions sv_opts;
  auto* sv = app.add_subcommand("solve", "Steklov eigenvalues of a mesh");
  sv->add_option("--mesh", sv_mesh, "IMESH file")->required();
  sv->add_option("--n-eigs", sv_opts.n_eigs, "eigenvalues to report")->capture_default_str();
  sv->add_option("--tol", sv_opts.tol_res, "residual tolerance")->capture_default_str();
  sv->add_option("--dense-threshold", sv_opts.dense_fallback_threshold, "largest problem solved densely")
      ->capture_default_str();
  sv->add_option("--json", sv_json, "also write the spectrum as JSON");
  sv->callback([&] { action = [&] { return cmd_solve(sv_mesh, sv_opts, sv_json); }; });

  // sloshing
  int sl_nb = 32, sl_layers = 16;
  double sl_circ = 1.0, sl_len = 1.0;
  EigenOptions sl_opts;
  auto* sl = app.add_subcommand("sloshing", "first sloshing eigenvalue of a flat cylinder");
  sl->add_option("--nb", sl_nb, "vertices around")->capture_default_str();
  sl->add_option("--layers", sl_layers, "layers along")->capture_default_str();
  sl->add_option("--circumference", sl_circ, "circumference")->capture_default_str();
  sl->add_option("--length", sl_len, "length")->capture_default_str();
  sl->callback([&] { action = [&] { return cmd_sloshing(sl_nb, sl_layers, sl_circ, sl_len, sl_opts); }; });

  // growth
  GrowthFlags gr_flags;
  std::string gr_out, gr_formats = "csv,json,svg";
  auto* gr = app.add_subcommand("growth", "run the growth experiment and write its report");
  gr_flags.add_to(gr, true);
  gr->add_option("--out", gr_out, "output directory")->required();
  gr->add_option("--formats", gr_formats, "subset of csv,json,svg")->capture_default_str();
  gr->callback([&] {
    action = [&] { return cmd_growth(gr_flags.resolve(), gr_out, parse_formats(gr_formats)); };
  });

  // verify
  GrowthFlags vf_flags;
  int vf_n = 8;
  auto* vf = app.add_subcommand("verify", "check every record invariant for one N");
  vf_flags.add_to(vf, false);
  vf->add_option("--n", vf_n, "graph size")->capture_default_str();
  vf->callback([&] { action = [&] { return cmd_verify(vf_flags.resolve(), vf_n); }; });

  // report
  std::string rp_in, rp_out, rp_formats = "csv,json,svg";
  auto* rp = app.add_subcommand("report", "re-export a run from its report.json");
  rp->add_option("--in", rp_in, "run directory")->required();
  rp->add_option("--out", rp_out, "output directory (defaults to --in)");
  rp->add_option("--formats", rp_formats, "subset of csv,json,svg")->capture_default_str();
  rp->callback([&] { action = [&] { return cmd_report(rp_in, rp_out, parse_formats(rp_formats)); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: UsageError: " << one_line(e.what()) << '\n';
    return kExitUsage;
  }

  try {
    return action();
  } catch (const UsageError& e) {
    std::cerr << "error: UsageError: " << one_line(e.what()) << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << category_name(e.category()) << ": " << one_line(e.what()) << '\n';
    return exit_code(e.category());
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: IOError: " << one_line(e.what()) << '\n';
    return kExitIO;
  } catch (const std::exception& e) {
    std::cerr << "error: ValidationError: " << one_line(e.what()) << '\n';
    return kExitValidation;
  }
}
