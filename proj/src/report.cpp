#include "steklov/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include <Eigen/Core>

#include "steklov/error.hpp"
#include "steklov/io.hpp"
#include "steklov/version.hpp"

namespace steklov {

using nlohmann::json;

namespace {

std::string fixed(double v, int digits = 3) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

json record_to_json(const GrowthRecord& r) {
  return json{{"N", r.n},
              {"lambda1_graph", r.lambda1_graph},
              {"sigma1", r.sigma1},
              {"L_boundary", r.boundary_length},
              {"sigma1_times_L", r.sigma1_times_length},
              {"genus", r.genus},
              {"genus_formula", r.genus_formula},
              {"ratio", r.ratio},
              {"kokarev_bound", r.kokarev_bound},
              {"kokarev_pass", check_kokarev(r)},
              {"trial_quotient", r.trial_quotient},
              {"mu_collar", r.mu_collar},
              {"c_emp", r.c_emp},
              {"chain_bound", r.chain_bound},
              {"local_lhs", r.local_lhs},
              {"local_rhs", r.local_rhs},
              {"split_lhs", r.split_lhs},
              {"split_rhs", r.split_rhs},
              {"sigma1_residual", r.sigma1_residual},
              {"n_vertices", r.n_vertices},
              {"n_boundary_unknowns", r.n_boundary_unknowns}};
}

GrowthRecord record_from_json(const json& j) {
  GrowthRecord r;
  r.n = j.at("N").get<int>();
  r.lambda1_graph = j.at("lambda1_graph").get<double>();
  r.sigma1 = j.at("sigma1").get<double>();
  r.boundary_length = j.at("L_boundary").get<double>();
  r.sigma1_times_length = j.at("sigma1_times_L").get<double>();
  r.genus = j.at("genus").get<int>();
  r.genus_formula = j.at("genus_formula").get<long long>();
  r.ratio = j.at("ratio").get<double>();
  r.kokarev_bound = j.at("kokarev_bound").get<double>();
  r.trial_quotient = j.at("trial_quotient").get<double>();
  r.mu_collar = j.at("mu_collar").get<double>();
  r.c_emp = j.at("c_emp").get<double>();
  r.chain_bound = j.at("chain_bound").get<double>();
  r.local_lhs = j.at("local_lhs").get<double>();
  r.local_rhs = j.at("local_rhs").get<double>();
  r.split_lhs = j.at("split_lhs").get<double>();
  r.split_rhs = j.at("split_rhs").get<double>();
  r.sigma1_residual = j.at("sigma1_residual").get<double>();
  r.n_vertices = j.at("n_vertices").get<int>();
  r.n_boundary_unknowns = j.at("n_boundary_unknowns").get<int>();
  return r;
}

bool nondecreasing_within(const std::vector<GrowthRecord>& records, double dip) {
  for (std::size_t i = 1; i < records.size(); ++i)
    if (records[i].sigma1_times_length < (1.0 - dip) * records[i - 1].sigma1_times_length) return false;
  return true;
}

}  // namespace

const std::vector<std::string>& record_csv_columns() {
  static const std::vector<std::string> columns{
      "N",          "lambda1_graph",  "sigma1",        "L_boundary",      "sigma1_times_L",
      "genus",      "genus_formula",  "ratio",         "kokarev_bound",   "kokarev_pass",
      "trial_quotient", "mu_collar",  "c_emp",         "chain_bound",     "local_lhs",
      "local_rhs",  "split_lhs",      "split_rhs",     "sigma1_residual", "n_vertices",
      "n_boundary_unknowns", "k",     "gap",           "n_b",             "resolution",
      "seed",       "tool_version"};
  return columns;
}

std::string records_csv(const GrowthRun& run) {
  std::ostringstream out;
  const auto& cols = record_csv_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
  const auto& c = run.config;
  for (const auto& r : run.records) {
    out << r.n << ',' << format_double(r.lambda1_graph) << ',' << format_double(r.sigma1) << ','
        << format_double(r.boundary_length) << ',' << format_double(r.sigma1_times_length) << ','
        << r.genus << ',' << r.genus_formula << ',' << format_double(r.ratio) << ','
        << format_double(r.kokarev_bound) << ',' << (check_kokarev(r) ? "true" : "false") << ','
        << format_double(r.trial_quotient) << ',' << format_double(r.mu_collar) << ','
        << format_double(r.c_emp) << ',' << format_double(r.chain_bound) << ','
        << format_double(r.local_lhs) << ',' << format_double(r.local_rhs) << ','
        << format_double(r.split_lhs) << ',' << format_double(r.split_rhs) << ','
        << format_double(r.sigma1_residual) << ',' << r.n_vertices << ',' << r.n_boundary_unknowns
        << ',' << c.k << ',' << format_double(c.gap) << ',' << c.n_b << ',' << c.resolution << ','
        << c.seed << ',' << kToolVersion << '\n';
  }
  return out.str();
}

// The worker count is omitted: it never changes results.
json config_to_json(const GrowthRunConfig& c) {
  return json{{"k", c.k},
              {"sizes", c.sizes},
              {"gap", c.gap},
              {"n_b", c.n_b},
              {"resolution", c.resolution},
              {"seed", c.seed},
              {"max_attempts", c.max_attempts},
              {"eigen",
               {{"n_eigs", c.eigen.n_eigs},
                {"tol_res", c.eigen.tol_res},
                {"max_iterations", c.eigen.max_iterations},
                {"dense_fallback_threshold", c.eigen.dense_fallback_threshold},
                {"shift", c.eigen.shift}}}};
}

GrowthRunConfig config_from_json(const json& j) {
  GrowthRunConfig c;
  c.k = j.at("k").get<int>();
  c.sizes = j.at("sizes").get<std::vector<int>>();
  c.gap = j.at("gap").get<double>();
  c.n_b = j.at("n_b").get<int>();
  c.resolution = j.at("resolution").get<int>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.max_attempts = j.at("max_attempts").get<int>();
  const json& e = j.at("eigen");
  c.eigen.n_eigs = e.at("n_eigs").get<int>();
  c.eigen.tol_res = e.at("tol_res").get<double>();
  c.eigen.max_iterations = e.at("max_iterations").get<int>();
  c.eigen.dense_fallback_threshold = e.at("dense_fallback_threshold").get<int>();
  c.eigen.shift = e.at("shift").get<double>();
  return c;
}

json report_json(const GrowthRun& run) {
  json j;
  j["schema_version"] = kReportSchemaVersion;
  j["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
  j["environment"] = {{"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                                    "." + std::to_string(EIGEN_MINOR_VERSION)},
                      {"cxx_standard", static_cast<long>(__cplusplus)}};
  j["config"] = config_to_json(run.config);
  j["seed"] = run.config.seed;
  j["constants"] = {{"mu_collar", run.constants.mu_collar},
                    {"neumann_lambda1_doubled_piece", run.constants.neumann_lambda1_doubled},
                    {"piece_vertices", run.constants.piece_vertices},
                    {"piece_triangles", run.constants.piece_triangles}};
  json records = json::array();
  bool kokarev = true;
  for (const auto& r : run.records) {
    records.push_back(record_to_json(r));
    kokarev = kokarev && check_kokarev(r);
  }
  j["records"] = records;
  j["kokarev_all_pass"] = kokarev;
  if (run.records.size() >= 2) {
    const RatioReport rr = comparison_ratio_report(run.records);
    j["ratio_report"] = {{"ratios", rr.ratios},
                         {"alpha_hat", rr.alpha_hat},
                         {"beta_hat", rr.beta_hat},
                         {"spread", rr.spread}};
    std::vector<double> xs, ys;
    for (const auto& r : run.records) {
      xs.push_back(r.n);
      ys.push_back(r.sigma1_times_length);
    }
    j["growth"] = {{"slope_sigma1L_vs_N", fitted_slope(xs, ys)},
                   {"nondecreasing_within_10pct", nondecreasing_within(run.records, 0.10)}};
  } else {
    j["ratio_report"] = nullptr;
    j["growth"] = nullptr;
  }
  return j;
}

std::string report_json_text(const GrowthRun& run) { return report_json(run).dump(2) + "\n"; }

GrowthRun growth_run_from_json(const json& j) {
  try {
    if (j.at("schema_version").get<int>() != kReportSchemaVersion)
      throw Error(ErrorKind::ParseError, "unsupported report schema version");
    GrowthRun run;
    run.config = config_from_json(j.at("config"));
    const json& c = j.at("constants");
    run.constants.mu_collar = c.at("mu_collar").get<double>();
    run.constants.neumann_lambda1_doubled = c.at("neumann_lambda1_doubled_piece").get<double>();
    run.constants.piece_vertices = c.at("piece_vertices").get<int>();
    run.constants.piece_triangles = c.at("piece_triangles").get<int>();
    for (const auto& r : j.at("records")) run.records.push_back(record_from_json(r));
    return run;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("malformed report: ") + e.what());
  }
}

std::string growth_svg(const GrowthRun& run) {
  if (run.records.empty()) throw Error(ErrorKind::InvalidParams, "no records to plot");
  constexpr double W = 640, H = 420, left = 70, right = 20, top = 30, bottom = 50;
  const int k = run.config.k;
  auto kokarev = [&](double n) { return 8.0 * std::numbers::pi * (2.0 + (k / 2.0 - 1.0) * n); };

  double n_min = run.records.front().n, n_max = run.records.back().n;
  double y_min = run.records.front().sigma1_times_length, y_max = kokarev(n_max);
  for (const auto& r : run.records) {
    y_min = std::min(y_min, r.sigma1_times_length);
    y_max = std::max(y_max, std::max(r.sigma1_times_length, r.kokarev_bound));
  }
  const double x_lo = 0.0, x_hi = n_max * 1.05;
  const double ly_lo = std::floor(std::log10(y_min * 0.5)), ly_hi = std::ceil(std::log10(y_max * 1.2));
  auto px = [&](double n) { return left + (n - x_lo) / (x_hi - x_lo) * (W - left - right); };
  auto py = [&](double y) {
    return top + (ly_hi - std::log10(y)) / (ly_hi - ly_lo) * (H - top - bottom);
  };

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
    << "\" viewBox=\"0 0 " << W << ' ' << H << "\">\n";
  s << "<title>sigma1*L vs N (k=" << k << ", seed=" << run.config.seed << ", " << kToolName << ' '
    << kToolVersion << ")</title>\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<line x1=\"" << left << "\" y1=\"" << H - bottom << "\" x2=\"" << W - right << "\" y2=\"" << H - bottom
    << "\" stroke=\"black\"/>\n";
  s << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << H - bottom
    << "\" stroke=\"black\"/>\n";
  for (double e = ly_lo; e <= ly_hi; e += 1.0) {
    const double y = py(std::pow(10.0, e));
    s << "<line x1=\"" << left - 4 << "\" y1=\"" << fixed(y) << "\" x2=\"" << left << "\" y2=\"" << fixed(y)
      << "\" stroke=\"black\"/>\n";
    s << "<text x=\"" << left - 8 << "\" y=\"" << fixed(y + 4) << "\" font-size=\"11\" text-anchor=\"end\">1e"
      << static_cast<int>(e) << "</text>\n";
  }
  for (const auto& r : run.records) {
    s << "<text x=\"" << fixed(px(r.n)) << "\" y=\"" << H - bottom + 16
      << "\" font-size=\"11\" text-anchor=\"middle\">" << r.n << "</text>\n";
  }
  s << "<text x=\"" << (left + W - right) / 2 << "\" y=\"" << H - 10
    << "\" font-size=\"13\" text-anchor=\"middle\">N (graph vertices)</text>\n";
  s << "<text x=\"16\" y=\"" << (top + H - bottom) / 2 << "\" font-size=\"13\" text-anchor=\"middle\" "
    << "transform=\"rotate(-90 16 " << (top + H - bottom) / 2 << ")\">sigma1 * L (log scale)</text>\n";

  constexpr int kSamples = 64;
  auto polyline = [&](auto fn, const char* colour, const char* dash) {
    s << "<polyline fill=\"none\" stroke=\"" << colour << "\"" << dash << " points=\"";
    for (int i = 0; i <= kSamples; ++i) {
      const double n = n_min + (n_max - n_min) * i / kSamples;
      const double y = fn(n);
      if (y > 0) s << fixed(px(n)) << ',' << fixed(py(y)) << ' ';
    }
    s << "\"/>\n";
  };
  polyline(kokarev, "firebrick", " stroke-dasharray=\"6 3\"");
  if (run.records.size() >= 2) {
    std::vector<double> xs, ys;
    for (const auto& r : run.records) {
      xs.push_back(r.n);
      ys.push_back(r.sigma1_times_length);
    }
    const double slope = fitted_slope(xs, ys);
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      mx += xs[i] / xs.size();
      my += ys[i] / ys.size();
    }
    polyline([&](double n) { return my + slope * (n - mx); }, "steelblue", "");
  }
  for (const auto& r : run.records)
    s << "<circle cx=\"" << fixed(px(r.n)) << "\" cy=\"" << fixed(py(r.sigma1_times_length))
      << "\" r=\"4\" fill=\"black\"/>\n";
  s << "<text x=\"" << W - right - 4 << "\" y=\"" << top + 12
    << "\" font-size=\"11\" text-anchor=\"end\" fill=\"firebrick\">8 pi (genus + 1)</text>\n";
  s << "<text x=\"" << W - right - 4 << "\" y=\"" << top + 26
    << "\" font-size=\"11\" text-anchor=\"end\" fill=\"steelblue\">least-squares fit</text>\n";
  s << "</svg>\n";
  return s.str();
}

void export_report(const GrowthRun& run, const std::filesystem::path& dir, ExportFormats formats) {
  if (run.records.empty()) throw Error(ErrorKind::InvalidParams, "no records to export");
  if (formats.csv) write_text_file_atomic(dir / "records.csv", records_csv(run));
  if (formats.json) write_text_file_atomic(dir / "report.json", report_json_text(run));
  if (formats.svg) write_text_file_atomic(dir / "growth.svg", growth_svg(run));
}

nlohmann::json spectrum_json(const SteklovSpectrum& spec) {
  return json{{"mesh_id", spec.mesh_id},
              {"problem", spec.problem},
              {"eigenvalues", spec.sigmas},
              {"residuals", spec.residuals},
              {"n_boundary_unknowns", spec.n_boundary_unknowns},
              {"solver", spec.solver}};
}

}  // namespace steklov
