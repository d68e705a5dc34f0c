// specflow: command-line front end for the metric, lifting, μ and scattering code.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "paths.hpp"
#include "specflow/error.hpp"
#include "specflow/io.hpp"
#include "specflow/lift.hpp"
#include "specflow/matching.hpp"
#include "specflow/mu.hpp"
#include "specflow/scatter.hpp"
#include "suite.hpp"

namespace fs = std::filesystem;
using specflow::Error;
using specflow::ErrorKind;
using json = nlohmann::json;

namespace {

enum Exit : int { kOk = 0, kPropertyFailure = 1, kInputError = 2, kTrackingFailure = 3, kScatteringFailure = 4 };

// Raised for malformed input; always maps to exit code 2.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

bool is_input_kind(ErrorKind k) {
  switch (k) {
    case ErrorKind::InvalidArgument:
    case ErrorKind::SpaceMismatch:
    case ErrorKind::DimensionMismatch:
    case ErrorKind::DominanceViolation:
    case ErrorKind::SizeLimit:
      return true;
    default:
      return false;
  }
}

struct Globals {
  std::string out_dir = ".";
  std::uint64_t seed = 1;
  std::vector<std::string> tol_args;
  bool svg = false;
  std::map<std::string, double> tol;
};

const std::map<std::string, double> kDefaultTol{
    {"step_tol", 0.1}, {"node_tol", 1e-8}, {"max_depth", 40}, {"cluster_tol", specflow::kDefaultClusterTol},
    {"xi_s", 1e-6},    {"bk", 1e-6},       {"unitarity", 1e-8}, {"spectra", 1e-8},
};

void set_tol(std::map<std::string, double>& tol, const std::string& name, double value, const std::string& where) {
  if (!kDefaultTol.contains(name)) throw InputError(where + ": unknown tolerance '" + name + "'");
  if (!(value > 0) || !std::isfinite(value)) throw InputError(where + ": tolerance '" + name + "' must be positive");
  tol[name] = value;
}

void parse_tol_args(Globals& g) {
  g.tol = kDefaultTol;
  for (const auto& arg : g.tol_args) {
    const auto eq = arg.find('=');
    if (eq == std::string::npos) throw InputError("--tol expects NAME=VAL, got '" + arg + "'");
    double v;
    try {
      std::size_t used = 0;
      v = std::stod(arg.substr(eq + 1), &used);
      if (used != arg.size() - eq - 1) throw std::invalid_argument(arg);
    } catch (const std::exception&) {
      throw InputError("--tol " + arg + ": value is not a number");
    }
    set_tol(g.tol, arg.substr(0, eq), v, "--tol");
  }
}

specflow::LiftOptions lift_options(const Globals& g) {
  specflow::LiftOptions o;
  o.step_tol = g.tol.at("step_tol");
  o.node_tol = g.tol.at("node_tol");
  o.max_depth = static_cast<int>(g.tol.at("max_depth"));
  return o;
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(path + ": " + e.what());
  }
}

void reject_unknown(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) throw InputError(where + " must be an object");
  for (const auto& [key, _] : j.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
      throw InputError(where + ": unknown key '" + key + "'");
    }
  }
}

std::ofstream open_out(const Globals& g, const std::string& name) {
  fs::create_directories(g.out_dir);
  const fs::path p = fs::path(g.out_dir) / name;
  std::ofstream os(p);
  if (!os) throw InputError("cannot write '" + p.string() + "'");
  return os;
}

// metric

int cmd_metric(const Globals& g, const std::string& file) {
  const json j = read_json(file);
  reject_unknown(j, {"S", "T"}, file);
  if (!j.contains("S") || !j.contains("T")) throw InputError(file + ": needs keys 'S' and 'T'");
  specflow::RiggedSet s(specflow::Space::circle), t(specflow::Space::circle);
  try {
    s = specflow::io::rigged_from_json(j["S"]);
  } catch (const Error& e) {
    throw InputError(std::string("S.") + e.what());
  }
  try {
    t = specflow::io::rigged_from_json(j["T"]);
  } catch (const Error& e) {
    throw InputError(std::string("T.") + e.what());
  }
  const auto m = specflow::distance_d(s, t);
  std::cout << specflow::io::format_double(m.cost, 12) << '\n';
  auto os = open_out(g, "matching.csv");
  specflow::io::write_matching_csv(os, m);
  return kOk;
}

// track / mu

struct PathArgs {
  std::string builtin;
  std::string hamiltonian;
  std::string samples;
  double r_max = 1.0;
};

specflow::cli::MatrixPath load_path(const PathArgs& a) {
  if (!a.samples.empty()) {
    if (!a.builtin.empty()) throw InputError("give either a builtin path or --samples, not both");
    const json j = read_json(a.samples);
    reject_unknown(j, {"samples"}, a.samples);
    if (!j.contains("samples") || !j["samples"].is_array()) throw InputError(a.samples + ": 'samples' must be an array");
    std::vector<double> r;
    std::vector<Eigen::MatrixXcd> u;
    for (std::size_t i = 0; i < j["samples"].size(); ++i) {
      const auto& s = j["samples"][i];
      const std::string where = a.samples + ": samples[" + std::to_string(i) + "]";
      reject_unknown(s, {"r", "U"}, where);
      if (!s.contains("r") || !s["r"].is_number()) throw InputError(where + ".r must be a number");
      if (!s.contains("U")) throw InputError(where + ".U is missing");
      r.push_back(s["r"].get<double>());
      try {
        u.push_back(specflow::io::matrix_from_json(s["U"]));
      } catch (const Error& e) {
        throw InputError(where + ".U: " + e.what());
      }
    }
    return specflow::cli::sampled_path(std::move(r), std::move(u));
  }
  if (a.builtin.empty()) throw InputError("no path given (builtin name or --samples FILE)");
  std::optional<Eigen::MatrixXcd> h;
  if (!a.hamiltonian.empty()) {
    try {
      h = specflow::io::matrix_from_json(read_json(a.hamiltonian));
    } catch (const Error& e) {
      throw InputError(a.hamiltonian + ": " + e.what());
    }
  }
  return specflow::cli::builtin_path(a.builtin, h ? &*h : nullptr, a.r_max);
}

int cmd_track(const Globals& g, const PathArgs& a) {
  const auto m = load_path(a);
  const double cluster = g.tol.at("cluster_tol");
  const bool identity = specflow::spec(m.matrix(m.a), cluster).empty();
  const auto track = specflow::lift_path(specflow::cli::spectrum_path(m, identity, cluster), lift_options(g));
  auto os = open_out(g, "track.csv");
  specflow::io::write_track_csv(os, track);
  if (g.svg) {
    auto svg = open_out(g, "track.svg");
    specflow::io::write_track_svg(svg, track);
  }
  std::cout << "tracks " << track.tracks() << ", nodes " << track.nodes() << ", endpoint_sum "
            << specflow::io::format_double(specflow::endpoint_sum(track), 12) << '\n';
  return kOk;
}

int cmd_mu(const Globals& g, const PathArgs& a) {
  const auto m = load_path(a);
  const double cluster = g.tol.at("cluster_tol");
  if (!specflow::spec(m.matrix(m.a), cluster).empty()) throw InputError("mu needs a path that starts at the identity");
  const auto track = specflow::lift_path(specflow::cli::spectrum_path(m, true, cluster), lift_options(g));
  const auto mu = specflow::mu_invariant(track);
  auto os = open_out(g, "mu.csv");
  specflow::io::write_mu_csv(os, mu);
  if (g.svg) {
    auto svg = open_out(g, "mu.svg");
    specflow::io::write_mu_svg(svg, mu.values);
  }
  std::cout << "mu_integral " << specflow::io::format_double(specflow::mu_integral(mu), 12) << ", endpoint_sum "
            << specflow::io::format_double(specflow::endpoint_sum(track), 12) << '\n';
  if (mu.end.empty()) std::cout << "loop winding " << specflow::loop_constancy_check(track) << '\n';
  return kOk;
}

// scatter

struct ScatterConfig {
  specflow::ScatteringModel model;
  std::vector<double> lambdas{-1.5, -1.0, -0.5, 0.5, 1.0, 1.5};
  std::vector<double> rs;
};

std::vector<double> number_list(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw InputError(where + " must be a nonempty array of numbers");
  std::vector<double> v;
  for (const auto& x : j) {
    if (!x.is_number()) throw InputError(where + " must contain only numbers");
    v.push_back(x.get<double>());
  }
  return v;
}

ScatterConfig load_scatter_config(const std::string& file, Globals& g) {
  const json j = read_json(file);
  reject_unknown(j, {"model", "lambda_grid", "r_grid", "tolerances"}, file);
  ScatterConfig c;
  for (int i = 1; i <= 20; ++i) c.rs.push_back(0.25 * i);
  c.model = specflow::ScatteringModel::rank_one();
  if (j.contains("model")) {
    const auto& m = j["model"];
    if (m.is_string()) {
      if (m == "rank_one") c.model = specflow::ScatteringModel::rank_one();
      else if (m == "rank_two") c.model = specflow::ScatteringModel::rank_two();
      else throw InputError(file + ": model must be \"rank_one\", \"rank_two\" or an object");
    } else {
      reject_unknown(m, {"sites", "kappa", "J"}, file + ": model");
      if (!m.contains("sites") || !m.contains("kappa") || !m.contains("J")) {
        throw InputError(file + ": model needs sites, kappa and J");
      }
      c.model.sites.clear();
      for (const auto& s : m["sites"]) {
        if (!s.is_number_integer()) throw InputError(file + ": model.sites must be integers");
        c.model.sites.push_back(s.get<long>());
      }
      c.model.kappa = number_list(m["kappa"], file + ": model.kappa");
      try {
        c.model.coupling = specflow::io::matrix_from_json(m["J"]);
        c.model.validate();
      } catch (const Error& e) {
        throw InputError(file + ": model: " + e.what());
      }
    }
  }
  if (j.contains("lambda_grid")) c.lambdas = number_list(j["lambda_grid"], file + ": lambda_grid");
  if (j.contains("r_grid")) c.rs = number_list(j["r_grid"], file + ": r_grid");
  for (double r : c.rs) {
    if (r < 0) throw InputError(file + ": r_grid values must be nonnegative");
  }
  if (j.contains("tolerances")) {
    const auto& t = j["tolerances"];
    if (!t.is_object()) throw InputError(file + ": tolerances must be an object");
    auto tol = kDefaultTol;
    for (const auto& [name, v] : t.items()) {
      if (!v.is_number()) throw InputError(file + ": tolerances." + name + " must be a number");
      set_tol(tol, name, v.get<double>(), file + ": tolerances");
    }
    // Command-line overrides win over the config file.
    for (const auto& [name, v] : g.tol) {
      if (v != kDefaultTol.at(name)) tol[name] = v;
    }
    g.tol = tol;
  }
  return c;
}

struct Row {
  double lambda = 0, r = 0;
  std::optional<specflow::XiDecomposition> xi;
  double min_singval = std::numeric_limits<double>::quiet_NaN();
  std::string status = "ok";
  std::string reason;
};

Row scatter_point(const ScatterConfig& c, double lambda, double r, const specflow::LiftOptions& opt) {
  Row row;
  row.lambda = lambda;
  row.r = r;
  try {
    row.min_singval = specflow::min_singular_value(c.model, lambda, r);
    if (r > 0) {
      std::vector<double> grid(65);
      for (std::size_t i = 0; i < grid.size(); ++i) grid[i] = r * static_cast<double>(i) / 64.0;
      const auto res = specflow::resonance_scan(c.model, lambda, grid);
      if (!res.empty()) {
        std::ostringstream msg;
        msg << "resonance on [0, r]: r* in [" << specflow::io::format_double(res.front().lo) << ", "
            << specflow::io::format_double(res.front().hi) << "]";
        row.status = "resonance";
        row.reason = msg.str();
        return row;
      }
    }
    row.xi = specflow::xi_decompose(c.model, lambda, r, opt);
  } catch (const specflow::ResonanceOnPath& e) {
    row.status = "resonance";
    row.reason = e.what();
  } catch (const Error& e) {
    row.status = "error";
    row.reason = e.what();
  }
  return row;
}

int cmd_scatter(Globals& g, const std::string& file) {
  const ScatterConfig c = load_scatter_config(file, g);
  const auto opt = lift_options(g);
  std::vector<std::pair<double, double>> points;
  for (double l : c.lambdas)
    for (double r : c.rs) points.emplace_back(l, r);

  // Grid points are independent; workers pull indices, results land in place.
  std::vector<Row> rows(points.size());
  std::atomic<std::size_t> next{0};
  const unsigned workers = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(), points.size()));
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < points.size(); i = next++) {
          rows[i] = scatter_point(c, points[i].first, points[i].second, opt);
        }
      });
    }
  }

  using specflow::io::format_double;
  auto os = open_out(g, "scatter.csv");
  os << "lambda,r,xi,xi_ac,xi_s,mu_s_value,bk_residual,min_singval,status\n";
  double worst_int = 0, worst_bk = 0, worst_unit = 0, worst_spec = 0;
  int resonances = 0;
  const Row* first_bad = nullptr;
  for (auto& row : rows) {
    os << format_double(row.lambda) << ',' << format_double(row.r) << ',';
    if (row.xi) {
      const auto& x = *row.xi;
      os << format_double(x.xi) << ',' << format_double(x.xi_ac) << ',' << format_double(x.xi_s) << ','
         << format_double(x.mu_s_value) << ',' << format_double(x.bk_residual) << ',';
      const double dist = std::abs(x.xi_s - std::round(x.xi_s));
      worst_int = std::max(worst_int, dist);
      worst_bk = std::max(worst_bk, x.bk_residual);
      worst_unit = std::max(worst_unit, x.unitarity_residual);
      worst_spec = std::max(worst_spec, x.spectra_distance);
      std::ostringstream why;
      if (dist >= g.tol.at("xi_s")) why << "xi_s off integer by " << dist << "; ";
      if (x.bk_residual >= g.tol.at("bk")) why << "Birman-Krein residual " << x.bk_residual << "; ";
      if (x.unitarity_residual >= g.tol.at("unitarity")) why << "unitarity residual " << x.unitarity_residual << "; ";
      if (x.spectra_distance >= g.tol.at("spectra")) why << "route spectra differ by " << x.spectra_distance << "; ";
      if (!why.str().empty()) {
        row.status = "tolerance";
        row.reason = why.str();
      }
    } else {
      os << "nan,nan,nan,nan,nan,";
    }
    os << format_double(row.min_singval) << ',' << row.status << '\n';
    if (row.status == "resonance") ++resonances;
    if (row.status != "ok" && first_bad == nullptr) first_bad = &row;
  }

  if (g.svg) {
    std::vector<specflow::io::Series> series;
    for (double l : c.lambdas) {
      specflow::io::Series s;
      for (const auto& row : rows) {
        if (row.lambda == l && row.xi) {
          s.x.push_back(row.r);
          s.y.push_back(row.xi->xi);
        }
      }
      series.push_back(std::move(s));
    }
    auto svg = open_out(g, "scatter.svg");
    specflow::io::write_svg_plot(svg, series, "Spectral shift xi(lambda; r), one curve per lambda", "r", "xi");
  }

  std::cout << "rows " << rows.size() << ", max |xi_s - round| " << format_double(worst_int, 3) << ", max bk_residual "
            << format_double(worst_bk, 3) << ", max unitarity " << format_double(worst_unit, 3)
            << ", max route distance " << format_double(worst_spec, 3) << ", resonances " << resonances << '\n';
  if (first_bad != nullptr) {
    std::cerr << "first failing grid point: lambda = " << format_double(first_bad->lambda)
              << ", r = " << format_double(first_bad->r) << ": " << first_bad->reason << '\n';
    return kScatteringFailure;
  }
  return kOk;
}

// verify

int cmd_verify(const Globals& g, const std::string& fault) {
  const auto results = specflow::cli::run_suite(g.seed, specflow::cli::parse_fault(fault));
  std::size_t width = 0;
  for (const auto& r : results) width = std::max(width, r.name.size());
  std::vector<std::string> failed;
  for (const auto& r : results) {
    std::cout << (r.passed ? "PASS  " : "FAIL  ") << r.name << std::string(width + 2 - r.name.size(), ' ') << r.cases
              << " cases";
    if (!r.passed) {
      std::cout << ", worst excess " << specflow::io::format_double(r.worst, 3) << ": " << r.detail;
      failed.push_back(r.name);
    }
    std::cout << '\n';
  }
  if (failed.empty()) return kOk;
  std::cerr << "failing properties:";
  for (const auto& n : failed) std::cerr << ' ' << n;
  std::cerr << '\n';
  return kPropertyFailure;
}

// plot

int cmd_plot(const Globals& g, const std::string& file) {
  std::ifstream in(file);
  if (!in) throw InputError("cannot open '" + file + "'");
  std::string header;
  std::getline(in, header);
  in.seekg(0);
  const std::string stem = fs::path(file).stem().string();
  auto os = open_out(g, stem + ".svg");
  try {
    if (header == "r,j,theta_j") {
      specflow::io::write_track_svg(os, specflow::io::read_track_csv(in));
    } else if (header == "theta,value_right,value_at") {
      specflow::io::write_mu_svg(os, specflow::io::read_mu_csv(in));
    } else {
      throw InputError(file + ": expected a track CSV (r,j,theta_j) or a mu CSV (theta,value_right,value_at)");
    }
  } catch (const Error& e) {
    throw InputError(file + ": " + e.what());
  }
  std::cout << (fs::path(g.out_dir) / (stem + ".svg")).string() << '\n';
  return kOk;
}

void add_path_options(CLI::App* cmd, PathArgs& a) {
  cmd->add_option("path", a.builtin, "builtin path: \"loop N=<int>\" or \"exp(irH)\"");
  cmd->add_option("--hamiltonian", a.hamiltonian, "JSON matrix H for exp(irH)");
  cmd->add_option("--r-max", a.r_max, "end of the r interval for exp(irH)");
  cmd->add_option("--samples", a.samples, "JSON file {\"samples\": [{\"r\": .., \"U\": ..}, ..]}");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral flow, rigged-set metric and scattering-phase experiments"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--out", g.out_dir, "output directory")->capture_default_str();
  app.add_option("--seed", g.seed, "seed for randomized checks")->capture_default_str();
  app.add_option("--tol", g.tol_args, "tolerance override NAME=VAL (repeatable)");
  app.add_flag("--svg", g.svg, "also write SVG plots");

  std::string metric_file, scatter_file, plot_file, fault;
  PathArgs track_args, mu_args;
  auto* metric = app.add_subcommand("metric", "distance d between two rigged sets");
  metric->add_option("input", metric_file, "JSON {\"S\": set, \"T\": set}")->required();
  auto* track = app.add_subcommand("track", "lift a matrix path to continuous eigenvalue arguments");
  add_path_options(track, track_args);
  auto* mu = app.add_subcommand("mu", "mu-invariant of a path starting at the identity");
  add_path_options(mu, mu_args);
  auto* scatter = app.add_subcommand("scatter", "spectral shift sweep over a lattice model");
  scatter->add_option("config", scatter_file, "JSON experiment config")->required();
  auto* verify = app.add_subcommand("verify", "run the invariant suite");
  verify->add_option("--inject-fault", fault, "corrupt a component on purpose: metric or mu");
  auto* plot = app.add_subcommand("plot", "SVG plot of a track or mu CSV");
  plot->add_option("csv", plot_file, "track.csv or mu.csv")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    parse_tol_args(g);
    if (*metric) return cmd_metric(g, metric_file);
    if (*track) return cmd_track(g, track_args);
    if (*mu) return cmd_mu(g, mu_args);
    if (*scatter) return cmd_scatter(g, scatter_file);
    if (*verify) return cmd_verify(g, fault);
    if (*plot) return cmd_plot(g, plot_file);
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kInputError;
  } catch (const specflow::DepthExceeded& e) {
    std::cerr << "tracking failure on r-interval [" << specflow::io::format_double(e.r0()) << ", "
              << specflow::io::format_double(e.r1()) << "]: " << e.what() << '\n';
    return kTrackingFailure;
  } catch (const Error& e) {
    std::cerr << e.what() << '\n';
    if (is_input_kind(e.kind())) return kInputError;
    return *scatter ? kScatteringFailure : kTrackingFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kOk;
}
