#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <json.hpp>
#include <optional>
#include <ostream>
#include <sstream>

#include "isinglab/boundary.hpp"
#include "isinglab/chi.hpp"
#include "isinglab/form_factor.hpp"
#include "isinglab/fredholm.hpp"
#include "isinglab/toeplitz.hpp"

namespace isinglab::cli {

namespace {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& s) {
  std::size_t used = 0;
  const std::string t = trim(s);
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::logic_error&) {
    throw DomainError("cannot parse number '" + s + "'");
  }
  if (used != t.size()) throw DomainError("cannot parse number '" + s + "'");
  return v;
}

// Shared output state of one invocation.
struct Output {
  Table table;
  bool flagged = false;
};

CouplingK coupling_from(const std::string& k_text, std::optional<double> beta_j) {
  if (beta_j) return k_from_temperature(*beta_j);
  const auto [re, im] = parse_complex(k_text);
  if (im == 0.0 && re >= 0.0) return CouplingK::physical(re);
  return CouplingK::analytic({re, im});
}

QuadratureSpec quad_spec(std::optional<int> nodes, std::optional<std::uint64_t> samples,
                         std::uint64_t seed, int default_nodes, int levels) {
  if (samples) return QuadratureSpec::monte_carlo(*samples, seed);
  return QuadratureSpec::gauss(nodes.value_or(default_nodes), levels);
}

std::vector<Cell> chi_row(const ChiResult& r) {
  return {r.k.real(),
          r.k.imag(),
          std::string(to_string(r.route)),
          r.beta_inv_chi_d.real(),
          r.beta_inv_chi_d.imag(),
          static_cast<long long>(r.terms_used),
          r.est_error,
          r.flagged};
}

const std::vector<std::string> kChiColumns{"k_re",     "k_im",           "route",
                                           "beta_inv_chi_d_re", "beta_inv_chi_d_im",
                                           "terms_used", "est_error", "flagged"};

std::vector<std::string> with_config(const std::vector<std::string>& args) {
  std::optional<std::string> path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (!path) return args;
  std::ifstream in(*path);
  if (!in) throw DomainError("cannot open config file '" + *path + "'");
  std::vector<std::string> merged = args;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw DomainError("config line without '=': " + line);
    const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    const std::string flag = "--" + key;
    bool given = false;
    for (const auto& a : args) given = given || a == flag || a.rfind(flag + "=", 0) == 0;
    if (!given) {
      merged.push_back(flag);
      merged.push_back(value);
    }
  }
  return merged;
}

}  // namespace

std::string to_csv(const Table& table) {
  std::ostringstream os;
  for (std::size_t i = 0; i < table.columns.size(); ++i)
    os << (i ? "," : "") << csv_escape(table.columns[i]);
  os << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ",";
      std::visit(
          [&](const auto& v) {
            using V = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<V, std::string>) os << csv_escape(v);
            else if constexpr (std::is_same_v<V, double>) os << format_double(v);
            else if constexpr (std::is_same_v<V, bool>) os << (v ? "true" : "false");
            else os << v;
          },
          row[i]);
    }
    os << "\n";
  }
  return os.str();
}

std::string to_json(const Table& table) {
  nlohmann::ordered_json records = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json rec = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::visit(
          [&](const auto& v) {
            using V = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<V, double>) {
              if (std::isfinite(v)) rec[table.columns[i]] = v;
              else rec[table.columns[i]] = format_double(v);
            } else {
              rec[table.columns[i]] = v;
            }
          },
          row[i]);
    }
    records.push_back(std::move(rec));
  }
  return records.dump(2) + "\n";
}

std::pair<double, double> parse_complex(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) return {to_double(text), 0.0};
  return {to_double(text.substr(0, comma)), to_double(text.substr(comma + 1))};
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> grid;
  const std::string t = trim(text);
  if (t.empty()) return grid;
  if (t.find(':') != std::string::npos) {
    std::vector<double> parts;
    std::stringstream ss(t);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(to_double(item));
    if (parts.size() != 3 || !(parts[2] > 0.0) || parts[1] < parts[0])
      throw DomainError("grid range must be a:b:step with a <= b and step > 0");
    const double count = std::floor((parts[1] - parts[0]) / parts[2] + 1e-9);
    for (long i = 0; i <= static_cast<long>(count); ++i) grid.push_back(parts[0] + i * parts[2]);
    return grid;
  }
  std::stringstream ss(t);
  std::string item;
  while (std::getline(ss, item, ',')) grid.push_back(to_double(item));
  return grid;
}

std::pair<int, int> parse_range(const std::string& text) {
  const auto dots = text.find("..");
  if (dots == std::string::npos) throw DomainError("range must be written j0..j1");
  const double a = to_double(text.substr(0, dots)), b = to_double(text.substr(dots + 2));
  if (a != std::floor(a) || b != std::floor(b)) throw DomainError("range bounds must be integers");
  return {static_cast<int>(a), static_cast<int>(b)};
}

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Diagonal correlations, diagonal susceptibility and form-factor probes of the 2D Ising model"};
  app.name(raw_args.empty() ? "ising_lab" : raw_args.front());
  app.require_subcommand(1);
  app.fallthrough();

  std::string format = "csv";
  std::string output_path;
  std::string config_path;
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--output,-o", output_path, "Write the table to a file instead of stdout");
  app.add_option("--config", config_path, "key = value file; command-line flags take precedence");

  Output result;
  std::function<void()> action;

  // correlation
  auto* corr = app.add_subcommand("correlation", "Diagonal correlation <s00 sNN> as a Toeplitz determinant");
  std::string corr_k = "0";
  std::optional<double> corr_beta;
  int corr_n = 1;
  corr->add_option("--k", corr_k, "Coupling k, real or re,im");
  corr->add_option("--beta-j", corr_beta, "Use k = sinh(2 betaJ)^-2");
  corr->add_option("--n", corr_n, "Diagonal separation N")->required();
  corr->callback([&] {
    action = [&] {
      const auto k = coupling_from(corr_k, corr_beta);
      const auto c = diagonal_correlation(k, corr_n);
      const Complex m = magnetization(k);
      const Complex dev = c.value - m * m;
      result.table.columns = {"k_re",         "k_im",         "N",             "value_re",
                              "value_im",     "deviation_re", "deviation_im",  "cond_estimate",
                              "reliable"};
      result.table.rows.push_back({k.k().real(), k.k().imag(), static_cast<long long>(corr_n),
                                   c.value.real(), c.value.imag(), dev.real(), dev.imag(),
                                   c.cond_estimate, c.reliable});
      result.flagged = !c.reliable;
    };
  });

  // gcbo-check
  auto* gcbo = app.add_subcommand("gcbo-check", "Compare Toeplitz determinants with M^2 det(I - K_N)");
  std::string gcbo_k = "0";
  int gcbo_nmax = 8;
  double gcbo_tol = 1e-14, gcbo_threshold = 1e-8;
  gcbo->add_option("--k", gcbo_k, "Coupling k, real or re,im")->required();
  gcbo->add_option("--n-max", gcbo_nmax, "Largest N checked")->required()->check(CLI::PositiveNumber);
  gcbo->add_option("--tol", gcbo_tol, "Cutoff-doubling tolerance for det(I - K_N)");
  gcbo->add_option("--threshold", gcbo_threshold, "Relative residual above which a row is flagged");
  gcbo->callback([&] {
    action = [&] {
      const auto k = coupling_from(gcbo_k, std::nullopt);
      const Complex m = magnetization(k);
      const PhiTable table(k, gcbo_nmax);
      result.table.columns = {"N",         "toeplitz_re",        "toeplitz_im",
                              "m2_fredholm_re", "m2_fredholm_im", "rel_residual",
                              "cutoff",    "passed"};
      for (int N = 1; N <= gcbo_nmax; ++N) {
        const auto d = diagonal_correlation(table, N);
        const auto f = fredholm_det(k, N, gcbo_tol);
        const Complex rhs = m * m * f.det_value;
        const double res = std::abs(d.value - rhs) / std::abs(d.value);
        const bool ok = res <= gcbo_threshold;
        result.flagged = result.flagged || !ok;
        result.table.rows.push_back({static_cast<long long>(N), d.value.real(), d.value.imag(),
                                     rhs.real(), rhs.imag(), res,
                                     static_cast<long long>(f.cutoff_used), ok});
      }
    };
  });

  // chi
  auto* chi = app.add_subcommand("chi", "beta^-1 chi_d by one route");
  std::string chi_k = "0", chi_route = "fredholm";
  std::optional<double> chi_beta;
  double chi_tol = 1e-12;
  ChiOptions chi_opts;
  int chi_nodes = 64;
  chi->add_option("--k", chi_k, "Coupling k, real or re,im");
  chi->add_option("--beta-j", chi_beta, "Use k = sinh(2 betaJ)^-2");
  chi->add_option("--route", chi_route, "fredholm | toeplitz_direct | integral");
  chi->add_option("--tol", chi_tol, "Target accuracy");
  chi->add_option("--n-max", chi_opts.n_max_toeplitz, "Largest N for toeplitz_direct");
  chi->add_option("--n-terms", chi_opts.n_max_integral, "Form-factor terms for the integral route");
  chi->add_option("--nodes", chi_nodes, "Gauss nodes per axis for the integral route");
  chi->callback([&] {
    action = [&] {
      chi_opts.spec = QuadratureSpec::gauss(chi_nodes);
      const auto r = chi_d(coupling_from(chi_k, chi_beta), chi_tol, parse_route(chi_route), chi_opts);
      result.table.columns = kChiColumns;
      result.table.rows.push_back(chi_row(r));
      result.flagged = r.flagged;
    };
  });

  // sn
  auto* sn = app.add_subcommand("sn", "Form-factor term S_n(kappa)");
  std::string sn_kappa = "0", sn_form = "both";
  int sn_n = 1, sn_levels = 0;
  std::optional<int> sn_nodes;
  std::optional<std::uint64_t> sn_samples;
  std::uint64_t sn_seed = QuadratureSpec{}.seed;
  sn->add_option("--kappa", sn_kappa, "kappa = k^2 as re or re,im")->required();
  sn->add_option("--n", sn_n, "Order n")->required()->check(CLI::PositiveNumber);
  auto* sn_nodes_opt = sn->add_option("--nodes", sn_nodes, "Tensor Gauss nodes per axis (n <= 2)");
  auto* sn_mc_opt = sn->add_option("--mc-samples", sn_samples, "Monte Carlo sample count");
  sn_nodes_opt->excludes(sn_mc_opt);
  sn->add_option("--seed", sn_seed, "Monte Carlo seed");
  sn->add_option("--levels", sn_levels, "Graded panel levels toward x = 1");
  sn->add_option("--form", sn_form, "Sn1 | Sn2 | both")->check(CLI::IsMember({"Sn1", "Sn2", "both"}));
  sn->callback([&] {
    action = [&] {
      const auto [re, im] = parse_complex(sn_kappa);
      std::optional<std::uint64_t> samples = sn_samples;
      if (!samples && !sn_nodes && sn_n > 2) samples = QuadratureSpec{}.mc_samples;
      const auto spec = quad_spec(sn_nodes, samples, sn_seed, sn_n == 1 ? 64 : 32, sn_levels);
      result.table.columns = {"n",        "kappa_re", "kappa_im",      "form",          "method",
                              "value_re", "value_im", "rel_error_est", "abs_error_est", "flagged"};
      std::vector<SnForm> forms;
      if (sn_form != "Sn2") forms.push_back(SnForm::cauchy);
      if (sn_form != "Sn1") forms.push_back(SnForm::vandermonde);
      for (auto form : forms) {
        const auto r = s_n({re, im}, sn_n, spec, form);
        result.flagged = result.flagged || r.flagged;
        result.table.rows.push_back(
            {static_cast<long long>(sn_n), re, im, std::string(to_string(form)),
             std::string(r.method == QuadratureMethod::tensor_gauss ? "tensor_gauss" : "monte_carlo"),
             r.value.real(), r.value.imag(), r.rel_error_est, r.abs_error_est, r.flagged});
      }
    };
  });

  // boundary-scan
  auto* scan = app.add_subcommand("boundary-scan", "Radial scan of the ell-th boundary integral toward a root of unity");
  std::string scan_eps = "1/2", scan_radii = "4..10";
  int scan_n = 2, scan_ell = 0;
  std::optional<int> scan_nodes, scan_levels;
  std::optional<std::uint64_t> scan_samples;
  std::uint64_t scan_seed = QuadratureSpec{}.seed;
  scan->add_option("--eps", scan_eps, "Root of unity exp(2 pi i p/q) as p/q")->required();
  scan->add_option("--n", scan_n, "Order n (q must equal n)")->required();
  scan->add_option("--ell", scan_ell, "Power ell")->required();
  scan->add_option("--radii", scan_radii, "Radii 1 - 2^-j for j in j0..j1");
  auto* scan_nodes_opt = scan->add_option("--nodes", scan_nodes, "Gauss nodes per panel");
  auto* scan_mc_opt = scan->add_option("--mc-samples", scan_samples, "Monte Carlo sample count");
  scan_nodes_opt->excludes(scan_mc_opt);
  scan->add_option("--seed", scan_seed, "Monte Carlo seed");
  scan->add_option("--levels", scan_levels, "Graded panel levels (default from the radii)");
  scan->callback([&] {
    action = [&] {
      const auto [j0, j1] = parse_range(scan_radii);
      const auto radii = dyadic_radii(j0, j1);
      QuadratureSpec spec = boundary_spec(radii, scan_nodes.value_or(5));
      if (scan_levels) spec.panel_levels = *scan_levels;
      if (scan_samples) spec = QuadratureSpec::monte_carlo(*scan_samples, scan_seed);
      const auto s = radial_scan(RootOfUnity::parse(scan_eps), scan_n, scan_ell, radii, spec);
      result.table.columns = {"j",         "radius",    "log_inv_gap", "value_re",   "value_im",
                              "abs_error_est", "precision_warning", "fit_slope", "fit_intercept",
                              "fit_r2",    "classification"};
      const std::string verdict = s.classification.diverging ? "diverging" : "bounded";
      for (std::size_t i = 0; i < radii.size(); ++i) {
        result.table.rows.push_back({static_cast<long long>(j0 + static_cast<int>(i)), radii[i],
                                     std::log(1.0 / (1.0 - radii[i])), s.values[i].real(),
                                     s.values[i].imag(), s.abs_error_est[i],
                                     static_cast<bool>(s.precision_warning[i]), s.fit_slope,
                                     s.fit_intercept, s.fit_r2, verdict});
      }
    };
  });

  // smoothness
  auto* smooth = app.add_subcommand("smoothness", "Classify d^ell (S_1 + S_2) / d kappa^ell along a radius");
  std::string sm_eps = "1/2", sm_radii = "4..16";
  int sm_ell_max = 7, sm_nodes = 5;
  smooth->add_option("--eps", sm_eps, "Root of unity as p/q")->required();
  smooth->add_option("--ell-max", sm_ell_max, "Highest derivative order");
  smooth->add_option("--radii", sm_radii, "Radii 1 - 2^-j for j in j0..j1");
  smooth->add_option("--nodes", sm_nodes, "Gauss nodes per panel");
  smooth->callback([&] {
    action = [&] {
      const auto [j0, j1] = parse_range(sm_radii);
      const auto radii = dyadic_radii(j0, j1);
      const auto rep =
          smoothness_probe(sm_ell_max, RootOfUnity::parse(sm_eps), boundary_spec(radii, sm_nodes), radii);
      result.table.columns = {"ell",        "component",          "last_value_re", "fit_slope",
                              "fit_r2",     "slope_significance", "growth_ratio",  "classification"};
      for (const auto& e : rep.entries) {
        for (const auto& [name, s] : {std::pair<const char*, const RadialScan*>{"S1", &e.s1},
                                      {"S2", &e.s2},
                                      {"S1+S2", &e.total}}) {
          result.table.rows.push_back({static_cast<long long>(e.ell), std::string(name),
                                       s->values.back().real(), s->fit_slope, s->fit_r2,
                                       s->classification.slope_significance,
                                       s->classification.growth_ratio,
                                       std::string(s->classification.diverging ? "diverging" : "bounded")});
        }
      }
    };
  });

  // sweep
  auto* sw = app.add_subcommand("sweep", "beta^-1 chi_d over a grid of k");
  std::string sw_grid, sw_route = "fredholm";
  double sw_tol = 1e-12;
  ChiOptions sw_opts;
  int sw_nodes = 64;
  sw->add_option("--grid", sw_grid, "a:b:step or v1,v2,... (empty for none)")->required();
  sw->add_option("--route", sw_route, "fredholm | toeplitz_direct | integral");
  sw->add_option("--tol", sw_tol, "Target accuracy");
  sw->add_option("--n-max", sw_opts.n_max_toeplitz, "Largest N for toeplitz_direct");
  sw->add_option("--n-terms", sw_opts.n_max_integral, "Form-factor terms for the integral route");
  sw->add_option("--nodes", sw_nodes, "Gauss nodes per axis for the integral route");
  sw->callback([&] {
    action = [&] {
      sw_opts.spec = QuadratureSpec::gauss(sw_nodes);
      std::vector<CouplingK> grid;
      for (double k : parse_grid(sw_grid)) grid.push_back(k >= 0.0 ? CouplingK::physical(k) : CouplingK::analytic(k));
      const auto rows = sweep(grid, parse_route(sw_route), sw_tol, sw_opts);
      result.table.columns = kChiColumns;
      for (const auto& r : rows) {
        result.table.rows.push_back(chi_row(r));
        result.flagged = result.flagged || r.flagged;
        if (!r.message.empty()) err << "k = " << r.k.real() << ": " << r.message << "\n";
      }
    };
  });

  try {
    std::vector<std::string> args = with_config(raw_args);
    std::vector<std::string> rest(args.begin() + (args.empty() ? 0 : 1), args.end());
    std::reverse(rest.begin(), rest.end());
    app.parse(rest);
    if (action) action();
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kDomainError;
  } catch (const ConvergenceError& e) {
    err << "convergence: " << e.what() << "\n";
    return kConvergenceFlagged;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kDomainError;
  }

  const std::string text = format == "json" ? to_json(result.table) : to_csv(result.table);
  if (output_path.empty()) {
    out << text;
  } else {
    std::ofstream file(output_path, std::ios::binary);
    if (!file) {
      err << "error: cannot write '" << output_path << "'\n";
      return kDomainError;
    }
    file << text;
  }
  if (result.flagged) {
    err << "warning: one or more results are flagged\n";
    return kConvergenceFlagged;
  }
  return kSuccess;
}

}  // namespace isinglab::cli
