// greenquad: kernel grids, Levi spectra, solvability reports and verification suites.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "greenquad/greenquad.hpp"
#include "greenquad/suites.hpp"

namespace gq = greenquad;
using ojson = nlohmann::ordered_json;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_failed = 1;
constexpr int exit_config = 2;
constexpr int exit_flagged = 3;

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  return out;
}

double parse_double(const std::string& s) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    gq::fail(gq::errc::parse, "not a number: '" + s + "'");
  }
  if (pos != s.size()) gq::fail(gq::errc::parse, "trailing characters in number: '" + s + "'");
  return v;
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  for (const auto& p : split(s, ',')) out.push_back(parse_double(p));
  if (out.empty()) gq::fail(gq::errc::parse, "empty list");
  return out;
}

gq::form_index parse_index(const std::string& s, int n) {
  std::vector<int> e;
  if (!s.empty() && s != "none")
    for (double v : parse_list(s)) e.push_back(static_cast<int>(v));
  return {e, n};
}

int thread_count() {
  int n = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  if (const char* env = std::getenv("GREENQUAD_THREADS")) {
    const double cap = parse_double(env);
    if (!(cap >= 1.0)) gq::fail(gq::errc::parse, "GREENQUAD_THREADS must be a positive integer");
    n = std::min(n, static_cast<int>(cap));
  }
  return n;
}

// ---------------------------------------------------------------------------
// Forms
// ---------------------------------------------------------------------------

struct form_options {
  std::string name;
  std::string sigma;
  std::string matrix_file;
  std::string lambda;
};

gq::sesquilinear_form load_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) gq::fail(gq::errc::parse, "cannot open matrix file '" + path + "'");
  ojson doc;
  try {
    doc = ojson::parse(in);
  } catch (const std::exception& e) {
    gq::fail(gq::errc::parse, std::string("matrix file: ") + e.what());
  }
  if (!doc.contains("matrices") || !doc["matrices"].is_array() || doc["matrices"].empty())
    gq::fail(gq::errc::parse, "matrix file needs a non-empty \"matrices\" array");
  std::vector<gq::dense_matrix<gq::cplx>> mats;
  int n = -1;
  for (const auto& m : doc["matrices"]) {
    if (!m.is_array() || m.empty()) gq::fail(gq::errc::parse, "each matrix must be a non-empty array of rows");
    if (n < 0) n = static_cast<int>(m.size());
    gq::dense_matrix<gq::cplx> a(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
    if (static_cast<int>(m.size()) != n) gq::fail(gq::errc::parse, "matrices must share one size");
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (!m[i].is_array() || static_cast<int>(m[i].size()) != n) gq::fail(gq::errc::parse, "matrix is not square");
      for (std::size_t j = 0; j < m[i].size(); ++j) {
        const auto& e = m[i][j];
        if (e.is_number()) {
          a(i, j) = e.get<double>();
        } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
          a(i, j) = {e[0].get<double>(), e[1].get<double>()};
        } else {
          gq::fail(gq::errc::parse, "matrix entries are numbers or [re, im] pairs");
        }
      }
    }
    mats.push_back(std::move(a));
  }
  return {n, std::move(mats)};
}

gq::sesquilinear_form make_form(const form_options& o) {
  if (!o.matrix_file.empty()) return load_matrix_file(o.matrix_file);
  if (o.name == "m1") return gq::m1_form();
  if (o.name == "m2") return gq::m2_form();
  if (o.name == "m3") return gq::m3_form();
  if (o.name == "heisenberg" || o.name == "hypersurface") {
    if (o.sigma.empty()) gq::fail(gq::errc::parse, "--sigma is required for " + o.name);
    return gq::hypersurface_form(parse_list(o.sigma));
  }
  gq::fail(gq::errc::parse, "unknown form '" + o.name + "'");
}

void add_form_options(CLI::App* cmd, form_options& o) {
  cmd->add_option("--form", o.name, "m1, m2, m3, heisenberg or hypersurface");
  cmd->add_option("--sigma", o.sigma, "comma-separated diagonal for heisenberg/hypersurface");
  cmd->add_option("--matrix-file", o.matrix_file, "JSON file {\"matrices\": [[[a, [re, im]], ...], ...]}");
  cmd->add_option("--lambda", o.lambda, "comma-separated direction")->required();
}

std::string fmt_complex(gq::cplx v) { return "(" + fmt(v.real()) + "," + fmt(v.imag()) + ")"; }

int cmd_levi(const form_options& fo, const std::string& format) {
  const auto form = make_form(fo);
  const auto spec = gq::compute_levi_spectrum(form, parse_list(fo.lambda));
  if (format == "json") {
    ojson j;
    j["mu"] = spec.mu;
    j["nu"] = spec.nu;
    ojson basis = ojson::array();
    for (int c = 0; c < spec.n(); ++c) {
      ojson col = ojson::array();
      for (const auto& v : spec.column(c)) col.push_back({v.real(), v.imag()});
      basis.push_back(col);
    }
    j["basis"] = basis;
    std::cout << j.dump(2) << "\n";
    return exit_ok;
  }
  std::cout << "mu =";
  for (double m : spec.mu) std::cout << " " << fmt(m);
  std::cout << "\nnu = " << spec.nu << "\n";
  for (int c = 0; c < spec.n(); ++c) {
    std::cout << "v" << c + 1 << " =";
    for (const auto& v : spec.column(c)) std::cout << " " << fmt_complex(v);
    std::cout << "\n";
  }
  return exit_ok;
}

int cmd_solvability(const form_options& fo, const std::string& index, int q) {
  const auto form = make_form(fo);
  const auto lambda = parse_list(fo.lambda);
  const auto spec = gq::compute_levi_spectrum(form, lambda);
  if (q >= 0) {
    for (const auto& L : gq::form_index::all(form.n(), q)) {
      std::cout << "L={";
      for (std::size_t i = 0; i < L.entries().size(); ++i) std::cout << (i ? "," : "") << L.entries()[i];
      std::cout << "} " << gq::to_string(gq::solvability(spec, L)) << "\n";
    }
    std::cout << "q=" << q << " " << gq::to_string(gq::solvability_at_level(form, lambda, q)) << "\n";
    return exit_ok;
  }
  std::cout << gq::to_string(gq::solvability(spec, parse_index(index, form.n()))) << "\n";
  return exit_ok;
}

// ---------------------------------------------------------------------------
// Kernel grids
// ---------------------------------------------------------------------------

struct axis {
  std::string name;
  double lo = 0.0;
  double hi = 0.0;
  int count = 1;
  double at(int k) const { return count == 1 ? lo : lo + (hi - lo) * k / (count - 1); }
};

struct kernel_options {
  std::string family;
  std::string sigma = "1,1";
  int component = 1;
  int q = 0;
  std::string m3_mode = "standard";
  std::vector<std::string> grid;
  std::string output;
  std::string format = "csv";
  double rel_tol = 1e-10;
  bool strict = false;
  std::string diff;
  double diff_tol = 1e-8;
};

gq::kernel_spec make_spec(const kernel_options& o) {
  gq::kernel_spec s;
  if (o.family == "heisenberg-c3") {
    s = gq::kernel_spec::heisenberg();
  } else if (o.family == "mixed") {
    s = gq::kernel_spec::mixed(parse_list(o.sigma), o.component);
  } else if (o.family == "zero-eigen") {
    s = gq::kernel_spec::zero_eigen();
  } else if (o.family == "m2") {
    s = gq::kernel_spec::m2(o.q);
  } else if (o.family == "m3") {
    if (o.m3_mode != "standard" && o.m3_mode != "levi") gq::fail(gq::errc::parse, "--m3-mode is standard or levi");
    s = gq::kernel_spec::m3(o.q, o.m3_mode == "levi" ? gq::m3_mode::levi_eigenbasis : gq::m3_mode::standard);
  } else {
    gq::fail(gq::errc::parse, "unknown kernel family '" + o.family + "'");
  }
  if ((s.family == gq::kernel_family::m2 || s.family == gq::kernel_family::m3) && o.q != 0 && o.q != 2)
    gq::fail(gq::errc::parse, "--q must be 0 or 2");
  if (s.family == gq::kernel_family::mixed) {
    if (s.sigma.size() != 2 || s.sigma[0] <= 0.0 || s.sigma[1] <= 0.0)
      gq::fail(gq::errc::parse, "mixed needs --sigma a,b with a, b > 0");
    if (o.component != 1 && o.component != 2) gq::fail(gq::errc::parse, "--component must be 1 or 2");
  }
  if (!(o.rel_tol > 0.0)) gq::fail(gq::errc::parse, "--rel-tol must be positive");
  s.quadrature.rel_tol = o.rel_tol;
  return s;
}

std::vector<axis> make_axes(const gq::kernel_spec& spec, const std::vector<std::string>& grid) {
  std::vector<axis> axes;
  for (int j = 1; j <= spec.complex_dim(); ++j) {
    axes.push_back({"x" + std::to_string(j)});
    axes.push_back({"y" + std::to_string(j)});
  }
  for (int k = 1; k <= spec.codim(); ++k) axes.push_back({"t" + std::to_string(k)});
  for (const auto& g : grid) {
    const auto eq = g.find('=');
    if (eq == std::string::npos) gq::fail(gq::errc::parse, "grid spec must be AXIS=min:max:count or AXIS=value");
    const std::string name = g.substr(0, eq);
    auto it = std::find_if(axes.begin(), axes.end(), [&](const axis& a) { return a.name == name; });
    if (it == axes.end()) gq::fail(gq::errc::parse, "unknown axis '" + name + "' for this family");
    const auto parts = split(g.substr(eq + 1), ':');
    if (parts.size() == 1) {
      it->lo = it->hi = parse_double(parts[0]);
      it->count = 1;
    } else if (parts.size() == 3) {
      it->lo = parse_double(parts[0]);
      it->hi = parse_double(parts[1]);
      const double c = parse_double(parts[2]);
      if (!(c >= 1.0) || c != std::floor(c)) gq::fail(gq::errc::parse, "grid count must be an integer >= 1");
      it->count = static_cast<int>(c);
    } else {
      gq::fail(gq::errc::parse, "grid spec must be AXIS=min:max:count or AXIS=value");
    }
  }
  return axes;
}

struct row {
  std::vector<double> coords;
  gq::cplx value;
  double err = 0.0;
  std::string flag = "ok";
};

void evaluate(const gq::kernel_spec& spec, row& r) {
  const int n = spec.complex_dim();
  std::vector<gq::cplx> z(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j)
    z[static_cast<std::size_t>(j)] = {r.coords[static_cast<std::size_t>(2 * j)],
                                      r.coords[static_cast<std::size_t>(2 * j + 1)]};
  const std::vector<double> t(r.coords.begin() + 2 * n, r.coords.end());
  try {
    const auto res = gq::physical_kernel(spec, z, t);
    r.value = res.value;
    r.err = res.error_estimate;
    if (!res.converged) r.flag = "nonconverged";
  } catch (const gq::error& e) {
    if (e.code() != gq::errc::singular_point && e.code() != gq::errc::degenerate_direction) throw;
    r.value = {std::nan(""), std::nan("")};
    r.err = std::nan("");
    r.flag = "singular";
  }
}

std::vector<row> run_grid(const gq::kernel_spec& spec, const std::vector<axis>& axes) {
  std::size_t total = 1;
  for (const auto& a : axes) total *= static_cast<std::size_t>(a.count);
  std::vector<row> rows(total);
  for (std::size_t i = 0; i < total; ++i) {
    std::size_t rest = i;
    rows[i].coords.resize(axes.size());
    for (std::size_t k = axes.size(); k-- > 0;) {
      const auto c = static_cast<std::size_t>(axes[k].count);
      rows[i].coords[k] = axes[k].at(static_cast<int>(rest % c));
      rest /= c;
    }
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < total; i = next++) {
      try {
        evaluate(spec, rows[i]);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const int threads = std::min<int>(thread_count(), static_cast<int>(total));
  std::vector<std::thread> pool;
  for (int k = 1; k < threads; ++k) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
  return rows;
}

void write_csv(std::ostream& out, const std::vector<axis>& axes, const std::vector<row>& rows) {
  for (const auto& a : axes) out << a.name << ",";
  out << "re,im,err_estimate,flag\n";
  for (const auto& r : rows) {
    for (double c : r.coords) out << fmt(c) << ",";
    out << fmt(r.value.real()) << "," << fmt(r.value.imag()) << "," << fmt(r.err) << "," << r.flag << "\n";
  }
}

void write_json(std::ostream& out, const std::string& family, const std::vector<axis>& axes,
                const std::vector<row>& rows) {
  ojson j;
  j["family"] = family;
  ojson cols = ojson::array();
  for (const auto& a : axes) cols.push_back(a.name);
  j["columns"] = cols;
  ojson data = ojson::array();
  for (const auto& r : rows) {
    ojson o;
    for (std::size_t k = 0; k < axes.size(); ++k) o[axes[k].name] = r.coords[k];
    o["re"] = std::isnan(r.value.real()) ? ojson(nullptr) : ojson(r.value.real());
    o["im"] = std::isnan(r.value.imag()) ? ojson(nullptr) : ojson(r.value.imag());
    o["err_estimate"] = std::isnan(r.err) ? ojson(nullptr) : ojson(r.err);
    o["flag"] = r.flag;
    data.push_back(o);
  }
  j["rows"] = data;
  out << j.dump(2) << "\n";
}

// Largest relative difference of (re, im) against a reference CSV with the same coordinates.
double diff_against(const std::string& path, const std::vector<axis>& axes, const std::vector<row>& rows) {
  std::ifstream in(path);
  if (!in) gq::fail(gq::errc::parse, "cannot open diff reference '" + path + "'");
  std::string line;
  std::getline(in, line);
  const auto header = split(line, ',');
  const auto col = [&](const std::string& name) {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) gq::fail(gq::errc::parse, "reference CSV lacks column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t re = col("re");
  const std::size_t im = col("im");
  std::vector<std::size_t> coord_cols;
  for (const auto& a : axes) coord_cols.push_back(col(a.name));
  double worst = 0.0;
  std::size_t i = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (i >= rows.size()) gq::fail(gq::errc::parse, "reference CSV has more rows than the grid");
    const auto f = split(line, ',');
    for (std::size_t k = 0; k < coord_cols.size(); ++k)
      if (parse_double(f.at(coord_cols[k])) != rows[i].coords[k])
        gq::fail(gq::errc::parse, "reference CSV coordinates differ at row " + std::to_string(i + 1));
    const gq::cplx ref(parse_double(f.at(re)), parse_double(f.at(im)));
    const auto& v = rows[i].value;
    if (std::isnan(ref.real()) || std::isnan(v.real())) {
      if (std::isnan(ref.real()) != std::isnan(v.real())) worst = std::numeric_limits<double>::infinity();
    } else {
      const double scale = std::abs(ref) > 0.0 ? std::abs(ref) : 1.0;
      worst = std::max(worst, std::abs(v - ref) / scale);
    }
    ++i;
  }
  if (i != rows.size()) gq::fail(gq::errc::parse, "reference CSV has fewer rows than the grid");
  return worst;
}

int cmd_kernel(const kernel_options& o) {
  if (o.format != "csv" && o.format != "json") gq::fail(gq::errc::parse, "--format is csv or json");
  const auto spec = make_spec(o);
  const auto axes = make_axes(spec, o.grid);
  const auto rows = run_grid(spec, axes);
  std::ofstream file;
  if (!o.output.empty()) {
    file.open(o.output);
    if (!file) gq::fail(gq::errc::parse, "cannot write '" + o.output + "'");
  }
  std::ostream& out = o.output.empty() ? std::cout : file;
  if (o.format == "csv") {
    write_csv(out, axes, rows);
  } else {
    write_json(out, o.family, axes, rows);
  }
  out.flush();
  int code = exit_ok;
  if (!o.diff.empty()) {
    const double d = diff_against(o.diff, axes, rows);
    std::cerr << "max relative difference vs " << o.diff << ": " << fmt(d) << "\n";
    if (!(d <= o.diff_tol)) code = exit_failed;
  }
  const bool flagged = std::any_of(rows.begin(), rows.end(), [](const row& r) { return r.flag != "ok"; });
  if (o.strict && flagged) return exit_flagged;
  return code;
}

// ---------------------------------------------------------------------------
// Verification suites
// ---------------------------------------------------------------------------

int cmd_verify(const std::string& suite, std::uint64_t seed, double tol_scale, const std::string& output,
               bool timing) {
  const auto start = std::chrono::steady_clock::now();
  gq::suite_options opt;
  opt.seed = seed;
  opt.tolerance_scale = tol_scale;
  const auto rep = gq::run_suite(suite, opt);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  ojson j;
  j["suite"] = rep.suite;
  ojson checks = ojson::array();
  for (const auto& c : rep.checks) {
    ojson o;
    o["name"] = c.name;
    o["residual"] = std::isfinite(c.residual) ? ojson(c.residual) : ojson(nullptr);
    o["threshold"] = c.threshold;
    o["pass"] = c.pass;
    checks.push_back(o);
  }
  j["checks"] = checks;
  if (!rep.warning.empty()) j["warning"] = rep.warning;
  j["wall_time_s"] = timing ? wall : 0.0;
  const std::string text = j.dump(2) + "\n";
  if (output.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(output);
    if (!f) gq::fail(gq::errc::parse, "cannot write '" + output + "'");
    f << text;
  }
  return rep.passed() ? exit_ok : exit_failed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Green kernels of the Kohn Laplacian on quadric CR submanifolds"};
  app.require_subcommand(1);

  form_options levi_form;
  std::string levi_format = "text";
  auto* levi = app.add_subcommand("levi", "eigenvalues, rank and eigenbasis of phi^lambda");
  add_form_options(levi, levi_form);
  levi->add_option("--format", levi_format, "text or json")->check(CLI::IsMember({"text", "json"}));

  form_options solv_form;
  std::string solv_index;
  int solv_q = -1;
  auto* solv = app.add_subcommand("solvability", "kernel verdict for one component L or every L at level q");
  add_form_options(solv, solv_form);
  auto* opt_L = solv->add_option("--L", solv_index, "comma-separated index set, 'none' for the empty set");
  auto* opt_q = solv->add_option("--q", solv_q, "form level");
  opt_L->excludes(opt_q);

  kernel_options ko;
  auto* kernel = app.add_subcommand("kernel", "evaluate N(z, t) on a grid");
  kernel->add_option("--family", ko.family, "heisenberg-c3, mixed, zero-eigen, m2, m3")->required();
  kernel->add_option("--sigma", ko.sigma, "mixed: sigma_1,sigma_2");
  kernel->add_option("--component", ko.component, "mixed: L = {component}");
  kernel->add_option("--q", ko.q, "m2/m3: 0 or 2");
  kernel->add_option("--m3-mode", ko.m3_mode, "m3: standard or levi");
  kernel->add_option("--grid", ko.grid, "AXIS=min:max:count or AXIS=value; repeatable");
  kernel->add_option("--output,-o", ko.output, "output path (default stdout)");
  kernel->add_option("--format", ko.format, "csv or json");
  kernel->add_option("--rel-tol", ko.rel_tol, "quadrature relative tolerance");
  kernel->add_flag("--strict", ko.strict, "exit 3 if any row is flagged");
  kernel->add_option("--diff", ko.diff, "reference CSV to compare re/im against");
  kernel->add_option("--diff-tol", ko.diff_tol, "relative tolerance for --diff");

  std::string suite;
  std::uint64_t seed = 1;
  double tol_scale = 1.0;
  std::string verify_out;
  bool no_timing = false;
  auto* verify = app.add_subcommand("verify", "run a verification suite and print a JSON summary");
  verify->add_option("suite", suite, "suite name")->required()->check(CLI::IsMember(gq::suite_names()));
  verify->add_option("--seed", seed, "seed for randomized checks");
  verify->add_option("--tolerance-scale", tol_scale, "multiplies every threshold");
  verify->add_option("--output,-o", verify_out, "output path (default stdout)");
  verify->add_flag("--no-timing", no_timing, "write wall_time_s as 0 for byte-identical reruns");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_config;
  }

  try {
    if (levi->parsed()) return cmd_levi(levi_form, levi_format);
    if (solv->parsed()) {
      if (solv_index.empty() && solv_q < 0 && opt_L->count() == 0) gq::fail(gq::errc::parse, "give --L or --q");
      return cmd_solvability(solv_form, solv_index, solv_q);
    }
    if (kernel->parsed()) return cmd_kernel(ko);
    if (verify->parsed()) return cmd_verify(suite, seed, tol_scale, verify_out, !no_timing);
  } catch (const gq::error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_config;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_config;
  }
  return exit_config;
}
