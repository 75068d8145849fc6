#pragma once

#include <cerrno>
#include <cstdlib>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "darkcav/field.hpp"
#include "darkcav/io.hpp"
#include "darkcav/params.hpp"

namespace darkcav {

enum class Mode { OneAtom, TwoAtom, Grid, DarkAnalyze, Sweep, Figure };

inline std::string_view to_string(Mode m) {
  switch (m) {
    case Mode::OneAtom: return "one-atom";
    case Mode::TwoAtom: return "two-atom";
    case Mode::Grid: return "grid";
    case Mode::DarkAnalyze: return "dark-analyze";
    case Mode::Sweep: return "sweep";
    case Mode::Figure: return "figure";
  }
  return "two-atom";
}

inline Mode parse_mode(std::string_view s) {
  for (Mode m : {Mode::OneAtom, Mode::TwoAtom, Mode::Grid, Mode::DarkAnalyze, Mode::Sweep, Mode::Figure})
    if (to_string(m) == s) return m;
  throw Error(ErrorCode::ConfigError, "unknown mode '" + std::string(s) + "'");
}

/// Everything needed to reproduce one run. Text form: one `key = value` per
/// line, `#` starts a comment, lists are comma separated. Keys:
///
///   mode         one-atom | two-atom | grid | dark-analyze | sweep | figure
///   omega kappa delta q1 q2 phi      physical parameters (units of w_rec)
///   rna          true | false
///   initial      delta | excited | dark | D1 | D2 | trap
///   dark_m dark_n                    indices of |d_mn> when initial = dark
///   mmax         lattice half-width (dark-analyze: table half-width)
///   grid boundary trap_n dtau        position grid: size, periodic | dirichlet, N, step
///   tau_end samples tol              propagation span, sample count, integrator tolerance
///   quadrature   dark-analyze: quadrature grid for the cross-check (0 = off)
///   figure       figure id
///   sweep_omega sweep_kappa sweep_delta   sweep axes (Cartesian product, omega outermost)
///   fit_t0 fit_t1                    decay-rate fit window
///   out format workers               output path, csv | json | bin, worker threads
struct RunConfig {
  Mode mode = Mode::TwoAtom;
  Params params{50.0, 20.0, 0.0, 0.0, 0.0, 0.0};
  ModelFlag flag = ModelFlag::full();
  std::string initial = "delta";
  int dark_m = 0;
  int dark_n = 0;
  int mmax = 16;
  std::size_t grid = 128;
  Boundary boundary = Boundary::Periodic;
  double trap_n = 3.0;
  double dtau = 5e-5;
  double tau_end = 2.0;
  std::size_t samples = 201;
  double tol = 1e-9;
  std::size_t quadrature = 0;
  std::string figure;
  std::vector<double> sweep_omega;
  std::vector<double> sweep_kappa;
  std::vector<double> sweep_delta;
  double fit_t0 = 1.0;
  double fit_t1 = 2.0;
  std::string out;
  Format format = Format::Csv;
  unsigned workers = 1;

  friend bool operator==(const RunConfig& a, const RunConfig& b) {
    return a.mode == b.mode && a.params.omega == b.params.omega && a.params.kappa == b.params.kappa &&
           a.params.delta == b.params.delta && a.params.q1 == b.params.q1 && a.params.q2 == b.params.q2 &&
           a.params.phi == b.params.phi && a.flag.rna == b.flag.rna && a.initial == b.initial &&
           a.dark_m == b.dark_m && a.dark_n == b.dark_n && a.mmax == b.mmax && a.grid == b.grid &&
           a.boundary == b.boundary && a.trap_n == b.trap_n && a.dtau == b.dtau &&
           a.tau_end == b.tau_end && a.samples == b.samples && a.tol == b.tol &&
           a.quadrature == b.quadrature && a.figure == b.figure && a.sweep_omega == b.sweep_omega &&
           a.sweep_kappa == b.sweep_kappa && a.sweep_delta == b.sweep_delta && a.fit_t0 == b.fit_t0 &&
           a.fit_t1 == b.fit_t1 && a.out == b.out && a.format == b.format && a.workers == b.workers;
  }
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline double parse_double(const std::string& key, const std::string& v) {
  errno = 0;
  char* end = nullptr;
  const double d = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size() || errno == ERANGE)
    throw Error(ErrorCode::ConfigError, key + ": not a number: '" + v + "'");
  return d;
}

inline long long parse_int(const std::string& key, const std::string& v) {
  errno = 0;
  char* end = nullptr;
  const long long i = std::strtoll(v.c_str(), &end, 10);
  if (v.empty() || end != v.c_str() + v.size() || errno == ERANGE)
    throw Error(ErrorCode::ConfigError, key + ": not an integer: '" + v + "'");
  return i;
}

inline std::size_t parse_count(const std::string& key, const std::string& v) {
  const long long i = parse_int(key, v);
  if (i < 0) throw Error(ErrorCode::ConfigError, key + " must be >= 0");
  return static_cast<std::size_t>(i);
}

inline bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw Error(ErrorCode::ConfigError, key + ": expected true or false, got '" + v + "'");
}

inline std::vector<double> parse_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  if (trim(v).empty()) return out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(key, trim(item)));
  return out;
}

inline std::string format_list(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_double(v[i]);
  return s;
}

}  // namespace detail

/// Applies one key. Used by the file parser and by CLI overrides.
inline void set_config_value(RunConfig& c, const std::string& key, const std::string& raw) {
  using namespace detail;
  const std::string v = trim(raw);
  if (key == "mode") c.mode = parse_mode(v);
  else if (key == "omega") c.params.omega = parse_double(key, v);
  else if (key == "kappa") c.params.kappa = parse_double(key, v);
  else if (key == "delta") c.params.delta = parse_double(key, v);
  else if (key == "q1") c.params.q1 = parse_double(key, v);
  else if (key == "q2") c.params.q2 = parse_double(key, v);
  else if (key == "phi") c.params.phi = parse_double(key, v);
  else if (key == "rna") c.flag.rna = parse_bool(key, v);
  else if (key == "initial") c.initial = v;
  else if (key == "dark_m") c.dark_m = static_cast<int>(parse_int(key, v));
  else if (key == "dark_n") c.dark_n = static_cast<int>(parse_int(key, v));
  else if (key == "mmax") c.mmax = static_cast<int>(parse_int(key, v));
  else if (key == "grid") c.grid = parse_count(key, v);
  else if (key == "boundary") {
    if (v == "periodic") c.boundary = Boundary::Periodic;
    else if (v == "dirichlet") c.boundary = Boundary::Dirichlet;
    else throw Error(ErrorCode::ConfigError, "boundary must be periodic or dirichlet");
  } else if (key == "trap_n") c.trap_n = parse_double(key, v);
  else if (key == "dtau") c.dtau = parse_double(key, v);
  else if (key == "tau_end") c.tau_end = parse_double(key, v);
  else if (key == "samples") c.samples = parse_count(key, v);
  else if (key == "tol") c.tol = parse_double(key, v);
  else if (key == "quadrature") c.quadrature = parse_count(key, v);
  else if (key == "figure") c.figure = v;
  else if (key == "sweep_omega") c.sweep_omega = parse_list(key, v);
  else if (key == "sweep_kappa") c.sweep_kappa = parse_list(key, v);
  else if (key == "sweep_delta") c.sweep_delta = parse_list(key, v);
  else if (key == "fit_t0") c.fit_t0 = parse_double(key, v);
  else if (key == "fit_t1") c.fit_t1 = parse_double(key, v);
  else if (key == "out") c.out = v;
  else if (key == "format") c.format = parse_format(v);
  else if (key == "workers") {
    const long long w = parse_int(key, v);
    if (w < 1) throw Error(ErrorCode::ConfigError, "workers must be >= 1");
    c.workers = static_cast<unsigned>(w);
  } else {
    throw Error(ErrorCode::ConfigError, "unknown key '" + key + "'");
  }
}

inline RunConfig parse_config(std::string_view text, RunConfig base = {}) {
  std::set<std::string> seen;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (detail::trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorCode::ConfigError, "line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = detail::trim(std::string_view(line).substr(0, eq));
    if (!seen.insert(key).second)
      throw Error(ErrorCode::ConfigError, "line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    try {
      set_config_value(base, key, line.substr(eq + 1));
    } catch (const Error& e) {
      throw Error(ErrorCode::ConfigError, "line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return base;
}

inline RunConfig load_config(const std::string& path) {
  try {
    return parse_config(detail::read_text(path));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::IoFailure) throw Error(ErrorCode::ConfigError, e.what());
    throw;
  }
}

/// Every key, in a fixed order, with doubles at 17 significant digits.
inline std::string to_text(const RunConfig& c) {
  using detail::format_list;
  std::ostringstream o;
  o << "mode = " << to_string(c.mode) << "\n"
    << "omega = " << format_double(c.params.omega) << "\n"
    << "kappa = " << format_double(c.params.kappa) << "\n"
    << "delta = " << format_double(c.params.delta) << "\n"
    << "q1 = " << format_double(c.params.q1) << "\n"
    << "q2 = " << format_double(c.params.q2) << "\n"
    << "phi = " << format_double(c.params.phi) << "\n"
    << "rna = " << (c.flag.rna ? "true" : "false") << "\n"
    << "initial = " << c.initial << "\n"
    << "dark_m = " << c.dark_m << "\n"
    << "dark_n = " << c.dark_n << "\n"
    << "mmax = " << c.mmax << "\n"
    << "grid = " << c.grid << "\n"
    << "boundary = " << (c.boundary == Boundary::Periodic ? "periodic" : "dirichlet") << "\n"
    << "trap_n = " << format_double(c.trap_n) << "\n"
    << "dtau = " << format_double(c.dtau) << "\n"
    << "tau_end = " << format_double(c.tau_end) << "\n"
    << "samples = " << c.samples << "\n"
    << "tol = " << format_double(c.tol) << "\n"
    << "quadrature = " << c.quadrature << "\n"
    << "figure = " << c.figure << "\n"
    << "sweep_omega = " << format_list(c.sweep_omega) << "\n"
    << "sweep_kappa = " << format_list(c.sweep_kappa) << "\n"
    << "sweep_delta = " << format_list(c.sweep_delta) << "\n"
    << "fit_t0 = " << format_double(c.fit_t0) << "\n"
    << "fit_t1 = " << format_double(c.fit_t1) << "\n"
    << "out = " << c.out << "\n"
    << "format = " << to_string(c.format) << "\n"
    << "workers = " << c.workers << "\n";
  return o.str();
}

}  // namespace darkcav
