#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include "json.hpp"  // nlohmann::json, vendored

#include "darkcav/dark.hpp"
#include "darkcav/field.hpp"
#include "darkcav/propagate.hpp"

namespace darkcav {

enum class Format { Csv, Json, Bin };

inline Format parse_format(std::string_view s) {
  if (s == "csv") return Format::Csv;
  if (s == "json") return Format::Json;
  if (s == "bin") return Format::Bin;
  throw Error(ErrorCode::ConfigError, "unknown format '" + std::string(s) + "' (csv, json, bin)");
}

inline std::string_view to_string(Format f) {
  switch (f) {
    case Format::Csv: return "csv";
    case Format::Json: return "json";
    case Format::Bin: return "bin";
  }
  return "csv";
}

inline constexpr int json_schema_version = 1;

/// 17 significant digits, enough to parse back to the same double.
inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace detail {

inline std::ofstream open_out(const std::string& path, bool binary) {
  std::ofstream out(path, binary ? std::ios::binary | std::ios::trunc : std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot open '" + path + "' for writing");
  return out;
}

inline std::ifstream open_in(const std::string& path, bool binary) {
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open '" + path + "' for reading");
  return in;
}

inline void finish(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw Error(ErrorCode::IoFailure, "write to '" + path + "' failed");
}

inline void write_text(const std::string& path, const std::string& text) {
  auto out = open_out(path, false);
  out << text;
  finish(out, path);
}

inline std::string read_text(const std::string& path) {
  auto in = open_in(path, false);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

template <class T>
T to_little(T v) {
  if constexpr (std::endian::native == std::endian::big) {
    auto bytes = std::bit_cast<std::array<unsigned char, sizeof(T)>>(v);
    std::reverse(bytes.begin(), bytes.end());
    return std::bit_cast<T>(bytes);
  }
  return v;
}

template <class T>
void put(std::ostream& out, T v) {
  const T le = to_little(v);
  out.write(reinterpret_cast<const char*>(&le), sizeof(T));
}

template <class T>
T get(std::istream& in, const std::string& path) {
  T v;
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw Error(ErrorCode::IoFailure, "truncated binary file '" + path + "'");
  return to_little(v);
}

// Binary lattice-state record: magic, kind (1 one-atom, 2 two-atom), window, tau,
// then float64 (re, im) pairs in storage order.
inline constexpr std::uint32_t state_magic = 0x54534344;  // "DCST"

template <class State>
constexpr std::uint32_t state_kind() {
  return std::is_same_v<State, TwoAtomState> ? 2u : 1u;
}

template <class State>
void put_state(std::ostream& out, const State& s) {
  put<std::uint32_t>(out, state_magic);
  put<std::uint32_t>(out, state_kind<State>());
  put<std::int32_t>(out, s.window());
  put<double>(out, s.time());
  for (const auto& a : s.storage()) {
    put<double>(out, a.real());
    put<double>(out, a.imag());
  }
}

template <class State>
State get_state(std::istream& in, const std::string& path) {
  if (get<std::uint32_t>(in, path) != state_magic)
    throw Error(ErrorCode::IoFailure, "'" + path + "' is not a state file");
  if (get<std::uint32_t>(in, path) != state_kind<State>())
    throw Error(ErrorCode::IoFailure, "'" + path + "' holds a different state type");
  const int w = get<std::int32_t>(in, path);
  if (w < 2 || w > 100000) throw Error(ErrorCode::IoFailure, "bad window in '" + path + "'");
  const double t = get<double>(in, path);
  State s(w, t);
  for (auto& a : s.storage()) {
    const double re = get<double>(in, path);
    const double im = get<double>(in, path);
    a = {re, im};
  }
  return s;
}

inline nlohmann::json complex_array(const std::vector<cplx>& v) {
  auto arr = nlohmann::json::array();
  for (const auto& a : v) arr.push_back({a.real(), a.imag()});
  return arr;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Lattice states
// ---------------------------------------------------------------------------

inline std::string state_csv(const TwoAtomState& s) {
  std::ostringstream out;
  out << "# window=" << s.window() << "\n# tau=" << format_double(s.time()) << "\n";
  out << "channel,m,n,re,im\n";
  for_each_index(s, [&](const LatticeIndex& i) {
    const cplx a = s(i.channel, i.m, i.n);
    out << static_cast<int>(i.channel) << ',' << i.m << ',' << i.n << ',' << format_double(a.real())
        << ',' << format_double(a.imag()) << '\n';
  });
  return out.str();
}

inline std::string state_csv(const OneAtomState& s) {
  std::ostringstream out;
  out << "# window=" << s.window() << "\n# tau=" << format_double(s.time()) << "\n";
  out << "channel,m,re,im\n";
  for (int c = 1; c <= 2; ++c)
    for (int m = -s.window(); m <= s.window(); ++m) {
      const cplx a = s(c, m);
      out << c << ',' << m << ',' << format_double(a.real()) << ',' << format_double(a.imag()) << '\n';
    }
  return out.str();
}

template <class State>
nlohmann::json state_json(const State& s) {
  return {{"schema", "darkcav.state"},
          {"schema_version", json_schema_version},
          {"kind", std::is_same_v<State, TwoAtomState> ? "two-atom" : "one-atom"},
          {"window", s.window()},
          {"tau", s.time()},
          {"amplitudes", detail::complex_array(s.storage())}};
}

template <class State>
State state_from_json(const nlohmann::json& j) {
  try {
    if (j.at("schema") != "darkcav.state" || j.at("schema_version") != json_schema_version)
      throw Error(ErrorCode::IoFailure, "unsupported state schema");
    State s(j.at("window").get<int>(), j.at("tau").get<double>());
    const auto& arr = j.at("amplitudes");
    if (arr.size() != s.storage().size()) throw Error(ErrorCode::IoFailure, "amplitude count mismatch");
    for (std::size_t k = 0; k < arr.size(); ++k)
      s.storage()[k] = {arr[k].at(0).get<double>(), arr[k].at(1).get<double>()};
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::IoFailure, e.what());
  }
}

template <class State>
void export_state(const State& s, const std::string& path, Format f) {
  switch (f) {
    case Format::Csv:
      detail::write_text(path, state_csv(s));
      return;
    case Format::Json:
      detail::write_text(path, state_json(s).dump(1) + "\n");
      return;
    case Format::Bin: {
      auto out = detail::open_out(path, true);
      detail::put_state(out, s);
      detail::finish(out, path);
      return;
    }
  }
}

/// Reads a file written by export_state in the JSON or binary format.
template <class State>
State import_state(const std::string& path, Format f) {
  if (f == Format::Bin) {
    auto in = detail::open_in(path, true);
    return detail::get_state<State>(in, path);
  }
  if (f == Format::Json) {
    try {
      return state_from_json<State>(nlohmann::json::parse(detail::read_text(path)));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::IoFailure, e.what());
    }
  }
  throw Error(ErrorCode::InvalidArgument, "state import supports json and bin");
}

// ---------------------------------------------------------------------------
// Dark table
// ---------------------------------------------------------------------------

/// Nonzero-class entries of both channels (channel 1 on even sites, 2 on odd).
inline std::string dark_table_csv(const DarkTable& t) {
  std::ostringstream out;
  out << "channel,m,n,re_c,im_c,provenance\n";
  const int w = t.window();
  for (int ch = 1; ch <= 2; ++ch)
    for (int m = -w; m <= w; ++m)
      for (int n = -w; n <= w; ++n) {
        const bool site = ch == 1 ? (is_even(m) && is_even(n)) : (!is_even(m) && !is_even(n));
        if (!site) continue;
        const cplx c = t(ch, m, n);
        out << ch << ',' << m << ',' << n << ',' << format_double(c.real()) << ','
            << format_double(c.imag()) << ',' << to_string(t.provenance()) << '\n';
      }
  return out.str();
}

inline nlohmann::json dark_table_json(const DarkTable& t) {
  nlohmann::json entries = nlohmann::json::array();
  const int w = t.window();
  for (int ch = 1; ch <= 2; ++ch)
    for (int m = -w; m <= w; ++m)
      for (int n = -w; n <= w; ++n) {
        const cplx c = t(ch, m, n);
        if (c != cplx{}) entries.push_back({{"channel", ch}, {"m", m}, {"n", n}, {"c", {c.real(), c.imag()}}});
      }
  return {{"schema", "darkcav.dark_table"},
          {"schema_version", json_schema_version},
          {"window", w},
          {"provenance", to_string(t.provenance())},
          {"I_sequence", detail::complex_array(t.I_sequence())},
          {"entries", std::move(entries)}};
}

inline void export_dark_table(const DarkTable& t, const std::string& path, Format f) {
  if (f == Format::Csv) return detail::write_text(path, dark_table_csv(t));
  if (f == Format::Json) return detail::write_text(path, dark_table_json(t).dump(1) + "\n");
  throw Error(ErrorCode::InvalidArgument, "dark table export supports csv and json");
}

// ---------------------------------------------------------------------------
// Trajectories
// ---------------------------------------------------------------------------

template <class State>
std::string trajectory_csv(const Trajectory<State>& tr) {
  std::ostringstream out;
  out << "# tol=" << format_double(tr.stats.tol) << "\n# rhs_evaluations=" << tr.stats.rhs_evaluations
      << "\n# max_boundary_population=" << format_double(tr.stats.max_boundary_population)
      << "\n# truncation_warning=" << (tr.stats.truncation_warning ? 1 : 0) << "\n";
  out << "tau,survival,boundary_population\n";
  for (std::size_t i = 0; i < tr.times.size(); ++i)
    out << format_double(tr.times[i]) << ',' << format_double(survival_probability(tr.states[i])) << ','
        << format_double(boundary_population(tr.states[i])) << '\n';
  return out.str();
}

template <class State>
nlohmann::json trajectory_json(const Trajectory<State>& tr) {
  std::vector<double> boundary;
  for (const auto& s : tr.states) boundary.push_back(boundary_population(s));
  return {{"schema", "darkcav.trajectory"},
          {"schema_version", json_schema_version},
          {"kind", std::is_same_v<State, TwoAtomState> ? "two-atom" : "one-atom"},
          {"window", tr.states.empty() ? 0 : tr.states.front().window()},
          {"tau", tr.times},
          {"survival", tr.survival()},
          {"boundary_population", boundary},
          {"stats",
           {{"tol", tr.stats.tol},
            {"rhs_evaluations", tr.stats.rhs_evaluations},
            {"samples", tr.stats.samples},
            {"max_boundary_population", tr.stats.max_boundary_population},
            {"truncation_warning", tr.stats.truncation_warning}}}};
}

/// csv and json hold observables per sample; bin holds every snapshot
/// (uint32 count followed by state records).
template <class State>
void export_trajectory(const Trajectory<State>& tr, const std::string& path, Format f) {
  switch (f) {
    case Format::Csv:
      detail::write_text(path, trajectory_csv(tr));
      return;
    case Format::Json:
      detail::write_text(path, trajectory_json(tr).dump(1) + "\n");
      return;
    case Format::Bin: {
      auto out = detail::open_out(path, true);
      detail::put<std::uint32_t>(out, static_cast<std::uint32_t>(tr.states.size()));
      for (const auto& s : tr.states) detail::put_state(out, s);
      detail::finish(out, path);
      return;
    }
  }
}

template <class State>
std::vector<State> import_trajectory_bin(const std::string& path) {
  auto in = detail::open_in(path, true);
  const auto count = detail::get<std::uint32_t>(in, path);
  std::vector<State> out;
  out.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) out.push_back(detail::get_state<State>(in, path));
  return out;
}

// ---------------------------------------------------------------------------
// Position fields
// ---------------------------------------------------------------------------

inline constexpr std::size_t field_csv_max_grid = 256;

/// Header uint32 G, uint32 boundary tag (0 periodic, 1 Dirichlet), float64 tau;
/// then channels 1..3, each G x G row-major, as float32 (re, im) pairs.
/// All little-endian.
inline void export_field_bin(const PositionField& f, const std::string& path) {
  auto out = detail::open_out(path, true);
  detail::put<std::uint32_t>(out, static_cast<std::uint32_t>(f.grid()));
  detail::put<std::uint32_t>(out, static_cast<std::uint32_t>(f.boundary()));
  detail::put<double>(out, f.time());
  for (int c = 1; c <= 3; ++c)
    for (const auto& v : f.channel(c)) {
      detail::put<float>(out, static_cast<float>(v.real()));
      detail::put<float>(out, static_cast<float>(v.imag()));
    }
  detail::finish(out, path);
}

/// The header carries no trap wavenumber or mode phase; pass them in.
inline PositionField import_field_bin(const std::string& path, double trap_wavenumber = 1.0,
                                      double phi = 0.0) {
  auto in = detail::open_in(path, true);
  const auto g = detail::get<std::uint32_t>(in, path);
  const auto tag = detail::get<std::uint32_t>(in, path);
  if (tag > 1 || g < 4 || g > 65536) throw Error(ErrorCode::IoFailure, "bad field header in '" + path + "'");
  const double tau = detail::get<double>(in, path);
  PositionField f(static_cast<Boundary>(tag), g, trap_wavenumber, phi, tau);
  for (int c = 1; c <= 3; ++c)
    for (auto& v : f.channel(c)) {
      const float re = detail::get<float>(in, path);
      const float im = detail::get<float>(in, path);
      v = {re, im};
    }
  return f;
}

inline std::string field_csv(const PositionField& f) {
  if (f.grid() > field_csv_max_grid)
    throw Error(ErrorCode::InvalidArgument, "CSV field export is limited to G <= 256; use bin");
  std::ostringstream out;
  out << "# grid=" << f.grid() << "\n# boundary=" << (f.boundary() == Boundary::Periodic ? "periodic" : "dirichlet")
      << "\n# tau=" << format_double(f.time()) << "\n# phi=" << format_double(f.phi()) << "\n";
  out << "i,j,xi1,xi2,re1,im1,re2,im2,re3,im3\n";
  for (std::size_t i = 0; i < f.grid(); ++i)
    for (std::size_t j = 0; j < f.grid(); ++j) {
      out << i << ',' << j << ',' << format_double(f.coordinate(i)) << ',' << format_double(f.coordinate(j));
      for (int c = 1; c <= 3; ++c)
        out << ',' << format_double(f(c, i, j).real()) << ',' << format_double(f(c, i, j).imag());
      out << '\n';
    }
  return out.str();
}

inline void export_field(const PositionField& f, const std::string& path, Format fmt) {
  if (fmt == Format::Bin) return export_field_bin(f, path);
  if (fmt == Format::Csv) return detail::write_text(path, field_csv(f));
  throw Error(ErrorCode::InvalidArgument, "field export supports bin and csv");
}

}  // namespace darkcav
