// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "darkcav/darkcav.hpp"

using namespace darkcav;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void check(bool ok, const char* fmt, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, fmt);
    std::vsnprintf(buf, sizeof buf, fmt, ap);
    va_end(ap);
    if (!detail.empty()) detail += "; ";
    detail += buf;
    if (!ok) {
      detail += " [fail]";
      pass = false;
    }
  }
};

int failures = 0;

void criterion(int id, const char* name, double time_limit, const std::function<void(Outcome&)>& body) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.check(false, "exception: %s", e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (time_limit > 0) o.check(secs < time_limit, "runtime %.2f s < %.0f s", secs, time_limit);
  std::printf("CRITERION %d %s: %s -- %s\n", id, o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
  std::fflush(stdout);
  if (!o.pass) ++failures;
}

double first_atom_width(const OneAtomState& s) { return momentum_width(momentum_distribution_one(s)); }

double max_amp_diff(const TwoAtomState& a, const TwoAtomState& b) {
  double w = 0;
  for (std::size_t k = 0; k < a.storage().size(); ++k) w = std::max(w, std::abs(a.storage()[k] - b.storage()[k]));
  return w;
}

double one_atom_rate(double omega, double kappa, double t1, std::size_t samples) {
  const auto tr = propagate(one_atom_excited_state(64), make_params(omega, kappa), ModelFlag::full(), t1, samples,
                            {.tol = 1e-10});
  return fit_decay_rate(tr.times, tr.survival(), 0.0, t1);
}

}  // namespace

int main() {
  std::printf("darkcav %s acceptance\n", std::string(software_version).c_str());

  criterion(1, "dark-amplitude table", 1.0, [](Outcome& o) {
    const auto t = dark_amplitudes(16);
    const double c2 = 1 / pi - 0.5, c1s = 0.5 - 2 / pi;
    double rec = std::abs(t(1, 0, 0) - 0.5), quad = 0;
    const std::size_t gq = 1024;
    quad = std::abs(quadrature_c(1, 0, 0, gq) - 0.5);
    for (int a : {-1, 1})
      for (int b : {-1, 1}) {
        rec = std::max(rec, std::abs(t(2, a, b) - c2));
        quad = std::max(quad, std::abs(quadrature_c(2, a, b, gq) - c2));
      }
    for (int s : {-2, 2}) {
      rec = std::max({rec, std::abs(t(1, s, 0) - c1s), std::abs(t(1, 0, s) + c1s)});
      quad = std::max({quad, std::abs(quadrature_c(1, s, 0, gq) - c1s), std::abs(quadrature_c(1, 0, s, gq) + c1s)});
    }
    o.check(rec < 1e-10, "recurrence max error %.2e < 1e-10", rec);
    o.check(quad < 1e-6, "quadrature (G=%zu) max error %.2e < 1e-6", gq, quad);
  });

  criterion(2, "trapped fraction (RNA, Omega=50, kappa'=20, M=16)", 30.0, [](Outcome& o) {
    const auto tr = propagate(delta_initial_state(16), make_params(50, 20), ModelFlag::raman_nath(), 2.0, 201);
    const auto p = tr.survival();
    const auto plateau = detect_plateau(tr.times, p);
    o.check(plateau.has_value() && plateau->onset <= 1.5, "plateau onset %.3g <= 1.5",
            plateau ? plateau->onset : -1.0);
    o.check(std::abs(p.back() - 0.5) <= 0.01, "P(2) = %.6f, |P - 0.5| <= 0.01", p.back());
    const double c100 = std::norm(tr.states.back()(Channel::ExcGnd, 0, 0));
    o.check(std::abs(c100 - 0.25) <= 0.01, "|C_100|^2 = %.6f, |. - 0.25| <= 0.01", c100);
    o.detail += tr.stats.truncation_warning ? "; boundary population flagged (" : "; boundary population (";
    o.detail += format_double(tr.stats.max_boundary_population) + ")";
  });

  criterion(3, "population localization", 0, [](Outcome& o) {
    const auto t = dark_amplitudes(32);
    const double p2 = t.population_within(2), p4 = t.population_within(4);
    o.check(std::abs(p2 - 0.913 * 0.5) <= 0.002, "|m|+|n|<=2: %.6f vs %.6f +- 0.002", p2, 0.913 * 0.5);
    o.check(std::abs(p4 - 0.963 * 0.5) <= 0.002, "|m|+|n|<=4: %.6f vs %.6f +- 0.002", p4, 0.963 * 0.5);
  });

  criterion(4, "exact dark states", 0, [](Outcome& o) {
    for (double kappa : {20.0, 100.0}) {
      const auto p = make_params(50, kappa);
      const auto states = exact_dark_states_periodic(p, 4);
      for (std::size_t k = 0; k < states.size(); ++k) {
        const auto& d = states[k];
        const auto tr = propagate(d.lattice, p, ModelFlag::full(), 2.0, 2, {.tol = 1e-10});
        const auto& end = tr.states.back();
        TwoAtomState want = d.lattice;
        for (auto& a : want.amps()) a *= std::exp(-I * d.kinetic_energy * 2.0);
        const double dn = std::abs(end.norm2() - 1.0), da = max_amp_diff(end, want);
        o.check(dn <= 1e-6 && da <= 1e-5, "D%zu kappa'=%g: |norm-1| %.1e, amp %.1e", k + 1, kappa, dn, da);
      }
    }
    const auto trap = exact_dark_state_trap(3, 0).field(31);
    const auto kept = grid_evolve(trap, make_params(50, 20), 1e-3, 2000);
    o.check(std::abs(kept.norm2() - 1.0) <= 1e-6, "trap N=3 phi=0: |norm-1| %.1e", std::abs(kept.norm2() - 1.0));
    const auto lost = grid_evolve(trap, make_params(50, 20, 0, 0, 0, 0.3), 1e-3, 2000);
    o.check(1.0 - lost.norm2() > 1e-3, "phi=0.3: loss %.3g > 1e-3", 1.0 - lost.norm2());
  });

  criterion(5, "one-atom contrasts", 0, [](Outcome& o) {
    {
      const auto tr = propagate(one_atom_excited_state(64), make_params(50, 0), ModelFlag::raman_nath(), 0.2, 41);
      std::vector<double> w;
      for (const auto& s : tr.states) w.push_back(first_atom_width(s));
      const auto fit = linear_fit(tr.times, w, 0.0, 0.2);
      o.check(fit.r2 > 0.99, "(i) RNA width R^2 %.6f > 0.99", fit.r2);
    }
    {
      const auto tr = propagate(one_atom_excited_state(64), make_params(50, 0), ModelFlag::full(), 1.0, 401);
      std::vector<double> w;
      for (const auto& s : tr.states) w.push_back(first_atom_width(s));
      const auto peak = first_local_maximum(w);
      o.check(peak && w.back() < 1.2 * w[*peak], "(ii) full width(1) %.3f < 1.2 x first max %.3f at tau %.3f",
              w.back(), peak ? w[*peak] : 0.0, peak ? tr.times[*peak] : 0.0);
    }
    {
      const double kappa = 20;
      const double t_end = 8 / kappa;
      const double rate = one_atom_rate(50, kappa, t_end, 81);
      const double timescale = 2 / rate, want = 4 / kappa;
      o.check(timescale / want < 1.5 && want / timescale < 1.5, "(iii) amplitude timescale %.4f vs 4/kappa' %.4f",
              timescale, want);
    }
    {
      const double r100 = one_atom_rate(50, 100, 0.1, 101), r500 = one_atom_rate(50, 500, 0.1, 101);
      o.check(r500 < r100, "(iv) rate kappa'=500 %.4g < kappa'=100 %.4g", r500, r100);
    }
  });

  criterion(6, "decay-rate ordering of |d_mn>", 0, [](Outcome& o) {
    const auto curves = figure4_configs();
    const double a = decay_run(curves[0].second).rate;  // d00, kappa'=20, Omega=100
    const double b = decay_run(curves[1].second).rate;  // d00, kappa'=100, Omega=50
    const double c = decay_run(curves[2].second).rate;  // d00, kappa'=20, Omega=25
    const double d = decay_run(curves[3].second).rate;  // d02, kappa'=20, Omega=50
    auto ref = curves[3].second;
    ref.dark_n = 0;
    const double d00 = decay_run(ref).rate;  // d00, kappa'=20, Omega=50
    o.check(a < c, "G(20,100) %.4g < G(20,25) %.4g", a, c);
    o.check(a < b, "G(20,100) %.4g < G(100,50) %.4g", a, b);
    o.check(d > d00, "G_02(20,50) %.4g > G_00(20,50) %.4g", d, d00);
  });

  criterion(7, "oracle equivalence", 60.0, [](Outcome& o) {
    const auto p = make_params(50, 20);
    {
      const double tau = 0.5, dtau = 1e-4;
      const auto lattice = propagate(delta_initial_state(24), p, ModelFlag::full(), tau, 2, {.tol = 1e-10});
      const auto field = grid_evolve(lattice_to_field(delta_initial_state(24), 64), p, dtau,
                                     static_cast<std::size_t>(tau / dtau + 0.5));
      const double diff = max_amp_diff(field_to_lattice(field, 24), lattice.states.back());
      o.check(diff < 1e-4, "full lattice vs split-step (M=24, G=64, dtau=1e-4): %.2e < 1e-4", diff);
    }
    {
      const double tau = 0.5;
      const int m = 80;
      const auto lattice = propagate(delta_initial_state(m), p, ModelFlag::raman_nath(), tau, 2, {.tol = 1e-11});
      const auto field = grid_evolve_rna(lattice_to_field(delta_initial_state(m), 256), p, tau);
      const double diff = max_amp_diff(field_to_lattice(field, m), lattice.states.back());
      o.check(diff < 1e-6, "RNA lattice vs pointwise propagator (M=80, G=256): %.2e < 1e-6", diff);
    }
  });

  criterion(8, "property suites", 0, [](Outcome& o) {
    std::mt19937 rng(2024);
    std::normal_distribution<double> nd;
    // norm conservation at kappa' = 0
    double drift = 0;
    const double tol = 1e-9, tau = 1.0;
    for (auto flag : {ModelFlag::raman_nath(), ModelFlag::full()}) {
      TwoAtomState s(8);
      for (auto& a : s.amps()) a = {nd(rng), nd(rng)};
      const double n0 = s.norm2();
      for (auto& a : s.amps()) a /= std::sqrt(n0);
      const auto tr = propagate(s, make_params(50, 0, 2, 0.1, 0.3), flag, tau, 11, {.tol = tol});
      for (const auto& st : tr.states) drift = std::max(drift, std::abs(st.norm2() - 1.0));
    }
    o.check(drift <= 10 * tol * tau, "norm drift %.1e <= %.0e", drift, 10 * tol * tau);
    // monotone loss and parity decoupling
    const auto tr = propagate(delta_initial_state(12), make_params(50, 20), ModelFlag::full(), 1.0, 101);
    const auto p = tr.survival();
    double rise = 0, leak = 0;
    for (std::size_t i = 1; i < p.size(); ++i) rise = std::max(rise, p[i] - p[i - 1]);
    for (const auto& st : tr.states) leak = std::max(leak, class_norm(st, ParityClass::B));
    o.check(rise <= 1e-12, "max survival increase %.1e", rise);
    o.check(leak < 1e-12, "parity leakage %.1e < 1e-12", leak);
    // relation residuals
    const auto t = dark_amplitudes(16);
    o.check(std::max(t.rel1_residual(), t.rel2_residual()) < 1e-10, "rel1 %.1e, rel2 %.1e < 1e-10",
            t.rel1_residual(), t.rel2_residual());
    // projector idempotence and eigenvalue sum rule
    std::uniform_real_distribution<double> x(0, 2 * pi), u(-1, 1), om(0.1, 200), ka(0, 500), de(-50, 50);
    double idem = 0, sum = 0;
    for (int k = 0; k < 1000; ++k) {
      const double x1 = x(rng), x2 = x(rng);
      const PointwiseTriple tr3{{u(rng), u(rng)}, {u(rng), u(rng)}, {u(rng), u(rng)}};
      const auto once = asymptotic_state(tr3, x1, x2);
      const auto twice = asymptotic_state(once, x1, x2);
      idem = std::max({idem, std::abs(twice.a1 - once.a1), std::abs(twice.a2 - once.a2), std::abs(twice.a3)});
      const auto prm = make_params(om(rng), ka(rng), de(rng));
      const auto e = rna_eigenvalues(x1, x2, prm);
      const cplx want(-0.5 * prm.kappa, -prm.delta);
      sum = std::max(sum, std::abs(e.lambda1 + e.lambda2 + e.lambda3 - want) / (1 + std::abs(want)));
    }
    o.check(idem < 1e-12, "projector idempotence %.1e", idem);
    o.check(sum < 1e-12, "eigenvalue sum rule at 1000 points %.1e", sum);
  });

  std::printf("%s: %d criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
