#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "darkcav/fit.hpp"
#include "darkcav/observables.hpp"
#include "darkcav/rhs.hpp"

using namespace darkcav;

namespace {

TwoAtomState random_two_atom(int window, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> g;
  TwoAtomState s(window);
  for (auto& a : s.amps()) a = {g(rng), g(rng)};
  const double n = std::sqrt(s.norm2());
  for (auto& a : s.amps()) a /= n;
  return s;
}

OneAtomState random_one_atom(int window, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> g;
  OneAtomState s(window);
  for (auto& a : s.amps()) a = {g(rng), g(rng)};
  const double n = std::sqrt(s.norm2());
  for (auto& a : s.amps()) a /= n;
  return s;
}

template <class S>
double norm2_rate(const S& s, const S& ds) {
  double r = 0;
  for (std::size_t k = 0; k < s.storage().size(); ++k)
    r += 2.0 * std::real(std::conj(s.storage()[k]) * ds.storage()[k]);
  return r;
}

}  // namespace

TEST(Params, AcceptsFigureValues) {
  EXPECT_NO_THROW(make_params(50, 20, 0, 0, 0, 0));
  EXPECT_NO_THROW(make_params(50, 0, 0, 0, 0, 0));
}

TEST(Params, RejectsOutOfRange) {
  auto code = [](auto f) {
    try {
      f();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::ConfigError;
  };
  EXPECT_EQ(code([] { make_params(-1, 0); }), ErrorCode::NonPositiveCoupling);
  EXPECT_EQ(code([] { make_params(0, 0); }), ErrorCode::NonPositiveCoupling);
  EXPECT_EQ(code([] { make_params(1, -0.1); }), ErrorCode::NegativeDamping);
  EXPECT_EQ(code([] { make_params(1, 0, 0, 1.0); }), ErrorCode::QuasiMomentumRange);
  EXPECT_EQ(code([] { make_params(1, 0, 0, 0, -0.2); }), ErrorCode::QuasiMomentumRange);
}

TEST(Parity, Examples) {
  EXPECT_EQ(parity_class({Channel::ExcGnd, 0, 0}), ParityClass::A);
  EXPECT_EQ(parity_class({Channel::GndExc, 1, 1}), ParityClass::A);
  EXPECT_EQ(parity_class({Channel::ExcGnd, 1, 0}), ParityClass::B);
  EXPECT_EQ(parity_class({Channel::Photon, 1, 0}), ParityClass::A);
  EXPECT_EQ(parity_class({Channel::Photon, 0, 1}), ParityClass::B);
  EXPECT_EQ(parity_class({Channel::GndExc, -3, 5}), ParityClass::A);
}

TEST(Parity, StencilNeverJoinsClasses) {
  const int w = 4;
  const auto p = make_params(1.3, 0.7, 0.2, 0.1, 0.4);
  TwoAtomState unit(w);
  for_each_index(unit, [&](const LatticeIndex& idx) {
    TwoAtomState e(w);
    e(idx.channel, idx.m, idx.n) = 1.0;
    const auto d = rhs_two_atom(e, p, ModelFlag::full());
    for_each_index(d, [&](const LatticeIndex& j) {
      if (d(j.channel, j.m, j.n) != cplx{}) {
        EXPECT_EQ(parity_class(idx), parity_class(j));
      }
    });
  });
}

TEST(State, DeltaInitial) {
  const auto s = delta_initial_state(16);
  EXPECT_EQ(s(Channel::ExcGnd, 0, 0), cplx(1.0));
  EXPECT_DOUBLE_EQ(s.norm2(), 1.0);
  EXPECT_EQ(s.time(), 0.0);
  EXPECT_EQ(parity_class({Channel::ExcGnd, 0, 0}), ParityClass::A);
  EXPECT_THROW(delta_initial_state(1), Error);
}

TEST(Rhs, DeltaStateFeedsPhotonNeighbours) {
  const auto s = delta_initial_state(16);
  const auto d = rhs_two_atom(s, make_params(50, 0), ModelFlag::raman_nath());
  int nonzero = 0;
  for_each_index(d, [&](const LatticeIndex& i) {
    if (d(i.channel, i.m, i.n) != cplx{}) ++nonzero;
  });
  EXPECT_EQ(nonzero, 2);
  EXPECT_EQ(d(Channel::Photon, 1, 0), cplx(0, -50));
  EXPECT_EQ(d(Channel::Photon, -1, 0), cplx(0, -50));
}

TEST(Rhs, IndependentOfModePhase) {
  const auto s = random_two_atom(5, 7);
  const auto a = rhs_two_atom(s, make_params(3, 2, 1, 0.25, 0.5, 0.0), ModelFlag::full());
  const auto b = rhs_two_atom(s, make_params(3, 2, 1, 0.25, 0.5, 1.234), ModelFlag::full());
  EXPECT_TRUE(a == b);
}

TEST(Rhs, D1IsPureKineticPhase) {
  // D1 = (cos xi2, -cos xi1, 0): channel 1 at (0, +-1), channel 2 at (+-1, 0).
  TwoAtomState d1(4);
  d1(Channel::ExcGnd, 0, 1) = d1(Channel::ExcGnd, 0, -1) = 0.5;
  d1(Channel::GndExc, 1, 0) = d1(Channel::GndExc, -1, 0) = -0.5;
  for (double kappa : {0.0, 20.0, 100.0}) {
    const auto d = rhs_two_atom(d1, make_params(50, kappa), ModelFlag::full());
    for (std::size_t k = 0; k < d.storage().size(); ++k)
      EXPECT_NEAR(std::abs(d.storage()[k] - (-I) * d1.storage()[k]), 0.0, 1e-13);
  }
}

TEST(Rhs, TwoAtomNormRate) {
  const auto s = random_two_atom(6, 11);
  const auto p0 = make_params(7, 0, 0.3, 0.2, 0.6);
  EXPECT_NEAR(norm2_rate(s, rhs_two_atom(s, p0, ModelFlag::full())), 0.0, 1e-12);
  const auto p = make_params(7, 20, 0.3, 0.2, 0.6);
  double photon = 0;
  for (int m = -6; m <= 6; ++m)
    for (int n = -6; n <= 6; ++n) photon += std::norm(s(Channel::Photon, m, n));
  EXPECT_NEAR(norm2_rate(s, rhs_two_atom(s, p, ModelFlag::full())), -20 * photon, 1e-12);
}

TEST(Rhs, OneAtomExamples) {
  const auto s = one_atom_excited_state(8);
  const auto d = rhs_one_atom(s, make_params(50, 0), ModelFlag::full());
  for (int m = -8; m <= 8; ++m) {
    EXPECT_EQ(d(1, m), cplx{});
    EXPECT_EQ(d(2, m), (std::abs(m) == 1) ? cplx(0, -50) : cplx{});
  }
  const auto r = random_one_atom(8, 3);
  EXPECT_NEAR(norm2_rate(r, rhs_one_atom(r, make_params(50, 0), ModelFlag::full())), 0.0, 1e-12);
  double photon = 0;
  for (int m = -8; m <= 8; ++m) photon += std::norm(r(2, m));
  EXPECT_NEAR(norm2_rate(r, rhs_one_atom(r, make_params(50, 20), ModelFlag::full())), -20 * photon,
              1e-12);
}

TEST(Observables, OneAtomDistribution) {
  OneAtomState s(4);
  s(1, 0) = 1.0;
  auto p = momentum_distribution_one(s);
  EXPECT_DOUBLE_EQ(p[4], 1.0);
  EXPECT_DOUBLE_EQ(std::accumulate(p.begin(), p.end(), 0.0), 1.0);

  OneAtomState h(4);
  h(1, 0) = h(2, 1) = 1.0 / std::sqrt(2.0);
  p = momentum_distribution_one(h);
  EXPECT_NEAR(p[4], 0.5, 1e-15);
  EXPECT_NEAR(p[5], 0.5, 1e-15);
  EXPECT_NEAR(momentum_width(p), 0.5, 1e-15);
}

TEST(Observables, FirstAtomDistributionSumsToSurvival) {
  const auto s = random_two_atom(5, 5);
  const auto p = momentum_distribution_first_atom(s);
  EXPECT_NEAR(std::accumulate(p.begin(), p.end(), 0.0), survival_probability(s), 1e-14);
  const auto d = momentum_distribution_first_atom(delta_initial_state(5));
  EXPECT_DOUBLE_EQ(d[5], 1.0);
  EXPECT_DOUBLE_EQ(survival_probability(delta_initial_state(5)), 1.0);
}

TEST(Fit, LinearAndDecay) {
  std::vector<double> x, y, e;
  for (int i = 0; i <= 20; ++i) {
    x.push_back(0.1 * i);
    y.push_back(3.0 * x.back() - 1.0);
    e.push_back(0.7 * std::exp(-0.25 * x.back()));
  }
  const auto f = linear_fit(x, y);
  EXPECT_NEAR(f.slope, 3.0, 1e-12);
  EXPECT_NEAR(f.intercept, -1.0, 1e-12);
  EXPECT_NEAR(f.r2, 1.0, 1e-12);
  EXPECT_NEAR(fit_decay_rate(x, e, 1.0, 2.0), 0.25, 1e-12);
}

TEST(Fit, PlateauDetection) {
  std::vector<double> t, p;
  for (int i = 0; i <= 200; ++i) {
    t.push_back(0.01 * i);
    p.push_back(0.5 + 0.5 * std::exp(-20 * t.back()));
  }
  const auto pl = detect_plateau(t, p);
  ASSERT_TRUE(pl.has_value());
  EXPECT_LT(pl->onset, 1.0);
  EXPECT_GT(pl->onset, 0.4);
  EXPECT_NEAR(pl->value, 0.5, 1e-8);

  std::vector<double> ramp(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) ramp[i] = 0.01 * t[i];
  EXPECT_FALSE(detect_plateau(t, ramp).has_value());
}
