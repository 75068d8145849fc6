// Library usage example: two atoms, one excited, in a lossy cavity (RNA).
// Prints the survival probability and the central-mode population over time,
// then compares the plateau with the dark-amplitude table.

#include <cstdio>

#include "darkcav/darkcav.hpp"

int main() {
  using namespace darkcav;
  const auto params = make_params(/*omega=*/50, /*kappa=*/20);
  const auto traj = propagate(delta_initial_state(16), params, ModelFlag::raman_nath(), 2.0, 11);

  std::printf("%6s %12s %12s\n", "tau", "P", "|C_100|^2");
  for (std::size_t i = 0; i < traj.times.size(); ++i)
    std::printf("%6.2f %12.8f %12.8f\n", traj.times[i], survival_probability(traj.states[i]),
                std::norm(traj.states[i](Channel::ExcGnd, 0, 0)));

  const auto table = dark_amplitudes(16);
  std::printf("dark table: c_100 = %.12f, population within |m|+|n|<=2 = %.6f\n", table(1, 0, 0).real(),
              table.population_within(2));
  if (traj.stats.truncation_warning)
    std::printf("note: %.2g of the population reached the window edge\n", traj.stats.max_boundary_population);
}
