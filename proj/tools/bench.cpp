// Serial reference vs OpenMP drivers: full-system force loop and batched criterion reports.
//
//   curvebody_bench [bodies] [configs] [repeats]

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <numbers>
#include <random>
#include <vector>

#include "curvebody/diagnostics.hpp"
#include "curvebody/dynamics.hpp"
#include "curvebody/model.hpp"
#include "curvebody/parallel.hpp"

using namespace curvebody;
using Clock = std::chrono::steady_clock;

namespace {

template <typename F>
double time_ms(int repeats, F&& f) {
  const auto t0 = Clock::now();
  for (int r = 0; r < repeats; ++r) f();
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count() / repeats;
}

}  // namespace

int main(int argc, char** argv) {
  const int bodies = argc > 1 ? std::atoi(argv[1]) : 2000;
  const int n_configs = argc > 2 ? std::atoi(argv[2]) : 4000;
  const int repeats = argc > 3 ? std::atoi(argv[3]) : 5;

  std::cout << "threads: " << parallel::thread_limit() << "\n";

  // A pulsating ring of bodies on the sphere.
  const PolygonConfig ring = regular_polygon(bodies, 0.0, std::vector<double>(bodies, 1.0),
                                             CurvatureSign::positive(), 3);
  const auto state = embed(synthesize_initial(ring, 0.7, 0.05, 0.9), ring);
  const auto y = pack_full(state);
  std::vector<double> serial(y.size()), threaded(y.size());

  const double t_serial = time_ms(repeats, [&] {
    full_rhs_flat(y, state.masses, state.sigma, 3, serial);
  });
  const double t_parallel = time_ms(repeats, [&] {
    parallel::full_rhs_flat(y, state.masses, state.sigma, 3, threaded);
  });
  std::cout << "full_rhs n=" << bodies << ": serial " << t_serial << " ms, parallel "
            << t_parallel << " ms, speedup " << t_serial / t_parallel
            << (serial == threaded ? ", bit-identical" : ", MISMATCH") << "\n";

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> mass(0.5, 2.0);
  std::vector<PolygonConfig> configs;
  while (static_cast<int>(configs.size()) < n_configs) {
    const int n = 3 + static_cast<int>(configs.size() % 6);
    std::vector<double> beta(n), m(n);
    for (int i = 0; i < n; ++i) {
      beta[i] = angle(rng);
      m[i] = mass(rng);
    }
    try {
      configs.emplace_back(m, beta, CurvatureSign::positive(), 3);
    } catch (const std::exception&) {
    }
  }
  const auto grid = default_rho_grid(CurvatureSign::positive());
  std::vector<CriterionReport> a, b;
  const double c_serial = time_ms(repeats, [&] {
    a = parallel::criterion_reports_serial(configs, grid, 1e-10, 1e-10);
  });
  const double c_parallel = time_ms(repeats, [&] {
    b = parallel::criterion_reports(configs, grid, 1e-10, 1e-10);
  });
  bool same = a.size() == b.size();
  for (std::size_t i = 0; same && i < a.size(); ++i) {
    same = a[i].admissible == b[i].admissible && a[i].max_c() == b[i].max_c() &&
           a[i].max_b_spread_rel() == b[i].max_b_spread_rel();
  }
  std::cout << "criterion_reports x" << n_configs << ": serial " << c_serial
            << " ms, parallel " << c_parallel << " ms, speedup " << c_serial / c_parallel
            << (same ? ", identical" : ", MISMATCH") << "\n";
  return same && serial == threaded ? 0 : 1;
}
