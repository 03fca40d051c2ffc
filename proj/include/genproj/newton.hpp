#pragma once

#include <cstdint>
#include <utility>

#include "genproj/errors.hpp"
#include "genproj/linalg.hpp"
#include "genproj/matrix.hpp"

namespace genproj {

struct NewtonConfig {
  int max_iters = 50;
  double tol = 1e-12;        // residual norm accepted as converged
  int max_halvings = 20;     // step halvings before a start is abandoned
  int polish_steps = 2;      // extra full steps after convergence, kept only if they help
  // Multi-start parameters.
  int starts = 64;
  double box = 4.0;          // half-width of the complex start box
  double dedup_radius = 1e-5;
  std::uint64_t seed = 1;
  // Chart evaluation; 0 means "use the radius estimated at construction".
  double trust_radius = 0.0;
};

struct NewtonResult {
  CVec x;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Damped Newton. `system(x)` returns the pair (g(x), Dg(x)). The step is
/// halved while the residual norm does not decrease; after max_halvings the
/// start is abandoned.
template <class System>
NewtonResult newton_solve(System&& system, CVec x0, const NewtonConfig& cfg) {
  NewtonResult out;
  out.x = std::move(x0);
  auto [g, jac] = system(out.x);
  out.residual = norm2(g);
  int polish_left = cfg.polish_steps;
  for (int it = 0; it < cfg.max_iters; ++it) {
    if (out.residual <= cfg.tol) {
      out.converged = true;
      if (polish_left-- <= 0 || out.residual == 0.0) break;
    }
    CVec step;
    try {
      step = solve(jac, -1.0 * g);
    } catch (const SingularMatrix&) {
      break;
    }
    double t = 1.0;
    bool accepted = false;
    for (int h = 0; h <= cfg.max_halvings; ++h, t *= 0.5) {
      CVec trial = out.x + t * step;
      auto [g2, j2] = system(trial);
      double r2 = norm2(g2);
      if (r2 < out.residual) {
        out.x = std::move(trial);
        g = std::move(g2);
        jac = std::move(j2);
        out.residual = r2;
        accepted = true;
        break;
      }
      if (out.converged) break;  // polishing only takes full steps
    }
    ++out.iterations;
    if (!accepted) break;
  }
  out.converged = out.residual <= cfg.tol;
  return out;
}

}  // namespace genproj
