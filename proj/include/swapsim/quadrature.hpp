#pragma once

#include <cmath>
#include <stdexcept>

namespace swapsim {

struct QuadratureConfig {
  double abs_tol = 1e-9;
  int initial_panels = 8;
  int max_doublings = 14;
};

/// Composite Simpson rule with `panels` panels (2*panels + 1 evaluations).
template <class F>
double composite_simpson(F&& f, double a, double b, int panels) {
  if (panels < 1) throw std::invalid_argument("composite_simpson: panels < 1");
  const double h = (b - a) / (2.0 * panels);
  double odd = 0.0;
  double even = 0.0;
  for (int i = 1; i < 2 * panels; i += 2) odd += f(a + i * h);
  for (int i = 2; i < 2 * panels; i += 2) even += f(a + i * h);
  return (f(a) + f(b) + 4.0 * odd + 2.0 * even) * (h / 3.0);
}

/// Doubles the panel count until two successive composite estimates agree
/// within cfg.abs_tol. Deterministic; throws if agreement is never reached,
/// which for the smooth integrands here means a bug, not a hard integral.
template <class F>
double integrate(F&& f, double a, double b, const QuadratureConfig& cfg = {}) {
  if (!(cfg.abs_tol > 0.0)) {
    throw std::invalid_argument("integrate: abs_tol must be positive");
  }
  if (a == b) return 0.0;
  int panels = cfg.initial_panels;
  double previous = composite_simpson(f, a, b, panels);
  for (int step = 0; step < cfg.max_doublings; ++step) {
    panels *= 2;
    const double refined = composite_simpson(f, a, b, panels);
    if (std::abs(refined - previous) < cfg.abs_tol) return refined;
    previous = refined;
  }
  throw std::runtime_error("integrate: did not converge to abs_tol");
}

/// Iterated 2-D integral over x in [x_lo, x_hi], y in [y_lo(x), y_hi(x)].
/// The inner integral runs at a tenth of the outer tolerance.
template <class F, class LoFn, class HiFn>
double integrate_2d(F&& f, double x_lo, double x_hi, LoFn&& y_lo, HiFn&& y_hi,
                    const QuadratureConfig& cfg = {}) {
  QuadratureConfig inner_cfg = cfg;
  inner_cfg.abs_tol = cfg.abs_tol * 0.1;
  return integrate(
      [&](double x) {
        return integrate([&, x](double y) { return f(x, y); }, y_lo(x),
                         y_hi(x), inner_cfg);
      },
      x_lo, x_hi, cfg);
}

}  // namespace swapsim
