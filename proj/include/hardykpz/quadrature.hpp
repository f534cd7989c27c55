#pragma once

#include <Eigen/Dense>

#include <type_traits>

namespace hk {

struct GaussRule
{
  Eigen::VectorXd x; // nodes on [-1, 1]
  Eigen::VectorXd w;
};

// Cached per order; safe to call from several threads.
auto gauss_legendre(int n) -> GaussRule const &;

// Integrate f over [a, b] with an n-point rule. f may return a scalar or an Eigen vector.
template <typename F> auto gl_integrate(F &&f, double a, double b, int n = 20)
{
  auto const &rule = gauss_legendre(n);
  double const h = 0.5 * (b - a);
  double const m = 0.5 * (a + b);
  using R = std::decay_t<decltype(f(a))>;
  R acc = (rule.w[0] * h) * f(m + h * rule.x[0]);
  for (int k = 1; k < n; ++k) {
    acc += (rule.w[k] * h) * f(m + h * rule.x[k]);
  }
  return acc;
}

} // namespace hk
