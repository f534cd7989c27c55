#pragma once

#include <memory>
#include <vector>

namespace hk {

// Angular average of |x-y|^{-(N+2s)} for radial functions, written in t = ln r.
// For rho = r e^tau the P.V. integral becomes
//   int (u(r) - u(r e^tau)) k(tau) dtau,  k(tau) = e^{(N/2-s)tau} J(|tau|),
// up to the factor r^{-2s} and the operator constant.
class RadialKernel
{
public:
  RadialKernel(int N, double s, int angular_order = 20);

  auto N() const -> int { return N_; }
  auto s() const -> double { return s_; }
  auto angular_order() const -> int { return order_; }
  auto quadrature_error() const -> double { return quad_err_; }

  auto J(double tau) const -> double;
  auto k(double tau) const -> double;
  // J(tau) (2 sinh(|tau|/2))^{1+2s}; bounded, equal to c0 at tau = 0
  auto H(double tau) const -> double;

  // int_T^inf e^{-theta tau} k(tau) dtau for T >= 1, from the x^2 series of J.
  auto tail_integral(double T, double theta = 0.0) const -> double;
  // int_T^inf e^{-theta tau} k(tau) dtau for any T > 0
  auto exterior_integral(double T, double theta = 0.0) const -> double;

  // Reference evaluations, no table.
  auto J_angular(double tau, int order) const -> double;
  auto J_series(double tau) const -> double;

  static constexpr double table_end = 1.0;
  static constexpr int    table_cells = 4096;

private:
  int                 N_;
  double              s_;
  int                 order_;
  double              q_;
  double              c_;
  double              c0_;
  double              sphere_lo_; // |S^{N-2}|
  double              sphere_;    // |S^{N-1}|
  double              quad_err_ = 0.0;
  std::vector<double> H_;
  std::vector<double> series_;
};

// Shared, immutable kernels keyed on (N, s, order).
auto shared_kernel(int N, double s, int angular_order = 20) -> std::shared_ptr<RadialKernel const>;

} // namespace hk
