#include "hardykpz/kernel.hpp"

#include "hardykpz/errors.hpp"
#include "hardykpz/quadrature.hpp"
#include "hardykpz/specfun.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>

namespace hk {

namespace {

auto build_rule(int n) -> GaussRule
{
  GaussRule rule;
  rule.x.resize(n);
  rule.w.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double const p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1);
      double const dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) { break; }
    }
    rule.x[n - 1 - i] = x;
    rule.w[n - 1 - i] = 2 / ((1 - x * x) * dp * dp);
  }
  return rule;
}

constexpr int max_cached_rule = 64;

} // namespace

auto gauss_legendre(int n) -> GaussRule const &
{
  if (n < 1) { throw ConfigError("Gauss-Legendre order must be positive"); }
  static std::vector<GaussRule> const rules = [] {
    std::vector<GaussRule> v(max_cached_rule + 1);
    for (int k = 1; k <= max_cached_rule; ++k) { v[k] = build_rule(k); }
    return v;
  }();
  if (n <= max_cached_rule) { return rules[n]; }
  static std::mutex               mtx;
  static std::map<int, GaussRule> extra;
  std::lock_guard<std::mutex> lock(mtx);
  if (auto it = extra.find(n); it != extra.end()) { return it->second; }
  return extra.emplace(n, build_rule(n)).first->second;
}

RadialKernel::RadialKernel(int N, double s, int angular_order)
  : N_(N), s_(s), order_(angular_order)
{
  if (N < 2) { throw DomainError("kernel needs N >= 2"); }
  if (!(s > 0 && s < 1)) { throw DomainError("kernel needs 0 < s < 1"); }
  if (angular_order < 4) { throw ConfigError("angular quadrature order must be >= 4"); }
  q_ = (N + 2 * s) / 2;
  c_ = N / 2.0 - s;
  double const pi = std::numbers::pi;
  c0_ = std::exp(0.5 * (N - 1) * std::log(pi) + log_gamma(s + 0.5) - log_gamma(q_));
  sphere_lo_ = 2 * std::exp(0.5 * (N - 1) * std::log(pi) - log_gamma(0.5 * (N - 1)));
  sphere_ = 2 * std::exp(0.5 * N * std::log(pi) - log_gamma(0.5 * N));

  // 2F1(q, s+1; N/2; x^2) coefficients
  series_.resize(80);
  series_[0] = 1.0;
  for (std::size_t k = 1; k < series_.size(); ++k) {
    double const km = static_cast<double>(k - 1);
    series_[k] = series_[k - 1] * (q_ + km) * (s + 1 + km) / ((0.5 * N + km) * (km + 1));
  }

  H_.resize(table_cells + 1);
  H_[0] = c0_;
  double const h = table_end / table_cells;
  for (int j = 1; j <= table_cells; ++j) {
    double const tau = j * h;
    double const sig = std::pow(2 * std::sinh(tau / 2), 1 + 2 * s);
    double const a = J_angular(tau, order_) * sig;
    double const b = J_angular(tau, order_ + 10) * sig;
    quad_err_ = std::max(quad_err_, std::abs(a - b) / std::abs(b));
    H_[j] = b;
  }
  if (quad_err_ > 1e-8) {
    throw AssemblyError("angular quadrature did not converge: estimated error " + std::to_string(quad_err_));
  }
}

auto RadialKernel::J_angular(double tau, int order) const -> double
{
  tau = std::abs(tau);
  double const pi = std::numbers::pi;
  double const sig = 2 * std::sinh(tau / 2);
  double const sig2 = sig * sig;
  auto f = [&](double phi) {
    double const sh = std::sin(phi / 2);
    double v = std::pow(sig2 + 4 * sh * sh, -q_);
    if (N_ > 2) { v *= std::pow(std::sin(phi), N_ - 2); }
    return v;
  };
  double acc = 0.0;
  double a = 0.0;
  double b = std::min(sig, pi);
  while (true) {
    acc += gl_integrate(f, a, b, order);
    if (b >= pi) { break; }
    a = b;
    b = std::min(2 * b, pi);
  }
  return sphere_lo_ * acc;
}

auto RadialKernel::J_series(double tau) const -> double
{
  tau = std::abs(tau);
  double const x2 = std::exp(-2 * tau);
  double sum = 0.0;
  double pw = 1.0;
  for (double ck : series_) {
    double const term = ck * pw;
    sum += term;
    if (term < 1e-18 * sum) { break; }
    pw *= x2;
  }
  return sphere_ * std::exp(-q_ * tau) * sum;
}

auto RadialKernel::H(double tau) const -> double
{
  tau = std::abs(tau);
  if (tau > table_end) { return J_series(tau) * std::pow(2 * std::sinh(tau / 2), 1 + 2 * s_); }
  double const h = table_end / table_cells;
  double const x = tau / h;
  int j = static_cast<int>(x);
  // 4-point Lagrange on j-1..j+2, reflected through 0 and clipped at the table end
  int lo = std::min(j - 1, table_cells - 3);
  double acc = 0.0;
  for (int a = 0; a < 4; ++a) {
    double l = 1.0;
    for (int b = 0; b < 4; ++b) {
      if (a != b) { l *= (x - (lo + b)) / static_cast<double>(a - b); }
    }
    acc += l * H_[std::abs(lo + a)];
  }
  return acc;
}

auto RadialKernel::J(double tau) const -> double
{
  tau = std::abs(tau);
  if (tau > table_end) { return J_series(tau); }
  return H(tau) * std::pow(2 * std::sinh(tau / 2), -1 - 2 * s_);
}

auto RadialKernel::k(double tau) const -> double { return std::exp(c_ * tau) * J(tau); }

auto RadialKernel::tail_integral(double T, double theta) const -> double
{
  if (T < table_end) { throw UsageError("tail_integral needs T >= 1"); }
  double sum = 0.0;
  double const x2 = std::exp(-2 * T);
  double pw = 1.0;
  for (std::size_t k = 0; k < series_.size(); ++k) {
    double const e = 2 * s_ + theta + 2.0 * static_cast<double>(k);
    double const term = series_[k] * pw / e;
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) { break; }
    pw *= x2;
  }
  return sphere_ * std::exp(-(2 * s_ + theta) * T) * sum;
}

auto RadialKernel::exterior_integral(double T, double theta) const -> double
{
  if (!(T > 0.0)) { throw UsageError("exterior_integral needs T > 0"); }
  if (T >= table_end) { return tail_integral(T, theta); }
  auto   f = [&](double tau) { return std::exp(-theta * tau) * k(tau); };
  double acc = 0.0;
  double a = T;
  double w = T;
  while (a < table_end) {
    double const b = std::min(a + w, table_end);
    acc += gl_integrate(f, a, b, 20);
    a = b;
    w *= 2;
  }
  return acc + tail_integral(table_end, theta);
}

auto shared_kernel(int N, double s, int angular_order) -> std::shared_ptr<RadialKernel const>
{
  static std::mutex mtx;
  static std::map<std::tuple<int, double, int>, std::shared_ptr<RadialKernel const>> cache;
  std::lock_guard<std::mutex> lock(mtx);
  auto key = std::make_tuple(N, s, angular_order);
  if (auto it = cache.find(key); it != cache.end()) { return it->second; }
  auto ker = std::make_shared<RadialKernel const>(N, s, angular_order);
  cache.emplace(key, ker);
  return ker;
}

} // namespace hk
