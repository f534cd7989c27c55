#pragma once

#include "errors.hpp"

namespace hk {

auto log_gamma(double x) -> double;

// log|Γ(x)| and sign of Γ(x) for any x that is not a non-positive integer.
struct SignedLogGamma
{
  double log_abs;
  int    sign;
};
auto log_gamma_signed(double x) -> SignedLogGamma;

auto hardy_constant(int N, double s) -> double;
auto lambda_of_alpha(double alpha, int N, double s) -> double;
auto gamma_multiplier(double beta, int N, double s) -> double;
auto alpha_of_lambda(double lambda, int N, double s) -> double;
auto normalizing_constant(int N, double s) -> double;

struct ProblemParams
{
  int    N      = 3;
  double s      = 0.75;
  double lambda = 0.0;
  double p      = 1.2;
  double mu     = 0.0;

  void validate() const; // throws DomainError naming the violated constraint
};

struct ExponentReport
{
  int    N = 0;
  double s = 0;
  double lambda = 0;
  double Lambda_Ns = 0;
  double a_Ns = 0;
  double alpha_lambda = 0;
  double mu_lambda = 0;
  double mubar_lambda = 0;
  double p_minus = 0;
  double p_plus = 0;
  double p_star = 0;

  auto p_mid() const -> double { return (N + 2 * s) / (N - 2 * s + 2); }
  auto chain_holds() const -> bool;
};

// Accepts the boundary value lambda = Λ (alpha = 0).
auto exponent_report(int N, double s, double lambda) -> ExponentReport;
auto critical_exponents(ProblemParams const &params) -> ExponentReport;

} // namespace hk
