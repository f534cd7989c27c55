#include "hardykpz/specfun.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

namespace hk {

namespace {

constexpr double pi = std::numbers::pi;

// Godfrey's g = 607/128 coefficient set.
constexpr double lanczos_g = 607.0 / 128.0;
constexpr std::array<double, 15> lanczos_c{
  0.99999999999999709182,     57.156235665862923517,      -59.597960355475491248,
  14.136097974741747174,      -0.49191381609762019978,    .33994649984811888699e-4,
  .46523628927048575665e-4,   -.98374475304879564677e-4,  .15808870322491248884e-3,
  -.21026444172410488319e-3,  .21743961811521264320e-3,   -.16431810653676389022e-3,
  .84418223983852743293e-4,   -.26190838401581408670e-4,  .36899182659531622704e-5};

// zeta(2) ... zeta(31)
constexpr std::array<double, 30> zeta_k{
  1.6449340668482264365, 1.2020569031595942854, 1.0823232337111381915, 1.0369277551433699263,
  1.0173430619844491397, 1.0083492773819228268, 1.0040773561979443394, 1.0020083928260822144,
  1.0009945751278180853, 1.0004941886041194646, 1.0002460865533080483, 1.0001227133475784891,
  1.0000612481350587048, 1.0000305882363070205, 1.0000152822594086519, 1.0000076371976378998,
  1.0000038172932649998, 1.0000019082127165539, 1.0000009539620338728, 1.0000004769329867878,
  1.0000002384505027277, 1.0000001192199259653, 1.0000000596081890513, 1.0000000298035035147,
  1.0000000149015548284, 1.0000000074507117898, 1.0000000037253340248, 1.0000000018626597235,
  1.0000000009313274324, 1.0000000004656629065};

constexpr double euler_gamma = 0.57721566490153286061;

auto lanczos_log_gamma(double x) -> double
{
  double sum = lanczos_c[0];
  for (std::size_t i = 1; i < lanczos_c.size(); ++i) {
    sum += lanczos_c[i] / (x + static_cast<double>(i));
  }
  double const t = x + lanczos_g + 0.5;
  return (x + 0.5) * std::log(t) - t + std::log(std::sqrt(2 * pi) * sum / x);
}

// log Γ(1+e) for |e| small, keeps relative accuracy near the root at 1.
auto log_gamma_1p(double e) -> double
{
  double acc = 0.0;
  double pw = -e; // (-e)^k after the update below
  for (std::size_t k = 0; k < zeta_k.size(); ++k) {
    pw *= -e;
    acc += zeta_k[k] * pw / static_cast<double>(k + 2);
  }
  return -euler_gamma * e + acc;
}

void check_order(int N, double s)
{
  if (!(s > 0.0 && s < 1.0)) {
    throw DomainError("fractional order must satisfy 0 < s < 1, got s = " + std::to_string(s));
  }
  if (!(N > 2 * s)) {
    throw DomainError("dimension must satisfy N > 2s, got N = " + std::to_string(N) +
                      ", s = " + std::to_string(s));
  }
}

// 2^{2s} Γ((N+2s+2a)/4) Γ((N+2s-2a)/4) / [Γ((N-2s+2a)/4) Γ((N-2s-2a)/4)], a >= 0
auto gamma_ratio(double a, int N, double s) -> double
{
  double const lo = (N - 2 * s - 2 * a) / 4;
  if (!(lo > 0.0)) {
    throw DomainError("|alpha| must be < (N-2s)/2 so that every Gamma argument is positive");
  }
  double const l = 2 * s * std::numbers::ln2 + log_gamma((N + 2 * s + 2 * a) / 4) +
                   log_gamma((N + 2 * s - 2 * a) / 4) - log_gamma((N - 2 * s + 2 * a) / 4) -
                   log_gamma(lo);
  return std::exp(l);
}

} // namespace

auto log_gamma(double x) -> double
{
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError("log_gamma needs a positive finite argument");
  }
  if (std::abs(x - 1.0) < 0.2) { return log_gamma_1p(x - 1.0); }
  if (std::abs(x - 2.0) < 0.2) { return std::log1p(x - 2.0) + log_gamma_1p(x - 2.0); }
  if (x < 0.5) { return std::log(pi / std::sin(pi * x)) - lanczos_log_gamma(1.0 - x); }
  return lanczos_log_gamma(x);
}

auto log_gamma_signed(double x) -> SignedLogGamma
{
  if (x > 0.0) { return {log_gamma(x), 1}; }
  if (!std::isfinite(x) || x == std::floor(x)) {
    throw DomainError("Gamma has a pole at non-positive integers");
  }
  double const sn = std::sin(pi * x);
  return {std::log(pi / std::abs(sn)) - log_gamma(1.0 - x), sn > 0 ? 1 : -1};
}

auto hardy_constant(int N, double s) -> double
{
  check_order(N, s);
  return gamma_ratio(0.0, N, s);
}

auto lambda_of_alpha(double alpha, int N, double s) -> double
{
  check_order(N, s);
  return gamma_ratio(std::abs(alpha), N, s);
}

auto gamma_multiplier(double beta, int N, double s) -> double { return lambda_of_alpha(beta, N, s); }

auto alpha_of_lambda(double lambda, int N, double s) -> double
{
  check_order(N, s);
  double const Lambda = hardy_constant(N, s);
  if (!(lambda > 0.0)) { throw DomainError("lambda must be positive"); }
  if (lambda > Lambda * (1 + 1e-12)) {
    throw DomainError("lambda exceeds the Hardy constant " + std::to_string(Lambda));
  }
  if (lambda >= Lambda) { return 0.0; }
  double lo = 0.0;
  double hi = (N - 2 * s) / 2 * (1 - 1e-14);
  if (lambda <= gamma_ratio(hi, N, s)) { return hi; }
  while (true) {
    double const mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) { break; }
    if (gamma_ratio(mid, N, s) > lambda) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return std::abs(gamma_ratio(lo, N, s) - lambda) <= std::abs(gamma_ratio(hi, N, s) - lambda) ? lo : hi;
}

auto normalizing_constant(int N, double s) -> double
{
  if (!(s > 0.0 && s < 1.0)) { throw DomainError("normalizing constant needs 0 < s < 1"); }
  if (N < 1) { throw DomainError("dimension must be positive"); }
  auto const g = log_gamma_signed(-s);
  double const l = (2 * s - 1) * std::numbers::ln2 - 0.5 * N * std::log(pi) + log_gamma((N + 2 * s) / 2) - g.log_abs;
  return std::exp(l);
}

void ProblemParams::validate() const
{
  if (N < 2) { throw DomainError("N must be an integer >= 2"); }
  if (!(s > 0.5 && s < 1.0)) { throw DomainError("s must lie in (1/2, 1)"); }
  if (!(N > 2 * s)) { throw DomainError("N > 2s is required"); }
  double const Lambda = hardy_constant(N, s);
  if (!(lambda > 0.0 && lambda < Lambda)) {
    throw DomainError("lambda must lie in (0, Lambda_{N,s}) = (0, " + std::to_string(Lambda) + ")");
  }
  if (!(p > 1.0) || !std::isfinite(p)) { throw DomainError("p must be > 1"); }
  if (!(mu >= 0.0) || !std::isfinite(mu)) { throw DomainError("mu must be >= 0"); }
}

auto ExponentReport::chain_holds() const -> bool
{
  return p_star < p_minus && p_minus < p_mid() && p_mid() < p_plus && p_plus < 2 * s;
}

auto exponent_report(int N, double s, double lambda) -> ExponentReport
{
  check_order(N, s);
  ExponentReport r;
  r.N = N;
  r.s = s;
  r.lambda = lambda;
  r.Lambda_Ns = hardy_constant(N, s);
  r.a_Ns = normalizing_constant(N, s);
  r.alpha_lambda = alpha_of_lambda(lambda, N, s);
  double const a = r.alpha_lambda;
  r.mu_lambda = (N - 2 * s) / 2 - a;
  r.mubar_lambda = (N - 2 * s) / 2 + a;
  r.p_plus = (N + 2 * s - 2 * a) / (N - 2 * s - 2 * a + 2);
  r.p_minus = (N + 2 * s + 2 * a) / (N - 2 * s + 2 * a + 2);
  r.p_star = N / (N - 2 * s + 1);
  return r;
}

auto critical_exponents(ProblemParams const &params) -> ExponentReport
{
  params.validate();
  return exponent_report(params.N, params.s, params.lambda);
}

} // namespace hk
