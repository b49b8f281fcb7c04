// Reference values computed independently of the library code paths.
#ifndef DIRBOUND_TESTS_ORACLES_HPP_
#define DIRBOUND_TESTS_ORACLES_HPP_

#include <cmath>
#include <cstddef>
#include <vector>

namespace oracle {

// B(a, b) through log-gamma, not std::beta.
inline double beta_fn(double a, double b) {
  return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}

// ||z^n||^2 in the Dirichlet-type space D_p.
inline double dirichlet_monomial(double n, double p) { return n * n * beta_fn(n, p + 1.0); }

// int |z|^{2m} dA_sigma = (sigma+1) B(m+1, sigma+1).
inline double radial_moment(double m, double sigma) {
  return (sigma + 1.0) * beta_fn(m + 1.0, sigma + 1.0);
}

// Double-integral functional of f = z^N by expanding
// |1 - conj(w) z|^{-2 gamma} = |sum_n c_n (conj(w) z)^n|^2, gamma = beta + 2,
// and integrating term by term:
//   V = sum_n c_n^2 (I_s(n+N) I_t(n) + I_s(n) I_t(n+N)) - 2 c_n c_{n+N} I_s(n+N) I_t(n+N).
// The tail decays like 1/n, so two partial sums are combined by Richardson
// extrapolation. Valid only strictly inside the window beta < (sigma+tau)/2.
inline double double_integral_monomial(std::size_t N, double sigma, double tau, double beta,
                                       std::size_t terms = 200000) {
  const double gamma = beta + 2.0;
  const std::size_t m = terms + N + 1;
  std::vector<long double> is(m), it(m), c(m);
  is[0] = it[0] = c[0] = 1.0L;
  for (std::size_t k = 0; k + 1 < m; ++k) {
    is[k + 1] = is[k] * (k + 1.0L) / (k + sigma + 2.0L);
    it[k + 1] = it[k] * (k + 1.0L) / (k + tau + 2.0L);
    c[k + 1] = c[k] * (k + gamma) / (k + 1.0L);
  }
  long double total = 0.0L;
  long double half_total = 0.0L;
  for (std::size_t n = 0; n < terms; ++n) {
    total += c[n] * c[n] * (is[n + N] * it[n] + is[n] * it[n + N]) -
             2.0L * c[n] * c[n + N] * is[n + N] * it[n + N];
    if (n + 1 == terms / 2) half_total = total;
  }
  return static_cast<double>(2.0L * total - half_total);
}

// Pinned values of the functional at sigma = tau = 1, beta = 0.5 from the
// series above with 4e6 terms plus tail extrapolation.
inline constexpr double kV1 = 0.6209649;   // f = z
inline constexpr double kV8 = 1.1121903;   // f = z^8

}  // namespace oracle

#endif  // DIRBOUND_TESTS_ORACLES_HPP_
