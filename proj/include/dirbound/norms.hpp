#ifndef DIRBOUND_NORMS_HPP_
#define DIRBOUND_NORMS_HPP_

#include <functional>
#include <string_view>
#include <vector>

#include "dirbound/complexfn.hpp"
#include "dirbound/quadrature.hpp"

namespace dirbound {

// (sigma, tau, beta) inside the equivalence window
//   max(sigma, tau)/2 - 1 < beta <= (sigma + tau)/2,  sigma, tau > -1,
// with the derived Dirichlet exponent p = sigma + tau - 2 beta and the
// kernel exponent q = 2 (beta + 2). Only the validators construct it.
class WeightParams {
 public:
  double sigma() const noexcept { return sigma_; }
  double tau() const noexcept { return tau_; }
  double beta() const noexcept { return beta_; }
  double p_dirichlet() const noexcept { return sigma_ + tau_ - 2.0 * beta_; }
  double q_exponent() const noexcept { return 2.0 * (beta_ + 2.0); }

 private:
  friend WeightParams validate_params(double, double, double);
  friend WeightParams validate_main_theorem_params(double, double);
  WeightParams(double sigma, double tau, double beta) : sigma_(sigma), tau_(tau), beta_(beta) {}
  double sigma_;
  double tau_;
  double beta_;
};

// Throws E_PARAM naming the violated inequality.
WeightParams validate_params(double sigma, double tau, double beta);

// Strict window sigma/2 - 1 < beta < sigma with sigma > 0 and tau = sigma;
// then p = 2 sigma - 2 beta > 0.
WeightParams validate_main_theorem_params(double sigma, double beta);

enum class NormMethod { kCoefficient, kQuadrature };

constexpr std::string_view method_name(NormMethod m) {
  return m == NormMethod::kCoefficient ? "coefficient" : "quadrature";
}

struct NormResult {
  double value_sq = 0.0;
  NormMethod method = NormMethod::kCoefficient;
  double rel_error_estimate = 0.0;
  std::vector<TraceEntry> trace;  // empty for the coefficient route
};

QuadratureSettings dirichlet_defaults();
QuadratureSettings bidisc_defaults();
QuadratureSettings double_integral_defaults();

// sum_{n>=1} n^2 |a_n|^2 B(n, p+1) = int_D |f'|^2 (1-|z|^2)^p dA. E_PARAM for p < 0.
NormResult dirichlet_norm_sq_coeff(const TruncatedPowerSeries& s, double p);

// Same integral by quadrature on |f'|^2. Needs f.derivative (or f.series).
NormResult dirichlet_norm_sq_quad(const DiscFunction& f, double p,
                                  const QuadratureSettings& settings = dirichlet_defaults());

// Coefficient route when a series is available, quadrature otherwise.
NormResult dirichlet_norm_sq(const DiscFunction& f, double p,
                             const QuadratureSettings& settings = dirichlet_defaults());

// int_{D^2} |F|^2 dA_sigma dA_sigma where `modulus` returns |F(z, w)|.
NormResult bergman_norm_sq_bidisc(const std::function<double(Complex, Complex)>& modulus,
                                  double sigma,
                                  const QuadratureSettings& settings = bidisc_defaults());

// int int |f(z) - f(w)|^2 / |1 - conj(w) z|^q dA_sigma(z) dA_tau(w) on one
// tensor rule. Both uniform angular grids must have the same size; the
// kernel then depends only on the radial pair and the angle offset.
double double_integral_on_rule(const DiscFunction& f, const WeightParams& params,
                               const BidiscRule& rule);

NormResult double_integral_functional(
    const DiscFunction& f, const WeightParams& params,
    const QuadratureSettings& settings = double_integral_defaults());

struct EquivalenceRatio {
  double ratio = 0.0;
  NormResult functional;
  NormResult dirichlet;
};

// double_integral_functional / ||f||^2_{D_p}. E_PARAM when f is constant.
EquivalenceRatio equivalence_ratio(const DiscFunction& f, const WeightParams& params,
                                   const QuadratureSettings& settings = double_integral_defaults());

}  // namespace dirbound

#endif  // DIRBOUND_NORMS_HPP_
