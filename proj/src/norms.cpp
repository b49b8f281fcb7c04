#include "dirbound/norms.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dirbound {

WeightParams validate_params(double sigma, double tau, double beta) {
  const auto fail = [](const std::string& what) { throw Error(ErrorCode::kParam, what); };
  std::ostringstream msg;
  if (!std::isfinite(sigma) || !std::isfinite(tau) || !std::isfinite(beta)) {
    fail("sigma, tau and beta must be finite");
  }
  if (!(sigma > -1.0)) {
    msg << "sigma = " << sigma << " violates sigma > -1";
    fail(msg.str());
  }
  if (!(tau > -1.0)) {
    msg << "tau = " << tau << " violates tau > -1";
    fail(msg.str());
  }
  const double lower = std::max(sigma, tau) / 2.0 - 1.0;
  const double upper = (sigma + tau) / 2.0;
  if (!(beta > lower)) {
    msg << "beta = " << beta << " violates the lower bound max(sigma, tau)/2 - 1 < beta ("
        << lower << ")";
    fail(msg.str());
  }
  if (!(beta <= upper)) {
    msg << "beta = " << beta << " violates the upper bound beta <= (sigma + tau)/2 (" << upper
        << ")";
    fail(msg.str());
  }
  return WeightParams(sigma, tau, beta);
}

WeightParams validate_main_theorem_params(double sigma, double beta) {
  std::ostringstream msg;
  if (!std::isfinite(sigma) || !std::isfinite(beta)) {
    throw Error(ErrorCode::kParam, "sigma and beta must be finite");
  }
  if (!(sigma > 0.0)) {
    msg << "sigma = " << sigma << " violates sigma > 0";
    throw Error(ErrorCode::kParam, msg.str());
  }
  const double lower = sigma / 2.0 - 1.0;
  if (!(beta > lower)) {
    msg << "beta = " << beta << " violates the lower bound sigma/2 - 1 < beta (" << lower << ")";
    throw Error(ErrorCode::kParam, msg.str());
  }
  if (!(beta < sigma)) {
    msg << "beta = " << beta << " violates the strict upper bound beta < sigma (" << sigma << ")";
    throw Error(ErrorCode::kParam, msg.str());
  }
  return WeightParams(sigma, sigma, beta);
}

QuadratureSettings dirichlet_defaults() {
  return {.radial_count = 16, .angular_count = 64, .refinement_factor = 2,
          .target_rel_tol = 1e-10, .max_refinements = 3};
}

QuadratureSettings bidisc_defaults() {
  return {.radial_count = 8, .angular_count = 32, .refinement_factor = 2,
          .target_rel_tol = 1e-10, .max_refinements = 2};
}

// One refinement of the base 32 x 128 rule must move the value by < 2%.
QuadratureSettings double_integral_defaults() {
  return {.radial_count = 32, .angular_count = 128, .refinement_factor = 2,
          .target_rel_tol = 0.02, .max_refinements = 1};
}

NormResult dirichlet_norm_sq_coeff(const TruncatedPowerSeries& s, double p) {
  if (!(p >= 0.0)) {
    std::ostringstream msg;
    msg << "Dirichlet exponent p = " << p << " must be >= 0";
    throw Error(ErrorCode::kParam, msg.str());
  }
  std::vector<double> terms;
  terms.reserve(s.order());
  for (std::size_t n = 1; n <= s.order(); ++n) {
    const double nn = static_cast<double>(n);
    terms.push_back(nn * nn * std::norm(s[n]) * std::beta(nn, p + 1.0));
  }
  return {pairwise_sum(std::span<const double>(terms)), NormMethod::kCoefficient, 0.0, {}};
}

NormResult dirichlet_norm_sq_quad(const DiscFunction& f, double p,
                                  const QuadratureSettings& settings) {
  if (!(p >= 0.0)) {
    std::ostringstream msg;
    msg << "Dirichlet exponent p = " << p << " must be >= 0";
    throw Error(ErrorCode::kParam, msg.str());
  }
  std::function<Complex(Complex)> deriv = f.derivative;
  if (!deriv && f.series) {
    deriv = [ds = differentiate(*f.series)](Complex z) { return eval_series(ds, z); };
  }
  if (!deriv) throw Error(ErrorCode::kParam, "quadrature Dirichlet norm needs a derivative");

  // The sigma = p rule integrates against (p+1)(1-|z|^2)^p dA.
  const auto result = refine_until(settings, [&](RuleSize size) {
    const DiscRule rule = build_disc_rule(p, size.radial_count, size.angular_count);
    const double integral =
        integrate_disc(rule, [&](Complex z) { return std::norm(deriv(z)); });
    return integral / rule.normalization;
  });
  return {result.value, NormMethod::kQuadrature, result.achieved_rel_tol, result.trace};
}

NormResult dirichlet_norm_sq(const DiscFunction& f, double p,
                             const QuadratureSettings& settings) {
  if (f.series) return dirichlet_norm_sq_coeff(*f.series, p);
  return dirichlet_norm_sq_quad(f, p, settings);
}

NormResult bergman_norm_sq_bidisc(const std::function<double(Complex, Complex)>& modulus,
                                  double sigma, const QuadratureSettings& settings) {
  const auto result = refine_until(settings, [&](RuleSize size) {
    const BidiscRule rule =
        build_bidisc_rule(sigma, sigma, size.radial_count, size.angular_count);
    return integrate_bidisc(rule, [&](Complex z, Complex w) {
      const double m = modulus(z, w);
      return m * m;
    });
  });
  return {result.value, NormMethod::kQuadrature, result.achieved_rel_tol, result.trace};
}

namespace {

std::vector<Complex> values_on_rule(const DiscFunction& f, const DiscRule& rule) {
  std::vector<Complex> values;
  values.reserve(rule.size());
  for (std::size_t i = 0; i < rule.radial_count(); ++i) {
    for (std::size_t j = 0; j < rule.angular_count; ++j) values.push_back(f.value(rule.node(i, j)));
  }
  return values;
}

// sum_{j,l} |a_j - b_l|^2 kernel[(j - l) mod M]
double circulant_pair_sum(const Complex* a, const Complex* b, const double* kernel,
                          std::size_t m) {
  double total = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    const Complex aj = a[j];
    double row = 0.0;
    for (std::size_t l = 0; l <= j; ++l) row += std::norm(aj - b[l]) * kernel[j - l];
    for (std::size_t l = j + 1; l < m; ++l) row += std::norm(aj - b[l]) * kernel[j + m - l];
    total += row;
  }
  return total;
}

bool same_rule(const DiscRule& a, const DiscRule& b) {
  return a.sigma == b.sigma && a.angular_count == b.angular_count &&
         a.radial_nodes == b.radial_nodes && a.radial_weights == b.radial_weights;
}

}  // namespace

double double_integral_on_rule(const DiscFunction& f, const WeightParams& params,
                               const BidiscRule& rule) {
  const DiscRule& rz = rule.rule_z;
  const DiscRule& rw = rule.rule_w;
  if (rz.angular_count != rw.angular_count) {
    throw Error(ErrorCode::kParam, "double integral needs equal angular counts");
  }
  const std::size_t m = rz.angular_count;
  const bool symmetric = same_rule(rz, rw);
  const std::vector<Complex> fz = values_on_rule(f, rz);
  const std::vector<Complex> fw = symmetric ? fz : values_on_rule(f, rw);

  // |1 - rho e^{i theta}|^2 = (1 - rho)^2 + 4 rho sin^2(theta / 2)
  std::vector<double> half_sin_sq(m);
  for (std::size_t d = 0; d < m; ++d) {
    const double s = std::sin(0.5 * rz.angle(d));
    half_sin_sq[d] = s * s;
  }
  const double half_q = 0.5 * params.q_exponent();
  std::vector<double> kernel(m);
  std::vector<double> radial_terms;
  radial_terms.reserve(rz.radial_count() * rw.radial_count());
  for (std::size_t i = 0; i < rz.radial_count(); ++i) {
    const std::size_t k_begin = symmetric ? i : 0;
    for (std::size_t k = k_begin; k < rw.radial_count(); ++k) {
      const double rho = rz.radius(i) * rw.radius(k);
      const double gap = (1.0 - rho) * (1.0 - rho);
      for (std::size_t d = 0; d < m; ++d) {
        kernel[d] = std::pow(gap + 4.0 * rho * half_sin_sq[d], -half_q);
      }
      const double sum = circulant_pair_sum(&fz[i * m], &fw[k * m], kernel.data(), m);
      const double mult = (symmetric && k != i) ? 2.0 : 1.0;
      radial_terms.push_back(mult * rz.weight(i) * rw.weight(k) * sum);
    }
  }
  const double total = pairwise_sum(std::span<const double>(radial_terms));
  if (!std::isfinite(total)) {
    throw Error(ErrorCode::kConvergence, "double integral is not finite on the tensor rule");
  }
  return total;
}

NormResult double_integral_functional(const DiscFunction& f, const WeightParams& params,
                                      const QuadratureSettings& settings) {
  const auto result = refine_until(settings, [&](RuleSize size) {
    const BidiscRule rule =
        build_bidisc_rule(params.sigma(), params.tau(), size.radial_count, size.angular_count);
    return double_integral_on_rule(f, params, rule);
  });
  return {result.value, NormMethod::kQuadrature, result.achieved_rel_tol, result.trace};
}

EquivalenceRatio equivalence_ratio(const DiscFunction& f, const WeightParams& params,
                                   const QuadratureSettings& settings) {
  NormResult dirichlet = dirichlet_norm_sq(f, params.p_dirichlet());
  if (!(dirichlet.value_sq > 0.0)) {
    throw Error(ErrorCode::kParam, "equivalence ratio is undefined for a constant function");
  }
  NormResult functional = double_integral_functional(f, params, settings);
  const double ratio = functional.value_sq / dirichlet.value_sq;
  return {ratio, std::move(functional), std::move(dirichlet)};
}

}  // namespace dirbound
