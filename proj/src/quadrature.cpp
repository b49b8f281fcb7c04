#include "dirbound/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <limits>
#include <sstream>

namespace dirbound {

namespace {

// P_n^{(alpha,beta)}(x) by the three-term recurrence.
double jacobi_p(std::size_t n, double alpha, double beta, double x) {
  if (n == 0) return 1.0;
  double p_prev = 1.0;
  double p = 0.5 * (alpha - beta + (alpha + beta + 2.0) * x);
  for (std::size_t k = 2; k <= n; ++k) {
    const double kk = static_cast<double>(k);
    const double s = 2.0 * kk + alpha + beta;
    const double a1 = 2.0 * kk * (kk + alpha + beta) * (s - 2.0);
    const double a2 = (s - 1.0) * (alpha * alpha - beta * beta);
    const double a3 = (s - 2.0) * (s - 1.0) * s;
    const double a4 = 2.0 * (kk + alpha - 1.0) * (kk + beta - 1.0) * s;
    const double next = ((a2 + a3 * x) * p - a4 * p_prev) / a1;
    p_prev = p;
    p = next;
  }
  return p;
}

double jacobi_p_deriv(std::size_t n, double alpha, double beta, double x) {
  if (n == 0) return 0.0;
  return 0.5 * (static_cast<double>(n) + alpha + beta + 1.0) *
         jacobi_p(n - 1, alpha + 1.0, beta + 1.0, x);
}

}  // namespace

GaussJacobiRule gauss_jacobi(std::size_t n, double alpha, double beta) {
  if (n == 0) throw Error(ErrorCode::kParam, "Gauss-Jacobi rule needs n >= 1");
  if (!(alpha > -1.0) || !(beta > -1.0)) {
    throw Error(ErrorCode::kParam, "Gauss-Jacobi exponents must exceed -1");
  }

  // Golub-Welsch for starting values.
  Eigen::VectorXd diag(static_cast<Eigen::Index>(n));
  Eigen::VectorXd sub(static_cast<Eigen::Index>(n > 1 ? n - 1 : 1));
  const double ab = alpha + beta;
  diag(0) = (beta - alpha) / (ab + 2.0);
  for (std::size_t k = 1; k < n; ++k) {
    const double kk = static_cast<double>(k);
    const double s = 2.0 * kk + ab;
    diag(static_cast<Eigen::Index>(k)) = (beta * beta - alpha * alpha) / (s * (s + 2.0));
    const double num = 4.0 * kk * (kk + alpha) * (kk + beta) * (kk + ab);
    const double den = s * s * (s + 1.0) * (s - 1.0);
    sub(static_cast<Eigen::Index>(k - 1)) = std::sqrt(num / den);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub.head(static_cast<Eigen::Index>(n - 1)),
                                Eigen::EigenvaluesOnly);

  // log of 2^{a+b+1} Gamma(n+a+1) Gamma(n+b+1) / (Gamma(n+a+b+1) n!)
  const double nn = static_cast<double>(n);
  const double log_scale = (ab + 1.0) * std::log(2.0) + std::lgamma(nn + alpha + 1.0) +
                           std::lgamma(nn + beta + 1.0) - std::lgamma(nn + ab + 1.0) -
                           std::lgamma(nn + 1.0);
  const double scale = std::exp(log_scale);

  GaussJacobiRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double x = solver.eigenvalues()(static_cast<Eigen::Index>(i));
    for (int it = 0; it < 8; ++it) {
      const double dx = jacobi_p(n, alpha, beta, x) / jacobi_p_deriv(n, alpha, beta, x);
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double dp = jacobi_p_deriv(n, alpha, beta, x);
    rule.nodes[i] = x;
    rule.weights[i] = scale / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

DiscRule build_disc_rule(double sigma, std::size_t n_rad, std::size_t n_ang) {
  if (!(sigma > -1.0)) {
    std::ostringstream msg;
    msg << "weight exponent sigma = " << sigma << " must satisfy sigma > -1";
    throw Error(ErrorCode::kParam, msg.str());
  }
  if (n_rad < 2) throw Error(ErrorCode::kParam, "disc rule needs n_rad >= 2");
  if (n_ang < 4) throw Error(ErrorCode::kParam, "disc rule needs n_ang >= 4");

  // (1-t)^sigma on [0,1] is 2^{-sigma} (1-x)^sigma with t = (1+x)/2.
  const GaussJacobiRule gj = gauss_jacobi(n_rad, sigma, 0.0);
  DiscRule rule;
  rule.sigma = sigma;
  rule.angular_count = n_ang;
  rule.normalization = sigma + 1.0;
  rule.radial_nodes.resize(n_rad);
  rule.radial_weights.resize(n_rad);
  const double jacobian = std::pow(2.0, -sigma - 1.0) * rule.normalization;
  for (std::size_t i = 0; i < n_rad; ++i) {
    rule.radial_nodes[i] = 0.5 * (1.0 + gj.nodes[i]);
    rule.radial_weights[i] = jacobian * gj.weights[i];
  }
  return rule;
}

BidiscRule build_bidisc_rule(double sigma_z, double sigma_w, std::size_t n_rad,
                             std::size_t n_ang) {
  return {build_disc_rule(sigma_z, n_rad, n_ang), build_disc_rule(sigma_w, n_rad, n_ang)};
}

namespace detail {

void throw_non_finite(Complex z) {
  std::ostringstream msg;
  msg.precision(17);
  msg << "integrand is not finite at node z = " << z;
  throw Error(ErrorCode::kConvergence, msg.str());
}

void throw_non_finite(Complex z, Complex w) {
  std::ostringstream msg;
  msg.precision(17);
  msg << "integrand is not finite at node (z, w) = (" << z << ", " << w << ")";
  throw Error(ErrorCode::kConvergence, msg.str());
}

}  // namespace detail

void QuadratureSettings::validate() const {
  if (radial_count < 2 || angular_count < 4) {
    throw Error(ErrorCode::kParam, "quadrature counts must be >= 2 (radial) and >= 4 (angular)");
  }
  if (refinement_factor < 2) throw Error(ErrorCode::kParam, "refinement_factor must be >= 2");
  if (!(target_rel_tol > 0.0 && target_rel_tol <= 0.1)) {
    throw Error(ErrorCode::kParam, "target_rel_tol must lie in (0, 0.1]");
  }
  if (max_refinements < 1) throw Error(ErrorCode::kParam, "max_refinements must be >= 1");
}

double relative_change(double previous, double current) {
  const double diff = std::abs(current - previous);
  if (diff == 0.0) return 0.0;
  const double scale = std::max(std::abs(current), std::abs(previous));
  return diff / scale;
}

RefinementResult refine_until(const QuadratureSettings& settings,
                              const std::function<double(RuleSize)>& functional) {
  settings.validate();
  RefinementResult result;
  RuleSize size{settings.radial_count, settings.angular_count};
  double previous = functional(size);
  result.trace.push_back({size, previous});
  result.value = previous;
  result.achieved_rel_tol = std::numeric_limits<double>::infinity();
  for (std::size_t step = 0; step < settings.max_refinements; ++step) {
    size.radial_count *= settings.refinement_factor;
    size.angular_count *= settings.refinement_factor;
    const double current = functional(size);
    result.trace.push_back({size, current});
    result.value = current;
    result.achieved_rel_tol = relative_change(previous, current);
    if (result.achieved_rel_tol <= settings.target_rel_tol) {
      result.converged = true;
      return result;
    }
    previous = current;
  }
  std::ostringstream msg;
  msg << "no convergence after " << settings.max_refinements
      << " refinements; last relative change " << result.achieved_rel_tol;
  throw ConvergenceError(msg.str(), std::move(result));
}

}  // namespace dirbound
