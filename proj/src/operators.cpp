#include "dirbound/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace dirbound {

DiscFunction apply_composition(const DiscFunction& f, const SymbolSpec& phi) {
  eval_symbol(phi, Complex{});  // verified gate
  DiscFunction out;
  out.value = [value = f.value, phi](Complex z) { return value(eval_symbol(phi, z)); };
  std::function<Complex(Complex)> fd = f.derivative;
  if (!fd && f.series) {
    fd = [ds = differentiate(*f.series)](Complex z) { return eval_series(ds, z); };
  }
  if (fd) {
    out.derivative = [fd, phi](Complex z) {
      return fd(eval_symbol(phi, z)) * eval_symbol_deriv(phi, z);
    };
  }
  return out;
}

void LiftParams::validate() const {
  if (!(p_exp > 0.0) || !(gamma_exp > 0.0)) {
    throw Error(ErrorCode::kParam, "lift parameters p and gamma must be strictly positive");
  }
}

BidiscModulus lift(const DiscFunction& f, const LiftParams& params, double singular_threshold) {
  params.validate();
  const double exponent = params.exponent();
  return [value = f.value, exponent, singular_threshold](Complex z, Complex w) {
    const double denom = std::abs(1.0 - z * std::conj(w));
    if (denom < singular_threshold) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "lift is singular at z = " << z << ", w = " << w;
      throw Error(ErrorCode::kSingular, msg.str());
    }
    return std::abs(value(z) - value(w)) / std::pow(denom, exponent);
  };
}

LiftNormCheck lift_norm_check(const TruncatedPowerSeries& f, double sigma, double beta,
                              const QuadratureSettings& settings) {
  const WeightParams params = validate_main_theorem_params(sigma, beta);
  settings.validate();
  const DiscFunction fn = DiscFunction::from_series(f);
  const LiftParams lp{2.0 * (beta + 2.0), 2.0};
  const BidiscModulus lifted = lift(fn, lp);

  LiftNormCheck out;
  out.size = {settings.radial_count, settings.angular_count};
  const BidiscRule rule =
      build_bidisc_rule(sigma, sigma, settings.radial_count, settings.angular_count);
  out.lift_norm_sq = integrate_bidisc(rule, [&](Complex z, Complex w) {
    const double m = lifted(z, w);
    return m * m;
  });
  out.functional_value = double_integral_on_rule(fn, params, rule);
  out.dirichlet_norm_sq = dirichlet_norm_sq_coeff(f, params.p_dirichlet()).value_sq;
  out.route_rel_diff = relative_change(out.functional_value, out.lift_norm_sq);
  return out;
}

namespace {

// Golden-section minimization of g on [lo, hi].
template <class G>
double golden_min(G&& g, double lo, double hi, int iterations = 80) {
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - ratio * (hi - lo);
  double x2 = lo + ratio * (hi - lo);
  double f1 = g(x1);
  double f2 = g(x2);
  for (int it = 0; it < iterations; ++it) {
    if (f1 > f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + ratio * (hi - lo);
      f2 = g(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - ratio * (hi - lo);
      f1 = g(x1);
    }
  }
  return f1 < f2 ? x1 : x2;
}

// Minimum of |phi'| over the circle: grid scan plus golden refinement.
std::pair<double, BoundaryPoint> min_derivative_on_circle(const SymbolSpec& phi,
                                                          std::size_t resolution) {
  const auto dmod = [&](double t) { return std::abs(eval_symbol_deriv(phi, std::polar(1.0, t))); };
  const double step = kTwoPi / static_cast<double>(resolution);
  std::size_t best = 0;
  double best_value = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < resolution; ++j) {
    const double v = dmod(step * static_cast<double>(j));
    if (v < best_value) {
      best_value = v;
      best = j;
    }
  }
  const double center = step * static_cast<double>(best);
  const double t = golden_min(dmod, center - step, center + step);
  double angle = center;
  if (dmod(t) < best_value) {
    best_value = dmod(t);
    angle = t;
  }
  return {best_value, BoundaryPoint(angle)};
}

double angular_derivative_or_nan(const SymbolSpec& phi, BoundaryPoint zeta, double contact_tol) {
  try {
    return diagonal_boundary_value(phi, zeta, {}, contact_tol);
  } catch (const Error&) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

std::size_t polynomial_degree(std::span<const Complex> coeffs) {
  std::size_t d = coeffs.size() - 1;
  while (d > 0 && coeffs[d] == Complex{}) --d;
  return d;
}

}  // namespace

RankReport rank_sufficiency_check(const SymbolSpec& phi, std::size_t scan_resolution,
                                  const RankTolerances& tolerances) {
  eval_symbol(phi, Complex{});  // verified gate
  if (scan_resolution < 16) throw Error(ErrorCode::kParam, "scan_resolution must be >= 16");

  RankReport report;
  const double step = kTwoPi / static_cast<double>(scan_resolution);
  const auto angle_of = [&](std::size_t j) { return step * static_cast<double>(j); };
  const auto modsq = [&](double t) { return std::norm(eval_symbol(phi, std::polar(1.0, t))); };

  bool full_circle = phi.is_inner();
  std::vector<double> g(scan_resolution);
  if (!full_circle) {
    bool all_contact = true;
    for (std::size_t j = 0; j < scan_resolution; ++j) {
      g[j] = 1.0 - std::sqrt(modsq(angle_of(j)));
      all_contact = all_contact && g[j] <= tolerances.contact_tol;
    }
    full_circle = all_contact;
  }

  if (full_circle) {
    report.contact.full_circle = true;
    report.contact.exhaustive = phi.is_inner();
    if (!phi.is_inner()) report.note = "every scanned point is a contact point";
    const auto [min_deriv, where] = min_derivative_on_circle(phi, scan_resolution);
    report.min_deriv_modulus = min_deriv;
    report.min_deriv_point = where;
    report.angular_derivatives.push_back(
        angular_derivative_or_nan(phi, where, tolerances.contact_tol));
  } else {
    // Local minima of 1 - |phi| refined where d/dt |phi(e^{it})|^2 changes sign.
    const auto slope = [&](double t) {
      const Complex zeta = std::polar(1.0, t);
      const Complex v = eval_symbol(phi, zeta);
      return 2.0 * std::real(std::conj(v) * eval_symbol_deriv(phi, zeta) * Complex{0.0, 1.0} * zeta);
    };
    const std::size_t n = scan_resolution;
    std::vector<bool> near_contact(n, false);
    for (std::size_t j = 0; j < n; ++j) {
      const double left = g[(j + n - 1) % n];
      const double right = g[(j + 1) % n];
      if (!(g[j] <= left && g[j] < right)) continue;
      double lo = angle_of(j) - step;
      double hi = angle_of(j) + step;
      double t = angle_of(j);
      if (slope(lo) >= 0.0 && slope(hi) <= 0.0) {
        for (int it = 0; it < 100 && hi - lo > 1e-15; ++it) {
          const double mid = 0.5 * (lo + hi);
          (slope(mid) >= 0.0 ? lo : hi) = mid;
        }
        t = 0.5 * (lo + hi);
      }
      if (1.0 - std::sqrt(modsq(t)) > tolerances.contact_tol) continue;
      report.contact.points.emplace_back(t);
      near_contact[j] = near_contact[(j + 1) % n] = near_contact[(j + n - 1) % n] = true;
    }

    // |phi(e^{it})|^2 is a trigonometric polynomial of degree d bounded by 1,
    // so |G''| <= d^2 and G exceeds its cell endpoints by at most h^2 d^2 / 8.
    const auto* poly = std::get_if<symbols::Polynomial>(&phi.variant());
    const double d = poly ? static_cast<double>(polynomial_degree(poly->coeffs())) : 0.0;
    const double bump = step * step * d * d / 8.0;
    const double threshold = 1.0 - (1.0 - tolerances.contact_tol) * (1.0 - tolerances.contact_tol);
    bool certified = poly != nullptr;
    for (std::size_t j = 0; j < n && certified; ++j) {
      if (near_contact[j] || near_contact[(j + 1) % n]) continue;
      const double cell_max = std::max(1.0 - g[j], 1.0 - g[(j + 1) % n]);
      if (1.0 - (cell_max * cell_max + bump) <= threshold) certified = false;
    }
    report.contact.exhaustive = certified;

    report.min_deriv_modulus = std::numeric_limits<double>::infinity();
    for (const BoundaryPoint& p : report.contact.points) {
      const double dm = std::abs(eval_symbol_deriv(phi, p.point()));
      if (dm < report.min_deriv_modulus) {
        report.min_deriv_modulus = dm;
        report.min_deriv_point = p;
      }
      report.angular_derivatives.push_back(
          angular_derivative_or_nan(phi, p, tolerances.contact_tol));
    }
    if (report.contact.points.empty()) report.min_deriv_modulus = 0.0;
  }

  const bool empty = !report.contact.full_circle && report.contact.points.empty();
  if (empty) {
    report.verdict = report.contact.exhaustive ? RankVerdict::kVacuous : RankVerdict::kInconclusive;
    if (!report.contact.exhaustive) report.note = "scan could not certify the absence of contact";
  } else if (report.min_deriv_modulus <= tolerances.deriv_tol) {
    report.verdict = RankVerdict::kFail;
    report.note = "phi' vanishes (below deriv_tol) at a contact point";
  } else {
    report.verdict = RankVerdict::kPass;
  }
  return report;
}

namespace {

struct ChainResult {
  double rhs_integral = 0.0;
  std::size_t nodes = 0;
  std::size_t violations = 0;
  double max_excess = -std::numeric_limits<double>::infinity();
};

// Integral with the composed kernel |1 - conj(phi(w)) phi(z)|^{-q}, and the
// nodewise comparison against the |1 - conj(w) z|^{-q} integrand.
ChainResult composed_kernel_chain(const DiscFunction& g, const SymbolSpec& phi,
                                  const WeightParams& params, const BidiscRule& rule,
                                  double sup_pow_q, double rel_tol) {
  const DiscRule& rz = rule.rule_z;
  std::vector<Complex> nodes;
  std::vector<double> weights;
  std::vector<Complex> gv;
  std::vector<Complex> pv;
  for (std::size_t i = 0; i < rz.radial_count(); ++i) {
    for (std::size_t j = 0; j < rz.angular_count; ++j) {
      const Complex z = rz.node(i, j);
      nodes.push_back(z);
      weights.push_back(rz.weight(i));
      gv.push_back(g.value(z));
      pv.push_back(eval_symbol(phi, z));
    }
  }
  const double half_q = 0.5 * params.q_exponent();
  ChainResult out;
  std::vector<double> outer(nodes.size());
  std::vector<double> inner(nodes.size());
  for (std::size_t a = 0; a < nodes.size(); ++a) {
    for (std::size_t b = 0; b < nodes.size(); ++b) {
      const double num = std::norm(gv[a] - gv[b]);
      const double lhs = num * std::pow(std::norm(1.0 - std::conj(nodes[b]) * nodes[a]), -half_q);
      const double rhs = num * std::pow(std::norm(1.0 - std::conj(pv[b]) * pv[a]), -half_q);
      if (!std::isfinite(lhs) || !std::isfinite(rhs)) {
        throw Error(ErrorCode::kConvergence, "chain integrand is not finite on the tensor rule");
      }
      inner[b] = weights[b] * rhs;
      ++out.nodes;
      if (rhs > 0.0) out.max_excess = std::max(out.max_excess, lhs / (sup_pow_q * rhs) - 1.0);
      if (lhs > sup_pow_q * rhs * (1.0 + rel_tol)) ++out.violations;
    }
    outer[a] = weights[a] * pairwise_sum(std::span<const double>(inner));
  }
  out.rhs_integral = pairwise_sum(std::span<const double>(outer));
  return out;
}

}  // namespace

BoundCheckReport bound_check(const std::vector<TruncatedPowerSeries>& family,
                             const SymbolSpec& phi, double sigma, double beta,
                             const BoundCheckSettings& settings) {
  const WeightParams params = validate_main_theorem_params(sigma, beta);
  BoundCheckReport report;
  report.sigma = sigma;
  report.beta = beta;
  report.p = params.p_dirichlet();
  report.q = params.q_exponent();
  report.sup = settings.precomputed_sup ? *settings.precomputed_sup
                                        : estimate_sup(phi, settings.sup);
  if (report.sup.verdict != SupVerdict::kBounded) {
    std::ostringstream msg;
    msg << "kernel supremum verdict is " << verdict_name(report.sup.verdict)
        << "; the bound needs a Bounded kernel";
    throw Error(ErrorCode::kParam, msg.str());
  }
  const double sup_pow_q = std::pow(report.sup.value, report.q);
  const BidiscRule chain_rule = build_bidisc_rule(sigma, sigma, settings.chain.radial_count,
                                                  settings.chain.angular_count);

  for (std::size_t idx = 0; idx < family.size(); ++idx) {
    const TruncatedPowerSeries& f = family[idx];
    BoundRow row;
    row.f_norm_sq = dirichlet_norm_sq_coeff(f, report.p).value_sq;
    if (!(row.f_norm_sq > 0.0)) {
      std::ostringstream msg;
      msg << "family member " << idx << " is constant";
      throw Error(ErrorCode::kParam, msg.str());
    }
    const DiscFunction composed = apply_composition(DiscFunction::from_series(f), phi);
    row.composed = dirichlet_norm_sq_quad(composed, report.p, settings.dirichlet);
    row.ratio = row.composed.value_sq / (sup_pow_q * row.f_norm_sq);
    const auto& trace = row.composed.trace;
    row.ratio_previous = trace.size() >= 2
                             ? trace[trace.size() - 2].value / (sup_pow_q * row.f_norm_sq)
                             : row.ratio;
    try {
      const auto extracted = coefficients_of(composed.value, settings.cross_check_order);
      row.composed_coeff = dirichlet_norm_sq_coeff(extracted.series, report.p).value_sq;
    } catch (const Error&) {
      row.composed_coeff = std::numeric_limits<double>::quiet_NaN();
    }

    row.lhs_integral = double_integral_on_rule(composed, params, chain_rule);
    const ChainResult chain = composed_kernel_chain(composed, phi, params, chain_rule, sup_pow_q,
                                                    settings.pointwise_rel_tol);
    row.rhs_integral = chain.rhs_integral;
    row.pointwise_nodes = chain.nodes;
    row.pointwise_violations = chain.violations;
    row.max_pointwise_excess = chain.max_excess;
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace dirbound
