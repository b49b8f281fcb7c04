#ifndef DIRBOUND_OPERATORS_HPP_
#define DIRBOUND_OPERATORS_HPP_

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dirbound/complexfn.hpp"
#include "dirbound/kernels.hpp"
#include "dirbound/norms.hpp"
#include "dirbound/quadrature.hpp"

namespace dirbound {

// z -> f(phi(z)) with derivative f'(phi(z)) phi'(z) when f has one.
DiscFunction apply_composition(const DiscFunction& f, const SymbolSpec& phi);

// Parameters of the lift (f(z) - f(w)) / (1 - conj(w) z)^{p_exp / gamma_exp}.
struct LiftParams {
  double p_exp = 2.0;
  double gamma_exp = 2.0;

  double exponent() const { return p_exp / gamma_exp; }
  // E_PARAM unless both are strictly positive.
  void validate() const;
};

using BidiscModulus = std::function<double(Complex, Complex)>;

// Only the modulus of the lift is defined: |f(z) - f(w)| / |1 - z conj(w)|^e.
// The returned evaluator throws E_SINGULAR when |1 - z conj(w)| < singular_threshold.
BidiscModulus lift(const DiscFunction& f, const LiftParams& params,
                   double singular_threshold = 1e-14);

struct LiftNormCheck {
  double lift_norm_sq = 0.0;       // ||L f||^2 in A^2_sigma(D^2), generic tensor route
  double dirichlet_norm_sq = 0.0;  // ||f||^2 in D_{2 sigma - 2 beta}, coefficient route
  double functional_value = 0.0;   // double_integral_on_rule on the same rule
  double route_rel_diff = 0.0;
  RuleSize size;
};

// Evaluates the lift with exponent beta + 2 (p_exp = 2(beta + 2), gamma_exp = 2)
// on the base rule of `settings` and compares it with the double-integral
// functional on that same rule.
LiftNormCheck lift_norm_check(const TruncatedPowerSeries& f, double sigma, double beta,
                              const QuadratureSettings& settings = double_integral_defaults());

struct ContactSet {
  bool full_circle = false;  // |phi| == 1 on all of T
  std::vector<BoundaryPoint> points;
  bool exhaustive = false;   // the scan provably missed no contact point
};

enum class RankVerdict { kPass, kFail, kVacuous, kInconclusive };

constexpr std::string_view verdict_name(RankVerdict v) {
  switch (v) {
    case RankVerdict::kPass: return "Pass";
    case RankVerdict::kFail: return "Fail";
    case RankVerdict::kVacuous: return "Vacuous";
    case RankVerdict::kInconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

struct RankTolerances {
  double contact_tol = 1e-6;
  double deriv_tol = 1e-8;
};

struct RankReport {
  ContactSet contact;
  double min_deriv_modulus = 0.0;
  BoundaryPoint min_deriv_point;
  // Radial limits of (1-|phi(r zeta)|^2)/(1-r^2) at the listed contact
  // points (or at min_deriv_point for a full circle), NaN where they fail.
  std::vector<double> angular_derivatives;
  RankVerdict verdict = RankVerdict::kInconclusive;
  std::string note;
};

// The boundary derivative of Phi(z1, z2) = (phi(z1), phi(z2)) is diagonal, so
// it is invertible on the contact product set iff phi' does not vanish at
// any contact point of phi.
RankReport rank_sufficiency_check(const SymbolSpec& phi, std::size_t scan_resolution = 4096,
                                  const RankTolerances& tolerances = {});

struct BoundCheckSettings {
  QuadratureSettings dirichlet = dirichlet_defaults();
  RuleSize chain{24, 96};
  SupSettings sup;
  std::optional<SupEstimate> precomputed_sup;  // skips the search when set
  std::size_t cross_check_order = 64;
  double pointwise_rel_tol = 1e-12;
};

struct BoundRow {
  double f_norm_sq = 0.0;              // ||f||^2_{D_p}, coefficient route
  NormResult composed;                 // ||C_phi f||^2_{D_p}, quadrature route
  double composed_coeff = 0.0;         // coefficient cross-check, NaN if extraction failed
  double ratio = 0.0;                  // composed / (sup^q f_norm)
  double ratio_previous = 0.0;         // same with the second-to-last refinement level
  double lhs_integral = 0.0;           // double integral with |1 - conj(w) z|^q
  double rhs_integral = 0.0;           // with |1 - conj(phi(w)) phi(z)|^q
  std::size_t pointwise_nodes = 0;
  std::size_t pointwise_violations = 0;
  double max_pointwise_excess = 0.0;   // max of lhs / (sup^q rhs) - 1 over nodes
};

struct BoundCheckReport {
  double sigma = 0.0;
  double beta = 0.0;
  double p = 0.0;
  double q = 0.0;
  SupEstimate sup;
  std::vector<BoundRow> rows;
};

// E_PARAM if the parameters are outside the strict window, if the kernel
// supremum is not Bounded, or if a family member is constant.
BoundCheckReport bound_check(const std::vector<TruncatedPowerSeries>& family,
                             const SymbolSpec& phi, double sigma, double beta,
                             const BoundCheckSettings& settings = {});

}  // namespace dirbound

#endif  // DIRBOUND_OPERATORS_HPP_
