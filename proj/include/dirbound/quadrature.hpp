#ifndef DIRBOUND_QUADRATURE_HPP_
#define DIRBOUND_QUADRATURE_HPP_

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "dirbound/complexfn.hpp"
#include "dirbound/error.hpp"

namespace dirbound {

// Gauss-Jacobi rule for weight (1-x)^alpha (1+x)^beta on [-1, 1].
struct GaussJacobiRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussJacobiRule gauss_jacobi(std::size_t n, double alpha, double beta);

// Quadrature for the probability measure dA_sigma = (sigma+1)(1-|z|^2)^sigma dA
// on the disc, dA = dx dy / pi. With t = r^2 the radial part is
// (sigma+1) int_0^1 (1-t)^sigma h(t) dt; the angular part is the uniform rule.
struct DiscRule {
  double sigma = 0.0;
  std::vector<double> radial_nodes;    // t_i in (0, 1)
  std::vector<double> radial_weights;  // include c_sigma; sum to 1
  std::size_t angular_count = 0;
  double normalization = 1.0;          // c_sigma = sigma + 1

  std::size_t radial_count() const noexcept { return radial_nodes.size(); }
  std::size_t size() const noexcept { return radial_nodes.size() * angular_count; }
  double radius(std::size_t i) const { return std::sqrt(radial_nodes[i]); }
  double angle(std::size_t j) const {
    return kTwoPi * static_cast<double>(j) / static_cast<double>(angular_count);
  }
  Complex node(std::size_t i, std::size_t j) const { return std::polar(radius(i), angle(j)); }
  double weight(std::size_t i) const {
    return radial_weights[i] / static_cast<double>(angular_count);
  }
};

struct BidiscRule {
  DiscRule rule_z;
  DiscRule rule_w;
};

// Throws E_PARAM for sigma <= -1, n_rad < 2 or n_ang < 4.
DiscRule build_disc_rule(double sigma, std::size_t n_rad, std::size_t n_ang);
BidiscRule build_bidisc_rule(double sigma_z, double sigma_w, std::size_t n_rad,
                             std::size_t n_ang);

// Sum in a fixed pairwise order: deterministic and O(eps log n) accurate.
template <class T>
T pairwise_sum(std::span<const T> values) {
  constexpr std::size_t kBlock = 32;
  if (values.size() <= kBlock) {
    T acc{};
    for (const T& v : values) acc += v;
    return acc;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

namespace detail {

inline bool is_finite(double v) { return std::isfinite(v); }
inline bool is_finite(Complex v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

[[noreturn]] void throw_non_finite(Complex z);
[[noreturn]] void throw_non_finite(Complex z, Complex w);

}  // namespace detail

// int_D g dA_sigma. g returns double or Complex.
template <class F>
auto integrate_disc(const DiscRule& rule, F&& g) {
  using T = std::decay_t<std::invoke_result_t<F&, Complex>>;
  std::vector<T> terms;
  terms.reserve(rule.size());
  for (std::size_t i = 0; i < rule.radial_count(); ++i) {
    const double w = rule.weight(i);
    for (std::size_t j = 0; j < rule.angular_count; ++j) {
      const Complex z = rule.node(i, j);
      const T v = g(z);
      if (!detail::is_finite(v)) detail::throw_non_finite(z);
      terms.push_back(w * v);
    }
  }
  return pairwise_sum(std::span<const T>(terms));
}

// int_{D^2} G(z, w) dA_sigma(z) dA_tau(w): inner pairwise sum over w for each
// z node, then a pairwise sum over z.
template <class F>
auto integrate_bidisc(const BidiscRule& rule, F&& g) {
  using T = std::decay_t<std::invoke_result_t<F&, Complex, Complex>>;
  const DiscRule& rz = rule.rule_z;
  const DiscRule& rw = rule.rule_w;
  std::vector<Complex> w_nodes;
  std::vector<double> w_weights;
  w_nodes.reserve(rw.size());
  w_weights.reserve(rw.size());
  for (std::size_t k = 0; k < rw.radial_count(); ++k) {
    for (std::size_t l = 0; l < rw.angular_count; ++l) {
      w_nodes.push_back(rw.node(k, l));
      w_weights.push_back(rw.weight(k));
    }
  }
  std::vector<T> outer;
  outer.reserve(rz.size());
  std::vector<T> inner(w_nodes.size());
  for (std::size_t i = 0; i < rz.radial_count(); ++i) {
    const double wz = rz.weight(i);
    for (std::size_t j = 0; j < rz.angular_count; ++j) {
      const Complex z = rz.node(i, j);
      for (std::size_t m = 0; m < w_nodes.size(); ++m) {
        const T v = g(z, w_nodes[m]);
        if (!detail::is_finite(v)) detail::throw_non_finite(z, w_nodes[m]);
        inner[m] = w_weights[m] * v;
      }
      outer.push_back(wz * pairwise_sum(std::span<const T>(inner)));
    }
  }
  return pairwise_sum(std::span<const T>(outer));
}

struct QuadratureSettings {
  std::size_t radial_count = 16;
  std::size_t angular_count = 64;
  std::size_t refinement_factor = 2;
  double target_rel_tol = 1e-10;
  std::size_t max_refinements = 3;

  // Throws E_PARAM unless all counts are positive, factor >= 2 and
  // target_rel_tol in (0, 0.1].
  void validate() const;
};

struct RuleSize {
  std::size_t radial_count = 0;
  std::size_t angular_count = 0;
};

struct TraceEntry {
  RuleSize size;
  double value = 0.0;
};

struct RefinementResult {
  double value = 0.0;
  double achieved_rel_tol = 0.0;
  bool converged = false;
  std::vector<TraceEntry> trace;
};

// E_CONVERGENCE carrying the partial result for diagnosis.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& message, RefinementResult partial)
      : Error(ErrorCode::kConvergence, message), partial_(std::move(partial)) {}
  const RefinementResult& partial() const noexcept { return partial_; }

 private:
  RefinementResult partial_;
};

double relative_change(double previous, double current);

// Evaluates `functional` on successively refined rule sizes until the
// relative change between consecutive values is <= target_rel_tol. Throws
// ConvergenceError when max_refinements is exhausted.
RefinementResult refine_until(const QuadratureSettings& settings,
                              const std::function<double(RuleSize)>& functional);

}  // namespace dirbound

#endif  // DIRBOUND_QUADRATURE_HPP_
