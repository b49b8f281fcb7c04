#include "dirbound/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace dirbound {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

// (1 - |a|^2) / ((1 - conj(a) z)(1 - a conj(w))), the kernel of one Mobius factor.
Complex mobius_kernel(Complex a, Complex z, Complex w) {
  return (1.0 - std::norm(a)) / ((1.0 - std::conj(a) * z) * (1.0 - a * std::conj(w)));
}

Complex mobius_factor(Complex a, Complex z) { return (a - z) / (1.0 - std::conj(a) * z); }

// Factorized kernel for the inner catalog variants; empty for polynomials.
std::optional<Complex> structured_kernel(const SymbolSpec& phi, Complex z, Complex w) {
  return std::visit(
      Overloaded{
          [](const symbols::Identity&) -> std::optional<Complex> { return Complex{1.0, 0.0}; },
          [](const symbols::Rotation&) -> std::optional<Complex> { return Complex{1.0, 0.0}; },
          [&](const symbols::MobiusAuto& m) -> std::optional<Complex> {
            return mobius_kernel(m.a, z, w);
          },
          [&](const symbols::Monomial& m) -> std::optional<Complex> {
            // 1 + u + ... + u^{k-1}, u = z conj(w)
            const Complex u = z * std::conj(w);
            Complex acc{0.0, 0.0};
            for (int i = 0; i < m.k; ++i) acc = acc * u + 1.0;
            return acc;
          },
          [&](const symbols::FiniteBlaschke& b) -> std::optional<Complex> {
            // 1 - prod u_j = sum_j (prod_{i<j} u_i)(1 - u_j)
            Complex prefix{1.0, 0.0};
            Complex acc{0.0, 0.0};
            for (const Complex& a : b.zeros) {
              acc += prefix * mobius_kernel(a, z, w);
              prefix *= mobius_factor(a, z) * std::conj(mobius_factor(a, w));
            }
            return acc;
          },
          [](const symbols::Polynomial&) -> std::optional<Complex> { return std::nullopt; },
      },
      phi.variant());
}

// Neville extrapolation to h = 0 of the points (h[i], g[i]).
double extrapolate_to_zero(std::span<const double> h, std::span<const double> g) {
  std::vector<double> p(g.begin(), g.end());
  const std::size_t n = p.size();
  for (std::size_t level = 1; level < n; ++level) {
    for (std::size_t i = 0; i + level < n; ++i) {
      p[i] = (h[i] * p[i + 1] - h[i + level] * p[i]) / (h[i] - h[i + level]);
    }
  }
  return p[0];
}

double wrap_difference(double a, double b) { return std::remainder(a - b, kTwoPi); }

void check_random_sample_count(std::size_t samples) {
  if (samples == 0) throw Error(ErrorCode::kParam, "sample count must be positive");
}

Complex random_interior_point(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double r = 0.999 * std::sqrt(unit(rng));
  return std::polar(r, kTwoPi * unit(rng));
}

}  // namespace

Complex eval_kernel(const SymbolSpec& phi, Complex z, Complex w, double singular_threshold) {
  const Complex phi_z = eval_symbol(phi, z);  // also enforces the verified gate
  if (auto k = structured_kernel(phi, z, w)) return *k;
  const Complex denom = 1.0 - z * std::conj(w);
  if (std::abs(denom) < singular_threshold) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "|1 - z conj(w)| = " << std::abs(denom) << " below " << singular_threshold
        << " at z = " << z << ", w = " << w;
    throw Error(ErrorCode::kSingular, msg.str());
  }
  return (1.0 - phi_z * std::conj(eval_symbol(phi, w))) / denom;
}

std::vector<double> default_diagonal_radii() {
  std::vector<double> radii;
  for (int k = 3; k <= 14; ++k) radii.push_back(1.0 - std::ldexp(1.0, -k));
  return radii;
}

double diagonal_boundary_value(const SymbolSpec& phi, BoundaryPoint zeta,
                               std::span<const double> radii, double contact_tol) {
  constexpr std::size_t kDepth = 4;
  constexpr double kSettleTol = 1e-7;
  const std::vector<double> fallback = radii.empty() ? default_diagonal_radii() : std::vector<double>{};
  if (radii.empty()) radii = fallback;
  if (radii.size() < kDepth + 2) {
    throw Error(ErrorCode::kParam, "diagonal extrapolation needs at least 6 radii");
  }
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0 && radii[i] < 1.0) || (i > 0 && !(radii[i] > radii[i - 1]))) {
      throw Error(ErrorCode::kParam, "radii must increase strictly inside (0, 1)");
    }
  }
  const Complex point = zeta.point();
  const double gap = 1.0 - std::abs(eval_symbol(phi, point));
  if (gap > contact_tol) {
    std::ostringstream msg;
    msg << "angle " << zeta.angle() << " is not a contact point (1 - |phi| = " << gap << ")";
    throw Error(ErrorCode::kParam, msg.str());
  }

  std::vector<double> h(radii.size());
  std::vector<double> g(radii.size());
  for (std::size_t i = 0; i < radii.size(); ++i) {
    const double r = radii[i];
    h[i] = 1.0 - r;
    g[i] = (1.0 - std::norm(eval_symbol(phi, r * point))) / ((1.0 - r) * (1.0 + r));
  }
  const std::size_t n = radii.size();
  const std::size_t w = kDepth + 1;
  const double last = extrapolate_to_zero(std::span(h).subspan(n - w, w),
                                          std::span(g).subspan(n - w, w));
  const double previous = extrapolate_to_zero(std::span(h).subspan(n - w - 1, w),
                                              std::span(g).subspan(n - w - 1, w));
  if (!std::isfinite(last) ||
      std::abs(last - previous) > kSettleTol * std::max(1.0, std::abs(last))) {
    std::ostringstream msg;
    msg << "radial limit at angle " << zeta.angle() << " does not settle (" << previous
        << " vs " << last << ")";
    throw Error(ErrorCode::kConvergence, msg.str());
  }
  return last;
}

namespace {

class TorusSearch {
 public:
  TorusSearch(const SymbolSpec& phi, const SupSettings& settings)
      : phi_(phi), settings_(settings) {}

  // |k(e^{ia}, e^{ib})|, or NaN where it cannot be evaluated.
  double modulus(double a, double b, Complex phi_a, Complex phi_b) const {
    const double diff = wrap_difference(a, b);
    const double denom = 2.0 * std::abs(std::sin(0.5 * diff));
    const Complex z = std::polar(1.0, a);
    const Complex w = std::polar(1.0, b);
    // Catalog kernels are already free of the 0/0 on the diagonal.
    if (auto k = structured_kernel(phi_, z, w)) return std::abs(*k);
    if (denom < settings_.near_diagonal) {
      const BoundaryPoint mid(b + 0.5 * diff);
      const double gap = 1.0 - std::abs(eval_symbol(phi_, mid.point()));
      if (gap <= settings_.contact_tol) {
        try {
          return std::abs(diagonal_boundary_value(phi_, mid, {}, settings_.contact_tol));
        } catch (const Error&) {
          return std::numeric_limits<double>::quiet_NaN();
        }
      }
    }
    if (denom == 0.0) return std::numeric_limits<double>::quiet_NaN();
    return std::abs(1.0 - phi_a * std::conj(phi_b)) / denom;
  }

  // Evaluates the grid a_u x b_v, updating the running max (strict >, so the
  // lowest index wins ties).
  void scan(std::span<const double> za, std::span<const double> wb) {
    std::vector<Complex> phi_a(za.size());
    std::vector<Complex> phi_b(wb.size());
    for (std::size_t u = 0; u < za.size(); ++u) phi_a[u] = eval_symbol(phi_, std::polar(1.0, za[u]));
    for (std::size_t v = 0; v < wb.size(); ++v) phi_b[v] = eval_symbol(phi_, std::polar(1.0, wb[v]));
    for (std::size_t u = 0; u < za.size(); ++u) {
      for (std::size_t v = 0; v < wb.size(); ++v) {
        const double m = modulus(za[u], wb[v], phi_a[u], phi_b[v]);
        if (m > best_) {
          best_ = m;
          best_a_ = za[u];
          best_b_ = wb[v];
        }
      }
    }
  }

  double best() const { return best_; }
  double best_a() const { return best_a_; }
  double best_b() const { return best_b_; }

 private:
  const SymbolSpec& phi_;
  const SupSettings& settings_;
  double best_ = 0.0;
  double best_a_ = 0.0;
  double best_b_ = 0.0;
};

}  // namespace

SupEstimate estimate_sup(const SymbolSpec& phi, const SupSettings& settings) {
  if (settings.grid < 8) throw Error(ErrorCode::kParam, "sup grid must have at least 8 points");
  if (settings.local_points < 3 || settings.local_points % 2 == 0) {
    throw Error(ErrorCode::kParam, "local_points must be odd and >= 3");
  }
  eval_symbol(phi, Complex{});  // verified gate

  SupEstimate est;
  TorusSearch search(phi, settings);

  double spacing = kTwoPi / static_cast<double>(settings.grid);
  std::vector<double> coarse(settings.grid);
  for (std::size_t j = 0; j < settings.grid; ++j) coarse[j] = spacing * static_cast<double>(j);
  search.scan(coarse, coarse);
  est.trace.push_back({kTwoPi / spacing, search.best()});

  const std::size_t half = (settings.local_points - 1) / 2;
  for (std::size_t level = 0; level < settings.max_refinements; ++level) {
    const double previous = search.best();
    const double center_a = search.best_a();
    const double center_b = search.best_b();
    const double fine = spacing / static_cast<double>(half);
    std::vector<double> za(settings.local_points);
    std::vector<double> wb(settings.local_points);
    for (std::size_t u = 0; u < settings.local_points; ++u) {
      const double offset = fine * (static_cast<double>(u) - static_cast<double>(half));
      za[u] = center_a + offset;
      wb[u] = center_b + offset;
    }
    search.scan(za, wb);
    spacing = fine;
    const double current = search.best();
    est.trace.push_back({kTwoPi / spacing, current});

    if (current > settings.divergence_threshold && current >= settings.growth_factor * previous) {
      est.verdict = SupVerdict::kUnbounded;
      break;
    }
    const double change = previous > 0.0 ? (current - previous) / current : 1.0;
    if (change <= settings.stabilization_tol) {
      est.verdict = SupVerdict::kBounded;
      break;
    }
  }

  est.value = search.best();
  est.infinite = est.verdict == SupVerdict::kUnbounded;
  est.argmax_z = BoundaryPoint(search.best_a());
  est.argmax_w = BoundaryPoint(search.best_b());

  std::mt19937_64 rng(settings.seed);
  for (std::size_t s = 0; s < settings.interior_samples; ++s) {
    const Complex z = random_interior_point(rng);
    const Complex w = random_interior_point(rng);
    const double m = std::abs(eval_kernel(phi, z, w));
    est.interior_max = std::max(est.interior_max, m);
    if (m > est.value * (1.0 + settings.interior_rel_tol)) ++est.interior_violations;
  }
  if (est.verdict == SupVerdict::kBounded && est.interior_violations > 0) {
    est.verdict = SupVerdict::kInconclusive;
  }
  return est;
}

double closed_form_sup(const SymbolSpec& phi) {
  return std::visit(
      Overloaded{
          [](const symbols::Identity&) { return 1.0; },
          [](const symbols::Rotation&) { return 1.0; },
          [](const symbols::MobiusAuto& m) {
            const double r = std::abs(m.a);
            return (1.0 + r) / (1.0 - r);
          },
          [](const symbols::Monomial& m) { return static_cast<double>(m.k); },
          [](const symbols::FiniteBlaschke&) -> double {
            throw Error(ErrorCode::kParam, "no closed-form supremum for blaschke symbols");
          },
          [](const symbols::Polynomial&) -> double {
            throw Error(ErrorCode::kParam, "no closed-form supremum for polynomial symbols");
          },
      },
      phi.variant());
}

double pointwise_kernel_identity_check(const SymbolSpec& phi, std::size_t samples,
                                       std::uint64_t seed) {
  check_random_sample_count(samples);
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    const Complex z = random_interior_point(rng);
    const Complex w = random_interior_point(rng);
    const double lhs = std::abs(1.0 - eval_symbol(phi, z) * std::conj(eval_symbol(phi, w)));
    const double rhs = std::abs(eval_kernel(phi, z, w)) * std::abs(1.0 - z * std::conj(w));
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

}  // namespace dirbound
