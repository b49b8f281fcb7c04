#include "dirbound/complexfn.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dirbound {

struct SelfMapAccess {
  static void mark_verified(SymbolSpec& phi) {
    if (auto* poly = std::get_if<symbols::Polynomial>(&phi.variant_)) {
      poly->verified_ = true;
    }
  }
};

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

Complex horner(std::span<const Complex> c, Complex z) {
  Complex acc{0.0, 0.0};
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + *it;
  return acc;
}

Complex horner_deriv(std::span<const Complex> c, Complex z) {
  Complex acc{0.0, 0.0};
  for (std::size_t n = c.size(); n-- > 1;) acc = acc * z + static_cast<double>(n) * c[n];
  return acc;
}

Complex mobius_factor(Complex a, Complex z) { return (a - z) / (1.0 - std::conj(a) * z); }

Complex mobius_factor_deriv(Complex a, Complex z) {
  const Complex d = 1.0 - std::conj(a) * z;
  return (std::norm(a) - 1.0) / (d * d);
}

void require_verified(const SymbolSpec& phi) {
  if (!phi.verified()) {
    throw Error(ErrorCode::kSymbol,
                "polynomial symbol has not passed verify_self_map");
  }
}

}  // namespace

TruncatedPowerSeries::TruncatedPowerSeries(std::vector<Complex> coeffs)
    : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) coeffs_.push_back(Complex{});
}

TruncatedPowerSeries TruncatedPowerSeries::monomial(std::size_t n, Complex c) {
  std::vector<Complex> coeffs(n + 1, Complex{});
  coeffs[n] = c;
  return TruncatedPowerSeries(std::move(coeffs));
}

TruncatedPowerSeries TruncatedPowerSeries::scaled(Complex c) const {
  std::vector<Complex> out(coeffs_);
  for (auto& a : out) a *= c;
  return TruncatedPowerSeries(std::move(out));
}

Complex eval_series(const TruncatedPowerSeries& s, Complex z) {
  return horner(s.coeffs(), z);
}

TruncatedPowerSeries differentiate(const TruncatedPowerSeries& s) {
  if (s.order() == 0) return TruncatedPowerSeries({Complex{}});
  std::vector<Complex> out(s.order());
  for (std::size_t n = 0; n < out.size(); ++n) {
    out[n] = static_cast<double>(n + 1) * s[n + 1];
  }
  return TruncatedPowerSeries(std::move(out));
}

BoundaryPoint::BoundaryPoint(double angle) {
  angle = std::fmod(angle, kTwoPi);
  if (angle < 0.0) angle += kTwoPi;
  if (angle >= kTwoPi) angle = 0.0;
  angle_ = angle;
}

SymbolSpec SymbolSpec::identity() { return SymbolSpec(symbols::Identity{}); }

SymbolSpec SymbolSpec::rotation(double angle) {
  if (!std::isfinite(angle)) throw Error(ErrorCode::kSymbol, "rotation angle must be finite");
  return SymbolSpec(symbols::Rotation{angle});
}

SymbolSpec SymbolSpec::mobius(Complex a, double post_rotation) {
  if (!(std::abs(a) < 1.0)) {
    throw Error(ErrorCode::kSymbol, "mobius parameter must satisfy |a| < 1");
  }
  return SymbolSpec(symbols::MobiusAuto{a, post_rotation});
}

SymbolSpec SymbolSpec::monomial(int k) {
  if (k < 1) throw Error(ErrorCode::kSymbol, "monomial degree must be >= 1");
  return SymbolSpec(symbols::Monomial{k});
}

SymbolSpec SymbolSpec::blaschke(std::vector<Complex> zeros, double post_rotation) {
  for (std::size_t j = 0; j < zeros.size(); ++j) {
    if (!(std::abs(zeros[j]) < 1.0)) {
      std::ostringstream msg;
      msg << "blaschke zero " << j << " lies outside the open disc";
      throw Error(ErrorCode::kSymbol, msg.str());
    }
  }
  return SymbolSpec(symbols::FiniteBlaschke{std::move(zeros), post_rotation});
}

SymbolSpec SymbolSpec::polynomial(std::vector<Complex> coeffs) {
  if (coeffs.empty()) coeffs.push_back(Complex{});
  return SymbolSpec(symbols::Polynomial(std::move(coeffs)));
}

std::string_view SymbolSpec::type_name() const noexcept {
  return std::visit(
      Overloaded{
          [](const symbols::Identity&) -> std::string_view { return "identity"; },
          [](const symbols::Rotation&) -> std::string_view { return "rotation"; },
          [](const symbols::MobiusAuto&) -> std::string_view { return "mobius"; },
          [](const symbols::Monomial&) -> std::string_view { return "monomial"; },
          [](const symbols::FiniteBlaschke&) -> std::string_view { return "blaschke"; },
          [](const symbols::Polynomial&) -> std::string_view { return "poly"; },
      },
      variant_);
}

bool SymbolSpec::verified() const noexcept {
  if (const auto* poly = std::get_if<symbols::Polynomial>(&variant_)) return poly->verified();
  return true;
}

bool SymbolSpec::is_inner() const noexcept {
  return !std::holds_alternative<symbols::Polynomial>(variant_);
}

Complex eval_symbol(const SymbolSpec& phi, Complex z) {
  require_verified(phi);
  return std::visit(
      Overloaded{
          [&](const symbols::Identity&) { return z; },
          [&](const symbols::Rotation& r) { return std::polar(1.0, r.angle) * z; },
          [&](const symbols::MobiusAuto& m) {
            return std::polar(1.0, m.post_rotation) * mobius_factor(m.a, z);
          },
          [&](const symbols::Monomial& m) { return std::pow(z, m.k); },
          [&](const symbols::FiniteBlaschke& b) {
            Complex acc = std::polar(1.0, b.post_rotation);
            for (const Complex& a : b.zeros) acc *= mobius_factor(a, z);
            return acc;
          },
          [&](const symbols::Polynomial& p) { return horner(p.coeffs(), z); },
      },
      phi.variant());
}

Complex eval_symbol_deriv(const SymbolSpec& phi, Complex z) {
  require_verified(phi);
  return std::visit(
      Overloaded{
          [&](const symbols::Identity&) { return Complex{1.0, 0.0}; },
          [&](const symbols::Rotation& r) { return std::polar(1.0, r.angle); },
          [&](const symbols::MobiusAuto& m) {
            return std::polar(1.0, m.post_rotation) * mobius_factor_deriv(m.a, z);
          },
          [&](const symbols::Monomial& m) {
            return static_cast<double>(m.k) * std::pow(z, m.k - 1);
          },
          [&](const symbols::FiniteBlaschke& b) {
            // Product rule; avoids dividing by a vanishing factor.
            const std::size_t n = b.zeros.size();
            Complex sum{0.0, 0.0};
            for (std::size_t j = 0; j < n; ++j) {
              Complex term = mobius_factor_deriv(b.zeros[j], z);
              for (std::size_t i = 0; i < n; ++i) {
                if (i != j) term *= mobius_factor(b.zeros[i], z);
              }
              sum += term;
            }
            return std::polar(1.0, b.post_rotation) * sum;
          },
          [&](const symbols::Polynomial& p) { return horner_deriv(p.coeffs(), z); },
      },
      phi.variant());
}

SymbolSpec post_rotated(const SymbolSpec& phi, double angle) {
  return std::visit(
      Overloaded{
          [&](const symbols::Identity&) { return SymbolSpec::rotation(angle); },
          [&](const symbols::Rotation& r) { return SymbolSpec::rotation(r.angle + angle); },
          [&](const symbols::MobiusAuto& m) {
            return SymbolSpec::mobius(m.a, m.post_rotation + angle);
          },
          [&](const symbols::Monomial& m) {
            // z^k = (-1)^k prod (0 - z)
            std::vector<Complex> zeros(static_cast<std::size_t>(m.k), Complex{});
            const double sign_fix = (m.k % 2 == 0) ? 0.0 : kTwoPi / 2.0;
            return SymbolSpec::blaschke(std::move(zeros), angle + sign_fix);
          },
          [&](const symbols::FiniteBlaschke& b) {
            return SymbolSpec::blaschke(b.zeros, b.post_rotation + angle);
          },
          [&](const symbols::Polynomial& p) {
            const Complex unit = std::polar(1.0, angle);
            std::vector<Complex> coeffs(p.coeffs().begin(), p.coeffs().end());
            for (auto& c : coeffs) c *= unit;
            SymbolSpec out = SymbolSpec::polynomial(std::move(coeffs));
            if (p.verified()) SelfMapAccess::mark_verified(out);
            return out;
          },
      },
      phi.variant());
}

DiscFunction DiscFunction::from_series(TruncatedPowerSeries s) {
  TruncatedPowerSeries ds = differentiate(s);
  DiscFunction f;
  f.value = [s](Complex z) { return eval_series(s, z); };
  f.derivative = [ds = std::move(ds)](Complex z) { return eval_series(ds, z); };
  f.series = std::move(s);
  return f;
}

DiscFunction DiscFunction::from_symbol(SymbolSpec phi) {
  require_verified(phi);
  DiscFunction f;
  f.value = [phi](Complex z) { return eval_symbol(phi, z); };
  f.derivative = [phi](Complex z) { return eval_symbol_deriv(phi, z); };
  if (const auto* p = std::get_if<symbols::Polynomial>(&phi.variant())) {
    f.series = TruncatedPowerSeries({p->coeffs().begin(), p->coeffs().end()});
  }
  return f;
}

namespace {

std::vector<Complex> sample_coefficients(const std::function<Complex(Complex)>& g,
                                         std::size_t order, double radius,
                                         std::size_t samples) {
  std::vector<Complex> values(samples);
  for (std::size_t j = 0; j < samples; ++j) {
    values[j] = g(radius * std::polar(1.0, kTwoPi * static_cast<double>(j) /
                                               static_cast<double>(samples)));
  }
  // Twiddles indexed by (j n mod M) keep the phases exact.
  std::vector<Complex> twiddle(samples);
  for (std::size_t j = 0; j < samples; ++j) {
    twiddle[j] = std::polar(1.0, -kTwoPi * static_cast<double>(j) / static_cast<double>(samples));
  }
  std::vector<Complex> coeffs(order + 1);
  double scale = 1.0;
  for (std::size_t n = 0; n <= order; ++n) {
    Complex acc{0.0, 0.0};
    for (std::size_t j = 0; j < samples; ++j) acc += values[j] * twiddle[(j * n) % samples];
    coeffs[n] = acc / (static_cast<double>(samples) * scale);
    scale *= radius;
  }
  return coeffs;
}

}  // namespace

ExtractedSeries coefficients_of(const std::function<Complex(Complex)>& g, std::size_t order,
                                const CoefficientOptions& options) {
  const auto in_unit = [](double r) { return r > 0.0 && r < 1.0; };
  if (!in_unit(options.radius) || !in_unit(options.check_radius)) {
    throw Error(ErrorCode::kParam, "sampling radii must lie in (0, 1)");
  }
  std::size_t samples = options.samples;
  if (samples == 0) {
    samples = 64;
    while (samples < 4 * (order + 1)) samples *= 2;
  }
  if (samples < order + 1) {
    throw Error(ErrorCode::kParam, "need at least order + 1 circle samples");
  }

  auto primary = sample_coefficients(g, order, options.radius, samples);
  const auto check = sample_coefficients(g, order, options.check_radius, samples);
  double discrepancy = 0.0;
  for (std::size_t n = 0; n <= order; ++n) {
    discrepancy = std::max(discrepancy, std::abs(primary[n] - check[n]));
  }
  if (!(discrepancy <= options.tolerance)) {
    std::ostringstream msg;
    msg << "coefficient extraction disagrees between radii " << options.radius << " and "
        << options.check_radius << " by " << discrepancy;
    throw Error(ErrorCode::kConvergence, msg.str());
  }
  return {TruncatedPowerSeries(std::move(primary)), discrepancy};
}

SelfMapVerdict verify_self_map(const SymbolSpec& phi, std::size_t grid, double tol,
                               double contact_tol) {
  if (grid < 256) throw Error(ErrorCode::kParam, "self-map check needs at least 256 points");

  // Evaluate without the verified gate: this is the gate.
  SymbolSpec probe = phi;
  SelfMapAccess::mark_verified(probe);
  const auto modulus = [&](double angle) {
    return std::abs(eval_symbol(probe, std::polar(1.0, angle)));
  };

  const double step = kTwoPi / static_cast<double>(grid);
  std::size_t best = 0;
  double best_value = -1.0;
  for (std::size_t j = 0; j < grid; ++j) {
    const double v = modulus(step * static_cast<double>(j));
    if (v > best_value) {
      best_value = v;
      best = j;
    }
  }

  // Golden-section refinement of the maximum inside the neighbouring cells.
  double lo = step * (static_cast<double>(best) - 1.0);
  double hi = step * (static_cast<double>(best) + 1.0);
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - ratio * (hi - lo);
  double x2 = lo + ratio * (hi - lo);
  double f1 = modulus(x1);
  double f2 = modulus(x2);
  for (int it = 0; it < 80; ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + ratio * (hi - lo);
      f2 = modulus(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - ratio * (hi - lo);
      f1 = modulus(x1);
    }
  }
  double best_angle = step * static_cast<double>(best);
  if (std::max(f1, f2) > best_value) {
    best_value = std::max(f1, f2);
    best_angle = f1 > f2 ? x1 : x2;
  }

  if (best_value > 1.0 + tol) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "|phi| = " << best_value << " > 1 at boundary angle "
        << BoundaryPoint(best_angle).angle();
    throw Error(ErrorCode::kSymbol, msg.str());
  }
  return {probe, best_value, BoundaryPoint(best_angle), best_value >= 1.0 - contact_tol};
}

}  // namespace dirbound
