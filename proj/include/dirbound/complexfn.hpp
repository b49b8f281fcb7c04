#ifndef DIRBOUND_COMPLEXFN_HPP_
#define DIRBOUND_COMPLEXFN_HPP_

#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "dirbound/error.hpp"

namespace dirbound {

using Complex = std::complex<double>;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

// A holomorphic function on the disc given by its coefficients a_0..a_N.
// The length of the coefficient list is authoritative: trailing zeros are kept.
class TruncatedPowerSeries {
 public:
  TruncatedPowerSeries() : coeffs_{Complex{0.0, 0.0}} {}
  explicit TruncatedPowerSeries(std::vector<Complex> coeffs);

  // c * z^n
  static TruncatedPowerSeries monomial(std::size_t n, Complex c = 1.0);

  std::size_t order() const noexcept { return coeffs_.size() - 1; }
  std::span<const Complex> coeffs() const noexcept { return coeffs_; }
  Complex operator[](std::size_t n) const noexcept {
    return n < coeffs_.size() ? coeffs_[n] : Complex{};
  }

  TruncatedPowerSeries scaled(Complex c) const;

 private:
  std::vector<Complex> coeffs_;
};

// Horner evaluation; eval_series(s, 0) == a_0 exactly.
Complex eval_series(const TruncatedPowerSeries& s, Complex z);

// Coefficient n of the result is (n+1) a_{n+1}; constants map to [0].
TruncatedPowerSeries differentiate(const TruncatedPowerSeries& s);

// A point e^{i angle} of the unit circle, stored by its angle in [0, 2pi).
class BoundaryPoint {
 public:
  BoundaryPoint() = default;
  explicit BoundaryPoint(double angle);

  double angle() const noexcept { return angle_; }
  Complex point() const noexcept { return std::polar(1.0, angle_); }

 private:
  double angle_ = 0.0;
};

struct SelfMapAccess;

namespace symbols {

struct Identity {};

struct Rotation {
  double angle = 0.0;
};

// e^{i post_rotation} (a - z) / (1 - conj(a) z), |a| < 1.
struct MobiusAuto {
  Complex a;
  double post_rotation = 0.0;
};

// z^k, k >= 1.
struct Monomial {
  int k = 1;
};

// e^{i post_rotation} prod_j (a_j - z) / (1 - conj(a_j) z), each |a_j| < 1.
struct FiniteBlaschke {
  std::vector<Complex> zeros;
  double post_rotation = 0.0;
};

// An arbitrary polynomial. It becomes usable as a symbol only once
// verify_self_map has confirmed sup_T |phi| <= 1.
class Polynomial {
 public:
  explicit Polynomial(std::vector<Complex> coeffs) : coeffs_(std::move(coeffs)) {}

  std::span<const Complex> coeffs() const noexcept { return coeffs_; }
  bool verified() const noexcept { return verified_; }

 private:
  friend struct dirbound::SelfMapAccess;
  std::vector<Complex> coeffs_;
  bool verified_ = false;
};

}  // namespace symbols

// Closed catalog of holomorphic self-maps of the disc with exact derivatives.
class SymbolSpec {
 public:
  using Variant = std::variant<symbols::Identity, symbols::Rotation,
                               symbols::MobiusAuto, symbols::Monomial,
                               symbols::FiniteBlaschke, symbols::Polynomial>;

  static SymbolSpec identity();
  static SymbolSpec rotation(double angle);
  static SymbolSpec mobius(Complex a, double post_rotation = 0.0);
  static SymbolSpec monomial(int k);
  static SymbolSpec blaschke(std::vector<Complex> zeros, double post_rotation = 0.0);
  // Unverified; see verify_self_map.
  static SymbolSpec polynomial(std::vector<Complex> coeffs);

  const Variant& variant() const noexcept { return variant_; }

  // "identity", "rotation", "mobius", "monomial", "blaschke" or "poly".
  std::string_view type_name() const noexcept;

  // False only for a polynomial that has not passed verify_self_map.
  bool verified() const noexcept;

  // True for the variants with |phi| == 1 identically on the circle.
  bool is_inner() const noexcept;

 private:
  friend struct SelfMapAccess;
  explicit SymbolSpec(Variant v) : variant_(std::move(v)) {}
  Variant variant_;
};

// Throws E_SYMBOL for an unverified polynomial.
Complex eval_symbol(const SymbolSpec& phi, Complex z);
Complex eval_symbol_deriv(const SymbolSpec& phi, Complex z);

// e^{i angle} * phi, expressed again as a catalog symbol. The verified flag
// of a polynomial is carried over since post-rotation preserves |phi|.
SymbolSpec post_rotated(const SymbolSpec& phi, double angle);

// An evaluable disc function. `derivative` and `series` are optional.
struct DiscFunction {
  std::function<Complex(Complex)> value;
  std::function<Complex(Complex)> derivative;
  std::optional<TruncatedPowerSeries> series;

  static DiscFunction from_series(TruncatedPowerSeries s);
  static DiscFunction from_symbol(SymbolSpec phi);
};

struct CoefficientOptions {
  double radius = 0.9;
  double check_radius = 0.8;
  double tolerance = 1e-8;
  // Number of circle samples; 0 picks a power of two >= max(64, 4 (N+1)).
  std::size_t samples = 0;
};

struct ExtractedSeries {
  TruncatedPowerSeries series;
  // max_n |a_n(radius) - a_n(check_radius)|
  double discrepancy = 0.0;
};

// Taylor coefficients a_0..a_N of g from uniform samples on two circles.
// Throws E_PARAM on bad radii, E_CONVERGENCE if the two radii disagree by
// more than options.tolerance.
ExtractedSeries coefficients_of(const std::function<Complex(Complex)>& g,
                                std::size_t order,
                                const CoefficientOptions& options = {});

struct SelfMapVerdict {
  SymbolSpec symbol;       // verified copy of the input
  double max_modulus = 0;  // max over the circle of |phi|
  BoundaryPoint argmax;
  bool contact = false;    // max_modulus >= 1 - contact_tol
};

// Checks sup_T |phi| <= 1 + tol on `grid` circle points, refined around the
// grid maximum. Throws E_PARAM if grid < 256, E_SYMBOL naming the offending
// point if the check fails.
SelfMapVerdict verify_self_map(const SymbolSpec& phi, std::size_t grid = 4096,
                               double tol = 1e-12, double contact_tol = 1e-6);

}  // namespace dirbound

#endif  // DIRBOUND_COMPLEXFN_HPP_
