#ifndef DIRBOUND_KERNELS_HPP_
#define DIRBOUND_KERNELS_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "dirbound/complexfn.hpp"

namespace dirbound {

// k(z, w) = (1 - phi(z) conj(phi(w))) / (1 - z conj(w)).
// Throws E_SINGULAR when |1 - z conj(w)| < singular_threshold.
Complex eval_kernel(const SymbolSpec& phi, Complex z, Complex w,
                    double singular_threshold = 1e-14);

// Default radii 1 - 2^{-k}, k = 3..14.
std::vector<double> default_diagonal_radii();

// Radial limit of k(r zeta, r zeta) = (1 - |phi(r zeta)|^2) / (1 - r^2) as
// r -> 1, by Richardson extrapolation in h = 1 - r. At a contact point this
// is the angular derivative |phi'(zeta)|. Throws E_PARAM if zeta is not a
// contact candidate (1 - |phi(zeta)| > contact_tol), E_CONVERGENCE if the
// extrapolated sequence does not settle.
double diagonal_boundary_value(const SymbolSpec& phi, BoundaryPoint zeta,
                               std::span<const double> radii = {},
                               double contact_tol = 1e-6);

enum class SupVerdict { kBounded, kUnbounded, kInconclusive };

constexpr std::string_view verdict_name(SupVerdict v) {
  switch (v) {
    case SupVerdict::kBounded: return "Bounded";
    case SupVerdict::kUnbounded: return "Unbounded";
    case SupVerdict::kInconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

struct SupSettings {
  std::size_t grid = 256;              // coarse torus grid per axis
  std::size_t local_points = 65;       // per axis, odd: window center is a node
  std::size_t max_refinements = 6;
  double stabilization_tol = 1e-9;     // relative change that means Bounded
  double divergence_threshold = 1e6;
  double growth_factor = 2.0;
  double near_diagonal = 1e-7;         // |1 - z conj(w)| below this uses the radial limit
  double contact_tol = 1e-6;
  std::size_t interior_samples = 1000;
  double interior_rel_tol = 1e-6;
  std::uint64_t seed = 0;
};

struct SupTraceEntry {
  double resolution = 0.0;  // 2 pi / grid spacing
  double running_max = 0.0;
};

struct SupEstimate {
  double value = 0.0;
  bool infinite = false;  // set with verdict Unbounded
  BoundaryPoint argmax_z;
  BoundaryPoint argmax_w;
  std::vector<SupTraceEntry> trace;
  SupVerdict verdict = SupVerdict::kInconclusive;
  double interior_max = 0.0;
  std::size_t interior_violations = 0;
};

// Supremum of |k| over the bidisc, searched on the torus T x T: |k| is the
// modulus of a function holomorphic in z and anti-holomorphic in w, so the
// supremum sits on the distinguished boundary. A coarse uniform grid is
// followed by local refinements around the running argmax; random interior
// samples guard the boundary reduction.
SupEstimate estimate_sup(const SymbolSpec& phi, const SupSettings& settings = {});

// Identity/Rotation -> 1, MobiusAuto(a) -> (1+|a|)/(1-|a|), Monomial(k) -> k.
// E_PARAM for other variants.
double closed_form_sup(const SymbolSpec& phi);

// max | |1 - phi(z) conj(phi(w))| - |k(z,w)| |1 - z conj(w)| | over random
// interior pairs.
double pointwise_kernel_identity_check(const SymbolSpec& phi, std::size_t samples,
                                       std::uint64_t seed = 0);

}  // namespace dirbound

#endif  // DIRBOUND_KERNELS_HPP_
