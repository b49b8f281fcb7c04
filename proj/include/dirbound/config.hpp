#ifndef DIRBOUND_CONFIG_HPP_
#define DIRBOUND_CONFIG_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dirbound/complexfn.hpp"
#include "dirbound/kernels.hpp"
#include "dirbound/norms.hpp"
#include "dirbound/operators.hpp"
#include "dirbound/quadrature.hpp"

namespace dirbound {

enum class Command { kNorm, kKernelSup, kRankCheck, kEquivalence, kBoundCheck, kSelfmapCheck };

std::string_view command_name(Command c);
// E_CONFIG for an unknown name.
Command command_from_name(std::string_view name);

struct FamilyMember {
  std::string label;  // e.g. "z^3", "mobius(0.5)^2", "geom_4"
  TruncatedPowerSeries series;
  double abscissa = 0.0;  // x value in plot files: n for named families, position otherwise
};

// Named families:
//   "monomials:a..b"            z^n
//   "mobius-monomials:a..b[:r]" (phi_r(z))^n, phi_r(z) = (r - z)/(1 - r z), r = 0.5 by default
//   "geometric:a..b"            1 + z + ... + z^n
// Throws E_CONFIG on malformed family strings.
std::vector<FamilyMember> expand_family(std::string_view spec,
                                        std::size_t truncation_order = 64);

struct RunConfig {
  Command command = Command::kKernelSup;
  std::optional<SymbolSpec> symbol;
  std::vector<FamilyMember> family;
  double sigma = 1.0;
  double tau = 1.0;
  double beta = 0.5;
  std::optional<double> p;  // explicit Dirichlet exponent for `norm`
  std::optional<WeightParams> params;  // validated window when the command needs one
  QuadratureSettings quadrature;       // per-command defaults unless overridden
  SupSettings sup;
  std::size_t scan_resolution = 4096;
  RankTolerances rank;
  std::size_t selfmap_grid = 4096;
  double selfmap_tol = 1e-12;
  double agreement_tol = 1e-8;  // norm: quadrature vs coefficient
  double band_limit = 10.0;     // equivalence: max/min ratio
  double closed_form_tol = 1e-3;
  std::string out_dir = ".";
};

struct CliOverrides {
  std::optional<std::string> out_dir;
  std::optional<std::size_t> refine;
  std::optional<std::uint64_t> seed;
};

// Parses a single JSON object. `command` comes from the CLI; a "command" field
// in the text must agree with it. Parameters are validated for the command
// before anything is computed: E_CONFIG (with field path) or E_PARAM.
RunConfig parse_config(std::string_view text, Command command, const CliOverrides& overrides = {});

}  // namespace dirbound

#endif  // DIRBOUND_CONFIG_HPP_
