#include "dirbound/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include "dirbound/kernels.hpp"
#include "dirbound/norms.hpp"
#include "dirbound/operators.hpp"
#include "dirbound/symbol_io.hpp"

namespace dirbound {

namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

std::string fmt(Complex c) {
  if (c.imag() == 0.0) return fmt(c.real());
  std::ostringstream os;
  os << c.real() << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag()) << "i";
  return os.str();
}

json trace_to_json(const std::vector<TraceEntry>& trace) {
  json out = json::array();
  for (const TraceEntry& t : trace) {
    out.push_back({{"radial", t.size.radial_count},
                   {"angular", t.size.angular_count},
                   {"value", number_to_json(t.value)}});
  }
  return out;
}

json sup_to_json(const SupEstimate& s) {
  json trace = json::array();
  for (const SupTraceEntry& t : s.trace) {
    trace.push_back({{"resolution", number_to_json(t.resolution)},
                     {"running_max", number_to_json(t.running_max)}});
  }
  return {{"value", number_to_json(s.value)},
          {"infinite", s.infinite},
          {"verdict", std::string(verdict_name(s.verdict))},
          {"argmax_z", s.argmax_z.angle()},
          {"argmax_w", s.argmax_w.angle()},
          {"interior_max", number_to_json(s.interior_max)},
          {"interior_violations", s.interior_violations},
          {"trace", trace}};
}

json rank_to_json(const RankReport& r) {
  json points = json::array();
  for (const BoundaryPoint& p : r.contact.points) points.push_back(p.angle());
  json derivs = json::array();
  for (double d : r.angular_derivatives) derivs.push_back(number_to_json(d));
  return {{"full_circle", r.contact.full_circle},
          {"contact_angles", points},
          {"exhaustive", r.contact.exhaustive},
          {"min_deriv_modulus", number_to_json(r.min_deriv_modulus)},
          {"min_deriv_angle", r.min_deriv_point.angle()},
          {"angular_derivatives", derivs},
          {"verdict", std::string(verdict_name(r.verdict))},
          {"note", r.note}};
}

// Polynomials from a config arrive unverified.
SymbolSpec ensure_verified(const RunConfig& cfg) {
  const SymbolSpec& phi = *cfg.symbol;
  if (phi.verified()) return phi;
  return verify_self_map(phi, cfg.selfmap_grid, cfg.selfmap_tol).symbol;
}

int sup_exit(SupVerdict v) {
  switch (v) {
    case SupVerdict::kBounded: return kExitOk;
    case SupVerdict::kUnbounded: return kExitNegative;
    case SupVerdict::kInconclusive: return kExitNumerical;
  }
  return kExitNumerical;
}

int rank_exit(RankVerdict v) {
  switch (v) {
    case RankVerdict::kPass:
    case RankVerdict::kVacuous: return kExitOk;
    case RankVerdict::kFail: return kExitNegative;
    case RankVerdict::kInconclusive: return kExitNumerical;
  }
  return kExitNumerical;
}

// Keeps the most severe code; config errors outrank numerical ones, which
// outrank negative verdicts.
void raise_exit(RunResult& r, int code, const std::string& why) {
  if (code == kExitOk) return;
  if (code > r.exit_code) r.exit_code = code;
  if (r.message.empty()) r.message = why;
}

class Experiment {
 public:
  Experiment(const RunConfig& cfg, RunResult& out) : cfg_(cfg), out_(out) {}

  void run() {
    switch (cfg_.command) {
      case Command::kNorm: norm(); break;
      case Command::kKernelSup: kernel_sup(); break;
      case Command::kRankCheck: rank_check(); break;
      case Command::kEquivalence: equivalence(); break;
      case Command::kBoundCheck: bound(); break;
      case Command::kSelfmapCheck: selfmap(); break;
    }
  }

 private:
  void add(std::string input, std::string quantity, double value, std::string method,
           double tolerance, std::string verdict, double wall_ms) {
    out_.report.rows.push_back({out_.report.experiment, std::move(input), std::move(quantity),
                                value, std::move(method), tolerance, std::move(verdict), wall_ms});
  }

  void norm() {
    const double p = *cfg_.p;
    PlotSeries plot{"norm", {}};
    json traces = json::array();
    for (const FamilyMember& m : cfg_.family) {
      const auto start = Clock::now();
      const NormResult coeff = dirichlet_norm_sq_coeff(m.series, p);
      add(m.label, "norm_sq", coeff.value_sq, "coefficient", 0.0, "Pass", ms_since(start));
      const auto qstart = Clock::now();
      const NormResult quad = dirichlet_norm_sq_quad(DiscFunction::from_series(m.series), p,
                                                     cfg_.quadrature);
      const double diff = relative_change(coeff.value_sq, quad.value_sq);
      const bool agree = diff <= cfg_.agreement_tol;
      add(m.label, "norm_sq", quad.value_sq, "quadrature", cfg_.agreement_tol,
          agree ? "Pass" : "Fail", ms_since(qstart));
      if (!agree) raise_exit(out_, kExitNumerical, m.label + ": quadrature and coefficient norms disagree");
      plot.points.emplace_back(m.abscissa, coeff.value_sq);
      traces.push_back({{"input", m.label},
                        {"p", p},
                        {"coefficient", number_to_json(coeff.value_sq)},
                        {"quadrature", trace_to_json(quad.trace)},
                        {"rel_diff", number_to_json(diff)}});
    }
    out_.report.traces["members"] = traces;
    out_.report.plots.push_back(std::move(plot));
  }

  void kernel_sup() {
    const SymbolSpec phi = ensure_verified(cfg_);
    const std::string input = describe_symbol(phi);
    const auto start = Clock::now();
    const SupEstimate sup = estimate_sup(phi, cfg_.sup);
    add(input, "sup_kernel", sup.value, "torus-search", cfg_.sup.stabilization_tol,
        std::string(verdict_name(sup.verdict)), ms_since(start));
    out_.report.traces["sup"] = sup_to_json(sup);
    raise_exit(out_, sup_exit(sup.verdict), input + ": kernel supremum verdict " +
                                                std::string(verdict_name(sup.verdict)));

    PlotSeries plot{"running_max", {}};
    for (const SupTraceEntry& t : sup.trace) plot.points.emplace_back(t.resolution, t.running_max);
    out_.report.plots.push_back(std::move(plot));

    // Catalog symbols with a known supremum get a cross-check in the trace.
    try {
      const double exact = closed_form_sup(phi);
      const double diff = std::abs(sup.value - exact);
      const bool ok = sup.verdict != SupVerdict::kBounded || diff <= cfg_.closed_form_tol;
      out_.report.traces["closed_form"] = {{"value", exact},
                                           {"abs_diff", number_to_json(diff)},
                                           {"tolerance", cfg_.closed_form_tol},
                                           {"agrees", ok}};
      if (!ok) raise_exit(out_, kExitNumerical, input + ": supremum misses the closed form");
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kParam) throw;
    }
  }

  RankReport rank_rows(const SymbolSpec& phi, const std::string& input) {
    const auto start = Clock::now();
    const RankReport rank = rank_sufficiency_check(phi, cfg_.scan_resolution, cfg_.rank);
    const double ms = ms_since(start);
    const std::string verdict(verdict_name(rank.verdict));
    const double contacts = rank.contact.full_circle
                                ? std::numeric_limits<double>::infinity()
                                : static_cast<double>(rank.contact.points.size());
    add(input, "contact_points", contacts, "boundary-scan", cfg_.rank.contact_tol, verdict, 0.0);
    add(input, "min_deriv_modulus", rank.min_deriv_modulus, "boundary-scan", cfg_.rank.deriv_tol,
        verdict, ms);
    out_.report.traces["rank"] = rank_to_json(rank);
    raise_exit(out_, rank_exit(rank.verdict), input + ": rank check " + verdict +
                                                  (rank.note.empty() ? "" : " (" + rank.note + ")"));
    return rank;
  }

  void rank_check() {
    const SymbolSpec phi = ensure_verified(cfg_);
    rank_rows(phi, describe_symbol(phi));
  }

  void selfmap() {
    const SymbolSpec& phi = *cfg_.symbol;
    const std::string input = describe_symbol(phi);
    const auto start = Clock::now();
    try {
      const SelfMapVerdict v = verify_self_map(phi, cfg_.selfmap_grid, cfg_.selfmap_tol);
      add(input, "max_modulus", v.max_modulus, "circle-scan", cfg_.selfmap_tol, "Pass",
          ms_since(start));
      out_.report.traces["selfmap"] = {{"max_modulus", v.max_modulus},
                                       {"argmax", v.argmax.angle()},
                                       {"contact", v.contact}};
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kSymbol) throw;
      // Only an unverified polynomial can fail; report its grid maximum.
      double max_mod = kNaN;
      if (const auto* poly = std::get_if<symbols::Polynomial>(&phi.variant())) {
        const TruncatedPowerSeries s(std::vector<Complex>(poly->coeffs().begin(),
                                                          poly->coeffs().end()));
        max_mod = 0.0;
        for (std::size_t j = 0; j < cfg_.selfmap_grid; ++j) {
          const double t = kTwoPi * static_cast<double>(j) / static_cast<double>(cfg_.selfmap_grid);
          max_mod = std::max(max_mod, std::abs(eval_series(s, std::polar(1.0, t))));
        }
      }
      add(input, "max_modulus", max_mod, "circle-scan", cfg_.selfmap_tol, "Fail", ms_since(start));
      out_.report.traces["selfmap"] = {{"error", e.what()}};
      raise_exit(out_, kExitNegative, e.what());
    }
  }

  void equivalence() {
    const WeightParams& params = *cfg_.params;
    PlotSeries plot{"ratio", {}};
    json traces = json::array();
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    bool all_finite = true;
    for (const FamilyMember& m : cfg_.family) {
      const auto start = Clock::now();
      json entry = {{"input", m.label}};
      try {
        const EquivalenceRatio r =
            equivalence_ratio(DiscFunction::from_series(m.series), params, cfg_.quadrature);
        const auto& tr = r.functional.trace;
        const double prev = tr.size() >= 2 ? tr[tr.size() - 2].value / r.dirichlet.value_sq
                                           : r.ratio;
        const double change = relative_change(prev, r.ratio);
        const bool ok = std::isfinite(r.ratio) && r.ratio > 0.0 &&
                        change <= cfg_.quadrature.target_rel_tol;
        add(m.label, "equivalence_ratio", r.ratio, "quadrature", cfg_.quadrature.target_rel_tol,
            ok ? "Pass" : "Fail", ms_since(start));
        if (!ok) raise_exit(out_, kExitNumerical, m.label + ": ratio is not stable");
        if (std::isfinite(r.ratio) && r.ratio > 0.0) {
          lo = std::min(lo, r.ratio);
          hi = std::max(hi, r.ratio);
        } else {
          all_finite = false;
        }
        plot.points.emplace_back(m.abscissa, r.ratio);
        entry["ratio"] = number_to_json(r.ratio);
        entry["ratio_previous"] = number_to_json(prev);
        entry["dirichlet"] = number_to_json(r.dirichlet.value_sq);
        entry["functional"] = trace_to_json(tr);
      } catch (const ConvergenceError& e) {
        all_finite = false;
        const auto& tr = e.partial().trace;
        add(m.label, "equivalence_ratio", kNaN, "quadrature", cfg_.quadrature.target_rel_tol,
            "E_CONVERGENCE", ms_since(start));
        entry["functional"] = trace_to_json(tr);
        entry["error"] = e.what();
        raise_exit(out_, kExitNumerical, m.label + ": " + e.what());
      }
      traces.push_back(std::move(entry));
    }
    const double spread = all_finite && lo > 0.0 ? hi / lo : kNaN;
    const bool band_ok = std::isfinite(spread) && spread <= cfg_.band_limit;
    out_.report.traces["members"] = traces;
    out_.report.traces["band"] = {{"sigma", params.sigma()},
                                  {"tau", params.tau()},
                                  {"beta", params.beta()},
                                  {"p", params.p_dirichlet()},
                                  {"min_ratio", number_to_json(all_finite ? lo : kNaN)},
                                  {"max_ratio", number_to_json(all_finite ? hi : kNaN)},
                                  {"max_over_min", number_to_json(spread)},
                                  {"limit", cfg_.band_limit},
                                  {"pass", band_ok}};
    if (all_finite && !band_ok) raise_exit(out_, kExitNegative, "equivalence ratios leave the band");
    out_.report.plots.push_back(std::move(plot));
  }

  void bound() {
    const SymbolSpec phi = ensure_verified(cfg_);
    const std::string input = describe_symbol(phi);
    const WeightParams& params = *cfg_.params;
    rank_rows(phi, input);

    const auto sup_start = Clock::now();
    const SupEstimate sup = estimate_sup(phi, cfg_.sup);
    add(input, "sup_kernel", sup.value, "torus-search", cfg_.sup.stabilization_tol,
        std::string(verdict_name(sup.verdict)), ms_since(sup_start));
    out_.report.traces["sup"] = sup_to_json(sup);
    if (sup.verdict != SupVerdict::kBounded) {
      raise_exit(out_, sup_exit(sup.verdict),
                 input + ": kernel supremum verdict " + std::string(verdict_name(sup.verdict)) +
                     ", bound not evaluated");
      return;
    }

    BoundCheckSettings settings;
    settings.dirichlet = cfg_.quadrature;
    settings.sup = cfg_.sup;
    settings.precomputed_sup = sup;
    std::vector<TruncatedPowerSeries> family;
    for (const FamilyMember& m : cfg_.family) family.push_back(m.series);

    const auto start = Clock::now();
    const BoundCheckReport report = bound_check(family, phi, params.sigma(), params.beta(), settings);
    const double per_member = ms_since(start) / static_cast<double>(family.size());

    PlotSeries plot{"ratio", {}};
    json traces = json::array();
    double max_ratio = 0.0;
    double max_prev = 0.0;
    for (std::size_t i = 0; i < report.rows.size(); ++i) {
      const BoundRow& row = report.rows[i];
      const FamilyMember& m = cfg_.family[i];
      const double achieved = row.composed.rel_error_estimate;
      add(m.label, "composed_norm_sq", row.composed.value_sq, "quadrature",
          cfg_.quadrature.target_rel_tol, "Pass", per_member);
      const double cross = relative_change(row.composed_coeff, row.composed.value_sq);
      add(m.label, "composed_norm_sq", row.composed_coeff, "coefficient", cfg_.agreement_tol,
          std::isfinite(row.composed_coeff) ? (cross <= cfg_.agreement_tol ? "Pass" : "Fail")
                                            : "Skipped",
          0.0);
      const bool finite = std::isfinite(row.ratio);
      add(m.label, "bound_ratio", row.ratio, "quadrature", cfg_.quadrature.target_rel_tol,
          finite ? "Pass" : "Fail", 0.0);
      add(m.label, "pointwise_violations", static_cast<double>(row.pointwise_violations),
          "tensor-nodes", settings.pointwise_rel_tol,
          row.pointwise_violations == 0 ? "Pass" : "Fail", 0.0);
      if (!finite) raise_exit(out_, kExitNumerical, m.label + ": bound ratio is not finite");
      if (row.pointwise_violations > 0) {
        raise_exit(out_, kExitNegative, m.label + ": pointwise kernel inequality violated");
      }
      max_ratio = std::max(max_ratio, row.ratio);
      max_prev = std::max(max_prev, row.ratio_previous);
      plot.points.emplace_back(m.abscissa, row.ratio);
      traces.push_back({{"input", m.label},
                        {"f_norm_sq", number_to_json(row.f_norm_sq)},
                        {"composed", trace_to_json(row.composed.trace)},
                        {"composed_rel_error", number_to_json(achieved)},
                        {"composed_coeff", number_to_json(row.composed_coeff)},
                        {"ratio", number_to_json(row.ratio)},
                        {"ratio_previous", number_to_json(row.ratio_previous)},
                        {"lhs_integral", number_to_json(row.lhs_integral)},
                        {"rhs_integral", number_to_json(row.rhs_integral)},
                        {"pointwise_nodes", row.pointwise_nodes},
                        {"pointwise_violations", row.pointwise_violations},
                        {"max_pointwise_excess", number_to_json(row.max_pointwise_excess)}});
    }
    constexpr double kStability = 0.02;
    const double change = relative_change(max_prev, max_ratio);
    const bool stable = change <= kStability;
    add("family", "max_bound_ratio", max_ratio, "quadrature", kStability,
        stable ? "Pass" : "Fail", 0.0);
    if (!stable) raise_exit(out_, kExitNumerical, "maximum bound ratio moves under refinement");
    out_.report.traces["members"] = traces;
    out_.report.traces["bound"] = {{"sigma", report.sigma},
                                   {"beta", report.beta},
                                   {"p", report.p},
                                   {"q", report.q},
                                   {"sup_pow_q", std::pow(sup.value, report.q)},
                                   {"max_ratio", number_to_json(max_ratio)},
                                   {"max_ratio_previous", number_to_json(max_prev)},
                                   {"max_ratio_change", number_to_json(change)}};
    out_.report.plots.push_back(std::move(plot));
  }

  const RunConfig& cfg_;
  RunResult& out_;
};

}  // namespace

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kConvergence:
    case ErrorCode::kSingular: return kExitNumerical;
    case ErrorCode::kParam:
    case ErrorCode::kSymbol:
    case ErrorCode::kConfig:
    case ErrorCode::kIo: return kExitConfig;
  }
  return kExitConfig;
}

std::string describe_symbol(const SymbolSpec& phi) {
  return std::visit(
      [](const auto& s) -> std::string {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, symbols::Identity>) {
          return "identity";
        } else if constexpr (std::is_same_v<T, symbols::Rotation>) {
          return "rotation(" + fmt(s.angle) + ")";
        } else if constexpr (std::is_same_v<T, symbols::MobiusAuto>) {
          std::string out = "mobius(" + fmt(s.a);
          if (s.post_rotation != 0.0) out += ";rot=" + fmt(s.post_rotation);
          return out + ")";
        } else if constexpr (std::is_same_v<T, symbols::Monomial>) {
          return "monomial(" + std::to_string(s.k) + ")";
        } else if constexpr (std::is_same_v<T, symbols::FiniteBlaschke>) {
          std::string out = "blaschke(";
          for (std::size_t i = 0; i < s.zeros.size(); ++i) out += (i ? ";" : "") + fmt(s.zeros[i]);
          if (s.post_rotation != 0.0) out += ";rot=" + fmt(s.post_rotation);
          return out + ")";
        } else {
          std::string out = "poly(";
          const auto c = s.coeffs();
          for (std::size_t i = 0; i < c.size(); ++i) out += (i ? ";" : "") + fmt(c[i]);
          return out + ")";
        }
      },
      phi.variant());
}

RunResult run(const RunConfig& config) {
  RunResult result;
  result.report.experiment = std::string(command_name(config.command));
  try {
    Experiment(config, result).run();
  } catch (const Error& e) {
    const int code = exit_code_for(e.code());
    result.report.rows.push_back({result.report.experiment, "error", "error", kNaN, "none", 0.0,
                                  std::string(e.name()), 0.0});
    result.report.traces["error"] = {{"code", std::string(e.name())}, {"message", e.what()}};
    if (code > result.exit_code) result.exit_code = code;
    result.message = e.what();
  }
  return result;
}

}  // namespace dirbound
