// One PASS/FAIL line per acceptance criterion; non-zero exit if any fails.
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "dirbound/kernels.hpp"
#include "dirbound/norms.hpp"
#include "dirbound/operators.hpp"
#include "oracles.hpp"

using namespace dirbound;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Outcome dirichlet_oracle() {
  const auto start = Clock::now();
  double worst = 0.0;
  for (double p : {0.5, 1.0, 2.0}) {
    for (std::size_t n = 1; n <= 16; ++n) {
      const auto f = DiscFunction::from_series(TruncatedPowerSeries::monomial(n));
      const double v = dirichlet_norm_sq_quad(f, p).value_sq;
      const double exact = oracle::dirichlet_monomial(static_cast<double>(n), p);
      worst = std::max(worst, std::abs(v - exact) / exact);
    }
  }
  const double t = seconds_since(start);
  return {worst <= 1e-8 && t < 5.0, fmt("max rel err %.2e over n<=16, p in {0.5,1,2}; %.2f s", worst, t)};
}

Outcome sup_closed_forms() {
  struct Case {
    const char* name;
    SymbolSpec phi;
    double exact;
    double tol;
  };
  const Case cases[] = {{"identity", SymbolSpec::identity(), 1.0, 1e-12},
                        {"mobius(0.5)", SymbolSpec::mobius(0.5), 3.0, 1e-3},
                        {"monomial(2)", SymbolSpec::monomial(2), 2.0, 1e-3}};
  bool ok = true;
  std::string detail;
  for (const Case& c : cases) {
    const auto start = Clock::now();
    const SupEstimate est = estimate_sup(c.phi);
    const double t = seconds_since(start);
    const double err = std::abs(est.value - c.exact);
    ok = ok && est.verdict == SupVerdict::kBounded && err <= c.tol && t < 10.0;
    detail += fmt("%s err %.1e (%.2f s); ", c.name, err, t);
  }
  return {ok, detail};
}

Outcome divergence_detection() {
  const SymbolSpec c = verify_self_map(SymbolSpec::polynomial({0.3})).symbol;
  const SupEstimate est = estimate_sup(c);
  const std::size_t refinements = est.trace.size() - 1;
  const double last = est.trace.back().running_max;
  const double prev = est.trace.size() >= 2 ? est.trace[est.trace.size() - 2].running_max : 0.0;
  const bool ok = est.verdict == SupVerdict::kUnbounded && last > 1e6 && last >= 2.0 * prev &&
                  refinements >= 1 && refinements <= 4;
  return {ok, fmt("verdict %s after %zu refinement(s), running max %.3g (previous %.3g)",
                  std::string(verdict_name(est.verdict)).c_str(), refinements, last, prev)};
}

Outcome equivalence_band() {
  const auto start = Clock::now();
  const WeightParams w = validate_params(1, 1, 0.5);
  double lo = 1e300;
  double hi = 0.0;
  double worst_move = 0.0;
  bool finite = true;
  for (std::size_t n = 1; n <= 8; ++n) {
    const auto r = equivalence_ratio(DiscFunction::from_series(TruncatedPowerSeries::monomial(n)), w);
    const auto& tr = r.functional.trace;
    const double prev = tr[tr.size() - 2].value / r.dirichlet.value_sq;
    finite = finite && std::isfinite(r.ratio) && r.ratio > 0.0;
    lo = std::min(lo, r.ratio);
    hi = std::max(hi, r.ratio);
    worst_move = std::max(worst_move, relative_change(prev, r.ratio));
  }
  const double t = seconds_since(start);
  const bool ok = finite && hi / lo <= 10.0 && worst_move < 0.02 && t < 60.0;
  return {ok, fmt("ratios in [%.5f, %.5f], max/min %.4f, max move %.2e; %.1f s", lo, hi, hi / lo,
                  worst_move, t)};
}

Outcome bound_pipeline() {
  const auto start = Clock::now();
  const SymbolSpec phi = SymbolSpec::monomial(2);
  const RankReport rank = rank_sufficiency_check(phi);
  const bool rank_ok = rank.verdict == RankVerdict::kPass && std::abs(rank.min_deriv_modulus - 2.0) <= 1e-9;

  std::vector<TruncatedPowerSeries> family;
  for (std::size_t n = 1; n <= 8; ++n) family.push_back(TruncatedPowerSeries::monomial(n));
  const BoundCheckReport rep = bound_check(family, phi, 1.0, 0.5);
  const bool sup_ok = std::abs(rep.sup.value - 2.0) <= 1e-3;

  std::size_t violations = 0;
  std::size_t nodes = 0;
  bool finite = true;
  double max_ratio = 0.0;
  double max_prev = 0.0;
  for (const BoundRow& row : rep.rows) {
    violations += row.pointwise_violations;
    nodes += row.pointwise_nodes;
    finite = finite && std::isfinite(row.ratio);
    max_ratio = std::max(max_ratio, row.ratio);
    max_prev = std::max(max_prev, row.ratio_previous);
  }
  const double move = relative_change(max_prev, max_ratio);
  const double t = seconds_since(start);
  const bool ok = rank_ok && sup_ok && violations == 0 && finite && move <= 0.02 && t < 120.0;
  return {ok, fmt("rank %s min|phi'| %.12g; sup %.12g; %zu violations over %zu nodes; "
                  "max ratio %.6g (move %.1e); %.1f s",
                  std::string(verdict_name(rank.verdict)).c_str(), rank.min_deriv_modulus,
                  rep.sup.value, violations, nodes, max_ratio, move, t)};
}

Outcome route_identity() {
  double worst = 0.0;
  for (std::size_t n : {1, 3}) {
    const auto r = lift_norm_check(TruncatedPowerSeries::monomial(n), 1.0, 0.5);
    worst = std::max(worst, r.route_rel_diff);
  }
  return {worst <= 1e-8, fmt("max relative difference between routes %.2e for z, z^3", worst)};
}

Outcome pointwise_identity() {
  double worst = 0.0;
  for (const SymbolSpec& phi : {SymbolSpec::identity(), SymbolSpec::monomial(2),
                                SymbolSpec::mobius(Complex(0.0, 0.7))}) {
    worst = std::max(worst, pointwise_kernel_identity_check(phi, 10000, 1));
  }
  return {worst <= 1e-12, fmt("max deviation %.2e over 1e4 pairs x 3 symbols", worst)};
}

Outcome parameter_gate() {
  struct Case {
    std::function<WeightParams()> call;
    bool valid;
    double p;
    const char* label;
  };
  const Case cases[] = {
      {[] { return validate_params(1, 1, 0.5); }, true, 1.0, "(1,1,0.5)"},
      {[] { return validate_params(1, 1, 2); }, false, 0.0, "(1,1,2)"},
      {[] { return validate_params(0, 0, -0.9); }, true, 1.8, "(0,0,-0.9)"},
      {[] { return validate_main_theorem_params(1, 0.5); }, true, 1.0, "(1,0.5)"},
      {[] { return validate_main_theorem_params(1, 1); }, false, 0.0, "(1,1)"},
      {[] { return validate_main_theorem_params(0.5, -0.5); }, true, 2.0, "(0.5,-0.5)"},
  };
  bool ok = true;
  std::string detail;
  for (const Case& c : cases) {
    std::string got;
    try {
      const WeightParams w = c.call();
      const bool match = c.valid && std::abs(w.p_dirichlet() - c.p) <= 1e-14;
      ok = ok && match;
      got = fmt("valid p=%g", w.p_dirichlet());
    } catch (const Error& e) {
      ok = ok && !c.valid && e.code() == ErrorCode::kParam;
      got = std::string(e.name());
    }
    detail += std::string(c.label) + " " + got + "; ";
  }
  return {ok, detail};
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"Dirichlet-norm oracle agreement", dirichlet_oracle},
      {"kernel supremum closed forms", sup_closed_forms},
      {"divergence detection", divergence_detection},
      {"equivalence band", equivalence_band},
      {"bounded composition pipeline", bound_pipeline},
      {"lift route identity", route_identity},
      {"pointwise kernel identity", pointwise_identity},
      {"parameter gate", parameter_gate},
  };
  int failures = 0;
  int index = 1;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    std::printf("[%s] %d %s: %s\n", o.pass ? "PASS" : "FAIL", index++, name, o.detail.c_str());
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
