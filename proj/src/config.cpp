#include "dirbound/config.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "dirbound/symbol_io.hpp"
#include "json.hpp"

namespace dirbound {

namespace {

using nlohmann::json;

[[noreturn]] void config_error(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::kConfig, path + ": " + what);
}

constexpr std::pair<Command, std::string_view> kCommands[] = {
    {Command::kNorm, "norm"},
    {Command::kKernelSup, "kernel-sup"},
    {Command::kRankCheck, "rank-check"},
    {Command::kEquivalence, "equivalence"},
    {Command::kBoundCheck, "bound-check"},
    {Command::kSelfmapCheck, "selfmap-check"},
};

void check_keys(const json& obj, const std::string& path, std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (std::string_view a : allowed) known = known || key == a;
    if (!known) config_error(path.empty() ? key : path + "." + key, "unknown field");
  }
}

const json* object_at(const json& root, const std::string& key) {
  if (!root.contains(key)) return nullptr;
  if (!root.at(key).is_object()) config_error(key, "expected an object");
  return &root.at(key);
}

template <class T>
void read_number(const json& obj, const std::string& path, const std::string& key, T& out) {
  if (!obj.contains(key)) return;
  const json& v = obj.at(key);
  const std::string where = path + "." + key;
  if (!v.is_number()) config_error(where, "expected a number");
  if constexpr (std::is_integral_v<T>) {
    const double d = v.get<double>();
    if (d < 0 || d != std::floor(d)) config_error(where, "expected a non-negative integer");
    out = static_cast<T>(d);
  } else {
    out = v.get<double>();
  }
}

std::size_t parse_index(std::string_view text, std::string_view spec) {
  std::size_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    config_error("family", "malformed range in '" + std::string(spec) + "'");
  }
  return value;
}

TruncatedPowerSeries truncated_product(const TruncatedPowerSeries& a,
                                       const TruncatedPowerSeries& b, std::size_t order) {
  std::vector<Complex> out(order + 1, Complex{});
  for (std::size_t i = 0; i <= std::min(order, a.order()); ++i) {
    if (a[i] == Complex{}) continue;
    for (std::size_t j = 0; i + j <= order && j <= b.order(); ++j) out[i + j] += a[i] * b[j];
  }
  return TruncatedPowerSeries(std::move(out));
}

std::string format_number(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

std::vector<FamilyMember> family_from_json(const json& j, std::size_t truncation) {
  if (j.is_string()) return expand_family(j.get<std::string>(), truncation);
  if (!j.is_array()) config_error("family", "expected a string or an array");
  std::vector<FamilyMember> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string path = "family[" + std::to_string(i) + "]";
    const json& item = j[i];
    if (item.is_string()) {
      auto part = expand_family(item.get<std::string>(), truncation);
      out.insert(out.end(), part.begin(), part.end());
      continue;
    }
    if (!item.is_object()) config_error(path, "expected a family name or {\"coeffs\": [...]}");
    check_keys(item, path, {"coeffs", "label"});
    if (!item.contains("coeffs") || !item.at("coeffs").is_array()) {
      config_error(path + ".coeffs", "missing or not an array");
    }
    std::vector<Complex> coeffs;
    const json& arr = item.at("coeffs");
    for (std::size_t k = 0; k < arr.size(); ++k) {
      coeffs.push_back(complex_from_json(arr[k], path + ".coeffs[" + std::to_string(k) + "]"));
    }
    std::string label = "series[" + std::to_string(i) + "]";
    if (item.contains("label")) {
      if (!item.at("label").is_string()) config_error(path + ".label", "expected a string");
      label = item.at("label").get<std::string>();
    }
    out.push_back({std::move(label), TruncatedPowerSeries(std::move(coeffs)),
                   static_cast<double>(out.size() + 1)});
  }
  return out;
}

}  // namespace

std::string_view command_name(Command c) {
  for (const auto& [cmd, name] : kCommands) {
    if (cmd == c) return name;
  }
  return "unknown";
}

Command command_from_name(std::string_view name) {
  for (const auto& [cmd, n] : kCommands) {
    if (n == name) return cmd;
  }
  config_error("command", "unknown command '" + std::string(name) + "'");
}

std::vector<FamilyMember> expand_family(std::string_view spec, std::size_t truncation_order) {
  const std::size_t colon = spec.find(':');
  if (colon == std::string_view::npos) {
    config_error("family", "expected '<name>:<first>..<last>', got '" + std::string(spec) + "'");
  }
  const std::string name(spec.substr(0, colon));
  std::string rest(spec.substr(colon + 1));
  std::string extra;
  if (const std::size_t second = rest.find(':'); second != std::string::npos) {
    extra = rest.substr(second + 1);
    rest = rest.substr(0, second);
  }
  const std::size_t dots = rest.find("..");
  if (dots == std::string::npos) {
    config_error("family", "malformed range in '" + std::string(spec) + "'");
  }
  const std::size_t first = parse_index(rest.substr(0, dots), spec);
  const std::size_t last = parse_index(rest.substr(dots + 2), spec);
  if (first > last) config_error("family", "empty range in '" + std::string(spec) + "'");
  if (last > 4096) config_error("family", "range too large in '" + std::string(spec) + "'");

  std::vector<FamilyMember> out;
  if (name == "monomials") {
    if (!extra.empty()) config_error("family", "monomials take no parameter");
    for (std::size_t n = first; n <= last; ++n) {
      out.push_back({"z^" + std::to_string(n), TruncatedPowerSeries::monomial(n),
                     static_cast<double>(n)});
    }
  } else if (name == "geometric") {
    if (!extra.empty()) config_error("family", "geometric takes no parameter");
    for (std::size_t n = first; n <= last; ++n) {
      out.push_back({"geom_" + std::to_string(n),
                     TruncatedPowerSeries(std::vector<Complex>(n + 1, Complex{1.0, 0.0})),
                     static_cast<double>(n)});
    }
  } else if (name == "mobius-monomials") {
    double r = 0.5;
    if (!extra.empty()) {
      try {
        std::size_t used = 0;
        r = std::stod(extra, &used);
        if (used != extra.size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        config_error("family", "bad mobius parameter in '" + std::string(spec) + "'");
      }
    }
    if (!(std::abs(r) < 1.0)) config_error("family", "mobius parameter must satisfy |r| < 1");
    // (r - z)/(1 - r z) = r - (1 - r^2) sum_{k>=1} r^{k-1} z^k
    std::vector<Complex> base(truncation_order + 1);
    base[0] = r;
    double power = 1.0;
    for (std::size_t k = 1; k <= truncation_order; ++k) {
      base[k] = -(1.0 - r * r) * power;
      power *= r;
    }
    const TruncatedPowerSeries factor(std::move(base));
    TruncatedPowerSeries acc({Complex{1.0, 0.0}});
    for (std::size_t n = 1; n <= last; ++n) {
      acc = truncated_product(acc, factor, truncation_order);
      if (n >= first) {
        out.push_back({"mobius(" + format_number(r) + ")^" + std::to_string(n), acc,
                       static_cast<double>(n)});
      }
    }
    if (first == 0) {
      out.insert(out.begin(), {"mobius(" + format_number(r) + ")^0",
                               TruncatedPowerSeries({Complex{1.0, 0.0}}), 0.0});
    }
  } else {
    config_error("family", "unknown family '" + name + "'");
  }
  return out;
}

RunConfig parse_config(std::string_view text, Command command, const CliOverrides& overrides) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    config_error("<root>", std::string("not valid JSON: ") + e.what());
  }
  if (!root.is_object()) config_error("<root>", "expected a single object");
  check_keys(root, "", {"command", "symbol", "family", "params", "quadrature", "sup", "rank",
                        "selfmap", "tolerances", "output", "seed", "truncation"});

  RunConfig cfg;
  cfg.command = command;
  if (root.contains("command")) {
    if (!root.at("command").is_string()) config_error("command", "expected a string");
    const Command named = command_from_name(root.at("command").get<std::string>());
    if (named != command) {
      config_error("command", "config is for '" + std::string(command_name(named)) +
                                  "' but the CLI asked for '" + std::string(command_name(command)) +
                                  "'");
    }
  }

  std::size_t truncation = 64;
  if (root.contains("truncation")) read_number(root, "<root>", "truncation", truncation);
  if (root.contains("symbol")) cfg.symbol = symbol_from_json(root.at("symbol"), "symbol");
  if (root.contains("family")) cfg.family = family_from_json(root.at("family"), truncation);

  if (const json* params = object_at(root, "params")) {
    check_keys(*params, "params", {"sigma", "tau", "beta", "p"});
    read_number(*params, "params", "sigma", cfg.sigma);
    cfg.tau = cfg.sigma;
    read_number(*params, "params", "tau", cfg.tau);
    read_number(*params, "params", "beta", cfg.beta);
    if (params->contains("p")) {
      double p = 0.0;
      read_number(*params, "params", "p", p);
      cfg.p = p;
    }
  }

  switch (command) {
    case Command::kNorm: cfg.quadrature = dirichlet_defaults(); break;
    case Command::kEquivalence: cfg.quadrature = double_integral_defaults(); break;
    default: cfg.quadrature = dirichlet_defaults(); break;
  }
  if (const json* q = object_at(root, "quadrature")) {
    check_keys(*q, "quadrature", {"radial_count", "angular_count", "refinement_factor",
                                  "target_rel_tol", "max_refinements"});
    read_number(*q, "quadrature", "radial_count", cfg.quadrature.radial_count);
    read_number(*q, "quadrature", "angular_count", cfg.quadrature.angular_count);
    read_number(*q, "quadrature", "refinement_factor", cfg.quadrature.refinement_factor);
    read_number(*q, "quadrature", "target_rel_tol", cfg.quadrature.target_rel_tol);
    read_number(*q, "quadrature", "max_refinements", cfg.quadrature.max_refinements);
  }
  if (const json* s = object_at(root, "sup")) {
    check_keys(*s, "sup", {"grid", "local_points", "max_refinements", "stabilization_tol",
                           "divergence_threshold", "growth_factor", "near_diagonal",
                           "contact_tol", "interior_samples", "interior_rel_tol"});
    read_number(*s, "sup", "grid", cfg.sup.grid);
    read_number(*s, "sup", "local_points", cfg.sup.local_points);
    read_number(*s, "sup", "max_refinements", cfg.sup.max_refinements);
    read_number(*s, "sup", "stabilization_tol", cfg.sup.stabilization_tol);
    read_number(*s, "sup", "divergence_threshold", cfg.sup.divergence_threshold);
    read_number(*s, "sup", "growth_factor", cfg.sup.growth_factor);
    read_number(*s, "sup", "near_diagonal", cfg.sup.near_diagonal);
    read_number(*s, "sup", "contact_tol", cfg.sup.contact_tol);
    read_number(*s, "sup", "interior_samples", cfg.sup.interior_samples);
    read_number(*s, "sup", "interior_rel_tol", cfg.sup.interior_rel_tol);
  }
  if (const json* r = object_at(root, "rank")) {
    check_keys(*r, "rank", {"scan_resolution", "contact_tol", "deriv_tol"});
    read_number(*r, "rank", "scan_resolution", cfg.scan_resolution);
    read_number(*r, "rank", "contact_tol", cfg.rank.contact_tol);
    read_number(*r, "rank", "deriv_tol", cfg.rank.deriv_tol);
  }
  if (const json* s = object_at(root, "selfmap")) {
    check_keys(*s, "selfmap", {"grid", "tol"});
    read_number(*s, "selfmap", "grid", cfg.selfmap_grid);
    read_number(*s, "selfmap", "tol", cfg.selfmap_tol);
  }
  if (const json* t = object_at(root, "tolerances")) {
    check_keys(*t, "tolerances", {"agreement", "band_limit", "closed_form"});
    read_number(*t, "tolerances", "agreement", cfg.agreement_tol);
    read_number(*t, "tolerances", "band_limit", cfg.band_limit);
    read_number(*t, "tolerances", "closed_form", cfg.closed_form_tol);
  }
  if (const json* o = object_at(root, "output")) {
    check_keys(*o, "output", {"dir"});
    if (o->contains("dir")) {
      if (!o->at("dir").is_string()) config_error("output.dir", "expected a string");
      cfg.out_dir = o->at("dir").get<std::string>();
    }
  }
  if (root.contains("seed")) read_number(root, "<root>", "seed", cfg.sup.seed);

  if (overrides.out_dir) cfg.out_dir = *overrides.out_dir;
  if (overrides.seed) cfg.sup.seed = *overrides.seed;
  if (overrides.refine) {
    for (std::size_t k = 0; k < *overrides.refine; ++k) {
      cfg.quadrature.radial_count *= std::max<std::size_t>(cfg.quadrature.refinement_factor, 1);
      cfg.quadrature.angular_count *= std::max<std::size_t>(cfg.quadrature.refinement_factor, 1);
    }
  }

  // Validate everything the command will touch before any computation.
  const bool needs_symbol = command == Command::kKernelSup || command == Command::kRankCheck ||
                            command == Command::kBoundCheck || command == Command::kSelfmapCheck;
  const bool needs_family = command == Command::kNorm || command == Command::kEquivalence ||
                            command == Command::kBoundCheck;
  if (needs_symbol && !cfg.symbol) config_error("symbol", "required for this command");
  if (needs_family && cfg.family.empty()) config_error("family", "required for this command");
  if (command == Command::kSelfmapCheck && cfg.selfmap_grid < 256) {
    config_error("selfmap.grid", "must be >= 256");
  }
  if (command == Command::kNorm || command == Command::kEquivalence ||
      command == Command::kBoundCheck) {
    try {
      cfg.quadrature.validate();
    } catch (const Error& e) {
      config_error("quadrature", e.what());
    }
  }

  switch (command) {
    case Command::kNorm:
      if (cfg.p) {
        if (!(*cfg.p >= 0.0)) throw Error(ErrorCode::kParam, "params.p must be >= 0");
      } else {
        cfg.params = validate_params(cfg.sigma, cfg.tau, cfg.beta);
        cfg.p = cfg.params->p_dirichlet();
      }
      break;
    case Command::kEquivalence:
      cfg.params = validate_params(cfg.sigma, cfg.tau, cfg.beta);
      break;
    case Command::kBoundCheck:
      cfg.params = validate_main_theorem_params(cfg.sigma, cfg.beta);
      break;
    default:
      break;
  }
  return cfg;
}

}  // namespace dirbound
