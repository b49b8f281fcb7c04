#include "dirbound/symbol_io.hpp"

#include <cmath>

namespace dirbound {

namespace {

[[noreturn]] void config_error(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::kConfig, path + ": " + what);
}

double number_at(const nlohmann::json& j, const std::string& key, const std::string& path,
                 std::optional<double> fallback = std::nullopt) {
  if (!j.contains(key)) {
    if (fallback) return *fallback;
    config_error(path + "." + key, "missing");
  }
  const auto& v = j.at(key);
  if (!v.is_number()) config_error(path + "." + key, "expected a number");
  return v.get<double>();
}

std::vector<Complex> complex_list(const nlohmann::json& j, const std::string& key,
                                  const std::string& path) {
  if (!j.contains(key)) config_error(path + "." + key, "missing");
  const auto& arr = j.at(key);
  if (!arr.is_array()) config_error(path + "." + key, "expected an array");
  std::vector<Complex> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    out.push_back(complex_from_json(arr[i], path + "." + key + "[" + std::to_string(i) + "]"));
  }
  return out;
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

}  // namespace

Complex complex_from_json(const nlohmann::json& j, const std::string& path) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_object()) config_error(path, "expected {\"re\": x, \"im\": y}");
  return {number_at(j, "re", path, 0.0), number_at(j, "im", path, 0.0)};
}

nlohmann::json complex_to_json(Complex c) { return {{"re", c.real()}, {"im", c.imag()}}; }

SymbolSpec symbol_from_json(const nlohmann::json& j, const std::string& path) {
  if (!j.is_object()) config_error(path, "expected an object");
  if (!j.contains("type") || !j.at("type").is_string()) {
    config_error(path + ".type", "missing or not a string");
  }
  const std::string type = j.at("type").get<std::string>();
  try {
    if (type == "identity") return SymbolSpec::identity();
    if (type == "rotation") return SymbolSpec::rotation(number_at(j, "angle", path));
    if (type == "mobius") {
      if (!j.contains("a")) config_error(path + ".a", "missing");
      return SymbolSpec::mobius(complex_from_json(j.at("a"), path + ".a"),
                                number_at(j, "rotation", path, 0.0));
    }
    if (type == "monomial") {
      const double k = number_at(j, "k", path);
      if (k != std::floor(k)) config_error(path + ".k", "expected an integer");
      return SymbolSpec::monomial(static_cast<int>(k));
    }
    if (type == "blaschke") {
      return SymbolSpec::blaschke(complex_list(j, "zeros", path),
                                  number_at(j, "rotation", path, 0.0));
    }
    if (type == "poly") return SymbolSpec::polynomial(complex_list(j, "coeffs", path));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kConfig) throw;
    config_error(path, e.what());
  }
  config_error(path + ".type", "unknown symbol type '" + type + "'");
}

nlohmann::json symbol_to_json(const SymbolSpec& phi) {
  const auto list = [](std::span<const Complex> values) {
    nlohmann::json arr = nlohmann::json::array();
    for (const Complex& c : values) arr.push_back(complex_to_json(c));
    return arr;
  };
  return std::visit(
      Overloaded{
          [](const symbols::Identity&) -> nlohmann::json { return {{"type", "identity"}}; },
          [](const symbols::Rotation& r) -> nlohmann::json {
            return {{"type", "rotation"}, {"angle", r.angle}};
          },
          [](const symbols::MobiusAuto& m) -> nlohmann::json {
            return {{"type", "mobius"}, {"a", complex_to_json(m.a)}, {"rotation", m.post_rotation}};
          },
          [](const symbols::Monomial& m) -> nlohmann::json {
            return {{"type", "monomial"}, {"k", m.k}};
          },
          [&](const symbols::FiniteBlaschke& b) -> nlohmann::json {
            return {{"type", "blaschke"}, {"zeros", list(b.zeros)}, {"rotation", b.post_rotation}};
          },
          [&](const symbols::Polynomial& p) -> nlohmann::json {
            return {{"type", "poly"}, {"coeffs", list(p.coeffs())}};
          },
      },
      phi.variant());
}

}  // namespace dirbound
