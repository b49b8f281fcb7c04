#ifndef DIRBOUND_SYMBOL_IO_HPP_
#define DIRBOUND_SYMBOL_IO_HPP_

#include <string>

#include "dirbound/complexfn.hpp"
#include "json.hpp"

namespace dirbound {

// {"re": x, "im": y}; a bare number is read as a real value.
Complex complex_from_json(const nlohmann::json& j, const std::string& path);
nlohmann::json complex_to_json(Complex c);

// Symbol object with "type" in {identity, rotation, mobius, monomial,
// blaschke, poly}:
//   {"type": "rotation", "angle": t}
//   {"type": "mobius", "a": {...}, "rotation": t}
//   {"type": "monomial", "k": 2}
//   {"type": "blaschke", "zeros": [{...}, ...], "rotation": t}
//   {"type": "poly", "coeffs": [{...}, ...]}
// Throws E_CONFIG naming the offending field path.
SymbolSpec symbol_from_json(const nlohmann::json& j, const std::string& path = "symbol");
nlohmann::json symbol_to_json(const SymbolSpec& phi);

}  // namespace dirbound

#endif  // DIRBOUND_SYMBOL_IO_HPP_
