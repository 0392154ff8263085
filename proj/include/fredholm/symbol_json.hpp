#pragma once

// JSON symbol descriptors:
//   {"kind":"bessel","t":1.0}
//   {"kind":"gessel","t":1.0}
//   {"kind":"laurent","coeffs":{"-1":[re,im], "0":[1,0], ...}}
//   {"kind":"product","factors":[ <descriptor>, ... ]}
//   {"kind":"power","base":<descriptor>,"m":2}

#include "fredholm/symbol.hpp"

#include <json.hpp>

#include <string>

namespace fredholm {

inline Symbol make_symbol(const nlohmann::json& spec)
{
    if (!spec.is_object() || !spec.contains("kind") || !spec["kind"].is_string())
        throw std::invalid_argument("symbol descriptor must be an object with a \"kind\" string");
    const std::string kind = spec["kind"].get<std::string>();
    if (kind == "bessel" || kind == "gessel") {
        if (!spec.contains("t") || !spec["t"].is_number())
            throw std::invalid_argument("symbol descriptor \"" + kind + "\" requires numeric t");
        const double t = spec["t"].get<double>();
        return kind == "bessel" ? Symbol::bessel(t) : Symbol::gessel(t);
    }
    if (kind == "laurent") {
        if (!spec.contains("coeffs") || !spec["coeffs"].is_object())
            throw std::invalid_argument("laurent descriptor requires a \"coeffs\" object");
        std::map<long, Cplx> coeffs;
        for (const auto& [key, val] : spec["coeffs"].items()) {
            const long deg = std::stol(key);
            if (val.is_number()) {
                coeffs[deg] = Cplx(val.get<double>(), 0.0);
            } else if (val.is_array() && val.size() == 2) {
                coeffs[deg] = Cplx(val[0].get<double>(), val[1].get<double>());
            } else {
                throw std::invalid_argument("laurent coefficient must be a number or [re, im]");
            }
        }
        return Symbol::laurent(std::move(coeffs));
    }
    if (kind == "product") {
        if (!spec.contains("factors") || !spec["factors"].is_array() || spec["factors"].empty())
            throw std::invalid_argument("product descriptor requires a nonempty \"factors\" array");
        std::vector<Symbol> fs;
        for (const auto& f : spec["factors"]) fs.push_back(make_symbol(f));
        return Symbol::product(std::move(fs));
    }
    if (kind == "power") {
        if (!spec.contains("base") || !spec.contains("m"))
            throw std::invalid_argument("power descriptor requires \"base\" and \"m\"");
        return Symbol::power(make_symbol(spec["base"]), spec["m"].get<int>());
    }
    throw std::invalid_argument("unknown symbol kind: " + kind);
}

inline Symbol make_symbol(const std::string& text)
{
    return make_symbol(nlohmann::json::parse(text));
}

} // namespace fredholm
