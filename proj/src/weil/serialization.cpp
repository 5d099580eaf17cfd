#include "nilgeom/weil/serialization.hpp"

#include <stdexcept>

#include <fmt/format.h>

namespace nilgeom::weil {

namespace {

template <class T, class CoeffFn>
nlohmann::json element_json(const WeilElement<T>& a, CoeffFn&& coeff) {
  nlohmann::json terms = nlohmann::json::array();
  // std::map iterates exponents in lexicographic order already.
  for (const auto& [e, c] : a.terms()) {
    terms.push_back({{"exp", e}, {"coeff", coeff(c)}});
  }
  return {{"spec", spec_to_json(a.spec())}, {"terms", std::move(terms)}};
}

template <class T, class CoeffFn>
WeilElement<T> element_parse(const nlohmann::json& j, CoeffFn&& coeff) {
  try {
    const InfinitesimalSpec spec = spec_from_json(j.at("spec"));
    typename WeilElement<T>::Terms terms;
    for (const auto& t : j.at("terms")) {
      auto e = t.at("exp").get<Exponent>();
      if (e.size() != spec.generators()) {
        throw std::invalid_argument("exponent length does not match the spec");
      }
      if (spec.vanishes(e)) {
        throw std::invalid_argument(
            fmt::format("term {} lies in the ideal of {}", nlohmann::json(e).dump(),
                        spec.to_string()));
      }
      if (!terms.emplace(std::move(e), coeff(t.at("coeff"))).second) {
        throw std::invalid_argument("duplicate exponent");
      }
    }
    return WeilElement<T>(spec, terms);
  } catch (const nlohmann::json::exception& ex) {
    throw std::invalid_argument(std::string("malformed Weil element JSON: ") + ex.what());
  }
}

}  // namespace

std::string kind_name(SpecKind kind) {
  switch (kind) {
    case SpecKind::kDk: return "Dk";
    case SpecKind::kDOfN: return "DOfN";
    case SpecKind::kDkOfN: return "DkOfN";
    case SpecKind::kPowerDk: return "PowerDk";
    case SpecKind::kProductDk: return "ProductDk";
    case SpecKind::kDInfTrunc: return "DInfTrunc";
    case SpecKind::kTensor: return "Tensor";
  }
  return "?";
}

SpecKind kind_from_name(const std::string& name) {
  for (auto kind : {SpecKind::kDk, SpecKind::kDOfN, SpecKind::kDkOfN, SpecKind::kPowerDk,
                    SpecKind::kProductDk, SpecKind::kDInfTrunc, SpecKind::kTensor}) {
    if (kind_name(kind) == name) return kind;
  }
  throw std::invalid_argument(fmt::format("unknown spec kind \"{}\"", name));
}

nlohmann::json spec_to_json(const InfinitesimalSpec& spec) {
  nlohmann::json j{{"kind", kind_name(spec.kind())},
                   {"k", spec.k()},
                   {"n", spec.generators()},
                   {"K", spec.working_order()}};
  if (spec.kind() == SpecKind::kProductDk) j["ks"] = spec.ks();
  if (spec.kind() == SpecKind::kTensor) {
    j["factors"] = {spec_to_json(spec.factors()[0]), spec_to_json(spec.factors()[1])};
  }
  return j;
}

InfinitesimalSpec spec_from_json(const nlohmann::json& j) {
  try {
    const int k = j.value("k", 0);
    const int n = j.value("n", 1);
    switch (kind_from_name(j.at("kind").get<std::string>())) {
      case SpecKind::kDk: return InfinitesimalSpec::Dk(k);
      case SpecKind::kDOfN: return InfinitesimalSpec::DOfN(n);
      case SpecKind::kDkOfN: return InfinitesimalSpec::DkOfN(k, n);
      case SpecKind::kPowerDk: return InfinitesimalSpec::PowerDk(k, n);
      case SpecKind::kProductDk:
        return InfinitesimalSpec::ProductDk(j.at("ks").get<std::vector<int>>());
      case SpecKind::kDInfTrunc: return InfinitesimalSpec::DInfTrunc(n, j.at("K").get<int>());
      case SpecKind::kTensor:
        return InfinitesimalSpec::Tensor(spec_from_json(j.at("factors").at(0)),
                                         spec_from_json(j.at("factors").at(1)));
    }
  } catch (const nlohmann::json::exception& ex) {
    throw std::invalid_argument(std::string("malformed spec JSON: ") + ex.what());
  }
  throw std::invalid_argument("malformed spec JSON");
}

nlohmann::json to_json(const WeilElement<double>& a) {
  return element_json(a, [](double c) { return c; });
}

nlohmann::json to_json(const WeilElement<Rational>& a) {
  return element_json(a, [](const Rational& c) { return rational_to_fraction(c); });
}

WeilElement<double> element_from_json_float(const nlohmann::json& j) {
  return element_parse<double>(j, [](const nlohmann::json& c) { return c.get<double>(); });
}

WeilElement<Rational> element_from_json_exact(const nlohmann::json& j) {
  return element_parse<Rational>(
      j, [](const nlohmann::json& c) { return parse_rational(c.get<std::string>()); });
}

}  // namespace nilgeom::weil
