#pragma once

// JSON in and out for lattices, orbit reductions, graded values, class functions
// and representations.
//
// Class functions: {"height": d, "group": {...}, "space": {...}, "elliptic": bool,
//                   "values": [{"tuple": [...], "point": p, "graded": {...}}]}
// Scalars are numbers or [re, im]. Lattice-function components are one of
//   {"weight": w, "q": [a0, a1, ...]}   truncated q-expansion
//   {"eisenstein": w}                   closed-form E_w
//   {"weight": w, "closed": "tau"}      l^-w * (l'/l)
//   {"constant": c}                     weight 0
//   {"weight": w, "samples": [{"tau": z, "value": v}, ...]}  known only at those tau
// The last form is what computed height-2 values serialize to.

#include "ellpow/class_function.hpp"
#include "ellpow/orbit_reduction.hpp"
#include "ellpow/rep_oracle.hpp"

#include <json.hpp>

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace ellpow {

inline json lattice_to_json(const Sublattice& l) { return l.basis().to_int64_rows(); }

inline json matrix_to_json(const IntMatrix& m) { return m.to_int64_rows(); }

inline json reduction_to_json(const OrbitReduction& r) {
  json orbits = json::array();
  for (const OrbitData& o : r.orbits) {
    json labels = json::object();
    for (std::size_t a : o.points)
      if (a < o.labels.size()) labels[std::to_string(a)] = o.labels[a];
    orbits.push_back({{"points", o.points},
                      {"basepoint", o.basepoint},
                      {"index", o.points.size()},
                      {"lattice", lattice_to_json(o.lattice)},
                      {"matrix", matrix_to_json(o.matrix)},
                      {"reduced", o.reduced},
                      {"reduced_labels", tuple_str(r.base, o.reduced)},
                      {"labels", labels}});
  }
  return {{"n", r.n}, {"d", r.d}, {"orbits", orbits}};
}

inline Complex complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) return {j[0].get<double>(), j[1].get<double>()};
  throw std::invalid_argument("expected a number or [re, im], got " + j.dump());
}

inline json complex_to_json(Complex c) { return {c.real(), c.imag()}; }

namespace detail {

/// A lattice function known only at finitely many tau.
struct SampledNode final : LatFunction::Node {
  SampledNode(int w, std::vector<std::pair<Complex, Complex>> s) : Node(w), samples(std::move(s)) {}
  Complex eval(Complex l, Complex lp) const override {
    const Complex tau = oriented_tau(l, lp);
    for (const auto& [t, v] : samples)
      if (std::abs(t - tau) < 1e-12) return ipow(l, -weight) * v;
    throw std::domain_error("sampled lattice function is not known at tau = " + std::to_string(tau.real()) + "+" +
                            std::to_string(tau.imag()) + "i");
  }
  nlohmann::json describe() const override {
    json s = json::array();
    for (const auto& [t, v] : samples) s.push_back({{"tau", complex_to_json(t)}, {"value", complex_to_json(v)}});
    return {{"weight", weight}, {"samples", s}};
  }
  std::vector<std::pair<Complex, Complex>> samples;
};

}  // namespace detail

inline LatFunction lat_function_from_json(const json& j) {
  if (j.is_number() || j.is_array()) return LatFunction::constant(complex_from_json(j));
  if (!j.is_object()) throw std::invalid_argument("lattice function: expected an object, got " + j.dump());
  auto weight = [&](int fallback) {
    const int w = j.contains("weight") ? j.at("weight").get<int>() : fallback;
    if (fallback >= 0 && w != fallback) throw std::invalid_argument("lattice function: inconsistent weight in " + j.dump());
    return w;
  };
  if (j.contains("constant")) {
    weight(0);
    return LatFunction::constant(complex_from_json(j.at("constant")));
  }
  if (j.contains("eisenstein")) {
    const int w = j.at("eisenstein").get<int>();
    return LatFunction::eisenstein(weight(w));
  }
  if (!j.contains("weight")) throw std::invalid_argument("lattice function: missing \"weight\" in " + j.dump());
  const int w = weight(-1);
  if (j.contains("q")) {
    std::vector<Complex> a;
    for (const auto& c : j.at("q")) a.push_back(complex_from_json(c));
    if (a.empty()) throw std::invalid_argument("lattice function: empty q-expansion");
    return LatFunction::q_series(w, std::move(a));
  }
  if (j.contains("closed")) {
    const std::string name = j.at("closed").get<std::string>();
    if (name == "tau") return LatFunction::from_tau(w, [](Complex t) { return t; }, "tau");
    if (name == "one") return LatFunction::from_tau(w, [](Complex) { return Complex(1.0); }, "one");
    throw std::invalid_argument("lattice function: unknown closed form \"" + name + "\"");
  }
  if (j.contains("samples")) {
    std::vector<std::pair<Complex, Complex>> s;
    for (const auto& e : j.at("samples")) s.emplace_back(complex_from_json(e.at("tau")), complex_from_json(e.at("value")));
    return LatFunction(std::make_shared<detail::SampledNode>(w, std::move(s)));
  }
  throw std::invalid_argument("lattice function: unrecognized form " + j.dump());
}

template <class C>
C coefficient_from_json(const json& j);

template <>
inline Complex coefficient_from_json<Complex>(const json& j) {
  return complex_from_json(j);
}

template <>
inline LatFunction coefficient_from_json<LatFunction>(const json& j) {
  return lat_function_from_json(j);
}

template <class C>
GradedValue<C> graded_from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("graded value: expected an object keyed by degree, got " + j.dump());
  typename GradedValue<C>::Map comps;
  for (const auto& [k, v] : j.items()) {
    std::size_t used = 0;
    int deg = 0;
    try {
      deg = std::stoi(k, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != k.size()) throw std::invalid_argument("graded value: degree key \"" + k + "\" is not an integer");
    comps.emplace(deg, coefficient_from_json<C>(v));
  }
  return GradedValue<C>(std::move(comps));
}

/// Which coefficient type a class-function document needs: lattice functions at height 2
/// unless "coefficients": "scalar" is given.
inline bool uses_lattice_coefficients(const json& j) {
  const auto d = j.at("height").get<std::size_t>();
  const std::string kind = j.value("coefficients", d == 2 ? "lattice" : "scalar");
  if (kind != "lattice" && kind != "scalar") throw std::invalid_argument("class function: coefficients must be lattice or scalar");
  if (kind == "lattice" && d != 2) throw std::invalid_argument("class function: lattice coefficients need height 2");
  return kind == "lattice";
}

template <class C>
ClassFunction<C> class_function_from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("class function: expected a JSON object");
  const FiniteGroup g = build_group(j.at("group"));
  const GSet x = build_gset(g, j.value("space", json()));
  const auto d = j.at("height").get<std::size_t>();
  const bool elliptic = j.value("elliptic", false);
  std::map<Key, GradedValue<C>> values;
  for (const auto& e : j.at("values")) {
    const Key k{e.at("tuple").get<Tuple>(), e.value("point", Point{0})};
    auto [it, inserted] = values.emplace(k, graded_from_json<C>(e.at("graded")));
    if (!inserted) throw std::invalid_argument("class function: tuple " + e.at("tuple").dump() + " listed twice");
  }
  return ClassFunction<C>::from_table(g, x, d, elliptic, values);
}

template <class C>
json class_function_to_json(const ClassFunction<C>& f, const CompareContext& ctx = {}) {
  json values = json::array();
  for (const auto& [k, v] : f.values())
    values.push_back({{"tuple", k.first},
                      {"labels", tuple_str(f.group(), k.first)},
                      {"point", k.second},
                      {"graded", v.to_json(ctx)}});
  json out = {{"height", f.d()},
              {"group", f.group().descriptor()},
              {"space", f.space().descriptor()},
              {"elliptic", f.elliptic()},
              {"values", values}};
  if (f.d() == 2 && Coeff<C>::height == 1) out["coefficients"] = "scalar";
  return out;
}

/// {"group": {...}, "name": "...", "matrices": [ [[ [re,im], ... ], ...], ... ]}, one
/// matrix per group element in index order.
inline Representation representation_from_json(const json& j) {
  const FiniteGroup g = build_group(j.at("group"));
  std::vector<CMatrix> mats;
  for (const auto& m : j.at("matrices")) {
    const std::size_t n = m.size();
    CMatrix c(n);
    for (std::size_t r = 0; r < n; ++r) {
      if (m[r].size() != n) throw std::invalid_argument("representation: matrix is not square");
      for (std::size_t s = 0; s < n; ++s) c(r, s) = complex_from_json(m[r][s]);
    }
    mats.push_back(c);
  }
  return Representation(g, j.value("name", "custom"), std::move(mats));
}

inline json representation_to_json(const Representation& rep) {
  json mats = json::array();
  for (Elem x = 0; x < rep.group().size(); ++x) {
    json m = json::array();
    for (std::size_t r = 0; r < rep.dim(); ++r) {
      json row = json::array();
      for (std::size_t s = 0; s < rep.dim(); ++s) row.push_back(complex_to_json(rep(x)(r, s)));
      m.push_back(row);
    }
    mats.push_back(m);
  }
  return {{"group", rep.group().descriptor()}, {"name", rep.name()}, {"matrices", mats}};
}

}  // namespace ellpow
