// ellpow: enumeration tables, power/Adams/pseudo-power/Hecke drivers and the verification suites.
// Exit codes: 0 success, 1 verification failure, 2 input error.

#include "ellpow/ellpow.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

using namespace ellpow;

namespace {

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string group = R"({"type": "symmetric", "n": 3})";
  std::string space;
  std::string function;
  std::string form = R"({"eisenstein": 4})";
  std::string tuple;
  std::size_t d = 1;
  std::int64_t n = 2;
  std::size_t height = 0;
  bool elliptic = false;
  std::uint64_t p = 2;
  double tol = 1e-9;
  std::string tau_samples;
  std::uint64_t seed = 1;
  std::string format = "json";
  std::string out;
  std::string inject;
  bool quick = false;
  bool weighted = false;
  bool timing = false;
  bool supporting = true;
};

std::vector<Complex> taus(const Options& o) {
  if (o.tau_samples.empty()) return default_tau_samples();
  std::vector<Complex> out;
  std::stringstream ss(o.tau_samples);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw InputError("--tau-samples: expected re:im pairs, got \"" + item + "\"");
    const Complex t(std::stod(item.substr(0, colon)), std::stod(item.substr(colon + 1)));
    if (t.imag() <= 0) throw InputError("--tau-samples: Im(tau) must be positive");
    out.push_back(t);
  }
  if (out.empty()) throw InputError("--tau-samples: empty list");
  return out;
}

CompareContext context(const Options& o) { return {o.tol, taus(o)}; }

/// Inline JSON if the argument starts with '{' or '[', a file path otherwise.
json load_json(const std::string& arg, const std::string& what) {
  if (arg.empty()) throw InputError(what + " is required");
  const auto first = arg.find_first_not_of(" \t\n");
  if (first != std::string::npos && (arg[first] == '{' || arg[first] == '[')) return json::parse(arg);
  std::ifstream in(arg);
  if (!in) throw InputError(what + ": cannot open " + arg);
  return json::parse(in);
}

/// A group file is either a bare descriptor or {"group": ..., "space": ...}.
std::pair<FiniteGroup, GSet> load_group(const Options& o) {
  const json doc = load_json(o.group, "--group");
  const json gdesc = doc.contains("group") ? doc.at("group") : doc;
  const FiniteGroup g = build_group(gdesc);
  json sdesc = doc.contains("space") ? doc.at("space") : json();
  if (!o.space.empty()) sdesc = load_json(o.space, "--space");
  return {g, build_gset(g, sdesc)};
}

json load_function(const Options& o) {
  json doc = load_json(o.function, "--function");
  if (o.height && doc.at("height").get<std::size_t>() != o.height)
    throw InputError("--height " + std::to_string(o.height) + " does not match the function's height " +
                     doc.at("height").dump());
  if (o.elliptic) doc["elliptic"] = true;
  return doc;
}

AdamsScaling scaling(const Options& o) {
  if (o.inject.empty()) return AdamsScaling::HalfDegree;
  if (o.inject == "adams-exponent") return AdamsScaling::FullDegree;
  throw InputError("--inject: unknown fault \"" + o.inject + "\"");
}

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out);
  if (!f) throw InputError("--out: cannot write " + o.out);
  f << text;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

std::string cell(const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

/// Renders rows as CSV or an aligned table.
std::string render_rows(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows,
                        const std::string& format) {
  std::ostringstream os;
  if (format == "csv") {
    for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << csv_field(header[i]);
    os << '\n';
    for (const auto& r : rows) {
      for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << csv_field(r[i]);
      os << '\n';
    }
    return os.str();
  }
  std::vector<std::size_t> width(header.size());
  for (std::size_t i = 0; i < header.size(); ++i) width[i] = header[i].size();
  for (const auto& r : rows)
    for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
  auto line = [&](const std::vector<std::string>& r) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "  " : "") << std::left << std::setw(int(width[i])) << r[i];
    os << '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
  return os.str();
}

/// One row per (class, degree, tau) of a class-function document.
std::string render_function(const json& doc, const std::string& format) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& v : doc.at("values"))
    for (const auto& [deg, c] : v.at("graded").items()) {
      const std::string labels = cell(v.at("labels")), point = v.at("point").dump();
      if (c.is_object() && c.contains("samples"))
        for (const auto& s : c.at("samples"))
          rows.push_back({labels, point, deg, cell(s.at("tau")), cell(s.at("value"))});
      else
        rows.push_back({labels, point, deg, "", cell(c)});
    }
  return render_rows({"tuple", "point", "degree", "tau", "value"}, rows, format);
}

json invariance_to_json(const InvarianceReport& r) {
  json v = json::array();
  for (std::size_t i = 0; i < std::min<std::size_t>(r.violations.size(), 20); ++i) {
    const Violation& x = r.violations[i];
    v.push_back({{"kind", x.kind}, {"tuple", x.tuple}, {"point", x.point}, {"magnitude", x.magnitude}});
  }
  return {{"ok", r.ok}, {"max_deviation", r.max_deviation}, {"checked", r.checked}, {"violations", v}};
}

/// Serializes `f` on the classes accepted by `keep`, checks invariance there, and emits.
template <class C, class Keep>
int emit_operated(const Options& o, const std::string& op, const ClassFunction<C>& f, Keep keep, json extra = {}) {
  const CompareContext ctx = context(o);
  std::vector<Key> keys;
  json values = json::array();
  for (const KeyClass& kc : tuple_point_classes(f.group(), f.space(), f.d())) {
    if (!keep(kc.tuple)) continue;
    keys.emplace_back(kc.tuple, kc.point);
    values.push_back({{"tuple", kc.tuple},
                      {"labels", tuple_str(f.group(), kc.tuple)},
                      {"point", kc.point},
                      {"graded", f.evaluate(kc.tuple, kc.point).to_json(ctx)}});
  }
  const InvarianceReport inv = is_invariant(f, ctx, &keys);
  json doc = {{"height", f.d()},
              {"group", f.group().descriptor()},
              {"space", f.space().descriptor()},
              {"elliptic", f.elliptic()},
              {"values", values}};
  if (f.d() == 2 && Coeff<C>::height == 1) doc["coefficients"] = "scalar";
  json out = {{"operation", op}, {"n", o.n}, {"seed", o.seed}, {"tol", o.tol}, {"result", doc}, {"invariance", invariance_to_json(inv)}};
  for (const auto& [k, v] : extra.items()) out[k] = v;
  if (o.format == "json")
    emit(o, out.dump(2) + "\n");
  else
    emit(o, render_function(doc, o.format));
  if (!inv.ok) std::cerr << op << ": output fails its invariance check (max deviation " << inv.max_deviation << ")\n";
  return inv.ok ? 0 : 1;
}

template <class F>
int with_function(const Options& o, F&& body) {
  const json doc = load_function(o);
  if (uses_lattice_coefficients(doc)) return body(class_function_from_json<LatFunction>(doc));
  return body(class_function_from_json<Complex>(doc));
}

std::size_t positive_n(const Options& o) {
  if (o.n < 0) throw InputError("--n must be nonnegative");
  return static_cast<std::size_t>(o.n);
}

int cmd_power(const Options& o) {
  return with_function(o, [&](const auto& f) {
    return emit_operated(o, "power", power_operation(f, positive_n(o)), [](const Tuple&) { return true; });
  });
}

int cmd_adams(const Options& o) {
  if (o.n < 1) throw InputError("--n must be positive for adams");
  return with_function(o, [&](const auto& f) {
    return emit_operated(o, "adams", adams(f, o.n, scaling(o)), [](const Tuple&) { return true; },
                         {{"note", kAdamsExponentNote}});
  });
}

int cmd_pseudo(const Options& o) {
  return with_function(o, [&](const auto& f) {
    const auto out = pseudo_power_etheory(f, o.p, positive_n(o));
    const FiniteGroup& w = out.group();
    // classes with an entry outside the p-power elements are not in the domain
    auto keep = [&](const Tuple& h) {
      for (Elem e : h)
        if (!is_power_of(w.order(e), o.p)) return false;
      return true;
    };
    return emit_operated(o, "pseudo", out, keep, {{"p", o.p}});
  });
}

int cmd_hecke(const Options& o) {
  if (o.n < 1) throw InputError("--n must be positive for hecke");
  const json form = load_json(o.form, "--form");
  const LatFunction f = lat_function_from_json(form);
  const LatFunction s = hecke_like(f, o.n, o.weighted);
  const CompareContext ctx = context(o);
  json samples = json::array();
  std::vector<Complex> ratios;
  for (Complex tau : ctx.taus) {
    const Complex a = f.at_tau(tau), b = s.at_tau(tau);
    json sample = {{"tau", complex_to_json(tau)}, {"value", complex_to_json(b)}, {"ratio", nullptr}};
    // a ratio at a zero of the form (E6 at i) carries no information
    if (std::abs(a) > 1e-8 * std::max(1.0, std::abs(b))) {
      ratios.push_back(b / a);
      sample["ratio"] = complex_to_json(b / a);
    }
    samples.push_back(sample);
  }
  if (ratios.empty()) throw InputError("hecke: the form vanishes at every tau sample");
  double spread = 0;
  for (const Complex& r : ratios) spread = std::max(spread, deviation(r, ratios.front()));
  const double limit = std::max(o.tol, 1e-6);
  json out = {{"operation", "hecke"},
              {"n", o.n},
              {"weighted", o.weighted},
              {"form", form},
              {"weight", f.weight()},
              {"samples", samples},
              {"eigen_ratio", complex_to_json(ratios.front())},
              {"ratio_spread", spread},
              {"constant", spread <= limit}};
  // for E_w the classical eigenvalue sigma_{w-1}(n) gives the expected ratio
  if (form.is_object() && form.contains("eisenstein") && o.n <= 64) {
    const int w = f.weight();
    double expected = std::pow(double(o.n), 1 - w) * divisor_sigma(w - 1, int(o.n));
    if (o.weighted) expected *= std::pow(double(o.n), w);
    out["expected_ratio"] = expected;
    out["expected_deviation"] = deviation(ratios.front(), expected);
  }
  if (o.format == "json") {
    emit(o, out.dump(2) + "\n");
  } else {
    std::vector<std::vector<std::string>> rows;
    for (const auto& s : samples) rows.push_back({cell(s.at("tau")), cell(s.at("value")), cell(s.at("ratio"))});
    emit(o, render_rows({"tau", "value", "ratio"}, rows, o.format));
  }
  return spread <= limit ? 0 : 1;
}

json reduction_summary(const FiniteGroup& g, const Tuple& h) {
  if (!as_wreath(g)) return nullptr;
  return reduction_to_json(reduce(g, h));
}

std::string reduction_cell(const json& r) {
  if (r.is_null()) return "";
  std::string s;
  for (const auto& o : r.at("orbits")) {
    if (!s.empty()) s += "; ";
    s += o.at("points").dump() + " L=" + o.at("lattice").dump() + " h=" + cell(o.at("reduced_labels"));
  }
  return s;
}

int cmd_classes(const Options& o) {
  const auto [g, x] = load_group(o);
  const bool with_points = !o.space.empty() || x.size() > 1;
  std::vector<std::vector<std::string>> rows;
  json classes = json::array();
  std::uint64_t total = 0;
  std::size_t index = 0;
  auto add = [&](const Tuple& rep, std::optional<Point> pt, std::uint64_t size) {
    total += size;
    const json red = reduction_summary(g, rep);
    json c = {{"index", index}, {"representative", rep}, {"labels", tuple_str(g, rep)}, {"size", size}};
    if (pt) c["point"] = *pt;
    if (!red.is_null()) c["reduction"] = red;
    classes.push_back(c);
    std::vector<std::string> row = {std::to_string(index), tuple_str(g, rep), json(rep).dump()};
    if (with_points) row.push_back(std::to_string(*pt));
    row.push_back(std::to_string(size));
    if (as_wreath(g)) row.push_back(reduction_cell(red));
    rows.push_back(row);
    ++index;
  };
  if (with_points)
    for (const KeyClass& kc : tuple_point_classes(g, x, o.d)) add(kc.tuple, kc.point, kc.size);
  else
    for (const TupleClass& tc : tuple_conjugacy_classes(g, o.d)) add(tc.rep, std::nullopt, tc.size);
  // orbit sizes must add up to the number of commuting tuples (times fixed points)
  std::uint64_t expected = 0;
  bool checked = false;
  if (g.size() <= 5000 || o.d <= 1) {
    checked = true;
    if (o.d == 0)
      expected = with_points ? x.size() : 1;
    else if (o.d == 1 && !with_points)
      expected = g.size();
    else
      for (const Tuple& h : commuting_tuples(g, o.d)) expected += with_points ? fixed_points(x, g, h).size() : 1;
  }
  const bool ok = !checked || expected == total;
  if (o.format == "json") {
    json out = {{"group", g.descriptor()}, {"order", g.size()}, {"d", o.d},         {"classes", classes},
                {"count", classes.size()}, {"size_sum", total}, {"size_sum_ok", ok}};
    if (with_points) out["space"] = x.descriptor();
    emit(o, out.dump(2) + "\n");
  } else {
    std::vector<std::string> header = {"index", "representative", "elements"};
    if (with_points) header.push_back("point");
    header.push_back("size");
    if (as_wreath(g)) header.push_back("reduction");
    emit(o, render_rows(header, rows, o.format));
  }
  if (!ok) std::cerr << "classes: orbit sizes sum to " << total << ", expected " << expected << "\n";
  return ok ? 0 : 1;
}

int cmd_reduce(const Options& o) {
  const auto [g, x] = load_group(o);
  const WreathGroup* w = as_wreath(g);
  if (!w) throw InputError("reduce: --group must be a wreath product");
  const json t = load_json(o.tuple, "--tuple");
  if (!t.is_array()) throw InputError("--tuple: expected a JSON array");
  Tuple h;
  for (const auto& e : t) {
    if (e.is_number_unsigned()) {
      h.push_back(e.get<Elem>());
      if (!g.contains(h.back())) throw InputError("--tuple: element index out of range");
    } else {
      h.push_back(w->encode({e.at("base").get<Tuple>(), e.at("perm").get<PermImage>()}));
    }
  }
  require_commuting(g, h);
  const json r = reduction_to_json(reduce(g, h));
  if (o.format == "json") {
    emit(o, json({{"tuple", h}, {"labels", tuple_str(g, h)}, {"reduction", r}}).dump(2) + "\n");
  } else {
    std::vector<std::vector<std::string>> rows;
    for (const auto& orb : r.at("orbits"))
      rows.push_back({orb.at("points").dump(), orb.at("basepoint").dump(), orb.at("lattice").dump(),
                      cell(orb.at("reduced_labels")), orb.at("reduced").dump()});
    emit(o, render_rows({"points", "basepoint", "lattice", "reduced", "reduced_elements"}, rows, o.format));
  }
  return 0;
}

int cmd_sublattices(const Options& o) {
  if (o.n < 1) throw InputError("--n must be positive");
  if (o.d < 1) throw InputError("--d must be positive");
  const auto lats = sublattices_of_index(o.d, o.n);
  if (o.format == "json") {
    json l = json::array();
    for (const auto& s : lats) l.push_back(lattice_to_json(s));
    emit(o, json({{"d", o.d}, {"n", o.n}, {"count", lats.size()}, {"lattices", l}}).dump(2) + "\n");
  } else {
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < lats.size(); ++i) rows.push_back({std::to_string(i), lattice_to_json(lats[i]).dump()});
    emit(o, render_rows({"index", "basis"}, rows, o.format));
  }
  return 0;
}

int cmd_verify(const Options& o) {
  VerifyConfig cfg;
  cfg.tol = o.tol;
  cfg.taus = taus(o);
  cfg.seed = o.seed;
  cfg.quick = o.quick;
  cfg.adams_scaling = scaling(o);
  const VerifyReport rep = run_all_suites(cfg, o.supporting);
  json out = rep.to_json(cfg);
  if (!o.timing)
    for (auto& s : out.at("suites")) s.erase("seconds");
  if (o.format == "json") {
    emit(o, out.dump(2) + "\n");
  } else {
    std::vector<std::vector<std::string>> rows;
    for (const SuiteResult& s : rep.suites) {
      std::ostringstream dev;
      dev << std::scientific << std::setprecision(3) << s.max_deviation;
      rows.push_back({s.id, s.name, s.pass ? "PASS" : "FAIL", dev.str(), std::to_string(s.checks), s.detail});
    }
    emit(o, render_rows({"suite", "name", "verdict", "max_deviation", "checks", "detail"}, rows, o.format));
  }
  std::cerr << kAdamsExponentNote << "\n";
  return rep.pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Power operations on character-ring models of equivariant K-theory and elliptic cohomology"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* c) {
    c->add_option("--tol", o.tol, "comparison tolerance")->check(CLI::PositiveNumber);
    c->add_option("--tau-samples", o.tau_samples, "comma-separated re:im values of tau");
    c->add_option("--seed", o.seed, "seed for randomized checks");
    c->add_option("--format", o.format, "output format")->check(CLI::IsMember({"json", "csv", "table"}));
    c->add_option("--out", o.out, "write output to this file");
  };
  auto function_ops = [&](CLI::App* c) {
    common(c);
    c->add_option("--function", o.function, "class function JSON (path or inline)")->required();
    c->add_option("--n", o.n, "operation index");
    c->add_option("--height", o.height, "expected height of the input")->check(CLI::Range(1, 2));
    c->add_flag("--elliptic", o.elliptic, "treat the input as SL2-equivariant");
  };

  auto* classes = app.add_subcommand("classes", "conjugacy classes of commuting d-tuples");
  common(classes);
  classes->add_option("--group", o.group, "group descriptor JSON (path or inline)");
  classes->add_option("--space", o.space, "G-set descriptor JSON; lists (tuple, fixed point) classes");
  classes->add_option("--d", o.d, "tuple arity");

  auto* power = app.add_subcommand("power", "total power operation P_n");
  function_ops(power);

  auto* adams_cmd = app.add_subcommand("adams", "Adams operation Psi_n");
  function_ops(adams_cmd);
  adams_cmd->add_option("--inject", o.inject, "fault injection (adams-exponent)");

  auto* pseudo = app.add_subcommand("pseudo", "E-theory pseudo-power operation");
  function_ops(pseudo);
  pseudo->add_option("--p", o.p, "prime")->check(CLI::PositiveNumber);

  auto* hecke = app.add_subcommand("hecke", "sum over index-n sublattices of a lattice function");
  common(hecke);
  hecke->add_option("--function,--form", o.form, "lattice function JSON, default E4");
  hecke->add_option("--n", o.n, "index");
  hecke->add_flag("--weighted", o.weighted, "multiply each term by n^w");

  auto* reduce_cmd = app.add_subcommand("reduce", "orbit reduction of a commuting tuple in a wreath product");
  common(reduce_cmd);
  reduce_cmd->add_option("--group", o.group, "wreath group descriptor JSON")->required();
  reduce_cmd->add_option("--tuple", o.tuple, "JSON array of element indices or {base, perm} objects")->required();

  auto* subl = app.add_subcommand("sublattices", "index-n sublattices of Z^d in Hermite normal form");
  common(subl);
  subl->add_option("--d", o.d, "rank");
  subl->add_option("--n", o.n, "index");

  auto* verify = app.add_subcommand("verify", "run the verification suites");
  common(verify);
  verify->add_flag("--quick", o.quick, "smaller sizes for a fast smoke run");
  verify->add_option("--inject", o.inject, "fault injection (adams-exponent)");
  verify->add_flag("--timing", o.timing, "include per-suite seconds in the JSON report");
  verify->add_flag("!--no-supporting", o.supporting, "skip the supporting suites");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*classes) return cmd_classes(o);
    if (*power) return cmd_power(o);
    if (*adams_cmd) return cmd_adams(o);
    if (*pseudo) return cmd_pseudo(o);
    if (*hecke) return cmd_hecke(o);
    if (*reduce_cmd) return cmd_reduce(o);
    if (*subl) return cmd_sublattices(o);
    if (*verify) return cmd_verify(o);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "error: malformed JSON: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::length_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
