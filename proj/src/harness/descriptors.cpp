#include <cmath>
#include <random>

#include "nilspace/bundle.hpp"
#include "nilspace/extension.hpp"
#include "nilspace/harness.hpp"

namespace nilspace::harness {

std::string join(const std::string& path, const std::string& key) { return path + "/" + key; }

const Json& field(const Json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) throw ConfigError(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError(join(path, key), "missing required field");
  return *it;
}

Int get_int(const Json& obj, const char* key, const std::string& path) {
  const Json& v = field(obj, key, path);
  if (!v.is_number_integer()) throw ConfigError(join(path, key), "expected an integer");
  return v.get<Int>();
}

Int get_int(const Json& obj, const char* key, const std::string& path, Int fallback) {
  if (!obj.is_object() || !obj.contains(key)) return fallback;
  return get_int(obj, key, path);
}

double get_double(const Json& obj, const char* key, const std::string& path, double fallback) {
  if (!obj.is_object() || !obj.contains(key)) return fallback;
  const Json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(join(path, key), "expected a number");
  return v.get<double>();
}

namespace {

std::vector<Int> int_list(const Json& j, const std::string& path) {
  if (!j.is_array()) throw ConfigError(path, "expected an array of integers");
  std::vector<Int> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number_integer()) throw ConfigError(join(path, std::to_string(i)), "expected an integer");
    out.push_back(j[i].get<Int>());
  }
  return out;
}

std::string get_string(const Json& obj, const char* key, const std::string& path) {
  const Json& v = field(obj, key, path);
  if (!v.is_string()) throw ConfigError(join(path, key), "expected a string");
  return v.get<std::string>();
}

int small_int(Int v, const std::string& path, Int lo, Int hi) {
  if (v < lo || v > hi)
    throw ConfigError(path, "value " + std::to_string(v) + " outside [" + std::to_string(lo) + ", " +
                                std::to_string(hi) + "]");
  return static_cast<int>(v);
}

// Uniform double in [0, 1) from the top 53 bits; std distributions are not
// specified bit-for-bit across standard libraries.
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

FinAbGroup parse_group(const Json& j, const std::string& path) {
  const auto orders = int_list(j, path);
  for (std::size_t i = 0; i < orders.size(); ++i)
    if (orders[i] < 1 || orders[i] > 4096)
      throw ConfigError(join(path, std::to_string(i)), "cyclic order must lie in [1, 4096]");
  const FinAbGroup g(orders);
  if (g.order() > (1u << 20)) throw ConfigError(path, "group order exceeds 2^20");
  return g;
}

Cubespace parse_space(const Json& j, const std::string& path) {
  const std::string type = get_string(j, "type", path);
  const int n_max = small_int(get_int(j, "n_max", path, kDefaultNMax), join(path, "n_max"), 1, kMaxCubeDim);
  if (type == "dk") {
    const FinAbGroup g = parse_group(field(j, "group", path), join(path, "group"));
    return dk_structure(g, small_int(get_int(j, "k", path), join(path, "k"), 1, 12), n_max);
  }
  if (type == "linear") return linear_structure(parse_group(field(j, "group", path), join(path, "group")), n_max);
  if (type == "point") return point_space();
  if (type == "free") {
    const Int n = get_int(j, "modulus", path);
    if (n < 1) throw ConfigError(join(path, "modulus"), "must be >= 1");
    std::vector<int> ranks;
    for (Int r : int_list(field(j, "ranks", path), join(path, "ranks")))
      ranks.push_back(small_int(r, join(path, "ranks"), 0, 16));
    return mod_free_nilspace(n, ranks, n_max);
  }
  if (type == "product") {
    const Json& parts = field(j, "parts", path);
    if (!parts.is_array() || parts.empty()) throw ConfigError(join(path, "parts"), "expected a nonempty array");
    std::vector<Cubespace> out;
    for (std::size_t i = 0; i < parts.size(); ++i)
      out.push_back(parse_space(parts[i], join(join(path, "parts"), std::to_string(i))));
    return out.size() == 1 ? out[0] : product(std::move(out));
  }
  if (type == "relabel") {
    const Cubespace base = parse_space(field(j, "base", path), join(path, "base"));
    PointMap perm = parse_map(field(j, "perm", path), join(path, "perm"), base.size(), base.size());
    if (!is_surjective(perm, base.size())) throw ConfigError(join(path, "perm"), "not a permutation");
    return relabel(base, std::move(perm));
  }
  if (type == "factor") {
    const Cubespace base = parse_space(field(j, "base", path), join(path, "base"));
    return factor_nilspace(base, small_int(get_int(j, "i", path), join(path, "i"), 0, 12)).space;
  }
  if (type == "pullback") {
    const Cubespace total = parse_space(field(j, "total", path), join(path, "total"));
    const Cubespace base = parse_space(field(j, "base", path), join(path, "base"));
    return pullback_space(total, base,
                          parse_map(field(j, "proj", path), join(path, "proj"), total.size(), base.size()));
  }
  if (type == "subset") {
    const Cubespace base = parse_space(field(j, "base", path), join(path, "base"));
    std::vector<Point> pts;
    for (Int p : int_list(field(j, "points", path), join(path, "points"))) {
      if (p < 0 || static_cast<std::uint64_t>(p) >= base.size())
        throw ConfigError(join(path, "points"), "point outside the base");
      pts.push_back(static_cast<Point>(p));
    }
    return induced_subspace(base, std::move(pts));
  }
  throw ConfigError(join(path, "type"), "unknown space type '" + type + "'");
}

PointMap parse_map(const Json& j, const std::string& path, std::size_t size, std::size_t target_size) {
  const auto v = int_list(j, path);
  if (v.size() != size) throw ConfigError(path, "expected " + std::to_string(size) + " entries");
  PointMap out(size);
  for (std::size_t i = 0; i < size; ++i) {
    if (v[i] < 0 || static_cast<std::uint64_t>(v[i]) >= target_size)
      throw ConfigError(join(path, std::to_string(i)), "image outside the target");
    out[i] = static_cast<Point>(v[i]);
  }
  return out;
}

Phase parse_phase(const Json& j, const std::string& path) {
  try {
    if (j.is_number_integer()) return Phase(j.get<Int>(), 1);
    if (j.is_string()) return Phase::parse(j.get<std::string>());
  } catch (const Error& e) {
    throw ConfigError(path, e.what());
  }
  throw ConfigError(path, "expected a phase \"p/q\"");
}

PolyMap::MultiIndex parse_multi_index(const std::string& text, const std::string& path) {
  if (text.size() < 2 || text.front() != '(' || text.back() != ')')
    throw ConfigError(path, "multi-index must look like \"(r_1,...,r_d)\"");
  PolyMap::MultiIndex out;
  std::string cur;
  for (std::size_t i = 1; i < text.size() - 1; ++i) {
    const char c = text[i];
    if (c == ',') {
      if (cur.empty()) throw ConfigError(path, "empty multi-index entry");
      out.push_back(std::stoi(cur));
      cur.clear();
    } else if (c >= '0' && c <= '9') {
      cur += c;
    } else if (c != ' ') {
      throw ConfigError(path, "bad character in multi-index");
    }
  }
  if (!cur.empty()) out.push_back(std::stoi(cur));
  else if (!out.empty()) throw ConfigError(path, "empty multi-index entry");
  return out;
}

PolyMap parse_polymap(const Json& j, const std::string& path) {
  const int arity = small_int(get_int(j, "arity", path), join(path, "arity"), 0, 8);
  const FinAbGroup target = parse_group(field(j, "target", path), join(path, "target"));
  const Json& coeffs = field(j, "coeffs", path);
  if (!coeffs.is_object()) throw ConfigError(join(path, "coeffs"), "expected an object");
  std::map<PolyMap::MultiIndex, Element> c;
  for (auto it = coeffs.begin(); it != coeffs.end(); ++it) {
    const std::string where = join(join(path, "coeffs"), it.key());
    auto r = parse_multi_index(it.key(), where);
    if (static_cast<int>(r.size()) != arity) throw ConfigError(where, "multi-index length differs from arity");
    auto e = int_list(it.value(), where);
    if (e.size() != target.num_factors()) throw ConfigError(where, "element has the wrong number of coordinates");
    c[r] = target.reduce(e);
  }
  return PolyMap(arity, target, std::move(c));
}

BinomialPhase parse_binomial_phase(const Json& j, const std::string& path, int arity) {
  if (!j.is_object()) throw ConfigError(path, "expected an object of \"(r)\": \"p/q\"");
  BinomialPhase b{arity, {}};
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string where = join(path, it.key());
    auto r = parse_multi_index(it.key(), where);
    if (static_cast<int>(r.size()) != arity) throw ConfigError(where, "multi-index length differs from arity");
    b.terms[r] = b.terms[r] + parse_phase(it.value(), where);
  }
  return b;
}

Character parse_character(const Json& j, const std::string& path, const FinAbGroup& g) {
  const Json& c = field(j, "coeffs", path);
  if (!c.is_array() || c.size() != g.num_factors())
    throw ConfigError(join(path, "coeffs"), "one phase per cyclic factor required");
  std::vector<Phase> ph;
  for (std::size_t i = 0; i < c.size(); ++i) ph.push_back(parse_phase(c[i], join(join(path, "coeffs"), std::to_string(i))));
  try {
    return Character(g, std::move(ph));
  } catch (const Error& e) {
    throw ConfigError(path, e.what());
  }
}

GroupFunction parse_function(const Json& j, const std::string& path, std::uint64_t seed,
                             std::optional<PhaseCoeffs>* form) {
  const FinAbGroup g = parse_group(field(j, "group", path), join(path, "group"));
  if (g.order() > 4096) throw ConfigError(join(path, "group"), "function tables are limited to 4096 points");
  if (form) form->reset();
  if (j.contains("values")) {
    const Json& v = j.at("values");
    const std::string where = join(path, "values");
    if (!v.is_array() || v.size() != g.order())
      throw ConfigError(where, "expected " + std::to_string(g.order()) + " values");
    std::vector<Complex> vals;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const Json& x = v[i];
      if (x.is_number()) vals.emplace_back(x.get<double>(), 0.0);
      else if (x.is_array() && x.size() == 2 && x[0].is_number() && x[1].is_number())
        vals.emplace_back(x[0].get<double>(), x[1].get<double>());
      else throw ConfigError(join(where, std::to_string(i)), "expected a number or [re, im]");
    }
    try {
      return GroupFunction(g, std::move(vals));
    } catch (const InvalidArgument& e) {
      throw ConfigError(where, e.what());
    }
  }
  if (j.contains("phases")) {
    const Json& v = j.at("phases");
    const std::string where = join(path, "phases");
    if (!v.is_array() || v.size() != g.order())
      throw ConfigError(where, "expected " + std::to_string(g.order()) + " phases");
    std::vector<Phase> ph;
    for (std::size_t i = 0; i < v.size(); ++i) ph.push_back(parse_phase(v[i], join(where, std::to_string(i))));
    return GroupFunction::from_phases(g, std::move(ph));
  }
  if (j.contains("coeffs")) {
    PhaseCoeffs c{g, parse_binomial_phase(j.at("coeffs"), join(path, "coeffs"), static_cast<int>(g.num_factors()))};
    if (form) *form = c;
    return c.evaluate();
  }
  if (j.contains("polymap")) {
    const PolyMap p = parse_polymap(j.at("polymap"), join(path, "polymap"));
    const Character chi = parse_character(field(j, "character", path), join(path, "character"), p.target());
    if (p.arity() != static_cast<int>(g.num_factors()))
      throw ConfigError(join(path, "polymap"), "arity must equal the number of cyclic factors of the group");
    PhaseCoeffs c{g, BinomialPhase{p.arity(), {}}};
    for (const auto& [r, coeff] : p.coeffs()) c.form.terms[r] = chi.phase(coeff);
    if (form) *form = c;
    return c.evaluate();
  }
  if (j.contains("constant")) {
    const Json& v = j.at("constant");
    if (v.is_string()) return GroupFunction::from_phases(g, std::vector<Phase>(g.order(), parse_phase(v, join(path, "constant"))));
    if (!v.is_number()) throw ConfigError(join(path, "constant"), "expected a number or a phase");
    if (std::abs(v.get<double>()) > 1.0) throw ConfigError(join(path, "constant"), "|c| must be <= 1");
    return GroupFunction::constant(g, Complex(v.get<double>(), 0.0));
  }
  if (j.contains("random")) {
    const std::string kind = get_string(j, "random", path);
    std::mt19937_64 rng(static_cast<std::uint64_t>(get_int(j, "seed", path, static_cast<Int>(seed))));
    if (kind == "unimodular") {
      const Int den = get_int(j, "denominator", path, 1024);
      if (den < 1 || den > (1 << 20)) throw ConfigError(join(path, "denominator"), "must lie in [1, 2^20]");
      std::vector<Phase> ph;
      for (std::uint64_t x = 0; x < g.order(); ++x) ph.emplace_back(static_cast<Int>(rng() % static_cast<std::uint64_t>(den)), den);
      return GroupFunction::from_phases(g, std::move(ph));
    }
    if (kind == "disk") {
      std::vector<Complex> vals;
      for (std::uint64_t x = 0; x < g.order(); ++x) {
        const double r = std::sqrt(unit(rng));
        const double a = 2.0 * M_PI * unit(rng);
        vals.push_back(std::polar(r * (1.0 - 1e-15), a));
      }
      return GroupFunction(g, std::move(vals));
    }
    throw ConfigError(join(path, "random"), "expected \"unimodular\" or \"disk\"");
  }
  throw ConfigError(path, "function needs one of values, phases, coeffs, polymap, constant, random");
}

GroupExtension parse_group_extension(const Json& j, const std::string& path) {
  const FinAbGroup a = parse_group(field(j, "base", path), join(path, "base"));
  if (!a.is_normal_form()) throw ConfigError(join(path, "base"), "give the base by its invariant factors");
  return height_extension(a, small_int(get_int(j, "height", path), join(path, "height"), 1, 8));
}

Json group_json(const FinAbGroup& g) {
  return Json{{"cyclic_orders", g.cyclic_orders()}, {"invariant_factors", g.invariant_factors()},
              {"order", g.order()}, {"name", g.str()}};
}

Json phases_json(const std::vector<Phase>& p) {
  Json out = Json::array();
  for (const auto& x : p) out.push_back(x.str());
  return out;
}

Json values_json(const GroupFunction& f) {
  if (f.phases()) return phases_json(*f.phases());
  Json out = Json::array();
  for (const auto& v : f.values()) out.push_back({v.real(), v.imag()});
  return out;
}

Json form_json(const BinomialPhase& b) {
  Json out = Json::object();
  for (const auto& [r, theta] : b.terms) {
    if (theta.is_zero()) continue;
    std::string key = "(";
    for (std::size_t i = 0; i < r.size(); ++i) key += (i ? "," : "") + std::to_string(r[i]);
    out[key + ")"] = theta.str();
  }
  return out;
}

}  // namespace nilspace::harness
