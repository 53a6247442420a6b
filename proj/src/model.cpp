#include "torf/model.hpp"

#include <json.hpp>

#include <algorithm>
#include <regex>
#include <set>

namespace torf {

using json = nlohmann::ordered_json;

namespace {

[[noreturn]] void bad(const std::string& msg) { throw Error(ErrorKind::ParseError, msg); }

void only_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!obj.is_object()) bad(where + " must be an object");
  for (const auto& [k, _] : obj.items())
    if (std::find_if(allowed.begin(), allowed.end(), [&](const char* a) { return k == a; }) == allowed.end())
      bad("unknown key \"" + k + "\" in " + where);
}

Int parse_int(const json& j, const std::string& where) {
  if (j.is_number_integer()) return Int(j.dump());
  if (j.is_string()) {
    static const std::regex re("-?[0-9]+");
    const auto& s = j.get_ref<const std::string&>();
    if (std::regex_match(s, re)) return Int(s);
  }
  bad(where + ": expected an integer, got " + j.dump());
}

unsigned long parse_count(const json& j, const std::string& where) {
  Int v = parse_int(j, where);
  if (v < 0 || !v.fits_ulong_p()) bad(where + ": expected a nonnegative integer");
  return v.get_ui();
}

IntVec parse_vec(const json& j, std::size_t n, const std::string& where) {
  if (!j.is_array()) bad(where + ": expected a vector");
  if (j.size() != n) bad(where + ": expected " + std::to_string(n) + " entries, got " + std::to_string(j.size()));
  IntVec out;
  for (const auto& e : j) out.push_back(parse_int(e, where));
  return out;
}

std::vector<IntVec> parse_vecs(const json& j, std::size_t n, const std::string& where) {
  if (!j.is_array()) bad(where + ": expected a list of vectors");
  std::vector<IntVec> out;
  for (const auto& e : j) out.push_back(parse_vec(e, n, where));
  return out;
}

std::vector<std::string> parse_names(const json& j, const std::set<std::string>& declared,
                                     const std::string& where) {
  if (!j.is_array()) bad(where + ": expected a list of cone names");
  std::vector<std::string> out;
  for (const auto& e : j) {
    if (!e.is_string()) bad(where + ": expected a cone name, got " + e.dump());
    const auto& s = e.get_ref<const std::string&>();
    if (!declared.count(s)) bad(where + ": undeclared cone \"" + s + "\"");
    out.push_back(s);
  }
  return out;
}

json vec_json(const IntVec& v) {
  json out = json::array();
  for (const auto& x : v) out.push_back(x.get_str());
  return out;
}

json vecs_json(const std::vector<IntVec>& vs) {
  json out = json::array();
  for (const auto& v : vs) out.push_back(vec_json(v));
  return out;
}

}  // namespace

ModelSpec parse_model(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    bad(std::string("malformed JSON: ") + e.what());
  }
  only_keys(doc, {"schema", "ambient_rank", "cones", "fan", "monoids", "pairs", "extension", "options"},
            "model");
  if (!doc.contains("schema") || doc["schema"] != kModelSchema)
    bad(std::string("missing or unknown schema; expected \"") + kModelSchema + "\"");
  for (const char* k : {"ambient_rank", "cones", "fan"})
    if (!doc.contains(k)) bad(std::string("missing key \"") + k + "\"");

  ModelSpec s;
  s.ambient_rank = parse_count(doc["ambient_rank"], "ambient_rank");
  const std::size_t n = s.ambient_rank;

  std::set<std::string> declared;
  if (!doc["cones"].is_array()) bad("cones must be a list");
  for (const auto& c : doc["cones"]) {
    only_keys(c, {"name", "generators"}, "cone");
    if (!c.contains("name") || !c["name"].is_string()) bad("every cone needs a name");
    std::string name = c["name"];
    if (!declared.insert(name).second) bad("cone \"" + name + "\" declared twice");
    std::vector<IntVec> g;
    if (c.contains("generators")) g = parse_vecs(c["generators"], n, "cone " + name);
    s.cones.push_back({name, std::move(g)});
  }

  const json& fan = doc["fan"];
  if (fan.is_object()) {
    only_keys(fan, {"face_closure_of"}, "fan");
    if (!fan.contains("face_closure_of")) bad("fan object needs \"face_closure_of\"");
    s.face_closure = true;
    s.fan = parse_names(fan["face_closure_of"], declared, "fan");
  } else {
    s.fan = parse_names(fan, declared, "fan");
  }

  if (doc.contains("monoids")) {
    const json& ms = doc["monoids"];
    if (!ms.is_object()) bad("monoids must be an object keyed by cone name");
    for (const auto& [name, m] : ms.items()) {
      if (!declared.count(name)) bad("monoids: undeclared cone \"" + name + "\"");
      MonoidSpec spec;
      if (m.is_string()) {
        if (m != "saturated") bad("monoid of " + name + ": unknown keyword " + m.dump());
      } else {
        only_keys(m, {"generators", "strata"}, "monoid of " + name);
        if (m.contains("generators") == m.contains("strata"))
          bad("monoid of " + name + ": give exactly one of generators, strata");
        if (m.contains("generators")) {
          spec.kind = MonoidSpec::Kind::Generators;
          spec.generators = parse_vecs(m["generators"], n, "monoid of " + name);
        } else {
          spec.kind = MonoidSpec::Kind::Strata;
          if (!m["strata"].is_object()) bad("strata of " + name + " must be an object");
          for (const auto& [face, basis] : m["strata"].items()) {
            if (!declared.count(face)) bad("strata of " + name + ": undeclared cone \"" + face + "\"");
            spec.strata[face] = parse_vecs(basis, n, "stratum " + face);
          }
        }
      }
      s.monoids[name] = std::move(spec);
    }
  }

  if (doc.contains("pairs")) {
    if (!doc["pairs"].is_object()) bad("pairs must be an object");
    for (const auto& [name, list] : doc["pairs"].items())
      s.pairs[name] = parse_names(list, declared, "pair " + name);
  }

  if (doc.contains("extension")) {
    only_keys(doc["extension"], {"generators"}, "extension");
    if (!doc["extension"].contains("generators")) bad("extension needs generators");
    s.extension = parse_vecs(doc["extension"]["generators"], n, "extension");
  }

  if (doc.contains("options")) {
    const json& o = doc["options"];
    only_keys(o, {"box", "degree_bound", "char"}, "options");
    if (o.contains("box")) s.options.box = static_cast<long>(parse_count(o["box"], "options.box"));
    if (o.contains("degree_bound")) s.options.degree_bound = parse_count(o["degree_bound"], "options.degree_bound");
    if (o.contains("char")) s.options.characteristic = parse_count(o["char"], "options.char");
  }
  return s;
}

std::string write_model(const ModelSpec& s) {
  json doc;
  doc["schema"] = kModelSchema;
  doc["ambient_rank"] = s.ambient_rank;
  json cones = json::array();
  for (const auto& c : s.cones) cones.push_back({{"name", c.name}, {"generators", vecs_json(c.generators)}});
  doc["cones"] = cones;
  if (s.face_closure) doc["fan"] = {{"face_closure_of", s.fan}};
  else doc["fan"] = s.fan;
  if (!s.monoids.empty()) {
    json ms = json::object();
    for (const auto& [name, m] : s.monoids) {
      switch (m.kind) {
        case MonoidSpec::Kind::Saturated: ms[name] = "saturated"; break;
        case MonoidSpec::Kind::Generators: ms[name] = {{"generators", vecs_json(m.generators)}}; break;
        case MonoidSpec::Kind::Strata: {
          json st = json::object();
          for (const auto& [face, basis] : m.strata) st[face] = vecs_json(basis);
          ms[name] = {{"strata", st}};
        }
      }
    }
    doc["monoids"] = ms;
  }
  if (!s.pairs.empty()) doc["pairs"] = s.pairs;
  if (s.extension) doc["extension"] = {{"generators", vecs_json(*s.extension)}};
  json o;
  o["box"] = s.options.box;
  if (s.options.degree_bound) o["degree_bound"] = *s.options.degree_bound;
  if (s.options.characteristic) o["char"] = *s.options.characteristic;
  doc["options"] = o;
  return doc.dump(2) + "\n";
}

// ---------------------------------------------------------------------------

std::string Model::cone_name(const Cone& c) const {
  for (const auto& [name, k] : named)
    if (k == c) return name;
  return c.to_string();
}

const Cone& Model::cone(const std::string& name) const {
  for (const auto& [k, c] : named)
    if (k == name) return c;
  throw Error(ErrorKind::InvalidArgument, "no cone named \"" + name + "\"");
}

const std::vector<Cone>& Model::pair(const std::string& name) const {
  auto it = pairs.find(name);
  if (it == pairs.end()) throw Error(ErrorKind::InvalidArgument, "no pair named \"" + name + "\"");
  return it->second;
}

Model build_model(const ModelSpec& spec) {
  const std::size_t n = spec.ambient_rank;
  Model m;
  m.spec = spec;
  for (const auto& c : spec.cones) m.named.emplace_back(c.name, Cone::from_generators(n, c.generators));

  std::vector<Cone> listed;
  for (const auto& name : spec.fan) listed.push_back(m.cone(name));
  Fan fan = spec.face_closure ? face_fan_closure(n, listed) : fan_validate(n, listed);

  // explicit monoids, in fan order
  std::vector<std::optional<AffineMonoid>> explicit_m(fan.size());
  for (const auto& [name, ms] : spec.monoids) {
    const Cone& c = m.cone(name);
    auto i = fan.index_of(c);
    if (!i) throw Error(ErrorKind::ConeNotInFan, "monoid given for \"" + name + "\", which is not in the fan");
    if (explicit_m[*i]) continue;
    switch (ms.kind) {
      case MonoidSpec::Kind::Generators: explicit_m[*i] = AffineMonoid(n, ms.generators); break;
      case MonoidSpec::Kind::Saturated: explicit_m[*i] = AffineMonoid(n, saturated_generators(c, c.span())); break;
      case MonoidSpec::Kind::Strata: {
        std::vector<Sublattice> lattices;
        for (const auto& t : faces(c)) {
          std::optional<Sublattice> l;
          for (const auto& [face, basis] : ms.strata)
            if (m.cone(face) == t) l = Sublattice::from_generators(n, basis);
          lattices.push_back(l ? *l : t.span());
        }
        for (const auto& [face, _] : ms.strata)
          if (!is_face_of(m.cone(face), c))
            throw Error(ErrorKind::NotAFace, "stratum \"" + face + "\" is not a face of \"" + name + "\"");
        explicit_m[*i] = from_strata(StratifiedMonoid(c, std::move(lattices)), spec.options.degree_bound);
      }
    }
  }
  std::vector<AffineMonoid> monoids;
  for (std::size_t i = 0; i < fan.size(); ++i) {
    if (explicit_m[i]) {
      monoids.push_back(*explicit_m[i]);
      continue;
    }
    std::optional<AffineMonoid> s;
    for (std::size_t j = 0; j < fan.size() && !s; ++j)
      if (explicit_m[j] && fan.is_face(i, j)) s = face_restriction(*explicit_m[j], fan[i]);
    monoids.push_back(s ? *s : AffineMonoid(n, saturated_generators(fan[i], fan[i].span())));
  }
  m.complex = complex_validate(fan, std::move(monoids), spec.options.box);

  for (const auto& [name, list] : spec.pairs) {
    std::vector<Cone> cs;
    for (const auto& c : list) cs.push_back(m.cone(c));
    std::vector<Cone> closed;
    for (const auto& c : cs)
      for (auto& t : faces(c)) closed.push_back(std::move(t));
    std::sort(closed.begin(), closed.end());
    closed.erase(std::unique(closed.begin(), closed.end()), closed.end());
    subfan_indices(m.complex.fan(), closed);
    m.pairs[name] = std::move(closed);
  }

  if (spec.extension) {
    auto facets = fan_facets(m.complex.fan());
    if (facets.size() != 1)
      throw Error(ErrorKind::InvalidArgument, "an extension needs a fan with a single facet");
    m.extension = AffineMonoid(n, *spec.extension);
  }
  if (spec.options.characteristic) check_characteristic(*spec.options.characteristic);
  return m;
}

// ---------------------------------------------------------------------------
// fixtures

namespace {

IntVec iv(std::initializer_list<long> xs) {
  IntVec out;
  for (long x : xs) out.emplace_back(x);
  return out;
}

std::vector<IntVec> units(std::size_t n, bool with_negatives = false, std::optional<std::size_t> skip = {}) {
  std::vector<IntVec> out;
  for (std::size_t i = 0; i < n; ++i) {
    if (skip && *skip == i) continue;
    out.push_back(unit_vector(n, i));
    if (with_negatives) out.push_back(neg(unit_vector(n, i)));
  }
  return out;
}

ModelSpec closure_of(std::size_t n, std::vector<NamedCone> cones, std::vector<std::string> top) {
  ModelSpec s;
  s.ambient_rank = n;
  s.cones = std::move(cones);
  s.fan = std::move(top);
  s.face_closure = true;
  return s;
}

MonoidSpec gens(std::vector<IntVec> g) {
  MonoidSpec m;
  m.kind = MonoidSpec::Kind::Generators;
  m.generators = std::move(g);
  return m;
}

ModelSpec torus(std::size_t n) {
  ModelSpec s = closure_of(n, {{"T", units(n, true)}}, {"T"});
  s.monoids["T"] = MonoidSpec{};
  return s;
}

ModelSpec affine(std::size_t n) {
  std::vector<NamedCone> cones{{"N", units(n)}};
  std::vector<std::string> boundary;
  for (std::size_t i = 0; i < n; ++i) {
    std::string name = "F" + std::to_string(i + 1);
    cones.push_back({name, units(n, false, i)});
    boundary.push_back(name);
  }
  ModelSpec s = closure_of(n, std::move(cones), {"N"});
  s.monoids["N"] = MonoidSpec{};
  s.pairs["boundary"] = boundary;
  if (n == 2) s.pairs["axes"] = boundary;
  return s;
}

ModelSpec pinch(bool with_pairs) {
  ModelSpec s = closure_of(2,
                           {{"S", {iv({1, 0}), iv({0, 1})}},
                            {"x", {iv({1, 0})}},
                            {"y", {iv({0, 1})}},
                            {"o", {}}},
                           {"S"});
  s.monoids["S"] = gens({iv({2, 0}), iv({0, 1}), iv({1, 1})});
  s.options.characteristic = 2;
  if (with_pairs) {
    s.pairs["boundary"] = {"x", "y"};
    s.pairs["singular"] = {"x"};
  }
  return s;
}

ModelSpec power_extension(long d) {
  ModelSpec s = closure_of(1, {{"R", {iv({1})}}, {"o", {}}}, {"R"});
  s.monoids["R"] = gens({iv({d})});
  s.extension = std::vector<IntVec>{iv({1})};
  s.options.characteristic = 2;
  return s;
}

ModelSpec numeric_2_3() {
  ModelSpec s = closure_of(1, {{"R", {iv({1})}}, {"o", {}}}, {"R"});
  s.monoids["R"] = gens({iv({2}), iv({3})});
  return s;
}

ModelSpec normal_crossings(std::size_t q, std::size_t d) {
  const std::size_t n = d + 1;
  std::vector<NamedCone> cones;
  std::vector<std::string> top;
  for (std::size_t i = 0; i < q; ++i) {
    std::string name = "H" + std::to_string(i + 1);
    cones.push_back({name, units(n, false, i)});
    top.push_back(name);
  }
  ModelSpec s = closure_of(n, std::move(cones), top);
  if (q > 1) s.pairs["first"] = {"H1"};
  return s;
}

ModelSpec axes_cross() {
  ModelSpec s = closure_of(2,
                           {{"x+", {iv({1, 0})}},
                            {"x-", {iv({-1, 0})}},
                            {"y+", {iv({0, 1})}},
                            {"y-", {iv({0, -1})}}},
                           {"x+", "x-", "y+", "y-"});
  s.pairs["x"] = {"x+", "x-"};
  return s;
}

ModelSpec broken_missing_face() {
  ModelSpec s;
  s.ambient_rank = 2;
  s.cones = {{"Q", {iv({1, 0}), iv({0, 1})}}, {"x", {iv({1, 0})}}, {"o", {}}};
  s.fan = {"Q", "x", "o"};
  return s;
}

ModelSpec broken_overlap() {
  return closure_of(2, {{"A", {iv({1, 0}), iv({0, 1})}}, {"B", {iv({1, 0}), iv({1, 2})}}}, {"A", "B"});
}

ModelSpec broken_incompatible() {
  ModelSpec s = pinch(false);
  s.monoids["x"] = gens({iv({4, 0})});
  return s;
}

std::optional<long> parse_param(const std::string& s) {
  static const std::regex re("[1-9][0-9]{0,2}");
  if (!std::regex_match(s, re)) return std::nullopt;
  return std::stol(s);
}

}  // namespace

std::vector<std::string> fixture_names() {
  std::vector<std::string> out{"torus-1", "torus-2", "torus-3", "affine-1", "affine-2", "affine-3", "affine-4",
                               "pinch", "pinch-pair", "power-d-extension", "numeric-semigroup-2-3"};
  for (std::size_t d = 1; d <= 3; ++d)
    for (std::size_t q = 1; q <= std::min<std::size_t>(3, d + 1); ++q)
      out.push_back("normal-crossings-" + std::to_string(q) + "-" + std::to_string(d));
  out.push_back("axes-cross");
  return out;
}

std::vector<std::string> broken_fixture_names() {
  return {"broken-missing-face", "broken-overlap", "broken-incompatible"};
}

ModelSpec fixture(const std::string& name) {
  std::smatch g;
  static const std::regex torus_re("torus-([0-9]+)"), affine_re("affine-([0-9]+)"),
      power_re("power-([0-9]+)-extension"), nc_re("normal-crossings-([0-9]+)-([0-9]+)");
  if (std::regex_match(name, g, torus_re)) {
    auto n = parse_param(g[1]);
    if (n && *n <= 3) return torus(*n);
  } else if (std::regex_match(name, g, affine_re)) {
    auto n = parse_param(g[1]);
    if (n && *n <= 6) return affine(*n);
  } else if (name == "power-d-extension") {
    return power_extension(6);
  } else if (std::regex_match(name, g, power_re)) {
    auto d = parse_param(g[1]);
    if (d) return power_extension(*d);
  } else if (std::regex_match(name, g, nc_re)) {
    auto q = parse_param(g[1]), d = parse_param(g[2]);
    if (q && d && *d <= 3 && *q <= *d + 1) return normal_crossings(*q, *d);
  } else if (name == "pinch") {
    return pinch(false);
  } else if (name == "pinch-pair") {
    return pinch(true);
  } else if (name == "numeric-semigroup-2-3") {
    return numeric_2_3();
  } else if (name == "axes-cross") {
    return axes_cross();
  } else if (name == "broken-missing-face") {
    return broken_missing_face();
  } else if (name == "broken-overlap") {
    return broken_overlap();
  } else if (name == "broken-incompatible") {
    return broken_incompatible();
  }
  throw Error(ErrorKind::UnknownFixture, "no built-in fixture named \"" + name + "\"");
}

}  // namespace torf
