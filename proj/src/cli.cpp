#include "torf/cli.hpp"

#include "torf/derham.hpp"
#include "torf/model.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace torf {

using json = nlohmann::ordered_json;

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::ParseError:
    case ErrorKind::UnknownFixture:
    case ErrorKind::InvalidArgument:
      return 1;
    case ErrorKind::GeneratorExtractionIncomplete:
    case ErrorKind::Internal:
      return 3;
    default:
      return 2;
  }
}

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

json vec_json(std::span<const Int> v) {
  json out = json::array();
  for (const auto& x : v) out.push_back(x.get_str());
  return out;
}

json vecs_json(const std::vector<IntVec>& vs) {
  json out = json::array();
  for (const auto& v : vs) out.push_back(vec_json(v));
  return out;
}

// ---- human rendering of a report ------------------------------------------

bool is_scalar(const json& j) { return !j.is_array() && !j.is_object(); }
bool is_vector(const json& j) {
  return j.is_array() && std::all_of(j.begin(), j.end(), [](const json& e) { return is_scalar(e); });
}
bool is_table(const json& j) {
  return j.is_array() && !j.empty() && std::all_of(j.begin(), j.end(), [](const json& e) { return e.is_object(); });
}

std::string scalar_text(const json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_boolean()) return j.get<bool>() ? "yes" : "no";
  if (j.is_null()) return "-";
  return j.dump();
}

std::string cell_text(const json& j) {
  if (is_scalar(j)) return scalar_text(j);
  if (is_vector(j)) {
    std::string s = "(";
    for (std::size_t i = 0; i < j.size(); ++i) s += (i ? "," : "") + scalar_text(j[i]);
    return s + ")";
  }
  if (j.is_array()) {
    if (j.empty()) return "{}";
    std::string s;
    for (std::size_t i = 0; i < j.size(); ++i) s += (i ? " " : "") + cell_text(j[i]);
    return s;
  }
  return j.dump();
}

void render_table(const json& rows, std::ostream& out, const std::string& pad) {
  std::vector<std::string> cols;
  for (const auto& r : rows)
    for (const auto& [k, _] : r.items())
      if (std::find(cols.begin(), cols.end(), k) == cols.end()) cols.push_back(k);
  std::vector<std::vector<std::string>> cells;
  std::vector<std::size_t> w(cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c) w[c] = cols[c].size();
  for (const auto& r : rows) {
    std::vector<std::string> line;
    for (std::size_t c = 0; c < cols.size(); ++c) {
      line.push_back(r.contains(cols[c]) ? cell_text(r[cols[c]]) : "");
      w[c] = std::max(w[c], line.back().size());
    }
    cells.push_back(std::move(line));
  }
  auto emit = [&](const std::vector<std::string>& line) {
    std::string s = pad;
    for (std::size_t c = 0; c < line.size(); ++c) {
      s += line[c];
      if (c + 1 < line.size()) s += std::string(w[c] - line[c].size() + 2, ' ');
    }
    out << s << '\n';
  };
  emit(cols);
  for (const auto& line : cells) emit(line);
}

void render(const json& obj, std::ostream& out, const std::string& pad) {
  for (const auto& [k, v] : obj.items()) {
    if (is_table(v)) {
      out << pad << k << ":\n";
      render_table(v, out, pad + "  ");
    } else if (v.is_object()) {
      out << pad << k << ":\n";
      render(v, out, pad + "  ");
    } else {
      out << pad << k << ": " << cell_text(v) << '\n';
    }
  }
}

// ---- commands --------------------------------------------------------------

struct Options {
  std::string command;
  std::string file;
  std::string mode = "wn";
  std::vector<unsigned long> chars;
  std::string pair;
  std::string cone;
  std::size_t p = 0;
  std::optional<long> box;
  bool theoretical = false;
  std::optional<unsigned long> degree_bound;
  std::string format = "human";
  json echo = json::object();
};

json lattice_row(const Model& m, const Cone& c, const Sublattice& l) {
  auto idx = lattice_index(l, c.span());
  return {{"cone", m.cone_name(c)},
          {"rank", l.rank()},
          {"basis", vecs_json(l.basis())},
          {"index", idx ? idx->get_str() : "infinite"}};
}

std::vector<unsigned long> classify_chars(const Options& o, const Model& m) {
  if (!o.chars.empty()) return o.chars;
  std::vector<unsigned long> out{0, 2, 3, 5};
  if (m.spec.options.characteristic &&
      std::find(out.begin(), out.end(), *m.spec.options.characteristic) == out.end())
    out.push_back(*m.spec.options.characteristic);
  return out;
}

unsigned long single_char(const Options& o, const Model& m) {
  if (o.chars.size() > 1) throw Error(ErrorKind::InvalidArgument, "give a single --char for this command");
  if (!o.chars.empty()) return o.chars[0];
  return m.spec.options.characteristic.value_or(0);
}

std::optional<unsigned long> degree_bound(const Options& o, const Model& m) {
  return o.degree_bound ? o.degree_bound : m.spec.options.degree_bound;
}

std::span<const Cone> pair_of(const Options& o, const Model& m) {
  if (o.pair.empty()) return {};
  return m.pair(o.pair);
}

json cmd_validate(const Model& m) {
  const auto& x = m.complex;
  auto facets = fan_facets(x.fan());
  json cones = json::array();
  for (std::size_t i = 0; i < x.size(); ++i) {
    const Cone& c = x.fan()[i];
    cones.push_back({{"cone", m.cone_name(c)},
                     {"dim", c.dim()},
                     {"rays", vecs_json(c.rays())},
                     {"lineality", vecs_json(c.lineality().basis())},
                     {"facet", std::find(facets.begin(), facets.end(), c) != facets.end()},
                     {"monoid", vecs_json(x.monoid(i).generators())}});
  }
  json pairs = json::array();
  for (const auto& [name, cs] : m.pairs) pairs.push_back({{"pair", name}, {"cones", cs.size()}});
  json r{{"valid", true}, {"ambient_rank", x.ambient_rank()}, {"cones", cones}};
  if (!pairs.empty()) r["pairs"] = pairs;
  return r;
}

json cmd_normalize(const Options& o, const Model& m) {
  if (o.mode != "sn" && o.mode != "wn") throw Error(ErrorKind::InvalidArgument, "--mode must be sn or wn");
  const unsigned long p = o.mode == "sn" ? 0 : single_char(o, m);
  check_characteristic(p);
  const auto& x = m.complex;
  bool already = o.mode == "sn" ? is_seminormal_complex(x) : is_weakly_normal_complex(x, p);
  MonoidalComplex y = wn_complex(x, p, degree_bound(o, m));
  json cones = json::array();
  for (std::size_t i = 0; i < y.size(); ++i) {
    const Cone& c = y.fan()[i];
    json row = lattice_row(m, c, y.monoid(i).group());
    row["generators"] = vecs_json(y.monoid(i).generators());
    cones.push_back(row);
  }
  json r{{"mode", o.mode}, {"char", p}, {"already_normal", already}, {"cones", cones}};
  if (m.extension) {
    const AffineMonoid& s = x.monoid_of(fan_facets(x.fan())[0]);
    RelativeNormalization rel = o.mode == "sn" ? relative_sn(s, *m.extension) : relative_wn(s, *m.extension, p);
    AffineMonoid g = rel.generators(degree_bound(o, m));
    r["relative"] = {{"extension", vecs_json(m.extension->generators())}, {"generators", vecs_json(g.generators())}};
  }
  return r;
}

json cmd_classify(const Options& o, const Model& m) {
  const auto& x = m.complex;
  auto family = classify(x);
  json lattices = json::array();
  for (std::size_t i = 0; i < x.size(); ++i) lattices.push_back(lattice_row(m, x.fan()[i], family[i]));
  json wn = json::array();
  for (unsigned long p : classify_chars(o, m)) {
    check_characteristic(p);
    wn.push_back({{"char", p}, {"weakly_normal", is_weakly_normal_complex(x, p)}});
  }
  return {{"lattices", lattices}, {"seminormal", is_seminormal_complex(x)}, {"weakly_normal", wn}};
}

json cmd_orbits(const Model& m) {
  json rows = json::array();
  for (const auto& r : orbits(m.complex))
    rows.push_back({{"cone", m.cone_name(r.cone)},
                    {"dim", r.cone.dim()},
                    {"torus_rank", r.lattice.rank()},
                    {"character_lattice", vecs_json(r.lattice.basis())},
                    {"facet", r.facet},
                    {"closed", r.closed}});
  return {{"orbits", rows}};
}

json cmd_betti(const Options& o, const Model& m) {
  if (o.theoretical && o.box) throw Error(ErrorKind::InvalidArgument, "--theoretical and --box exclude each other");
  FormModule fm(m.complex);
  BettiTable t = fm.betti(o.box, pair_of(o, m), 0);
  json r{{"mode", t.box ? "box" : "theoretical"}};
  if (t.box) r["box"] = *t.box;
  if (!o.pair.empty()) r["pair"] = o.pair;
  r["betti"] = t.dims;
  return r;
}

json cmd_germ(const Options& o, const Model& m) {
  if (o.cone.empty()) throw Error(ErrorKind::InvalidArgument, "germ needs --cone NAME");
  const Cone& t = m.cone(o.cone);
  if (!m.complex.fan().index_of(t))
    throw Error(ErrorKind::ConeNotInFan, "\"" + o.cone + "\" is not a cone of the fan", t.relint_point());
  MonoidalComplex g = germ_at(m.complex, t);
  json cones = json::array();
  for (std::size_t i = 0; i < g.size(); ++i)
    cones.push_back({{"cone", g.fan()[i].to_string()},
                     {"dim", g.fan()[i].dim()},
                     {"monoid", vecs_json(g.monoid(i).generators())}});
  return {{"at", o.cone}, {"cones", cones}};
}

json cmd_forms(const Options& o, const Model& m) {
  const long box = o.box.value_or(m.spec.options.box);
  json rows = json::array();
  std::size_t total = 0;
  bool wn = is_weakly_normal_complex(m.complex, 0);
  if (wn) {
    FormModule fm(m.complex);
    for (const auto& r : fm.pair_dims(pair_of(o, m), o.p, box)) {
      if (r.lhs == 0 && r.rhs == 0) continue;
      rows.push_back({{"degree", vec_json(r.degree)}, {"dim", r.lhs}, {"open_cone_sum", r.rhs}});
      total += r.lhs;
    }
  } else {
    if (!o.pair.empty()) throw Error(ErrorKind::NotWeaklyNormal, "relative forms need a weakly normal complex");
    for (const auto& r : hdiff_general(m.complex, o.p, box, degree_bound(o, m))) {
      if (r.dim == 0) continue;
      rows.push_back({{"degree", vec_json(r.degree)}, {"dim", r.dim}});
      total += r.dim;
    }
  }
  json r{{"p", o.p}, {"box", box}};
  if (!o.pair.empty()) r["pair"] = o.pair;
  r["computed_on"] = wn ? "input" : "weak normalization";
  r["total"] = total;
  r["degrees"] = rows;
  return r;
}

json run_command(const Options& o, const Model& m) {
  if (o.command == "validate") return cmd_validate(m);
  if (o.command == "normalize") return cmd_normalize(o, m);
  if (o.command == "classify") return cmd_classify(o, m);
  if (o.command == "orbits") return cmd_orbits(m);
  if (o.command == "betti") return cmd_betti(o, m);
  if (o.command == "germ") return cmd_germ(o, m);
  return cmd_forms(o, m);
}

void emit(const Options& o, const json& report, std::ostream& out) {
  if (o.format == "machine") {
    out << report.dump(2) << '\n';
    return;
  }
  std::string line = "torf " + o.command;
  for (const auto& [k, v] : o.echo.items()) {
    if (v.is_boolean()) line += " --" + k;
    else if (v.is_array())
      for (const auto& e : v) line += " --" + k + " " + scalar_text(e);
    else line += " --" + k + " " + scalar_text(v);
  }
  out << line << '\n' << "input digest: " << report["input_digest"].get<std::string>() << '\n';
  if (report.contains("results")) render(report["results"], out, "");
  if (report.contains("error")) render(json{{"error", report["error"]}}, out, "");
  for (const auto& d : report["diagnostics"]) out << "note: " << d.get<std::string>() << '\n';
}

bool read_input(const Options& o, std::istream& in, std::string& text, std::ostream& err) {
  std::ostringstream ss;
  if (o.file.empty() || o.file == "-") {
    ss << in.rdbuf();
  } else {
    std::ifstream f(o.file, std::ios::binary);
    if (!f) {
      err << "torf: cannot read " << o.file << '\n';
      return false;
    }
    ss << f.rdbuf();
  }
  text = ss.str();
  return true;
}

int run_fixtures(const Options& o, std::ostream& out) {
  if (o.file.empty()) {
    for (const auto& n : fixture_names()) out << n << '\n';
    for (const auto& n : broken_fixture_names()) out << n << "  (invalid on purpose)\n";
    return 0;
  }
  out << write_model(fixture(o.file));
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  static const std::vector<std::string> commands{"validate", "normalize", "classify", "orbits",
                                                 "betti",    "germ",      "forms",    "fixtures"};
  CLI::App app{"Toric face rings: monoidal complexes, normalizations and de Rham data", "torf"};
  Options o;
  app.add_option("command", o.command, "validate|normalize|classify|orbits|betti|germ|forms|fixtures")
      ->required()
      ->check(CLI::IsMember(commands));
  app.add_option("file", o.file, "model file (default: standard input); fixture name for `fixtures`");
  auto* mode = app.add_option("--mode", o.mode, "normalization: sn or wn")->check(CLI::IsMember({"sn", "wn"}));
  auto* chr = app.add_option("--char", o.chars, "characteristic(s): 0 or a prime")->allow_extra_args(false);
  auto* pair = app.add_option("--pair", o.pair, "pair (subfan) name from the model");
  auto* cone = app.add_option("--cone", o.cone, "cone name from the model");
  auto* p = app.add_option("--p", o.p, "form degree");
  auto* box = app.add_option("--box", o.box, "box bound B: degrees with |m_i| <= B")->check(CLI::NonNegativeNumber);
  auto* th = app.add_flag("--theoretical", o.theoretical, "Betti numbers from the degree-0 fiber only");
  auto* db = app.add_option("--degree-bound", o.degree_bound, "generator search degree bound");
  app.add_option("--format", o.format, "human or machine")->check(CLI::IsMember({"human", "machine"}));

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "torf: " << e.what() << '\n';
    return 1;
  }
  if (*mode) o.echo["mode"] = o.mode;
  if (*chr) o.echo["char"] = o.chars;
  if (*pair) o.echo["pair"] = o.pair;
  if (*cone) o.echo["cone"] = o.cone;
  if (*p) o.echo["p"] = o.p;
  if (*box) o.echo["box"] = *o.box;
  if (*th) o.echo["theoretical"] = true;
  if (*db) o.echo["degree-bound"] = *o.degree_bound;

  if (o.command == "fixtures") {
    try {
      return run_fixtures(o, out);
    } catch (const Error& e) {
      err << "torf: " << to_string(e.kind()) << ": " << e.what() << '\n';
      return exit_code(e.kind());
    }
  }

  std::string text;
  if (!read_input(o, in, text, err)) return 1;
  json report;
  report["command"] = {{"name", o.command}, {"options", o.echo}};
  report["input_digest"] = "fnv1a64:" + fnv1a_hex(text);
  report["diagnostics"] = json::array();

  int code = 0;
  try {
    ModelSpec spec = parse_model(text);
    Model m = build_model(spec);
    report["results"] = run_command(o, m);
  } catch (const Error& e) {
    code = exit_code(e.kind());
    if (code == 1) {
      err << "torf: " << to_string(e.kind()) << ": " << e.what() << '\n';
      return 1;
    }
    json ej{{"kind", to_string(e.kind())}, {"message", e.what()}};
    if (e.witness()) ej["witness"] = vec_json(*e.witness());
    if (o.command == "validate") report["results"] = {{"valid", false}};
    report["error"] = ej;
    err << "torf: " << to_string(e.kind()) << ": " << e.what() << '\n';
  }
  // move diagnostics last for readability
  json d = report["diagnostics"];
  report.erase("diagnostics");
  report["diagnostics"] = d;
  emit(o, report, out);
  return code;
}

}  // namespace torf
