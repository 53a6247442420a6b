#pragma once

// Model files: a JSON document describing a monoidal complex by named cones,
// a fan, per-cone monoids and optional subfan pairs.
//
//   {
//     "schema": "torf-model/1",
//     "ambient_rank": 2,
//     "cones": [{"name": "sigma", "generators": [["2","0"], ["0","1"]]}, ...],
//     "fan": ["sigma", "x", "y", "o"]          or  {"face_closure_of": ["sigma"]},
//     "monoids": {"sigma": {"generators": [...]}
//                        | "saturated"
//                        | {"strata": {"x": [basis...], ...}}},
//     "pairs": {"boundary": ["x", "y"]},        (face closure is taken)
//     "extension": {"generators": [...]},       (an extension of the single facet monoid)
//     "options": {"box": 4, "degree_bound": 12, "char": 2}
//   }
//
// Integers may be JSON numbers or decimal strings; they are written as strings.

#include "torf/complex.hpp"

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace torf {

inline constexpr const char* kModelSchema = "torf-model/1";

struct NamedCone {
  std::string name;
  std::vector<IntVec> generators;
};

struct MonoidSpec {
  enum class Kind { Generators, Saturated, Strata } kind = Kind::Saturated;
  std::vector<IntVec> generators;
  // face name -> lattice basis; faces not listed get Z^n cap span
  std::map<std::string, std::vector<IntVec>> strata;
};

struct ModelOptions {
  long box = 4;
  std::optional<unsigned long> degree_bound;
  std::optional<unsigned long> characteristic;
};

// The parsed document, before any geometric validation.
struct ModelSpec {
  std::size_t ambient_rank = 0;
  std::vector<NamedCone> cones;
  std::vector<std::string> fan;  // cone names
  bool face_closure = false;     // fan is the face closure of `fan`
  std::map<std::string, MonoidSpec> monoids;
  std::map<std::string, std::vector<std::string>> pairs;
  std::optional<std::vector<IntVec>> extension;
  ModelOptions options;
};

// ParseError on malformed JSON, unknown keys, a wrong schema version,
// malformed integers or vectors of the wrong length.
ModelSpec parse_model(std::string_view text);
// Canonical JSON rendering; parse_model(write_model(s)) == s up to key order.
std::string write_model(const ModelSpec& spec);

struct Model {
  ModelSpec spec;
  MonoidalComplex complex;
  std::vector<std::pair<std::string, Cone>> named;
  // face-closed subfans, by pair name
  std::map<std::string, std::vector<Cone>> pairs;
  std::optional<AffineMonoid> extension;

  // The declared name of a cone of the fan, or its canonical description.
  std::string cone_name(const Cone& c) const;
  const Cone& cone(const std::string& name) const;  // InvalidArgument if undeclared
  const std::vector<Cone>& pair(const std::string& name) const;
};

// Builds and validates the complex; throws the validation errors of the
// cone, monoid and complex layers.  Monoids not given explicitly are the
// restriction of the first explicitly given monoid over a cone containing
// them as a face, otherwise saturated.
Model build_model(const ModelSpec& spec);

// Built-in fixtures.
std::vector<std::string> fixture_names();
// Deliberately invalid models exercising each fan/complex validation error.
std::vector<std::string> broken_fixture_names();
// UnknownFixture for names outside the two lists above.
ModelSpec fixture(const std::string& name);

}  // namespace torf
