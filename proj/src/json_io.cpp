#include "duomagma/json_io.hpp"

#include "duomagma/error.hpp"

#include <algorithm>
#include <set>

namespace duomagma {

namespace {

[[noreturn]] void schema(const std::string& what) { throw Error(ErrorCode::SchemaError, what); }

void expect_object(const Json& j, const std::string& where, std::initializer_list<const char*> required,
                   std::initializer_list<const char*> optional = {}) {
  if (!j.is_object()) schema(where + ": expected an object");
  std::set<std::string> allowed;
  for (const char* k : required) {
    allowed.insert(k);
    if (!j.contains(k)) schema(where + ": missing field '" + k + "'");
  }
  for (const char* k : optional) allowed.insert(k);
  for (const auto& [k, v] : j.items()) {
    if (!allowed.count(k)) schema(where + ": unknown field '" + k + "'");
  }
}

const Json& array_at(const Json& j, const char* key, const std::string& where) {
  const Json& a = j.at(key);
  if (!a.is_array()) schema(where + ": '" + key + "' must be an array");
  return a;
}

std::string string_at(const Json& j, const char* key, const std::string& where) {
  const Json& s = j.at(key);
  if (!s.is_string()) schema(where + ": '" + key + "' must be a string");
  return s.get<std::string>();
}

std::size_t size_at(const Json& j, const char* key, const std::string& where) {
  const Json& s = j.at(key);
  if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<std::int64_t>() >= 0)) {
    schema(where + ": '" + key + "' must be a nonnegative integer");
  }
  return s.get<std::size_t>();
}

Integer integer_from_json(const Json& j) {
  if (j.is_number_integer()) return Integer(std::to_string(j.get<std::int64_t>()));
  if (!j.is_string()) schema("integer must be a string or a number");
  Rational r = parse_rational(j.get<std::string>());
  if (r.get_den() != 1) schema("expected an integer, got '" + j.get<std::string>() + "'");
  return r.get_num();
}

Json rationals_to_json(const std::vector<Rational>& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(rational_to_json(x));
  return a;
}

std::vector<Rational> rationals_from_json(const Json& j) {
  if (!j.is_array()) schema("expected an array of rationals");
  std::vector<Rational> out;
  for (const auto& x : j) out.push_back(rational_from_json(x));
  return out;
}

}  // namespace

std::string canonical_dump(const Json& j) { return j.dump(); }

Json parse_json_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    schema(std::string("malformed JSON: ") + e.what());
  }
}

Json rational_to_json(const Rational& r) { return format_rational(r); }

Rational rational_from_json(const Json& j) {
  if (j.is_number_integer()) return Rational(integer_from_json(j));
  if (!j.is_string()) schema("rational must be a \"p/q\" string");
  return parse_rational(j.get<std::string>());
}

Json int_matrix_to_json(const IntMatrix& m) {
  Json rows = Json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m(r, c).get_str());
    rows.push_back(std::move(row));
  }
  return rows;
}

IntMatrix int_matrix_from_json(const Json& j) {
  RationalMatrix q = rational_matrix_from_json(j);
  IntMatrix out(q.rows(), q.cols());
  for (std::size_t r = 0; r < q.rows(); ++r)
    for (std::size_t c = 0; c < q.cols(); ++c) {
      if (q(r, c).get_den() != 1) schema("matrix entries must be integers");
      out(r, c) = q(r, c).get_num();
    }
  return out;
}

Json rational_matrix_to_json(const RationalMatrix& m) {
  Json rows = Json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) rows.push_back(rationals_to_json(m.row(r)));
  return rows;
}

RationalMatrix rational_matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) schema("matrix must be a nonempty array of rows");
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  if (cols == 0) schema("matrix rows must be nonempty arrays");
  RationalMatrix out(j.size(), cols);
  for (std::size_t r = 0; r < j.size(); ++r) {
    if (!j[r].is_array() || j[r].size() != cols) throw Error(ErrorCode::ShapeMismatch, "ragged matrix");
    for (std::size_t c = 0; c < cols; ++c) out(r, c) = rational_from_json(j[r][c]);
  }
  return out;
}

// --- elements -------------------------------------------------------------------

Json element_to_json(const Element& x) {
  switch (x.kind()) {
    case Element::Kind::Atom: return {{"kind", "atom"}, {"name", x.atom_name()}};
    case Element::Kind::Vector: return {{"kind", "vector"}, {"coords", rationals_to_json(x.coords())}};
    case Element::Kind::Torus: return {{"kind", "torus"}, {"coords", rationals_to_json(x.coords())}};
    case Element::Kind::Step: {
      Json pieces = Json::array();
      for (const auto& p : x.step().pieces()) {
        pieces.push_back({{"start", rational_to_json(p.start)}, {"value", element_to_json(p.value)}});
      }
      return {{"kind", "step"}, {"pieces", pieces}};
    }
    case Element::Kind::Pair: {
      Json out = {{"kind", "pair"}, {"left", element_to_json(x.left())}};
      if (std::holds_alternative<std::int64_t>(x.right())) {
        out["exponent"] = x.exponent();
      } else {
        out["automorphism"] = int_matrix_to_json(x.automorphism().matrix());
      }
      return out;
    }
  }
  schema("unknown element kind");
}

Element element_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) schema("element needs a 'kind'");
  const std::string kind = j["kind"];
  if (kind == "atom") {
    expect_object(j, "atom", {"kind", "name"});
    return Element::atom(string_at(j, "name", "atom"));
  }
  if (kind == "vector" || kind == "torus") {
    expect_object(j, kind, {"kind", "coords"});
    auto coords = rationals_from_json(j["coords"]);
    return kind == "vector" ? Element::vector(std::move(coords)) : Element::torus(std::move(coords));
  }
  if (kind == "step") {
    expect_object(j, "step", {"kind", "pieces"});
    std::vector<StepFunction::Piece> pieces;
    for (const auto& p : array_at(j, "pieces", "step")) {
      expect_object(p, "step piece", {"start", "value"});
      pieces.push_back({rational_from_json(p["start"]), element_from_json(p["value"])});
    }
    if (pieces.empty()) schema("step function needs at least one piece");
    return Element::step(StepFunction::canonicalize(std::move(pieces)));
  }
  if (kind == "pair") {
    expect_object(j, "pair", {"kind", "left"}, {"exponent", "automorphism"});
    Element left = element_from_json(j["left"]);
    if (j.contains("exponent") == j.contains("automorphism")) {
      schema("pair needs exactly one of 'exponent' and 'automorphism'");
    }
    if (j.contains("exponent")) {
      if (!j["exponent"].is_number_integer()) schema("exponent must be an integer");
      return Element::pair(std::move(left), j["exponent"].get<std::int64_t>());
    }
    return Element::pair(std::move(left), UnimodularMatrix(int_matrix_from_json(j["automorphism"])));
  }
  schema("unknown element kind '" + kind + "'");
}

// --- squeeze maps ------------------------------------------------------------------

Json squeeze_to_json(const SqueezeMap& s) {
  if (s == SqueezeMap::standard()) return {{"kind", "standard"}};
  Json pieces = Json::array();
  for (const auto& p : s.pieces()) {
    pieces.push_back({{"start", rational_to_json(p.start)},
                      {"slope", rational_to_json(p.slope)},
                      {"offset", rational_to_json(p.offset)}});
  }
  return {{"kind", "pieces"}, {"pieces", pieces}};
}

SqueezeMap squeeze_from_json(const Json& j) {
  if (j.is_string() && j.get<std::string>() == "standard") return SqueezeMap::standard();
  if (!j.is_object() || !j.contains("kind")) schema("squeeze map needs a 'kind'");
  const std::string kind = j["kind"].is_string() ? j["kind"].get<std::string>() : "";
  if (kind == "standard") {
    expect_object(j, "squeeze", {"kind"});
    return SqueezeMap::standard();
  }
  if (kind == "pieces") {
    expect_object(j, "squeeze", {"kind", "pieces"});
    std::vector<SqueezeMap::Piece> pieces;
    for (const auto& p : array_at(j, "pieces", "squeeze")) {
      expect_object(p, "squeeze piece", {"start", "slope", "offset"});
      pieces.push_back({rational_from_json(p["start"]), rational_from_json(p["slope"]),
                        rational_from_json(p["offset"])});
    }
    return SqueezeMap(std::move(pieces));
  }
  schema("unknown squeeze kind '" + kind + "'");
}

// --- neighbourhoods ---------------------------------------------------------------------

Json neighborhood_to_json(const Neighborhood& n) {
  switch (n.kind()) {
    case Neighborhood::Kind::EpsBox:
      return {{"kind", "eps-box"}, {"eps", rational_to_json(n.eps_box().eps)}, {"coords", n.eps_box().coords}};
    case Neighborhood::Kind::Subset: {
      Json members = Json::array();
      for (const auto& m : n.subset().members) members.push_back(element_to_json(m));
      return {{"kind", "subset"}, {"members", members}};
    }
    case Neighborhood::Kind::HMSubbasic: {
      const auto& s = n.hm_subbasic();
      return {{"kind", "hm-subbasic"}, {"inner", neighborhood_to_json(*s.inner)}, {"a", rational_to_json(s.a)},
              {"b", rational_to_json(s.b)}, {"eps", rational_to_json(s.eps)}};
    }
    case Neighborhood::Kind::Intersection: {
      Json parts = Json::array();
      for (const auto& p : n.intersection().parts) parts.push_back(neighborhood_to_json(p));
      return {{"kind", "intersection"}, {"parts", parts}};
    }
    case Neighborhood::Kind::ProductDiscrete:
      return {{"kind", "product-discrete"}, {"base", neighborhood_to_json(*n.product_discrete().base)}};
    case Neighborhood::Kind::Whole: return {{"kind", "whole"}};
  }
  schema("unknown neighbourhood kind");
}

Neighborhood neighborhood_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) schema("neighbourhood needs a 'kind'");
  const std::string kind = j["kind"];
  if (kind == "eps-box") {
    expect_object(j, kind, {"kind", "eps"}, {"coords"});
    std::vector<std::size_t> coords;
    if (j.contains("coords")) {
      for (const auto& c : array_at(j, "coords", kind)) {
        if (!c.is_number_unsigned()) schema("eps-box coordinates must be nonnegative integers");
        coords.push_back(c.get<std::size_t>());
      }
    }
    return Neighborhood::eps_box(rational_from_json(j["eps"]), std::move(coords));
  }
  if (kind == "subset") {
    expect_object(j, kind, {"kind", "members"});
    std::vector<Element> members;
    for (const auto& m : array_at(j, "members", kind)) members.push_back(element_from_json(m));
    return Neighborhood::subset(std::move(members));
  }
  if (kind == "hm-subbasic") {
    expect_object(j, kind, {"kind", "inner", "a", "b", "eps"});
    return Neighborhood::hm_subbasic(neighborhood_from_json(j["inner"]), rational_from_json(j["a"]),
                                     rational_from_json(j["b"]), rational_from_json(j["eps"]));
  }
  if (kind == "intersection") {
    expect_object(j, kind, {"kind", "parts"});
    std::vector<Neighborhood> parts;
    for (const auto& p : array_at(j, "parts", kind)) parts.push_back(neighborhood_from_json(p));
    return Neighborhood::intersection(std::move(parts));
  }
  if (kind == "product-discrete") {
    expect_object(j, kind, {"kind", "base"});
    return Neighborhood::product_discrete(neighborhood_from_json(j["base"]));
  }
  if (kind == "whole") {
    expect_object(j, kind, {"kind"});
    return Neighborhood::whole();
  }
  schema("unknown neighbourhood kind '" + kind + "'");
}

// --- descriptors ---------------------------------------------------------------------------

Json magma_to_json(const Magma& m) {
  switch (m.kind()) {
    case Magma::Kind::Finite: {
      const auto& f = m.finite();
      Json table = Json::array();
      for (const auto& row : f.table) {
        Json r = Json::array();
        for (std::size_t k : row) r.push_back(f.elements[k]);
        table.push_back(std::move(r));
      }
      return {{"kind", "finite"}, {"elements", f.elements}, {"table", table}, {"unit", f.elements[f.unit]}};
    }
    case Magma::Kind::Vector: return {{"kind", "vector"}, {"dim", m.dim()}};
    case Magma::Kind::Torus: return {{"kind", "torus"}, {"dim", m.dim()}};
    case Magma::Kind::HM0:
      return {{"kind", "hm0"}, {"base", magma_to_json(*m.hm0().base)}, {"squeeze", squeeze_to_json(m.hm0().squeeze)}};
    case Magma::Kind::SemidirectZ:
      return {{"kind", "semidirect-z"},
              {"base", magma_to_json(*m.semidirect_z().base)},
              {"squeeze", squeeze_to_json(m.semidirect_z().squeeze)}};
    case Magma::Kind::SemidirectAut: {
      const auto& reg = *m.semidirect_aut().registry;
      Json entries = Json::array();
      for (const auto& e : reg.entries()) {
        entries.push_back({{"key", e.key}, {"shrink", int_matrix_to_json(e.shrink.matrix())}});
      }
      return {{"kind", "semidirect-aut"},
              {"base", magma_to_json(*m.semidirect_aut().base)},
              {"registry", {{"id", reg.id()}, {"dimension", reg.dimension()}, {"entries", entries}}}};
    }
  }
  schema("unknown descriptor kind");
}

MagmaPtr magma_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) schema("descriptor needs a 'kind'");
  const std::string kind = j["kind"];
  if (kind == "finite") {
    expect_object(j, kind, {"kind", "elements", "table", "unit"});
    auto elements = j["elements"].get<std::vector<std::string>>();
    auto table = j["table"].get<std::vector<std::vector<std::string>>>();
    return mk_finite_magma(elements, table, string_at(j, "unit", kind));
  }
  if (kind == "vector" || kind == "torus") {
    expect_object(j, kind, {"kind", "dim"});
    std::size_t d = size_at(j, "dim", kind);
    return kind == "vector" ? rational_vector_group(d) : rational_torus(d);
  }
  if (kind == "hm0") {
    expect_object(j, kind, {"kind", "base", "squeeze"});
    return hm0_of(magma_from_json(j["base"]), squeeze_from_json(j["squeeze"]));
  }
  if (kind == "semidirect-z") {
    expect_object(j, kind, {"kind", "base", "squeeze"});
    return semidirect_z(magma_from_json(j["base"]), squeeze_from_json(j["squeeze"]));
  }
  if (kind == "semidirect-aut") {
    expect_object(j, kind, {"kind", "base", "registry"});
    MagmaPtr base = magma_from_json(j["base"]);
    const Json& r = j["registry"];
    expect_object(r, "registry", {"id", "dimension", "entries"});
    auto reg = std::make_shared<AbsorbingFamilyRegistry>(string_at(r, "id", "registry"),
                                                         size_at(r, "dimension", "registry"));
    for (const auto& e : array_at(r, "entries", "registry")) {
      expect_object(e, "registry entry", {"key", "shrink"});
      reg->restore({string_at(e, "key", "registry entry"), UnimodularMatrix(int_matrix_from_json(e["shrink"]))});
    }
    return semidirect_aut(std::move(base), std::move(reg));
  }
  schema("unknown descriptor kind '" + kind + "'");
}

Json descriptor_document(const Magma& m) { return {{"version", kSchemaVersion}, {"magma", magma_to_json(m)}}; }

namespace {

void check_version(const Json& j) {
  if (!j.at("version").is_string() || j["version"].get<std::string>() != kSchemaVersion) {
    schema(std::string("unsupported version; expected ") + kSchemaVersion);
  }
}

const char* slot_name(Slot s) { return s == Slot::S ? "S" : s == Slot::U ? "U" : "F"; }

Slot parse_slot(const Json& j) {
  if (j == "S") return Slot::S;
  if (j == "U") return Slot::U;
  if (j == "F") return Slot::F;
  schema("slot tags are S, U or F");
}

Json elements_to_json(const std::vector<Element>& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(element_to_json(x));
  return a;
}

std::vector<Element> elements_from_json(const Json& j) {
  if (!j.is_array()) schema("expected an array of elements");
  std::vector<Element> out;
  for (const auto& x : j) out.push_back(element_from_json(x));
  return out;
}

}  // namespace

MagmaPtr descriptor_from_document(const Json& j) {
  expect_object(j, "descriptor", {"version", "magma"});
  check_version(j);
  return magma_from_json(j["magma"]);
}

Json certificate_to_json(const WitnessCertificate& c) {
  Json slots = Json::array();
  for (Slot s : c.slots) slots.push_back(slot_name(s));
  Json out = {{"version", kSchemaVersion},
              {"mode", {{"shape", to_string(c.mode.shape)}, {"cardinality", to_string(c.mode.cardinality)}}},
              {"magma", magma_to_json(*c.magma)},
              {"element", element_to_json(c.element)},
              {"neighborhood", neighborhood_to_json(c.neighborhood)},
              {"witness",
               {{"factors", elements_to_json(c.witness)},
                {"slots", slots},
                {"association", c.association == Association::Left ? "left" : "right"}}}};
  if (c.s_set) out["s_set"] = elements_to_json(*c.s_set);
  if (c.f_set) out["f_set"] = elements_to_json(*c.f_set);
  return out;
}

WitnessCertificate certificate_from_json(const Json& j) {
  expect_object(j, "certificate", {"version", "mode", "magma", "element", "neighborhood", "witness"},
                {"s_set", "f_set"});
  check_version(j);
  WitnessCertificate c{{}, nullptr, Element::atom(""), Neighborhood::whole(), {}, {}, Association::Left,
                       std::nullopt, std::nullopt};
  const Json& mode = j["mode"];
  expect_object(mode, "mode", {"shape", "cardinality"});
  c.mode = {parse_shape(string_at(mode, "shape", "mode")), parse_cardinality(string_at(mode, "cardinality", "mode"))};
  c.magma = magma_from_json(j["magma"]);
  c.element = element_from_json(j["element"]);
  c.neighborhood = neighborhood_from_json(j["neighborhood"]);
  const Json& w = j["witness"];
  expect_object(w, "witness", {"factors", "slots", "association"});
  c.witness = elements_from_json(w["factors"]);
  for (const auto& s : array_at(w, "slots", "witness")) c.slots.push_back(parse_slot(s));
  const std::string assoc = string_at(w, "association", "witness");
  if (assoc != "left" && assoc != "right") schema("association is 'left' or 'right'");
  c.association = assoc == "left" ? Association::Left : Association::Right;
  if (j.contains("s_set")) c.s_set = elements_from_json(j["s_set"]);
  if (j.contains("f_set")) c.f_set = elements_from_json(j["f_set"]);
  return c;
}

// --- construction DSL ---------------------------------------------------------------------

namespace {

MagmaPtr build_base(const Json& b) {
  if (!b.is_object() || !b.contains("kind") || !b["kind"].is_string()) schema("base needs a 'kind'");
  const std::string kind = b["kind"];
  if (kind == "cyclic") {
    expect_object(b, kind, {"kind", "order"}, {"symbols"});
    std::vector<std::string> symbols;
    if (b.contains("symbols")) symbols = b["symbols"].get<std::vector<std::string>>();
    return cyclic_group(size_at(b, "order", kind), std::move(symbols));
  }
  if (kind == "table") {
    expect_object(b, kind, {"kind", "elements", "table", "unit"});
    return mk_finite_magma(b["elements"].get<std::vector<std::string>>(),
                           b["table"].get<std::vector<std::vector<std::string>>>(), string_at(b, "unit", kind));
  }
  if (kind == "vector" || kind == "torus") {
    expect_object(b, kind, {"kind", "dim"});
    std::size_t d = size_at(b, "dim", kind);
    return kind == "vector" ? rational_vector_group(d) : rational_torus(d);
  }
  schema("unknown base kind '" + kind + "'");
}

}  // namespace

MagmaPtr build_from_spec(const Json& spec) {
  expect_object(spec, "construction", {"base"}, {"pipeline", "version"});
  if (spec.contains("version")) check_version(spec);
  MagmaPtr cur = build_base(spec["base"]);
  if (!spec.contains("pipeline")) return cur;
  for (const auto& raw : array_at(spec, "pipeline", "construction")) {
    Json step = raw.is_string() ? Json{{"op", raw}} : raw;
    if (!step.is_object() || !step.contains("op") || !step["op"].is_string()) schema("pipeline step needs an 'op'");
    const std::string op = step["op"];
    if (op == "hm0") {
      expect_object(step, op, {"op"}, {"squeeze"});
      SqueezeMap s = step.contains("squeeze") ? squeeze_from_json(step["squeeze"]) : SqueezeMap::standard();
      cur = hm0_of(cur, s);
    } else if (op == "semidirect-z") {
      expect_object(step, op, {"op"}, {"squeeze"});
      if (cur->kind() != Magma::Kind::HM0) throw Error(ErrorCode::ShapeMismatch, "semidirect-z needs an hm0 stage");
      SqueezeMap s = step.contains("squeeze") ? squeeze_from_json(step["squeeze"]) : cur->hm0().squeeze;
      cur = semidirect_z(cur, s);
    } else if (op == "semidirect-aut") {
      expect_object(step, op, {"op"}, {"seeds", "registry_id"});
      if (cur->kind() != Magma::Kind::Torus) throw Error(ErrorCode::ShapeMismatch, "semidirect-aut needs a torus");
      std::vector<UnimodularMatrix> seeds;
      if (step.contains("seeds")) {
        for (const auto& m : array_at(step, "seeds", op)) seeds.emplace_back(int_matrix_from_json(m));
      }
      std::string id = step.contains("registry_id") ? string_at(step, "registry_id", op) : "H";
      cur = semidirect_aut(cur, std::make_shared<AbsorbingFamilyRegistry>(id, cur->dim(), std::move(seeds)));
    } else {
      schema("unknown pipeline op '" + op + "'");
    }
  }
  return cur;
}

}  // namespace duomagma
