#include "wao/scenario.hpp"

#include <fstream>

namespace wao {

namespace {

std::string idx(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

Int get_int(const Json& j, const std::string& path) {
  if (j.is_number_integer()) return Int(std::to_string(j.get<long long>()));
  if (j.is_string()) {
    Int x;
    if (x.set_str(j.get<std::string>(), 10) != 0) throw ScenarioError(path, "not an integer string");
    return x;
  }
  throw ScenarioError(path, "expected an integer (number or decimal string)");
}

long long get_ll(const Json& j, const std::string& path) {
  Int x = get_int(j, path);
  if (!x.fits_slong_p()) throw ScenarioError(path, "integer out of range");
  return x.get_si();
}

const Json& field(const Json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) throw ScenarioError(path, "expected an object");
  if (!j.contains(key)) throw ScenarioError(path + "." + key, "missing field");
  return j.at(key);
}

IntMatrix get_matrix(const Json& j, std::size_t rows, std::size_t cols, const std::string& path) {
  if (!j.is_array()) throw ScenarioError(path, "expected an array of rows");
  if (j.size() != rows) throw ScenarioError(path, "expected " + std::to_string(rows) + " rows, got " + std::to_string(j.size()));
  IntMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const Json& row = j[r];
    if (!row.is_array() || row.size() != cols)
      throw ScenarioError(idx(path, r), "expected a row of length " + std::to_string(cols));
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = get_int(row[c], idx(idx(path, r), c));
  }
  return m;
}

FinGroupPtr parse_group(const Json& j, const std::string& path) {
  if (j.contains("cyclic")) return FiniteGroup::cyclic(static_cast<std::size_t>(get_ll(j["cyclic"], path + ".cyclic")));
  if (j.contains("product")) {
    std::vector<std::size_t> orders;
    for (std::size_t i = 0; i < j["product"].size(); ++i)
      orders.push_back(static_cast<std::size_t>(get_ll(j["product"][i], idx(path + ".product", i))));
    return FiniteGroup::product(orders);
  }
  const Json& t = field(j, "table", path);
  if (!t.is_array() || t.empty()) throw ScenarioError(path + ".table", "expected a square table");
  std::vector<std::vector<std::size_t>> table;
  for (std::size_t r = 0; r < t.size(); ++r) {
    if (!t[r].is_array() || t[r].size() != t.size()) throw ScenarioError(idx(path + ".table", r), "row length differs from the order");
    std::vector<std::size_t> row;
    for (std::size_t c = 0; c < t.size(); ++c) {
      long long v = get_ll(t[r][c], idx(idx(path + ".table", r), c));
      if (v < 0 || static_cast<std::size_t>(v) >= t.size()) throw ScenarioError(idx(idx(path + ".table", r), c), "entry out of range");
      row.push_back(static_cast<std::size_t>(v));
    }
    table.push_back(row);
  }
  std::vector<std::string> labels;
  if (j.contains("labels"))
    for (const auto& l : j["labels"]) labels.push_back(l.get<std::string>());
  try {
    return FiniteGroup::explicit_table(table, labels);
  } catch (const PreconditionError& e) {
    throw ScenarioError(path + ".table", e.what());
  }
}

}  // namespace

Json int_json(const Int& x) {
  if (x.fits_slong_p() && abs(x) < Int("9007199254740992")) return Json(x.get_si());
  return Json(x.get_str());
}

Json ints_json(const IntVec& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(int_json(x));
  return a;
}

std::string fraction_string(const mpq_class& q) {
  mpq_class r = q;
  r.canonicalize();
  return r.get_den() == 1 ? r.get_num().get_str() : r.get_str();
}

DatumPtr parse_datum(const Json& j, const std::string& path) {
  const Json& type = field(j, "type", path);
  if (!type.is_string()) throw ScenarioError(path + ".type", "expected a string");
  const std::string t = type.get<std::string>();
  try {
    if (t == "cyclotomic") return GaloisDatum::cyclotomic(get_ll(field(j, "m", path), path + ".m"));
    if (t == "multiquadratic")
      return GaloisDatum::multiquadratic(get_ll(field(j, "a", path), path + ".a"), get_ll(field(j, "b", path), path + ".b"));
  } catch (const ScenarioError&) {
    throw;
  } catch (const PreconditionError& e) {
    throw ScenarioError(path, e.what());
  }
  if (t != "abstract") throw ScenarioError(path + ".type", "unknown datum type '" + t + "'");
  FinGroupPtr g = parse_group(field(j, "group", path), path + ".group");
  std::vector<Place> special;
  if (j.contains("special")) {
    const Json& sp = j["special"];
    for (std::size_t i = 0; i < sp.size(); ++i) {
      const std::string p = idx(path + ".special", i);
      Place pl;
      pl.label = field(sp[i], "label", p).get<std::string>();
      std::string kind = sp[i].value("kind", "ramified");
      pl.kind = kind == "archimedean" ? PlaceKind::Archimedean : kind == "unramified" ? PlaceKind::Unramified : PlaceKind::Ramified;
      const Json& dec = field(sp[i], "decomposition", p);
      for (std::size_t k = 0; k < dec.size(); ++k) {
        long long e = get_ll(dec[k], idx(p + ".decomposition", k));
        if (e < 0 || static_cast<std::size_t>(e) >= g->order()) throw ScenarioError(idx(p + ".decomposition", k), "element out of range");
        pl.decomposition.push_back(static_cast<std::size_t>(e));
      }
      std::sort(pl.decomposition.begin(), pl.decomposition.end());
      pl.provider = "none";
      special.push_back(pl);
    }
  }
  std::map<long long, std::size_t> frob;
  if (j.contains("frobenius"))
    for (const auto& [k, v] : j["frobenius"].items()) {
      long long p = 0;
      try {
        p = std::stoll(k);
      } catch (const std::exception&) {
        throw ScenarioError(path + ".frobenius." + k, "key is not a prime");
      }
      long long e = get_ll(v, path + ".frobenius." + k);
      if (e < 0 || static_cast<std::size_t>(e) >= g->order()) throw ScenarioError(path + ".frobenius." + k, "element out of range");
      frob[p] = static_cast<std::size_t>(e);
    }
  bool cheb = j.value("chebotarev", true);
  try {
    return GaloisDatum::abstract(g, special, frob, cheb);
  } catch (const PreconditionError& e) {
    throw ScenarioError(path, e.what());
  }
}

ModulePtr parse_module(const Json& j, const FinGroupPtr& g, const std::string& path) {
  const std::size_t n = static_cast<std::size_t>(get_ll(field(j, "generators", path), path + ".generators"));
  IntMatrix rel(0, n);
  if (j.contains("relations")) {
    const Json& r = j["relations"];
    if (!r.is_array()) throw ScenarioError(path + ".relations", "expected an array of rows");
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (!r[i].is_array() || r[i].size() != n)
        throw ScenarioError(idx(path + ".relations", i), "expected a row of length " + std::to_string(n));
      IntVec row;
      for (std::size_t c = 0; c < n; ++c) row.push_back(get_int(r[i][c], idx(idx(path + ".relations", i), c)));
      rel.append_row(row);
    }
  }
  const Json& a = field(j, "action", path);
  if (!a.is_array() || a.size() != g->order())
    throw ScenarioError(path + ".action", "expected one matrix per group element (" + std::to_string(g->order()) + ")");
  std::vector<IntMatrix> act;
  for (std::size_t i = 0; i < a.size(); ++i) act.push_back(get_matrix(a[i], n, n, idx(path + ".action", i)));
  std::string name = j.value("name", "M");
  try {
    return GammaModule::make(g, AbelianGroup::make(n, rel), act, std::nullopt, name);
  } catch (const PreconditionError& e) {
    throw ScenarioError(path + ".action", e.what());
  }
}

Json module_to_json(const GammaModule& m) {
  Json j;
  j["name"] = m.name();
  j["generators"] = m.ngens();
  Json rel = Json::array();
  for (std::size_t i = 0; i < m.underlying()->relations().rows(); ++i) rel.push_back(ints_json(m.underlying()->relations().row(i)));
  j["relations"] = rel;
  Json act = Json::array();
  for (const auto& mat : m.actions()) {
    Json rows = Json::array();
    for (std::size_t r = 0; r < mat.rows(); ++r) rows.push_back(ints_json(mat.row(r)));
    act.push_back(rows);
  }
  j["action"] = act;
  j["invariant_factors"] = ints_json(m.underlying()->invariant_factors());
  return j;
}

Scenario parse_scenario(const Json& j) {
  if (!j.is_object()) throw ScenarioError("$", "scenario must be a JSON object");
  Scenario s;
  s.name = j.value("name", "scenario");
  s.datum_spec = field(j, "datum", "$");
  s.datum = parse_datum(s.datum_spec, "datum");
  s.module = parse_module(field(j, "module", "$"), s.datum->group(), "module");
  s.sets["empty"] = {};
  if (j.contains("sets")) {
    const Json& sets = j["sets"];
    if (!sets.is_object()) throw ScenarioError("sets", "expected an object of place lists");
    bool first = true;
    for (const auto& [name, list] : sets.items()) {
      const std::string p = "sets." + name;
      if (!list.is_array()) throw ScenarioError(p, "expected a list of place labels");
      std::vector<std::string> labels;
      for (std::size_t i = 0; i < list.size(); ++i) {
        if (!list[i].is_string()) throw ScenarioError(idx(p, i), "place labels are strings");
        labels.push_back(list[i].get<std::string>());
        try {
          place_data(*s.datum, labels.back());
        } catch (const PreconditionError& e) {
          throw ScenarioError(idx(p, i), e.what());
        }
      }
      s.sets[name] = labels;
      if (first && name != "empty") s.default_set = name;
      first = false;
    }
  }
  if (j.contains("tuples")) {
    for (const auto& [name, t] : j["tuples"].items()) {
      const std::string set = field(t, "set", "tuples." + name).get<std::string>();
      if (!s.sets.count(set)) throw ScenarioError("tuples." + name + ".set", "unknown place set '" + set + "'");
      s.tuples[name] = t;
    }
  }
  if (j.contains("character_map")) {
    const Json& cm = j["character_map"];
    ModulePtr src = parse_module(field(cm, "source", "character_map"), s.datum->group(), "character_map.source");
    IntMatrix mat = get_matrix(field(cm, "matrix", "character_map"), s.module->ngens(), src->ngens(), "character_map.matrix");
    try {
      AbHom h(src->underlying(), s.module->underlying(), mat);
      for (std::size_t g = 0; g < s.datum->group()->order(); ++g)
        for (std::size_t k = 0; k < src->ngens(); ++k) {
          IntVec e = src->underlying()->generator(k);
          if (!s.module->underlying()->equal(h.apply(src->act(g, e)), s.module->act(g, h.apply(e))))
            throw ScenarioError("character_map.matrix", "map is not Gamma-equivariant");
        }
      s.character_map.emplace(src, s.module, h);
    } catch (const ScenarioError&) {
      throw;
    } catch (const PreconditionError& e) {
      throw ScenarioError("character_map.matrix", e.what());
    }
  }
  if (j.contains("options")) {
    const Json& o = j["options"];
    if (o.contains("level")) {
      std::string l = o["level"].get<std::string>();
      if (l != "split" && l != "provider") throw ScenarioError("options.level", "expected 'split' or 'provider'");
      s.level = l == "split" ? ChLevel::Split : ChLevel::Provider;
    }
    if (o.contains("bound")) s.bound = get_ll(o["bound"], "options.bound");
  }
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError(path, "cannot open scenario file");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ScenarioError(path, std::string("invalid JSON: ") + e.what());
  }
  return parse_scenario(j);
}

LocalClassTuple parse_tuple(const Json& t, const ChGroup& ch, const std::string& path) {
  LocalClassTuple out;
  out.level = ch.level;
  const Json& cls = field(t, "classes", path);
  for (std::size_t k = 0; k < ch.places.size(); ++k) {
    const Place& p = ch.places[k];
    const std::string pp = path + ".classes." + p.label;
    out.places.push_back(p.label);
    if (!cls.contains(p.label)) {
      out.classes.push_back(ch.local_groups[k]->zero());
      continue;
    }
    const Json& c = cls[p.label];
    if (c.contains("coords")) {
      IntVec x;
      for (std::size_t i = 0; i < c["coords"].size(); ++i) x.push_back(get_int(c["coords"][i], idx(pp + ".coords", i)));
      if (x.size() != ch.local_groups[k]->ngens())
        throw ScenarioError(pp + ".coords", "expected " + std::to_string(ch.local_groups[k]->ngens()) + " coordinates");
      out.classes.push_back(ch.local_groups[k]->normalize(x));
      continue;
    }
    if (ch.level != ChLevel::Provider) throw ScenarioError(pp, "split-level tuples take 'coords' only");
    const LocalH1& l = *ch.provider_local[k];
    try {
      if (c.contains("kummer")) {
        if (l.model() != LocalModel::Kummer) throw ScenarioError(pp + ".kummer", "the local group at this place uses the cochain model");
        std::vector<SquareClass> sc;
        const long long v = p.kind == PlaceKind::Archimedean ? 0 : p.prime;
        for (std::size_t i = 0; i < c["kummer"].size(); ++i) sc.push_back(square_class_of(get_ll(c["kummer"][i], idx(pp + ".kummer", i)), v));
        out.classes.push_back(l.from_square_classes(sc));
      } else if (c.contains("cocycle")) {
        if (l.model() != LocalModel::Cochain) throw ScenarioError(pp + ".cocycle", "the local group at this place uses the Kummer model");
        std::vector<IntVec> vals;
        for (std::size_t i = 0; i < c["cocycle"].size(); ++i) {
          IntVec v;
          for (std::size_t r = 0; r < c["cocycle"][i].size(); ++r) v.push_back(get_int(c["cocycle"][i][r], idx(idx(pp + ".cocycle", i), r)));
          vals.push_back(v);
        }
        out.classes.push_back(l.from_generator_values(vals));
      } else {
        throw ScenarioError(pp, "expected one of 'kummer', 'cocycle', 'coords'");
      }
    } catch (const ScenarioError&) {
      throw;
    } catch (const PreconditionError& e) {
      throw ScenarioError(pp, e.what());
    }
  }
  for (const auto& [label, v] : cls.items()) {
    bool known = false;
    for (const auto& p : ch.places) known = known || p.label == label;
    if (!known) throw ScenarioError(path + ".classes." + label, "place is not in the tuple's set");
  }
  return out;
}

}  // namespace wao
