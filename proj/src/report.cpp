#include "wao/report.hpp"

#include <sstream>

#include "wao/checks.hpp"

namespace wao {

namespace {

std::string factors_text(const IntVec& f) {
  std::string s = "[";
  for (std::size_t i = 0; i < f.size(); ++i) s += (i ? ", " : "") + f[i].get_str();
  return s + "]";
}

Json strings(const std::vector<std::string>& v) {
  Json a = Json::array();
  for (const auto& s : v) a.push_back(s);
  return a;
}

std::string set_name(const Scenario& sc, const RunOptions& o) {
  std::string name = o.set.value_or(sc.default_set);
  if (!sc.sets.count(name)) throw ScenarioError("--set", "scenario has no place set named '" + name + "'");
  return name;
}

ChLevel level_of(const Scenario& sc, const RunOptions& o) {
  if (!o.level) return sc.level;
  if (*o.level == "split") return ChLevel::Split;
  if (*o.level == "provider") return ChLevel::Provider;
  throw ScenarioError("--level", "expected 'split' or 'provider'");
}

Json group_json(const GroupPtr& g) {
  Json j;
  j["invariant_factors"] = ints_json(g->invariant_factors());
  j["order"] = g->is_finite() ? int_json(g->order()) : Json("infinite");
  return j;
}

Json ch_json(const ChGroup& ch) {
  Json j;
  j["level"] = to_string(ch.level);
  j["invariant_factors"] = ints_json(ch.group()->invariant_factors());
  Json places = Json::array();
  for (std::size_t k = 0; k < ch.places.size(); ++k) {
    Json p;
    p["place"] = ch.places[k].label;
    p["kind"] = to_string(ch.places[k].kind);
    if (ch.level == ChLevel::Provider)
      p["model"] = ch.provider_local[k]->model() == LocalModel::Kummer ? "kummer" : "cochain";
    p["local_invariant_factors"] = ints_json(ch.local_groups[k]->invariant_factors());
    places.push_back(p);
  }
  j["places"] = places;
  j["global_image_generators"] = ch.image.size();
  if (ch.level == ChLevel::Provider) {
    Json d;
    d["bound"] = ch.diagnostics.bound;
    d["kummer_complete"] = ch.diagnostics.kummer_complete;
    Json kg = Json::array();
    for (const auto& c : ch.diagnostics.kummer_generators) kg.push_back(c.to_string());
    d["kummer_generators"] = kg;
    d["fixed_rank"] = ch.diagnostics.fixed_rank;
    d["quotient_rank"] = ch.diagnostics.quotient_rank;
    d["lambda_complete"] = ch.diagnostics.lambda_complete;
    d["lifted_classes"] = ch.diagnostics.lifted_classes.size();
    j["diagnostics"] = d;
  }
  return j;
}

Json tuple_json(const LocalClassTuple& t) {
  Json j = Json::object();
  for (std::size_t k = 0; k < t.places.size(); ++k) j[t.places[k]] = ints_json(t.classes[k]);
  return j;
}

struct Ctx {
  RunResult res;
  std::ostringstream text;
};

void cmd_sha(const Scenario& sc, const RunOptions& o, Ctx& c) {
  const std::string set = set_name(sc, o);
  const auto& s = sc.sets.at(set);
  if (o.degree != 1 && o.degree != 2) throw ScenarioError("--degree", "expected 1 or 2");
  ShaGroup sh = sha(*sc.datum, sc.module, s, static_cast<std::size_t>(o.degree));
  Json r;
  r["invariant_factors"] = ints_json(sh.group->invariant_factors());
  Json gens = Json::array();
  const IntMatrix& fs = sh.group->from_smith();
  for (std::size_t j = 0; j < fs.cols(); ++j) gens.push_back(cocycle_table(sh.ambient->lift(sh.to_ambient(fs.col(j)))));
  r["generators"] = gens;
  Json conds = Json::array();
  for (const auto& cd : sh.conditions) conds.push_back(cd.label);
  r["conditions_used"] = conds;
  c.res.report["inputs"]["set"] = set;
  c.res.report["inputs"]["places"] = strings(s);
  c.res.report["inputs"]["degree"] = o.degree;
  c.res.report["results"] = r;
  Json cert;
  cert["verified"] = verify_sha(sh);
  c.res.report["certificates"] = cert;
  if (!cert["verified"].get<bool>()) c.res.exit_code = 1;
  c.text << "Sha^" << o.degree << "_S(" << sc.module->name() << "), set " << set << " " << strings(s).dump() << ": "
         << factors_text(sh.group->invariant_factors()) << "\n";
  c.text << "conditions: " << conds.dump() << "\n";
}

void cmd_ch(const Scenario& sc, const RunOptions& o, Ctx& c) {
  const std::string set = set_name(sc, o);
  const auto& s = sc.sets.at(set);
  ChLevel level = level_of(sc, o);
  auto ds = make_duality(sc.datum, sc.module, s, level, o.bound.value_or(sc.bound));
  c.res.report["inputs"]["set"] = set;
  c.res.report["inputs"]["places"] = strings(s);
  c.res.report["inputs"]["level"] = to_string(level);
  c.res.report["results"] = ch_json(ds.ch);
  bool composite = true;
  for (const auto& x : ds.ch.image) composite = composite && ds.ch.group()->is_zero(ds.ch.project(x));
  Json cert;
  cert["projection_surjective"] = ds.ch.quotient->proj.is_surjective();
  cert["kills_global_image"] = composite;
  c.res.report["certificates"] = cert;
  if (!composite) c.res.exit_code = 1;
  c.text << "Ch^1_S(dual of " << sc.module->name() << "), " << to_string(level) << " level, S = " << set << " "
         << strings(s).dump() << ": " << factors_text(ds.ch.group()->invariant_factors()) << "\n";
  if (level == ChLevel::Provider && !ds.ch.diagnostics.kummer_complete)
    c.text << "warning: surjectivity search incomplete at bound " << ds.ch.diagnostics.bound << "\n";
}

void cmd_pair(const Scenario& sc, const RunOptions& o, Ctx& c) {
  const std::string set = set_name(sc, o);
  const auto& s = sc.sets.at(set);
  auto ds = make_duality(sc.datum, sc.module, s, ChLevel::Provider, o.bound.value_or(sc.bound));
  auto cert = pairing_matrix_perfect(ds);
  Json m = Json::array();
  for (const auto& row : cert.matrix) {
    Json r = Json::array();
    for (const auto& v : row) r.push_back(fraction_string(v));
    m.push_back(r);
  }
  c.res.report["inputs"]["set"] = set;
  c.res.report["inputs"]["places"] = strings(s);
  Json r;
  r["sha_rel_invariant_factors"] = ints_json(cert.sha_factors);
  r["ch_invariant_factors"] = ints_json(cert.ch_factors);
  r["matrix"] = m;
  c.res.report["results"] = r;
  Json cj;
  cj["left_kernel_order"] = int_json(cert.left_kernel_order);
  cj["right_kernel_order"] = int_json(cert.right_kernel_order);
  cj["vanishes_on_global_image"] = cert.vanishes_on_global_image;
  cj["vanishes_on_sha_empty"] = cert.vanishes_on_sha_empty;
  cj["perfect"] = cert.perfect();
  c.res.report["certificates"] = cj;
  if (!cert.perfect()) c.res.exit_code = 1;
  c.text << "Sha^1_{S,empty}: " << factors_text(cert.sha_factors) << "  Ch^1_S: " << factors_text(cert.ch_factors) << "\n";
  c.text << "pairing matrix: " << m.dump() << "\n";
  c.text << (cert.perfect() ? "perfect" : "NOT perfect") << "\n";
}

void cmd_verdict(const Scenario& sc, const RunOptions& o, Ctx& c) {
  if (sc.tuples.empty()) throw ScenarioError("tuples", "scenario has no local class tuples");
  std::string name = o.tuple.value_or(sc.tuples.begin()->first);
  if (!sc.tuples.count(name)) throw ScenarioError("--tuple", "scenario has no tuple named '" + name + "'");
  const Json& tj = sc.tuples.at(name);
  const std::string set = tj["set"].get<std::string>();
  if (o.set && *o.set != set) throw ScenarioError("--set", "tuple '" + name + "' lives on set '" + set + "'");
  const auto& s = sc.sets.at(set);
  auto ds = make_duality(sc.datum, sc.module, s, ChLevel::Provider, o.bound.value_or(sc.bound));
  auto t = parse_tuple(tj, ds.ch, "tuples." + name);
  auto rep = wa_verdict(ds, t);
  c.res.report["inputs"]["set"] = set;
  c.res.report["inputs"]["places"] = strings(s);
  c.res.report["inputs"]["tuple"] = name;
  Json r;
  r["tuple"] = tuple_json(t);
  r["ch_class"] = ints_json(rep.ch_class);
  Json pv = Json::array();
  for (const auto& v : rep.pairing_values) pv.push_back(fraction_string(v));
  r["pairing_values"] = pv;
  r["verdict"] = rep.verdict();
  if (rep.witness) {
    Json w;
    w["index"] = *rep.witness;
    w["value"] = fraction_string(rep.witness_value);
    w["sha_class"] = cocycle_table(ds.sha_s.ambient->lift(sha_rel_basis(ds)[*rep.witness]));
    r["witness"] = w;
  } else {
    r["witness"] = nullptr;
  }
  r["sign_convention"] = "-c_S";
  c.res.report["results"] = r;
  c.text << "tuple " << name << " on S = " << strings(s).dump() << ": " << rep.verdict();
  if (rep.witness) c.text << " (witness " << *rep.witness << ", value " << fraction_string(rep.witness_value) << ")";
  c.text << "\nCh class: " << ints_json(rep.ch_class).dump() << "\n";
}

void cmd_units_pic(const Scenario& sc, const RunOptions&, Ctx& c) {
  if (!sc.character_map) throw ScenarioError("character_map", "units-pic needs a character_map in the scenario");
  const ModuleMap& phi = *sc.character_map;
  auto u = kernel_module(phi);
  auto p = cokernel_module(phi);
  Json r;
  r["source"] = module_to_json(*phi.source());
  r["target"] = module_to_json(*phi.target());
  r["units"] = module_to_json(*u.module);
  r["picard"] = module_to_json(*p.module);
  r["units_h1"] = group_json(cohomology(u.module, 1)->group());
  r["picard_h0"] = group_json(cohomology(p.module, 0)->group());
  c.res.report["results"] = r;
  Json cert;
  bool tf = !phi.source()->is_lattice() || u.module->is_lattice();
  cert["units_torsion_free"] = u.module->is_lattice();
  cert["torsion_free_inherited"] = tf;
  ShortExactSequence ses{u.incl, ModuleMap(phi.source(), phi.target(), phi.hom())};
  (void)ses;
  c.res.report["certificates"] = cert;
  if (!tf) c.res.exit_code = 1;
  c.text << "units (kernel): " << factors_text(u.module->underlying()->invariant_factors())
         << "  picard (cokernel): " << factors_text(p.module->underlying()->invariant_factors()) << "\n";
}

void cmd_oracle(const Scenario& sc, const RunOptions&, Ctx& c) {
  Json checks = Json::array();
  bool ok = true;
  auto add = [&](const std::string& what, bool pass, const Json& detail) {
    Json j;
    j["check"] = what;
    j["passed"] = pass;
    j["detail"] = detail;
    checks.push_back(j);
    ok = ok && pass;
    c.text << (pass ? "ok   " : "FAIL ") << what << "\n";
  };
  if (sc.module->is_finite()) {
    for (std::size_t q = 0; q <= 2; ++q) {
      try {
        auto b = brute_force_cohomology(sc.module, q);
        auto f = cohomology(sc.module, q)->group()->invariant_factors();
        Json d;
        d["computed"] = ints_json(f);
        d["enumerated"] = ints_json(b.invariant_factors);
        add("H^" + std::to_string(q) + " against cochain enumeration", f == b.invariant_factors, d);
      } catch (const Refusal& e) {
        add("H^" + std::to_string(q) + " against cochain enumeration (skipped)", true, e.what());
      }
    }
    for (const auto& [name, s] : sc.sets) {
      auto sh = sha(*sc.datum, sc.module, s, 1);
      std::vector<std::vector<std::size_t>> conds;
      for (const auto& cd : sh.conditions) conds.push_back(cd.subgroup);
      try {
        Int bf = brute_force_sha1_order(sc.module, conds);
        Json d;
        d["computed"] = int_json(sh.group->order());
        d["enumerated"] = int_json(bf);
        add("|Sha^1| on set " + name + " against cocycle enumeration", bf == sh.group->order(), d);
      } catch (const Refusal& e) {
        add("|Sha^1| on set " + name + " (skipped)", true, e.what());
      }
    }
  }
  std::set<long long> places;
  for (const auto& [name, s] : sc.sets)
    for (const auto& l : s) places.insert(place_of_label(l));
  for (long long v : places) {
    std::size_t bad = 0, n = 0;
    for (long long a = -30; a <= 30; ++a)
      for (long long b = -30; b <= 30; ++b) {
        if (!a || !b) continue;
        ++n;
        if (hilbert_symbol(a, b, v) != hilbert_oracle(a, b, v)) ++bad;
      }
    Json d;
    d["pairs"] = n;
    d["mismatches"] = bad;
    add("Hilbert symbols at " + place_label(v) + " against the solvability oracle", bad == 0, d);
  }
  c.res.report["results"]["checks"] = checks;
  c.res.report["certificates"]["all_agree"] = ok;
  if (!ok) c.res.exit_code = 1;
}

}  // namespace

Json cocycle_table(const Cochain& z) {
  Json t = Json::array();
  for (std::size_t i = 0; i < z.tuples(); ++i) t.push_back(ints_json(z.module->underlying()->normalize(z.value(i))));
  return t;
}

RunResult run_command(const RunOptions& o) {
  Ctx c;
  c.res.report["command"] = o.command;
  c.res.report["version"] = kVersion;
  c.res.report["seed"] = 0;
  try {
    if (o.command == "selftest") {
      bool ok = false;
      Json rep = selftest_report(&ok);
      c.res.report["results"] = rep["checks"];
      c.res.report["certificates"]["passed"] = ok;
      for (const auto& ch : rep["checks"])
        c.text << (ch["passed"].get<bool>() ? "ok   " : "FAIL ") << ch["id"].get<std::string>() << "  ("
               << ch["cases"].get<std::size_t>() << " cases, " << ch["failures"].get<std::size_t>() << " failures)\n";
      c.res.exit_code = ok ? 0 : 1;
      c.res.text = c.text.str();
      return c.res;
    }
    static const std::set<std::string> known = {"sha", "ch", "pair", "verdict", "units-pic", "oracle"};
    if (!known.count(o.command)) throw ScenarioError("command", "unknown command '" + o.command + "'");
    if (o.scenario.empty()) throw ScenarioError("--scenario", "this command needs a scenario file");
    Scenario sc = load_scenario(o.scenario);
    c.res.report["scenario"] = sc.name;
    c.res.report["inputs"]["datum"] = sc.datum_spec;
    c.res.report["inputs"]["module"] = sc.module->name();
    if (o.command == "sha") cmd_sha(sc, o, c);
    else if (o.command == "ch") cmd_ch(sc, o, c);
    else if (o.command == "pair") cmd_pair(sc, o, c);
    else if (o.command == "verdict") cmd_verdict(sc, o, c);
    else if (o.command == "units-pic") cmd_units_pic(sc, o, c);
    else cmd_oracle(sc, o, c);
  } catch (const ScenarioError& e) {
    c.res.exit_code = 2;
    c.res.report["error"] = {{"kind", "input"}, {"field", e.path()}, {"message", e.what()}};
    c.text << "input error: " << e.what() << "\n";
  } catch (const Refusal& e) {
    c.res.exit_code = 2;
    c.res.report["error"] = {{"kind", "refusal"}, {"message", e.what()}};
    c.text << "refused: " << e.what() << "\n";
  } catch (const PreconditionError& e) {
    c.res.exit_code = 2;
    c.res.report["error"] = {{"kind", "input"}, {"message", e.what()}};
    c.text << "input error: " << e.what() << "\n";
  } catch (const MathError& e) {
    c.res.exit_code = 1;
    c.res.report["error"] = {{"kind", "certificate"}, {"message", e.what()}};
    c.text << "certificate failure: " << e.what() << "\n";
  }
  c.res.text = c.text.str();
  return c.res;
}

}  // namespace wao
