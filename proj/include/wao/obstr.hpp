#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wao/shach.hpp"

namespace wao {

/// One local class per place of S, at the given level, for the dual module H.
struct LocalClassTuple {
  std::vector<std::string> places;
  std::vector<IntVec> classes;
  ChLevel level = ChLevel::Provider;
};

/// Everything the duality statements need for a scenario module M (the
/// character module) and its dual H = Hom(M, mu_2).
struct DualitySetup {
  DatumPtr datum;
  ModulePtr module;  // M
  ModulePtr dual;    // H
  Pairing eval;      // M x H -> Z/2
  std::vector<std::string> s;
  ShaGroup sha_s, sha_empty;
  ShaQuotient rel;
  ChGroup ch;
  std::vector<std::shared_ptr<LocalH1>> module_local;  // H^1(Q_v, M), provider level only
};

DualitySetup make_duality(const DatumPtr& d, const ModulePtr& m, const std::vector<std::string>& s,
                          ChLevel level = ChLevel::Provider, long long bound = 50);

LocalClassTuple tuple_from_product(const ChGroup& ch, const IntVec& x);
IntVec tuple_to_product(const ChGroup& ch, const LocalClassTuple& t);

/// Image of the tuple in Ch (smith coordinates of the cokernel).
IntVec c_S_class(const LocalClassTuple& t, const ChGroup& ch);

/// Sum over v in S of inv_v(res_v a u xi_v); a is a class of H^1(Gamma, M) in Sha^1_S.
mpq_class manin_pairing(const DualitySetup& ds, const IntVec& a, const LocalClassTuple& t);
/// The same value computed from the Ch class of the tuple through the section of Ch.
mpq_class manin_pairing_via_class(const DualitySetup& ds, const IntVec& a, const LocalClassTuple& t);
/// Representatives in H^1(Gamma, M) of the smith generators of Sha^1_{S,empty}.
std::vector<IntVec> sha_rel_basis(const DualitySetup& ds);

struct PerfectnessCertificate {
  std::vector<std::vector<mpq_class>> matrix;  // rows: Sha^1_{S,empty} basis, cols: Ch basis
  IntVec sha_factors, ch_factors;
  Int left_kernel_order, right_kernel_order;
  bool vanishes_on_global_image = false;
  bool vanishes_on_sha_empty = false;
  bool perfect() const {
    return left_kernel_order == 1 && right_kernel_order == 1 && sha_factors == ch_factors && vanishes_on_global_image &&
           vanishes_on_sha_empty;
  }
};

PerfectnessCertificate pairing_matrix_perfect(const DualitySetup& ds);

struct ObstructionReport {
  IntVec ch_class;
  std::vector<mpq_class> pairing_values;  // -c_S against each basis element of Sha^1_{S,empty}
  bool obstructed = false;
  std::optional<std::size_t> witness;
  mpq_class witness_value = 0;
  std::string verdict() const { return obstructed ? "obstructed" : "approximable"; }
};

ObstructionReport wa_verdict(const DualitySetup& ds, const LocalClassTuple& t);

/// Push a local class along a module map (same place, same model on both sides).
IntVec local_push(const LocalH1& src, const IntVec& x, const LocalH1& dst, const AbHom& f);

}  // namespace wao
