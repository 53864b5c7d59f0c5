#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "wao/gmod.hpp"

namespace wao {

enum class PlaceKind { Unramified, Ramified, Archimedean };
enum class DatumType { Cyclotomic, Multiquadratic, Abstract };

std::string to_string(PlaceKind k);

struct Place {
  std::string label;  // "5", "inf", or an abstract tag
  long long prime = 0;  // 0 for the real place and for abstract tags
  PlaceKind kind = PlaceKind::Unramified;
  std::vector<std::size_t> decomposition;  // sorted element list of Gamma_v
  std::optional<std::size_t> frobenius;
  std::string provider;  // "tame", "real", "dyadic" or "none"
};

/// Generators of a quotient of the local Galois group through which every
/// tamely ramified 2-primary module factors, with their images in Gamma and a
/// single defining relator. rec_args[i] is an element of Q_v^* whose local
/// Artin symbol is images[i].
struct LocalPresentation {
  std::vector<std::size_t> images;
  std::vector<long long> rec_args;
  std::vector<std::pair<std::size_t, long long>> relator;  // (generator, exponent)
};

class GaloisDatum;
using DatumPtr = std::shared_ptr<const GaloisDatum>;

class GaloisDatum {
 public:
  static DatumPtr cyclotomic(long long m);
  static DatumPtr multiquadratic(long long a, long long b);
  /// Explicit group with declared special places and a finite Frobenius table.
  static DatumPtr abstract(FinGroupPtr group, std::vector<Place> special,
                           std::map<long long, std::size_t> frobenius_table, bool chebotarev = true);

  DatumType type() const { return type_; }
  const FinGroupPtr& group() const { return group_; }
  const std::vector<Place>& special_places() const { return special_; }
  bool chebotarev() const { return chebotarev_; }
  bool concrete() const { return type_ != DatumType::Abstract; }
  long long m() const { return m_; }
  long long a() const { return a_; }
  long long b() const { return b_; }
  std::string describe() const;

  bool is_ramified(long long p) const;
  std::optional<std::size_t> frobenius(long long p) const;
  const Place* find_special(const std::string& label) const;

  /// Local Artin symbol of y in Q_v^* (v = 0 is the real place); concrete data only.
  std::size_t rec(long long v, long long y) const;

  /// Squarefree d with chi = the character of Q(sqrt d); chi is 0/1-valued on Gamma.
  long long character_class(const std::vector<int>& chi) const;

 private:
  GaloisDatum() = default;
  DatumType type_ = DatumType::Abstract;
  FinGroupPtr group_;
  std::vector<Place> special_;
  std::map<long long, std::size_t> frob_table_;
  bool chebotarev_ = true;
  long long m_ = 0, a_ = 0, b_ = 0;
  std::vector<long long> ramified_;
};

Place place_data(const GaloisDatum& d, const std::string& label);

/// Quotient presentation of the local Galois group at v (odd prime or real place).
/// Empty when the place is dyadic, wildly ramified, or the datum is abstract.
std::optional<LocalPresentation> local_presentation(const GaloisDatum& d, const Place& v);

struct ValidationReport {
  bool ok = true;
  std::vector<std::string> failures;
  std::map<std::size_t, long long> frobenius_witness;  // element -> prime
};

ValidationReport validate_datum(const GaloisDatum& d, long long bound);

/// All 0/1-valued homomorphisms Gamma -> Z/2, the zero character first.
std::vector<std::vector<int>> quadratic_characters(const FiniteGroup& g);

}  // namespace wao
