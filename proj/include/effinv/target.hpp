#pragma once

#include <algorithm>
#include <cstdlib>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "effinv/rational.hpp"

namespace effinv {

class InvalidDataError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};
class OutOfRegimeError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Ambient space carrying only the numeric pairing data the calculus needs:
/// curve classes are integer vectors of length `curve_rank`, line bundles
/// pair against them through declared integer vectors.
struct AmbientSpace {
  std::string name;
  int dim = 0;
  int curve_rank = 1;
  std::map<std::string, std::vector<long>> pairing_table;
  std::vector<long> canonical_pairing;  // pairing vector of K_X
  bool h1_vanishes = true;
  bool chow_supported = false;
  std::vector<int> projective_dims;  // N_i when a product of projective spaces

  static AmbientSpace projective_product(std::vector<int> dims,
                                         std::string name = {}) {
    AmbientSpace out;
    if (dims.empty()) throw InvalidDataError("need at least one factor");
    out.dim = 0;
    out.curve_rank = static_cast<int>(dims.size());
    for (std::size_t i = 0; i < dims.size(); ++i) {
      if (dims[i] < 1) throw InvalidDataError("factor dimension must be >= 1");
      out.dim += dims[i];
      std::vector<long> e(dims.size(), 0);
      e[i] = 1;
      out.pairing_table["h" + std::to_string(i + 1)] = std::move(e);
      out.canonical_pairing.push_back(-static_cast<long>(dims[i]) - 1);
    }
    out.projective_dims = std::move(dims);
    out.chow_supported = true;
    out.h1_vanishes = true;
    out.name = name.empty() ? "P^" : name;
    return out;
  }

  static AmbientSpace abstract_space(std::string name, int dim,
                                     int curve_rank,
                                     std::vector<long> canonical,
                                     bool h1_vanishes = true) {
    AmbientSpace out;
    out.name = std::move(name);
    out.dim = dim;
    out.curve_rank = curve_rank;
    out.canonical_pairing = std::move(canonical);
    out.h1_vanishes = h1_vanishes;
    out.chow_supported = false;
    if (out.curve_rank < 1) throw InvalidDataError("curve rank must be >= 1");
    if (static_cast<int>(out.canonical_pairing.size()) != out.curve_rank)
      throw InvalidDataError("canonical pairing has wrong length");
    return out;
  }
};

/// Direct sum of line bundles, one integer degree vector per summand.
struct SplitBundle {
  std::vector<std::vector<long>> summand_degrees;

  int rank() const { return static_cast<int>(summand_degrees.size()); }

  long min_twist(std::size_t coord) const {
    long m = summand_degrees.front()[coord];
    for (const auto& row : summand_degrees)
      m = std::min(m, row[coord]);
    return m;
  }

  std::vector<long> det_degrees() const {
    std::vector<long> out(summand_degrees.front().size(), 0);
    for (const auto& row : summand_degrees)
      for (std::size_t i = 0; i < row.size(); ++i) out[i] += row[i];
    return out;
  }

  bool is_ample() const {
    for (const auto& row : summand_degrees)
      for (long d : row)
        if (d <= 0) return false;
    return true;
  }

  bool is_nef() const {
    for (const auto& row : summand_degrees)
      for (long d : row)
        if (d < 0) return false;
    return true;
  }
};

struct TargetSpec {
  AmbientSpace ambient;
  SplitBundle bundle;
  std::vector<long> spin_degree;  // zero in the complete-intersection setup
  long r = 1;
  long d = 1;
  long ell = 1;

  void validate() const {
    if (bundle.rank() < 1) throw InvalidDataError("bundle needs a summand");
    for (const auto& row : bundle.summand_degrees)
      if (static_cast<int>(row.size()) != ambient.curve_rank)
        throw InvalidDataError("bundle degree vector has wrong length");
    if (!spin_degree.empty() &&
        static_cast<int>(spin_degree.size()) != ambient.curve_rank)
      throw InvalidDataError("spin degree vector has wrong length");
    if (r < 1 || d < 1 || ell < 1)
      throw InvalidDataError("r, d, ell must be positive");
  }

  Rational rtilde() const { return Rational(r * ell, d); }

  /// Superpotential order; integral whenever a superpotential exists.
  long rtilde_int() const {
    Rational rt = rtilde();
    if (denominator(rt) != 1)
      throw InvalidDataError("r*ell/d is not an integer");
    return static_cast<long>(numerator(rt));
  }

  int dim_infinity() const { return ambient.dim + bundle.rank() - 1; }

  /// Pairing of K_X (x) det E against an ambient curve class.
  long kx_det_pairing(const std::vector<long>& beta_x) const {
    std::vector<long> det = bundle.det_degrees();
    long out = 0;
    for (std::size_t i = 0; i < beta_x.size(); ++i)
      out += (ambient.canonical_pairing[i] + det[i]) * beta_x[i];
    return out;
  }
};

/// Curve class on the boundary: ambient coordinates plus the pairing
/// t = deg of the log line bundle (the fiber coordinate is derived).
struct CurveClass {
  std::vector<long> beta_x;
  long t = 0;

  bool is_zero() const {
    if (t != 0) return false;
    for (long b : beta_x)
      if (b != 0) return false;
    return true;
  }

  static CurveClass zero(int curve_rank) {
    return CurveClass{std::vector<long>(curve_rank, 0), 0};
  }
};

struct DiscreteData {
  int genus = 0;
  CurveClass beta;
  std::vector<long> contacts;
  std::vector<long> orders;  // gerbe orders r_i; defaults to 1

  int markings() const { return static_cast<int>(contacts.size()); }

  long order(std::size_t i) const {
    return orders.empty() ? 1 : orders[i];
  }

  long contact_sum_plus_one() const {
    long out = 0;
    for (long c : contacts) out += c + 1;
    return out;
  }

  bool all_contacts_negative() const {
    return std::all_of(contacts.begin(), contacts.end(),
                       [](long c) { return c < 0; });
  }

  std::vector<Rational> ages() const {
    std::vector<Rational> out;
    out.reserve(contacts.size());
    for (std::size_t i = 0; i < contacts.size(); ++i)
      out.push_back(frac(Rational(contacts[i], order(i))));
    return out;
  }
};

struct InfinityData {
  int dim_infinity;
  int bundle_rank;
  std::vector<long> kx_det_coeffs;  // per ambient coordinate

  /// deg of K_infinity against (beta_x, t).
  long k_pairing(const CurveClass& beta) const {
    long out = -static_cast<long>(bundle_rank) * beta.t;
    for (std::size_t i = 0; i < beta.beta_x.size(); ++i)
      out += kx_det_coeffs[i] * beta.beta_x[i];
    return out;
  }
};

/// Dimension of the boundary and the pairing rule for its canonical bundle,
/// assembled from the relative Euler sequence.
inline InfinityData infinity_data(const TargetSpec& target) {
  InfinityData out;
  out.dim_infinity = target.dim_infinity();
  out.bundle_rank = target.bundle.rank();
  std::vector<long> det = target.bundle.det_degrees();
  out.kx_det_coeffs.resize(det.size());
  for (std::size_t i = 0; i < det.size(); ++i)
    out.kx_det_coeffs[i] = target.ambient.canonical_pairing[i] + det[i];
  return out;
}

struct NormalizedRoot {
  long r_hat;
  long d_hat;
  long a;
  long b;
};

/// Rewrites the root-construction data (r, d, ell) as equivalent data with
/// ell = 1.  The returned (a, b) satisfies a*ell + b*d = r*ell/r_hat; for
/// ell > 1 it is the representative with the smallest |a| (ties a >= 0),
/// and the identity pair (1, 0) when ell = 1.
inline NormalizedRoot normalize_target(long r, long d, long ell) {
  if (r < 1 || d < 1 || ell < 1)
    throw InvalidDataError("root data must be positive");
  long g = std::gcd(d, r * ell);
  long d_prime = d / g;
  long r_prime = r * ell / g;
  long r_hat = std::lcm(r, r_prime);
  long d_hat = d_prime * (r_hat / r_prime);
  NormalizedRoot out{r_hat, d_hat, 0, 0};
  if (ell == 1) {
    out.a = 1;
    out.b = 0;
    return out;
  }
  long m = r * ell / r_hat;  // target value of a*ell + b*d
  long g2 = std::gcd(ell, d);
  if (m % g2 != 0)
    throw InvalidDataError("no integer solution for the root change");
  // extended gcd on (ell, d)
  long x0 = 0, x1 = 1, a0 = ell, a1 = d;
  long y0 = 1, y1 = 0;
  while (a1 != 0) {
    long q = a0 / a1;
    std::tie(a0, a1) = std::pair<long, long>(a1, a0 - q * a1);
    std::tie(y0, y1) = std::pair<long, long>(y1, y0 - q * y1);
    std::tie(x0, x1) = std::pair<long, long>(x1, x0 - q * x1);
  }
  // y0*ell + x0*d = g2
  long scale = m / g2;
  long a = y0 * scale;
  long b = x0 * scale;
  long step_a = d / g2;
  long step_b = ell / g2;
  // minimize |a| over a + k*step_a, ties broken by a >= 0
  auto better = [](long x, long y) {
    if (std::abs(x) != std::abs(y)) return std::abs(x) < std::abs(y);
    return x > y;
  };
  long q = -a / step_a;
  out.a = a + q * step_a;
  out.b = b - q * step_b;
  for (long dk = -1; dk <= 1; ++dk) {
    long cand = a + (q + dk) * step_a;
    if (better(cand, out.a)) {
      out.a = cand;
      out.b = b - (q + dk) * step_b;
    }
  }
  return out;
}

/// Marking data on a root-stack boundary: contact order, gerbe order, and
/// the gerbe order of the image marking downstairs.
struct SectorData {
  long contact = -1;
  long order = 1;       // r_i upstairs
  long base_order = 1;  // r'_i downstairs
  Rational age = 0;     // age of the boundary line bundle at the sector

  friend bool operator==(const SectorData& a, const SectorData& b) {
    return a.contact == b.contact && a.order == b.order &&
           a.base_order == b.base_order && a.age == b.age;
  }
};

/// Pushes discrete data along the ell-th root morphism (upstairs to
/// downstairs): c' = (ell / rho) c with rho = r / r'.
inline std::vector<SectorData> push_contacts(const std::vector<SectorData>& upstairs,
                                             long ell) {
  std::vector<SectorData> out;
  out.reserve(upstairs.size());
  for (const SectorData& s : upstairs) {
    if (s.order % s.base_order != 0)
      throw InvalidDataError("gerbe order must be divisible by base order");
    long rho = s.order / s.base_order;
    if (ell % rho != 0)
      throw InvalidDataError("rho must divide ell");
    SectorData down;
    down.contact = (ell / rho) * s.contact;
    down.order = s.base_order;
    down.base_order = s.base_order;
    down.age = frac(Rational(down.contact, down.order));
    out.push_back(down);
  }
  return out;
}

/// Lifts discrete data through the ell-th root: c = sign lcm(ell,|c'|)/ell,
/// rho = lcm(ell,|c'|)/|c'|, r = rho r'; the age is {c'/(r' ell)}.
inline std::vector<SectorData> lift_contacts(const std::vector<SectorData>& downstairs,
                                             long ell) {
  std::vector<SectorData> out;
  out.reserve(downstairs.size());
  for (const SectorData& s : downstairs) {
    if (s.contact == 0)
      throw InvalidDataError("zero contact order cannot be lifted");
    long abs_c = std::abs(s.contact);
    long l = std::lcm(ell, abs_c);
    SectorData up;
    up.contact = (s.contact < 0 ? -1 : 1) * (l / ell);
    long rho = l / abs_c;
    up.base_order = s.order;
    up.order = rho * s.order;
    up.age = frac(Rational(s.contact, s.order * ell));
    out.push_back(up);
  }
  return out;
}

struct UnitSector {
  long contact;
  Rational spin_age;
};

/// The distinguished unit marking datum (contact -d, spin age {1/r}).
inline UnitSector unit_sector(const TargetSpec& target) {
  if (target.ell != 1)
    throw OutOfRegimeError("unit sector requires ell = 1; normalize first");
  return UnitSector{-target.d, frac(Rational(1, target.r))};
}

}  // namespace effinv
