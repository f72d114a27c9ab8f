#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "effinv/rational.hpp"

namespace effinv {

class SpecError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};
class NotAUnitError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};
class RingMismatchError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Exponent vector of a monomial, one entry per generator.
using Exponents = std::vector<unsigned>;
/// Sparse polynomial data: exponent vector -> coefficient.
using SparsePoly = std::map<Exponents, Rational>;

struct GeneratorSpec {
  std::string name;
  unsigned degree = 1;
  /// Smallest vanishing power (h^5 = 0 gives power_bound = 5).
  /// 0 means the power is governed by the bundle relation; only the
  /// designated bundle generator may use it.
  unsigned power_bound = 0;
};

struct RingSpec {
  std::vector<GeneratorSpec> generators;
  /// When positive, the last generator is the class of a rank-`bundle_rank`
  /// projective bundle and satisfies the Grothendieck relation
  ///   zeta^rank = bundle_relation   (a polynomial with zeta-power < rank).
  unsigned bundle_rank = 0;
  SparsePoly bundle_relation;
  /// When set, generator 0 squares to zero and the degree functional weighs
  /// its linear monomials by `hodge_normalization`.
  bool hodge = false;
  Rational hodge_normalization = Rational(1, 24);
};

namespace detail {

struct RingData {
  RingSpec spec;
  unsigned max_total_degree = 0;

  std::size_t count() const { return spec.generators.size(); }
  std::size_t bundle_index() const { return count() - 1; }

  unsigned monomial_degree(const Exponents& e) const {
    unsigned d = 0;
    for (std::size_t i = 0; i < e.size(); ++i)
      d += e[i] * spec.generators[i].degree;
    return d;
  }

  // Reduce one scaled monomial into normal form, accumulating into `acc`.
  // Bounds truncate; excess bundle powers are rewritten through the relation.
  void normalize_term(const Exponents& e, const Rational& c,
                      SparsePoly& acc) const {
    if (c == 0) return;
    for (std::size_t i = 0; i < e.size(); ++i) {
      unsigned bound = spec.generators[i].power_bound;
      if (bound > 0 && e[i] >= bound) return;
    }
    if (spec.bundle_rank > 0) {
      std::size_t z = bundle_index();
      if (e[z] >= spec.bundle_rank) {
        for (const auto& [re, rc] : spec.bundle_relation) {
          Exponents e2 = e;
          e2[z] -= spec.bundle_rank;
          for (std::size_t i = 0; i < e2.size(); ++i) e2[i] += re[i];
          normalize_term(e2, c * rc, acc);
        }
        return;
      }
    }
    auto it = acc.find(e);
    if (it == acc.end()) {
      acc.emplace(e, c);
    } else {
      it->second += c;
      if (it->second == 0) acc.erase(it);
    }
  }
};

inline bool compatible(const std::shared_ptr<const RingData>& a,
                       const std::shared_ptr<const RingData>& b) {
  return !a || !b || a == b;
}

}  // namespace detail

/// Immutable element of a graded quotient algebra.  The default-constructed
/// element is the zero of every ring and composes with elements of any ring.
class GradedElement {
 public:
  GradedElement() = default;

  bool is_zero() const { return coeff_.empty(); }
  const SparsePoly& terms() const { return coeff_; }

  Rational coefficient(const Exponents& e) const {
    auto it = coeff_.find(e);
    return it == coeff_.end() ? Rational(0) : it->second;
  }

  Rational constant_term() const {
    if (coeff_.empty()) return 0;
    return coefficient(Exponents(ring_->count(), 0));
  }

  /// Sum of the terms of graded degree d.
  GradedElement degree_part(unsigned d) const {
    GradedElement out;
    out.ring_ = ring_;
    for (const auto& [e, c] : coeff_)
      if (ring_->monomial_degree(e) == d) out.coeff_.emplace(e, c);
    return out;
  }

  /// Degree when homogeneous (zero counts as homogeneous of any degree).
  std::optional<unsigned> homogeneous_degree() const {
    std::optional<unsigned> deg;
    for (const auto& [e, c] : coeff_) {
      unsigned d = ring_->monomial_degree(e);
      if (!deg)
        deg = d;
      else if (*deg != d)
        return std::nullopt;
    }
    return coeff_.empty() ? std::optional<unsigned>(0) : deg;
  }

  bool is_homogeneous_of_degree(unsigned d) const {
    if (is_zero()) return true;
    auto deg = homogeneous_degree();
    return deg && *deg == d;
  }

  friend GradedElement operator+(const GradedElement& a,
                                 const GradedElement& b) {
    requireCompatible(a, b);
    GradedElement out;
    out.ring_ = a.ring_ ? a.ring_ : b.ring_;
    out.coeff_ = a.coeff_;
    for (const auto& [e, c] : b.coeff_) {
      auto it = out.coeff_.find(e);
      if (it == out.coeff_.end()) {
        out.coeff_.emplace(e, c);
      } else {
        it->second += c;
        if (it->second == 0) out.coeff_.erase(it);
      }
    }
    return out;
  }

  friend GradedElement operator-(const GradedElement& a) {
    GradedElement out = a;
    for (auto& [e, c] : out.coeff_) c = -c;
    return out;
  }

  friend GradedElement operator-(const GradedElement& a,
                                 const GradedElement& b) {
    return a + (-b);
  }

  friend GradedElement operator*(const GradedElement& a,
                                 const GradedElement& b) {
    requireCompatible(a, b);
    GradedElement out;
    out.ring_ = a.ring_ ? a.ring_ : b.ring_;
    if (a.is_zero() || b.is_zero()) return out;
    SparsePoly acc;
    for (const auto& [ea, ca] : a.coeff_) {
      for (const auto& [eb, cb] : b.coeff_) {
        Exponents e = ea;
        for (std::size_t i = 0; i < e.size(); ++i) e[i] += eb[i];
        out.ring_->normalize_term(e, ca * cb, acc);
      }
    }
    out.coeff_ = std::move(acc);
    return out;
  }

  friend GradedElement operator*(const Rational& s, const GradedElement& a) {
    GradedElement out;
    out.ring_ = a.ring_;
    if (s == 0 || a.is_zero()) return out;
    for (const auto& [e, c] : a.coeff_) out.coeff_.emplace(e, s * c);
    return out;
  }

  friend GradedElement operator*(const GradedElement& a, const Rational& s) {
    return s * a;
  }

  friend bool operator==(const GradedElement& a, const GradedElement& b) {
    if (a.is_zero() || b.is_zero()) return a.is_zero() && b.is_zero();
    return a.ring_ == b.ring_ && a.coeff_ == b.coeff_;
  }

  friend bool operator!=(const GradedElement& a, const GradedElement& b) {
    return !(a == b);
  }

  /// The multiplicative unit of this element's ring.
  GradedElement one_like() const {
    if (!ring_) throw SpecError("zero element has no ring");
    GradedElement out;
    out.ring_ = ring_;
    out.coeff_.emplace(Exponents(ring_->count(), 0), Rational(1));
    return out;
  }

 private:
  friend class GradedAlgebra;

  static void requireCompatible(const GradedElement& a,
                                const GradedElement& b) {
    if (!detail::compatible(a.ring_, b.ring_))
      throw RingMismatchError("elements belong to different rings");
  }

  std::shared_ptr<const detail::RingData> ring_;
  SparsePoly coeff_;
};

inline GradedElement pow(const GradedElement& x, unsigned n) {
  if (n == 0) return x.one_like();
  GradedElement out = x;
  for (unsigned i = 1; i < n; ++i) out = out * x;
  return out;
}

/// Handle to a graded commutative quotient algebra with a finite monomial
/// basis.  Cheap to copy; all returned elements share the underlying data.
class GradedAlgebra {
 public:
  explicit GradedAlgebra(RingSpec spec) {
    validate(spec);
    auto data = std::make_shared<detail::RingData>();
    data->spec = std::move(spec);
    unsigned deg = 0;
    const RingSpec& s = data->spec;
    for (std::size_t i = 0; i < s.generators.size(); ++i) {
      unsigned top = s.generators[i].power_bound > 0
                         ? s.generators[i].power_bound - 1
                         : s.bundle_rank - 1;
      deg += top * s.generators[i].degree;
    }
    data->max_total_degree = deg;
    data_ = std::move(data);
  }

  const RingSpec& spec() const { return data_->spec; }
  std::size_t generator_count() const { return data_->count(); }
  unsigned bundle_rank() const { return data_->spec.bundle_rank; }
  unsigned max_total_degree() const { return data_->max_total_degree; }

  GradedElement zero() const {
    GradedElement out;
    out.ring_ = data_;
    return out;
  }

  GradedElement one() const { return constant(1); }

  GradedElement constant(const Rational& c) const {
    GradedElement out;
    out.ring_ = data_;
    if (c != 0) out.coeff_.emplace(Exponents(data_->count(), 0), c);
    return out;
  }

  GradedElement generator(std::size_t i) const {
    if (i >= data_->count()) throw SpecError("generator index out of range");
    Exponents e(data_->count(), 0);
    e[i] = 1;
    return make({{e, 1}});
  }

  GradedElement generator(std::string_view name) const {
    for (std::size_t i = 0; i < data_->count(); ++i)
      if (data_->spec.generators[i].name == name) return generator(i);
    throw SpecError("unknown generator: " + std::string(name));
  }

  std::optional<std::size_t> generator_index(std::string_view name) const {
    for (std::size_t i = 0; i < data_->count(); ++i)
      if (data_->spec.generators[i].name == name) return i;
    return std::nullopt;
  }

  /// Builds an element from raw sparse data, reducing it to normal form.
  GradedElement make(const SparsePoly& poly) const {
    SparsePoly acc;
    for (const auto& [e, c] : poly) {
      if (e.size() != data_->count())
        throw SpecError("exponent vector has wrong length");
      data_->normalize_term(e, c, acc);
    }
    GradedElement out;
    out.ring_ = data_;
    out.coeff_ = std::move(acc);
    return out;
  }

  bool owns(const GradedElement& x) const {
    return !x.ring_ || x.ring_ == data_;
  }

  /// Geometric-series inverse of an element with constant term 1.
  GradedElement invert_unit(const GradedElement& x) const {
    requireOwned(x);
    if (x.constant_term() != 1)
      throw NotAUnitError("invert_unit requires constant term 1");
    GradedElement u = x - one();
    GradedElement out = one();
    GradedElement power = one();
    for (unsigned k = 1; k <= data_->max_total_degree; ++k) {
      power = power * u;
      if (power.is_zero()) break;
      out = out + (k % 2 == 1 ? -power : power);
    }
    return out;
  }

  /// Total Chern class of (sum of line bundles) tensored with the line class
  /// `twist`: prod_j (1 + v_j + twist).
  GradedElement chern_twisted(const std::vector<GradedElement>& summands,
                              const GradedElement& twist) const {
    if (!twist.is_zero() && !twist.is_homogeneous_of_degree(1))
      throw SpecError("twist must be homogeneous of degree 1");
    GradedElement out = one();
    for (const GradedElement& v : summands) {
      requireOwned(v);
      if (!v.is_zero() && !v.is_homogeneous_of_degree(1))
        throw SpecError("bundle summand must be homogeneous of degree 1");
      out = out * (one() + v + twist);
    }
    return out;
  }

  /// Chern class of the K-theory class [num] - [den], twisted.
  GradedElement chern_kclass(const std::vector<GradedElement>& num,
                             const std::vector<GradedElement>& den,
                             const GradedElement& twist) const {
    return chern_twisted(num, twist) * invert_unit(chern_twisted(den, twist));
  }

  /// Fiber integration along the projective bundle: in normal form only the
  /// top bundle power rank-1 survives, with unit Segre weight.
  GradedElement segre_pushforward(const GradedElement& x) const {
    if (data_->spec.bundle_rank == 0)
      throw SpecError("ring carries no projective-bundle structure");
    requireOwned(x);
    std::size_t z = data_->bundle_index();
    SparsePoly acc;
    for (const auto& [e, c] : x.terms()) {
      if (e[z] != data_->spec.bundle_rank - 1) continue;
      Exponents e2 = e;
      e2[z] = 0;
      acc.emplace(std::move(e2), c);
    }
    return make(acc);
  }

  /// Degree functional: coefficient of the top monomial, with the configured
  /// weight on the hodge factor.  Off-dimension classes integrate to zero.
  Rational integrate(const GradedElement& x) const {
    requireOwned(x);
    if (x.is_zero()) return 0;
    Exponents top(data_->count(), 0);
    for (std::size_t i = 0; i < data_->count(); ++i) {
      const GeneratorSpec& g = data_->spec.generators[i];
      top[i] = g.power_bound > 0 ? g.power_bound - 1
                                 : data_->spec.bundle_rank - 1;
    }
    if (data_->spec.hodge) top[0] = 1;
    Rational c = x.coefficient(top);
    return data_->spec.hodge ? c * data_->spec.hodge_normalization : c;
  }

  std::string to_string(const GradedElement& x) const {
    requireOwned(x);
    if (x.is_zero()) return "0";
    std::vector<std::pair<Exponents, Rational>> terms(x.terms().begin(),
                                                      x.terms().end());
    std::stable_sort(terms.begin(), terms.end(),
                     [&](const auto& a, const auto& b) {
                       return data_->monomial_degree(a.first) <
                              data_->monomial_degree(b.first);
                     });
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : terms) {
      Rational a = c;
      if (first) {
        if (a < 0) {
          os << "-";
          a = -a;
        }
      } else {
        os << (a < 0 ? " - " : " + ");
        if (a < 0) a = -a;
      }
      first = false;
      std::string mono = monomial_string(e);
      if (mono.empty()) {
        os << effinv::to_string(a);
      } else {
        if (a != 1) os << effinv::to_string(a) << "*";
        os << mono;
      }
    }
    return os.str();
  }

  friend bool operator==(const GradedAlgebra& a, const GradedAlgebra& b) {
    return a.data_ == b.data_;
  }

 private:
  void requireOwned(const GradedElement& x) const {
    if (!owns(x)) throw RingMismatchError("element from a different ring");
  }

  std::string monomial_string(const Exponents& e) const {
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (!first) os << "*";
      first = false;
      os << data_->spec.generators[i].name;
      if (e[i] > 1) os << "^" << e[i];
    }
    return os.str();
  }

  static void validate(const RingSpec& spec) {
    if (spec.generators.empty()) throw SpecError("ring needs generators");
    for (std::size_t i = 0; i < spec.generators.size(); ++i) {
      const GeneratorSpec& g = spec.generators[i];
      if (g.degree < 1) throw SpecError("generator degree must be >= 1");
      bool is_bundle_gen =
          spec.bundle_rank > 0 && i + 1 == spec.generators.size();
      if (!is_bundle_gen && g.power_bound < 1)
        throw SpecError("generator " + g.name + " needs a power bound");
    }
    if (spec.hodge) {
      if (spec.generators.front().power_bound != 2 ||
          spec.generators.front().degree != 1)
        throw SpecError("hodge generator must be first, degree 1, square 0");
    }
    if (spec.bundle_rank > 0) {
      const GeneratorSpec& z = spec.generators.back();
      unsigned want = spec.bundle_rank * z.degree;
      std::size_t n = spec.generators.size();
      for (const auto& [e, c] : spec.bundle_relation) {
        if (e.size() != n) throw SpecError("relation exponent length");
        if (e.back() >= spec.bundle_rank)
          throw SpecError("relation must lower the bundle power");
        unsigned d = 0;
        for (std::size_t i = 0; i < n; ++i)
          d += e[i] * spec.generators[i].degree;
        if (d != want)
          throw SpecError("bundle relation is not homogeneous of the rank");
      }
    } else if (!spec.bundle_relation.empty()) {
      throw SpecError("bundle relation without bundle rank");
    }
  }

  std::shared_ptr<const detail::RingData> data_;
};

/// Spec for the ring of a projective bundle over `base`: appends the bundle
/// class with the Grothendieck relation derived from the dual summand
/// classes (degree-1 elements of the base ring).
inline RingSpec projective_bundle_spec(const GradedAlgebra& base,
                                       const std::vector<GradedElement>& dual_summands,
                                       const std::string& bundle_name = "zeta") {
  if (dual_summands.empty()) throw SpecError("bundle needs summands");
  for (const GradedElement& v : dual_summands) {
    if (!base.owns(v)) throw RingMismatchError("summand from a foreign ring");
    if (!v.is_zero() && !v.is_homogeneous_of_degree(1))
      throw SpecError("dual summand must be homogeneous of degree 1");
  }
  unsigned rank = static_cast<unsigned>(dual_summands.size());
  // elementary symmetric classes c_j of the dual bundle
  std::vector<GradedElement> elem(rank + 1);
  elem[0] = base.one();
  for (const GradedElement& v : dual_summands) {
    for (unsigned j = rank; j >= 1; --j) elem[j] = elem[j] + elem[j - 1] * v;
  }
  RingSpec out;
  out.generators = base.spec().generators;
  out.hodge = base.spec().hodge;
  out.hodge_normalization = base.spec().hodge_normalization;
  out.generators.push_back({bundle_name, 1, 0});
  out.bundle_rank = rank;
  // zeta^rank = -sum_{j>=1} c_j(E^dual) zeta^{rank-j}
  for (unsigned j = 1; j <= rank; ++j) {
    for (const auto& [e, c] : elem[j].terms()) {
      Exponents e2 = e;
      e2.push_back(rank - j);
      out.bundle_relation[e2] += -c;
    }
  }
  for (auto it = out.bundle_relation.begin();
       it != out.bundle_relation.end();) {
    if (it->second == 0)
      it = out.bundle_relation.erase(it);
    else
      ++it;
  }
  return out;
}

/// Transports an element of `base` into `total` (same generators plus the
/// appended bundle class).
inline GradedElement lift_to_bundle(const GradedAlgebra& total,
                                    const GradedElement& base_element) {
  SparsePoly poly;
  for (const auto& [e, c] : base_element.terms()) {
    Exponents e2 = e;
    e2.push_back(0);
    poly.emplace(std::move(e2), c);
  }
  return total.make(poly);
}

}  // namespace effinv
