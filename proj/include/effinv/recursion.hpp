#pragma once

#include <algorithm>
#include <cstdlib>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "effinv/census.hpp"
#include "effinv/constraints.hpp"
#include "effinv/genus1.hpp"
#include "effinv/series.hpp"
#include "effinv/target.hpp"

namespace effinv {

class ReductionError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};
class UnsupportedTokenError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// One marking of a symbolic invariant.  The insertion is a monomial in the
/// ambient hyperplanes and the bundle class, together with a symbolic power
/// of the boundary DF-class; `psi_domain` tracks powers of the domain
/// cotangent class, which the calculus does not reduce.
struct MarkingData {
  long contact = -1;
  long order = 1;
  std::vector<unsigned> h_exp;
  unsigned zeta_exp = 0;
  unsigned psi_df = 0;
  unsigned psi_domain = 0;

  int insertion_degree() const {
    unsigned d = zeta_exp + psi_df + psi_domain;
    for (unsigned e : h_exp) d += e;
    return static_cast<int>(d);
  }

  friend auto operator<=>(const MarkingData&, const MarkingData&) = default;
};

/// Normalized key (genus, curve class, sorted markings, psi_min power) of an
/// effective-invariant expression.
struct Token {
  int genus = 0;
  CurveClass beta;
  int psi_power = 0;
  std::vector<MarkingData> markings;

  void normalize() { std::sort(markings.begin(), markings.end()); }

  int marking_count() const { return static_cast<int>(markings.size()); }

  DiscreteData discrete_data() const {
    DiscreteData out;
    out.genus = genus;
    out.beta = beta;
    for (const MarkingData& m : markings) {
      out.contacts.push_back(m.contact);
      out.orders.push_back(m.order);
    }
    return out;
  }

  std::vector<int> insertion_degrees() const {
    std::vector<int> out;
    for (const MarkingData& m : markings) out.push_back(m.insertion_degree());
    return out;
  }

  std::string key() const {
    std::ostringstream os;
    os << "g" << genus << ";b";
    for (long b : beta.beta_x) os << b << ",";
    os << "t" << beta.t << ";k" << psi_power << ";";
    for (const MarkingData& m : markings) {
      os << "(" << m.contact << "/" << m.order << ":";
      for (unsigned e : m.h_exp) os << e << ",";
      os << "z" << m.zeta_exp << "d" << m.psi_df << "p" << m.psi_domain
         << ")";
    }
    return os.str();
  }

  friend bool operator==(const Token& a, const Token& b) {
    return a.genus == b.genus && a.beta.beta_x == b.beta.beta_x &&
           a.beta.t == b.beta.t && a.psi_power == b.psi_power &&
           a.markings == b.markings;
  }
};

struct InvariantExpr {
  Token token;
  Rational coefficient = 1;
};

using InvariantCombination = std::vector<InvariantExpr>;

struct BasicKey {
  int genus;
  std::vector<long> beta_x;
  long t;

  friend auto operator<=>(const BasicKey&, const BasicKey&) = default;

  std::string str() const {
    std::ostringstream os;
    os << "basic(g=" << genus << ", beta=[";
    for (std::size_t i = 0; i < beta_x.size(); ++i)
      os << (i ? "," : "") << beta_x[i];
    os << "], t=" << t << ")";
    return os.str();
  }
};

/// Outcome of a reduction: an exact linear combination of basic symbols plus
/// an evaluated rational from the closed genus <= 1 formulas.
struct ReducedForm {
  std::map<BasicKey, Rational> basic;
  Rational value = 0;
  std::vector<std::string> trace;

  bool is_zero() const { return basic.empty() && value == 0; }

  void add_basic(const BasicKey& key, const Rational& c) {
    auto it = basic.find(key);
    if (it == basic.end()) {
      if (c != 0) basic.emplace(key, c);
    } else {
      it->second += c;
      if (it->second == 0) basic.erase(it);
    }
  }
};

struct LedgerEntry {
  enum class Kind { Basic, Value, Zero };
  Kind kind = Kind::Zero;
  Rational value = 0;     // Kind::Value
  std::string rule;       // Kind::Zero: the rule that produced it
  std::string provenance;
};

/// Memo of resolved tokens.  Reductions only rewrite a token into tokens
/// with strictly smaller (markings, psi power), which is the termination
/// measure enforced by the reducer.
class InvariantLedger {
 public:
  const LedgerEntry* find(const Token& token) const {
    auto it = entries_.find(token.key());
    return it == entries_.end() ? nullptr : &it->second;
  }

  void record(const Token& token, LedgerEntry entry) {
    entries_.insert_or_assign(token.key(), std::move(entry));
  }

  std::size_t size() const { return entries_.size(); }

 private:
  std::map<std::string, LedgerEntry> entries_;
};

namespace detail {

inline bool is_unit_slot(const TargetSpec& target, const MarkingData& m) {
  return m.contact == -target.d && m.order == target.r && m.psi_domain == 0;
}

inline Rational divisor_pairing(const Token& token, const MarkingData& m) {
  // exactly one exponent is 1: h_i pairs to beta_x[i], the bundle class to
  // t, and the DF-class to -t
  for (std::size_t i = 0; i < m.h_exp.size(); ++i)
    if (m.h_exp[i] == 1) return Rational(token.beta.beta_x[i]);
  if (m.zeta_exp == 1) return Rational(token.beta.t);
  return Rational(-token.beta.t);  // psi_df == 1
}

}  // namespace detail

/// String relation: removing a bare unit marking trades one psi_min power
/// for DF-class insertions at the remaining markings.  Empty (zero) when the
/// psi power is zero.
inline InvariantCombination reduce_string(const TargetSpec& target,
                                          const InvariantExpr& expr,
                                          std::size_t unit_index) {
  const Token& token = expr.token;
  if (unit_index >= expr.token.markings.size())
    throw InvalidDataError("unit index out of range");
  const MarkingData& unit = token.markings[unit_index];
  if (!detail::is_unit_slot(target, unit) || unit.insertion_degree() != 0)
    throw InvalidDataError("marking is not a bare unit sector");
  InvariantCombination out;
  if (token.psi_power == 0) return out;  // the k'-sum is empty
  for (std::size_t j = 0; j < token.markings.size(); ++j) {
    if (j == unit_index) continue;
    Rational weight(std::abs(token.markings[j].contact),
                    token.markings[j].order);
    for (int kp = 0; kp <= token.psi_power - 1; ++kp) {
      Token next = token;
      next.markings[j].psi_df += static_cast<unsigned>(kp);
      next.markings.erase(next.markings.begin() + unit_index);
      next.psi_power = token.psi_power - 1 - kp;
      next.normalize();
      out.push_back({std::move(next), expr.coefficient * weight});
    }
  }
  return out;
}

/// Divisor relation: removing a unit marking carrying a degree-one insertion
/// D produces the pairing term deg_beta(D) plus DF-corrected insertions.
inline InvariantCombination reduce_divisor(const TargetSpec& target,
                                           const InvariantExpr& expr,
                                           std::size_t unit_index) {
  const Token& token = expr.token;
  if (unit_index >= token.markings.size())
    throw InvalidDataError("unit index out of range");
  const MarkingData& unit = token.markings[unit_index];
  if (!detail::is_unit_slot(target, unit) || unit.insertion_degree() != 1)
    throw InvalidDataError("marking is not a unit sector with a divisor");
  InvariantCombination out;
  Rational pairing = detail::divisor_pairing(token, unit);
  {
    Token next = token;
    next.markings.erase(next.markings.begin() + unit_index);
    next.normalize();
    if (pairing != 0)
      out.push_back({std::move(next), expr.coefficient * pairing});
  }
  for (std::size_t j = 0; j < token.markings.size(); ++j) {
    if (j == unit_index) continue;
    Rational weight(std::abs(token.markings[j].contact),
                    token.markings[j].order);
    for (int kp = 0; kp <= token.psi_power - 1; ++kp) {
      Token next = token;
      // D_I * psi_DF^{k'} inserted at marking j
      MarkingData& mj = next.markings[j];
      for (std::size_t i = 0; i < unit.h_exp.size(); ++i)
        mj.h_exp[i] += unit.h_exp[i];
      mj.zeta_exp += unit.zeta_exp;
      mj.psi_df += unit.psi_df + static_cast<unsigned>(kp);
      next.markings.erase(next.markings.begin() + unit_index);
      next.psi_power = token.psi_power - 1 - kp;
      next.normalize();
      out.push_back({std::move(next), expr.coefficient * weight});
    }
  }
  return out;
}

/// Scalar of the dilaton-type combination: (d/r)(2g - 2 + n), where n counts
/// the markings besides the removed unit.  The balancing substitution
/// t + sum |c_j|/r_j = (d/r)(2g - 2 + n) is checked on the way.
inline Rational dilaton_combination(const TargetSpec& target,
                                    const Token& token_with_unit,
                                    std::size_t unit_index) {
  const Token& token = token_with_unit;
  if (unit_index >= token.markings.size())
    throw InvalidDataError("unit index out of range");
  if (!detail::is_unit_slot(target, token.markings[unit_index]))
    throw InvalidDataError("marking is not a unit sector");
  long n = token.marking_count() - 1;
  Rational factor =
      Rational(target.d, target.r) * Rational(2 * token.genus - 2 + n);
  Rational check(token.beta.t);
  for (std::size_t j = 0; j < token.markings.size(); ++j) {
    if (j == unit_index) continue;
    check += Rational(std::abs(token.markings[j].contact),
                      token.markings[j].order);
  }
  if (check != factor)
    throw InvalidDataError("token violates the balancing substitution");
  return factor;
}

struct ReduceOptions {
  enum class UnitOrder { First, Last, Shuffle };
  UnitOrder unit_order = UnitOrder::First;
  unsigned shuffle_seed = 0;
  bool record_trace = false;
  InvariantLedger* ledger = nullptr;
};

/// Reduction engine: feasibility and vanishing first, then string/divisor
/// passes until every residual token is a basic symbol or an evaluated
/// genus <= 1 number.
class Reducer {
 public:
  explicit Reducer(TargetSpec target, ReduceOptions options = {})
      : target_(std::move(target)), options_(options) {
    target_.validate();
  }

  const InvariantLedger& ledger() const { return ledger_; }

  ReducedForm reduce(Token token) {
    token.normalize();
    ReducedForm out;
    reduce_into(token, 1, out, 0);
    return out;
  }

 private:
  void trace(ReducedForm& out, const Token& token, const std::string& what) {
    if (options_.record_trace) out.trace.push_back(token.key() + " -> " + what);
  }

  void record(const Token& token, LedgerEntry entry) {
    ledger_.record(token, entry);
    if (options_.ledger) options_.ledger->record(token, entry);
  }

  static void check_measure(const Token& parent, const Token& child) {
    auto measure = [](const Token& t) {
      return std::pair<int, int>(t.marking_count(), t.psi_power);
    };
    if (!(measure(child) < measure(parent)))
      throw ReductionError("reduction failed to shrink the (n, k) measure");
  }

  std::optional<std::size_t> pick_unit(const Token& token,
                                       int max_degree) const {
    std::vector<std::size_t> candidates;
    for (std::size_t i = 0; i < token.markings.size(); ++i) {
      const MarkingData& m = token.markings[i];
      if (detail::is_unit_slot(target_, m) &&
          m.insertion_degree() <= max_degree)
        candidates.push_back(i);
    }
    if (candidates.empty()) return std::nullopt;
    switch (options_.unit_order) {
      case ReduceOptions::UnitOrder::First:
        return candidates.front();
      case ReduceOptions::UnitOrder::Last:
        return candidates.back();
      case ReduceOptions::UnitOrder::Shuffle: {
        unsigned state = options_.shuffle_seed * 2654435761u +
                         static_cast<unsigned>(token.key().size()) * 97u +
                         static_cast<unsigned>(candidates.size());
        state ^= state << 13;
        state ^= state >> 17;
        state ^= state << 5;
        return candidates[state % candidates.size()];
      }
    }
    return candidates.front();
  }

  const GenusOneModel& genus1_model() {
    if (!genus1_) {
      if (!target_.ambient.chow_supported)
        throw ReductionError(
            "genus-one evaluation needs a chow-supported ambient");
      genus1_ = std::make_unique<GenusOneModel>(build_genus1(target_));
    }
    return *genus1_;
  }

  GradedElement insertion_class(const MarkingData& m) {
    const GenusOneModel& model = genus1_model();
    GradedElement out = model.ring.one();
    for (std::size_t i = 0; i < m.h_exp.size(); ++i)
      if (m.h_exp[i] > 0)
        out = out * pow(model.hyperplane(static_cast<int>(i)), m.h_exp[i]);
    if (m.zeta_exp > 0) out = out * pow(model.log_class, m.zeta_exp);
    // the DF-class evaluates to minus the log class on the boundary
    if (m.psi_df > 0) out = out * pow(-model.log_class, m.psi_df);
    return out;
  }

  void reduce_into(Token token, const Rational& coeff, ReducedForm& out,
                   int depth) {
    if (depth > 4096) throw ReductionError("reduction recursion too deep");
    token.normalize();
    if (coeff == 0) return;

    if (const LedgerEntry* hit = ledger_.find(token)) {
      apply_entry(token, *hit, coeff, out);
      return;
    }

    for (const MarkingData& m : token.markings) {
      if (m.contact >= 0)
        throw UnsupportedTokenError(
            "reduced theory needs negative contact orders");
      if (m.psi_domain > 0)
        throw UnsupportedTokenError(
            "domain cotangent powers at markings do not reduce");
    }

    // curve classes live in the coordinate cone, with the log degree either
    // determined (rank one) or bounded below by the minimal section degree
    for (long b : token.beta.beta_x)
      if (b < 0) {
        resolve_zero(token, "effective-cone", coeff, out);
        return;
      }
    if (target_.bundle.rank() == 1) {
      long derived = 0;
      for (std::size_t i = 0; i < token.beta.beta_x.size(); ++i)
        derived +=
            target_.bundle.summand_degrees[0][i] * token.beta.beta_x[i];
      if (derived != token.beta.t)
        throw InvalidDataError(
            "log degree disagrees with the rank-one curve class");
    } else {
      long minimal = 0;
      for (std::size_t i = 0; i < token.beta.beta_x.size(); ++i)
        minimal += target_.bundle.min_twist(i) * token.beta.beta_x[i];
      if (token.beta.t < minimal) {
        resolve_zero(token, "effective-cone", coeff, out);
        return;
      }
    }

    DiscreteData data = token.discrete_data();
    if (!balancing(data, target_).satisfied) {
      resolve_zero(token, "balancing", coeff, out);
      return;
    }

    if (token.genus == 0) {
      if (genus0_status(target_, data) == Vanishing::Vanishes) {
        resolve_zero(token, "genus0-nef", coeff, out);
        return;
      }
      throw ReductionError("genus-zero moduli unknown for a non-nef bundle");
    }

    if (token.genus == 1) {
      if (!target_.bundle.is_ample())
        throw ReductionError("genus-one reduction needs an ample bundle");
      bool units_only = token.beta.is_zero();
      for (const MarkingData& m : token.markings)
        units_only = units_only && m.contact == -1;
      if (!units_only) {
        resolve_zero(token, "genus1-ample", coeff, out);
        return;
      }
      if (token.markings.empty())
        throw UnsupportedTokenError("genus-one tokens need a marking");
      Rational value = evaluate_genus1(token);
      record(token, {LedgerEntry::Kind::Value, value, "", "genus-one model"});
      trace(out, token, "value " + to_string(value));
      out.value += coeff * value;
      return;
    }

    // genus >= 2: reductions are complete under the vanishing assumption
    if (!target_.ambient.h1_vanishes)
      throw ReductionError("reduction needs H^1(boundary) = 0");
    long bound = dimension_bound(data, target_);
    if (bound > 0)
      throw ReductionError(
          "reduction to basics not guaranteed (positive dimension bound): " +
          token.key());

    if (vanishing_check(data, target_, token.insertion_degrees(),
                        token.psi_power) == Vanishing::Vanishes) {
      resolve_zero(token, "vanishing", coeff, out);
      return;
    }

    long dim = reduced_vdim(data, target_);
    long codim = token.psi_power;
    for (int d : token.insertion_degrees()) codim += d;
    if (codim != dim) {
      resolve_zero(token, "dimension", coeff, out);
      return;
    }

    if (auto unit = pick_unit(token, 1)) {
      const MarkingData& m = token.markings[*unit];
      InvariantCombination parts;
      if (m.insertion_degree() == 0) {
        if (token.psi_power == 0) {
          resolve_zero(token, "string-empty", coeff, out);
          return;
        }
        parts = reduce_string(target_, {token, 1}, *unit);
        trace(out, token, "string at marking " + std::to_string(*unit));
      } else {
        parts = reduce_divisor(target_, {token, 1}, *unit);
        trace(out, token, "divisor at marking " + std::to_string(*unit));
      }
      for (const InvariantExpr& part : parts) {
        check_measure(token, part.token);
        reduce_into(part.token, coeff * part.coefficient, out, depth + 1);
      }
      return;
    }

    // residual token: must be a basic symbol
    bool basic_shape = token.psi_power == 0;
    for (const MarkingData& m : token.markings)
      basic_shape = basic_shape && m.contact == -2 && m.order == 1 &&
                    m.insertion_degree() == 0;
    if (basic_shape && dim == 0) {
      BasicKey key{token.genus, token.beta.beta_x, token.beta.t};
      record(token,
             {LedgerEntry::Kind::Basic, 0, "", key.str()});
      trace(out, token, key.str());
      out.add_basic(key, coeff);
      return;
    }
    throw UnsupportedTokenError("token does not reduce to a basic symbol: " +
                                token.key());
  }

  void apply_entry(const Token& token, const LedgerEntry& entry,
                   const Rational& coeff, ReducedForm& out) {
    switch (entry.kind) {
      case LedgerEntry::Kind::Zero:
        return;
      case LedgerEntry::Kind::Value:
        out.value += coeff * entry.value;
        return;
      case LedgerEntry::Kind::Basic:
        out.add_basic({token.genus, token.beta.beta_x, token.beta.t}, coeff);
        return;
    }
  }

  void resolve_zero(const Token& token, const std::string& rule,
                    const Rational&, ReducedForm& out) {
    record(token, {LedgerEntry::Kind::Zero, 0, rule, rule});
    trace(out, token, "zero (" + rule + ")");
  }

  /// Genus one, class zero, all unit contacts: merge the insertions through
  /// the shared evaluation map, strip bare units by the string relation, and
  /// finish in the one-marking model.
  Rational evaluate_genus1(const Token& token) {
    const GenusOneModel& model = genus1_model();
    GradedElement merged = model.ring.one();
    for (const MarkingData& m : token.markings)
      merged = merged * insertion_class(m);
    return genus1_with_units(token.marking_count(), token.psi_power, merged);
  }

  Rational genus1_with_units(int markings, int psi_power,
                             const GradedElement& merged) {
    const GenusOneModel& model = genus1_model();
    if (markings <= 1)
      return genus1_invariant(model, psi_power, {merged});
    if (psi_power == 0) return 0;  // string with an empty sum
    Rational out = 0;
    for (int kp = 0; kp <= psi_power - 1; ++kp) {
      GradedElement df = kp == 0 ? model.ring.one()
                                 : pow(-model.log_class, kp);
      out += Rational(markings - 1) *
             genus1_with_units(markings - 1, psi_power - 1 - kp, merged * df);
    }
    return out;
  }

  TargetSpec target_;
  ReduceOptions options_;
  InvariantLedger ledger_;
  std::unique_ptr<GenusOneModel> genus1_;
};

inline ReducedForm reduce_to_basic(const TargetSpec& target, Token token,
                                   ReduceOptions options = {}) {
  Reducer reducer(target, options);
  return reducer.reduce(std::move(token));
}

/// Value of a genus-one expression with several unit markings.
inline Rational genus1_reduce(const TargetSpec& target, Token token,
                              ReduceOptions options = {}) {
  if (token.genus != 1)
    throw InvalidDataError("genus1_reduce expects a genus-one token");
  ReducedForm form = reduce_to_basic(target, std::move(token), options);
  return form.value;
}

enum class RootDirection {
  ToCoarse,  // invariant of the root boundary -> invariant downstairs
  ToRoot,
};

/// Root-change rescaling of an effective invariant: the root-side invariant
/// times ell^{1+k} equals the coarse-side invariant.
inline Rational rescale_roots(const Rational& value, int psi_power, long ell,
                              RootDirection direction) {
  if (ell < 1) throw InvalidDataError("ell must be positive");
  if (psi_power < 0) throw InvalidDataError("psi power must be >= 0");
  Rational factor = pow_rat(Rational(ell), static_cast<unsigned>(psi_power) + 1);
  if (direction == RootDirection::ToCoarse) return value * factor;
  return value / factor;
}

/// One factor r~ t cls / (-t - psi) of the disconnected series (the
/// canonical variant drops the r~ t prefactor).
inline LaurentSeries<GradedElement> disconnected_factor(
    const GradedElement& cls, const GradedElement& psi, const Rational& rtilde,
    int order, bool canonical = false) {
  LaurentSeries<GradedElement> pole = expand_pole(PoleSign::Minus, psi, order);
  LaurentSeries<GradedElement> scaledpole = pole.scaled(cls);
  if (canonical) return scaledpole;
  LaurentSeries<GradedElement> tfactor(order);
  tfactor.set_coefficient(1, rtilde * cls.one_like());
  return tfactor * scaledpole;
}

/// Product of disconnected-series factors over the connected components.
inline LaurentSeries<GradedElement> assemble_disconnected(
    const std::vector<LaurentSeries<GradedElement>>& parts) {
  if (parts.empty()) throw InvalidDataError("need at least one part");
  LaurentSeries<GradedElement> out = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) out = out * parts[i];
  return out;
}

/// Verifies the projective-bundle push-forward of 1/(-t - psi_min): the
/// image is the product of the single-factor poles at psi_min_i = -e_i.
inline bool pushforward_min_check(const GradedAlgebra& base,
                                  const std::vector<GradedElement>& e_classes,
                                  int order) {
  if (e_classes.empty()) throw InvalidDataError("need at least one factor");
  GradedAlgebra total(projective_bundle_spec(base, e_classes));
  std::vector<GradedElement> lifted;
  for (const GradedElement& e : e_classes) {
    SparsePoly poly;
    for (const auto& [expts, c] : e.terms()) {
      Exponents e2 = expts;
      e2.push_back(0);
      poly.emplace(std::move(e2), c);
    }
    lifted.push_back(total.make(poly));
  }
  GradedElement psi_min = total.generator("zeta");
  LaurentSeries<GradedElement> pushed =
      expand_pole(PoleSign::Minus, psi_min, order)
          .mapped([&](const GradedElement& c) {
            return total.segre_pushforward(c);
          });
  LaurentSeries<GradedElement> expected =
      expand_pole(PoleSign::Minus, -lifted.front(), order);
  for (std::size_t i = 1; i < lifted.size(); ++i)
    expected = expected * expand_pole(PoleSign::Minus, -lifted[i], order);
  return pushed == expected;
}

}  // namespace effinv
