#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "effinv/rational.hpp"
#include "effinv/target.hpp"

namespace effinv {

enum class Vanishing { Vanishes, Unknown };
enum class ModuliStatus { Empty, ZeroCycle, Unknown };

struct BalancingResult {
  bool satisfied = false;
  long defect = 0;  // sum(c_i + 1) - (t - (2g - 2))
  bool all_minus_one = false;
};

/// sum_i (c_i + 1) = deg L_log - (2g - 2); the left side is <= 0 for
/// punctured data, with equality exactly when every contact is -1.
inline BalancingResult balancing(const DiscreteData& data,
                                 const TargetSpec&) {
  BalancingResult out;
  long lhs = data.contact_sum_plus_one();
  long rhs = data.beta.t - (2 * data.genus - 2);
  out.defect = lhs - rhs;
  out.satisfied = out.defect == 0;
  out.all_minus_one = std::all_of(data.contacts.begin(), data.contacts.end(),
                                  [](long c) { return c == -1; });
  return out;
}

/// Virtual dimension of the stable-map moduli of the complete intersection.
inline long ci_vdim(const DiscreteData& data, const TargetSpec& target) {
  long g = data.genus;
  long n = data.markings();
  long factor = 3 - target.ambient.dim + target.bundle.rank();
  return factor * (g - 1) - target.kx_det_pairing(data.beta.beta_x) + n;
}

/// Reduced virtual dimension, computed from the ambient data.
inline long reduced_vdim(const DiscreteData& data, const TargetSpec& target) {
  return ci_vdim(data, target) +
         target.bundle.rank() * data.contact_sum_plus_one();
}

/// Same dimension through the boundary's canonical bundle; the log degree is
/// eliminated against the contact orders, so the two routes agree exactly.
inline long reduced_vdim_via_infinity(const DiscreteData& data,
                                      const TargetSpec& target) {
  InfinityData info = infinity_data(target);
  long g = data.genus;
  long n = data.markings();
  long t = 2 * g - 2 + data.contact_sum_plus_one();
  long k_inf = -static_cast<long>(info.bundle_rank) * t;
  for (std::size_t i = 0; i < data.beta.beta_x.size(); ++i)
    k_inf += info.kx_det_coeffs[i] * data.beta.beta_x[i];
  return (2 - info.dim_infinity) * (g - 1) - k_inf + n;
}

/// Strict bound whose failure blocks the dimension-count vanishing.
inline long dimension_bound(const DiscreteData& data,
                            const TargetSpec& target) {
  long factor = 3 - target.ambient.dim + target.bundle.rank();
  return factor * (data.genus - 1) -
         target.kx_det_pairing(data.beta.beta_x);
}

/// Dimension-count vanishing for the reduced cycle.  Insertion degrees are
/// Chow degrees per marking (missing entries count as degree zero).
inline Vanishing vanishing_check(const DiscreteData& data,
                                 const TargetSpec& target,
                                 const std::vector<int>& insertion_degrees = {},
                                 int psi_power = 0) {
  (void)psi_power;
  if (!balancing(data, target).satisfied) return Vanishing::Vanishes;
  if (ci_vdim(data, target) < 0) return Vanishing::Vanishes;
  if (dimension_bound(data, target) < 0) {
    if (target.ambient.h1_vanishes) return Vanishing::Vanishes;
    bool each = true;
    for (std::size_t i = 0; i < data.contacts.size(); ++i) {
      int deg = i < insertion_degrees.size() ? insertion_degrees[i] : 0;
      if (data.contacts[i] <= -2) continue;
      if (data.contacts[i] == -1 && deg >= 2) continue;
      each = false;
      break;
    }
    if (each) return Vanishing::Vanishes;
  }
  return Vanishing::Unknown;
}

struct FeasibilityReport {
  long balancing_defect = 0;
  bool feasible = false;
  bool all_minus_one_forced = false;
  long red_vdim = 0;
  long ci_vdim = 0;
  ModuliStatus vanish = ModuliStatus::Unknown;
  std::vector<std::string> reasons;
};

inline FeasibilityReport analyze(const DiscreteData& data,
                                 const TargetSpec& target,
                                 const std::vector<int>& insertion_degrees = {},
                                 int psi_power = 0) {
  FeasibilityReport out;
  BalancingResult bal = balancing(data, target);
  out.balancing_defect = bal.defect;
  out.feasible = bal.satisfied && data.all_contacts_negative();
  out.all_minus_one_forced =
      bal.satisfied && data.beta.t == 2 * data.genus - 2;
  out.red_vdim = reduced_vdim(data, target);
  out.ci_vdim = ci_vdim(data, target);
  if (out.red_vdim != reduced_vdim_via_infinity(data, target))
    out.reasons.push_back("vdim-routes-disagree");
  if (!data.all_contacts_negative())
    out.reasons.push_back("nonnegative-contact");

  if (!bal.satisfied) {
    out.vanish = ModuliStatus::Empty;
    out.reasons.push_back("balancing");
    return out;
  }
  if (data.genus == 0 && target.bundle.is_nef()) {
    out.vanish = ModuliStatus::Empty;
    out.reasons.push_back("genus0-nef");
    return out;
  }
  if (data.genus == 1 && target.bundle.is_ample() &&
      (!data.beta.is_zero() || !bal.all_minus_one)) {
    out.vanish = ModuliStatus::Empty;
    out.reasons.push_back("genus1-ample");
    return out;
  }
  if (out.ci_vdim < 0) {
    out.vanish = ModuliStatus::ZeroCycle;
    out.reasons.push_back("general-type");
    return out;
  }
  if (vanishing_check(data, target, insertion_degrees, psi_power) ==
      Vanishing::Vanishes) {
    out.vanish = ModuliStatus::ZeroCycle;
    out.reasons.push_back("dimension-count");
    return out;
  }
  return out;
}

/// d (N - 2) > 2N + 2 for a degree-d hypersurface in P^N; the regime needs
/// the complete intersection to have dimension at least 4.
inline bool hypersurface_threshold(long d, long N) {
  if (N < 5)
    throw OutOfRegimeError("hypersurface threshold needs N >= 5");
  return d * (N - 2) > 2 * N + 2;
}

/// 3 - N + R + (2/d1)(N + 1 - sum d_j) < 0, exact rational comparison.
inline bool ci_threshold(std::vector<long> degrees, long N) {
  std::sort(degrees.begin(), degrees.end());
  long R = static_cast<long>(degrees.size());
  if (R < 1) throw InvalidDataError("need at least one degree");
  long sum = 0;
  for (long dj : degrees) {
    if (dj < 2) throw OutOfRegimeError("degrees must be >= 2");
    sum += dj;
  }
  if (sum > N) throw OutOfRegimeError("Fano range requires sum d_j <= N");
  if (N - R < 4) throw OutOfRegimeError("complete intersection dim >= 4");
  Rational value = Rational(3 - N + R) +
                   Rational(2, degrees.front()) * Rational(N + 1 - sum);
  return value < 0;
}

/// Componentwise d_{ji} > (2 N_i + 2)/(sum N - 2) over a product of
/// projective spaces, applied to every summand.
inline bool product_threshold(const std::vector<std::vector<long>>& degrees,
                              const std::vector<int>& dims) {
  long total = 0;
  for (int n : dims) total += n;
  if (total < 5) throw OutOfRegimeError("product threshold needs sum N >= 5");
  for (const auto& row : degrees) {
    if (row.size() != dims.size())
      throw InvalidDataError("degree row length mismatch");
    for (std::size_t i = 0; i < row.size(); ++i)
      if (row[i] * (total - 2) <= 2 * dims[i] + 2) return false;
  }
  return true;
}

/// d (K(N-K) - 2) > 2N for a degree-d hypersurface in Gr(K, N).
inline bool grassmann_threshold(long d, long K, long N) {
  if (K * (N - K) < 5)
    throw OutOfRegimeError("grassmannian threshold needs dim >= 5");
  return d * (K * (N - K) - 2) > 2 * N;
}

struct BartonInvariants {
  Rational m_a;        // sup m with E (x) A^{-m} nef
  Rational m_prime_a;  // inf m with K_X (x) det E (x) A^m nef
};

/// Barton invariants over a product of projective spaces for the ample
/// class A = O(a_1, ..., a_k).
inline BartonInvariants barton(const SplitBundle& bundle,
                               const AmbientSpace& ambient,
                               const std::vector<long>& ample) {
  if (!ambient.chow_supported || ambient.projective_dims.empty())
    throw OutOfRegimeError("barton invariants need a projective product");
  if (static_cast<int>(ample.size()) != ambient.curve_rank)
    throw InvalidDataError("ample vector length mismatch");
  for (long a : ample)
    if (a <= 0) throw InvalidDataError("ample vector must be positive");
  if (!bundle.is_ample()) throw InvalidDataError("bundle must be ample");
  BartonInvariants out;
  bool first = true;
  for (const auto& row : bundle.summand_degrees) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      Rational v(row[i], ample[i]);
      if (first || v < out.m_a) out.m_a = v;
      first = false;
    }
  }
  std::vector<long> det = bundle.det_degrees();
  first = true;
  for (std::size_t i = 0; i < det.size(); ++i) {
    Rational v(ambient.projective_dims[i] + 1 - det[i], ample[i]);
    if (first || v > out.m_prime_a) out.m_prime_a = v;
    first = false;
  }
  return out;
}

/// 3 - dim X + rk E + 2 m'_A / m_A < 0 with m'_A >= 0.
inline bool barton_vanishing(const BartonInvariants& inv, int dim_x,
                             int rank) {
  if (inv.m_prime_a < 0) return false;
  return Rational(3 - dim_x + rank) + 2 * inv.m_prime_a / inv.m_a < 0;
}

struct HypersurfaceCase {
  long d;
  long N;
  bool in_regime;  // dim Z >= 4, i.e. N >= 5
};

/// Fano pairs (d <= N, d >= 3) where the hypersurface threshold fails.
/// Pairs below the regime floor are listed with in_regime = false and no
/// vanishing assertion is made for them.
inline std::vector<HypersurfaceCase> hypersurface_exceptions(long max_d,
                                                             long max_n) {
  std::vector<HypersurfaceCase> out;
  for (long d = 3; d <= max_d; ++d) {
    for (long N = std::max<long>(3, d); N <= max_n; ++N) {
      if (d > N) continue;  // Fano range
      bool threshold = d * (N - 2) > 2 * N + 2;
      if (!threshold) out.push_back({d, N, N >= 5});
    }
  }
  return out;
}

/// Fano pairs (d >= 3) in regime where the threshold holds.
inline std::vector<std::pair<long, long>> hypersurface_vanishing_table(
    long max_d, long max_n) {
  std::vector<std::pair<long, long>> out;
  for (long d = 3; d <= max_d; ++d)
    for (long N = std::max<long>(5, d); N <= max_n; ++N)
      if (d <= N && hypersurface_threshold(d, N)) out.emplace_back(d, N);
  return out;
}

/// Degree tuples (R >= 2, all >= 2, nondecreasing) admitting some N in the
/// Fano regime sum d <= N <= max_n, N - R >= 4, where the threshold fails.
inline std::vector<std::vector<long>> fano_ci_exceptions(long max_n) {
  std::vector<std::vector<long>> out;
  std::vector<long> stack;
  auto value_at = [](const std::vector<long>& degrees, long N) {
    long sum = 0;
    for (long d : degrees) sum += d;
    return Rational(3 - N + static_cast<long>(degrees.size())) +
           Rational(2, degrees.front()) * Rational(N + 1 - sum);
  };
  auto visit = [&](auto&& self, long sum, long last) -> void {
    if (stack.size() >= 2) {
      long n_min = std::max<long>(sum, static_cast<long>(stack.size()) + 4);
      // the threshold value is nonincreasing in N, so check the smallest N
      if (n_min <= max_n && value_at(stack, n_min) >= 0)
        out.push_back(stack);
    }
    for (long d = last; sum + d <= max_n; ++d) {
      stack.push_back(d);
      self(self, sum + d, d);
      stack.pop_back();
    }
  };
  visit(visit, 0, 2);
  std::sort(out.begin(), out.end(),
            [](const std::vector<long>& a, const std::vector<long>& b) {
              if (a.size() != b.size()) return a.size() < b.size();
              return a < b;
            });
  return out;
}

}  // namespace effinv
