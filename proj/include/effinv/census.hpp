#pragma once

#include <vector>

#include "effinv/constraints.hpp"
#include "effinv/target.hpp"

namespace effinv {

/// Index of a basic effective invariant: genus, curve class, and the derived
/// number of contact -2 markings.
struct BasicIndex {
  int genus;
  CurveClass beta;
  bool fiber_dominating_range = false;

  long log_degree() const { return beta.t; }
  long markings() const { return 2 * genus - 2 - beta.t; }

  friend bool operator==(const BasicIndex& a, const BasicIndex& b) {
    return a.genus == b.genus && a.beta.beta_x == b.beta.beta_x &&
           a.beta.t == b.beta.t;
  }
};

/// All basic indices for the target in the given genus: classes with
/// vanishing reduced dimension, log degree at most 2g-2 (equal when the
/// bundle has rank at least two), and effective fiber coordinate.
inline std::vector<BasicIndex> enumerate_basic(const TargetSpec& target,
                                               int genus) {
  if (genus < 2) throw InvalidDataError("basic invariants need genus >= 2");
  target.validate();
  int rank = target.bundle.rank();
  int k = target.ambient.curve_rank;
  std::vector<long> min_twists(k);
  for (int i = 0; i < k; ++i) {
    min_twists[i] = target.bundle.min_twist(i);
    if (min_twists[i] < 1)
      throw InvalidDataError("enumeration needs an ample bundle");
  }
  long budget = 2 * genus - 2;
  long dim_factor = 3 - target.ambient.dim + rank;

  bool equal_rows = true;
  for (const auto& row : target.bundle.summand_degrees)
    if (row != target.bundle.summand_degrees.front()) equal_rows = false;

  std::vector<BasicIndex> out;
  std::vector<long> beta_x(k, 0);
  auto visit = [&](auto&& self, int coord, long spent) -> void {
    if (coord == k) {
      if (dim_factor * (genus - 1) != target.kx_det_pairing(beta_x)) return;
      BasicIndex idx;
      idx.genus = genus;
      if (rank == 1) {
        idx.beta = CurveClass{beta_x, spent};
      } else {
        idx.beta = CurveClass{beta_x, budget};
        // classes in this window force components dominating bundle fibers
        idx.fiber_dominating_range =
            !equal_rows && 2 * spent > budget && spent < budget;
      }
      out.push_back(idx);
      return;
    }
    for (long b = 0; spent + b * min_twists[coord] <= budget; ++b) {
      beta_x[coord] = b;
      self(self, coord + 1, spent + b * min_twists[coord]);
    }
    beta_x[coord] = 0;
  };
  visit(visit, 0, 0);
  return out;
}

inline long count_basic(const TargetSpec& target, int genus) {
  return static_cast<long>(enumerate_basic(target, genus).size());
}

}  // namespace effinv
