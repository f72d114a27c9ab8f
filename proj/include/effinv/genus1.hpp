#pragma once

#include <string>
#include <vector>

#include "effinv/constraints.hpp"
#include "effinv/ring.hpp"
#include "effinv/target.hpp"

namespace effinv {

/// Closed-form genus-one model: the moduli is a product of the one-pointed
/// genus-one curve stack with the boundary, so every class lives in one
/// graded ring generated by the hodge class, the ambient hyperplanes, and
/// (for rank at least two) the bundle class.
struct GenusOneModel {
  GradedAlgebra ring;
  GradedElement hodge;      // lam
  GradedElement log_class;  // c_1 of the log line bundle
  GradedElement psi_min;    // lam - log_class
  GradedElement red_cycle;  // codimension dim_infinity
  GradedElement vir_cycle;  // codimension dim_infinity + 1
  long rtilde = 1;
  int dim_infinity = 0;

  GradedElement hyperplane(int i) const {
    return ring.generator("h" + std::to_string(i + 1));
  }
};

/// Builds the genus-one model for a complete-intersection target over a
/// product of projective spaces.  The boundary tangent bundle is assembled
/// from the ambient and relative Euler sequences; for rank one the bundle
/// class is eliminated.
inline GenusOneModel build_genus1(const TargetSpec& target,
                                  const Rational& normalization = Rational(1,
                                                                           24)) {
  target.validate();
  if (!target.ambient.chow_supported)
    throw OutOfRegimeError("genus-one model needs a chow-supported ambient");
  if (!target.bundle.is_ample())
    throw InvalidDataError("genus-one model needs an ample bundle");
  long rtilde = target.rtilde_int();

  int k = target.ambient.curve_rank;
  int rank = target.bundle.rank();

  RingSpec base_spec;
  base_spec.generators.push_back({"lam", 1, 2});
  for (int i = 0; i < k; ++i)
    base_spec.generators.push_back(
        {"h" + std::to_string(i + 1),
         1, static_cast<unsigned>(target.ambient.projective_dims[i]) + 1});
  base_spec.hodge = true;
  base_spec.hodge_normalization = normalization;
  GradedAlgebra base(base_spec);

  auto base_summand = [&](const std::vector<long>& degrees) {
    GradedElement out = base.zero();
    for (int i = 0; i < k; ++i)
      out = out +
            Rational(degrees[i]) * base.generator("h" + std::to_string(i + 1));
    return out;
  };

  GenusOneModel model = [&]() -> GenusOneModel {
    if (rank >= 2) {
      std::vector<GradedElement> duals;
      for (const auto& row : target.bundle.summand_degrees) {
        std::vector<long> neg(row.size());
        for (std::size_t i = 0; i < row.size(); ++i) neg[i] = -row[i];
        duals.push_back(base_summand(neg));
      }
      GradedAlgebra total(projective_bundle_spec(base, duals));
      GenusOneModel m{total,        total.zero(), total.zero(), total.zero(),
                      total.zero(), total.zero(), rtilde,       0};
      m.log_class = total.generator("zeta");
      return m;
    }
    // rank one: the bundle class is eliminated, the log bundle is the
    // single summand pulled back from the ambient space
    GenusOneModel m{base,        base.zero(), base.zero(), base.zero(),
                    base.zero(), base.zero(), rtilde,      0};
    m.log_class = base_summand(target.bundle.summand_degrees.front());
    return m;
  }();

  const GradedAlgebra& ring = model.ring;
  model.hodge = ring.generator("lam");
  model.dim_infinity = target.dim_infinity();
  model.psi_min = model.hodge - model.log_class;

  // boundary tangent bundle in K-theory via the Euler sequences
  std::vector<GradedElement> tangent_num;
  std::vector<GradedElement> tangent_den;
  for (int i = 0; i < k; ++i) {
    GradedElement h = ring.generator("h" + std::to_string(i + 1));
    for (int c = 0; c <= target.ambient.projective_dims[i]; ++c)
      tangent_num.push_back(h);
    tangent_den.push_back(ring.zero());
  }
  if (rank >= 2) {
    GradedElement zeta = ring.generator("zeta");
    for (const auto& row : target.bundle.summand_degrees) {
      GradedElement cls = zeta;
      for (int i = 0; i < k; ++i)
        cls = cls - Rational(row[i]) * ring.generator("h" + std::to_string(i + 1));
      tangent_num.push_back(cls);
    }
    tangent_den.push_back(ring.zero());
  }

  GradedElement twist = -model.hodge;
  GradedElement tangent_chern =
      ring.chern_kclass(tangent_num, tangent_den, twist);

  // reduced cycle: fixed-dimension part of c(T - O_log + O), all twisted
  std::vector<GradedElement> red_num = tangent_num;
  red_num.push_back(ring.zero());
  std::vector<GradedElement> red_den = tangent_den;
  red_den.push_back(model.log_class);
  GradedElement red_series = ring.chern_kclass(red_num, red_den, twist);
  model.red_cycle =
      red_series.degree_part(static_cast<unsigned>(model.dim_infinity));

  // canonical cycle: c_1 of the dual hodge bundle times the twisted euler
  // class of the boundary tangent bundle
  model.vir_cycle =
      -model.hodge *
      tangent_chern.degree_part(static_cast<unsigned>(model.dim_infinity));
  return model;
}

/// deg(psi_min^k . prod insertions . red_cycle); off-dimension products
/// integrate to zero.
inline Rational genus1_invariant(const GenusOneModel& model, int psi_power,
                                 const std::vector<GradedElement>& insertions = {}) {
  GradedElement cls = model.red_cycle;
  for (int i = 0; i < psi_power; ++i) cls = cls * model.psi_min;
  for (const GradedElement& a : insertions) cls = cls * a;
  return model.ring.integrate(cls);
}

/// Genus-zero moduli are empty over a nef log bundle.
inline Vanishing genus0_status(const TargetSpec& target,
                               const DiscreteData& data) {
  if (data.genus != 0)
    throw InvalidDataError("genus0_status expects genus zero data");
  return target.bundle.is_nef() ? Vanishing::Vanishes : Vanishing::Unknown;
}

}  // namespace effinv
