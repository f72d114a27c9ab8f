// Acceptance suite: one line per criterion, exact checks with time budgets.

#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "effinv/census.hpp"
#include "effinv/constraints.hpp"
#include "effinv/genus1.hpp"
#include "effinv/recursion.hpp"
#include "effinv/series.hpp"
#include "oracle_lamh.hpp"

using namespace effinv;

namespace {

struct Criterion {
  int number;
  std::string label;
  double budget_ms;
  std::function<bool(std::string&)> run;
};

TargetSpec product_ci(std::vector<int> dims,
                      std::vector<std::vector<long>> degrees) {
  TargetSpec t;
  t.ambient = AmbientSpace::projective_product(std::move(dims));
  t.bundle.summand_degrees = std::move(degrees);
  return t;
}

TargetSpec grassmann_ci() {
  TargetSpec t;
  t.ambient = AmbientSpace::abstract_space("Gr(2,7)", 10, 1, {-7});
  t.bundle.summand_degrees.assign(7, {1});
  return t;
}

bool check_counts(const TargetSpec& target, std::function<long(int)> expect,
                  std::string& note) {
  for (int g = 2; g <= 50; ++g) {
    long got = count_basic(target, g);
    if (got != expect(g)) {
      note = "genus " + std::to_string(g) + ": got " + std::to_string(got) +
             ", want " + std::to_string(expect(g));
      return false;
    }
  }
  return true;
}

MarkingData plain_marking(long contact, unsigned h = 0, unsigned df = 0) {
  MarkingData m;
  m.contact = contact;
  m.h_exp = {h};
  m.psi_df = df;
  return m;
}

}  // namespace

int main() {
  std::vector<Criterion> criteria;

  criteria.push_back({1, "quintic census counts floor((2g-2)/5)+1, g=2..50",
                      1000.0, [](std::string& note) {
                        return check_counts(
                            product_ci({4}, {{5}}),
                            [](int g) { return (2 * g - 2) / 5 + 1; }, note);
                      }});

  criteria.push_back(
      {2, "CY3 censuses (X33, X2222, X24, X223, Gr(2,7) cap 7H), g=2..50",
       5000.0, [](std::string& note) {
         return check_counts(product_ci({5}, {{3}, {3}}),
                             [](int g) { return (2 * g - 2) / 3 + 1; },
                             note) &&
                check_counts(product_ci({7}, {{2}, {2}, {2}, {2}}),
                             [](int g) { return (long)g; }, note) &&
                check_counts(product_ci({5}, {{2}, {4}}),
                             [](int g) { return (long)g; }, note) &&
                check_counts(product_ci({6}, {{2}, {2}, {3}}),
                             [](int g) { return (long)g; }, note) &&
                check_counts(grassmann_ci(),
                             [](int g) { return 2L * g - 1; }, note);
       }});

  criteria.push_back(
      {3, "hypersurface threshold table, 5<=N<=100, 3<=d<=100", 1000.0,
       [](std::string& note) {
         auto table = hypersurface_vanishing_table(100, 100);
         long expected = 0;
         for (long d = 3; d <= 100; ++d)
           for (long N = 5; N <= 100; ++N)
             if (d <= N && ((d == 3 && N >= 9) || (d == 4 && N >= 6) ||
                            (d >= 5 && N >= d)))
               ++expected;
         if ((long)table.size() != expected) {
           note = "table size " + std::to_string(table.size()) + " vs " +
                  std::to_string(expected);
           return false;
         }
         for (auto [d, N] : table) {
           bool in_list = (d == 3 && N >= 9) || (d == 4 && N >= 6) ||
                          (d >= 5 && N >= d);
           if (!in_list) {
             note = "unexpected pair (" + std::to_string(d) + "," +
                    std::to_string(N) + ")";
             return false;
           }
         }
         return true;
       }});

  criteria.push_back(
      {4, "Fano complete-intersection exception scan, sum d <= N <= 60",
       5000.0, [](std::string& note) {
         auto got = fano_ci_exceptions(60);
         std::vector<std::vector<long>> want = {
             {2, 2}, {2, 3}, {2, 4}, {2, 2, 2}, {2, 2, 3}, {2, 2, 2, 2}};
         std::sort(want.begin(), want.end(),
                   [](const std::vector<long>& a, const std::vector<long>& b) {
                     if (a.size() != b.size()) return a.size() < b.size();
                     return a < b;
                   });
         if (got != want) {
           note = "scan produced " + std::to_string(got.size()) + " tuples";
           return false;
         }
         return true;
       }});

  criteria.push_back(
      {5, "dimension-formula equivalence on 10^4 randomized inputs", 1000.0,
       [](std::string& note) {
         std::mt19937 rng(20240817);
         std::uniform_int_distribution<int> dim(1, 9), rank(1, 4), g(0, 14),
             n(0, 6), deg(-6, 6), b(0, 6), c(-5, -1);
         for (int trial = 0; trial < 10000; ++trial) {
           TargetSpec target;
           target.ambient =
               AmbientSpace::projective_product({dim(rng), dim(rng)});
           int R = rank(rng);
           for (int j = 0; j < R; ++j)
             target.bundle.summand_degrees.push_back({deg(rng), deg(rng)});
           DiscreteData data;
           data.genus = g(rng);
           data.beta = CurveClass{{b(rng), b(rng)}, b(rng)};
           int markings = n(rng);
           for (int i = 0; i < markings; ++i) data.contacts.push_back(c(rng));
           if (reduced_vdim(data, target) !=
               reduced_vdim_via_infinity(data, target)) {
             note = "disagreement at trial " + std::to_string(trial);
             return false;
           }
         }
         return true;
       }});

  criteria.push_back(
      {6, "genus-one quintic cycles and invariants against the dense oracle",
       1000.0, [](std::string& note) {
         // the oracle route first: (1+h-lam)^5/(1+5h-lam) in the dense ring
         oracle::LamH series = oracle::one_plus(5, 1, true).pow(5) *
                               oracle::one_plus(5, 5, true).inverse();
         oracle::LamH red4 = series.degree_part(4);
         // e(hodge box T) = deg-4 part of (1+h-lam)^5 / (1-lam)
         oracle::LamH one_minus_lam = oracle::LamH::constant(5, 1) -
                                      oracle::LamH::lam_times_h(5, 0, 1);
         oracle::LamH euler =
             (oracle::one_plus(5, 1, true).pow(5) * one_minus_lam.inverse())
                 .degree_part(4);
         if (red4.plain[4] != 205 || red4.lam[3] != 40) {
           note = "oracle red cycle mismatch";
           return false;
         }

         GenusOneModel m = build_genus1(product_ci({4}, {{5}}));
         GradedElement h = m.hyperplane(0);
         GradedElement lam = m.hodge;
         bool ok =
             m.red_cycle == Rational(205) * pow(h, 4) +
                                Rational(40) * (pow(h, 3) * lam) &&
             m.red_cycle.coefficient({0, 4}) == red4.plain[4] &&
             m.red_cycle.coefficient({1, 3}) == red4.lam[3] &&
             m.vir_cycle == Rational(-5) * (pow(h, 4) * lam) &&
             m.vir_cycle.coefficient({1, 4}) == -euler.plain[4] &&
             m.vir_cycle == Rational(-m.rtilde) * (m.psi_min * m.red_cycle) &&
             genus1_invariant(m, 1) == Rational(5, 24) &&
             genus1_invariant(m, 0, {h}) == Rational(5, 3);
         if (!ok) note = "model disagrees with the oracle or frozen values";
         return ok;
       }});

  criteria.push_back(
      {7, "rank-two genus-one structure (X24 data)", 2000.0,
       [](std::string& note) {
         GenusOneModel m = build_genus1(product_ci({5}, {{2}, {4}}));
         bool ok = m.dim_infinity == 6 && !m.red_cycle.is_zero() &&
                   !m.vir_cycle.is_zero() &&
                   m.red_cycle.is_homogeneous_of_degree(6) &&
                   m.vir_cycle.is_homogeneous_of_degree(7) &&
                   m.vir_cycle ==
                       Rational(-m.rtilde) * (m.psi_min * m.red_cycle);
         if (!ok) note = "structural check failed";
         return ok;
       }});

  criteria.push_back(
      {8, "double-pole series identity to order 16", 1000.0,
       [](std::string& note) {
         RingSpec formal_spec;
         formal_spec.generators = {{"a", 1, 17}, {"b", 1, 17}};
         GradedAlgebra formal(formal_spec);
         RingSpec nil_spec;
         nil_spec.generators = {{"x", 1, 3}, {"y", 1, 3}};
         GradedAlgebra nil(nil_spec);
         std::mt19937 rng(7);
         std::uniform_int_distribution<int> coeff(-4, 4);
         bool ok = verify_double_pole(formal.generator("a"),
                                      formal.generator("b"), 16);
         for (int trial = 0; trial < 25 && ok; ++trial) {
           GradedElement a =
               Rational(coeff(rng)) * nil.generator("x") +
               Rational(coeff(rng)) * nil.generator("y") +
               Rational(coeff(rng)) * (nil.generator("x") * nil.generator("y"));
           GradedElement b =
               Rational(coeff(rng)) * nil.generator("x") +
               Rational(coeff(rng)) * nil.generator("y");
           ok = verify_double_pole(a, b, 16);
         }
         if (!ok) note = "coefficient mismatch";
         return ok;
       }});

  criteria.push_back(
      {9, "minimal-pole push-forward for m = 2, 3 over (P1)^m to order 12",
       5000.0, [](std::string& note) {
         RingSpec spec;
         spec.generators = {{"x1", 1, 2}, {"x2", 1, 2}, {"x3", 1, 2}};
         GradedAlgebra base(spec);
         bool ok =
             pushforward_min_check(
                 base, {base.generator("x1"), base.generator("x2")}, 12) &&
             pushforward_min_check(base,
                                   {base.generator("x1"),
                                    base.generator("x2"),
                                    base.generator("x3")},
                                   12);
         if (!ok) note = "push-forward mismatch";
         return ok;
       }});

  criteria.push_back(
      {10, "string degenerate case and confluence on 10^3 quintic tokens",
       5000.0, [](std::string& note) {
         TargetSpec quintic = product_ci({4}, {{5}});
         // k = 0 with a bare unit marking is the empty sum
         Token degenerate;
         degenerate.genus = 2;
         degenerate.beta = CurveClass{{0}, 0};
         degenerate.markings = {plain_marking(-2), plain_marking(-2),
                                plain_marking(-1)};
         if (!reduce_to_basic(quintic, degenerate).is_zero()) {
           note = "k = 0 string case not zero";
           return false;
         }
         ReducedForm direct = reduce_to_basic(
             quintic, Token{2, CurveClass{{0}, 0}, 0,
                            {plain_marking(-2), plain_marking(-2)}});
         if (direct.basic.size() != 1 ||
             direct.basic.begin()->second != 1) {
           note = "basic token did not map to its own symbol";
           return false;
         }

         std::mt19937 rng(99);
         std::uniform_int_distribution<int> gdist(2, 6), kdist(0, 3),
             units(0, 3), coin(0, 1), deep(0, 4);
         int nonzero = 0;
         for (int trial = 0; trial < 1000; ++trial) {
           int g = gdist(rng);
           std::uniform_int_distribution<long> bdist(0, (2 * g - 2) / 5);
           long beta = bdist(rng);
           long M = 2 * g - 2 - 5 * beta;
           Token tok;
           tok.genus = g;
           tok.beta = CurveClass{{beta}, 5 * beta};
           tok.psi_power = kdist(rng);
           while (M > 0) {
             long p = deep(rng) == 0 ? std::min<long>(M, 2) : 1;
             tok.markings.push_back(plain_marking(-1 - p));
             M -= p;
           }
           int extra = units(rng);
           for (int u = 0; u < extra; ++u)
             tok.markings.push_back(coin(rng) ? plain_marking(-1, 1)
                                              : plain_marking(-1));
           ReduceOptions first, last, shuffled;
           last.unit_order = ReduceOptions::UnitOrder::Last;
           shuffled.unit_order = ReduceOptions::UnitOrder::Shuffle;
           shuffled.shuffle_seed = static_cast<unsigned>(trial);
           ReducedForm a = reduce_to_basic(quintic, tok, first);
           ReducedForm b = reduce_to_basic(quintic, tok, last);
           ReducedForm c = reduce_to_basic(quintic, tok, shuffled);
           if (a.basic != b.basic || a.basic != c.basic ||
               a.value != b.value || a.value != c.value) {
             note = "confluence broken at trial " + std::to_string(trial);
             return false;
           }
           nonzero += a.basic.empty() ? 0 : 1;
         }
         if (nonzero < 50) {
           note = "sample too degenerate: " + std::to_string(nonzero);
           return false;
         }
         return true;
       }});

  criteria.push_back(
      {11, "root rescaling round trip and ell^(1+k) factor", 1000.0,
       [](std::string& note) {
         // quintic unit data through the fifth root and back
         SectorData gw{-1, 1, 1, 0};
         auto up = lift_contacts({gw}, 5);
         auto back = push_contacts(up, 5);
         if (back[0].contact != gw.contact || back[0].order != gw.order) {
           note = "contact data round trip failed";
           return false;
         }
         for (int k = 0; k <= 6; ++k) {
           Rational symbolic(7, 3);  // stand-in for an unknown invariant
           Rational coarse =
               rescale_roots(symbolic, k, 5, RootDirection::ToCoarse);
           if (coarse != symbolic * pow_rat(Rational(5), k + 1)) {
             note = "factor mismatch at k = " + std::to_string(k);
             return false;
           }
           if (rescale_roots(coarse, k, 5, RootDirection::ToRoot) !=
               symbolic) {
             note = "round trip failed at k = " + std::to_string(k);
             return false;
           }
         }
         return true;
       }});

  criteria.push_back(
      {12, "g >= 2 basic values stay symbolic (not reproduced by design)",
       1000.0, [](std::string& note) {
         // the calculus never assigns a number to a g >= 2 basic symbol:
         // reducing one returns the symbol itself with no evaluated part
         TargetSpec quintic = product_ci({4}, {{5}});
         for (int g = 2; g <= 6; ++g) {
           for (const BasicIndex& idx : enumerate_basic(quintic, g)) {
             Token tok;
             tok.genus = idx.genus;
             tok.beta = idx.beta;
             for (long i = 0; i < idx.markings(); ++i)
               tok.markings.push_back(plain_marking(-2));
             ReducedForm form = reduce_to_basic(quintic, tok);
             BasicKey key{idx.genus, idx.beta.beta_x, idx.beta.t};
             if (form.value != 0 || form.basic.size() != 1 ||
                 form.basic.count(key) == 0 || form.basic.at(key) != 1) {
               note = "basic symbol was not preserved";
               return false;
             }
           }
         }
         return true;
       }});

  int failures = 0;
  for (const Criterion& c : criteria) {
    auto start = std::chrono::steady_clock::now();
    std::string note;
    bool ok = false;
    try {
      ok = c.run(note);
    } catch (const std::exception& e) {
      note = std::string("exception: ") + e.what();
    }
    auto stop = std::chrono::steady_clock::now();
    double ms =
        std::chrono::duration<double, std::milli>(stop - start).count();
    bool in_budget = ms <= c.budget_ms;
    bool pass = ok && in_budget;
    std::cout << "[" << (pass ? "PASS" : "FAIL") << "] criterion " << c.number
              << ": " << c.label << " (" << static_cast<long>(ms) << " ms)";
    if (!ok && !note.empty()) std::cout << " -- " << note;
    if (ok && !in_budget)
      std::cout << " -- over budget " << c.budget_ms << " ms";
    std::cout << "\n";
    failures += pass ? 0 : 1;
  }
  if (failures > 0) {
    std::cout << failures << " criterion(s) failed\n";
    return 1;
  }
  std::cout << "all criteria passed\n";
  return 0;
}
