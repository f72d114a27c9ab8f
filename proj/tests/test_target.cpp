#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <sstream>

#include "effinv/target.hpp"
#include "effinv/target_json.hpp"

using namespace effinv;

namespace {

TargetSpec quintic_target() {
  TargetSpec t;
  t.ambient = AmbientSpace::projective_product({4}, "P4");
  t.bundle.summand_degrees = {{5}};
  t.spin_degree = {0};
  t.validate();
  return t;
}

TargetSpec x33_target() {
  TargetSpec t;
  t.ambient = AmbientSpace::projective_product({5});
  t.bundle.summand_degrees = {{3}, {3}};
  t.validate();
  return t;
}

}  // namespace

TEST_CASE("infinity_data dimensions and canonical pairing") {
  SECTION("quintic") {
    InfinityData info = infinity_data(quintic_target());
    CHECK(info.dim_infinity == 4);
    CHECK(info.kx_det_coeffs == std::vector<long>{0});  // K_X (x) det E = O
    CHECK(info.k_pairing({{2}, 10}) == -10);
  }
  SECTION("X_{3,3}") {
    InfinityData info = infinity_data(x33_target());
    CHECK(info.dim_infinity == 6);
    CHECK(info.kx_det_coeffs == std::vector<long>{0});
  }
  SECTION("rank one keeps the ambient dimension") {
    TargetSpec t = quintic_target();
    CHECK(t.dim_infinity() == t.ambient.dim);
  }
}

TEST_CASE("normalize_target") {
  SECTION("already normalized") {
    NormalizedRoot n = normalize_target(1, 1, 1);
    CHECK(n.r_hat == 1);
    CHECK(n.d_hat == 1);
    CHECK(n.a == 1);
    CHECK(n.b == 0);
  }
  SECTION("fifth root of the untwisted target") {
    NormalizedRoot n = normalize_target(1, 1, 5);
    CHECK(n.r_hat == 5);
    CHECK(n.d_hat == 1);
    CHECK(n.a == 0);
    CHECK(n.b == 1);
  }
  SECTION("r = d = 5") {
    NormalizedRoot n = normalize_target(5, 5, 1);
    CHECK(n.r_hat == 5);
    CHECK(n.d_hat == 5);
    CHECK(n.a == 1);
    CHECK(n.b == 0);
  }
  SECTION("bezout identity holds on random inputs") {
    std::mt19937 rng(3);
    std::uniform_int_distribution<long> small(1, 12);
    for (int trial = 0; trial < 200; ++trial) {
      long r = small(rng), d = small(rng), ell = small(rng);
      NormalizedRoot n = normalize_target(r, d, ell);
      // a*ell + b*d = r*ell/r_hat, and d_hat/r_hat = d/(r*ell)
      CHECK((r * ell) % n.r_hat == 0);
      CHECK(n.a * ell + n.b * d == r * ell / n.r_hat);
      CHECK(Rational(n.d_hat, n.r_hat) == Rational(d, r * ell));
      CHECK(n.r_hat % r == 0);
    }
  }
}

TEST_CASE("lift and push contacts") {
  SECTION("lift through a fifth root") {
    SectorData down{-1, 1, 1, 0};
    auto up = lift_contacts({down}, 5);
    REQUIRE(up.size() == 1);
    CHECK(up[0].contact == -1);
    CHECK(up[0].order == 5);
    CHECK(up[0].base_order == 1);
    CHECK(up[0].age == Rational(4, 5));  // {-1/5}
  }
  SECTION("ell divides the contact") {
    SectorData down{-5, 1, 1, 0};
    auto up = lift_contacts({down}, 5);
    CHECK(up[0].contact == -1);
    CHECK(up[0].order == 1);  // rho = 1
  }
  SECTION("ell = 1 is the identity") {
    SectorData down{-3, 2, 2, frac(Rational(-3, 2))};
    auto up = lift_contacts({down}, 1);
    CHECK(up[0].contact == -3);
    CHECK(up[0].order == 2);
    auto back = push_contacts(up, 1);
    CHECK(back[0] == down);
  }
  SECTION("push with rho = 5") {
    SectorData up{-1, 5, 1, 0};
    auto down = push_contacts({up}, 5);
    CHECK(down[0].contact == -1);
    CHECK(down[0].order == 1);
    SectorData up2{-2, 5, 1, 0};
    CHECK(push_contacts({up2}, 5)[0].contact == -2);
  }
  SECTION("zero contact is invalid") {
    CHECK_THROWS_AS(lift_contacts({SectorData{0, 1, 1, 0}}, 5),
                    InvalidDataError);
  }
  SECTION("divisibility violation") {
    SectorData up{-1, 4, 1, 0};  // rho = 4 does not divide ell = 6
    CHECK_THROWS_AS(push_contacts({up}, 6), InvalidDataError);
  }
  SECTION("push after lift is the identity, ages in [0,1)") {
    std::mt19937 rng(8);
    std::uniform_int_distribution<long> cdist(-9, -1);
    std::uniform_int_distribution<long> rdist(1, 4);
    std::uniform_int_distribution<long> ldist(1, 9);
    for (int trial = 0; trial < 300; ++trial) {
      SectorData down{cdist(rng), rdist(rng), rdist(rng), 0};
      down.base_order = down.order;
      down.age = frac(Rational(down.contact, down.order));
      long ell = ldist(rng);
      auto up = lift_contacts({down}, ell);
      CHECK(up[0].age >= 0);
      CHECK(up[0].age < 1);
      CHECK(up[0].age == frac(Rational(up[0].contact, up[0].order)));
      auto back = push_contacts(up, ell);
      CHECK(back[0].contact == down.contact);
      CHECK(back[0].order == down.order);
    }
  }
}

TEST_CASE("unit sector") {
  SECTION("untwisted complete intersection") {
    UnitSector u = unit_sector(quintic_target());
    CHECK(u.contact == -1);
    CHECK(u.spin_age == 0);  // {1/1}
  }
  SECTION("r = 5") {
    TargetSpec t = quintic_target();
    t.r = 5;
    UnitSector u = unit_sector(t);
    CHECK(u.contact == -1);
    CHECK(u.spin_age == Rational(1, 5));
  }
  SECTION("normalize first when ell > 1") {
    TargetSpec t = quintic_target();
    t.ell = 5;
    CHECK_THROWS_AS(unit_sector(t), OutOfRegimeError);
    NormalizedRoot n = normalize_target(t.r, t.d, t.ell);
    TargetSpec hat = t;
    hat.r = n.r_hat;
    hat.d = n.d_hat;
    hat.ell = 1;
    UnitSector u = unit_sector(hat);
    CHECK(u.contact == -1);  // -d_hat
    CHECK(u.spin_age == Rational(1, 5));
  }
}

TEST_CASE("LG/CY pair: unit data round trip under ell = 5") {
  // Gromov-Witten side unit: contact -1 on the untwisted boundary.
  SectorData gw_unit{-1, 1, 1, 0};
  auto lifted = lift_contacts({gw_unit}, 5);
  // The lifted datum matches the unit sector of the normalized (FJRW) side.
  NormalizedRoot n = normalize_target(1, 1, 5);
  TargetSpec fjrw = quintic_target();
  fjrw.r = n.r_hat;
  fjrw.d = n.d_hat;
  UnitSector u = unit_sector(fjrw);
  CHECK(lifted[0].contact == u.contact);
  CHECK(lifted[0].order == n.r_hat);
  auto back = push_contacts(lifted, 5);
  CHECK(back[0].contact == gw_unit.contact);
  CHECK(back[0].order == gw_unit.order);
}

TEST_CASE("discrete data invariants") {
  DiscreteData data;
  data.genus = 2;
  data.beta = CurveClass{{0}, 0};
  data.contacts = {-2, -2};
  CHECK(data.all_contacts_negative());
  CHECK(data.contact_sum_plus_one() == -2);
  auto ages = data.ages();
  CHECK(ages[0] == 0);  // {-2/1}
  data.orders = {3, 1};
  CHECK(data.ages()[0] == Rational(1, 3));  // {-2/3}
}

TEST_CASE("target JSON round trip") {
  std::string doc = R"({
    "ambient": {"kind": "projective_product", "dims": [4], "name": "P4"},
    "bundle": {"degrees": [[5]]},
    "spin": [0],
    "r": 1, "d": 1, "ell": 1
  })";
  std::istringstream in(doc);
  TargetSpec t = load_target(in, "<test>");
  CHECK(t.ambient.dim == 4);
  CHECK(t.bundle.rank() == 1);
  CHECK(t.rtilde_int() == 1);

  std::string abs = R"json({
    "ambient": {"kind": "abstract", "name": "Gr(2,7)", "dim": 10,
                "curve_rank": 1, "canonical": [-7]},
    "bundle": {"degrees": [[1],[1],[1],[1],[1],[1],[1]]}
  })json";
  std::istringstream in2(abs);
  TargetSpec g = load_target(in2, "<test>");
  CHECK(g.ambient.dim == 10);
  CHECK(g.bundle.rank() == 7);
  CHECK_FALSE(g.ambient.chow_supported);

  std::istringstream bad("{\"ambient\": {\"kind\": \"weird\"}}");
  CHECK_THROWS_AS(load_target(bad, "<test>"), ParseError);
  std::istringstream junk("not json");
  CHECK_THROWS_AS(load_target(junk, "<test>"), ParseError);
}

TEST_CASE("rtilde integrality") {
  TargetSpec t = quintic_target();
  t.r = 2;
  t.d = 3;
  t.ell = 1;
  CHECK(t.rtilde() == Rational(2, 3));
  CHECK_THROWS_AS(t.rtilde_int(), InvalidDataError);
  t.ell = 3;
  CHECK(t.rtilde_int() == 2);
}
