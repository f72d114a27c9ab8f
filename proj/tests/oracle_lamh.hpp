#pragma once

// Test-only oracle: dense arithmetic in Q[lam, h]/(lam^2, h^hbound).
// Deliberately independent of effinv/ring.hpp so frozen expected values are
// produced by a second route.

#include <cassert>
#include <vector>

#include "effinv/rational.hpp"

namespace oracle {

struct LamH {
  int hbound = 5;
  std::vector<effinv::Rational> plain;  // coefficient of h^i
  std::vector<effinv::Rational> lam;    // coefficient of lam * h^i

  explicit LamH(int hb) : hbound(hb), plain(hb, 0), lam(hb, 0) {}

  static LamH constant(int hb, const effinv::Rational& c) {
    LamH out(hb);
    out.plain[0] = c;
    return out;
  }

  static LamH h_power(int hb, int p, const effinv::Rational& c = 1) {
    LamH out(hb);
    if (p < hb) out.plain[p] = c;
    return out;
  }

  static LamH lam_times_h(int hb, int p, const effinv::Rational& c = 1) {
    LamH out(hb);
    if (p < hb) out.lam[p] = c;
    return out;
  }

  LamH operator+(const LamH& o) const {
    assert(hbound == o.hbound);
    LamH out(hbound);
    for (int i = 0; i < hbound; ++i) {
      out.plain[i] = plain[i] + o.plain[i];
      out.lam[i] = lam[i] + o.lam[i];
    }
    return out;
  }

  LamH operator-() const {
    LamH out(hbound);
    for (int i = 0; i < hbound; ++i) {
      out.plain[i] = -plain[i];
      out.lam[i] = -lam[i];
    }
    return out;
  }

  LamH operator-(const LamH& o) const { return *this + (-o); }

  LamH operator*(const LamH& o) const {
    assert(hbound == o.hbound);
    LamH out(hbound);
    for (int i = 0; i < hbound; ++i) {
      for (int j = 0; i + j < hbound; ++j) {
        out.plain[i + j] += plain[i] * o.plain[j];
        out.lam[i + j] += plain[i] * o.lam[j] + lam[i] * o.plain[j];
      }
    }
    return out;
  }

  bool operator==(const LamH& o) const {
    return plain == o.plain && lam == o.lam;
  }

  bool is_zero() const {
    for (int i = 0; i < hbound; ++i)
      if (plain[i] != 0 || lam[i] != 0) return false;
    return true;
  }

  // geometric series inverse, constant term must be 1
  LamH inverse() const {
    assert(plain[0] == 1);
    LamH u = *this - constant(hbound, 1);
    LamH out = constant(hbound, 1);
    LamH p = constant(hbound, 1);
    for (int k = 1; k <= 2 * hbound + 2; ++k) {
      p = p * u;
      if (p.is_zero()) break;
      out = (k % 2 == 1) ? out - p : out + p;
    }
    return out;
  }

  LamH degree_part(int d) const {
    LamH out(hbound);
    if (d < hbound) out.plain[d] = plain[d];
    if (d >= 1 && d - 1 < hbound) out.lam[d - 1] = lam[d - 1];
    return out;
  }

  LamH pow(int n) const {
    LamH out = constant(hbound, 1);
    for (int i = 0; i < n; ++i) out = out * (*this);
    return out;
  }
};

// (1 + h - lam)^e / (1 + d*h - lam) style helpers used by the genus-one
// acceptance oracle.
inline LamH one_plus(int hb, int hcoeff, bool minus_lam) {
  LamH out = LamH::constant(hb, 1);
  out = out + LamH::h_power(hb, 1, hcoeff);
  if (minus_lam) out = out - LamH::lam_times_h(hb, 0, 1);
  return out;
}

}  // namespace oracle
