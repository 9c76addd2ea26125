#pragma once
// Exact arithmetic in Z[x] and in the group ring R = Z[C_p] = Z[x]/(x^p - 1).
//
// t = x - 1 and s = 1 + x + ... + x^{p-1} are available both as polynomials
// and as ring elements. solve_t_power_identities() builds the polynomials
// h, f, g with
//     t^{p-1} = p h + s,        p = -t^{p-1} + t^p f + s g,        h(1) = -1
// by exact division and p-1 rounds of self-substitution.

#include <string>
#include <vector>

#include "zcp/bigint.hpp"

namespace zcp {

/// Dense integer polynomial; coeffs()[i] is the coefficient of x^i. The
/// trailing coefficient is nonzero unless the polynomial is zero (empty).
class PolyZ {
 public:
  PolyZ() = default;
  explicit PolyZ(IntVec coeffs);

  static PolyZ constant(const Int& c);
  static PolyZ monomial(const Int& c, std::size_t degree);
  static PolyZ x();

  const IntVec& coeffs() const { return coeffs_; }
  bool is_zero() const { return coeffs_.empty(); }
  /// -1 for the zero polynomial.
  long degree() const { return static_cast<long>(coeffs_.size()) - 1; }
  Int coeff(std::size_t i) const { return i < coeffs_.size() ? coeffs_[i] : Int(0); }
  Int eval(const Int& at) const;

  PolyZ& operator+=(const PolyZ& o);
  PolyZ& operator-=(const PolyZ& o);
  PolyZ& operator*=(const Int& c);

  friend PolyZ operator+(PolyZ a, const PolyZ& b) { return a += b; }
  friend PolyZ operator-(PolyZ a, const PolyZ& b) { return a -= b; }
  friend PolyZ operator*(PolyZ a, const Int& c) { return a *= c; }
  friend PolyZ operator*(const Int& c, PolyZ a) { return a *= c; }
  friend PolyZ operator*(const PolyZ& a, const PolyZ& b);
  PolyZ operator-() const;

  bool operator==(const PolyZ& o) const { return coeffs_ == o.coeffs_; }

  std::string to_string(char var = 'x') const;

 private:
  void normalize();
  IntVec coeffs_;
};

PolyZ pow(const PolyZ& base, unsigned e);

/// Quotient a / d for monic d; throws InternalError if the remainder is nonzero.
PolyZ exact_div(const PolyZ& a, const PolyZ& monic);
/// a mod d for monic d.
PolyZ remainder(const PolyZ& a, const PolyZ& monic);
/// Coefficientwise a / c; throws InternalError unless c divides every coefficient.
PolyZ exact_div(const PolyZ& a, const Int& c);

PolyZ t_poly();
PolyZ s_poly(unsigned p);

/// Element of R = Z[C_p]: exactly p coefficients, coeffs()[i] multiplies alpha^i.
class RingElt {
 public:
  explicit RingElt(unsigned p);
  RingElt(unsigned p, IntVec coeffs);

  static RingElt one(unsigned p);
  static RingElt scalar(unsigned p, const Int& c);
  static RingElt alpha_pow(unsigned p, unsigned i);
  static RingElt t(unsigned p);
  static RingElt s(unsigned p);
  /// Reduce a polynomial modulo x^p - 1.
  static RingElt from_poly(unsigned p, const PolyZ& f);

  unsigned p() const { return p_; }
  const IntVec& coeffs() const { return coeffs_; }
  const Int& operator[](std::size_t i) const { return coeffs_[i]; }
  bool is_zero() const;

  RingElt& operator+=(const RingElt& o);
  RingElt& operator-=(const RingElt& o);
  RingElt& operator*=(const Int& c);
  friend RingElt operator+(RingElt a, const RingElt& b) { return a += b; }
  friend RingElt operator-(RingElt a, const RingElt& b) { return a -= b; }
  friend RingElt operator*(RingElt a, const Int& c) { return a *= c; }
  friend RingElt operator*(const Int& c, RingElt a) { return a *= c; }
  friend RingElt operator*(const RingElt& a, const RingElt& b);

  bool operator==(const RingElt& o) const { return p_ == o.p_ && coeffs_ == o.coeffs_; }

  RingElt pow(unsigned e) const;
  std::string to_string() const;

 private:
  unsigned p_;
  IntVec coeffs_;
};

/// Product in R. Throws PreconditionError on mismatched p.
RingElt ring_mul(const RingElt& a, const RingElt& b);
/// Same product computed only with GMP arithmetic (reference path).
RingElt ring_mul_reference(const RingElt& a, const RingElt& b);

/// Evaluation at alpha = 1, i.e. the sum of the coefficients.
Int augment(const RingElt& a);

/// One round of the substitution p -> (-t^{p-1} + t*beta*p + s) applied to the
/// running identity p = -t^{p-1} * lead + carry * p + s * sfactor.
struct SubstitutionRound {
  PolyZ lead;
  PolyZ carry;
  PolyZ sfactor;
};

struct TPowerIdentities {
  unsigned p = 0;
  PolyZ h;
  PolyZ f;
  PolyZ g;
  PolyZ beta;  // h = t * beta - 1
  std::vector<SubstitutionRound> rounds;  // rounds[0] is the starting state
};

/// Requires p prime (PreconditionError otherwise). Every returned identity is
/// re-verified before returning.
TPowerIdentities solve_t_power_identities(unsigned p);

/// Both polynomial identities and h(1) = -1, checked from scratch.
bool verify_t_power_identities(const TPowerIdentities& ids);

/// t^{k(p-1)} == p^k h^k + (-1)^{k-1} p^{k-1} s in R.
bool check_t_power_expansion(unsigned p, unsigned k);

}  // namespace zcp
