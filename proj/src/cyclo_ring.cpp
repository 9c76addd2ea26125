#include "zcp/cyclo_ring.hpp"

#include <algorithm>
#include <sstream>

#include "zcp/error.hpp"
#include "zcp/simd/kernels.hpp"

namespace zcp {

// ---------------------------------------------------------------- PolyZ

PolyZ::PolyZ(IntVec coeffs) : coeffs_(std::move(coeffs)) { normalize(); }

void PolyZ::normalize() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

PolyZ PolyZ::constant(const Int& c) { return PolyZ(IntVec{c}); }

PolyZ PolyZ::monomial(const Int& c, std::size_t degree) {
  IntVec v(degree + 1, Int(0));
  v[degree] = c;
  return PolyZ(std::move(v));
}

PolyZ PolyZ::x() { return monomial(Int(1), 1); }

Int PolyZ::eval(const Int& at) const {
  Int acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * at + *it;
  return acc;
}

PolyZ& PolyZ::operator+=(const PolyZ& o) {
  if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), Int(0));
  for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  normalize();
  return *this;
}

PolyZ& PolyZ::operator-=(const PolyZ& o) {
  if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), Int(0));
  for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
  normalize();
  return *this;
}

PolyZ& PolyZ::operator*=(const Int& c) {
  for (auto& a : coeffs_) a *= c;
  normalize();
  return *this;
}

PolyZ operator*(const PolyZ& a, const PolyZ& b) {
  if (a.is_zero() || b.is_zero()) return {};
  IntVec out(a.coeffs_.size() + b.coeffs_.size() - 1, Int(0));
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
    if (a.coeffs_[i] == 0) continue;
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) out[i + j] += a.coeffs_[i] * b.coeffs_[j];
  }
  return PolyZ(std::move(out));
}

PolyZ PolyZ::operator-() const {
  PolyZ r = *this;
  for (auto& a : r.coeffs_) a = -a;
  return r;
}

std::string PolyZ::to_string(char var) const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (long i = degree(); i >= 0; --i) {
    const Int& c = coeffs_[static_cast<std::size_t>(i)];
    if (c == 0) continue;
    Int mag = abs(c);
    if (first) {
      if (c < 0) os << '-';
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    first = false;
    if (i == 0 || mag != 1) os << mag;
    if (i >= 1) os << var;
    if (i >= 2) os << '^' << i;
  }
  return os.str();
}

PolyZ pow(const PolyZ& base, unsigned e) {
  PolyZ result = PolyZ::constant(Int(1));
  PolyZ b = base;
  while (e) {
    if (e & 1U) result = result * b;
    e >>= 1U;
    if (e) b = b * b;
  }
  return result;
}

PolyZ exact_div(const PolyZ& a, const PolyZ& monic) {
  if (monic.is_zero() || monic.coeffs().back() != 1)
    throw PreconditionError("exact_div: divisor must be monic");
  if (a.is_zero()) return {};
  IntVec rem = a.coeffs();
  const std::size_t dd = static_cast<std::size_t>(monic.degree());
  if (rem.size() <= dd) throw InternalError("exact_div: nonzero remainder");
  IntVec q(rem.size() - dd, Int(0));
  for (std::size_t i = rem.size(); i-- > dd;) {
    const Int c = rem[i];
    if (c == 0) continue;
    q[i - dd] = c;
    for (std::size_t j = 0; j <= dd; ++j) rem[i - dd + j] -= c * monic.coeffs()[j];
  }
  for (const auto& r : rem)
    if (r != 0) throw InternalError("exact_div: nonzero remainder");
  return PolyZ(std::move(q));
}

PolyZ remainder(const PolyZ& a, const PolyZ& monic) {
  if (monic.is_zero() || monic.coeffs().back() != 1)
    throw PreconditionError("remainder: divisor must be monic");
  IntVec rem = a.coeffs();
  const std::size_t dd = static_cast<std::size_t>(monic.degree());
  for (std::size_t i = rem.size(); i-- > dd;) {
    const Int c = rem[i];
    if (c == 0) continue;
    for (std::size_t j = 0; j <= dd; ++j) rem[i - dd + j] -= c * monic.coeffs()[j];
  }
  return PolyZ(std::move(rem));
}

PolyZ exact_div(const PolyZ& a, const Int& c) {
  if (c == 0) throw PreconditionError("exact_div: division by zero");
  IntVec q = a.coeffs();
  for (auto& v : q) {
    if (!mpz_divisible_p(v.get_mpz_t(), c.get_mpz_t()))
      throw InternalError("exact_div: coefficient not divisible by " + c.get_str());
    mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), c.get_mpz_t());
  }
  return PolyZ(std::move(q));
}

PolyZ t_poly() { return PolyZ(IntVec{Int(-1), Int(1)}); }

PolyZ s_poly(unsigned p) { return PolyZ(IntVec(p, Int(1))); }

// ---------------------------------------------------------------- RingElt

RingElt::RingElt(unsigned p) : p_(p), coeffs_(p, Int(0)) {
  if (p == 0) throw PreconditionError("RingElt: p must be positive");
}

RingElt::RingElt(unsigned p, IntVec coeffs) : p_(p), coeffs_(std::move(coeffs)) {
  if (p == 0 || coeffs_.size() != p)
    throw PreconditionError("RingElt: expected exactly p coefficients");
}

RingElt RingElt::one(unsigned p) { return alpha_pow(p, 0); }

RingElt RingElt::scalar(unsigned p, const Int& c) {
  RingElt r(p);
  r.coeffs_[0] = c;
  return r;
}

RingElt RingElt::alpha_pow(unsigned p, unsigned i) {
  RingElt r(p);
  r.coeffs_[i % p] = 1;
  return r;
}

RingElt RingElt::t(unsigned p) { return alpha_pow(p, 1) - one(p); }

RingElt RingElt::s(unsigned p) { return RingElt(p, IntVec(p, Int(1))); }

RingElt RingElt::from_poly(unsigned p, const PolyZ& f) {
  RingElt r(p);
  for (std::size_t i = 0; i < f.coeffs().size(); ++i) r.coeffs_[i % p] += f.coeffs()[i];
  return r;
}

bool RingElt::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Int& c) { return c == 0; });
}

RingElt& RingElt::operator+=(const RingElt& o) {
  if (o.p_ != p_) throw PreconditionError("RingElt: mismatched p");
  for (unsigned i = 0; i < p_; ++i) coeffs_[i] += o.coeffs_[i];
  return *this;
}

RingElt& RingElt::operator-=(const RingElt& o) {
  if (o.p_ != p_) throw PreconditionError("RingElt: mismatched p");
  for (unsigned i = 0; i < p_; ++i) coeffs_[i] -= o.coeffs_[i];
  return *this;
}

RingElt& RingElt::operator*=(const Int& c) {
  for (auto& a : coeffs_) a *= c;
  return *this;
}

RingElt ring_mul_reference(const RingElt& a, const RingElt& b) {
  if (a.p() != b.p()) throw PreconditionError("ring_mul: mismatched p");
  const unsigned p = a.p();
  IntVec out(p, Int(0));
  for (unsigned i = 0; i < p; ++i) {
    if (a[i] == 0) continue;
    for (unsigned j = 0; j < p; ++j) out[(i + j) % p] += a[i] * b[j];
  }
  return RingElt(p, std::move(out));
}

namespace {

bool narrow(const IntVec& v, std::vector<std::int32_t>& out, std::uint64_t& max_abs) {
  out.resize(v.size());
  max_abs = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].fits_sint_p()) return false;
    const long x = v[i].get_si();
    out[i] = static_cast<std::int32_t>(x);
    max_abs = std::max<std::uint64_t>(max_abs, static_cast<std::uint64_t>(x < 0 ? -x : x));
  }
  return true;
}

}  // namespace

RingElt ring_mul(const RingElt& a, const RingElt& b) {
  if (a.p() != b.p()) throw PreconditionError("ring_mul: mismatched p");
  std::vector<std::int32_t> na, nb;
  std::uint64_t ma = 0, mb = 0;
  if (narrow(a.coeffs(), na, ma) && narrow(b.coeffs(), nb, mb) &&
      simd::convolution_fits(ma, mb, a.p())) {
    std::vector<std::int64_t> out(a.p());
    simd::cyclic_convolve(na, nb, out);
    IntVec coeffs;
    coeffs.reserve(out.size());
    for (auto v : out) coeffs.push_back(from_i64(v));
    return RingElt(a.p(), std::move(coeffs));
  }
  return ring_mul_reference(a, b);
}

RingElt operator*(const RingElt& a, const RingElt& b) { return ring_mul(a, b); }

RingElt RingElt::pow(unsigned e) const {
  RingElt result = one(p_);
  RingElt b = *this;
  while (e) {
    if (e & 1U) result = result * b;
    e >>= 1U;
    if (e) b = b * b;
  }
  return result;
}

std::string RingElt::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (unsigned i = 0; i < p_; ++i) {
    const Int& c = coeffs_[i];
    if (c == 0) continue;
    Int mag = abs(c);
    if (first) {
      if (c < 0) os << '-';
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    first = false;
    if (i == 0 || mag != 1) os << mag;
    if (i >= 1) os << "a";
    if (i >= 2) os << '^' << i;
  }
  return first ? "0" : os.str();
}

Int augment(const RingElt& a) {
  Int sum = 0;
  for (const auto& c : a.coeffs()) sum += c;
  return sum;
}

// ---------------------------------------------------------------- identities

TPowerIdentities solve_t_power_identities(unsigned p) {
  if (!is_prime(static_cast<long>(p))) throw PreconditionError("p must be prime");
  const Int P(p);
  const PolyZ t = t_poly();
  const PolyZ s = s_poly(p);
  const PolyZ tp = pow(t, p);

  TPowerIdentities out;
  out.p = p;
  // t^p - t s = p t h. Every middle binomial coefficient of (x-1)^p is
  // divisible by p and t s = x^p - 1 cancels the two outer terms.
  out.h = exact_div(exact_div(tp - t * s, t), P);
  if (out.h.eval(Int(1)) != -1) throw InternalError("h(1) != -1");
  out.beta = exact_div(out.h + PolyZ::constant(Int(1)), t);

  // p = -t^{p-1} * lead + carry * p + s * sfactor, starting from
  // lead = 1, carry = t beta, sfactor = 1. Each round substitutes the whole
  // right-hand side for the p inside carry * p.
  const PolyZ tbeta = t * out.beta;
  SubstitutionRound r{PolyZ::constant(Int(1)), tbeta, PolyZ::constant(Int(1))};
  out.rounds.push_back(r);
  for (unsigned round = 1; round < p; ++round) {
    r = SubstitutionRound{r.lead + r.carry, r.carry * tbeta, r.sfactor + r.carry};
    out.rounds.push_back(r);
  }
  // After p-1 rounds carry = (t beta)^p and lead - 1 is a multiple of t, so
  // -t^{p-1}(lead - 1) + carry p is divisible by t^p.
  const PolyZ tpm1 = pow(t, p - 1);
  const PolyZ rest = -(tpm1 * (r.lead - PolyZ::constant(Int(1)))) + r.carry * P;
  out.f = exact_div(rest, tp);
  out.g = r.sfactor;

  if (!verify_t_power_identities(out)) throw InternalError("identity verification failed");
  return out;
}

bool verify_t_power_identities(const TPowerIdentities& ids) {
  const unsigned p = ids.p;
  const Int P(p);
  const PolyZ t = t_poly();
  const PolyZ s = s_poly(p);
  const PolyZ tpm1 = pow(t, p - 1);
  const bool first = tpm1 == ids.h * P + s;
  const bool second = PolyZ::constant(P) == -tpm1 + pow(t, p) * ids.f + s * ids.g;
  const bool h1 = ids.h.eval(Int(1)) == -1;
  return first && second && h1;
}

bool check_t_power_expansion(unsigned p, unsigned k) {
  if (k == 0) throw PreconditionError("k must be positive");
  const TPowerIdentities ids = solve_t_power_identities(p);
  const Int P(p);
  const RingElt lhs = RingElt::t(p).pow(k * (p - 1));
  const RingElt h = RingElt::from_poly(p, ids.h);
  RingElt rhs = h.pow(k) * ipow(P, k);
  Int sign = (k % 2 == 1) ? Int(1) : Int(-1);
  rhs += RingElt::s(p) * (sign * ipow(P, k - 1));
  return lhs == rhs;
}

}  // namespace zcp
