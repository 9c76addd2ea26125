#include <sstream>

#include "zcp/error.hpp"
#include "zcp/intlinalg.hpp"

namespace zcp {

Lattice::Lattice(std::size_t ambient) : ambient_(ambient), basis_(ambient, 0) {}

Lattice Lattice::from_generators(const IntMatrix& generators) {
  HnfResult h = hnf(generators, Track::None);
  Lattice l(generators.rows());
  l.basis_ = h.H.columns(0, h.rank());
  l.pivots_ = std::move(h.pivot_rows);
  return l;
}

Lattice Lattice::from_generators(std::size_t ambient, const std::vector<IntVec>& generators) {
  return from_generators(IntMatrix::from_columns(generators, ambient));
}

Lattice Lattice::full(std::size_t ambient) {
  return from_generators(IntMatrix::identity(ambient));
}

Int Lattice::index() const {
  if (!is_full_rank()) throw PreconditionError("index of a lattice that is not full rank");
  Int r = 1;
  for (std::size_t j = 0; j < rank(); ++j) r *= basis_(pivots_[j], j);
  return r;
}

std::optional<IntVec> Lattice::coordinates(const IntVec& v) const {
  if (v.size() != ambient_) throw PreconditionError("coordinates: ambient mismatch");
  IntVec w = v;
  IntVec c(rank());
  for (std::size_t j = 0; j < rank(); ++j) {
    const std::size_t r = pivots_[j];
    const Int& piv = basis_(r, j);
    if (!mpz_divisible_p(w[r].get_mpz_t(), piv.get_mpz_t())) return std::nullopt;
    c[j] = w[r] / piv;
    if (c[j] == 0) continue;
    for (std::size_t i = r; i < ambient_; ++i) w[i] -= c[j] * basis_(i, j);
  }
  for (const auto& e : w)
    if (e != 0) return std::nullopt;
  return c;
}

bool Lattice::contains(const Lattice& other) const {
  if (other.ambient_ != ambient_) return false;
  for (std::size_t j = 0; j < other.rank(); ++j)
    if (!contains(other.basis_.column(j))) return false;
  return true;
}

IntMatrix Lattice::coordinates_of(const IntMatrix& m) const {
  IntMatrix out(rank(), m.cols());
  for (std::size_t j = 0; j < m.cols(); ++j) {
    auto c = coordinates(m.column(j));
    if (!c) throw PreconditionError("vector outside lattice: " + zcp::to_string(m.column(j)));
    out.set_column(j, *c);
  }
  return out;
}

IntVec Lattice::reduce(const IntVec& v) const {
  if (v.size() != ambient_) throw PreconditionError("reduce: ambient mismatch");
  IntVec w = v;
  for (std::size_t j = 0; j < rank(); ++j) {
    const std::size_t r = pivots_[j];
    Int q = floor_div(w[r], basis_(r, j));
    if (q == 0) continue;
    for (std::size_t i = r; i < ambient_; ++i) w[i] -= q * basis_(i, j);
  }
  return w;
}

Lattice Lattice::operator+(const Lattice& o) const {
  if (o.ambient_ != ambient_) throw PreconditionError("lattice sum: ambient mismatch");
  return from_generators(IntMatrix::hstack(basis_, o.basis_));
}

Lattice Lattice::image(const IntMatrix& m) const {
  if (m.cols() != ambient_) throw PreconditionError("lattice image: shape mismatch");
  return from_generators(m * basis_);
}

Lattice Lattice::scaled(const Int& c) const { return from_generators(c * basis_); }

bool Lattice::is_primitive() const {
  SnfResult s = snf(basis_);
  for (const auto& d : s.diagonal())
    if (d != 1) return false;
  return true;
}

std::string Lattice::to_string() const {
  std::ostringstream os;
  os << "Lattice(rank " << rank() << " in Z^" << ambient_ << ", basis " << basis_.to_string() << ")";
  return os.str();
}

Lattice kernel_basis(const IntMatrix& a) {
  HnfResult h = hnf(a, Track::Transform);
  return Lattice::from_generators(h.U.columns(h.rank(), a.cols() - h.rank()));
}

Lattice lattice_intersect(const Lattice& l1, const Lattice& l2) {
  if (l1.ambient_rank() != l2.ambient_rank())
    throw PreconditionError("lattice_intersect: ambient mismatch");
  const std::size_t k1 = l1.rank();
  IntMatrix stacked = IntMatrix::hstack(l1.basis(), Int(-1) * l2.basis());
  Lattice k = kernel_basis(stacked);
  IntMatrix top(k1, k.rank());
  for (std::size_t r = 0; r < k1; ++r)
    for (std::size_t c = 0; c < k.rank(); ++c) top(r, c) = k.basis()(r, c);
  return Lattice::from_generators(l1.basis() * top);
}

GroupInvariants quotient_invariants(const Lattice& amb, const Lattice& sub) {
  if (!amb.contains(sub)) throw PreconditionError("quotient_invariants: not a sublattice");
  IntMatrix c = amb.coordinates_of(sub.basis());
  SnfResult s = snf(c);
  GroupInvariants g;
  g.factors = s.diagonal();
  g.free_rank = amb.rank() - s.rank;
  return g;
}

std::optional<IntVec> solve_membership(const Lattice& l, const IntVec& v) {
  return l.coordinates(v);
}

std::optional<IntVec> solve_integer_system(const IntMatrix& a, const IntVec& b) {
  if (b.size() != a.rows()) throw PreconditionError("solve_integer_system: shape mismatch");
  HnfResult h = hnf(a, Track::Transform);
  IntVec w = b;
  IntVec y(a.cols());
  for (std::size_t j = 0; j < h.rank(); ++j) {
    const std::size_t r = h.pivot_rows[j];
    const Int& piv = h.H(r, j);
    if (!mpz_divisible_p(w[r].get_mpz_t(), piv.get_mpz_t())) return std::nullopt;
    y[j] = w[r] / piv;
    if (y[j] == 0) continue;
    for (std::size_t i = r; i < a.rows(); ++i) w[i] -= y[j] * h.H(i, j);
  }
  for (const auto& e : w)
    if (e != 0) return std::nullopt;
  return h.U * y;
}

IntMatrix restricted_action(const Lattice& l, const IntMatrix& ambient_map) {
  if (ambient_map.rows() != l.ambient_rank() || ambient_map.cols() != l.ambient_rank())
    throw PreconditionError("restricted_action: shape mismatch");
  return l.coordinates_of(ambient_map * l.basis());
}

std::optional<IntMatrix> unimodular_completion(const IntMatrix& b) {
  const std::size_t n = b.rows(), k = b.cols();
  if (k == 0) return IntMatrix::identity(n);
  if (k > n) return std::nullopt;
  HnfResult h = hnf(b.transpose(), Track::TransformAndInverse);
  if (h.rank() != k) return std::nullopt;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      if (h.H(i, j) != (i == j ? 1 : 0)) return std::nullopt;
  IntMatrix w = h.U_inv.transpose();
  ZCP_CHECK(w.columns(0, k) == b, "unimodular completion lost the prescribed columns");
  return w;
}

IntMatrix inverse_unimodular(const IntMatrix& u) {
  if (u.rows() != u.cols()) throw PreconditionError("inverse_unimodular: not square");
  HnfResult h = hnf(u, Track::Transform);
  if (!h.H.is_identity()) throw PreconditionError("inverse_unimodular: matrix is not unimodular");
  return h.U;
}

}  // namespace zcp
