#pragma once
// Exact integer linear algebra: dense GMP matrices, Hermite and Smith normal
// forms with transformation matrices, integer kernels, and lattices stored in
// canonical column Hermite normal form.
//
// Column HNF convention used throughout (H = A * U, U unimodular):
//   * the first rank() columns are nonzero, the rest are zero;
//   * column j has its pivot (first nonzero entry, reading top-down) in row
//     pivot_rows[j], and pivot_rows is strictly increasing;
//   * pivots are positive;
//   * in a pivot row, entries to the left of the pivot lie in [0, pivot).
// The pivot search scans rows top to bottom and folds columns left to right
// with extended gcds, so the output is a deterministic function of A.

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

#include "zcp/bigint.hpp"

namespace zcp {

class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols);

  static IntMatrix identity(std::size_t n);
  static IntMatrix from_rows(std::initializer_list<std::initializer_list<long>> rows);
  static IntMatrix from_row_vectors(const std::vector<IntVec>& rows, std::size_t cols);
  static IntMatrix from_columns(const std::vector<IntVec>& cols, std::size_t rows);
  static IntMatrix hstack(const IntMatrix& a, const IntMatrix& b);
  static IntMatrix vstack(const IntMatrix& a, const IntMatrix& b);
  static IntMatrix block_diag(const IntMatrix& a, const IntMatrix& b);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Int& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Int& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  IntVec column(std::size_t c) const;
  IntVec row(std::size_t r) const;
  void set_column(std::size_t c, const IntVec& v);
  IntMatrix columns(std::size_t first, std::size_t count) const;
  IntMatrix transpose() const;

  bool is_zero() const;
  bool is_identity() const;
  bool operator==(const IntMatrix& o) const = default;

  IntMatrix& operator+=(const IntMatrix& o);
  IntMatrix& operator-=(const IntMatrix& o);
  friend IntMatrix operator+(IntMatrix a, const IntMatrix& b) { return a += b; }
  friend IntMatrix operator-(IntMatrix a, const IntMatrix& b) { return a -= b; }
  friend IntMatrix operator*(const Int& c, IntMatrix a);

  std::string to_string() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Int> data_;
};

/// Product with an int32/AVX2 fast path when all entries are small enough;
/// otherwise pure GMP. Both paths are exact.
IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
IntVec operator*(const IntMatrix& a, const IntVec& v);
IntMatrix multiply_reference(const IntMatrix& a, const IntMatrix& b);

IntMatrix matrix_pow(const IntMatrix& a, unsigned e);

/// Fraction-free (Bareiss) determinant of a square matrix.
Int det(const IntMatrix& a);
std::size_t rank(const IntMatrix& a);

enum class Track { None, Transform, TransformAndInverse };

struct HnfResult {
  IntMatrix H;
  IntMatrix U;      // H = A * U (empty unless tracked)
  IntMatrix U_inv;  // U * U_inv = I (empty unless tracked)
  std::vector<std::size_t> pivot_rows;
  std::size_t rank() const { return pivot_rows.size(); }
};

HnfResult hnf(const IntMatrix& a, Track track = Track::Transform);

/// U * A * V = S with U, V unimodular and S diagonal, d_1 | d_2 | ... | d_r,
/// d_i > 0. The pivot is always the first entry of least nonzero magnitude in
/// row-major order of the active block.
struct SnfResult {
  IntMatrix U;
  IntMatrix S;
  IntMatrix V;
  IntMatrix U_inv;  // only with track_inverses
  IntMatrix V_inv;
  std::size_t rank = 0;
  IntVec diagonal() const;
};

SnfResult snf(const IntMatrix& a, bool track_inverses = false);

/// Invariant factors of a finitely generated abelian group Z^f + sum Z/d_i.
/// `factors` keeps the full divisibility chain, ones included; display code
/// filters the ones.
struct GroupInvariants {
  IntVec factors;
  std::size_t free_rank = 0;
  IntVec nontrivial() const;
  bool is_zero() const { return nontrivial().empty() && free_rank == 0; }
  bool same_group(const GroupInvariants& o) const {
    return nontrivial() == o.nontrivial() && free_rank == o.free_rank;
  }
  std::string to_string() const;
};

/// Z^rows / (column span of a).
GroupInvariants cokernel_invariants(const IntMatrix& a);

/// A sublattice of Z^ambient stored by its canonical column-HNF basis.
class Lattice {
 public:
  explicit Lattice(std::size_t ambient = 0);

  static Lattice from_generators(const IntMatrix& generators);
  static Lattice from_generators(std::size_t ambient, const std::vector<IntVec>& generators);
  static Lattice full(std::size_t ambient);

  std::size_t ambient_rank() const { return ambient_; }
  std::size_t rank() const { return basis_.cols(); }
  const IntMatrix& basis() const { return basis_; }
  const std::vector<std::size_t>& pivot_rows() const { return pivots_; }
  bool is_full_rank() const { return rank() == ambient_; }
  /// Index [Z^n : L] for full-rank lattices (product of pivots).
  Int index() const;

  /// Coordinates c with basis * c = v, or nullopt when v is not in the lattice.
  std::optional<IntVec> coordinates(const IntVec& v) const;
  bool contains(const IntVec& v) const { return coordinates(v).has_value(); }
  bool contains(const Lattice& other) const;
  /// Coordinates of every column of m; throws PreconditionError if one is outside.
  IntMatrix coordinates_of(const IntMatrix& m) const;

  /// Canonical coset representative of v modulo this lattice.
  IntVec reduce(const IntVec& v) const;

  /// Sum of two lattices.
  Lattice operator+(const Lattice& o) const;
  /// m * L as a lattice in Z^{m.rows()}.
  Lattice image(const IntMatrix& m) const;
  /// c * L.
  Lattice scaled(const Int& c) const;

  /// True when L = (L tensor Q) intersect Z^n.
  bool is_primitive() const;

  bool operator==(const Lattice& o) const {
    return ambient_ == o.ambient_ && basis_ == o.basis_;
  }

  std::string to_string() const;

 private:
  std::size_t ambient_ = 0;
  IntMatrix basis_;
  std::vector<std::size_t> pivots_;
};

/// Z-basis of {x : a x = 0}.
Lattice kernel_basis(const IntMatrix& a);

/// Throws PreconditionError on ambient mismatch.
Lattice lattice_intersect(const Lattice& l1, const Lattice& l2);

/// Invariants of amb / sub. Throws PreconditionError unless sub is contained in amb.
GroupInvariants quotient_invariants(const Lattice& amb, const Lattice& sub);

std::optional<IntVec> solve_membership(const Lattice& l, const IntVec& v);

/// Some integer x with a x = b, or nullopt if none exists.
std::optional<IntVec> solve_integer_system(const IntMatrix& a, const IntVec& b);

/// Matrix of an ambient linear map restricted to an invariant lattice, in the
/// lattice's basis coordinates. Throws PreconditionError if not invariant.
IntMatrix restricted_action(const Lattice& l, const IntMatrix& ambient_map);

/// Unimodular W whose leading columns are b. Requires b's columns to be
/// independent and primitive; returns nullopt otherwise.
std::optional<IntMatrix> unimodular_completion(const IntMatrix& b);

/// Inverse of a unimodular matrix; throws PreconditionError if det != +-1.
IntMatrix inverse_unimodular(const IntMatrix& u);

}  // namespace zcp
