#include <algorithm>
#include <cstdint>
#include <sstream>

#include "zcp/error.hpp"
#include "zcp/intlinalg.hpp"
#include "zcp/simd/kernels.hpp"

namespace zcp {

IntMatrix::IntMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::from_rows(std::initializer_list<std::initializer_list<long>> rows) {
  std::size_t nc = rows.size() ? rows.begin()->size() : 0;
  IntMatrix m(rows.size(), nc);
  std::size_t r = 0;
  for (const auto& row : rows) {
    if (row.size() != nc) throw PreconditionError("ragged matrix literal");
    std::size_t c = 0;
    for (long v : row) m(r, c++) = v;
    ++r;
  }
  return m;
}

IntMatrix IntMatrix::from_row_vectors(const std::vector<IntVec>& rows, std::size_t cols) {
  IntMatrix m(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) throw PreconditionError("row length mismatch");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = rows[r][c];
  }
  return m;
}

IntMatrix IntMatrix::from_columns(const std::vector<IntVec>& cols, std::size_t rows) {
  IntMatrix m(rows, cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c) m.set_column(c, cols[c]);
  return m;
}

IntMatrix IntMatrix::hstack(const IntMatrix& a, const IntMatrix& b) {
  if (a.rows() != b.rows()) throw PreconditionError("hstack: row mismatch");
  IntMatrix m(a.rows(), a.cols() + b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) m(r, c) = a(r, c);
    for (std::size_t c = 0; c < b.cols(); ++c) m(r, a.cols() + c) = b(r, c);
  }
  return m;
}

IntMatrix IntMatrix::vstack(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols() != b.cols()) throw PreconditionError("vstack: column mismatch");
  IntMatrix m(a.rows() + b.rows(), a.cols());
  for (std::size_t c = 0; c < a.cols(); ++c) {
    for (std::size_t r = 0; r < a.rows(); ++r) m(r, c) = a(r, c);
    for (std::size_t r = 0; r < b.rows(); ++r) m(a.rows() + r, c) = b(r, c);
  }
  return m;
}

IntMatrix IntMatrix::block_diag(const IntMatrix& a, const IntMatrix& b) {
  IntMatrix m(a.rows() + b.rows(), a.cols() + b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) m(r, c) = a(r, c);
  for (std::size_t r = 0; r < b.rows(); ++r)
    for (std::size_t c = 0; c < b.cols(); ++c) m(a.rows() + r, a.cols() + c) = b(r, c);
  return m;
}

IntVec IntMatrix::column(std::size_t c) const {
  IntVec v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
  return v;
}

IntVec IntMatrix::row(std::size_t r) const {
  return IntVec(data_.begin() + r * cols_, data_.begin() + (r + 1) * cols_);
}

void IntMatrix::set_column(std::size_t c, const IntVec& v) {
  if (v.size() != rows_) throw PreconditionError("set_column: length mismatch");
  for (std::size_t r = 0; r < rows_; ++r) (*this)(r, c) = v[r];
}

IntMatrix IntMatrix::columns(std::size_t first, std::size_t count) const {
  IntMatrix m(rows_, count);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < count; ++c) m(r, c) = (*this)(r, first + c);
  return m;
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix m(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) m(c, r) = (*this)(r, c);
  return m;
}

bool IntMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const Int& v) { return v == 0; });
}

bool IntMatrix::is_identity() const {
  if (rows_ != cols_) return false;
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c)
      if ((*this)(r, c) != (r == c ? 1 : 0)) return false;
  return true;
}

IntMatrix& IntMatrix::operator+=(const IntMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw PreconditionError("matrix add: shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

IntMatrix& IntMatrix::operator-=(const IntMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw PreconditionError("matrix sub: shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

IntMatrix operator*(const Int& c, IntMatrix a) {
  for (auto& v : a.data_) v *= c;
  return a;
}

std::string IntMatrix::to_string() const {
  std::ostringstream os;
  os << "[";
  for (std::size_t r = 0; r < rows_; ++r) {
    if (r) os << "; ";
    for (std::size_t c = 0; c < cols_; ++c) {
      if (c) os << " ";
      os << (*this)(r, c).get_str();
    }
  }
  os << "]";
  return os.str();
}

IntMatrix multiply_reference(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols() != b.rows()) throw PreconditionError("matrix multiply: shape mismatch");
  IntMatrix m(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Int& aik = a(i, k);
      if (aik == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) m(i, j) += aik * b(k, j);
    }
  return m;
}

namespace {

// Largest |entry| if every entry fits int32, else nullopt.
std::optional<std::uint64_t> small_bound(const IntMatrix& m) {
  std::uint64_t best = 0;
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) {
      const Int& v = m(r, c);
      if (!v.fits_sint_p()) return std::nullopt;
      long x = v.get_si();
      if (x < INT32_MIN + 1 || x > INT32_MAX) return std::nullopt;
      best = std::max<std::uint64_t>(best, static_cast<std::uint64_t>(x < 0 ? -x : x));
    }
  return best;
}

}  // namespace

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols() != b.rows()) throw PreconditionError("matrix multiply: shape mismatch");
  auto ba = small_bound(a);
  auto bb = small_bound(b);
  if (!ba || !bb || a.cols() == 0 || !simd::convolution_fits(*ba, *bb, a.cols()))
    return multiply_reference(a, b);
  const std::size_t n = a.cols();
  std::vector<std::int32_t> arows(a.rows() * n), bcols(b.cols() * n);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < n; ++k) arows[i * n + k] = static_cast<std::int32_t>(a(i, k).get_si());
  for (std::size_t j = 0; j < b.cols(); ++j)
    for (std::size_t k = 0; k < n; ++k) bcols[j * n + k] = static_cast<std::int32_t>(b(k, j).get_si());
  IntMatrix m(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    std::span<const std::int32_t> ra(arows.data() + i * n, n);
    for (std::size_t j = 0; j < b.cols(); ++j) {
      std::span<const std::int32_t> cb(bcols.data() + j * n, n);
      m(i, j) = from_i64(simd::dot(ra, cb));
    }
  }
  return m;
}

IntVec operator*(const IntMatrix& a, const IntVec& v) {
  if (a.cols() != v.size()) throw PreconditionError("matrix-vector: shape mismatch");
  IntVec out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k)
      if (v[k] != 0) out[i] += a(i, k) * v[k];
  return out;
}

IntMatrix matrix_pow(const IntMatrix& a, unsigned e) {
  if (a.rows() != a.cols()) throw PreconditionError("matrix_pow: not square");
  IntMatrix r = IntMatrix::identity(a.rows());
  IntMatrix b = a;
  while (e) {
    if (e & 1u) r = r * b;
    e >>= 1;
    if (e) b = b * b;
  }
  return r;
}

Int det(const IntMatrix& a) {
  if (a.rows() != a.cols()) throw PreconditionError("det: not square");
  const std::size_t n = a.rows();
  if (n == 0) return 1;
  IntMatrix m = a;
  Int prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m(k, k) == 0) {
      std::size_t swap = k + 1;
      while (swap < n && m(swap, k) == 0) ++swap;
      if (swap == n) return 0;
      for (std::size_t c = 0; c < n; ++c) std::swap(m(k, c), m(swap, c));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        Int v = m(i, j) * m(k, k) - m(i, k) * m(k, j);
        mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
        m(i, j) = v;
      }
      m(i, k) = 0;
    }
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

std::size_t rank(const IntMatrix& a) { return hnf(a, Track::None).rank(); }

}  // namespace zcp
