#include <sstream>

#include "zcp/error.hpp"
#include "zcp/intlinalg.hpp"

namespace zcp {

namespace {

using Cols = std::vector<IntVec>;

// u += q v
void axpy(IntVec& u, const IntVec& v, const Int& q) {
  for (std::size_t i = 0; i < u.size(); ++i)
    if (v[i] != 0) u[i] += q * v[i];
}

// Nearest-integer quotient.
Int round_div(const Int& a, const Int& b) {
  Int q, r;
  mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  if (2 * abs(r) > abs(b)) ++q;  // remainder carries the sign of b
  return q;
}

void negate(IntVec& u) {
  for (auto& e : u) e = -e;
}

Cols columns_of(const IntMatrix& a) {
  Cols c(a.cols());
  for (std::size_t j = 0; j < a.cols(); ++j) c[j] = a.column(j);
  return c;
}

Cols identity_vectors(std::size_t n) {
  Cols c(n, IntVec(n));
  for (std::size_t i = 0; i < n; ++i) c[i][i] = 1;
  return c;
}

}  // namespace

HnfResult hnf(const IntMatrix& a, Track track) {
  const std::size_t m = a.rows(), n = a.cols();
  Cols cols = columns_of(a);
  const bool want_u = track != Track::None;
  const bool want_inv = track == Track::TransformAndInverse;
  Cols ucols = want_u ? identity_vectors(n) : Cols{};  // columns of U
  Cols uinv = want_inv ? identity_vectors(n) : Cols{};  // rows of U^{-1}

  HnfResult res;
  std::size_t k = 0;
  Int q;
  for (std::size_t r = 0; r < m && k < n; ++r) {
    // Euclidean elimination: bring the smallest nonzero entry of row r to
    // column k and reduce the others by rounded quotients. Keeps entries
    // far smaller than extended-gcd folding.
    for (;;) {
      std::size_t best = n;
      for (std::size_t j = k; j < n; ++j)
        if (cols[j][r] != 0 && (best == n || mpz_cmpabs(cols[j][r].get_mpz_t(), cols[best][r].get_mpz_t()) < 0))
          best = j;
      if (best == n) break;
      if (best != k) {
        std::swap(cols[k], cols[best]);
        if (want_u) std::swap(ucols[k], ucols[best]);
        if (want_inv) std::swap(uinv[k], uinv[best]);
      }
      bool done = true;
      for (std::size_t j = k + 1; j < n; ++j) {
        if (cols[j][r] == 0) continue;
        q = round_div(cols[j][r], cols[k][r]);
        axpy(cols[j], cols[k], -q);
        if (want_u) axpy(ucols[j], ucols[k], -q);
        if (want_inv) axpy(uinv[k], uinv[j], q);
        if (cols[j][r] != 0) done = false;
      }
      if (done) break;
    }
    if (cols[k][r] == 0) continue;
    if (cols[k][r] < 0) {
      negate(cols[k]);
      if (want_u) negate(ucols[k]);
      if (want_inv) negate(uinv[k]);
    }
    for (std::size_t j = 0; j < k; ++j) {
      q = floor_div(cols[j][r], cols[k][r]);
      if (q == 0) continue;
      axpy(cols[j], cols[k], -q);
      if (want_u) axpy(ucols[j], ucols[k], -q);
      if (want_inv) axpy(uinv[k], uinv[j], q);
    }
    res.pivot_rows.push_back(r);
    ++k;
  }
  res.H = IntMatrix::from_columns(cols, m);
  if (want_u) res.U = IntMatrix::from_columns(ucols, n);
  if (want_inv) res.U_inv = IntMatrix::from_row_vectors(uinv, n);
  return res;
}

namespace {

// Row-major working state for the Smith form. Row operations on S are
// mirrored on U (rows) and U^{-1} (columns); column operations on S on V
// (columns) and V^{-1} (rows).
struct SnfState {
  Cols S;     // rows
  Cols U;     // rows
  Cols Uinv;  // columns
  Cols V;     // columns
  Cols Vinv;  // rows
  bool inv;

  void col_axpy(std::size_t dst, std::size_t src, const Int& q) {  // col dst += q col src
    for (auto& row : S)
      if (row[src] != 0) row[dst] += q * row[src];
    axpy(V[dst], V[src], q);
    if (inv) axpy(Vinv[src], Vinv[dst], -q);
  }
  void row_axpy(std::size_t dst, std::size_t src, const Int& q) {  // row dst += q row src
    axpy(S[dst], S[src], q);
    axpy(U[dst], U[src], q);
    if (inv) axpy(Uinv[src], Uinv[dst], -q);
  }
  void row_swap(std::size_t i, std::size_t j) {
    if (i == j) return;
    std::swap(S[i], S[j]);
    std::swap(U[i], U[j]);
    if (inv) std::swap(Uinv[i], Uinv[j]);
  }
  void col_swap(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (auto& row : S) std::swap(row[i], row[j]);
    std::swap(V[i], V[j]);
    if (inv) std::swap(Vinv[i], Vinv[j]);
  }
  void row_negate(std::size_t i) {
    negate(S[i]);
    negate(U[i]);
    if (inv) negate(Uinv[i]);
  }
};

}  // namespace

SnfResult snf(const IntMatrix& a, bool track_inverses) {
  const std::size_t m = a.rows(), n = a.cols();
  SnfState st;
  st.inv = track_inverses;
  st.S.resize(m);
  for (std::size_t i = 0; i < m; ++i) st.S[i] = a.row(i);
  st.U = identity_vectors(m);
  st.V = identity_vectors(n);
  if (track_inverses) {
    st.Uinv = identity_vectors(m);
    st.Vinv = identity_vectors(n);
  }

  SnfResult res;
  std::size_t t = 0;
  Int q;
  for (; t < std::min(m, n); ++t) {
    bool have_pivot = true;
    for (;;) {
      std::size_t bi = m, bj = n;
      for (std::size_t i = t; i < m; ++i)
        for (std::size_t j = t; j < n; ++j) {
          const Int& v = st.S[i][j];
          if (v == 0) continue;
          if (bi == m || mpz_cmpabs(v.get_mpz_t(), st.S[bi][bj].get_mpz_t()) < 0) {
            bi = i;
            bj = j;
          }
        }
      if (bi == m) {
        have_pivot = false;
        break;
      }
      st.row_swap(t, bi);
      st.col_swap(t, bj);
      bool clean = true;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (st.S[i][t] == 0) continue;
        mpz_tdiv_q(q.get_mpz_t(), st.S[i][t].get_mpz_t(), st.S[t][t].get_mpz_t());
        if (q != 0) st.row_axpy(i, t, -q);
        if (st.S[i][t] != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (st.S[t][j] == 0) continue;
        mpz_tdiv_q(q.get_mpz_t(), st.S[t][j].get_mpz_t(), st.S[t][t].get_mpz_t());
        if (q != 0) st.col_axpy(j, t, -q);
        if (st.S[t][j] != 0) clean = false;
      }
      if (!clean) continue;
      std::size_t bad = m;
      for (std::size_t i = t + 1; i < m && bad == m; ++i)
        for (std::size_t j = t + 1; j < n; ++j)
          if (!mpz_divisible_p(st.S[i][j].get_mpz_t(), st.S[t][t].get_mpz_t())) {
            bad = i;
            break;
          }
      if (bad == m) break;
      st.row_axpy(t, bad, Int(1));
    }
    if (!have_pivot) break;
    if (st.S[t][t] < 0) st.row_negate(t);
  }
  res.rank = t;
  res.S = IntMatrix::from_row_vectors(st.S, n);
  res.U = IntMatrix::from_row_vectors(st.U, m);
  res.V = IntMatrix::from_columns(st.V, n);
  if (track_inverses) {
    res.U_inv = IntMatrix::from_columns(st.Uinv, m);
    res.V_inv = IntMatrix::from_row_vectors(st.Vinv, n);
  }
  return res;
}

IntVec SnfResult::diagonal() const {
  IntVec d(rank);
  for (std::size_t i = 0; i < rank; ++i) d[i] = S(i, i);
  return d;
}

IntVec GroupInvariants::nontrivial() const {
  IntVec out;
  for (const auto& f : factors)
    if (f != 1) out.push_back(f);
  return out;
}

std::string GroupInvariants::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& f : nontrivial()) {
    if (!first) os << " + ";
    os << "Z/" << f.get_str();
    first = false;
  }
  for (std::size_t i = 0; i < free_rank; ++i) {
    if (!first) os << " + ";
    os << "Z";
    first = false;
  }
  if (first) os << "0";
  return os.str();
}

GroupInvariants cokernel_invariants(const IntMatrix& a) {
  SnfResult s = snf(a);
  GroupInvariants g;
  g.factors = s.diagonal();
  g.free_rank = a.rows() - s.rank;
  return g;
}

}  // namespace zcp
