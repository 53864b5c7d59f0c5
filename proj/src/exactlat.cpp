#include "wao/exactlat.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

namespace wao {

// ---------------------------------------------------------------------------
// IntMatrix

IntMatrix::IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0) {}

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<long>>& rows, std::size_t cols) {
  std::size_t c = rows.empty() ? cols : rows.front().size();
  IntMatrix m(rows.size(), c);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != c) throw PreconditionError("IntMatrix::from_rows: ragged rows");
    for (std::size_t j = 0; j < c; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

IntMatrix IntMatrix::diagonal(const IntVec& diag) {
  IntMatrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

IntVec IntMatrix::row(std::size_t i) const {
  return IntVec(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
}

IntVec IntMatrix::col(std::size_t j) const {
  IntVec v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
  return v;
}

void IntMatrix::set_col(std::size_t j, const IntVec& v) {
  for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
}

void IntMatrix::append_row(const IntVec& v) {
  if (rows_ == 0 && cols_ == 0) cols_ = v.size();
  if (v.size() != cols_) throw PreconditionError("IntMatrix::append_row: length mismatch");
  data_.insert(data_.end(), v.begin(), v.end());
  ++rows_;
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

IntMatrix IntMatrix::operator*(const IntMatrix& o) const {
  if (cols_ != o.rows_) throw PreconditionError("IntMatrix: product shape mismatch");
  IntMatrix r(rows_, o.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      const Int& a = (*this)(i, k);
      if (a == 0) continue;
      for (std::size_t j = 0; j < o.cols_; ++j) {
        const Int& b = o(k, j);
        if (b != 0) r(i, j) += a * b;
      }
    }
  return r;
}

IntMatrix IntMatrix::operator+(const IntMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw PreconditionError("IntMatrix: sum shape mismatch");
  IntMatrix r = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] += o.data_[i];
  return r;
}

IntMatrix IntMatrix::operator-(const IntMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw PreconditionError("IntMatrix: difference shape mismatch");
  IntMatrix r = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] -= o.data_[i];
  return r;
}

IntVec IntMatrix::apply(const IntVec& x) const {
  if (x.size() != cols_) throw PreconditionError("IntMatrix::apply: length mismatch");
  IntVec y(rows_, 0);
  for (std::size_t j = 0; j < cols_; ++j) {
    if (x[j] == 0) continue;
    for (std::size_t i = 0; i < rows_; ++i) {
      const Int& a = (*this)(i, j);
      if (a != 0) y[i] += a * x[j];
    }
  }
  return y;
}

IntMatrix IntMatrix::select_cols(const std::vector<std::size_t>& idx) const {
  IntMatrix r(rows_, idx.size());
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < idx.size(); ++k) r(i, k) = (*this)(i, idx[k]);
  return r;
}

IntMatrix IntMatrix::select_rows(const std::vector<std::size_t>& idx) const {
  IntMatrix r(idx.size(), cols_);
  for (std::size_t k = 0; k < idx.size(); ++k)
    for (std::size_t j = 0; j < cols_; ++j) r(k, j) = (*this)(idx[k], j);
  return r;
}

IntMatrix IntMatrix::hstack(const IntMatrix& a, const IntMatrix& b) {
  if (a.rows_ != b.rows_) throw PreconditionError("IntMatrix::hstack: row mismatch");
  IntMatrix r(a.rows_, a.cols_ + b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i) {
    for (std::size_t j = 0; j < a.cols_; ++j) r(i, j) = a(i, j);
    for (std::size_t j = 0; j < b.cols_; ++j) r(i, a.cols_ + j) = b(i, j);
  }
  return r;
}

IntMatrix IntMatrix::vstack(const IntMatrix& a, const IntMatrix& b) {
  if (a.rows_ == 0) return b;
  if (b.rows_ == 0) return a;
  if (a.cols_ != b.cols_) throw PreconditionError("IntMatrix::vstack: column mismatch");
  IntMatrix r = a;
  r.data_.insert(r.data_.end(), b.data_.begin(), b.data_.end());
  r.rows_ += b.rows_;
  return r;
}

bool IntMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const Int& x) { return x == 0; });
}

Int IntMatrix::determinant() const {
  if (rows_ != cols_) throw PreconditionError("determinant of a non-square matrix");
  std::size_t n = rows_;
  if (n == 0) return 1;
  IntMatrix a = *this;
  Int prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && a(p, k) == 0) ++p;
      if (p == n) return 0;
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        Int t = a(i, j) * a(k, k) - a(i, k) * a(k, j);
        mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
        a(i, j) = t;
      }
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

std::string IntMatrix::to_string() const {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < rows_; ++i) {
    os << (i ? ",[" : "[");
    for (std::size_t j = 0; j < cols_; ++j) os << (j ? "," : "") << (*this)(i, j).get_str();
    os << "]";
  }
  os << "]";
  return os.str();
}

// ---------------------------------------------------------------------------
// Smith normal form

namespace {

struct SnfState {
  IntMatrix a;
  IntMatrix u, v, u_inv, v_inv;
  SnfOptions opts;

  void row_add(std::size_t i, std::size_t j, const Int& q) {  // R_i += q R_j
    if (q == 0) return;
    for (std::size_t c = 0; c < a.cols(); ++c)
      if (a(j, c) != 0) a(i, c) += q * a(j, c);
    if (opts.want_u)
      for (std::size_t c = 0; c < u.cols(); ++c)
        if (u(j, c) != 0) u(i, c) += q * u(j, c);
    if (opts.want_u_inv)
      for (std::size_t r = 0; r < u_inv.rows(); ++r)
        if (u_inv(r, i) != 0) u_inv(r, j) -= q * u_inv(r, i);
  }
  void row_swap(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t c = 0; c < a.cols(); ++c) std::swap(a(i, c), a(j, c));
    if (opts.want_u)
      for (std::size_t c = 0; c < u.cols(); ++c) std::swap(u(i, c), u(j, c));
    if (opts.want_u_inv)
      for (std::size_t r = 0; r < u_inv.rows(); ++r) std::swap(u_inv(r, i), u_inv(r, j));
  }
  void row_neg(std::size_t i) {
    for (std::size_t c = 0; c < a.cols(); ++c) a(i, c) = -a(i, c);
    if (opts.want_u)
      for (std::size_t c = 0; c < u.cols(); ++c) u(i, c) = -u(i, c);
    if (opts.want_u_inv)
      for (std::size_t r = 0; r < u_inv.rows(); ++r) u_inv(r, i) = -u_inv(r, i);
  }
  void col_add(std::size_t j, std::size_t i, const Int& q) {  // C_j += q C_i
    if (q == 0) return;
    for (std::size_t r = 0; r < a.rows(); ++r)
      if (a(r, i) != 0) a(r, j) += q * a(r, i);
    if (opts.want_v)
      for (std::size_t r = 0; r < v.rows(); ++r)
        if (v(r, i) != 0) v(r, j) += q * v(r, i);
    if (opts.want_v_inv)
      for (std::size_t c = 0; c < v_inv.cols(); ++c)
        if (v_inv(j, c) != 0) v_inv(i, c) -= q * v_inv(j, c);
  }
  void col_swap(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t r = 0; r < a.rows(); ++r) std::swap(a(r, i), a(r, j));
    if (opts.want_v)
      for (std::size_t r = 0; r < v.rows(); ++r) std::swap(v(r, i), v(r, j));
    if (opts.want_v_inv)
      for (std::size_t c = 0; c < v_inv.cols(); ++c) std::swap(v_inv(i, c), v_inv(j, c));
  }
};

}  // namespace

SmithForm snf(const IntMatrix& m, SnfOptions opts) {
  const std::size_t rows = m.rows(), cols = m.cols();
  SnfState st;
  st.a = m;
  st.opts = opts;
  if (opts.want_u) st.u = IntMatrix::identity(rows);
  if (opts.want_u_inv) st.u_inv = IntMatrix::identity(rows);
  if (opts.want_v) st.v = IntMatrix::identity(cols);
  if (opts.want_v_inv) st.v_inv = IntMatrix::identity(cols);
  IntMatrix& a = st.a;

  const std::size_t diag = std::min(rows, cols);
  std::size_t rank = 0;
  for (std::size_t t = 0; t < diag; ++t) {
    bool done_here = false;
    while (!done_here) {
      // Pivot: smallest nonzero |entry|, ties broken lexicographically.
      std::size_t pi = rows, pj = cols;
      Int best;
      for (std::size_t i = t; i < rows; ++i)
        for (std::size_t j = t; j < cols; ++j) {
          const Int& x = a(i, j);
          if (x == 0) continue;
          if (pi == rows || mpz_cmpabs(x.get_mpz_t(), best.get_mpz_t()) < 0) {
            best = abs(x);
            pi = i;
            pj = j;
          }
        }
      if (pi == rows) break;  // remaining block is zero
      st.row_swap(t, pi);
      st.col_swap(t, pj);

      bool dirty = false;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (a(i, t) == 0) continue;
        Int q;
        mpz_tdiv_q(q.get_mpz_t(), a(i, t).get_mpz_t(), a(t, t).get_mpz_t());
        st.row_add(i, t, -q);
        if (a(i, t) != 0) dirty = true;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (a(t, j) == 0) continue;
        Int q;
        mpz_tdiv_q(q.get_mpz_t(), a(t, j).get_mpz_t(), a(t, t).get_mpz_t());
        st.col_add(j, t, -q);
        if (a(t, j) != 0) dirty = true;
      }
      if (dirty) continue;

      // Divisibility chain: fold an offending row into the pivot row.
      bool fixed = false;
      for (std::size_t i = t + 1; i < rows && !fixed; ++i)
        for (std::size_t j = t + 1; j < cols; ++j) {
          if (a(i, j) != 0 && !mpz_divisible_p(a(i, j).get_mpz_t(), a(t, t).get_mpz_t())) {
            st.row_add(t, i, 1);
            fixed = true;
            break;
          }
        }
      if (fixed) continue;
      if (a(t, t) < 0) st.row_neg(t);
      done_here = true;
      ++rank;
    }
    if (!done_here) break;
  }

  SmithForm sf;
  sf.rank = rank;
  sf.diagonal.resize(diag);
  for (std::size_t i = 0; i < diag; ++i) sf.diagonal[i] = a(i, i);
  sf.D = std::move(st.a);
  sf.U = std::move(st.u);
  sf.V = std::move(st.v);
  sf.U_inv = std::move(st.u_inv);
  sf.V_inv = std::move(st.v_inv);
  return sf;
}

// ---------------------------------------------------------------------------
// Lattice kernels and solvers

IntMatrix kernel_mod(const std::vector<SparseRow>& rows, const IntVec& moduli, std::size_t n) {
  if (moduli.size() != rows.size()) throw PreconditionError("kernel_mod: moduli/rows mismatch");
  // basis[j] is a column vector of length n.
  std::vector<IntVec> basis(n, IntVec(n, 0));
  for (std::size_t j = 0; j < n; ++j) basis[j][j] = 1;

  std::vector<Int> w;
  Int g, s, t, tmp;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto& row = rows[r].entries;
    if (row.empty()) continue;
    const Int& e = moduli[r];
    const std::size_t k = basis.size();
    w.assign(k, 0);
    bool any = false;
    for (std::size_t j = 0; j < k; ++j) {
      Int acc = 0;
      for (const auto& [c, val] : row)
        if (basis[j][c] != 0) acc += val * basis[j][c];
      if (e != 0) mpz_mod(acc.get_mpz_t(), acc.get_mpz_t(), e.get_mpz_t());
      if (acc != 0) any = true;
      w[j] = std::move(acc);
    }
    if (!any) continue;

    // Column transforms bringing w to (g, 0, ..., 0).
    std::size_t lead = k;
    for (std::size_t j = 0; j < k; ++j)
      if (w[j] != 0) {
        lead = j;
        break;
      }
    if (lead != 0) {
      std::swap(basis[0], basis[lead]);
      std::swap(w[0], w[lead]);
    }
    for (std::size_t j = 1; j < k; ++j) {
      if (w[j] == 0) continue;
      if (mpz_divisible_p(w[j].get_mpz_t(), w[0].get_mpz_t())) {
        Int q = w[j] / w[0];
        for (std::size_t c = 0; c < n; ++c)
          if (basis[0][c] != 0) basis[j][c] -= q * basis[0][c];
        w[j] = 0;
        continue;
      }
      mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), w[0].get_mpz_t(), w[j].get_mpz_t());
      Int a0 = w[0] / g, aj = w[j] / g;
      for (std::size_t c = 0; c < n; ++c) {
        const Int b0 = basis[0][c];
        const Int bj = basis[j][c];
        basis[0][c] = s * b0 + t * bj;
        basis[j][c] = aj * b0 - a0 * bj;
      }
      w[0] = g;
      w[j] = 0;
    }
    if (e == 0) {
      basis.erase(basis.begin());
    } else {
      Int gg;
      mpz_gcd(gg.get_mpz_t(), w[0].get_mpz_t(), e.get_mpz_t());
      Int mult = e / gg;
      if (mult != 1)
        for (auto& x : basis[0]) x *= mult;
    }
  }
  IntMatrix out(n, basis.size());
  for (std::size_t j = 0; j < basis.size(); ++j) out.set_col(j, basis[j]);
  return out;
}

IntMatrix kernel_mod(const IntMatrix& m, const IntVec& moduli) {
  std::vector<SparseRow> rows(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (m(i, j) != 0) rows[i].entries.emplace_back(j, m(i, j));
  return kernel_mod(rows, moduli, m.cols());
}

LatticeSolver::LatticeSolver(const IntMatrix& basis)
    : sf_(snf(basis, SnfOptions{true, true, false, false})), k_(basis.cols()) {
  if (sf_.rank != k_) throw PreconditionError("LatticeSolver: basis is not of full column rank");
}

std::optional<IntVec> LatticeSolver::solve(const IntVec& v) const {
  IntVec uv = sf_.U.apply(v);
  IntVec y(k_);
  for (std::size_t i = 0; i < uv.size(); ++i) {
    if (i < k_) {
      if (!mpz_divisible_p(uv[i].get_mpz_t(), sf_.diagonal[i].get_mpz_t())) return std::nullopt;
      y[i] = uv[i] / sf_.diagonal[i];
    } else if (uv[i] != 0) {
      return std::nullopt;
    }
  }
  return sf_.V.apply(y);
}

std::optional<IntVec> solve_integer(const IntMatrix& a, const IntVec& c) {
  if (c.size() != a.rows()) throw PreconditionError("solve_integer: length mismatch");
  if (a.cols() == 0) {
    for (const auto& x : c)
      if (x != 0) return std::nullopt;
    return IntVec{};
  }
  SmithForm sf = snf(a);
  IntVec uc = sf.U.apply(c);
  IntVec y(a.cols(), 0);
  for (std::size_t i = 0; i < uc.size(); ++i) {
    if (i < sf.rank) {
      if (!mpz_divisible_p(uc[i].get_mpz_t(), sf.diagonal[i].get_mpz_t())) return std::nullopt;
      y[i] = uc[i] / sf.diagonal[i];
    } else if (uc[i] != 0) {
      return std::nullopt;
    }
  }
  return sf.V.apply(y);
}

// ---------------------------------------------------------------------------
// AbelianGroup

AbelianGroup::AbelianGroup(std::size_t ngens, IntMatrix relations) : ngens_(ngens), relations_(std::move(relations)) {
  if (relations_.rows() > 0 && relations_.cols() != ngens_)
    throw PreconditionError("present_group: relation rows have " + std::to_string(relations_.cols()) +
                            " columns, expected " + std::to_string(ngens_));
  if (relations_.rows() == 0) relations_ = IntMatrix(0, ngens_);
  if (init_monomial()) return;

  IntVec d(ngens_, 0);
  IntMatrix vt, vinv_rows;
  if (relations_.rows() == 0) {
    vt = IntMatrix::identity(ngens_);
    vinv_rows = IntMatrix::identity(ngens_);
  } else {
    SmithForm sf = snf(relations_, SnfOptions{false, true, false, true});
    for (std::size_t i = 0; i < sf.diagonal.size(); ++i) d[i] = sf.diagonal[i];
    vt = sf.V.transpose();
    vinv_rows = std::move(sf.V_inv);
  }
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < ngens_; ++i)
    if (d[i] != 1) keep.push_back(i);
  // Finite factors first (ascending chain), then free ones: SNF already orders
  // nonzero entries before zeros.
  for (auto i : keep) factors_.push_back(d[i]);
  to_smith_ = vt.select_rows(keep);
  from_smith_ = vinv_rows.select_rows(keep).transpose();
}

// Relations that are already one entry per row on distinct columns and whose
// values form a divisibility chain need no Smith form.
bool AbelianGroup::init_monomial() {
  std::vector<Int> val(ngens_, 0);
  std::vector<bool> seen(ngens_, false);
  for (std::size_t i = 0; i < relations_.rows(); ++i) {
    std::size_t col = ngens_;
    for (std::size_t j = 0; j < ngens_; ++j) {
      if (relations_(i, j) == 0) continue;
      if (col != ngens_) return false;
      col = j;
    }
    if (col == ngens_) continue;
    if (seen[col]) return false;
    seen[col] = true;
    val[col] = abs(relations_(i, col));
  }
  std::vector<std::size_t> fin, fr;
  for (std::size_t j = 0; j < ngens_; ++j) {
    if (!seen[j])
      fr.push_back(j);
    else if (val[j] != 1)
      fin.push_back(j);
  }
  std::stable_sort(fin.begin(), fin.end(), [&](std::size_t a, std::size_t b) { return val[a] < val[b]; });
  for (std::size_t k = 1; k < fin.size(); ++k)
    if (!mpz_divisible_p(val[fin[k]].get_mpz_t(), val[fin[k - 1]].get_mpz_t())) return false;
  std::vector<std::size_t> keep = fin;
  keep.insert(keep.end(), fr.begin(), fr.end());
  to_smith_ = IntMatrix(keep.size(), ngens_);
  for (std::size_t k = 0; k < keep.size(); ++k) {
    to_smith_(k, keep[k]) = 1;
    factors_.push_back(seen[keep[k]] ? val[keep[k]] : Int(0));
  }
  from_smith_ = to_smith_.transpose();
  return true;
}

GroupPtr AbelianGroup::make(std::size_t ngens, IntMatrix relations) {
  return std::make_shared<const AbelianGroup>(ngens, std::move(relations));
}

GroupPtr AbelianGroup::free(std::size_t n) { return make(n, IntMatrix(0, n)); }

GroupPtr AbelianGroup::cyclic(const Int& order) { return from_factors({order}); }

GroupPtr AbelianGroup::from_factors(const IntVec& factors) {
  IntMatrix rel(0, factors.size());
  for (std::size_t i = 0; i < factors.size(); ++i) {
    if (factors[i] < 0) throw PreconditionError("from_factors: negative factor");
    if (factors[i] == 0) continue;
    IntVec r(factors.size(), 0);
    r[i] = factors[i];
    rel.append_row(r);
  }
  return make(factors.size(), rel);
}

std::size_t AbelianGroup::free_rank() const {
  return static_cast<std::size_t>(std::count(factors_.begin(), factors_.end(), Int(0)));
}

Int AbelianGroup::order() const {
  if (!is_finite()) throw MathError("order of an infinite group");
  Int o = 1;
  for (const auto& d : factors_) o *= d;
  return o;
}

Int AbelianGroup::exponent() const {
  if (!is_finite()) return 0;
  return factors_.empty() ? Int(1) : factors_.back();
}

IntVec AbelianGroup::smith_coords(const IntVec& x) const {
  if (x.size() != ngens_) throw PreconditionError("element length mismatch");
  IntVec s = to_smith_.apply(x);
  for (std::size_t i = 0; i < s.size(); ++i)
    if (factors_[i] != 0) mpz_mod(s[i].get_mpz_t(), s[i].get_mpz_t(), factors_[i].get_mpz_t());
  return s;
}

IntVec AbelianGroup::from_smith_coords(const IntVec& s) const { return from_smith_.apply(s); }

IntVec AbelianGroup::normalize(const IntVec& x) const { return from_smith_coords(smith_coords(x)); }

IntVec AbelianGroup::add(const IntVec& x, const IntVec& y) const {
  IntVec r(ngens_);
  for (std::size_t i = 0; i < ngens_; ++i) r[i] = x[i] + y[i];
  return normalize(r);
}

IntVec AbelianGroup::sub(const IntVec& x, const IntVec& y) const {
  IntVec r(ngens_);
  for (std::size_t i = 0; i < ngens_; ++i) r[i] = x[i] - y[i];
  return normalize(r);
}

IntVec AbelianGroup::neg(const IntVec& x) const {
  IntVec r(ngens_);
  for (std::size_t i = 0; i < ngens_; ++i) r[i] = -x[i];
  return normalize(r);
}

IntVec AbelianGroup::scale(const Int& k, const IntVec& x) const {
  IntVec r(ngens_);
  for (std::size_t i = 0; i < ngens_; ++i) r[i] = k * x[i];
  return normalize(r);
}

IntVec AbelianGroup::generator(std::size_t i) const {
  IntVec e(ngens_, 0);
  e.at(i) = 1;
  return normalize(e);
}

bool AbelianGroup::equal(const IntVec& x, const IntVec& y) const { return smith_coords(x) == smith_coords(y); }

bool AbelianGroup::is_zero(const IntVec& x) const {
  IntVec s = smith_coords(x);
  return std::all_of(s.begin(), s.end(), [](const Int& v) { return v == 0; });
}

Int AbelianGroup::element_order(const IntVec& x) const {
  IntVec s = smith_coords(x);
  Int o = 1;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == 0) continue;
    if (factors_[i] == 0) return 0;
    Int g;
    mpz_gcd(g.get_mpz_t(), s[i].get_mpz_t(), factors_[i].get_mpz_t());
    Int oi = factors_[i] / g;
    mpz_lcm(o.get_mpz_t(), o.get_mpz_t(), oi.get_mpz_t());
  }
  return o;
}

std::vector<IntVec> AbelianGroup::elements(std::size_t limit) const {
  if (!is_finite()) throw MathError("elements() of an infinite group");
  if (order() > limit) throw Refusal("elements(): group of order " + order().get_str() + " exceeds enumeration limit");
  std::vector<IntVec> out;
  IntVec s(factors_.size(), 0);
  while (true) {
    out.push_back(from_smith_coords(s));
    std::size_t i = s.size();
    while (i > 0) {
      --i;
      s[i] += 1;
      if (s[i] < factors_[i]) break;
      s[i] = 0;
      if (i == 0) return out;
    }
    if (s.empty()) return out;
  }
}

std::string AbelianGroup::describe() const {
  if (factors_.empty()) return "0";
  std::ostringstream os;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (i) os << " x ";
    if (factors_[i] == 0)
      os << "Z";
    else
      os << "Z/" << factors_[i].get_str();
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Homomorphisms

AbHom::AbHom(GroupPtr source, GroupPtr target, IntMatrix matrix)
    : source_(std::move(source)), target_(std::move(target)), matrix_(std::move(matrix)) {
  if (matrix_.rows() != target_->ngens() || matrix_.cols() != source_->ngens())
    throw PreconditionError("AbHom: matrix is " + std::to_string(matrix_.rows()) + "x" +
                            std::to_string(matrix_.cols()) + ", expected " + std::to_string(target_->ngens()) + "x" +
                            std::to_string(source_->ngens()));
  const IntMatrix& rel = source_->relations();
  for (std::size_t i = 0; i < rel.rows(); ++i)
    if (!target_->is_zero(matrix_.apply(rel.row(i))))
      throw PreconditionError("AbHom: relation " + std::to_string(i) + " of the source is not mapped to zero");
}

IntVec AbHom::apply(const IntVec& x) const { return target_->normalize(matrix_.apply(x)); }

AbHom AbHom::compose_after(const AbHom& first) const {
  if (first.target_.get() != source_.get() && first.target_->ngens() != source_->ngens())
    throw PreconditionError("AbHom::compose_after: shape mismatch");
  return AbHom(first.source_, target_, matrix_ * first.matrix_);
}

bool AbHom::is_zero() const {
  for (std::size_t j = 0; j < matrix_.cols(); ++j)
    if (!target_->is_zero(matrix_.col(j))) return false;
  return true;
}

bool AbHom::equals(const AbHom& other) const {
  if (matrix_.rows() != other.matrix_.rows() || matrix_.cols() != other.matrix_.cols()) return false;
  for (std::size_t j = 0; j < matrix_.cols(); ++j)
    if (!target_->equal(matrix_.col(j), other.matrix_.col(j))) return false;
  return true;
}

std::optional<IntVec> AbHom::preimage(const IntVec& y) const { return HomSolver(*this).preimage(y); }

HomSolver::HomSolver(const AbHom& f) : source_(f.source()), target_(f.target()) {
  const IntMatrix& t = target_->to_smith();
  IntMatrix sys = IntMatrix::hstack(t * f.matrix(), IntMatrix::diagonal(target_->invariant_factors()));
  cols_ = sys.cols();
  sf_ = snf(sys, SnfOptions{true, true, false, false});
}

std::optional<IntVec> HomSolver::preimage(const IntVec& y) const {
  IntVec uc = sf_.U.apply(target_->to_smith().apply(y));
  IntVec z(cols_, 0);
  for (std::size_t i = 0; i < uc.size(); ++i) {
    if (i < sf_.rank) {
      if (!mpz_divisible_p(uc[i].get_mpz_t(), sf_.diagonal[i].get_mpz_t())) return std::nullopt;
      z[i] = uc[i] / sf_.diagonal[i];
    } else if (uc[i] != 0) {
      return std::nullopt;
    }
  }
  IntVec full = cols_ ? sf_.V.apply(z) : IntVec{};
  IntVec x(full.begin(), full.begin() + static_cast<std::ptrdiff_t>(source_->ngens()));
  if (x.size() < source_->ngens()) x.resize(source_->ngens(), 0);
  return source_->normalize(x);
}

bool AbHom::is_injective() const { return kernel_of_hom(*this).group->is_trivial(); }

bool AbHom::is_surjective() const { return cokernel_of_hom(*this).group->is_trivial(); }

// ---------------------------------------------------------------------------

GroupPtr present_group(std::size_t n, const IntMatrix& relations) {
  if (relations.rows() > 0 && relations.cols() != n)
    throw PreconditionError("present_group: relations have " + std::to_string(relations.cols()) +
                            " columns, expected " + std::to_string(n));
  return AbelianGroup::make(n, relations);
}

Subgroup kernel_of_hom(const AbHom& f) {
  const GroupPtr& a = f.source();
  const GroupPtr& b = f.target();
  IntMatrix rows = b->to_smith() * f.matrix();
  IntMatrix lb = kernel_mod(rows, b->invariant_factors());
  const std::size_t k = lb.cols();
  IntMatrix rel(0, k);
  if (k > 0) {
    LatticeSolver solver(lb);
    for (std::size_t i = 0; i < a->relations().rows(); ++i) {
      auto c = solver.solve(a->relations().row(i));
      if (!c) throw MathError("kernel_of_hom: source relation outside kernel lattice");
      rel.append_row(*c);
    }
  }
  GroupPtr raw = AbelianGroup::make(k, rel);
  GroupPtr simple = AbelianGroup::from_factors(raw->invariant_factors());
  IntMatrix incl = lb * raw->from_smith();
  if (incl.cols() == 0) incl = IntMatrix(a->ngens(), 0);
  return Subgroup{simple, AbHom(simple, a, incl)};
}

Quotient cokernel_of_hom(const AbHom& f) {
  const GroupPtr& b = f.target();
  IntMatrix rel = IntMatrix::vstack(b->relations(), f.matrix().transpose());
  if (rel.rows() == 0) rel = IntMatrix(0, b->ngens());
  GroupPtr raw = AbelianGroup::make(b->ngens(), rel);
  GroupPtr simple = AbelianGroup::from_factors(raw->invariant_factors());
  IntMatrix proj = raw->to_smith();
  if (proj.rows() == 0) proj = IntMatrix(0, b->ngens());
  return Quotient{simple, AbHom(b, simple, proj)};
}

namespace {
IntMatrix columns_matrix(std::size_t n, const std::vector<IntVec>& gens) {
  IntMatrix m(n, gens.size());
  for (std::size_t j = 0; j < gens.size(); ++j) {
    if (gens[j].size() != n) throw PreconditionError("generator length mismatch");
    m.set_col(j, gens[j]);
  }
  return m;
}
}  // namespace

Subgroup subgroup_generated(const GroupPtr& g, const std::vector<IntVec>& gens) {
  GroupPtr fr = AbelianGroup::free(gens.size());
  AbHom h(fr, g, columns_matrix(g->ngens(), gens));
  Subgroup k = kernel_of_hom(h);
  IntMatrix rel = k.incl.matrix().transpose();
  if (rel.rows() == 0) rel = IntMatrix(0, gens.size());
  GroupPtr raw = AbelianGroup::make(gens.size(), rel);
  GroupPtr simple = AbelianGroup::from_factors(raw->invariant_factors());
  IntMatrix incl = h.matrix() * raw->from_smith();
  if (incl.cols() == 0) incl = IntMatrix(g->ngens(), 0);
  return Subgroup{simple, AbHom(simple, g, incl)};
}

Quotient quotient_by(const GroupPtr& g, const std::vector<IntVec>& gens) {
  GroupPtr fr = AbelianGroup::free(gens.size());
  return cokernel_of_hom(AbHom(fr, g, columns_matrix(g->ngens(), gens)));
}

GroupPtr direct_sum(const std::vector<GroupPtr>& parts) {
  std::size_t n = 0;
  for (const auto& p : parts) n += p->ngens();
  IntMatrix rel(0, n);
  std::size_t off = 0;
  for (const auto& p : parts) {
    for (std::size_t i = 0; i < p->relations().rows(); ++i) {
      IntVec r(n, 0);
      for (std::size_t j = 0; j < p->ngens(); ++j) r[off + j] = p->relations()(i, j);
      rel.append_row(r);
    }
    off += p->ngens();
  }
  return AbelianGroup::make(n, rel);
}

// ---------------------------------------------------------------------------
// Ladder lemma

namespace {

bool row_is_left_exact(const ExactRow& row, std::string& why) {
  if (!row.first.is_injective()) {
    why = "first map not injective";
    return false;
  }
  if (!row.second.compose_after(row.first).is_zero()) {
    why = "composite not zero";
    return false;
  }
  Subgroup k = kernel_of_hom(row.second);
  for (std::size_t j = 0; j < k.group->ngens(); ++j)
    if (!row.first.preimage(k.incl.apply(k.group->generator(j)))) {
      why = "kernel of second map not contained in image of first";
      return false;
    }
  return true;
}

// Restriction of f: X -> Y to subgroups kx -> ky (f(kx) must land in ky).
AbHom induced_on(const AbHom& f, const Subgroup& kx, const Subgroup& ky) {
  IntMatrix m(ky.group->ngens(), kx.group->ngens());
  for (std::size_t j = 0; j < kx.group->ngens(); ++j) {
    IntVec img = f.apply(kx.incl.apply(kx.group->generator(j)));
    auto pre = ky.incl.preimage(img);
    if (!pre) throw MathError("exact_ladder_kernels: image leaves the target kernel");
    m.set_col(j, *pre);
  }
  return AbHom(kx.group, ky.group, m);
}

std::string order_text(const GroupPtr& g) { return g->is_finite() ? g->order().get_str() : "inf"; }

}  // namespace

LadderKernels exact_ladder_kernels(const ExactRow& top, const ExactRow& bottom, const AbHom& lambda_a,
                                   const AbHom& lambda_b, const AbHom& lambda_c) {
  std::string why;
  if (!row_is_left_exact(top, why)) throw PreconditionError("exact_ladder_kernels: top row inexact: " + why);
  if (!row_is_left_exact(bottom, why)) throw PreconditionError("exact_ladder_kernels: bottom row inexact: " + why);
  if (!lambda_b.compose_after(top.first).equals(bottom.first.compose_after(lambda_a)))
    throw PreconditionError("exact_ladder_kernels: left square (A -> B') does not commute");
  if (!lambda_c.compose_after(top.second).equals(bottom.second.compose_after(lambda_b)))
    throw PreconditionError("exact_ladder_kernels: right square (B -> C') does not commute");

  LadderKernels out{kernel_of_hom(lambda_a), kernel_of_hom(lambda_b), kernel_of_hom(lambda_c),
                    AbHom(AbelianGroup::free(0), AbelianGroup::free(0), IntMatrix(0, 0)),
                    AbHom(AbelianGroup::free(0), AbelianGroup::free(0), IntMatrix(0, 0)), {}};
  out.first = induced_on(top.first, out.ker_a, out.ker_b);
  out.second = induced_on(top.second, out.ker_b, out.ker_c);

  LadderCertificate& c = out.certificate;
  c.injective_at_a = out.first.is_injective();
  c.composite_zero = out.second.compose_after(out.first).is_zero();
  Subgroup k2 = kernel_of_hom(out.second);
  c.image_equals_kernel = true;
  for (std::size_t j = 0; j < k2.group->ngens(); ++j)
    if (!out.first.preimage(k2.incl.apply(k2.group->generator(j)))) c.image_equals_kernel = false;
  c.kernel_orders =
      order_text(out.ker_a.group) + " -> " + order_text(out.ker_b.group) + " -> " + order_text(out.ker_c.group);
  return out;
}

// ---------------------------------------------------------------------------

mpq_class reduce_mod_one(const mpq_class& q) {
  mpq_class r = q;
  r.canonicalize();
  mpz_class fl;
  mpz_fdiv_q(fl.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  r -= fl;
  r.canonicalize();
  return r;
}

mpq_class FiniteDual::eval(const IntVec& x, const IntVec& phi) const {
  IntVec s = source->smith_coords(x);
  IntVec p = dual->smith_coords(phi);
  const IntVec& f = source->invariant_factors();
  mpq_class acc = 0;
  for (std::size_t i = 0; i < s.size(); ++i) acc += mpq_class(s[i] * p[i], f[i]);
  return reduce_mod_one(acc);
}

FiniteDual dual_finite(const GroupPtr& a) {
  if (!a->is_finite()) throw PreconditionError("dual_finite: group " + a->describe() + " is infinite");
  return FiniteDual{AbelianGroup::from_factors(a->invariant_factors()), a};
}

}  // namespace wao
