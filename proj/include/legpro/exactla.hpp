#ifndef LEGPRO_EXACTLA_HPP
#define LEGPRO_EXACTLA_HPP

// Exact dense linear algebra over the rationals.
//
// Elimination is fraction-free: every row is scaled to integers and reduced
// with Bareiss' recurrence, pivoting on the first nonzero entry in column
// order. Reduced echelon forms are recovered from the integer echelon form
// afterwards, so results are identical for every thread count.

#include <legpro/matrix.hpp>
#include <legpro/parallel.hpp>
#include <legpro/rational.hpp>

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace legpro {

/// A linear subspace of Q^n given by an independent spanning list.
class Subspace {
public:
  Subspace() = default;
  explicit Subspace(std::size_t ambient_dim) : ambient_dim_(ambient_dim) {}

  /// Keeps the vectors that are independent of the ones before them.
  static Subspace span(std::size_t ambient_dim, const std::vector<Vector>& vectors);

  /// Trusts that `basis` is independent; checked with rank().
  static Subspace from_basis(std::size_t ambient_dim, std::vector<Vector> basis);

  static Subspace whole(std::size_t ambient_dim) {
    std::vector<Vector> b;
    for (std::size_t i = 0; i < ambient_dim; ++i) b.push_back(unit_vector(ambient_dim, i));
    return from_basis(ambient_dim, std::move(b));
  }

  std::size_t ambient_dim() const { return ambient_dim_; }
  std::size_t dim() const { return basis_.size(); }
  const std::vector<Vector>& basis() const { return basis_; }

  /// Basis vectors as columns (ambient_dim x dim).
  Matrix as_columns() const { return Matrix::from_columns(ambient_dim_, basis_); }

  bool contains(const Vector& v) const;
  bool contains(const Subspace& other) const;
  friend bool same_subspace(const Subspace& a, const Subspace& b) {
    return a.ambient_dim_ == b.ambient_dim_ && a.dim() == b.dim() && a.contains(b);
  }

private:
  std::size_t ambient_dim_ = 0;
  std::vector<Vector> basis_;
};

namespace detail {

using IntRow = std::vector<mpz_class>;

inline IntRow to_integer_row(std::span<const Rational> row) {
  mpz_class l = 1;
  for (const auto& x : row)
    if (!x.is_zero()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.denominator().get_mpz_t());
  IntRow out(row.size());
  for (std::size_t j = 0; j < row.size(); ++j) {
    if (row[j].is_zero()) continue;
    out[j] = row[j].numerator() * (l / row[j].denominator());
  }
  return out;
}

struct IntegerEchelon {
  std::vector<IntRow> rows;           // first pivots.size() rows are nonzero
  std::vector<std::size_t> pivots;    // pivot column of each nonzero row
};

/// Bareiss fraction-free forward elimination. Each row update of a step is
/// independent, so large steps are spread over `par` workers.
inline IntegerEchelon bareiss_echelon(const Matrix& m, Parallelism par = {}) {
  IntegerEchelon e;
  const std::size_t nrows = m.rows();
  const std::size_t ncols = m.cols();
  e.rows.reserve(nrows);
  for (std::size_t i = 0; i < nrows; ++i) e.rows.push_back(to_integer_row(m.row(i)));

  mpz_class prev = 1;
  std::size_t k = 0;
  for (std::size_t c = 0; c < ncols && k < nrows; ++c) {
    std::size_t p = k;
    while (p < nrows && sgn(e.rows[p][c]) == 0) ++p;
    if (p == nrows) continue;
    std::swap(e.rows[k], e.rows[p]);
    const IntRow& pivot_row = e.rows[k];
    const mpz_class& pivot = pivot_row[c];
    auto update = [&](std::size_t off) {
      IntRow& r = e.rows[k + 1 + off];
      if (sgn(r[c]) == 0) {
        // a[k][c]*a[i][j] / prev; exact because prev divides every minor.
        for (std::size_t j = c + 1; j < ncols; ++j) {
          if (sgn(r[j]) == 0) continue;
          r[j] *= pivot;
          mpz_divexact(r[j].get_mpz_t(), r[j].get_mpz_t(), prev.get_mpz_t());
        }
        return;
      }
      mpz_class t;
      for (std::size_t j = c + 1; j < ncols; ++j) {
        t = pivot * r[j] - r[c] * pivot_row[j];
        mpz_divexact(r[j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
      r[c] = 0;
    };
    const std::size_t below = nrows - k - 1;
    if (below >= 32 && par.threads > 1) {
      parallel_for(below, par, update);
    } else {
      for (std::size_t off = 0; off < below; ++off) update(off);
    }
    prev = pivot;
    e.pivots.push_back(c);
    ++k;
  }
  e.rows.resize(k);
  return e;
}

}  // namespace detail

/// Reduced row echelon form: only the nonzero rows are kept.
struct ReducedEchelon {
  Matrix rows;                       // rank x cols, pivot entries equal 1
  std::vector<std::size_t> pivots;   // strictly increasing
};

inline ReducedEchelon reduced_echelon(const Matrix& m, Parallelism par = {}) {
  auto e = detail::bareiss_echelon(m, par);
  const std::size_t r = e.pivots.size();
  Matrix R(r, m.cols());
  for (std::size_t i = 0; i < r; ++i) {
    const Rational inv = Rational(mpz_class(1), e.rows[i][e.pivots[i]]);
    for (std::size_t j = e.pivots[i]; j < m.cols(); ++j)
      if (sgn(e.rows[i][j]) != 0) R(i, j) = Rational(e.rows[i][j]) * inv;
  }
  // Back substitution, bottom pivot first.
  for (std::size_t ii = r; ii-- > 0;) {
    const std::size_t pc = e.pivots[ii];
    for (std::size_t i = 0; i < ii; ++i) {
      const Rational f = R(i, pc);
      if (f.is_zero()) continue;
      for (std::size_t j = pc; j < m.cols(); ++j)
        if (!R(ii, j).is_zero()) R(i, j) -= f * R(ii, j);
    }
  }
  return {std::move(R), std::move(e.pivots)};
}

inline std::size_t rank(const Matrix& m, Parallelism par = {}) {
  return detail::bareiss_echelon(m, par).pivots.size();
}

inline std::size_t rank_of_vectors(std::size_t ambient_dim, const std::vector<Vector>& vs) {
  return rank(Matrix::from_rows(ambient_dim, vs));
}

/// Basis of the right null space, one vector per free column of the reduced
/// echelon form (free entry 1, other free entries 0).
inline Subspace kernel_basis(const Matrix& m, Parallelism par = {}) {
  const auto re = reduced_echelon(m, par);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : re.pivots) is_pivot[p] = true;
  std::vector<Vector> basis;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    Vector v = zero_vector(m.cols());
    v[f] = 1;
    for (std::size_t i = 0; i < re.pivots.size(); ++i) v[re.pivots[i]] = -re.rows(i, f);
    basis.push_back(std::move(v));
  }
  return Subspace::from_basis(m.cols(), std::move(basis));
}

struct AffineSolution {
  std::optional<Vector> particular;  // empty when the system is inconsistent
  Subspace kernel;
};

inline AffineSolution solve_affine(const Matrix& m, const Vector& b, Parallelism par = {}) {
  if (b.size() != m.rows()) throw std::invalid_argument("right-hand side length differs from row count");
  Matrix aug(m.rows(), m.cols() + 1);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) aug(i, j) = m(i, j);
    aug(i, m.cols()) = b[i];
  }
  const auto re = reduced_echelon(aug, par);
  AffineSolution out{std::nullopt, kernel_basis(m, par)};
  if (!re.pivots.empty() && re.pivots.back() == m.cols()) return out;
  Vector x = zero_vector(m.cols());
  for (std::size_t i = 0; i < re.pivots.size(); ++i) x[re.pivots[i]] = re.rows(i, m.cols());
  out.particular = std::move(x);
  return out;
}

inline std::optional<Matrix> inverse(const Matrix& m) {
  if (!m.is_square()) throw std::invalid_argument("inverse of non-square matrix");
  const std::size_t n = m.rows();
  Matrix aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n + i) = 1;
  }
  const auto re = reduced_echelon(aug);
  if (re.pivots.size() < n || re.pivots[n - 1] != n - 1) return std::nullopt;
  Matrix inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = re.rows(i, n + j);
  return inv;
}

/// Fully reduced basis that grows one vector at a time; answers span
/// membership without re-eliminating.
class IncrementalBasis {
public:
  explicit IncrementalBasis(std::size_t ambient_dim) : n_(ambient_dim) {}

  std::size_t dim() const { return rows_.size(); }

  Vector reduce(Vector v) const {
    for (std::size_t k = 0; k < rows_.size(); ++k) {
      const Rational f = v[pivots_[k]];
      if (f.is_zero()) continue;
      for (std::size_t j = 0; j < n_; ++j)
        if (!rows_[k][j].is_zero()) v[j] -= f * rows_[k][j];
    }
    return v;
  }

  bool contains(const Vector& v) const { return is_zero(reduce(v)); }

  /// Returns true when `v` enlarged the span.
  bool insert(const Vector& v) {
    if (v.size() != n_) throw std::invalid_argument("vector length differs from ambient dimension");
    Vector r = reduce(v);
    std::size_t p = 0;
    while (p < n_ && r[p].is_zero()) ++p;
    if (p == n_) return false;
    const Rational inv = Rational(1) / r[p];
    for (auto& x : r) x *= inv;
    for (auto& row : rows_) {
      const Rational f = row[p];
      if (f.is_zero()) continue;
      for (std::size_t j = 0; j < n_; ++j)
        if (!r[j].is_zero()) row[j] -= f * r[j];
    }
    rows_.push_back(std::move(r));
    pivots_.push_back(p);
    return true;
  }

private:
  std::size_t n_;
  std::vector<Vector> rows_;
  std::vector<std::size_t> pivots_;
};

inline Subspace Subspace::span(std::size_t ambient_dim, const std::vector<Vector>& vectors) {
  IncrementalBasis ib(ambient_dim);
  Subspace s(ambient_dim);
  for (const auto& v : vectors)
    if (ib.insert(v)) s.basis_.push_back(v);
  return s;
}

inline Subspace Subspace::from_basis(std::size_t ambient_dim, std::vector<Vector> basis) {
  for (const auto& v : basis)
    if (v.size() != ambient_dim) throw std::invalid_argument("basis vector length differs from ambient dimension");
  if (!basis.empty() && rank_of_vectors(ambient_dim, basis) != basis.size())
    throw std::invalid_argument("basis vectors are linearly dependent");
  Subspace s(ambient_dim);
  s.basis_ = std::move(basis);
  return s;
}

inline bool Subspace::contains(const Vector& v) const {
  IncrementalBasis ib(ambient_dim_);
  for (const auto& b : basis_) ib.insert(b);
  return ib.contains(v);
}

inline bool Subspace::contains(const Subspace& other) const {
  if (other.ambient_dim_ != ambient_dim_) return false;
  IncrementalBasis ib(ambient_dim_);
  for (const auto& b : basis_) ib.insert(b);
  for (const auto& v : other.basis_)
    if (!ib.contains(v)) return false;
  return true;
}

/// Complement of `s` spanned by standard unit vectors: e_0, e_1, ... are
/// appended in index order, keeping those that raise the rank.
inline Subspace extend_to_complement(const Subspace& s) {
  const std::size_t n = s.ambient_dim();
  IncrementalBasis ib(n);
  for (const auto& b : s.basis()) ib.insert(b);
  std::vector<Vector> w;
  for (std::size_t i = 0; i < n && ib.dim() < n; ++i) {
    Vector e = unit_vector(n, i);
    if (ib.insert(e)) w.push_back(std::move(e));
  }
  return Subspace::from_basis(n, std::move(w));
}

// ---------------------------------------------------------------------------
// Univariate polynomials and the Jordan-Chevalley semisimple part.

/// Dense polynomial, coefficients from the constant term upward, no trailing zeros.
class Polynomial {
public:
  Polynomial() = default;
  explicit Polynomial(Vector coeffs) : c_(std::move(coeffs)) { trim(); }

  static Polynomial monomial(std::size_t degree, Rational coeff = 1) {
    Vector c = zero_vector(degree + 1);
    c[degree] = std::move(coeff);
    return Polynomial(std::move(c));
  }

  bool is_zero() const { return c_.empty(); }
  /// Degree; -1 for the zero polynomial.
  long degree() const { return static_cast<long>(c_.size()) - 1; }
  const Vector& coeffs() const { return c_; }
  const Rational& lead() const { return c_.back(); }

  Polynomial derivative() const {
    if (c_.size() <= 1) return {};
    Vector d(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = Rational(static_cast<long>(i)) * c_[i];
    return Polynomial(std::move(d));
  }

  Polynomial monic() const {
    if (is_zero()) return {};
    const Rational inv = Rational(1) / lead();
    Vector d = c_;
    for (auto& x : d) x *= inv;
    return Polynomial(std::move(d));
  }

  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) {
    Vector d = zero_vector(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t i = 0; i < a.c_.size(); ++i) d[i] += a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) d[i] -= b.c_[i];
    return Polynomial(std::move(d));
  }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    Vector d = zero_vector(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) d[i + j] += a.c_[i] * b.c_[j];
    return Polynomial(std::move(d));
  }

  /// Euclidean division; returns (quotient, remainder).
  friend std::pair<Polynomial, Polynomial> divmod(const Polynomial& a, const Polynomial& b) {
    if (b.is_zero()) throw std::domain_error("polynomial division by zero");
    Vector rem = a.c_;
    const long db = b.degree();
    if (a.degree() < db) return {Polynomial{}, a};
    Vector quot = zero_vector(static_cast<std::size_t>(a.degree() - db + 1));
    for (long k = a.degree() - db; k >= 0; --k) {
      const Rational f = rem[static_cast<std::size_t>(k + db)] / b.lead();
      quot[static_cast<std::size_t>(k)] = f;
      if (f.is_zero()) continue;
      for (long j = 0; j <= db; ++j) rem[static_cast<std::size_t>(k + j)] -= f * b.c_[static_cast<std::size_t>(j)];
    }
    return {Polynomial(std::move(quot)), Polynomial(std::move(rem))};
  }

  /// Monic greatest common divisor.
  friend Polynomial gcd(Polynomial a, Polynomial b) {
    while (!b.is_zero()) {
      auto r = divmod(a, b).second;
      a = std::move(b);
      b = std::move(r);
    }
    return a.monic();
  }

  /// Horner evaluation at a square matrix.
  Matrix at(const Matrix& m) const {
    const std::size_t n = m.rows();
    Matrix r(n, n);
    for (std::size_t k = c_.size(); k-- > 0;) {
      r = r * m;
      for (std::size_t i = 0; i < n; ++i) r(i, i) += c_[k];
    }
    return r;
  }

  friend bool operator==(const Polynomial&, const Polynomial&) = default;

private:
  void trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
  }
  Vector c_;
};

/// Minimal polynomial (monic): the first power M^k lying in the span of
/// I, M, ..., M^{k-1}.
inline Polynomial minimal_polynomial(const Matrix& m) {
  if (!m.is_square()) throw std::invalid_argument("minimal polynomial of non-square matrix");
  const std::size_t n = m.rows();
  std::vector<Vector> powers{Matrix::identity(n).flatten()};
  Matrix power = Matrix::identity(n);
  for (std::size_t k = 1; k <= n; ++k) {
    power = power * m;
    const Vector target = power.flatten();
    const auto sol = solve_affine(Matrix::from_columns(n * n, powers), target);
    if (sol.particular) {
      Vector c = zero_vector(k + 1);
      for (std::size_t j = 0; j < k; ++j) c[j] = -(*sol.particular)[j];
      c[k] = 1;
      return Polynomial(std::move(c));
    }
    powers.push_back(target);
  }
  throw std::logic_error("minimal polynomial exceeds matrix size");  // Cayley-Hamilton
}

inline Polynomial squarefree_part(const Polynomial& p) {
  return divmod(p, gcd(p, p.derivative())).first.monic();
}

inline bool is_nilpotent(const Matrix& m) {
  if (!m.is_square()) return false;
  Matrix p = Matrix::identity(m.rows());
  for (std::size_t k = 0; k < m.rows(); ++k) p = p * m;
  return p.is_zero();
}

/// Semisimple part S of M (M = S + N, N nilpotent, SN = NS), by Newton's
/// iteration S <- S - p(S) p'(S)^{-1} on the squarefree part p of the
/// minimal polynomial. Stays inside Q[M].
inline Matrix jordan_semisimple_part(const Matrix& m) {
  if (!m.is_square()) throw std::invalid_argument("semisimple part of non-square matrix");
  const Polynomial p = squarefree_part(minimal_polynomial(m));
  const Polynomial dp = p.derivative();
  Matrix s = m;
  // Quadratic convergence: log2(n) + 1 rounds suffice.
  for (std::size_t round = 0; round <= m.rows() + 1; ++round) {
    const Matrix ps = p.at(s);
    if (ps.is_zero()) return s;
    const auto dinv = inverse(dp.at(s));
    if (!dinv) throw std::logic_error("p'(S) singular in Newton iteration");
    s = s - ps * *dinv;
  }
  throw std::logic_error("Newton iteration for the semisimple part did not terminate");
}

}  // namespace legpro

#endif  // LEGPRO_EXACTLA_HPP
