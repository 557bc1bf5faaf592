#ifndef LEGPRO_SYMPLECTIC_HPP
#define LEGPRO_SYMPLECTIC_HPP

#include <legpro/exactla.hpp>
#include <legpro/matrix.hpp>

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

namespace legpro {

/// Standard symplectic space of dimension 2m. Coordinates are ordered
/// (a, x_1..x_{m-1}, y_1..y_{m-1}, b) and
///   sigma(u, u') = a b' - b a' + sum_i (x_i y'_i - y_i x'_i).
struct SymplecticSpace {
  std::size_t m = 0;
  Matrix gram;  // gram(i, j) = sigma(e_i, e_j)

  std::size_t dim() const { return 2 * m; }

  std::size_t a_index() const { return 0; }
  std::size_t x_index(std::size_t i) const { return 1 + i; }
  std::size_t y_index(std::size_t i) const { return m + i; }
  std::size_t b_index() const { return 2 * m - 1; }

  Rational form(const Vector& u, const Vector& v) const { return dot(u, gram.apply(v)); }

  friend bool operator==(const SymplecticSpace& a, const SymplecticSpace& b) { return a.m == b.m && a.gram == b.gram; }
};

inline SymplecticSpace standard_space(std::size_t m) {
  if (m == 0) throw std::invalid_argument("symplectic half-dimension m must be at least 1");
  SymplecticSpace s{m, Matrix(2 * m, 2 * m)};
  s.gram(s.a_index(), s.b_index()) = 1;
  s.gram(s.b_index(), s.a_index()) = -1;
  for (std::size_t i = 0; i + 1 < m; ++i) {
    s.gram(s.x_index(i), s.y_index(i)) = 1;
    s.gram(s.y_index(i), s.x_index(i)) = -1;
  }
  return s;
}

/// Element of csp(V) together with its conformal factor (2/dim V) tr(mat).
struct CspElement {
  Matrix mat;
  Rational conformal_factor;
};

inline Rational conformal_factor_of(const SymplecticSpace& space, const Matrix& mat) {
  return Rational(2, static_cast<long>(space.dim())) * mat.trace();
}

/// The defining identity  a^T G + G a = (2/dim V) tr(a) G  checked entrywise,
/// i.e. on every pair of basis vectors.
inline std::optional<CspElement> csp_membership(const SymplecticSpace& space, const Matrix& mat) {
  const std::size_t n = space.dim();
  if (mat.rows() != n || mat.cols() != n) throw std::invalid_argument("matrix size differs from dim V");
  const Rational c = conformal_factor_of(space, mat);
  const Matrix lhs = mat.transpose() * space.gram + space.gram * mat;
  if (!(lhs == c * space.gram)) return std::nullopt;
  return CspElement{mat, c};
}

/// Lie subalgebra of gl(V) given by independent matrices.
struct LieSubalgebra {
  SymplecticSpace space;
  std::vector<Matrix> basis;
  bool closed = false;

  std::size_t dim() const { return basis.size(); }
};

/// True iff every commutator of basis elements lies in their span.
inline bool bracket_closed(const std::vector<Matrix>& basis) {
  if (basis.empty()) return true;
  const std::size_t n = basis.front().rows();
  IncrementalBasis ib(n * n);
  for (const auto& b : basis) ib.insert(b.flatten());
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = i + 1; j < basis.size(); ++j)
      if (!ib.contains(commutator(basis[i], basis[j]).flatten())) return false;
  return true;
}

/// Builds a subalgebra from spanning matrices: drops dependent ones and
/// certifies bracket closure.
inline LieSubalgebra make_subalgebra(const SymplecticSpace& space, const std::vector<Matrix>& spanning) {
  const std::size_t n = space.dim();
  IncrementalBasis ib(n * n);
  LieSubalgebra g{space, {}, false};
  for (const auto& m : spanning) {
    if (m.rows() != n || m.cols() != n) throw std::invalid_argument("generator size differs from dim V");
    if (ib.insert(m.flatten())) g.basis.push_back(m);
  }
  g.closed = bracket_closed(g.basis);
  return g;
}

/// True iff every basis element is conformal symplectic.
inline bool inside_csp(const LieSubalgebra& g) {
  for (const auto& b : g.basis)
    if (!csp_membership(g.space, b)) return false;
  return true;
}

/// Basis of csp(V) as the kernel of the linear constraint system in the
/// entries of a, in kernel (free-column) order.
inline LieSubalgebra csp_basis(const SymplecticSpace& space) {
  const std::size_t n = space.dim();
  const Rational two_over_n(2, static_cast<long>(n));
  // Unknown a(p, q) sits at column p * n + q; one row per pair (v, w).
  Matrix constraints(n * n, n * n);
  for (std::size_t v = 0; v < n; ++v)
    for (std::size_t w = 0; w < n; ++w) {
      const std::size_t row = v * n + w;
      for (std::size_t p = 0; p < n; ++p) {
        constraints(row, p * n + v) += space.gram(p, w);  // sigma(a e_v, e_w)
        constraints(row, p * n + w) += space.gram(v, p);  // sigma(e_v, a e_w)
        constraints(row, p * n + p) -= two_over_n * space.gram(v, w);
      }
    }
  const Subspace k = kernel_basis(constraints);
  LieSubalgebra g{space, {}, false};
  for (const auto& v : k.basis()) g.basis.push_back(Matrix::unflatten(n, n, v));
  g.closed = bracket_closed(g.basis);
  return g;
}

/// The unique vector with sigma(abar, e_i) = (2/dim V) tr(A_{e_i}).
/// As sigma(abar, e_i) = (G^T abar)_i, abar = G^{-T} c.
inline Vector abar(const SymplecticSpace& space, const std::vector<Matrix>& a) {
  const std::size_t n = space.dim();
  if (a.size() != n) throw std::invalid_argument("need one matrix A_{e_i} per basis vector");
  Vector c(n);
  for (std::size_t i = 0; i < n; ++i) c[i] = conformal_factor_of(space, a[i]);
  const auto sol = solve_affine(space.gram.transpose(), c);
  if (!sol.particular) throw std::logic_error("symplectic gram is singular");
  return *sol.particular;
}

}  // namespace legpro

#endif  // LEGPRO_SYMPLECTIC_HPP
