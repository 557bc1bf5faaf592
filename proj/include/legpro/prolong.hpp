#ifndef LEGPRO_PROLONG_HPP
#define LEGPRO_PROLONG_HPP

// Contact prolongations of a subalgebra g of csp(V).
//
// Coordinates on Hom(V, g): the element with A_{e_i} = g_k has index
// k * dim V + i (column-major by g-index). Coordinates on Hom(wedge^2 V, V):
// pair (i < j) in lexicographic order, then the output coordinate.

#include <legpro/errors.hpp>
#include <legpro/exactla.hpp>
#include <legpro/parallel.hpp>
#include <legpro/symplectic.hpp>

#include <cstddef>
#include <string>
#include <vector>

namespace legpro {

inline std::size_t pair_count(std::size_t n) { return n * (n - 1) / 2; }

/// Index of (i, j), i < j, in the lexicographic list of pairs.
inline std::size_t pair_index(std::size_t n, std::size_t i, std::size_t j) {
  return i * n - i * (i + 1) / 2 + (j - i - 1);
}

/// An element of Hom(wedge^2 V, V), stored on pairs i < j.
struct TorsionTensor {
  std::size_t dim = 0;
  std::vector<Vector> values;  // values[pair_index(i, j)] = Pi(e_i, e_j)

  static TorsionTensor zero(std::size_t n) { return {n, std::vector<Vector>(pair_count(n), zero_vector(n))}; }

  Vector at(std::size_t i, std::size_t j) const {
    if (i == j) return zero_vector(dim);
    if (i > j) return -values[pair_index(dim, j, i)];
    return values[pair_index(dim, i, j)];
  }

  Vector flatten() const {
    Vector out;
    out.reserve(pair_count(dim) * dim);
    for (const auto& v : values) out.insert(out.end(), v.begin(), v.end());
    return out;
  }

  static TorsionTensor unflatten(std::size_t n, const Vector& flat) {
    if (flat.size() != pair_count(n) * n) throw std::invalid_argument("torsion vector has wrong length");
    TorsionTensor t = zero(n);
    for (std::size_t p = 0; p < t.values.size(); ++p)
      for (std::size_t o = 0; o < n; ++o) t.values[p][o] = flat[p * n + o];
    return t;
  }

  bool is_zero() const { return legpro::is_zero(flatten()); }

  friend TorsionTensor operator+(const TorsionTensor& a, const TorsionTensor& b) {
    return unflatten(a.dim, a.flatten() + b.flatten());
  }
  friend bool operator==(const TorsionTensor&, const TorsionTensor&) = default;
};

/// A in Hom(V, g): mats[i] = A_{e_i}, with its vector Abar.
struct ProlongationElement {
  SymplecticSpace space;
  Vector coords;              // Hom(V, g) coordinates; empty when built outside a g
  std::vector<Matrix> mats;
  Vector abar_vec;

  /// A_v = sum_i v_i A_{e_i}.
  Matrix at(const Vector& v) const {
    return combine(v, mats, space.dim(), space.dim());
  }
};

inline ProlongationElement element_from_coords(const LieSubalgebra& g, const Vector& coords) {
  const std::size_t n = g.space.dim();
  if (coords.size() != n * g.dim()) throw std::invalid_argument("Hom(V, g) coordinate vector has wrong length");
  ProlongationElement a{g.space, coords, std::vector<Matrix>(n, Matrix(n, n)), {}};
  for (std::size_t k = 0; k < g.dim(); ++k)
    for (std::size_t i = 0; i < n; ++i) {
      const Rational& c = coords[k * n + i];
      if (!c.is_zero()) a.mats[i] += c * g.basis[k];
    }
  a.abar_vec = abar(g.space, a.mats);
  return a;
}

/// delta A (e_i, e_j) = A_{e_i} e_j - A_{e_j} e_i - sigma(e_i, e_j) Abar.
inline TorsionTensor delta(const ProlongationElement& a) {
  const std::size_t n = a.space.dim();
  TorsionTensor t = TorsionTensor::zero(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      Vector& out = t.values[pair_index(n, i, j)];
      const Rational& s = a.space.gram(i, j);
      for (std::size_t o = 0; o < n; ++o) out[o] = a.mats[i](o, j) - a.mats[j](o, i) - s * a.abar_vec[o];
    }
  return t;
}

/// Matrix of delta: Hom(V, g) -> Hom(wedge^2 V, V) in the fixed coordinates.
inline Matrix delta_matrix(const LieSubalgebra& g, Parallelism par = {}) {
  const std::size_t n = g.space.dim();
  const std::size_t cols = n * g.dim();
  Matrix d(pair_count(n) * n, cols);
  parallel_for(cols, par, [&](std::size_t col) {
    const Vector column = delta(element_from_coords(g, unit_vector(cols, col))).flatten();
    for (std::size_t r = 0; r < column.size(); ++r) d(r, col) = column[r];
  });
  return d;
}

struct ProlongationSpace {
  std::size_t dim_hom = 0;     // dim V * dim g
  std::size_t rank_delta = 0;
  std::vector<ProlongationElement> basis;

  std::size_t dim() const { return basis.size(); }
};

inline ProlongationSpace prolongation_space(const LieSubalgebra& g, Parallelism par = {}) {
  if (!inside_csp(g)) throw InputError("algebra is not contained in csp(V)");
  if (!g.closed) throw InputError("algebra is not bracket-closed");
  const Matrix d = delta_matrix(g, par);
  const Subspace k = kernel_basis(d, par);
  ProlongationSpace out;
  out.dim_hom = d.cols();
  out.rank_delta = rank(d, par);
  for (const auto& v : k.basis()) {
    auto a = element_from_coords(g, v);
    if (!delta(a).is_zero()) throw std::logic_error("kernel vector of delta has nonzero image");
    out.basis.push_back(std::move(a));
  }
  if (out.rank_delta + out.basis.size() != out.dim_hom) throw std::logic_error("rank and kernel size disagree");
  return out;
}

/// A^w_u(v) = sigma(w,u) v + sigma(w,v) u + sigma(u,v) w, with Abar = 2w.
inline ProlongationElement sp_plus_family(const SymplecticSpace& space, const Vector& w) {
  const std::size_t n = space.dim();
  if (w.size() != n) throw std::invalid_argument("w has wrong length");
  const Vector gw = space.gram.transpose().apply(w);  // gw[k] = sigma(w, e_k)
  ProlongationElement a{space, {}, std::vector<Matrix>(n, Matrix(n, n)), Rational(2) * w};
  for (std::size_t i = 0; i < n; ++i) {
    Matrix& m = a.mats[i];
    for (std::size_t j = 0; j < n; ++j) {
      m(j, j) += gw[i];
      m(i, j) += gw[j];
      const Rational& s = space.gram(i, j);
      if (!s.is_zero())
        for (std::size_t o = 0; o < n; ++o) m(o, j) += s * w[o];
    }
  }
  return a;
}

/// True iff every A_{e_i} lies in span(g).
inline bool lies_in(const LieSubalgebra& g, const ProlongationElement& a) {
  const std::size_t n = g.space.dim();
  IncrementalBasis ib(n * n);
  for (const auto& b : g.basis) ib.insert(b.flatten());
  for (const auto& m : a.mats)
    if (!ib.contains(m.flatten())) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Identities at points of a Legendrian cone whose stabilizer is g.

struct IdentityViolation {
  std::string identity;
  Vector point;
  Vector tangent_vector;  // empty for the A_v(v) identity
  Vector residual;
};

struct IdentityReport {
  std::vector<IdentityViolation> violations;
  bool ok() const { return violations.empty(); }
};

inline constexpr const char* kEigenIdentity = "A_v(v) = 2 sigma(Abar, v) v";
inline constexpr const char* kTangentIdentity = "A_v(w) = sigma(Abar, v) w + sigma(Abar, w) v";

/// Checks A_v(v) = 2 sigma(Abar,v) v and, for each tangent basis vector w,
/// A_v(w) = sigma(Abar,v) w + sigma(Abar,w) v. The tangent must contain v.
inline IdentityReport check_point_identities(const ProlongationElement& a, const Vector& v, const Subspace& tangent) {
  if (!tangent.contains(v)) throw std::invalid_argument("tangent space does not contain the point");
  const auto& space = a.space;
  const Matrix av = a.at(v);
  const Rational sv = space.form(a.abar_vec, v);
  IdentityReport report;
  Vector r = av.apply(v) - Rational(2) * sv * v;
  if (!is_zero(r)) report.violations.push_back({kEigenIdentity, v, {}, std::move(r)});
  for (const auto& w : tangent.basis()) {
    const Rational sw = space.form(a.abar_vec, w);
    Vector rw = av.apply(w) - sv * w - sw * v;
    if (!is_zero(rw)) report.violations.push_back({kTangentIdentity, v, w, std::move(rw)});
  }
  return report;
}

struct EulerWitness {
  Matrix semisimple;       // S_v
  Vector point;            // v rescaled so that sigma(Abar, v) = 1
  bool eigen_on_point = false;     // S_v v = 2 v
  bool preserves_tangent = false;  // S_v T subset T
  bool induced_identity = false;   // (S_v - 1) T subset line(v)
  bool nilpotent_remainder = false;
  bool commutes = false;
  Rational point_weight = 2;
  Rational quotient_weight = 1;

  bool ok() const { return eigen_on_point && preserves_tangent && induced_identity && nilpotent_remainder && commutes; }
};

/// Semisimple part S_v of A_v after rescaling v to sigma(Abar, v) = 1, with
/// the checks showing exp(t S_v) fixes [v] and acts trivially on P(T/v).
inline EulerWitness euler_symmetry_witness(const ProlongationElement& a, const Vector& v, const Subspace& tangent) {
  const auto& space = a.space;
  const Rational sv = space.form(a.abar_vec, v);
  if (sv.is_zero()) throw ResampleError("point lies on the hyperplane sigma(Abar, .) = 0");
  if (!tangent.contains(v)) throw std::invalid_argument("tangent space does not contain the point");
  EulerWitness w;
  w.point = (Rational(1) / sv) * v;
  const Matrix av = a.at(w.point);
  w.semisimple = jordan_semisimple_part(av);
  const Matrix& s = w.semisimple;
  w.eigen_on_point = s.apply(w.point) == Rational(2) * w.point;
  w.preserves_tangent = true;
  w.induced_identity = true;
  const auto line = Subspace::span(space.dim(), {w.point});
  for (const auto& t : tangent.basis()) {
    const Vector st = s.apply(t);
    if (!tangent.contains(st)) w.preserves_tangent = false;
    if (!line.contains(st - t)) w.induced_identity = false;
  }
  w.nilpotent_remainder = is_nilpotent(av - s);
  w.commutes = s * av == av * s;
  return w;
}

}  // namespace legpro

#endif  // LEGPRO_PROLONG_HPP
