#ifndef LEGPRO_LEGENDRIAN_HPP
#define LEGPRO_LEGENDRIAN_HPP

// Legendrian varieties Z_P attached to cubic forms P in n variables, living
// in P(V) with dim V = 2n + 2 and the coordinates (a, x, y, b) of
// standard_space(n + 1). The affine chart is
//   x  ->  z(x) = (1, x, grad P(x), -P(x)).

#include <legpro/errors.hpp>
#include <legpro/exactla.hpp>
#include <legpro/parallel.hpp>
#include <legpro/symplectic.hpp>

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace legpro {

struct Monomial {
  std::array<std::size_t, 3> ijk{};  // i <= j <= k
  Rational coeff;
};

/// Cubic form P(x) = T(x, x, x) with T symmetric. Built from monomial
/// coefficients: c x_i x_j x_k is spread evenly over the distinct
/// permutations of (i, j, k).
class CubicForm {
public:
  CubicForm() = default;

  static CubicForm from_monomials(std::size_t n, const std::vector<Monomial>& monomials) {
    if (n == 0) throw InputError("cubic form needs at least one variable");
    CubicForm p;
    p.n_ = n;
    p.t_.assign(n * n * n, Rational(0));
    for (const auto& mono : monomials) {
      const auto [i, j, k] = mono.ijk;
      if (!(i <= j && j <= k)) throw InputError("monomial indices must satisfy i <= j <= k");
      if (k >= n) throw InputError("monomial index out of range");
      long perms = 6;
      if (i == j && j == k) perms = 1;
      else if (i == j || j == k) perms = 3;
      const Rational share = mono.coeff / Rational(perms);
      const std::array<std::size_t, 3> idx{i, j, k};
      std::array<std::size_t, 3> q = idx;
      // distinct permutations of a sorted triple
      do {
        p.t_[(q[0] * n + q[1]) * n + q[2]] += share;
      } while (std::next_permutation(q.begin(), q.end()));
      p.monomials_.push_back(mono);
    }
    return p;
  }

  std::size_t n() const { return n_; }
  const std::vector<Monomial>& monomials() const { return monomials_; }
  const Rational& tensor(std::size_t i, std::size_t j, std::size_t k) const { return t_[(i * n_ + j) * n_ + k]; }

  Rational trilinear(const Vector& u, const Vector& v, const Vector& w) const {
    Rational s;
    for (std::size_t i = 0; i < n_; ++i) {
      if (u[i].is_zero()) continue;
      for (std::size_t j = 0; j < n_; ++j) {
        if (v[j].is_zero()) continue;
        for (std::size_t k = 0; k < n_; ++k)
          if (!w[k].is_zero() && !tensor(i, j, k).is_zero()) s += tensor(i, j, k) * u[i] * v[j] * w[k];
      }
    }
    return s;
  }

  Rational value(const Vector& x) const { return trilinear(x, x, x); }

  /// dP/dx_i = 3 T(e_i, x, x)
  Vector gradient(const Vector& x) const {
    Vector g(n_);
    for (std::size_t i = 0; i < n_; ++i) g[i] = Rational(3) * trilinear(unit_vector(n_, i), x, x);
    return g;
  }

  /// d^2P/dx_i dx_j = 6 T(e_i, e_j, x)
  Matrix hessian(const Vector& x) const {
    Matrix h(n_, n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) {
        Rational s;
        for (std::size_t k = 0; k < n_; ++k) s += tensor(i, j, k) * x[k];
        h(i, j) = Rational(6) * s;
      }
    return h;
  }

  /// Short human-readable form, e.g. "x0^3 + x1^3".
  std::string digest() const {
    std::ostringstream os;
    bool first = true;
    for (const auto& mono : monomials_) {
      if (!first) os << " + ";
      first = false;
      if (!(mono.coeff == Rational(1))) os << "(" << mono.coeff << ")*";
      const auto [i, j, k] = mono.ijk;
      if (i == j && j == k) os << "x" << i << "^3";
      else if (i == j) os << "x" << i << "^2*x" << k;
      else if (j == k) os << "x" << i << "*x" << j << "^2";
      else os << "x" << i << "*x" << j << "*x" << k;
    }
    if (first) os << "0";
    return os.str();
  }

private:
  std::size_t n_ = 0;
  std::vector<Rational> t_;
  std::vector<Monomial> monomials_;
};

/// Surjectivity of the Hessian Sym^2 W -> W^dual, w1.w2 -> P(w1, w2, .).
inline bool cubic_nondegenerate(const CubicForm& p) {
  const std::size_t n = p.n();
  std::vector<Vector> images;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      Vector img(n);
      for (std::size_t k = 0; k < n; ++k) img[k] = p.tensor(i, j, k);
      images.push_back(std::move(img));
    }
  return rank_of_vectors(n, images) == n;
}

inline SymplecticSpace space_for(const CubicForm& p) { return standard_space(p.n() + 1); }

inline Vector zp_point(const CubicForm& p, const Vector& x) {
  const std::size_t n = p.n();
  if (x.size() != n) throw std::invalid_argument("point has wrong number of coordinates");
  Vector z = zero_vector(2 * n + 2);
  z[0] = 1;
  const Vector g = p.gradient(x);
  for (std::size_t i = 0; i < n; ++i) {
    z[1 + i] = x[i];
    z[1 + n + i] = g[i];
  }
  z[2 * n + 1] = -p.value(x);
  return z;
}

/// d z / d x_i = (0, e_i, Hess P(x) e_i, -dP/dx_i(x)).
inline Vector zp_partial(const CubicForm& p, const Vector& x, std::size_t i) {
  const std::size_t n = p.n();
  const Matrix h = p.hessian(x);
  const Vector g = p.gradient(x);
  Vector d = zero_vector(2 * n + 2);
  d[1 + i] = 1;
  for (std::size_t j = 0; j < n; ++j) d[1 + n + j] = h(j, i);
  d[2 * n + 1] = -g[i];
  return d;
}

/// Frame {z(x), dz/dx_1, ..., dz/dx_n} of the tangent space of the cone.
inline std::vector<Vector> zp_frame(const CubicForm& p, const Vector& x) {
  std::vector<Vector> frame{zp_point(p, x)};
  for (std::size_t i = 0; i < p.n(); ++i) frame.push_back(zp_partial(p, x, i));
  return frame;
}

inline Subspace zp_tangent(const CubicForm& p, const Vector& x) {
  auto frame = zp_frame(p, x);
  const std::size_t dim = 2 * p.n() + 2;
  if (rank_of_vectors(dim, frame) != p.n() + 1) throw NonImmersiveError("tangent frame is degenerate");
  return Subspace::from_basis(dim, std::move(frame));
}

/// A point of the affine cone with its tangent space.
struct LegendrianSample {
  Vector x;
  Vector point;
  Subspace tangent;
};

inline LegendrianSample sample_at(const CubicForm& p, const Vector& x) {
  return {x, zp_point(p, x), zp_tangent(p, x)};
}

/// Sigma vanishes on every pair of vectors in `vs`.
inline bool isotropic(const SymplecticSpace& space, const std::vector<Vector>& vs) {
  for (std::size_t i = 0; i < vs.size(); ++i)
    for (std::size_t j = i + 1; j < vs.size(); ++j)
      if (!space.form(vs[i], vs[j]).is_zero()) return false;
  return true;
}

struct OsculatingFlag {
  std::array<std::size_t, 3> dims{};
  bool perp_check = false;  // F2 = { u : sigma(z, u) = 0 }
  bool span_check = false;  // F3 = V
};

/// Flag F1 = tangent, F2 = F1 + second derivatives, F3 = F2 + third
/// derivatives of the chart at x.
inline OsculatingFlag osculating_flag(const CubicForm& p, const Vector& x) {
  if (!cubic_nondegenerate(p)) throw InputError("osculating flag requires a nondegenerate cubic");
  const std::size_t n = p.n();
  const std::size_t dim = 2 * n + 2;
  const SymplecticSpace space = space_for(p);
  std::vector<Vector> f = zp_frame(p, x);
  OsculatingFlag out;
  out.dims[0] = rank_of_vectors(dim, f);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      Vector d = zero_vector(dim);
      Rational hij;
      for (std::size_t k = 0; k < n; ++k) {
        d[1 + n + k] = Rational(6) * p.tensor(i, j, k);
        hij += p.tensor(i, j, k) * x[k];
      }
      d[dim - 1] = Rational(-6) * hij;
      f.push_back(std::move(d));
    }
  const std::size_t second = f.size();
  out.dims[1] = rank_of_vectors(dim, f);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      for (std::size_t k = j; k < n; ++k) {
        Vector d = zero_vector(dim);
        d[dim - 1] = Rational(-6) * p.tensor(i, j, k);
        f.push_back(std::move(d));
      }
  out.dims[2] = rank_of_vectors(dim, f);
  if (out.dims != std::array<std::size_t, 3>{n + 1, 2 * n + 1, 2 * n + 2})
    throw NonGeneralPointError("osculating flag dimensions are not generic at this point");
  const Vector z = f.front();
  out.perp_check = true;
  for (std::size_t i = 0; i < second; ++i)
    if (!space.form(z, f[i]).is_zero()) out.perp_check = false;
  out.span_check = out.dims[2] == dim;
  return out;
}

/// diag(0, 1 (x n), 2 (x n), 3): the infinitesimal generator of
/// z(t x) = diag(1, t, t^2, t^3) z(x).
inline Matrix grading_element(std::size_t n) {
  Vector d = zero_vector(2 * n + 2);
  for (std::size_t i = 0; i < n; ++i) {
    d[1 + i] = 1;
    d[1 + n + i] = 2;
  }
  d[2 * n + 1] = 3;
  return Matrix::diagonal(d);
}

// ---------------------------------------------------------------------------
// Sampling and infinitesimal stabilizers.

inline constexpr std::uint64_t kDefaultSeed = 20240601;

/// Deterministic point source. std::mt19937_64 is fully specified by the
/// standard; values are reduced by hand so every platform draws the same points.
class PointSampler {
public:
  explicit PointSampler(std::uint64_t seed) : rng_(seed) {}

  /// Integer grid point with coordinates in {-3, ..., 3}.
  Vector grid_point(std::size_t n) {
    Vector x(n);
    for (auto& c : x) c = Rational(static_cast<long>(rng_() % 7) - 3);
    return x;
  }

  /// Rational point with numerators in [-6, 6] and denominators in {1, 2, 3}.
  Vector rational_point(std::size_t n) {
    Vector x(n);
    for (auto& c : x) c = rational();
    return x;
  }

  /// Nonzero rational scale factor.
  Rational scale() {
    Rational r;
    do r = rational();
    while (r.is_zero());
    return r;
  }

private:
  Rational rational() {
    const long num = static_cast<long>(rng_() % 13) - 6;
    const long den = static_cast<long>(rng_() % 3) + 1;
    return Rational(num, den);
  }
  std::mt19937_64 rng_;
};

enum class Ambient { Csp, Gl };

struct SamplerConfig {
  std::uint64_t seed = kDefaultSeed;
  std::size_t batch_size = 5;
  std::size_t stable_batches = 3;
  std::size_t max_batches = 40;
  std::size_t recheck_points = 5;
  Parallelism par{};
};

struct StabilizerResult {
  LieSubalgebra algebra;
  std::size_t samples = 0;      // points used to fix the answer
  bool recheck_stable = false;  // extra points did not shrink it
};

namespace detail {

/// Rows expressing  coeffs . (B_k z) in T  for the ambient basis B_k.
inline std::vector<Vector> stabilizer_constraints(const CubicForm& p, const std::vector<Matrix>& ambient,
                                                  const Vector& x) {
  const auto s = sample_at(p, x);
  const std::size_t dim = s.point.size();
  // Linear forms vanishing on T.
  const Subspace ann = kernel_basis(Matrix::from_rows(dim, s.tangent.basis()));
  std::vector<Vector> images;
  images.reserve(ambient.size());
  for (const auto& b : ambient) images.push_back(b.apply(s.point));
  std::vector<Vector> rows;
  for (const auto& alpha : ann.basis()) {
    Vector row(ambient.size());
    for (std::size_t k = 0; k < ambient.size(); ++k) row[k] = dot(alpha, images[k]);
    rows.push_back(std::move(row));
  }
  return rows;
}

inline std::vector<Matrix> ambient_basis(const SymplecticSpace& space, Ambient ambient) {
  if (ambient == Ambient::Csp) return csp_basis(space).basis;
  const std::size_t n = space.dim();
  std::vector<Matrix> out;
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q) {
      Matrix e(n, n);
      e(p, q) = 1;
      out.push_back(std::move(e));
    }
  return out;
}

}  // namespace detail

/// { a in ambient : a z(x) in T_{z(x)} for all sampled x }, accumulating
/// batches of grid points until the solution dimension has been unchanged
/// for `stable_batches` consecutive batches.
inline StabilizerResult stabilizer_algebra(const CubicForm& p, Ambient ambient, const SamplerConfig& cfg = {}) {
  if (!cubic_nondegenerate(p)) throw InputError("stabilizer requires a nondegenerate cubic");
  const SymplecticSpace space = space_for(p);
  const std::vector<Matrix> basis = detail::ambient_basis(space, ambient);
  const std::size_t d = basis.size();
  PointSampler sampler(cfg.seed);
  IncrementalBasis constraints(d);
  std::vector<Vector> independent_rows;
  StabilizerResult out;

  auto run_batch = [&](std::size_t count) {
    std::vector<Vector> xs;
    for (std::size_t i = 0; i < count; ++i) xs.push_back(sampler.grid_point(p.n()));
    std::vector<std::vector<Vector>> rows(count);
    std::vector<char> usable(count, 1);
    parallel_for(count, cfg.par, [&](std::size_t i) {
      try {
        rows[i] = detail::stabilizer_constraints(p, basis, xs[i]);
      } catch (const NonImmersiveError&) {
        usable[i] = 0;
      }
    });
    std::size_t used = 0;
    for (std::size_t i = 0; i < count; ++i) {
      if (!usable[i]) continue;
      ++used;
      for (auto& r : rows[i])
        if (constraints.insert(r)) independent_rows.push_back(std::move(r));
    }
    return used;
  };

  std::size_t stable = 0;
  std::size_t last_dim = d + 1;
  for (std::size_t batch = 0;; ++batch) {
    if (batch == cfg.max_batches)
      throw UnstableError("stabilizer dimension did not settle within " + std::to_string(cfg.max_batches) +
                          " batches");
    out.samples += run_batch(cfg.batch_size);
    const std::size_t dim = d - constraints.dim();
    stable = dim == last_dim ? stable + 1 : 0;
    last_dim = dim;
    if (stable >= cfg.stable_batches) break;
  }

  const Subspace k = kernel_basis(independent_rows.empty() ? Matrix(0, d) : Matrix::from_rows(d, independent_rows));
  std::vector<Matrix> mats;
  for (const auto& c : k.basis()) mats.push_back(combine(c, basis, space.dim(), space.dim()));
  out.algebra = make_subalgebra(space, mats);

  const std::size_t before = constraints.dim();
  run_batch(cfg.recheck_points);
  out.recheck_stable = constraints.dim() == before;
  return out;
}

/// Subspaces of gl(V) spanned by two lists of matrices coincide.
inline bool same_span(const std::vector<Matrix>& a, const std::vector<Matrix>& b, std::size_t n) {
  std::vector<Vector> va, vb;
  for (const auto& m : a) va.push_back(m.flatten());
  for (const auto& m : b) vb.push_back(m.flatten());
  return same_subspace(Subspace::span(n * n, va), Subspace::span(n * n, vb));
}

}  // namespace legpro

#endif  // LEGPRO_LEGENDRIAN_HPP
