#ifndef LEGPRO_SPLITTING_HPP
#define LEGPRO_SPLITTING_HPP

// Fiberwise torsion normalization. A complement W of Im(delta) in
// Hom(wedge^2 V, V) is fixed once; a torsion Pi is moved by gauge shifts
// Pi -> Pi + delta s, s in Hom(V, g), to its representative in W.

#include <legpro/errors.hpp>
#include <legpro/exactla.hpp>
#include <legpro/prolong.hpp>
#include <legpro/symplectic.hpp>

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace legpro {

/// s in Hom(V, g), in the coordinates of prolong.hpp.
struct GaugeShift {
  Vector coords;

  static GaugeShift zero(const LieSubalgebra& g) { return {zero_vector(g.space.dim() * g.dim())}; }
  friend GaugeShift operator+(const GaugeShift& a, const GaugeShift& b) { return {a.coords + b.coords}; }
  friend GaugeShift operator-(const GaugeShift& a) { return {-a.coords}; }
  friend bool operator==(const GaugeShift&, const GaugeShift&) = default;
};

struct NormalizationContext {
  LieSubalgebra g;
  Matrix delta_matrix;
  Subspace image;       // pivot columns of delta_matrix
  Subspace complement;  // W
  std::size_t prolongation_dim = 0;

  std::vector<std::size_t> image_columns;  // delta_matrix column of each image basis vector
  Matrix decompose;  // inverse of [image | W]
};

inline NormalizationContext build_context(const LieSubalgebra& g, Parallelism par = {}) {
  if (!inside_csp(g)) throw InputError("algebra is not contained in csp(V)");
  NormalizationContext ctx;
  ctx.g = g;
  ctx.delta_matrix = delta_matrix(g, par);
  const std::size_t rows = ctx.delta_matrix.rows();
  const auto re = reduced_echelon(ctx.delta_matrix, par);
  ctx.image_columns = re.pivots;
  std::vector<Vector> cols;
  for (auto c : re.pivots) cols.push_back(ctx.delta_matrix.column(c));
  ctx.image = Subspace::from_basis(rows, cols);
  ctx.complement = extend_to_complement(ctx.image);
  ctx.prolongation_dim = ctx.delta_matrix.cols() - re.pivots.size();

  std::vector<Vector> all = ctx.image.basis();
  all.insert(all.end(), ctx.complement.basis().begin(), ctx.complement.basis().end());
  auto inv = inverse(Matrix::from_columns(rows, all));
  if (!inv) throw std::logic_error("image and complement do not span Hom(wedge^2 V, V)");
  ctx.decompose = std::move(*inv);
  return ctx;
}

/// Pi + delta s.
inline TorsionTensor transform_torsion(const NormalizationContext& ctx, const TorsionTensor& pi, const GaugeShift& s) {
  const std::size_t n = ctx.g.space.dim();
  if (pi.dim != n) throw std::invalid_argument("torsion dimension differs from dim V");
  if (s.coords.size() != ctx.delta_matrix.cols()) throw std::invalid_argument("gauge shift has wrong length");
  return TorsionTensor::unflatten(n, pi.flatten() + ctx.delta_matrix.apply(s.coords));
}

struct NormalizationResult {
  GaugeShift shift;
  TorsionTensor normalized;
  bool unique = false;
  std::size_t coset_dim = 0;  // dimension of the set of valid shifts
};

/// Splits Pi = image part + W part and cancels the image part. The shift is
/// supported on the pivot columns of delta; it is the only solution exactly
/// when g has no nonzero contact prolongation.
inline NormalizationResult normalize_torsion(const NormalizationContext& ctx, const TorsionTensor& pi) {
  const std::size_t n = ctx.g.space.dim();
  if (pi.dim != n) throw std::invalid_argument("torsion dimension differs from dim V");
  const Vector c = ctx.decompose.apply(pi.flatten());
  const std::size_t r = ctx.image.dim();
  NormalizationResult out;
  out.shift = GaugeShift::zero(ctx.g);
  for (std::size_t i = 0; i < r; ++i) out.shift.coords[ctx.image_columns[i]] = -c[i];
  Vector w = zero_vector(pi.flatten().size());
  for (std::size_t i = 0; i < ctx.complement.dim(); ++i) {
    const Rational& ci = c[r + i];
    if (ci.is_zero()) continue;
    w = w + ci * ctx.complement.basis()[i];
  }
  out.normalized = TorsionTensor::unflatten(n, w);
  out.unique = ctx.prolongation_dim == 0;
  out.coset_dim = ctx.prolongation_dim;
  return out;
}

}  // namespace legpro

#endif  // LEGPRO_SPLITTING_HPP
