#ifndef LEGPRO_VERIFIER_HPP
#define LEGPRO_VERIFIER_HPP

// End-to-end pipeline for one cubic form: Legendrian checks, stabilizers,
// contact prolongations, point identities, Euler witness and normalization.

#include <legpro/errors.hpp>
#include <legpro/legendrian.hpp>
#include <legpro/prolong.hpp>
#include <legpro/splitting.hpp>
#include <legpro/symplectic.hpp>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace legpro {

struct ScenarioConfig {
  SamplerConfig sampler{};
  std::size_t isotropy_points = 20;
  std::size_t flag_points = 10;
  std::size_t identity_points = 10;
  std::size_t max_resamples = 200;
};

struct LegendrianChecks {
  std::size_t isotropy_samples = 0;
  bool isotropy = false;
  std::size_t flag_samples = 0;
  bool flag_dims = false;
  bool flag_perp = false;
  bool flag_span = false;
  bool cone_spans_v = false;

  bool ok() const { return isotropy && flag_dims && flag_perp && flag_span && cone_spans_v; }
};

struct PointCheck {
  std::size_t element = 0;
  Vector point;
  bool ok = false;
  std::string detail;  // first violated identity, empty when ok
};

struct EulerSummary {
  std::size_t element = 0;
  std::size_t points = 0;
  bool all_ok = false;
  Rational point_weight = 2;
  Rational quotient_weight = 1;
};

struct NormalizationSummary {
  bool unique = false;
  std::size_t coset_dim = 0;
};

struct ScenarioReport {
  std::string cubic;
  std::size_t n = 0;
  bool nondegenerate = false;
  std::uint64_t seed = 0;
  LegendrianChecks legendrian;
  std::size_t stabilizer_dim = 0;
  std::size_t gl_stabilizer_dim = 0;
  std::size_t stabilizer_samples = 0;
  bool stabilizer_closed = false;
  bool stabilizer_recheck = false;
  bool gl_equals_csp = false;
  bool contains_grading = false;
  std::size_t prolongation_dim = 0;
  std::size_t abar_nonzero = 0;  // prolongation basis elements with Abar != 0
  std::vector<PointCheck> identity_checks;
  std::optional<EulerSummary> euler_witness;
  NormalizationSummary normalization;
  std::vector<std::string> anomalies;
};

namespace detail {

template <class Fn>
auto staged(const char* stage, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(stage, e.what());
  }
}

inline LegendrianSample draw_cone_point(const CubicForm& p, PointSampler& sampler, std::size_t max_tries) {
  for (std::size_t t = 0; t < max_tries; ++t) {
    try {
      auto s = sample_at(p, sampler.rational_point(p.n()));
      const Rational c = sampler.scale();
      s.point = c * s.point;
      return s;
    } catch (const NonImmersiveError&) {
    }
  }
  throw ResampleError("no immersive sample point found");
}

}  // namespace detail

inline ScenarioReport run_scenario(const CubicForm& p, const ScenarioConfig& cfg = {}) {
  ScenarioReport rep;
  rep.cubic = p.digest();
  rep.n = p.n();
  rep.seed = cfg.sampler.seed;
  rep.nondegenerate = cubic_nondegenerate(p);
  if (!rep.nondegenerate) return rep;

  const SymplecticSpace space = space_for(p);
  const std::size_t dim = space.dim();
  // Separate streams per stage so that changing one budget leaves the others' points alone.
  PointSampler iso_sampler(cfg.sampler.seed ^ 0x1111);
  PointSampler flag_sampler(cfg.sampler.seed ^ 0x2222);
  PointSampler id_sampler(cfg.sampler.seed ^ 0x3333);

  detail::staged("legendrian", [&] {
    auto& lc = rep.legendrian;
    lc.isotropy = true;
    std::vector<Vector> cone;
    for (std::size_t i = 0; i < cfg.isotropy_points; ++i) {
      const Vector x = iso_sampler.rational_point(p.n());
      const auto frame = zp_frame(p, x);
      ++lc.isotropy_samples;
      if (!isotropic(space, frame)) lc.isotropy = false;
      cone.push_back(frame.front());
    }
    lc.cone_spans_v = rank_of_vectors(dim, cone) == dim;
    lc.flag_dims = lc.flag_perp = lc.flag_span = true;
    std::size_t tries = 0;
    while (lc.flag_samples < cfg.flag_points) {
      if (++tries > cfg.max_resamples) {
        lc.flag_dims = false;
        break;
      }
      try {
        const auto flag = osculating_flag(p, flag_sampler.rational_point(p.n()));
        ++lc.flag_samples;
        lc.flag_perp = lc.flag_perp && flag.perp_check;
        lc.flag_span = lc.flag_span && flag.span_check;
      } catch (const NonGeneralPointError&) {
      }
    }
  });

  const LieSubalgebra g = detail::staged("stabilizer", [&] {
    auto csp = stabilizer_algebra(p, Ambient::Csp, cfg.sampler);
    auto gl = stabilizer_algebra(p, Ambient::Gl, cfg.sampler);
    rep.stabilizer_dim = csp.algebra.dim();
    rep.gl_stabilizer_dim = gl.algebra.dim();
    rep.stabilizer_samples = csp.samples;
    rep.stabilizer_closed = csp.algebra.closed && gl.algebra.closed;
    rep.stabilizer_recheck = csp.recheck_stable && gl.recheck_stable;
    rep.gl_equals_csp = same_span(csp.algebra.basis, gl.algebra.basis, dim);
    std::vector<Matrix> with_grading = csp.algebra.basis;
    with_grading.push_back(grading_element(p.n()));
    rep.contains_grading = same_span(csp.algebra.basis, with_grading, dim);
    return csp.algebra;
  });

  const ProlongationSpace pro = detail::staged("prolongation", [&] { return prolongation_space(g, cfg.sampler.par); });
  rep.prolongation_dim = pro.dim();
  for (const auto& a : pro.basis)
    if (!is_zero(a.abar_vec)) ++rep.abar_nonzero;
  if (rep.prolongation_dim > 0 && rep.abar_nonzero == 0)
    rep.anomalies.push_back("nonzero contact prolongation with Abar = 0 for every basis element");

  detail::staged("identities", [&] {
    std::vector<LegendrianSample> pts;
    for (std::size_t i = 0; i < cfg.identity_points; ++i)
      pts.push_back(detail::draw_cone_point(p, id_sampler, cfg.max_resamples));
    for (std::size_t e = 0; e < pro.basis.size(); ++e)
      for (const auto& s : pts) {
        const auto r = check_point_identities(pro.basis[e], s.point, s.tangent);
        rep.identity_checks.push_back({e, s.point, r.ok(), r.ok() ? "" : r.violations.front().identity});
      }
  });

  detail::staged("euler", [&] {
    std::size_t e = 0;
    while (e < pro.basis.size() && is_zero(pro.basis[e].abar_vec)) ++e;
    if (e == pro.basis.size()) return;
    const auto& a = pro.basis[e];
    EulerSummary sum{e, 0, true};
    std::size_t tries = 0;
    while (sum.points < cfg.identity_points) {
      if (++tries > cfg.max_resamples) {
        sum.all_ok = false;
        break;
      }
      const auto s = detail::draw_cone_point(p, id_sampler, cfg.max_resamples);
      try {
        const auto w = euler_symmetry_witness(a, s.point, s.tangent);
        ++sum.points;
        sum.all_ok = sum.all_ok && w.ok();
      } catch (const ResampleError&) {
      }
    }
    rep.euler_witness = sum;
  });

  detail::staged("normalization", [&] {
    const auto ctx = build_context(g, cfg.sampler.par);
    rep.normalization.unique = ctx.prolongation_dim == 0;
    rep.normalization.coset_dim = ctx.prolongation_dim;
  });
  return rep;
}

/// Cross-module implications that must hold for every nondegenerate cubic:
///  - Legendrian checks pass,
///  - GL- and CSp-stabilizers agree and are certified closed,
///  - every prolongation element satisfies the point identities,
///  - prolongation > 0 with some Abar != 0 implies a successful Euler witness,
///  - normalization is unique exactly when the prolongation vanishes.
inline bool consistency_audit(const ScenarioReport& rep) {
  if (!rep.nondegenerate) return true;
  if (!rep.legendrian.ok()) return false;
  if (!rep.gl_equals_csp || rep.stabilizer_dim != rep.gl_stabilizer_dim || !rep.stabilizer_closed) return false;
  for (const auto& c : rep.identity_checks)
    if (!c.ok || c.element >= rep.prolongation_dim) return false;
  const bool euler_expected = rep.prolongation_dim > 0 && rep.abar_nonzero > 0;
  if (euler_expected != rep.euler_witness.has_value()) return false;
  if (rep.euler_witness && !rep.euler_witness->all_ok) return false;
  if (rep.normalization.unique != (rep.prolongation_dim == 0)) return false;
  if (rep.normalization.coset_dim != rep.prolongation_dim) return false;
  return true;
}

}  // namespace legpro

#endif  // LEGPRO_VERIFIER_HPP
