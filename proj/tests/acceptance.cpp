// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <legpro/cli.hpp>
#include <legpro/json_io.hpp>
#include <legpro/legpro.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace legpro;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      if (pass) detail = what;
      pass = false;
    }
  }
};

const std::string kData = LEGPRO_DATA_DIR;

std::vector<std::string> corpus_files() {
  std::vector<std::string> out;
  for (const auto& e : std::filesystem::directory_iterator(kData + "/cubics"))
    if (e.path().extension() == ".json") out.push_back(e.path().string());
  std::sort(out.begin(), out.end());
  return out;
}

CubicForm load(const std::string& path) {
  std::ifstream in(path);
  return json_io::cubic_from_json(nlohmann::json::parse(in));
}

CubicForm named(const std::string& file) { return load(kData + "/cubics/" + file); }

Outcome csp_dimensions() {
  Outcome o;
  std::ostringstream dims;
  for (std::size_t m = 1; m <= 4; ++m) {
    const auto g = csp_basis(standard_space(m));
    dims << (m > 1 ? ", " : "") << g.dim();
    o.require(g.dim() == m * (2 * m + 1) + 1, "m = " + std::to_string(m) + " gives " + std::to_string(g.dim()));
  }
  if (o.pass) o.detail = "dims " + dims.str();
  return o;
}

Outcome csp_prolongation() {
  Outcome o;
  std::ostringstream dims;
  for (std::size_t m = 1; m <= 3; ++m) {
    const auto space = standard_space(m);
    const auto g = csp_basis(space);
    const auto ps = prolongation_space(g);
    dims << (m > 1 ? ", " : "") << ps.dim() << " (dim V = " << space.dim() << ")";
    o.require(ps.dim() == space.dim(), "prolongation dim " + std::to_string(ps.dim()) + " != dim V = " +
                                           std::to_string(space.dim()));
    std::vector<Vector> kernel;
    for (const auto& a : ps.basis) kernel.push_back(a.coords);
    const auto k = Subspace::span(ps.dim_hom, kernel);
    Matrix sys(space.dim() * space.dim(), g.dim());
    for (std::size_t c = 0; c < g.dim(); ++c) {
      const Vector f = g.basis[c].flatten();
      for (std::size_t r = 0; r < f.size(); ++r) sys(r, c) = f[r];
    }
    for (std::size_t i = 0; i < space.dim(); ++i) {
      const auto a = sp_plus_family(space, unit_vector(space.dim(), i));
      Vector coords(ps.dim_hom);
      bool in_g = true;
      for (std::size_t v = 0; v < space.dim(); ++v) {
        const auto sol = solve_affine(sys, a.mats[v].flatten());
        if (!sol.particular) {
          in_g = false;
          break;
        }
        for (std::size_t c = 0; c < g.dim(); ++c) coords[c * space.dim() + v] = (*sol.particular)[c];
      }
      o.require(in_g && k.contains(coords), "A^{e_" + std::to_string(i) + "} missing at m = " + std::to_string(m));
    }
  }
  o.detail = "prolongation dims " + dims.str() + (o.pass ? "" : "; " + o.detail);
  return o;
}

Outcome isotropy() {
  Outcome o;
  for (const char* f : {"x3.json", "x3_plus_y3.json", "xyz.json"}) {
    const auto p = named(f);
    PointSampler s(kDefaultSeed);
    for (int t = 0; t < 20; ++t)
      o.require(isotropic(space_for(p), zp_frame(p, s.rational_point(p.n()))), std::string(f) + " frame not isotropic");
  }
  if (o.pass) o.detail = "3 cubics x 20 points";
  return o;
}

Outcome osculating() {
  Outcome o;
  std::size_t cubics = 0;
  for (const auto& f : corpus_files()) {
    const auto p = load(f);
    PointSampler s(kDefaultSeed);
    std::size_t good = 0, tries = 0;
    while (good < 10 && tries++ < 200) {
      try {
        const auto flag = osculating_flag(p, s.rational_point(p.n()));
        o.require(flag.perp_check && flag.span_check, f + ": flag check failed");
        ++good;
      } catch (const NonGeneralPointError&) {
      }
    }
    o.require(good == 10, f + ": fewer than 10 general points");
    ++cubics;
  }
  if (o.pass) o.detail = std::to_string(cubics) + " cubics x 10 points";
  return o;
}

Outcome stabilizers() {
  Outcome o;
  auto check = [&](const char* f, std::size_t expected, bool grading) {
    const auto p = named(f);
    const auto c = stabilizer_algebra(p, Ambient::Csp);
    const auto g = stabilizer_algebra(p, Ambient::Gl);
    const std::size_t dim = 2 * p.n() + 2;
    o.require(c.algebra.dim() == expected, std::string(f) + ": dim " + std::to_string(c.algebra.dim()));
    o.require(c.algebra.closed && g.algebra.closed, std::string(f) + ": not closed");
    o.require(c.recheck_stable && g.recheck_stable, std::string(f) + ": recheck changed the answer");
    o.require(same_span(c.algebra.basis, g.algebra.basis, dim), std::string(f) + ": GL != CSP");
    if (grading) {
      auto with = c.algebra.basis;
      with.push_back(grading_element(p.n()));
      o.require(same_span(c.algebra.basis, with, dim), std::string(f) + ": grading element missing");
    }
  };
  check("x3.json", 4, true);
  check("xyz.json", 10, false);
  if (o.pass) o.detail = "x^3: 4 with grading, xyz: 10, GL = CSP";
  return o;
}

Outcome theorem_chain() {
  Outcome o;
  const auto p = named("x3.json");
  const auto g = stabilizer_algebra(p, Ambient::Csp).algebra;
  const auto ps = prolongation_space(g);
  o.require(ps.dim() == 4, "prolongation dim " + std::to_string(ps.dim()));
  PointSampler s(kDefaultSeed);
  std::size_t points = 0, witnesses = 0;
  while (points < 10) {
    const auto sample = sample_at(p, s.rational_point(p.n()));
    const Vector v = s.scale() * sample.point;
    ++points;
    for (const auto& a : ps.basis) {
      o.require(check_point_identities(a, v, sample.tangent).ok(), "identity violated");
      if (a.space.form(a.abar_vec, v).is_zero()) continue;
      const auto w = euler_symmetry_witness(a, v, sample.tangent);
      o.require(w.eigen_on_point && w.induced_identity && w.ok(), "Euler witness failed");
      ++witnesses;
    }
  }
  o.require(witnesses > 0, "no point with sigma(Abar, v) != 0");
  if (o.pass) o.detail = "dim 4, 10 points, " + std::to_string(witnesses) + " Euler witnesses";
  return o;
}

Outcome normalization() {
  Outcome o;
  // Prefer a shipped cubic with trivial prolongation.
  std::optional<LieSubalgebra> g;
  std::string source;
  for (const auto& f : corpus_files()) {
    const auto stab = stabilizer_algebra(load(f), Ambient::Csp).algebra;
    if (prolongation_space(stab).dim() == 0) {
      g = stab;
      source = f;
      break;
    }
  }
  std::mt19937_64 rng(kDefaultSeed);
  auto small = [&] { return Rational(static_cast<long>(rng() % 9) - 4, static_cast<long>(rng() % 3) + 1); };
  if (!g) {
    // span{I, X}, X random in sp(V), dim V = 6.
    const auto space = standard_space(3);
    const auto csp = csp_basis(space);
    Vector c(csp.dim());
    for (auto& x : c) x = small();
    Matrix x = combine(c, csp.basis, 6, 6);
    x = x - Rational(1, 6) * x.trace() * Matrix::identity(6);
    g = make_subalgebra(space, {Matrix::identity(6), x});
    source = "span{I, X} in csp(6)";
  }
  const auto ctx = build_context(*g);
  o.require(g->closed, "fallback algebra not closed");
  o.require(ctx.prolongation_dim == 0 && rank(ctx.delta_matrix) == ctx.delta_matrix.cols(),
            "delta is not injective on " + source);
  const std::size_t n = g->space.dim();
  auto random_pi = [&] {
    TorsionTensor t = TorsionTensor::zero(n);
    for (auto& v : t.values)
      for (auto& x : v) x = small();
    return t;
  };
  auto random_s = [&] {
    GaugeShift s = GaugeShift::zero(*g);
    for (auto& x : s.coords) x = small();
    return s;
  };
  for (int t = 0; t < 50; ++t) {
    const auto pi = random_pi();
    const auto s = random_s();
    const auto base = normalize_torsion(ctx, pi);
    o.require(normalize_torsion(ctx, transform_torsion(ctx, pi, s)).normalized == base.normalized, "not gauge invariant");
    o.require(normalize_torsion(ctx, base.normalized).normalized == base.normalized, "not idempotent");
    o.require(base.unique == (ctx.prolongation_dim == 0), "uniqueness flag disagrees with kernel");
    const auto exact = transform_torsion(ctx, TorsionTensor::zero(n), s);
    const auto r = normalize_torsion(ctx, exact);
    o.require(r.normalized.is_zero() && r.shift == -s, "round trip failed");
  }
  if (o.pass) o.detail = "50 pairs over " + source;
  return o;
}

Outcome audit() {
  Outcome o;
  std::size_t n = 0;
  for (const auto& f : corpus_files()) {
    o.require(consistency_audit(run_scenario(load(f))), f + ": audit failed");
    ++n;
  }
  std::ostringstream out, err;
  const int good = cli::run({"verify", "--cubic", kData + "/cubics/x3.json"}, out, err);
  const int corrupted = cli::run({"verify", "--report", kData + "/fixtures/corrupted_report.json"}, out, err);
  const int malformed = cli::run({"verify", "--cubic", kData + "/fixtures/malformed_coeff.json"}, out, err);
  o.require(good == 0, "clean verify exited " + std::to_string(good));
  o.require(corrupted == 1, "corrupted fixture exited " + std::to_string(corrupted));
  o.require(malformed == 2, "malformed fixture exited " + std::to_string(malformed));
  if (o.pass) o.detail = std::to_string(n) + " cubics audited; exit codes 0/1/2 as specified";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"1 csp dimensions", csp_dimensions},
      {"2 csp prolongation equals dim V", csp_prolongation},
      {"3 isotropy", isotropy},
      {"4 osculating flag", osculating},
      {"5 stabilizers", stabilizers},
      {"6 prolongation identities and Euler witness", theorem_chain},
      {"7 normalization", normalization},
      {"8 audit and exit codes", audit},
  };
  const auto start = std::chrono::steady_clock::now();
  bool all = true;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    all = all && o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << name << "  -- " << o.detail << std::endl;
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::cout << "total time " << secs << " s" << std::endl;
  return all ? 0 : 1;
}
