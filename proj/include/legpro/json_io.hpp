#ifndef LEGPRO_JSON_IO_HPP
#define LEGPRO_JSON_IO_HPP

// JSON encodings. Rationals are strings "p/q" (or "p"), matrices are
// row-major nested arrays of such strings. Parse failures raise InputError
// naming the offending field.

#include <legpro/errors.hpp>
#include <legpro/legendrian.hpp>
#include <legpro/prolong.hpp>
#include <legpro/splitting.hpp>
#include <legpro/symplectic.hpp>
#include <legpro/verifier.hpp>

#include <json.hpp>

#include <cstddef>
#include <string>
#include <vector>

namespace legpro::json_io {

using json = nlohmann::json;

inline json to_json(const Rational& r) { return r.str(); }

inline json to_json(const Vector& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(x.str());
  return a;
}

inline json to_json(const Matrix& m) {
  json a = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j).str());
    a.push_back(std::move(row));
  }
  return a;
}

inline const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw InputError(where + ": missing field \"" + key + "\"");
  return j.at(key);
}

inline Rational rational_from(const json& j, const std::string& where) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (!j.is_string()) throw InputError(where + ": expected a rational string");
  try {
    return Rational::parse(j.get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw InputError(where + ": " + e.what());
  }
}

inline std::size_t count_from(const json& j, const std::string& where) {
  if (!j.is_number_integer() || j.get<long long>() < 0) throw InputError(where + ": expected a non-negative integer");
  return j.get<std::size_t>();
}

inline Vector vector_from(const json& j, const std::string& where, std::size_t expected_len) {
  if (!j.is_array()) throw InputError(where + ": expected an array");
  if (j.size() != expected_len)
    throw InputError(where + ": expected " + std::to_string(expected_len) + " entries, got " + std::to_string(j.size()));
  Vector v;
  for (std::size_t i = 0; i < j.size(); ++i) v.push_back(rational_from(j[i], where + "[" + std::to_string(i) + "]"));
  return v;
}

inline Matrix matrix_from(const json& j, const std::string& where, std::size_t rows, std::size_t cols) {
  if (!j.is_array() || j.size() != rows)
    throw InputError(where + ": expected " + std::to_string(rows) + " rows");
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const Vector r = vector_from(j[i], where + "[" + std::to_string(i) + "]", cols);
    for (std::size_t c = 0; c < cols; ++c) m(i, c) = r[c];
  }
  return m;
}

// ---------------------------------------------------------------------------
// Algebras: { "dim_V": int, "basis": [matrix...], "closed": bool }

inline json algebra_to_json(const LieSubalgebra& g) {
  json basis = json::array();
  for (const auto& b : g.basis) basis.push_back(to_json(b));
  return {{"dim_V", g.space.dim()}, {"basis", basis}, {"closed", g.closed}};
}

struct ParsedAlgebra {
  LieSubalgebra algebra;  // closure recomputed from the matrices
  bool claimed_closed = false;
  bool independent = true;  // input basis had no dependent matrices
};

inline ParsedAlgebra algebra_from_json(const json& j) {
  const std::size_t n = count_from(field(j, "dim_V", "algebra"), "algebra.dim_V");
  if (n < 2 || n % 2 != 0) throw InputError("algebra.dim_V: must be a positive even integer");
  const json& basis = field(j, "basis", "algebra");
  if (!basis.is_array()) throw InputError("algebra.basis: expected an array of matrices");
  std::vector<Matrix> mats;
  for (std::size_t k = 0; k < basis.size(); ++k)
    mats.push_back(matrix_from(basis[k], "algebra.basis[" + std::to_string(k) + "]", n, n));
  ParsedAlgebra out;
  out.algebra = make_subalgebra(standard_space(n / 2), mats);
  out.independent = out.algebra.dim() == mats.size();
  out.claimed_closed = j.contains("closed") ? j.at("closed").is_boolean() && j.at("closed").get<bool>() : false;
  return out;
}

// ---------------------------------------------------------------------------
// Cubic forms: { "n": int, "monomials": [ { "ijk": [i,j,k], "coeff": "p/q" } ] }

inline CubicForm cubic_from_json(const json& j) {
  const std::size_t n = count_from(field(j, "n", "cubic"), "cubic.n");
  if (n == 0) throw InputError("cubic.n: must be at least 1");
  const json& monos = field(j, "monomials", "cubic");
  if (!monos.is_array()) throw InputError("cubic.monomials: expected an array");
  std::vector<Monomial> out;
  for (std::size_t t = 0; t < monos.size(); ++t) {
    const std::string where = "cubic.monomials[" + std::to_string(t) + "]";
    const json& ijk = field(monos[t], "ijk", where);
    if (!ijk.is_array() || ijk.size() != 3) throw InputError(where + ".ijk: expected three indices");
    Monomial m;
    for (std::size_t r = 0; r < 3; ++r) m.ijk[r] = count_from(ijk[r], where + ".ijk");
    if (!(m.ijk[0] <= m.ijk[1] && m.ijk[1] <= m.ijk[2]))
      throw InputError(where + ".ijk: indices must satisfy i <= j <= k");
    if (m.ijk[2] >= n) throw InputError(where + ".ijk: index out of range for n = " + std::to_string(n));
    m.coeff = rational_from(field(monos[t], "coeff", where), where + ".coeff");
    out.push_back(m);
  }
  return CubicForm::from_monomials(n, out);
}

inline json cubic_to_json(const CubicForm& p) {
  json monos = json::array();
  for (const auto& m : p.monomials())
    monos.push_back({{"ijk", {m.ijk[0], m.ijk[1], m.ijk[2]}}, {"coeff", m.coeff.str()}});
  return {{"n", p.n()}, {"monomials", monos}};
}

// ---------------------------------------------------------------------------
// Torsion: { "pairs": [ { "ij": [i,j], "value": [rationals] } ] }, i < j,
// absent pairs are zero.

inline TorsionTensor torsion_from_json(const json& j, std::size_t dim) {
  const json& pairs = field(j, "pairs", "torsion");
  if (!pairs.is_array()) throw InputError("torsion.pairs: expected an array");
  TorsionTensor t = TorsionTensor::zero(dim);
  std::vector<bool> seen(pair_count(dim), false);
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const std::string where = "torsion.pairs[" + std::to_string(k) + "]";
    const json& ij = field(pairs[k], "ij", where);
    if (!ij.is_array() || ij.size() != 2) throw InputError(where + ".ij: expected two indices");
    const std::size_t i = count_from(ij[0], where + ".ij");
    const std::size_t jj = count_from(ij[1], where + ".ij");
    if (!(i < jj)) throw InputError(where + ".ij: indices must satisfy i < j");
    if (jj >= dim) throw InputError(where + ".ij: index out of range for dim V = " + std::to_string(dim));
    const std::size_t p = pair_index(dim, i, jj);
    if (seen[p]) throw InputError(where + ".ij: pair listed twice");
    seen[p] = true;
    t.values[p] = vector_from(field(pairs[k], "value", where), where + ".value", dim);
  }
  return t;
}

inline json torsion_to_json(const TorsionTensor& t) {
  json pairs = json::array();
  for (std::size_t i = 0; i < t.dim; ++i)
    for (std::size_t j = i + 1; j < t.dim; ++j) {
      const Vector& v = t.values[pair_index(t.dim, i, j)];
      if (is_zero(v)) continue;
      pairs.push_back({{"ij", {i, j}}, {"value", to_json(v)}});
    }
  return {{"pairs", pairs}};
}

// ---------------------------------------------------------------------------
// Prolongation report: { "dim_hom", "rank_delta", "prolongation_dim", "basis" }

inline json prolongation_to_json(const ProlongationSpace& ps) {
  json basis = json::array();
  for (const auto& a : ps.basis) {
    json mats = json::array();
    for (const auto& m : a.mats) mats.push_back(to_json(m));
    basis.push_back({{"coords", to_json(a.coords)}, {"mats", mats}, {"abar", to_json(a.abar_vec)}});
  }
  return {{"dim_hom", ps.dim_hom}, {"rank_delta", ps.rank_delta}, {"prolongation_dim", ps.dim()}, {"basis", basis}};
}

// ---------------------------------------------------------------------------
// Scenario reports.

inline json report_to_json(const ScenarioReport& r) {
  json j;
  j["cubic"] = r.cubic;
  j["n"] = r.n;
  j["seed"] = r.seed;
  j["nondegenerate"] = r.nondegenerate;
  j["legendrian_checks"] = {{"isotropy_samples", r.legendrian.isotropy_samples},
                            {"isotropy", r.legendrian.isotropy},
                            {"flag_samples", r.legendrian.flag_samples},
                            {"flag_dims", r.legendrian.flag_dims},
                            {"flag_perp", r.legendrian.flag_perp},
                            {"flag_span", r.legendrian.flag_span},
                            {"cone_spans_v", r.legendrian.cone_spans_v}};
  j["stabilizer_dim"] = r.stabilizer_dim;
  j["gl_stabilizer_dim"] = r.gl_stabilizer_dim;
  j["stabilizer_samples"] = r.stabilizer_samples;
  j["stabilizer_closed"] = r.stabilizer_closed;
  j["stabilizer_recheck"] = r.stabilizer_recheck;
  j["gl_equals_csp"] = r.gl_equals_csp;
  j["contains_grading"] = r.contains_grading;
  j["prolongation_dim"] = r.prolongation_dim;
  j["abar_nonzero"] = r.abar_nonzero;
  json checks = json::array();
  for (const auto& c : r.identity_checks)
    checks.push_back({{"element", c.element}, {"point", to_json(c.point)}, {"ok", c.ok}, {"detail", c.detail}});
  j["identity_checks"] = checks;
  if (r.euler_witness) {
    const auto& e = *r.euler_witness;
    j["euler_witness"] = {{"element", e.element},
                          {"points", e.points},
                          {"all_ok", e.all_ok},
                          {"weights", {e.point_weight.str(), e.quotient_weight.str()}}};
  } else {
    j["euler_witness"] = nullptr;
  }
  j["normalization"] = {{"unique", r.normalization.unique}, {"coset_dim", r.normalization.coset_dim}};
  j["anomalies"] = r.anomalies;
  return j;
}

inline bool bool_from(const json& j, const char* key, const std::string& where) {
  const json& v = field(j, key, where);
  if (!v.is_boolean()) throw InputError(where + "." + key + ": expected a boolean");
  return v.get<bool>();
}

inline std::size_t size_from(const json& j, const char* key, const std::string& where) {
  return count_from(field(j, key, where), where + "." + key);
}

inline ScenarioReport report_from_json(const json& j) {
  const std::string w = "report";
  ScenarioReport r;
  const json& cubic = field(j, "cubic", w);
  if (!cubic.is_string()) throw InputError("report.cubic: expected a string");
  r.cubic = cubic.get<std::string>();
  r.n = size_from(j, "n", w);
  r.seed = field(j, "seed", w).get<std::uint64_t>();
  r.nondegenerate = bool_from(j, "nondegenerate", w);
  const json& lc = field(j, "legendrian_checks", w);
  const std::string wl = "report.legendrian_checks";
  r.legendrian.isotropy_samples = size_from(lc, "isotropy_samples", wl);
  r.legendrian.isotropy = bool_from(lc, "isotropy", wl);
  r.legendrian.flag_samples = size_from(lc, "flag_samples", wl);
  r.legendrian.flag_dims = bool_from(lc, "flag_dims", wl);
  r.legendrian.flag_perp = bool_from(lc, "flag_perp", wl);
  r.legendrian.flag_span = bool_from(lc, "flag_span", wl);
  r.legendrian.cone_spans_v = bool_from(lc, "cone_spans_v", wl);
  r.stabilizer_dim = size_from(j, "stabilizer_dim", w);
  r.gl_stabilizer_dim = size_from(j, "gl_stabilizer_dim", w);
  r.stabilizer_samples = size_from(j, "stabilizer_samples", w);
  r.stabilizer_closed = bool_from(j, "stabilizer_closed", w);
  r.stabilizer_recheck = bool_from(j, "stabilizer_recheck", w);
  r.gl_equals_csp = bool_from(j, "gl_equals_csp", w);
  r.contains_grading = bool_from(j, "contains_grading", w);
  r.prolongation_dim = size_from(j, "prolongation_dim", w);
  r.abar_nonzero = size_from(j, "abar_nonzero", w);
  const json& checks = field(j, "identity_checks", w);
  if (!checks.is_array()) throw InputError("report.identity_checks: expected an array");
  const std::size_t dim = 2 * r.n + 2;
  for (std::size_t k = 0; k < checks.size(); ++k) {
    const std::string wc = "report.identity_checks[" + std::to_string(k) + "]";
    PointCheck c;
    c.element = size_from(checks[k], "element", wc);
    c.point = vector_from(field(checks[k], "point", wc), wc + ".point", dim);
    c.ok = bool_from(checks[k], "ok", wc);
    c.detail = field(checks[k], "detail", wc).get<std::string>();
    r.identity_checks.push_back(std::move(c));
  }
  const json& ew = field(j, "euler_witness", w);
  if (!ew.is_null()) {
    const std::string we = "report.euler_witness";
    EulerSummary e;
    e.element = size_from(ew, "element", we);
    e.points = size_from(ew, "points", we);
    e.all_ok = bool_from(ew, "all_ok", we);
    const json& weights = field(ew, "weights", we);
    if (!weights.is_array() || weights.size() != 2) throw InputError(we + ".weights: expected two entries");
    e.point_weight = rational_from(weights[0], we + ".weights[0]");
    e.quotient_weight = rational_from(weights[1], we + ".weights[1]");
    r.euler_witness = e;
  }
  const json& nz = field(j, "normalization", w);
  r.normalization.unique = bool_from(nz, "unique", "report.normalization");
  r.normalization.coset_dim = size_from(nz, "coset_dim", "report.normalization");
  for (const auto& a : field(j, "anomalies", w)) r.anomalies.push_back(a.get<std::string>());
  return r;
}

}  // namespace legpro::json_io

#endif  // LEGPRO_JSON_IO_HPP
