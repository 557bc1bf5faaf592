#ifndef LEGPRO_CLI_HPP
#define LEGPRO_CLI_HPP

// Command-line front end. Exit codes: 0 success, 1 a verification check
// failed, 2 bad input or usage. Reports go to `out`, diagnostics to `err`.

#include <legpro/errors.hpp>
#include <legpro/json_io.hpp>
#include <legpro/legendrian.hpp>
#include <legpro/prolong.hpp>
#include <legpro/splitting.hpp>
#include <legpro/symplectic.hpp>
#include <legpro/verifier.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace legpro::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerificationFailed = 1;
inline constexpr int kExitInputError = 2;

namespace detail {

using json = nlohmann::json;

inline json read_json_file(const std::string& path, const std::string& what) {
  std::ifstream in(path);
  if (!in) throw InputError(what + ": cannot open \"" + path + "\"");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(what + ": invalid JSON in \"" + path + "\": " + e.what());
  }
}

/// --seed, then LEGPRO_SEED, then the built-in default.
inline std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("LEGPRO_SEED"); env != nullptr && *env != '\0') {
    try {
      std::size_t used = 0;
      const auto v = std::stoull(env, &used);
      if (used != std::string(env).size()) throw std::invalid_argument("trailing characters");
      return v;
    } catch (const std::exception&) {
      throw InputError("LEGPRO_SEED: not a non-negative integer");
    }
  }
  return kDefaultSeed;
}

inline const char* yes_no(bool b) { return b ? "yes" : "no"; }

struct Options {
  unsigned threads = 0;  // 0: hardware concurrency
  bool json = false;
  std::size_t m = 0;
  std::string algebra_path;
  std::string torsion_path;
  std::string cubic_path;
  std::string report_path;
  std::string ambient = "csp";
  std::optional<std::uint64_t> seed;
  std::size_t points = 10;
  std::string json_path;
  CLI::Option* verify_json = nullptr;

  Parallelism par() const { return threads == 0 ? Parallelism::hardware() : Parallelism{threads}; }
};

inline int csp_dim(const Options& o, std::ostream& out) {
  if (o.m == 0) throw InputError("--m: must be at least 1");
  const auto space = standard_space(o.m);
  const auto g = csp_basis(space);
  const bool ok = g.closed && g.dim() == o.m * (2 * o.m + 1) + 1;
  if (o.json) {
    json j = json_io::algebra_to_json(g);
    j["m"] = o.m;
    j["dim"] = g.dim();
    out << j.dump(2) << "\n";
  } else {
    out << g.dim() << "\n";
  }
  return ok ? kExitOk : kExitVerificationFailed;
}

inline int prolong(const Options& o, std::ostream& out, std::ostream& err) {
  const auto parsed = json_io::algebra_from_json(read_json_file(o.algebra_path, "--algebra"));
  const auto& g = parsed.algebra;
  if (!inside_csp(g)) throw InputError("--algebra: a basis matrix is not in csp(V)");
  if (!g.closed) {
    if (parsed.claimed_closed) {
      err << "verification failed: algebra is marked closed but a bracket leaves its span\n";
      return kExitVerificationFailed;
    }
    throw InputError("--algebra: basis is not bracket-closed");
  }
  const auto ps = prolongation_space(g, o.par());
  if (o.json) {
    out << json_io::prolongation_to_json(ps).dump(2) << "\n";
  } else {
    out << "dim_hom: " << ps.dim_hom << "\n"
        << "rank_delta: " << ps.rank_delta << "\n"
        << "prolongation_dim: " << ps.dim() << "\n";
  }
  return kExitOk;
}

inline CubicForm load_cubic(const std::string& path) {
  return json_io::cubic_from_json(read_json_file(path, "--cubic"));
}

inline int cubic_analyze(const Options& o, std::ostream& out) {
  const CubicForm p = load_cubic(o.cubic_path);
  const bool nondeg = cubic_nondegenerate(p);
  json j{{"cubic", p.digest()}, {"n", p.n()}, {"nondegenerate", nondeg}};
  bool ok = true;
  if (nondeg) {
    const auto space = space_for(p);
    PointSampler sampler(resolve_seed(o.seed));
    bool iso = true, perp = true, span = true;
    std::size_t flags = 0;
    std::vector<Vector> cone;
    json samples = json::array();
    for (std::size_t i = 0; i < o.points; ++i) {
      const Vector x = sampler.rational_point(p.n());
      const auto frame = zp_frame(p, x);
      iso = iso && isotropic(space, frame);
      cone.push_back(frame.front());
      try {
        const auto f = osculating_flag(p, x);
        ++flags;
        perp = perp && f.perp_check;
        span = span && f.span_check;
      } catch (const NonGeneralPointError&) {
      }
      samples.push_back({{"x", json_io::to_json(x)}, {"point", json_io::to_json(frame.front())}});
    }
    const bool spans = rank_of_vectors(space.dim(), cone) == space.dim();
    j["dim_V"] = space.dim();
    j["isotropy"] = iso;
    j["flag_dims"] = {p.n() + 1, 2 * p.n() + 1, 2 * p.n() + 2};
    j["flag_general_points"] = flags;
    j["flag_perp"] = perp;
    j["flag_span"] = span;
    j["cone_spans_v"] = spans;
    j["samples"] = samples;
    ok = iso && perp && span && spans && flags > 0;
  }
  if (o.json) {
    out << j.dump(2) << "\n";
  } else {
    out << "cubic: " << j["cubic"].get<std::string>() << "\n"
        << "nondegenerate: " << yes_no(nondeg) << "\n";
    if (nondeg) {
      out << "isotropy: " << yes_no(j["isotropy"].get<bool>()) << "\n"
          << "osculating flag (general points " << j["flag_general_points"].get<std::size_t>() << "): perp "
          << yes_no(j["flag_perp"].get<bool>()) << ", span " << yes_no(j["flag_span"].get<bool>()) << "\n"
          << "cone spans V: " << yes_no(j["cone_spans_v"].get<bool>()) << "\n";
    }
  }
  return ok ? kExitOk : kExitVerificationFailed;
}

inline int stabilizer(const Options& o, std::ostream& out, std::ostream& err) {
  const CubicForm p = load_cubic(o.cubic_path);
  if (!cubic_nondegenerate(p)) throw InputError("--cubic: cubic form is degenerate");
  Ambient amb;
  if (o.ambient == "csp") amb = Ambient::Csp;
  else if (o.ambient == "gl") amb = Ambient::Gl;
  else throw InputError("--ambient: expected csp or gl");
  SamplerConfig cfg;
  cfg.seed = resolve_seed(o.seed);
  cfg.par = o.par();
  StabilizerResult r;
  try {
    r = stabilizer_algebra(p, amb, cfg);
  } catch (const UnstableError& e) {
    err << "verification failed: " << e.what() << "\n";
    return kExitVerificationFailed;
  }
  if (o.json) {
    json j = json_io::algebra_to_json(r.algebra);
    j["dim"] = r.algebra.dim();
    j["samples"] = r.samples;
    j["recheck_stable"] = r.recheck_stable;
    j["seed"] = cfg.seed;
    out << j.dump(2) << "\n";
  } else {
    out << "stabilizer_dim: " << r.algebra.dim() << "\n"
        << "samples: " << r.samples << "\n"
        << "closed: " << yes_no(r.algebra.closed) << "\n"
        << "recheck_stable: " << yes_no(r.recheck_stable) << "\n";
  }
  return r.algebra.closed && r.recheck_stable ? kExitOk : kExitVerificationFailed;
}

inline int normalize(const Options& o, std::ostream& out, std::ostream& err) {
  const auto parsed = json_io::algebra_from_json(read_json_file(o.algebra_path, "--algebra"));
  const auto& g = parsed.algebra;
  if (!inside_csp(g)) throw InputError("--algebra: a basis matrix is not in csp(V)");
  const auto pi = json_io::torsion_from_json(read_json_file(o.torsion_path, "--torsion"), g.space.dim());
  const auto ctx = build_context(g, o.par());
  const auto res = normalize_torsion(ctx, pi);
  const bool in_w = ctx.complement.contains(res.normalized.flatten());
  const bool shifted = transform_torsion(ctx, pi, res.shift) == res.normalized;
  if (o.json) {
    json j{{"unique", res.unique},
           {"coset_dim", res.coset_dim},
           {"s", json_io::to_json(res.shift.coords)},
           {"pi_norm", json_io::torsion_to_json(res.normalized)}};
    out << j.dump(2) << "\n";
  } else {
    out << "unique: " << yes_no(res.unique) << "\n"
        << "coset_dim: " << res.coset_dim << "\n"
        << "pi_norm_zero: " << yes_no(res.normalized.is_zero()) << "\n";
  }
  if (!in_w || !shifted) {
    err << "verification failed: normalized torsion is not Pi + delta s inside W\n";
    return kExitVerificationFailed;
  }
  return kExitOk;
}

inline void print_report(const ScenarioReport& r, bool audit, std::ostream& out) {
  out << "cubic: " << r.cubic << "\n"
      << "nondegenerate: " << yes_no(r.nondegenerate) << "\n";
  if (r.nondegenerate) {
    out << "legendrian checks: " << (r.legendrian.ok() ? "pass" : "FAIL") << "\n"
        << "stabilizer_dim: " << r.stabilizer_dim << " (gl: " << r.gl_stabilizer_dim
        << ", equal: " << yes_no(r.gl_equals_csp) << ")\n"
        << "prolongation_dim: " << r.prolongation_dim << " (abar nonzero: " << r.abar_nonzero << ")\n";
    std::size_t passed = 0;
    for (const auto& c : r.identity_checks) passed += c.ok ? 1 : 0;
    out << "identity checks: " << passed << "/" << r.identity_checks.size() << " pass\n";
    if (r.euler_witness)
      out << "euler witness: " << (r.euler_witness->all_ok ? "pass" : "FAIL") << " at " << r.euler_witness->points
          << " points, weights (" << r.euler_witness->point_weight << "," << r.euler_witness->quotient_weight << ")\n";
    out << "normalization: unique " << yes_no(r.normalization.unique) << ", coset_dim " << r.normalization.coset_dim
        << "\n";
    for (const auto& a : r.anomalies) out << "anomaly: " << a << "\n";
  }
  out << "audit: " << (audit ? "pass" : "FAIL") << "\n";
}

inline int verify(const Options& o, std::ostream& out, std::ostream& err) {
  const bool has_cubic = !o.cubic_path.empty();
  const bool has_report = !o.report_path.empty();
  if (has_cubic == has_report) throw InputError("verify: give exactly one of --cubic or --report");
  ScenarioReport rep;
  if (has_report) {
    rep = json_io::report_from_json(read_json_file(o.report_path, "--report"));
  } else {
    const CubicForm p = load_cubic(o.cubic_path);
    ScenarioConfig cfg;
    cfg.sampler.seed = resolve_seed(o.seed);
    cfg.sampler.par = o.par();
    rep = run_scenario(p, cfg);
  }
  const bool audit = consistency_audit(rep);
  const bool want_json = o.verify_json != nullptr && o.verify_json->count() > 0;
  if (want_json && o.json_path.empty()) {
    json j = json_io::report_to_json(rep);
    j["audit"] = audit;
    out << j.dump(2) << "\n";
  } else {
    if (want_json) {
      std::ofstream f(o.json_path);
      if (!f) throw InputError("--json: cannot write \"" + o.json_path + "\"");
      json j = json_io::report_to_json(rep);
      j["audit"] = audit;
      f << j.dump(2) << "\n";
    }
    print_report(rep, audit, out);
  }
  if (!audit) err << "verification failed: consistency audit did not pass\n";
  return audit ? kExitOk : kExitVerificationFailed;
}

}  // namespace detail

/// Parses argv and runs one subcommand.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact contact prolongations, cubic-form Legendrians and torsion normalization", "legpro"};
  app.require_subcommand(1);
  detail::Options o;
  app.add_option("--threads", o.threads, "Worker threads (0: all cores); results do not depend on it")
      ->check(CLI::NonNegativeNumber);

  auto* c_csp = app.add_subcommand("csp-dim", "Dimension (and basis with --json) of csp(V), dim V = 2m");
  c_csp->add_option("--m", o.m, "Half-dimension m")->required();
  c_csp->add_flag("--json", o.json, "Emit JSON including the basis");

  auto* c_pro = app.add_subcommand("prolong", "Contact prolongation space of an algebra");
  c_pro->add_option("--algebra", o.algebra_path, "Algebra JSON file")->required();
  c_pro->add_flag("--json", o.json, "Emit JSON including the basis");

  auto* c_cub = app.add_subcommand("cubic-analyze", "Nondegeneracy, isotropy and osculating flags of Z_P");
  c_cub->add_option("--cubic", o.cubic_path, "Cubic form JSON file")->required();
  c_cub->add_option("--seed", o.seed, "Sampler seed");
  c_cub->add_option("--points", o.points, "Sample points")->check(CLI::PositiveNumber);
  c_cub->add_flag("--json", o.json, "Emit JSON");

  auto* c_stab = app.add_subcommand("stabilizer", "Infinitesimal stabilizer of Z_P");
  c_stab->add_option("--cubic", o.cubic_path, "Cubic form JSON file")->required();
  c_stab->add_option("--ambient", o.ambient, "csp or gl")->check(CLI::IsMember({"csp", "gl"}));
  c_stab->add_option("--seed", o.seed, "Sampler seed");
  c_stab->add_flag("--json", o.json, "Emit the algebra as JSON");

  auto* c_norm = app.add_subcommand("normalize", "Normalize a torsion tensor against an algebra");
  c_norm->add_option("--algebra", o.algebra_path, "Algebra JSON file")->required();
  c_norm->add_option("--torsion", o.torsion_path, "Torsion JSON file")->required();
  c_norm->add_flag("--json", o.json, "Emit JSON");

  auto* c_ver = app.add_subcommand("verify", "Run the full pipeline on a cubic, or re-audit a saved report");
  c_ver->add_option("--cubic", o.cubic_path, "Cubic form JSON file");
  c_ver->add_option("--report", o.report_path, "Saved report JSON to audit");
  c_ver->add_option("--seed", o.seed, "Sampler seed");
  o.verify_json = c_ver->add_option("--json", o.json_path, "Emit JSON (to stdout, or to the given file)")
                      ->expected(0, 1);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitInputError;
  }

  try {
    if (c_csp->parsed()) return detail::csp_dim(o, out);
    if (c_pro->parsed()) return detail::prolong(o, out, err);
    if (c_cub->parsed()) return detail::cubic_analyze(o, out);
    if (c_stab->parsed()) return detail::stabilizer(o, out, err);
    if (c_norm->parsed()) return detail::normalize(o, out, err);
    if (c_ver->parsed()) return detail::verify(o, out, err);
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const StageError& e) {
    err << "verification failed: " << e.what() << "\n";
    return kExitVerificationFailed;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitVerificationFailed;
  }
  err << "usage error: no subcommand\n";
  return kExitInputError;
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

}  // namespace legpro::cli

#endif  // LEGPRO_CLI_HPP
