#include <legpro/json_io.hpp>
#include <legpro/verifier.hpp>

#include <gtest/gtest.h>

#include <fstream>

using namespace legpro;

namespace {

CubicForm load(const std::string& name) {
  std::ifstream in(std::string(LEGPRO_DATA_DIR) + "/cubics/" + name);
  return json_io::cubic_from_json(nlohmann::json::parse(in));
}

struct Expected {
  const char* file;
  std::size_t stabilizer;
  std::size_t prolongation;
};

const Expected kCorpus[] = {
    {"x3.json", 4, 4}, {"x3_plus_y3.json", 4, 1}, {"xy2.json", 7, 6}, {"xyz.json", 10, 8}, {"fermat3.json", 5, 1},
};

}  // namespace

TEST(Verifier, ShippedCorpusPassesAudit) {
  for (const auto& e : kCorpus) {
    const auto rep = run_scenario(load(e.file));
    EXPECT_TRUE(rep.nondegenerate) << e.file;
    EXPECT_TRUE(rep.legendrian.ok()) << e.file;
    EXPECT_EQ(rep.stabilizer_dim, e.stabilizer) << e.file;
    EXPECT_EQ(rep.prolongation_dim, e.prolongation) << e.file;
    EXPECT_TRUE(rep.contains_grading) << e.file;
    EXPECT_TRUE(rep.anomalies.empty()) << e.file;
    EXPECT_TRUE(consistency_audit(rep)) << e.file;
  }
}

TEST(Verifier, X3Report) {
  const auto rep = run_scenario(load("x3.json"));
  EXPECT_EQ(rep.legendrian.isotropy_samples, 20u);
  EXPECT_EQ(rep.legendrian.flag_samples, 10u);
  EXPECT_EQ(rep.identity_checks.size(), 40u);
  ASSERT_TRUE(rep.euler_witness.has_value());
  EXPECT_TRUE(rep.euler_witness->all_ok);
  EXPECT_EQ(rep.euler_witness->point_weight, Rational(2));
  EXPECT_EQ(rep.euler_witness->quotient_weight, Rational(1));
  EXPECT_FALSE(rep.normalization.unique);
  EXPECT_EQ(rep.normalization.coset_dim, 4u);
}

TEST(Verifier, DegenerateCubicIsReportedNotAudited) {
  const auto p = CubicForm::from_monomials(2, {Monomial{{0, 0, 0}, Rational(1)}});
  const auto rep = run_scenario(p);
  EXPECT_FALSE(rep.nondegenerate);
  EXPECT_TRUE(consistency_audit(rep));
}

TEST(Verifier, AuditCatchesEachBrokenImplication) {
  const auto good = run_scenario(load("x3.json"));
  ASSERT_TRUE(consistency_audit(good));
  std::vector<std::pair<const char*, std::function<void(ScenarioReport&)>>> breaks = {
      {"isotropy", [](ScenarioReport& r) { r.legendrian.isotropy = false; }},
      {"flag", [](ScenarioReport& r) { r.legendrian.flag_perp = false; }},
      {"gl vs csp", [](ScenarioReport& r) { r.gl_equals_csp = false; }},
      {"gl dim", [](ScenarioReport& r) { r.gl_stabilizer_dim += 1; }},
      {"closure", [](ScenarioReport& r) { r.stabilizer_closed = false; }},
      {"identity", [](ScenarioReport& r) { r.identity_checks[3].ok = false; }},
      {"euler missing", [](ScenarioReport& r) { r.euler_witness.reset(); }},
      {"euler failed", [](ScenarioReport& r) { r.euler_witness->all_ok = false; }},
      {"uniqueness", [](ScenarioReport& r) { r.normalization.unique = true; }},
      {"coset", [](ScenarioReport& r) { r.normalization.coset_dim = 0; }},
  };
  for (auto& [name, br] : breaks) {
    auto r = good;
    br(r);
    EXPECT_FALSE(consistency_audit(r)) << name;
  }
}

TEST(Verifier, DeterministicAcrossThreadCounts) {
  ScenarioConfig a, b;
  b.sampler.par = {4};
  const auto ra = json_io::report_to_json(run_scenario(load("xy2.json"), a));
  const auto rb = json_io::report_to_json(run_scenario(load("xy2.json"), b));
  EXPECT_EQ(ra, rb);
}

TEST(Verifier, ReportJsonRoundTrip) {
  const auto rep = run_scenario(load("x3_plus_y3.json"));
  const auto j = json_io::report_to_json(rep);
  const auto back = json_io::report_from_json(j);
  EXPECT_EQ(json_io::report_to_json(back), j);
  EXPECT_EQ(consistency_audit(back), consistency_audit(rep));
}
