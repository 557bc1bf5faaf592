#include <legpro/cli.hpp>
#include <legpro/json_io.hpp>

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace legpro;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string data(const std::string& rel) { return std::string(LEGPRO_DATA_DIR) + "/" + rel; }

std::string temp_file(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / ("legpro_test_" + name);
  std::ofstream(path) << content;
  return path.string();
}

}  // namespace

TEST(Cli, CspDim) {
  auto r = run({"csp-dim", "--m", "2"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("11"), std::string::npos);

  r = run({"csp-dim", "--m", "1", "--json"});
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j.at("dim_V"), 2);
  EXPECT_EQ(j.at("basis").size(), 4u);
  EXPECT_EQ(j.at("closed"), true);
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"no-such-command"}).code, 2);
  EXPECT_EQ(run({"csp-dim"}).code, 2);
  EXPECT_EQ(run({"csp-dim", "--m", "0"}).code, 2);
  EXPECT_EQ(run({"verify"}).code, 2);
  EXPECT_EQ(run({"stabilizer", "--cubic", data("cubics/x3.json"), "--ambient", "so"}).code, 2);
}

TEST(Cli, HelpExitsZero) { EXPECT_EQ(run({"--help"}).code, 0); }

TEST(Cli, MalformedInputsExitTwo) {
  for (const char* f : {"fixtures/malformed_coeff.json", "fixtures/malformed_indices.json", "fixtures/not_json.json",
                        "fixtures/does_not_exist.json"}) {
    const auto r = run({"verify", "--cubic", data(f)});
    EXPECT_EQ(r.code, 2) << f;
    EXPECT_FALSE(r.err.empty()) << f;
  }
}

TEST(Cli, ErrorMessageNamesField) {
  const auto r = run({"cubic-analyze", "--cubic", data("fixtures/malformed_coeff.json")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("coeff"), std::string::npos) << r.err;
}

TEST(Cli, DegenerateCubic) {
  // Degeneracy is a reported outcome, not a failed invariant.
  const auto v = run({"verify", "--cubic", data("fixtures/x3_degenerate_n2.json")});
  EXPECT_EQ(v.code, 0);
  EXPECT_NE(v.out.find("nondegenerate: no"), std::string::npos) << v.out;
  const auto r = run({"cubic-analyze", "--cubic", data("fixtures/x3_degenerate_n2.json")});
  EXPECT_NE(r.out.find("nondegenerate: no"), std::string::npos) << r.out;
}

TEST(Cli, VerifyCorpusExitsZero) {
  for (const char* f : {"x3.json", "x3_plus_y3.json", "xy2.json", "xyz.json", "fermat3.json"})
    EXPECT_EQ(run({"verify", "--cubic", data(std::string("cubics/") + f)}).code, 0) << f;
}

TEST(Cli, CorruptedReportExitsOne) {
  const auto r = run({"verify", "--report", data("fixtures/corrupted_report.json")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("audit: FAIL"), std::string::npos);
}

TEST(Cli, VerifyJsonRoundTripsThroughReport) {
  const auto r = run({"verify", "--cubic", data("cubics/x3.json"), "--json"});
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j.at("audit"), true);
  EXPECT_EQ(j.at("prolongation_dim"), 4);
  const auto path = temp_file("x3_report.json", r.out);
  EXPECT_EQ(run({"verify", "--report", path}).code, 0);

  const auto to_file = std::filesystem::temp_directory_path() / "legpro_test_written.json";
  const auto w = run({"verify", "--cubic", data("cubics/x3.json"), "--json", to_file.string()});
  EXPECT_EQ(w.code, 0);
  EXPECT_NE(w.out.find("audit: pass"), std::string::npos);
  std::ifstream in(to_file);
  EXPECT_EQ(nlohmann::json::parse(in), j);
}

TEST(Cli, SeedFlagIsRecorded) {
  const auto r = run({"verify", "--cubic", data("cubics/x3.json"), "--seed", "7", "--json"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(nlohmann::json::parse(r.out).at("seed"), 7);
}

TEST(Cli, StabilizerJsonFeedsProlong) {
  const auto s = run({"stabilizer", "--cubic", data("cubics/x3.json"), "--json"});
  ASSERT_EQ(s.code, 0);
  const auto alg = nlohmann::json::parse(s.out);
  EXPECT_EQ(alg.at("basis").size(), 4u);
  const auto path = temp_file("x3_stab.json", s.out);
  const auto p = run({"prolong", "--algebra", path, "--json"});
  ASSERT_EQ(p.code, 0);
  EXPECT_EQ(nlohmann::json::parse(p.out).at("prolongation_dim"), 4);
}

TEST(Cli, ProlongRejectsBadAlgebras) {
  // e_00 on dim V = 4 is not conformally symplectic.
  const std::string not_csp =
      R"({"dim_V": 4, "basis": [[["1","0","0","0"],["0","0","0","0"],["0","0","0","0"],["0","0","0","0"]]], "closed": true})";
  EXPECT_EQ(run({"prolong", "--algebra", temp_file("not_csp.json", not_csp)}).code, 2);

  // e and f of sl(2) claimed closed but missing h.
  const std::string open = R"({"dim_V": 2, "basis": [[["0","1"],["0","0"]], [["0","0"],["1","0"]]], "closed": true})";
  EXPECT_EQ(run({"prolong", "--algebra", temp_file("open.json", open)}).code, 1);

  const std::string odd = R"({"dim_V": 3, "basis": [], "closed": true})";
  EXPECT_EQ(run({"prolong", "--algebra", temp_file("odd.json", odd)}).code, 2);
}

TEST(Cli, NormalizeExactTorsion) {
  // g = span{I} on dim V = 4 has injective delta; delta of A_{e_0} = I is exact torsion.
  const std::string alg = R"({"dim_V": 4, "basis": [[["1","0","0","0"],["0","1","0","0"],["0","0","1","0"],["0","0","0","1"]]], "closed": true})";
  const auto apath = temp_file("scalar.json", alg);
  Matrix d = delta_matrix(make_subalgebra(standard_space(2), {Matrix::identity(4)}));
  const auto pi = TorsionTensor::unflatten(4, d.column(0));
  const auto tpath = temp_file("exact_torsion.json", json_io::torsion_to_json(pi).dump());
  const auto r = run({"normalize", "--algebra", apath, "--torsion", tpath, "--json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j.at("unique"), true);
  EXPECT_EQ(j.at("coset_dim"), 0);
  EXPECT_TRUE(j.at("pi_norm").at("pairs").empty());
  EXPECT_EQ(j.at("s").at(0), "-1");

  const std::string bad = R"({"pairs": [{"ij": [2, 1], "value": ["1","0","0","0"]}]})";
  EXPECT_EQ(run({"normalize", "--algebra", apath, "--torsion", temp_file("bad_torsion.json", bad)}).code, 2);
}

TEST(Cli, ThreadsOptionAccepted) {
  const auto a = run({"--threads", "1", "verify", "--cubic", data("cubics/xy2.json"), "--json"});
  const auto b = run({"--threads", "3", "verify", "--cubic", data("cubics/xy2.json"), "--json"});
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
}
