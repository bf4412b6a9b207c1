#include <gtest/gtest.h>

#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "evo/classify2d.hpp"
#include "evo/classify3d.hpp"
#include "evo/io.hpp"
#include "evo/iso.hpp"
#include "evo_cli/cli.hpp"

namespace evo {
namespace {

using nlohmann::json;

struct Outcome {
  int code = -1;
  std::string out;
  std::string err;
  json report() const { return json::parse(out); }
};

Outcome run_cli(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  Outcome o;
  o.code = cli::run(args, out, err);
  o.out = out.str();
  o.err = err.str();
  return o;
}

std::string data(const std::string& name) { return std::string(EVO_TEST_DATA_DIR) + "/" + name; }

Matrix to_matrix(const json& j) {
  const int n = static_cast<int>(j.size());
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) m(i, k) = j[i][k].get<double>();
  }
  return m;
}

TEST(Cli, ClassifyScaledE5) {
  const Outcome o = run_cli({"classify", "--input", data("e5_scaled.json"), "--witness"});
  ASSERT_EQ(o.code, cli::kExitOk) << o.err;
  const json r = o.report();
  EXPECT_EQ(r["command"], "classify");
  EXPECT_EQ(r["results"]["label"], "E5");
  const EvolutionAlgebra a = load_algebra(data("e5_scaled.json"));
  const BasisChange w(to_matrix(r["results"]["witness"]));
  EXPECT_TRUE(verify_iso(a, canonical2(Class2::plain(Label2::E5)), w).ok);
}

TEST(Cli, ClassifyThreeDimensionalWitnessReverifies) {
  const Outcome o = run_cli({"classify", "--input", data("e2_scaled.txt"), "--witness"});
  ASSERT_EQ(o.code, cli::kExitOk) << o.err;
  const json r = o.report()["results"];
  EXPECT_EQ(r["label"], "E2");
  EXPECT_FALSE(r["trace"].empty());
  const BasisChange w(to_matrix(r["witness"]));
  EXPECT_TRUE(verify_iso(load_algebra(data("e2_scaled.txt")), canonical3(Label3::E2), w).ok);

  const Outcome plain = run_cli({"classify", "--input", data("e2_scaled.txt")});
  EXPECT_FALSE(plain.report()["results"].contains("witness"));
}

TEST(Cli, ReportHasStableShape) {
  const Outcome o = run_cli({"canonical", "--dim", "3", "--label", "E9"});
  ASSERT_EQ(o.code, cli::kExitOk);
  const json r = o.report();
  for (const char* key : {"command", "inputs", "results", "seed", "tolerances", "version"}) EXPECT_TRUE(r.contains(key));
  EXPECT_EQ(to_matrix(r["results"]["matrix"]), canonical3(Label3::E9).matrix());
}

TEST(Cli, OutputIsByteIdentical) {
  const std::vector<std::vector<std::string>> commands = {
      {"fixed-points", "--input", data("generic3.json"), "--seed", "5", "--restarts", "32"},
      {"iso", "--a", data("e2.json"), "--b", data("e3.json")},
      {"table2d", "--class", "E6", "--a2", "0.5", "--a3", "-0.3"},
      {"linearize", "--input", data("e6.json"), "--all", "--format", "text"},
  };
  for (const auto& args : commands) {
    const Outcome a = run_cli(args);
    const Outcome b = run_cli(args);
    EXPECT_EQ(a.code, cli::kExitOk) << a.err;
    EXPECT_EQ(a.out, b.out);
  }
}

TEST(Cli, ExitCodeTwoOnBadInput) {
  EXPECT_EQ(run_cli({}).code, cli::kExitBadInput);
  EXPECT_EQ(run_cli({"frobnicate"}).code, cli::kExitBadInput);
  EXPECT_EQ(run_cli({"classify", "--input", data("e4.json"), "--bogus"}).code, cli::kExitBadInput);
  EXPECT_EQ(run_cli({"classify", "--input", data("missing.json")}).code, cli::kExitBadInput);
  EXPECT_EQ(run_cli({"classify", "--input", data("broken.json")}).code, cli::kExitBadInput);
  EXPECT_EQ(run_cli({"classify", "--input", data("e4.json"), "--tol", "0"}).code, cli::kExitBadInput);
  EXPECT_EQ(run_cli({"classify", "--input", data("e4.json"), "--format", "xml"}).code, cli::kExitBadInput);
  EXPECT_EQ(run_cli({"classify", "--input", data("generic3.json")}).code, cli::kExitBadInput);
  EXPECT_EQ(run_cli({"canonical", "--dim", "2", "--label", "E6"}).code, cli::kExitBadInput);
  EXPECT_EQ(run_cli({"canonical", "--dim", "3", "--label", "E4", "--a4", "1"}).code, cli::kExitBadInput);
  EXPECT_EQ(run_cli({"canonical", "--dim", "4", "--label", "E4"}).code, cli::kExitBadInput);
  EXPECT_EQ(run_cli({"table2d", "--class", "E6", "--a2", "2", "--a3", "0.5"}).code, cli::kExitBadInput);
  EXPECT_EQ(run_cli({"linearize", "--input", data("e6.json")}).code, cli::kExitBadInput);
  EXPECT_EQ(run_cli({"linearize", "--input", data("e6.json"), "--all", "--point", "1,1"}).code, cli::kExitBadInput);
  EXPECT_EQ(run_cli({"linearize", "--input", data("e6.json"), "--point", "1,1,1"}).code, cli::kExitBadInput);
  EXPECT_EQ(run_cli({"linearize", "--input", data("e6.json"), "--point", "1,x"}).code, cli::kExitBadInput);
  EXPECT_EQ(run_cli({"iso", "--a", data("e6.json"), "--b", data("e4.json")}).code, cli::kExitBadInput);
  EXPECT_EQ(run_cli({"fixed-points", "--input", data("e6.json"), "--restarts", "0"}).code, cli::kExitBadInput);
}

TEST(Cli, IsoRequireFound) {
  const Outcome miss = run_cli({"iso", "--a", data("e4.json"), "--b", data("e7.json"), "--restarts", "8",
                                "--require-found"});
  EXPECT_EQ(miss.code, cli::kExitNotFound);
  EXPECT_EQ(miss.report()["results"]["found"], false);
  EXPECT_EQ(miss.report()["results"]["stage"], "budget-exhausted");

  const Outcome soft = run_cli({"iso", "--a", data("e4.json"), "--b", data("e7.json"), "--restarts", "8"});
  EXPECT_EQ(soft.code, cli::kExitOk);

  const Outcome hit = run_cli({"iso", "--a", data("e2.json"), "--b", data("e3.json"), "--require-found"});
  ASSERT_EQ(hit.code, cli::kExitOk);
  const BasisChange w(to_matrix(hit.report()["results"]["witness"]));
  EXPECT_TRUE(verify_iso(load_algebra(data("e2.json")), load_algebra(data("e3.json")), w).ok);
}

TEST(Cli, Table3dSummary) {
  const Outcome o = run_cli({"table3d"});
  ASSERT_EQ(o.code, cli::kExitOk) << o.err;
  const json forms = o.report()["results"]["forms"];
  ASSERT_EQ(forms.size(), 13u);
  for (const json& f : forms) {
    const Label3 l = parse_label3(f["label"].get<std::string>());
    const int idx = static_cast<int>(l);
    if (idx >= static_cast<int>(Label3::E4) && idx <= static_cast<int>(Label3::E10)) {
      ASSERT_EQ(f["rows"].size(), 1u) << f["label"];
      EXPECT_EQ(f["rows"][0]["fixed_point"], json::array({1.0, 0.0, 0.0}));
      EXPECT_EQ(f["rows"][0]["classified_as"], "E4");
      const json& cls = f["rows"][0]["classification"];
      const EvolutionAlgebra jac(3, to_matrix(f["rows"][0]["jacobian_matrix"]));
      EXPECT_TRUE(verify_iso(jac, canonical3(Label3::E4), BasisChange(to_matrix(cls["witness"]))).ok);
    } else {
      EXPECT_TRUE(f["rows"].empty()) << f["label"];
    }
  }
}

TEST(Cli, Table2dRows) {
  const Outcome e2 = run_cli({"table2d", "--class", "E2"});
  ASSERT_EQ(e2.code, cli::kExitOk);
  const json rows = e2.report()["results"]["rows"];
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0]["classified_as"], "E1");
  EXPECT_EQ(rows[0]["matches_prediction"], true);

  EXPECT_TRUE(run_cli({"table2d", "--class", "E3"}).report()["results"]["rows"].empty());

  const json e7 = run_cli({"table2d", "--class", "E7", "--a4", "-2"}).report()["results"];
  EXPECT_EQ(e7["rows"].size(), 3u);
  ASSERT_EQ(e7["notes"].size(), 1u);
  EXPECT_NE(e7["notes"][0].get<std::string>().find("-3/cbrt(4)"), std::string::npos);
}

TEST(Cli, FixedPointsAndLinearize) {
  const json fp = run_cli({"fixed-points", "--input", data("e7.json")}).report()["results"];
  ASSERT_EQ(fp["points"].size(), 1u);
  EXPECT_EQ(fp["points"][0]["point"], json::array({1.0, 0.0, 0.0}));
  EXPECT_EQ(fp["complete"], true);
  EXPECT_EQ(fp["method"], "closed-form");

  const json lin = run_cli({"linearize", "--input", data("e5_scaled.json"), "--point", "0,-0.3333333333333333"})
                       .report()["results"]["linearizations"];
  ASSERT_EQ(lin.size(), 1u);
  EXPECT_EQ(lin[0]["classification"]["label"], "E1");
}

TEST(Cli, TextFormat) {
  const Outcome o = run_cli({"classify", "--input", data("e5_scaled.json"), "--format", "text"});
  ASSERT_EQ(o.code, cli::kExitOk);
  EXPECT_NE(o.out.find("label: E5"), std::string::npos);
  EXPECT_NE(o.out.find("command: classify"), std::string::npos);
}

TEST(Cli, Help) {
  const Outcome o = run_cli({"--help"});
  EXPECT_EQ(o.code, cli::kExitOk);
  EXPECT_NE(o.out.find("classify"), std::string::npos);
}

}  // namespace
}  // namespace evo
