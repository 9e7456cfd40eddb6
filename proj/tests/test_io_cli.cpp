#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "roydennet/cli.hpp"
#include "roydennet/error.hpp"
#include "roydennet/generate.hpp"
#include "roydennet/io.hpp"
#include "support.hpp"

using namespace roydennet;
using namespace testing_support;

namespace fs = std::filesystem;

namespace {

std::string fixture(const std::string& name) {
  const char* dir = std::getenv("ROYDENNET_FIXTURES");
  return fs::absolute(fs::path(dir ? dir : "data/fixtures") / name).string();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("roydennet_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int run(std::vector<std::string> args) {
    err_.str("");
    return run_cli(args, err_);
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
  std::ostringstream err_;
};

}  // namespace

TEST(Json, NetRoundTrip) {
  const auto s = random_space(60, 40, 3);
  const auto net = extract_net(s, 2.0 * s.max_edge_length());
  const auto doc = net_to_json(s, net);
  EXPECT_EQ(doc["schema"], kSchema);
  const auto back = net_from_json(s, Json::parse(doc.dump()));
  EXPECT_EQ(back.points, net.points);
  EXPECT_EQ(back.adjacency, net.adjacency);
  EXPECT_EQ(back.kappa, net.kappa);
  EXPECT_EQ(back.degree_bound, net.degree_bound);

  auto tampered = doc;
  tampered["adjacency"].begin().value().push_back(tampered["points"].back());
  EXPECT_THROW(net_from_json(s, tampered), InputError);
  auto wrong = doc;
  wrong["schema"] = "roydennet/0";
  EXPECT_THROW(net_from_json(s, wrong), InputError);
}

TEST(Json, FieldRoundTrip) {
  const auto s = path_space(7, 10);
  const auto net = extract_net(s, 2.0);
  const ScalarField f = proxy_field({0.5, -1.0, 2.25, 1e-300, 3.0, 0.1, 7.0});
  const auto back = field_from_json(s, nullptr, Json::parse(field_to_json(s, nullptr, f).dump()));
  EXPECT_EQ(back.values, f.values);
  const ScalarField g = net_field({1.0, 2.0, 3.0, 4.0});
  const auto gback = field_from_json(s, &net, Json::parse(field_to_json(s, &net, g).dump()));
  EXPECT_EQ(gback.values, g.values);
  EXPECT_EQ(gback.domain, FieldDomain::net);
  Json missing = field_to_json(s, nullptr, f);
  missing["values"].erase("12");
  EXPECT_THROW(field_from_json(s, nullptr, missing), InputError);
}

TEST(Json, ReportRoundTrip) {
  VerificationReport r;
  r.check = "smoothing-energy";
  r.add_constant("c", 0.5, "bump Lipschitz constant");
  r.add_constant("V1(kappa)", 7.0, "volume profile");
  r.measured = 0.125;
  r.ceiling = 3.5;
  r.pass = true;
  r.seed = 9;
  r.trials = 4;
  r.skipped = 1;
  r.runtime_ms = 12.5;
  r.curve_columns = {"a", "b"};
  r.curve = {{1.0, 2.0}, {3.0, 4.0}};
  r.notes = {"no violation found"};
  const auto doc = report_to_json(r, true);
  const auto back = report_from_json(Json::parse(doc.dump()));
  EXPECT_EQ(back.check, r.check);
  ASSERT_EQ(back.constants.size(), 2u);
  EXPECT_EQ(back.constants[1].name, "V1(kappa)");
  EXPECT_EQ(back.constants[1].provenance, "volume profile");
  EXPECT_EQ(back.measured, r.measured);
  EXPECT_EQ(back.ceiling, r.ceiling);
  EXPECT_EQ(back.curve, r.curve);
  EXPECT_EQ(back.notes, r.notes);
  EXPECT_EQ(back.runtime_ms, 12.5);
  EXPECT_FALSE(report_to_json(r, false).contains("runtime_ms"));
  r.ceiling.reset();
  EXPECT_TRUE(report_to_json(r, false)["ceiling"].is_null());
  EXPECT_FALSE(report_from_json(report_to_json(r, false)).ceiling.has_value());
}

TEST(Generate, Counts) {
  const ProxySpace p(generate_path(5));
  EXPECT_EQ(p.size(), 5u);
  EXPECT_EQ(p.edge_count(), 4u);
  const ProxySpace t(generate_regular_tree(3, 4));
  EXPECT_EQ(t.size(), 46u);
  const ProxySpace l(generate_lattice2d(3, 3));
  EXPECT_EQ(l.size(), 9u);
  EXPECT_EQ(l.edge_count(), 12u);
}

TEST(Generate, HyperbolicMeshIsAManifoldProxyWithExponentialGrowth) {
  const ProxySpace h(generate_hyperbolic_disk_mesh({3, 7, 3.0, 1}));
  EXPECT_EQ(h.kind(), SpaceKind::manifold_proxy);
  EXPECT_FALSE(h.designated_boundary().empty());
  for (const Edge& e : h.edges()) EXPECT_GT(e.length, 0.0);
  // Ball volumes about the center grow faster than quadratically.
  Vertex center = 0;
  for (Vertex x = 0; x < h.size(); ++x) {
    const auto& c = h.coords(x);
    const auto& b = h.coords(center);
    if (c[0] * c[0] + c[1] * c[1] < b[0] * b[0] + b[1] * b[1]) center = x;
  }
  const double v1 = volume(h, ball(h, center, 1.0)), v2 = volume(h, ball(h, center, 2.0));
  EXPECT_GT(v2 / v1, 4.0);
}

TEST_F(Cli, MissingFileIsAnInputError) {
  EXPECT_EQ(run({"space", "validate", "/nope/missing.space"}), kExitInputError);
  EXPECT_NE(err_.str().find("/nope/missing.space"), std::string::npos);
}

TEST_F(Cli, RejectsSmallExponent) {
  EXPECT_EQ(run({"verify", "all", fixture("path64.space"), "--kappa", "2", "--p", "1.0", "-o", path("r.json")}),
            kExitInputError);
  EXPECT_NE(err_.str().find("p must exceed 1"), std::string::npos);
}

TEST_F(Cli, UsageErrorsExitTwoAndHelpExitsZero) {
  EXPECT_EQ(run({"frobnicate"}), kExitInputError);
  EXPECT_EQ(run({"net", "extract", fixture("path64.space")}), kExitInputError);  // --kappa missing
  EXPECT_EQ(run({"--help"}), kExitOk);
}

TEST_F(Cli, VerifyAllOnPathWritesDefaultReport) {
  const auto space = fixture("path64.space");
  const auto cwd = fs::current_path();
  fs::current_path(dir_);
  const int code = run({"verify", "all", space, "--p", "2", "--kappa", "2", "--seed", "7"});
  fs::current_path(cwd);
  EXPECT_EQ(code, kExitOk) << err_.str();
  ASSERT_TRUE(fs::exists(dir_ / "report.json"));
  const auto doc = Json::parse(slurp(dir_ / "report.json"));
  EXPECT_EQ(doc["schema"], kSchema);
  EXPECT_EQ(doc["seed"], 7);
  EXPECT_TRUE(doc["pass"].get<bool>());
  EXPECT_EQ(doc["reports"].size(), check_names().size());
}

TEST_F(Cli, ReportsAreByteIdenticalAcrossRunsAndThreadCounts) {
  const auto args = [&](const std::string& out, const std::string& threads) {
    return std::vector<std::string>{"--threads", threads, "verify", "all", fixture("lattice32x32.space"),
                                    "--kappa", "3", "--p", "3", "--seed", "11", "--trials", "4", "-o", path(out)};
  };
  ASSERT_EQ(run(args("a.json", "1")), kExitOk) << err_.str();
  ASSERT_EQ(run(args("b.json", "1")), kExitOk);
  ASSERT_EQ(run(args("c.json", "4")), kExitOk);
  EXPECT_EQ(slurp(path("a.json")), slurp(path("b.json")));
  EXPECT_EQ(slurp(path("a.json")), slurp(path("c.json")));
}

TEST_F(Cli, NetExtractAuditAndTransferPipeline) {
  const std::string space = fixture("path64.space");
  ASSERT_EQ(run({"net", "extract", space, "--kappa", "2", "-o", path("net.json")}), kExitOk) << err_.str();
  EXPECT_EQ(run({"net", "audit", space, path("net.json"), "--r", "3,6", "--qi", "-o", path("audit.json")}), kExitOk)
      << err_.str();
  const ProxySpace s = load_space_file(space);
  const KappaNet net = net_from_json(s, read_json_file(path("net.json")));
  EXPECT_EQ(net.size(), 32u);

  std::vector<double> fbar(net.size());
  for (std::size_t i = 0; i < fbar.size(); ++i) fbar[i] = static_cast<double>(i % 3);
  write_json_file(path("fbar.json"), field_to_json(s, &net, net_field(fbar)));
  ASSERT_EQ(run({"transfer", "smooth", space, path("net.json"), path("fbar.json"), "-o", path("f.json")}), kExitOk)
      << err_.str();
  const auto f = field_from_json(s, nullptr, read_json_file(path("f.json")));
  EXPECT_EQ(f.values, smooth(net_field(fbar), build_partition(s, net)).values);
  ASSERT_EQ(run({"transfer", "discretize", space, path("net.json"), path("f.json"), "-o", path("fs.json")}),
            kExitOk);
  const auto fs_ = field_from_json(s, &net, read_json_file(path("fs.json")));
  EXPECT_EQ(fs_.values, discretize(f, s, net).values);
}

TEST_F(Cli, SolveAndDecompose) {
  write_json_file(path("b.json"), Json::parse(R"({"schema": "roydennet/1", "values": {"0": 0.0, "63": 1.0}})"));
  ASSERT_EQ(run({"solve", fixture("path64.space"), "--boundary", path("b.json"), "--p", "3", "-o", path("h.json")}),
            kExitOk)
      << err_.str();
  const ProxySpace s = load_space_file(fixture("path64.space"));
  const auto h = field_from_json(s, nullptr, read_json_file(path("h.json")));
  for (Vertex x = 0; x < s.size(); ++x) EXPECT_NEAR(h.values[x], s.label(x) / 63.0, 1e-7);

  ASSERT_EQ(run({"decompose", fixture("path64.space"), path("h.json"), "--base", "30", "--radii", "5,10",
                 "-o", path("d.json")}),
            kExitOk)
      << err_.str();
  const auto d = read_json_file(path("d.json"));
  EXPECT_EQ(d["levels"].size(), 2u);
}

TEST_F(Cli, GeneratorsReproduceBundledFixtures) {
  struct Case {
    std::vector<std::string> args;
    std::string file;
  };
  const std::vector<Case> cases = {
      {{"path", "--n", "64"}, "path64.space"},
      {{"lattice2d", "--rows", "32", "--cols", "32"}, "lattice32x32.space"},
      {{"regular-tree", "--degree", "3", "--depth", "8"}, "tree3_depth8.space"},
      {{"hyperbolic-disk-mesh", "--radius", "5", "--subdivisions", "2"}, "hyperbolic_disk.space"},
  };
  for (const auto& c : cases) {
    std::vector<std::string> args{"space", "generate"};
    args.insert(args.end(), c.args.begin(), c.args.end());
    args.insert(args.end(), {"-o", path(c.file)});
    ASSERT_EQ(run(args), kExitOk) << err_.str();
    EXPECT_EQ(slurp(path(c.file)), slurp(fixture(c.file))) << c.file;
  }
}

TEST_F(Cli, GenerateRejectsBadParameters) {
  EXPECT_EQ(run({"space", "generate", "path", "--n", "0", "-o", path("x.space")}), kExitInputError);
  EXPECT_EQ(run({"space", "generate", "moebius", "-o", path("x.space")}), kExitInputError);
}
