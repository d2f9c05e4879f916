#include <gtest/gtest.h>

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Outcome {
  int code = -1;
  std::string out;
};

class Cli : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = fs::temp_directory_path() / ("geoloop_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir_);
    write("s23.json", R"({"curvature":1,"regular":{"face_angle":2.0943951023931957}})");
    write("s045.json", R"({"curvature":1,"regular":{"face_angle":1.4137166941154069}})");
    write("h4.json", R"({"curvature":-1,"regular":{"face_angle":0.7853981633974483}})");
    write("h03.json", R"({"curvature":-1,"regular":{"face_angle":0.9424777960769379}})");
    write("flat.json", R"({"curvature":0,"regular":{"edge":1}})");
    write("bad.json", R"({"curvature":1,"edges":{"A1A2":3,"A1A3":3,"A1A4":3,"A2A3":3,"A2A4":3,"A3A4":3}})");
    write("nokappa.json", R"({"regular":{"edge":1}})");
    write("badangle.json", R"({"curvature":-1,"regular":{"face_angle":1.2}})");
    write("irregular.json",
          R"({"curvature":-1,"edges":{"A1A2":1.6,"A1A3":1.5,"A1A4":1.55,"A2A3":1.45,"A2A4":1.5,"A3A4":1.6}})");
    write("broken.json", "{not json");
  }
  static void TearDownTestSuite() { fs::remove_all(dir_); }

  static void write(const std::string& name, const std::string& text) { std::ofstream(dir_ / name) << text; }
  static std::string path(const std::string& name) { return (dir_ / name).string(); }

  static Outcome run(const std::string& args) {
    const std::string cmd = std::string("\"") + GEOLOOP_CLI + "\" " + args + " 2>/dev/null";
    Outcome r;
    FILE* p = ::popen(cmd.c_str(), "r");
    if (!p) return r;
    char buf[4096];
    std::size_t n;
    while ((n = std::fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
    const int status = ::pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
  }

  static std::vector<json> lines(const std::string& s) {
    std::vector<json> out;
    std::istringstream in(s);
    for (std::string line; std::getline(in, line);)
      if (!line.empty()) out.push_back(json::parse(line));
    return out;
  }

  static fs::path dir_;
};

fs::path Cli::dir_;

}  // namespace

TEST_F(Cli, Validate) {
  EXPECT_EQ(run("validate " + path("s23.json")).code, 0);
  EXPECT_EQ(run("validate " + path("h4.json")).code, 0);
  const Outcome bad = run("validate " + path("bad.json"));
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.out.find("invalid spherical face"), std::string::npos);
  EXPECT_EQ(run("validate " + path("badangle.json")).code, 1);
  EXPECT_EQ(run("validate " + path("nokappa.json")).code, 2);
  EXPECT_EQ(run("validate " + path("broken.json")).code, 2);
  EXPECT_EQ(run("validate " + path("missing.json")).code, 2);
  EXPECT_EQ(run("").code, 2);
}

TEST_F(Cli, SphericalLoops) {
  const Outcome r = run("loops " + path("s23.json") + " --all");
  ASSERT_EQ(r.code, 0);
  const auto reps = lines(r.out);
  EXPECT_EQ(reps.size(), 12u);
  for (const json& j : reps) EXPECT_EQ(j.at("status"), "exists");

  const Outcome none = run("loops " + path("s045.json") + " --all");
  EXPECT_EQ(none.code, 1);
  for (const json& j : lines(none.out)) EXPECT_EQ(j.at("status"), "blocked");

  EXPECT_EQ(run("loops " + path("s23.json") + " --pq 0,1").code, 2);
}

TEST_F(Cli, HyperbolicLoops) {
  const Outcome r = run("loops " + path("h4.json") + " --pq 1,2 --vertex A3");
  ASSERT_EQ(r.code, 0);
  const auto reps = lines(r.out);
  ASSERT_EQ(reps.size(), 1u);
  EXPECT_EQ(reps[0].at("vertex"), "A3");
  EXPECT_EQ(reps[0].at("type"), json::array({1, 2}));
  EXPECT_NEAR(reps[0].at("length").get<double>(), 7.105056586, 1e-8);

  EXPECT_EQ(run("loops " + path("h4.json") + " --pq 2,4").code, 2);
  EXPECT_EQ(run("loops " + path("h4.json") + " --pq x").code, 2);
  EXPECT_EQ(run("loops " + path("h4.json") + " --pq 0,1 --vertex A9").code, 2);
  EXPECT_EQ(run("loops " + path("badangle.json") + " --pq 0,1").code, 1);
}

TEST_F(Cli, IrregularHyperbolicNeedsSmallAngles) {
  const Outcome r = run("loops " + path("irregular.json") + " --pq 0,1");
  EXPECT_EQ(r.code, 1);
  const auto reps = lines(r.out);
  ASSERT_EQ(reps.size(), 1u);
  EXPECT_EQ(reps[0].at("status"), "error");
  const Outcome forced = run("loops " + path("irregular.json") + " --pq 0,1 --force");
  EXPECT_NE(forced.code, 2);
}

TEST_F(Cli, OutDirWritesOneFilePerReport) {
  const fs::path out = dir_ / "out";
  const Outcome r = run("loops " + path("h4.json") + " --pq 0,1 --all --out-dir " + out.string());
  ASSERT_EQ(r.code, 0);
  for (const char* v : {"A1", "A2", "A3", "A4"}) {
    const fs::path f = out / (std::string("loop_") + v + "_0_1.json");
    ASSERT_TRUE(fs::exists(f)) << f;
    json j;
    std::ifstream(f) >> j;
    EXPECT_EQ(j.at("vertex"), v);
  }
  ASSERT_EQ(run("loops " + path("s23.json") + " --vertex A4 --out-dir " + out.string()).code, 0);
  EXPECT_TRUE(fs::exists(out / "loop_A4_A1.json"));
}

TEST_F(Cli, FlatLoopIsBlocked) {
  const Outcome r = run("loops " + path("flat.json") + " --pq 0,1");
  EXPECT_EQ(r.code, 1);
  const auto reps = lines(r.out);
  ASSERT_EQ(reps.size(), 1u);
  EXPECT_EQ(reps[0].at("status"), "blocked");
  EXPECT_EQ(reps[0].at("witness").at("kind"), "vertex hit");
}

TEST_F(Cli, Trace) {
  const Outcome r = run("trace " + path("flat.json") + " --face A1A2A3 --edge-point A1A2 0.5 --angle 1.0471975511965976"
                    " --max-length 10");
  ASSERT_EQ(r.code, 0);
  const json j = json::parse(r.out);
  EXPECT_EQ(j.at("stop"), "closed");
  EXPECT_NEAR(j.at("length").get<double>(), 2.0, 1e-12);

  const Outcome hit = run("trace " + path("flat.json") +
                      " --face A1A2A3 --edge-point A1A2 0.5 --angle 1.5707963267948966 --max-length 10");
  EXPECT_EQ(json::parse(hit.out).at("stop"), "vertex hit");
  EXPECT_EQ(run("trace " + path("flat.json") + " --face A1A2A3 --edge-point A1A2 0.5 --angle 1 --max-length 0").code,
            2);
  EXPECT_EQ(run("trace " + path("flat.json") + " --face A2A3A4 --edge-point A1A2 0.5 --angle 1 --max-length 1").code,
            2);
}

TEST_F(Cli, RenderIsDeterministic) {
  const std::string a = (dir_ / "a.svg").string(), b = (dir_ / "b.svg").string();
  ASSERT_EQ(run("render " + path("h4.json") + " --pq 0,1 --projection poincare --out " + a).code, 0);
  ASSERT_EQ(run("render " + path("h4.json") + " --pq 0,1 --projection poincare --out " + b).code, 0);
  std::stringstream sa, sb;
  sa << std::ifstream(a).rdbuf();
  sb << std::ifstream(b).rdbuf();
  EXPECT_EQ(sa.str(), sb.str());
  EXPECT_NE(sa.str().find("<svg"), std::string::npos);

  const Outcome sph = run("render " + path("s23.json") + " --vertex A4 --middle A1 --projection stereographic");
  EXPECT_EQ(sph.code, 0);
  EXPECT_NE(sph.out.find("class=\"curve\""), std::string::npos);
  EXPECT_EQ(run("render " + path("h4.json") + " --pq 0,1 --projection plane").code, 2);
}

TEST_F(Cli, RenderFromAReport) {
  const Outcome r = run("loops " + path("h4.json") + " --pq 1,1");
  ASSERT_EQ(r.code, 0);
  write("rep.json", lines(r.out).at(0).dump());
  const Outcome svg = run("render " + path("rep.json") + " --projection poincare");
  EXPECT_EQ(svg.code, 0);
  EXPECT_NE(svg.out.find("class=\"curve\""), std::string::npos);
}

TEST_F(Cli, EpsilonOverride) {
  const std::string cmd = "loops " + path("h4.json") + " --pq 0,1";
  ::setenv("GEOLOOP_EPS_GEOM", "1e-10", 1);
  const Outcome r = run(cmd);
  ::unsetenv("GEOLOOP_EPS_GEOM");
  ASSERT_EQ(r.code, 0);
  EXPECT_DOUBLE_EQ(lines(r.out).at(0).at("numerics").at("epsilons").at("geom").get<double>(), 1e-10);
  ::setenv("GEOLOOP_EPS_GEOM", "banana", 1);
  EXPECT_EQ(run(cmd).code, 2);
  ::unsetenv("GEOLOOP_EPS_GEOM");
}
