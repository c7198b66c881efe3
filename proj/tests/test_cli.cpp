#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
};

/// Runs the command-line tool with the given arguments, capturing stdout.
Result run(const std::string& args) {
  const std::string cmd = std::string(VISOPT_CLI) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe);
  std::string out;
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string scenario(const char* name) { return std::string(VISOPT_SOURCE_DIR) + "/scenarios/" + name + ".json"; }

std::string read(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("visopt-cli-" + std::to_string(::getpid()) + "-" + std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  static int& counter() {
    static int c = 0;
    return c;
  }
  std::string arg() const { return "--out-dir " + path.string(); }
};

fs::path write_json(const fs::path& dir, const std::string& text) {
  const fs::path p = dir / "custom.json";
  std::ofstream(p) << text;
  return p;
}

bool contains(const std::string& s, const std::string& needle) { return s.find(needle) != std::string::npos; }

}  // namespace

TEST_CASE("visibility at a hidden point") {
  TempDir t;
  const Result r = run("visibility --scenario " + scenario("strip") + " --at 0,0 " + t.arg());
  CHECK(r.code == 0);
  CHECK(contains(r.out, "V=0\n"));
  CHECK(fs::exists(t.path / "strip_visibility.json"));
  CHECK(fs::exists(t.path / "strip_visibility.svg"));
}

TEST_CASE("input errors exit with code 2") {
  TempDir t;
  CHECK(run("visibility --scenario " + scenario("strip") + " --at 5,2 " + t.arg()).code == 2);
  CHECK(run("visibility --scenario " + scenario("strip") + " --at banana " + t.arg()).code == 2);
  CHECK(run("").code == 2);
  CHECK(run("structures --scenario /nonexistent.json " + t.arg()).code == 2);
  CHECK(run("render --scenario " + scenario("strip") + " --layers environment,bogus " + t.arg()).code == 2);
}

TEST_CASE("invalid regions and starts are rejected") {
  TempDir t;
  const std::string base = R"({"name": "custom",
    "environment": {"outer": [[0,0],[4,0],[4,4],[0,4]], "holes": [[[1.5,1.5],[2.5,1.5],[2.5,2.5],[1.5,2.5]]]},
    "d1": [[0.2,0.2],[1.2,0.2],[1.2,1.2],[0.2,1.2]],)";
  const fs::path bad_d2 = write_json(t.path, base + R"("d2": [[1,1],[3,1],[3,3],[1,3]], "starts": [[0.5,0.5]]})");
  CHECK(run("structures --scenario " + bad_d2.string() + " " + t.arg()).code == 2);
  const fs::path bad_start = write_json(t.path, base + R"("d2": [[3,3],[3.8,3],[3.8,3.8],[3,3.8]], "starts": [[3.5,0.5]]})");
  CHECK(run("optimize --scenario " + bad_start.string() + " " + t.arg()).code == 2);
}

TEST_CASE("structures reports labelled faces") {
  TempDir t;
  const Result r = run("structures --scenario " + scenario("strip") + " " + t.arg());
  CHECK(r.code == 0);
  CHECK(contains(r.out, "reflex=6"));
  CHECK(contains(r.out, "bound=54"));
  CHECK(contains(r.out, "{o1,o2}"));
  CHECK(contains(r.out, "{q3,o1,o4}"));
  CHECK(fs::exists(t.path / "strip_structures.json"));
}

TEST_CASE("a convex environment has one face and no segments") {
  TempDir t;
  const fs::path p = write_json(t.path, R"({"name": "custom",
    "environment": {"outer": [[0,0],[4,0],[4,4],[0,4]], "holes": []},
    "d1": [[0.5,0.5],[1.5,0.5],[1.5,1.5],[0.5,1.5]], "d2": [[2,2],[3,2],[3,3],[2,3]], "starts": [[1,1]]})");
  const Result r = run("structures --scenario " + p.string() + " " + t.arg());
  CHECK(r.code == 0);
  CHECK(contains(r.out, "segments=0"));
  CHECK(contains(r.out, "faces=1"));
}

TEST_CASE("gradient field summary") {
  TempDir t;
  const Result r = run("grad --scenario " + scenario("lshape") + " --grid 30 " + t.arg());
  CHECK(r.code == 0);
  const auto pos = r.out.find("max_rel_err=");
  REQUIRE(pos != std::string::npos);
  CHECK(std::stod(r.out.substr(pos + 12)) <= 1e-3);
  CHECK(read(t.path / "lshape_grad.csv").rfind("x,y,status,", 0) == 0);
}

TEST_CASE("optimization output is reproducible, serial or parallel") {
  TempDir a, b, c;
  REQUIRE(run("optimize --scenario " + scenario("strip") + " " + a.arg()).code == 0);
  REQUIRE(run("optimize --scenario " + scenario("strip") + " " + b.arg()).code == 0);
  REQUIRE(run("optimize --scenario " + scenario("strip") + " --parallel " + c.arg()).code == 0);
  const std::string first = read(a.path / "strip_trajectories.csv");
  CHECK_FALSE(first.empty());
  CHECK(first == read(b.path / "strip_trajectories.csv"));
  CHECK(first == read(c.path / "strip_trajectories.csv"));
  CHECK(fs::exists(a.path / "strip_runs.json"));
  CHECK(fs::exists(a.path / "strip_optimize.svg"));
}

TEST_CASE("render draws every requested layer") {
  TempDir t;
  const Result r = run("render --scenario " + scenario("strip") +
                       " --layers environment,d1,d2,inflection_segments,partition_faces,visibility_region_at,"
                       "gradient_field,trajectories --at 2,0 --grid 10 " +
                       t.arg());
  CHECK(r.code == 0);
  const std::string svg = read(t.path / "strip_render.svg");
  for (const char* l : {"environment", "d1", "d2", "inflection_segments", "partition_faces", "visibility_region_at",
                        "gradient_field", "trajectories"}) {
    CHECK_MESSAGE(contains(svg, std::string("id=\"layer-") + l + "\""), l);
  }
}
