#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int code = -1;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  std::string cmd = std::string(QGAVG_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::string out;
  char buf[4096];
  std::size_t n = 0;
  while ((n = std::fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
  int status = pclose(p);
  RunResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = out;
  return r;
}

fs::path scratch_dir() {
  fs::path d = fs::temp_directory_path() / "qgavg_cli_scratch";
  fs::create_directories(d);
  return d;
}

std::string write_file(const std::string& name, const std::string& text) {
  fs::path p = scratch_dir() / name;
  std::ofstream f(p);
  f << text;
  f.close();
  return p.string();
}

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  return text;
}

int count_occurrences(const std::string& hay, const std::string& needle) {
  int c = 0;
  for (std::size_t at = hay.find(needle); at != std::string::npos;
       at = hay.find(needle, at + needle.size()))
    ++c;
  return c;
}

const char* kIdS3dual =
    R"({"shape":[1,1,2],"blocks":[[[[1,0]]],[[[1,0]]],[[[1,0],[0,0]],[[0,0],[1,0]]]]})";

}  // namespace

TEST_CASE("the quantum dimension example prints the closed value") {
  RunResult r = run_cli("suq2 qdim --q 0.5 --l 0.5");
  CHECK(r.code == 0);
  CHECK(r.out == "2.5\n");
}

TEST_CASE("the double suite passes on the builtin s3 dual") {
  RunResult r = run_cli("double verify --group builtin:s3dual");
  CHECK(r.code == 0);
  CHECK(r.out.find("all checks passed") != std::string::npos);
  CHECK(count_occurrences(r.out, "[ok]") >= 25);
}

TEST_CASE("verification reports are byte identical across runs") {
  fs::path a = scratch_dir() / "rep_a.json";
  fs::path b = scratch_dir() / "rep_b.json";
  RunResult r1 = run_cli("double verify --group builtin:z2 --format json --out " + a.string());
  RunResult r2 = run_cli("double verify --group builtin:z2 --format json --out " + b.string());
  CHECK(r1.code == 0);
  CHECK(r2.code == 0);
  std::string ta = slurp(a.string()), tb = slurp(b.string());
  CHECK(ta == tb);
  CHECK(ta.find("\"artifact\"") != std::string::npos);
  CHECK(ta.find("\"digest\"") != std::string::npos);
  CHECK(!fs::exists(a.string() + ".tmp"));
}

TEST_CASE("malformed inputs exit with code two") {
  std::string bad = write_file("bad.json", "this is not json");
  CHECK(run_cli("coadj avg --group builtin:s3dual --element " + bad).code == 2);
  CHECK(run_cli("fqg verify --group builtin:nosuch").code == 2);
  CHECK(run_cli("fqg verify").code == 2);
  CHECK(run_cli("suq2 qdim --q 1.5 --l 1").code == 2);
  CHECK(run_cli("suq2 fuse --q 0.5 --l1 1").code == 2);
  CHECK(run_cli("suq2 fuse --q 0.5").code == 2);
  CHECK(run_cli("double verify --group builtin:z2 --format yaml").code == 2);
  std::string small = write_file("small.json",
                                 R"({"shape":[1,1],"blocks":[[[[1,0]]],[[[1,0]]]]})");
  CHECK(run_cli("coadj avg --group builtin:s3dual --element " + small).code == 2);
}

TEST_CASE("the q deformed family is refused as unsupported") {
  CHECK(run_cli("coadj avg --q 0.5 --group builtin:s3dual --element missing.json").code == 4);
  CHECK(run_cli("coadj classexp --q 0.7 --group builtin:z2").code == 4);
}

TEST_CASE("a non cp multiplier is reported with exit code three") {
  std::string b = write_file("noncp.json", R"({"shape":[1,1],"blocks":[[[[1,0]]],[[[3,0]]]]})");
  RunResult r = run_cli("mult check-cp --group builtin:z2 --element " + b);
  CHECK(r.code == 3);
  CHECK(r.out.find("cp: no") != std::string::npos);
  std::string g = write_file("cp.json", R"({"shape":[1,1],"blocks":[[[[1,0]]],[[[0.5,0]]]]})");
  CHECK(run_cli("mult check-cp --group builtin:z2 --element " + g).code == 0);
}

TEST_CASE("averaged elements round trip through files") {
  std::string x = write_file("id_s3dual.json", kIdS3dual);
  fs::path y = scratch_dir() / "avg_out.json";
  RunResult r = run_cli("coadj avg --group builtin:s3dual --element " + x +
                        " --format json --out " + y.string());
  CHECK(r.code == 0);
  RunResult back = run_cli("mult check-cp --group builtin:s3dual --element " + y.string());
  CHECK(back.code == 0);
  CHECK(back.out.find("cp: yes") != std::string::npos);
}

TEST_CASE("model summaries carry the block data") {
  RunResult r = run_cli("fqg build --group builtin:s3dual --format json");
  CHECK(r.code == 0);
  CHECK(r.out.find("\"gns_dimension\":6") != std::string::npos);
  CHECK(r.out.find("\"compact_blocks\":[1,1,1,1,1,1]") != std::string::npos);
  CHECK(r.out.find("\"irrep_table\"") != std::string::npos);
}

TEST_CASE("subgroup averaging finds an embedding on its own") {
  RunResult r = run_cli("avg xi --group builtin:s3 --subgroup builtin:z2 --format json");
  CHECK(r.code == 0);
  CHECK(r.out.find("\"domain\":[1,1,1,1,1,1]") != std::string::npos);
  CHECK(run_cli("avg xi --group builtin:s3 --subgroup builtin:z2 --embed 0,0").code == 2);
  CHECK(run_cli("avg xi --group builtin:z3 --subgroup builtin:z2").code == 2);
}

TEST_CASE("group files load on either face") {
  std::string g = write_file(
      "z2.json",
      R"({"name":"z2file","order":2,"identity":0,"table":[[0,1],[1,0]],"irreps":[)"
      R"({"dim":1,"matrices":[[[[1,0]]],[[[1,0]]]]},)"
      R"({"dim":1,"matrices":[[[[1,0]]],[[[-1,0]]]]}]})");
  CHECK(run_cli("fqg verify --group " + g + " --face function").code == 0);
  CHECK(run_cli("fqg verify --group " + g + " --face dual").code == 0);
  std::string broken = write_file(
      "z2broken.json",
      R"({"name":"bad","order":2,"identity":0,"table":[[0,1],[1,1]],"irreps":[)"
      R"({"dim":1,"matrices":[[[[1,0]]],[[[1,0]]]]}]})");
  CHECK(run_cli("fqg verify --group " + broken).code == 2);
}

TEST_CASE("the help text is reachable") {
  CHECK(run_cli("--help").code == 0);
  CHECK(run_cli("suq2 --help").code == 0);
}
