#include <gtest/gtest.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>

#include "psdrank/factorization.hpp"
#include "psdrank/matrix.hpp"

namespace psdrank {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code = -1;
  std::string out;
};

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("psdrank_cli_" + std::to_string(::getpid()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  void write(const std::string& name, const std::string& text) const { std::ofstream(path(name)) << text; }

  std::string read(const std::string& name) const {
    std::ifstream in(path(name));
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
  }

  // stdout only; the trace goes to a file in the scratch directory
  Result run(const std::string& args) const {
    const std::string cmd = "cd '" + dir_.string() + "' && '" PSDRANK_CLI "' --trace trace.log " + args + " 2>stderr.txt";
    Result r;
    FILE* pipe = ::popen(cmd.c_str(), "r");
    char buf[4096];
    while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) r.out.append(buf, n);
    const int status = ::pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
  }

  fs::path dir_;
};

const char* kI3 = "psdrank-matrix v1 3 3\nrow 1\nrow 2\nrow 3\ncol 1\ncol 2\ncol 3\n1 1 1\n2 2 1\n3 3 1\n";

TEST_F(Cli, NormalizeAndSigma) {
  write("phi.txt", "x1 * x1 = 1\n");
  const Result n = run("normalize phi.txt -o f.txt");
  ASSERT_EQ(n.code, 0);
  EXPECT_FALSE(read("f.txt").empty());

  write("g.txt", "# comment\nx1*x1 - 1\n");
  const Result s = run("sigma g.txt");
  EXPECT_EQ(s.code, 0);
  EXPECT_EQ(std::count(s.out.begin(), s.out.end(), '\n'), 9);
  EXPECT_NE(read("trace.log").find("stage=sigma input.sha256="), std::string::npos);
}

TEST_F(Cli, ReduceWritesTarget) {
  write("f.txt", "x1 - 1\n");
  ASSERT_EQ(run("reduce f.txt -o m.mtx").code, 0);
  std::istringstream in(read("m.mtx"));
  std::optional<std::uint64_t> target;
  const InstanceMatrix M = read_instance_matrix(in, &target);
  ASSERT_TRUE(target);
  // |sigma| = 7 for x1 - 1, so |H| = 7^3 - 6^3 = 127 and dim M = 2k + 127 = r - 3 + 127
  EXPECT_EQ(M.rows(), *target - 3 + 127);
  EXPECT_EQ((*target - 3) % 2, 0u);
  const std::string trace = read("trace.log");
  EXPECT_NE(trace.find("param.r=" + std::to_string(*target)), std::string::npos);
}

TEST_F(Cli, ReduceIsByteIdentical) {
  write("f.txt", "x1*x2 - 1\n");
  ASSERT_EQ(run("reduce f.txt -o a.mtx").code, 0);
  ASSERT_EQ(run("reduce f.txt -o b.mtx").code, 0);
  EXPECT_EQ(read("a.mtx"), read("b.mtx"));
}

TEST_F(Cli, WitnessVerifyExtract) {
  write("f.txt", "x1*x1 - 1\n");
  ASSERT_EQ(run("witness f.txt --root x1=-1 --prefix w").code, 0);
  const Result v = run("verify w.completion.mtx w.completion.fac --mode full");
  EXPECT_EQ(v.code, 0);
  EXPECT_NE(v.out.find("max_residual=0 "), std::string::npos);
  EXPECT_NE(v.out.find("pass=true"), std::string::npos);
  const Result e = run("extract-root f.txt w.completion.fac");
  EXPECT_EQ(e.code, 0);
  ASSERT_EQ(e.out.rfind("x1=", 0), 0u) << e.out;
  EXPECT_NEAR(std::stod(e.out.substr(3)), -1.0, 1e-9);
}

TEST_F(Cli, VerifyPFourAndMismatch) {
  write("p4.mtx", "psdrank-matrix v1 3 3\nrow 1\nrow 2\nrow 3\ncol 1\ncol 2\ncol 3\n1 1 4\n1 2 1\n1 3 1\n2 1 1\n2 2 1\n3 1 1\n3 3 1\n");
  write("p4.fac",
        "psdrank-factorization v1 2 3 3 exact\n"
        "row 1 1 1|0:1,1:1\nrow 2 1 1|0:1\nrow 3 1 1|1:1\n"
        "col 1 1 1|0:1,1:1\ncol 2 1 1|0:1\ncol 3 1 1|1:1\n");
  const Result ok = run("verify p4.mtx p4.fac --mode full");
  EXPECT_EQ(ok.code, 0) << ok.out;
  write("i3.mtx", kI3);
  EXPECT_EQ(run("verify i3.mtx p4.fac").code, 1);
}

TEST_F(Cli, SearchVerdicts) {
  write("i3.mtx", kI3);
  const Result fail = run("search i3.mtx --k 2 --restarts 4");
  EXPECT_EQ(fail.code, 1);
  EXPECT_NE(fail.out.find("verdict=failed"), std::string::npos);
  const Result found = run("search i3.mtx --k 3 --witness w.fac");
  EXPECT_EQ(found.code, 0);
  EXPECT_EQ(run("verify i3.mtx w.fac --tol 1e-10").code, 0);
}

TEST_F(Cli, SqrtCheck) {
  write("f.txt", "x1*x1 - 1\n");
  ASSERT_EQ(run("matrices f.txt --prefix g").code, 0);
  const Result r = run("sqrt-check g.B.mtx");
  EXPECT_EQ(r.code, 0);
  write("bad.mtx", "psdrank-matrix v1 2 3\nrow a\nrow b\ncol 1\ncol 2\ncol 3\na 2 1\nb 3 1\n");
  EXPECT_EQ(run("sqrt-check bad.mtx").code, 1);
}

TEST_F(Cli, UsageAndParseErrors) {
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("search").code, 2);
  EXPECT_EQ(run("sigma missing.txt").code, 2);
  write("junk.txt", "x1 +* 2\n");
  EXPECT_EQ(run("sigma junk.txt").code, 2);
  EXPECT_NE(read("stderr.txt").find("error code="), std::string::npos);
  EXPECT_EQ(run("bound junk.txt --m 0").code, 2);
}

TEST_F(Cli, BoundWritesPhi) {
  write("f.txt", "x1*x1 - 1\n");
  ASSERT_EQ(run("bound f.txt --m 1 -o phi.txt").code, 0);
  EXPECT_NE(read("phi.txt").find("y1"), std::string::npos);
}

}  // namespace
}  // namespace psdrank
