#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

namespace {

namespace fs = std::filesystem;

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run(const std::string& args) {
  const std::string cmd = std::string(ICF_CLI_PATH) + " " + args + " 2>/dev/null";
  std::array<char, 4096> buf{};
  RunResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::size_t got = 0;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0)
    r.out.append(buf.data(), got);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

fs::path write_family(const std::string& name, const std::string& text) {
  const fs::path dir = fs::temp_directory_path() / "icflab-cli-test";
  fs::create_directories(dir);
  const fs::path p = dir / name;
  std::ofstream(p) << text;
  return p;
}

const std::string kChain = "n=3\n-\n1\n1,2\n1,2,3\n";
const std::string kPower2 = "n=2\n-\n1\n2\n1,2\n";

}  // namespace

TEST_CASE("check exit codes partition the outcomes") {
  const auto chain = write_family("chain.fam", kChain);
  const auto power = write_family("power.fam", kPower2);
  CHECK(run("check " + chain.string()).exit_code == 1);
  CHECK(run("check " + power.string()).exit_code == 0);
  CHECK(run("check " + power.string() + " --json").exit_code == 0);
  const auto broken = write_family("broken.fam", "n=2\n3\n");
  CHECK(run("check " + broken.string()).exit_code == 2);
  CHECK(run("check /nonexistent.fam").exit_code == 2);
  const auto open_pair = write_family("open.fam", "n=3\n1,2\n2,3\n");
  CHECK(run("check " + open_pair.string()).exit_code == 2);  // not closed
  CHECK(run("bogus-subcommand").exit_code == 2);
  CHECK(run("check").exit_code == 2);
}

TEST_CASE("check reduces by default and refuses with --no-reduce") {
  const auto universal = write_family("universal.fam", "n=2\n1\n1,2\n");
  CHECK(run("check " + universal.string()).exit_code == 0);
  CHECK(run("check " + universal.string() + " --no-reduce").exit_code == 2);
  const auto ground_only = write_family("ground.fam", "n=2\n1,2\n");
  CHECK(run("check " + ground_only.string()).exit_code == 2);  // degenerate
}

TEST_CASE("explicit permutations steer or reject") {
  const auto f = write_family("perm.fam", "n=3\n-\n2\n2,3\n1,2,3\n");
  const auto good = run("check " + f.string() + " --perm 3,1,2 --json");
  CHECK(good.exit_code == 1);  // relabeled chain
  CHECK(good.out.find("\"thm1_ineq4\"") != std::string::npos);
  CHECK(run("check " + f.string() + " --perm 1,2,3").exit_code == 2);
  CHECK(run("check " + f.string() + " --perm 1,1,2").exit_code == 2);
  CHECK(run("check " + f.string() + " --perm 1,2").exit_code == 2);
}

TEST_CASE("trace prints the t sequence") {
  const auto chain = write_family("chain.fam", kChain);
  const auto r = run("trace " + chain.string());
  CHECK(r.exit_code == 0);
  CHECK(r.out.rfind("t = 4 4 2 0", 0) == 0);
  const auto bad = write_family("ground.fam", "n=2\n1,2\n");
  CHECK(run("trace " + bad.string()).exit_code == 2);
}

TEST_CASE("closure completes a generator file") {
  const auto gens = write_family("gens.fam", "n=3\n1,2\n2,3\n");
  const auto r = run("closure " + gens.string());
  CHECK(r.exit_code == 0);
  CHECK(r.out == "n=3\n2\n1,2\n2,3\n");
}

TEST_CASE("reduce quotients the family") {
  const auto f = write_family("reduce.fam", "n=3\n-\n1,2\n1,2,3\n");
  const auto r = run("reduce " + f.string());
  CHECK(r.exit_code == 0);
  CHECK(r.out == "n=2\n-\n1\n1,2\n");
}

TEST_CASE("count prints enumeration counts") {
  CHECK(run("count --n 2 --oracle").out == "14\n");
  CHECK(run("count --n 1").out == "4\n");
  CHECK(run("count --n 3").out == "122\n");
  CHECK(run("count --n 3 --preconditions-only").out == "70\n");
  CHECK(run("count --n 2 --oracle --preconditions-only").out == "6\n");
  CHECK(run("count --n 2").exit_code == 0);
}

TEST_CASE("limits exit with code 3") {
  CHECK(run("count --n 6").exit_code == 3);
  CHECK(run("count --n 5").exit_code == 3);       // needs --big-exhaustive
  CHECK(run("count --n 5 --oracle").exit_code == 3);
  CHECK(run("sweep --n 5").exit_code == 3);
  CHECK(run("sweep --n 9").exit_code == 3);
}

TEST_CASE("sweep and mine report failures through the exit code") {
  const auto s = run("sweep --n 3 --preconditions-only --json");
  CHECK(s.exit_code == 1);  // inequality (4) violations exist at n=3
  CHECK(s.out.find("\"total_visited\": 122") != std::string::npos);
  const auto clean =
      run("sweep --n 2 --preconditions-only --claims cor1_frankl,rare_element");
  CHECK(clean.exit_code == 0);
  const auto mine = run("mine --n 4 --samples 50 --gens 3 --seed 7 "
                        "--claims lemma1,lemma2,lemma3");
  CHECK(mine.exit_code == 0);
  const auto mine2 = run("mine --n 4 --samples 50 --gens 3 --seed 7 "
                         "--claims lemma1,lemma2,lemma3 --jobs 2 --json");
  const auto mine1 = run("mine --n 4 --samples 50 --gens 3 --seed 7 "
                         "--claims lemma1,lemma2,lemma3 --jobs 1 --json");
  CHECK(mine1.out == mine2.out);
  CHECK(run("sweep --n 3 --claims nosuchclaim").exit_code == 2);
}
