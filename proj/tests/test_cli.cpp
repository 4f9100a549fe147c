#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;
};

RunResult run_cli(const std::string& args) {
  static int counter = 0;
  std::string capture = "cli_capture_" + std::to_string(counter++) + ".txt";
  std::string cmd = std::string(CLI_PATH) + " " + args + " > " + capture + " 2>&1";
  int status = std::system(cmd.c_str());
  RunResult r;
#ifdef _WIN32
  r.exit_code = status;
#else
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
#endif
  std::ifstream in(capture);
  std::ostringstream os;
  os << in.rdbuf();
  r.output = os.str();
  std::remove(capture.c_str());
  return r;
}

std::string fixture(const std::string& name) { return std::string(FIXTURE_DIR) + "/" + name; }

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("analyze reports the summary") {
  RunResult json = run_cli("--format json analyze " + fixture("schmitz.crn"));
  CHECK(json.exit_code == 0);
  CHECK(contains(json.output, "\"deficiency\": 0"));
  CHECK(contains(json.output, "\"weakly_reversible\": true"));
  CHECK(contains(json.output, "\"rank\": 5"));

  RunResult text = run_cli("analyze " + fixture("schmitz.crn"));
  CHECK(text.exit_code == 0);
  CHECK(contains(text.output, "summary.deficiency: 0"));
}

TEST_CASE("classify reports the kinetics class") {
  RunResult r = run_cli("--format json classify " + fixture("schmitz.crn"));
  CHECK(r.exit_code == 0);
  CHECK(contains(r.output, "\"kinetics_class\": \"PL-NDK\""));
}

TEST_CASE("input errors exit with code 2") {
  CHECK(run_cli("analyze no_such_file.crn").exit_code == 2);
  write_file("cli_bad.crn", "reaction r1: A -> A\n");
  CHECK(run_cli("analyze cli_bad.crn").exit_code == 2);
  write_file("cli_bad2.crn", "wibble\n");
  RunResult r = run_cli("analyze cli_bad2.crn");
  CHECK(r.exit_code == 2);
  CHECK(contains(r.output, "input error"));
  // decompose requires exactly one search flag
  CHECK(run_cli("decompose " + fixture("schmitz_sub.crn")).exit_code == 2);
}

TEST_CASE("decompose --wr-cf finds the subnetwork blocks") {
  for (std::string mode : {"exhaustive", "greedy"}) {
    RunResult r = run_cli("--format json decompose --wr-cf --mode " + mode + " " +
                          fixture("schmitz_sub.crn"));
    CHECK(r.exit_code == 0);
    CHECK(contains(r.output, "\"outcome\": \"found\""));
    CHECK(contains(r.output, "\"r1\""));
    CHECK(contains(r.output, "\"r5\""));
  }
}

TEST_CASE("decompose --wr-cf distinguishes proven and greedy negatives") {
  RunResult ex = run_cli("--format json decompose --wr-cf " + fixture("example6.crn"));
  CHECK(ex.exit_code == 1);
  CHECK(contains(ex.output, "\"outcome\": \"not_found_proven\""));
  RunResult gr =
      run_cli("--format json decompose --wr-cf --mode greedy " + fixture("example6.crn"));
  CHECK(gr.exit_code == 1);
  CHECK(contains(gr.output, "\"outcome\": \"not_found_greedy\""));
}

TEST_CASE("resource limits exit with code 3") {
  RunResult r =
      run_cli("decompose --wr-cf --max-branches 0 " + fixture("schmitz_sub.crn"));
  CHECK(r.exit_code == 3);
}

TEST_CASE("decompose --independent") {
  RunResult r = run_cli("--format json decompose --independent " + fixture("schmitz_sub.crn"));
  CHECK(r.exit_code == 0);
  CHECK(contains(r.output, "\"nontrivial\": true"));
  CHECK(contains(r.output, "\"independent\": true"));

  write_file("cli_pair.crn", "reaction r1: A -> B\nreaction r2: B -> A\n");
  CHECK(run_cli("decompose --independent cli_pair.crn").exit_code == 1);
}

TEST_CASE("decompose --independent-wr-cf") {
  RunResult r =
      run_cli("--format json decompose --independent-wr-cf " + fixture("schmitz_sub.crn"));
  CHECK(r.exit_code == 0);
  CHECK(contains(r.output, "\"outcome\": \"found\""));
  RunResult no = run_cli("decompose --independent-wr-cf " + fixture("example6.crn"));
  CHECK(no.exit_code == 1);
}

TEST_CASE("kinetic-complexes reports counts and induced structure") {
  RunResult r = run_cli("--format json kinetic-complexes " + fixture("schmitz_sub.crn"));
  CHECK(r.exit_code == 0);
  CHECK(contains(r.output, "\"n\": 7"));
  CHECK(contains(r.output, "\"n_equality\": true"));

  RunResult ind = run_cli("--format json kinetic-complexes --decomposition auto " +
                          fixture("schmitz_sub.crn"));
  CHECK(ind.exit_code == 0);
  CHECK(contains(ind.output, "\"is_decomposition\": true"));
  CHECK(contains(ind.output, "\"bi_level_independent\": true"));
}

TEST_CASE("plp pipeline on the subnetwork") {
  RunResult r = run_cli("--format json plp " + fixture("schmitz_sub.crn"));
  CHECK(r.exit_code == 0);
  CHECK(contains(r.output, "\"applicable\": true"));
  CHECK(contains(r.output, "\"dim\": 5"));
  CHECK(contains(r.output, "\"P_E_perp_dim\": 1"));
  CHECK(contains(r.output, "\"certified\": true"));
}

TEST_CASE("plp is negative when no independent decomposition exists") {
  RunResult r = run_cli("plp " + fixture("schmitz.crn"));
  CHECK(r.exit_code == 1);
}

TEST_CASE("plp honors a decomposition file") {
  write_file("cli_blocks.crn", "block b1: r1, r2, r3, r4\nblock b2: r5, r6, r7, r8\n");
  RunResult r = run_cli("--format json plp --decomposition cli_blocks.crn " +
                        fixture("schmitz_sub.crn"));
  CHECK(r.exit_code == 0);
  CHECK(contains(r.output, "\"applicable\": true"));
}

TEST_CASE("machine output is byte-identical across runs") {
  std::string cmd = "--format json --seed 7 plp " + fixture("schmitz_sub.crn");
  RunResult a = run_cli(cmd);
  RunResult b = run_cli(cmd);
  CHECK(a.exit_code == 0);
  CHECK(a.output == b.output);
  RunResult c = run_cli("--format json analyze " + fixture("example5.crn"));
  RunResult d = run_cli("--format json analyze " + fixture("example5.crn"));
  CHECK(c.output == d.output);
}

TEST_CASE("check-equilibrium evaluates candidate points") {
  write_file("cli_rates.crn",
             "reaction r1: A -> B\nreaction r2: B -> A\n"
             "kinetics r1: A=1\nkinetics r2: B=1\n"
             "rate r1: 1\nrate r2: 2\n");
  write_file("cli_point_good.txt", "A 2.0\nB 1.0\n");
  write_file("cli_point_bad.txt", "A 1.0\nB 1.0\n");
  RunResult good = run_cli("--format json check-equilibrium cli_rates.crn --point cli_point_good.txt");
  CHECK(good.exit_code == 0);
  CHECK(contains(good.output, "\"is_equilibrium\": true"));
  RunResult bad = run_cli("check-equilibrium cli_rates.crn --point cli_point_bad.txt");
  CHECK(bad.exit_code == 1);
  // rates are required
  write_file("cli_norates.crn", "reaction r1: A -> B\nreaction r2: B -> A\n");
  CHECK(run_cli("check-equilibrium cli_norates.crn --point cli_point_good.txt").exit_code == 2);
  // malformed point file
  write_file("cli_point_miss.txt", "A 2.0\n");
  CHECK(run_cli("check-equilibrium cli_rates.crn --point cli_point_miss.txt").exit_code == 2);
}
