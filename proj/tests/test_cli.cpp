#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "cli_runner.hpp"
#include "doctest.h"

namespace fs = std::filesystem;
using cli_runner::contains;
using cli_runner::kv;
using cli_runner::RunResult;

namespace {

const std::string kCli = SOFTPERC_CLI_PATH;

const fs::path& scratch() {
  static const fs::path dir = cli_runner::make_scratch_dir("softperc-cli-test");
  return dir;
}

RunResult run(const std::string& args) {
  return cli_runner::run(kCli, args, scratch());
}

std::string path_of(const std::string& name) {
  return (scratch() / name).string();
}

void write_file(const std::string& name, const std::string& content) {
  std::ofstream out(path_of(name));
  out << content;
}

}  // namespace

TEST_CASE("synth writes a deterministic dataset and reports the separator") {
  const auto first = run("synth --kind separable --features 2 --samples 100 "
                         "--margin 0.2 --seed 7 -o " +
                         path_of("sep_a.csv"));
  REQUIRE(first.exit_code == 0);
  CHECK(kv(first.out, "kind") == "separable");
  CHECK(!kv(first.out, "separator").empty());
  CHECK(!kv(first.out, "achieved_margin").empty());
  CHECK(std::stod(kv(first.out, "achieved_margin")) >= 0.2);

  const auto second = run("synth --kind separable --features 2 --samples 100 "
                          "--margin 0.2 --seed 7 -o " +
                          path_of("sep_b.csv"));
  REQUIRE(second.exit_code == 0);
  CHECK(cli_runner::slurp(path_of("sep_a.csv")) ==
        cli_runner::slurp(path_of("sep_b.csv")));
  // Reports agree on everything except the output path.
  CHECK(kv(first.out, "separator") == kv(second.out, "separator"));
  CHECK(kv(first.out, "achieved_margin") == kv(second.out, "achieved_margin"));
}

TEST_CASE("rerunning synth overwrites with identical bytes") {
  const std::string out = path_of("sep_rewrite.csv");
  REQUIRE(run("synth --kind separable --samples 60 --margin 0.15 --seed 3 -o " +
              out)
              .exit_code == 0);
  const std::string once = cli_runner::slurp(out);
  REQUIRE(run("synth --kind separable --samples 60 --margin 0.15 --seed 3 -o " +
              out)
              .exit_code == 0);
  CHECK(once == cli_runner::slurp(out));
}

TEST_CASE("synth rejects a zero margin for separable data") {
  const auto result = run("synth --kind separable --margin 0 --seed 1 -o " +
                          path_of("bad.csv"));
  CHECK(result.exit_code == 1);
  CHECK(!result.err.empty());
}

TEST_CASE("synth rejects an unknown kind") {
  CHECK(run("synth --kind diagonal --seed 1 -o " + path_of("bad2.csv"))
            .exit_code == 1);
}

TEST_CASE("train perceptron on separable data reaches zero mistakes") {
  REQUIRE(run("synth --kind separable --features 3 --samples 80 --margin 0.15 "
              "--seed 11 -o " +
              path_of("train_sep.csv"))
              .exit_code == 0);
  const auto result = run("train " + path_of("train_sep.csv") +
                          " --mode perceptron -o " + path_of("sep.model"));
  REQUIRE(result.exit_code == 0);
  CHECK(kv(result.out, "stop_reason") == "zero_mistakes");
  CHECK(kv(result.out, "converged") == "true");
  CHECK(fs::exists(path_of("sep.model")));

  const auto eval = run("eval " + path_of("sep.model") + " " +
                        path_of("train_sep.csv"));
  REQUIRE(eval.exit_code == 0);
  CHECK(kv(eval.out, "accuracy") == "1");
  const auto tp = std::stoull(kv(eval.out, "true_positives"));
  const auto fp = std::stoull(kv(eval.out, "false_positives"));
  const auto tn = std::stoull(kv(eval.out, "true_negatives"));
  const auto fn = std::stoull(kv(eval.out, "false_negatives"));
  CHECK(tp + fp + tn + fn == std::stoull(kv(eval.out, "samples")));
}

TEST_CASE("train batch with the automatic rate converges on overlapping data") {
  REQUIRE(run("synth --kind overlapping --features 2 --samples 200 --seed 5 "
              "-o " +
              path_of("ovl.csv"))
              .exit_code == 0);
  const auto result =
      run("train " + path_of("ovl.csv") + " --mode batch --lr auto "
          "--epochs 20000 -o " +
          path_of("ovl.model"));
  REQUIRE(result.exit_code == 0);
  CHECK(kv(result.out, "stop_reason") == "tolerance_met");
  CHECK(kv(result.out, "converged") == "true");
}

TEST_CASE("non-convergence is reported, not fatal") {
  REQUIRE(run("synth --kind separable --samples 40 --margin 0.2 --seed 21 "
              "-o " +
              path_of("hard.csv"))
              .exit_code == 0);
  const auto result = run("train " + path_of("hard.csv") +
                          " --mode batch --epochs 5 -o " +
                          path_of("hard.model"));
  REQUIRE(result.exit_code == 0);
  CHECK(kv(result.out, "stop_reason") == "max_epochs");
  CHECK(kv(result.out, "converged") == "false");
}

TEST_CASE("tempered mode defaults its steepness to 1e6 and says so") {
  REQUIRE(run("synth --kind separable --samples 30 --margin 0.2 --seed 9 -o " +
              path_of("temp.csv"))
              .exit_code == 0);
  const auto result = run("train " + path_of("temp.csv") +
                          " --mode tempered --epochs 10 -o " +
                          path_of("temp.model"));
  REQUIRE(result.exit_code == 0);
  CHECK(kv(result.out, "steepness") == "1e+06");
  CHECK(contains(result.err, "1e6"));

  const auto explicit_t = run("train " + path_of("temp.csv") +
                              " --mode tempered --steepness 100 --epochs 10 "
                              "-o " +
                              path_of("temp2.model"));
  REQUIRE(explicit_t.exit_code == 0);
  CHECK(kv(explicit_t.out, "steepness") == "100");
  CHECK(!contains(explicit_t.err, "defaulting"));
}

TEST_CASE("train validates its flags") {
  write_file("tiny.csv", "1.0,1\n-1.0,0\n");
  CHECK(run("train " + path_of("tiny.csv") + " --mode bogus -o " +
            path_of("x.model"))
            .exit_code == 1);
  CHECK(run("train " + path_of("tiny.csv") + " --mode batch --lr -1 -o " +
            path_of("x.model"))
            .exit_code == 1);
  CHECK(run("train " + path_of("tiny.csv") + " --mode batch --lr nope -o " +
            path_of("x.model"))
            .exit_code == 1);
  CHECK(run("train " + path_of("tiny.csv") + " --mode batch --epochs 0 -o " +
            path_of("x.model"))
            .exit_code == 1);
  CHECK(run("train " + path_of("tiny.csv") + " --mode tempered --steepness -5 "
            "-o " +
            path_of("x.model"))
            .exit_code == 1);
}

TEST_CASE("eval reports a dimension mismatch naming both sizes") {
  REQUIRE(run("synth --kind separable --features 2 --samples 30 --margin 0.2 "
              "--seed 2 -o " +
              path_of("two.csv"))
              .exit_code == 0);
  REQUIRE(run("synth --kind separable --features 3 --samples 30 --margin 0.2 "
              "--seed 2 -o " +
              path_of("three.csv"))
              .exit_code == 0);
  REQUIRE(run("train " + path_of("two.csv") + " --mode perceptron -o " +
              path_of("two.model"))
              .exit_code == 0);
  const auto result = run("eval " + path_of("two.model") + " " +
                          path_of("three.csv"));
  CHECK(result.exit_code == 2);
  CHECK(contains(result.err, "n=2"));
  CHECK(contains(result.err, "n=3"));
}

TEST_CASE("gradcheck passes by default and fails at an impossible tolerance") {
  REQUIRE(run("synth --kind overlapping --features 2 --samples 40 --seed 13 "
              "-o " +
              path_of("gc.csv"))
              .exit_code == 0);
  const auto pass = run("gradcheck " + path_of("gc.csv"));
  CHECK(pass.exit_code == 0);
  CHECK(kv(pass.out, "passed") == "true");
  CHECK(!kv(pass.out, "max_relative_error").empty());

  const auto again = run("gradcheck " + path_of("gc.csv"));
  CHECK(again.out == pass.out);  // seed-controlled, so byte-identical

  const auto fail = run("gradcheck " + path_of("gc.csv") + " --tol 1e-15");
  CHECK(fail.exit_code == 3);
  CHECK(kv(fail.out, "passed") == "false");
  CHECK(!kv(fail.out, "worst_component").empty());

  CHECK(run("gradcheck " + path_of("gc.csv") + " --trials 0").exit_code == 1);
}

TEST_CASE("sweep emits a CSV table with non-increasing discrepancy") {
  REQUIRE(run("synth --kind separable --features 2 --samples 80 --margin 0.15 "
              "--seed 17 -o " +
              path_of("sweep.csv"))
              .exit_code == 0);
  const auto result = run("sweep " + path_of("sweep.csv") +
                          " --steepness-list 1e2,1e4,1e6");
  REQUIRE(result.exit_code == 0);

  std::istringstream lines(result.out);
  std::string line;
  REQUIRE(std::getline(lines, line));
  CHECK(line == "steepness,compared,skipped,max_discrepancy");
  std::vector<double> discrepancies;
  while (std::getline(lines, line)) {
    const auto last_comma = line.rfind(',');
    REQUIRE(last_comma != std::string::npos);
    discrepancies.push_back(std::stod(line.substr(last_comma + 1)));
  }
  REQUIRE(discrepancies.size() == 3);
  CHECK(discrepancies[0] >= discrepancies[1]);
  CHECK(discrepancies[1] >= discrepancies[2]);
  CHECK(discrepancies[2] <= 1e-6);
}

TEST_CASE("sweep validates the steepness list") {
  REQUIRE(run("synth --kind separable --samples 20 --margin 0.2 --seed 19 "
              "-o " +
              path_of("sv.csv"))
              .exit_code == 0);
  CHECK(run("sweep " + path_of("sv.csv") + " --steepness-list ''")
            .exit_code == 1);
  CHECK(run("sweep " + path_of("sv.csv") + " --steepness-list 1")
            .exit_code == 1);
  CHECK(run("sweep " + path_of("sv.csv") + " --steepness-list 1e2,nope")
            .exit_code == 1);
  CHECK(run("sweep " + path_of("sv.csv")).exit_code == 1);  // missing flag
}

TEST_CASE("missing and malformed data map to exit code 2") {
  CHECK(run("train " + path_of("no-such.csv") + " --mode batch -o " +
            path_of("x.model"))
            .exit_code == 2);
  CHECK(run("eval " + path_of("no-such.model") + " " + path_of("no-such.csv"))
            .exit_code == 2);
  CHECK(run("gradcheck " + path_of("no-such.csv")).exit_code == 2);
  CHECK(run("sweep " + path_of("no-such.csv") + " --steepness-list 1e6")
            .exit_code == 2);

  write_file("bad_label.csv", "1.0,1\n2.0,2\n");
  const auto result = run("train " + path_of("bad_label.csv") +
                          " --mode batch -o " + path_of("x.model"));
  CHECK(result.exit_code == 2);
  CHECK(contains(result.err, "line 2"));
}

TEST_CASE("usage errors map to exit code 1 and help to 0") {
  CHECK(run("").exit_code == 1);                       // no subcommand
  CHECK(run("warp").exit_code == 1);                   // unknown subcommand
  CHECK(run("synth --wat 1 --kind separable -o " + path_of("w.csv"))
            .exit_code == 1);                          // unknown flag
  CHECK(run("synth").exit_code == 1);                  // missing required
  CHECK(run("--help").exit_code == 0);
  CHECK(run("train --help").exit_code == 0);
}
