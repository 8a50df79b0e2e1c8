#include <cstdio>
#include <cstdlib>
#include <string>

#include <gtest/gtest.h>

namespace {

struct CommandResult {
  int exit_code = -1;
  std::string output;
};

CommandResult run_cli(const std::string& args) {
  const std::string command = std::string(SWAPSIM_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(command.c_str(), "r");
  if (!pipe) return {};
  CommandResult result;
  char buffer[4096];
  std::size_t n = 0;
  while ((n = fread(buffer, 1, sizeof buffer, pipe)) > 0) {
    result.output.append(buffer, n);
  }
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

int count_lines(const std::string& text, bool data_only) {
  int lines = 0;
  bool at_line_start = true;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (at_line_start && !(data_only && text[i] == '#')) ++lines;
    at_line_start = text[i] == '\n';
  }
  return lines;
}

TEST(Cli, VerifyTableReports32RowsAndPasses) {
  const CommandResult r = run_cli("verify-table --grid 5000");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_NE(r.output.find("sector,alice_bit,referee_bit,bob_bit,min,max,pass"),
            std::string::npos);
  // header + 32 data rows
  EXPECT_EQ(count_lines(r.output, true), 33);
}

TEST(Cli, SimulateEmitsTheDocumentedColumnsDeterministically) {
  const std::string args = "--seed 7 simulate --pairs 3 --n 5000 --mode p1";
  const CommandResult first = run_cli(args);
  const CommandResult second = run_cli(args);
  EXPECT_EQ(first.exit_code, 0);
  EXPECT_EQ(first.output, second.output);  // byte-identical rerun
  EXPECT_NE(first.output.find("phiA,thetaA,phiB,thetaB,p_hat,target,z"),
            std::string::npos);
  EXPECT_NE(first.output.find("# seed=7"), std::string::npos);
  EXPECT_EQ(count_lines(first.output, true), 4);
}

TEST(Cli, SimulateJsonMirrorsTheFields) {
  const CommandResult r =
      run_cli("--seed 7 --format json simulate --pairs 2 --n 2000 --mode p1");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_NE(r.output.find("\"p_hat\""), std::string::npos);
  EXPECT_NE(r.output.find("\"config\""), std::string::npos);
  EXPECT_NE(r.output.find("\"seed\": \"7\""), std::string::npos);
}

TEST(Cli, BitsAuditShowsNineBitRows) {
  const CommandResult r = run_cli("bits-audit --rounds 50");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_NE(r.output.find("round,alice_bits,referee_bits,total_bits"),
            std::string::npos);
  EXPECT_NE(r.output.find("0,7,2,9"), std::string::npos);
  EXPECT_EQ(count_lines(r.output, true), 51);
}

TEST(Cli, BitsAuditProtocol1OverTcp) {
  const CommandResult r = run_cli("bits-audit --rounds 30 --mode p1 --transport tcp");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_NE(r.output.find("0,3,1,4"), std::string::npos);
}

TEST(Cli, OracleCheckPassesOnACoarseGrid) {
  const CommandResult r = run_cli("oracle-check --grid 3");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_NE(r.output.find("# max_grid_err="), std::string::npos);
}

TEST(Cli, MultistageFitsTheCubic) {
  const CommandResult r = run_cli("multistage --n 2000000");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_NE(r.output.find("# slope="), std::string::npos);
}

TEST(Cli, UsageErrorsExitWith2) {
  EXPECT_EQ(run_cli("simulate --no-such-flag").exit_code, 2);
  EXPECT_EQ(run_cli("").exit_code, 2);
  EXPECT_EQ(run_cli("not-a-command").exit_code, 2);
}

TEST(Cli, EnvironmentSeedIsHonored) {
  const CommandResult r = run_cli("verify-table --grid 100");
  EXPECT_NE(r.output.find("# seed=12345"), std::string::npos);
  setenv("SWAPSIM_SEED", "999", 1);
  const CommandResult env = run_cli("verify-table --grid 100");
  unsetenv("SWAPSIM_SEED");
  EXPECT_NE(env.output.find("# seed=999"), std::string::npos);
}

}  // namespace
