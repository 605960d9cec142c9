#include <gtest/gtest.h>
#include <json.hpp>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args, const std::string& env = "") {
  std::string cmd = env + (env.empty() ? "" : " ") + std::string(EISEN_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* f = popen(cmd.c_str(), "r");
  if (!f) return r;
  std::array<char, 4096> buf;
  size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), f)) > 0) r.out.append(buf.data(), n);
  int status = pclose(f);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string data_file(const std::string& name) { return std::string(EISEN_DATA_DIR) + "/" + name; }

nlohmann::json parse(const Run& r) { return nlohmann::json::parse(r.out); }

bool contains_pair(const nlohmann::json& list, int a, int b) {
  for (auto& e : list)
    if (e.size() == 2 && ((e[0] == a && e[1] == b) || (e[0] == b && e[1] == a))) return true;
  return false;
}

}  // namespace

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
  EXPECT_EQ(run("analyze --p 5 --level 2 --eps -1,+1").code, 2);
  EXPECT_EQ(run("analyze --p 5 --level 2").code, 2);
  EXPECT_EQ(run("analyze --p 5 --level 12 --eps -1,+1").code, 2);  // not squarefree
  EXPECT_EQ(run("analyze --p 5 --level 779 --eps +1,+1").code, 2);
  EXPECT_EQ(run("analyze --p 5 --level 779 --eps +1,x").code, 2);
  EXPECT_EQ(run("analyze --p 5 --level 779 --eps +1,-1 --eps-order 19,43").code, 2);
  EXPECT_EQ(run("analyze --p 5 --level 779 --eps +1,-1 --format xml").code, 2);
  EXPECT_EQ(run("verify-paper --case nosuchcase").code, 2);
  EXPECT_EQ(run("good-primes --p 5 --level 451 --eps -1,-1 --bound 1").code, 2);
  EXPECT_EQ(run("--help").code, 0);
}

TEST(Cli, ComputationErrorsExitOne) {
  // a named generator that does not span m/m^2
  EXPECT_EQ(run("analyze --p 5 --level 779 --eps +1,-1 --no-uw --generators T2-3,T2-3").code, 1);
  EXPECT_EQ(run("predict --p 5 --level 779 --eps +1,-1 --kpoly /nonexistent/kfields.txt").code, 1);
}

TEST(Cli, Analyze779) {
  auto r = run("analyze --p 5 --level 779 --eps +1,-1");
  ASSERT_EQ(r.code, 0);
  auto j = parse(r);
  EXPECT_EQ(j["embedding_dim"], 2);
  EXPECT_EQ(j["gorenstein_full"], true);
  EXPECT_EQ(j["congruence_number"]["exponent"], 2);
  EXPECT_EQ(j["primes"], nlohmann::json({19, 41}));
  EXPECT_EQ(j["eps"], nlohmann::json({1, -1}));
  EXPECT_EQ(j["cap_doubling_stable"], true);
  // the same setting written with an explicit prime order
  auto r2 = run("analyze --p 5 --level 779 --eps -1,+1 --eps-order 41,19");
  ASSERT_EQ(r2.code, 0);
  EXPECT_EQ(r2.out, r.out);
}

TEST(Cli, Analyze253) {
  auto r = run("analyze --p 5 --level 253 --eps -1,-1 --no-uw");
  ASSERT_EQ(r.code, 0);
  auto j = parse(r);
  EXPECT_EQ(j["gorenstein_full"], false);
  EXPECT_EQ(j["socle_dim_full"], 2);
  // the cuspidal quotient has rank 2, and a local algebra of rank 2 is monogenic
  EXPECT_EQ(j["dims"]["cuspidal"], 2);
  EXPECT_EQ(j["gorenstein_cuspidal"], true);
  EXPECT_EQ(j["u_w_equal"], "unknown");
  auto t = run("analyze --p 5 --level 253 --eps -1,-1 --no-uw --format tsv");
  ASSERT_EQ(t.code, 0);
  std::istringstream in(t.out);
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  EXPECT_EQ(header.substr(0, 8), "p\tN\teps\t");
  EXPECT_EQ(row.substr(0, 14), "5\t253\t-1,-1\t3\t");
}

TEST(Cli, Predict) {
  auto r = run("predict --p 5 --level 779 --eps +1,-1 --kpoly " + data_file("kfields.txt"));
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(parse(r)["predicted_generators"], 2);
  auto m = run("predict --p 5 --level 451 --eps -1,-1");
  ASSERT_EQ(m.code, 0);
  EXPECT_EQ(parse(m)["predicted_generators"], 2);
  EXPECT_EQ(parse(m)["multiplicity_one_dim"], 3);
  // without field data delta is unknown; the command still succeeds
  auto u = run("predict --p 5 --level 779 --eps +1,-1");
  ASSERT_EQ(u.code, 0);
  auto j = parse(u);
  EXPECT_EQ(j["delta"], "unknown");
  EXPECT_EQ(j["predicted_generators"], "unknown");
  EXPECT_EQ(j["s"], 1);
}

TEST(Cli, GoodPrimes) {
  auto r = run("good-primes --p 5 --level 451 --eps -1,-1 --bound 13");
  ASSERT_EQ(r.code, 0);
  auto j = parse(r);
  EXPECT_EQ(j["criterion"], "pairs");
  EXPECT_TRUE(contains_pair(j["good"], 3, 2));
  EXPECT_TRUE(contains_pair(j["good"], 2, 7));
  EXPECT_FALSE(contains_pair(j["good"], 2, 13));
  auto s = run("good-primes --p 5 --level 779 --eps +1,-1 --bound 11 --kpoly " + data_file("kfields.txt"));
  ASSERT_EQ(s.code, 0);
  EXPECT_TRUE(contains_pair(parse(s)["good"], 2, 11));
  auto e = run("good-primes --p 5 --level 779 --eps +1,-1 --bound 2 --kpoly " + data_file("kfields.txt"));
  ASSERT_EQ(e.code, 0);
  EXPECT_TRUE(parse(e)["good"].empty());
}

TEST(Cli, WarmCacheOutputIsByteIdentical) {
  auto dir = std::filesystem::temp_directory_path() / ("eisen_cli_cache_" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  const std::string args = "analyze --p 5 --level 155 --eps -1,-1 --cache-dir " + dir.string();
  auto cold = run(args);
  auto warm = run(args);
  auto env = run("analyze --p 5 --level 155 --eps -1,-1", "EISEN_CACHE_DIR=" + dir.string());
  auto none = run("analyze --p 5 --level 155 --eps -1,-1");
  ASSERT_EQ(cold.code, 0);
  EXPECT_EQ(cold.out, warm.out);
  EXPECT_EQ(cold.out, env.out);
  EXPECT_EQ(cold.out, none.out);
  // truncate every cache file: results are recomputed, never wrong
  for (auto& e : std::filesystem::directory_iterator(dir))
    std::filesystem::resize_file(e.path(), std::filesystem::file_size(e.path()) / 3);
  auto after = run(args);
  EXPECT_EQ(after.code, 0);
  EXPECT_EQ(after.out, cold.out);
  std::filesystem::remove_all(dir);
}

TEST(Cli, OutputFile) {
  auto path = std::filesystem::temp_directory_path() / ("eisen_cli_out_" + std::to_string(::getpid()) + ".json");
  auto r = run("predict --p 5 --level 451 --eps -1,-1 -o " + path.string());
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_EQ(nlohmann::json::parse(ss.str())["predicted_generators"], 2);
  std::filesystem::remove(path);
}

TEST(Cli, VerifyReferenceCase19x41) {
  auto r = run("verify-paper --case 19x41");
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("19x41      PASS"), std::string::npos) << r.out;
}

TEST(Cli, VerifyReferenceCase31x191) {
  auto r = run("verify-paper --case 31x191 -v");
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("31x191     PASS"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("full algebra Gorenstein: expected false, measured false"), std::string::npos) << r.out;
}
