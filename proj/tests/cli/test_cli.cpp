// Runs the pcnsim binary and checks stdout, files and exit codes.
#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run pcnsim(const std::string& args, bool merge_stderr = false) {
  const std::string cmd = std::string(PCNSIM) + " " + args + (merge_stderr ? " 2>&1" : " 2>/dev/null");
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  std::size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string fixture(const std::string& name) { return std::string(FIXTURES) + "/" + name; }

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("suggest") {
  auto r = pcnsim("suggest --snapshot " + fixture("star.json") + " --strategy degree --k 1");
  CHECK(r.code == 0);
  CHECK(r.out == "rank\tnode\tobjective\n1\thub\t4.000000\n");

  const std::string random = "suggest --synthetic scale_free:80:2 --strategy random --k 5 --seed 12";
  r = pcnsim(random);
  CHECK(r.code == 0);
  CHECK(r.out == pcnsim(random).out);
  CHECK(r.out.find("\t-\n") != std::string::npos);

  r = pcnsim("suggest --snapshot " + fixture("star.json") + " --strategy degree --k 7", true);
  CHECK(r.code == 2);
  CHECK(r.out.find("n-1=4") != std::string::npos);

  CHECK(pcnsim("suggest --snapshot " + fixture("star.json") + " --strategy nope").code == 2);
  CHECK(pcnsim("suggest --snapshot " + fixture("star.json") + " --strategy degree --k 1..3").code == 2);
}

TEST_CASE("route") {
  auto r = pcnsim("route --snapshot " + fixture("star.json") + " --source hub --dest leaf-a --amount 100");
  CHECK(r.code == 0);
  CHECK(r.out ==
        "hop\tfrom\tto\tchannel\tamount_sat\tfee_sat\n"
        "1\thub\tleaf-a\t101\t100.000\t0.000\n"
        "total\thops=1\tsent_sat=100.000\tfee_sat=0.000\n");

  r = pcnsim("route --snapshot " + fixture("star.json") + " --source leaf-a --dest leaf-c --amount 100");
  CHECK(r.code == 0);
  CHECK(r.out.find("total\thops=2\tsent_sat=101.000\tfee_sat=1.000\n") != std::string::npos);

  // fractional satoshi: 0.5 sat forwarded, hub charges 1000 + 0 msat
  r = pcnsim("route --snapshot " + fixture("star.json") + " --source leaf-a --dest leaf-c --amount 0.5");
  CHECK(r.out.find("sent_sat=1.500\tfee_sat=1.000") != std::string::npos);

  r = pcnsim("route --snapshot " + fixture("star.json") + " --source leaf-d --dest hub --amount 1");
  CHECK(r.code == 0);
  CHECK(r.out == "NoPath\n");

  CHECK(pcnsim("route --snapshot " + fixture("star.json") + " --source leaf-a --dest ghost --amount 1").code == 2);
  CHECK(pcnsim("route --snapshot " + fixture("star.json") + " --source leaf-a --dest hub --amount 1.0001").code == 2);
}

TEST_CASE("input errors and usage") {
  CHECK(pcnsim("ingest-check --snapshot " + fixture("truncated.json")).code == 3);
  CHECK(pcnsim("suggest --snapshot " + fixture("missing_field.json") + " --strategy degree").code == 3);
  CHECK(pcnsim("suggest --snapshot /nonexistent.json --strategy degree").code == 3);
  CHECK(pcnsim("").code == 2);
  CHECK(pcnsim("teleport").code == 2);
  CHECK(pcnsim("metrics --synthetic path:4 --bogus 1").code == 2);
  CHECK(pcnsim("metrics --synthetic path:4 --snapshot " + fixture("star.json")).code == 2);
  CHECK(pcnsim("metrics --snapshot " + fixture("star.json") + " --no-lcc --balance-mode random:").code == 2);
  CHECK(pcnsim("bench --synthetic path:6 --strategies ''").code == 2);
}

TEST_CASE("ingest-check") {
  const auto r = pcnsim("ingest-check --snapshot " + fixture("two_components.json"));
  CHECK(r.code == 0);
  CHECK(r.out ==
        "nodes\t8\nchannels\t6\ncapacity_sat\t300000.000\nskipped_invalid\t0\nskipped_disabled\t1\n"
        "duplicate_nodes\t0\nlcc_nodes\t5\nlcc_channels\t4\n");
}

TEST_CASE("metrics") {
  const auto r = pcnsim("metrics --synthetic path:4");
  CHECK(r.code == 0);
  CHECK(r.out ==
        "nodes,channels,degree_gini,betweenness_gini,diameter_hops,central_point_dominance\n"
        "4,3,0.166666667,0.500000000,3,0.444444444\n");
}

TEST_CASE("experiments write identical CSV") {
  const auto dir = std::filesystem::temp_directory_path() / ("pcnsim-cli-" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  const std::string args =
      "join-eval --synthetic scale_free:60:2 --strategy k-center --k 1..3 --amount 100,10000 --reps 2 --tx 50 --seed 4";
  CHECK(pcnsim(args + " --out " + (dir / "a.csv").string()).code == 0);
  CHECK(pcnsim(args + " --out " + (dir / "b.csv").string()).code == 0);
  const std::string a = slurp(dir / "a.csv");
  CHECK(a == slurp(dir / "b.csv"));
  CHECK(std::count(a.begin(), a.end(), '\n') == 1 + 3 * 2 * 3);
  CHECK(a.find("k-center,1,,,,,") != std::string::npos);

  auto r = pcnsim("growth --synthetic scale_free:40:2 --config " + fixture("growth.cfg") + " --strategy degree");
  CHECK(r.code == 0);
  CHECK(r.out.find("\ndegree,6,") != std::string::npos);
  CHECK(r.out == pcnsim("growth --synthetic scale_free:40:2 --config " + fixture("growth.cfg") + " --strategy degree").out);
  CHECK(pcnsim("growth --synthetic scale_free:40:2 --config " + fixture("growth.cfg") + " --strategy mbi").code == 2);

  r = pcnsim("baseline --snapshot " + fixture("star.json") + " --amount 100 --tx 500 --seed 1");
  CHECK(r.code == 0);
  CHECK(r.out.find("\nbaseline,0,,,,,") != std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST_CASE("bench") {
  const auto r = pcnsim("bench --synthetic scale_free:100:2 --strategies degree,k-center,k-median --k 1..2 --runs 1");
  CHECK(r.code == 0);
  CHECK(r.out.rfind("strategy,k,median_seconds,ordering_ok\ndegree,1,", 0) == 0);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 7);
}
