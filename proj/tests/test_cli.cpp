#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

namespace fs = std::filesystem;

int run(const std::string& args) {
  const std::string cmd = std::string(PERCLAB_CLI_PATH) + " " + args + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::stringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream cs(line);
    std::string cell;
    while (std::getline(cs, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "perclab_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST(Cli, PolyaEndpoints) {
  const auto out = scratch("polya.csv");
  ASSERT_EQ(run("polya --m 2 --p-grid 0:1:1 --out " + out.string()), 0);
  const auto rows = csv_rows(slurp(out));
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0][1], "zeta");
  EXPECT_EQ(std::stod(rows[1][1]), 0.0);
  EXPECT_EQ(std::stod(rows[2][1]), 1.0);
}

TEST(Cli, OracleOnTriangle) {
  const auto graph = scratch("k3.txt");
  {
    std::ofstream g(graph);
    g << "3 3\n0 1\n0 2\n1 2\n";
  }
  const auto out = scratch("oracle.csv");
  ASSERT_EQ(run("oracle --graph " + graph.string() + " --p 0.5 --out " + out.string()), 0);
  const auto rows = csv_rows(slurp(out));
  int checked = 0;
  for (const auto& r : rows) {
    if (r[1] != "2") continue;
    EXPECT_NEAR(std::stod(r[2]), 0.75, 1e-15);
    EXPECT_NEAR(std::stod(r[3]), 0.75, 1e-15);
    EXPECT_NEAR(std::stod(r[4]), 0.75, 1e-15);
    ++checked;
  }
  EXPECT_EQ(checked, 3);
}

TEST(Cli, SweepIsByteReproducible) {
  const auto a = scratch("a.csv");
  const auto b = scratch("b.csv");
  const auto svg = scratch("a.svg");
  const std::string args = "sweep --model rr --d 3 --n 500 --p-grid 0.2:0.8:0.3 --trials 3 --seed 42 --threads 2";
  ASSERT_EQ(run(args + " --out " + a.string() + " --svg " + svg.string()), 0);
  ASSERT_EQ(run(args + " --out " + b.string()), 0);
  EXPECT_EQ(slurp(a), slurp(b));
  EXPECT_EQ(csv_rows(slurp(a)).size(), 4u);
  EXPECT_NE(slurp(svg).find("<polyline"), std::string::npos);
}

TEST(Cli, ConfigFileMatchesFlags) {
  const auto cfg = scratch("run.conf");
  {
    std::ofstream c(cfg);
    c << "# sweep settings\nmodel=er\nmean-degree=2.5\nn=300\np-grid=0.4:0.6:0.2\ntrials=2\nseed=9\n";
  }
  const auto a = scratch("cfg.csv");
  const auto b = scratch("flags.csv");
  ASSERT_EQ(run("sweep --config " + cfg.string() + " --out " + a.string()), 0);
  ASSERT_EQ(run("sweep --model er --mean-degree 2.5 --n 300 --p-grid 0.4:0.6:0.2 --trials 2 --seed 9 --out " + b.string()), 0);
  EXPECT_EQ(slurp(a), slurp(b));
}

TEST(Cli, GenerateThenAnalyze) {
  const auto graph = scratch("g.txt");
  const auto mask = scratch("g.mask");
  const auto report = scratch("g.json");
  ASSERT_EQ(run("generate --model pa --m 2 --n 200 --seed 3 --out " + graph.string()), 0);
  ASSERT_EQ(run("percolate --graph " + graph.string() + " --p 0.6 --seed 5 --out " + mask.string()), 0);
  ASSERT_EQ(run("analyze --graph " + graph.string() + " --mask " + mask.string() + " --out " + report.string()), 0);
  EXPECT_NE(slurp(report).find("\"bowtie\""), std::string::npos);
}

TEST(Cli, ExpansionReport) {
  const auto out = scratch("exp.json");
  ASSERT_EQ(run("expansion --model complete --n 4 --alpha 1 --eps 0.25 --dbar 3 --out " + out.string()), 0);
  EXPECT_NE(slurp(out).find("certified-yes"), std::string::npos);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run("polya --bogus-flag 1"), 2);
  EXPECT_EQ(run("polya --m 1 --p 0.3"), 2);
  EXPECT_EQ(run("sweep --p-grid 0.5:0.1:0.1"), 2);
  EXPECT_EQ(run("analyze --graph /nonexistent/graph.txt"), 3);
  const auto bad = scratch("bad.txt");
  {
    std::ofstream g(bad);
    g << "3 1\n0 7\n";
  }
  EXPECT_EQ(run("oracle --graph " + bad.string()), 3);
  EXPECT_EQ(run("generate --n 10 --out /nonexistent/dir/out.txt"), 3);
}
