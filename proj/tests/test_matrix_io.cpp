#include <cstdio>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "vpgmres/config.hpp"
#include "vpgmres/generators.hpp"
#include "vpgmres/matrix_market.hpp"
#include "vpgmres/report.hpp"

using namespace vpgmres;

namespace {

std::filesystem::path temp_file(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "vpgmres_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

}  // namespace

TEST_CASE("matrix market coordinate read") {
  auto p = temp_file("id2.mtx");
  write_text(p,
             "%%MatrixMarket matrix coordinate real general\n"
             "% identity\n"
             "2 2 2\n"
             "1 1 1.0\n"
             "2 2 1.0\n");
  Matrix m = read_matrix_market(p.string());
  CHECK(m.nrows() == 2);
  CHECK(m(0, 0) == 1.0);
  CHECK(m(0, 1) == 0.0);
  CHECK(m(1, 1) == 1.0);
}

TEST_CASE("matrix market symmetric expansion") {
  auto p = temp_file("sym.mtx");
  write_text(p,
             "%%MatrixMarket matrix coordinate real symmetric\n"
             "2 2 2\n"
             "1 1 2.0\n"
             "2 1 5.0\n");
  Matrix m = read_matrix_market(p.string());
  CHECK(m(1, 0) == 5.0);
  CHECK(m(0, 1) == 5.0);
  CHECK(m(0, 0) == 2.0);
}

TEST_CASE("matrix market errors carry line numbers") {
  auto bad_header = temp_file("bad1.mtx");
  write_text(bad_header, "%%MatrixMarket matrix coordinate complex general\n");
  CHECK_THROWS_WITH_AS(read_matrix_market(bad_header.string()),
                       doctest::Contains("line 1"), MatrixMarketError);

  auto out_of_range = temp_file("bad2.mtx");
  write_text(out_of_range,
             "%%MatrixMarket matrix coordinate real general\n"
             "2 2 1\n"
             "3 1 1.0\n");
  CHECK_THROWS_WITH_AS(read_matrix_market(out_of_range.string()),
                       doctest::Contains("line 3"), MatrixMarketError);

  auto pattern = temp_file("bad3.mtx");
  write_text(pattern, "%%MatrixMarket matrix coordinate pattern general\n");
  CHECK_THROWS_AS(read_matrix_market(pattern.string()), MatrixMarketError);

  auto dup = temp_file("bad4.mtx");
  write_text(dup,
             "%%MatrixMarket matrix coordinate real general\n"
             "2 2 2\n"
             "1 1 1.0\n"
             "1 1 2.0\n");
  CHECK_THROWS_AS(read_matrix_market(dup.string()), MatrixMarketError);
}

TEST_CASE("matrix market write/read round trip") {
  Matrix g = grcar(17, 3);
  auto p = temp_file("grcar.mtx");
  write_matrix_market(g, p.string());
  Matrix back = read_matrix_market(p.string());
  REQUIRE(back.nrows() == g.nrows());
  for (std::size_t i = 0; i < g.nrows(); ++i)
    for (std::size_t j = 0; j < g.ncols(); ++j) CHECK(back(i, j) == g(i, j));

  // symmetric writer: stored lower-triangle count matches the read matrix
  Matrix a = spd_test_matrix(60, 1e4);
  auto ps = temp_file("spd.mtx");
  write_matrix_market(a, ps.string(), true);
  Matrix a2 = read_matrix_market(ps.string());
  for (std::size_t i = 0; i < a.nrows(); ++i)
    for (std::size_t j = 0; j < a.ncols(); ++j) CHECK(a2(i, j) == a(i, j));

  // stored (lower-triangle) entry count equals the file's data line count
  std::ifstream in(ps.string());
  std::string line;
  long lines = 0;
  std::getline(in, line);  // banner
  std::getline(in, line);  // sizes
  long declared = 0;
  {
    std::istringstream ss(line);
    long r, c;
    ss >> r >> c >> declared;
  }
  while (std::getline(in, line))
    if (!line.empty()) ++lines;
  CHECK(lines == declared);
}

TEST_CASE("report csv round trips binary64 values bit-exactly") {
  SolveReport rep;
  rep.status = SolveStatus::Converged;
  rep.provenance.push_back("unit test");
  IterationRow r1;
  r1.j = 1;
  r1.rel_resid_recurred = 0.1234567890123456789;
  r1.rel_resid_true = 3.0e-17;
  r1.f_norm = 1.0 / 3.0;
  r1.eta_j = 5e-308;  // subnormal-adjacent values must survive
  r1.eps_j = 6.02e23;
  rep.rows.push_back(r1);

  auto p = temp_file("report.csv");
  write_report_csv(rep, p.string());

  std::ifstream in(p.string());
  std::string line;
  std::vector<std::string> data;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    data.push_back(line);
  }
  REQUIRE(data.size() == 2);  // header + one row
  CHECK(data[0] ==
        "j,rel_resid_recurred,rel_resid_true,F_norm,eta_j,eps_j,dot_fmt,"
        "mv_fmt");
  std::istringstream row(data[1]);
  std::string tok;
  std::getline(row, tok, ',');
  CHECK(tok == "1");
  double vals[5];
  for (double& v : vals) {
    std::getline(row, tok, ',');
    v = std::strtod(tok.c_str(), nullptr);
  }
  CHECK(vals[0] == r1.rel_resid_recurred);
  CHECK(vals[1] == r1.rel_resid_true);
  CHECK(vals[2] == r1.f_norm);
  CHECK(vals[3] == r1.eta_j);
  CHECK(vals[4] == r1.eps_j);
  std::getline(row, tok, ',');
  CHECK(tok == "binary64");

  // empty report: comments plus header only
  SolveReport empty;
  const std::string text = report_csv_text(empty);
  std::size_t newlines = 0;
  for (char c : text)
    if (c == '\n') ++newlines;
  CHECK(newlines == 2);  // status comment + header
}

TEST_CASE("config minimal defaults") {
  const std::string text = R"({
    "matrix": {"generator": "grcar", "n": 10},
    "epsilon": 1e-8
  })";
  ExperimentConfig cfg = parse_config_text(text, "test");
  CHECK(cfg.seed == 0);
  CHECK(cfg.kmax == 0);
  CHECK(!cfg.stop_tol.has_value());
  CHECK(cfg.mode == InexactMode::Perturbation);
  CHECK(cfg.threshold == ThresholdMode::Aggressive);
  Matrix a = load_matrix(cfg.matrix);
  CHECK(a.nrows() == 10);
}

TEST_CASE("config fixed table replicating the first Grcar experiment") {
  const std::string text = R"({
    "matrix": {"generator": "grcar", "n": 100, "superdiags": 5},
    "epsilon": 2.220446049250313e-16,
    "relative_epsilon": true,
    "threshold": "fixed-table",
    "fixed_table": {
      "default": 2.220446049250313e-16,
      "relative": true,
      "ranges": [
        {"lo": 20, "hi": 30, "value": 1e-8},
        {"lo": 40, "hi": 50, "value": 1e-4}
      ]
    }
  })";
  ExperimentConfig cfg = parse_config_text(text, "test");
  CHECK(table_value(cfg.table, 19) == 2.220446049250313e-16);
  CHECK(table_value(cfg.table, 20) == 1e-8);
  CHECK(table_value(cfg.table, 30) == 1e-8);
  CHECK(table_value(cfg.table, 31) == 2.220446049250313e-16);
  CHECK(table_value(cfg.table, 45) == 1e-4);
  CHECK(table_value(cfg.table, 51) == 2.220446049250313e-16);
}

TEST_CASE("config rejects overlapping ranges and unknown keys") {
  const std::string overlap = R"({
    "matrix": {"generator": "grcar", "n": 10},
    "epsilon": 1e-8,
    "threshold": "fixed-table",
    "fixed_table": {
      "default": 1e-10,
      "ranges": [
        {"lo": 5, "hi": 15, "value": 1e-4},
        {"lo": 10, "hi": 20, "value": 1e-6}
      ]
    }
  })";
  CHECK_THROWS_AS(parse_config_text(overlap, "test"), ConfigError);

  const std::string unknown = R"({
    "matrix": {"generator": "grcar", "n": 10},
    "epsilon": 1e-8,
    "epsilonn": 2
  })";
  CHECK_THROWS_WITH_AS(parse_config_text(unknown, "test"),
                       doctest::Contains("epsilonn"), ConfigError);

  CHECK_THROWS_AS(parse_config_text("not json at all", "test"), ConfigError);
  CHECK_THROWS_AS(
      parse_config_text(R"({"matrix": {"generator": "grcar", "n": 10}})",
                        "test"),
      ConfigError);  // epsilon missing
}
