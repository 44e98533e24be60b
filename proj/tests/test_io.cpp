#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "jlanczos/io.hpp"
#include "jlanczos/rng.hpp"
#include "test_support.hpp"

using namespace jlanczos;
using namespace testsupport;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string &name) {
  const fs::path dir = fs::temp_directory_path() / ("jlanczos_test_io_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::vector<ConvergenceRecord> sample_records() {
  std::vector<ConvergenceRecord> recs;
  recs.push_back({1, 50, {{0.1 + 0.2, 1e-9 / 3.0, std::nullopt, false}, {std::nextafter(1.0, 2.0), 3e-14, 2.5e-14, true}}});
  recs.push_back({2, 90, {{0.30000000000000004, 1.4943812262986243e-24, 7.5087826693904525e-16, true},
                          {-1.0 / 3.0, std::numeric_limits<double>::denorm_min(), 5e-324, true}}});
  return recs;
}

std::string slurp(const fs::path &p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

} // namespace

TEST_CASE("convergence CSV layout") {
  std::ostringstream out;
  write_convergence_csv(out, {{1, 7, {{0.5, 0.25, std::nullopt, false}, {0.75, 1e-14, 2e-14, true}}}});
  CHECK(out.str() == "restart,cum_matvec,target_index,eig_estimate,res_estimate,res_true,converged\n"
                     "1,7,1,0.5,0.25,,0\n"
                     "1,7,2,0.75,1e-14,2e-14,1\n");
}

TEST_CASE("convergence CSV round trip is bit exact") {
  const auto recs = sample_records();
  std::stringstream ss;
  write_convergence_csv(ss, recs);
  const auto back = parse_convergence_csv(ss);
  CHECK(back == recs);

  const fs::path dir = scratch_dir("csv");
  emit_convergence_csv(recs, dir / "a.csv");
  CHECK(parse_convergence_csv(dir / "a.csv") == recs);
  emit_convergence_csv(recs, dir / "b.csv");
  CHECK(slurp(dir / "a.csv") == slurp(dir / "b.csv"));
  CHECK(slurp(dir / "a.csv").find('\r') == std::string::npos);
  CHECK_THROWS_AS(emit_convergence_csv({}, dir / "c.csv"), std::invalid_argument);
}

TEST_CASE("malformed convergence CSV") {
  const std::string header = std::string(kConvergenceCsvHeader) + "\n";
  for (const std::string bad : {std::string("restart,cum\n1,2\n"), header + "1,5,1,0.5,0.1,,2\n",
                                header + "1,5,1,0.5,0.1,\n", header + "1,5,2,0.5,0.1,,0\n",
                                header + "1,5,1,abc,0.1,,0\n", header + "1,5,1,0.5,0.1,,0\n1,6,2,0.5,0.1,,0\n"}) {
    std::istringstream in(bad);
    CHECK_THROWS_AS(parse_convergence_csv(in), IoError);
  }
  CHECK_THROWS_AS(parse_convergence_csv(fs::path("/nonexistent/x.csv")), IoError);
}

TEST_CASE("Matrix Market round trip with sidecar") {
  Rng rng(1);
  DenseComplexMatrix a(3, 2);
  for (std::size_t r = 0; r < 3; ++r)
    for (std::size_t c = 0; c < 2; ++c)
      a(r, c) = rng.uniform_complex_square();
  a(0, 0) = {1.0 / 3.0, -0.0};
  const fs::path dir = scratch_dir("mm");
  const fs::path path = dir / "m.mtx";
  write_matrix_market(path, a);
  CHECK(read_matrix_market(path) == a);
  CHECK(slurp(path).rfind("%%MatrixMarket matrix array complex general\n3 2\n", 0) == 0);

  CHECK_FALSE(read_sidecar(path).has_value());
  MatrixMeta meta;
  meta.source = "random-hjs";
  meta.j_realization = "canonical-block";
  meta.seed = 12345678901234ULL;
  meta.planted = {0.1, 1.0 / 7.0};
  write_sidecar(path, meta);
  CHECK(sidecar_path(path) == dir / "m.mtx.meta.json");
  const auto back = read_sidecar(path);
  REQUIRE(back.has_value());
  CHECK(back->source == meta.source);
  CHECK(back->j_realization == meta.j_realization);
  CHECK(back->seed == meta.seed);
  CHECK(back->planted == meta.planted);
  CHECK_FALSE(back->colour_dim.has_value());

  meta = {};
  meta.source = "tek";
  meta.j_realization = "spin-tensor";
  meta.colour_dim = 24;
  meta.kappa = 0.19;
  write_sidecar(path, meta);
  CHECK(read_sidecar(path)->colour_dim == 24u);
  CHECK(read_sidecar(path)->kappa == 0.19);
}

TEST_CASE("Matrix Market reader accepts real arrays and comments") {
  std::istringstream in("%%MatrixMarket matrix array real general\n% comment\n2 2\n1\n2\n3\n4\n");
  const auto a = read_matrix_market(in);
  CHECK(a(0, 0) == Complex{1.0});
  CHECK(a(1, 0) == Complex{2.0});
  CHECK(a(0, 1) == Complex{3.0});
}

TEST_CASE("malformed Matrix Market input") {
  for (const std::string bad :
       {std::string(""), std::string("hello\n"), std::string("%%MatrixMarket matrix coordinate real general\n2 2 1\n"),
        std::string("%%MatrixMarket matrix array complex symmetric\n2 2\n"),
        std::string("%%MatrixMarket matrix array pattern general\n2 2\n"),
        std::string("%%MatrixMarket matrix array real general\n2 x\n"),
        std::string("%%MatrixMarket matrix array complex general\n2 1\n1 0\n"),
        std::string("%%MatrixMarket matrix array real general\n1 1\nnan\n")}) {
    std::istringstream in(bad);
    CHECK_THROWS_AS(read_matrix_market(in), IoError);
  }
  const fs::path dir = scratch_dir("bad");
  std::ofstream(dir / "x.mtx.meta.json") << "{not json";
  CHECK_THROWS_AS(read_sidecar(dir / "x.mtx"), IoError);
}

TEST_CASE("format_double round trips") {
  for (double x : {0.1, 1.0 / 3.0, 1e-300, -2.5e17, 0.30000000000000004})
    CHECK(std::stod(format_double(x)) == x);
}
