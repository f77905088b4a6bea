#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "nozzleflow/config.hpp"
#include "nozzleflow/errors.hpp"

using namespace nozzleflow;
using doctest::Approx;

TEST_CASE("defaults") {
  const RunConfig c = parse_config("");
  CHECK(c.gamma == 2.0);
  CHECK_FALSE(c.delta.has_value());
  CHECK(c.profile == "constant");
  CHECK(c.n_eps == 4);
  CHECK(c.cfl == 0.4);
}

TEST_CASE("parsing") {
  const RunConfig c = parse_config(R"(
# comment line
gamma = 5          # trailing comment
delta = 1e-6
profile = gaussian_bump
profile_params = 0.5, 2
eps_list = 0.1, 0.05,0.025
diag_quartic = yes
threads = 3
a = -7.5
output_dir = out/run1
)");
  CHECK(c.gamma == 5.0);
  CHECK(*c.delta == 1e-6);
  CHECK(c.profile_params == std::vector<double>{0.5, 2.0});
  CHECK(c.eps_list.size() == 3);
  CHECK(c.eps_list[2] == 0.025);
  CHECK(c.diag_quartic);
  CHECK(c.threads == 3);
  CHECK(*c.a == -7.5);
  CHECK_FALSE(c.b.has_value());
  CHECK(c.output_dir == "out/run1");
}

TEST_CASE("errors") {
  CHECK_THROWS_AS(parse_config("viscosity = 0.1"), ConfigError);
  CHECK_THROWS_AS(parse_config("gamma"), ConfigError);
  CHECK_THROWS_AS(parse_config("gamma = two"), ConfigError);
  CHECK_THROWS_AS(parse_config("threads = 1.5"), ConfigError);
  CHECK_THROWS_AS(parse_config("force = maybe"), ConfigError);
  CHECK_THROWS_AS(parse_config("k_lo = 1\nk_hi = 0"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/file.cfg"), ConfigError);
}

TEST_CASE("file round trip") {
  const auto path = std::filesystem::temp_directory_path() / "nozzleflow_test.cfg";
  {
    std::ofstream out(path);
    out << "gamma = 1.4\nt_end = 2\n";
  }
  const RunConfig c = load_config(path);
  CHECK(c.gamma == Approx(1.4));
  CHECK(c.t_end == 2.0);
  std::filesystem::remove(path);
}
