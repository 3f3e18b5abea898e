#include <catch_amalgamated.hpp>

#include "nfuq/config.hpp"
#include "nfuq/io.hpp"
#include "support.hpp"

using namespace nfuq;
using Catch::Matchers::ContainsSubstring;

namespace {

int parse_error_line(const std::string& text, const std::string& fragment) {
  try {
    parse_config_string(text);
  } catch (const ParseError& e) {
    CHECK_THAT(e.what(), ContainsSubstring(fragment));
    return e.line();
  }
  FAIL("no ParseError for:\n" << text);
  return -1;
}

}  // namespace

TEST_CASE("empty config resolves to defaults") {
  const auto c = parse_config_string("# nothing\n\n");
  CHECK(c == RunConfig{});
  CHECK(c.T == 10.0);
  CHECK(c.method == Method::Rk);
  CHECK(c.space == Space::C);
  CHECK(c.build_domain().size() == 41);
}

TEST_CASE("values are read per section") {
  const auto c = parse_config_string(R"(
[domain]
kind = grid2d   # trailing comment
x0 = -10
x1 = 10
y0 = -10
y1 = 10
nx = 11
ny = 9
[noise]
mode = linear
firing_max = 0.5, 1.5
forcing_center = 1, 2
kernel_perturbation = 0.25
[solver]
method = picard
T = 2.5
time_steps = 400
[run]
space = L2
seed = 18446744073709551615
[uq]
samples = 12
p = 1, 3
write_samples = no
[projection]
coarse = 3, 5
kind = orthogonal
)");
  CHECK(c.domain.kind == DomainKind::Grid2d);
  CHECK(c.build_domain().size() == 99);
  CHECK(c.noise.mode == Mode::Linear);
  CHECK(c.noise.firing_max.lo == 0.5);
  CHECK(c.noise.firing_max.hi == 1.5);
  CHECK(c.noise.forcing_center == Point{1.0, 2.0, 0.0});
  CHECK(c.noise.kernel_perturbation.lo == 0.25);
  CHECK(c.noise.kernel_perturbation.hi == 0.25);
  CHECK(c.method == Method::Picard);
  CHECK(c.T == 2.5);
  CHECK(c.picard.time_steps == 400);
  CHECK(c.space == Space::L2);
  CHECK(c.seed == 18446744073709551615ull);
  CHECK(c.uq.samples == 12);
  CHECK(c.uq.p_list == std::vector<int>{1, 3});
  CHECK_FALSE(c.uq.write_samples);
  CHECK(c.projection.coarse == std::vector<int>{3, 5});
  CHECK(c.projection.kind == ProjectorKind::Orthogonal);
}

TEST_CASE("errors name the key and line") {
  CHECK(parse_error_line("[noise]\nfiring_slope = 4, 2\n", "noise.firing_slope") == 2);
  CHECK(parse_error_line("[noise]\nfiring_max = 2, 1\n", "noise.firing_max") == 2);
  CHECK(parse_error_line("[solver]\n\nT = ten\n", "solver.T") == 3);
  CHECK(parse_error_line("[solver]\nT = -1\n", "solver.T") == 2);
  CHECK(parse_error_line("[solver]\nmethod = euler\n", "solver.method") == 2);
  CHECK(parse_error_line("[solver]\nsteps = 3\n", "unknown key 'solver.steps'") == 2);
  CHECK(parse_error_line("[run]\nseed = 1\nseed = 2\n", "first set on line 2") == 3);
  CHECK(parse_error_line("[bogus]\n", "bogus") == 1);
  CHECK(parse_error_line("T = 1\n", "outside") == 1);
  CHECK(parse_error_line("[run]\nseed\n", "") == 2);
  CHECK(parse_error_line("[domain]\na = 3\nb = 1\n", "domain.b") == 3);
  CHECK(parse_error_line("[domain]\nn = 1\n", "domain.n") == 2);
  CHECK(parse_error_line("[uq]\np = 0\n", "uq.p") == 2);
  CHECK(parse_error_line("[noise]\ninitial_shape = bump\n", "initial_amplitude") == 2);
  CHECK(parse_error_line("[run]\nseed = -3\n", "run.seed") == 2);
  CHECK(parse_error_line("[solver]\nT = 1e400\n", "solver.T") == 2);
}

TEST_CASE("serialize round-trips") {
  RunConfig c;
  c.noise = test::interval_cortex_spec();
  c.noise.forcing_speed = {0.1, 1.0 / 3.0};
  c.noise.initial_shape = InitialShape::Bump;
  c.noise.initial_amplitude = {0.5, 1.5};
  c.method = Method::Picard;
  c.T = 1.0 / 7.0;
  c.picard.tol = 3e-11;
  c.rk.rtol = 1e-7;
  c.space = Space::L2;
  c.seed = 12345678901234ull;
  c.uq.p_list = {2, 6};
  c.projection.kind = ProjectorKind::Interpolatory;
  c.output = "some dir";
  const auto text = serialize(c);
  const auto back = parse_config_string(text);
  CHECK(back == c);
  CHECK(serialize(back) == text);
  CHECK(parse_config_string(serialize(RunConfig{})) == RunConfig{});
}

TEST_CASE("summary files reparse as configs") {
  RunConfig c;
  c.seed = 8;
  c.output = test::scratch_dir("cfg_summary").string();
  write_summary(std::filesystem::path(c.output) / "summary.txt", c, {{"pass_rate", "1"}, {"kappa_w", "0.5"}});
  CHECK(parse_config(std::filesystem::path(c.output) / "summary.txt") == c);
}

TEST_CASE("mesh paths resolve against the config file") {
  const auto dir = test::scratch_dir("cfg_mesh");
  test::write_file(dir / "tri.off", "OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n3 0 1 2\n");
  test::write_file(dir / "run.ini", "[domain]\nkind = mesh\nmesh = tri.off\n");
  const auto c = parse_config(dir / "run.ini");
  CHECK(std::filesystem::equivalent(c.domain.mesh, dir / "tri.off"));
  test::write_file(dir / "missing.ini", "[domain]\nkind = mesh\nmesh = nope.off\n");
  CHECK_THROWS_AS(parse_config(dir / "missing.ini"), ParseError);
  CHECK_THROWS_AS(parse_config(dir / "absent.ini"), ValidationError);
}
