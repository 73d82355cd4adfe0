#include "support.hpp"

#include "abreu/config.hpp"
#include "abreu/function_spec.hpp"
#include "abreu/oracle.hpp"

#include <filesystem>
#include <fstream>

using namespace abreu;
using nlohmann::json;

TEST_CASE("defaults round-trip") {
  const json once = serialize_config(parse_config(json::object()));
  const json twice = serialize_config(parse_config(once));
  CHECK(once == twice);
}

TEST_CASE("populated config round-trips") {
  const json j = json::parse(R"({
    "command": "solve",
    "domain": {"kind": "ellipse", "h_grid": 0.05, "params": {"a": 1.5, "b": 1.0, "angle": 0.3, "center": [0.1, 0.2]}},
    "problem": {"theta": 0.0, "f": {"gaussian": {"center": [0, 0], "amplitude": -2, "width": 0.4}},
                "psi": {"sum": [1.0, {"poly": [[1, 0, 0.1]]}]}, "p": 3},
    "solver": {"relaxation": 0.7, "max_outer_iters": 50, "backend": "bicgstab"},
    "verify": {"alpha": 0.5, "sobolev": false},
    "seed": 42, "threads": 2
  })");
  const RunConfig c = parse_config(j);
  CHECK(c.domain.kind == "ellipse");
  CHECK(c.h == 0.05);
  CHECK(c.problem.theta == 0.0);
  CHECK(c.seed == 42);
  CHECK(!c.verify.sobolev);
  const json once = serialize_config(c);
  CHECK(serialize_config(parse_config(once)) == once);
  CHECK(coupled_options(c.solver).sigma == 0.7);
}

TEST_CASE("unknown keys are rejected at every level") {
  for (const char* text : {R"({"bogus": 1})", R"({"domain": {"radius": 1}})", R"({"domain": {"params": {"r": 1}}})",
                           R"({"problem": {"thetta": 0.1}})", R"({"solver": {"tol": 1}})", R"({"verify": {"x": true}})",
                           R"({"problem": {"f": {"poly": [[0, 0, 1]], "extra": 1}}})"}) {
    CAPTURE(text);
    CHECK(test::kind_of([&] { parse_config(json::parse(text)); }) == ErrorKind::InvalidInput);
  }
}

TEST_CASE("malformed values are rejected") {
  for (const char* text : {R"({"domain": {"kind": "square"}})", R"({"domain": {"h_grid": -1}})", R"({"threads": 0})",
                           R"({"seed": -3})", R"({"problem": {"theta": "a"}})", R"({"solver": {"backend": "magic"}})",
                           R"({"lma": {"u_csv": "does/not/exist.csv"}})", R"({"sections": {"source": "file"}})"}) {
    CAPTURE(text);
    CHECK(test::kind_of([&] { parse_config(json::parse(text)); }) == ErrorKind::InvalidInput);
  }
}

TEST_CASE("relative paths resolve against the config directory") {
  const auto dir = std::filesystem::temp_directory_path() / "abreu_config_paths";
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "u.csv") << "x,y,value\n";
  std::ofstream(dir / "run.json") << R"({"lma": {"u_csv": "u.csv"}})";
  const RunConfig c = load_config(dir / "run.json");
  CHECK(std::filesystem::path(c.lma.u_csv) == dir / "u.csv");
  std::filesystem::remove_all(dir);
  CHECK(test::kind_of([] { load_config("/nonexistent/abreu.json"); }) == ErrorKind::InvalidInput);
}

TEST_CASE("function specs") {
  const Point p(0.3, -0.4);
  CHECK(compile_function_spec(2.5, 0.25)(p) == 2.5);
  CHECK(compile_function_spec({{"const", -1.0}}, 0.25)(p) == -1.0);
  CHECK(compile_function_spec({{"poly", {{2, 0, 0.5}, {0, 2, 0.5}}}}, 0.25)(p) == doctest::Approx(0.125));
  const ExactSolution s = fixture("radial", 0.25);
  CHECK(compile_function_spec({{"fixture", "radial"}, {"field", "f"}}, 0.25)(p) == s.f(p));
  CHECK(compile_function_spec({{"fixture", "radial"}, {"field", "w"}}, 0.25)(p) == s.w(p));
  const double g = compile_function_spec(json::parse(R"({"gaussian": {"center": [0.3, 0], "amplitude": 2, "width": 0.5}})"), 0)(p);
  CHECK(g == doctest::Approx(2.0 * std::exp(-0.16 / 0.25)));
  CHECK(compile_function_spec(json::parse(R"({"abs_power": {"axis": 1, "power": 0.5, "scale": 2}})"), 0)(p) ==
        doctest::Approx(2.0 * std::sqrt(0.4)));
  CHECK(compile_function_spec(json::parse(R"({"sum": [1, {"const": 2}]})"), 0)(p) == 3.0);
  CHECK(test::kind_of([] { validate_function_spec(json::parse(R"({"sine": 1})")); }) == ErrorKind::InvalidInput);
  CHECK(test::kind_of([] { validate_function_spec(json::parse(R"({"fixture": "nope", "field": "u"})")); }) ==
        ErrorKind::InvalidInput);
}

TEST_CASE("domain construction from config") {
  DomainConfig d;
  d.kind = "levelset";
  d.poly = json::parse("[[2, 0, 1], [0, 2, 4], [0, 0, -1]]");
  const auto dom = make_domain(d);
  CHECK(dom->rho() == doctest::Approx(0.25).epsilon(1e-3));  // ellipse (1, 1/2): b^2/a
  d.kind = "ellipse";
  d.a = 2.0;
  d.b = 0.0;
  CHECK(test::kind_of([&] { make_domain(d); }) == ErrorKind::InvalidDomain);
}
