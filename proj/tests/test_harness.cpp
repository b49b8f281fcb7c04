#include <filesystem>
#include <fstream>
#include <sstream>

#include "dirbound/config.hpp"
#include "dirbound/report.hpp"
#include "dirbound/runner.hpp"
#include "doctest.h"

using namespace dirbound;

namespace {

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string error_of(std::string_view text, Command c) {
  try {
    parse_config(text, c);
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

std::filesystem::path scratch(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("dirbound_test_" + name);
  std::filesystem::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("parse_config") {
  const RunConfig cfg = parse_config(
      R"({"symbol": {"type": "mobius", "a": {"re": 0.5, "im": 0}}})", Command::kKernelSup);
  REQUIRE(cfg.symbol);
  CHECK(cfg.symbol->type_name() == "mobius");

  const std::string beta = error_of(
      R"({"family": "monomials:1..8", "params": {"sigma": 1, "tau": 1, "beta": 2}})",
      Command::kEquivalence);
  CHECK(beta.find("E_PARAM") == 0);
  CHECK(beta.find("upper bound") != std::string::npos);

  const RunConfig eq = parse_config(R"({"family": "monomials:1..8"})", Command::kEquivalence);
  CHECK(eq.family.size() == 8);
  REQUIRE(eq.params);
  CHECK(eq.params->p_dirichlet() == 1.0);
  CHECK(eq.quadrature.target_rel_tol == 0.02);

  SUBCASE("errors name the field") {
    const std::string mob = error_of(R"({"symbol": {"type": "mobius", "a": 1.5}})", Command::kKernelSup);
    CHECK(mob.find("E_CONFIG: symbol") == 0);
    CHECK(mob.find("|a| < 1") != std::string::npos);
    CHECK(error_of(R"({"symbol": {"type": "rotation"}})", Command::kKernelSup).find("symbol.angle") !=
          std::string::npos);
    CHECK(error_of(R"({"symbol": {"type": "identity"}, "sup": {"grid": "x"}})", Command::kKernelSup)
              .find("sup.grid") != std::string::npos);
    CHECK(error_of(R"({"symbol": {"type": "identity"}, "colour": 1})", Command::kKernelSup)
              .find("colour") != std::string::npos);
    CHECK(error_of("[1, 2]", Command::kKernelSup).find("E_CONFIG") == 0);
    CHECK(error_of("{", Command::kKernelSup).find("E_CONFIG") == 0);
    CHECK(error_of("{}", Command::kKernelSup).find("symbol") != std::string::npos);
    CHECK(error_of(R"({"command": "norm", "symbol": {"type": "identity"}})", Command::kKernelSup)
              .find("command") != std::string::npos);
    CHECK(error_of(R"({"symbol": {"type": "identity"}, "family": "monomials:1..8",
                       "params": {"sigma": 1, "beta": 1}})",
                   Command::kBoundCheck)
              .find("E_PARAM") == 0);
  }
  SUBCASE("overrides") {
    CliOverrides o;
    o.refine = 2;
    o.seed = 17;
    o.out_dir = "elsewhere";
    const RunConfig r = parse_config(R"({"family": "monomials:1..2"})", Command::kEquivalence, o);
    CHECK(r.quadrature.radial_count == 32 * 4);
    CHECK(r.quadrature.angular_count == 128 * 4);
    CHECK(r.sup.seed == 17);
    CHECK(r.out_dir == "elsewhere");
  }
}

TEST_CASE("named families") {
  CHECK(expand_family("monomials:1..8").size() == 8);
  const auto geo = expand_family("geometric:0..3");
  REQUIRE(geo.size() == 4);
  CHECK(geo[3].series.order() == 3);
  CHECK(geo[3].series[2] == Complex(1.0));

  const auto mob = expand_family("mobius-monomials:1..2:0.25", 40);
  REQUIRE(mob.size() == 2);
  const Complex z(0.3, -0.2);
  const Complex phi = (0.25 - z) / (1.0 - 0.25 * z);
  CHECK(std::abs(eval_series(mob[1].series, z) - phi * phi) < 1e-14);
  CHECK(mob[1].abscissa == 2.0);

  for (const char* bad : {"monomials", "monomials:3..1", "monomials:a..b", "cubes:1..2",
                          "mobius-monomials:1..2:1.5"}) {
    CHECK_THROWS_AS(expand_family(bad), Error);
  }
}

TEST_CASE("reports") {
  CHECK(to_csv({}) == std::string(kCsvHeader) + "\n");

  Report rep;
  rep.experiment = "demo";
  rep.rows.push_back({"demo", "a,b", "q", 0.1, "coefficient", 1e-8, "Pass", 1.5});
  rep.rows.push_back({"demo", "x", "q", std::numeric_limits<double>::infinity(), "quadrature",
                      0.02, "Unbounded", 0.0});
  rep.traces["trace"] = {1.0, 2.0};
  rep.plots.push_back({"ratio", {{1.0, 1.0 / 3.0}, {2.0, 0.25}}});

  const std::string csv = to_csv(rep.rows);
  CHECK(csv.find("\"a,b\"") != std::string::npos);
  CHECK(csv.find("0.10000000000000001") != std::string::npos);
  CHECK(csv.find(",inf,") != std::string::npos);

  const Report back = report_from_json(nlohmann::json::parse(report_to_json(rep).dump()));
  CHECK(back.rows == rep.rows);
  CHECK(back.plots == rep.plots);
  CHECK(back.traces == rep.traces);

  const auto dir = scratch("reports");
  const auto files = emit_reports(rep, dir);
  CHECK(read_file(files.csv) == csv);
  REQUIRE(files.plots.size() == 1);
  CHECK(read_file(files.plots[0]) == "1 0.33333333333333331\n2 0.25\n");

  SUBCASE("I/O errors name the path") {
    std::ofstream(dir / "blocker") << "x";
    try {
      emit_reports(rep, dir / "blocker" / "sub");
      FAIL("expected E_IO");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kIo);
      CHECK(std::string(e.what()).find("blocker") != std::string::npos);
    }
  }
}

TEST_CASE("run") {
  auto run_text = [](std::string_view text, Command c) { return run(parse_config(text, c)); };

  const auto id = run_text(R"({"symbol": {"type": "identity"}})", Command::kKernelSup);
  CHECK(id.exit_code == kExitOk);
  REQUIRE(id.report.rows.size() == 1);
  CHECK(id.report.rows[0].value == 1.0);
  CHECK(id.report.rows[0].verdict == "Bounded");

  const auto c = run_text(R"({"symbol": {"type": "poly", "coeffs": [0.3]}})", Command::kKernelSup);
  CHECK(c.exit_code == kExitNegative);
  CHECK(c.report.rows[0].verdict == "Unbounded");

  const auto rank = run_text(R"({"symbol": {"type": "poly", "coeffs": [0.3]}})", Command::kRankCheck);
  CHECK(rank.exit_code == kExitOk);
  CHECK(rank.report.rows.back().verdict == "Vacuous");

  const auto eq = run_text(R"({"family": "monomials:1..8"})", Command::kEquivalence);
  CHECK(eq.exit_code == kExitOk);
  CHECK(eq.report.rows.size() == 8);
  CHECK(eq.report.traces["band"]["pass"] == true);
  const auto files = emit_reports(eq.report, scratch("equivalence"));
  CHECK(files.plots.size() == 1);
  CHECK(std::filesystem::exists(files.trace));

  SUBCASE("bound-check emits rows for every member") {
    const auto b = run_text(R"({"symbol": {"type": "monomial", "k": 2},
                                "family": "monomials:1..3", "params": {"sigma": 1, "beta": 0.5}})",
                            Command::kBoundCheck);
    CHECK(b.exit_code == kExitOk);
    for (const char* label : {"z^1", "z^2", "z^3"}) {
      const auto n = std::count_if(b.report.rows.begin(), b.report.rows.end(),
                                   [&](const ReportRow& r) { return r.input == label; });
      CHECK(n == 4);
    }
  }
  SUBCASE("bound-check stops at an unbounded kernel") {
    const auto b = run_text(R"({"symbol": {"type": "poly", "coeffs": [0.5, 0.5]},
                                "family": "monomials:1..3", "params": {"sigma": 1, "beta": 0.5}})",
                            Command::kBoundCheck);
    CHECK(b.exit_code == kExitNegative);
    CHECK(b.report.rows.back().quantity == "sup_kernel");
  }
  SUBCASE("numerical failure maps to 3") {
    const auto t = run_text(R"({"family": "monomials:1..1",
        "quadrature": {"radial_count": 8, "angular_count": 32, "target_rel_tol": 1e-9,
                       "max_refinements": 1}})",
                            Command::kEquivalence);
    CHECK(t.exit_code == kExitNumerical);
    CHECK(t.report.rows[0].verdict == "E_CONVERGENCE");
  }
  SUBCASE("polynomial symbol that is not a self-map") {
    const auto s = run_text(R"({"symbol": {"type": "poly", "coeffs": [0, 2]}})", Command::kSelfmapCheck);
    CHECK(s.exit_code == kExitNegative);
    CHECK(s.report.rows[0].value == doctest::Approx(2.0));
    const auto k = run_text(R"({"symbol": {"type": "poly", "coeffs": [0, 2]}})", Command::kKernelSup);
    CHECK(k.exit_code == kExitConfig);
  }
}

TEST_CASE("identical configs give identical CSV apart from wall time") {
  const char* text = R"({"symbol": {"type": "blaschke", "zeros": [0.4, {"re": 0, "im": -0.3}]},
                         "family": "geometric:1..3", "params": {"sigma": 1.5, "beta": 0.4},
                         "seed": 5})";
  const auto a = run(parse_config(text, Command::kBoundCheck));
  const auto b = run(parse_config(text, Command::kBoundCheck));
  CHECK(a.exit_code == b.exit_code);
  CHECK(to_csv(a.report.rows, false) == to_csv(b.report.rows, false));
  CHECK(report_to_json(a.report)["traces"] == report_to_json(b.report)["traces"]);
}

TEST_CASE("shipped configs parse") {
  const std::filesystem::path data = DIRBOUND_TEST_DATA;
  const std::pair<const char*, Command> ok[] = {
      {"identity.json", Command::kKernelSup},        {"constant.json", Command::kKernelSup},
      {"strict_deriv_tol.json", Command::kRankCheck}, {"bound_monomial2.json", Command::kBoundCheck},
      {"norm_monomials.json", Command::kNorm},        {"not_a_selfmap.json", Command::kSelfmapCheck},
  };
  for (const auto& [file, cmd] : ok) {
    CAPTURE(file);
    CHECK_NOTHROW(parse_config(read_file(data / file), cmd));
  }
  CHECK_THROWS_AS(parse_config(read_file(data / "malformed.json"), Command::kKernelSup), Error);
}
