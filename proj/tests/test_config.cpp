#include <doctest.h>

#include <string>

#include "anderson/config.hpp"

using namespace anderson;

namespace {

const std::string kMinimal =
    "model.d = 1\n"
    "model.n = 1\n"
    "model.h = 1\n"
    "model.m_list = 8\n"
    "disorder.distribution = uniform\n"
    "disorder.seed = 1\n"
    "disorder.R = 1\n";

ExperimentConfig parse(const std::string& text,
                       const std::vector<std::string>& overrides = {}) {
  RawConfig raw = parse_config_text(text, "test.cfg");
  for (const auto& o : overrides) apply_override(raw, o);
  return build_config(raw);
}

}  // namespace

TEST_CASE("minimal config parses with defaults") {
  const ExperimentConfig cfg = parse(kMinimal);
  CHECK(cfg.model.d == 1);
  CHECK(cfg.model.n == 1);
  CHECK(cfg.model.h == 1.0);
  CHECK(cfg.m_list == std::vector<int>{8});
  CHECK(cfg.L_list == std::vector<double>{8.0});
  CHECK(cfg.model.kernel.kind == KernelKind::None);
  CHECK(cfg.disorder.distribution == DistKind::Uniform);
  CHECK(cfg.disorder.seed == 1);
  CHECK(cfg.disorder.realization_count == 1);
  CHECK(cfg.task.e_points == 101);
  CHECK(cfg.output.prefix == "anderson");
}

TEST_CASE("comments, blanks, and spacing are tolerated") {
  const ExperimentConfig cfg = parse(
      "# experiment\n"
      "\n"
      "model.d=2   # trailing comment\n"
      "model.n =  1\n"
      "model.h\t= 0.5\n"
      "model.L_list = 2.0, 4.0\n"
      "disorder.distribution = bernoulli\n"
      "disorder.p = 0.25\n"
      "disorder.seed = 7\n"
      "disorder.R = 3\n");
  CHECK(cfg.model.d == 2);
  CHECK(cfg.m_list == std::vector<int>{4, 8});
  CHECK(cfg.disorder.p == 0.25);
}

TEST_CASE("constraint violations name the key") {
  CHECK_THROWS_WITH_AS(parse("model.d = 1\nmodel.n = 0\nmodel.h = 1\n"
                             "model.m_list = 4\ndisorder.distribution = uniform\n"
                             "disorder.seed = 1\ndisorder.R = 1\n"),
                       doctest::Contains("model.n"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse(kMinimal + "model.u0 = -1\n"),
                       doctest::Contains("model.u0"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse(kMinimal + "disorder.p = 1.5\n"),
                       doctest::Contains("disorder.p"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse(kMinimal + "task.e_points = 0\n"),
                       doctest::Contains("task.e_points"), std::invalid_argument);
}

TEST_CASE("missing mandatory keys name the key") {
  CHECK_THROWS_WITH_AS(parse("model.d = 1\nmodel.n = 1\nmodel.h = 1\n"
                             "model.m_list = 4\ndisorder.distribution = uniform\n"
                             "disorder.R = 1\n"),
                       doctest::Contains("disorder.seed"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse("model.n = 1\nmodel.h = 1\nmodel.m_list = 4\n"
                             "disorder.distribution = uniform\n"
                             "disorder.seed = 1\ndisorder.R = 1\n"),
                       doctest::Contains("model.d"), std::invalid_argument);
}

TEST_CASE("duplicate keys report both line numbers") {
  try {
    parse("model.d = 1\nmodel.n = 1\nmodel.n = 2\n");
    FAIL("expected a duplicate-key error");
  } catch (const std::invalid_argument& e) {
    const std::string what = e.what();
    CHECK(what.find("duplicate key 'model.n'") != std::string::npos);
    CHECK(what.find(":3") != std::string::npos);
    CHECK(what.find("line 2") != std::string::npos);
  }
}

TEST_CASE("unknown keys and malformed lines are rejected") {
  CHECK_THROWS_WITH_AS(parse(kMinimal + "model.bogus = 3\n"),
                       doctest::Contains("unknown config key 'model.bogus'"),
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse("model.d\n"), doctest::Contains("test.cfg:1"),
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse("= 3\n"), doctest::Contains("missing key"),
                       std::invalid_argument);
}

TEST_CASE("type mismatches name the key") {
  CHECK_THROWS_WITH_AS(parse("model.d = abc\nmodel.n = 1\nmodel.h = 1\n"
                             "model.m_list = 4\ndisorder.distribution = uniform\n"
                             "disorder.seed = 1\ndisorder.R = 1\n"),
                       doctest::Contains("model.d"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse(kMinimal + "task.e_max = fast\n"),
                       doctest::Contains("task.e_max"), std::invalid_argument);
}

TEST_CASE("box lists must be expressible in whole sites") {
  CHECK_THROWS_AS(parse("model.d = 1\nmodel.n = 1\nmodel.h = 1\n"
                        "model.L_list = 4.5\ndisorder.distribution = uniform\n"
                        "disorder.seed = 1\ndisorder.R = 1\n"),
                  std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse(kMinimal + "model.L_list = 8\n"),
                       doctest::Contains("exactly one"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse("model.d = 1\nmodel.n = 1\nmodel.h = 1\n"
                             "disorder.distribution = uniform\n"
                             "disorder.seed = 1\ndisorder.R = 1\n"),
                       doctest::Contains("m_list"), std::invalid_argument);
}

TEST_CASE("interaction and norm enumerations") {
  ExperimentConfig cfg = parse(kMinimal + "model.interaction = hard_sphere\n"
                                          "model.u0 = 2\nmodel.r0 = 1.5\n"
                                          "model.norm = euclid\n");
  CHECK(cfg.model.kernel.kind == KernelKind::HardSphere);
  CHECK(cfg.model.kernel.u0 == 2.0);
  CHECK(cfg.model.kernel.r0 == 1.5);
  CHECK(cfg.model.kernel.norm == PairNorm::Euclid);

  cfg = parse(kMinimal + "model.interaction = table\nmodel.table = 0.4, 0.1\n");
  CHECK(cfg.model.kernel.table == std::vector<double>{0.4, 0.1});

  CHECK_THROWS_WITH_AS(parse(kMinimal + "model.interaction = coulomb\n"),
                       doctest::Contains("model.interaction"),
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse(kMinimal + "model.table = 0.4\n"),
                       doctest::Contains("model.table"), std::invalid_argument);
}

TEST_CASE("overrides replace file values") {
  const ExperimentConfig cfg =
      parse(kMinimal, {"disorder.seed=99", "task.e_points=11", "output.prefix=run1"});
  CHECK(cfg.disorder.seed == 99);
  CHECK(cfg.task.e_points == 11);
  CHECK(cfg.output.prefix == "run1");
  CHECK_THROWS_AS(parse(kMinimal, {"no_equals_sign"}), std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse(kMinimal, {"bogus.key=1"}),
                       doctest::Contains("bogus.key"), std::invalid_argument);
}

TEST_CASE("grid cap is re-validated at parse time") {
  CHECK_THROWS_WITH_AS(parse("model.d = 2\nmodel.n = 2\nmodel.h = 1\n"
                             "model.m_list = 64\ndisorder.distribution = uniform\n"
                             "disorder.seed = 1\ndisorder.R = 1\n"
                             "model.dim_cap = 1000\n"),
                       doctest::Contains("m^(n*d)"), std::invalid_argument);
}

TEST_CASE("fit window needs both edges") {
  CHECK_THROWS_WITH_AS(parse(kMinimal + "task.fit_window_lo = 0.1\n"),
                       doctest::Contains("fit_window"), std::invalid_argument);
  const ExperimentConfig cfg =
      parse(kMinimal + "task.fit_window_lo = 0.1\ntask.fit_window_hi = 0.5\n");
  CHECK(cfg.task.fit_window_lo.value() == 0.1);
  CHECK(cfg.task.fit_window_hi.value() == 0.5);
}
