#include "doctest.h"

#include <fstream>

#include "symlap/config.hpp"

using namespace symlap;

TEST_CASE("defaults") {
  const auto c = parse_config("{}");
  CHECK(c.kind == ManifoldKind::FlatTorus);
  CHECK(c.degree == 1);
  CHECK(c.sizes == std::vector<int>{16, 16});
  CHECK(c.scheme == DerivativeScheme::Spectral);
}

TEST_CASE("full conformal config") {
  const auto c = parse_config(R"({
    "manifold": {"kind": "conformal_torus", "n": 2, "sizes": [32, 24], "periods": [1, 2],
                 "amplitude": 0.2, "wave_vector": [1, 1]},
    "degree": 3, "scheme": "fd4", "seed": 42, "trials": 5, "k": 12, "dof_cap": 9000, "band": 6,
    "tolerances": {"bochner": 1e-5, "geodesic_energy": 1e-7},
    "geodesic": {"tensor": "random", "h": 0.002, "steps": 50}
  })");
  CHECK(c.kind == ManifoldKind::ConformalTorus);
  CHECK(c.sizes == std::vector<int>{32, 24});
  CHECK(c.periods == std::vector<double>{1.0, 2.0});
  CHECK(c.amplitude == 0.2);
  CHECK(c.degree == 3);
  CHECK(c.scheme == DerivativeScheme::FD4);
  CHECK(c.seed == 42);
  CHECK(c.k == 12);
  CHECK(c.dof_cap == 9000);
  CHECK(c.band == 6);
  CHECK(c.tolerances.bochner == 1e-5);
  CHECK(c.tolerances.geodesic_energy == 1e-7);
  CHECK(c.tolerances.greens == Tolerances{}.greens);
  CHECK(c.geodesic_tensor == "random");
  CHECK(c.geodesic_steps == 50);

  const auto M = c.build_manifold();
  CHECK(M.grid().size(1) == 24);
  CHECK(M.diff().scheme() == DerivativeScheme::FD4);
  const auto fp = c.fingerprint();
  CHECK(fp.find("conformal_torus") != std::string::npos);
  CHECK(fp.find("seed=42") != std::string::npos);
}

TEST_CASE("constant curvature config") {
  const auto c = parse_config(R"({"manifold": {"kind": "constant_curvature", "n": 3, "kappa": -1}, "degree": 2})");
  CHECK(c.pointwise());
  CHECK(c.kappa == -1.0);
  CHECK_THROWS_AS(c.build_manifold(), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"manifold": {"kind": "constant_curvature", "n": 3}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"manifold": {"kind": "constant_curvature", "n": 3, "kappa": 1, "sizes": [8, 8, 8]}})"),
                  ConfigError);
}

TEST_CASE("rejected configs") {
  const char* bad[] = {
      "not json",
      R"({"manfold": {}})",
      R"({"manifold": {"kind": "sphere"}})",
      R"({"manifold": {"kind": "flat_torus", "radius": 1}})",
      R"({"degree": 0})",
      R"({"degree": 5})",
      R"({"degree": "two"})",
      R"({"manifold": {"n": 5}})",
      R"({"manifold": {"sizes": [7, 8]}})",
      R"({"manifold": {"sizes": [16]}})",
      R"({"manifold": {"periods": [1, 0]}})",
      R"({"manifold": {"kind": "conformal_torus", "amplitude": 0.9}})",
      R"({"manifold": {"kind": "conformal_torus", "wave_vector": [1]}})",
      R"({"manifold": {"kind": "flat_torus", "amplitude": 0.1}})",
      R"({"manifold": {"kind": "flat_torus", "kappa": 1}})",
      R"({"scheme": "fd2"})",
      R"({"trials": 0})",
      R"({"k": 0})",
      R"({"band": -1})",
      R"({"tolerances": {"bochnr": 1e-6}})",
      R"({"tolerances": {"bochner": "small"}})",
      R"({"tolerances": {"bochner": 0}})",
      R"({"geodesic": {"tensor": "ricci"}})",
      R"({"geodesic": {"h": -1}})",
      R"({"geodesic": {"step": 10}})",
  };
  for (const char* text : bad) {
    INFO(text);
    CHECK_THROWS_AS(parse_config(text), ConfigError);
  }
}

TEST_CASE("error messages name the field") {
  try {
    parse_config(R"({"manifold": {"kind": "flat_torus", "sizes": [9, 8]}})");
    FAIL("expected a ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("manifold.sizes") != std::string::npos);
  }
  try {
    parse_config(R"({"extra": 1})");
    FAIL("expected a ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("extra") != std::string::npos);
  }
}

TEST_CASE("loading from disk") {
  CHECK_THROWS_AS(load_config("/nonexistent/run.json"), ConfigError);
  {
    std::ofstream out("config_test.json");
    out << R"({"degree": 2, "seed": 3})";
  }
  const auto c = load_config("config_test.json");
  CHECK(c.degree == 2);
  CHECK(c.seed == 3);
}
