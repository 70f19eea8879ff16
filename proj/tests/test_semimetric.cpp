#include <catch2/catch_amalgamated.hpp>

#include "scalent/semimetric.hpp"

using namespace scalent;

TEST_CASE("degenerate one-point triple passes validation") {
  EmpiricalTriple t({1.0}, {0.0});
  const ValidationReport r = validate_semimetric(t);
  REQUIRE(r.ok());
}

TEST_CASE("asymmetry is reported with its indices") {
  EmpiricalTriple t({0.5, 0.5}, {0.0, 1.0, 2.0, 0.0});
  const ValidationReport r = validate_semimetric(t);
  REQUIRE_FALSE(r.ok());
  REQUIRE(r.defect == SemimetricDefect::Asymmetry);
  REQUIRE(r.i == 0);
  REQUIRE(r.j == 1);
}

TEST_CASE("triangle violation is reported at (0,2,1)") {
  // d(0,1) = 1, d(1,2) = 1, d(0,2) = 5
  EmpiricalTriple t({1.0 / 3, 1.0 / 3, 1.0 / 3},
                    {0, 1, 5, 1, 0, 1, 5, 1, 0});
  const ValidationReport r = validate_semimetric(t);
  REQUIRE_FALSE(r.ok());
  REQUIRE(r.defect == SemimetricDefect::TriangleViolation);
  REQUIRE(r.i == 0);
  REQUIRE(r.j == 2);
  REQUIRE(r.k == 1);
}

TEST_CASE("remaining axioms are each reported") {
  SECTION("negative weight") {
    EmpiricalTriple t({1.5, -0.5}, {0, 1, 1, 0});
    REQUIRE(validate_semimetric(t).defect == SemimetricDefect::NegativeWeight);
  }
  SECTION("weights not summing to one") {
    EmpiricalTriple t({0.5, 0.4}, {0, 1, 1, 0});
    REQUIRE(validate_semimetric(t).defect == SemimetricDefect::WeightSumOff);
  }
  SECTION("nonzero diagonal") {
    EmpiricalTriple t({0.5, 0.5}, {0.1, 1, 1, 0});
    REQUIRE(validate_semimetric(t).defect == SemimetricDefect::NonzeroDiagonal);
  }
  SECTION("negative entry") {
    EmpiricalTriple t({0.5, 0.5}, {0, -1, -1, 0});
    REQUIRE(validate_semimetric(t).defect == SemimetricDefect::NegativeEntry);
  }
  SECTION("zero off-diagonal entries are allowed") {
    EmpiricalTriple t({0.5, 0.5}, {0, 0, 0, 0});
    REQUIRE(validate_semimetric(t).ok());
  }
}

TEST_CASE("triangle tolerance admits tiny violations only") {
  EmpiricalTriple tiny({1.0 / 3, 1.0 / 3, 1.0 / 3},
                       {0, 1, 2.0 + 1e-10, 1, 0, 1, 2.0 + 1e-10, 1, 0});
  REQUIRE(validate_semimetric(tiny).ok());
  EmpiricalTriple big({1.0 / 3, 1.0 / 3, 1.0 / 3},
                      {0, 1, 2.0 + 1e-8, 1, 0, 1, 2.0 + 1e-8, 1, 0});
  REQUIRE_FALSE(validate_semimetric(big).ok());
}

TEST_CASE("permuting a triple permutes weights and distances together") {
  EmpiricalTriple t({0.2, 0.3, 0.5}, {0, 1, 2, 1, 0, 3, 2, 3, 0});
  const EmpiricalTriple p = t.permuted({2, 0, 1});
  REQUIRE(p.weight(0) == 0.5);
  REQUIRE(p.weight(1) == 0.2);
  REQUIRE(p.dist(0, 1) == t.dist(2, 0));
  REQUIRE(p.dist(0, 2) == t.dist(2, 1));
  REQUIRE(validate_semimetric(p).ok());
}
