#include <doctest.h>

#include <set>

#include "rovib/basis.hpp"
#include "rovib/errors.hpp"
#include "rovib/params.hpp"

using namespace rovib;
using quantum::Basis;
using quantum::StateIndex;

TEST_CASE("standard experiment basis has 64 states in lexicographic order") {
  const auto basis = Basis::build(3, 3, geo_preset());
  REQUIRE(basis.size() == 64);
  CHECK(basis.state(0) == StateIndex{0, 0, 0});
  CHECK(basis.state(1) == StateIndex{0, 1, -1});
  CHECK(basis.state(63) == StateIndex{3, 3, 3});
  for (std::size_t i = 1; i < basis.size(); ++i) CHECK(basis.state(i - 1) < basis.state(i));
}

TEST_CASE("lookup is the exact inverse of the state list") {
  const auto basis = Basis::build(3, 2, geo_preset());
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const auto pos = basis.find(basis.state(i));
    REQUIRE(pos.has_value());
    CHECK(*pos == i);
  }
  CHECK(!basis.find({0, 0, 1}).has_value());
  CHECK(!basis.find({9, 0, 0}).has_value());
}

TEST_CASE("minimal basis") {
  const auto basis = Basis::build(0, 0, geo_preset());
  REQUIRE(basis.size() == 1);
  CHECK(basis.state(0) == StateIndex{0, 0, 0});
}

TEST_CASE("class filter keeps exactly the requested m - n values") {
  const auto basis = Basis::build(2, 2, geo_preset(), std::set<int>{-1});
  CHECK(basis.size() == 7);
  for (const auto& s : basis.states()) CHECK(quantum::k_class(s) == -1);
  CHECK(basis.find({1, 0, 0}).has_value());
  CHECK(basis.find({2, 1, 1}).has_value());
}

TEST_CASE("class labels") {
  CHECK(quantum::k_class({1, 0, 0}) == -1);
  CHECK(quantum::k_class({2, 1, 1}) == -1);  // shares the class, hence can resonate
  CHECK(quantum::k_class({0, 1, 1}) == 1);
}

TEST_CASE("caps beyond the spectrum bound are rejected") {
  CHECK_THROWS_AS(Basis::build(224, 1, geo_preset()), ConfigError);
  CHECK_NOTHROW(Basis::build(223, 0, geo_preset()));
}

TEST_CASE("explicit state lists keep their order and reject junk") {
  const auto basis = Basis::from_states({{1, 0, 0}, {2, 1, 1}});
  CHECK(basis.state(0) == StateIndex{1, 0, 0});
  CHECK(basis.state(1) == StateIndex{2, 1, 1});
  CHECK(basis.n_cap() == 2);
  CHECK(basis.l_cap() == 1);
  CHECK_THROWS_AS(Basis::from_states({{0, 0, 1}}), ConfigError);
  CHECK_THROWS_AS(Basis::from_states({{1, 0, 0}, {1, 0, 0}}), ConfigError);
}
