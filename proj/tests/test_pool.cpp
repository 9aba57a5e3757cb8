#include "hysid/errors.hpp"
#include "hysid/pool.hpp"

#include "doctest.h"
#include "test_helpers.hpp"

#include <algorithm>

using namespace hysid;
using hysid::test::T;

namespace {

bool pool_contains(const std::vector<Term>& pool, const std::string& s) {
  return std::find(pool.begin(), pool.end(), T(s)) != pool.end();
}

// multisets of degree <= ell over n distinct degree-1 factors
long long unrestricted_count(int n, int ell) {
  long long total = 0;
  for (int d = 0; d <= ell; ++d) {
    long long c = 1;
    for (int i = 1; i <= d; ++i) c = c * (n + i - 1) / i;
    total += c;
  }
  return total;
}

}  // namespace

TEST_CASE("degree-1 pool with full exclusions") {
  const auto pool = generate_term_pool(1, 1, 1, ExclusionRules::all());
  REQUIRE(pool.size() == 5);
  CHECK(pool_contains(pool, "1"));
  CHECK(pool_contains(pool, "y(k-1)"));
  CHECK(pool_contains(pool, "u(k-1)"));
  CHECK(pool_contains(pool, "phi1(k-1)"));
  CHECK(pool_contains(pool, "phi2(k-1)"));
}

TEST_CASE("benchmark pool contains the identified six-term structure") {
  const auto pool = generate_term_pool(3, 1, 2, ExclusionRules::all());
  for (const char* s : {"y(k-1)", "phi1(k-1)", "phi2(k-2)*phi1(k-2)*u(k-2)",
                        "phi2(k-2)*phi1(k-2)*y(k-1)", "phi1(k-2)*u(k-2)^2",
                        "phi1(k-2)*u(k-2)*y(k-1)"}) {
    CAPTURE(s);
    CHECK(pool_contains(pool, s));
  }
}

TEST_CASE("exclusion rules drop the three structural groups") {
  const auto pool = generate_term_pool(2, 1, 1, ExclusionRules::all());
  CHECK_FALSE(pool_contains(pool, "y(k-1)^2"));
  CHECK_FALSE(pool_contains(pool, "phi2(k-1)^2"));
  CHECK_FALSE(pool_contains(pool, "y(k-1)*u(k-1)"));
  // phi-bearing crosses stay
  CHECK(pool_contains(pool, "phi1(k-1)*y(k-1)"));
  CHECK(pool_contains(pool, "phi2(k-1)*y(k-1)"));
}

TEST_CASE("pool without exclusions matches the multiset count") {
  for (int ell = 1; ell <= 3; ++ell) {
    for (int ny = 1; ny <= 2; ++ny) {
      for (int nu = 1; nu <= 2; ++nu) {
        const auto pool = generate_term_pool(ell, ny, nu, ExclusionRules::none());
        const long long expect = unrestricted_count(ny + 3 * nu, ell);
        CAPTURE(ell);
        CAPTURE(ny);
        CAPTURE(nu);
        CHECK(static_cast<long long>(pool.size()) == expect);
      }
    }
  }
}

TEST_CASE("pool rejects bad arguments") {
  CHECK_THROWS_AS(generate_term_pool(0, 1, 1, ExclusionRules::all()), ConfigError);
  CHECK_THROWS_AS(generate_term_pool(1, 0, 1, ExclusionRules::all()), ConfigError);
  CHECK_THROWS_AS(generate_term_pool(1, 1, -1, ExclusionRules::all()), ConfigError);
}

TEST_CASE("direct-synthesis filter isolates the delayed input") {
  auto pool = generate_term_pool(3, 1, 2, ExclusionRules::all());
  pool = filter_pool_for_direct_synthesis(pool, 1);
  // linear candidates carrying u(k-1) survive
  CHECK(pool_contains(pool, "u(k-1)"));
  CHECK(pool_contains(pool, "phi1(k-1)"));
  // anything referencing u(k-1) nonlinearly is gone
  CHECK_FALSE(pool_contains(pool, "phi2(k-1)"));
  CHECK_FALSE(pool_contains(pool, "phi1(k-1)*y(k-1)"));
  CHECK_FALSE(pool_contains(pool, "u(k-1)^2"));
  CHECK_FALSE(pool_contains(pool, "phi2(k-1)*phi1(k-1)*u(k-1)"));
  // lag-2 machinery is untouched
  CHECK(pool_contains(pool, "phi2(k-2)*phi1(k-2)*u(k-2)"));
}
