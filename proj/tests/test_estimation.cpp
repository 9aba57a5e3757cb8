#include "hysid/analysis.hpp"
#include "hysid/errors.hpp"
#include "hysid/estimation.hpp"
#include "hysid/pool.hpp"
#include "hysid/regression.hpp"

#include "doctest.h"
#include "test_helpers.hpp"

#include <Eigen/Dense>

#include <random>

using namespace hysid;
using hysid::test::T;

namespace {

/// Independent KKT oracle: solve the full saddle-point system with LU.
Eigen::VectorXd kkt_oracle(const Eigen::MatrixXd& psi, const Eigen::VectorXd& y,
                           const EqualityConstraint& con) {
  const Eigen::Index n = psi.cols(), c = con.S.rows();
  Eigen::MatrixXd K(n + c, n + c);
  K.topLeftCorner(n, n) = psi.transpose() * psi;
  K.topRightCorner(n, c) = con.S.transpose();
  K.bottomLeftCorner(c, n) = con.S;
  K.bottomRightCorner(c, c).setZero();
  Eigen::VectorXd rhs(n + c);
  rhs.head(n) = psi.transpose() * y;
  rhs.tail(c) = con.c;
  return K.fullPivLu().solve(rhs).head(n);
}

}  // namespace

TEST_CASE("least squares on the identity") {
  Eigen::MatrixXd psi = Eigen::MatrixXd::Identity(2, 2);
  Eigen::VectorXd y(2);
  y << 3, 5;
  const auto res = least_squares(psi, y);
  CHECK(res.theta.isApprox(y));
  CHECK(res.warnings.empty());
}

TEST_CASE("noise-free data recovers the generating parameters") {
  const NarxModel gen = hysid::test::example1_model(0.6, 0.4, 0.01, -0.005, 0.7);
  std::mt19937_64 rng(29);
  const Signal u = hysid::test::smooth_signal(rng, 4000, 50.0);
  const Signal y = free_run(gen, u, Eigen::VectorXd::Zero(1));
  const auto data = build_regressor_matrix(gen.terms, u, y);
  const auto res = least_squares(data.psi, data.target);
  for (Eigen::Index i = 0; i < 5; ++i) {
    CHECK(res.theta[i] == doctest::Approx(gen.theta[i]).epsilon(1e-8));
  }
}

TEST_CASE("duplicated column raises a rank error") {
  std::mt19937_64 rng(31);
  Eigen::MatrixXd psi(20, 3);
  std::normal_distribution<double> d;
  for (int i = 0; i < 20; ++i) {
    psi(i, 0) = d(rng);
    psi(i, 1) = d(rng);
    psi(i, 2) = psi(i, 0);
  }
  Eigen::VectorXd y = psi.col(1);
  CHECK_THROWS_WITH_AS(least_squares(psi, y), doctest::Contains("rank-deficient"), NumericError);
}

TEST_CASE("inactive constraint leaves the LS solution untouched") {
  std::mt19937_64 rng(37);
  std::normal_distribution<double> d;
  Eigen::MatrixXd psi(30, 4);
  Eigen::VectorXd y(30);
  for (int i = 0; i < 30; ++i) {
    for (int j = 0; j < 4; ++j) psi(i, j) = d(rng);
    y[i] = d(rng);
  }
  const auto ls = least_squares(psi, y);
  EqualityConstraint con;
  con.S = Eigen::MatrixXd::Zero(1, 4);
  con.S(0, 0) = 1.0;
  con.S(0, 2) = 2.0;
  con.c = con.S * ls.theta;  // already satisfied
  const auto cls = constrained_least_squares(psi, y, con);
  CHECK((cls.theta - ls.theta).lpNorm<Eigen::Infinity>() <=
        1e-12 * std::max(1.0, ls.theta.lpNorm<Eigen::Infinity>()));
}

TEST_CASE("constrained estimate matches the KKT oracle") {
  std::mt19937_64 rng(41);
  std::normal_distribution<double> d;
  Eigen::MatrixXd psi(20, 3);
  Eigen::VectorXd y(20);
  for (int i = 0; i < 20; ++i) {
    for (int j = 0; j < 3; ++j) psi(i, j) = d(rng);
    y[i] = d(rng);
  }
  EqualityConstraint con;
  con.S = Eigen::MatrixXd::Zero(1, 3);
  con.S(0, 0) = 1.0;
  con.S(0, 1) = 1.0;
  con.c = Eigen::VectorXd::Ones(1);
  const auto cls = constrained_least_squares(psi, y, con);
  const Eigen::VectorXd oracle = kkt_oracle(psi, y, con);
  CHECK((cls.theta - oracle).lpNorm<Eigen::Infinity>() <= 1e-9);
}

TEST_CASE("constraint residual stays below 1e-10 across random problems") {
  std::mt19937_64 rng(43);
  std::normal_distribution<double> d;
  std::uniform_int_distribution<int> nd(3, 8), cd(1, 2);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = nd(rng);
    const int nc = std::min(cd(rng), n - 1);
    Eigen::MatrixXd psi(50, n);
    Eigen::VectorXd y(50);
    for (int i = 0; i < 50; ++i) {
      for (int j = 0; j < n; ++j) psi(i, j) = d(rng);
      y[i] = d(rng);
    }
    EqualityConstraint con;
    con.S.resize(nc, n);
    con.c.resize(nc);
    for (int i = 0; i < nc; ++i) {
      for (int j = 0; j < n; ++j) con.S(i, j) = d(rng);
      con.c[i] = d(rng);
    }
    const auto cls = constrained_least_squares(psi, y, con);
    CHECK((con.S * cls.theta - con.c).lpNorm<Eigen::Infinity>() <= 1e-10);
  }
}

TEST_CASE("LS residual beats random parameter probes") {
  std::mt19937_64 rng(47);
  std::normal_distribution<double> d;
  Eigen::MatrixXd psi(60, 4);
  Eigen::VectorXd y(60);
  for (int i = 0; i < 60; ++i) {
    for (int j = 0; j < 4; ++j) psi(i, j) = d(rng);
    y[i] = d(rng);
  }
  const auto res = least_squares(psi, y);
  const double best = (y - psi * res.theta).norm();
  for (int probe = 0; probe < 100; ++probe) {
    Eigen::VectorXd th(4);
    for (int j = 0; j < 4; ++j) th[j] = d(rng);
    CHECK(best <= (y - psi * th).norm() + 1e-12);
  }
}

TEST_CASE("frols finds an exact single-term fit with unit ERR") {
  std::mt19937_64 rng(53);
  Signal u = hysid::test::random_signal(rng, 400);
  Eigen::VectorXd y(400);
  y[0] = 0;
  y[1] = 0;
  for (Eigen::Index k = 1; k < 400; ++k) y[k] = 2.0 * u[k - 1];
  const std::vector<Term> pool = {T("u(k-1)"), T("u(k-2)")};
  auto report = frols_select(pool, u, Signal{y, u.sample_time}, 1);
  REQUIRE(report.selected.size() == 1);
  CHECK(report.selected[0].term == T("u(k-1)"));
  CHECK(report.selected[0].err == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("frols on white noise explains almost nothing") {
  std::mt19937_64 rng(59);
  const Signal u = hysid::test::random_signal(rng, 10000);
  const Signal y = hysid::test::random_signal(rng, 10000);
  const auto pool = generate_term_pool(2, 1, 1, ExclusionRules::all());
  auto report = frols_select(pool, u, y, static_cast<int>(pool.size()));
  CHECK(report.selected.back().cum_err < 0.01);
}

TEST_CASE("frols agrees with the brute-force selection oracle") {
  // greedy selection on arbitrary data must match an independent per-step
  // projection-energy maximizer
  const auto pool = generate_term_pool(2, 1, 2, ExclusionRules::all());
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 12; ++trial) {
    const Signal u = hysid::test::random_signal(rng, 500, 2.0);
    Eigen::VectorXd yv(500);
    yv[0] = 0.0;
    std::normal_distribution<double> d;
    for (Eigen::Index k = 1; k < 500; ++k) {
      yv[k] = 0.6 * yv[k - 1] + 0.3 * u[k - 1] + 0.05 * d(rng);
    }
    const Signal y{yv, u.sample_time};
    const auto data = build_regressor_matrix(pool, u, y);
    const auto oracle = hysid::test::reference_frols(data.psi, data.target, 5);
    auto report = frols_select(pool, u, y, 5);
    REQUIRE(report.selected.size() >= oracle.order.size());
    for (size_t i = 0; i < oracle.order.size(); ++i) {
      CHECK(report.selected[i].term == pool[static_cast<size_t>(oracle.order[i])]);
      CHECK(report.selected[i].err == doctest::Approx(oracle.errs[i]).epsilon(1e-9));
    }
  }
}

TEST_CASE("frols recovers exact structures from noise-free synthetic data") {
  // greedy selection is support-consistent on identifiable instances; the
  // independent oracle screens the random draws for identifiability, the
  // production path must then recover the structure and LS the parameters
  const auto pool = generate_term_pool(3, 1, 2, ExclusionRules::all());
  std::mt19937_64 rng(61);
  std::uniform_int_distribution<size_t> pick(0, pool.size() - 1);
  std::uniform_real_distribution<double> coef(0.2, 0.6), mag(0.05, 0.15), sgn(-1, 1);
  int done = 0, attempts = 0;
  while (done < 20) {
    REQUIRE(++attempts < 400);
    std::vector<Term> structure = {T("y(k-1)")};
    while (structure.size() < 3) {
      const Term& cand = pool[pick(rng)];
      if (cand.is_constant()) continue;
      if (std::find(structure.begin(), structure.end(), cand) != structure.end()) continue;
      structure.push_back(cand);
    }
    Eigen::VectorXd theta(3);
    theta[0] = coef(rng);
    for (int i = 1; i < 3; ++i) theta[i] = mag(rng) * (sgn(rng) > 0 ? 1.0 : -1.0);
    const NarxModel gen = NarxModel::from_terms(structure, theta, 1, 0, 1e-3);
    const Signal u = hysid::test::random_signal(rng, 3000, 2.0);
    Signal y{Eigen::VectorXd(), 1e-3};
    try {
      y = free_run(gen, u, Eigen::VectorXd::Zero(1));
    } catch (const NumericError&) {
      continue;  // unstable draw; take another
    }
    if (y.samples.cwiseAbs().maxCoeff() < 1e-6) continue;  // degenerate output

    const auto data = build_regressor_matrix(pool, u, y);
    const auto oracle = hysid::test::reference_frols(data.psi, data.target, 3);
    std::vector<Term> oracle_terms;
    for (int j : oracle.order) oracle_terms.push_back(pool[static_cast<size_t>(j)]);
    std::sort(oracle_terms.begin(), oracle_terms.end());
    std::vector<Term> sorted_structure = structure;
    std::sort(sorted_structure.begin(), sorted_structure.end());
    if (oracle_terms != sorted_structure) continue;  // not identifiable by greedy search

    auto report = frols_select(pool, u, y, 3);
    REQUIRE(report.selected.size() == 3);
    std::vector<Term> found;
    for (const auto& s : report.selected) found.push_back(s.term);
    std::sort(found.begin(), found.end());
    CHECK(found == sorted_structure);

    // parameters recovered to 1e-8 relative
    const auto sdata = build_regressor_matrix(structure, u, y);
    const auto est = least_squares(sdata.psi, sdata.target);
    for (size_t i = 0; i < structure.size(); ++i) {
      const int gi = gen.term_index(structure[i]);
      REQUIRE(gi >= 0);
      CHECK(est.theta[static_cast<Eigen::Index>(i)] ==
            doctest::Approx(gen.theta[gi]).epsilon(1e-8));
    }
    ++done;
  }
}

TEST_CASE("degenerate candidates are skipped with a note") {
  // constant input makes every phi-bearing column identically zero
  const std::vector<Term> pool = {T("y(k-1)"), T("phi1(k-1)")};
  const Signal u{Eigen::VectorXd::Constant(200, 1.0), 1.0};
  Eigen::VectorXd y(200);
  y[0] = 1.0;
  for (int k = 1; k < 200; ++k) y[k] = 0.9 * y[k - 1] + 0.01;
  auto report = frols_select(pool, u, Signal{y, 1.0}, 2);
  CHECK(report.selected.size() == 1);
  REQUIRE_FALSE(report.notes.empty());
  CHECK(report.notes.front().find("degenerate") != std::string::npos);
}

TEST_CASE("forced terms enter first and must exist in the pool") {
  std::mt19937_64 rng(67);
  const Signal u = hysid::test::smooth_signal(rng, 800, 10.0);
  Eigen::VectorXd y(800);
  y[0] = y[1] = 0.0;
  for (Eigen::Index k = 1; k < 800; ++k) y[k] = 0.9 * y[k - 1] + 0.5 * u[k - 1];
  const auto pool = generate_term_pool(2, 1, 1, ExclusionRules::all());
  auto report = frols_select(pool, u, Signal{y, u.sample_time}, 3, {T("phi1(k-1)")});
  CHECK(report.selected[0].term == T("phi1(k-1)"));
  CHECK_THROWS_AS(frols_select(pool, u, Signal{y, u.sample_time}, 3, {T("u(k-2)")}),
                  ConfigError);
}

TEST_CASE("aic picks the knee of a synthetic report") {
  SelectionReport report;
  report.n_rows = 5000;
  report.target_energy = 1.0;
  double cum = 0.0;
  const double steps[] = {0.9, 0.06, 0.02, 0.01, 0.005, 0.004, 1e-9, 1e-10, 1e-11, 1e-12};
  for (int i = 0; i < 10; ++i) {
    cum += steps[i];
    report.selected.push_back({Term{}, steps[i], cum});
    const double sigma2 = (1.0 - cum) * report.target_energy / 5000.0;
    report.aic.push_back(5000.0 * std::log(sigma2) + 2.0 * (i + 1));
  }
  CHECK(aic_choose_size(report) == 6);
}

TEST_CASE("aic boundary cases") {
  SelectionReport single;
  single.n_rows = 100;
  single.target_energy = 1.0;
  single.selected.push_back({Term{}, 0.5, 0.5});
  single.aic.push_back(-10.0);
  CHECK(aic_choose_size(single) == 1);

  SelectionReport falling;
  falling.n_rows = 100;
  falling.target_energy = 1.0;
  for (int i = 0; i < 5; ++i) {
    falling.selected.push_back({Term{}, 0.1, 0.1 * (i + 1)});
    falling.aic.push_back(-10.0 * (i + 1));
  }
  CHECK(aic_choose_size(falling) == 5);
  REQUIRE_FALSE(falling.notes.empty());
  CHECK(falling.notes.back().find("strictly decreasing") != std::string::npos);
}

TEST_CASE("cumulative ERR stays within [0, 1]") {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 10; ++trial) {
    const Signal u = hysid::test::smooth_signal(rng, 600, 20.0);
    const Signal w = hysid::test::random_signal(rng, 600, 0.3);
    Eigen::VectorXd y(600);
    y[0] = 0.0;
    for (Eigen::Index k = 1; k < 600; ++k) y[k] = 0.8 * y[k - 1] + u[k - 1] + w[k];
    const auto pool = generate_term_pool(2, 1, 1, ExclusionRules::all());
    auto report = frols_select(pool, u, Signal{y, u.sample_time},
                               static_cast<int>(pool.size()));
    double prev = 0.0;
    for (const auto& s : report.selected) {
      CHECK(s.err >= 0.0);
      CHECK(s.cum_err >= prev);
      prev = s.cum_err;
    }
    CHECK(prev <= 1.0 + 1e-9);
  }
}
