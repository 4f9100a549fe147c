#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "crnkit/equilibria.hpp"
#include "crnkit/indep.hpp"
#include "helpers.hpp"

using namespace crnkit;

namespace {

KineticOrderMatrix block_orders(const KineticOrderMatrix& F, const std::vector<std::size_t>& idx) {
  Matrix f(idx.size(), F.num_species());
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = 0; j < F.num_species(); ++j) f(i, j) = F.matrix()(idx[i], j);
  return KineticOrderMatrix(f);
}

std::vector<std::optional<LPCertificate>> certify_blocks(const Network& net,
                                                         const KineticOrderMatrix& F,
                                                         const Decomposition& d) {
  std::vector<std::optional<LPCertificate>> certs;
  for (std::size_t b = 0; b < d.num_blocks(); ++b)
    certs.push_back(certify_block_plp(d.subnetworks()[b], block_orders(F, d.blocks()[b])));
  return certs;
}

}  // namespace

TEST_CASE("block certificates for the carbon cycle subnetwork") {
  auto model = testhelpers::load_fixture("schmitz_sub.crn");
  Decomposition d = make_decomposition(model.net, {{0, 1, 2, 3}, {4, 5, 6, 7}});
  auto certs = certify_blocks(model.net, model.F, d);
  REQUIRE(certs[0].has_value());
  REQUIRE(certs[1].has_value());
  CHECK(certs[0]->P.dim() == 2);
  CHECK(certs[1]->P.dim() == 3);
  CHECK_FALSE(certs[0]->justification.empty());
}

TEST_CASE("certification declines non weakly reversible blocks") {
  Network net = build_network({"A", "B", "C"},
                              {{Rational(1), Rational(0), Rational(0)},
                               {Rational(0), Rational(1), Rational(0)},
                               {Rational(0), Rational(0), Rational(1)}},
                              {{"r1", 0, 1}, {"r2", 1, 2}, {"r3", 2, 1}});
  Matrix f(3, 3);
  f(0, 0) = Rational(1);
  f(1, 1) = Rational(1);
  f(2, 2) = Rational(1);
  CHECK_FALSE(certify_block_plp(net, KineticOrderMatrix(f)).has_value());
}

TEST_CASE("certification requires PL-RDK input") {
  auto model = testhelpers::load_fixture("schmitz.crn");
  CHECK_THROWS_AS(certify_block_plp(model.net, model.F), std::invalid_argument);
}

TEST_CASE("main theorem and corollary on the carbon cycle subnetwork") {
  auto model = testhelpers::load_fixture("schmitz_sub.crn");
  Decomposition d = make_decomposition(model.net, {{0, 1, 2, 3}, {4, 5, 6, 7}});
  auto certs = certify_blocks(model.net, model.F, d);

  TheoremReport main = apply_main_theorem(model.net, model.F, d, certs);
  REQUIRE(main.applicable);
  REQUIRE(main.P_E.has_value());
  CHECK(main.P_E->dim() == 5);
  CHECK(main.checklist.size() == 4);
  for (const auto& c : main.checklist) {
    CHECK(c.passed);
    CHECK_FALSE(c.assumed);
  }
  CHECK(main.conclusion.find("dim 5") != std::string::npos);

  TheoremReport cor = corollary_check(model.net, model.F, d, certs);
  REQUIRE(cor.applicable);
  CHECK(cor.P_E->dim() == 5);
  CHECK(orthogonal_complement(*cor.P_E).dim() == 1);
}

TEST_CASE("theorem is not applicable to a dependent decomposition") {
  auto model = testhelpers::load_fixture("schmitz.crn");
  Decomposition d = make_decomposition(
      model.net, {{0, 1, 2, 3}, {4, 5, 6, 7}, {8, 9, 10, 11, 12}});
  auto certs = certify_blocks(model.net, model.F, d);
  TheoremReport rep = apply_main_theorem(model.net, model.F, d, certs);
  CHECK_FALSE(rep.applicable);
  CHECK_FALSE(rep.P_E.has_value());
  TheoremReport cor = corollary_check(model.net, model.F, d, certs);
  CHECK_FALSE(cor.applicable);
}

TEST_CASE("reversible pair equilibrium and parametrization") {
  Network net = build_network({"A", "B"},
                              {{Rational(1), Rational(0)}, {Rational(0), Rational(1)}},
                              {{"r1", 0, 1}, {"r2", 1, 0}});
  Matrix f(2, 2);
  f(0, 0) = Rational(1);
  f(1, 1) = Rational(1);
  KineticOrderMatrix F(f);
  RateVector k{{1.0, 2.0}};

  auto x = find_equilibrium_numeric(net, F, k, {{1.0, 1.0}});
  REQUIRE(x.has_value());
  // k1 x_A = k2 x_B, so x_A / x_B = 2
  CHECK(std::fabs((*x)[0] / (*x)[1] - 2.0) < 1e-8);

  auto cert = certify_block_plp(net, F);
  REQUIRE(cert.has_value());
  CHECK(cert->P.dim() == 1);
  EquilibriaParametrization par(*cert, *x);
  CHECK(par.complement_dim() == 1);
  CHECK(par.membership(*x));
  CHECK(par.membership({2.0, 1.0}));
  CHECK_FALSE(par.membership({1.0, 1.0}));

  std::mt19937_64 rng(17);
  for (int i = 0; i < 20; ++i) {
    std::vector<double> s = par.sample(rng);
    std::vector<double> res = sfrf_eval(net, F, k, s);
    CHECK(numeric::norm2(res) < 1e-9);
  }
}

TEST_CASE("symmetric three-cycle equilibrates on the diagonal") {
  Network net = build_network({"A", "B", "C"},
                              {{Rational(1), Rational(0), Rational(0)},
                               {Rational(0), Rational(1), Rational(0)},
                               {Rational(0), Rational(0), Rational(1)}},
                              {{"r1", 0, 1}, {"r2", 1, 2}, {"r3", 2, 0}});
  Matrix f(3, 3);
  f(0, 0) = Rational(1);
  f(1, 1) = Rational(1);
  f(2, 2) = Rational(1);
  RateVector k{{1.0, 1.0, 1.0}};
  auto x = find_equilibrium_numeric(net, KineticOrderMatrix(f), k, {{0.5, 2.0, 1.0}});
  REQUIRE(x.has_value());
  CHECK(std::fabs((*x)[0] / (*x)[1] - 1.0) < 1e-8);
  CHECK(std::fabs((*x)[1] / (*x)[2] - 1.0) < 1e-8);
}

TEST_CASE("guess handling in the numeric solver") {
  Network net = build_network({"A", "B"},
                              {{Rational(1), Rational(0)}, {Rational(0), Rational(1)}},
                              {{"r1", 0, 1}, {"r2", 1, 0}});
  Matrix f(2, 2);
  f(0, 0) = Rational(1);
  f(1, 1) = Rational(1);
  KineticOrderMatrix F(f);
  RateVector k{{1.0, 1.0}};
  CHECK_FALSE(find_equilibrium_numeric(net, F, k, {{-1.0, 1.0}}).has_value());
  CHECK_FALSE(find_equilibrium_numeric(net, F, k, {}).has_value());
  CHECK_THROWS_AS(find_equilibrium_numeric(net, F, k, {{1.0}}), std::invalid_argument);
}

TEST_CASE("parametrization input validation") {
  Subspace p = Subspace::span(2, {{Rational(1), Rational(-1)}});
  LPCertificate cert(p);
  CHECK_THROWS_AS(EquilibriaParametrization(cert, {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(EquilibriaParametrization(cert, {1.0, -2.0}), std::invalid_argument);
  EquilibriaParametrization par(cert, {1.0, 2.0});
  CHECK_THROWS_AS(par.membership({1.0, -1.0}), std::invalid_argument);
}

TEST_CASE("coset uniqueness on the carbon cycle subnetwork") {
  auto model = testhelpers::load_fixture("schmitz_sub.crn");
  std::mt19937_64 rng(2468);
  std::uniform_real_distribution<double> u(0.5, 2.0);
  RateVector k;
  for (std::size_t q = 0; q < model.net.num_reactions(); ++q) k.k.push_back(u(rng));

  auto x_star = find_equilibrium_numeric(model.net, model.F, k,
                                         {std::vector<double>(model.net.num_species(), 1.0)});
  REQUIRE(x_star.has_value());
  CHECK(numeric::norm2(sfrf_eval(model.net, model.F, k, *x_star)) < 1e-10);

  Decomposition d = make_decomposition(model.net, {{0, 1, 2, 3}, {4, 5, 6, 7}});
  TheoremReport rep = corollary_check(model.net, model.F, d, certify_blocks(model.net, model.F, d));
  REQUIRE(rep.applicable);
  const Subspace& pe = *rep.P_E;

  // perturb within the P_E coset of x*; the coset holds exactly one
  // equilibrium, so re-solving must come back to x*
  auto perturb = [&](std::mt19937_64& r) {
    std::uniform_real_distribution<double> c(-1e-4, 1e-4);
    std::vector<double> x(x_star->size());
    std::vector<double> v(x_star->size(), 0.0);
    for (const auto& row : pe.basis()) {
      double coeff = c(r);
      for (std::size_t j = 0; j < v.size(); ++j) v[j] += coeff * row[j].to_double();
    }
    for (std::size_t j = 0; j < x.size(); ++j) x[j] = (*x_star)[j] * std::exp(v[j]);
    return x;
  };
  auto a = find_equilibrium_numeric(model.net, model.F, k, {perturb(rng)});
  auto b = find_equilibrium_numeric(model.net, model.F, k, {perturb(rng)});
  REQUIRE(a.has_value());
  REQUIRE(b.has_value());
  for (std::size_t j = 0; j < x_star->size(); ++j) {
    CHECK(std::fabs(std::log((*a)[j]) - std::log((*x_star)[j])) < 1e-6);
    // two distinct starts in the same coset reach the same point
    CHECK(std::fabs(std::log((*a)[j]) - std::log((*b)[j])) < 1e-8);
  }
}

TEST_CASE("decomposition equilibria relation on sample points") {
  auto model = testhelpers::load_fixture("schmitz_sub.crn");
  RateVector k;
  k.k.assign(model.net.num_reactions(), 1.0);
  Decomposition d = make_decomposition(model.net, {{0, 1, 2, 3}, {4, 5, 6, 7}});

  auto x_star = find_equilibrium_numeric(model.net, model.F, k,
                                         {std::vector<double>(model.net.num_species(), 1.0)});
  REQUIRE(x_star.has_value());

  TheoremReport rep = corollary_check(model.net, model.F, d, certify_blocks(model.net, model.F, d));
  REQUIRE(rep.applicable);
  LPCertificate cert(*rep.P_E);
  EquilibriaParametrization par(cert, *x_star);

  std::mt19937_64 rng(99);
  std::vector<std::vector<double>> points{*x_star};
  for (int i = 0; i < 5; ++i) points.push_back(par.sample(rng, 0.5));
  points.push_back(std::vector<double>(model.net.num_species(), 2.5));  // generic non-equilibrium
  EquilibriaRelationReport rel = equilibria_relation_check(model.net, model.F, k, d, points);
  CHECK(rel.inclusion_ok);
  CHECK(rel.equality_ok);
}
