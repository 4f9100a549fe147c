#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

#include "crnkit/indep.hpp"
#include "helpers.hpp"

using namespace crnkit;

namespace {

RVec mono(std::size_t m, std::size_t at, long coeff = 1) {
  RVec v(m);
  v[at] = Rational(coeff);
  return v;
}

}  // namespace

TEST_CASE("coordinate graph of a reversible pair is a single vertex") {
  Network net = build_network({"A", "B"}, {mono(2, 0), mono(2, 1)}, {{"R1", 0, 1}, {"R2", 1, 0}});
  CoordinateGraph g = coordinate_graph(net);
  CHECK(g.basis_choice == std::vector<std::size_t>{0});
  CHECK(g.dependent == std::vector<std::size_t>{1});
  CHECK(g.edges.empty());
  CHECK(g.num_components == 1);
  CHECK(g.connected());
  FinestIndependentDecomposition f = finest_independent(net);
  CHECK(f.blocks == std::vector<std::vector<std::size_t>>{{0, 1}});
  CHECK_FALSE(f.nontrivial);
}

TEST_CASE("disjoint reactions split into singleton blocks") {
  Network net = build_network({"A", "B", "C", "D"},
                              {mono(4, 0), mono(4, 1), mono(4, 2), mono(4, 3)},
                              {{"R1", 0, 1}, {"R2", 2, 3}});
  CoordinateGraph g = coordinate_graph(net);
  CHECK(g.basis_choice == std::vector<std::size_t>{0, 1});
  CHECK(g.edges.empty());
  CHECK(g.num_components == 2);
  FinestIndependentDecomposition f = finest_independent(net);
  CHECK(f.blocks == std::vector<std::vector<std::size_t>>{{0}, {1}});
  CHECK(f.nontrivial);
}

TEST_CASE("carbon cycle subnetwork coordinate graph separates r1..r4 from r5..r8") {
  auto model = testhelpers::load_fixture("schmitz_sub.crn");
  CoordinateGraph g = coordinate_graph(model.net);
  CHECK(g.basis_choice == std::vector<std::size_t>{0, 2, 4, 5, 6});
  CHECK(g.dependent == std::vector<std::size_t>{1, 3, 7});
  CHECK(g.num_components == 2);
  CHECK_FALSE(g.connected());

  FinestIndependentDecomposition f = finest_independent(model.net);
  CHECK(f.blocks == std::vector<std::vector<std::size_t>>{{0, 1, 2, 3}, {4, 5, 6, 7}});
  CHECK(f.nontrivial);
  // the finest independent decomposition really is independent
  DecompositionProfile p = profile(model.net, make_decomposition(model.net, f.blocks));
  CHECK(p.independent);
}

TEST_CASE("independent weakly reversible CF-decomposition of the subnetwork") {
  auto model = testhelpers::load_fixture("schmitz_sub.crn");
  IndepWRCFResult res = independent_wr_cf(model.net, model.F);
  REQUIRE(res.outcome == WRCFOutcome::found);
  CHECK(res.blocks == std::vector<std::vector<std::size_t>>{{0, 1, 2, 3}, {4, 5, 6, 7}});
  CHECK(verify_wr_cf(model.net, model.F, res.blocks).ok);
  CHECK(profile(model.net, make_decomposition(model.net, res.blocks)).independent);
}

TEST_CASE("PL-RDK weakly reversible networks coarsen to the trivial decomposition") {
  // mass-action orders: no NF node, so the trivial decomposition qualifies
  auto model = testhelpers::load_fixture("schmitz.crn");
  Matrix f(model.net.num_reactions(), model.net.num_species());
  for (std::size_t q = 0; q < model.net.num_reactions(); ++q) {
    RVec row = model.net.complexes()[model.net.reaction(q).reactant];
    for (std::size_t j = 0; j < row.size(); ++j) f(q, j) = row[j];
  }
  IndepWRCFResult res = independent_wr_cf(model.net, KineticOrderMatrix(f));
  REQUIRE(res.outcome == WRCFOutcome::found);
  CHECK(res.blocks.size() == 1);
}

TEST_CASE("proven absence when no CF-preserving coarsening is independent") {
  // 2A <-> A+B and 2A <-> 2B: both blocks span the same one-dimensional
  // subspace, and merging them would mix the CF-subsets at 2A
  std::vector<RVec> cx{{Rational(2), Rational(0)},
                       {Rational(1), Rational(1)},
                       {Rational(0), Rational(2)}};
  Network net = build_network({"X1", "X2"}, cx,
                              {{"R1", 0, 1}, {"R2", 1, 0}, {"R3", 0, 2}, {"R4", 2, 0}});
  Matrix f(4, 2);
  f(0, 0) = Rational(1);
  f(1, 0) = Rational(1);
  f(1, 1) = Rational(1);
  f(2, 0) = Rational(3);
  f(3, 1) = Rational(2);
  KineticOrderMatrix F(f);

  WRCFResult base = wr_cf_search(net, F, SearchMode::exhaustive);
  REQUIRE(base.outcome == WRCFOutcome::found);
  REQUIRE(base.blocks == std::vector<std::vector<std::size_t>>{{0, 1}, {2, 3}});
  CHECK_FALSE(profile(net, make_decomposition(net, base.blocks)).independent);

  IndepWRCFResult res = independent_wr_cf(net, F);
  CHECK(res.outcome == WRCFOutcome::not_found_proven);
  CHECK(res.reason.find("coarsening") != std::string::npos);
}

TEST_CASE("no weakly reversible CF-decomposition implies no independent one") {
  auto model = testhelpers::load_fixture("example6.crn");
  IndepWRCFResult res = independent_wr_cf(model.net, model.F);
  CHECK(res.outcome == WRCFOutcome::not_found_proven);
}

TEST_CASE("finest independent decomposition properties on random networks") {
  std::mt19937_64 rng(13579);
  int nontrivial_seen = 0;
  for (int trial = 0; trial < 100; ++trial) {
    Network net = testhelpers::random_general_network(rng, 4, 8);
    CoordinateGraph g = coordinate_graph(net);
    FinestIndependentDecomposition f = finest_independent(net);

    // valid decomposition and independent
    Decomposition d = make_decomposition(net, f.blocks);
    CHECK(profile(net, d).independent);
    CHECK(f.nontrivial == (f.blocks.size() > 1));
    CHECK(f.nontrivial == !g.connected());
    if (f.nontrivial) ++nontrivial_seen;

    // every independent 2-block decomposition is a coarsening of the finest
    const std::size_t r = net.num_reactions();
    if (r >= 2 && r <= 8) {
      for (std::size_t mask = 1; mask + 1 < (1u << r); ++mask) {
        std::vector<std::size_t> a, b;
        for (std::size_t q = 0; q < r; ++q)
          (mask >> q & 1 ? a : b).push_back(q);
        Decomposition two = make_decomposition(net, {a, b});
        if (!profile(net, two).independent) continue;
        CHECK(is_coarsening(d, two));
      }
    }
  }
  CHECK(nontrivial_seen > 0);
}
