#include <gtest/gtest.h>

#include <random>
#include <set>

#include "chainorder/face_lattice.hpp"
#include "chainorder/polytope.hpp"
#include "oracles.hpp"

using namespace chainorder;

namespace {

Poset antichain(int n) {
    std::vector<std::string> ids;
    for (int i = 0; i < n; ++i) ids.push_back("a" + std::to_string(i));
    return Poset::make(ids, {});
}

Poset chain(int n) {
    std::vector<std::string> ids;
    std::vector<std::pair<int, int>> covers;
    for (int i = 0; i < n; ++i) ids.push_back("c" + std::to_string(i));
    for (int i = 0; i + 1 < n; ++i) covers.emplace_back(i, i + 1);
    return Poset::make(ids, covers);
}

std::set<LinearRow> row_set(const std::vector<LinearRow>& rows) { return {rows.begin(), rows.end()}; }

VRep exact_vertices(const HRep& h) {
    VRep v;
    for (const auto& p : vertex_enum_exact(h)) {
        EXPECT_TRUE(p.integral());
        v.vertices.push_back(p.num);
    }
    return v.canonicalize();
}

}  // namespace

TEST(OrderPolytope, AntichainIsCube) {
    auto dd = order_polytope_dd(antichain(3));
    EXPECT_EQ(dd.vrep.size(), 8U);
    EXPECT_EQ(dd.hrep.ineqs.size(), 6U);
}

TEST(OrderPolytope, ChainIsSimplex) {
    for (int n = 1; n <= 6; ++n) {
        auto dd = order_polytope_dd(chain(n));
        EXPECT_EQ(dd.vrep.size(), static_cast<std::size_t>(n + 1));
        EXPECT_EQ(dd.hrep.ineqs.size(), static_cast<std::size_t>(n + 1));
    }
}

TEST(OrderPolytope, TwoTwoThenChainVertexCount) {
    EXPECT_EQ(order_polytope_dd(make_maximal_ranked(Tau{{2, 2, 1, 1, 1, 1, 1, 1}})).vrep.size(), 13U);
}

TEST(ChainPolytope, Examples) {
    auto cube = chain_polytope_dd(antichain(3));
    EXPECT_EQ(cube.vrep, order_polytope_dd(antichain(3)).vrep);
    auto tri = chain_polytope_dd(chain(2));
    EXPECT_EQ(tri.vrep.vertices, (std::vector<Point>{{0, 0}, {0, 1}, {1, 0}}));
    EXPECT_EQ(tri.hrep.ineqs.size(), 3U);
    auto c5 = chain_polytope_dd(make_maximal_ranked(Tau{{2, 2, 2, 2, 2}}));
    EXPECT_EQ(c5.vrep.size(), 16U);
    EXPECT_EQ(c5.hrep.ineqs.size(), 42U);
}

TEST(ChainOrderHRep, TwoTwoFamilies) {
    Tau tau{{2, 2}};
    auto h0 = chain_order_hrep(tau, 0);
    EXPECT_EQ(h0.ineqs.size(), 8U);
    auto h2 = chain_order_hrep(tau, 2);
    EXPECT_EQ(h2.ineqs.size(), 8U);
    auto h1 = chain_order_hrep(tau, 1);
    ASSERT_EQ(h1.ineqs.size(), 8U);
    int nonneg = 0, chains = 0, tops = 0;
    for (const auto& r : h1.ineqs) {
        int pos = 0, neg = 0;
        for (auto c : r.coeffs) pos += c > 0, neg += c < 0;
        if (pos == 0 && neg == 1 && r.rhs == 0) ++nonneg;
        else if (pos == 1 && neg == 1 && r.rhs == 0) ++chains;
        else if (pos == 1 && neg == 0 && r.rhs == 1) ++tops;
    }
    EXPECT_EQ(nonneg, 2);
    EXPECT_EQ(chains, 4);
    EXPECT_EQ(tops, 2);
    EXPECT_THROW(chain_order_hrep(tau, 3), std::invalid_argument);
    EXPECT_THROW(chain_order_hrep(tau, -1), std::invalid_argument);
}

TEST(ChainOrderHRep, BoundaryCasesMatchOrderAndChainPolytopes) {
    for (const auto& tau : oracle::compositions_up_to(7)) {
        auto p = make_maximal_ranked(tau);
        EXPECT_EQ(row_set(chain_order_hrep(tau, 0).ineqs), row_set(order_polytope_dd(p).hrep.ineqs)) << tau.to_string();
        EXPECT_EQ(row_set(chain_order_hrep(tau, tau.length()).ineqs), row_set(chain_polytope_dd(p).hrep.ineqs))
            << tau.to_string();
    }
}

TEST(ChainOrderHRep, RowsAreUnitCoefficientAndDistinct) {
    for (const auto& tau : oracle::compositions_up_to(6))
        for (int k = 0; k <= tau.length(); ++k) {
            auto h = chain_order_hrep(tau, k);
            EXPECT_EQ(row_set(h.ineqs).size(), h.ineqs.size());
            for (const auto& r : h.ineqs)
                for (auto c : r.coeffs) EXPECT_TRUE(c >= -1 && c <= 1);
        }
}

TEST(ChainOrderHRep, RowBudget) {
    EXPECT_THROW(chain_order_hrep(Tau{{10, 10, 10}}, 2, 500), BudgetExceeded);
}

TEST(ZeroOneVertices, Examples) {
    auto cube = order_polytope_dd(antichain(3)).hrep;
    EXPECT_EQ(zero_one_vertices(cube).size(), 8U);
    auto tri = chain_polytope_dd(chain(2)).hrep;
    EXPECT_EQ(zero_one_vertices(tri).vertices, (std::vector<Point>{{0, 0}, {0, 1}, {1, 0}}));
    EXPECT_EQ(zero_one_vertices(chain_order_hrep(Tau{{2, 2}}, 1)).size(), 7U);
}

TEST(ZeroOneVertices, Budget) {
    HRep h;
    for (int i = 0; i < 31; ++i) h.vars.push_back("x" + std::to_string(i));
    EXPECT_THROW(zero_one_vertices(h), BudgetExceeded);
    HRep small;
    for (int i = 0; i < 12; ++i) small.vars.push_back("x" + std::to_string(i));
    EXPECT_THROW(zero_one_vertices(small, 100), BudgetExceeded);
}

TEST(ZeroOneVertices, SkipsNonVertexPoints) {
    // 0 <= x, y and x + y <= 2: (1,0) and (1,1) are 0/1 points but not vertices.
    HRep h{{"x", "y"}, {{{-1, 0}, 0}, {{0, -1}, 0}, {{1, 1}, 2}}, {}};
    EXPECT_EQ(zero_one_vertices(h).vertices, (std::vector<Point>{{0, 0}}));
    EXPECT_EQ(vertex_enum_exact(h).size(), 3U);
}

TEST(VertexEnumExact, Examples) {
    HRep square{{"x", "y"}, {{{-1, 0}, 0}, {{0, -1}, 0}, {{1, 0}, 1}, {{0, 1}, 1}}, {}};
    auto pts = vertex_enum_exact(square);
    EXPECT_EQ(pts.size(), 4U);
    for (const auto& p : pts) EXPECT_TRUE(p.integral());
    EXPECT_EQ(exact_vertices(order_polytope_dd(chain(2)).hrep).vertices, (std::vector<Point>{{0, 0}, {0, 1}, {1, 1}}));
    auto h = chain_order_hrep(Tau{{2, 1}}, 1);
    EXPECT_EQ(exact_vertices(h), zero_one_vertices(h));
}

TEST(VertexEnumExact, FractionalVertex) {
    // 2x <= 1, 2y <= 1, x, y >= 0: vertices have halves.
    HRep h{{"x", "y"}, {{{-1, 0}, 0}, {{0, -1}, 0}, {{2, 0}, 1}, {{0, 2}, 1}}, {}};
    auto pts = vertex_enum_exact(h);
    ASSERT_EQ(pts.size(), 4U);
    EXPECT_EQ(pts.back().den, 2);
}

TEST(VertexEnumExact, EquationsAndBudget) {
    // x + y = 1, x, y >= 0: a segment.
    HRep h{{"x", "y"}, {{{-1, 0}, 0}, {{0, -1}, 0}}, {{{1, 1}, 1}}};
    EXPECT_EQ(vertex_enum_exact(h).size(), 2U);
    EXPECT_THROW(vertex_enum_exact(chain_order_hrep(Tau{{3, 3, 3, 3}}, 2), 1000), BudgetExceeded);
}

TEST(VertexEnumExact, AgreesWithZeroOneOnSmallChainOrder) {
    for (const auto& tau : oracle::compositions_up_to(5))
        for (int k = 0; k <= tau.length(); ++k) {
            auto h = chain_order_hrep(tau, k);
            EXPECT_EQ(exact_vertices(h), zero_one_vertices(h)) << tau.to_string() << " k=" << k;
        }
}

TEST(DoubleDescription, VerticesSatisfyRowsAndRowsAreFacets) {
    for (const auto& tau : oracle::compositions_up_to(6))
        for (int k = 0; k <= tau.length(); ++k) {
            auto h = chain_order_hrep(tau, k);
            auto v = zero_one_vertices(h);
            for (const auto& x : v.vertices) EXPECT_TRUE(h.contains(x));
            EXPECT_TRUE(non_facet_rows(v, h).empty()) << tau.to_string() << " k=" << k;
        }
}

TEST(LatticePoints, Examples) {
    EXPECT_EQ(lattice_point_count(order_polytope_dd(chain(2)).hrep, 1), 3U);
    EXPECT_EQ(lattice_point_count(chain_polytope_dd(chain(2)).hrep, 2), 6U);
    auto p = make_maximal_ranked(Tau{{2, 2}});
    EXPECT_EQ(lattice_point_count(order_polytope_dd(p).hrep, 2), lattice_point_count(chain_polytope_dd(p).hrep, 2));
    EXPECT_THROW(lattice_point_count(order_polytope_dd(p).hrep, 0), std::invalid_argument);
    EXPECT_THROW(lattice_point_count(order_polytope_dd(antichain(12)).hrep, 4, 1000), BudgetExceeded);
}

TEST(LatticePoints, OrderPolytopeCountsMonotoneMaps) {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 30; ++i) {
        auto p = random_poset(1 + static_cast<int>(rng() % 6), 0.4, rng());
        for (int t = 1; t <= 3; ++t)
            EXPECT_EQ(lattice_point_count(order_polytope_dd(p).hrep, t), oracle::monotone_maps(p, t));
    }
}

TEST(Stanley, VertexAndLatticePointCountsAgree) {
    std::mt19937_64 rng(99);
    std::vector<Poset> corpus;
    for (const auto& tau : oracle::compositions_up_to(6)) corpus.push_back(make_maximal_ranked(tau));
    for (int i = 0; i < 40; ++i) corpus.push_back(random_poset(1 + static_cast<int>(rng() % 7), 0.35, rng()));
    for (const auto& p : corpus) {
        auto o = order_polytope_dd(p), c = chain_polytope_dd(p);
        const auto antichains = oracle::antichain_count(p);
        EXPECT_EQ(o.vrep.size(), antichains);
        EXPECT_EQ(c.vrep.size(), antichains);
        for (int t = 1; t <= 2; ++t) EXPECT_EQ(lattice_point_count(o.hrep, t), lattice_point_count(c.hrep, t));
    }
}

TEST(ChainPolytope, DependsOnlyOnComparabilityGraph) {
    // A poset and its dual share the comparability graph.
    std::mt19937_64 rng(8);
    for (int i = 0; i < 20; ++i) {
        auto p = random_poset(1 + static_cast<int>(rng() % 7), 0.4, rng());
        std::vector<std::pair<int, int>> flipped;
        for (auto [a, b] : p.covers()) flipped.emplace_back(b, a);
        auto dual = Poset::make(p.elements(), flipped);
        EXPECT_EQ(chain_polytope_dd(p).vrep, chain_polytope_dd(dual).vrep);
    }
}
