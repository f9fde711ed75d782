#include "support.hpp"

#include <gtest/gtest.h>

#include <numeric>
#include <set>

using namespace dmtest;

TEST(Enumerate, ConnectedTopologyCounts) {
    EXPECT_EQ(enumerate_configs(1).size(), 1u);
    EXPECT_EQ(enumerate_configs(2).size(), 3u);
    EXPECT_EQ(enumerate_configs(3).size(), 11u);
    EXPECT_EQ(enumerate_configs(4).size(), 58u);
}

TEST(Enumerate, SingleResonatorIsOneEdge) {
    auto c = enumerate_configs(1);
    EXPECT_EQ(c[0].mask, 1u);
    EXPECT_EQ(c[0].encoding(), "1|");
}

TEST(Enumerate, RowsAreCanonicalConnectedAndDistinct) {
    for (int n = 1; n <= 5; ++n) {
        auto cs = enumerate_configs(n);
        std::set<std::uint32_t> seen;
        for (std::size_t i = 0; i < cs.size(); ++i) {
            EXPECT_TRUE(cs[i].connected());
            EXPECT_EQ(canonicalize(cs[i]), cs[i]);
            EXPECT_TRUE(seen.insert(cs[i].mask).second);
            if (i) {
                bool ordered = cs[i - 1].edge_count() > cs[i].edge_count() ||
                               (cs[i - 1].edge_count() == cs[i].edge_count() && cs[i - 1].mask < cs[i].mask);
                EXPECT_TRUE(ordered);
            }
        }
    }
}

TEST(Enumerate, FullyConnectedComesFirst) {
    auto cs = enumerate_configs(4);
    EXPECT_EQ(cs.front().edge_count(), 10);
    EXPECT_EQ(cs.front().encoding(), "1111|111111");
    EXPECT_EQ(cs.back().edge_count(), 4);
}

TEST(Enumerate, EdgeBitLayout) {
    ConfigGraph g{4, 0};
    g.set_edge(ConfigGraph::phonon_edge_index(4, 0, 1));
    g.set_edge(0);
    EXPECT_EQ(g.encoding(), "1000|100000");
    EXPECT_TRUE(g.has_phonon(1, 0));
    EXPECT_EQ(ConfigGraph::phonon_edge_index(4, 2, 3), 9);
    EXPECT_FALSE(g.connected());
}

TEST(Enumerate, RejectsBadSizes) {
    EXPECT_THROW(enumerate_configs(0), PreconditionViolated);
    EXPECT_THROW(enumerate_configs(7), TooLarge);
}

TEST(Canonical, IdempotentAndPermutationInvariant) {
    Rng r(211);
    for (int t = 0; t < 300; ++t) {
        int n = r.integer(1, 5);
        ConfigGraph g{n, static_cast<std::uint32_t>(r.integer(0, (1 << ConfigGraph::edge_total(n)) - 1))};
        ConfigGraph c = canonicalize(g);
        EXPECT_EQ(canonicalize(c), c);
        std::vector<int> sigma(static_cast<std::size_t>(n));
        std::iota(sigma.begin(), sigma.end(), 0);
        std::shuffle(sigma.begin(), sigma.end(), r.eng);
        ConfigGraph h = relabel(g, sigma);
        EXPECT_EQ(h.edge_count(), g.edge_count());
        EXPECT_EQ(canonicalize(h), c);
        EXPECT_LE(c.mask, g.mask);
    }
}

TEST(Canonical, RelabelMovesEdges) {
    ConfigGraph g{3, 0};
    g.set_edge(0);                                       // c-m1
    g.set_edge(ConfigGraph::phonon_edge_index(3, 0, 2)); // m1-m3
    ConfigGraph h = relabel(g, {2, 1, 0});               // m1 <-> m3
    EXPECT_TRUE(h.has_optomech(2));
    EXPECT_TRUE(h.has_phonon(2, 0));
    EXPECT_FALSE(h.has_optomech(0));
}

TEST(Canonical, DarkCountSurvivesRelabelling) {
    Rng r(223);
    for (int n = 2; n <= 4; ++n)
        for (const auto& c : enumerate_configs(n)) {
            std::vector<int> sigma(static_cast<std::size_t>(n));
            std::iota(sigma.begin(), sigma.end(), 0);
            std::shuffle(sigma.begin(), sigma.end(), r.eng);
            ConfigParams p;
            EXPECT_EQ(count_dark_modes(instantiate(c, p)).dark_count,
                      count_dark_modes(instantiate(relabel(c, sigma), p)).dark_count)
                << c.encoding();
        }
}

TEST(Instantiate, PlacesCouplingsOnPresentEdges) {
    ConfigGraph g{3, 0};
    g.set_edge(1);
    g.set_edge(ConfigGraph::phonon_edge_index(3, 0, 1));
    g.set_edge(ConfigGraph::phonon_edge_index(3, 1, 2));
    ConfigParams p;
    p.g = 0.2;
    p.eta = 0.05;
    NetworkSpec s = instantiate(g, p);
    EXPECT_TRUE(validate_spec(s).ok());
    EXPECT_EQ(s.g(0, 0), 0.0);
    EXPECT_EQ(s.g(0, 1), 0.2);
    EXPECT_EQ(s.eta(0, 1), 0.05);
    EXPECT_EQ(s.eta(2, 1), 0.05);
    EXPECT_EQ(s.eta(0, 2), 0.0);
    EXPECT_EQ(s.omega, RVector::Constant(3, 1.0));
    EXPECT_EQ(s.kappa(0), 0.1);
}

TEST(Verdicts, ThreeResonatorTableIsConsistent) {
    auto rows = table_of_verdicts(3, VerdictScan::standard(), 4);
    ASSERT_EQ(rows.size(), 11u);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        EXPECT_EQ(rows[i].id, static_cast<int>(i + 1));
        EXPECT_EQ(rows[i].unstable_points, 0);
        // A dark mode always blocks simultaneous cooling.
        if (rows[i].dark_count > 0) {
            EXPECT_FALSE(rows[i].cooled) << rows[i].config.encoding();
        }
    }
}

TEST(Verdicts, ThreadCountDoesNotChangeResults) {
    VerdictScan scan = VerdictScan::standard();
    scan.kappa_grid = {0.05, 0.2};
    scan.delta_grid = {1.0};
    auto a = table_of_verdicts(3, scan, 1);
    auto b = table_of_verdicts(3, scan, 3);
    EXPECT_EQ(verdicts_csv(a), verdicts_csv(b));
}
