#include "support.hpp"

#include <gtest/gtest.h>

using namespace dmtest;

TEST(ParamPaths, ParseAndApply) {
    NetworkSpec s = bench::two_pair_network(0.09, 0.09);
    ParamPath::parse("eta[0][1]").apply(s, 0.05);
    EXPECT_EQ(s.eta(0, 1), 0.05);
    EXPECT_EQ(s.eta(1, 0), 0.05);
    ParamPath::parse("kappa[0]").apply(s, 0.3);
    EXPECT_EQ(s.kappa(0), 0.3);
    ParamPath::parse("g[0][*]").apply(s, 0.2);
    EXPECT_EQ(s.g.row(0), CMatrix::Constant(1, 4, 0.2));
    ParamPath::parse("omega[*]").apply(s, 1.1);
    EXPECT_EQ(s.omega, RVector::Constant(4, 1.1));
    ParamPath::parse("eta[*][*]").apply(s, 0.01);
    EXPECT_EQ(s.eta.diagonal().norm(), 0.0);
    EXPECT_TRUE(validate_spec(s).ok());
    ParamPath::parse("omega_ref").apply(s, 2.0);
    EXPECT_EQ(s.omega_ref, 2.0);
}

TEST(ParamPaths, Rejections) {
    EXPECT_THROW(ParamPath::parse("kappa"), ParseError);
    EXPECT_THROW(ParamPath::parse("eta[0]"), ParseError);
    EXPECT_THROW(ParamPath::parse("M"), ParseError);
    EXPECT_THROW(ParamPath::parse("g[0]["), ParseError);
    NetworkSpec s = bench::two_pair_network(0.09, 0.09);
    EXPECT_THROW(ParamPath::parse("kappa[3]").apply(s, 1.0), DimensionMismatch);
    EXPECT_THROW(ParamPath::parse("eta[1][1]").apply(s, 1.0), InvalidSpec);
}

TEST(SweepPlans, ParseFromJson) {
    SweepPlan p = sweep_plan_from_json(jsonio::parse_text(
        R"({"axes": [{"path": "kappa[0]", "min": 0.01, "max": 1, "count": 3}], "overrides": {"eta[0][1]": 0.05}})", "plan"));
    ASSERT_EQ(p.axes.size(), 1u);
    EXPECT_EQ(p.axes[0].count, 3);
    EXPECT_DOUBLE_EQ(p.axes[0].value(1), 0.505);
    ASSERT_EQ(p.overrides.size(), 1u);
    EXPECT_EQ(p.overrides[0].first, "eta[0][1]");
}

TEST(SweepPlans, RejectBadPlans) {
    auto bad = [](const char* text) { return sweep_plan_from_json(jsonio::parse_text(text, "plan")); };
    EXPECT_THROW(bad(R"({"axes": []})"), ParseError);
    EXPECT_THROW(bad(R"({"axes": [{"path": "kappa[0]", "min": 0, "max": 1, "count": 1}]})"), ParseError);
    EXPECT_THROW(bad(R"({"axes": [{"path": "kappa", "min": 0, "max": 1, "count": 2}]})"), ParseError);
    EXPECT_THROW(bad(R"({"axes": [{"path": "kappa[0]", "min": 0, "max": 1, "count": 2, "step": 1}]})"), ParseError);
    EXPECT_THROW(bad(R"({"plan": 1})"), ParseError);
    EXPECT_NO_THROW(bad(R"({"axes": [{"path": "kappa[0]", "min": 0.1, "max": 0.1, "count": 1}]})"));
}

TEST(Sweeps, SinglePointMatchesCool) {
    NetworkSpec s = bench::two_pair_network(0.05, 0.09);
    SweepPlan p;
    p.axes.push_back({"kappa[0]", 0.1, 0.1, 1});
    auto pts = run_sweep(s, p, {});
    ASSERT_EQ(pts.size(), 1u);
    std::string row = cooling_csv_row(pts[0], s.N);
    std::string cool = cooling_csv_row(evaluate_point(s, {}), s.N);
    EXPECT_EQ(row, "0.1," + cool);
}

TEST(Sweeps, RowMajorOrderAndJobsIndependence) {
    NetworkSpec s = bench::two_pair_network(0.09, 0.09);
    SweepPlan p;
    p.axes.push_back({"eta[0][1]", 0.0, 0.18, 3});
    p.axes.push_back({"kappa[0]", 0.05, 0.2, 4});
    auto a = run_sweep(s, p, {}, 1);
    auto b = run_sweep(s, p, {}, 5);
    ASSERT_EQ(a.size(), 12u);
    EXPECT_EQ(sweep_csv(a, 2, 4), sweep_csv(b, 2, 4));
    EXPECT_DOUBLE_EQ(a[1].params[0], 0.0);
    EXPECT_DOUBLE_EQ(a[1].params[1], 0.1);
    EXPECT_DOUBLE_EQ(a[4].params[0], 0.09);
    // On the equal-hopping line the driven mode stays hot.
    EXPECT_GT(a[5].n_f(0), 1.0);
    EXPECT_EQ(a[5].dark_count, 2);
    EXPECT_EQ(a[9].dark_count, 0);
}

TEST(Sweeps, UnstableRowsAreMarked) {
    NetworkSpec s = bench::cavity_pair_network("full");
    SweepPlan p;
    p.axes.push_back({"kappa[0]", 0.0, 0.1, 2});
    p.overrides.push_back({"gamma[*]", 0.0});
    auto pts = run_sweep(s, p, {});
    EXPECT_FALSE(pts[0].stable);
    std::string row = cooling_csv_row(pts[0], 2);
    EXPECT_NE(row.find("nan"), std::string::npos);
    EXPECT_EQ(cooling_csv_header(2, 2), "param1,param2,stable,n_f_1,n_f_2,dark_count\n");
}

TEST(Reports, FieldOrderIsStable) {
    DarkModeReport r = count_dark_modes(to_normal_form(bench::two_cavity_triangle_network(0.1, 0.1)));
    Json j = to_json(r);
    std::vector<std::string> keys;
    for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
    EXPECT_EQ(keys, (std::vector<std::string>{"M", "N", "tolerances", "groups", "zero_columns", "bright_count",
                                              "dark_count", "dark_vectors", "bright_vectors"}));
    EXPECT_EQ(j["dark_count"], 2);
    EXPECT_EQ(j["zero_columns"], Json::parse("[1, 2]"));
    EXPECT_EQ(j.dump(), to_json(count_dark_modes(to_normal_form(bench::two_cavity_triangle_network(0.1, 0.1)))).dump());
}

TEST(Reports, ValidationJson) {
    NetworkSpec s = NetworkSpec::zeros(1, 2);
    s.eta(0, 1) = 0.1;
    Json j = to_json(validate_spec(s));
    EXPECT_EQ(j["valid"], false);
    EXPECT_EQ(j["violations"].size(), 1u);
}

TEST(Reports, TwelveDigits) {
    EXPECT_EQ(fmt12(1.0 / 3.0), "0.333333333333");
    EXPECT_EQ(fmt12(1000.0), "1000");
}

TEST(AppInputs, ParseAdapters) {
    ChainSpec c = chain_from_json(jsonio::read_file(DMLAB_DOCS_DIR "/specs/chain_2_5.json"));
    EXPECT_EQ(c.N_l, 2);
    EXPECT_EQ(c.N_r, 5);
    AtomSystem a = atoms_from_json(jsonio::read_file(DMLAB_DOCS_DIR "/specs/atom_three_level.json"));
    EXPECT_EQ(a.Omega.size(), 3);
    DfsSystem d = dfs_from_json(jsonio::read_file(DMLAB_DOCS_DIR "/specs/dfs_pair.json"));
    EXPECT_EQ(d.J1.size(), d.omega_bath.size());
}

TEST(AppInputs, SampleSpecsAreValid) {
    for (const char* f : {"two_cavity_triangle", "two_pair", "pendant_chain", "cavity_pair_single_port", "decoupled"}) {
        NetworkSpec s = load_spec(std::string(DMLAB_DOCS_DIR "/specs/") + f + ".json");
        EXPECT_TRUE(validate_spec(s).ok()) << f;
    }
}

// Two cavities, mechanical triangle, grid over (g22, g23): each resonator cools
// only on the line where the dark mode avoids it, and is suppressed elsewhere.
TEST(Sweeps, TwoCavityTriangleCoolingPattern) {
    NetworkSpec s = load_spec(DMLAB_DOCS_DIR "/specs/two_cavity_triangle.json");
    SweepPlan p;
    p.axes.push_back({"g[1][1]", 0.0, 0.2, 5});
    p.axes.push_back({"g[1][2]", 0.0, 0.2, 5});
    auto pts = run_sweep(s, p, {});
    ASSERT_EQ(pts.size(), 25u);
    auto near = [](double a, double b) { return std::abs(a - b) < 1e-12; };
    for (const auto& pt : pts) {
        ASSERT_TRUE(pt.stable);
        const double g22 = pt.params[0], g23 = pt.params[1];
        const bool line1 = near(g22, g23) && !near(g22, 0.1);
        const bool line2 = near(g23, 0.1) && !near(g22, 0.1);
        const bool line3 = near(g22, 0.1) && !near(g23, 0.1);
        // At g22 = g23 = 0.15 the first resonator is only marginally hot at kappa = 0.1.
        const bool cooled1 = pt.n_f(0) < 1.0, cooled2 = pt.n_f(1) < 1.0, cooled3 = pt.n_f(2) < 1.0;
        if (!(line1 && near(g22, 0.15))) {
            EXPECT_EQ(cooled1, line1) << g22 << "," << g23;
        }
        EXPECT_EQ(cooled2, line2) << g22 << "," << g23;
        EXPECT_EQ(cooled3, line3) << g22 << "," << g23;
        EXPECT_EQ(pt.dark_count, near(g22, 0.1) && near(g23, 0.1) ? 2 : 1);
    }
}
