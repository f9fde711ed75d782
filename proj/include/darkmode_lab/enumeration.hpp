#pragma once

#include "darkmode.hpp"
#include "dynamics.hpp"
#include "errors.hpp"
#include "network.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <numeric>
#include <string>
#include <thread>
#include <vector>

namespace dmlab {

// Coupling topology of one cavity c and N mechanical modes m_1..m_N.
// Edge order: c-m_1 .. c-m_N, then m_i-m_j (i<j) lexicographically. The
// first edge is the most significant bit, so comparing masks as integers
// compares the edge strings lexicographically.
struct ConfigGraph {
    int N = 0;
    std::uint32_t mask = 0;

    static int edge_total(int n) { return n + n * (n - 1) / 2; }
    int edges() const { return edge_total(N); }

    static int phonon_edge_index(int n, int i, int j) {
        if (i > j) std::swap(i, j);
        // pairs before row i, then offset within the row
        return n + i * (2 * n - i - 1) / 2 + (j - i - 1);
    }

    std::uint32_t bit(int e) const { return std::uint32_t{1} << (edges() - 1 - e); }
    bool has_edge(int e) const { return mask & bit(e); }
    bool has_optomech(int j) const { return has_edge(j); }
    bool has_phonon(int i, int j) const { return has_edge(phonon_edge_index(N, i, j)); }
    void set_edge(int e) { mask |= bit(e); }
    int edge_count() const { return std::popcount(mask); }

    // "1111|111111": optomech bits, then phonon bits.
    std::string encoding() const {
        std::string s;
        for (int e = 0; e < edges(); ++e) {
            if (e == N) s += '|';
            s += has_edge(e) ? '1' : '0';
        }
        if (edges() == N) s += '|';
        return s;
    }

    bool connected() const {
        std::vector<bool> seen(static_cast<std::size_t>(N + 1), false);
        std::vector<int> stack{0};
        seen[0] = true;
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            for (int v = 0; v <= N; ++v) {
                if (seen[static_cast<std::size_t>(v)] || v == u) continue;
                bool adj;
                if (u == 0) adj = has_optomech(v - 1);
                else if (v == 0) adj = has_optomech(u - 1);
                else adj = has_phonon(u - 1, v - 1);
                if (adj) {
                    seen[static_cast<std::size_t>(v)] = true;
                    stack.push_back(v);
                }
            }
        }
        return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
    }

    bool operator==(const ConfigGraph& o) const { return N == o.N && mask == o.mask; }
};

namespace detail {

// For every relabeling sigma of the mechanical modes, where each edge goes.
inline std::vector<std::vector<int>> edge_permutations(int n) {
    std::vector<int> sigma(static_cast<std::size_t>(n));
    std::iota(sigma.begin(), sigma.end(), 0);
    std::vector<std::vector<int>> out;
    do {
        std::vector<int> map(static_cast<std::size_t>(ConfigGraph::edge_total(n)));
        for (int j = 0; j < n; ++j) map[static_cast<std::size_t>(j)] = sigma[static_cast<std::size_t>(j)];
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                map[static_cast<std::size_t>(ConfigGraph::phonon_edge_index(n, i, j))] =
                    ConfigGraph::phonon_edge_index(n, sigma[static_cast<std::size_t>(i)], sigma[static_cast<std::size_t>(j)]);
        out.push_back(std::move(map));
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    return out;
}

inline std::uint32_t permute_mask(std::uint32_t mask, int edges, const std::vector<int>& map) {
    std::uint32_t out = 0;
    for (int e = 0; e < edges; ++e)
        if (mask & (std::uint32_t{1} << (edges - 1 - e)))
            out |= std::uint32_t{1} << (edges - 1 - map[static_cast<std::size_t>(e)]);
    return out;
}

}  // namespace detail

inline ConfigGraph relabel(const ConfigGraph& g, const std::vector<int>& sigma) {
    if (static_cast<int>(sigma.size()) != g.N) throw DimensionMismatch("relabel: permutation has the wrong length");
    ConfigGraph out{g.N, 0};
    for (int j = 0; j < g.N; ++j)
        if (g.has_optomech(j)) out.set_edge(sigma[static_cast<std::size_t>(j)]);
    for (int i = 0; i < g.N; ++i)
        for (int j = i + 1; j < g.N; ++j)
            if (g.has_phonon(i, j))
                out.set_edge(ConfigGraph::phonon_edge_index(g.N, sigma[static_cast<std::size_t>(i)], sigma[static_cast<std::size_t>(j)]));
    return out;
}

// Minimal edge encoding over all N! relabelings.
inline ConfigGraph canonicalize(const ConfigGraph& g) {
    ConfigGraph best = g;
    for (const auto& map : detail::edge_permutations(g.N))
        best.mask = std::min(best.mask, detail::permute_mask(g.mask, g.edges(), map));
    return best;
}

// Connected topologies up to mechanical relabeling, most edges first, ties by
// canonical encoding.
inline std::vector<ConfigGraph> enumerate_configs(int N) {
    if (N < 1) throw PreconditionViolated("enumerate_configs: N must be >= 1");
    if (N > 6) throw TooLarge("enumerate_configs: N = " + std::to_string(N) + " exceeds the limit of 6");
    const int E = ConfigGraph::edge_total(N);
    const auto perms = detail::edge_permutations(N);
    const std::uint32_t total = std::uint32_t{1} << E;
    std::vector<bool> visited(total, false);
    std::vector<ConfigGraph> out;
    // Scanning masks upward, the first unvisited member of an orbit is its minimum.
    for (std::uint32_t m = 0; m < total; ++m) {
        if (visited[m]) continue;
        ConfigGraph g{N, m};
        if (!g.connected()) continue;
        for (const auto& map : perms) visited[detail::permute_mask(m, E, map)] = true;
        out.push_back(g);
    }
    std::stable_sort(out.begin(), out.end(), [](const ConfigGraph& a, const ConfigGraph& b) {
        if (a.edge_count() != b.edge_count()) return a.edge_count() > b.edge_count();
        return a.mask < b.mask;
    });
    return out;
}

struct ConfigParams {
    double g = 0.1;
    double eta = 0.09;
    double omega_m = 1.0;
    double delta1 = 1.0;
    double kappa = 0.1;
    double gamma = 1e-5;
    double nbar = 1000.0;
};

// Identical mechanical modes: g on every present optomech edge, eta on every
// present phonon edge.
inline NetworkSpec instantiate(const ConfigGraph& c, const ConfigParams& p) {
    NetworkSpec s = NetworkSpec::zeros(1, c.N);
    s.delta(0) = p.delta1;
    s.kappa(0) = p.kappa;
    for (int j = 0; j < c.N; ++j) {
        s.omega(j) = p.omega_m;
        s.gamma(j) = p.gamma;
        s.nbar(j) = p.nbar;
        if (c.has_optomech(j)) s.g(0, j) = p.g;
        for (int jp = j + 1; jp < c.N; ++jp)
            if (c.has_phonon(j, jp)) s.set_eta(j, jp, p.eta);
    }
    return s;
}

struct VerdictScan {
    ConfigParams base;               // g, eta, omega_m, gamma, nbar; kappa/delta1 are the reference point
    std::vector<double> kappa_grid;
    std::vector<double> delta_grid;
    Tolerances tol;

    // Default scan: kappa log-spaced on [0.01, 1], delta1 on [0.8, 1.2].
    static VerdictScan standard() {
        VerdictScan v;
        for (int i = 0; i < 13; ++i) v.kappa_grid.push_back(std::pow(10.0, -2.0 + 2.0 * i / 12.0));
        for (int i = 0; i < 9; ++i) v.delta_grid.push_back(0.8 + 0.05 * i);
        return v;
    }
};

struct ConfigVerdict {
    int id = 0;                      // 1-based position in enumerate_configs order
    ConfigGraph config;
    Index dark_count = 0;
    bool cooled = false;             // some scanned point has every n_f < 1
    double best_max_n_f = 0.0;       // min over the scan of max_j n_f (stable points only)
    double best_kappa = 0.0;
    double best_delta = 0.0;
    bool reference_stable = false;
    RVector reference_n_f;           // at (base.kappa, base.delta1)
    int unstable_points = 0;
};

inline ConfigVerdict evaluate_config(int id, const ConfigGraph& c, const VerdictScan& scan) {
    ConfigVerdict v;
    v.id = id;
    v.config = c;
    v.dark_count = count_dark_modes(to_normal_form(instantiate(c, scan.base)), scan.tol).dark_count;
    CoolingResult ref = final_phonon_numbers(instantiate(c, scan.base));
    v.reference_stable = ref.stable;
    v.reference_n_f = ref.n_f;
    v.best_max_n_f = std::numeric_limits<double>::infinity();
    for (double k : scan.kappa_grid)
        for (double d : scan.delta_grid) {
            ConfigParams p = scan.base;
            p.kappa = k;
            p.delta1 = d;
            CoolingResult r = final_phonon_numbers(instantiate(c, p));
            if (!r.stable) {
                ++v.unstable_points;
                continue;
            }
            double mx = r.n_f.maxCoeff();
            if (mx < v.best_max_n_f) {
                v.best_max_n_f = mx;
                v.best_kappa = k;
                v.best_delta = d;
            }
        }
    v.cooled = v.best_max_n_f < 1.0;
    return v;
}

inline std::vector<ConfigVerdict> table_of_verdicts(int N, const VerdictScan& scan = VerdictScan::standard(),
                                                    unsigned jobs = 1) {
    std::vector<ConfigGraph> configs = enumerate_configs(N);
    std::vector<ConfigVerdict> out(configs.size());
    jobs = std::max(1u, jobs);
    std::vector<std::exception_ptr> errs(jobs);
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < jobs; ++t) {
        pool.emplace_back([&, t] {
            try {
                for (std::size_t i = t; i < configs.size(); i += jobs)
                    out[i] = evaluate_config(static_cast<int>(i + 1), configs[i], scan);
            } catch (...) {
                errs[t] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errs)
        if (e) std::rethrow_exception(e);
    return out;
}

}  // namespace dmlab
