#pragma once

#include "darkmode.hpp"
#include "errors.hpp"
#include "network.hpp"
#include "spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

namespace dmlab {

// One cavity feeding the first site of two nearest-neighbour mechanical chains.
struct ChainSpec {
    int N_l = 1;
    int N_r = 1;
    double omega_m = 1.0;
    double eta = 0.2;
    double g_l1 = 0.2;
    double g_r1 = 0.2;
    double delta1 = 1.0;
    double kappa = 0.2;
    double gamma = 1e-5;
    double nbar = 1000.0;
};

struct ChainNetwork {
    NetworkSpec spec;          // b order: left chain sites 1..N_l, then right chain sites 1..N_r
    RVector closed_form_left;  // ascending
    RVector closed_form_right; // ascending
};

// omega_m + 2 eta cos(n pi / (N+1)), n = 1..N, returned ascending.
inline RVector chain_frequencies(int n, double omega_m, double eta) {
    RVector w(n);
    for (int k = 1; k <= n; ++k)
        w(k - 1) = omega_m + 2.0 * eta * std::cos(k * std::numbers::pi / (n + 1));
    std::sort(w.data(), w.data() + w.size());
    return w;
}

inline NetworkSpec single_chain_network(int n, double omega_m, double eta) {
    if (n < 1) throw InvalidSpec("chain length must be >= 1");
    NetworkSpec s = NetworkSpec::zeros(1, n);
    s.omega.setConstant(omega_m);
    for (int j = 0; j + 1 < n; ++j) s.set_eta(j, j + 1, eta);
    return s;
}

inline ChainNetwork build_chain_network(const ChainSpec& c) {
    if (c.N_l < 1 || c.N_r < 1) throw InvalidSpec("chain lengths must be >= 1");
    const Index N = c.N_l + c.N_r;
    NetworkSpec s = NetworkSpec::zeros(1, N);
    s.delta(0) = c.delta1;
    s.kappa(0) = c.kappa;
    s.omega.setConstant(c.omega_m);
    s.gamma.setConstant(c.gamma);
    s.nbar.setConstant(c.nbar);
    for (int j = 0; j + 1 < c.N_l; ++j) s.set_eta(j, j + 1, c.eta);
    for (int j = 0; j + 1 < c.N_r; ++j) s.set_eta(c.N_l + j, c.N_l + j + 1, c.eta);
    s.g(0, 0) = c.g_l1;
    s.g(0, c.N_l) = c.g_r1;
    ChainNetwork out;
    out.spec = s;
    out.closed_form_left = chain_frequencies(c.N_l, c.omega_m, c.eta);
    out.closed_form_right = chain_frequencies(c.N_r, c.omega_m, c.eta);
    return out;
}

struct ChainPrediction {
    Index dark_count = 0;       // rank-based, from count_dark_modes
    Index predicted = 0;        // coincidences between the two chain spectra
    bool agree = false;
    std::string rationale;
};

// Every normal mode of a chain couples to its end site (sin(n pi/(N+1)) != 0),
// so a dark mode appears exactly once per frequency shared by both chains.
// cos(n pi/(N_l+1)) = cos(n' pi/(N_r+1)) iff n (N_r+1) = n' (N_l+1), which has
// gcd(N_l+1, N_r+1) - 1 solutions.
inline ChainPrediction chain_dark_prediction(const ChainSpec& c, const Tolerances& tol = {}) {
    ChainNetwork net = build_chain_network(c);
    ChainPrediction p;
    p.dark_count = count_dark_modes(to_normal_form(net.spec), tol).dark_count;
    const int a = c.N_l + 1, b = c.N_r + 1;
    const int shared = std::gcd(a, b) - 1;
    p.predicted = (c.eta == 0.0 || (c.g_l1 == 0.0 && c.g_r1 == 0.0)) ? -1 : shared;
    const bool odd_l = c.N_l % 2 == 1, odd_r = c.N_r % 2 == 1;
    std::string kind = odd_l && odd_r ? "both lengths odd: both spectra contain omega_m, so at least one shared frequency"
                       : (odd_l != odd_r) ? "one length odd, one even: omega_m is not shared; other coincidences need gcd(N_l+1, N_r+1) > 1"
                                          : "both lengths even: omega_m absent from both; coincidences need gcd(N_l+1, N_r+1) > 1";
    p.rationale = kind + "; gcd(" + std::to_string(a) + ", " + std::to_string(b) + ") - 1 = " +
                  std::to_string(shared) + " shared frequencies, one dark mode each";
    if (p.predicted < 0) {
        p.predicted = p.dark_count;
        p.rationale = "degenerate chain parameters (eta = 0 or no cavity coupling); rule not applicable";
    }
    p.agree = p.predicted == p.dark_count;
    return p;
}

// Excited state |e> driven to lower levels |g_j> with Rabi amplitudes Omega_j
// and detunings Delta_j.
struct AtomSystem {
    CVector Omega;
    RVector Delta;
};

struct StateReport {
    NetworkSpec mapped;                 // the arrowhead problem handed to the core
    ArrowheadForm form;
    DarkModeReport report;
    std::vector<CVector> dark_states;   // amplitudes over the bare lower states
    std::vector<CVector> bright_states;
};

inline NetworkSpec atom_network(const AtomSystem& at) {
    const Index N = at.Omega.size();
    if (N < 1) throw InvalidSpec("atom system needs at least one lower level");
    if (at.Delta.size() != N) throw DimensionMismatch("atom system: Omega and Delta lengths differ");
    NetworkSpec s = NetworkSpec::zeros(1, N);
    s.delta(0) = 0.0;
    s.omega = -at.Delta;
    s.g.row(0) = at.Omega.transpose();
    return s;
}

inline StateReport analyze_mapped(const NetworkSpec& s, const Tolerances& tol) {
    StateReport r;
    r.mapped = s;
    r.form = to_normal_form(s);
    r.report = count_dark_modes(r.form, tol);
    for (const auto& d : r.report.dark_vectors) r.dark_states.push_back(to_bare_basis(r.form, d));
    for (const auto& b : r.report.bright_vectors) r.bright_states.push_back(to_bare_basis(r.form, b));
    return r;
}

inline StateReport atom_dark_states(const AtomSystem& at, const Tolerances& tol = {}) {
    return analyze_mapped(atom_network(at), tol);
}

// Two two-level atoms sharing M_bath bath modes in the single-excitation sector.
// Bath modes play the type-a role, the atomic excitations |eg>, |ge> type-b.
struct DfsSystem {
    double omega_01 = 1.0;
    double omega_02 = 1.0;
    RVector omega_bath;
    CVector J1;
    CVector J2;
};

inline NetworkSpec dfs_network(const DfsSystem& d) {
    const Index M = d.omega_bath.size();
    if (M < 1) throw InvalidSpec("DFS system needs at least one bath mode");
    if (d.J1.size() != M || d.J2.size() != M) throw DimensionMismatch("DFS system: coupling rows must match the bath size");
    NetworkSpec s = NetworkSpec::zeros(M, 2);
    s.delta = d.omega_bath;
    s.omega << d.omega_01, d.omega_02;
    s.g.col(0) = d.J1;
    s.g.col(1) = d.J2;
    return s;
}

// States are amplitudes over (|eg>, |ge>).
inline StateReport dfs_single_excitation(const DfsSystem& d, const Tolerances& tol = {}) {
    return analyze_mapped(dfs_network(d), tol);
}

}  // namespace dmlab
