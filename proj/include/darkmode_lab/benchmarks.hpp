#pragma once

#include "network.hpp"

#include <cmath>
#include <string>

namespace dmlab::bench {

// Shared optomechanical defaults: red-sideband drive, high-Q mechanics, warm bath.
struct Defaults {
    double delta = 1.0;
    double kappa = 0.1;
    double gamma = 1e-5;
    double nbar = 1000.0;
};

inline NetworkSpec with_dissipation(NetworkSpec s, const Defaults& d, double kappa) {
    s.delta.setConstant(d.delta);
    s.kappa.setConstant(kappa);
    s.gamma.setConstant(d.gamma);
    s.nbar.setConstant(d.nbar);
    return s;
}

// One cavity, four mechanical modes in two pairs (b1-b2, b3-b4); the cavity
// drives b1 and b3.
inline NetworkSpec two_pair_network(double eta12, double eta34, double kappa = 0.1, double g = 0.1) {
    NetworkSpec s = NetworkSpec::zeros(1, 4);
    s.omega.setConstant(1.0);
    s.set_eta(0, 1, eta12);
    s.set_eta(2, 3, eta34);
    s.g(0, 0) = g;
    s.g(0, 2) = g;
    return with_dissipation(s, {}, kappa);
}

// One cavity driving an isolated mode b1 (tunable omega1) and the end b2 of
// the chain b2-b3-b4.
inline NetworkSpec pendant_chain_network(double omega1, double kappa = 0.1, double eta = 0.09, double g = 0.1) {
    NetworkSpec s = NetworkSpec::zeros(1, 4);
    s.omega << omega1, 1.0, 1.0, 1.0;
    s.set_eta(1, 2, eta);
    s.set_eta(2, 3, eta);
    s.g(0, 0) = g;
    s.g(0, 1) = g;
    return with_dissipation(s, {}, kappa);
}

// Two coupled cavities and three all-to-all coupled mechanical modes. All
// optomechanical couplings fixed at 0.1 except g22 and g23.
inline NetworkSpec two_cavity_triangle_network(double g22, double g23, double kappa = 0.1, double xi = 0.08,
                                               double eta = 0.09) {
    NetworkSpec s = NetworkSpec::zeros(2, 3);
    s.omega.setConstant(1.0);
    s.set_xi(0, 1, xi);
    s.set_eta(0, 1, eta);
    s.set_eta(0, 2, eta);
    s.set_eta(1, 2, eta);
    s.g(0, 0) = s.g(0, 1) = s.g(0, 2) = 0.1;
    s.g(1, 0) = 0.1;
    s.g(1, 1) = g22;
    s.g(1, 2) = g23;
    return with_dissipation(s, {}, kappa);
}

// One cavity, two mechanical modes. Variant "full": everything on;
// "no-hopping": eta12 = 0; "single-port": g12 = 0.
inline NetworkSpec cavity_pair_network(const std::string& variant, double kappa = 0.1, double g = 0.1,
                                       double eta = 0.09) {
    NetworkSpec s = NetworkSpec::zeros(1, 2);
    s.omega.setConstant(1.0);
    s.g(0, 0) = g;
    s.g(0, 1) = g;
    s.set_eta(0, 1, eta);
    if (variant == "no-hopping") s.set_eta(0, 1, 0.0);
    else if (variant == "single-port") s.g(0, 1) = 0.0;
    else if (variant != "full") throw InvalidSpec("unknown cavity_pair_network variant '" + variant + "'");
    return with_dissipation(s, {}, kappa);
}

}  // namespace dmlab::bench
