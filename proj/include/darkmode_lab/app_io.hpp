#pragma once

#include "applications.hpp"
#include "spec_io.hpp"

#include <string>

namespace dmlab {

inline ChainSpec chain_from_json(const Json& j) {
    using namespace jsonio;
    if (!j.is_object()) throw ParseError("chain spec must be a JSON object");
    reject_unknown_keys(j, {"N_l", "N_r", "omega_m", "eta", "g_l1", "g_r1", "delta1", "kappa", "gamma", "nbar"},
                        "chain spec");
    ChainSpec c;
    c.N_l = static_cast<int>(count_from_json(j, "N_l"));
    c.N_r = static_cast<int>(count_from_json(j, "N_r"));
    auto opt = [&](const char* key, double& slot) {
        if (j.contains(key)) slot = real_from_json(j[key], key);
    };
    opt("omega_m", c.omega_m);
    opt("eta", c.eta);
    opt("g_l1", c.g_l1);
    opt("g_r1", c.g_r1);
    opt("delta1", c.delta1);
    opt("kappa", c.kappa);
    opt("gamma", c.gamma);
    opt("nbar", c.nbar);
    if (c.N_l < 1 || c.N_r < 1) throw InvalidSpec("chain lengths must be >= 1");
    return c;
}

inline AtomSystem atoms_from_json(const Json& j) {
    using namespace jsonio;
    if (!j.is_object()) throw ParseError("atom system must be a JSON object");
    reject_unknown_keys(j, {"Omega", "Delta"}, "atom system");
    AtomSystem a;
    a.Omega = cvector_from_json(require_field(j, "Omega"), "Omega");
    a.Delta = rvector_from_json(require_field(j, "Delta"), "Delta");
    if (a.Omega.size() != a.Delta.size()) throw DimensionMismatch("Omega and Delta must have the same length");
    return a;
}

inline DfsSystem dfs_from_json(const Json& j) {
    using namespace jsonio;
    if (!j.is_object()) throw ParseError("DFS system must be a JSON object");
    reject_unknown_keys(j, {"omega_01", "omega_02", "omega_bath", "J1", "J2"}, "DFS system");
    DfsSystem d;
    d.omega_01 = real_from_json(require_field(j, "omega_01"), "omega_01");
    d.omega_02 = real_from_json(require_field(j, "omega_02"), "omega_02");
    d.omega_bath = rvector_from_json(require_field(j, "omega_bath"), "omega_bath");
    d.J1 = cvector_from_json(require_field(j, "J1"), "J1");
    d.J2 = cvector_from_json(require_field(j, "J2"), "J2");
    if (d.J1.size() != d.omega_bath.size() || d.J2.size() != d.omega_bath.size())
        throw DimensionMismatch("J1 and J2 must have one entry per bath mode");
    return d;
}

}  // namespace dmlab
