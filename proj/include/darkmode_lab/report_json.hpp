#pragma once

#include "applications.hpp"
#include "darkmode.hpp"
#include "dynamics.hpp"
#include "enumeration.hpp"
#include "spec_io.hpp"
#include "spectral.hpp"

#include <cstdio>
#include <string>
#include <vector>

namespace dmlab {

// Fixed 12-significant-digit rendering used by every CSV writer.
inline std::string fmt12(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

inline Json to_json(const ValidationReport& r) {
    Json a = Json::array();
    for (const auto& v : r.violations) a.push_back(Json{{"field", v.field}, {"message", v.message}});
    return Json{{"valid", r.ok()}, {"violations", a}};
}

inline Json to_json(const ArrowheadForm& f) {
    using namespace jsonio;
    Json j;
    j["M"] = f.M();
    j["N"] = f.N();
    j["Delta"] = rvector_to_json(f.Delta);
    j["Omega"] = rvector_to_json(f.Omega);
    j["C_AB"] = cmatrix_to_json(f.C_AB);
    j["U_a"] = cmatrix_to_json(f.U_a);
    j["U_b"] = cmatrix_to_json(f.U_b);
    return j;
}

inline Json to_json(const DarkModeReport& r) {
    using namespace jsonio;
    Json j;
    j["M"] = r.M;
    j["N"] = r.N;
    j["tolerances"] = Json{{"deg", r.tolerances.deg}, {"cpl", r.tolerances.cpl}, {"rank", r.tolerances.rank}};
    Json groups = Json::array();
    for (std::size_t g = 0; g < r.partition.size(); ++g) {
        Json members = Json::array();
        for (Index m : r.partition[g].members) members.push_back(m + 1);
        groups.push_back(Json{{"frequency", r.partition[g].frequency}, {"members", members}, {"rank", r.group_ranks[g]}});
    }
    j["groups"] = groups;
    Json zc = Json::array();
    for (Index z : r.zero_columns) zc.push_back(z + 1);
    j["zero_columns"] = zc;
    j["bright_count"] = r.bright_count;
    j["dark_count"] = r.dark_count;
    auto vecs = [](const std::vector<CVector>& vs, const std::vector<Index>& grp) {
        Json a = Json::array();
        for (std::size_t i = 0; i < vs.size(); ++i)
            a.push_back(Json{{"group", grp[i] + 1}, {"amplitudes", cvector_to_json(vs[i])}});
        return a;
    };
    j["dark_vectors"] = vecs(r.dark_vectors, r.dark_group);
    j["bright_vectors"] = vecs(r.bright_vectors, r.bright_group);
    return j;
}

inline Json to_json(const CoolingResult& c) {
    Json j;
    j["stable"] = c.stable;
    j["max_real_eig"] = c.max_real_eig;
    if (c.stable) {
        j["n_f"] = jsonio::rvector_to_json(c.n_f);
        j["imag_residual"] = c.imag_residual;
        j["lyapunov_residual"] = c.lyapunov_residual;
    }
    return j;
}

inline Json to_json(const StateReport& s) {
    using namespace jsonio;
    Json j;
    j["dark_count"] = s.report.dark_count;
    j["bright_count"] = s.report.bright_count;
    Json d = Json::array(), b = Json::array();
    for (const auto& v : s.dark_states) d.push_back(cvector_to_json(v));
    for (const auto& v : s.bright_states) b.push_back(cvector_to_json(v));
    j["dark_states"] = d;
    j["bright_states"] = b;
    j["analysis"] = to_json(s.report);
    return j;
}

inline Json to_json(const ChainPrediction& p, const ChainNetwork& net) {
    Json j;
    j["dark_count"] = p.dark_count;
    j["predicted"] = p.predicted;
    j["agree"] = p.agree;
    j["rationale"] = p.rationale;
    j["closed_form_left"] = jsonio::rvector_to_json(net.closed_form_left);
    j["closed_form_right"] = jsonio::rvector_to_json(net.closed_form_right);
    return j;
}

// One row per configuration: id, encoding, dark count, cooling verdict.
inline std::string verdicts_csv(const std::vector<ConfigVerdict>& rows) {
    std::string out = "config_id,encoding,edges,dark_count,cooling,best_max_n_f,best_kappa,best_delta1\n";
    for (const auto& v : rows) {
        out += std::to_string(v.id) + "," + v.config.encoding() + "," + std::to_string(v.config.edge_count()) + "," +
               std::to_string(v.dark_count) + "," + (v.cooled ? "yes" : "no") + "," + fmt12(v.best_max_n_f) + "," +
               fmt12(v.best_kappa) + "," + fmt12(v.best_delta) + "\n";
    }
    return out;
}

}  // namespace dmlab
