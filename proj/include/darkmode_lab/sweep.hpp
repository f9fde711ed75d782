#pragma once

#include "darkmode.hpp"
#include "dynamics.hpp"
#include "errors.hpp"
#include "network.hpp"
#include "report_json.hpp"
#include "spec_io.hpp"

#include <exception>
#include <regex>
#include <string>
#include <thread>
#include <vector>

namespace dmlab {

// Numeric field of a NetworkSpec addressed like "kappa[0]", "eta[0][1]",
// "g[1][*]" or "omega_ref". Indices are 0-based; '*' means every index.
// Hopping entries are set together with their Hermitian partner.
struct ParamPath {
    std::string field;
    int i = -1;   // -1: none, -2: '*'
    int j = -1;

    static ParamPath parse(const std::string& text) {
        static const std::regex re(R"(^([a-z_]+)(?:\[(\d+|\*)\])?(?:\[(\d+|\*)\])?$)");
        std::smatch m;
        if (!std::regex_match(text, m, re)) throw ParseError("bad parameter path '" + text + "'");
        ParamPath p;
        p.field = m[1];
        auto idx = [](const std::ssub_match& s) { return !s.matched ? -1 : s.str() == "*" ? -2 : std::stoi(s.str()); };
        p.i = idx(m[2]);
        p.j = idx(m[3]);
        const bool vec = p.field == "delta" || p.field == "omega" || p.field == "kappa" || p.field == "gamma" ||
                         p.field == "nbar";
        const bool mat = p.field == "xi" || p.field == "eta" || p.field == "g";
        if (p.field == "omega_ref" ? (p.i != -1) : vec ? (p.i == -1 || p.j != -1) : mat ? (p.i == -1 || p.j == -1) : true)
            throw ParseError("parameter path '" + text + "' does not name a numeric field");
        return p;
    }

    void apply(NetworkSpec& s, double v) const {
        auto range = [](int k, Index n) {
            if (k >= n) throw DimensionMismatch("parameter index out of range");
            return k == -2 ? std::pair<Index, Index>{0, n} : std::pair<Index, Index>{k, k + 1};
        };
        auto set_vec = [&](RVector& x) {
            auto [a, b] = range(i, x.size());
            for (Index k = a; k < b; ++k) x(k) = v;
        };
        if (field == "omega_ref") s.omega_ref = v;
        else if (field == "delta") set_vec(s.delta);
        else if (field == "omega") set_vec(s.omega);
        else if (field == "kappa") set_vec(s.kappa);
        else if (field == "gamma") set_vec(s.gamma);
        else if (field == "nbar") set_vec(s.nbar);
        else {
            CMatrix& m = field == "xi" ? s.xi : field == "eta" ? s.eta : s.g;
            const bool hop = field != "g";
            auto [r0, r1] = range(i, m.rows());
            auto [c0, c1] = range(j, m.cols());
            for (Index r = r0; r < r1; ++r)
                for (Index c = c0; c < c1; ++c) {
                    if (hop && r == c) {
                        if (i == -2 || j == -2) continue;
                        throw InvalidSpec("cannot set a diagonal hopping entry");
                    }
                    m(r, c) = v;
                    if (hop) m(c, r) = v;
                }
        }
    }
};

struct SweepAxis {
    std::string path;
    double min = 0.0;
    double max = 0.0;
    int count = 2;

    double value(int k) const { return count == 1 ? min : min + (max - min) * k / (count - 1); }
};

struct SweepPlan {
    std::vector<SweepAxis> axes;                               // one or two
    std::vector<std::pair<std::string, double>> overrides;     // applied before the sweep

    void check() const {
        if (axes.empty() || axes.size() > 2) throw ParseError("sweep plan needs one or two axes");
        for (const auto& a : axes) {
            ParamPath::parse(a.path);
            if (a.count < 1 || (a.count == 1 && a.min != a.max))
                throw ParseError("axis '" + a.path + "': count must be >= 2 (or 1 with min == max)");
        }
        for (const auto& o : overrides) ParamPath::parse(o.first);
    }
};

inline SweepPlan sweep_plan_from_json(const Json& j) {
    using namespace jsonio;
    if (!j.is_object()) throw ParseError("sweep plan must be a JSON object");
    reject_unknown_keys(j, {"axes", "overrides"}, "sweep plan");
    SweepPlan p;
    const Json& axes = require_field(j, "axes");
    if (!axes.is_array()) throw ParseError("field 'axes': expected an array");
    for (const auto& a : axes) {
        reject_unknown_keys(a, {"path", "min", "max", "count"}, "sweep axis");
        SweepAxis ax;
        if (!require_field(a, "path").is_string()) throw ParseError("field 'path': expected a string");
        ax.path = a["path"].get<std::string>();
        ax.min = real_from_json(require_field(a, "min"), "min");
        ax.max = real_from_json(require_field(a, "max"), "max");
        const Json& c = require_field(a, "count");
        if (!c.is_number_integer()) throw ParseError("field 'count': expected an integer");
        ax.count = c.get<int>();
        p.axes.push_back(ax);
    }
    if (j.contains("overrides")) {
        const Json& o = j["overrides"];
        if (!o.is_object()) throw ParseError("field 'overrides': expected an object");
        for (auto it = o.begin(); it != o.end(); ++it) p.overrides.emplace_back(it.key(), real_from_json(it.value(), it.key()));
    }
    p.check();
    return p;
}

struct SweepPoint {
    std::vector<double> params;
    bool stable = false;
    RVector n_f;
    Index dark_count = 0;
};

inline std::string cooling_csv_header(std::size_t nparams, Index N) {
    std::string h;
    for (std::size_t k = 0; k < nparams; ++k) h += "param" + std::to_string(k + 1) + ",";
    h += "stable";
    for (Index j = 0; j < N; ++j) h += ",n_f_" + std::to_string(j + 1);
    return h + ",dark_count\n";
}

inline std::string cooling_csv_row(const SweepPoint& p, Index N) {
    std::string r;
    for (double v : p.params) r += fmt12(v) + ",";
    r += p.stable ? "1" : "0";
    for (Index j = 0; j < N; ++j) r += "," + (p.stable ? fmt12(p.n_f(j)) : std::string("nan"));
    return r + "," + std::to_string(p.dark_count) + "\n";
}

inline SweepPoint evaluate_point(const NetworkSpec& s, const Tolerances& tol) {
    SweepPoint p;
    CoolingResult c = final_phonon_numbers(s);
    p.stable = c.stable;
    p.n_f = c.n_f;
    p.dark_count = count_dark_modes(to_normal_form(s), tol).dark_count;
    return p;
}

// Row-major grid (last axis fastest). Output order never depends on jobs.
inline std::vector<SweepPoint> run_sweep(const NetworkSpec& base, const SweepPlan& plan, const Tolerances& tol,
                                         unsigned jobs = 1) {
    plan.check();
    NetworkSpec spec = base;
    for (const auto& o : plan.overrides) ParamPath::parse(o.first).apply(spec, o.second);
    std::vector<ParamPath> paths;
    for (const auto& a : plan.axes) paths.push_back(ParamPath::parse(a.path));
    const int n0 = plan.axes[0].count;
    const int n1 = plan.axes.size() > 1 ? plan.axes[1].count : 1;
    std::vector<SweepPoint> out(static_cast<std::size_t>(n0) * static_cast<std::size_t>(n1));
    jobs = std::max(1u, jobs);
    std::vector<std::exception_ptr> errs(jobs);
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < jobs; ++t) {
        pool.emplace_back([&, t] {
            try {
                for (std::size_t idx = t; idx < out.size(); idx += jobs) {
                    NetworkSpec s = spec;
                    std::vector<double> vals;
                    int k0 = static_cast<int>(idx) / n1, k1 = static_cast<int>(idx) % n1;
                    vals.push_back(plan.axes[0].value(k0));
                    paths[0].apply(s, vals.back());
                    if (plan.axes.size() > 1) {
                        vals.push_back(plan.axes[1].value(k1));
                        paths[1].apply(s, vals.back());
                    }
                    out[idx] = evaluate_point(s, tol);
                    out[idx].params = vals;
                }
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

inline std::string sweep_csv(const std::vector<SweepPoint>& pts, std::size_t nparams, Index N) {
    std::string out = cooling_csv_header(nparams, N);
    for (const auto& p : pts) out += cooling_csv_row(p, N);
    return out;
}

}  // namespace dmlab
