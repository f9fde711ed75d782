#pragma once

#include "errors.hpp"
#include "network.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>
#include <string>

namespace dmlab {

using Json = nlohmann::ordered_json;

namespace jsonio {

inline Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

inline Complex complex_from_json(const Json& j, const std::string& where) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return {j[0].get<double>(), j[1].get<double>()};
    throw ParseError("field '" + where + "': expected a number or [re, im]");
}

inline double real_from_json(const Json& j, const std::string& where) {
    if (!j.is_number()) throw ParseError("field '" + where + "': expected a number");
    return j.get<double>();
}

inline Json rvector_to_json(const RVector& v) {
    Json a = Json::array();
    for (Index i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
}

inline Json cvector_to_json(const CVector& v) {
    Json a = Json::array();
    for (Index i = 0; i < v.size(); ++i) a.push_back(complex_to_json(v(i)));
    return a;
}

inline Json cmatrix_to_json(const CMatrix& m) {
    Json rows = Json::array();
    for (Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Index j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline Json rmatrix_to_json(const Eigen::MatrixXd& m) {
    Json rows = Json::array();
    for (Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline RVector rvector_from_json(const Json& j, const std::string& where) {
    if (!j.is_array()) throw ParseError("field '" + where + "': expected an array");
    RVector v(static_cast<Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i)
        v(static_cast<Index>(i)) = real_from_json(j[i], where + "[" + std::to_string(i) + "]");
    return v;
}

inline CVector cvector_from_json(const Json& j, const std::string& where) {
    if (!j.is_array()) throw ParseError("field '" + where + "': expected an array");
    CVector v(static_cast<Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i)
        v(static_cast<Index>(i)) = complex_from_json(j[i], where + "[" + std::to_string(i) + "]");
    return v;
}

// Row-major nested arrays; ragged input is a dimension error, not a parse error.
inline CMatrix cmatrix_from_json(const Json& j, const std::string& where) {
    if (!j.is_array()) throw ParseError("field '" + where + "': expected an array of rows");
    const auto rows = j.size();
    std::size_t cols = 0;
    for (std::size_t i = 0; i < rows; ++i) {
        if (!j[i].is_array())
            throw ParseError("field '" + where + "[" + std::to_string(i) + "]': expected a row array");
        if (i == 0) cols = j[i].size();
        else if (j[i].size() != cols)
            throw DimensionMismatch("field '" + where + "': ragged rows");
    }
    CMatrix m(static_cast<Index>(rows), static_cast<Index>(cols));
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
            m(static_cast<Index>(r), static_cast<Index>(c)) = complex_from_json(
                j[r][c], where + "[" + std::to_string(r) + "][" + std::to_string(c) + "]");
    return m;
}

inline const Json& require_field(const Json& obj, const std::string& key) {
    auto it = obj.find(key);
    if (it == obj.end()) throw ParseError("missing field '" + key + "'");
    return *it;
}

inline void reject_unknown_keys(const Json& obj, const std::set<std::string>& allowed,
                                const std::string& what) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key()))
            throw ParseError("unknown key '" + it.key() + "' in " + what);
}

inline Index count_from_json(const Json& obj, const std::string& key) {
    const Json& j = require_field(obj, key);
    if (!j.is_number_integer() || j.get<long long>() < 0)
        throw ParseError("field '" + key + "': expected a non-negative integer");
    return static_cast<Index>(j.get<long long>());
}

inline Json parse_text(const std::string& text, const std::string& origin) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(origin + ": " + e.what());
    }
}

inline Json read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_text(ss.str(), path);
}

inline void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path + "'");
    out << text;
    if (!out) throw Error("write failed for '" + path + "'");
}

}  // namespace jsonio

inline Json spec_to_json(const NetworkSpec& s) {
    using namespace jsonio;
    Json j;
    j["M"] = s.M;
    j["N"] = s.N;
    j["omega_ref"] = s.omega_ref;
    j["delta"] = rvector_to_json(s.delta);
    j["omega"] = rvector_to_json(s.omega);
    j["xi"] = cmatrix_to_json(s.xi);
    j["eta"] = cmatrix_to_json(s.eta);
    j["g"] = cmatrix_to_json(s.g);
    j["kappa"] = rvector_to_json(s.kappa);
    j["gamma"] = rvector_to_json(s.gamma);
    j["nbar"] = rvector_to_json(s.nbar);
    return j;
}

// Parses the structure and checks every shape against the declared M and N.
// Physical invariants (Hermiticity, signs) are left to validate_spec.
inline NetworkSpec spec_from_json(const Json& j) {
    using namespace jsonio;
    if (!j.is_object()) throw ParseError("spec must be a JSON object");
    reject_unknown_keys(j, {"M", "N", "omega_ref", "delta", "omega", "xi", "eta", "g", "kappa",
                            "gamma", "nbar"},
                        "network spec");
    NetworkSpec s;
    s.M = count_from_json(j, "M");
    s.N = count_from_json(j, "N");
    s.omega_ref = real_from_json(require_field(j, "omega_ref"), "omega_ref");
    s.delta = rvector_from_json(require_field(j, "delta"), "delta");
    s.omega = rvector_from_json(require_field(j, "omega"), "omega");
    s.xi = cmatrix_from_json(require_field(j, "xi"), "xi");
    s.eta = cmatrix_from_json(require_field(j, "eta"), "eta");
    s.g = cmatrix_from_json(require_field(j, "g"), "g");
    s.kappa = rvector_from_json(require_field(j, "kappa"), "kappa");
    s.gamma = rvector_from_json(require_field(j, "gamma"), "gamma");
    s.nbar = rvector_from_json(require_field(j, "nbar"), "nbar");

    auto vec = [](const RVector& v, Index n, const char* name) {
        if (v.size() != n)
            throw DimensionMismatch(std::string("field '") + name + "' has " +
                                    std::to_string(v.size()) + " entries, expected " +
                                    std::to_string(n));
    };
    auto mat = [](const CMatrix& m, Index r, Index c, const char* name) {
        if (m.rows() != r || (r > 0 && m.cols() != c))
            throw DimensionMismatch(std::string("field '") + name + "' has shape " +
                                    std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                                    ", expected " + std::to_string(r) + "x" + std::to_string(c));
    };
    vec(s.delta, s.M, "delta");
    vec(s.omega, s.N, "omega");
    mat(s.xi, s.M, s.M, "xi");
    mat(s.eta, s.N, s.N, "eta");
    mat(s.g, s.M, s.N, "g");
    vec(s.kappa, s.M, "kappa");
    vec(s.gamma, s.N, "gamma");
    vec(s.nbar, s.N, "nbar");
    if (s.g.rows() == 0) s.g.resize(0, s.N);
    return s;
}

inline NetworkSpec load_spec(const std::string& path) { return spec_from_json(jsonio::read_file(path)); }

// nlohmann prints doubles with round-trip precision, so load(save(s)) == s.
inline void save_spec(const NetworkSpec& s, const std::string& path) {
    jsonio::write_file(path, spec_to_json(s).dump(2) + "\n");
}

}  // namespace dmlab
