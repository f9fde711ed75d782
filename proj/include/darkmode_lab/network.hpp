#pragma once

#include "errors.hpp"

#include <Eigen/Dense>

#include <complex>
#include <sstream>
#include <string>
#include <vector>

namespace dmlab {

using Complex = std::complex<double>;
using Index = Eigen::Index;
using RVector = Eigen::VectorXd;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

// Parameters of an (M+N)-mode two-component network. Frequencies and rates
// are in units of omega_ref. Zero entries in xi/eta/g mean "no coupling".
struct NetworkSpec {
    Index M = 1;
    Index N = 1;
    double omega_ref = 1.0;
    RVector delta;   // type-a detunings, length M
    RVector omega;   // type-b frequencies, length N
    CMatrix xi;      // M x M, Hermitian, zero diagonal
    CMatrix eta;     // N x N, Hermitian, zero diagonal
    CMatrix g;       // M x N
    RVector kappa;   // length M
    RVector gamma;   // length N
    RVector nbar;    // length N

    // Zero-initialized spec of the given shape.
    static NetworkSpec zeros(Index m, Index n) {
        NetworkSpec s;
        s.M = m;
        s.N = n;
        s.delta = RVector::Zero(m);
        s.omega = RVector::Zero(n);
        s.xi = CMatrix::Zero(m, m);
        s.eta = CMatrix::Zero(n, n);
        s.g = CMatrix::Zero(m, n);
        s.kappa = RVector::Zero(m);
        s.gamma = RVector::Zero(n);
        s.nbar = RVector::Zero(n);
        return s;
    }

    // Set a hopping pair and its Hermitian partner in one go.
    void set_xi(Index k, Index kp, Complex v) { xi(k, kp) = v; xi(kp, k) = std::conj(v); }
    void set_eta(Index j, Index jp, Complex v) { eta(j, jp) = v; eta(jp, j) = std::conj(v); }

    bool operator==(const NetworkSpec& o) const {
        auto same = [](const auto& a, const auto& b) {
            return a.rows() == b.rows() && a.cols() == b.cols() && a == b;
        };
        return M == o.M && N == o.N && omega_ref == o.omega_ref && same(delta, o.delta) &&
               same(omega, o.omega) && same(xi, o.xi) && same(eta, o.eta) && same(g, o.g) &&
               same(kappa, o.kappa) && same(gamma, o.gamma) && same(nbar, o.nbar);
    }
};

struct Violation {
    std::string field;
    std::string message;
};

struct ValidationReport {
    std::vector<Violation> violations;

    bool ok() const { return violations.empty(); }
    bool empty() const { return violations.empty(); }
    std::size_t size() const { return violations.size(); }

    std::string to_string() const {
        std::ostringstream os;
        for (const auto& v : violations) os << v.field << ": " << v.message << "\n";
        return os.str();
    }
};

namespace detail {

inline std::string pos1(Index i, Index j) {
    return "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
}

inline void check_hermitian_hopping(const CMatrix& m, const std::string& name,
                                    std::vector<Violation>& out) {
    double scale = m.size() ? m.cwiseAbs().maxCoeff() : 0.0;
    double tol = 1e-12 * scale;
    for (Index i = 0; i < m.rows(); ++i) {
        if (std::abs(m(i, i)) > tol)
            out.push_back({name, name + " diagonal not zero at " + pos1(i, i)});
        for (Index j = i + 1; j < m.cols(); ++j)
            if (std::abs(m(i, j) - std::conj(m(j, i))) > tol)
                out.push_back({name, name + " not Hermitian at " + pos1(i, j)});
    }
}

template <class Vec>
void check_nonnegative(const Vec& v, const std::string& name, const std::string& what,
                       std::vector<Violation>& out) {
    for (Index i = 0; i < v.size(); ++i) {
        if (!(v(i) >= 0.0))
            out.push_back({name, "negative " + what + " " + name + "[" + std::to_string(i + 1) + "]"});
    }
}

template <class Mat>
bool all_finite(const Mat& m) {
    return m.array().isFinite().all();
}

}  // namespace detail

// Every violated invariant, with 1-based coordinates. Empty means valid.
inline ValidationReport validate_spec(const NetworkSpec& s) {
    ValidationReport r;
    auto& out = r.violations;
    if (s.M < 1) out.push_back({"M", "M must be >= 1"});
    if (s.N < 1) out.push_back({"N", "N must be >= 1"});
    if (!(s.omega_ref > 0.0)) out.push_back({"omega_ref", "omega_ref must be positive"});

    auto dim_vec = [&](const RVector& v, Index n, const char* name) {
        if (v.size() != n) {
            out.push_back({name, std::string(name) + " has length " + std::to_string(v.size()) +
                                     ", expected " + std::to_string(n)});
            return false;
        }
        return true;
    };
    auto dim_mat = [&](const CMatrix& m, Index r_, Index c_, const char* name) {
        if (m.rows() != r_ || m.cols() != c_) {
            out.push_back({name, std::string(name) + " has shape " + std::to_string(m.rows()) + "x" +
                                     std::to_string(m.cols()) + ", expected " + std::to_string(r_) +
                                     "x" + std::to_string(c_)});
            return false;
        }
        return true;
    };

    bool d_ok = dim_vec(s.delta, s.M, "delta");
    bool o_ok = dim_vec(s.omega, s.N, "omega");
    bool xi_ok = dim_mat(s.xi, s.M, s.M, "xi");
    bool eta_ok = dim_mat(s.eta, s.N, s.N, "eta");
    bool g_ok = dim_mat(s.g, s.M, s.N, "g");
    bool k_ok = dim_vec(s.kappa, s.M, "kappa");
    bool ga_ok = dim_vec(s.gamma, s.N, "gamma");
    bool n_ok = dim_vec(s.nbar, s.N, "nbar");

    if (d_ok && !detail::all_finite(s.delta)) out.push_back({"delta", "non-finite entry"});
    if (o_ok && !detail::all_finite(s.omega)) out.push_back({"omega", "non-finite entry"});
    if (g_ok && !detail::all_finite(s.g)) out.push_back({"g", "non-finite entry"});
    if (xi_ok) detail::check_hermitian_hopping(s.xi, "xi", out);
    if (eta_ok) detail::check_hermitian_hopping(s.eta, "eta", out);
    if (k_ok) detail::check_nonnegative(s.kappa, "kappa", "decay rate", out);
    if (ga_ok) detail::check_nonnegative(s.gamma, "gamma", "decay rate", out);
    if (n_ok) detail::check_nonnegative(s.nbar, "nbar", "thermal occupation", out);
    return r;
}

inline void require_valid(const NetworkSpec& s) {
    auto r = validate_spec(s);
    if (!r.ok()) throw InvalidSpec("invalid network spec:\n" + r.to_string());
}

// Bare-mode coefficient matrix H with a-modes first, then b-modes.
struct CoefficientMatrix {
    CMatrix H;
    Index M = 0;
    Index N = 0;

    auto Ha() const { return H.topLeftCorner(M, M); }
    auto Hb() const { return H.bottomRightCorner(N, N); }
    auto Cab() const { return H.topRightCorner(M, N); }
};

inline CoefficientMatrix build_coefficient_matrix(const NetworkSpec& s) {
    require_valid(s);
    const Index M = s.M, N = s.N;
    CoefficientMatrix c;
    c.M = M;
    c.N = N;
    c.H = CMatrix::Zero(M + N, M + N);
    for (Index k = 0; k < M; ++k) {
        c.H(k, k) = s.delta(k);
        for (Index kp = k + 1; kp < M; ++kp) {
            c.H(k, kp) = s.xi(k, kp);
            c.H(kp, k) = std::conj(s.xi(k, kp));
        }
    }
    for (Index j = 0; j < N; ++j) {
        c.H(M + j, M + j) = s.omega(j);
        for (Index jp = j + 1; jp < N; ++jp) {
            c.H(M + j, M + jp) = s.eta(j, jp);
            c.H(M + jp, M + j) = std::conj(s.eta(j, jp));
        }
    }
    c.H.topRightCorner(M, N) = s.g;
    c.H.bottomLeftCorner(N, M) = s.g.adjoint();
    return c;
}

}  // namespace dmlab
