#pragma once

// Random generators, independent oracles and reference data shared by the
// unit tests and the acceptance runner.

#include <darkmode_lab/darkmode_lab.hpp>

#include <Eigen/LU>
#include <Eigen/QR>

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <vector>

namespace dmtest {

using namespace dmlab;

struct Rng {
    std::mt19937_64 eng;
    explicit Rng(std::uint64_t seed) : eng(seed) {}
    double uniform(double a = 0.0, double b = 1.0) { return std::uniform_real_distribution<double>(a, b)(eng); }
    double normal() { return std::normal_distribution<double>(0.0, 1.0)(eng); }
    int integer(int a, int b) { return std::uniform_int_distribution<int>(a, b)(eng); }
    Complex cnormal() { return {normal(), normal()}; }
    bool coin(double p = 0.5) { return uniform() < p; }
};

inline CMatrix random_complex(Rng& r, Index rows, Index cols) {
    CMatrix m(rows, cols);
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j) m(i, j) = r.cnormal();
    return m;
}

inline CMatrix random_unitary(Rng& r, Index n) {
    Eigen::HouseholderQR<CMatrix> qr(random_complex(r, n, n));
    return qr.householderQ() * CMatrix::Identity(n, n);
}

inline CMatrix random_hermitian(Rng& r, Index n, double scale = 1.0) {
    CMatrix a = random_complex(r, n, n) * scale;
    return (a + a.adjoint()) * 0.5;
}

// Split a Hermitian matrix into the spec's diagonal frequencies and
// zero-diagonal hopping matrix.
inline void split_hermitian(const CMatrix& h, RVector& diag, CMatrix& hop) {
    diag = h.diagonal().real();
    hop = h;
    hop.diagonal().setZero();
    for (Index i = 0; i < h.rows(); ++i)
        for (Index j = i + 1; j < h.cols(); ++j) hop(j, i) = std::conj(hop(i, j));
}

// Random valid spec with generic (complex) couplings.
inline NetworkSpec random_spec(Rng& r, Index M, Index N, double hop = 0.1, double cpl = 0.1) {
    NetworkSpec s = NetworkSpec::zeros(M, N);
    CMatrix ha = random_hermitian(r, M, hop);
    CMatrix hb = random_hermitian(r, N, hop);
    split_hermitian(ha, s.delta, s.xi);
    split_hermitian(hb, s.omega, s.eta);
    for (Index k = 0; k < M; ++k) s.delta(k) = 1.0 + r.uniform(-0.2, 0.2);
    for (Index j = 0; j < N; ++j) s.omega(j) = 1.0 + r.uniform(-0.2, 0.2);
    s.g = random_complex(r, M, N) * cpl;
    for (Index k = 0; k < M; ++k) s.kappa(k) = r.uniform(0.05, 0.3);
    for (Index j = 0; j < N; ++j) {
        s.gamma(j) = r.uniform(1e-3, 0.05);
        s.nbar(j) = r.uniform(0.0, 20.0);
    }
    return s;
}

// A spec whose type-b block has a prescribed eigen-decomposition, with
// engineered degeneracies and dependent / zero coupling columns. The ground
// truth dark count follows from the construction and from an LU rank.
struct EngineeredSpec {
    NetworkSpec spec;
    std::vector<std::vector<Index>> groups;  // eigenvector columns of V sharing one frequency
    CMatrix V;                               // H_b = V diag(Omega) V^dag
    CMatrix C_target;                        // g V, i.e. the coupling to the eigenvectors
};

inline EngineeredSpec engineered_spec(Rng& r, Index M, Index N) {
    EngineeredSpec e;
    RVector om(N);
    for (Index j = 0; j < N;) {
        Index l = std::min<Index>(N - j, r.coin(0.5) ? r.integer(1, 4) : 1);
        double w = 1.0 + r.uniform(-0.5, 0.5);
        e.groups.emplace_back();
        for (Index t = 0; t < l; ++t, ++j) {
            om(j) = w;
            e.groups.back().push_back(j);
        }
    }
    e.V = random_unitary(r, N);
    CMatrix hb = e.V * om.cast<Complex>().asDiagonal() * e.V.adjoint();
    hb = (hb + hb.adjoint()).eval() * 0.5;

    CMatrix C = random_complex(r, M, N) * 0.1;
    for (const auto& grp : e.groups) {
        for (std::size_t t = 0; t < grp.size(); ++t) {
            double u = r.uniform();
            if (u < 0.15) C.col(grp[t]).setZero();
            else if (u < 0.35 && t > 0) C.col(grp[t]) = C.col(grp[0]) * r.cnormal();
        }
    }
    e.C_target = C;
    NetworkSpec s = NetworkSpec::zeros(M, N);
    split_hermitian(hb, s.omega, s.eta);
    CMatrix ha = random_hermitian(r, M, 0.1);
    split_hermitian(ha, s.delta, s.xi);
    s.g = C * e.V.adjoint();
    s.kappa.setConstant(0.1);
    s.gamma.setConstant(1e-3);
    s.nbar.setConstant(1.0);
    e.spec = s;
    return e;
}

// Independent oracle: for each eigenspace of H_b (eigenvalues grouped from a
// general complex eigensolver, eigenspaces from an LU kernel of H_b - w I),
// count dim ker(g E). Never touches the normal-form / SVD / Gram-Schmidt path.
inline Index oracle_dark_count(const NetworkSpec& s, double rel = 1e-7) {
    const Index N = s.N;
    CoefficientMatrix cm = build_coefficient_matrix(s);
    CMatrix hb = cm.Hb();
    Eigen::ComplexEigenSolver<CMatrix> es(hb);
    std::vector<double> w;
    for (Index i = 0; i < N; ++i) w.push_back(es.eigenvalues()(i).real());
    std::sort(w.begin(), w.end());
    double scale = std::max(1.0, std::abs(w.back()));
    std::vector<double> reps;
    for (double x : w)
        if (reps.empty() || x - reps.back() > 1e-6 * scale) reps.push_back(x);
    const double gscale = std::max(s.g.norm(), 1e-300);
    Index dark = 0;
    for (double x : reps) {
        CMatrix shifted = hb - x * CMatrix::Identity(N, N);
        double big = shifted.cwiseAbs().maxCoeff();
        CMatrix E;
        if (big <= 1e-7 * scale) {
            E = CMatrix::Identity(N, N);  // whole space is one eigenspace
        } else {
            Eigen::FullPivLU<CMatrix> lu(shifted);
            lu.setThreshold(1e-7 * scale / big);
            E = lu.kernel();
        }
        if (E.cols() == 0 || E.norm() == 0.0) continue;
        Eigen::HouseholderQR<CMatrix> qr(E);
        CMatrix Q = qr.householderQ() * CMatrix::Identity(N, E.cols());
        CMatrix GE = s.g * Q;
        if (GE.norm() <= rel * gscale) {
            dark += E.cols();
            continue;
        }
        Eigen::FullPivLU<CMatrix> lu2(GE);
        lu2.setThreshold(rel * gscale / std::max(GE.cwiseAbs().maxCoeff(), 1e-300));
        dark += E.cols() - lu2.rank();
    }
    return dark;
}

// Independent time-domain oracle: RK4 on dV/dt = A V + V A^T + Q.
inline CMatrix integrate_covariance(const CMatrix& A, const CMatrix& Q, CMatrix V, double t_end) {
    Eigen::ComplexEigenSolver<CMatrix> es(A, false);
    double rho = es.eigenvalues().cwiseAbs().maxCoeff();
    double dt = 0.05 / std::max(rho, 1e-3);
    long steps = static_cast<long>(std::ceil(t_end / dt));
    dt = t_end / static_cast<double>(steps);
    CMatrix At = A.transpose();
    auto f = [&](const CMatrix& X) -> CMatrix { return A * X + X * At + Q; };
    for (long s = 0; s < steps; ++s) {
        CMatrix k1 = f(V);
        CMatrix k2 = f(V + 0.5 * dt * k1);
        CMatrix k3 = f(V + 0.5 * dt * k2);
        CMatrix k4 = f(V + dt * k3);
        V += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return V;
}

// Thermal initial covariance in the (a, b, a^dag, b^dag) ordering.
inline CMatrix thermal_covariance(const NetworkSpec& s) {
    const Index n = s.M + s.N;
    CMatrix V = CMatrix::Zero(2 * n, 2 * n);
    for (Index i = 0; i < n; ++i) {
        double occ = i < s.M ? 0.0 : s.nbar(i - s.M);
        V(i, n + i) = V(n + i, i) = occ + 0.5;
    }
    return V;
}

// Closed-form normal-mode coupling of the two-cavity / three-resonator network
// with coupled cavities (xi12) and an all-to-all mechanical triangle, in the
// gauge A1 = (-a1+a2)/sqrt2, A2 = (a1+a2)/sqrt2, B1 = (-b1+b3)/sqrt2,
// B2 = (-b1+2b2-b3)/sqrt6, B3 = (b1+b2+b3)/sqrt3. The first column carries a
// factor 1/2 that follows from these modes.
inline CMatrix triangle_coupling_closed_form(double g22, double g23) {
    const double s3 = std::sqrt(3.0) / 6.0, s6 = std::sqrt(6.0) / 6.0;
    CMatrix C(2, 3);
    C(0, 0) = C(1, 0) = (g23 - 0.1) / 2.0;
    C(0, 1) = C(1, 1) = s3 * (2.0 * g22 - g23 - 0.1);
    C(0, 2) = s6 * (g22 + g23 - 0.2);
    C(1, 2) = s6 * (g22 + g23 + 0.4);
    return C;
}

// The same matrix with the first column exactly as typeset in the source.
inline CMatrix triangle_coupling_as_printed(double g22, double g23) {
    CMatrix C = triangle_coupling_closed_form(g22, g23);
    C(0, 0) = C(1, 0) = g23 - 0.1;
    return C;
}

inline CMatrix triangle_reference_Ua() {
    CMatrix U(2, 2);
    const double r = 1.0 / std::sqrt(2.0);
    U << -r, r, r, r;
    return U;
}

inline CMatrix triangle_reference_Ub() {
    CMatrix U(3, 3);
    const double a = 1.0 / std::sqrt(2.0), b = 1.0 / std::sqrt(6.0), c = 1.0 / std::sqrt(3.0);
    U << -a, 0.0, a, -b, 2.0 * b, -b, c, c, c;
    return U;
}

// Reference verdict table for the 58 four-resonator topologies:
// (ground-state cooling, dark mode exists, dark mode count), by table row.
struct ReferenceRow {
    bool cooling;
    bool exists;
    int dark;
};

inline const std::array<ReferenceRow, 58>& four_mode_reference_table() {
    static const std::array<int, 58> dark = {3, 2, 2, 2, 1, 1, 3, 1, 2, 0, 2, 2, 1, 1, 1, 0, 2, 2, 2, 1,
                                             1, 2, 2, 1, 0, 0, 1, 0, 0, 1, 2, 1, 1, 3, 1, 0, 1, 1, 0, 0,
                                             2, 2, 1, 1, 1, 1, 1, 2, 2, 0, 0, 2, 1, 1, 1, 2, 1, 3};
    static const std::array<ReferenceRow, 58> rows = [] {
        std::array<ReferenceRow, 58> out{};
        const std::array<int, 11> cooled = {10, 16, 25, 26, 28, 29, 36, 39, 40, 50, 51};
        for (std::size_t i = 0; i < 58; ++i) {
            bool c = std::find(cooled.begin(), cooled.end(), static_cast<int>(i + 1)) != cooled.end();
            out[i] = {c, dark[i] > 0, dark[i]};
        }
        return out;
    }();
    return rows;
}

// Table rows grouped by number of present couplings (10 down to 4).
inline std::vector<std::pair<int, std::pair<int, int>>> four_mode_reference_blocks() {
    return {{10, {1, 1}}, {9, {2, 3}}, {8, {4, 8}}, {7, {9, 19}}, {6, {20, 34}}, {5, {35, 49}}, {4, {50, 58}}};
}

}  // namespace dmtest
