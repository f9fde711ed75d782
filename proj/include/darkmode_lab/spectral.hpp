#pragma once

#include "errors.hpp"
#include "network.hpp"
#include "tolerances.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace dmlab {

// One diagonalized sub-network: H = U^dag diag(freqs) U, rows of U are the
// normal-mode coefficients over the bare modes (mode_k = sum_j U(k,j) bare_j).
struct NormalModes {
    RVector freqs;
    CMatrix U;
};

namespace detail {

// First index whose magnitude is within 1e-9 of the row maximum, so exact
// ties like (1,-1)/sqrt2 resolve to the lower bare index deterministically.
inline Index dominant_index(const CVector& row) {
    double mx = row.cwiseAbs().maxCoeff();
    for (Index c = 0; c < row.size(); ++c)
        if (std::abs(row(c)) >= mx * (1.0 - 1e-9)) return c;
    return 0;
}

}  // namespace detail

inline NormalModes diagonalize_hermitian(const CMatrix& H) {
    const Index n = H.rows();
    NormalModes out;
    if (n == 0) {
        out.freqs.resize(0);
        out.U.resize(0, 0);
        return out;
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> es(H);
    if (es.info() != Eigen::Success) throw EigensolverFailure("Hermitian eigensolver did not converge");
    const RVector& w = es.eigenvalues();
    const CMatrix& V = es.eigenvectors();

    double hnorm = H.norm();
    for (Index i = 0; i < n; ++i) {
        double res = (H * V.col(i) - w(i) * V.col(i)).norm();
        if (!(res <= 1e-10 * hnorm + 1e-300))
            throw EigensolverFailure("eigenpair residual " + std::to_string(res) + " exceeds 1e-10*|H|");
    }

    // Ascending with ties broken by the dominant bare index. Eigenvalues stay
    // in ascending order; only the eigenvector order inside a tie changes.
    double scale = w.cwiseAbs().maxCoeff();
    double tie = 1e-11 * scale;
    std::vector<Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Index{0});
    std::vector<Index> dom(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) dom[static_cast<std::size_t>(i)] = detail::dominant_index(V.col(i));
    for (Index start = 0; start < n;) {
        Index stop = start + 1;
        while (stop < n && w(stop) - w(stop - 1) <= tie) ++stop;
        std::stable_sort(order.begin() + start, order.begin() + stop,
                         [&](Index a, Index b) { return dom[static_cast<std::size_t>(a)] < dom[static_cast<std::size_t>(b)]; });
        start = stop;
    }

    out.freqs = w;
    out.U.resize(n, n);
    for (Index r = 0; r < n; ++r) {
        CVector row = V.col(order[static_cast<std::size_t>(r)]).conjugate();
        Index d = dom[static_cast<std::size_t>(order[static_cast<std::size_t>(r)])];
        // Phase gauge: dominant coefficient real positive.
        Complex ph = row(d) / std::abs(row(d));
        row /= ph;
        row(d) = std::abs(row(d));
        out.U.row(r) = row.transpose();
    }
    return out;
}

// Normal-mode form: Delta, Omega diagonal, C_AB = U_a C_ab U_b^dag.
struct ArrowheadForm {
    RVector Delta;
    RVector Omega;
    CMatrix C_AB;
    CMatrix U_a;
    CMatrix U_b;

    Index M() const { return Delta.size(); }
    Index N() const { return Omega.size(); }

    CMatrix assemble() const {
        const Index m = M(), n = N();
        CMatrix H = CMatrix::Zero(m + n, m + n);
        for (Index k = 0; k < m; ++k) H(k, k) = Delta(k);
        for (Index j = 0; j < n; ++j) H(m + j, m + j) = Omega(j);
        H.topRightCorner(m, n) = C_AB;
        H.bottomLeftCorner(n, m) = C_AB.adjoint();
        return H;
    }
};

inline ArrowheadForm normal_form_from_blocks(const CMatrix& Ha, const CMatrix& Hb, const CMatrix& Cab) {
    if (Ha.rows() != Ha.cols() || Hb.rows() != Hb.cols() || Cab.rows() != Ha.rows() ||
        Cab.cols() != Hb.rows())
        throw DimensionMismatch("normal_form_from_blocks: inconsistent block shapes");
    NormalModes a = diagonalize_hermitian(Ha);
    NormalModes b = diagonalize_hermitian(Hb);
    ArrowheadForm f;
    f.Delta = a.freqs;
    f.Omega = b.freqs;
    f.U_a = a.U;
    f.U_b = b.U;
    f.C_AB = a.U * Cab * b.U.adjoint();
    return f;
}

inline ArrowheadForm to_normal_form(const NetworkSpec& spec) {
    CoefficientMatrix c = build_coefficient_matrix(spec);
    return normal_form_from_blocks(c.Ha(), c.Hb(), c.Cab());
}

inline ArrowheadForm to_normal_form(const CoefficientMatrix& c) {
    return normal_form_from_blocks(c.Ha(), c.Hb(), c.Cab());
}

// Groups of indices into an ascending vector whose consecutive gaps are
// <= tol * max|v|.
inline std::vector<std::vector<Index>> ascending_runs(const RVector& v, double tol) {
    std::vector<std::vector<Index>> runs;
    double thr = tol * (v.size() ? v.cwiseAbs().maxCoeff() : 0.0);
    for (Index i = 0; i < v.size(); ++i) {
        if (i == 0 || v(i) - v(i - 1) > thr) runs.emplace_back();
        runs.back().push_back(i);
    }
    return runs;
}

namespace detail {

// Closest unitary to X in Frobenius norm.
inline CMatrix polar_unitary(const CMatrix& X) {
    Eigen::JacobiSVD<CMatrix> svd(X, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return svd.matrixU() * svd.matrixV().adjoint();
}

// Rotate rows of U inside each group to best match the reference rows.
// Returns the block-diagonal unitary Q with U_new = Q U.
inline CMatrix align_rows(const CMatrix& U, const CMatrix& ref, const std::vector<std::vector<Index>>& groups) {
    const Index n = U.rows();
    CMatrix Q = CMatrix::Zero(n, n);
    for (const auto& grp : groups) {
        const Index l = static_cast<Index>(grp.size());
        CMatrix W(l, U.cols()), R(l, U.cols());
        for (Index i = 0; i < l; ++i) {
            W.row(i) = U.row(grp[static_cast<std::size_t>(i)]);
            R.row(i) = ref.row(grp[static_cast<std::size_t>(i)]);
        }
        CMatrix q = polar_unitary(R * W.adjoint());
        for (Index i = 0; i < l; ++i)
            for (Index k = 0; k < l; ++k) Q(grp[static_cast<std::size_t>(i)], grp[static_cast<std::size_t>(k)]) = q(i, k);
    }
    return Q;
}

}  // namespace detail

// Use the gauge freedom (phase per mode, unitary inside degenerate groups) to
// bring U_a and U_b as close as possible to given reference unitaries. The
// physics (Delta, Omega, dark counts) is unchanged; C_AB transforms along.
inline ArrowheadForm align_gauge(const ArrowheadForm& f, const CMatrix& ref_Ua, const CMatrix& ref_Ub,
                                 double tol_deg = 1e-8) {
    if (ref_Ua.rows() != f.M() || ref_Ua.cols() != f.M() || ref_Ub.rows() != f.N() || ref_Ub.cols() != f.N())
        throw DimensionMismatch("align_gauge: reference unitaries have the wrong shape");
    CMatrix Qa = detail::align_rows(f.U_a, ref_Ua, ascending_runs(f.Delta, tol_deg));
    CMatrix Qb = detail::align_rows(f.U_b, ref_Ub, ascending_runs(f.Omega, tol_deg));
    ArrowheadForm g = f;
    g.U_a = Qa * f.U_a;
    g.U_b = Qb * f.U_b;
    g.C_AB = Qa * f.C_AB * Qb.adjoint();
    return g;
}

struct SecularDiagnostics {
    RVector eigenvalues;    // ascending, N+1 roots
    RVector residuals;      // |f(l)| / f'(l), i.e. the Newton estimate of the root error
    double scale = 0.0;
    bool interlacing = false;
};

// f(l) = l - Delta_1 + sum_j |G_1j|^2 / (Omega_j - l); one root per interval
// between consecutive poles, outer roots bracketed by Gershgorin bounds.
inline SecularDiagnostics secular_diagnostics(const ArrowheadForm& f, const Tolerances& tol = {}) {
    if (f.M() != 1) throw PreconditionViolated("secular equation needs exactly one type-a mode");
    const Index n = f.N();
    const double d1 = f.Delta(0);
    RVector w2(n);
    for (Index j = 0; j < n; ++j) w2(j) = std::norm(f.C_AB(0, j));
    double cnorm = f.C_AB.norm();
    for (Index j = 0; j < n; ++j)
        if (std::abs(f.C_AB(0, j)) <= tol.cpl * cnorm)
            throw PreconditionViolated("coupling to normal mode " + std::to_string(j + 1) +
                                       " is zero; use the dark-mode analysis");
    if (ascending_runs(f.Omega, tol.deg).size() != static_cast<std::size_t>(n))
        throw PreconditionViolated("degenerate normal frequencies; use the dark-mode analysis");

    auto fval = [&](double l) {
        double s = l - d1;
        for (Index j = 0; j < n; ++j) s += w2(j) / (f.Omega(j) - l);
        return s;
    };
    auto fder = [&](double l) {
        double s = 1.0;
        for (Index j = 0; j < n; ++j) s += w2(j) / ((f.Omega(j) - l) * (f.Omega(j) - l));
        return s;
    };

    double lo_g = d1 - f.C_AB.cwiseAbs().sum(), hi_g = d1 + f.C_AB.cwiseAbs().sum();
    for (Index j = 0; j < n; ++j) {
        lo_g = std::min(lo_g, f.Omega(j) - std::abs(f.C_AB(0, j)));
        hi_g = std::max(hi_g, f.Omega(j) + std::abs(f.C_AB(0, j)));
    }

    // f is increasing on each interval, from -inf to +inf (or finite at the
    // Gershgorin ends, where the sign is already right).
    auto bisect = [&](double lo, double hi) {
        for (int it = 0; it < 400; ++it) {
            double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) break;
            if (fval(mid) < 0.0) lo = mid;
            else hi = mid;
        }
        double flo = std::abs(fval(lo)), fhi = std::abs(fval(hi));
        return flo <= fhi ? lo : hi;
    };

    SecularDiagnostics d;
    d.eigenvalues.resize(n + 1);
    d.residuals.resize(n + 1);
    d.eigenvalues(0) = bisect(lo_g, f.Omega(0));
    for (Index j = 0; j + 1 < n; ++j) d.eigenvalues(j + 1) = bisect(f.Omega(j), f.Omega(j + 1));
    d.eigenvalues(n) = bisect(f.Omega(n - 1), hi_g);

    d.scale = std::max({std::abs(d1), f.Omega.cwiseAbs().maxCoeff(), cnorm});
    for (Index i = 0; i <= n; ++i) d.residuals(i) = std::abs(fval(d.eigenvalues(i))) / fder(d.eigenvalues(i));

    bool ok = true;
    for (Index j = 0; j < n; ++j)
        ok = ok && d.eigenvalues(j) < f.Omega(j) && f.Omega(j) < d.eigenvalues(j + 1);
    d.interlacing = ok;
    return d;
}

}  // namespace dmlab
