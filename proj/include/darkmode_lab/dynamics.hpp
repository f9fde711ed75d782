#pragma once

#include "errors.hpp"
#include "network.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace dmlab {

// Linearized Langevin drift matrix in the operator order
// (a_1..a_M, b_1..b_N, a_1^dag..a_M^dag, b_1^dag..b_N^dag):
//   A = -[[E, F], [conj(F), conj(E)]]
//   E = diag(kappa, gamma) + i H      (H the bare coefficient matrix)
//   F(k, M+j) = F(M+j, k) = i g_kj    (counter-rotating a b and a^dag b^dag terms)
struct DriftMatrix {
    CMatrix A;
    Index M = 0;
    Index N = 0;

    Index dim() const { return A.rows(); }
    auto E() const { return -A.topLeftCorner(M + N, M + N); }
    auto F() const { return -A.topRightCorner(M + N, M + N); }
};

inline DriftMatrix build_drift(const NetworkSpec& s) {
    CoefficientMatrix c = build_coefficient_matrix(s);  // validates
    const Index M = s.M, N = s.N, n = M + N;
    const Complex I(0.0, 1.0);
    CMatrix E = I * c.H;
    for (Index k = 0; k < M; ++k) E(k, k) += s.kappa(k);
    for (Index j = 0; j < N; ++j) E(M + j, M + j) += s.gamma(j);
    CMatrix F = CMatrix::Zero(n, n);
    for (Index k = 0; k < M; ++k)
        for (Index j = 0; j < N; ++j) {
            F(k, M + j) = I * s.g(k, j);
            F(M + j, k) = I * s.g(k, j);
        }
    DriftMatrix d;
    d.M = M;
    d.N = N;
    d.A.resize(2 * n, 2 * n);
    d.A << -E, -F, -F.conjugate(), -E.conjugate();
    return d;
}

// Q = [[0, P], [P, 0]], P = diag(kappa, gamma (2 nbar + 1)).
struct DiffusionMatrix {
    CMatrix Q;
    RVector P;
};

inline DiffusionMatrix build_diffusion(const NetworkSpec& s) {
    require_valid(s);
    const Index M = s.M, N = s.N, n = M + N;
    DiffusionMatrix d;
    d.P.resize(n);
    d.P.head(M) = s.kappa;
    for (Index j = 0; j < N; ++j) d.P(M + j) = s.gamma(j) * (2.0 * s.nbar(j) + 1.0);
    d.Q = CMatrix::Zero(2 * n, 2 * n);
    d.Q.topRightCorner(n, n) = d.P.cast<Complex>().asDiagonal();
    d.Q.bottomLeftCorner(n, n) = d.P.cast<Complex>().asDiagonal();
    return d;
}

struct StabilityReport {
    bool stable = false;
    double max_real_eig = 0.0;
};

inline StabilityReport stability(const CMatrix& A, double tol_stab = 1e-12) {
    StabilityReport r;
    if (A.rows() == 0) {
        r.stable = true;
        r.max_real_eig = -std::numeric_limits<double>::infinity();
        return r;
    }
    Eigen::ComplexEigenSolver<CMatrix> es(A, false);
    if (es.info() != Eigen::Success) throw EigensolverFailure("drift-matrix eigensolver did not converge");
    r.max_real_eig = es.eigenvalues().real().maxCoeff();
    r.stable = r.max_real_eig < -tol_stab;
    return r;
}

inline StabilityReport stability(const DriftMatrix& d, double tol_stab = 1e-12) { return stability(d.A, tol_stab); }

enum class LyapunovMethod { schur, kronecker };

inline double lyapunov_residual(const CMatrix& A, const CMatrix& V, const CMatrix& Q) {
    return (A * V + V * A.transpose() + Q).norm();
}

namespace detail {

// Bartels-Stewart on the complex Schur form: A = U T U^*, V = U W U^T,
// T W + W T^T = -U^* Q conj(U), solved column by column from the right.
inline CMatrix lyapunov_schur(const CMatrix& A, const CMatrix& Q, double tol_stab) {
    const Index n = A.rows();
    Eigen::ComplexSchur<CMatrix> cs(A);
    if (cs.info() != Eigen::Success) throw EigensolverFailure("complex Schur decomposition did not converge");
    const CMatrix& T = cs.matrixT();
    const CMatrix& U = cs.matrixU();

    double maxre = T.diagonal().real().maxCoeff();
    if (!(maxre < -tol_stab)) throw UnstableSystem("drift matrix is not stable (max Re eig = " + std::to_string(maxre) + ")");
    double floor = 1e-13 * std::max(1.0, A.norm());
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j)
            if (std::abs(T(i, i) + T(j, j)) <= floor)
                throw SingularKroneckerSystem("eigenvalue pair sums to zero; Lyapunov equation is singular");

    CMatrix C = -U.adjoint() * Q * U.conjugate();
    CMatrix W = CMatrix::Zero(n, n);
    for (Index j = n - 1; j >= 0; --j) {
        CVector rhs = C.col(j);
        for (Index k = j + 1; k < n; ++k) rhs -= T(j, k) * W.col(k);
        // Back substitution with (T + T_jj I).
        for (Index i = n - 1; i >= 0; --i) {
            Complex acc = rhs(i);
            for (Index k = i + 1; k < n; ++k) acc -= T(i, k) * W(k, j);
            W(i, j) = acc / (T(i, i) + T(j, j));
        }
    }
    return U * W * U.transpose();
}

// (I kron A + A kron I) vec(V) = -vec(Q), column-major vec.
inline CMatrix lyapunov_kronecker(const CMatrix& A, const CMatrix& Q, double tol_stab) {
    const Index n = A.rows();
    if (!stability(A, tol_stab).stable) throw UnstableSystem("drift matrix is not stable");
    const Index nn = n * n;
    CMatrix K = CMatrix::Zero(nn, nn);
    for (Index j = 0; j < n; ++j)
        for (Index i = 0; i < n; ++i) {
            Index row = j * n + i;  // V(i, j)
            for (Index k = 0; k < n; ++k) {
                K(row, j * n + k) += A(i, k);  // (A V)(i, j)
                K(row, k * n + i) += A(j, k);  // (V A^T)(i, j)
            }
        }
    Eigen::PartialPivLU<CMatrix> lu(K);
    if (!(lu.rcond() > 1e-14)) throw SingularKroneckerSystem("Kronecker system is numerically singular");
    CVector q = Eigen::Map<const CVector>(Q.data(), nn);
    CVector v = lu.solve(-q);
    return Eigen::Map<CMatrix>(v.data(), n, n);
}

}  // namespace detail

// Solves A V + V A^T = -Q (plain transpose). Requires a stable A.
inline CMatrix solve_lyapunov(const CMatrix& A, const CMatrix& Q, LyapunovMethod method = LyapunovMethod::schur,
                              double tol_stab = 1e-12) {
    if (A.rows() != A.cols() || Q.rows() != A.rows() || Q.cols() != A.cols())
        throw DimensionMismatch("solve_lyapunov: A and Q must be square and the same size");
    if (A.rows() == 0) return CMatrix(0, 0);
    return method == LyapunovMethod::schur ? detail::lyapunov_schur(A, Q, tol_stab)
                                           : detail::lyapunov_kronecker(A, Q, tol_stab);
}

struct CoolingResult {
    bool stable = false;
    double max_real_eig = 0.0;
    CMatrix A;
    CMatrix V;              // empty when unstable
    RVector n_f;            // empty when unstable
    double imag_residual = 0.0;
    double lyapunov_residual = 0.0;
};

// n_j = V(2M+N+j, M+j) - 1/2 with 1-based j, i.e. <b_j^dag b_j>.
inline CoolingResult final_phonon_numbers(const NetworkSpec& s, LyapunovMethod method = LyapunovMethod::schur,
                                          double tol_stab = 1e-12) {
    DriftMatrix d = build_drift(s);
    DiffusionMatrix q = build_diffusion(s);
    CoolingResult r;
    r.A = d.A;
    StabilityReport st = stability(d.A, tol_stab);
    r.stable = st.stable;
    r.max_real_eig = st.max_real_eig;
    if (!st.stable) return r;
    try {
        r.V = solve_lyapunov(d.A, q.Q, method, tol_stab);
    } catch (const UnstableSystem&) {
        r.stable = false;
        return r;
    }
    r.lyapunov_residual = lyapunov_residual(d.A, r.V, q.Q);
    const Index M = s.M, N = s.N;
    r.n_f.resize(N);
    for (Index j = 0; j < N; ++j) {
        Complex v = r.V(2 * M + N + j, M + j);
        r.n_f(j) = v.real() - 0.5;
        r.imag_residual = std::max(r.imag_residual, std::abs(v.imag()));
    }
    return r;
}

// Pre-linearization model: cavities driven at amplitude Lambda_k, detunings
// measured from the drive, single-photon optomechanical couplings g0(k, j).
struct DrivenModel {
    CVector drive;        // Lambda_k, length M
    RVector detuning;     // bare cavity detunings, length M
    RVector omega;        // mechanical frequencies, length N (may be 0)
    CMatrix xi;           // M x M
    CMatrix eta;          // N x N
    Eigen::MatrixXd g0;   // M x N
    RVector kappa;        // length M
    RVector gamma;        // length N
};

struct SteadyStateOptions {
    double damping = 0.5;
    int max_iterations = 100000;
    double rel_tol = 1e-10;
    // Restart scales for the mechanical means when probing for other fixed points.
    std::vector<double> probe_scales = {-1.0, 0.5, 2.0};
};

struct SteadyStateMeans {
    CVector a;
    CVector b;
    RVector delta;        // effective detunings
    CMatrix g_linear;     // g0(k, j) <a_k>
    double residual = 0.0;
    int iterations = 0;
    bool multistable = false;
    std::vector<CVector> other_b;   // distinct fixed points found by probing
};

namespace detail {

struct MeanState {
    CVector a, b;
    RVector delta;
};

inline RVector effective_detuning(const DrivenModel& m, const CVector& b) {
    RVector d = m.detuning;
    for (Index k = 0; k < d.size(); ++k)
        for (Index j = 0; j < b.size(); ++j) d(k) += m.g0(k, j) * 2.0 * b(j).real();
    return d;
}

inline CVector solve_cavity(const DrivenModel& m, const RVector& delta) {
    const Complex I(0.0, 1.0);
    const Index M = m.drive.size();
    CMatrix L = I * m.xi;
    for (Index k = 0; k < M; ++k) L(k, k) = Complex(m.kappa(k), delta(k));
    return L.partialPivLu().solve(-I * m.drive);
}

inline CVector solve_mechanics(const DrivenModel& m, const CVector& a) {
    const Complex I(0.0, 1.0);
    const Index N = m.omega.size();
    if (N == 0) return CVector(0);
    CMatrix L = I * m.eta;
    for (Index j = 0; j < N; ++j) L(j, j) = Complex(m.gamma(j), m.omega(j));
    CVector src = CVector::Zero(N);
    for (Index j = 0; j < N; ++j)
        for (Index k = 0; k < a.size(); ++k) src(j) += m.g0(k, j) * std::norm(a(k));
    return L.partialPivLu().solve(-I * src);
}

// Largest absolute residual of the 2(M+N) mean-value equations.
inline double mean_residual(const DrivenModel& m, const CVector& a, const CVector& b) {
    const Complex I(0.0, 1.0);
    RVector delta = effective_detuning(m, b);
    double r = 0.0;
    for (Index k = 0; k < a.size(); ++k) {
        Complex e = Complex(m.kappa(k), delta(k)) * a(k) + I * m.drive(k);
        for (Index kp = 0; kp < a.size(); ++kp) e += I * m.xi(k, kp) * a(kp);
        r = std::max(r, std::abs(e));
    }
    for (Index j = 0; j < b.size(); ++j) {
        Complex e = Complex(m.gamma(j), m.omega(j)) * b(j);
        for (Index jp = 0; jp < b.size(); ++jp) e += I * m.eta(j, jp) * b(jp);
        for (Index k = 0; k < a.size(); ++k) e += I * m.g0(k, j) * std::norm(a(k));
        r = std::max(r, std::abs(e));
    }
    return r;
}

inline MeanState iterate_means(const DrivenModel& m, CVector b, const SteadyStateOptions& opt, double target,
                               int& iterations, double& residual) {
    MeanState st;
    for (iterations = 0; iterations < opt.max_iterations; ++iterations) {
        st.delta = effective_detuning(m, b);
        st.a = solve_cavity(m, st.delta);
        residual = mean_residual(m, st.a, b);
        if (residual <= target) {
            st.b = b;
            return st;
        }
        CVector bn = solve_mechanics(m, st.a);
        b = opt.damping * b + (1.0 - opt.damping) * bn;
    }
    throw NoConvergence("steady-state mean iteration did not converge", residual);
}

}  // namespace detail

inline SteadyStateMeans steady_state_means(const DrivenModel& m, const SteadyStateOptions& opt = {}) {
    const Index M = m.drive.size(), N = m.omega.size();
    if (m.detuning.size() != M || m.kappa.size() != M || m.xi.rows() != M || m.xi.cols() != M ||
        m.gamma.size() != N || m.eta.rows() != N || m.eta.cols() != N || m.g0.rows() != M || m.g0.cols() != N)
        throw DimensionMismatch("steady_state_means: inconsistent model dimensions");
    if (!((M == 0 || m.kappa.minCoeff() > 0.0) && (N == 0 || m.gamma.minCoeff() > 0.0)))
        throw PreconditionViolated("steady_state_means needs positive dissipation");

    double target = opt.rel_tol * std::max(M ? m.drive.cwiseAbs().maxCoeff() : 0.0, 1.0);
    // Start from the uncoupled solution: cavity at bare detuning, mechanics at rest.
    CVector b0 = CVector::Zero(N);
    SteadyStateMeans out;
    detail::MeanState st = detail::iterate_means(m, b0, opt, target, out.iterations, out.residual);
    out.a = st.a;
    out.b = st.b;
    out.delta = st.delta;
    out.g_linear = CMatrix::Zero(M, N);
    for (Index k = 0; k < M; ++k)
        for (Index j = 0; j < N; ++j) out.g_linear(k, j) = m.g0(k, j) * out.a(k);

    if (N > 0 && out.b.norm() > 0.0) {
        double scale = std::max(out.b.norm(), 1e-300);
        for (double s : opt.probe_scales) {
            int it = 0;
            double res = 0.0;
            try {
                detail::MeanState p = detail::iterate_means(m, s * out.b, opt, target, it, res);
                bool seen = (p.b - out.b).norm() <= 1e-6 * scale;
                for (const auto& o : out.other_b) seen = seen || (p.b - o).norm() <= 1e-6 * scale;
                if (!seen) {
                    out.other_b.push_back(p.b);
                    out.multistable = true;
                }
            } catch (const NoConvergence&) {
            }
        }
    }
    return out;
}

}  // namespace dmlab
