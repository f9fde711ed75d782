#pragma once

#include "errors.hpp"
#include "network.hpp"
#include "spectral.hpp"
#include "tolerances.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace dmlab {

// Vector convention: a dark vector d is an amplitude over the type-b normal
// modes with C_AB d = 0. The corresponding mode operator is
// D = sum_j conj(d_j) B_j; mode_operator_coefficients() gives those conj(d_j).
inline CVector mode_operator_coefficients(const CVector& d) { return d.conjugate(); }

// Amplitude over the bare b modes for a normal-basis amplitude.
inline CVector to_bare_basis(const ArrowheadForm& f, const CVector& d) { return f.U_b.adjoint() * d; }

struct DegeneracyGroup {
    double frequency = 0.0;       // group mean
    std::vector<Index> members;   // indices into Omega, ascending
};

using DegeneracyPartition = std::vector<DegeneracyGroup>;

inline DegeneracyPartition partition_degeneracies(const RVector& omega, double tol_deg) {
    for (Index i = 1; i < omega.size(); ++i)
        if (omega(i) < omega(i - 1)) throw PreconditionViolated("partition_degeneracies: Omega not ascending");
    DegeneracyPartition p;
    for (auto& run : ascending_runs(omega, tol_deg)) {
        DegeneracyGroup g;
        double s = 0.0;
        for (Index i : run) s += omega(i);
        g.frequency = s / static_cast<double>(run.size());
        g.members = std::move(run);
        p.push_back(std::move(g));
    }
    return p;
}

// Recursive bright/dark hybridization for one type-a mode. Vectors are local
// to the group (length l) and use the amplitude convention.
struct HybridizationChain {
    std::vector<CVector> bright_intermediates;  // B_{j+}, j = 1..l
    std::vector<CVector> dark;                  // B_{j-}, j = 2..l
    std::vector<double> cumulative_norms;       // G_{1j+}, j = 1..l

    const CVector& bright() const { return bright_intermediates.back(); }
};

// couplings: the G_1j of the group members, in grouping order.
inline HybridizationChain hybridization_chain(const CVector& couplings, double tol = 0.0) {
    const Index l = couplings.size();
    if (l == 0) throw PreconditionViolated("hybridization_chain: empty group");
    double scale = couplings.norm();
    for (Index j = 0; j < l; ++j)
        if (!(std::abs(couplings(j)) > tol * scale) || couplings(j) == Complex(0.0))
            throw ZeroCouplingInGroup("coupling " + std::to_string(j + 1) +
                                      " in the group is zero; strip zero columns first");

    // Recursion on mode-operator coefficients w, then conjugate to amplitudes.
    HybridizationChain ch;
    CVector e1 = CVector::Zero(l);
    e1(0) = 1.0;
    CVector w_plus = e1;          // B_{1+} = B_1, coupling G_11
    Complex g_plus = couplings(0);
    ch.bright_intermediates.push_back(w_plus.conjugate());
    ch.cumulative_norms.push_back(std::abs(g_plus));
    for (Index j = 1; j < l; ++j) {
        Complex gj = couplings(j);
        double norm = std::sqrt(std::norm(g_plus) + std::norm(gj));
        CVector ej = CVector::Zero(l);
        ej(j) = 1.0;
        CVector w_new = (g_plus * w_plus + gj * ej) / norm;
        CVector w_dark = (std::conj(gj) * w_plus - std::conj(g_plus) * ej) / norm;
        ch.dark.push_back(w_dark.conjugate());
        ch.bright_intermediates.push_back(w_new.conjugate());
        ch.cumulative_norms.push_back(norm);
        w_plus = w_new;
        g_plus = norm;
    }
    return ch;
}

struct SubspaceSplit {
    std::vector<CVector> bright;  // orthonormal basis of the coupled subspace
    std::vector<CVector> dark;    // orthonormal basis of its complement
    Index rank = 0;
};

namespace detail {

inline CVector project_out(CVector v, const std::vector<CVector>& basis) {
    // Two passes of modified Gram-Schmidt.
    for (int pass = 0; pass < 2; ++pass)
        for (const auto& b : basis) v -= b * b.dot(v);
    return v;
}

// Greedy Gram-Schmidt: repeatedly take the candidate with the largest residual.
inline void pivoted_gram_schmidt(std::vector<CVector> cands, Index take, std::vector<CVector>& basis) {
    std::vector<bool> used(cands.size(), false);
    for (Index t = 0; t < take; ++t) {
        double best = -1.0;
        std::size_t bi = 0;
        CVector bv;
        for (std::size_t i = 0; i < cands.size(); ++i) {
            if (used[i]) continue;
            CVector r = project_out(cands[i], basis);
            double nr = r.norm();
            if (nr > best) {
                best = nr;
                bi = i;
                bv = std::move(r);
            }
        }
        if (best <= 0.0) throw EigensolverFailure("Gram-Schmidt ran out of independent candidates");
        used[bi] = true;
        basis.push_back(bv / best);
    }
}

inline Index svd_rank(const CMatrix& m, double tol_rank) {
    if (m.size() == 0) return 0;
    Eigen::JacobiSVD<CMatrix> svd(m);
    const RVector& s = svd.singularValues();
    if (s.size() == 0 || s(0) == 0.0) return 0;
    Index r = 0;
    for (Index i = 0; i < s.size(); ++i)
        if (s(i) > tol_rank * s(0)) ++r;
    return r;
}

}  // namespace detail

// Bright space = span of the conjugated rows of C_sub (so that C_sub d = 0
// exactly on the complement). Rank comes from the singular values; the
// bright basis is then built by pivoted Gram-Schmidt over the rows and the
// dark complement by Gram-Schmidt over the standard basis.
inline SubspaceSplit gram_schmidt_bright_subspace(const CMatrix& C_sub, double tol_rank = 1e-10) {
    const Index l = C_sub.cols();
    SubspaceSplit s;
    s.rank = detail::svd_rank(C_sub, tol_rank);
    std::vector<CVector> rows;
    for (Index k = 0; k < C_sub.rows(); ++k) rows.push_back(C_sub.row(k).adjoint());
    std::vector<CVector> basis;
    detail::pivoted_gram_schmidt(rows, s.rank, basis);
    s.bright = basis;
    std::vector<CVector> units;
    for (Index j = 0; j < l; ++j) units.push_back(CVector::Unit(l, j));
    detail::pivoted_gram_schmidt(units, l - s.rank, basis);
    s.dark.assign(basis.begin() + s.rank, basis.end());
    return s;
}

struct DarkModeReport {
    Index M = 0;
    Index N = 0;
    DegeneracyPartition partition;
    std::vector<Index> group_ranks;
    Index bright_count = 0;
    Index dark_count = 0;
    std::vector<CVector> dark_vectors;     // length N, amplitude convention
    std::vector<CVector> bright_vectors;   // length N, in group order
    std::vector<Index> dark_group;         // group index of each dark vector
    std::vector<Index> bright_group;       // group index of each bright vector
    std::vector<Index> zero_columns;
    Tolerances tolerances;
};

inline DarkModeReport count_dark_modes(const ArrowheadForm& f, const Tolerances& tol = {}) {
    const Index M = f.M(), N = f.N();
    DarkModeReport r;
    r.M = M;
    r.N = N;
    r.tolerances = tol;
    r.partition = partition_degeneracies(f.Omega, tol.deg);

    double cnorm = f.C_AB.norm();
    std::vector<bool> zero(static_cast<std::size_t>(N), false);
    for (Index j = 0; j < N; ++j) {
        if (f.C_AB.col(j).norm() <= tol.cpl * cnorm) {
            zero[static_cast<std::size_t>(j)] = true;
            r.zero_columns.push_back(j);
        }
    }

    auto embed = [N](const CVector& local, const std::vector<Index>& idx) {
        CVector v = CVector::Zero(N);
        for (std::size_t i = 0; i < idx.size(); ++i) v(idx[i]) = local(static_cast<Index>(i));
        return v;
    };

    for (std::size_t gi = 0; gi < r.partition.size(); ++gi) {
        const auto& members = r.partition[gi].members;
        std::vector<Index> live;
        for (Index j : members) {
            if (zero[static_cast<std::size_t>(j)]) {
                r.dark_vectors.push_back(CVector::Unit(N, j));
                r.dark_group.push_back(static_cast<Index>(gi));
            } else {
                live.push_back(j);
            }
        }
        Index rank = 0;
        if (!live.empty()) {
            CMatrix sub(M, static_cast<Index>(live.size()));
            for (std::size_t i = 0; i < live.size(); ++i) sub.col(static_cast<Index>(i)) = f.C_AB.col(live[i]);
            if (M == 1) {
                HybridizationChain ch = hybridization_chain(sub.row(0).transpose(), 0.0);
                rank = 1;
                r.bright_vectors.push_back(embed(ch.bright(), live));
                r.bright_group.push_back(static_cast<Index>(gi));
                for (const auto& d : ch.dark) {
                    r.dark_vectors.push_back(embed(d, live));
                    r.dark_group.push_back(static_cast<Index>(gi));
                }
            } else {
                SubspaceSplit sp = gram_schmidt_bright_subspace(sub, tol.rank);
                rank = sp.rank;
                for (const auto& b : sp.bright) {
                    r.bright_vectors.push_back(embed(b, live));
                    r.bright_group.push_back(static_cast<Index>(gi));
                }
                for (const auto& d : sp.dark) {
                    r.dark_vectors.push_back(embed(d, live));
                    r.dark_group.push_back(static_cast<Index>(gi));
                }
            }
        }
        r.group_ranks.push_back(rank);
        r.bright_count += rank;
    }
    r.dark_count = N - r.bright_count;
    return r;
}

inline DarkModeReport count_dark_modes(const NetworkSpec& spec, const Tolerances& tol = {}) {
    return count_dark_modes(to_normal_form(spec), tol);
}

struct XiInvarianceReport {
    Index dark_count = 0;                 // with the original xi
    std::vector<Index> counts;            // one per resample
    bool constant = true;
    double max_bright_form_deviation = 0.0;  // explicit bright vectors (bare basis); moves with xi
    double max_dark_projector_deviation = 0.0;  // dark subspace (bare basis); stays put
};

namespace detail {

inline CMatrix projector(const std::vector<CVector>& vs, Index n, const CMatrix& to_bare) {
    CMatrix P = CMatrix::Zero(n, n);
    for (const auto& v : vs) {
        CVector b = to_bare * v;
        P += b * b.adjoint();
    }
    return P;
}

// Distance between two unit vectors up to a global phase.
inline double phase_free_distance(const CVector& a, const CVector& b) {
    Complex ov = a.dot(b);
    Complex ph = std::abs(ov) > 0 ? ov / std::abs(ov) : Complex(1.0);
    return (a * ph - b).norm();
}

}  // namespace detail

// Resample the type-a hopping matrix and recount. Everything else is fixed.
inline XiInvarianceReport xi_invariance_check(const NetworkSpec& spec, int trials, std::uint64_t seed = 1,
                                              const Tolerances& tol = {}) {
    require_valid(spec);
    XiInvarianceReport out;
    ArrowheadForm f0 = to_normal_form(spec);
    DarkModeReport r0 = count_dark_modes(f0, tol);
    out.dark_count = r0.dark_count;
    CMatrix Pdark0 = detail::projector(r0.dark_vectors, spec.N, f0.U_b.adjoint());

    double xscale = spec.xi.cwiseAbs().maxCoeff();
    if (xscale == 0.0) xscale = std::max(1e-2, 0.1 * spec.g.cwiseAbs().maxCoeff());
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd(0.0, xscale);
    for (int t = 0; t < trials; ++t) {
        NetworkSpec s = spec;
        s.xi.setZero();
        for (Index k = 0; k < s.M; ++k)
            for (Index kp = k + 1; kp < s.M; ++kp) s.set_xi(k, kp, Complex(nd(rng), nd(rng)));
        ArrowheadForm f = to_normal_form(s);
        DarkModeReport r = count_dark_modes(f, tol);
        out.counts.push_back(r.dark_count);
        if (r.dark_count != out.dark_count) out.constant = false;
        CMatrix Pd = detail::projector(r.dark_vectors, s.N, f.U_b.adjoint());
        out.max_dark_projector_deviation = std::max(out.max_dark_projector_deviation, (Pd - Pdark0).norm());
        std::size_t nb = std::min(r.bright_vectors.size(), r0.bright_vectors.size());
        for (std::size_t i = 0; i < nb; ++i) {
            double dev = detail::phase_free_distance(to_bare_basis(f, r.bright_vectors[i]),
                                                     to_bare_basis(f0, r0.bright_vectors[i]));
            out.max_bright_form_deviation = std::max(out.max_bright_form_deviation, dev);
        }
    }
    return out;
}

}  // namespace dmlab
