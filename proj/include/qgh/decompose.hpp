#pragma once

#include <optional>
#include <vector>

#include "qgh/algebra.hpp"
#include "qgh/rng.hpp"

namespace qgh {

namespace detail {

inline cplx hs_inner(const Mat& a, const Mat& b) { return (a.conjugate().cwiseProduct(b)).sum(); }
inline double hs_norm(const Mat& a) { return a.norm(); }

/// Gram-Schmidt append: orthogonalize `cand` against `basis` (HS inner
/// product) and append the normalized residual when it is nonnegligible.
inline bool gs_append(std::vector<Mat>& basis, Mat cand, double tol) {
    double scale = std::max(1.0, hs_norm(cand));
    for (int pass = 0; pass < 2; ++pass)
        for (const auto& b : basis) cand -= hs_inner(b, cand) * b;
    double r = hs_norm(cand);
    if (r <= tol * scale) return false;
    basis.push_back(cand / r);
    return true;
}

/// Real-coefficient variant for bases of Hermitian matrices (a real vector
/// space; complex coefficients would break Hermiticity).
inline bool gs_append_hermitian(std::vector<Mat>& basis, Mat cand, double tol) {
    double scale = std::max(1.0, hs_norm(cand));
    for (int pass = 0; pass < 2; ++pass)
        for (const auto& b : basis) cand -= std::real(hs_inner(b, cand)) * b;
    double r = hs_norm(cand);
    if (r <= tol * scale) return false;
    basis.push_back(cand / r);
    return true;
}

}  // namespace detail

/// Hilbert-Schmidt-orthonormal basis of the unital *-algebra generated by the
/// given ambient matrices: the linear span of all words in the generators and
/// their adjoints, grown by left multiplication until the dimension
/// stabilizes.
inline std::vector<Mat> star_algebra_basis(const std::vector<Mat>& generators, int D,
                                           double tol = 1e-9) {
    std::vector<Mat> gens;
    for (const auto& g : generators) {
        if (g.rows() != D || g.cols() != D) throw std::invalid_argument("generator has wrong shape");
        gens.push_back(g);
        gens.push_back(g.adjoint());
    }
    std::vector<Mat> basis;
    detail::gs_append(basis, Mat::Identity(D, D), tol);
    std::size_t frontier = 0;
    // Seed with the generators themselves.
    for (const auto& g : gens) detail::gs_append(basis, g, tol);
    while (frontier < basis.size() && static_cast<int>(basis.size()) < D * D) {
        std::size_t end = basis.size();
        for (std::size_t i = frontier; i < end; ++i)
            for (const auto& g : gens) {
                detail::gs_append(basis, g * basis[i], tol);
                if (static_cast<int>(basis.size()) >= D * D) break;
            }
        frontier = end;
    }
    return basis;
}

struct BlockStructure {
    std::vector<int> dims;
    std::vector<int> mults;
    Mat basis_unitary;
};

namespace detail {

/// Cluster sorted eigenvalues into groups separated by gaps above tol.
inline std::vector<std::pair<int, int>> cluster_ranges(const Eigen::VectorXd& sorted, double tol) {
    std::vector<std::pair<int, int>> out;
    int start = 0;
    for (int i = 1; i <= sorted.size(); ++i) {
        if (i == sorted.size() || sorted(i) - sorted(i - 1) > tol) {
            out.emplace_back(start, i);
            start = i;
        }
    }
    return out;
}

/// Orthonormal columns spanning the range of an (approximate) orthogonal
/// projection of known rank.
inline Mat range_basis(const Mat& P, int rank) {
    Eigen::SelfAdjointEigenSolver<Mat> es(P);
    int D = static_cast<int>(P.rows());
    Mat cols(D, rank);
    for (int i = 0; i < rank; ++i) cols.col(i) = es.eigenvectors().col(D - 1 - i);
    return cols;
}

}  // namespace detail

/// Block decomposition of a *-closed unital matrix algebra: a unitary V and
/// integers (d_k, m_k) with  A = V (⊕_k M_{d_k} ⊗ I_{m_k}) V*.  The minimal
/// central projections come from a generic element of the center, the
/// within-block matrix units from polar parts of generic corner elements.
/// Randomized steps are seeded and retried on validation failure.
inline BlockStructure block_structure(const std::vector<Mat>& basis, const std::vector<Mat>& generators,
                                      int D, std::uint64_t seed = 0xb10c5) {
    int A = static_cast<int>(basis.size());
    if (A == D * D) return {{D}, {1}, Mat::Identity(D, D)};
    if (A == 1) return {{1}, {D}, Mat::Identity(D, D)};

    // Center: z = Σ c_j basis_j with [z, g] = 0 for every generator.
    std::vector<Mat> gens;
    for (const auto& g : generators) {
        gens.push_back(g);
        gens.push_back(g.adjoint());
    }
    Mat commutator_map(static_cast<long>(gens.size()) * D * D, A);
    for (int j = 0; j < A; ++j) {
        long row = 0;
        for (const auto& g : gens) {
            Mat c = basis[j] * g - g * basis[j];
            for (int rr = 0; rr < D; ++rr)
                for (int cc = 0; cc < D; ++cc) commutator_map(row++, j) = c(rr, cc);
        }
    }
    Eigen::JacobiSVD<Mat> csvd(commutator_map, Eigen::ComputeThinV);
    double smax = csvd.singularValues().maxCoeff();
    std::vector<int> null_cols;
    for (int i = 0; i < csvd.singularValues().size(); ++i)
        if (csvd.singularValues()(i) <= 1e-8 * std::max(1.0, smax)) null_cols.push_back(i);
    int r = static_cast<int>(null_cols.size());
    if (r < 1) throw std::runtime_error("center detection failed");

    std::vector<Mat> center_herm;
    for (int idx : null_cols) {
        Mat z = Mat::Zero(D, D);
        for (int j = 0; j < A; ++j) z += csvd.matrixV()(j, idx) * basis[j];
        detail::gs_append_hermitian(center_herm, 0.5 * (z + z.adjoint()), 1e-8);
        detail::gs_append_hermitian(center_herm, cplx(0, -0.5) * (z - z.adjoint()), 1e-8);
    }
    if (static_cast<int>(center_herm.size()) != r)
        throw std::runtime_error("center has unexpected real dimension");

    auto project_onto_algebra_defect = [&](const Mat& x) {
        Mat res = x;
        for (const auto& b : basis) res -= detail::hs_inner(b, x) * b;
        return detail::hs_norm(res);
    };

    for (int attempt = 0; attempt < 12; ++attempt) {
        Rng rng(seed, 100 + attempt);

        // Minimal central projections from a generic Hermitian center element.
        Mat h = Mat::Zero(D, D);
        for (const auto& c : center_herm) h += rng.uniform() * c;
        Eigen::SelfAdjointEigenSolver<Mat> es(h);
        double spread = es.eigenvalues().maxCoeff() - es.eigenvalues().minCoeff();
        auto clusters = detail::cluster_ranges(es.eigenvalues(), std::max(1e-10, 1e-6 * spread));
        if (static_cast<int>(clusters.size()) != r) continue;

        std::vector<Mat> projections;
        bool ok = true;
        for (auto [lo, hi] : clusters) {
            Mat P = Mat::Zero(D, D);
            for (int i = lo; i < hi; ++i)
                P += es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
            if ((P * P - P).norm() > 1e-8 || project_onto_algebra_defect(P) > 1e-6) {
                ok = false;
                break;
            }
            projections.push_back(std::move(P));
        }
        if (!ok) continue;

        std::vector<int> dims, mults;
        Mat V = Mat::Zero(D, D);
        int col_off = 0;
        for (const auto& P : projections) {
            int rank = static_cast<int>(std::lround(P.trace().real()));
            Mat B = detail::range_basis(P, rank);  // D x rank

            // Corner algebra P A P in the range basis.
            std::vector<Mat> corner;
            for (const auto& b : basis) detail::gs_append(corner, Mat(B.adjoint() * b * B), 1e-8);
            int dim_i = static_cast<int>(corner.size());
            int d = static_cast<int>(std::lround(std::sqrt(static_cast<double>(dim_i))));
            if (d * d != dim_i || rank % d != 0) {
                ok = false;
                break;
            }
            int m = rank / d;
            dims.push_back(d);
            mults.push_back(m);

            Mat Vi(rank, d * m);
            if (d == 1) {
                Vi = Mat::Identity(rank, rank);
            } else {
                // Diagonal units from a generic Hermitian corner element.
                Mat hc = Mat::Zero(rank, rank);
                for (const auto& c : corner) {
                    cplx w(2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0);
                    hc += w * c;
                }
                hc = 0.5 * (hc + Mat(hc.adjoint()));
                Eigen::SelfAdjointEigenSolver<Mat> hes(hc);
                double hspread = hes.eigenvalues().maxCoeff() - hes.eigenvalues().minCoeff();
                auto hclusters =
                    detail::cluster_ranges(hes.eigenvalues(), std::max(1e-10, 1e-6 * hspread));
                if (static_cast<int>(hclusters.size()) != d) {
                    ok = false;
                    break;
                }
                std::vector<Mat> Y;  // rank x m range bases of the diagonal units
                for (auto [lo, hi] : hclusters) {
                    if (hi - lo != m) {
                        ok = false;
                        break;
                    }
                    Mat y(rank, m);
                    for (int i = lo; i < hi; ++i) y.col(i - lo) = hes.eigenvectors().col(i);
                    Y.push_back(std::move(y));
                }
                if (!ok) break;

                // Generic corner element; polar parts of q_r x q_1 give the
                // partial isometries linking the diagonal units.
                Mat x = Mat::Zero(rank, rank);
                for (const auto& c : corner) {
                    cplx w(2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0);
                    x += w * c;
                }
                for (int rr = 0; rr < d; ++rr) {
                    Mat u;
                    if (rr == 0) {
                        u = Mat::Identity(m, m);
                    } else {
                        Mat w = Y[rr].adjoint() * x * Y[0];  // m x m
                        Eigen::JacobiSVD<Mat> wsvd(w, Eigen::ComputeFullU | Eigen::ComputeFullV);
                        if (wsvd.singularValues().minCoeff() < 1e-8) {
                            ok = false;
                            break;
                        }
                        u = wsvd.matrixU() * wsvd.matrixV().adjoint();
                    }
                    Vi.middleCols(rr * m, m) = Y[rr] * u;
                }
                if (!ok) break;
            }
            V.middleCols(col_off, d * m) = B * Vi;
            col_off += d * m;
        }
        if (!ok || col_off != D) continue;

        if ((V.adjoint() * V - Mat::Identity(D, D)).norm() > 1e-7) continue;

        // Validate: conjugating every generator into the canonical layout and
        // back must reproduce it.
        auto alg = FiniteVNAlgebra::with_representation(dims, mults, V);
        bool valid = true;
        for (const auto& g : generators)
            if ((embed(extract(alg, g)) - g).norm() > 1e-6 * std::max(1.0, g.norm())) {
                valid = false;
                break;
            }
        if (!valid) continue;

        return {dims, mults, V};
    }
    throw std::runtime_error("block decomposition did not converge");
}

/// The unital *-algebra generated by ambient matrices, as a FiniteVNAlgebra
/// with its block structure recovered, carrying the given distinguished
/// vector.
inline AlgebraPtr algebra_from_generators(const std::vector<Mat>& generators, int D,
                                          std::optional<Vec> omega = std::nullopt,
                                          std::uint64_t seed = 0xb10c5) {
    auto basis = star_algebra_basis(generators, D);
    auto bs = block_structure(basis, generators, D, seed);
    return FiniteVNAlgebra::with_representation(bs.dims, bs.mults, bs.basis_unitary, std::move(omega));
}

}  // namespace qgh
