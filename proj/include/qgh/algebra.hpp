#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <array>
#include <memory>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "qgh/util.hpp"

namespace qgh {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

class FiniteVNAlgebra;
using AlgebraPtr = std::shared_ptr<const FiniteVNAlgebra>;

/// A finite-dimensional von Neumann algebra: a direct sum of full matrix
/// blocks ⊕_k M_{d_k}, realized on an ambient Hilbert space through
///
///     x  ↦  V · diag_k( x_k ⊗ I_{m_k} ) · V*
///
/// with per-block multiplicities m_k and a unitary change of basis V. This
/// form covers every unital *-isometric embedding of the algebra into the
/// ambient matrix algebra. The distinguished vector Ω, when present, carries
/// a separating flag (x Ω = 0 forces x = 0).
class FiniteVNAlgebra : public std::enable_shared_from_this<FiniteVNAlgebra> {
public:
    /// Block-diagonal realization: multiplicities 1, V = identity.
    static AlgebraPtr blocks(std::vector<int> dims) {
        int total = std::accumulate(dims.begin(), dims.end(), 0);
        return with_representation(std::move(dims), std::vector<int>(), Mat::Identity(total, total));
    }

    static AlgebraPtr with_representation(std::vector<int> dims, std::vector<int> mults, Mat basis,
                                          std::optional<Vec> omega = std::nullopt) {
        if (dims.empty()) throw std::invalid_argument("algebra needs at least one block");
        if (mults.empty()) mults.assign(dims.size(), 1);
        if (mults.size() != dims.size()) throw std::invalid_argument("block/multiplicity count mismatch");
        long total = 0;
        for (std::size_t k = 0; k < dims.size(); ++k) {
            if (dims[k] <= 0 || mults[k] <= 0) throw std::invalid_argument("block dims and multiplicities must be positive");
            total += static_cast<long>(dims[k]) * mults[k];
        }
        if (basis.rows() != total || basis.cols() != total)
            throw std::invalid_argument("basis unitary has wrong shape for the declared blocks");
        auto alg = std::shared_ptr<FiniteVNAlgebra>(new FiniteVNAlgebra());
        alg->block_dims_ = std::move(dims);
        alg->mults_ = std::move(mults);
        alg->basis_ = std::move(basis);
        alg->ambient_dim_ = static_cast<int>(total);
        alg->identity_basis_ = alg->basis_.isIdentity(0.0);
        if (omega) {
            if (omega->size() != total) throw std::invalid_argument("omega has wrong dimension");
            alg->omega_ = std::move(*omega);
        }
        return alg;
    }

    const std::vector<int>& block_dims() const { return block_dims_; }
    const std::vector<int>& multiplicities() const { return mults_; }
    int ambient_dim() const { return ambient_dim_; }
    int num_blocks() const { return static_cast<int>(block_dims_.size()); }
    const Mat& basis() const { return basis_; }
    bool has_omega() const { return omega_.has_value(); }
    const Vec& omega() const {
        if (!omega_) throw std::logic_error("algebra has no distinguished vector");
        return *omega_;
    }

    /// Linear dimension Σ d_k² of the algebra as a vector space.
    int dim() const {
        int s = 0;
        for (int d : block_dims_) s += d * d;
        return s;
    }

    AlgebraPtr ptr() const { return shared_from_this(); }

private:
    FiniteVNAlgebra() = default;
    std::vector<int> block_dims_;
    std::vector<int> mults_;
    Mat basis_;
    int ambient_dim_ = 0;
    bool identity_basis_ = true;
    std::optional<Vec> omega_;

    friend bool same_algebra(const FiniteVNAlgebra&, const FiniteVNAlgebra&);

public:
    bool identity_basis() const { return identity_basis_; }
};

inline bool same_algebra(const FiniteVNAlgebra& a, const FiniteVNAlgebra& b) {
    if (&a == &b) return true;
    return a.block_dims_ == b.block_dims_ && a.mults_ == b.mults_ &&
           a.ambient_dim_ == b.ambient_dim_ && a.basis_ == b.basis_;
}

/// An element of a FiniteVNAlgebra, stored blockwise.
class AlgebraElement {
public:
    AlgebraElement() = default;
    AlgebraElement(AlgebraPtr parent, std::vector<Mat> blocks)
        : parent_(std::move(parent)), blocks_(std::move(blocks)) {
        const auto& dims = parent_->block_dims();
        if (blocks_.size() != dims.size()) throw algebra_mismatch("block count mismatch");
        for (std::size_t k = 0; k < dims.size(); ++k)
            if (blocks_[k].rows() != dims[k] || blocks_[k].cols() != dims[k])
                throw algebra_mismatch("block dimension mismatch");
    }

    static AlgebraElement zero(const AlgebraPtr& alg) {
        std::vector<Mat> b;
        for (int d : alg->block_dims()) b.push_back(Mat::Zero(d, d));
        return AlgebraElement(alg, std::move(b));
    }

    static AlgebraElement identity(const AlgebraPtr& alg) {
        std::vector<Mat> b;
        for (int d : alg->block_dims()) b.push_back(Mat::Identity(d, d));
        return AlgebraElement(alg, std::move(b));
    }

    /// Matrix-unit basis element: entry (r, c) of block k.
    static AlgebraElement unit(const AlgebraPtr& alg, int k, int r, int c) {
        AlgebraElement e = zero(alg);
        e.blocks_[k](r, c) = 1.0;
        return e;
    }

    const AlgebraPtr& parent() const { return parent_; }
    const std::vector<Mat>& blocks() const { return blocks_; }
    const Mat& block(int k) const { return blocks_[k]; }

    AlgebraElement adjoint() const {
        std::vector<Mat> b;
        b.reserve(blocks_.size());
        for (const auto& m : blocks_) b.push_back(m.adjoint());
        return AlgebraElement(parent_, std::move(b));
    }

    AlgebraElement operator+(const AlgebraElement& o) const {
        require_same(o);
        std::vector<Mat> b;
        b.reserve(blocks_.size());
        for (std::size_t k = 0; k < blocks_.size(); ++k) b.push_back(blocks_[k] + o.blocks_[k]);
        return AlgebraElement(parent_, std::move(b));
    }

    AlgebraElement operator-(const AlgebraElement& o) const {
        require_same(o);
        std::vector<Mat> b;
        b.reserve(blocks_.size());
        for (std::size_t k = 0; k < blocks_.size(); ++k) b.push_back(blocks_[k] - o.blocks_[k]);
        return AlgebraElement(parent_, std::move(b));
    }

    AlgebraElement operator*(const AlgebraElement& o) const {
        require_same(o);
        std::vector<Mat> b;
        b.reserve(blocks_.size());
        for (std::size_t k = 0; k < blocks_.size(); ++k) b.push_back(blocks_[k] * o.blocks_[k]);
        return AlgebraElement(parent_, std::move(b));
    }

    AlgebraElement operator*(cplx s) const {
        std::vector<Mat> b;
        b.reserve(blocks_.size());
        for (const auto& m : blocks_) b.push_back(s * m);
        return AlgebraElement(parent_, std::move(b));
    }

    AlgebraElement operator-() const { return *this * cplx(-1.0, 0.0); }

    friend AlgebraElement operator*(cplx s, const AlgebraElement& x) { return x * s; }

    /// Coordinates: all block entries stacked row-major, blocks in order.
    Vec coords() const {
        Vec v(parent_->dim());
        int off = 0;
        for (const auto& m : blocks_)
            for (int r = 0; r < m.rows(); ++r)
                for (int c = 0; c < m.cols(); ++c) v(off++) = m(r, c);
        return v;
    }

    static AlgebraElement from_coords(const AlgebraPtr& alg, const Vec& v) {
        if (v.size() != alg->dim()) throw algebra_mismatch("coordinate vector has wrong length");
        std::vector<Mat> b;
        int off = 0;
        for (int d : alg->block_dims()) {
            Mat m(d, d);
            for (int r = 0; r < d; ++r)
                for (int c = 0; c < d; ++c) m(r, c) = v(off++);
            b.push_back(std::move(m));
        }
        return AlgebraElement(alg, std::move(b));
    }

private:
    void require_same(const AlgebraElement& o) const {
        if (parent_ == o.parent_) return;
        if (!parent_ || !o.parent_ || !same_algebra(*parent_, *o.parent_))
            throw algebra_mismatch("elements belong to different algebras");
    }

    AlgebraPtr parent_;
    std::vector<Mat> blocks_;
};

/// Operator norm: max over blocks of the largest singular value.
inline double op_norm(const AlgebraElement& x) {
    double best = 0.0;
    for (const auto& m : x.blocks()) {
        if (m.rows() == 1) {
            best = std::max(best, std::abs(m(0, 0)));
            continue;
        }
        Eigen::JacobiSVD<Mat> svd(m);
        best = std::max(best, svd.singularValues()(0));
    }
    return best;
}

/// Ambient matrix V · diag_k(x_k ⊗ I_{m_k}) · V*.
inline Mat embed(const AlgebraElement& x) {
    const auto& alg = *x.parent();
    int D = alg.ambient_dim();
    Mat B = Mat::Zero(D, D);
    int off = 0;
    for (int k = 0; k < alg.num_blocks(); ++k) {
        int d = alg.block_dims()[k], m = alg.multiplicities()[k];
        const Mat& blk = x.block(k);
        for (int r = 0; r < d; ++r)
            for (int c = 0; c < d; ++c)
                for (int s = 0; s < m; ++s) B(off + r * m + s, off + c * m + s) = blk(r, c);
        off += d * m;
    }
    if (alg.identity_basis()) return B;
    return alg.basis() * B * alg.basis().adjoint();
}

/// E(x)·v without materializing the ambient matrix.
inline Vec act(const AlgebraElement& x, const Vec& v) {
    const auto& alg = *x.parent();
    if (v.size() != alg.ambient_dim()) throw algebra_mismatch("vector has wrong ambient dimension");
    Vec w = alg.identity_basis() ? v : Vec(alg.basis().adjoint() * v);
    Vec out(v.size());
    int off = 0;
    for (int k = 0; k < alg.num_blocks(); ++k) {
        int d = alg.block_dims()[k], m = alg.multiplicities()[k];
        Eigen::Map<const Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
            slice(w.data() + off, d, m);
        Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> res = x.block(k) * slice;
        for (int r = 0; r < d; ++r)
            for (int s = 0; s < m; ++s) out(off + r * m + s) = res(r, s);
        off += d * m;
    }
    if (!alg.identity_basis()) out = alg.basis() * out;
    return out;
}

/// Pull an ambient matrix known to lie in the algebra back to block
/// coordinates, averaging over multiplicity copies.
inline AlgebraElement extract(const AlgebraPtr& alg, const Mat& ambient) {
    Mat B = alg->identity_basis() ? ambient : Mat(alg->basis().adjoint() * ambient * alg->basis());
    std::vector<Mat> blocks;
    int off = 0;
    for (int k = 0; k < alg->num_blocks(); ++k) {
        int d = alg->block_dims()[k], m = alg->multiplicities()[k];
        Mat blk = Mat::Zero(d, d);
        for (int r = 0; r < d; ++r)
            for (int c = 0; c < d; ++c) {
                cplx acc = 0.0;
                for (int s = 0; s < m; ++s) acc += B(off + r * m + s, off + c * m + s);
                blk(r, c) = acc / static_cast<double>(m);
            }
        blocks.push_back(std::move(blk));
        off += d * m;
    }
    return AlgebraElement(alg, std::move(blocks));
}

/// True iff x is Hermitian within tol and its spectrum lies in [-tol, 1+tol].
inline bool is_positive_contraction(const AlgebraElement& x, double tol) {
    if (tol < 0) throw std::invalid_argument("tolerance must be nonnegative");
    for (const auto& m : x.blocks()) {
        double herm_defect = (m - m.adjoint()).cwiseAbs().maxCoeff();
        if (herm_defect > tol) return false;
        Mat h = 0.5 * (m + m.adjoint());
        Eigen::SelfAdjointEigenSolver<Mat> es(h, Eigen::EigenvaluesOnly);
        double lo = es.eigenvalues().minCoeff(), hi = es.eigenvalues().maxCoeff();
        if (lo < -tol || hi > 1.0 + tol) return false;
    }
    return true;
}

/// Hermitian real/imaginary split followed by Jordan (spectral) positive /
/// negative parts: x = p1 - n1 + i (p2 - n2) with every part a positive
/// contraction. Requires ‖x‖ ≤ 1.
struct CanonicalParts {
    AlgebraElement pos_re, neg_re, pos_im, neg_im;
};

inline CanonicalParts canonical_decomposition(const AlgebraElement& x) {
    if (op_norm(x) > 1.0 + 1e-12) throw std::invalid_argument("canonical decomposition requires a contraction");
    auto jordan = [](const AlgebraElement& h) {
        std::vector<Mat> pos, neg;
        for (const auto& m : h.blocks()) {
            Eigen::SelfAdjointEigenSolver<Mat> es(m);
            Eigen::VectorXd ev = es.eigenvalues();
            Eigen::VectorXd evp = ev.cwiseMax(0.0), evn = (-ev).cwiseMax(0.0);
            pos.push_back(es.eigenvectors() * evp.asDiagonal() * es.eigenvectors().adjoint());
            neg.push_back(es.eigenvectors() * evn.asDiagonal() * es.eigenvectors().adjoint());
        }
        return std::pair(AlgebraElement(h.parent(), std::move(pos)),
                         AlgebraElement(h.parent(), std::move(neg)));
    };
    AlgebraElement re = (x + x.adjoint()) * cplx(0.5, 0.0);
    AlgebraElement im = (x - x.adjoint()) * cplx(0.0, -0.5);
    auto [p1, n1] = jordan(re);
    auto [p2, n2] = jordan(im);
    return CanonicalParts{std::move(p1), std::move(n1), std::move(p2), std::move(n2)};
}

/// Rank test for the separating property of Ω: the map x ↦ E(x)Ω on a basis
/// of the algebra must have full column rank (singular values > 1e-10).
inline bool omega_is_separating(const AlgebraPtr& alg) {
    if (!alg->has_omega()) return false;
    int n = alg->dim(), D = alg->ambient_dim();
    if (n > D) return false;
    Mat map(D, n);
    int col = 0;
    for (int k = 0; k < alg->num_blocks(); ++k)
        for (int r = 0; r < alg->block_dims()[k]; ++r)
            for (int c = 0; c < alg->block_dims()[k]; ++c)
                map.col(col++) = act(AlgebraElement::unit(alg, k, r, c), alg->omega());
    Eigen::JacobiSVD<Mat> svd(map);
    return svd.singularValues().minCoeff() > 1e-10;
}

/// 2x2 amplification M_2(M): every block dimension doubled, together with the
/// entry-extraction and slot-embedding maps e_ij ⊗ a.
class Amplification {
public:
    explicit Amplification(AlgebraPtr base) : base_(std::move(base)) {
        std::vector<int> dims;
        for (int d : base_->block_dims()) dims.push_back(2 * d);
        std::vector<int> mults = base_->multiplicities();
        int D2 = 2 * base_->ambient_dim();
        // Canonical basis for M_2(M) on C^2 ⊗ H: column (k, i, r, s) of the
        // doubled block layout maps to e_i ⊗ (V-column of (k, r, s)).
        Mat V2 = Mat::Zero(D2, D2);
        const Mat& V = base_->basis();
        int D = base_->ambient_dim();
        int off = 0, off1 = 0;
        for (int k = 0; k < base_->num_blocks(); ++k) {
            int d = base_->block_dims()[k], m = mults[k];
            for (int i = 0; i < 2; ++i)
                for (int r = 0; r < d; ++r)
                    for (int s = 0; s < m; ++s) {
                        int col2 = off + (i * d + r) * m + s;
                        int col1 = off1 + r * m + s;
                        V2.block(i * D, col2, D, 1) = V.col(col1);
                    }
            off += 2 * d * m;
            off1 += d * m;
        }
        amplified_ = FiniteVNAlgebra::with_representation(std::move(dims), std::move(mults), std::move(V2));
    }

    const AlgebraPtr& algebra() const { return amplified_; }
    const AlgebraPtr& base() const { return base_; }

    /// Entry (i, j) ∈ {0,1}² of an amplified element, as an element of the base.
    AlgebraElement entry(const AlgebraElement& x2, int i, int j) const {
        std::vector<Mat> blocks;
        for (std::size_t k = 0; k < base_->block_dims().size(); ++k) {
            int d = base_->block_dims()[k];
            blocks.push_back(x2.block(static_cast<int>(k)).block(i * d, j * d, d, d));
        }
        return AlgebraElement(base_, std::move(blocks));
    }

    /// e_ij ⊗ a: the base element a placed in slot (i, j), zeros elsewhere.
    AlgebraElement embed_entry(int i, int j, const AlgebraElement& a) const {
        std::vector<Mat> blocks;
        for (std::size_t k = 0; k < base_->block_dims().size(); ++k) {
            int d = base_->block_dims()[k];
            Mat blk = Mat::Zero(2 * d, 2 * d);
            blk.block(i * d, j * d, d, d) = a.block(static_cast<int>(k));
            blocks.push_back(std::move(blk));
        }
        return AlgebraElement(amplified_, std::move(blocks));
    }

    /// Diagonal embedding a ↦ diag(a, a); unital and *-preserving.
    AlgebraElement embed_diagonal(const AlgebraElement& a) const {
        return embed_entry(0, 0, a) + embed_entry(1, 1, a);
    }

private:
    AlgebraPtr base_;
    AlgebraPtr amplified_;
};

inline Amplification amplify2(const AlgebraPtr& alg) { return Amplification(alg); }

/// M ⊕ N with concatenated blocks, canonical injections and projections.
class DirectSum {
public:
    DirectSum(AlgebraPtr left, AlgebraPtr right) : left_(std::move(left)), right_(std::move(right)) {
        std::vector<int> dims = left_->block_dims();
        dims.insert(dims.end(), right_->block_dims().begin(), right_->block_dims().end());
        std::vector<int> mults = left_->multiplicities();
        mults.insert(mults.end(), right_->multiplicities().begin(), right_->multiplicities().end());
        int DL = left_->ambient_dim(), DR = right_->ambient_dim();
        Mat V = Mat::Zero(DL + DR, DL + DR);
        V.topLeftCorner(DL, DL) = left_->basis();
        V.bottomRightCorner(DR, DR) = right_->basis();
        sum_ = FiniteVNAlgebra::with_representation(std::move(dims), std::move(mults), std::move(V));
    }

    const AlgebraPtr& algebra() const { return sum_; }

    AlgebraElement inject_left(const AlgebraElement& x) const {
        std::vector<Mat> blocks = x.blocks();
        for (int d : right_->block_dims()) blocks.push_back(Mat::Zero(d, d));
        return AlgebraElement(sum_, std::move(blocks));
    }

    AlgebraElement inject_right(const AlgebraElement& y) const {
        std::vector<Mat> blocks;
        for (int d : left_->block_dims()) blocks.push_back(Mat::Zero(d, d));
        for (const auto& b : y.blocks()) blocks.push_back(b);
        return AlgebraElement(sum_, std::move(blocks));
    }

    AlgebraElement project_left(const AlgebraElement& z) const {
        std::vector<Mat> blocks(z.blocks().begin(), z.blocks().begin() + left_->num_blocks());
        return AlgebraElement(left_, std::move(blocks));
    }

    AlgebraElement project_right(const AlgebraElement& z) const {
        std::vector<Mat> blocks(z.blocks().begin() + left_->num_blocks(), z.blocks().end());
        return AlgebraElement(right_, std::move(blocks));
    }

private:
    AlgebraPtr left_, right_;
    AlgebraPtr sum_;
};

inline DirectSum direct_sum(const AlgebraPtr& left, const AlgebraPtr& right) {
    return DirectSum(left, right);
}

/// Check that the ambient realization is unital, *-preserving and isometric,
/// on the identity and the matrix-unit generators.
inline bool validate_representation(const AlgebraPtr& alg, double tol = 1e-10) {
    Mat id = embed(AlgebraElement::identity(alg));
    if (!id.isApprox(Mat::Identity(alg->ambient_dim(), alg->ambient_dim()), tol)) return false;
    for (int k = 0; k < alg->num_blocks(); ++k) {
        int d = alg->block_dims()[k];
        for (int r = 0; r < d; ++r)
            for (int c = 0; c < d; ++c) {
                AlgebraElement u = AlgebraElement::unit(alg, k, r, c);
                Mat eu = embed(u);
                if ((embed(u.adjoint()) - eu.adjoint()).cwiseAbs().maxCoeff() > tol) return false;
                Eigen::JacobiSVD<Mat> svd(eu);
                if (std::abs(svd.singularValues()(0) - op_norm(u)) > tol) return false;
            }
    }
    return true;
}

}  // namespace qgh
