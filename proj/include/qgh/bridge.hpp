#pragma once

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qgh/algebra.hpp"
#include "qgh/lipnorm.hpp"
#include "qgh/net.hpp"
#include "qgh/parallel.hpp"

namespace qgh {

/// A linear map between two finite-dimensional algebras, stored as a matrix
/// on block coordinates. Used for the *-isomorphisms behind iso bridges.
class IsoMap {
public:
    IsoMap(AlgebraPtr source, AlgebraPtr target, Mat coord_matrix)
        : source_(std::move(source)), target_(std::move(target)), matrix_(std::move(coord_matrix)) {
        if (matrix_.rows() != target_->dim() || matrix_.cols() != source_->dim())
            throw std::invalid_argument("coordinate matrix has wrong shape");
    }

    static IsoMap identity(const AlgebraPtr& alg) {
        return IsoMap(alg, alg, Mat::Identity(alg->dim(), alg->dim()));
    }

    /// ψ(x) = extract_target(U E(x) U*) for an ambient unitary U. The map is a
    /// *-isomorphism precisely when conjugation by U carries the source
    /// algebra onto the target algebra; is_star_isomorphism() verifies that.
    static IsoMap from_unitary(const AlgebraPtr& source, const AlgebraPtr& target, const Mat& U) {
        if (U.rows() != target->ambient_dim() || U.cols() != source->ambient_dim())
            throw std::invalid_argument("unitary has wrong ambient shape");
        Mat coords(target->dim(), source->dim());
        int col = 0;
        for (int k = 0; k < source->num_blocks(); ++k)
            for (int r = 0; r < source->block_dims()[k]; ++r)
                for (int c = 0; c < source->block_dims()[k]; ++c) {
                    AlgebraElement u = AlgebraElement::unit(source, k, r, c);
                    coords.col(col++) = extract(target, U * embed(u) * U.adjoint()).coords();
                }
        return IsoMap(source, target, std::move(coords));
    }

    const AlgebraPtr& source() const { return source_; }
    const AlgebraPtr& target() const { return target_; }

    AlgebraElement operator()(const AlgebraElement& x) const {
        return AlgebraElement::from_coords(target_, matrix_ * x.coords());
    }

    bool invertible(double tol = 1e-10) const {
        Eigen::JacobiSVD<Mat> svd(matrix_);
        return svd.singularValues().minCoeff() > tol * svd.singularValues().maxCoeff();
    }

    IsoMap inverse() const {
        return IsoMap(target_, source_, matrix_.inverse());
    }

    /// Unital, *-preserving, multiplicative and bijective, all within tol.
    /// Multiplicativity is checked on every basis pair for small algebras and
    /// on a fixed set of random pairs for large ones.
    bool is_star_isomorphism(double tol = 1e-8) const {
        if (source_->dim() != target_->dim()) return false;
        if (!invertible()) return false;
        const auto& I = AlgebraElement::identity(source_);
        if (op_norm((*this)(I) - AlgebraElement::identity(target_)) > tol) return false;
        std::vector<AlgebraElement> basis;
        for (int k = 0; k < source_->num_blocks(); ++k)
            for (int r = 0; r < source_->block_dims()[k]; ++r)
                for (int c = 0; c < source_->block_dims()[k]; ++c)
                    basis.push_back(AlgebraElement::unit(source_, k, r, c));
        for (const auto& u : basis)
            if (op_norm((*this)(u.adjoint()) - (*this)(u).adjoint()) > tol) return false;
        auto check_product = [&](const AlgebraElement& a, const AlgebraElement& b) {
            return op_norm((*this)(a * b) - (*this)(a) * (*this)(b)) <= tol;
        };
        if (basis.size() <= 36) {
            for (const auto& a : basis)
                for (const auto& b : basis)
                    if (!check_product(a, b)) return false;
        } else {
            Rng rng(0x15ab, 7);
            for (int t = 0; t < 200; ++t)
                if (!check_product(sample_unit_ball(source_, rng), sample_unit_ball(source_, rng)))
                    return false;
        }
        return true;
    }

private:
    AlgebraPtr source_, target_;
    Mat matrix_;
};

enum class BridgeKind { sum, kernel, iso, coupler, composed };

inline std::string to_string(BridgeKind k) {
    switch (k) {
        case BridgeKind::sum: return "sum";
        case BridgeKind::kernel: return "kernel";
        case BridgeKind::iso: return "iso";
        case BridgeKind::coupler: return "coupler";
        case BridgeKind::composed: return "composed";
    }
    return "?";
}

/// A bridge seminorm J on M ⊕ N restricting exactly to the two declared
/// norms: J(x, 0) = L_M(x) and J(0, y) = L_N(y). Every bridge certifies an
/// upper bound on the distance between (M, L_M) and (N, L_N).
class BridgeSpec {
public:
    BridgeKind kind() const { return kind_; }
    const std::string& name() const { return name_; }
    const DualLipNormSpec& left_norm() const { return *left_; }
    const DualLipNormSpec& right_norm() const { return *right_; }

    double eval(const AlgebraElement& a, const AlgebraElement& b) const {
        switch (kind_) {
            case BridgeKind::sum: return left_->eval(a) + right_->eval(b);
            case BridgeKind::kernel:
                return (T_ * act(a, omega_) + S_ * act(b, omega_)).norm();
            case BridgeKind::iso: return right_->eval(psi_->operator()(a) + b);
            case BridgeKind::coupler:
                return (U_ * (left_->kernel_op() * act(a, left_->kernel_vec())) +
                        right_->kernel_op() * act(b, right_->kernel_vec()))
                    .norm();
            case BridgeKind::composed: {
                double best = -1.0;
                for (const auto& p : middle_points_) {
                    double v = child12_->eval(a, -p) + child23_->eval(p, b);
                    if (best < 0 || v < best) best = v;
                }
                return best;
            }
        }
        throw std::logic_error("unreachable");
    }

    /// When J(a, b) = ‖φ_L(a) + φ_R(b)‖ for linear maps into a Hilbert space,
    /// expose the maps so scans can precompute per-point images.
    struct VectorForm {
        std::function<Vec(const AlgebraElement&)> left, right;
    };

    std::optional<VectorForm> vector_form() const {
        switch (kind_) {
            case BridgeKind::kernel:
                return VectorForm{[this](const AlgebraElement& a) { return Vec(T_ * act(a, omega_)); },
                                  [this](const AlgebraElement& b) { return Vec(S_ * act(b, omega_)); }};
            case BridgeKind::coupler:
                return VectorForm{
                    [this](const AlgebraElement& a) {
                        return Vec(U_ * (left_->kernel_op() * act(a, left_->kernel_vec())));
                    },
                    [this](const AlgebraElement& b) {
                        return Vec(right_->kernel_op() * act(b, right_->kernel_vec()));
                    }};
            case BridgeKind::iso:
                if (right_->kind() == NormKind::kernel)
                    return VectorForm{
                        [this](const AlgebraElement& a) {
                            return Vec(right_->kernel_op() *
                                       act(psi_->operator()(a), right_->kernel_vec()));
                        },
                        [this](const AlgebraElement& b) {
                            return Vec(right_->kernel_op() * act(b, right_->kernel_vec()));
                        }};
                return std::nullopt;
            default: return std::nullopt;
        }
    }

    const std::vector<AlgebraElement>& middle_points() const { return middle_points_; }
    const BridgeSpec& child12() const { return *child12_; }
    const BridgeSpec& child23() const { return *child23_; }
    const IsoMap& iso() const { return *psi_; }

    friend BridgeSpec sum_bridge(const DualLipNormSpec&, const DualLipNormSpec&);
    friend BridgeSpec kernel_bridge(const Mat&, const Mat&, const Vec&, const DualLipNormSpec&,
                                    const DualLipNormSpec&);
    friend BridgeSpec iso_bridge(const IsoMap&, const DualLipNormSpec&, const DualLipNormSpec&);
    friend BridgeSpec coupler_bridge(const Mat&, const DualLipNormSpec&, const DualLipNormSpec&);
    friend BridgeSpec compose_bridges(const BridgeSpec&, const BridgeSpec&, const Net&);

private:
    BridgeSpec() = default;
    BridgeKind kind_ = BridgeKind::sum;
    std::string name_;
    std::shared_ptr<const DualLipNormSpec> left_, right_;
    Mat T_, S_, U_;
    Vec omega_;
    std::shared_ptr<const IsoMap> psi_;
    std::shared_ptr<const BridgeSpec> child12_, child23_;
    std::vector<AlgebraElement> middle_points_;
};

/// J(x, y) = L_M(x) + L_N(y); valid for any pair of norms.
inline BridgeSpec sum_bridge(const DualLipNormSpec& LM, const DualLipNormSpec& LN) {
    BridgeSpec b;
    b.kind_ = BridgeKind::sum;
    b.name_ = "sum";
    b.left_ = std::make_shared<DualLipNormSpec>(LM);
    b.right_ = std::make_shared<DualLipNormSpec>(LN);
    return b;
}

/// J(x, y) = ‖T x Ω + S y Ω‖ for two kernel norms with the same vector on the
/// same algebra. J(x, -x) = ‖(T - S) x Ω‖.
inline BridgeSpec kernel_bridge(const Mat& T, const Mat& S, const Vec& omega,
                                const DualLipNormSpec& L1, const DualLipNormSpec& L2) {
    if (L1.kind() != NormKind::kernel || L2.kind() != NormKind::kernel)
        throw bridge_error("kernel bridge needs kernel norms");
    if (!same_algebra(*L1.algebra(), *L2.algebra()))
        throw bridge_error("kernel bridge needs both norms on the same algebra");
    if (!L1.kernel_op().isApprox(T, 1e-12) || !L1.kernel_vec().isApprox(omega, 1e-12) ||
        !L2.kernel_op().isApprox(S, 1e-12) || !L2.kernel_vec().isApprox(omega, 1e-12))
        throw bridge_error("kernel data does not match the declared norms");
    BridgeSpec b;
    b.kind_ = BridgeKind::kernel;
    b.name_ = "kernel";
    b.left_ = std::make_shared<DualLipNormSpec>(L1);
    b.right_ = std::make_shared<DualLipNormSpec>(L2);
    b.T_ = T;
    b.S_ = S;
    b.omega_ = omega;
    return b;
}

/// J(x, y) = L_N(ψ(x) + y) for a norm-preserving *-isomorphism ψ: M → N.
/// J(x, -ψ(x)) = 0 for every x.
inline BridgeSpec iso_bridge(const IsoMap& psi, const DualLipNormSpec& LM, const DualLipNormSpec& LN) {
    if (!same_algebra(*psi.source(), *LM.algebra()) || !same_algebra(*psi.target(), *LN.algebra()))
        throw bridge_error("isomorphism endpoints do not match the norms");
    if (!psi.is_star_isomorphism()) throw bridge_error("map is not a *-isomorphism");
    for (int k = 0; k < LM.algebra()->num_blocks(); ++k)
        for (int r = 0; r < LM.algebra()->block_dims()[k]; ++r)
            for (int c = 0; c < LM.algebra()->block_dims()[k]; ++c) {
                AlgebraElement u = AlgebraElement::unit(LM.algebra(), k, r, c);
                if (std::abs(LN.eval(psi(u)) - LM.eval(u)) > 1e-10)
                    throw bridge_error("isomorphism does not preserve the norm on a basis element");
            }
    BridgeSpec b;
    b.kind_ = BridgeKind::iso;
    b.name_ = "iso";
    b.left_ = std::make_shared<DualLipNormSpec>(LM);
    b.right_ = std::make_shared<DualLipNormSpec>(LN);
    b.psi_ = std::make_shared<IsoMap>(psi);
    return b;
}

/// J(x, y) = ‖U T_M x Ω_M + T_N y Ω_N‖ for kernel norms on algebras with
/// possibly different ambient spaces, coupled by an isometry U.
inline BridgeSpec coupler_bridge(const Mat& U, const DualLipNormSpec& LM, const DualLipNormSpec& LN) {
    if (LM.kind() != NormKind::kernel || LN.kind() != NormKind::kernel)
        throw bridge_error("coupler bridge needs kernel norms");
    if (U.cols() != LM.algebra()->ambient_dim() || U.rows() != LN.algebra()->ambient_dim())
        throw bridge_error("coupler isometry has wrong shape");
    Mat gram = U.adjoint() * U;
    if (!gram.isApprox(Mat::Identity(U.cols(), U.cols()), 1e-10))
        throw bridge_error("coupler map is not an isometry");
    BridgeSpec b;
    b.kind_ = BridgeKind::coupler;
    b.name_ = "coupler";
    b.left_ = std::make_shared<DualLipNormSpec>(LM);
    b.right_ = std::make_shared<DualLipNormSpec>(LN);
    b.U_ = U;
    return b;
}

/// Net composition of two bridges sharing their middle norm:
/// J13(x1, x3) = min over middle-net points p of J12(x1, -p) + J23(p, x3).
/// The min over a finite net over-estimates the exact infimum, so upper
/// bounds derived from the composition stay valid.
inline BridgeSpec compose_bridges(const BridgeSpec& J12, const BridgeSpec& J23, const Net& middle_net) {
    if (!same_norm(J12.right_norm(), J23.left_norm()))
        throw bridge_error("norm mismatch at the junction");
    if (middle_net.points.empty()) throw bridge_error("empty middle net");
    if (!same_algebra(*middle_net.point_algebra, *J12.right_norm().algebra()))
        throw bridge_error("middle net lives in the wrong algebra");
    BridgeSpec b;
    b.kind_ = BridgeKind::composed;
    b.name_ = "composed(" + J12.name() + "," + J23.name() + ")";
    b.left_ = std::make_shared<DualLipNormSpec>(J12.left_norm());
    b.right_ = std::make_shared<DualLipNormSpec>(J23.right_norm());
    b.child12_ = std::make_shared<BridgeSpec>(J12);
    b.child23_ = std::make_shared<BridgeSpec>(J23);
    b.middle_points_ = middle_net.points;
    return b;
}

/// Exact two-sided Hausdorff distance between finite sets under a pairwise
/// distance functor; argmin ties resolve to the first index.
template <typename Dist>
inline double hausdorff(const std::vector<AlgebraElement>& A, const std::vector<AlgebraElement>& B,
                        Dist&& d) {
    if (A.empty() || B.empty()) throw std::invalid_argument("hausdorff needs nonempty sets");
    auto one_sided = [&](const std::vector<AlgebraElement>& P, const std::vector<AlgebraElement>& Q,
                         bool swapped) {
        auto worst = parallel::reduce_max(P.size(), [&](std::size_t i) {
            double best = -1.0;
            for (std::size_t j = 0; j < Q.size(); ++j) {
                double v = swapped ? d(Q[j], P[i]) : d(P[i], Q[j]);
                if (best < 0 || v < best) best = v;
            }
            return best;
        });
        return worst.value;
    };
    return std::max(one_sided(A, B, false), one_sided(B, A, true));
}

namespace detail {

/// Pairwise distance max_e J(x_e, -y_e) over the four entries of amplified
/// points, with per-kind precomputation.
class LiftedPairScanner {
public:
    LiftedPairScanner(const BridgeSpec& J, const Net& netM, const Net& netN)
        : bridge_(J), netM_(netM), netN_(netN) {
        if (netM.target != NetTarget::positive_unit_ball_2x2 ||
            netN.target != NetTarget::positive_unit_ball_2x2)
            throw std::invalid_argument("scan requires 2x2 positive-ball nets");
        ampM_ = netM.amplification;
        ampN_ = netN.amplification;
        entriesM_ = entries(netM, *ampM_);
        entriesN_ = entries(netN, *ampN_);
        auto vf = J.vector_form();
        if (vf) {
            mode_ = Mode::vectors;
            vecsM_ = images(entriesM_, vf->left);
            vecsN_ = images(entriesN_, vf->right);
        } else if (J.kind() == BridgeKind::sum) {
            mode_ = Mode::scalars;
            scalM_ = norms(entriesM_, J.left_norm());
            scalN_ = norms(entriesN_, J.right_norm());
        } else if (J.kind() == BridgeKind::composed && J.child12().vector_form() &&
                   J.child23().vector_form()) {
            mode_ = Mode::composed;
            auto v12 = *J.child12().vector_form();
            auto v23 = *J.child23().vector_form();
            std::vector<Vec> mid12, mid23;
            for (const auto& p : J.middle_points()) {
                mid12.push_back(v12.right(p));
                mid23.push_back(v23.left(p));
            }
            auto left_imgs = images(entriesM_, v12.left);
            auto right_imgs = images(entriesN_, v23.right);
            std::size_t m = J.middle_points().size();
            toMidM_.resize(entriesM_.size());
            for (std::size_t i = 0; i < entriesM_.size(); ++i) {
                toMidM_[i].resize(4, std::vector<double>(m));
                for (int e = 0; e < 4; ++e)
                    for (std::size_t p = 0; p < m; ++p)
                        toMidM_[i][e][p] = (left_imgs[i][e] - mid12[p]).norm();
            }
            fromMidN_.resize(entriesN_.size());
            for (std::size_t j = 0; j < entriesN_.size(); ++j) {
                fromMidN_[j].resize(4, std::vector<double>(m));
                for (int e = 0; e < 4; ++e)
                    for (std::size_t p = 0; p < m; ++p)
                        fromMidN_[j][e][p] = (mid23[p] - right_imgs[j][e]).norm();
            }
        } else {
            mode_ = Mode::generic;
        }
    }

    std::size_t left_size() const { return entriesM_.size(); }
    std::size_t right_size() const { return entriesN_.size(); }

    double operator()(std::size_t i, std::size_t j) const {
        switch (mode_) {
            case Mode::vectors: {
                double best = 0.0;
                for (int e = 0; e < 4; ++e)
                    best = std::max(best, (vecsM_[i][e] - vecsN_[j][e]).norm());
                return best;
            }
            case Mode::scalars: {
                double best = 0.0;
                for (int e = 0; e < 4; ++e) best = std::max(best, scalM_[i][e] + scalN_[j][e]);
                return best;
            }
            case Mode::composed: {
                double best = 0.0;
                for (int e = 0; e < 4; ++e) {
                    const auto& a = toMidM_[i][e];
                    const auto& c = fromMidN_[j][e];
                    double m = a[0] + c[0];
                    for (std::size_t p = 1; p < a.size(); ++p) m = std::min(m, a[p] + c[p]);
                    best = std::max(best, m);
                }
                return best;
            }
            case Mode::generic: {
                double best = 0.0;
                for (int e = 0; e < 4; ++e)
                    best = std::max(best, bridge_.eval(entriesM_[i][e], -entriesN_[j][e]));
                return best;
            }
        }
        throw std::logic_error("unreachable");
    }

private:
    enum class Mode { vectors, scalars, composed, generic };

    static std::vector<std::array<AlgebraElement, 4>> entries(const Net& net, const Amplification& amp) {
        std::vector<std::array<AlgebraElement, 4>> out;
        out.reserve(net.points.size());
        for (const auto& p : net.points)
            out.push_back({amp.entry(p, 0, 0), amp.entry(p, 0, 1), amp.entry(p, 1, 0), amp.entry(p, 1, 1)});
        return out;
    }

    template <typename F>
    static std::vector<std::array<Vec, 4>> images(const std::vector<std::array<AlgebraElement, 4>>& es,
                                                  F&& f) {
        std::vector<std::array<Vec, 4>> out;
        out.reserve(es.size());
        for (const auto& e : es) out.push_back({f(e[0]), f(e[1]), f(e[2]), f(e[3])});
        return out;
    }

    static std::vector<std::array<double, 4>> norms(const std::vector<std::array<AlgebraElement, 4>>& es,
                                                    const DualLipNormSpec& L) {
        std::vector<std::array<double, 4>> out;
        out.reserve(es.size());
        for (const auto& e : es) out.push_back({L.eval(e[0]), L.eval(e[1]), L.eval(e[2]), L.eval(e[3])});
        return out;
    }

    const BridgeSpec& bridge_;
    const Net& netM_;
    const Net& netN_;
    std::shared_ptr<const Amplification> ampM_, ampN_;
    Mode mode_ = Mode::generic;
    std::vector<std::array<AlgebraElement, 4>> entriesM_, entriesN_;
    std::vector<std::array<Vec, 4>> vecsM_, vecsN_;
    std::vector<std::array<double, 4>> scalM_, scalN_;
    std::vector<std::vector<std::vector<double>>> toMidM_, fromMidN_;
};

}  // namespace detail

/// Hausdorff distance between the two nets of the positive 2x2 unit balls,
/// under the lifted bridge seminorm max_ij J(x_ij, -y_ij).
inline double net_hausdorff(const BridgeSpec& J, const Net& netM, const Net& netN) {
    detail::LiftedPairScanner scan(J, netM, netN);
    auto forward = parallel::reduce_max(scan.left_size(), [&](std::size_t i) {
        double best = -1.0;
        for (std::size_t j = 0; j < scan.right_size(); ++j) {
            double v = scan(i, j);
            if (best < 0 || v < best) best = v;
        }
        return best;
    });
    auto backward = parallel::reduce_max(scan.right_size(), [&](std::size_t j) {
        double best = -1.0;
        for (std::size_t i = 0; i < scan.left_size(); ++i) {
            double v = scan(i, j);
            if (best < 0 || v < best) best = v;
        }
        return best;
    });
    return std::max(forward.value, backward.value);
}

/// Net estimate of sup_{‖x‖=1} J(x, -x); requires both norms on one algebra.
/// A lower estimate of the true supremum (pair with kernel_gap_certified for
/// a certified upper bound).
inline double bridge_diameter_bound(const BridgeSpec& J, const Net& sphere_net) {
    if (!same_algebra(*J.left_norm().algebra(), *J.right_norm().algebra()))
        throw algebra_mismatch("diameter bound needs both norms on the same algebra");
    if (!same_algebra(*sphere_net.point_algebra, *J.left_norm().algebra()))
        throw algebra_mismatch("sphere net lives in the wrong algebra");
    double best = 0.0;
    for (const auto& x : sphere_net.points) best = std::max(best, J.eval(x, -x));
    return best;
}

/// Certified (net-free) upper bound ‖T - S‖ · ‖Ω‖ ≥ sup_{‖x‖=1} ‖(T-S)xΩ‖.
inline double kernel_gap_certified(const Mat& T, const Mat& S, const Vec& omega) {
    if (T.rows() != S.rows() || T.cols() != S.cols() || omega.size() != T.cols())
        throw std::invalid_argument("kernel gap needs operators on one ambient space");
    Eigen::JacobiSVD<Mat> svd(T - S);
    return svd.singularValues()(0) * omega.norm();
}

}  // namespace qgh
