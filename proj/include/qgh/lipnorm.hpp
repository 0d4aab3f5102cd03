#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qgh/algebra.hpp"
#include "qgh/net.hpp"

namespace qgh {

enum class NormKind { kernel, effros_marechal, weighted_entry, tabulated, lifted };

inline std::string to_string(NormKind k) {
    switch (k) {
        case NormKind::kernel: return "kernel";
        case NormKind::effros_marechal: return "effros_marechal";
        case NormKind::weighted_entry: return "weighted_entry";
        case NormKind::tabulated: return "tabulated";
        case NormKind::lifted: return "lifted";
    }
    return "?";
}

/// A dual-Lip-norm on a finite-dimensional von Neumann algebra. Each kind is
/// a norm (vanishing only at 0); the constructors verify this where a linear
/// inducing map exists, via a full-rank test.
///
///   kernel           x ↦ ‖T E(x) Ω‖ for an injective T on the ambient space
///   effros_marechal  x ↦ Σ_{m,n≤J} 2^{-m-n} |⟨ξ_m, E(x) ξ_n⟩|
///   weighted_entry   x ↦ max_k w_k ‖x_k‖
///   tabulated        a caller-supplied evaluator
///   lifted           the 2x2 lift: max of the parent norm over the entries
class DualLipNormSpec {
public:
    static DualLipNormSpec kernel(AlgebraPtr alg, Mat T, Vec omega) {
        if (T.rows() != alg->ambient_dim() || T.cols() != alg->ambient_dim())
            throw std::invalid_argument("kernel operator has wrong ambient shape");
        if (omega.size() != alg->ambient_dim())
            throw std::invalid_argument("kernel vector has wrong ambient dimension");
        DualLipNormSpec L;
        L.kind_ = NormKind::kernel;
        L.algebra_ = std::move(alg);
        Eigen::JacobiSVD<Mat> svd(T);
        double smin = svd.singularValues().minCoeff();
        double smax = svd.singularValues().maxCoeff();
        if (smin <= 1e-12) throw norm_property_error("kernel operator must be injective");
        L.kernel_op_ = std::move(T);
        L.kernel_vec_ = std::move(omega);
        L.kernel_cond_ = smax / smin;
        L.kernel_op_norm_ = smax;
        L.check_linear_rank();
        return L;
    }

    /// Effros-Marechal norm from an explicit orthonormal family.
    static DualLipNormSpec effros_marechal(AlgebraPtr alg, std::vector<Vec> xi) {
        if (xi.empty()) throw std::invalid_argument("need at least one vector");
        for (std::size_t i = 0; i < xi.size(); ++i) {
            if (xi[i].size() != alg->ambient_dim())
                throw std::invalid_argument("xi vector has wrong ambient dimension");
            for (std::size_t j = 0; j <= i; ++j) {
                cplx ip = xi[j].dot(xi[i]);
                double want = (i == j) ? 1.0 : 0.0;
                if (std::abs(ip - want) > 1e-10)
                    throw std::invalid_argument("xi family must be orthonormal");
            }
        }
        DualLipNormSpec L;
        L.kind_ = NormKind::effros_marechal;
        L.algebra_ = std::move(alg);
        L.xi_ = std::move(xi);
        L.check_linear_rank();
        return L;
    }

    /// Effros-Marechal norm over the first J standard basis vectors (J capped
    /// at the ambient dimension).
    static DualLipNormSpec effros_marechal(AlgebraPtr alg, int truncation = 16) {
        int J = std::min(truncation, alg->ambient_dim());
        if (J < 1) throw std::invalid_argument("truncation must be positive");
        std::vector<Vec> xi;
        for (int j = 0; j < J; ++j) xi.push_back(Vec::Unit(alg->ambient_dim(), j));
        return effros_marechal(std::move(alg), std::move(xi));
    }

    static DualLipNormSpec weighted_entry(AlgebraPtr alg, std::vector<double> weights) {
        if (static_cast<int>(weights.size()) != alg->num_blocks())
            throw std::invalid_argument("one weight per block required");
        for (double w : weights)
            if (!(w > 0)) throw norm_property_error("weights must be strictly positive");
        DualLipNormSpec L;
        L.kind_ = NormKind::weighted_entry;
        L.algebra_ = std::move(alg);
        L.weights_ = std::move(weights);
        return L;
    }

    static DualLipNormSpec tabulated(AlgebraPtr alg, std::function<double(const AlgebraElement&)> fn,
                                     std::optional<double> lipschitz = std::nullopt) {
        DualLipNormSpec L;
        L.kind_ = NormKind::tabulated;
        L.algebra_ = std::move(alg);
        L.fn_ = std::move(fn);
        L.tab_lipschitz_ = lipschitz;
        // No inducing linear map is available here; check positivity on the
        // matrix-unit basis as a partial norm-property test.
        for (int k = 0; k < L.algebra_->num_blocks(); ++k)
            for (int r = 0; r < L.algebra_->block_dims()[k]; ++r)
                for (int c = 0; c < L.algebra_->block_dims()[k]; ++c)
                    if (!(L.fn_(AlgebraElement::unit(L.algebra_, k, r, c)) > 0))
                        throw norm_property_error("tabulated norm vanishes on a basis element");
        return L;
    }

    NormKind kind() const { return kind_; }
    const AlgebraPtr& algebra() const { return algebra_; }

    double operator()(const AlgebraElement& x) const { return eval(x); }

    double eval(const AlgebraElement& x) const {
        if (!x.parent() || !same_algebra(*x.parent(), *algebra_))
            throw algebra_mismatch("element does not belong to this norm's algebra");
        switch (kind_) {
            case NormKind::kernel: return (kernel_op_ * act(x, kernel_vec_)).norm();
            case NormKind::effros_marechal: return em_ambient(embed(x));
            case NormKind::weighted_entry: {
                double best = 0.0;
                for (int k = 0; k < algebra_->num_blocks(); ++k) {
                    const Mat& m = x.block(k);
                    double n = m.rows() == 1 ? std::abs(m(0, 0))
                                             : Eigen::JacobiSVD<Mat>(m).singularValues()(0);
                    best = std::max(best, weights_[k] * n);
                }
                return best;
            }
            case NormKind::tabulated: return fn_(x);
            case NormKind::lifted: {
                double best = 0.0;
                for (int i = 0; i < 2; ++i)
                    for (int j = 0; j < 2; ++j)
                        best = std::max(best, parent_norm_->eval(amplification_->entry(x, i, j)));
                return best;
            }
        }
        throw std::logic_error("unreachable");
    }

    /// The Effros-Marechal double series evaluated on an arbitrary ambient
    /// matrix (used for Hausdorff distances across different subalgebras of
    /// the same ambient space).
    double em_ambient(const Mat& X) const {
        if (kind_ != NormKind::effros_marechal) throw std::logic_error("not an EM norm");
        double s = 0.0;
        for (std::size_t n = 0; n < xi_.size(); ++n) {
            Vec Xxi = X * xi_[n];
            for (std::size_t m = 0; m < xi_.size(); ++m)
                s += std::ldexp(std::abs(xi_[m].dot(Xxi)), -static_cast<int>(m + n + 2));
        }
        return s;
    }

    // Kernel accessors (bridges need T and Ω).
    const Mat& kernel_op() const { require(NormKind::kernel); return kernel_op_; }
    const Vec& kernel_vec() const { require(NormKind::kernel); return kernel_vec_; }
    /// Condition number of T, kept as stability metadata.
    double kernel_condition() const { require(NormKind::kernel); return kernel_cond_; }

    const std::vector<double>& weights() const { require(NormKind::weighted_entry); return weights_; }
    const std::vector<Vec>& xi() const { require(NormKind::effros_marechal); return xi_; }

    const DualLipNormSpec& lifted_parent() const { require(NormKind::lifted); return *parent_norm_; }
    const std::shared_ptr<const Amplification>& lift_amplification() const {
        require(NormKind::lifted);
        return amplification_;
    }

    /// Lipschitz bound of the norm w.r.t. the operator norm, when one is known
    /// in closed form: L(x) ≤ lip · ‖x‖.
    std::optional<double> lipschitz_bound() const {
        switch (kind_) {
            case NormKind::kernel: return kernel_op_norm_ * kernel_vec_.norm();
            case NormKind::effros_marechal: {
                double g = 1.0 - std::ldexp(1.0, -static_cast<int>(xi_.size()));
                return g * g;  // (Σ_{m≤J} 2^{-m})²
            }
            case NormKind::weighted_entry: {
                double w = 0.0;
                for (double v : weights_) w = std::max(w, v);
                return w;
            }
            case NormKind::tabulated: return tab_lipschitz_;
            case NormKind::lifted: return parent_norm_->lipschitz_bound();
        }
        return std::nullopt;
    }

    friend DualLipNormSpec lift2(const DualLipNormSpec& L, std::shared_ptr<const Amplification> amp);

    friend bool same_norm(const DualLipNormSpec& a, const DualLipNormSpec& b) {
        if (&a == &b) return true;
        if (a.kind_ != b.kind_) return false;
        if (!same_algebra(*a.algebra_, *b.algebra_)) return false;
        switch (a.kind_) {
            case NormKind::kernel:
                return a.kernel_op_.isApprox(b.kernel_op_, 1e-12) &&
                       a.kernel_vec_.isApprox(b.kernel_vec_, 1e-12);
            case NormKind::weighted_entry: return a.weights_ == b.weights_;
            case NormKind::effros_marechal: {
                if (a.xi_.size() != b.xi_.size()) return false;
                for (std::size_t i = 0; i < a.xi_.size(); ++i)
                    if (!a.xi_[i].isApprox(b.xi_[i], 1e-12)) return false;
                return true;
            }
            case NormKind::tabulated: return false;  // opaque evaluators
            case NormKind::lifted: return same_norm(*a.parent_norm_, *b.parent_norm_);
        }
        return false;
    }

private:
    DualLipNormSpec() = default;

    void require(NormKind k) const {
        if (kind_ != k) throw std::logic_error("norm accessor used on wrong kind");
    }

    /// Full-rank test of the inducing linear map on the matrix-unit basis:
    /// the norm vanishes only at 0 iff the map is injective.
    void check_linear_rank() const {
        int n = algebra_->dim();
        int rows = kind_ == NormKind::kernel ? algebra_->ambient_dim()
                                             : static_cast<int>(xi_.size() * xi_.size());
        if (rows < n) throw norm_property_error("inducing map cannot have full rank");
        Mat map(rows, n);
        int col = 0;
        for (int k = 0; k < algebra_->num_blocks(); ++k)
            for (int r = 0; r < algebra_->block_dims()[k]; ++r)
                for (int c = 0; c < algebra_->block_dims()[k]; ++c) {
                    AlgebraElement u = AlgebraElement::unit(algebra_, k, r, c);
                    if (kind_ == NormKind::kernel) {
                        map.col(col) = kernel_op_ * act(u, kernel_vec_);
                    } else {
                        Mat X = embed(u);
                        int row = 0;
                        for (const auto& xm : xi_)
                            for (const auto& xn : xi_) map(row++, col) = xm.dot(X * xn);
                    }
                    ++col;
                }
        Eigen::JacobiSVD<Mat> svd(map);
        if (svd.singularValues().minCoeff() <= 1e-10)
            throw norm_property_error("norm property fails: inducing map is rank deficient");
    }

    NormKind kind_ = NormKind::tabulated;
    AlgebraPtr algebra_;
    Mat kernel_op_;
    Vec kernel_vec_;
    double kernel_cond_ = 0.0;
    double kernel_op_norm_ = 0.0;
    std::vector<Vec> xi_;
    std::vector<double> weights_;
    std::function<double(const AlgebraElement&)> fn_;
    std::optional<double> tab_lipschitz_;
    std::shared_ptr<const DualLipNormSpec> parent_norm_;
    std::shared_ptr<const Amplification> amplification_;
};

/// The 2x2 lift: L((a_ij)) = max_ij L(a_ij) on M_2(M). Restricted to the
/// diagonal embedding it reproduces L exactly.
inline DualLipNormSpec lift2(const DualLipNormSpec& L, std::shared_ptr<const Amplification> amp) {
    if (!same_algebra(*amp->base(), *L.algebra()))
        throw algebra_mismatch("amplification base does not match the norm's algebra");
    DualLipNormSpec out;
    out.kind_ = NormKind::lifted;
    out.algebra_ = amp->algebra();
    out.parent_norm_ = std::make_shared<DualLipNormSpec>(L);
    out.amplification_ = std::move(amp);
    return out;
}

inline DualLipNormSpec lift2(const DualLipNormSpec& L) {
    return lift2(L, std::make_shared<Amplification>(L.algebra()));
}

/// Radius estimate: the maximum of the norm over the operator-norm unit ball,
/// with its slack accounting.
struct RadiusEstimate {
    enum class Kind { exact, empirical, heuristic };
    double value = 0.0;
    double slack = 0.0;
    Kind kind = Kind::empirical;
};

/// Closed-form radius when one exists: one-dimensional algebras (R = L(I)),
/// weighted-entry norms (R = max weight), and lifts of either (amplification
/// preserves the radius).
inline std::optional<RadiusEstimate> exact_radius(const DualLipNormSpec& L) {
    if (L.kind() == NormKind::weighted_entry) {
        double w = 0.0;
        for (double v : L.weights()) w = std::max(w, v);
        return RadiusEstimate{w, 0.0, RadiusEstimate::Kind::exact};
    }
    if (L.algebra()->dim() == 1)
        return RadiusEstimate{L.eval(AlgebraElement::identity(L.algebra())), 0.0,
                              RadiusEstimate::Kind::exact};
    if (L.kind() == NormKind::lifted) return exact_radius(L.lifted_parent());
    return std::nullopt;
}

/// Radius R = max { L(x) : ‖x‖ ≤ 1 }. Closed forms where available; otherwise
/// the maximum over the supplied ball net is reported, with additive slack
/// (net covering radius) x (Lipschitz bound of L) when the latter is known,
/// else the bare covering radius flagged heuristic.
inline RadiusEstimate radius(const DualLipNormSpec& L, const Net& ball_net) {
    if (auto exact = exact_radius(L)) return *exact;
    if (ball_net.points.empty()) throw std::invalid_argument("empty net");
    if (!same_algebra(*ball_net.point_algebra, *L.algebra()))
        throw algebra_mismatch("net does not live in the norm's algebra");
    double best = 0.0;
    for (const auto& p : ball_net.points) best = std::max(best, L.eval(p));
    auto lip = L.lipschitz_bound();
    if (lip) return {best, ball_net.covering_estimate * (*lip), RadiusEstimate::Kind::empirical};
    return {best, ball_net.covering_estimate, RadiusEstimate::Kind::heuristic};
}

/// Bilinear trace pairing ⟨ξ, x⟩ = Σ_k tr(ξ_k x_k) between a functional
/// (represented as an algebra element) and an element.
inline cplx trace_pairing(const AlgebraElement& xi, const AlgebraElement& x) {
    cplx s = 0.0;
    for (std::size_t k = 0; k < xi.blocks().size(); ++k)
        s += (xi.blocks()[k] * x.blocks()[k]).trace();
    return s;
}

/// Predual (dual) norm by the duality formula: L'(ξ) = sup |⟨ξ, x⟩| over the
/// L-unit ball, maximized over the supplied net of that ball. A net maximum
/// under-estimates the supremum by at most the net's covering slack.
inline double predual_norm(const DualLipNormSpec& L, const AlgebraElement& xi,
                           const std::vector<AlgebraElement>& dual_ball_net) {
    (void)L;
    double best = 0.0;
    for (const auto& x : dual_ball_net) best = std::max(best, std::abs(trace_pairing(xi, x)));
    return best;
}

/// Rescale ball-net points onto the L-unit sphere; a convenient way to build
/// nets of the L-unit ball for predual_norm.
inline std::vector<AlgebraElement> scale_to_norm_sphere(const DualLipNormSpec& L,
                                                        const std::vector<AlgebraElement>& points) {
    std::vector<AlgebraElement> out;
    out.reserve(points.size());
    for (const auto& p : points) {
        double v = L.eval(p);
        if (v > 1e-14) out.push_back(p * cplx(1.0 / v, 0.0));
    }
    return out;
}

/// Largest violation of absolute homogeneity and subadditivity over random
/// pairs; a seminorm evaluates to ~0 here.
template <typename EvalFn>
inline double seminorm_axiom_violation(EvalFn&& f, const AlgebraPtr& alg, int samples, Rng& rng) {
    double worst = 0.0;
    for (int s = 0; s < samples; ++s) {
        AlgebraElement x = sample_unit_ball(alg, rng);
        AlgebraElement y = sample_unit_ball(alg, rng);
        cplx c(2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0);
        worst = std::max(worst, std::abs(f(x * c) - std::abs(c) * f(x)));
        worst = std::max(worst, f(x + y) - f(x) - f(y));
    }
    return worst;
}

}  // namespace qgh
