#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "qgh/algebra.hpp"
#include "qgh/rng.hpp"

namespace qgh {

enum class NetTarget { positive_unit_ball_2x2, positive_unit_ball, unit_ball, unit_sphere };

inline std::string to_string(NetTarget t) {
    switch (t) {
        case NetTarget::positive_unit_ball_2x2: return "positive_unit_ball_2x2";
        case NetTarget::positive_unit_ball: return "positive_unit_ball";
        case NetTarget::unit_ball: return "unit_ball";
        case NetTarget::unit_sphere: return "unit_sphere";
    }
    return "?";
}

inline NetTarget net_target_from_string(const std::string& s) {
    if (s == "positive_unit_ball_2x2") return NetTarget::positive_unit_ball_2x2;
    if (s == "positive_unit_ball") return NetTarget::positive_unit_ball;
    if (s == "unit_ball") return NetTarget::unit_ball;
    if (s == "unit_sphere") return NetTarget::unit_sphere;
    throw schema_error("unknown net target: " + s);
}

enum class CoveringMethod { empirical, certified };

/// A finite net of a target set. For the 2x2 target the points live in the
/// amplification M_2(base); for the other targets they live in the base
/// algebra itself.
struct Net {
    NetTarget target = NetTarget::unit_ball;
    std::uint64_t seed = 0;
    AlgebraPtr base;
    AlgebraPtr point_algebra;
    std::shared_ptr<const Amplification> amplification;  // set iff target is 2x2
    std::vector<AlgebraElement> points;
    double covering_estimate = 0.0;
    CoveringMethod covering_method = CoveringMethod::empirical;

    std::size_t size() const { return points.size(); }
};

/// Random positive contraction: a Hermitian matrix with Gaussian entries per
/// block, its eigenvalues pushed through the standard normal CDF into (0, 1).
/// For a 1x1 block this yields a scalar uniform on [0, 1]; in general the
/// spectrum has full support in the interior of [0, 1].
inline AlgebraElement sample_positive_contraction(const AlgebraPtr& alg, Rng& rng) {
    std::vector<Mat> blocks;
    for (int d : alg->block_dims()) {
        Mat h(d, d);
        for (int r = 0; r < d; ++r) {
            h(r, r) = rng.gaussian();
            for (int c = r + 1; c < d; ++c) {
                h(r, c) = rng.cgaussian();
                h(c, r) = std::conj(h(r, c));
            }
        }
        if (d == 1) {
            blocks.push_back(Mat::Constant(1, 1, normal_cdf(h(0, 0).real())));
            continue;
        }
        Eigen::SelfAdjointEigenSolver<Mat> es(h);
        Eigen::VectorXd ev = es.eigenvalues();
        for (int i = 0; i < d; ++i) ev(i) = normal_cdf(ev(i));
        blocks.push_back(es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint());
    }
    return AlgebraElement(alg, std::move(blocks));
}

/// Random contraction: Gaussian entries, normalized to the unit sphere, then
/// shrunk by an independent uniform radius.
inline AlgebraElement sample_unit_ball(const AlgebraPtr& alg, Rng& rng) {
    for (;;) {
        std::vector<Mat> blocks;
        for (int d : alg->block_dims()) {
            Mat g(d, d);
            for (int r = 0; r < d; ++r)
                for (int c = 0; c < d; ++c) g(r, c) = rng.cgaussian();
            blocks.push_back(std::move(g));
        }
        AlgebraElement x(alg, std::move(blocks));
        double n = op_norm(x);
        if (n < 1e-12) continue;
        return x * cplx(rng.uniform() / n, 0.0);
    }
}

inline AlgebraElement sample_unit_sphere(const AlgebraPtr& alg, Rng& rng) {
    for (;;) {
        std::vector<Mat> blocks;
        for (int d : alg->block_dims()) {
            Mat g(d, d);
            for (int r = 0; r < d; ++r)
                for (int c = 0; c < d; ++c) g(r, c) = rng.cgaussian();
            blocks.push_back(std::move(g));
        }
        AlgebraElement x(alg, std::move(blocks));
        double n = op_norm(x);
        if (n < 1e-12) continue;
        return x * cplx(1.0 / n, 0.0);
    }
}

/// Sample from the membership set of `target`, in the algebra the points of
/// such a net live in (i.e. the amplification for the 2x2 target).
inline AlgebraElement sample_target(const AlgebraPtr& point_algebra, NetTarget target, Rng& rng) {
    switch (target) {
        case NetTarget::positive_unit_ball_2x2:
        case NetTarget::positive_unit_ball: return sample_positive_contraction(point_algebra, rng);
        case NetTarget::unit_ball: return sample_unit_ball(point_algebra, rng);
        case NetTarget::unit_sphere: return sample_unit_sphere(point_algebra, rng);
    }
    throw std::logic_error("unreachable");
}

/// Mandatory extremal points: 0 and I for ball targets, I for the sphere;
/// positive-ball targets additionally carry the rank-one diagonal projections
/// of the reference basis of every block.
inline std::vector<AlgebraElement> mandatory_points(const AlgebraPtr& point_algebra, NetTarget target) {
    std::vector<AlgebraElement> pts;
    if (target != NetTarget::unit_sphere) pts.push_back(AlgebraElement::zero(point_algebra));
    pts.push_back(AlgebraElement::identity(point_algebra));
    if (target == NetTarget::positive_unit_ball_2x2 || target == NetTarget::positive_unit_ball) {
        for (int k = 0; k < point_algebra->num_blocks(); ++k)
            for (int i = 0; i < point_algebra->block_dims()[k]; ++i)
                pts.push_back(AlgebraElement::unit(point_algebra, k, i, i));
    }
    return pts;
}

/// Build the deterministic net for (algebra, target, count, seed): the
/// mandatory extremals followed by random samples until `count` points are
/// present (more if the mandatory set alone exceeds count). Nets built from
/// the same seed are nested as count grows.
inline Net build_net(const AlgebraPtr& algebra, NetTarget target, int count, std::uint64_t seed) {
    if (count < 2) throw std::invalid_argument("net count must be at least 2");
    Net net;
    net.target = target;
    net.seed = seed;
    net.base = algebra;
    if (target == NetTarget::positive_unit_ball_2x2) {
        net.amplification = std::make_shared<Amplification>(algebra);
        net.point_algebra = net.amplification->algebra();
    } else {
        net.point_algebra = algebra;
    }
    net.points = mandatory_points(net.point_algebra, target);
    Rng rng(seed, 0);
    while (net.points.size() < static_cast<std::size_t>(count))
        net.points.push_back(sample_target(net.point_algebra, target, rng));
    return net;
}

/// Empirical covering-radius estimate: the max over fresh probe samples of
/// the metric distance to the nearest net point. A lower bound on the true
/// covering radius, hence tagged empirical.
template <typename Metric>
inline double estimate_covering(const Net& net, Metric&& dist, int probes, Rng& rng) {
    if (probes < 1) throw std::invalid_argument("need at least one probe");
    if (net.points.empty()) throw std::invalid_argument("empty net");
    double worst = 0.0;
    for (int p = 0; p < probes; ++p) {
        AlgebraElement probe = sample_target(net.point_algebra, net.target, rng);
        double best = -1.0;
        for (const auto& q : net.points) {
            double d = dist(probe, q);
            if (best < 0 || d < best) best = d;
        }
        worst = std::max(worst, best);
    }
    return worst;
}

/// Covering estimate under the operator norm.
inline double estimate_covering_opnorm(const Net& net, int probes, Rng& rng) {
    return estimate_covering(
        net, [](const AlgebraElement& a, const AlgebraElement& b) { return op_norm(a - b); }, probes,
        rng);
}

/// Membership predicate of the net's target, at the given tolerance.
inline bool satisfies_target(const AlgebraElement& x, NetTarget target, double tol = 1e-9) {
    switch (target) {
        case NetTarget::positive_unit_ball_2x2:
        case NetTarget::positive_unit_ball: return is_positive_contraction(x, tol);
        case NetTarget::unit_ball: return op_norm(x) <= 1.0 + tol;
        case NetTarget::unit_sphere: return std::abs(op_norm(x) - 1.0) <= tol;
    }
    return false;
}

}  // namespace qgh
