#pragma once

#include <string>
#include <vector>

#include "qgh/algebra.hpp"
#include "qgh/bridge.hpp"
#include "qgh/distance.hpp"
#include "qgh/fock.hpp"
#include "qgh/freefield.hpp"
#include "qgh/lipnorm.hpp"
#include "qgh/net.hpp"
#include "qgh/rng.hpp"

namespace qgh {

enum class VerifyLevel { quick, full };

struct SuiteReport {
    std::string name;
    int passed = 0;
    int total = 0;
    std::vector<std::string> failures;

    void check(bool ok, const std::string& what) {
        ++total;
        if (ok)
            ++passed;
        else
            failures.push_back(what);
    }
    bool ok() const { return passed == total; }
};

struct VerifyReport {
    std::vector<SuiteReport> suites;
    bool ok() const {
        for (const auto& s : suites)
            if (!s.ok()) return false;
        return true;
    }
};

namespace verify_detail {

inline AlgebraElement random_element(const AlgebraPtr& alg, Rng& rng, double scale = 1.0) {
    std::vector<Mat> blocks;
    for (int d : alg->block_dims()) {
        Mat g(d, d);
        for (int r = 0; r < d; ++r)
            for (int c = 0; c < d; ++c) g(r, c) = scale * rng.cgaussian();
        blocks.push_back(std::move(g));
    }
    return AlgebraElement(alg, std::move(blocks));
}

inline SuiteReport suite_algebra(std::uint64_t seed, int n) {
    SuiteReport rep{"algebra"};
    Rng rng(seed, 1);
    auto alg = FiniteVNAlgebra::blocks({2, 1, 3});
    for (int i = 0; i < n; ++i) {
        AlgebraElement x = random_element(alg, rng), y = random_element(alg, rng);
        rep.check(op_norm(x * y) <= op_norm(x) * op_norm(y) + 1e-10, "submultiplicative");
        rep.check(std::abs(op_norm(x.adjoint()) - op_norm(x)) <= 1e-10, "adjoint-invariant");
    }
    for (int i = 0; i < n; ++i) {
        AlgebraElement x = random_element(alg, rng);
        double nx = op_norm(x);
        if (nx > 0) x = x * cplx(rng.uniform() / nx, 0.0);
        auto parts = canonical_decomposition(x);
        AlgebraElement recomb =
            parts.pos_re - parts.neg_re + (parts.pos_im - parts.neg_im) * cplx(0.0, 1.0);
        rep.check(op_norm(recomb - x) <= 1e-12, "decomposition recombines");
        rep.check(is_positive_contraction(parts.pos_re, 1e-9) &&
                      is_positive_contraction(parts.neg_re, 1e-9) &&
                      is_positive_contraction(parts.pos_im, 1e-9) &&
                      is_positive_contraction(parts.neg_im, 1e-9),
                  "decomposition parts positive");
    }
    Amplification amp(alg);
    for (int i = 0; i < n; ++i) {
        AlgebraElement a = random_element(alg, rng);
        rep.check(op_norm(amp.entry(amp.embed_diagonal(a), 0, 0) - a) == 0.0, "amplify round trip");
    }
    auto right = FiniteVNAlgebra::blocks({2});
    DirectSum ds(alg, right);
    AlgebraElement xl = random_element(alg, rng), xr = random_element(right, rng);
    rep.check(op_norm(ds.project_left(ds.inject_left(xl)) - xl) == 0.0, "direct sum section");
    rep.check(op_norm(ds.inject_left(xl) * ds.inject_right(xr)) == 0.0, "orthogonal summands");
    return rep;
}

inline SuiteReport suite_lipnorm(std::uint64_t seed, int n) {
    SuiteReport rep{"lipnorm"};
    Rng rng(seed, 2);
    // Kernel norms need the vector to be separating, so dim(A) ≤ ambient dim:
    // test them on a maximal diagonal algebra.
    auto alg = FiniteVNAlgebra::blocks({1, 1, 1});
    Mat T = Mat::Identity(3, 3);
    T(1, 1) = 0.5;
    T(2, 2) = 2.0;
    T(0, 2) = cplx(0.1, 0.2);
    Vec omega(3);
    omega << cplx(0.6), cplx(0.5, 0.3), cplx(0.2, -0.4);
    auto K = DualLipNormSpec::kernel(alg, T, omega);
    auto E = DualLipNormSpec::effros_marechal(alg, 3);
    rep.check(K.eval(AlgebraElement::zero(alg)) == 0.0, "kernel vanishes at 0");
    rep.check(seminorm_axiom_violation([&](const AlgebraElement& x) { return K.eval(x); }, alg, n, rng) <= 1e-10,
              "kernel seminorm axioms");
    rep.check(seminorm_axiom_violation([&](const AlgebraElement& x) { return E.eval(x); }, alg, n, rng) <= 1e-10,
              "EM seminorm axioms");

    auto alg_w = FiniteVNAlgebra::blocks({2, 1});
    auto W = DualLipNormSpec::weighted_entry(alg_w, {2.0, 5.0});
    Net ball = build_net(alg_w, NetTarget::unit_ball, 64, seed);
    {
        Rng cov(seed, 3);
        ball.covering_estimate = estimate_covering_opnorm(ball, 16, cov);
    }
    RadiusEstimate RW = radius(W, ball);
    rep.check(RW.value == 5.0 && RW.kind == RadiusEstimate::Kind::exact, "weighted radius exact");
    // L ≤ R·‖·‖ with R the radius, and ‖·‖ ≤ R_ball·L with R_ball the largest
    // operator norm over the L-unit ball (1/min weight here).
    double r_ball = 1.0 / 2.0;
    for (int i = 0; i < n; ++i) {
        AlgebraElement x = random_element(alg_w, rng);
        rep.check(W.eval(x) <= RW.value * op_norm(x) + 1e-9, "norm dominated by radius");
        rep.check(op_norm(x) <= r_ball * W.eval(x) + 1e-9, "radius inequality");
    }
    auto amp = std::make_shared<Amplification>(alg);
    auto K2 = lift2(K, amp);
    for (int i = 0; i < n; ++i) {
        AlgebraElement a = random_element(alg, rng);
        rep.check(K2.eval(amp->embed_diagonal(a)) == K.eval(a), "lift restricted to diagonal");
    }
    // Scalar duality round trip: L = c|z| dualizes to |ζ|/c and back.
    auto scalar = FiniteVNAlgebra::blocks({1});
    double c = 0.75;
    auto L1 = DualLipNormSpec::weighted_entry(scalar, {c});
    std::vector<AlgebraElement> lball{AlgebraElement::identity(scalar) * cplx(1.0 / c, 0.0)};
    AlgebraElement xi = AlgebraElement::identity(scalar) * cplx(1.3, -0.2);
    double dual = predual_norm(L1, xi, lball);
    rep.check(std::abs(dual - std::abs(cplx(1.3, -0.2)) / c) <= 1e-12, "scalar predual closed form");
    return rep;
}

inline SuiteReport suite_nets(std::uint64_t seed, int n, int count) {
    SuiteReport rep{"nets"};
    auto alg = FiniteVNAlgebra::blocks({2, 1});
    for (NetTarget t : {NetTarget::unit_ball, NetTarget::unit_sphere, NetTarget::positive_unit_ball,
                        NetTarget::positive_unit_ball_2x2}) {
        Net net = build_net(alg, t, count, seed);
        bool members = true;
        for (const auto& p : net.points) members = members && satisfies_target(p, t, 1e-9);
        rep.check(members, "membership " + to_string(t));
        Net again = build_net(alg, t, count, seed);
        bool identical = net.points.size() == again.points.size();
        for (std::size_t i = 0; identical && i < net.points.size(); ++i)
            identical = net.points[i].coords() == again.points[i].coords();
        rep.check(identical, "determinism " + to_string(t));
    }
    // Nested nets from one seed: covering estimates cannot grow with size.
    Net small = build_net(alg, NetTarget::unit_ball, count, seed);
    Net large = build_net(alg, NetTarget::unit_ball, 2 * count, seed);
    Rng p1(seed, 7), p2(seed, 7);
    double cs = estimate_covering_opnorm(small, n, p1);
    double cl = estimate_covering_opnorm(large, n, p2);
    rep.check(cl <= cs + 1e-12, "nested covering monotone");
    return rep;
}

inline SuiteReport suite_hausdorff(std::uint64_t seed, int n) {
    SuiteReport rep{"hausdorff"};
    Rng rng(seed, 4);
    auto alg = FiniteVNAlgebra::blocks({2});
    auto metric = [](const AlgebraElement& a, const AlgebraElement& b) { return op_norm(a - b); };
    for (int i = 0; i < n; ++i) {
        std::vector<AlgebraElement> A, B, C;
        for (int k = 0; k < 4; ++k) {
            A.push_back(random_element(alg, rng));
            B.push_back(random_element(alg, rng));
            C.push_back(random_element(alg, rng));
        }
        double ab = hausdorff(A, B, metric), ba = hausdorff(B, A, metric);
        rep.check(ab == ba, "symmetry");
        double ac = hausdorff(A, C, metric), bc = hausdorff(B, C, metric);
        rep.check(ac <= ab + bc + 1e-12, "triangle");
        rep.check(hausdorff(A, A, metric) == 0.0, "identity");
    }
    return rep;
}

inline SuiteReport suite_bridge(std::uint64_t seed, int n, bool inject) {
    SuiteReport rep{"bridge"};
    Rng rng(seed, 5);
    auto alg = FiniteVNAlgebra::blocks({1, 1});
    Vec omega(2);
    omega << cplx(0.8), cplx(0.36, 0.48);
    omega /= omega.norm();
    Mat T(2, 2), S(2, 2);
    T << cplx(1.0), cplx(0.2, 0.1), cplx(0.0), cplx(0.7);
    S << cplx(0.9, 0.05), cplx(0.0), cplx(0.1), cplx(1.1);
    auto L1 = DualLipNormSpec::kernel(alg, T, omega);
    auto L2 = DualLipNormSpec::kernel(alg, S, omega);
    BridgeSpec kb = kernel_bridge(T, S, omega, L1, L2);
    BridgeSpec sb = sum_bridge(L1, L2);
    AlgebraElement zero = AlgebraElement::zero(alg);
    double scale = inject ? 1.01 : 1.0;  // deliberate restriction violation hook
    for (int i = 0; i < n; ++i) {
        AlgebraElement x = random_element(alg, rng), y = random_element(alg, rng);
        rep.check(std::abs(kb.eval(x, zero) - scale * L1.eval(x)) <= 1e-10, "kernel left restriction");
        rep.check(std::abs(kb.eval(zero, y) - L2.eval(y)) <= 1e-10, "kernel right restriction");
        rep.check(std::abs(sb.eval(x, zero) - L1.eval(x)) <= 1e-10, "sum left restriction");
        rep.check(std::abs(sb.eval(zero, y) - L2.eval(y)) <= 1e-10, "sum right restriction");
    }
    // Uniqueness at zero: two near-partners of one x are close in the right norm.
    for (int i = 0; i < n; ++i) {
        AlgebraElement x = random_element(alg, rng);
        AlgebraElement y = random_element(alg, rng);
        AlgebraElement yp = random_element(alg, rng);
        double eps = std::max(kb.eval(x, -y), kb.eval(x, -yp));
        rep.check(L2.eval(y - yp) <= 2.0 * eps + 1e-10, "uniqueness at zero");
    }
    Net sphere = build_net(alg, NetTarget::unit_sphere, 32, seed);
    rep.check(bridge_diameter_bound(kb, sphere) <= kernel_gap_certified(T, S, omega) + 1e-10,
              "kernel gap dominates net diameter");
    return rep;
}

inline SuiteReport suite_freefield(std::uint64_t seed, int n) {
    SuiteReport rep{"freefield"};
    Rng rng(seed, 6);
    TruncatedFock fock({0.5, 1.5}, 3);
    rep.check(fock.dim() == binomial(3 + 2, 2), "fock dimension");
    rep.check(fock.tuple(0) == std::vector<int>({0, 0}), "vacuum first");
    Eigen::VectorXd e1 = semigroup_diag(fock, 0.7, 0.9), e2 = semigroup_diag(fock, 0.7, 0.4);
    Eigen::VectorXd e12 = semigroup_diag(fock, 0.7, 1.3);
    rep.check((e1.cwiseProduct(e2) - e12).cwiseAbs().maxCoeff() <= 1e-12, "semigroup product rule");
    for (int i = 0; i < n; ++i) {
        Vec f(2);
        f << rng.cgaussian(), rng.cgaussian();
        Mat W = weyl(fock, f);
        rep.check((W * W.adjoint() - Mat::Identity(fock.dim(), fock.dim())).cwiseAbs().maxCoeff() <= 1e-12,
                  "weyl unitary");
    }
    rep.check((weyl(fock, Vec::Zero(2)) - Mat::Identity(fock.dim(), fock.dim())).cwiseAbs().maxCoeff() ==
                  0.0,
              "weyl at zero");
    for (int i = 0; i < n; ++i) {
        double m = 3.0 * rng.uniform(), p = 3.0 * rng.uniform();
        rep.check(dispersion(m, p) >= dispersion(0.0, p), "dispersion dominates massless");
    }
    rep.check(mass_gap_bound(fock, 0.3, 0.8, 1.0) == mass_gap_bound(fock, 0.8, 0.3, 1.0),
              "mass gap symmetric");
    rep.check(mass_gap_bound(fock, 0.5, 0.5, 1.0) == 0.0, "mass gap vanishes at equality");
    // Contraction L_m ≤ L_0 entrywise on the semigroup diagonals.
    Eigen::VectorXd d0 = semigroup_diag(fock, 0.0, 1.0), dm = semigroup_diag(fock, 0.9, 1.0);
    rep.check((dm.array() <= d0.array() + 1e-15).all(), "mass damps the semigroup");
    return rep;
}

}  // namespace verify_detail

/// Cross-module invariant suites, sampled at the given level. `inject` names
/// a suite to sabotage deliberately (used to test the failure path).
inline VerifyReport run_verify(std::uint64_t seed, VerifyLevel level, const std::string& inject = "") {
    int n = level == VerifyLevel::quick ? 12 : 100;
    int count = level == VerifyLevel::quick ? 32 : 128;
    VerifyReport rep;
    rep.suites.push_back(verify_detail::suite_algebra(seed, n));
    rep.suites.push_back(verify_detail::suite_lipnorm(seed, n));
    rep.suites.push_back(verify_detail::suite_nets(seed, n, count));
    rep.suites.push_back(verify_detail::suite_hausdorff(seed, n));
    rep.suites.push_back(verify_detail::suite_bridge(seed, n, inject == "bridge"));
    rep.suites.push_back(verify_detail::suite_freefield(seed, n));
    return rep;
}

}  // namespace qgh
