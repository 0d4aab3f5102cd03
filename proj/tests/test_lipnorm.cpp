#include <catch2/catch_amalgamated.hpp>

#include "qgh/lipnorm.hpp"
#include "qgh/net.hpp"
#include "qgh/rng.hpp"

using namespace qgh;

namespace {

AlgebraElement random_element(const AlgebraPtr& alg, Rng& rng) {
    std::vector<Mat> blocks;
    for (int d : alg->block_dims()) {
        Mat g(d, d);
        for (int r = 0; r < d; ++r)
            for (int c = 0; c < d; ++c) g(r, c) = rng.cgaussian();
        blocks.push_back(std::move(g));
    }
    return AlgebraElement(alg, std::move(blocks));
}

AlgebraElement scalar(const AlgebraPtr& alg, cplx z) {
    return AlgebraElement::identity(alg) * z;
}

}  // namespace

TEST_CASE("kernel norm evaluation") {
    // scalar algebra on C, T = 1, omega = 1: L(z) = |z|
    auto c = FiniteVNAlgebra::with_representation({1}, {}, Mat::Identity(1, 1),
                                                  Vec(Vec::Ones(1)));
    auto L = DualLipNormSpec::kernel(c, Mat::Identity(1, 1), Vec::Ones(1));
    CHECK(L.eval(scalar(c, cplx(0.3, -0.4))) == Catch::Approx(0.5).margin(1e-15));

    // diagonal algebra on C^2, T = diag(1, 1/2), omega = (1,1)/sqrt(2),
    // x = diag(1, 0): direct arithmetic gives |T x omega| = 1/sqrt(2)
    auto d2 = FiniteVNAlgebra::blocks({1, 1});
    Mat T = Mat::Zero(2, 2);
    T(0, 0) = 1.0;
    T(1, 1) = 0.5;
    Vec omega = Vec::Ones(2) / std::sqrt(2.0);
    auto L2 = DualLipNormSpec::kernel(d2, T, omega);
    AlgebraElement x(d2, {Mat::Ones(1, 1), Mat::Zero(1, 1)});
    CHECK(L2.eval(x) == Catch::Approx(1.0 / std::sqrt(2.0)).margin(1e-14));

    // kernel condition number metadata
    CHECK(L2.kernel_condition() == Catch::Approx(2.0).margin(1e-12));
}

TEST_CASE("kernel norm rejects degenerate data") {
    auto d2 = FiniteVNAlgebra::blocks({1, 1});
    Mat singular = Mat::Zero(2, 2);
    singular(0, 0) = 1.0;
    CHECK_THROWS_AS(DualLipNormSpec::kernel(d2, singular, Vec(Vec::Ones(2))), norm_property_error);

    // omega with a zero component is not separating for the diagonal algebra
    Vec bad(2);
    bad << cplx(1.0), cplx(0.0);
    CHECK_THROWS_AS(DualLipNormSpec::kernel(d2, Mat(Mat::Identity(2, 2)), bad),
                    norm_property_error);

    // a full matrix block has dim 4 > ambient 2: no kernel norm exists
    auto m2 = FiniteVNAlgebra::blocks({2});
    CHECK_THROWS_AS(DualLipNormSpec::kernel(m2, Mat(Mat::Identity(2, 2)), Vec(Vec::Ones(2))),
                    norm_property_error);
}

TEST_CASE("effros-marechal norm") {
    auto d2 = FiniteVNAlgebra::blocks({1, 1});
    auto E = DualLipNormSpec::effros_marechal(d2, 2);
    CHECK(E.eval(AlgebraElement::zero(d2)) == 0.0);
    // diag(a, b): sum over the two diagonal matrix elements with weights
    // 2^-2 and 2^-4
    AlgebraElement x(d2, {Mat::Constant(1, 1, cplx(2.0, 0.0)), Mat::Constant(1, 1, cplx(0.0, 4.0))});
    CHECK(E.eval(x) == Catch::Approx(2.0 / 4.0 + 4.0 / 16.0).margin(1e-14));

    // truncation too small to see the whole algebra is rejected
    auto d3 = FiniteVNAlgebra::blocks({1, 1, 1});
    CHECK_THROWS_AS(DualLipNormSpec::effros_marechal(d3, 1), norm_property_error);
}

TEST_CASE("norm axioms on random samples") {
    Rng rng(21, 0);
    auto d3 = FiniteVNAlgebra::blocks({1, 1, 1});
    Mat T(3, 3);
    T.setZero();
    T(0, 0) = 1.0;
    T(1, 1) = 0.5;
    T(2, 2) = 2.0;
    T(0, 2) = cplx(0.3, 0.1);
    Vec omega(3);
    omega << cplx(0.5, 0.1), cplx(-0.4, 0.3), cplx(0.2, -0.6);
    auto K = DualLipNormSpec::kernel(d3, T, omega);
    auto E = DualLipNormSpec::effros_marechal(d3, 3);
    auto W = DualLipNormSpec::weighted_entry(d3, {1.0, 2.0, 0.5});
    for (const auto* L : {&K, &E, &W})
        CHECK(seminorm_axiom_violation([&](const AlgebraElement& v) { return L->eval(v); }, d3, 40,
                                       rng) <= 1e-10);
}

TEST_CASE("2x2 lift") {
    auto c = FiniteVNAlgebra::blocks({1});
    auto L = DualLipNormSpec::weighted_entry(c, {1.0});
    auto amp = std::make_shared<Amplification>(c);
    auto L2 = lift2(L, amp);

    // forced maximum over the four entries
    std::vector<Mat> blk{(Mat(2, 2) << cplx(1.0), cplx(-2.0), cplx(0.5), cplx(0.0)).finished()};
    CHECK(L2.eval(AlgebraElement(amp->algebra(), blk)) == 2.0);
    CHECK(L2.eval(AlgebraElement::zero(amp->algebra())) == 0.0);

    // diagonal embedding reproduces the base norm exactly
    Rng rng(22, 0);
    auto d2 = FiniteVNAlgebra::blocks({1, 1});
    Mat T = Mat::Identity(2, 2);
    T(1, 1) = 0.25;
    Vec omega(2);
    omega << cplx(0.8), cplx(0.6);
    auto K = DualLipNormSpec::kernel(d2, T, omega);
    auto ampd = std::make_shared<Amplification>(d2);
    auto K2 = lift2(K, ampd);
    for (int t = 0; t < 25; ++t) {
        AlgebraElement a = random_element(d2, rng);
        CHECK(K2.eval(ampd->embed_diagonal(a)) == K.eval(a));
    }
}

TEST_CASE("radius") {
    // 1-dimensional algebra: R = L(1), exact
    auto c = FiniteVNAlgebra::blocks({1});
    auto L = DualLipNormSpec::weighted_entry(c, {0.75});
    Net ball = build_net(c, NetTarget::unit_ball, 32, 31);
    RadiusEstimate r = radius(L, ball);
    CHECK(r.value == 0.75);
    CHECK(r.slack == 0.0);
    CHECK(r.kind == RadiusEstimate::Kind::exact);

    // weighted norm: maximum attained at a unit in the heavier block
    auto d2 = FiniteVNAlgebra::blocks({1, 1});
    auto W = DualLipNormSpec::weighted_entry(d2, {2.0, 5.0});
    Net ball2 = build_net(d2, NetTarget::unit_ball, 32, 32);
    CHECK(radius(W, ball2).value == 5.0);

    // amplification preserves the radius (within net slack for net-estimated
    // kernels, exactly for the closed forms)
    Mat T = Mat::Identity(2, 2);
    T(1, 1) = 0.5;
    Vec omega(2);
    omega << cplx(0.6), cplx(0.8);
    auto K = DualLipNormSpec::kernel(d2, T, omega);
    Net ballK = build_net(d2, NetTarget::unit_ball, 256, 33);
    {
        Rng cov(33, 1);
        ballK.covering_estimate = estimate_covering_opnorm(ballK, 64, cov);
    }
    auto amp = std::make_shared<Amplification>(d2);
    Net ballK2 = build_net(amp->algebra(), NetTarget::unit_ball, 256, 34);
    {
        Rng cov(34, 1);
        ballK2.covering_estimate = estimate_covering_opnorm(ballK2, 64, cov);
    }
    RadiusEstimate rk = radius(K, ballK);
    RadiusEstimate rk2 = radius(lift2(K, amp), ballK2);
    CHECK(rk.kind == RadiusEstimate::Kind::empirical);
    CHECK(std::abs(rk.value - rk2.value) <= rk.slack + rk2.slack + 0.15 * rk.value);

    CHECK_THROWS_AS(radius(K, Net{}), std::invalid_argument);
}

TEST_CASE("predual norm") {
    // scalar closed form: L = c|.| dualizes to |.|/c, and back
    auto c1 = FiniteVNAlgebra::blocks({1});
    double c = 0.4;
    auto L = DualLipNormSpec::weighted_entry(c1, {c});
    std::vector<AlgebraElement> lsphere{scalar(c1, cplx(1.0 / c, 0.0))};
    AlgebraElement xi = scalar(c1, cplx(-1.2, 0.5));
    double dual = predual_norm(L, xi, lsphere);
    CHECK(dual == Catch::Approx(std::abs(cplx(-1.2, 0.5)) / c).margin(1e-12));

    // round trip through the dual unit sphere recovers c|.| exactly
    std::vector<AlgebraElement> dual_sphere{scalar(c1, cplx(c, 0.0))};
    AlgebraElement z = scalar(c1, cplx(0.7, -0.2));
    double roundtrip = predual_norm(L, z, dual_sphere);
    CHECK(roundtrip == Catch::Approx(c * std::abs(cplx(0.7, -0.2))).margin(1e-12));

    CHECK(predual_norm(L, AlgebraElement::zero(c1), lsphere) == 0.0);

    // Frobenius norm on a diagonal algebra is self-dual: with the aligned
    // point conj(xi)/|xi| in the net, the supremum is attained exactly
    auto d2 = FiniteVNAlgebra::blocks({1, 1});
    auto F = DualLipNormSpec::tabulated(
        d2, [](const AlgebraElement& v) { return v.coords().norm(); }, 1.0);
    Rng rng(23, 0);
    for (int t = 0; t < 10; ++t) {
        AlgebraElement f = random_element(d2, rng);
        Vec coords = f.coords();
        AlgebraElement aligned = AlgebraElement::from_coords(d2, coords.conjugate() / coords.norm());
        std::vector<AlgebraElement> net = scale_to_norm_sphere(F, {aligned});
        for (int k = 0; k < 20; ++k) net.push_back(sample_unit_ball(d2, rng));
        net = scale_to_norm_sphere(F, net);
        CHECK(predual_norm(F, f, net) == Catch::Approx(coords.norm()).margin(1e-10));
    }
}

TEST_CASE("lipschitz bounds") {
    auto d2 = FiniteVNAlgebra::blocks({1, 1});
    auto W = DualLipNormSpec::weighted_entry(d2, {2.0, 5.0});
    CHECK(*W.lipschitz_bound() == 5.0);

    Mat T = 2.0 * Mat::Identity(2, 2);
    Vec omega(2);
    omega << cplx(0.6), cplx(0.8);
    auto K = DualLipNormSpec::kernel(d2, T, omega);
    CHECK(*K.lipschitz_bound() == Catch::Approx(2.0).margin(1e-12));

    Rng rng(24, 0);
    for (int t = 0; t < 30; ++t) {
        AlgebraElement x = random_element(d2, rng);
        CHECK(K.eval(x) <= *K.lipschitz_bound() * op_norm(x) + 1e-10);
        CHECK(W.eval(x) <= *W.lipschitz_bound() * op_norm(x) + 1e-10);
    }
}

TEST_CASE("norm evaluation rejects foreign elements") {
    auto a = FiniteVNAlgebra::blocks({1, 1});
    auto b = FiniteVNAlgebra::blocks({2});
    auto W = DualLipNormSpec::weighted_entry(a, {1.0, 1.0});
    CHECK_THROWS_AS(W.eval(AlgebraElement::identity(b)), algebra_mismatch);
}
