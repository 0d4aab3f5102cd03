#include <catch2/catch_amalgamated.hpp>

#include <algorithm>

#include "qgh/lipnorm.hpp"
#include "qgh/net.hpp"
#include "qgh/net_io.hpp"
#include "qgh/rng.hpp"

using namespace qgh;

TEST_CASE("positive contraction sampler") {
    auto alg = FiniteVNAlgebra::blocks({3, 2});
    Rng rng(41, 0);
    for (int t = 0; t < 50; ++t)
        CHECK(is_positive_contraction(sample_positive_contraction(alg, rng), 1e-9));

    // determinism: same seed reproduces the identical bit pattern
    Rng a(7, 3), b(7, 3);
    CHECK(sample_positive_contraction(alg, a).coords() ==
          sample_positive_contraction(alg, b).coords());
}

TEST_CASE("scalar positive samples are uniform on [0,1]") {
    // Kolmogorov-Smirnov against the uniform CDF at n = 10^4
    auto c = FiniteVNAlgebra::blocks({1});
    Rng rng(42, 0);
    const int n = 10000;
    std::vector<double> xs(n);
    for (int i = 0; i < n; ++i) xs[i] = sample_positive_contraction(c, rng).block(0)(0, 0).real();
    std::sort(xs.begin(), xs.end());
    double ks = 0.0;
    for (int i = 0; i < n; ++i) {
        ks = std::max(ks, std::abs((i + 1.0) / n - xs[i]));
        ks = std::max(ks, std::abs(xs[i] - static_cast<double>(i) / n));
    }
    CHECK(ks < 1.95 / std::sqrt(static_cast<double>(n)));  // alpha ~ 0.001
}

TEST_CASE("build_net contracts") {
    auto alg = FiniteVNAlgebra::blocks({2});
    Net minimal = build_net(alg, NetTarget::unit_ball, 2, 5);
    REQUIRE(minimal.size() == 2);
    CHECK(op_norm(minimal.points[0]) == 0.0);
    CHECK(op_norm(minimal.points[1] - AlgebraElement::identity(alg)) == 0.0);

    // positive 2x2 net of the scalars: points are positive 2x2 contractions
    auto c = FiniteVNAlgebra::blocks({1});
    Net pos = build_net(c, NetTarget::positive_unit_ball_2x2, 32, 6);
    CHECK(pos.point_algebra->block_dims() == std::vector<int>{2});
    for (const auto& p : pos.points) CHECK(is_positive_contraction(p, 1e-9));

    // reproducibility at 512 points
    auto m2 = FiniteVNAlgebra::blocks({2});
    Net n1 = build_net(m2, NetTarget::positive_unit_ball_2x2, 512, 99);
    Net n2 = build_net(m2, NetTarget::positive_unit_ball_2x2, 512, 99);
    REQUIRE(n1.size() == 512);
    bool identical = true;
    for (std::size_t i = 0; i < n1.size(); ++i)
        identical = identical && n1.points[i].coords() == n2.points[i].coords();
    CHECK(identical);

    for (NetTarget t : {NetTarget::unit_ball, NetTarget::unit_sphere, NetTarget::positive_unit_ball,
                        NetTarget::positive_unit_ball_2x2}) {
        Net net = build_net(alg, t, 48, 12);
        for (const auto& p : net.points) CHECK(satisfies_target(p, t, 1e-9));
    }

    CHECK_THROWS_AS(build_net(alg, NetTarget::unit_ball, 1, 0), std::invalid_argument);
}

TEST_CASE("covering estimates") {
    auto alg = FiniteVNAlgebra::blocks({2});
    auto opdist = [](const AlgebraElement& a, const AlgebraElement& b) { return op_norm(a - b); };

    // probes regenerated from the net's own stream land on net points exactly
    Net net = build_net(alg, NetTarget::unit_ball, 34, 77);
    Rng same(77, 0);
    CHECK(estimate_covering(net, opdist, 32, same) == 0.0);

    // 1-dimensional positive ball [0,1] with an explicit grid of step h:
    // the true covering radius is h/2, the empirical estimate never exceeds it
    auto c = FiniteVNAlgebra::blocks({1});
    const int steps = 10;
    const double h = 1.0 / steps;
    Net grid;
    grid.target = NetTarget::positive_unit_ball;
    grid.base = grid.point_algebra = c;
    for (int i = 0; i <= steps; ++i)
        grid.points.push_back(AlgebraElement::identity(c) * cplx(i * h, 0.0));
    Rng probe_rng(13, 1);
    double est = estimate_covering(grid, opdist, 2000, probe_rng);
    CHECK(est <= h / 2 + 1e-12);
    CHECK(est > 0.0);

    // nested nets from one seed: the estimate is nonincreasing in net size
    Net small = build_net(alg, NetTarget::unit_ball, 32, 5);
    Net large = build_net(alg, NetTarget::unit_ball, 128, 5);
    for (std::size_t i = 0; i < small.size(); ++i)
        CHECK(small.points[i].coords() == large.points[i].coords());
    Rng p1(19, 0), p2(19, 0);
    CHECK(estimate_covering(large, opdist, 64, p2) <= estimate_covering(small, opdist, 64, p1) + 1e-15);

    CHECK_THROWS_AS(estimate_covering(grid, opdist, 0, probe_rng), std::invalid_argument);
}

TEST_CASE("net json round trip") {
    auto alg = FiniteVNAlgebra::blocks({2, 1});
    Net net = build_net(alg, NetTarget::positive_unit_ball_2x2, 24, 123);
    Rng rng(123, 9);
    net.covering_estimate = estimate_covering_opnorm(net, 16, rng);
    net.covering_method = CoveringMethod::empirical;

    nlohmann::json j = net_to_json(net);
    CHECK(j.at("target") == "positive_unit_ball_2x2");
    CHECK(j.at("seed") == 123);
    CHECK(j.at("covering_method") == "empirical");
    CHECK(j.at("covering_estimate").get<double>() == net.covering_estimate);

    Net back = net_from_json(j);
    REQUIRE(back.size() == net.size());
    CHECK(back.target == net.target);
    for (std::size_t i = 0; i < net.size(); ++i)
        CHECK(back.points[i].coords() == net.points[i].coords());
    // serialization round-trips doubles exactly
    CHECK(net_to_json(back).dump() == j.dump());
}
