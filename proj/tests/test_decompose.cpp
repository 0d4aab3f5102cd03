#include <catch2/catch_amalgamated.hpp>

#include "qgh/decompose.hpp"
#include "qgh/rng.hpp"

using namespace qgh;

namespace {

Mat random_unitary(int d, Rng& rng) {
    Mat g(d, d);
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) g(r, c) = rng.cgaussian();
    Eigen::HouseholderQR<Mat> qr(g);
    Mat q = qr.householderQ();
    return q;
}

}  // namespace

TEST_CASE("span closure of generators") {
    // two generic unitaries on C^3 generate the full matrix algebra
    Rng rng(61, 0);
    Mat u = random_unitary(3, rng), v = random_unitary(3, rng);
    CHECK(star_algebra_basis({u, v}, 3).size() == 9);

    // a single unitary with distinct eigenvalues generates a maximal abelian
    // algebra: dimension equals the ambient dimension
    Vec phases(4);
    phases << std::exp(cplx(0, 0.3)), std::exp(cplx(0, 1.1)), std::exp(cplx(0, -0.8)),
        std::exp(cplx(0, 2.0));
    Mat w = random_unitary(4, rng);
    Mat d = w * phases.asDiagonal() * w.adjoint();
    CHECK(star_algebra_basis({d}, 4).size() == 4);

    // the identity generates the scalars
    CHECK(star_algebra_basis({Mat::Identity(3, 3)}, 3).size() == 1);
}

TEST_CASE("block structure of the full matrix algebra") {
    Rng rng(62, 0);
    Mat u = random_unitary(3, rng), v = random_unitary(3, rng);
    auto alg = algebra_from_generators({u, v}, 3);
    CHECK(alg->block_dims() == std::vector<int>{3});
    CHECK(alg->multiplicities() == std::vector<int>{1});
}

TEST_CASE("block structure of abelian algebras") {
    Rng rng(63, 0);
    Vec phases(4);
    phases << std::exp(cplx(0, 0.3)), std::exp(cplx(0, 1.1)), std::exp(cplx(0, -0.8)),
        std::exp(cplx(0, 2.0));
    Mat w = random_unitary(4, rng);
    Mat d = w * phases.asDiagonal() * w.adjoint();
    auto alg = algebra_from_generators({d}, 4);
    CHECK(alg->block_dims() == std::vector<int>(4, 1));
    CHECK(alg->multiplicities() == std::vector<int>(4, 1));
    // the recovered representation reproduces the generator
    CHECK((embed(extract(alg, d)) - d).norm() <= 1e-8);
}

TEST_CASE("block structure with multiplicities") {
    // M_2 ⊗ I_2 on C^4, conjugated by a random unitary
    Rng rng(64, 0);
    Mat q = random_unitary(4, rng);
    auto lift = [&](const Mat& a) {
        Mat big = Mat::Zero(4, 4);
        big.block(0, 0, 2, 2) = a;
        big.block(2, 2, 2, 2) = a;
        return Mat(q * big * q.adjoint());
    };
    Mat g1 = lift(random_unitary(2, rng));
    Mat g2 = lift(random_unitary(2, rng));
    auto alg = algebra_from_generators({g1, g2}, 4);
    CHECK(alg->block_dims() == std::vector<int>{2});
    CHECK(alg->multiplicities() == std::vector<int>{2});
    CHECK((embed(extract(alg, g1)) - g1).norm() <= 1e-7);
    CHECK((embed(extract(alg, g2)) - g2).norm() <= 1e-7);
}

TEST_CASE("block structure of a mixed sum") {
    // M_2 ⊕ C·I_2 on C^4: dims (2, 1), multiplicities (1, 2)
    Rng rng(65, 0);
    Mat q = random_unitary(4, rng);
    auto lift = [&](const Mat& a, cplx z) {
        Mat big = Mat::Zero(4, 4);
        big.block(0, 0, 2, 2) = a;
        big(2, 2) = z;
        big(3, 3) = z;
        return Mat(q * big * q.adjoint());
    };
    Mat g1 = lift(random_unitary(2, rng), std::exp(cplx(0, 0.7)));
    Mat g2 = lift(random_unitary(2, rng), std::exp(cplx(0, -1.2)));
    auto alg = algebra_from_generators({g1, g2}, 4);
    REQUIRE(alg->num_blocks() == 2);
    std::vector<std::pair<int, int>> got;
    for (int k = 0; k < 2; ++k) got.emplace_back(alg->block_dims()[k], alg->multiplicities()[k]);
    std::sort(got.begin(), got.end());
    CHECK(got == std::vector<std::pair<int, int>>{{1, 2}, {2, 1}});
    CHECK((embed(extract(alg, g1)) - g1).norm() <= 1e-7);
    CHECK(validate_representation(alg, 1e-7));
}
