#include <catch2/catch_amalgamated.hpp>

#include "qgh/algebra.hpp"
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

// Independent spectral-norm oracle: power iteration on M*M.
double power_iteration_norm(const Mat& m, int iters = 600) {
    Mat g = m.adjoint() * m;
    Vec v = Vec::Ones(m.cols());
    v /= v.norm();
    double lambda = 0.0;
    for (int i = 0; i < iters; ++i) {
        Vec w = g * v;
        lambda = w.norm();
        if (lambda == 0.0) return 0.0;
        v = w / lambda;
    }
    return std::sqrt(lambda);
}

}  // namespace

TEST_CASE("operator norm") {
    auto m3 = FiniteVNAlgebra::blocks({3});
    CHECK(op_norm(AlgebraElement::identity(m3)) == 1.0);

    auto diag = FiniteVNAlgebra::blocks({1, 1});
    AlgebraElement x(diag, {Mat::Constant(1, 1, 3.0), Mat::Constant(1, 1, -4.0)});
    CHECK(op_norm(x) == 4.0);

    Rng rng(11, 0);
    auto m4 = FiniteVNAlgebra::blocks({4});
    for (int t = 0; t < 5; ++t) {
        AlgebraElement h = random_element(m4, rng);
        h = (h + h.adjoint()) * cplx(0.5, 0.0);
        CHECK(op_norm(h) == Catch::Approx(power_iteration_norm(h.block(0))).margin(1e-10));
    }
}

TEST_CASE("operator norm is submultiplicative and adjoint-invariant") {
    Rng rng(12, 0);
    auto alg = FiniteVNAlgebra::blocks({2, 3});
    for (int t = 0; t < 50; ++t) {
        AlgebraElement x = random_element(alg, rng), y = random_element(alg, rng);
        CHECK(op_norm(x * y) <= op_norm(x) * op_norm(y) + 1e-10);
        CHECK(op_norm(x.adjoint()) == Catch::Approx(op_norm(x)).margin(1e-10));
    }
}

TEST_CASE("amplification doubles block dimensions") {
    auto c = FiniteVNAlgebra::blocks({1});
    CHECK(amplify2(c).algebra()->block_dims() == std::vector<int>{2});

    auto mixed = FiniteVNAlgebra::blocks({2, 1});
    Amplification amp(mixed);
    CHECK(amp.algebra()->block_dims() == std::vector<int>{4, 2});

    AlgebraElement id = AlgebraElement::identity(mixed);
    CHECK(op_norm(amp.embed_diagonal(id) - AlgebraElement::identity(amp.algebra())) == 0.0);
    Rng rng(13, 0);
    AlgebraElement a = random_element(mixed, rng);
    CHECK(op_norm(amp.embed_diagonal(a.adjoint()) - amp.embed_diagonal(a).adjoint()) == 0.0);
    // extract entry (1,1) after the diagonal embedding gives back a
    CHECK(op_norm(amp.entry(amp.embed_diagonal(a), 0, 0) - a) == 0.0);
    CHECK(op_norm(amp.entry(amp.embed_diagonal(a), 1, 1) - a) == 0.0);
    CHECK(op_norm(amp.entry(amp.embed_diagonal(a), 0, 1)) == 0.0);
    CHECK(validate_representation(amp.algebra()));
}

TEST_CASE("direct sums") {
    auto c = FiniteVNAlgebra::blocks({1});
    DirectSum sum(c, c);
    CHECK(sum.algebra()->block_dims() == std::vector<int>{1, 1});

    Rng rng(14, 0);
    auto left = FiniteVNAlgebra::blocks({2});
    auto right = FiniteVNAlgebra::blocks({1, 1});
    DirectSum ds(left, right);
    AlgebraElement x = random_element(left, rng), y = random_element(right, rng);
    CHECK(op_norm(ds.project_left(ds.inject_left(x)) - x) == 0.0);
    CHECK(op_norm(ds.project_right(ds.inject_right(y)) - y) == 0.0);
    CHECK(op_norm(ds.inject_left(x) * ds.inject_right(y)) == 0.0);
    CHECK(validate_representation(ds.algebra()));
}

TEST_CASE("canonical decomposition") {
    Rng rng(15, 0);
    auto alg = FiniteVNAlgebra::blocks({3});

    // positive contraction decomposes as (x, 0, 0, 0)
    AlgebraElement h = random_element(alg, rng);
    h = (h + h.adjoint()) * cplx(0.5, 0.0);
    AlgebraElement p = h * h;
    p = p * cplx(1.0 / (op_norm(p) + 1e-12), 0.0);
    auto parts = canonical_decomposition(p);
    CHECK(op_norm(parts.pos_re - p) <= 1e-12);
    CHECK(op_norm(parts.neg_re) <= 1e-12);
    CHECK(op_norm(parts.pos_im) <= 1e-12);
    CHECK(op_norm(parts.neg_im) <= 1e-12);

    // purely imaginary positive part
    auto ip = canonical_decomposition(p * cplx(0.0, 1.0));
    CHECK(op_norm(ip.pos_im - p) <= 1e-12);
    CHECK(op_norm(ip.pos_re) <= 1e-12);
    CHECK(op_norm(ip.neg_re) <= 1e-12);
    CHECK(op_norm(ip.neg_im) <= 1e-12);

    // random contractions recombine, parts are positive contractions
    for (int t = 0; t < 20; ++t) {
        AlgebraElement x = random_element(alg, rng);
        x = x * cplx(rng.uniform() / std::max(op_norm(x), 1e-9), 0.0);
        auto d = canonical_decomposition(x);
        AlgebraElement recomb = d.pos_re - d.neg_re + (d.pos_im - d.neg_im) * cplx(0.0, 1.0);
        CHECK(op_norm(recomb - x) <= 1e-12);
        CHECK(is_positive_contraction(d.pos_re, 1e-9));
        CHECK(is_positive_contraction(d.neg_re, 1e-9));
        CHECK(is_positive_contraction(d.pos_im, 1e-9));
        CHECK(is_positive_contraction(d.neg_im, 1e-9));
    }

    AlgebraElement big = AlgebraElement::identity(alg) * cplx(1.5, 0.0);
    CHECK_THROWS_AS(canonical_decomposition(big), std::invalid_argument);
}

TEST_CASE("positive contraction predicate") {
    auto alg = FiniteVNAlgebra::blocks({2});
    CHECK(is_positive_contraction(AlgebraElement::identity(alg), 1e-9));

    Mat bad(2, 2);
    bad << 1.5, 0.0, 0.0, 0.0;
    CHECK_FALSE(is_positive_contraction(AlgebraElement(alg, {bad}), 1e-9));

    // (I + u)/2 for a Hermitian unitary u has spectrum {0, 1}
    Rng rng(16, 0);
    Vec v(2);
    v << rng.cgaussian(), rng.cgaussian();
    v /= v.norm();
    Mat u = Mat::Identity(2, 2) - 2.0 * v * v.adjoint();
    AlgebraElement x(alg, {Mat(0.5 * (Mat::Identity(2, 2) + u))});
    CHECK(is_positive_contraction(x, 1e-9));
    Eigen::SelfAdjointEigenSolver<Mat> es(x.block(0));
    CHECK(es.eigenvalues().minCoeff() == Catch::Approx(0.0).margin(1e-12));
    CHECK(es.eigenvalues().maxCoeff() == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("elements reject foreign algebras") {
    auto a = FiniteVNAlgebra::blocks({2});
    auto b = FiniteVNAlgebra::blocks({3});
    AlgebraElement x = AlgebraElement::identity(a), y = AlgebraElement::identity(b);
    CHECK_THROWS_AS(x + y, algebra_mismatch);
    CHECK_THROWS_AS(x * y, algebra_mismatch);
}

TEST_CASE("separating vector rank test") {
    // diagonal algebra: separating iff every component of omega is nonzero
    Vec good(2), bad(2);
    good << cplx(0.6), cplx(0.8);
    bad << cplx(1.0), cplx(0.0);
    auto with_omega = [](Vec omega) {
        return FiniteVNAlgebra::with_representation({1, 1}, {}, Mat::Identity(2, 2),
                                                    std::move(omega));
    };
    CHECK(omega_is_separating(with_omega(good)));
    CHECK_FALSE(omega_is_separating(with_omega(bad)));

    // full matrix block: dim 4 > ambient 2, never separating
    auto full = FiniteVNAlgebra::with_representation({2}, {}, Mat::Identity(2, 2), Vec(good));
    CHECK_FALSE(omega_is_separating(full));
}
