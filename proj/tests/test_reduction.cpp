#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "latticedmt/latticedmt.hpp"

using namespace ldmt;

namespace {

CMat complex_of(const GaussMat& t) {
    CMat m(t.rows(), t.cols());
    for (int c = 0; c < t.cols(); ++c)
        for (int r = 0; r < t.rows(); ++r) m(r, c) = t(r, c).to_complex();
    return m;
}

}  // namespace

TEST_CASE("unimodularity is an exact integer statement") {
    CHECK(is_unimodular(GaussMat::identity(3)));

    GaussMat units(3, 3);
    units(0, 0) = {0, 1};
    units(1, 1) = {1, 0};
    units(2, 2) = {0, -1};
    CHECK(is_unimodular(units));

    GaussMat scaled(2, 2);
    scaled(0, 0) = {2, 0};
    scaled(1, 1) = {1, 0};
    CHECK_FALSE(is_unimodular(scaled));

    GaussMat shear = GaussMat::identity(2);
    shear(0, 1) = {7, -3};
    CHECK(is_unimodular(shear));
    const GaussMat inv = inverse_unimodular(shear);
    const GaussMat prod_should_be_identity = [&] {
        GaussMat p(2, 2);
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c) {
                GaussInt acc;
                for (int k = 0; k < 2; ++k) acc += shear(r, k) * inv(k, c);
                p(r, c) = acc;
            }
        return p;
    }();
    CHECK(prod_should_be_identity == GaussMat::identity(2));
}

TEST_CASE("lll fixed point on an orthogonal basis with increasing norms") {
    CMat b = CMat::Zero(3, 3);
    b(0, 0) = cxd(1.0, 0.0);
    b(1, 1) = cxd(0.0, 2.0);
    b(2, 2) = cxd(4.0, 0.0);
    const auto red = lll_reduce(b);
    CHECK(red.certificate.ok());
    CHECK(is_unimodular(red.T));
    CHECK(red.swaps == 0);
    CHECK(shortest_vector(red.B_tilde).lambda == Catch::Approx(shortest_vector(b).lambda));
}

TEST_CASE("lll shrinks a classic shear basis") {
    CMat b(2, 2);
    b << cxd(1, 0), cxd(10, 0), cxd(0, 0), cxd(1, 0);
    const auto red = lll_reduce(b);
    REQUIRE(red.certificate.ok());
    CHECK(red.B_tilde.col(0).squaredNorm() <= 2.0 + 1e-12);
    // lambda(B) = 1 and it is attained by a reduced basis column
    const auto sv = shortest_vector(b);
    CHECK(sv.lambda == Catch::Approx(1.0).epsilon(1e-12));
    double min_col = std::numeric_limits<double>::infinity();
    for (int j = 0; j < 2; ++j) min_col = std::min(min_col, red.B_tilde.col(j).norm());
    CHECK(min_col == Catch::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("lll on random bases: certificates, lattice invariance, idempotence") {
    Rng rng(1234);
    int total_swaps = 0;
    for (int trial = 0; trial < 300; ++trial) {
        const CMat b = trial % 3 == 2 ? test::random_cmat_with_cond(4, 1e4, rng)
                                      : test::random_cmat(4, 4, rng);
        const auto red = lll_reduce(b);
        total_swaps += red.swaps;

        CHECK(red.certificate.ok());
        CHECK(is_unimodular(red.T));
        CHECK((red.B_tilde - b * complex_of(red.T)).norm() <= 1e-10 * (1.0 + b.norm()));

        // |det| preserved
        const double det_b = std::abs(Eigen::PartialPivLU<CMat>(b).determinant());
        const double det_bt = std::abs(Eigen::PartialPivLU<CMat>(red.B_tilde).determinant());
        CHECK(det_bt == Catch::Approx(det_b).epsilon(1e-9));

        // both bases generate the same lattice: map columns through T, T^-1
        const GaussMat t_inv = inverse_unimodular(red.T);
        const auto s = test::random_gauss_vec(4, 9, rng);
        const CVec via_t = red.B_tilde * to_cvec(t_inv.apply(s));
        CHECK((via_t - b * to_cvec(s)).norm() <= 1e-9 * (1.0 + via_t.norm()));

        // idempotence: the reduced basis is a fixed point
        const auto again = lll_reduce(red.B_tilde);
        CHECK(again.swaps == 0);
        CHECK(again.size_reductions == 0);
        CHECK(again.certificate.ok());

        // shortest vector is a lattice invariant
        const auto sv_b = shortest_vector(b);
        const auto sv_r = shortest_vector(red.B_tilde);
        CHECK(sv_r.lambda == Catch::Approx(sv_b.lambda).epsilon(1e-9));
    }
    CHECK(total_swaps > 0);  // the suite actually exercised reduction
}

TEST_CASE("lll input validation") {
    Rng rng(2);
    const CMat b = test::random_cmat(3, 3, rng);
    CHECK_THROWS_AS(lll_reduce(b, 0.4), OutOfRange);
    CHECK_THROWS_AS(lll_reduce(b, 1.0), OutOfRange);
    CHECK_THROWS_AS(lll_reduce(test::random_cmat(3, 2, rng)), DimensionMismatch);
    CMat singular = CMat::Zero(3, 3);
    singular.col(0) = b.col(0);
    singular.col(1) = 2.0 * b.col(0);
    singular.col(2) = b.col(1);
    CHECK_THROWS_AS(lll_reduce(singular), SingularBasis);
}

TEST_CASE("shortest vector oracle") {
    SECTION("identity lattice") {
        const auto sv = shortest_vector(CMat::Identity(3, 3));
        CHECK(sv.lambda == Catch::Approx(1.0));
        double nonzero = 0.0;
        for (const auto& g : sv.coeff) nonzero += g.sq_modulus();
        CHECK(nonzero == 1.0);  // a Gaussian unit times a standard basis vector
    }
    SECTION("scaling") {
        CHECK(shortest_vector(3.0 * CMat::Identity(2, 2)).lambda == Catch::Approx(3.0));
    }
    SECTION("achieved by the returned coefficients") {
        Rng rng(77);
        for (int i = 0; i < 50; ++i) {
            const CMat b = test::random_cmat(3, 3, rng);
            const auto sv = shortest_vector(b);
            CHECK((b * to_cvec(sv.coeff)).norm() == Catch::Approx(sv.lambda).epsilon(1e-9));
        }
    }
    SECTION("matches boxed brute force on random kappa=3 bases") {
        Rng rng(88);
        for (int i = 0; i < 25; ++i) {
            const CMat b = test::random_cmat(3, 3, rng);
            CHECK(shortest_vector(b).lambda ==
                  Catch::Approx(test::brute_force_shortest(b, 5)).epsilon(1e-9));
        }
    }
    SECTION("dimension guard") {
        CHECK_THROWS_AS(shortest_vector(CMat::Identity(9, 9)), DimensionTooLarge);
    }
}

TEST_CASE("orthogonality defect") {
    CHECK(orthogonality_defect(CMat::Identity(4, 4)) == Catch::Approx(1.0));
    Rng rng(3);
    const CMat q = Eigen::HouseholderQR<CMat>(test::random_cmat(4, 4, rng)).householderQ();
    CHECK(orthogonality_defect(q) == Catch::Approx(1.0).epsilon(1e-9));

    // reduction never worsens the defect
    for (int i = 0; i < 300; ++i) {
        const CMat b = test::random_cmat(4, 4, rng);
        const double before = orthogonality_defect(b);
        const double after = orthogonality_defect(lll_reduce(b).B_tilde);
        CHECK(after <= before * (1.0 + 1e-9));
        CHECK(after >= 1.0 - 1e-9);
    }
    CHECK_THROWS_AS(orthogonality_defect(CMat::Zero(2, 2)), SingularBasis);
}

TEST_CASE("sigma-max bound on the reduced inverse") {
    SECTION("identity case: sigma_max = 1 <= K for K >= 1") {
        const auto red = lll_reduce(CMat::Identity(3, 3));
        CHECK(check_sigma_bound(red, 1.0, 1.0));
    }
    SECTION("holds with K = 2^kappa on random and ill-conditioned bases") {
        Rng rng(99);
        const double k_const = 16.0;  // 2^4
        double worst = 0.0;
        for (int i = 0; i < 300; ++i) {
            const CMat b = i % 4 == 3 ? test::random_cmat_with_cond(4, 1e6, rng)
                                      : test::random_cmat(4, 4, rng);
            const auto red = lll_reduce(b);
            const auto sv = shortest_vector(b);
            CHECK(check_sigma_bound(red, sv.lambda, k_const));
            Eigen::JacobiSVD<CMat> svd(red.B_tilde);
            worst = std::max(worst, sv.lambda / svd.singularValues().tail<1>()(0));
        }
        CHECK(worst <= k_const);
        CHECK(worst > 0.5);  // the bound is not vacuous at this scale
    }
}
