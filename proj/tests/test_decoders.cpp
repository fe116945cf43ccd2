#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "latticedmt/latticedmt.hpp"

using namespace ldmt;

TEST_CASE("mmse alpha closed form") {
    CHECK(mmse_alpha(100.0, 1.0, 2, 4) == Catch::Approx(0.1).epsilon(1e-14));
    CHECK(mmse_alpha(7.0, 0.0, 2, 4) == 1.0);
    CHECK(mmse_alpha(12345.0, 0.0, 3, 5) == 1.0);
    CHECK(mmse_alpha(1e4, 2.0, 2, 4) == Catch::Approx(1e-4).epsilon(1e-12));
    CHECK_THROWS_AS(mmse_alpha(-1.0, 0.0, 2, 4), OutOfRange);
}

TEST_CASE("completing the squares") {
    SECTION("F = I, alpha = 0 is the trivial system") {
        const CVec y = CVec::Random(3);
        const auto sys = build_regularized(CMat::Identity(3, 3), y, 0.0);
        CHECK((sys.R - CMat::Identity(3, 3)).norm() <= 1e-12);
        CHECK((sys.z - y).norm() <= 1e-12);
        CHECK(std::abs(sys.c) <= 1e-12);
    }
    SECTION("F = 0, alpha = 1 leaves everything in the constant") {
        const CVec y = CVec::Random(4);
        const auto sys = build_regularized(CMat::Zero(4, 2), y, 1.0);
        CHECK((sys.R - CMat::Identity(2, 2)).norm() <= 1e-12);
        CHECK(sys.z.norm() <= 1e-12);
        CHECK(sys.c == Catch::Approx(y.squaredNorm()).epsilon(1e-12));
    }
    SECTION("metric identity on 1000 random systems, including outlier points") {
        Rng rng(42);
        for (int i = 0; i < 1000; ++i) {
            const int kappa = 2 + static_cast<int>(rng.uniform_below(3));
            const CMat f = test::random_cmat(kappa + 2, kappa, rng);
            const CVec y = 3.0 * test::random_cmat(kappa + 2, 1, rng);
            const double alpha = 0.01 + 5.0 * rng.uniform01();
            const auto sys = build_regularized(f, y, alpha);
            CHECK(sys.c >= -1e-9);
            const std::int64_t span = (i % 5 == 0) ? 100 : 3;  // occasional large-norm outliers
            const auto s = test::random_gauss_vec(kappa, span, rng);
            const CVec sc = to_cvec(s);
            const double lhs = (y - f * sc).squaredNorm() + alpha * sc.squaredNorm();
            const double rhs = (sys.z - sys.R * sc).squaredNorm() + sys.c;
            CHECK(lhs == Catch::Approx(rhs).epsilon(1e-8));
        }
    }
    SECTION("R'R = F'F + alpha I") {
        Rng rng(43);
        const CMat f = test::random_cmat(5, 3, rng);
        const auto sys = build_regularized(f, CVec::Zero(5), 0.7);
        const CMat gram = f.adjoint() * f + 0.7 * CMat::Identity(3, 3);
        CHECK((sys.R.adjoint() * sys.R - gram).norm() <= 1e-9 * gram.norm());
    }
    SECTION("alpha = 0 with rank-deficient F is singular") {
        CMat f(4, 2);
        f.col(0) = CVec::Random(4);
        f.col(1) = 2.0 * f.col(0);
        CHECK_THROWS_AS(build_regularized(f, CVec::Zero(4), 0.0), SingularSystem);
    }
}

TEST_CASE("ml decoding is the exhaustive scan") {
    const auto spec = uncoded_spec(2, 1);
    const auto cset = make_constellation_spec(Shape::Spherical, 0.0, 100.0);
    const auto points = enumerate_constellation(spec, cset);
    Rng rng(5);

    SECTION("noiseless round trip") {
        for (const auto& s : points) {
            const CMat f = test::random_cmat(2, 2, rng);
            const auto out = ml_decode(f, f * to_cvec(s), points);
            CHECK(out.s_hat == s);
            CHECK(out.in_constellation == true);
            CHECK(out.metric <= 1e-18);
        }
    }
    SECTION("agrees with a manual scan and reports its own metric") {
        for (int i = 0; i < 50; ++i) {
            const CMat f = test::random_cmat(2, 2, rng);
            CVec y = test::random_cmat(2, 1, rng);
            const auto out = ml_decode(f, y, points);
            double best = std::numeric_limits<double>::infinity();
            DataVector arg;
            for (const auto& s : points) {
                const double m = (y - f * to_cvec(s)).squaredNorm();
                if (m < best) {
                    best = m;
                    arg = s;
                }
            }
            CHECK(out.s_hat == arg);
            CHECK(out.metric == Catch::Approx((y - f * to_cvec(out.s_hat)).squaredNorm()).epsilon(1e-8));
        }
    }
    SECTION("empty constellation raises") {
        CHECK_THROWS_AS(ml_decode(CMat::Identity(2, 2), CVec::Zero(2), {}), EmptyConstellation);
    }
    SECTION("high-SNR consistency with the regularized decoder over 1e4 trials") {
        const double rho = db_to_linear(18.0);
        const double theta = normalize_power(spec, {Shape::Spherical, 0.0, rho});
        std::uint64_t trials = 10'000, ml_err = 0, reg_err = 0, reg_in = 0;
        for (std::uint64_t t = 0; t < trials; ++t) {
            Rng trng(derive_seed(909, t));
            const auto& s = points[trng.uniform_below(points.size())];
            const auto ch = sample_rayleigh(2, 2, rho, trng);
            const auto rb = transmit(ch, encode(spec, theta, s), trng);
            const CMat f = effective_channel(spec, theta, ch.H);
            if (ml_decode(f, rb.y, points).s_hat != s) ++ml_err;
            const auto reg = regularized_lattice_decode(f, rb.y, 1.0,
                                                        BoundaryContext{&spec, {Shape::Spherical, 0.0, rho}});
            if (*reg.in_constellation) {
                ++reg_in;
                if (reg.s_hat != s) ++reg_err;
            }
        }
        const double p1 = static_cast<double>(ml_err) / static_cast<double>(trials);
        const double p2 = static_cast<double>(reg_err) / static_cast<double>(reg_in);
        const double pbar = (p1 + p2) / 2.0;
        const double sigma = std::sqrt(pbar * (1.0 - pbar) *
                                       (1.0 / trials + 1.0 / static_cast<double>(reg_in)));
        CHECK(std::abs(p1 - p2) <= 3.0 * sigma + 1e-12);
    }
}

TEST_CASE("cvp enumeration is exact") {
    SECTION("orthogonal case reduces to rounding") {
        CVec z(3);
        z << cxd(0.4, 0.4), cxd(-1.3, 2.2), cxd(0.1, -0.49);
        const auto sol = cvp_enumerate(CMat::Identity(3, 3), z);
        CHECK(sol.s == DataVector{{0, 0}, {-1, 2}, {0, 0}});
    }
    SECTION("exact halves round to even") {
        CVec z(2);
        z << cxd(0.5, 0.0), cxd(1.5, -2.5);
        const auto sol = cvp_enumerate(CMat::Identity(2, 2), z);
        CHECK(sol.s == DataVector{{0, 0}, {2, -2}});
    }
    SECTION("matches boxed brute force on random instances") {
        Rng rng(31337);
        for (int i = 0; i < 400; ++i) {
            const int kappa = 1 + static_cast<int>(rng.uniform_below(i < 350 ? 2 : 3));
            const CMat r = test::random_uppertri(kappa, rng);
            const CVec z = r * to_cvec(test::random_gauss_vec(kappa, 3, rng)) +
                           0.7 * test::random_cmat(kappa, 1, rng).col(0);
            const auto sol = cvp_enumerate(r, z);
            const auto oracle = test::brute_force_cvp(r, z, 4);
            CHECK(sol.s == oracle.s);
            CHECK(sol.dist_sq == Catch::Approx(oracle.dist_sq).epsilon(1e-9));
        }
    }
    SECTION("node budget is enforced") {
        Rng rng(7);
        const CMat r = test::random_uppertri(4, rng);
        const CVec z = 5.0 * test::random_cmat(4, 1, rng).col(0);
        CHECK_THROWS_AS(cvp_enumerate(r, z, 3), BudgetExceeded);
    }
    SECTION("singular system is rejected") {
        CMat r = CMat::Identity(3, 3);
        r(1, 1) = 0.0;
        CHECK_THROWS_AS(cvp_enumerate(r, CVec::Zero(3)), SingularSystem);
    }
}

TEST_CASE("naive lattice decoder") {
    const auto golden = golden_code_spec();
    Rng rng(17);

    SECTION("noiseless round trip") {
        for (int i = 0; i < 100; ++i) {
            const auto s = test::random_gauss_vec(4, 3, rng);
            const CMat f = test::random_cmat(4, 4, rng);
            const auto out = naive_lattice_decode(f, f * to_cvec(s));
            CHECK(out.s_hat == s);
        }
    }
    SECTION("identity channel reduces to componentwise rounding") {
        CVec y(2);
        y << cxd(1.2, -0.7), cxd(-3.4, 0.2);
        const auto out = naive_lattice_decode(CMat::Identity(2, 2), y);
        CHECK(out.s_hat == DataVector{{1, -1}, {-3, 0}});
        CHECK(out.in_constellation == std::nullopt);
    }
    SECTION("rank-deficient F is a declared failure") {
        CMat f(4, 2);
        f.col(0) = CVec::Random(4);
        f.col(1) = f.col(0);
        CHECK_THROWS_AS(naive_lattice_decode(f, CVec::Zero(4)), SingularSystem);
    }
    SECTION("ignoring the boundary leaves the constellation more often than regularizing") {
        const double rho = db_to_linear(14.0);
        const double r = 1.0;
        const ConstellationSpec cset{Shape::Spherical, r, rho};
        const auto points = enumerate_constellation(golden, cset);
        const double theta = normalize_power(golden, cset);
        const double alpha = mmse_alpha(rho, r, 2, 4);
        const BoundaryContext ctx{&golden, cset};
        std::uint64_t naive_out = 0, reg_out = 0;
        for (std::uint64_t t = 0; t < 4000; ++t) {
            Rng trng(derive_seed(2024, t));
            const auto& s = points[trng.uniform_below(points.size())];
            const auto ch = sample_rayleigh(2, 2, rho, trng);
            const auto rb = transmit(ch, encode(golden, theta, s), trng);
            const CMat f = effective_channel(golden, theta, ch.H);
            if (!*naive_lattice_decode(f, rb.y, ctx).in_constellation) ++naive_out;
            if (!*regularized_lattice_decode(f, rb.y, alpha, ctx).in_constellation) ++reg_out;
        }
        CHECK(naive_out > reg_out);
    }
}

TEST_CASE("regularized lattice decoder") {
    Rng rng(23);

    SECTION("a dominating regularizer forces the zero vector") {
        for (int i = 0; i < 100; ++i) {
            const CMat f = test::random_cmat(3, 3, rng);
            // unit-norm transmitted vector, small noise
            DataVector s(3);
            s[static_cast<std::size_t>(rng.uniform_below(3))] = {1, 0};
            const CVec y = f * to_cvec(s) + 0.01 * test::random_cmat(3, 1, rng).col(0);
            Eigen::JacobiSVD<CMat> svd(f.adjoint() * f);
            const double alpha = 4.0 * svd.singularValues()(0);
            const auto out = regularized_lattice_decode(f, y, alpha);
            CHECK(out.s_hat == DataVector(3));
        }
    }
    SECTION("vanishing alpha agrees with the naive decoder") {
        for (int i = 0; i < 1000; ++i) {
            const CMat f = test::random_cmat(3, 3, rng) + 2.0 * CMat::Identity(3, 3);
            const CVec y = 2.0 * test::random_cmat(3, 1, rng).col(0);
            const auto reg = regularized_lattice_decode(f, y, 1e-12);
            const auto naive = naive_lattice_decode(f, y);
            CHECK(reg.s_hat == naive.s_hat);
        }
    }
    SECTION("noiseless decoding succeeds once SNR clears the instance threshold") {
        const auto golden = golden_code_spec();
        const CMat h = CMat::Identity(2, 2);
        const DataVector s{{1, 0}, {0, -1}, {1, 1}, {0, 0}};
        bool succeeded_before = false;
        for (const double rho_db : {6.0, 14.0, 22.0, 30.0, 38.0}) {
            const double rho = db_to_linear(rho_db);
            const ConstellationSpec cset{Shape::Spherical, 1.0, rho};
            if (!in_constellation(golden, cset, s)) continue;
            const double theta = normalize_power(golden, cset);
            const CMat f = effective_channel(golden, theta, h);
            const auto out =
                regularized_lattice_decode(f, f * to_cvec(s), mmse_alpha(rho, 1.0, 2, 4));
            if (succeeded_before) CHECK(out.s_hat == s);  // no relapse once past the threshold
            if (out.s_hat == s) succeeded_before = true;
        }
        CHECK(succeeded_before);
    }
    SECTION("metric is the regularized objective at the decision") {
        const CMat f = test::random_cmat(4, 3, rng);
        const CVec y = 2.0 * test::random_cmat(4, 1, rng).col(0);
        const auto out = regularized_lattice_decode(f, y, 0.3);
        const CVec sc = to_cvec(out.s_hat);
        CHECK(out.metric ==
              Catch::Approx((y - f * sc).squaredNorm() + 0.3 * sc.squaredNorm()).epsilon(1e-8));
    }
    SECTION("alpha must be positive") {
        CHECK_THROWS_AS(regularized_lattice_decode(CMat::Identity(2, 2), CVec::Zero(2), 0.0),
                        OutOfRange);
    }
}

TEST_CASE("codeword-regularized decoding matches the data-regularized form for unitary G") {
    Rng rng(29);
    const auto golden = golden_code_spec();

    SECTION("golden code (unitary G): identical outputs with alpha = theta^2/rho") {
        for (int i = 0; i < 200; ++i) {
            const double rho = db_to_linear(8.0 + 12.0 * rng.uniform01());
            const double theta = std::sqrt(2.0 * rho);  // r = 0 normalization
            const auto ch = sample_rayleigh(2, 2, rho, rng);
            const CMat f = effective_channel(golden, theta, ch.H);
            const CVec y = f * to_cvec(test::random_gauss_vec(4, 1, rng)) +
                           test::random_cmat(4, 1, rng).col(0);
            const auto a = codeword_regularized_decode(f, y, golden, theta, rho);
            const auto b = regularized_lattice_decode(f, y, theta * theta / rho);
            CHECK(a.s_hat == b.s_hat);
        }
    }
    SECTION("identity generator: same special case") {
        const auto spec = uncoded_spec(2, 2);
        for (int i = 0; i < 100; ++i) {
            const double rho = 50.0;
            const double theta = 1.7;
            const auto ch = sample_rayleigh(2, 2, rho, rng);
            const CMat f = effective_channel(spec, theta, ch.H);
            const CVec y = test::random_cmat(4, 1, rng).col(0) * 2.0;
            const auto a = codeword_regularized_decode(f, y, spec, theta, rho);
            const auto b = regularized_lattice_decode(f, y, theta * theta / rho);
            CHECK(a.s_hat == b.s_hat);
        }
    }
    SECTION("noiseless round trip at high SNR") {
        const double rho = db_to_linear(30.0);
        const double theta = std::sqrt(2.0 * rho);
        const auto ch = sample_rayleigh(2, 2, rho, rng);
        const CMat f = effective_channel(golden, theta, ch.H);
        const DataVector s{{0, 1}, {0, 0}, {-1, 0}, {0, 0}};
        CHECK(codeword_regularized_decode(f, f * to_cvec(s), golden, theta, rho).s_hat == s);
    }
}

TEST_CASE("linear mmse decoding") {
    Rng rng(37);

    SECTION("identity channel with vanishing alpha rounds y") {
        CVec y(3);
        y << cxd(0.6, -1.2), cxd(2.4, 0.4), cxd(-0.3, 0.3);
        const auto out = linear_mmse_decode(CMat::Identity(3, 3), y, 1e-12);
        CHECK(out.s_hat == DataVector{{1, -1}, {2, 0}, {0, 0}});
    }
    SECTION("triangular route equals the normal-equations route") {
        for (int i = 0; i < 1000; ++i) {
            const int kappa = 2 + static_cast<int>(rng.uniform_below(3));
            const CMat f = test::random_cmat(kappa + 1, kappa, rng);
            const CVec y = 2.0 * test::random_cmat(kappa + 1, 1, rng).col(0);
            const double alpha = 0.05 + rng.uniform01();
            const auto sys = build_regularized(f, y, alpha);
            const CVec via_r = sys.R.triangularView<Eigen::Upper>().solve(sys.z);
            const CMat gram = f.adjoint() * f + alpha * CMat::Identity(kappa, kappa);
            const CVec direct = gram.ldlt().solve(f.adjoint() * y);
            CHECK((via_r - direct).norm() <= 1e-9 * (1.0 + direct.norm()));
        }
    }
    SECTION("zero observation decodes to zero") {
        const auto out = linear_mmse_decode(test::random_cmat(3, 3, rng), CVec::Zero(3), 0.5);
        CHECK(out.s_hat == DataVector(3));
    }
}

TEST_CASE("lr-aided mmse decoding") {
    Rng rng(41);

    SECTION("orthogonal-column F: identical to plain mmse rounding") {
        for (int i = 0; i < 200; ++i) {
            // F = Q D has orthogonal columns, so R is diagonal up to permutation
            const CMat q = Eigen::HouseholderQR<CMat>(test::random_cmat(4, 4, rng)).householderQ();
            RVec d(4);
            for (int k = 0; k < 4; ++k) d[k] = 0.3 + 3.0 * rng.uniform01();
            const CMat f = q * d.asDiagonal();
            const CVec y = 3.0 * test::random_cmat(4, 1, rng).col(0);
            const double alpha = 0.1 + rng.uniform01();
            CHECK(lr_mmse_decode(f, y, alpha).s_hat == linear_mmse_decode(f, y, alpha).s_hat);
        }
    }
    SECTION("agreement ladder: reduction strictly improves on plain rounding") {
        const auto spec = uncoded_spec(3, 1);
        std::uint64_t lr_agree = 0, mmse_agree = 0;
        const std::uint64_t trials = 10'000;
        for (std::uint64_t t = 0; t < trials; ++t) {
            Rng trng(derive_seed(555, t));
            const CMat f = test::random_cmat(3, 3, trng);
            const CVec y = f * to_cvec(test::random_gauss_vec(3, 2, trng)) +
                           0.5 * test::random_cmat(3, 1, trng).col(0);
            const double alpha = 0.05;
            const auto exact = regularized_lattice_decode(f, y, alpha);
            if (lr_mmse_decode(f, y, alpha).s_hat == exact.s_hat) ++lr_agree;
            if (linear_mmse_decode(f, y, alpha).s_hat == exact.s_hat) ++mmse_agree;
        }
        CHECK(lr_agree > mmse_agree);
        CHECK(lr_agree > trials * 9 / 10);
    }
    SECTION("babai success condition transfers correctness through T") {
        const auto golden = golden_code_spec();
        int condition_hits = 0;
        for (int i = 0; i < 500; ++i) {
            const double rho = db_to_linear(16.0);
            const ConstellationSpec cset{Shape::Spherical, 1.0, rho};
            const auto points = enumerate_constellation(golden, cset);
            Rng trng(derive_seed(777, static_cast<std::uint64_t>(i)));
            const auto& s = points[trng.uniform_below(points.size())];
            const double theta = normalize_power(golden, cset);
            const auto ch = sample_rayleigh(2, 2, rho, trng);
            const auto rb = transmit(ch, encode(golden, theta, s), trng);
            const CMat f = effective_channel(golden, theta, ch.H);
            const double alpha = mmse_alpha(rho, 1.0, 2, 4);

            const auto sys = build_regularized(f, rb.y, alpha);
            const auto red = lll_reduce(sys.R);
            const CVec v = Eigen::PartialPivLU<CMat>(red.B_tilde).solve(sys.z);
            const DataVector s_bar = inverse_unimodular(red.T).apply(s);
            double linf = 0.0;
            for (int k = 0; k < 4; ++k) {
                const cxd diff = v[k] - s_bar[static_cast<std::size_t>(k)].to_complex();
                linf = std::max({linf, std::abs(diff.real()), std::abs(diff.imag())});
            }
            if (linf < 0.5 - 1e-9) {
                ++condition_hits;
                CHECK(lr_mmse_decode(f, rb.y, alpha).s_hat == s);
            }
            // unimodular round trip is exact for every decode
            CHECK(red.T.apply(s_bar) == s);
        }
        CHECK(condition_hits > 50);  // the condition actually fires at this SNR
    }
}

TEST_CASE("pairwise separation margin") {
    const auto golden = golden_code_spec();

    SECTION("single pair matches the hand formula") {
        const ChannelRealization ch{CMat::Identity(2, 2), 100.0};
        const double theta = 3.0;
        const CMat f = effective_channel(golden, theta, ch.H);
        const DataVector zero(4);
        DataVector e1(4);
        e1[0] = {1, 0};
        const double margin = separation_margin(f, ch, 1.0, 0.5, 0.1, 2, 4, {zero, e1});
        const double expected =
            (f * to_cvec(e1)).squaredNorm() / std::pow(100.0, (0.5 - 0.1) / 2.0 - 0.1 * 2.0 / 4.0);
        CHECK(margin == Catch::Approx(expected).epsilon(1e-12));
    }
    SECTION("well-conditioned channel: golden margins trend upward with SNR") {
        std::vector<double> margins;
        for (const double rho : {1e2, 1e3, 1e4}) {
            const ChannelRealization ch{CMat::Identity(2, 2), rho};
            const ConstellationSpec cset{Shape::Spherical, 1.0, rho};
            const double theta = normalize_power(golden, cset);
            const CMat f = effective_channel(golden, theta, ch.H);
            const auto pts = enumerate_constellation(
                golden, make_constellation_spec(Shape::Spherical, 1.1, rho), 3000);
            margins.push_back(separation_margin(f, ch, 1.0, 0.5, 0.1, 2, 4, pts));
        }
        CHECK(margins[1] >= margins[0] * 0.99);
        CHECK(margins[2] >= margins[1] * 0.99);
    }
    SECTION("uncoded transmission collapses on adversarial near-singular channels") {
        const auto spec = uncoded_spec(2, 1);
        std::vector<double> margins;
        for (const double rho : {1e2, 1e3, 1e4}) {
            CMat h(2, 2);
            const double d = 2.0 * std::pow(rho, -0.2);
            h << cxd(1, 0), cxd(1, 0), cxd(1, 0), cxd(1.0 + d, 0);
            const ChannelRealization ch{h, rho};
            REQUIRE(in_no_outage(ch, 1.0, 0.5));
            const ConstellationSpec cset{Shape::Spherical, 1.0, rho};
            const double theta = normalize_power(spec, cset);
            const CMat f = effective_channel(spec, theta, ch.H);
            const DataVector zero(2);
            DataVector e1(2), e2(2), diag(2);
            e1[0] = {1, 0};
            e2[1] = {1, 0};
            diag[0] = {1, 0};
            diag[1] = {-1, 0};
            margins.push_back(separation_margin(f, ch, 1.0, 0.5, 0.1, 1, 2, {zero, e1, e2, diag}));
        }
        CHECK(margins[2] < 0.2 * margins[0]);
    }
    SECTION("outage channels are rejected") {
        const ChannelRealization ch{0.001 * CMat::Identity(2, 2), 1e4};
        const CMat f = effective_channel(golden, 1.0, ch.H);
        DataVector e1(4);
        e1[0] = {1, 0};
        CHECK_THROWS_AS(separation_margin(f, ch, 1.0, 0.5, 0.1, 2, 4, {DataVector(4), e1}),
                        PrematureOutage);
    }
}
