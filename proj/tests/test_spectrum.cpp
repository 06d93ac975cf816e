#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "fhsc/calibrate.hpp"
#include "fhsc/constants.hpp"
#include "fhsc/spectrum.hpp"

using namespace fhsc;

namespace {
const Molecule& mol(int i) { return builtin_molecules()[i]; }

PotentialParams bestfit_params(const Molecule& m, double alpha) {
    return default_bestfit_mapping().params(m, alpha);
}
} // namespace

TEST_CASE("inv_q") {
    const PhysicalConstants ul = unitless_constants();
    SECTION("C = 0 gives exactly 1") {
        PotentialParams p{0, 1, 0, 0, 1, 0.1};
        CHECK(inv_q(p, 3.7, ul) == Catch::Approx(1.0).epsilon(1e-15));
    }
    SECTION("radicand 1/4 + 2 gives 2") {
        // unitless, mu = 0.5 amu -> w = 1; q*C = 2
        PotentialParams p{0, 0, 2.0, 0, 1.0, 0.1};
        CHECK(inv_q(p, 0.5, ul) == Catch::Approx(2.0).epsilon(1e-15));
    }
    SECTION("CO Kratzer well under the spatial-eV convention") {
        const Molecule& m = mol(0);
        PotentialParams p{0, 2 * m.te * m.De, m.te * m.te * m.De, 0, 1.0, 0.001};
        const double iq = inv_q(p, m.mu, spatial_ev_constants());
        // frozen from a 50-digit evaluation of the radical
        CHECK(iq == Catch::Approx(213.36493873645904).epsilon(1e-13));
        // second arithmetic path: hypot form of the radical
        const double w = two_mu_over_hbarc2(m.mu, spatial_ev_constants());
        const double iq2 = 0.5 + std::hypot(0.5, std::sqrt(w * p.q * p.C));
        CHECK(iq == Catch::Approx(iq2).epsilon(1e-14));
    }
    SECTION("negative radicand names q*C") {
        PotentialParams p{0, 1, -5.0, 0, 1.0, 0.1};
        CHECK_THROWS_WITH(inv_q(p, 10.0, ul), Catch::Matchers::ContainsSubstring("q*C"));
    }
    SECTION("invQ >= 1 whenever q*C >= 0") {
        std::mt19937 rng(20240811);
        std::uniform_real_distribution<double> U(0.0, 50.0);
        for (int i = 0; i < 200; ++i) {
            PotentialParams p{0, 0, U(rng), 0, U(rng) / 25.0, 0.1};
            CHECK(inv_q(p, 0.1 + U(rng), ul) >= 1.0);
        }
    }
}

TEST_CASE("free-case momentum is exact") {
    const PhysicalConstants ul = unitless_constants();
    const double mu = 3.0, alpha = 0.07;
    PotentialParams p{0, 0, 0, 0, 1.0, alpha};
    for (int n = 0; n <= 20; ++n) {
        const SpectrumResult r = momentum_eigenvalue(n, p, mu, ul);
        const double expected = -(alpha * alpha / (8.0 * mu)) * (n + 1.0) * (n + 1.0);
        REQUIRE(r.Pn == Catch::Approx(expected).epsilon(1e-12));
        CHECK(r.invQ == Catch::Approx(1.0).epsilon(1e-15));
        // identical to the screened-Coulomb formula at z = 0
        CHECK(r.Pn == screened_coulomb_momentum(n, 0.0, alpha, mu, ul).Pn);
    }
}

TEST_CASE("table-mapping eigenvalues (best-fit, unitless)") {
    const PhysicalConstants ul = unitless_constants();
    const Molecule& co = mol(0);
    SECTION("frozen values") {
        CHECK(momentum_eigenvalue(0, bestfit_params(co, 0.001), co.mu, ul).Pn ==
              Catch::Approx(1.5655054131435059).epsilon(1e-13));
        CHECK(momentum_eigenvalue(0, bestfit_params(co, 0.05), co.mu, ul).Pn ==
              Catch::Approx(1.4761674590757353).epsilon(1e-13));
        CHECK(momentum_eigenvalue(3, bestfit_params(co, 0.05), co.mu, ul).Pn ==
              Catch::Approx(4.2444188597313469).epsilon(1e-13));
        const SpectrumResult r5 = momentum_eigenvalue(5, bestfit_params(co, 0.05), co.mu, ul);
        CHECK(r5.Pn == Catch::Approx(5.415449405552919).epsilon(1e-13));
        CHECK(r5.eps1 == Catch::Approx(152.56051162505054).epsilon(1e-12));
        CHECK(r5.invQ == Catch::Approx(14.271644364346002).epsilon(1e-13));
    }
    SECTION("published reference ground state is not reproduced; the gap is the documented residual") {
        const double model = momentum_eigenvalue(0, bestfit_params(co, 0.001), co.mu, ul).Pn;
        CHECK(model - 1.540356974 == Catch::Approx(0.0251484391).margin(1e-7));
    }
    SECTION("invQ is identical across alpha") {
        const double a = momentum_eigenvalue(2, bestfit_params(co, 0.001), co.mu, ul).invQ;
        const double b = momentum_eigenvalue(2, bestfit_params(co, 0.05), co.mu, ul).invQ;
        const double c = momentum_eigenvalue(2, bestfit_params(co, 0.1), co.mu, ul).invQ;
        CHECK(std::abs(a - b) <= 1e-14 * a);
        CHECK(std::abs(a - c) <= 1e-14 * a);
    }
    SECTION("monotone trend and spacing in the published regime") {
        for (int mi = 0; mi < 4; ++mi) {
            const Molecule& m = mol(mi);
            for (double alpha : {0.001, 0.05, 0.1}) {
                std::vector<double> P;
                for (int n = 0; n <= 9; ++n)
                    P.push_back(momentum_eigenvalue(n, bestfit_params(m, alpha), m.mu, ul).Pn);
                for (int n = 0; n < 9; ++n) REQUIRE(P[n + 1] > P[n]);
                for (int n = 0; n < 8; ++n) REQUIRE(P[n + 2] - P[n + 1] < P[n + 1] - P[n]);
            }
        }
    }
    SECTION("ladder terminates at the first non-normalizable level") {
        // frozen cutoff: CO, alpha=0.1 supports exactly 41 bound levels
        auto ladder = momentum_ladder(bestfit_params(co, 0.1), co.mu, ul, 60);
        CHECK(ladder.size() == 41);
        CHECK_FALSE(momentum_eigenvalue(41, bestfit_params(co, 0.1), co.mu, ul).normalizable);
        CHECK(momentum_eigenvalue(40, bestfit_params(co, 0.1), co.mu, ul).normalizable);
    }
}

TEST_CASE("modified Kratzer special case") {
    const Molecule& co = mol(0);
    SECTION("frozen values under both conventions") {
        CHECK(kratzer_momentum(0, co, spatial_ev_constants()).Pn ==
              Catch::Approx(-10.794315624517518).epsilon(1e-13));
        CHECK(kratzer_momentum(0, co, unitless_constants()).Pn ==
              Catch::Approx(-10.085236150542494).epsilon(1e-13));
    }
    SECTION("Pn rises monotonically to 0- as n grows") {
        const PhysicalConstants k = unitless_constants();
        double prev = kratzer_momentum(0, co, k).Pn;
        for (int n = 1; n <= 200; ++n) {
            const double v = kratzer_momentum(n, co, k).Pn;
            REQUIRE(v < 0);
            REQUIRE(v > prev);
            prev = v;
        }
        CHECK(kratzer_momentum(200, co, k).Pn > -0.2);
    }
    SECTION("De -> 4 De scales Pn by 16 at frozen 1/Q") {
        // algebraic identity on the closed form: Pn (n + 1/Q)^2 scales as De^2
        const PhysicalConstants k = unitless_constants();
        Molecule m4 = co;
        m4.De *= 4.0;
        for (int n : {0, 3, 7}) {
            const SpectrumResult a = kratzer_momentum(n, co, k);
            const SpectrumResult b = kratzer_momentum(n, m4, k);
            const double lhs = b.Pn * (n + b.invQ) * (n + b.invQ);
            const double rhs = 16.0 * a.Pn * (n + a.invQ) * (n + a.invQ);
            CHECK(lhs == Catch::Approx(rhs).epsilon(1e-12));
        }
    }
}

TEST_CASE("screened Coulomb and Coulomb special cases") {
    const PhysicalConstants ul = unitless_constants();
    const Molecule& co = mol(0);
    SECTION("frozen value: z=1, alpha=0.05, CO mass, unitless") {
        CHECK(screened_coulomb_momentum(0, 1.0, 0.05, co.mu, ul).Pn ==
              Catch::Approx(-3.4053385500448504).epsilon(1e-13));
    }
    SECTION("direct transcription of the special-case formula agrees") {
        // independent algebraic route for the B=C=D=0 case
        const double z = 1.0, mu = co.mu;
        for (double alpha : {0.01, 0.05, 0.2}) {
            for (int n : {0, 1, 4}) {
                const double w = two_mu_over_hbarc2(mu, ul);
                const double bracket =
                    (-(w / alpha) * z * ul.e2 + n * (n + 2.0) + 1.0) / (2.0 * (n + 1.0));
                const double direct = -(alpha * alpha / w) * bracket * bracket;
                CHECK(screened_coulomb_momentum(n, z, alpha, mu, ul).Pn ==
                      Catch::Approx(direct).epsilon(1e-12));
            }
        }
    }
    SECTION("alpha -> 0 converges to the Coulomb formula at O(alpha)") {
        const double z = 1.0;
        for (int n = 0; n <= 5; ++n) {
            const double coul = coulomb_momentum(n, z, co.mu, ul);
            double err[3];
            const double alphas[3] = {1e-2, 1e-3, 1e-4};
            for (int i = 0; i < 3; ++i)
                err[i] = std::abs(screened_coulomb_momentum(n, z, alphas[i], co.mu, ul).Pn - coul);
            const double slope = std::log(err[0] / err[2]) / std::log(alphas[0] / alphas[2]);
            CHECK(slope >= 0.9);
        }
    }
    SECTION("Coulomb ratios and scalings") {
        const double P0 = coulomb_momentum(0, 1.0, co.mu, ul);
        for (int n = 1; n <= 6; ++n)
            CHECK(coulomb_momentum(n, 1.0, co.mu, ul) / P0 ==
                  Catch::Approx(1.0 / ((n + 1.0) * (n + 1.0))).epsilon(1e-14));
        CHECK(coulomb_momentum(1000, 1.0, co.mu, ul) > -1e-5 * std::abs(P0));
        CHECK(coulomb_momentum(3, 2.0, co.mu, ul) ==
              Catch::Approx(4.0 * coulomb_momentum(3, 1.0, co.mu, ul)).epsilon(1e-14));
        // spatial-eV frozen value (deep hydrogen-like scale)
        CHECK(coulomb_momentum(0, 1.0, co.mu, spatial_ev_constants()) ==
              Catch::Approx(-170152.83717170924).epsilon(1e-12));
    }
}

TEST_CASE("lambda consistency residual") {
    const PhysicalConstants ul = unitless_constants();
    const Molecule& co = mol(0);
    SECTION("zero at the exact root, free case n=0") {
        PotentialParams p{0, 0, 0, 0, 1.0, 0.07};
        const SpectrumResult r = momentum_eigenvalue(0, p, 3.0, ul);
        CHECK(lambda_consistency(r, p, 3.0, ul) <= 1e-14);
    }
    SECTION("within contract for the CO mapping, n=5, alpha=0.05") {
        PotentialParams p = bestfit_params(co, 0.05);
        const SpectrumResult r = momentum_eigenvalue(5, p, co.mu, ul);
        CHECK(lambda_consistency(r, p, co.mu, ul) <= 1e-10);
        CHECK(r.lambda_residual <= 1e-10);
    }
    SECTION("within contract under the spatial convention at small alpha") {
        const PhysicalConstants sp = spatial_ev_constants();
        PotentialParams p = kratzer_params(co, 0.001);
        const SpectrumResult r = momentum_eigenvalue(0, p, co.mu, sp);
        CHECK(lambda_consistency(r, p, co.mu, sp) <= 1e-10);
    }
    SECTION("a 1% momentum perturbation is loudly visible") {
        PotentialParams p = bestfit_params(co, 0.05);
        SpectrumResult r = momentum_eigenvalue(5, p, co.mu, ul);
        r.Pn *= 1.01;
        CHECK(lambda_consistency(r, p, co.mu, ul) > 1e-4);
    }
}

TEST_CASE("momentum_eigenvalue argument checks") {
    const PhysicalConstants ul = unitless_constants();
    PotentialParams p{0, 1, 1, 0, 1, 0.1};
    CHECK_THROWS_AS(momentum_eigenvalue(-1, p, 1.0, ul), std::invalid_argument);
    p.alpha = 0;
    CHECK_THROWS_AS(momentum_eigenvalue(0, p, 1.0, ul), std::invalid_argument);
}
