#include <doctest.h>

#include <cmath>

#include "beliefstock/belief.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace beliefstock;

TEST_CASE("sigma(d_1, e_3) on example 1 matches the hand-checkable sum") {
    const ModelSpec m = fixtures::example1();
    const Belief e3 = Belief::unit(3, 2);
    // oracle: direct 3-term sum over the raw kernel
    CHECK(sigma(m, 0, 0, e3) == doctest::Approx(oracles::raw_sigma(m, 0, 0, e3)).epsilon(1e-12));
    CHECK(sigma(m, 0, 0, e3) == doctest::Approx(0.0325).epsilon(0.02)); // +-5e-4
    CHECK(std::abs(sigma(m, 0, 0, e3) - 0.0325) <= 5e-4);
}

TEST_CASE("outcome probabilities sum to one") {
    const ModelSpec m = fixtures::example1_rz();
    SplitMix64 rng(3);
    for (int t = 0; t < 20; ++t) {
        const Belief x = oracles::random_belief(rng, 3);
        double total = 0.0;
        for (int d = 0; d < m.demand_count(); ++d)
            for (int z = 0; z < m.aod_count(); ++z) total += sigma(m, d, z, x);
        CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("deterministic demand concentrates sigma") {
    const ModelSpec m = fixtures::deterministic_demand();
    const Belief x(std::vector<double>{0.4, 0.6});
    CHECK(sigma(m, 0, 0, x) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(sigma_marginal(m, 0, x) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("posterior updates reproduce the example-1 values") {
    const ModelSpec plain = fixtures::example1();
    const Belief e3 = Belief::unit(3, 2);
    const Belief lam = lambda_update(plain, 0, 0, e3);
    CHECK(std::abs(lam[0] - 0.28) <= 5e-3);
    CHECK(std::abs(lam[1] - 0.26) <= 5e-3);
    CHECK(std::abs(lam[2] - 0.46) <= 5e-3);

    const ModelSpec with_z = fixtures::example1_rz();
    const Belief l1 = lambda_update(with_z, 0, 0, e3);
    CHECK(std::abs(l1[0] - 0.61) <= 5e-3);
    CHECK(std::abs(l1[1] - 0.39) <= 5e-3);
    CHECK(std::abs(l1[2] - 0.0) <= 5e-3);
    const Belief l2 = lambda_update(with_z, 0, 1, e3);
    CHECK(std::abs(l2[0] - 0.0) <= 5e-3);
    CHECK(std::abs(l2[1] - 0.15) <= 5e-3);
    CHECK(std::abs(l2[2] - 0.85) <= 5e-3);
}

TEST_CASE("impossible observations raise instead of dividing by zero") {
    const ModelSpec with_z = fixtures::example1_rz();
    // from e_1, outcome z=2 requires mu(t+1)=3 which RZ row 3 maps to z=2 only;
    // engineering a zero: state 1 with z outcome... use a belief on a state whose
    // row gives zero mass to (d, z): e_1 of the perfect-AOD variant observing z != j
    const ModelSpec perfect = derive_variant(fixtures::example1(), Variant::perfect_aod);
    const Belief e1 = Belief::unit(3, 0);
    // choose (d, z) pair with sigma == 0: z=0 has mass only via j=0
    double sg = sigma(perfect, 0, 0, e1);
    if (sg >= kSigmaFloor) {
        // fall back: a two-state chain that never reaches state 2
        std::vector<std::vector<double>> P{{1.0, 0.0}, {0.0, 1.0}};
        std::vector<std::vector<double>> QD{{1.0, 0.0}, {0.0, 1.0}};
        const ModelSpec chain({0, 1}, 1, build_factored(P, QD), CostParams{1, 1, 0, 0.0});
        CHECK_THROWS_AS(lambda_update(chain, 1, 0, Belief::unit(2, 0)),
                        ImpossibleObservationError);
    } else {
        CHECK_THROWS_AS(lambda_update(perfect, 0, 0, e1), ImpossibleObservationError);
    }
}

TEST_CASE("static unobserved modulation keeps the belief fixed") {
    const ModelSpec m = fixtures::static_unobserved();
    const Belief x(std::vector<double>{0.2, 0.5, 0.3});
    for (int n = 0; n <= 3; ++n) {
        const auto reach = reachable_beliefs(m, x, n);
        REQUIRE(reach.size() == 1);
        for (int i = 0; i < 3; ++i) CHECK(reach[0][i] == doctest::Approx(x[i]).epsilon(1e-9));
    }
}

TEST_CASE("static modulation pins unit beliefs") {
    std::vector<std::vector<double>> P{{1.0, 0.0}, {0.0, 1.0}};
    std::vector<std::vector<double>> QD{{0.3, 0.7}, {0.6, 0.4}};
    const ModelSpec m({1, 3}, 1, build_factored(P, QD), CostParams{1, 1, 0, 0.5});
    const auto reach = reachable_beliefs(m, Belief::unit(2, 1), 4);
    REQUIRE(reach.size() == 1);
    CHECK(reach[0][1] == doctest::Approx(1.0));
}

TEST_CASE("reachable set growth is bounded by the outcome count") {
    const ModelSpec m = fixtures::example1_rz();
    const Belief x(std::vector<double>{0.3, 0.3, 0.4});
    size_t bound = 1;
    for (int n = 1; n <= 2; ++n) {
        bound *= m.demand_count() * m.aod_count();
        const auto reach = reachable_beliefs(m, x, n);
        CHECK(reach.size() <= bound);
        for (const auto& b : reach) CHECK(is_valid_belief(b));
    }
}

TEST_CASE("posterior of a mixture is the xi-weighted mixture of vertex posteriors") {
    const ModelSpec m = fixtures::example1_rz();
    SplitMix64 rng(11);
    for (int t = 0; t < 50; ++t) {
        const Belief x = oracles::random_belief(rng, 3);
        const int d = static_cast<int>(rng.next() % m.demand_count());
        const int z = static_cast<int>(rng.next() % m.aod_count());
        if (sigma(m, d, z, x) < kSigmaFloor) continue;
        const Belief lhs = lambda_update(m, d, z, x);
        std::vector<double> xi(3, 0.0);
        double denom = 0.0;
        for (int i = 0; i < 3; ++i) {
            const double si = sigma(m, d, z, Belief::unit(3, i));
            xi[i] = x[i] * si;
            denom += xi[i];
        }
        std::vector<double> rhs(3, 0.0);
        for (int i = 0; i < 3; ++i) {
            if (xi[i] <= 0.0) continue;
            const Belief li = lambda_update(m, d, z, Belief::unit(3, i));
            for (int k = 0; k < 3; ++k) rhs[k] += xi[i] / denom * li[k];
        }
        for (int k = 0; k < 3; ++k) CHECK(lhs[k] == doctest::Approx(rhs[k]).epsilon(1e-9));
    }
}

TEST_CASE("sigma and the unnormalized posterior are linear in the belief") {
    const ModelSpec m = fixtures::example1();
    SplitMix64 rng(13);
    for (int t = 0; t < 50; ++t) {
        const Belief a = oracles::random_belief(rng, 3);
        const Belief b = oracles::random_belief(rng, 3);
        const double w = rng.next_u01();
        Belief mix(std::vector<double>(3));
        for (int i = 0; i < 3; ++i) mix[i] = w * a[i] + (1 - w) * b[i];
        for (int d = 0; d < m.demand_count(); ++d) {
            CHECK(sigma(m, d, 0, mix) ==
                  doctest::Approx(w * sigma(m, d, 0, a) + (1 - w) * sigma(m, d, 0, b))
                      .epsilon(1e-9));
            const auto pm = unnormalized_posterior(m, d, 0, mix);
            const auto pa = unnormalized_posterior(m, d, 0, a);
            const auto pb = unnormalized_posterior(m, d, 0, b);
            for (int j = 0; j < 3; ++j)
                CHECK(pm[j] == doctest::Approx(w * pa[j] + (1 - w) * pb[j]).epsilon(1e-9));
        }
    }
}
