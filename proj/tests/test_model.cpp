#include <doctest.h>

#include <cmath>

#include "beliefstock/model.hpp"
#include "fixtures.hpp"

using namespace beliefstock;

TEST_CASE("example 1 document loads as N=3, M=7, Z=1") {
    const ModelSpec m = fixtures::example1();
    CHECK(m.states() == 3);
    CHECK(m.demand_count() == 7);
    CHECK(m.aod_count() == 1);
    CHECK(m.demands() == std::vector<int>{5, 10, 15, 20, 25, 30, 35});
    CHECK(m.costs().p == 3.0);
    CHECK(m.costs().h == 1.0);
}

TEST_CASE("a sub-stochastic row is rejected, naming row and sum") {
    const char* doc = R"({
      "demands": [1, 2], "p": 1.0, "h": 1.0, "K": 0.0, "beta": 0.5,
      "factored": {"P": [[0.4, 0.5], [0.5, 0.5]], "QD": [[0.5, 0.5], [0.5, 0.5]]}
    })";
    CHECK_THROWS_WITH_AS(load_model(doc), doctest::Contains("row 0"), ModelError);
}

TEST_CASE("non-increasing demand grids are rejected") {
    const char* doc = R"({
      "demands": [5, 5, 10], "p": 1.0, "h": 1.0, "K": 0.0, "beta": 0.5,
      "factored": {"P": [[1.0]], "QD": [[0.2, 0.3, 0.5]]}
    })";
    CHECK_THROWS_WITH_AS(load_model(doc), doctest::Contains("strictly increasing"), ModelError);
}

TEST_CASE("exactly one of factored/joint must be present") {
    CHECK_THROWS_AS(load_model(R"({"demands":[1],"p":1,"h":1,"K":0,"beta":0})"), ModelError);
    const char* both = R"({
      "demands": [1], "p": 1, "h": 1, "K": 0, "beta": 0,
      "factored": {"P": [[1.0]], "QD": [[1.0]]},
      "joint": {"Z": 1, "P_dz": [[[[1.0]]]]}
    })";
    CHECK_THROWS_AS(load_model(both), ModelError);
}

TEST_CASE("factored expansion without RZ matches P_ij * q_jd") {
    const ModelSpec m = fixtures::example1();
    // entry (d=1, i=2, j=0): P[2][0] * QD[0][1]
    CHECK(m.joint(1, 0, 2, 0) == doctest::Approx(0.4467 * 0.2321).epsilon(1e-12));
    CHECK(m.joint(0, 0, 2, 2) == doctest::Approx(0.5220 * 0.0283).epsilon(1e-12));
}

TEST_CASE("appending an RZ yields Z=2 with rows still stochastic") {
    const ModelSpec m = fixtures::example1_rz();
    CHECK(m.aod_count() == 2);
    for (int i = 0; i < m.states(); ++i) {
        double sum = 0.0;
        for (int d = 0; d < m.demand_count(); ++d)
            for (int z = 0; z < m.aod_count(); ++z)
                for (int j = 0; j < m.states(); ++j) sum += m.joint(d, z, i, j);
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("identity factored case stays stochastic") {
    std::vector<std::vector<double>> P{{1.0, 0.0}, {0.0, 1.0}};
    std::vector<std::vector<double>> QD{{1.0, 0.0}, {0.0, 1.0}};
    const auto joint = build_factored(P, QD);
    const ModelSpec m({0, 1}, 1, joint, CostParams{1.0, 1.0, 0.0, 0.0});
    CHECK(m.joint(0, 0, 0, 0) == doctest::Approx(1.0));
    CHECK(m.joint(1, 0, 1, 1) == doctest::Approx(1.0));
    CHECK(m.joint(1, 0, 0, 0) == doctest::Approx(0.0));
}

TEST_CASE("dimension mismatches in the factored form are rejected") {
    std::vector<std::vector<double>> P{{1.0, 0.0}, {0.0, 1.0}};
    std::vector<std::vector<double>> QD{{1.0}};
    CHECK_THROWS_AS(build_factored(P, QD), ModelError);
}

TEST_CASE("cached marginal equals the z-sum of the joint") {
    const ModelSpec m = fixtures::example1_rz();
    for (int d = 0; d < m.demand_count(); ++d)
        for (int i = 0; i < m.states(); ++i)
            for (int j = 0; j < m.states(); ++j) {
                double s = 0.0;
                for (int z = 0; z < m.aod_count(); ++z) s += m.joint(d, z, i, j);
                CHECK(m.marginal(d, i, j) == doctest::Approx(s).epsilon(1e-12));
            }
}

TEST_CASE("strip_aod collapses the informative channel to the plain model") {
    const ModelSpec with_z = fixtures::example1_rz();
    const ModelSpec stripped = derive_variant(with_z, Variant::strip_aod);
    const ModelSpec plain = fixtures::example1();
    CHECK(stripped.aod_count() == 1);
    for (int d = 0; d < plain.demand_count(); ++d)
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                CHECK(stripped.joint(d, 0, i, j) ==
                      doctest::Approx(plain.joint(d, 0, i, j)).epsilon(1e-12));
}

TEST_CASE("strip_aod is idempotent") {
    const ModelSpec once = derive_variant(fixtures::example1(), Variant::strip_aod);
    const ModelSpec twice = derive_variant(once, Variant::strip_aod);
    CHECK(once.joint_flat() == twice.joint_flat());
}

TEST_CASE("perfect_aod reveals the successor state") {
    const ModelSpec m = derive_variant(fixtures::example1(), Variant::perfect_aod);
    CHECK(m.aod_count() == 3);
    for (int d = 0; d < m.demand_count(); ++d)
        for (int z = 0; z < 3; ++z)
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j)
                    if (z != j) CHECK(m.joint(d, z, i, j) == 0.0);
}

TEST_CASE("belief invariants") {
    CHECK(is_valid_belief(Belief::unit(4, 2)));
    CHECK_FALSE(is_valid_belief(Belief(std::vector<double>{0.5, 0.4})));
    CHECK_FALSE(is_valid_belief(Belief(std::vector<double>{1.2, -0.2})));
}

TEST_CASE("joint-form serialization round-trips") {
    const ModelSpec m = fixtures::example1_rz();
    const ModelSpec back = load_model(model_to_json(m));
    CHECK(back.states() == m.states());
    CHECK(back.aod_count() == m.aod_count());
    CHECK(back.demands() == m.demands());
    for (size_t k = 0; k < m.joint_flat().size(); ++k)
        CHECK(back.joint_flat()[k] == doctest::Approx(m.joint_flat()[k]).epsilon(1e-15));
}

TEST_CASE("cost parameter validation") {
    std::vector<std::vector<double>> P{{1.0}};
    std::vector<std::vector<double>> QD{{1.0}};
    const auto joint = build_factored(P, QD);
    CHECK_THROWS_AS(ModelSpec({1}, 1, joint, CostParams{0.0, 1.0, 0.0, 0.5}), ModelError);
    CHECK_THROWS_AS(ModelSpec({1}, 1, joint, CostParams{1.0, -1.0, 0.0, 0.5}), ModelError);
    CHECK_THROWS_AS(ModelSpec({1}, 1, joint, CostParams{1.0, 1.0, -2.0, 0.5}), ModelError);
    CHECK_THROWS_AS(ModelSpec({1}, 1, joint, CostParams{1.0, 1.0, 0.0, 1.0}), ModelError);
}
