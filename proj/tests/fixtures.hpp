#pragma once

#include <string>

#include "beliefstock/model.hpp"

namespace fixtures {

inline std::string data_path(const std::string& name) {
    return std::string(TEST_DATA_DIR) + "/" + name;
}

inline beliefstock::ModelSpec example1() {
    return beliefstock::load_model_file(data_path("example1.json"));
}
inline beliefstock::ModelSpec example1_rz() {
    return beliefstock::load_model_file(data_path("example1_rz.json"));
}
inline beliefstock::ModelSpec example1_k5() {
    return beliefstock::load_model_file(data_path("example1_k5.json"));
}
inline beliefstock::ModelSpec sec4() {
    return beliefstock::load_model_file(data_path("sec4.json"));
}

/// static modulation, completely unobserved: P = I, demand independent of
/// the state, no AOD channel
inline beliefstock::ModelSpec static_unobserved(int n = 3) {
    std::vector<std::vector<double>> P(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i) P[i][i] = 1.0;
    std::vector<std::vector<double>> QD(n, {0.3, 0.5, 0.2});
    beliefstock::CostParams costs{2.0, 1.0, 0.0, 0.8};
    return beliefstock::ModelSpec({1, 2, 4}, 1, beliefstock::build_factored(P, QD), costs);
}

/// deterministic demand d* with static modulation
inline beliefstock::ModelSpec deterministic_demand(int dstar = 3) {
    std::vector<std::vector<double>> P{{1.0, 0.0}, {0.0, 1.0}};
    std::vector<std::vector<double>> QD{{1.0}, {1.0}};
    beliefstock::CostParams costs{1.5, 1.0, 0.0, 0.7};
    return beliefstock::ModelSpec({dstar}, 1, beliefstock::build_factored(P, QD), costs);
}

/// single modulation state: i.i.d. demand newsvendor
inline beliefstock::ModelSpec single_state() {
    std::vector<std::vector<double>> P{{1.0}};
    std::vector<std::vector<double>> QD{{0.25, 0.45, 0.3}};
    beliefstock::CostParams costs{2.0, 1.0, 0.0, 0.85};
    return beliefstock::ModelSpec({2, 3, 5}, 1, beliefstock::build_factored(P, QD), costs);
}

} // namespace fixtures
