// When attainability fails: lower bound v^L, myopic-policy cost v^U, the
// Delta gap bound, the delta-shifted tighter lower bound, and the
// observation-informativeness (garbling) ordering.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "beliefstock/gamma.hpp"
#include "beliefstock/model.hpp"

namespace beliefstock {

/// v^L_n: order-up-to fixed at s*(.) each epoch. Independent of s; computed
/// with the gamma recursion (it coincides with v_n(., s <= s*) under A1).
GammaSet lower_bound_vL(const ModelSpec& model, int n, const GammaOptions& opts = {});

/// v^U_n(x,s): exact outcome-tree cost of the "order up to max{s*(x), s}"
/// policy. Throws ResourceError past the depth cap rather than approximating.
double upper_bound_vU(const ModelSpec& model, const Belief& x, int s, int n, int depth_cap = 8);

struct GapPair {
    int m_index = 0, l_index = 0; // 0-based demand indices: region / held level
    double value = 0.0;
    Belief argmax;
};

struct GapReport {
    double delta = 0.0;
    std::vector<GapPair> pairs;
    double beta = 0.0;
    int probe_horizon = 2;
    double horizon_bound = 0.0;   // Delta sum_{k<n} beta^k
    double infinite_bound = 0.0;  // Delta / (1-beta)

    // gap over the full probe set (s up to d_M)
    double max_gap = 0.0;
    Belief argmax_belief;
    int argmax_s = 0;
    double vl_at_argmax = 0.0;
    double rel_gap_bound = 0.0; // horizon_bound / v^L_n(argmax belief)

    // gap restricted to s <= max_x s* - d_1, where the bound proposition applies
    double max_gap_bound_domain = 0.0;
    Belief argmax_bound_belief;
    int argmax_bound_s = 0;

    uint64_t probe_seed = 0;
    int probe_count = 0;
};

struct GapOptions {
    int horizon = 2;
    int probe_count = 256; // random beliefs added to the unit vertices
    uint64_t seed = 0x5EEDBE11EF570C4ULL;
    int vu_depth_cap = 8;
};

/// Delta = max over region/level pairs of the single-period excess
/// L(x, d_l) - L(x, d_m) maximized over the closure of X_m, plus probe-set
/// gap diagnostics at the configured horizon.
GapReport delta_gap(const ModelSpec& model, const GapOptions& opts = {});

std::string gap_report_to_json(const GapReport& report, const ModelSpec& model);

/// The delta-shifted primed model: d'_m = d_m + delta, same kernel and costs.
/// Rejects delta below min_delta(model).
ModelSpec shift_model(const ModelSpec& model, int delta);

/// v'_n(x,s): the primed problem's optimal value at the unchanged state
/// (A1 holds on the primed problem, so its gamma ladder is exact).
double tighter_lower_vprime(const ModelSpec& model, int delta, int n, const Belief& x, int s,
                            const GammaOptions& opts = {});
/// Same, against a precomputed primed model and ladder.
double tighter_lower_vprime(const ModelSpec& primed, const std::vector<GammaSet>& primed_ladder,
                            const Belief& x, int s, int n);

/// Observation array q(d,z | i,j) = Pr(d,z | mu(t+1)=j, mu(t)=i); outcomes
/// are flattened o = d*Z + z. Rows with zero transition mass are filled
/// uniform to keep the array stochastic.
struct ObservationArray {
    int states = 0;
    int outcomes = 0;
    std::vector<double> q; // [(i*states + j)*outcomes + o]

    double at(int i, int j, int o) const {
        return q[(static_cast<size_t>(i) * states + j) * outcomes + o];
    }
};

ObservationArray observation_array(const ModelSpec& model);

/// True iff qprime is at least as informative as q: a stochastic garbling R
/// with Q' R = Q exists (LP feasibility).
bool informativeness(const ObservationArray& q, const ObservationArray& qprime);

} // namespace beliefstock
