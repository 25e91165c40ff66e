// Reorder-cost machinery under attainability: (s,S)-policy bounds and their
// belief-space partition, finite-horizon (s_n, S_n) via per-inventory gamma
// families, and K-convexity verification.
#pragma once

#include <climits>
#include <string>
#include <vector>

#include "beliefstock/gamma.hpp"
#include "beliefstock/geometry.hpp"
#include "beliefstock/model.hpp"
#include "beliefstock/single_period.hpp"

namespace beliefstock {

/// Bounds on reorder point and order-up-to level at one belief. s_lower,
/// s_upper and S_upper take demand-grid values, extended to exact integers by
/// the closed-form facet crossing only outside [d_1, d_M]; S_lower = s*(x).
struct SSBounds {
    int s_lower = 0, s_upper = 0, S_lower = 0, S_upper = 0;
    bool operator==(const SSBounds&) const = default;
};

SSBounds ss_bounds(const ModelSpec& model, const Belief& x);

struct SSRegion {
    std::vector<HalfSpace> constraints;
    SSBounds label;
    Belief witness;
};

/// Cells of constant (s_lower, s_upper, S_lower, S_upper); they partition X.
/// Defined for K > 0 only.
std::vector<SSRegion> ss_partition(const ModelSpec& model);

struct PolicyDecision {
    int order_up_to = 0;
    bool ordered = false;
    bool tie = false; // both H^K branches agree within 1e-9
    double value = 0.0;
};

struct SSRegionPolicy {
    SSRegion region;
    int s_n = 0, S_n = 0; // computed at the region witness
};

struct SSOptions {
    int depth_cap = 8;
    // inventory range the policy can be evaluated on; INT_MIN means automatic
    int eval_lo = INT_MIN;
    int eval_hi = INT_MIN;
    GammaOptions gamma;
};

/// Finite-horizon solution for the n-period problem with fixed reorder cost:
/// per-inventory gamma sets v_k(x,s) = min{x.g : g in Gamma_k(s)} for every
/// level k <= n, the (s_n, S_n) policy per bounds region, and pointwise
/// policy queries.
class SSPolicy {
  public:
    SSPolicy(ModelSpec model, int horizon, SSOptions opts);

    int horizon() const { return horizon_; }
    const std::vector<SSRegionPolicy>& regions() const { return regions_; }
    int eval_lo() const { return eval_lo_; }
    int eval_hi() const { return eval_hi_; }

    /// v_n(x, s); s outside the evaluation range is an error below eval_lo_
    /// only when it exceeds eval_hi (low s clamps to the all-order zone).
    double value(const Belief& x, int s) const;

    /// First-epoch decision of the n-period problem; evaluates both branches
    /// of the reorder operator and takes the min, flagging ties.
    PolicyDecision decide(const Belief& x, int s) const;

    /// Smallest integers with G(x,S) minimal and G(x,s) <= K + G(x,S).
    std::pair<int, int> policy_levels(const Belief& x) const;

    const GammaSet& gamma_at(int level, int s) const;

  private:
    double g_value(const Belief& x, int y) const; // [G v_{n-1}](x, y)
    int clamp_s(int s) const;

    ModelSpec model_;
    int horizon_ = 0;
    int eval_lo_ = 0, eval_hi_ = 0, s_floor_ = 0;
    int order_lo_ = 0, order_hi_ = 0; // global order-up-to candidate range
    std::vector<SSRegionPolicy> regions_;
    // families_[k][s - lo_[k]] holds Gamma_{k+1}(s)
    std::vector<std::vector<GammaSet>> families_;
    std::vector<int> lo_, hi_;
};

SSPolicy solve_ss_finite(const ModelSpec& model, int n, const SSOptions& opts = {});

std::string ss_policy_to_json(const SSPolicy& policy);
std::string ss_regions_to_json(const std::vector<SSRegion>& regions);

/// Discrete K-convexity of values on a contiguous integer interval.
bool k_convexity_check(const std::vector<double>& values, double K, double tol = 1e-9);

} // namespace beliefstock
