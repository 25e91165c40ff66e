// Attainability and its sufficient conditions: the exact LP check of A1,
// depth-limited A2, the stochastic-ordering conditions A3/A4 with the
// dominance witness construction, and the minimal attainability slack.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "beliefstock/belief.hpp"
#include "beliefstock/model.hpp"

namespace beliefstock {

struct A1Witness {
    int m_index = 0;      // region of x (0-based demand index)
    int d_index = 0;      // observed demand index
    int z = 0;            // observed AOD outcome
    int mprime_index = 0; // region of the posterior
    double violation = 0.0; // d_m - d - d_{m'}
    Belief point;           // LP witness belief strictly inside the region pair
};

enum class A1Method { exact_lp, sufficient_a3a4 };

struct A1Report {
    bool holds = false;
    A1Method method = A1Method::exact_lp;
    std::vector<A1Witness> witnesses;     // interior-feasible violations
    std::vector<A1Witness> boundary_only; // violating triples feasible only on boundaries
};

std::string a1_report_to_json(const A1Report& report, const ModelSpec& model);

/// Sweep of every (region, outcome, posterior-region) triple by LP
/// feasibility of the denominator-cleared membership inequalities. A1 holds
/// iff every interior-feasible triple satisfies d_m - d <= d_{m'}.
A1Report check_a1_exact(const ModelSpec& model);

/// True if all beliefs reachable from x within the given depth share one
/// region label. Certifies A2 only up to that depth.
bool check_a2(const ModelSpec& model, const Belief& x, int depth);

/// Tail-sum stochastic-dominance ordering of the kernel rows.
bool check_a3(const ModelSpec& model);

/// x_hat^{d,z}: the backward-cumulative-min over the vertex posteriors; a
/// first-order lower bound on every posterior lambda(d,z,x).
/// Vertices with sigma(d,z,e_i) below the floor are excluded; throws
/// ImpossibleObservationError when every vertex is excluded.
Belief construct_xhat(const ModelSpec& model, int d, int z);

/// A4: f(s*(e_N), d) <= s*(x_hat^{d,z}) for every observable (d,z).
/// With check_a3, implies A1.
bool check_a4(const ModelSpec& model);

/// Fast sampled pre-screen: tests the attainability inequality at random
/// beliefs. A returned witness disproves A1; an empty result certifies
/// nothing (use check_a1_exact for a verdict).
std::vector<A1Witness> a1_prescreen(const ModelSpec& model, int samples, uint64_t seed);

/// Smallest delta >= 0 with s*(x) - d <= s*(lambda(d,z,x)) + delta for all
/// x, d, z; the max violation over the interior-feasible triples of the A1
/// sweep, clamped at zero. Integral by construction.
double min_delta(const ModelSpec& model);

/// First-order stochastic dominance: a precedes b (a is dominated) iff every
/// tail sum of a is at most the matching tail sum of b.
bool stochastically_dominated(const Belief& a, const Belief& b, double tol = 1e-9);

} // namespace beliefstock
