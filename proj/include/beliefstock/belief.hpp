// Bayes filtering of the modulation process: outcome probabilities sigma,
// posterior updates lambda, and reachable-belief enumeration.
#pragma once

#include <vector>

#include "beliefstock/model.hpp"

namespace beliefstock {

/// Outcomes with probability below this are treated as impossible.
inline constexpr double kSigmaFloor = 1e-12;

/// sigma(d,z,x) = x P(d,z) 1
double sigma(const ModelSpec& model, int d, int z, const Belief& x);

/// sigma(d,x) = sum_z sigma(d,z,x)
double sigma_marginal(const ModelSpec& model, int d, const Belief& x);

/// Unnormalized posterior x P(d,z); its sum is sigma(d,z,x).
std::vector<double> unnormalized_posterior(const ModelSpec& model, int d, int z, const Belief& x);

/// lambda(d,z,x) = x P(d,z) / sigma(d,z,x).
/// Throws ImpossibleObservationError when sigma(d,z,x) < kSigmaFloor.
Belief lambda_update(const ModelSpec& model, int d, int z, const Belief& x);

/// Posterior under the z-marginal kernel P(d) (AOD folded out).
Belief lambda_update_marginal(const ModelSpec& model, int d, const Belief& x);

/// B_n(x): all beliefs reachable from x in exactly n updates, outcomes with
/// sigma below the floor skipped, duplicates merged under L-infinity 1e-9.
std::vector<Belief> reachable_beliefs(const ModelSpec& model, const Belief& x, int n);

} // namespace beliefstock
