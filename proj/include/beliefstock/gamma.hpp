// Gamma-vector dynamic programming: finite-horizon value functions as pruned
// sets of linear coefficient rows (a piecewise-linear concave value is the
// min of inner products), plus the infinite-horizon approximation.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "beliefstock/belief.hpp"
#include "beliefstock/model.hpp"

namespace beliefstock {

class ResourceError : public std::runtime_error {
  public:
    explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

struct GammaSet {
    int horizon = 0;
    std::vector<std::vector<double>> vectors;

    double value(const Belief& x) const;
    /// Index of the minimizing vector (lowest index on ties).
    int argmin(const Belief& x) const;
    size_t size() const { return vectors.size(); }
};

struct GammaOptions {
    size_t cross_cap = 10'000'000; // max candidate set size in one cross product
    double prune_tol = 1e-10;
    int max_iterations = 1000;     // solve_infinite cap
};

/// Dominance pass plus an LP witness test per survivor: a vector is kept iff
/// some belief strictly prefers it. The represented function is unchanged.
std::vector<std::vector<double>> prune_vectors(std::vector<std::vector<double>> vectors,
                                               double tol = 1e-10);

GammaSet prune(GammaSet set, const GammaOptions& opts = {});

/// Gamma_1 = {gamma_bar_y : y in the demand grid}, pruned. |Gamma_1| <= M.
GammaSet gamma_initial(const ModelSpec& model, const GammaOptions& opts = {});

/// One Bellman step: Gamma_{n+1} = { gamma_bar + beta sum_{d,z} P(d,z) g_{d,z} },
/// computed as an incrementally pruned cross-sum. The unpruned cardinality is
/// |Gamma_1| |Gamma_n|^(M Z); the cap applies to intermediate candidate sets.
GammaSet gamma_step(const ModelSpec& model, const GammaSet& gn, const GammaOptions& opts = {});

/// The ladder Gamma_1..Gamma_n.
std::vector<GammaSet> solve_finite(const ModelSpec& model, int n, const GammaOptions& opts = {});

struct InfiniteReport {
    int iterations = 0;
    double final_change = 0.0;
    double threshold = 0.0; // eps (1-beta) / (2 beta)
    int probe_points = 0;
    bool converged = false;
};

struct InfiniteSolution {
    GammaSet gammas;
    InfiniteReport report;
};

/// Value iteration to sup-norm change <= eps(1-beta)/(2 beta) on a probe grid
/// (simplex lattice with denominator 100 for N <= 4, else 10,000 seeded
/// Dirichlet(1) draws). The certificate ||v - v*|| <= eps holds on the grid.
InfiniteSolution solve_infinite(const ModelSpec& model, double eps, const GammaOptions& opts = {});

/// The convergence probe grid used by solve_infinite.
std::vector<Belief> probe_grid(int n_states, uint64_t seed = 0x5EEDBE11EF570C4ULL);

/// v_n(x,s): the GammaSet value for s <= s*(x); for s > s*(x) the recursive
/// identity v_n(x,s) = L(x,s) + beta sum sigma v_{n-1}(lambda, s-d), falling
/// back to GammaSet values once inventory drops to the posterior base stock.
/// Valid as the optimal value when A1 holds (caller responsibility).
double value_full(const ModelSpec& model, const std::vector<GammaSet>& ladder, const Belief& x,
                  int s, int n);

/// CSV rows "horizon,g_1..g_N".
std::string gamma_to_csv(const GammaSet& set, int n_states);

} // namespace beliefstock
