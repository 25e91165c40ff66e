// Seeded Monte-Carlo policy evaluation: discounted-cost estimates with
// confidence intervals, optional per-epoch traces, deterministic given the
// seed regardless of worker count.
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "beliefstock/model.hpp"

namespace beliefstock {

/// SplitMix64: a counter-based 64-bit generator. The state advances by a
/// fixed odd increment and each output is a finalizer of the counter, so
/// substreams seeded by mixing (seed, replication) cannot overlap.
class SplitMix64 {
  public:
    explicit SplitMix64(uint64_t seed) : state_(seed) {}

    uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ULL;
        uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
    /// uniform double in [0, 1)
    double next_u01() { return (next() >> 11) * 0x1.0p-53; }

    /// substream for one replication
    static SplitMix64 substream(uint64_t seed, uint64_t replication) {
        SplitMix64 mixer(seed ^ (0xA0761D6478BD642FULL * (replication + 1)));
        return SplitMix64(mixer.next());
    }

  private:
    uint64_t state_;
};

/// Maps (belief, inventory) to an order-up-to level >= inventory.
using Policy = std::function<int(const Belief&, int)>;

/// The myopic base stock policy: order up to max{s*(x), s}.
Policy myopic_policy(const ModelSpec& model);

struct TraceRow {
    int epoch = 0;
    int mu = 0;
    std::vector<double> belief;
    int s = 0, y = 0, d = 0, z = 0;
    double cost = 0.0;
};

struct SimOptions {
    bool check_absorption = false; // verify s(t) <= s*(x(t)) each epoch
    bool record_trace = false;     // keep the per-epoch trace of replication 0
    int threads = 0;               // 0: BELIEFSTOCK_THREADS or hardware count
};

struct SimResult {
    double mean = 0.0;
    double stderr_ = 0.0;
    double ci95_low = 0.0, ci95_high = 0.0;
    long replications = 0;
    long absorption_violations = 0; // epochs with s(t) > s*(x(t)) after an
                                    // epoch where the inequality held
    std::vector<TraceRow> trace;
};

/// Simulates the policy for `horizon` epochs over `replications` seeded
/// substreams. Sampling is inverse-CDF over the flattened (d, z, mu') joint
/// row; costs accrue beta^t (c(y,d) + K 1{order}). The mean is a pairwise
/// sum over per-replication costs, so it is independent of scheduling.
SimResult simulate_policy(const ModelSpec& model, const Policy& policy, const Belief& x0, int s0,
                          int horizon, long replications, uint64_t seed,
                          const SimOptions& opts = {});

std::string trace_to_csv(const std::vector<TraceRow>& trace, int n_states);

} // namespace beliefstock
