#include "beliefstock/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <thread>

#include "beliefstock/belief.hpp"
#include "beliefstock/single_period.hpp"

namespace beliefstock {

Policy myopic_policy(const ModelSpec& model) {
    return [&model](const Belief& x, int s) { return std::max(myopic_base_stock(model, x), s); };
}

namespace {

int worker_count(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("BELIEFSTOCK_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

int sample_index(const std::vector<double>& weights, double u) {
    double cum = 0.0;
    for (size_t i = 0; i < weights.size(); ++i) {
        cum += weights[i];
        if (u < cum) return static_cast<int>(i);
    }
    return static_cast<int>(weights.size()) - 1;
}

double pairwise_sum(const std::vector<double>& v, size_t lo, size_t hi) {
    if (hi - lo <= 8) {
        double s = 0.0;
        for (size_t i = lo; i < hi; ++i) s += v[i];
        return s;
    }
    const size_t mid = lo + (hi - lo) / 2;
    return pairwise_sum(v, lo, mid) + pairwise_sum(v, mid, hi);
}

struct RepOutcome {
    double cost = 0.0;
    long absorption_violations = 0;
};

RepOutcome run_replication(const ModelSpec& model, const Policy& policy, const Belief& x0,
                           int s0, int horizon, uint64_t seed, uint64_t rep, bool check_absorption,
                           std::vector<TraceRow>* trace) {
    const int N = model.states(), M = model.demand_count(), Z = model.aod_count();
    SplitMix64 rng = SplitMix64::substream(seed, rep);
    RepOutcome out;

    int mu = sample_index(x0.x, rng.next_u01());
    Belief x = x0;
    int s = s0;
    double discount = 1.0;
    const double beta = model.costs().beta;
    const double K = model.costs().K;
    bool absorbed = check_absorption && s <= myopic_base_stock(model, x);

    for (int t = 0; t < horizon; ++t) {
        const int y = policy(x, s);
        if (y < s)
            throw ModelError("policy returned order-up-to level " + std::to_string(y) +
                             " below inventory " + std::to_string(s));
        // inverse-CDF sample of (d, z, mu') from the joint row of mu
        const double u = rng.next_u01();
        int d = -1, z = -1, mu_next = -1;
        double cum = 0.0;
        for (int dd = 0; dd < M && d < 0; ++dd)
            for (int zz = 0; zz < Z && d < 0; ++zz)
                for (int j = 0; j < N; ++j) {
                    const double w = model.joint(dd, zz, mu, j);
                    if (w <= 0.0) continue;
                    cum += w;
                    if (u < cum) {
                        d = dd;
                        z = zz;
                        mu_next = j;
                        break;
                    }
                }
        if (d < 0) { // u landed in the rounding sliver past the row mass
            for (int dd = M - 1; dd >= 0 && d < 0; --dd)
                for (int zz = Z - 1; zz >= 0 && d < 0; --zz)
                    for (int j = N - 1; j >= 0; --j)
                        if (model.joint(dd, zz, mu, j) > 0.0) {
                            d = dd;
                            z = zz;
                            mu_next = j;
                            break;
                        }
        }

        const double step_cost = model.unit_cost(y, model.demand(d)) + (y > s ? K : 0.0);
        out.cost += discount * step_cost;
        if (trace)
            trace->push_back(TraceRow{t, mu, x.x, s, y, model.demand(d), z,
                                      discount * step_cost});

        x = lambda_update(model, d, z, x);
        s = y - model.demand(d);
        mu = mu_next;
        discount *= beta;

        if (check_absorption) {
            const bool below = s <= myopic_base_stock(model, x);
            if (absorbed && !below) ++out.absorption_violations;
            absorbed = absorbed || below;
        }
    }
    return out;
}

} // namespace

SimResult simulate_policy(const ModelSpec& model, const Policy& policy, const Belief& x0, int s0,
                          int horizon, long replications, uint64_t seed, const SimOptions& opts) {
    if (horizon < 1) throw ModelError("simulation horizon must be at least 1");
    if (replications < 1) throw ModelError("replications must be at least 1");
    require_belief(x0, model.states());

    std::vector<double> costs(replications, 0.0);
    std::vector<long> violations(replications, 0);
    SimResult result;

    if (opts.record_trace) {
        std::vector<TraceRow> trace;
        const RepOutcome first = run_replication(model, policy, x0, s0, horizon, seed, 0,
                                                 opts.check_absorption, &trace);
        costs[0] = first.cost;
        violations[0] = first.absorption_violations;
        result.trace = std::move(trace);
    }

    const long start = opts.record_trace ? 1 : 0;
    const int workers = std::min<long>(worker_count(opts.threads), replications);
    std::vector<std::thread> pool;
    std::atomic<long> next_rep{start};
    auto body = [&]() {
        for (long r = next_rep.fetch_add(1); r < replications; r = next_rep.fetch_add(1)) {
            const RepOutcome o = run_replication(model, policy, x0, s0, horizon, seed,
                                                 static_cast<uint64_t>(r), opts.check_absorption,
                                                 nullptr);
            costs[r] = o.cost;
            violations[r] = o.absorption_violations;
        }
    };
    if (workers <= 1) {
        body();
    } else {
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) pool.emplace_back(body);
        for (auto& t : pool) t.join();
    }

    const double n = static_cast<double>(replications);
    result.mean = pairwise_sum(costs, 0, costs.size()) / n;
    double ss = 0.0;
    for (double c : costs) ss += (c - result.mean) * (c - result.mean);
    const double variance = replications > 1 ? ss / (n - 1.0) : 0.0;
    result.stderr_ = std::sqrt(variance / n);
    result.ci95_low = result.mean - 1.959963984540054 * result.stderr_;
    result.ci95_high = result.mean + 1.959963984540054 * result.stderr_;
    result.replications = replications;
    for (long v : violations) result.absorption_violations += v;
    return result;
}

std::string trace_to_csv(const std::vector<TraceRow>& trace, int n_states) {
    std::ostringstream os;
    os << "epoch,mu";
    for (int i = 1; i <= n_states; ++i) os << ",x_" << i;
    os << ",s,y,d,z,cost\n";
    os.precision(17);
    for (const auto& row : trace) {
        os << row.epoch << "," << (row.mu + 1);
        for (int i = 0; i < n_states; ++i) os << "," << (i < (int)row.belief.size() ? row.belief[i] : 0.0);
        os << "," << row.s << "," << row.y << "," << row.d << "," << row.z << "," << row.cost
           << "\n";
    }
    return os.str();
}

} // namespace beliefstock
