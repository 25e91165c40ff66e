#include "beliefstock/assumptions.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <json.hpp>

#include "beliefstock/lp.hpp"
#include "beliefstock/single_period.hpp"

namespace beliefstock {

namespace {

// Posterior-membership inequalities with the sigma denominator cleared:
//   x P(d,z) C_{m'-1} < ratio * x P(d,z) 1 <= x P(d,z) C_{m'}
std::vector<HalfSpace> posterior_region_constraints(const ModelSpec& model, int d, int z,
                                                    int mprime) {
    const int N = model.states();
    const double ratio = model.costs().p / (model.costs().p + model.costs().h);

    // w_k[i] = (P(d,z) C_k)_i and mass[i] = (P(d,z) 1)_i
    auto apply = [&](const double* vec) {
        std::vector<double> out(N, 0.0);
        for (int i = 0; i < N; ++i) {
            const double* row = model.joint_row(d, z, i);
            double s = 0.0;
            for (int j = 0; j < N; ++j) s += row[j] * vec[j];
            out[i] = s;
        }
        return out;
    };
    std::vector<double> ones(N, 1.0);
    const std::vector<double> mass = apply(ones.data());
    const std::vector<double> w_lo = apply(model.cum_vector(mprime));
    const std::vector<double> w_hi = apply(model.cum_vector(mprime + 1));

    std::vector<HalfSpace> cs;
    HalfSpace lower; // x.(w_lo - ratio*mass) < 0
    lower.a.resize(N);
    for (int i = 0; i < N; ++i) lower.a[i] = w_lo[i] - ratio * mass[i];
    lower.b = 0.0;
    lower.strict = true;
    cs.push_back(std::move(lower));
    HalfSpace upper; // x.(ratio*mass - w_hi) <= 0
    upper.a.resize(N);
    for (int i = 0; i < N; ++i) upper.a[i] = ratio * mass[i] - w_hi[i];
    upper.b = 0.0;
    upper.strict = false;
    cs.push_back(std::move(upper));
    return cs;
}

struct SweepEntry {
    A1Witness witness;
    bool interior = false;
};

// All violating triples of the (region, outcome, posterior-region) sweep.
std::vector<SweepEntry> a1_sweep(const ModelSpec& model) {
    const auto regions = partition_p1(model);
    std::vector<SweepEntry> out;
    for (const auto& reg : regions) {
        for (int d = 0; d < model.demand_count(); ++d)
            for (int z = 0; z < model.aod_count(); ++z)
                for (const auto& target : regions) {
                    const double violation =
                        reg.base_stock - model.demand(d) - target.base_stock;
                    if (violation <= 0) continue; // triple cannot break A1
                    std::vector<HalfSpace> cs = reg.constraints;
                    const auto post = posterior_region_constraints(model, d, z, target.m_index);
                    cs.insert(cs.end(), post.begin(), post.end());
                    const InteriorResult res = find_interior(model.states(), cs);
                    if (!res.weak_feasible) continue;
                    SweepEntry e;
                    e.witness.m_index = reg.m_index;
                    e.witness.d_index = d;
                    e.witness.z = z;
                    e.witness.mprime_index = target.m_index;
                    e.witness.violation = violation;
                    e.witness.point = Belief(res.point);
                    e.interior = res.interior();
                    out.push_back(std::move(e));
                }
    }
    return out;
}

} // namespace

A1Report check_a1_exact(const ModelSpec& model) {
    A1Report rep;
    rep.method = A1Method::exact_lp;
    for (auto& e : a1_sweep(model)) {
        if (e.interior)
            rep.witnesses.push_back(std::move(e.witness));
        else
            rep.boundary_only.push_back(std::move(e.witness));
    }
    rep.holds = rep.witnesses.empty();
    return rep;
}

std::string a1_report_to_json(const A1Report& rep, const ModelSpec& model) {
    nlohmann::json j;
    j["holds"] = rep.holds;
    j["method"] = rep.method == A1Method::exact_lp ? "exact_lp" : "sufficient_a3a4";
    auto dump = [&](const std::vector<A1Witness>& ws) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& w : ws)
            arr.push_back({{"m", w.m_index + 1},
                           {"d", model.demand(w.d_index)},
                           {"z", w.z},
                           {"mprime", w.mprime_index + 1},
                           {"violation", w.violation},
                           {"belief", w.point.x}});
        return arr;
    };
    j["witnesses"] = dump(rep.witnesses);
    j["boundary_only"] = dump(rep.boundary_only);
    return j.dump(2);
}

bool check_a2(const ModelSpec& model, const Belief& x, int depth) {
    if (depth < 1) throw ModelError("A2 check depth must be at least 1");
    require_belief(x, model.states());
    const int label = myopic_base_stock(model, x);
    // walk level by level so early mismatches exit without full enumeration
    std::vector<Belief> frontier{x};
    for (int k = 1; k <= depth; ++k) {
        std::vector<Belief> next;
        for (const Belief& b : frontier)
            for (Belief& post : reachable_beliefs(model, b, 1)) {
                if (myopic_base_stock(model, post) != label) return false;
                next.push_back(std::move(post));
            }
        frontier = std::move(next);
    }
    return true;
}

bool check_a3(const ModelSpec& model) {
    const int N = model.states(), M = model.demand_count();
    for (int i = 0; i + 1 < N; ++i)
        for (int ip = i + 1; ip < N; ++ip)
            for (int m = 0; m < M; ++m) {
                double ti = 0.0, tip = 0.0;
                for (int k = m; k < M; ++k) {
                    ti += model.marginal_row_mass(k, i);
                    tip += model.marginal_row_mass(k, ip);
                }
                if (ti > tip + 1e-12) return false;
            }
    return true;
}

Belief construct_xhat(const ModelSpec& model, int d, int z) {
    const int N = model.states();
    std::vector<Belief> posts;
    for (int i = 0; i < N; ++i) {
        const Belief ei = Belief::unit(N, i);
        if (sigma(model, d, z, ei) < kSigmaFloor) continue;
        posts.push_back(lambda_update(model, d, z, ei));
    }
    if (posts.empty())
        throw ImpossibleObservationError("observation (d=" + std::to_string(model.demand(d)) +
                                         ", z=" + std::to_string(z) +
                                         ") is impossible from every unit belief");
    std::vector<double> xhat(N, 0.0);
    double tail_prev = 0.0; // sum_{k>n} xhat_k
    for (int n = N - 1; n >= 1; --n) {
        double min_tail = std::numeric_limits<double>::infinity();
        for (const Belief& b : posts) {
            double t = 0.0;
            for (int k = n; k < N; ++k) t += b[k];
            min_tail = std::min(min_tail, t);
        }
        xhat[n] = min_tail - tail_prev;
        tail_prev = min_tail;
    }
    xhat[0] = 1.0 - tail_prev;
    return Belief(std::move(xhat));
}

bool check_a4(const ModelSpec& model) {
    const int N = model.states();
    const int s_top = myopic_base_stock(model, Belief::unit(N, N - 1));
    for (int d = 0; d < model.demand_count(); ++d)
        for (int z = 0; z < model.aod_count(); ++z) {
            bool observable = false;
            for (int i = 0; i < N && !observable; ++i)
                observable = sigma(model, d, z, Belief::unit(N, i)) >= kSigmaFloor;
            if (!observable) continue;
            const Belief xhat = construct_xhat(model, d, z);
            if (s_top - model.demand(d) > myopic_base_stock(model, xhat)) return false;
        }
    return true;
}

std::vector<A1Witness> a1_prescreen(const ModelSpec& model, int samples, uint64_t seed) {
    const int N = model.states();
    std::vector<A1Witness> hits;
    uint64_t state = seed;
    auto next_u01 = [&state]() {
        state += 0x9E3779B97F4A7C15ULL;
        uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        z ^= z >> 31;
        return (z >> 11) * 0x1.0p-53;
    };
    for (int t = 0; t < samples; ++t) {
        std::vector<double> raw(N);
        double sum = 0.0;
        for (double& v : raw) {
            v = -std::log(1.0 - next_u01());
            sum += v;
        }
        for (double& v : raw) v /= sum;
        const Belief x(raw);
        const int sx = myopic_base_stock(model, x);
        for (int d = 0; d < model.demand_count(); ++d)
            for (int z = 0; z < model.aod_count(); ++z) {
                if (sigma(model, d, z, x) < kSigmaFloor) continue;
                const Belief post = lambda_update(model, d, z, x);
                const int sp = myopic_base_stock(model, post);
                if (sx - model.demand(d) > sp) {
                    A1Witness w;
                    w.m_index = myopic_region_index(model, x);
                    w.d_index = d;
                    w.z = z;
                    w.mprime_index = myopic_region_index(model, post);
                    w.violation = sx - model.demand(d) - sp;
                    w.point = x;
                    hits.push_back(std::move(w));
                }
            }
    }
    return hits;
}

double min_delta(const ModelSpec& model) {
    double delta = 0.0;
    for (const auto& e : a1_sweep(model))
        if (e.interior) delta = std::max(delta, e.witness.violation);
    return delta;
}

bool stochastically_dominated(const Belief& a, const Belief& b, double tol) {
    if (a.size() != b.size()) throw ModelError("dominance comparison across dimensions");
    double ta = 0.0, tb = 0.0;
    for (int n = a.size() - 1; n >= 0; --n) {
        ta += a[n];
        tb += b[n];
        if (ta > tb + tol) return false;
    }
    return true;
}

} // namespace beliefstock
