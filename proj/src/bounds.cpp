#include "beliefstock/bounds.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "beliefstock/assumptions.hpp"
#include "beliefstock/belief.hpp"
#include "beliefstock/lp.hpp"
#include "beliefstock/single_period.hpp"

namespace beliefstock {

GammaSet lower_bound_vL(const ModelSpec& model, int n, const GammaOptions& opts) {
    return solve_finite(model, n, opts).back();
}

double upper_bound_vU(const ModelSpec& model, const Belief& x, int s, int n, int depth_cap) {
    if (n > depth_cap)
        throw ResourceError("v^U horizon " + std::to_string(n) + " exceeds the depth cap " +
                            std::to_string(depth_cap));
    if (n == 0) return 0.0;
    const int y = std::max(myopic_base_stock(model, x), s);
    double v = expected_cost_L(model, x, y);
    if (n == 1) return v;
    const double beta = model.costs().beta;
    for (int d = 0; d < model.demand_count(); ++d)
        for (int z = 0; z < model.aod_count(); ++z) {
            const double sg = sigma(model, d, z, x);
            if (sg < kSigmaFloor) continue;
            const Belief post = lambda_update(model, d, z, x);
            v += beta * sg *
                 upper_bound_vU(model, post, y - model.demand(d), n - 1, depth_cap);
        }
    return v;
}

GapReport delta_gap(const ModelSpec& model, const GapOptions& opts) {
    const auto regions = partition_p1(model);
    GapReport rep;
    rep.beta = model.costs().beta;
    rep.probe_horizon = opts.horizon;
    rep.probe_seed = opts.seed;

    int min_s = regions.front().base_stock, max_s = regions.front().base_stock;
    for (const auto& r : regions) {
        min_s = std::min(min_s, r.base_stock);
        max_s = std::max(max_s, r.base_stock);
    }
    const int hi = max_s - model.demand(0);

    for (const auto& r : regions) {
        if (r.base_stock < min_s || r.base_stock > hi) continue;
        std::vector<HalfSpace> closure = r.constraints;
        for (auto& hs : closure) hs.strict = false;
        const auto gm = gamma_bar(model, r.base_stock);
        for (int l = 0; l < model.demand_count(); ++l) {
            if (model.demand(l) <= r.base_stock || model.demand(l) > hi) continue;
            const auto gl = gamma_bar(model, model.demand(l));
            std::vector<double> objective(gm.size());
            for (size_t i = 0; i < gm.size(); ++i) objective[i] = gl[i] - gm[i];
            const LpResult res = maximize_over_simplex(objective, closure);
            if (res.status != LpStatus::optimal)
                throw LpError("delta LP unexpectedly infeasible on a nonempty region closure");
            GapPair pair;
            pair.m_index = r.m_index;
            pair.l_index = l;
            pair.value = res.value;
            pair.argmax = Belief(res.point);
            rep.pairs.push_back(std::move(pair));
            rep.delta = std::max(rep.delta, res.value);
        }
    }

    double geo = 0.0, pw = 1.0;
    for (int k = 0; k < opts.horizon; ++k) {
        geo += pw;
        pw *= rep.beta;
    }
    rep.horizon_bound = rep.delta * geo;
    rep.infinite_bound = rep.beta < 1.0 ? rep.delta / (1.0 - rep.beta) : 0.0;

    // probe diagnostics: unit vertices plus seeded random beliefs
    const int N = model.states();
    std::vector<Belief> probes;
    for (int i = 0; i < N; ++i) probes.push_back(Belief::unit(N, i));
    uint64_t state = opts.seed;
    auto next_u01 = [&state]() {
        state += 0x9E3779B97F4A7C15ULL;
        uint64_t zz = state;
        zz = (zz ^ (zz >> 30)) * 0xBF58476D1CE4E5B9ULL;
        zz = (zz ^ (zz >> 27)) * 0x94D049BB133111EBULL;
        zz ^= zz >> 31;
        return (zz >> 11) * 0x1.0p-53;
    };
    for (int k = 0; k < opts.probe_count; ++k) {
        std::vector<double> x(N);
        double sum = 0.0;
        for (int i = 0; i < N; ++i) {
            x[i] = -std::log(1.0 - next_u01());
            sum += x[i];
        }
        for (double& v : x) v /= sum;
        probes.push_back(Belief(std::move(x)));
    }
    rep.probe_count = static_cast<int>(probes.size());

    const auto ladder = solve_finite(model, opts.horizon);
    const int s_probe_max = std::max(model.demand(model.demand_count() - 1), hi);
    for (const auto& b : probes) {
        const double vl = ladder.back().value(b);
        for (int s = min_s; s <= s_probe_max; ++s) {
            const double gap =
                upper_bound_vU(model, b, s, opts.horizon, opts.vu_depth_cap) - vl;
            if (gap > rep.max_gap) {
                rep.max_gap = gap;
                rep.argmax_belief = b;
                rep.argmax_s = s;
                rep.vl_at_argmax = vl;
            }
            if (s <= hi && gap > rep.max_gap_bound_domain) {
                rep.max_gap_bound_domain = gap;
                rep.argmax_bound_belief = b;
                rep.argmax_bound_s = s;
            }
        }
    }
    if (rep.vl_at_argmax > 0.0) rep.rel_gap_bound = rep.horizon_bound / rep.vl_at_argmax;
    return rep;
}

std::string gap_report_to_json(const GapReport& rep, const ModelSpec& model) {
    nlohmann::json j;
    j["Delta"] = rep.delta;
    j["beta"] = rep.beta;
    j["horizon"] = rep.probe_horizon;
    j["horizon_bound"] = rep.horizon_bound;
    j["infinite_bound"] = rep.infinite_bound;
    nlohmann::json pairs = nlohmann::json::array();
    for (const auto& p : rep.pairs)
        pairs.push_back({{"d_m", model.demand(p.m_index)},
                         {"d_l", model.demand(p.l_index)},
                         {"value", p.value},
                         {"argmax", p.argmax.x}});
    j["pairs"] = std::move(pairs);
    j["max_gap"] = {{"value", rep.max_gap},
                    {"belief", rep.argmax_belief.x},
                    {"s", rep.argmax_s},
                    {"vL", rep.vl_at_argmax}};
    j["max_gap_bound_domain"] = {{"value", rep.max_gap_bound_domain},
                                 {"belief", rep.argmax_bound_belief.x},
                                 {"s", rep.argmax_bound_s}};
    j["rel_gap_bound"] = rep.rel_gap_bound;
    j["probes"] = {{"seed", rep.probe_seed}, {"count", rep.probe_count}};
    return j.dump(2);
}

ModelSpec shift_model(const ModelSpec& model, int delta) {
    const double need = min_delta(model);
    if (delta < need - 1e-9)
        throw ModelError("shift delta " + std::to_string(delta) +
                         " is below the required minimum " + std::to_string(need));
    std::vector<int> demands = model.demands();
    for (int& d : demands) d += delta;
    return ModelSpec(std::move(demands), model.aod_count(), model.joint_flat(), model.costs());
}

double tighter_lower_vprime(const ModelSpec& model, int delta, int n, const Belief& x, int s,
                            const GammaOptions& opts) {
    const ModelSpec primed = shift_model(model, delta);
    const auto ladder = solve_finite(primed, n, opts);
    return value_full(primed, ladder, x, s, n);
}

double tighter_lower_vprime(const ModelSpec& primed, const std::vector<GammaSet>& primed_ladder,
                            const Belief& x, int s, int n) {
    return value_full(primed, primed_ladder, x, s, n);
}

ObservationArray observation_array(const ModelSpec& model) {
    const int N = model.states(), M = model.demand_count(), Z = model.aod_count();
    ObservationArray q;
    q.states = N;
    q.outcomes = M * Z;
    q.q.assign(static_cast<size_t>(N) * N * M * Z, 0.0);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            double mass = 0.0;
            for (int d = 0; d < M; ++d)
                for (int z = 0; z < Z; ++z) mass += model.joint(d, z, i, j);
            for (int d = 0; d < M; ++d)
                for (int z = 0; z < Z; ++z) {
                    const size_t idx = (static_cast<size_t>(i) * N + j) * q.outcomes + d * Z + z;
                    q.q[idx] = mass > 0.0 ? model.joint(d, z, i, j) / mass
                                          : 1.0 / q.outcomes;
                }
        }
    return q;
}

bool informativeness(const ObservationArray& q, const ObservationArray& qprime) {
    if (q.states != qprime.states) throw ModelError("observation arrays have mismatched N");
    const int N = q.states, O = q.outcomes, Op = qprime.outcomes;

    GeneralLp lp;
    lp.nvars = Op * O; // r[o'][o], row-major
    lp.objective.assign(lp.nvars, 0.0);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            for (int o = 0; o < O; ++o) {
                std::vector<double> row(lp.nvars, 0.0);
                for (int op = 0; op < Op; ++op) row[op * O + o] = qprime.at(i, j, op);
                lp.eq_a.push_back(std::move(row));
                lp.eq_b.push_back(q.at(i, j, o));
            }
    for (int op = 0; op < Op; ++op) {
        std::vector<double> row(lp.nvars, 0.0);
        for (int o = 0; o < O; ++o) row[op * O + o] = 1.0;
        lp.eq_a.push_back(std::move(row));
        lp.eq_b.push_back(1.0);
    }
    return solve_general(lp).status == LpStatus::optimal;
}

} // namespace beliefstock
