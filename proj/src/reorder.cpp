#include "beliefstock/reorder.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "beliefstock/belief.hpp"
#include "beliefstock/lp.hpp"

namespace beliefstock {

namespace {

constexpr double kLevelSlack = 1e-12;

double eval_facets(const FacetCoefficients& f, double y) {
    double best = f.A[0] * y + f.B[0];
    for (size_t m = 1; m < f.A.size(); ++m) best = std::max(best, f.A[m] * y + f.B[m]);
    return best;
}

// candidate inventory levels for the reorder-point scans: integers on the
// shortage facet below d_1, then the demand grid
std::vector<int> lower_candidates(const ModelSpec& model) {
    const int d1 = model.demand(0);
    const int depth = static_cast<int>(std::ceil(model.costs().K / model.costs().p)) + 1;
    std::vector<int> out;
    for (int v = d1 - depth; v < d1; ++v) out.push_back(v);
    for (int m = 0; m < model.demand_count(); ++m) out.push_back(model.demand(m));
    return out;
}

// candidates for the order-up-to upper bound: the grid, then integers on the
// holding facet above d_M
std::vector<int> upper_candidates(const ModelSpec& model) {
    const double bK = model.costs().beta * model.costs().K;
    std::vector<int> out;
    for (int m = 0; m < model.demand_count(); ++m) out.push_back(model.demand(m));
    const int dM = model.demand(model.demand_count() - 1);
    const int depth = bK > kLevelSlack
                          ? static_cast<int>(std::ceil(bK / model.costs().h)) + 1
                          : 0;
    for (int v = dM + 1; v <= dM + depth; ++v) out.push_back(v);
    return out;
}

} // namespace

SSBounds ss_bounds(const ModelSpec& model, const Belief& x) {
    require_belief(x, model.states());
    const FacetCoefficients f = facet_coefficients(model, x);
    const int m = myopic_region_index(model, x);
    const int Sl = model.demand(m);
    const double LS = eval_facets(f, Sl);
    const double K = model.costs().K, beta = model.costs().beta;

    auto lower_scan = [&](double level) {
        for (int v : lower_candidates(model)) {
            if (v > Sl) break;
            if (eval_facets(f, v) <= level + kLevelSlack) return v;
        }
        return Sl;
    };
    SSBounds b;
    b.S_lower = Sl;
    b.s_lower = lower_scan(K + LS);
    b.s_upper = lower_scan((1.0 - beta) * K + LS);
    b.S_upper = Sl;
    for (int v : upper_candidates(model)) {
        if (v < Sl) continue;
        if (eval_facets(f, v) >= beta * K + LS - kLevelSlack) {
            b.S_upper = v;
            break;
        }
    }
    return b;
}

namespace {

// weak/strict inequality pair pinning "smallest candidate satisfying the
// level" to the value at position pos of the candidate list
void append_lower_pair(std::vector<HalfSpace>& cs, const ModelSpec& model,
                       const std::vector<int>& cands, size_t pos, int d_m, double level) {
    const auto g_m = gamma_bar(model, d_m);
    const auto g_v = gamma_bar(model, cands[pos]);
    const int N = model.states();
    HalfSpace weak; // L(x, v) - L(x, d_m) <= level
    weak.a.resize(N);
    for (int i = 0; i < N; ++i) weak.a[i] = g_v[i] - g_m[i];
    weak.b = level;
    cs.push_back(std::move(weak));
    if (pos > 0) {
        const auto g_p = gamma_bar(model, cands[pos - 1]);
        HalfSpace strict; // L(x, prev) - L(x, d_m) > level
        strict.a.resize(N);
        for (int i = 0; i < N; ++i) strict.a[i] = g_m[i] - g_p[i];
        strict.b = -level;
        strict.strict = true;
        cs.push_back(std::move(strict));
    }
}

void append_upper_pair(std::vector<HalfSpace>& cs, const ModelSpec& model,
                       const std::vector<int>& cands, size_t first_pos, size_t pos, int d_m,
                       double level) {
    const auto g_m = gamma_bar(model, d_m);
    const auto g_v = gamma_bar(model, cands[pos]);
    const int N = model.states();
    HalfSpace weak; // L(x, v) - L(x, d_m) >= level
    weak.a.resize(N);
    for (int i = 0; i < N; ++i) weak.a[i] = g_m[i] - g_v[i];
    weak.b = -level;
    cs.push_back(std::move(weak));
    if (pos > first_pos) {
        const auto g_p = gamma_bar(model, cands[pos - 1]);
        HalfSpace strict; // L(x, prev) - L(x, d_m) < level
        strict.a.resize(N);
        for (int i = 0; i < N; ++i) strict.a[i] = g_p[i] - g_m[i];
        strict.b = level;
        strict.strict = true;
        cs.push_back(std::move(strict));
    }
}

} // namespace

std::vector<SSRegion> ss_partition(const ModelSpec& model) {
    if (!(model.costs().K > 0.0))
        throw ModelError("the (s,S) partition is defined for K > 0");
    const double K = model.costs().K, beta = model.costs().beta;
    const auto lowers = lower_candidates(model);
    const auto uppers = upper_candidates(model);
    const int N = model.states();

    std::vector<SSRegion> out;
    for (const Region& reg : partition_p1(model)) {
        const int d_m = reg.base_stock;
        // candidate positions: lowers up to d_m, uppers from d_m
        size_t lo_end = 0;
        while (lo_end < lowers.size() && lowers[lo_end] <= d_m) ++lo_end;
        size_t up_first = 0;
        while (up_first < uppers.size() && uppers[up_first] < d_m) ++up_first;

        for (size_t ia = 0; ia < lo_end; ++ia) {
            std::vector<HalfSpace> cs_a = reg.constraints;
            append_lower_pair(cs_a, model, lowers, ia, d_m, K);
            if (!find_interior(N, cs_a).interior()) continue;
            for (size_t ib = ia; ib < lo_end; ++ib) {
                std::vector<HalfSpace> cs_b = cs_a;
                append_lower_pair(cs_b, model, lowers, ib, d_m, (1.0 - beta) * K);
                if (!find_interior(N, cs_b).interior()) continue;
                for (size_t ic = up_first; ic < uppers.size(); ++ic) {
                    std::vector<HalfSpace> cs_c = cs_b;
                    append_upper_pair(cs_c, model, uppers, up_first, ic, d_m, beta * K);
                    const InteriorResult feas = find_interior(N, cs_c);
                    if (!feas.interior()) continue;
                    SSRegion r;
                    r.constraints = std::move(cs_c);
                    r.label = SSBounds{lowers[ia], lowers[ib], d_m, uppers[ic]};
                    r.witness = Belief(feas.point);
                    out.push_back(std::move(r));
                }
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// finite-horizon (s,S) solution
// ---------------------------------------------------------------------------

namespace {

std::vector<std::vector<double>> add_constant(std::vector<std::vector<double>> vs, double c) {
    for (auto& v : vs)
        for (double& e : v) e += c;
    return vs;
}

std::vector<std::vector<double>> merge_pruned(const std::vector<std::vector<double>>& a,
                                              const std::vector<std::vector<double>>& b,
                                              double tol) {
    std::vector<std::vector<double>> u = a;
    u.insert(u.end(), b.begin(), b.end());
    return prune_vectors(std::move(u), tol);
}

std::vector<std::vector<double>> cross_sum_sets(const std::vector<std::vector<double>>& a,
                                                const std::vector<std::vector<double>>& b,
                                                const GammaOptions& opts) {
    if (a.size() * b.size() > opts.cross_cap)
        throw ResourceError("reorder gamma cross product exceeds the configured cap");
    std::vector<std::vector<double>> out;
    out.reserve(a.size() * b.size());
    for (const auto& va : a)
        for (const auto& vb : b) {
            std::vector<double> s(va.size());
            for (size_t k = 0; k < va.size(); ++k) s[k] = va[k] + vb[k];
            out.push_back(std::move(s));
        }
    return prune_vectors(std::move(out), opts.prune_tol);
}

} // namespace

SSPolicy::SSPolicy(ModelSpec model, int horizon, SSOptions opts)
    : model_(std::move(model)), horizon_(horizon) {
    if (horizon_ < 1) throw ModelError("horizon must be at least 1");
    if (horizon_ > opts.depth_cap)
        throw ResourceError("horizon " + std::to_string(horizon_) + " exceeds the depth cap " +
                            std::to_string(opts.depth_cap));
    if (!(model_.costs().K > 0.0))
        throw ModelError("solve_ss_finite requires K > 0; use the gamma ladder otherwise");

    const int N = model_.states(), M = model_.demand_count(), Z = model_.aod_count();
    const double K = model_.costs().K, beta = model_.costs().beta;
    const int d1 = model_.demand(0), dM = model_.demand(M - 1);

    s_floor_ = d1 - static_cast<int>(std::ceil(K / model_.costs().p)) - 1;
    const auto p1 = partition_p1(model_);
    int S_min = p1.front().base_stock;
    for (const auto& r : p1) S_min = std::min(S_min, r.base_stock);
    order_lo_ = S_min;
    order_hi_ = dM + (beta * K > kLevelSlack
                          ? static_cast<int>(std::ceil(beta * K / model_.costs().h)) + 1
                          : 0);

    eval_lo_ = opts.eval_lo == INT_MIN ? s_floor_ : std::max(opts.eval_lo, s_floor_);
    eval_hi_ = opts.eval_hi == INT_MIN ? order_hi_ : std::max(opts.eval_hi, order_hi_);

    // plan per-level storage ranges top-down; every level starts at the
    // all-order floor so clamped lookups always resolve
    lo_.assign(horizon_, s_floor_);
    hi_.assign(horizon_, 0);
    hi_[horizon_ - 1] = std::max(eval_hi_, order_hi_);
    for (int k = horizon_ - 1; k >= 1; --k)
        hi_[k - 1] = std::max(std::max(hi_[k], order_hi_) - d1, s_floor_);

    families_.resize(horizon_);
    const std::vector<double> zero(N, 0.0);

    for (int level = 0; level < horizon_; ++level) {
        const int y_lo = std::min(lo_[level], order_lo_);
        const int y_hi = std::max(hi_[level], order_hi_);

        // transformed continuation sets per (d, z, s'), shared across y
        std::vector<std::vector<std::vector<std::vector<double>>>> tcache(
            static_cast<size_t>(M) * Z);
        std::vector<int> tbase(static_cast<size_t>(M) * Z, 0);
        if (level > 0 && beta > 0.0) {
            for (int d = 0; d < M; ++d)
                for (int z = 0; z < Z; ++z) {
                    const int idx = d * Z + z;
                    const int b_lo = std::max(s_floor_, y_lo - model_.demand(d));
                    const int b_hi = std::max(b_lo, y_hi - model_.demand(d));
                    tbase[idx] = b_lo;
                    tcache[idx].resize(b_hi - b_lo + 1);
                    for (int s = b_lo; s <= b_hi; ++s) {
                        const auto& src = families_[level - 1][s - lo_[level - 1]].vectors;
                        std::vector<std::vector<double>> t;
                        t.reserve(src.size());
                        for (const auto& g : src) {
                            std::vector<double> u(N, 0.0);
                            for (int i = 0; i < N; ++i) {
                                const double* row = model_.joint_row(d, z, i);
                                double acc = 0.0;
                                for (int j = 0; j < N; ++j) acc += row[j] * g[j];
                                u[i] = beta * acc;
                            }
                            t.push_back(std::move(u));
                        }
                        tcache[idx][s - b_lo] = prune_vectors(std::move(t), opts.gamma.prune_tol);
                    }
                }
        }

        // Gamma'_level(y) for y in [y_lo, y_hi]
        std::vector<std::vector<std::vector<double>>> gprime(y_hi - y_lo + 1);
        for (int y = y_lo; y <= y_hi; ++y) {
            std::vector<std::vector<double>> acc{gamma_bar(model_, y)};
            if (level > 0 && beta > 0.0)
                for (int d = 0; d < M; ++d)
                    for (int z = 0; z < Z; ++z) {
                        const int idx = d * Z + z;
                        const int sc = std::max(y - model_.demand(d), s_floor_);
                        acc = cross_sum_sets(acc, tcache[idx][sc - tbase[idx]], opts.gamma);
                    }
            gprime[y - y_lo] = std::move(acc);
        }

        // suffix unions of the order branch over S' in [order_lo_, order_hi_]
        std::vector<std::vector<std::vector<double>>> suffix(order_hi_ - order_lo_ + 2);
        for (int t = order_hi_; t >= order_lo_; --t)
            suffix[t - order_lo_] =
                merge_pruned(gprime[t - y_lo], suffix[t - order_lo_ + 1], opts.gamma.prune_tol);

        families_[level].resize(hi_[level] - lo_[level] + 1);
        for (int s = lo_[level]; s <= hi_[level]; ++s) {
            const int from = std::max(s + 1, order_lo_);
            std::vector<std::vector<double>> vecs = gprime[s - y_lo];
            if (from <= order_hi_)
                vecs = merge_pruned(vecs, add_constant(suffix[from - order_lo_], K),
                                    opts.gamma.prune_tol);
            GammaSet gs;
            gs.horizon = level + 1;
            gs.vectors = std::move(vecs);
            families_[level][s - lo_[level]] = std::move(gs);
        }
    }

    for (const SSRegion& reg : ss_partition(model_)) {
        SSRegionPolicy rp;
        rp.region = reg;
        const auto levels = policy_levels(reg.witness);
        rp.s_n = levels.first;
        rp.S_n = levels.second;
        regions_.push_back(std::move(rp));
    }
}

int SSPolicy::clamp_s(int s) const { return std::max(s, s_floor_); }

const GammaSet& SSPolicy::gamma_at(int level, int s) const {
    if (level < 1 || level > horizon_) throw ModelError("gamma_at level out of range");
    const int sc = clamp_s(s);
    if (sc < lo_[level - 1] || sc > hi_[level - 1])
        throw ModelError("inventory " + std::to_string(s) +
                         " is outside the evaluation range; widen SSOptions.eval bounds");
    return families_[level - 1][sc - lo_[level - 1]];
}

double SSPolicy::value(const Belief& x, int s) const { return gamma_at(horizon_, s).value(x); }

double SSPolicy::g_value(const Belief& x, int y) const {
    const int N = model_.states();
    double v = dot(gamma_bar(model_, y), x.x);
    const double beta = model_.costs().beta;
    if (horizon_ == 1 || beta == 0.0) return v;
    for (int d = 0; d < model_.demand_count(); ++d)
        for (int z = 0; z < model_.aod_count(); ++z) {
            const auto post = unnormalized_posterior(model_, d, z, x);
            const GammaSet& cont = gamma_at(horizon_ - 1, y - model_.demand(d));
            double best = std::numeric_limits<double>::infinity();
            for (const auto& g : cont.vectors) {
                double acc = 0.0;
                for (int j = 0; j < N; ++j) acc += post[j] * g[j];
                best = std::min(best, acc);
            }
            v += beta * best;
        }
    return v;
}

std::pair<int, int> SSPolicy::policy_levels(const Belief& x) const {
    const SSBounds b = ss_bounds(model_, x);
    int S_n = b.S_lower;
    double best = g_value(x, b.S_lower);
    for (int y = b.S_lower + 1; y <= b.S_upper; ++y) {
        const double v = g_value(x, y);
        if (v < best - 1e-9) {
            best = v;
            S_n = y;
        }
    }
    const double level = model_.costs().K + best;
    int s_n = S_n;
    for (int v = s_floor_ + 1; v <= S_n; ++v)
        if (g_value(x, v) <= level + 1e-9) {
            s_n = v;
            break;
        }
    return {s_n, S_n};
}

PolicyDecision SSPolicy::decide(const Belief& x, int s) const {
    const auto levels = policy_levels(x);
    PolicyDecision d;
    d.order_up_to = s;
    const double stay = g_value(x, s);
    if (levels.second <= s) {
        d.value = stay;
        return d;
    }
    const double order = model_.costs().K + g_value(x, levels.second);
    d.tie = std::abs(order - stay) <= 1e-9;
    if (order < stay - 1e-9) {
        d.ordered = true;
        d.order_up_to = levels.second;
        d.value = order;
    } else {
        d.value = stay;
    }
    return d;
}

SSPolicy solve_ss_finite(const ModelSpec& model, int n, const SSOptions& opts) {
    return SSPolicy(model, n, opts);
}

namespace {

nlohmann::json halfspaces_to_json(const std::vector<HalfSpace>& cs) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& hs : cs)
        arr.push_back({{"a", hs.a}, {"relation", hs.strict ? "<" : "<="}, {"b", hs.b}});
    return arr;
}

nlohmann::json label_to_json(const SSBounds& b) {
    return {{"sl", b.s_lower}, {"su", b.s_upper}, {"Sl", b.S_lower}, {"Su", b.S_upper}};
}

} // namespace

std::string ss_policy_to_json(const SSPolicy& policy) {
    nlohmann::json j;
    j["horizon"] = policy.horizon();
    nlohmann::json regions = nlohmann::json::array();
    for (const auto& rp : policy.regions())
        regions.push_back({{"inequalities", halfspaces_to_json(rp.region.constraints)},
                           {"label", label_to_json(rp.region.label)},
                           {"policy", {{"s_n", rp.s_n}, {"S_n", rp.S_n}}},
                           {"witness", rp.region.witness.x}});
    j["regions"] = std::move(regions);
    return j.dump(2);
}

std::string ss_regions_to_json(const std::vector<SSRegion>& regions) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : regions)
        arr.push_back({{"inequalities", halfspaces_to_json(r.constraints)},
                       {"label", label_to_json(r.label)},
                       {"witness", r.witness.x}});
    return arr.dump(2);
}

bool k_convexity_check(const std::vector<double>& values, double K, double tol) {
    const int n = static_cast<int>(values.size());
    for (int s = 0; s < n; ++s)
        for (int sp = s + 1; sp < n; ++sp)
            for (int m = s; m <= sp; ++m) {
                const double lam = static_cast<double>(sp - m) / (sp - s);
                if (values[m] > lam * values[s] + (1.0 - lam) * (values[sp] + K) + tol)
                    return false;
            }
    return true;
}

} // namespace beliefstock
