#include "beliefstock/gamma.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "beliefstock/lp.hpp"
#include "beliefstock/single_period.hpp"

namespace beliefstock {

double GammaSet::value(const Belief& x) const {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& g : vectors) best = std::min(best, dot(g, x.x));
    return best;
}

int GammaSet::argmin(const Belief& x) const {
    int best = -1;
    double bv = std::numeric_limits<double>::infinity();
    for (size_t k = 0; k < vectors.size(); ++k) {
        const double v = dot(vectors[k], x.x);
        if (v < bv - 1e-15) {
            bv = v;
            best = static_cast<int>(k);
        }
    }
    return best;
}

std::vector<std::vector<double>> prune_vectors(std::vector<std::vector<double>> vectors,
                                               double tol) {
    if (vectors.size() <= 1) return vectors;
    const size_t K = vectors.size();
    const size_t N = vectors[0].size();

    // pointwise pass; near-duplicates resolve to the lower index
    std::vector<char> alive(K, 1);
    for (size_t i = 0; i < K; ++i) {
        if (!alive[i]) continue;
        for (size_t j = 0; j < K; ++j) {
            if (i == j || !alive[j]) continue;
            bool dominates = true, duplicate = true;
            for (size_t k = 0; k < N; ++k) {
                const double d = vectors[j][k] - vectors[i][k];
                if (d > tol) { dominates = false; break; }
                if (std::abs(d) > tol) duplicate = false;
            }
            if (!dominates) continue;
            if (duplicate && j > i) continue; // tie: lowest index survives
            alive[i] = 0;
            break;
        }
    }
    std::vector<std::vector<double>> pool;
    for (size_t i = 0; i < K; ++i)
        if (alive[i]) pool.push_back(std::move(vectors[i]));
    if (pool.size() <= 1) return pool;

    // LP witness filtering (Lark): seed with the minimizers at the vertices,
    // then admit a candidate only if some belief strictly prefers it.
    std::vector<std::vector<double>> kept;
    std::vector<char> in_pool(pool.size(), 1);
    std::vector<double> vertex(N, 0.0);
    for (size_t i = 0; i < N; ++i) {
        std::fill(vertex.begin(), vertex.end(), 0.0);
        vertex[i] = 1.0;
        int best = -1;
        double bv = std::numeric_limits<double>::infinity();
        for (size_t k = 0; k < pool.size(); ++k) {
            const double v = pool[k][i];
            if (best < 0 || v < bv - 1e-15) { bv = v; best = static_cast<int>(k); }
        }
        if (best >= 0 && in_pool[best]) {
            kept.push_back(pool[best]);
            in_pool[best] = 0;
        }
    }
    for (size_t cand = 0; cand < pool.size(); ++cand) {
        if (!in_pool[cand]) continue;
        if (kept.size() > 480)
            throw ResourceError("gamma set grew past the prunable size; use a smaller horizon "
                                "or a coarser prune tolerance");
        std::vector<HalfSpace> rows;
        rows.reserve(kept.size());
        for (const auto& k : kept) {
            HalfSpace hs;
            hs.a.resize(N);
            for (size_t j = 0; j < N; ++j) hs.a[j] = pool[cand][j] - k[j];
            hs.b = 0.0;
            hs.strict = true;
            rows.push_back(std::move(hs));
        }
        const InteriorResult res = find_interior(static_cast<int>(N), rows);
        if (!res.weak_feasible || res.max_slack <= tol) {
            in_pool[cand] = 0;
            continue;
        }
        // admit the vector actually minimal at the witness point
        int best = -1;
        double bv = std::numeric_limits<double>::infinity();
        for (size_t k = 0; k < pool.size(); ++k) {
            if (!in_pool[k]) continue;
            const double v = dot(pool[k], res.point);
            if (best < 0 || v < bv - 1e-12) { bv = v; best = static_cast<int>(k); }
        }
        kept.push_back(pool[best]);
        in_pool[best] = 0;
        if (static_cast<size_t>(best) != cand) --cand; // candidate not yet resolved
    }
    return kept;
}

GammaSet prune(GammaSet set, const GammaOptions& opts) {
    set.vectors = prune_vectors(std::move(set.vectors), opts.prune_tol);
    return set;
}

GammaSet gamma_initial(const ModelSpec& model, const GammaOptions& opts) {
    GammaSet g;
    g.horizon = 1;
    for (int m = 0; m < model.demand_count(); ++m)
        g.vectors.push_back(gamma_bar(model, model.demand(m)));
    g.vectors = prune_vectors(std::move(g.vectors), opts.prune_tol);
    return g;
}

namespace {

std::vector<std::vector<double>> cross_sum(const std::vector<std::vector<double>>& a,
                                           const std::vector<std::vector<double>>& b,
                                           const GammaOptions& opts) {
    if (a.size() * b.size() > opts.cross_cap)
        throw ResourceError("gamma cross product exceeds the configured cap (" +
                            std::to_string(opts.cross_cap) + "); use a smaller horizon");
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

GammaSet gamma_step(const ModelSpec& model, const GammaSet& gn, const GammaOptions& opts) {
    const int N = model.states();
    const double beta = model.costs().beta;

    std::vector<std::vector<double>> acc = gamma_initial(model, opts).vectors;
    if (beta == 0.0) return GammaSet{gn.horizon + 1, std::move(acc)};

    for (int d = 0; d < model.demand_count(); ++d)
        for (int z = 0; z < model.aod_count(); ++z) {
            std::vector<std::vector<double>> t;
            t.reserve(gn.vectors.size());
            for (const auto& g : gn.vectors) {
                std::vector<double> u(N, 0.0);
                for (int i = 0; i < N; ++i) {
                    const double* row = model.joint_row(d, z, i);
                    double s = 0.0;
                    for (int j = 0; j < N; ++j) s += row[j] * g[j];
                    u[i] = beta * s;
                }
                t.push_back(std::move(u));
            }
            t = prune_vectors(std::move(t), opts.prune_tol);
            acc = cross_sum(acc, t, opts);
        }
    return GammaSet{gn.horizon + 1, std::move(acc)};
}

std::vector<GammaSet> solve_finite(const ModelSpec& model, int n, const GammaOptions& opts) {
    if (n < 1) throw ModelError("horizon must be at least 1");
    std::vector<GammaSet> ladder;
    ladder.push_back(gamma_initial(model, opts));
    for (int k = 1; k < n; ++k) ladder.push_back(gamma_step(model, ladder.back(), opts));
    return ladder;
}

std::vector<Belief> probe_grid(int n_states, uint64_t seed) {
    std::vector<Belief> grid;
    if (n_states == 1) {
        grid.push_back(Belief::unit(1, 0));
        return grid;
    }
    if (n_states <= 4) {
        const int D = 100;
        std::vector<int> comp(n_states, 0);
        // enumerate compositions of D into n_states nonnegative parts
        std::vector<int> stack;
        std::function<void(int, int)> rec = [&](int idx, int rem) {
            if (idx == n_states - 1) {
                comp[idx] = rem;
                std::vector<double> x(n_states);
                for (int i = 0; i < n_states; ++i) x[i] = comp[i] / static_cast<double>(D);
                grid.push_back(Belief(std::move(x)));
                return;
            }
            for (int v = 0; v <= rem; ++v) {
                comp[idx] = v;
                rec(idx + 1, rem - v);
            }
        };
        rec(0, D);
        return grid;
    }
    // Dirichlet(1) draws via normalized exponentials, splitmix64 stream
    uint64_t state = seed;
    auto next_u01 = [&state]() {
        state += 0x9E3779B97F4A7C15ULL;
        uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        z ^= z >> 31;
        return (z >> 11) * 0x1.0p-53;
    };
    for (int k = 0; k < 10000; ++k) {
        std::vector<double> x(n_states);
        double sum = 0.0;
        for (int i = 0; i < n_states; ++i) {
            x[i] = -std::log(1.0 - next_u01());
            sum += x[i];
        }
        for (double& v : x) v /= sum;
        grid.push_back(Belief(std::move(x)));
    }
    return grid;
}

InfiniteSolution solve_infinite(const ModelSpec& model, double eps, const GammaOptions& opts) {
    if (!(eps > 0.0)) throw ModelError("epsilon must be positive");
    const double beta = model.costs().beta;
    InfiniteSolution out;
    out.gammas = gamma_initial(model, opts);
    if (beta == 0.0) {
        out.report = InfiniteReport{1, 0.0, 0.0, 1, true};
        return out;
    }
    const std::vector<Belief> grid = probe_grid(model.states());
    const double threshold = eps * (1.0 - beta) / (2.0 * beta);
    std::vector<double> vals(grid.size());
    for (size_t i = 0; i < grid.size(); ++i) vals[i] = out.gammas.value(grid[i]);

    out.report.threshold = threshold;
    out.report.probe_points = static_cast<int>(grid.size());
    for (int it = 1; it <= opts.max_iterations; ++it) {
        out.gammas = gamma_step(model, out.gammas, opts);
        double change = 0.0;
        for (size_t i = 0; i < grid.size(); ++i) {
            const double v = out.gammas.value(grid[i]);
            change = std::max(change, std::abs(v - vals[i]));
            vals[i] = v;
        }
        out.report.iterations = it;
        out.report.final_change = change;
        if (change <= threshold) {
            out.report.converged = true;
            return out;
        }
    }
    throw ResourceError("value iteration did not converge within the iteration cap");
}

double value_full(const ModelSpec& model, const std::vector<GammaSet>& ladder, const Belief& x,
                  int s, int n) {
    if (n == 0) return 0.0;
    if (n > static_cast<int>(ladder.size()))
        throw ModelError("value_full horizon exceeds the computed gamma ladder");
    const int sx = myopic_base_stock(model, x);
    if (s <= sx) return ladder[n - 1].value(x);
    double v = expected_cost_L(model, x, s);
    if (n == 1) return v;
    const double beta = model.costs().beta;
    for (int d = 0; d < model.demand_count(); ++d)
        for (int z = 0; z < model.aod_count(); ++z) {
            const double sg = sigma(model, d, z, x);
            if (sg < kSigmaFloor) continue;
            const Belief post = lambda_update(model, d, z, x);
            v += beta * sg * value_full(model, ladder, post, s - model.demand(d), n - 1);
        }
    return v;
}

std::string gamma_to_csv(const GammaSet& set, int n_states) {
    std::ostringstream os;
    os << "horizon";
    for (int i = 1; i <= n_states; ++i) os << ",g_" << i;
    os << "\n";
    os.precision(17);
    for (const auto& g : set.vectors) {
        os << set.horizon;
        for (int i = 0; i < n_states; ++i) os << "," << (i < (int)g.size() ? g[i] : 0.0);
        os << "\n";
    }
    return os.str();
}

} // namespace beliefstock
