#include "beliefstock/belief.hpp"

#include <cmath>

namespace beliefstock {

double sigma(const ModelSpec& model, int d, int z, const Belief& x) {
    const int N = model.states();
    double s = 0.0;
    for (int i = 0; i < N; ++i) s += x[i] * model.row_mass(d, z, i);
    return s;
}

double sigma_marginal(const ModelSpec& model, int d, const Belief& x) {
    const int N = model.states();
    double s = 0.0;
    for (int i = 0; i < N; ++i) s += x[i] * model.marginal_row_mass(d, i);
    return s;
}

std::vector<double> unnormalized_posterior(const ModelSpec& model, int d, int z, const Belief& x) {
    const int N = model.states();
    std::vector<double> out(N, 0.0);
    for (int i = 0; i < N; ++i) {
        const double xi = x[i];
        if (xi == 0.0) continue;
        const double* row = model.joint_row(d, z, i);
        for (int j = 0; j < N; ++j) out[j] += xi * row[j];
    }
    return out;
}

Belief lambda_update(const ModelSpec& model, int d, int z, const Belief& x) {
    auto post = unnormalized_posterior(model, d, z, x);
    double s = 0.0;
    for (double v : post) s += v;
    if (s < kSigmaFloor)
        throw ImpossibleObservationError("observation (d=" + std::to_string(model.demand(d)) +
                                         ", z=" + std::to_string(z) +
                                         ") has probability below 1e-12 at the given belief");
    for (double& v : post) v /= s;
    return Belief(std::move(post));
}

Belief lambda_update_marginal(const ModelSpec& model, int d, const Belief& x) {
    const int N = model.states();
    std::vector<double> post(N, 0.0);
    for (int i = 0; i < N; ++i) {
        const double xi = x[i];
        if (xi == 0.0) continue;
        for (int j = 0; j < N; ++j) post[j] += xi * model.marginal(d, i, j);
    }
    double s = 0.0;
    for (double v : post) s += v;
    if (s < kSigmaFloor)
        throw ImpossibleObservationError("demand d=" + std::to_string(model.demand(d)) +
                                         " has probability below 1e-12 at the given belief");
    for (double& v : post) v /= s;
    return Belief(std::move(post));
}

namespace {

bool near_linf(const Belief& a, const Belief& b, double tol) {
    for (int i = 0; i < a.size(); ++i)
        if (std::abs(a[i] - b[i]) > tol) return false;
    return true;
}

} // namespace

std::vector<Belief> reachable_beliefs(const ModelSpec& model, const Belief& x, int n) {
    require_belief(x, model.states());
    std::vector<Belief> frontier{x};
    for (int step = 0; step < n; ++step) {
        std::vector<Belief> next;
        for (const Belief& b : frontier) {
            for (int d = 0; d < model.demand_count(); ++d) {
                for (int z = 0; z < model.aod_count(); ++z) {
                    if (sigma(model, d, z, b) < kSigmaFloor) continue;
                    Belief post = lambda_update(model, d, z, b);
                    bool dup = false;
                    for (const Belief& seen : next)
                        if (near_linf(post, seen, 1e-9)) {
                            dup = true;
                            break;
                        }
                    if (!dup) next.push_back(std::move(post));
                }
            }
        }
        frontier = std::move(next);
    }
    return frontier;
}

} // namespace beliefstock
