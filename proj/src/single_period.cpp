#include "beliefstock/single_period.hpp"

#include <algorithm>
#include <sstream>

#include "beliefstock/lp.hpp"

namespace beliefstock {

FacetCoefficients facet_coefficients(const ModelSpec& model, const Belief& x) {
    const int M = model.demand_count();
    const double p = model.costs().p, h = model.costs().h;
    std::vector<double> sig(M);
    for (int m = 0; m < M; ++m) sig[m] = sigma_marginal(model, m, x);

    FacetCoefficients f;
    f.A.assign(M + 1, 0.0);
    f.B.assign(M + 1, 0.0);
    double head = 0.0, head_d = 0.0; // sums over k <= m
    double tail = 0.0, tail_d = 0.0; // sums over k > m
    for (int m = 0; m < M; ++m) {
        tail += sig[m];
        tail_d += sig[m] * model.demand(m);
    }
    for (int m = 0; m <= M; ++m) {
        f.A[m] = h * head - p * tail;
        f.B[m] = p * tail_d - h * head_d;
        if (m < M) {
            head += sig[m];
            head_d += sig[m] * model.demand(m);
            tail -= sig[m];
            tail_d -= sig[m] * model.demand(m);
        }
    }
    return f;
}

std::vector<double> gamma_bar(const ModelSpec& model, double y) {
    const int N = model.states(), M = model.demand_count();
    std::vector<double> g(N, 0.0);
    for (int d = 0; d < M; ++d) {
        const double c = model.unit_cost(y, model.demand(d));
        if (c == 0.0) continue;
        for (int i = 0; i < N; ++i) g[i] += model.marginal_row_mass(d, i) * c;
    }
    return g;
}

double expected_cost_L(const ModelSpec& model, const Belief& x, double y) {
    const FacetCoefficients f = facet_coefficients(model, x);
    double best = f.A[0] * y + f.B[0];
    for (size_t m = 1; m < f.A.size(); ++m) best = std::max(best, f.A[m] * y + f.B[m]);
    return best;
}

int myopic_region_index(const ModelSpec& model, const Belief& x) {
    const int M = model.demand_count();
    const double ratio = model.costs().p / (model.costs().p + model.costs().h);
    double cum = 0.0;
    for (int m = 0; m < M; ++m) {
        cum += sigma_marginal(model, m, x);
        if (cum >= ratio - kMembershipSlack) return m;
    }
    return M - 1;
}

int myopic_base_stock(const ModelSpec& model, const Belief& x) {
    return model.demand(myopic_region_index(model, x));
}

namespace {

std::vector<HalfSpace> region_constraints(const ModelSpec& model, int m) {
    // Eq. (2): cum_{m-1}(x) < p/(p+h) <= cum_m(x)
    const int N = model.states();
    const double ratio = model.costs().p / (model.costs().p + model.costs().h);
    std::vector<HalfSpace> cs;
    if (m > 0) {
        HalfSpace lower;
        lower.a.assign(model.cum_vector(m), model.cum_vector(m) + N);
        lower.b = ratio;
        lower.strict = true;
        cs.push_back(std::move(lower));
    }
    HalfSpace upper;
    upper.a.assign(N, 0.0);
    for (int i = 0; i < N; ++i) upper.a[i] = -model.cum_vector(m + 1)[i];
    upper.b = -ratio;
    upper.strict = false;
    cs.push_back(std::move(upper));
    return cs;
}

} // namespace

std::vector<Region> partition_p1(const ModelSpec& model) {
    std::vector<Region> out;
    for (int m = 0; m < model.demand_count(); ++m) {
        Region r;
        r.constraints = region_constraints(model, m);
        r.m_index = m;
        r.base_stock = model.demand(m);
        const InteriorResult feas = find_interior(model.states(), r.constraints);
        if (!feas.interior()) continue;
        r.witness = Belief(feas.point);
        out.push_back(std::move(r));
    }
    return out;
}

std::string regions_to_csv(const std::vector<Region>& regions, int n_states) {
    std::ostringstream os;
    os << "label";
    for (int i = 1; i <= n_states; ++i) os << ",a_" << i;
    os << ",relation,b\n";
    os.precision(17);
    for (const auto& r : regions)
        for (const auto& hs : r.constraints) {
            os << r.base_stock;
            for (int i = 0; i < n_states; ++i) os << "," << (i < (int)hs.a.size() ? hs.a[i] : 0.0);
            os << "," << (hs.strict ? "<" : "<=") << "," << hs.b << "\n";
        }
    return os.str();
}

} // namespace beliefstock
