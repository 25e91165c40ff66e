// Single-period expected cost L(x,y), its facet coefficients, the myopic base
// stock s*(x), and the newsvendor partition of the belief simplex.
#pragma once

#include <string>
#include <vector>

#include "beliefstock/belief.hpp"
#include "beliefstock/geometry.hpp"
#include "beliefstock/model.hpp"

namespace beliefstock {

/// Facet slopes/intercepts of y -> L(x,y): L = max_m A_m y + B_m.
/// A is nondecreasing with A_0 = -p and A_M = h; B is nonincreasing.
struct FacetCoefficients {
    std::vector<double> A, B; // each of length M+1
};

FacetCoefficients facet_coefficients(const ModelSpec& model, const Belief& x);

/// Coefficient vector of x -> L(x,y) for fixed y: L(x,y) = x . gamma_bar(y).
/// Defined for any real y, not just grid points.
std::vector<double> gamma_bar(const ModelSpec& model, double y);

/// Expected single-period cost, computed by the max-of-facets form.
double expected_cost_L(const ModelSpec& model, const Belief& x, double y);

/// Index m (0-based) with cumulative demand mass first reaching p/(p+h).
int myopic_region_index(const ModelSpec& model, const Belief& x);

/// s*(x): the smallest demand-grid minimizer of L(x, .).
int myopic_base_stock(const ModelSpec& model, const Belief& x);

/// One cell of the newsvendor partition: s*(x) is constant on it.
struct Region {
    std::vector<HalfSpace> constraints;
    int m_index = 0;     // 0-based demand index
    int base_stock = 0;  // d_{m_index}
    Belief witness;      // a point strictly inside
};

/// The partition P1 of X by base stock level; empty cells dropped. Regions
/// are pairwise disjoint and cover X under the shared membership convention.
std::vector<Region> partition_p1(const ModelSpec& model);

/// CSV rows "label,a_1..a_N,relation,b", one per inequality.
std::string regions_to_csv(const std::vector<Region>& regions, int n_states);

} // namespace beliefstock
