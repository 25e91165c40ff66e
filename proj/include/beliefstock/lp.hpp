// Small dense linear programs over the probability simplex: two-phase primal
// simplex with Bland's rule. Correctness over speed; problems here have a few
// dozen rows at desk scale.
#pragma once

#include <stdexcept>
#include <vector>

#include "beliefstock/geometry.hpp"

namespace beliefstock {

class LpError : public std::runtime_error {
  public:
    explicit LpError(const std::string& what) : std::runtime_error(what) {}
};

enum class LpStatus { optimal, infeasible };

struct LpResult {
    LpStatus status = LpStatus::infeasible;
    double value = 0.0;
    std::vector<double> point; // vertex solution
};

/// maximize objective . x over {x in simplex} intersected with the weak
/// relaxations of the given constraints.
LpResult maximize_over_simplex(const std::vector<double>& objective,
                               const std::vector<HalfSpace>& constraints);

struct InteriorResult {
    bool weak_feasible = false; // constraints feasible with strict sides relaxed
    double max_slack = 0.0;     // max over x of the min slack of strict constraints
    std::vector<double> point;

    /// A region with only weak constraints is interior whenever feasible.
    bool interior(double tol = 1e-9) const { return weak_feasible && max_slack > tol; }
};

/// Feasibility of a region of the simplex given by mixed strict/weak
/// inequalities: phase-1 feasibility of the weak relaxation, then a point
/// maximizing the minimum slack over the strict constraints. Zero maximal
/// slack means boundary-only feasibility.
InteriorResult find_interior(int dim, const std::vector<HalfSpace>& constraints);

/// General small LP: maximize c . v, v >= 0, eq_a v = eq_b, le_a v <= le_b.
struct GeneralLp {
    int nvars = 0;
    std::vector<double> objective;            // empty means feasibility only
    std::vector<std::vector<double>> eq_a;
    std::vector<double> eq_b;
    std::vector<std::vector<double>> le_a;
    std::vector<double> le_b;
};

LpResult solve_general(const GeneralLp& lp);

} // namespace beliefstock
