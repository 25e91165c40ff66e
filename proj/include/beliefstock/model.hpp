// Core problem instance: Markov-modulated demand with a partially observed
// modulation process. The joint kernel P(d,z) is the only representation used
// downstream; factored inputs are expanded on load.
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace beliefstock {

/// Thrown on malformed or inconsistent model documents.
class ModelError : public std::runtime_error {
  public:
    explicit ModelError(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown when a conditioning event has zero probability.
class ImpossibleObservationError : public std::runtime_error {
  public:
    explicit ImpossibleObservationError(const std::string& what) : std::runtime_error(what) {}
};

struct CostParams {
    double p = 1.0;    // shortage penalty per unit per period
    double h = 1.0;    // holding cost per unit per period
    double K = 0.0;    // fixed reorder cost
    double beta = 0.0; // discount factor in [0,1)
};

/// Probability mass over modulation states; a point of the simplex X.
struct Belief {
    std::vector<double> x;

    Belief() = default;
    explicit Belief(std::vector<double> v) : x(std::move(v)) {}

    static Belief unit(int n, int m);

    int size() const { return static_cast<int>(x.size()); }
    double operator[](int i) const { return x[i]; }
    double& operator[](int i) { return x[i]; }
};

/// True iff x is nonnegative and sums to one within 1e-9.
bool is_valid_belief(const Belief& x);

/// Throws ModelError unless is_valid_belief(x).
void require_belief(const Belief& x, int n);

/// Validated problem instance. Immutable after construction; safe to share
/// across threads.
class ModelSpec {
  public:
    /// joint is indexed [d][z][i][j], flattened row-major.
    ModelSpec(std::vector<int> demands, int z_count, std::vector<double> joint,
              CostParams costs);

    int states() const { return n_; }       // N
    int demand_count() const { return m_; } // M
    int aod_count() const { return z_; }    // Z

    const std::vector<int>& demands() const { return demands_; }
    int demand(int m) const { return demands_[m]; }
    const CostParams& costs() const { return costs_; }

    /// P_ij(d,z)
    double joint(int d, int z, int i, int j) const {
        return joint_[((static_cast<size_t>(d) * z_ + z) * n_ + i) * n_ + j];
    }
    /// Row i of P(d,z), length N.
    const double* joint_row(int d, int z, int i) const {
        return joint_.data() + ((static_cast<size_t>(d) * z_ + z) * n_ + i) * n_;
    }

    /// sum_j P_ij(d,z)
    double row_mass(int d, int z, int i) const {
        return row_mass_[(static_cast<size_t>(d) * z_ + z) * n_ + i];
    }
    /// Cached marginal P(d) = sum_z P(d,z); entry (i,j).
    double marginal(int d, int i, int j) const {
        return marginal_[(static_cast<size_t>(d) * n_ + i) * n_ + j];
    }
    /// sum_j P_ij(d)
    double marginal_row_mass(int d, int i) const {
        return marginal_row_mass_[static_cast<size_t>(d) * n_ + i];
    }
    /// Cumulative row mass sum_{k<=m} P(d_k) 1, as a length-N vector; m in [0, M].
    /// cum_vector(0) is all zeros.
    const double* cum_vector(int m) const { return cum_mass_.data() + static_cast<size_t>(m) * n_; }

    /// p(d-y)+ + h(y-d)+
    double unit_cost(double y, double d) const {
        const double short_ = d - y, hold = y - d;
        return costs_.p * (short_ > 0 ? short_ : 0.0) + costs_.h * (hold > 0 ? hold : 0.0);
    }

    /// Model with identical dynamics but a changed cost block (used by the
    /// delta-shift construction and fixtures).
    ModelSpec with_costs(CostParams c) const { return ModelSpec(demands_, z_, joint_, c); }

    const std::vector<double>& joint_flat() const { return joint_; }

  private:
    int n_ = 0, m_ = 0, z_ = 0;
    std::vector<int> demands_;
    std::vector<double> joint_;
    CostParams costs_;
    std::vector<double> row_mass_;
    std::vector<double> marginal_;
    std::vector<double> marginal_row_mass_;
    std::vector<double> cum_mass_;
};

/// Expand a factored model P_ij(d,z) = P_ij q^D_jd r^Z_jz into the joint
/// array, indexed [d][z][i][j]. An empty RZ means Z=1 with r == 1.
std::vector<double> build_factored(const std::vector<std::vector<double>>& P,
                                   const std::vector<std::vector<double>>& QD,
                                   const std::vector<std::vector<double>>& RZ = {});

/// Parse and validate a JSON model document (factored or joint form).
ModelSpec load_model(const std::string& json_text);
/// Convenience: read the document from a file path.
ModelSpec load_model_file(const std::string& path);

/// Serialize a model to the joint-form JSON document.
std::string model_to_json(const ModelSpec& model);

enum class Variant {
    strip_aod,  // replace the AOD channel with a single uninformative outcome
    perfect_aod // z(t+1) = mu(t+1) deterministically
};

ModelSpec derive_variant(const ModelSpec& model, Variant mode);

} // namespace beliefstock
