#include "beliefstock/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace beliefstock {

namespace {
constexpr double kStochasticTol = 1e-9;
}

Belief Belief::unit(int n, int m) {
    Belief b(std::vector<double>(n, 0.0));
    b.x[m] = 1.0;
    return b;
}

bool is_valid_belief(const Belief& x) {
    double sum = 0.0;
    for (double v : x.x) {
        if (v < 0.0 || !std::isfinite(v)) return false;
        sum += v;
    }
    return std::abs(sum - 1.0) <= kStochasticTol;
}

void require_belief(const Belief& x, int n) {
    if (x.size() != n) throw ModelError("belief has dimension " + std::to_string(x.size()) +
                                        ", model has N=" + std::to_string(n));
    if (!is_valid_belief(x)) throw ModelError("belief is not a probability vector");
}

ModelSpec::ModelSpec(std::vector<int> demands, int z_count, std::vector<double> joint,
                     CostParams costs)
    : z_(z_count), demands_(std::move(demands)), joint_(std::move(joint)), costs_(costs) {
    m_ = static_cast<int>(demands_.size());
    if (m_ == 0) throw ModelError("demand grid is empty");
    if (z_ <= 0) throw ModelError("Z must be positive");
    for (int m = 0; m + 1 < m_; ++m)
        if (demands_[m] >= demands_[m + 1])
            throw ModelError("demand grid must be strictly increasing: d[" + std::to_string(m) +
                             "]=" + std::to_string(demands_[m]) + " >= d[" + std::to_string(m + 1) +
                             "]=" + std::to_string(demands_[m + 1]));

    const size_t cell = joint_.size() / (static_cast<size_t>(m_) * z_);
    n_ = static_cast<int>(std::lround(std::sqrt(static_cast<double>(cell))));
    if (static_cast<size_t>(m_) * z_ * n_ * n_ != joint_.size())
        throw ModelError("joint array size does not factor as M*Z*N*N");

    for (double v : joint_)
        if (v < 0.0 || !std::isfinite(v)) throw ModelError("joint kernel has a negative or non-finite entry");

    // row stochasticity of the full kernel
    for (int i = 0; i < n_; ++i) {
        double sum = 0.0;
        for (int d = 0; d < m_; ++d)
            for (int z = 0; z < z_; ++z)
                for (int j = 0; j < n_; ++j) sum += this->joint(d, z, i, j);
        if (std::abs(sum - 1.0) > kStochasticTol) {
            std::ostringstream os;
            os << "joint kernel row " << i << " sums to " << sum << " (expected 1 within 1e-9)";
            throw ModelError(os.str());
        }
    }

    if (!(costs_.p > 0.0)) throw ModelError("p must be positive");
    if (!(costs_.h > 0.0)) throw ModelError("h must be positive");
    if (costs_.K < 0.0) throw ModelError("K must be nonnegative");
    if (!(costs_.beta >= 0.0 && costs_.beta < 1.0)) throw ModelError("beta must lie in [0,1)");

    row_mass_.assign(static_cast<size_t>(m_) * z_ * n_, 0.0);
    marginal_.assign(static_cast<size_t>(m_) * n_ * n_, 0.0);
    marginal_row_mass_.assign(static_cast<size_t>(m_) * n_, 0.0);
    for (int d = 0; d < m_; ++d)
        for (int z = 0; z < z_; ++z)
            for (int i = 0; i < n_; ++i) {
                double rm = 0.0;
                for (int j = 0; j < n_; ++j) {
                    const double v = this->joint(d, z, i, j);
                    rm += v;
                    marginal_[(static_cast<size_t>(d) * n_ + i) * n_ + j] += v;
                }
                row_mass_[(static_cast<size_t>(d) * z_ + z) * n_ + i] = rm;
                marginal_row_mass_[static_cast<size_t>(d) * n_ + i] += rm;
            }

    cum_mass_.assign(static_cast<size_t>(m_ + 1) * n_, 0.0);
    for (int m = 1; m <= m_; ++m)
        for (int i = 0; i < n_; ++i)
            cum_mass_[static_cast<size_t>(m) * n_ + i] =
                cum_mass_[static_cast<size_t>(m - 1) * n_ + i] + marginal_row_mass((m - 1), i);
}

std::vector<double> build_factored(const std::vector<std::vector<double>>& P,
                                   const std::vector<std::vector<double>>& QD,
                                   const std::vector<std::vector<double>>& RZ) {
    const size_t N = P.size();
    if (N == 0) throw ModelError("P is empty");
    for (const auto& row : P)
        if (row.size() != N) throw ModelError("P must be square NxN");
    if (QD.size() != N) throw ModelError("QD must have N rows");
    const size_t M = QD[0].size();
    for (const auto& row : QD)
        if (row.size() != M) throw ModelError("QD rows must have equal length M");

    std::vector<std::vector<double>> R = RZ;
    if (R.empty()) R.assign(N, {1.0});
    if (R.size() != N) throw ModelError("RZ must have N rows");
    const size_t Z = R[0].size();
    for (const auto& row : R)
        if (row.size() != Z) throw ModelError("RZ rows must have equal length Z");

    auto check_stochastic = [](const std::vector<std::vector<double>>& A, const char* name) {
        for (size_t i = 0; i < A.size(); ++i) {
            double sum = 0.0;
            for (double v : A[i]) {
                if (v < 0.0) throw ModelError(std::string(name) + " has a negative entry in row " +
                                              std::to_string(i));
                sum += v;
            }
            if (std::abs(sum - 1.0) > kStochasticTol) {
                std::ostringstream os;
                os << name << " row " << i << " sums to " << sum << " (expected 1 within 1e-9)";
                throw ModelError(os.str());
            }
        }
    };
    check_stochastic(P, "P");
    check_stochastic(QD, "QD");
    check_stochastic(R, "RZ");

    std::vector<double> joint(M * Z * N * N, 0.0);
    for (size_t d = 0; d < M; ++d)
        for (size_t z = 0; z < Z; ++z)
            for (size_t i = 0; i < N; ++i)
                for (size_t j = 0; j < N; ++j)
                    joint[((d * Z + z) * N + i) * N + j] = P[i][j] * QD[j][d] * R[j][z];
    return joint;
}

namespace {

using nlohmann::json;

std::vector<std::vector<double>> parse_matrix(const json& j, const char* name) {
    if (!j.is_array() || j.empty()) throw ModelError(std::string(name) + " must be a nonempty array of rows");
    std::vector<std::vector<double>> out;
    for (const auto& row : j) {
        if (!row.is_array()) throw ModelError(std::string(name) + " rows must be arrays");
        std::vector<double> r;
        for (const auto& v : row) {
            if (!v.is_number()) throw ModelError(std::string(name) + " entries must be numbers");
            r.push_back(v.get<double>());
        }
        out.push_back(std::move(r));
    }
    return out;
}

} // namespace

ModelSpec load_model(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ModelError(std::string("model document is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ModelError("model document must be a JSON object");

    for (const char* key : {"demands", "p", "h", "K", "beta"})
        if (!doc.contains(key)) throw ModelError(std::string("missing required key \"") + key + "\"");

    if (!doc["demands"].is_array() || doc["demands"].empty())
        throw ModelError("\"demands\" must be a nonempty array");
    std::vector<int> demands;
    for (const auto& v : doc["demands"]) {
        if (!v.is_number_integer()) throw ModelError("\"demands\" entries must be integers");
        demands.push_back(v.get<int>());
    }

    CostParams costs;
    costs.p = doc["p"].get<double>();
    costs.h = doc["h"].get<double>();
    costs.K = doc["K"].get<double>();
    costs.beta = doc["beta"].get<double>();

    const bool has_factored = doc.contains("factored"), has_joint = doc.contains("joint");
    if (has_factored == has_joint)
        throw ModelError("exactly one of \"factored\"/\"joint\" must be present");

    if (has_factored) {
        const auto& f = doc["factored"];
        if (!f.contains("P") || !f.contains("QD"))
            throw ModelError("\"factored\" requires \"P\" and \"QD\"");
        auto P = parse_matrix(f["P"], "P");
        auto QD = parse_matrix(f["QD"], "QD");
        std::vector<std::vector<double>> RZ;
        if (f.contains("RZ")) RZ = parse_matrix(f["RZ"], "RZ");
        if (QD[0].size() != demands.size())
            throw ModelError("QD column count must equal the demand grid size");
        const int Z = RZ.empty() ? 1 : static_cast<int>(RZ[0].size());
        return ModelSpec(std::move(demands), Z, build_factored(P, QD, RZ), costs);
    }

    const auto& jj = doc["joint"];
    if (!jj.contains("Z") || !jj["Z"].is_number_integer())
        throw ModelError("\"joint\" requires integer \"Z\"");
    const int Z = jj["Z"].get<int>();
    if (!jj.contains("P_dz") || !jj["P_dz"].is_array())
        throw ModelError("\"joint\" requires array \"P_dz\" indexed [d][z][i][j]");
    const auto& pdz = jj["P_dz"];
    if (pdz.size() != demands.size()) throw ModelError("P_dz must have one entry per demand outcome");
    std::vector<double> joint;
    size_t N = 0;
    for (const auto& per_d : pdz) {
        if (!per_d.is_array() || per_d.size() != static_cast<size_t>(Z))
            throw ModelError("P_dz[d] must have Z entries");
        for (const auto& mat_j : per_d) {
            auto mat = parse_matrix(mat_j, "P_dz[d][z]");
            if (N == 0) N = mat.size();
            if (mat.size() != N) throw ModelError("P_dz matrices must share one dimension N");
            for (const auto& row : mat) {
                if (row.size() != N) throw ModelError("P_dz matrices must be square NxN");
                joint.insert(joint.end(), row.begin(), row.end());
            }
        }
    }
    return ModelSpec(std::move(demands), Z, std::move(joint), costs);
}

ModelSpec load_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ModelError("cannot open model file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_model(buf.str());
}

std::string model_to_json(const ModelSpec& model) {
    json doc;
    doc["demands"] = model.demands();
    doc["p"] = model.costs().p;
    doc["h"] = model.costs().h;
    doc["K"] = model.costs().K;
    doc["beta"] = model.costs().beta;
    json pdz = json::array();
    for (int d = 0; d < model.demand_count(); ++d) {
        json per_d = json::array();
        for (int z = 0; z < model.aod_count(); ++z) {
            json mat = json::array();
            for (int i = 0; i < model.states(); ++i) {
                json row = json::array();
                for (int j = 0; j < model.states(); ++j) row.push_back(model.joint(d, z, i, j));
                mat.push_back(std::move(row));
            }
            per_d.push_back(std::move(mat));
        }
        pdz.push_back(std::move(per_d));
    }
    doc["joint"] = {{"Z", model.aod_count()}, {"P_dz", std::move(pdz)}};
    return doc.dump(2);
}

ModelSpec derive_variant(const ModelSpec& model, Variant mode) {
    const int N = model.states(), M = model.demand_count();
    if (mode == Variant::strip_aod) {
        std::vector<double> joint(static_cast<size_t>(M) * N * N, 0.0);
        for (int d = 0; d < M; ++d)
            for (int i = 0; i < N; ++i)
                for (int j = 0; j < N; ++j)
                    joint[(static_cast<size_t>(d) * N + i) * N + j] = model.marginal(d, i, j);
        return ModelSpec(model.demands(), 1, std::move(joint), model.costs());
    }
    // perfect_aod: z reveals mu(t+1), so P'(d, z, i, j) = P(d)_ij when z == j
    std::vector<double> joint(static_cast<size_t>(M) * N * N * N, 0.0);
    for (int d = 0; d < M; ++d)
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j)
                joint[((static_cast<size_t>(d) * N + j) * N + i) * N + j] = model.marginal(d, i, j);
    return ModelSpec(model.demands(), N, std::move(joint), model.costs());
}

} // namespace beliefstock
