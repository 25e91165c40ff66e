// beliefstock: inventory control with Markov-modulated demand and a
// partially observed modulation process.
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "beliefstock/assumptions.hpp"
#include "beliefstock/belief.hpp"
#include "beliefstock/bounds.hpp"
#include "beliefstock/gamma.hpp"
#include "beliefstock/lp.hpp"
#include "beliefstock/model.hpp"
#include "beliefstock/reorder.hpp"
#include "beliefstock/simulate.hpp"
#include "beliefstock/single_period.hpp"

namespace {

using nlohmann::json;
using namespace beliefstock;

Belief parse_belief(const std::string& text, int n) {
    std::vector<double> x;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) x.push_back(std::stod(tok));
    Belief b(std::move(x));
    require_belief(b, n);
    return b;
}

void emit(const std::string& payload, const std::string& output) {
    if (output.empty()) {
        std::cout << payload << "\n";
        return;
    }
    std::ofstream out(output);
    if (!out) throw ModelError("cannot open output file: " + output);
    out << payload;
}

json region_json(const Region& r) {
    json ineqs = json::array();
    for (const auto& hs : r.constraints)
        ineqs.push_back({{"a", hs.a}, {"relation", hs.strict ? "<" : "<="}, {"b", hs.b}});
    return {{"base_stock", r.base_stock}, {"m", r.m_index + 1}, {"inequalities", ineqs}};
}

json polygons_json(const ModelSpec& model, const std::vector<Region>& regions) {
    if (model.states() != 3)
        throw ModelError("polygon export is defined for N=3 belief simplices");
    json arr = json::array();
    for (const auto& r : regions) {
        json verts = json::array();
        for (const auto& v : simplex_polygon(r.constraints)) verts.push_back({v[0], v[1], v[2]});
        arr.push_back({{"label", r.base_stock}, {"vertices", verts}});
    }
    return arr;
}

int run(int argc, char** argv) {
    CLI::App app{"belief-dependent base stock and (s,S) policies for "
                 "Markov-modulated demand with a partially observed modulation process"};
    app.require_subcommand(1);

    std::string model_path, belief_text, output, format = "json";
    int horizon = 0, inventory = INT_MIN, depth = 3;
    double epsilon = 0.0;
    int delta = INT_MIN;
    uint64_t seed = 1;
    long replications = 1000;
    std::string policy_name = "myopic";

    auto add_common = [&](CLI::App* cmd, bool needs_model = true) {
        auto* opt = cmd->add_option("--model", model_path, "model JSON document");
        if (needs_model) opt->required();
        cmd->add_option("--output", output, "write the result here instead of stdout");
        cmd->add_option("--format", format, "json, csv, or polygons")
            ->check(CLI::IsMember({"json", "csv", "polygons"}));
    };

    auto* validate = app.add_subcommand("validate", "parse and validate a model document");
    add_common(validate);

    auto* partition = app.add_subcommand("partition", "newsvendor partition of the belief space");
    add_common(partition);

    auto* check = app.add_subcommand("check", "attainability (A1) and its sufficient conditions");
    add_common(check);
    check->add_option("--belief", belief_text, "also run the depth-limited A2 check from here");
    check->add_option("--depth", depth, "A2 reachable-set depth (default 3)");
    check->add_option("--seed", seed, "pre-screen seed");
    long prescreen = 0;
    check->add_option("--prescreen", prescreen,
                      "sampled pre-screen only: this many random beliefs, no LP verdict");

    double prune_tol = 1e-10;
    auto* solve = app.add_subcommand("solve", "gamma-set value functions (A1, K=0)");
    add_common(solve);
    solve->add_option("--horizon", horizon, "finite horizon n");
    solve->add_option("--epsilon", epsilon, "infinite-horizon tolerance");
    solve->add_option("--prune-tol", prune_tol,
                      "gamma pruning tolerance (default 1e-10; coarser keeps sets small)");
    solve->add_option("--belief", belief_text, "evaluate the value at this belief");
    solve->add_option("--inventory", inventory, "inventory level for the evaluation");

    auto* bounds = app.add_subcommand("bounds", "v^L / v^U gap report when A1 fails");
    add_common(bounds);
    bounds->add_option("--horizon", horizon, "probe horizon (default 2)");
    bounds->add_option("--delta", delta, "also shift the model by this and re-check A1");
    bounds->add_option("--seed", seed, "probe seed");

    auto* ssbounds = app.add_subcommand("ssbounds", "(s,S) bounds and their belief partition");
    add_common(ssbounds);
    ssbounds->add_option("--belief", belief_text, "evaluate the bounds at this belief only");

    auto* sssolve = app.add_subcommand("sssolve", "finite-horizon (s,S) policy (K>0, A1)");
    add_common(sssolve);
    sssolve->add_option("--horizon", horizon, "horizon n")->required();
    sssolve->add_option("--depth", depth, "depth cap (default 8)");
    sssolve->add_option("--prune-tol", prune_tol, "gamma pruning tolerance");

    auto* simulate = app.add_subcommand("simulate", "seeded Monte-Carlo policy evaluation");
    add_common(simulate);
    simulate->add_option("--horizon", horizon, "epochs per replication")->required();
    simulate->add_option("--replications", replications, "number of replications");
    simulate->add_option("--seed", seed, "PRNG seed");
    simulate->add_option("--belief", belief_text, "initial belief (default uniform)");
    simulate->add_option("--inventory", inventory, "initial inventory (default 0)");
    simulate->add_option("--policy", policy_name, "myopic or ss")
        ->check(CLI::IsMember({"myopic", "ss"}));
    simulate->add_option("--depth", depth, "(s,S) policy horizon when --policy ss");

    auto* exportplot = app.add_subcommand("export-plot",
                                          "figure geometry: partition polygons and the "
                                          "dominance-witness construction (N=3)");
    add_common(exportplot);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    const ModelSpec model = load_model_file(model_path);
    const int N = model.states();

    if (validate->parsed()) {
        json j{{"valid", true},        {"N", N},
               {"M", model.demand_count()}, {"Z", model.aod_count()},
               {"demands", model.demands()}, {"p", model.costs().p},
               {"h", model.costs().h},  {"K", model.costs().K},
               {"beta", model.costs().beta}};
        emit(j.dump(2), output);
        return 0;
    }

    if (partition->parsed()) {
        const auto regions = partition_p1(model);
        if (format == "csv") {
            emit(regions_to_csv(regions, N), output);
        } else if (format == "polygons") {
            emit(polygons_json(model, regions).dump(2), output);
        } else {
            json arr = json::array();
            for (const auto& r : regions) arr.push_back(region_json(r));
            emit(arr.dump(2), output);
        }
        return 0;
    }

    if (check->parsed()) {
        if (prescreen > 0) {
            const auto hits = a1_prescreen(model, static_cast<int>(prescreen), seed);
            json j{{"prescreen", true},
                   {"samples", prescreen},
                   {"violations_found", hits.size()},
                   {"certifies", false}};
            if (!hits.empty())
                j["example"] = {{"m", hits.front().m_index + 1},
                                {"d", model.demand(hits.front().d_index)},
                                {"z", hits.front().z},
                                {"mprime", hits.front().mprime_index + 1},
                                {"violation", hits.front().violation}};
            emit(j.dump(2), output);
            return 0;
        }
        const A1Report rep = check_a1_exact(model);
        json j = json::parse(a1_report_to_json(rep, model));
        j["a3"] = check_a3(model);
        j["a4"] = check_a4(model);
        j["min_delta"] = min_delta(model);
        if (!belief_text.empty()) {
            const Belief x = parse_belief(belief_text, N);
            j["a2"] = {{"belief", x.x},
                       {"depth", depth},
                       {"holds_to_depth", check_a2(model, x, depth)},
                       {"certified_only_to_depth", true}};
        }
        emit(j.dump(2), output);
        return 0;
    }

    if (solve->parsed()) {
        if (horizon <= 0 && epsilon <= 0.0)
            throw ModelError("solve requires --horizon or --epsilon");
        json j;
        GammaSet gams;
        GammaOptions gopts;
        gopts.prune_tol = prune_tol;
        if (epsilon > 0.0) {
            const InfiniteSolution sol = solve_infinite(model, epsilon, gopts);
            gams = sol.gammas;
            j["report"] = {{"iterations", sol.report.iterations},
                           {"final_change", sol.report.final_change},
                           {"threshold", sol.report.threshold},
                           {"probe_points", sol.report.probe_points},
                           {"converged", sol.report.converged},
                           {"grid_certificate_only", true}};
        } else {
            gams = solve_finite(model, horizon, gopts).back();
        }
        if (format == "csv") {
            emit(gamma_to_csv(gams, N), output);
            return 0;
        }
        j["horizon"] = gams.horizon;
        j["vector_count"] = gams.vectors.size();
        j["vectors"] = gams.vectors;
        if (!belief_text.empty()) {
            const Belief x = parse_belief(belief_text, N);
            if (inventory == INT_MIN || epsilon > 0.0) {
                j["value"] = gams.value(x);
            } else {
                const auto ladder = solve_finite(model, horizon, gopts);
                j["value"] = value_full(model, ladder, x, inventory, horizon);
            }
        }
        emit(j.dump(2), output);
        return 0;
    }

    if (bounds->parsed()) {
        GapOptions opts;
        if (horizon > 0) opts.horizon = horizon;
        opts.seed = seed;
        const GapReport rep = delta_gap(model, opts);
        json j = json::parse(gap_report_to_json(rep, model));
        if (delta != INT_MIN) {
            const ModelSpec primed = shift_model(model, delta);
            j["shift"] = {{"delta", delta},
                          {"min_delta", min_delta(model)},
                          {"a1_holds_after_shift", check_a1_exact(primed).holds}};
        }
        emit(j.dump(2), output);
        return 0;
    }

    if (ssbounds->parsed() || sssolve->parsed()) {
        if (!check_a1_exact(model).holds)
            std::cerr << "warning: A1 does not hold for this model; section-5 guarantees "
                         "do not apply\n";
    }

    if (ssbounds->parsed()) {
        if (!belief_text.empty()) {
            const Belief x = parse_belief(belief_text, N);
            const SSBounds b = ss_bounds(model, x);
            json j{{"belief", x.x},
                   {"sl", b.s_lower},
                   {"su", b.s_upper},
                   {"Sl", b.S_lower},
                   {"Su", b.S_upper}};
            emit(j.dump(2), output);
            return 0;
        }
        emit(ss_regions_to_json(ss_partition(model)), output);
        return 0;
    }

    if (sssolve->parsed()) {
        SSOptions opts;
        opts.depth_cap = depth > 0 ? std::max(depth, horizon) : 8;
        opts.gamma.prune_tol = prune_tol;
        const SSPolicy pol = solve_ss_finite(model, horizon, opts);
        emit(ss_policy_to_json(pol), output);
        return 0;
    }

    if (simulate->parsed()) {
        Belief x0 = belief_text.empty()
                        ? Belief(std::vector<double>(N, 1.0 / N))
                        : parse_belief(belief_text, N);
        const int s0 = inventory == INT_MIN ? 0 : inventory;
        Policy pol;
        std::optional<SSPolicy> ss;
        if (policy_name == "ss") {
            SSOptions opts;
            opts.depth_cap = std::max(depth, 1);
            ss.emplace(model, std::max(depth, 1), opts);
            pol = [&ss](const Belief& x, int s) {
                const PolicyDecision d = ss->decide(x, s);
                return d.ordered ? d.order_up_to : s;
            };
        } else {
            pol = myopic_policy(model);
        }
        SimOptions opts;
        opts.check_absorption = policy_name == "myopic";
        opts.record_trace = !output.empty() && format == "csv";
        const SimResult res =
            simulate_policy(model, pol, x0, s0, horizon, replications, seed, opts);
        json j{{"mean", res.mean},
               {"stderr", res.stderr_},
               {"ci95", {res.ci95_low, res.ci95_high}},
               {"replications", res.replications},
               {"horizon", horizon},
               {"seed", seed},
               {"policy", policy_name}};
        if (opts.check_absorption) j["absorption_violations"] = res.absorption_violations;
        if (opts.record_trace) {
            emit(trace_to_csv(res.trace, N), output);
            std::cout << j.dump(2) << "\n";
        } else {
            emit(j.dump(2), output);
        }
        return 0;
    }

    if (exportplot->parsed()) {
        json j;
        j["p1"] = polygons_json(model, partition_p1(model));
        if (model.costs().K > 0.0) {
            json arr = json::array();
            for (const auto& r : ss_partition(model)) {
                json verts = json::array();
                for (const auto& v : simplex_polygon(r.constraints))
                    verts.push_back({v[0], v[1], v[2]});
                arr.push_back({{"label",
                                {{"sl", r.label.s_lower},
                                 {"su", r.label.s_upper},
                                 {"Sl", r.label.S_lower},
                                 {"Su", r.label.S_upper}}},
                               {"vertices", verts}});
            }
            j["ss"] = std::move(arr);
        }
        json xhat_all = json::array();
        for (int d = 0; d < model.demand_count(); ++d)
            for (int z = 0; z < model.aod_count(); ++z) {
                json posts = json::array();
                bool any = false;
                for (int i = 0; i < N; ++i) {
                    const Belief ei = Belief::unit(N, i);
                    if (sigma(model, d, z, ei) < kSigmaFloor) continue;
                    posts.push_back(lambda_update(model, d, z, ei).x);
                    any = true;
                }
                if (!any) continue;
                xhat_all.push_back({{"d", model.demand(d)},
                                    {"z", z},
                                    {"xhat", construct_xhat(model, d, z).x},
                                    {"vertex_posteriors", posts}});
            }
        j["xhat"] = std::move(xhat_all);
        emit(j.dump(2), output);
        return 0;
    }

    return 2;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const ModelError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const ImpossibleObservationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const LpError& e) {
        std::cerr << "lp error: " << e.what() << "\n";
        return 1;
    } catch (const ResourceError& e) {
        std::cerr << "resource error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
