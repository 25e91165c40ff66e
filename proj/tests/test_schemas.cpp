#include <doctest.h>

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "beliefstock/assumptions.hpp"
#include "beliefstock/bounds.hpp"
#include "beliefstock/reorder.hpp"
#include "fixtures.hpp"
#include "schema_check.hpp"

using namespace beliefstock;
using schema_check::load_schema;
using schema_check::validate;

TEST_CASE("model fixtures validate against the model schema") {
    const auto schema = load_schema("model.schema.json");
    for (const char* name : {"example1.json", "example1_rz.json", "example1_k5.json",
                             "sec4.json"}) {
        std::ifstream in(fixtures::data_path(name));
        std::ostringstream buf;
        buf << in.rdbuf();
        std::string why;
        CHECK_MESSAGE(validate(nlohmann::json::parse(buf.str()), schema, &why), name, ": ", why);
    }
}

TEST_CASE("emitted reports validate against their schemas") {
    std::string why;

    const ModelSpec m4 = fixtures::sec4();
    const auto a1 = nlohmann::json::parse(a1_report_to_json(check_a1_exact(m4), m4));
    CHECK_MESSAGE(validate(a1, load_schema("a1report.schema.json"), &why), why);

    GapOptions gopts;
    gopts.probe_count = 16;
    const auto gap = nlohmann::json::parse(gap_report_to_json(delta_gap(m4, gopts), m4));
    CHECK_MESSAGE(validate(gap, load_schema("gapreport.schema.json"), &why), why);

    const ModelSpec k5 = fixtures::example1_k5();
    const auto pol = nlohmann::json::parse(ss_policy_to_json(solve_ss_finite(k5, 1)));
    CHECK_MESSAGE(validate(pol, load_schema("sspolicy.schema.json"), &why), why);
}
