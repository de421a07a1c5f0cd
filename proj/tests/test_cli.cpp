#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "cli_runner.hpp"

using nlohmann::json;

namespace {

std::string spec_file(const std::string& name, const std::string& body) {
    const auto path = std::filesystem::temp_directory_path() / ("membrane_test_" + name + ".json");
    std::ofstream(path) << body;
    return path.string();
}

json parse(const CliRun& r) { return json::parse(r.out); }

}  // namespace

TEST_CASE("shuffle listings") {
    CHECK(parse(run_cli("shuffle 1 1 --json"))["count"] == 2);
    CHECK(parse(run_cli("shuffle 0 3 --json"))["count"] == 1);
    const auto r = parse(run_cli("shuffle 2 2 --json"));
    CHECK(r["count"] == 6);
    CHECK(r["shuffles"][0] == "[1,2,3,4]");
    CHECK(parse(run_cli("shuffle 2 1 --sigma '[2,1]' --restricted 1 1 --json"))["count"] == 2);
    CHECK(run_cli("shuffle 2 2 --sigma '[2,1'").code == 2);
    CHECK(run_cli("shuffle 2 2 --sigma '[1,2,3]'").code == 2);
    CHECK(run_cli("shuffle").code == 2);
    CHECK(run_cli("").code == 2);
}

TEST_CASE("verify suites report and set the exit code") {
    CHECK(run_cli("verify hopf --max-degree 0").code == 0);
    const auto h = run_cli("verify hopf --max-degree 3 --json");
    CHECK(h.code == 0);
    CHECK(h.out.find("\"check\":\"antipode\"") != std::string::npos);
    CHECK(run_cli("verify thm15 --max-degree 2").code == 0);
    CHECK(run_cli("verify group-like --max-degree 2").code == 0);
    CHECK(run_cli("verify shuffle-relation --tuples 2 --max-degree 3").code == 0);
    CHECK(run_cli("verify lemma21 --tuples 1 --max-degree 2").code == 0);
    CHECK(run_cli("verify homotopy --max-degree 1").code == 0);
    CHECK(run_cli("verify cocycle --max-degree 1").code == 0);
    CHECK(run_cli("verify nope").code == 2);
    CHECK(run_cli("verify hopf --alphabet 0").code == 2);
}

TEST_CASE("integrate") {
    const auto consts = spec_file("const", R"({"rectangle": [0, 1, 0, 1], "forms": [{"terms": [{"coeff": 1}]}, {"builtin": "one"}]})");
    const auto r = run_cli("integrate " + consts);
    CHECK(r.code == 0);
    CHECK(r.out == "1/4\n");
    const auto box = spec_file("box", R"({"rectangle": [0, 2, 0, 3], "forms": [{"terms": [{"coeff": "1"}]}]})");
    CHECK(parse(run_cli("integrate " + box + " --json"))["exact"] == "6");
    const auto cubic = spec_file("cubic", R"({"rectangle": [0, 2, 1, 3],
        "forms": [{"terms": [{"coeff": 1, "x": 2, "y": 1}]}, {"terms": [{"coeff": 1, "x": 1}, {"coeff": 1, "y": 3}]}]})");
    const auto o = parse(run_cli("integrate " + cubic + " --sx '[2,1]' --method gauss --oracle --json"));
    CHECK(o["oracle"] == "640/3");
    CHECK(std::abs(o["difference"].get<double>()) < 1e-11);
    const auto mc = parse(run_cli("integrate " + cubic + " --method mc --samples 20000 --seed 3 --json"));
    CHECK(mc["seed"] == 3);
    CHECK(mc["est_error"].get<double>() > 0);
    CHECK(run_cli("integrate " + cubic + " --sx '[1,2,3]'").code == 2);
    CHECK(run_cli("integrate " + spec_file("bad", "{not json")).code == 2);
    CHECK(run_cli("integrate /nonexistent/spec.json").code == 2);
    const auto sing = spec_file("sing", R"({"rectangle": [0, 1, 0, 1], "forms": [{"builtin": "inv_x"}]})");
    CHECK(run_cli("integrate " + sing).code == 3);
    const auto shifted = spec_file("shifted", R"({"rectangle": [1, 2, 0, 1], "forms": [{"builtin": "inv_x"}]})");
    CHECK(parse(run_cli("integrate " + shifted + " --json"))["value"].get<double>() == doctest::Approx(std::log(2.0)));
    const auto degenerate = spec_file("degenerate", R"({"rectangle": [1, 1, 0, 1], "forms": [{"builtin": "one"}]})");
    CHECK(run_cli("integrate " + degenerate).code == 2);
}

TEST_CASE("zeta") {
    const auto q = parse(run_cli("zeta --field Q --s 2 --json"));
    CHECK(q["value"].get<double>() == doctest::Approx(1.0471976).epsilon(1e-7));
    CHECK(q["normalization"] == "s/2");
    CHECK(q.contains("tail_bounds"));
    CHECK(!q.contains("runtime_ms"));
    CHECK(parse(run_cli("zeta --field Q --s 2 --json --timing")).contains("runtime_ms"));
    CHECK(parse(run_cli("zeta --field Qi --s 2 --json"))["value"].get<double>() == doctest::Approx(0.6106438).epsilon(1e-7));
    CHECK(parse(run_cli("zeta --field Q:sqrt5 --s 2 --membrane --json"))["value"].get<double>() ==
          doctest::Approx(0.117703).epsilon(1e-5));
    CHECK(parse(run_cli("zeta --s 4 --s 2 --json"))["value"].get<double>() == doctest::Approx(0.0422070359589).epsilon(1e-10));
    // σ₁ = [2,1] puts the second exponent first in t
    CHECK(parse(run_cli("zeta --s 2 --s 4 --sigma1 '[2,1]' --json"))["value"].get<double>() ==
          doctest::Approx(0.0422070359589).epsilon(1e-10));
    CHECK(parse(run_cli("zeta --s 2 --word T,d,T --json"))["value"]["re"] == 0.0);
    CHECK(run_cli("zeta --field Q --s 1").code == 3);
    CHECK(run_cli("zeta --s 2 --s 1").code == 3);
    CHECK(run_cli("zeta --field Q --s 2 --tmax 2").code == 4);
    CHECK(run_cli("zeta --field Q:sqrt10 --s 2").code == 2);
    CHECK(run_cli("zeta --field Q --s 2 --membrane").code == 2);
    CHECK(run_cli("zeta --field Q --s 2 --tmin 5 --tmax 1").code == 2);
    CHECK(run_cli("zeta --s 2 --s 3 --sigma1 '[1]'").code == 2);
}

TEST_CASE("fixed seed gives byte-identical output") {
    const auto cubic = spec_file("det", R"({"rectangle": [0, 1, 0, 1], "forms": [{"builtin": "exp_xy"}, {"builtin": "exp_xy"}]})");
    const std::vector<std::string> commands{"shuffle 3 2 --json",
                                            "integrate " + cubic + " --method mc --samples 5000 --seed 9 --json",
                                            "zeta --field Q:sqrt5 --s 2 --method mc --samples 5000 --json"};
    for (const auto& args : commands) {
        const auto a = run_cli(args), b = run_cli(args);
        CHECK(a.out == b.out);
        CHECK(!a.out.empty());
    }
}
