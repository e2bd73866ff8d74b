#include "doctest.h"

#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hexspine/cli.hpp"
#include "hexspine/error.hpp"
#include "hexspine/hplane.hpp"
#include "hexspine/tess.hpp"

using namespace hexspine;
using json = nlohmann::json;

namespace {

struct Run {
    int code;
    std::string out, err;
    json report() const { return json::parse(out); }
    json error() const { return json::parse(err); }
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "hexspine");
    std::vector<const char*> argv;
    for (const std::string& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) { return (std::filesystem::temp_directory_path() / name).string(); }

std::string slurp(const std::string& path) {
    std::ifstream f(path);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void write(const std::string& path, const std::string& text) { std::ofstream(path) << text; }

bool holds_number(const json& v) {
    if (v.is_number()) return true;
    if (v.is_structured())
        for (const auto& x : v)
            if (holds_number(x)) return true;
    return false;
}

// every numeric result field has a sibling tolerance entry
void check_tolerances(const json& r) {
    REQUIRE(r.contains("tolerances"));
    for (const auto& [key, value] : r["result"].items()) {
        if (!holds_number(value)) continue;
        INFO("field " << key);
        REQUIRE(r["tolerances"].contains(key));
        const json& t = r["tolerances"][key];
        CHECK((t["kind"] == "exact" || t["kind"] == "abs" || t["kind"] == "rel"));
        CHECK(t["value"].get<double>() >= 0.0);
    }
}

} // namespace

TEST_CASE("codim report for genus 17") {
    const Run r = run({"codim-report", "--preset", "gen17", "--indices", "3,4,5,6"});
    REQUIRE(r.code == 0);
    const json j = r.report();
    CHECK(j["result"]["genus"] == 17);
    CHECK(j["result"]["curves"] == 48);
    CHECK(j["result"]["filling_size"] == 32);
    CHECK(j["result"]["codim_bound"] == 31);
    CHECK(j["result"]["two_g_minus_1"] == 33);
    CHECK(!j["notes"].empty());
    check_tolerances(j);
}

TEST_CASE("trig near a right angle") {
    const double eps = 1.5707963;
    const Run r = run({"trig", "--eps", "1.5707963"});
    REQUIRE(r.code == 0);
    const json j = r.report();
    CHECK(std::abs(j["result"]["cosh_L"].get<double>() - (1 + 1 / std::sin(eps))) < 1e-12);
    CHECK(std::abs(j["result"]["cosh_L"].get<double>() - 2) < 1e-9);
    CHECK(std::abs(j["result"]["cosh_H"].get<double>() - 2) < 1e-9);
    CHECK(std::abs(j["result"]["cosh_L_prime"].get<double>() - 5) < 1e-12);
    CHECK(std::abs(j["result"]["cosh_2L"].get<double>() - 7) < 1e-12);
    check_tolerances(j);
    // far from pi/2 there are no Saccheri fields
    CHECK_FALSE(run({"trig", "--eps", "1.0"}).report()["result"].contains("cosh_L_prime"));
}

TEST_CASE("exit codes and error objects") {
    const Run low = run({"bound", "--g", "15"});
    CHECK(low.code == 2);
    CHECK(low.out.empty());
    CHECK(low.error()["error"]["kind"] == "OutOfDomain");
    CHECK(low.error()["error"]["exit_code"] == 2);

    for (const auto& args : std::vector<std::vector<std::string>>{
             {},
             {"frobnicate"},
             {"trig"},
             {"trig", "--eps", "abc"},
             {"trig", "--eps", "1", "--format", "csv"},
             {"trig", "--eps", "4"},
             {"systoles", "--preset", "gen2", "--radius", "3"},
             {"--tolerance", "1e-2", "trig", "--eps", "1"},
             {"--tolerance", "1e-15", "trig", "--eps", "1"},
             {"bolza-crossing", "--tol", "0.1"},
             {"delta", "--grid", "0,1"},
             {"delta", "--grid", "lin:1:2:1"},
             {"delta", "--grid", "geom:1e-5:1e-3:5"},
             {"delta", "--grid", "foo:1"},
             {"delta", "--grid", "1,x"},
             {"curves", "list", "--preset", "gen3"},
             {"curves", "list", "--preset", "gen2", "--map", "x.json"},
             {"axioms", "check", "--map", "/nonexistent/map.json"},
             {"codim-report", "--preset", "gen2"},
             {"filling", "--indices", "7"},
             {"pants", "--k", "4", "--eps", "1", "--grid", "0.5,1"},
         }) {
        const Run r = run(args);
        INFO("args " << json(args).dump());
        CHECK(r.code == 2);
        CHECK(r.out.empty());
        const json e = r.error();
        CHECK(e["error"]["exit_code"] == 2);
        CHECK(!e["error"]["message"].get<std::string>().empty());
    }
    CHECK(run({"frobnicate"}).error()["error"]["kind"] == "Usage");
    CHECK(run({"delta", "--grid", "0,1"}).error()["error"]["kind"] == "BadGrid");
    CHECK(run({"codim-report", "--preset", "gen2"}).error()["error"]["kind"] == "KTooSmall");
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("numeric failures exit with 3") {
    // gen2 with face 0 relabelled one step: vertices no longer close off pi/2
    const CombMap m = preset_gen2();
    const auto moved = [](int h) { return h < 6 ? (h + 1) % 6 : h; };
    std::vector<int> twin(m.half_edge_count());
    std::vector<TileType> types;
    for (int h = 0; h < m.half_edge_count(); ++h) twin[moved(h)] = moved(m.twin(h));
    for (int f = 0; f < m.face_count(); ++f) types.push_back(m.type(f));
    const std::string path = temp_path("hexspine_mismatched.json");
    write(path, map_to_json(CombMap(twin, types, false)));
    const Run r = run({"systoles", "--map", path, "--eps", "1.0", "--radius", "4"});
    CHECK(r.code == 3);
    CHECK(r.error()["error"]["kind"] == "ClosureFailure");
    CHECK(run({"systoles", "--map", path, "--radius", "4"}).code == 0);
    std::filesystem::remove(path);
}

TEST_CASE("map files round trip") {
    const std::string path = temp_path("hexspine_gen17.json");
    const Run built = run({"preset", "build", "--name", "gen17", "--out", path});
    REQUIRE(built.code == 0);
    CHECK(built.report()["result"]["genus"] == 17);
    CHECK(built.report()["result"]["faces"] == 64);
    CHECK(json::parse(slurp(path)) == built.report()["result"]["map"]);

    const Run listed = run({"curves", "list", "--map", path});
    REQUIRE(listed.code == 0);
    CHECK(listed.report()["result"]["count"] == 48);
    for (int i = 1; i <= 6; ++i) CHECK(listed.report()["result"]["per_index"][std::to_string(i)] == 8);
    CHECK(listed.report()["config"]["map"] == path);

    const Run ax = run({"axioms", "check", "--map", path, "--strict"});
    CHECK(ax.code == 0);
    CHECK(ax.report()["result"]["all_pass"] == true);
    CHECK(ax.report()["result"]["k"] == 4);
    std::filesystem::remove(path);

    const std::string bad = temp_path("hexspine_bad.json");
    write(bad, map_to_json(coxeter_map({1, 2, 4, 2, 8, 16})));
    const Run loose = run({"axioms", "check", "--map", bad});
    CHECK(loose.code == 0);
    CHECK(loose.report()["result"]["all_pass"] == false);
    CHECK(run({"axioms", "check", "--map", bad, "--strict"}).code == 2);
    std::filesystem::remove(bad);

    write(bad, "{\"faces\": 3");
    CHECK(run({"curves", "list", "--map", bad}).error()["error"]["kind"] == "MalformedMap");
    std::filesystem::remove(bad);
}

TEST_CASE("filling subsets") {
    const json j = run({"filling", "--indices", "3,4,5,6"}).report();
    CHECK(j["result"]["size"] == 32);
    CHECK(j["result"]["filling"] == true);
    const json one = run({"filling", "--indices", "1"}).report();
    CHECK(one["result"]["filling"] == false);
    const json ids = run({"filling", "--curves", "0,1,2", "--search", "5"}).report();
    CHECK(ids["result"]["size"] == 3);
    CHECK(ids["result"].contains("search_checks"));
}

TEST_CASE("sweeps as csv and svg") {
    const Run a = run({"pants-asymptotics", "--format", "csv"});
    REQUIRE(a.code == 0);
    std::istringstream lines(a.out);
    std::string header, line;
    std::getline(lines, header);
    CHECK(header == "eps,k,cosh_L,H,h,cosh_d,omega_last");
    int rows = 0;
    while (std::getline(lines, line)) ++rows;
    CHECK(rows == 18);

    const std::string svg = temp_path("hexspine_delta.svg");
    const Run d = run({"delta", "--grid", "lin:0.5:1.0:3", "--format", "csv", "--svg", svg});
    REQUIRE(d.code == 0);
    CHECK(d.out.rfind("eps,delta,deviation,sigma_bound\n", 0) == 0);
    const std::string pic = slurp(svg);
    CHECK(pic.rfind("<svg", 0) == 0);
    CHECK(pic.find("<polyline") != std::string::npos);
    std::filesystem::remove(svg);

    const Run p = run({"pants", "--k", "4", "--grid", "0.5,1.0", "--format", "csv"});
    CHECK(p.out.rfind("eps,L,H,d,h,cosh_d,omega_1,omega_2,omega_3\n", 0) == 0);
}

TEST_CASE("pants asymptotics") {
    const json j = run({"pants-asymptotics"}).report();
    CHECK(j["result"]["within_tolerance"] == true);
    CHECK(std::abs(j["result"]["slope_cosh_L"].get<double>() + 1) <= 0.02);
    CHECK(std::abs(j["result"]["slope_cosh_d"][1].get<double>() + 3) <= 0.05);
    check_tolerances(j);
}

TEST_CASE("systoles, bracket and the Bolza crossing") {
    const json s = run({"systoles", "--preset", "gen2", "--eps", "0.7853981633974483"}).report();
    CHECK(s["result"]["minimal_count"] == 12);
    CHECK(s["result"]["minimal_on_curves"] == 6);
    CHECK(s["notes"][0].get<std::string>().find("radius 8") != std::string::npos);
    check_tolerances(s);

    const json b = run({"bracket", "--eps", "1.0", "--elide"}).report();
    CHECK(b["result"]["dimension"] == 24);
    CHECK(b["result"]["diagonal"].size() == 24);
    CHECK_FALSE(b["result"].contains("matrix"));
    check_tolerances(b);
    CHECK(run({"bracket", "--eps", "1.0"}).report()["result"]["matrix"].size() == 24);

    const json x = run({"bolza-crossing", "--tol", "1e-6"}).report();
    CHECK(std::abs(x["result"]["eps"].get<double>() - kPi / 4) < 1e-6);
    check_tolerances(x);
}

TEST_CASE("tolerance override is scoped to one run") {
    const double before = default_tolerance();
    CHECK(run({"--tolerance", "1e-7", "trig", "--eps", "1"}).report()["config"]["tolerance"] == 1e-7);
    CHECK(default_tolerance() == before);
}

TEST_CASE("reruns are byte identical") {
    for (const auto& args : std::vector<std::vector<std::string>>{
             {"systoles", "--preset", "gen2", "--eps", "1.0", "--window", "0.5"},
             {"delta", "--grid", "geom:0.004:0.0005:4"},
             {"pants", "--k", "5", "--eps", "0.3"},
             {"--threads", "2", "delta"},
         }) {
        const Run a = run(args), b = run(args);
        CHECK(a.code == 0);
        CHECK(a.out == b.out);
        check_tolerances(a.report());
    }
}
