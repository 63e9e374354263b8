#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "support.hpp"

#include "hzreach/errors.hpp"
#include "hzreach/io.hpp"
#include "hzreach/scenario.hpp"

#include <sys/wait.h>

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

using namespace hztest;
namespace fs = std::filesystem;
using io::Json;

namespace
{
fs::path scratch(const std::string& name)
{
    const auto dir = fs::temp_directory_path() / ("hzreach_io_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

// A fixture scenario with selected keys replaced, written next to nothing else.
fs::path derived_scenario(const fs::path& dir, const std::string& base, const Json& patch)
{
    Json j = io::read_json(fixture(base));
    j["network"] = fixture(j["network"].get<std::string>()).string();
    j["output_dir"] = (dir / "out").string();
    for (auto it = patch.begin(); it != patch.end(); ++it)
        j[it.key()] = it.value();
    const auto path = dir / "scenario.json";
    io::write_json(path, j);
    return path;
}

int run_cli(const std::string& args, const fs::path& dir)
{
    const std::string cmd = std::string(HZ_CLI) + " " + args + " > " + (dir / "stdout.txt").string() + " 2> " +
                            (dir / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    REQUIRE(WIFEXITED(status));
    return WEXITSTATUS(status);
}

struct CsvRow
{
    std::size_t t, branch, vertex;
    double x, y;
};

std::vector<CsvRow> read_polygons(const fs::path& p)
{
    std::ifstream in(p);
    std::string line;
    std::getline(in, line);
    REQUIRE(line == "t,branch,vertex,x,y");
    std::vector<CsvRow> rows;
    while (std::getline(in, line))
    {
        CsvRow r{};
        char c = 0;
        std::istringstream ls(line);
        ls >> r.t >> c >> r.branch >> c >> r.vertex >> c >> r.x >> c >> r.y;
        REQUIRE(!ls.fail());
        rows.push_back(r);
    }
    return rows;
}

HybridZonotope awkward_set()
{
    Vector c(2);
    c << 0.1, 1.0 / 3.0;
    Matrix Gc(2, 3);
    Gc << 1e-300, -2.5e-310, std::nextafter(1.0, 2.0), //
        std::numeric_limits<double>::max() / 4, -0.0, 7.0 / 9.0;
    Matrix Gb(2, 1);
    Gb << std::sqrt(2.0), -std::acos(-1.0);
    Matrix Ac(1, 3);
    Ac << 0.3, 0.6, -0.9;
    Matrix Ab(1, 1);
    Ab << 1e-17;
    return HybridZonotope(c, Gc, Gb, Ac, Ab, Vector::Constant(1, 0.7));
}
} // namespace

TEST_CASE("set JSON round trip is bit exact")
{
    const auto Z = awkward_set();
    const auto text = io::set_to_json(Z).dump();
    const auto back = io::set_from_json(Json::parse(text));
    CHECK(back.same_representation(Z));
    const auto dir = scratch("roundtrip");
    io::save_set(dir / "z.json", Z);
    CHECK(io::load_set(dir / "z.json").same_representation(Z));
    // writing the reloaded set gives the same bytes
    io::save_set(dir / "z2.json", io::load_set(dir / "z.json"));
    CHECK(slurp(dir / "z.json") == slurp(dir / "z2.json"));

    std::mt19937_64 rng(9);
    for (int k = 0; k < 50; ++k)
    {
        const auto R = random_hz(rng, 3, 4, 2, 2);
        CHECK(io::set_from_json(Json::parse(io::set_to_json(R).dump())).same_representation(R));
    }
}

TEST_CASE("absent set keys mean empty blocks")
{
    const auto P = io::set_from_json(Json::parse(R"({"c": [1, 2]})"));
    CHECK(P.dim() == 2);
    CHECK(P.num_continuous() == 0);
    CHECK(P.num_binary() == 0);
    CHECK(P.num_constraints() == 0);
    const auto Z = io::set_from_json(Json::parse(R"({"c": [0], "Gc": [[1, 2]]})"));
    CHECK(Z.is_zonotope());
    CHECK(Z.num_continuous() == 2);
    const auto C = io::set_from_json(Json::parse(R"({"c": [0], "Gc": [[1, 2]], "Ac": [[1, 1]], "b": [0.5]})"));
    CHECK(C.num_constraints() == 1);
    CHECK(C.Ab().rows() == 1);
    CHECK(C.Ab().cols() == 0);
    CHECK(io::set_to_json(Z).contains("Gb") == false);
}

TEST_CASE("malformed JSON is a format error")
{
    CHECK_THROWS_AS(io::set_from_json(Json::parse(R"({"c": [0, 1], "Gc": [[1, 2], [3]]})")), FormatError);
    CHECK_THROWS_AS(io::set_from_json(Json::parse(R"({"c": ["a"]})")), FormatError);
    CHECK_THROWS_AS(io::set_from_json(Json::parse(R"({"Gc": [[1]]})")), FormatError);
    CHECK_THROWS_AS(io::network_from_json(Json::parse(R"({"layers": [{"W": [[1]]}]})")), FormatError);
    CHECK_THROWS_AS(io::load_set("/nonexistent/set.json"), FormatError);
}

TEST_CASE("network JSON round trip")
{
    const auto net = di_network();
    const auto back = io::network_from_json(Json::parse(io::network_to_json(net).dump()));
    REQUIRE(back.num_layers() == net.num_layers());
    for (std::size_t k = 0; k < net.num_layers(); ++k)
    {
        CHECK(back.layers()[k].W == net.layers()[k].W);
        CHECK(back.layers()[k].v == net.layers()[k].v);
    }
}

TEST_CASE("scenario loading")
{
    const auto s = load_scenario(fixture("double_integrator.json"));
    CHECK(s.horizon == 2);
    CHECK(s.mode == BoundsMode::Exact);
    CHECK(s.initial_set.same_representation(di_initial_set()));
    CHECK_FALSE(s.unsafe_set.has_value());
    CHECK(s.system.A_d == di_system().A_d);
    const auto r = load_scenario(fixture("di_reduced.json"));
    REQUIRE(r.reduction.has_value());
    CHECK(r.reduction->n_g == 4);
    CHECK(r.reduction->n_b == 2);
    CHECK(r.reduction->order == RelaxOrder::Last);

    const auto dir = scratch("scenario");
    Json j = io::read_json(fixture("double_integrator.json"));
    j.erase("horizon");
    io::write_json(dir / "no_t.json", j);
    CHECK_THROWS_AS(load_scenario(dir / "no_t.json"), FormatError);
    j = io::read_json(fixture("double_integrator.json"));
    j.erase("mode");
    io::write_json(dir / "no_mode.json", j);
    CHECK_THROWS_AS(load_scenario(dir / "no_mode.json"), FormatError);
    CHECK(parse_mode("fast") == BoundsMode::Fast);
    CHECK_THROWS_AS(parse_mode("slow"), FormatError);
}

TEST_CASE("reach driver on the double-integrator scenario")
{
    const auto dir = scratch("reach");
    const auto path = derived_scenario(dir, "double_integrator.json", Json::object());
    std::ostringstream log, err;
    REQUIRE(run_reach(path, {}, log, err) == kExitOk);
    CHECK(err.str().empty());
    const auto out = dir / "out";
    const auto expected = reach_horizon(di_initial_set(), di_system(), di_network(), 2, nullptr);
    for (std::size_t t = 0; t <= 2; ++t)
    {
        const auto f = out / "sets" / ("R_" + std::to_string(t) + ".json");
        REQUIRE(fs::exists(f));
        CHECK(io::load_set(f).same_representation(expected.sets[t]));
    }
    CHECK_FALSE(fs::exists(out / "sets" / "R_3.json"));

    const auto manifest = io::read_json(out / "manifest.json");
    REQUIRE(manifest["steps"].size() == 3);
    CHECK(manifest["steps"][1]["complexity"]["n_b"] == expected.sets[1].num_binary());
    CHECK(manifest["steps"][2]["complexity"]["n_g"] == expected.sets[2].num_continuous());
    CHECK(manifest["steps"][2]["file"] == "sets/R_2.json");
    CHECK_FALSE(manifest.dump().find("seconds") != std::string::npos);
    CHECK(io::read_json(out / "timing.json")["steps"].size() == 3);
    CHECK(log.str().find("t=2") != std::string::npos);

    const auto rows = read_polygons(out / "polygons.csv");
    std::size_t seen[3] = {0, 0, 0};
    for (const auto& r : rows)
    {
        REQUIRE(r.t <= 2);
        ++seen[r.t];
        if (r.t < 2)
            CHECK(contains_point(expected.sets[r.t], (Vector(2) << r.x, r.y).finished()));
    }
    for (auto n : seen)
        CHECK(n >= 3);
    // one polygon per feasible branch at t = 0
    std::size_t b0 = 0;
    for (const auto& r : rows)
        if (r.t == 0)
            b0 = std::max(b0, r.branch + 1);
    CHECK(b0 == 2);
}

TEST_CASE("polygons of a pure linear step cover the mapped initial boxes")
{
    const auto dir = scratch("linear");
    Json sys = io::read_json(fixture("double_integrator.json"))["system"];
    sys["B_d"] = Json::array({Json::array({0.0}), Json::array({0.0})});
    const auto path = derived_scenario(dir, "double_integrator.json", Json{{"system", sys}, {"horizon", 1}});
    std::ostringstream log, err;
    REQUIRE(run_reach(path, {}, log, err) == kExitOk);
    const auto rows = read_polygons(dir / "out" / "polygons.csv");

    // corners of the two initial boxes mapped by A_d
    const Matrix A = di_system().A_d;
    std::vector<std::vector<Vector>> images;
    for (double s : {-1.0, 1.0})
    {
        std::vector<Vector> corners;
        for (double dx : {-0.2, 0.2})
            for (double dv : {-0.2, 0.2})
                corners.push_back(A * (Vector(2) << 2.5 + 0.25 * s + dx, dv).finished());
        images.push_back(corners);
    }
    std::vector<std::vector<Vector>> branches;
    for (const auto& r : rows)
    {
        if (r.t != 1)
            continue;
        if (branches.size() <= r.branch)
            branches.resize(r.branch + 1);
        branches[r.branch].push_back((Vector(2) << r.x, r.y).finished());
    }
    // The controller still splits X0 by activation pattern, so pieces may outnumber the two boxes;
    // their union is the mapped set.
    REQUIRE(branches.size() >= 2);
    const auto image = affine_map(di_initial_set(), A);
    for (const auto& poly : branches)
        for (const auto& v : poly)
            CHECK(contains_point(image, v));
    for (const auto& img : images)
        for (const auto& corner : img)
        {
            bool found = false;
            for (const auto& poly : branches)
                for (const auto& v : poly)
                    found = found || (v - corner).cwiseAbs().maxCoeff() <= 1e-9;
            CHECK(found);
        }
}

TEST_CASE("invalid network file gives exit 2 with a path and reason")
{
    const auto dir = scratch("badnet");
    {
        std::ofstream bad(dir / "net.json");
        bad << R"({"layers": [{"W": [[1, 2], [3]], "v": [0, 0]}]})";
    }
    Json j = io::read_json(fixture("double_integrator.json"));
    j["network"] = "net.json";
    j["output_dir"] = "out";
    io::write_json(dir / "scenario.json", j);

    std::ostringstream log, err;
    CHECK(run_reach(dir / "scenario.json", {}, log, err) == kExitError);
    const auto report = Json::parse(err.str());
    CHECK(report["error"] == "format_error");
    CHECK(report["path"].get<std::string>().find("net.json") != std::string::npos);
    CHECK_FALSE(report["reason"].get<std::string>().empty());

    CHECK(run_cli("reach " + (dir / "scenario.json").string(), dir) == 2);
    const auto cli_report = Json::parse(slurp(dir / "stderr.txt"));
    CHECK(cli_report["path"].get<std::string>().find("net.json") != std::string::npos);

    // missing network file
    j["network"] = "absent.json";
    io::write_json(dir / "scenario.json", j);
    CHECK(run_cli("reach " + (dir / "scenario.json").string(), dir) == 2);
    CHECK(Json::parse(slurp(dir / "stderr.txt"))["reason"] == "cannot open file");
}

TEST_CASE("capacity errors suggest reduction")
{
    const auto dir = scratch("capacity");
    const auto path = derived_scenario(dir, "double_integrator.json", Json{{"max_binaries", 2}});
    std::ostringstream log, err;
    CHECK(run_reach(path, {}, log, err) == kExitError);
    const auto report = Json::parse(err.str());
    CHECK(report["error"] == "capacity_error");
    CHECK(report.contains("hint"));
}

TEST_CASE("verify driver exit codes")
{
    std::ostringstream log, err;
    {
        const auto dir = scratch("far");
        const auto path = derived_scenario(dir, "di_far_unsafe.json", Json::object());
        CHECK(run_verify(path, {}, log, err) == kExitOk);
        CHECK(io::read_json(dir / "out" / "verdict.json")["overall"] == "SAFE");
    }
    {
        const auto dir = scratch("star_safe");
        const auto path = derived_scenario(dir, "di_star_unsafe.json", Json::object());
        CHECK(run_verify(path, {}, log, err) == kExitOk);
    }
    {
        const auto dir = scratch("star_hit");
        const auto path = derived_scenario(dir, "di_star_hit.json", Json::object());
        CHECK(run_verify(path, {}, log, err) == kExitUnsafe);
        const auto v = io::read_json(dir / "out" / "verdict.json");
        CHECK(v["overall"] == "UNSAFE");
        bool witness = false;
        for (const auto& s : v["steps"])
            if (s["status"] != "SAFE")
            {
                REQUIRE(s.contains("witness"));
                const auto w = io::vector_from_json(s["witness"]);
                const auto O = load_scenario(path).unsafe_set.value();
                CHECK(contains_point(O, w));
                witness = true;
            }
        CHECK(witness);
    }
    {
        // unsafe set = the one-step image of X0
        const auto dir = scratch("image");
        const auto R1 = closed_loop_step(di_initial_set(), di_system(), di_network(), BoundsMode::Exact);
        const auto path = derived_scenario(dir, "double_integrator.json", Json{{"unsafe_set", io::set_to_json(R1)}});
        CHECK(run_verify(path, {}, log, err) == kExitUnsafe);
        const auto v = io::read_json(dir / "out" / "verdict.json");
        REQUIRE(v["steps"][0].contains("witness"));
        CHECK(contains_point(R1, io::vector_from_json(v["steps"][0]["witness"])));
        CHECK(run_cli("verify " + path.string(), dir) == 3);
    }
    {
        // verify without an unsafe set
        const auto dir = scratch("no_unsafe");
        const auto path = derived_scenario(dir, "double_integrator.json", Json::object());
        std::ostringstream e2;
        CHECK(run_verify(path, {}, log, e2) == kExitError);
        CHECK(Json::parse(e2.str())["path"] == "unsafe_set");
    }
}

TEST_CASE("reduce driver")
{
    const auto dir = scratch("reduce");
    const auto R1 = closed_loop_step(di_initial_set(), di_system(), di_network(), BoundsMode::Exact);
    io::save_set(dir / "R_1.json", R1);
    std::ostringstream log, err;
    REQUIRE(run_reduce(dir / "R_1.json", 4, 2, std::nullopt, log, err) == kExitOk);
    const auto out = dir / "R_1.reduced.json";
    REQUIRE(fs::exists(out));
    const auto Z = io::load_set(out);
    CHECK(Z.num_binary() == R1.num_binary() - 2);
    CHECK(Z.num_constraints() == R1.num_constraints() - 4);
    CHECK(count_outside(R1, Z, 300, 5) == 0);
    CHECK(log.str().find("before n_g=" + std::to_string(R1.num_continuous())) != std::string::npos);
    CHECK(log.str().find("after ") != std::string::npos);

    CHECK(run_cli("reduce " + (dir / "R_1.json").string() + " --ng 0 --nb 1 --out " + (dir / "nb1.json").string(),
                  dir) == 0);
    CHECK(io::load_set(dir / "nb1.json").num_binary() == R1.num_binary() - 1);
    CHECK(run_cli("reduce " + (dir / "R_1.json").string() + " --nb 9", dir) == 2);
    CHECK(run_cli("reduce " + (dir / "R_1.json").string() + " --ng -1", dir) == 2);
}

TEST_CASE("command-line parsing errors")
{
    const auto dir = scratch("cli");
    CHECK(run_cli("", dir) == 2);
    CHECK(run_cli("frobnicate", dir) == 2);
    CHECK(run_cli("reach " + fixture("double_integrator.json").string() + " --mode slow", dir) == 2);
    CHECK(run_cli("reach --help", dir) == 0);
}

TEST_CASE("repeated runs give byte-identical artifacts")
{
    const auto a = scratch("det_a"), b = scratch("det_b");
    const auto sa = derived_scenario(a, "di_star_hit.json", Json::object());
    const auto sb = derived_scenario(b, "di_star_hit.json", Json::object());
    CHECK(run_cli("verify " + sa.string() + " --seed 11 --dump-milp", a) == 3);
    CHECK(run_cli("verify " + sb.string() + " --seed 11 --dump-milp", b) == 3);
    CHECK(run_cli("reach " + sa.string() + " --seed 11", a) == 0);
    CHECK(run_cli("reach " + sb.string() + " --seed 11", b) == 0);
    for (const char* f : {"sets/R_0.json", "sets/R_1.json", "sets/R_2.json", "manifest.json", "polygons.csv",
                          "verdict.json", "milp/avoid_t1.lp", "milp/avoid_t2.lp"})
    {
        CAPTURE(f);
        REQUIRE(fs::exists(a / "out" / f));
        CHECK(slurp(a / "out" / f) == slurp(b / "out" / f));
    }
}
