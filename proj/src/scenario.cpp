#include "hzreach/scenario.hpp"

#include "hzreach/encode.hpp"
#include "hzreach/errors.hpp"
#include "hzreach/io.hpp"
#include "hzreach/oracle.hpp"
#include "hzreach/set_queries.hpp"
#include "hzreach/verify.hpp"

#include <chrono>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace hzreach
{

using io::Json;
namespace fs = std::filesystem;

BoundsMode parse_mode(const std::string& s)
{
    if (s == "exact")
        return BoundsMode::Exact;
    if (s == "fast")
        return BoundsMode::Fast;
    throw FormatError("mode", "expected \"exact\" or \"fast\", got \"" + s + "\"");
}

namespace
{

const Json& require(const Json& j, const char* key)
{
    if (!j.contains(key))
        throw FormatError(key, "missing required key");
    return j[key];
}

HybridZonotope set_spec(const Json& j, const std::string& where)
{
    if (!j.is_object())
        throw FormatError(where, "expected an object");
    if (j.contains("box"))
    {
        const auto lo = io::vector_from_json(require(j["box"], "lo"), where + ".box.lo");
        const auto hi = io::vector_from_json(require(j["box"], "hi"), where + ".box.hi");
        if (lo.size() != hi.size() || (lo.array() > hi.array()).any())
            throw FormatError(where + ".box", "lo and hi must have equal length with lo <= hi");
        return HybridZonotope::box(lo, hi);
    }
    if (j.contains("union"))
    {
        const auto& parts = j["union"];
        if (!parts.is_array() || parts.empty())
            throw FormatError(where + ".union", "expected a nonempty array of sets");
        HybridZonotope U = set_spec(parts[0], where + ".union[0]");
        for (std::size_t k = 1; k < parts.size(); ++k)
            U = union_of(U, set_spec(parts[k], where + ".union[" + std::to_string(k) + "]"));
        return U;
    }
    return io::set_from_json(j);
}

ReductionPolicy policy_from_json(const Json& j)
{
    ReductionPolicy p;
    if (!j.is_object())
        throw FormatError("reduction", "expected an object");
    p.n_g = j.value("n_g", Eigen::Index{0});
    p.n_b = j.value("n_b", Eigen::Index{0});
    p.relax = j.value("relax", true);
    p.merge = j.value("merge", true);
    p.eliminate = j.value("eliminate", true);
    const auto order = j.value("relax_order", std::string("last"));
    if (order != "first" && order != "last")
        throw FormatError("reduction.relax_order", "expected \"first\" or \"last\"");
    p.order = order == "first" ? RelaxOrder::First : RelaxOrder::Last;
    const auto method = j.value("method", std::string("lp"));
    if (method != "lp" && method != "interval")
        throw FormatError("reduction.method", "expected \"lp\" or \"interval\"");
    p.method = method == "lp" ? HausdorffMethod::LpRange : HausdorffMethod::IntervalRange;
    if (p.n_g < 0 || p.n_b < 0)
        throw FormatError("reduction", "counts must be nonnegative");
    return p;
}

std::string kind_of(const std::exception& e)
{
    if (dynamic_cast<const FormatError*>(&e))
        return "format_error";
    if (dynamic_cast<const CapacityError*>(&e))
        return "capacity_error";
    if (dynamic_cast<const ShapeError*>(&e))
        return "shape_error";
    if (dynamic_cast<const EmptySetError*>(&e))
        return "empty_set";
    if (dynamic_cast<const SolverLimitError*>(&e))
        return "solver_limit";
    if (dynamic_cast<const StructuralError*>(&e))
        return "structural_error";
    if (dynamic_cast<const Json::exception*>(&e))
        return "format_error";
    return "error";
}

int report_error(const std::exception& e, std::ostream& err)
{
    Json j{{"error", kind_of(e)}, {"reason", e.what()}};
    if (const auto* f = dynamic_cast<const FormatError*>(&e))
    {
        j["path"] = f->path();
        j["reason"] = f->reason();
    }
    if (dynamic_cast<const CapacityError*>(&e))
        j["hint"] = "enable a reduction policy (reduction.n_b) or raise the capacity";
    err << j.dump() << '\n';
    return kExitError;
}

void apply_flags(Scenario& s, const RunFlags& flags)
{
    if (flags.mode)
        s.mode = *flags.mode;
    if (flags.out)
        s.output_dir = *flags.out;
    if (flags.seed)
        s.seed = *flags.seed;
    if (s.output_dir.empty())
        throw FormatError("output_dir", "no output directory in the scenario and no --out flag");
}

std::string fmt(double v)
{
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

void dump_lp(const fs::path& path, const MilpProblem& p)
{
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    write_lp_text(p, out);
}

ReachResult compute(const Scenario& s)
{
    ReachOptions opts;
    opts.mode = s.mode;
    opts.max_binaries = s.max_binaries;
    return reach_horizon(s.initial_set, s.system, s.network, s.horizon, s.reduction ? &*s.reduction : nullptr, opts);
}

// Per-step set files plus a manifest; timing goes to its own file so the rest stays byte-stable.
void write_sets(const Scenario& s, const ReachResult& r, const fs::path& scenario_path)
{
    Json steps = Json::array();
    Json timing = Json::array();
    for (std::size_t t = 0; t < r.sets.size(); ++t)
    {
        const auto name = "R_" + std::to_string(t) + ".json";
        io::save_set(s.output_dir / "sets" / name, r.sets[t]);
        const auto& L = r.log[t];
        steps.push_back(Json{{"t", t},
                             {"file", "sets/" + name},
                             {"complexity", io::complexity_to_json(L.complexity)},
                             {"before_reduction", io::complexity_to_json(L.before_reduction)},
                             {"crossings", L.crossings},
                             {"empty_branches", L.empty_branches},
                             {"reduced", L.reduced}});
        timing.push_back(Json{{"t", t}, {"seconds", L.seconds}});
    }
    Json manifest{{"scenario", scenario_path.filename().string()},
                  {"horizon", s.horizon},
                  {"mode", s.mode == BoundsMode::Exact ? "exact" : "fast"},
                  {"seed", s.seed},
                  {"steps", steps}};
    io::write_json(s.output_dir / "manifest.json", manifest);
    io::write_json(s.output_dir / "timing.json", Json{{"steps", timing}});
}

void write_polygons(const Scenario& s, const ReachResult& r)
{
    const auto& P = s.polygon;
    std::ostringstream csv;
    csv << "t,branch,vertex,x,y\n";
    for (std::size_t t = 0; t < r.sets.size(); ++t)
    {
        const auto& R = r.sets[t];
        if (P.i >= R.dim() || P.j >= R.dim() || P.i == P.j)
            throw FormatError("polygon.pair", "coordinate pair out of range");
        const auto dirs = oracle::planar_directions(R.dim(), P.directions, P.i, P.j);
        const auto branches = enumerate_branches(R, P.cap);
        for (std::size_t k = 0; k < branches.size(); ++k)
        {
            const auto H = branches[k].set.to_hybrid();
            std::vector<std::pair<double, double>> verts;
            for (const auto& d : dirs)
            {
                const auto sup = support(H, d, true);
                const std::pair<double, double> v{sup.argument(P.i), sup.argument(P.j)};
                if (verts.empty() || std::abs(v.first - verts.back().first) > 1e-9 ||
                    std::abs(v.second - verts.back().second) > 1e-9)
                    verts.push_back(v);
            }
            while (verts.size() > 1 && std::abs(verts.front().first - verts.back().first) <= 1e-9 &&
                   std::abs(verts.front().second - verts.back().second) <= 1e-9)
                verts.pop_back();
            for (std::size_t v = 0; v < verts.size(); ++v)
                csv << t << ',' << k << ',' << v << ',' << fmt(verts[v].first) << ',' << fmt(verts[v].second) << '\n';
        }
    }
    std::ofstream out(s.output_dir / "polygons.csv", std::ios::binary);
    out << csv.str();
}

void write_inclusion_check(const Scenario& s, const ReachResult& r)
{
    if (s.check_samples == 0 || s.initial_set.num_constraints() != 0)
        return;
    const auto pts = oracle::grid_points(s.initial_set, 0, s.check_samples, s.seed);
    const auto rep = oracle::grid_inclusion_check(pts, s.system, s.network, r);
    io::write_json(s.output_dir / "inclusion_check.json",
                   Json{{"checked", rep.checked}, {"violations", rep.violations}, {"max_residual", rep.max_residual}});
}

} // namespace

Scenario load_scenario(const fs::path& path)
{
    const Json j = io::read_json(path);
    try
    {
        Scenario s;
        const auto base = path.parent_path();
        const auto& sys = require(j, "system");
        s.system.A_d = io::matrix_from_json(require(sys, "A_d"), -1, -1, "system.A_d");
        s.system.B_d = io::matrix_from_json(require(sys, "B_d"), -1, -1, "system.B_d");
        try
        {
            s.system.validate();
        }
        catch (const std::exception& e)
        {
            throw FormatError("system", e.what());
        }
        const auto& net = require(j, "network");
        if (!net.is_string())
            throw FormatError("network", "expected a file path");
        s.network_path = base / net.get<std::string>();
        s.network = io::load_network(s.network_path);
        s.initial_set = set_spec(require(j, "initial_set"), "initial_set");
        if (j.contains("unsafe_set") && !j["unsafe_set"].is_null())
            s.unsafe_set = set_spec(j["unsafe_set"], "unsafe_set");
        const auto& T = require(j, "horizon");
        if (!T.is_number_integer() || T.get<long long>() < 1)
            throw FormatError("horizon", "expected an integer >= 1");
        s.horizon = T.get<std::size_t>();
        const auto& mode = require(j, "mode");
        if (!mode.is_string())
            throw FormatError("mode", "expected a string");
        s.mode = parse_mode(mode.get<std::string>());
        if (j.contains("reduction") && !j["reduction"].is_null())
            s.reduction = policy_from_json(j["reduction"]);
        if (j.contains("output_dir"))
            s.output_dir = base / j["output_dir"].get<std::string>();
        s.seed = j.value("seed", std::uint64_t{0});
        if (j.contains("polygon"))
        {
            const auto& p = j["polygon"];
            if (p.contains("pair"))
            {
                const auto pair = p["pair"].get<std::vector<Eigen::Index>>();
                if (pair.size() != 2)
                    throw FormatError("polygon.pair", "expected two coordinate indices");
                s.polygon.i = pair[0];
                s.polygon.j = pair[1];
            }
            s.polygon.directions = p.value("directions", std::size_t{64});
            s.polygon.cap = p.value("cap", std::uint64_t{4096});
        }
        s.max_binaries = j.value("max_binaries", Eigen::Index{24});
        s.check_samples = j.value("check_samples", std::size_t{0});

        const auto n = s.system.state_dim();
        if (s.initial_set.dim() != n)
            throw FormatError("initial_set", "dimension differs from the system state");
        if (s.unsafe_set && s.unsafe_set->dim() != n)
            throw FormatError("unsafe_set", "dimension differs from the system state");
        if (s.network.input_dim() != n || s.network.output_dim() != s.system.input_dim())
            throw FormatError("network", "network dimensions do not match the system");
        return s;
    }
    catch (const Json::exception& e)
    {
        throw FormatError(path.string(), e.what());
    }
}

int run_reach(const fs::path& scenario, const RunFlags& flags, std::ostream& log, std::ostream& err)
{
    try
    {
        auto s = load_scenario(scenario);
        apply_flags(s, flags);
        const auto r = compute(s);
        write_sets(s, r, scenario);
        write_polygons(s, r);
        write_inclusion_check(s, r);
        if (flags.dump_milp)
            for (std::size_t t = 0; t < r.sets.size(); ++t)
                dump_lp(s.output_dir / "milp" / ("emptiness_R_" + std::to_string(t) + ".lp"),
                        encode_emptiness(r.sets[t]).problem);
        for (const auto& L : r.log)
            log << "t=" << L.t << " n_g=" << L.complexity.n_g << " n_b=" << L.complexity.n_b
                << " n_c=" << L.complexity.n_c << " order=" << L.complexity.order << '\n';
        return kExitOk;
    }
    catch (const std::exception& e)
    {
        return report_error(e, err);
    }
}

int run_verify(const fs::path& scenario, const RunFlags& flags, std::ostream& log, std::ostream& err)
{
    try
    {
        auto s = load_scenario(scenario);
        apply_flags(s, flags);
        if (!s.unsafe_set)
            throw FormatError("unsafe_set", "verify needs an unsafe set");
        const auto r = compute(s);
        write_sets(s, r, scenario);
        if (flags.dump_milp)
            for (std::size_t t = 1; t < r.sets.size(); ++t)
                dump_lp(s.output_dir / "milp" / ("avoid_t" + std::to_string(t) + ".lp"),
                        encode_avoidance(r.sets[t], *s.unsafe_set).problem);
        const auto v = check_avoidance(r, *s.unsafe_set);
        io::write_json(s.output_dir / "verdict.json", io::verdict_to_json(v));
        for (const auto& st : v.steps)
            log << "t=" << st.t << ' ' << to_string(st.status) << " optimum=" << st.optimum << '\n';
        log << "overall " << to_string(v.overall) << '\n';
        switch (v.overall)
        {
        case StepStatus::Safe: return kExitOk;
        case StepStatus::Unsafe:
        case StepStatus::Boundary: return kExitUnsafe;
        case StepStatus::Indeterminate: return kExitIndeterminate;
        }
        return kExitIndeterminate;
    }
    catch (const std::exception& e)
    {
        return report_error(e, err);
    }
}

int run_reduce(const fs::path& set_file, Eigen::Index n_g, Eigen::Index n_b, const std::optional<fs::path>& out,
               std::ostream& log, std::ostream& err)
{
    try
    {
        const auto Z = io::load_set(set_file);
        ReductionPolicy p;
        p.n_g = n_g;
        p.n_b = n_b;
        const auto R = reduce_complexity(Z, p);
        auto target = out.value_or(set_file.parent_path() / (set_file.stem().string() + ".reduced.json"));
        io::save_set(target, R);
        auto line = [&](const char* tag, const Complexity& c) {
            log << tag << " n_g=" << c.n_g << " n_b=" << c.n_b << " n_c=" << c.n_c << " order=" << c.order << '\n';
        };
        line("before", Z.complexity());
        line("after ", R.complexity());
        return kExitOk;
    }
    catch (const std::exception& e)
    {
        return report_error(e, err);
    }
}

} // namespace hzreach
