// Command-line front end: reach, verify and reduce.

#include "hzreach/scenario.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv)
{
    CLI::App app{"Hybrid-zonotope reachability for ReLU feedback systems"};
    app.require_subcommand(1);

    std::string mode;
    std::string out;
    std::uint64_t seed = 0;
    bool dump_milp = false;
    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--mode", mode, "neuron bound computation")->check(CLI::IsMember({"exact", "fast"}));
        cmd->add_option("--out", out, "output directory");
        cmd->add_option("--seed", seed, "seed for sampling checks");
        cmd->add_flag("--dump-milp", dump_milp, "write LP-format dumps of the MILPs");
    };

    std::string scenario;
    auto* reach = app.add_subcommand("reach", "compute reachable sets");
    reach->add_option("scenario", scenario)->required();
    add_common(reach);

    auto* verify = app.add_subcommand("verify", "check unsafe-set avoidance");
    verify->add_option("scenario", scenario)->required();
    add_common(verify);

    std::string set_file;
    long long ng = 0, nb = 0;
    auto* reduce = app.add_subcommand("reduce", "reduce a set's complexity");
    reduce->add_option("set", set_file)->required();
    reduce->add_option("--ng", ng, "constraint eliminations")->check(CLI::NonNegativeNumber);
    reduce->add_option("--nb", nb, "binary generators to relax")->check(CLI::NonNegativeNumber);
    reduce->add_option("--out", out, "output set file");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        const int code = app.exit(e);
        return code == 0 ? 0 : hzreach::kExitError;
    }

    hzreach::RunFlags flags;
    if (!mode.empty())
        flags.mode = hzreach::parse_mode(mode);
    if (!out.empty())
        flags.out = out;
    if (reach->count("--seed") || verify->count("--seed"))
        flags.seed = seed;
    flags.dump_milp = dump_milp;

    if (*reach)
        return hzreach::run_reach(scenario, flags, std::cout, std::cerr);
    if (*verify)
        return hzreach::run_verify(scenario, flags, std::cout, std::cerr);
    std::optional<std::filesystem::path> target;
    if (!out.empty())
        target = out;
    return hzreach::run_reduce(set_file, ng, nb, target, std::cout, std::cerr);
}
