// Command-line driver: modes | solve | verify | sweep.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "sgf/io/commands.hpp"

namespace {

sgf::io::RunConfig load(const std::string& path, const std::optional<std::string>& out,
                        const std::optional<std::uint64_t>& seed) {
    std::string text;
    if (!path.empty()) {
        std::ifstream in(path);
        if (!in) {
            throw std::runtime_error("cannot open config " + path);
        }
        std::ostringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }
    sgf::io::RunConfig c = sgf::io::parse_config(text);
    if (out) c.output_dir = *out;
    if (seed) c.seed = *seed;
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Green-function pressure and velocity for the linear Stokes system on a box"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::string> out_dir;
    int threads = 1;
    std::optional<std::uint64_t> seed;
    app.add_option("--config", config_path, "key = value config file (defaults if omitted)")->check(CLI::ExistingFile);
    app.add_option("--out", out_dir, "output directory (overrides output.dir)");
    app.add_option("--threads", threads, "worker threads; results do not depend on it")->check(CLI::PositiveNumber);
    app.add_option("--seed", seed, "overrides forcing.seed");

    auto* modes = app.add_subcommand("modes", "print the eigenmodes of [1,N]^3 by eigenvalue");
    auto* solve = app.add_subcommand("solve", "pressure, gradient and velocity snapshots plus norms");
    auto* verify = app.add_subcommand("verify", "run the verification suites");
    auto* sweep = app.add_subcommand("sweep", "three-rung resolution ladder for the configured forcing");
    for (auto* sub : {modes, solve, verify, sweep}) {
        sub->fallthrough();
    }

    CLI11_PARSE(app, argc, argv);

    try {
        sgf::set_thread_count(threads);
        const sgf::io::RunConfig c = load(config_path, out_dir, seed);
        if (modes->parsed()) {
            sgf::io::cmd_modes(c, std::cout);
            return 0;
        }
        if (solve->parsed()) return sgf::io::cmd_solve(c, std::cout);
        if (verify->parsed()) return sgf::io::cmd_verify(c, std::cout);
        if (sweep->parsed()) return sgf::io::cmd_sweep(c, std::cout);
    } catch (const sgf::io::ConfigError& e) {
        std::cerr << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 2;
}
