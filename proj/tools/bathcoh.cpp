// bathcoh.cpp — command-line driver: bathcoh <command> --config <path> [--out <dir>] [--threads N]

#include <exception>
#include <iostream>
#include <string>
#include <thread>

#include "CLI11.hpp"

#include "bathcoh/commands.hpp"
#include "bathcoh/config.hpp"
#include "bathcoh/version.hpp"

int main(int argc, char** argv)
{
    CLI::App app{"bathcoh: two bosonic modes in a shared bath, exact dynamics vs master equations"};
    app.set_version_flag("--version", std::string("bathcoh ") + bathcoh::kVersion);
    app.require_subcommand(1, 1);

    std::string config_path, out_dir;
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());
    for (const char* name : bathcoh::kCommandNames) {
        auto* sub = app.add_subcommand(name, std::string("run the ") + name + " command");
        sub->add_option("--config,-c", config_path, "run configuration file")->required()->check(CLI::ExistingFile);
        sub->add_option("--out,-o", out_dir, std::string("output directory (overrides $") + bathcoh::kOutDirEnv +
                                                 " and output.dir)");
        sub->add_option("--threads,-j", threads, "worker threads")->check(CLI::PositiveNumber);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        const bathcoh::RunConfig cfg = bathcoh::load_config(config_path);
        return bathcoh::run(command, cfg, bathcoh::RunOptions{out_dir, threads}, std::cerr);
    } catch (const bathcoh::ConfigError& e) {
        std::cerr << "bathcoh: configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "bathcoh " << command << ": " << e.what() << "\n";
        return 1;
    }
}
