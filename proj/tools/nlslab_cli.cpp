// nlslab command line: one subcommand per experiment.
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nlslab/harness.hpp"

int main(int argc, char** argv) {
    CLI::App app{"nlslab: cubic NLS experiments on the torus"};
    app.require_subcommand(0, 1);
    std::string config_path, out_dir;
    std::uint64_t seed = 0;
    std::vector<std::string> sets;
    bool list = false;
    app.add_flag("--list", list, "list experiments and exit");

    for (const auto& name : nlslab::experiment_names()) {
        auto* sub = app.add_subcommand(name, "run the " + name + " experiment");
        sub->add_option("--config", config_path, "configuration file (key = value)")->check(CLI::ExistingFile);
        sub->add_option("--seed", seed, "override the ensemble seed");
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--set", sets, "override a field, KEY=VALUE in config syntax");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return nlslab::exit_config;
    }

    if (list || app.get_subcommands().empty()) {
        for (const auto& n : nlslab::experiment_names()) std::cout << n << "\n";
        return list ? nlslab::exit_pass : nlslab::exit_config;
    }
    const auto* sub = app.get_subcommands().front();
    try {
        nlslab::Config cfg = config_path.empty() ? nlslab::Config{} : nlslab::Config::load(config_path);
        if (cfg.has("experiment") && cfg.string("experiment") != sub->get_name())
            throw nlslab::ConfigError("config is for '" + cfg.string("experiment") + "', not '" + sub->get_name() + "'",
                                      "experiment");
        cfg.set("experiment", "\"" + sub->get_name() + "\"");
        if (sub->count("--seed")) cfg.set("seed", std::to_string(seed));
        if (sub->count("--out")) cfg.set("output.dir", "\"" + out_dir + "\"");
        for (const auto& kv : sets) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos) throw nlslab::ConfigError("--set expects KEY=VALUE, got '" + kv + "'");
            cfg.set(nlslab::detail::trim(kv.substr(0, eq)), nlslab::detail::trim(kv.substr(eq + 1)));
        }
        return nlslab::run(cfg, std::cout);
    } catch (const nlslab::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return nlslab::exit_config;
    }
}
