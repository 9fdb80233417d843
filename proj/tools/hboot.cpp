// hboot.cpp - command-line front end
#include "hboot/cli.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>

int main(int argc, char** argv) {
    using namespace hboot::cli;

    CLI::App app{"Hierarchical bootstrap: variance model, sample-size optimizer and simulator"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string sizes_text;
    std::vector<std::string> cost_specs;
    std::string format = "human";
    std::string method = "collapsed";
    std::string leaf_source = "synthetic";
    std::int64_t budget = 0;
    std::int64_t cap = 0;

    const std::map<std::string, Command> commands{{"validate", Command::validate},
                                                   {"variance", Command::variance},
                                                   {"optimize", Command::optimize},
                                                   {"simulate", Command::simulate},
                                                   {"oracle-check", Command::oracle_check}};
    const std::map<std::string, std::string> blurbs{
        {"validate", "Check a tree document and list rule violations"},
        {"variance", "Analytic variance of the estimator for --sizes"},
        {"optimize", "Optimal sample sizes under --budget"},
        {"simulate", "Monte Carlo replication of the hierarchical bootstrap"},
        {"oracle-check", "Compare the DP solvers with exhaustive search"}};

    for (const auto& [name, cmd] : commands) {
        CLI::App* sub = app.add_subcommand(name, blurbs.at(name));
        sub->add_option("--tree", cfg.tree_path, "Tree document (JSON)")->required()->check(CLI::ExistingFile);
        sub->add_option("--format", format, "Output format")
            ->check(CLI::IsMember({"human", "json", "json-like"}));
        sub->add_option("--costs,--cost", cost_specs, "Per-vertex cost overrides, e.g. 3=2,1=4");
        if (cmd == Command::variance || cmd == Command::optimize || cmd == Command::oracle_check)
            sub->add_option("--budget", budget, "Budget b")->check(CLI::NonNegativeNumber)->required(cmd != Command::variance);
        if (cmd == Command::variance || cmd == Command::simulate)
            sub->add_option("--sizes", sizes_text, "Sample sizes n_1,...,n_k")->required();
        if (cmd == Command::optimize || cmd == Command::oracle_check) {
            sub->add_option("--alpha-grid", cfg.alpha_grid, "Alpha grid points for the grid DP")
                ->check(CLI::Range(2, 100001));
        }
        if (cmd == Command::optimize)
            sub->add_option("--method", method, "Solver")->check(CLI::IsMember({"collapsed", "grid"}));
        if (cmd == Command::oracle_check)
            sub->add_option("--cap", cap, "Upper bound on each n_v in the exhaustive search")->check(CLI::PositiveNumber);
        if (cmd == Command::simulate) {
            sub->add_option("--replications", cfg.replications, "Number of replicates R")->check(CLI::PositiveNumber);
            sub->add_option("--seed", cfg.seed, "Random seed");
            sub->add_option("--leaf-source", leaf_source, "synthetic: fresh leaf draws per replicate; fixed: data files")
                ->check(CLI::IsMember({"synthetic", "fixed"}));
            sub->add_flag("--emit-values", cfg.emit_values, "Include every replicate value in the output");
            sub->add_option("--threads", cfg.threads, "Worker threads (0 = all cores)");
        }
        sub->callback([&cfg, cmd = cmd] { cfg.command = cmd; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_error;
    }

    try {
        for (auto* sub : app.get_subcommands()) {
            if (auto* o = sub->get_option_no_throw("--budget"); o && o->count()) cfg.budget = budget;
            if (auto* o = sub->get_option_no_throw("--cap"); o && o->count()) cfg.oracle_cap = cap;
        }
        if (!sizes_text.empty()) cfg.sizes = parse_sizes(sizes_text);
        for (const auto& spec : cost_specs) {
            auto parsed = parse_cost_spec(spec);
            cfg.cost_overrides.insert(cfg.cost_overrides.end(), parsed.begin(), parsed.end());
        }
    } catch (const hboot::Error& e) {
        std::cerr << "error [cli]: " << e.what() << '\n';
        return exit_error;
    }
    cfg.format = format == "human" ? OutputFormat::human : OutputFormat::json;
    cfg.method = method == "grid" ? Method::grid : Method::collapsed;
    cfg.leaf_source = leaf_source == "fixed" ? hboot::LeafSource::fixed : hboot::LeafSource::synthetic;

    return run(cfg, std::cout, std::cerr);
}
