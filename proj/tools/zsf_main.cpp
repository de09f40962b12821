#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "zsf/error.hpp"
#include "zsf/pipeline.hpp"

namespace {

enum Exit { ok = 0, usage = 2, data = 3, numerical = 4 };

struct Overrides {
    std::string config_path;
    std::optional<std::size_t> n_max;
    std::optional<std::size_t> grid_points;
    std::optional<double> de;
    std::optional<std::string> zeros;
    std::optional<std::string> out;
    std::optional<std::string> shift_rule;
    bool paper_scale = false;
    bool force = false;
    bool quiet = false;
};

zsf::RunConfig resolve(const Overrides& o) {
    zsf::RunConfig c;
    if (!o.config_path.empty()) c = zsf::load_config(o.config_path);
    if (o.paper_scale) c.apply_paper_scale();
    if (o.n_max) c.n_max = *o.n_max;
    if (o.grid_points) c.n_points = *o.grid_points;
    if (o.de) c.de = *o.de;
    if (o.zeros) c.zeros_path = *o.zeros;
    if (o.out) c.out_dir = *o.out;
    if (o.shift_rule) c.shift_rule = zsf::parse_shift_rule(*o.shift_rule);
    c.validate();
    return c;
}

void report(const std::vector<zsf::StageOutcome>& outcomes) {
    for (const auto& o : outcomes) {
        std::printf("%s: %s (%zu files)\n", zsf::to_string(o.stage).c_str(),
                    o.skipped ? "skipped, up to date" : "done", o.files.size());
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Successive inverse-spectral fitting of Riemann zeros", "zsf"};
    app.require_subcommand(1);
    app.fallthrough();

    Overrides o;
    app.add_option("--config", o.config_path, "JSON run configuration")->check(CLI::ExistingFile);
    app.add_option("--n-max", o.n_max, "Number of true zeros to match");
    app.add_option("--grid-points", o.grid_points, "Grid nodes (odd)");
    app.add_option("--de", o.de, "Energy step of the WKB march");
    app.add_option("--zeros", o.zeros, "Zeros file");
    app.add_option("--out", o.out, "Output directory (default: $ZSF_OUT, then ./zsf_out)");
    app.add_option("--shift-rule", o.shift_rule, "Phase shift rule for reconstruction")
        ->check(CLI::IsMember({"fitted", "model"}));
    app.add_flag("--paper-scale", o.paper_scale, "20001 grid points and 50 zeros");
    app.add_flag("--force", o.force, "Rerun stages even if their outputs are current");
    app.add_flag("-q,--quiet", o.quiet, "No progress messages on stderr");

    std::optional<zsf::Stage> stage;
    bool all = false;
    for (const auto& name : zsf::stage_names()) {
        app.add_subcommand(name, "Run the " + name + " stage")->callback([&stage, name] {
            stage = zsf::parse_stage(name);
        });
    }
    app.add_subcommand("all", "Run every stage in order")->callback([&all] { all = true; });
    std::string figure;
    auto* plot = app.add_subcommand("plot", "Write plot-ready CSV for one figure");
    plot->add_option("figure", figure, "Figure id (fig1 .. fig19)")->required();
    std::string save_path;
    auto* cfg = app.add_subcommand("config", "Write the resolved configuration as JSON");
    cfg->add_option("path", save_path, "Destination file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return e.get_exit_code() == 0 ? code : Exit::usage;
    }

    try {
        const auto config = resolve(o);
        zsf::LogFn log;
        if (!o.quiet) log = [](const std::string& m) { std::cerr << m << '\n'; };
        if (stage) {
            report(zsf::run_stage(*stage, config, o.force, log));
        } else if (all) {
            for (auto s : {zsf::Stage::smooth, zsf::Stage::match, zsf::Stage::analyze,
                           zsf::Stage::reconstruct, zsf::Stage::verify}) {
                report(zsf::run_stage(s, config, o.force, log));
            }
        } else if (plot->parsed()) {
            for (const auto& f : zsf::emit_plot_data(figure, config)) std::printf("%s\n", f.c_str());
        } else if (cfg->parsed()) {
            zsf::save_config(config, save_path);
        }
    } catch (const zsf::ConfigError& e) {
        std::cerr << "zsf: " << e.what() << '\n';
        return Exit::usage;
    } catch (const zsf::DataError& e) {
        std::cerr << "zsf: " << e.what() << '\n';
        return Exit::data;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "zsf: " << e.what() << '\n';
        return Exit::data;
    } catch (const std::exception& e) {
        std::cerr << "zsf: " << e.what() << '\n';
        return Exit::numerical;
    }
    return Exit::ok;
}
