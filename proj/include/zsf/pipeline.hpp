#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"

#include "zsf/matcher.hpp"
#include "zsf/reconstruction.hpp"

namespace zsf {

/// Everything a pipeline run depends on. Defaults are the desk scale.
struct RunConfig {
    double x_max = 12.0;
    std::size_t n_points = 4001;
    double de = 0.05;
    /// The march runs up to this multiple of the largest smooth target.
    double e_max_factor = 1.5;
    std::size_t n_max = 20;
    std::size_t buffer = 10;
    double stage_tol = 1e-3;
    OptimizerConfig optimizer;
    std::string zeros_path = default_zeros_path();
    /// Empty means: use ZSF_OUT, then "zsf_out".
    std::string out_dir;
    ShiftRule shift_rule = ShiftRule::model;

    /// Throws ConfigError naming the first field out of range.
    void validate() const;
    void apply_paper_scale();
    MatchConfig match_config() const;
    Grid grid() const { return Grid(x_max, n_points); }
    std::filesystem::path resolved_out_dir() const;

    static std::string default_zeros_path();
    bool operator==(const RunConfig&) const = default;
};

nlohmann::json to_json(const RunConfig& c);
/// Missing keys keep their defaults; unknown keys are a ConfigError.
RunConfig config_from_json(const nlohmann::json& j);
void save_config(const RunConfig& c, const std::filesystem::path& path);
RunConfig load_config(const std::filesystem::path& path);

std::string to_string(ShiftRule rule);
ShiftRule parse_shift_rule(const std::string& s);

enum class Stage { smooth, refine, match, analyze, reconstruct, verify };
std::string to_string(Stage stage);
Stage parse_stage(const std::string& s);
const std::vector<std::string>& stage_names();

struct StageOutcome {
    Stage stage = Stage::smooth;
    bool skipped = false;
    std::vector<std::string> files;   // relative to the output directory
};

using LogFn = std::function<void(const std::string&)>;

/// Runs one stage. Outputs are written atomically and recorded with their
/// SHA-256 in manifest.json. A stage whose manifest entry matches the
/// current config, inputs and on-disk outputs is skipped unless `force`.
/// `smooth` also runs `refine`, so it may return two outcomes.
std::vector<StageOutcome> run_stage(Stage stage, const RunConfig& config, bool force = false,
                                    const LogFn& log = {});

const std::vector<std::string>& figure_ids();
/// Writes plot_<id>.csv (possibly several files for multi-panel figures)
/// from existing artifacts and returns the file names.
std::vector<std::string> emit_plot_data(const std::string& figure_id, const RunConfig& config);

}  // namespace zsf
