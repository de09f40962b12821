#include "zsf/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <optional>
#include <set>

#include "zsf/analysis.hpp"
#include "zsf/error.hpp"
#include "zsf/io.hpp"
#include "zsf/wkb.hpp"

namespace zsf {

namespace fs = std::filesystem;
using nlohmann::json;

// ---------------------------------------------------------------- config

std::string RunConfig::default_zeros_path() {
#ifdef ZSF_DATA_DIR
    return std::string(ZSF_DATA_DIR) + "/riemann_zeros_100.txt";
#else
    return "data/riemann_zeros_100.txt";
#endif
}

void RunConfig::validate() const {
    auto require = [](bool ok, const std::string& what) {
        if (!ok) throw ConfigError("invalid configuration: " + what);
    };
    require(std::isfinite(x_max) && x_max > 0.0 && x_max <= 1e3, "x_max must be in (0, 1000]");
    require(n_points >= 3 && n_points % 2 == 1 && n_points <= 2000001,
            "n_points must be odd and in [3, 2000001]");
    require(std::isfinite(de) && de > 0.0 && de <= 1.0, "de must be in (0, 1]");
    require(e_max_factor >= 1.0 && e_max_factor <= 10.0, "e_max_factor must be in [1, 10]");
    require(n_max >= 1 && n_max <= 10000, "n_max must be in [1, 10000]");
    require(buffer >= 1 && buffer <= 10000, "buffer must be in [1, 10000]");
    require(stage_tol > 0.0 && stage_tol < 1.0, "stage_tol must be in (0, 1)");
    require(optimizer.tol_abs > 0.0, "tol_abs must be positive");
    require(optimizer.tol_rel > 0.0 && optimizer.tol_rel < 1.0, "tol_rel must be in (0, 1)");
    require(optimizer.max_iter >= 1, "max_iter must be at least 1");
    require(optimizer.n_restart >= 1, "n_restart must be at least 1");
    require(optimizer.armijo_c > 0.0 && optimizer.armijo_c < 0.5, "armijo_c must be in (0, 0.5)");
    require(optimizer.max_backtracks >= 1, "max_backtracks must be at least 1");
    require(optimizer.gradient_check_every >= 0, "gradient_check_every must be >= 0");
    require(!zeros_path.empty(), "zeros_path must not be empty");
}

void RunConfig::apply_paper_scale() {
    n_points = 20001;
    n_max = 50;
}

MatchConfig RunConfig::match_config() const {
    MatchConfig mc;
    mc.n_max = n_max;
    mc.buffer = buffer;
    mc.stage_tol = stage_tol;
    mc.optimizer = optimizer;
    return mc;
}

fs::path RunConfig::resolved_out_dir() const {
    if (!out_dir.empty()) return out_dir;
    if (const char* env = std::getenv("ZSF_OUT"); env && *env) return env;
    return "zsf_out";
}

std::string to_string(ShiftRule rule) { return rule == ShiftRule::model ? "model" : "fitted"; }

ShiftRule parse_shift_rule(const std::string& s) {
    if (s == "model") return ShiftRule::model;
    if (s == "fitted") return ShiftRule::fitted;
    throw ConfigError("unknown shift rule '" + s + "' (expected fitted or model)");
}

json to_json(const RunConfig& c) {
    return {
        {"x_max", c.x_max},
        {"n_points", c.n_points},
        {"de", c.de},
        {"e_max_factor", c.e_max_factor},
        {"n_max", c.n_max},
        {"buffer", c.buffer},
        {"stage_tol", c.stage_tol},
        {"optimizer",
         {{"tol_abs", c.optimizer.tol_abs},
          {"tol_rel", c.optimizer.tol_rel},
          {"max_iter", c.optimizer.max_iter},
          {"n_restart", c.optimizer.n_restart},
          {"armijo_c", c.optimizer.armijo_c},
          {"max_backtracks", c.optimizer.max_backtracks},
          {"gradient_check_every", c.optimizer.gradient_check_every}}},
        {"zeros_path", c.zeros_path},
        {"out_dir", c.out_dir},
        {"shift_rule", to_string(c.shift_rule)},
    };
}

namespace {

template <class T>
void read_field(const json& j, const char* key, T& out) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config field '") + key + "': " + e.what());
    }
}

void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& where) {
    for (const auto& [key, _] : j.items()) {
        if (!known.count(key)) throw ConfigError("unknown config key '" + where + key + "'");
    }
}

}  // namespace

RunConfig config_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    reject_unknown(j,
                   {"x_max", "n_points", "de", "e_max_factor", "n_max", "buffer", "stage_tol",
                    "optimizer", "zeros_path", "out_dir", "shift_rule"},
                   "");
    RunConfig c;
    read_field(j, "x_max", c.x_max);
    read_field(j, "n_points", c.n_points);
    read_field(j, "de", c.de);
    read_field(j, "e_max_factor", c.e_max_factor);
    read_field(j, "n_max", c.n_max);
    read_field(j, "buffer", c.buffer);
    read_field(j, "stage_tol", c.stage_tol);
    read_field(j, "zeros_path", c.zeros_path);
    read_field(j, "out_dir", c.out_dir);
    if (j.contains("shift_rule")) {
        std::string rule;
        read_field(j, "shift_rule", rule);
        c.shift_rule = parse_shift_rule(rule);
    }
    if (j.contains("optimizer")) {
        const auto& o = j.at("optimizer");
        if (!o.is_object()) throw ConfigError("config field 'optimizer' must be an object");
        reject_unknown(o,
                       {"tol_abs", "tol_rel", "max_iter", "n_restart", "armijo_c",
                        "max_backtracks", "gradient_check_every"},
                       "optimizer.");
        read_field(o, "tol_abs", c.optimizer.tol_abs);
        read_field(o, "tol_rel", c.optimizer.tol_rel);
        read_field(o, "max_iter", c.optimizer.max_iter);
        read_field(o, "n_restart", c.optimizer.n_restart);
        read_field(o, "armijo_c", c.optimizer.armijo_c);
        read_field(o, "max_backtracks", c.optimizer.max_backtracks);
        read_field(o, "gradient_check_every", c.optimizer.gradient_check_every);
    }
    c.validate();
    return c;
}

void save_config(const RunConfig& c, const fs::path& path) {
    write_file_atomic(path, to_json(c).dump(2) + "\n");
}

RunConfig load_config(const fs::path& path) {
    const std::string text = read_file(path);
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    return config_from_json(j);
}

// ---------------------------------------------------------------- stages

const std::vector<std::string>& stage_names() {
    static const std::vector<std::string> names{"smooth",  "refine",      "match",
                                                "analyze", "reconstruct", "verify"};
    return names;
}

std::string to_string(Stage stage) { return stage_names()[static_cast<std::size_t>(stage)]; }

Stage parse_stage(const std::string& s) {
    const auto& names = stage_names();
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (names[i] == s) return static_cast<Stage>(i);
    }
    throw ConfigError("unknown stage '" + s + "'");
}

namespace {

std::string v_name(std::size_t n) { return "V" + std::to_string(n) + ".csv"; }
std::string c_name(std::size_t n) { return "C" + std::to_string(n) + ".csv"; }
std::string reconstructed_name(std::size_t n) {
    return "V" + std::to_string(n) + "_reconstructed.csv";
}

/// Which stage produces a given artifact, for actionable error messages.
std::string producer_of(const std::string& file) {
    if (file == "V0_raw.csv" || file == "wkb_profile.csv") return "smooth";
    if (file == "V0_refined.csv") return "smooth";
    if (file.find("_reconstructed") != std::string::npos) return "reconstruct";
    if (file == "tail_template.csv" || file == "tails.csv" || file == "summary.csv" ||
        file == "shifts.csv" || file == "oscillation.csv" || file == "wavelengths.csv" ||
        file == "curvature_wavelengths.csv")
        return "analyze";
    if (file == "spectrum_comparison.csv") return "verify";
    if (file == "reconstructed_corrections.csv") return "reconstruct";
    return "match";
}

json relevant_config(Stage stage, const RunConfig& c) {
    json j = {{"x_max", c.x_max},     {"n_points", c.n_points}, {"de", c.de},
              {"e_max_factor", c.e_max_factor}, {"n_max", c.n_max},   {"buffer", c.buffer}};
    if (stage == Stage::smooth) return j;
    j["optimizer"] = to_json(c)["optimizer"];
    if (stage == Stage::refine) return j;
    j["stage_tol"] = c.stage_tol;
    if (stage == Stage::match || stage == Stage::analyze) return j;
    j["shift_rule"] = to_string(c.shift_rule);
    return j;
}

class Workspace {
public:
    Workspace(const RunConfig& config, const LogFn& log)
        : config_(config), dir_(config.resolved_out_dir()), log_(log) {
        fs::create_directories(dir_);
        const fs::path m = dir_ / "manifest.json";
        if (fs::exists(m)) {
            try {
                manifest_ = json::parse(read_file(m));
            } catch (const json::parse_error& e) {
                throw DataError(m.string() + ": " + e.what());
            }
        }
        if (!manifest_.is_object()) manifest_ = json::object();
        if (!manifest_.contains("stages")) manifest_["stages"] = json::object();
        if (!manifest_.contains("plots")) manifest_["plots"] = json::object();
        manifest_["version"] = 1;
    }

    const fs::path& dir() const { return dir_; }
    const RunConfig& config() const { return config_; }
    void log(const std::string& msg) const {
        if (log_) log_(msg);
    }

    /// Hash of a required artifact; DataError naming the producing stage if absent.
    std::string require(const std::string& file) const {
        const fs::path p = dir_ / file;
        if (!fs::exists(p)) {
            throw DataError("missing artifact " + p.string() + "; run the '" + producer_of(file) +
                            "' stage first");
        }
        return sha256_file(p);
    }

    std::string zeros_hash() const {
        if (!fs::exists(config_.zeros_path)) {
            throw DataError("zeros file not found: " + config_.zeros_path);
        }
        return sha256_file(config_.zeros_path);
    }

    ZeroTable zeros() const {
        auto table = load_zeros_file(config_.zeros_path);
        if (table.size() < config_.n_max) {
            throw DataError("zeros file " + config_.zeros_path + " holds " +
                            std::to_string(table.size()) + " zeros, n_max is " +
                            std::to_string(config_.n_max));
        }
        return table;
    }

    bool up_to_date(const std::string& key, const json& cfg, const json& inputs) const {
        const auto& stages = manifest_.at("stages");
        if (!stages.contains(key)) return false;
        const auto& e = stages.at(key);
        if (!e.contains("config") || !e.contains("inputs") || !e.contains("outputs")) return false;
        if (e.at("config") != cfg || e.at("inputs") != inputs) return false;
        for (const auto& [name, hash] : e.at("outputs").items()) {
            const fs::path p = dir_ / name;
            if (!hash.is_string() || !fs::exists(p) || sha256_file(p) != hash.get<std::string>()) {
                return false;
            }
        }
        return true;
    }

    std::vector<std::string> recorded_outputs(const std::string& key) const {
        std::vector<std::string> out;
        for (const auto& [name, _] : manifest_.at("stages").at(key).at("outputs").items()) {
            out.push_back(name);
        }
        return out;
    }

    void begin() { pending_ = json::object(); }

    void write(const std::string& name, const std::string& content) {
        write_file_atomic(dir_ / name, content);
        pending_[name] = sha256_hex(content);
    }
    void write_csv(const std::string& name, const CsvTable& t) { write(name, format_csv(t)); }
    void write_json(const std::string& name, const json& j) { write(name, j.dump(2) + "\n"); }

    std::vector<std::string> commit(const std::string& section, const std::string& key,
                                    const json& cfg, const json& inputs) {
        json entry = {{"config", cfg}, {"inputs", inputs}, {"outputs", pending_}};
        manifest_[section][key] = entry;
        write_file_atomic(dir_ / "manifest.json", manifest_.dump(2) + "\n");
        std::vector<std::string> names;
        for (const auto& [name, _] : pending_.items()) names.push_back(name);
        return names;
    }

private:
    RunConfig config_;
    fs::path dir_;
    LogFn log_;
    json manifest_;
    json pending_;
};

json report_json(const OptimizerReport& r) {
    json trace = json::array();
    for (const auto& t : r.trace) {
        trace.push_back({{"iteration", t.iteration}, {"F", t.objective}, {"step", t.step}});
    }
    return {{"iterations", r.iterations},
            {"initial_objective", r.initial_objective},
            {"final_objective", r.final_objective},
            {"residuals", r.residuals},
            {"stalled", r.stalled},
            {"stop_reason", r.stop_reason},
            {"worst_gradient_check", r.worst_gradient_check},
            {"trace", trace}};
}

CorrectionProfile read_correction(const Workspace& ws, std::size_t n) {
    ws.require(c_name(n));
    auto c = read_potential(ws.dir() / c_name(n), "C");
    return {c.grid(), {c.values().begin(), c.values().end()}, n};
}

SampledPotential read_v(const Workspace& ws, const std::string& name) {
    ws.require(name);
    return read_potential(ws.dir() / name);
}

TailTemplate read_tail_template(const Workspace& ws) {
    ws.require("tail_template.csv");
    const auto t = read_csv(ws.dir() / "tail_template.csv");
    TailTemplate tail{t.column("offset"), t.column("value"), {}};
    if (tail.values.empty() || tail.values.front() != -1.0) {
        throw DataError("tail_template.csv must start at value -1");
    }
    return tail;
}

double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

// Each stage: declare inputs, then compute and write.

json inputs_smooth(const Workspace&) { return json::object(); }

void run_smooth(Workspace& ws) {
    const auto& c = ws.config();
    const Grid grid = c.grid();
    const auto targets = smooth_targets(c.match_config());
    const double e_max = c.e_max_factor * targets.targets.back();
    ws.log("marching smooth potential to E = " + std::to_string(e_max));
    const auto profile = march_potential(e_max, c.de);
    const auto v0 = sample_symmetric(profile.points, grid);
    CsvTable prof{{"x0", "E"}, {{}, {}}};
    for (const auto& [x0, e] : profile.points) {
        prof.columns[0].push_back(x0);
        prof.columns[1].push_back(e);
    }
    ws.write_csv("V0_raw.csv", potential_table(v0));
    ws.write_csv("wkb_profile.csv", prof);
}

json inputs_refine(const Workspace& ws) { return {{"V0_raw.csv", ws.require("V0_raw.csv")}}; }

void run_refine(Workspace& ws) {
    const auto& c = ws.config();
    const auto raw = read_v(ws, "V0_raw.csv");
    if (!(raw.grid() == c.grid())) throw DataError("V0_raw.csv was built on a different grid");
    const auto targets = smooth_targets(c.match_config());
    ws.log("refining V0 against " + std::to_string(targets.size()) + " smooth targets");
    auto [v0, report] = refine(raw, targets, c.optimizer);
    const double worst = report.max_abs_residual(targets.size());
    ws.log("refined V0: " + std::to_string(report.iterations) + " iterations, max residual " +
           std::to_string(worst));
    if (worst > c.stage_tol) {
        throw NumericalError("refined V0 misses the smooth targets by " + std::to_string(worst) +
                             " (tolerance " + std::to_string(c.stage_tol) + ")");
    }
    ws.write_csv("V0_refined.csv", potential_table(v0));
    json j = report_json(report);
    j["targets"] = targets.targets;
    j["max_abs_residual"] = worst;
    ws.write_json("refine_report.json", j);
}

json inputs_match(const Workspace& ws) {
    return {{"V0_refined.csv", ws.require("V0_refined.csv")}, {"zeros", ws.zeros_hash()}};
}

void run_match(Workspace& ws) {
    const auto& c = ws.config();
    const auto v0 = read_v(ws, "V0_refined.csv");
    if (!(v0.grid() == c.grid())) throw DataError("V0_refined.csv was built on a different grid");
    const auto table = ws.zeros();
    json stages = json::array();
    auto seq = match_sequence(v0, table, c.match_config(), [&](const StageRecord& r) {
        ws.log("matched zero " + std::to_string(r.n) + ": " + std::to_string(r.report.iterations) +
               " iterations, max residual " + std::to_string(r.max_matched_residual));
    });
    for (std::size_t n = 1; n <= seq.potentials.size(); ++n) {
        ws.write_csv(v_name(n), potential_table(seq.potentials[n - 1]));
        const SampledPotential cn(v0.grid(), seq.corrections[n - 1].values);
        ws.write_csv(c_name(n), potential_table(cn, "C"));
        const auto& r = seq.stages[n - 1];
        json s = report_json(r.report);
        s["n"] = r.n;
        s["max_matched_residual"] = r.max_matched_residual;
        s["seconds"] = r.seconds;
        stages.push_back(s);
    }
    ws.write_json("match_report.json", {{"stage_tol", c.stage_tol}, {"stages", stages}});
}

json inputs_analyze(const Workspace& ws) {
    json in = {{"V0_refined.csv", ws.require("V0_refined.csv")}, {"zeros", ws.zeros_hash()}};
    for (std::size_t n = 1; n <= ws.config().n_max; ++n) {
        in[v_name(n)] = ws.require(v_name(n));
        in[c_name(n)] = ws.require(c_name(n));
    }
    return in;
}

/// Correction numbers whose wavelengths are exported.
std::vector<std::size_t> wavelength_set(std::size_t n_max) {
    std::vector<std::size_t> out;
    for (std::size_t n : {20, 30, 40, 50}) {
        if (n <= n_max) out.push_back(n);
    }
    if (out.empty() || out.back() != n_max) out.push_back(n_max);
    return out;
}

void run_analyze(Workspace& ws) {
    const auto& c = ws.config();
    const auto table = ws.zeros();
    const std::size_t N = c.n_max;
    std::vector<SampledPotential> v;
    v.push_back(read_v(ws, "V0_refined.csv"));
    std::vector<CorrectionProfile> corr;
    for (std::size_t n = 1; n <= N; ++n) {
        v.push_back(read_v(ws, v_name(n)));
        corr.push_back(read_correction(ws, n));
    }

    std::vector<OscillationSummary> sums;
    std::vector<NormalizedTail> tails;
    for (const auto& cn : corr) {
        sums.push_back(summarize_oscillation(cn));
        tails.push_back(extract_tail(cn, sums.back(), Side::right));
    }
    const auto law = amplitude_law_residuals(sums, table);

    CsvTable summary{{"n", "A_n", "period_count", "err_n"}, std::vector<std::vector<double>>(4)};
    CsvTable osc{{"n", "x_star", "A_n", "model_amplitude", "law_residual", "turning_point"},
                 std::vector<std::vector<double>>(6)};
    int period_failures = 0;
    for (std::size_t i = 0; i < N; ++i) {
        const std::size_t n = i + 1;
        const auto& s = sums[i];
        summary.columns[0].push_back(static_cast<double>(n));
        summary.columns[1].push_back(s.amplitude);
        summary.columns[2].push_back(s.period_count);
        summary.columns[3].push_back(approximation_error(n, table));
        osc.columns[0].push_back(static_cast<double>(n));
        osc.columns[1].push_back(s.x_star);
        osc.columns[2].push_back(s.amplitude);
        osc.columns[3].push_back(model_amplitude(n, table));
        osc.columns[4].push_back(law[i]);
        osc.columns[5].push_back(turning_point(v[n], table.zero(n)));
        if (s.period_count != static_cast<int>(n) - 1) ++period_failures;
    }
    ws.write_csv("summary.csv", summary);
    ws.write_csv("oscillation.csv", osc);

    const auto tmpl = average_tails(tails);
    ws.write_csv("tail_template.csv", {{"offset", "value"}, {tmpl.offsets, tmpl.values}});
    CsvTable plume{{"offset"}, {tmpl.offsets}};
    for (std::size_t i = 0; i < tails.size(); ++i) {
        plume.header.push_back("tail" + std::to_string(i + 1));
        plume.columns.emplace_back(tails[i].values.begin(),
                                   tails[i].values.begin() + static_cast<long>(tmpl.offsets.size()));
    }
    ws.write_csv("tails.csv", plume);

    // Wavelengths by zero crossings against WKB, both pointwise and averaged
    // over the same crossing interval.
    CsvTable wl{{"n", "x", "zero_crossing", "wkb_interval", "wkb_pointwise"},
                std::vector<std::vector<double>>(5)};
    json wl_report = json::object();
    for (std::size_t n : wavelength_set(N)) {
        const auto& vn = v[n];
        const double z = table.zero(n);
        const double xt = turning_point(vn, z);
        double worst_interval = 0.0, worst_point = 0.0;
        for (const auto& w : wavelength_zero_crossing(corr[n - 1])) {
            if (w.right_crossing >= xt || w.left_crossing <= -xt) continue;
            const double wi = wkb_wavelength_interval(vn, z, w.left_crossing, w.right_crossing);
            const double wp = wkb_wavelength(vn, z, w.x);
            wl.columns[0].push_back(static_cast<double>(n));
            wl.columns[1].push_back(w.x);
            wl.columns[2].push_back(w.wavelength);
            wl.columns[3].push_back(wi);
            wl.columns[4].push_back(wp);
            if (std::abs(w.x) <= 0.8 * xt) {
                worst_interval = std::max(worst_interval, std::abs(w.wavelength / wi - 1.0));
                worst_point = std::max(worst_point, std::abs(w.wavelength / wp - 1.0));
            }
        }
        wl_report[std::to_string(n)] = {{"turning_point", xt},
                                        {"max_rel_dev_interval", worst_interval},
                                        {"max_rel_dev_pointwise", worst_point}};
    }
    ws.write_csv("wavelengths.csv", wl);

    if (N >= 4) {
        const std::size_t n = 4;
        const double z = table.zero(n);
        const double xt = turning_point(v[n], z);
        CsvTable cw{{"x", "curvature", "wkb_pointwise"}, std::vector<std::vector<double>>(3)};
        for (const auto& w : wavelength_curvature(corr[n - 1])) {
            if (std::abs(w.x) >= xt) continue;
            cw.columns[0].push_back(w.x);
            cw.columns[1].push_back(w.wavelength);
            cw.columns[2].push_back(wkb_wavelength(v[n], z, w.x));
        }
        ws.write_csv("curvature_wavelengths.csv", cw);
    }

    CsvTable shifts{{"n", "amplitude", "model_shift", "fitted_shift"},
                    std::vector<std::vector<double>>(4)};
    for (std::size_t n = 1; n <= N; ++n) {
        const double a = model_amplitude(n, table);
        shifts.columns[0].push_back(static_cast<double>(n));
        shifts.columns[1].push_back(a);
        shifts.columns[2].push_back(model_shift(a));
        shifts.columns[3].push_back(fit_shift(corr[n - 1], v[n - 1], table.zero(n), a));
    }
    ws.write_csv("shifts.csv", shifts);

    std::vector<double> abs_law;
    for (double r : law) abs_law.push_back(std::abs(r));
    double tail_mean = 0.0;
    for (double t : tmpl.values) tail_mean += t;
    tail_mean /= static_cast<double>(tmpl.values.size());
    double max_spread = 0.0;
    for (double s : tmpl.spread) max_spread = std::max(max_spread, s);
    ws.write_json("analysis_report.json",
                  {{"n_max", N},
                   {"amplitude_law_median_rel_dev", median(abs_law)},
                   {"period_count_failures", period_failures},
                   {"tail_mean", tail_mean},
                   {"tail_max_spread", max_spread},
                   {"tail_length", tmpl.offsets.back()},
                   {"wavelengths", wl_report}});
}

json inputs_reconstruct(const Workspace& ws) {
    json in = {{"V0_refined.csv", ws.require("V0_refined.csv")},
               {"tail_template.csv", ws.require("tail_template.csv")},
               {"zeros", ws.zeros_hash()}};
    if (ws.config().shift_rule == ShiftRule::fitted) {
        for (std::size_t n = 1; n <= ws.config().n_max; ++n) in[c_name(n)] = ws.require(c_name(n));
    }
    return in;
}

void run_reconstruct(Workspace& ws) {
    const auto& c = ws.config();
    const std::size_t N = c.n_max;
    const auto table = ws.zeros();
    const auto v0 = read_v(ws, "V0_refined.csv");
    ReconstructionModel model{read_tail_template(ws), c.shift_rule, {}};
    if (c.shift_rule == ShiftRule::fitted) {
        for (std::size_t n = 1; n <= N; ++n) model.actual.push_back(read_correction(ws, n));
    }
    std::optional<SampledPotential> direct;
    if (fs::exists(ws.dir() / v_name(N))) direct = read_v(ws, v_name(N));
    ws.log("assembling V" + std::to_string(N) + " with the " + to_string(c.shift_rule) +
           " shift rule");
    const auto result = assemble_and_verify(v0, model, table, N, direct);
    ws.write_csv(reconstructed_name(N), potential_table(result.potential));
    CsvTable rc{{"x"}, {{v0.grid().abscissae().begin(), v0.grid().abscissae().end()}}};
    for (const auto& cn : result.corrections) {
        rc.header.push_back("C" + std::to_string(cn.n));
        rc.columns.push_back(cn.values);
    }
    ws.write_csv("reconstructed_corrections.csv", rc);
    json j = {{"shift_rule", to_string(c.shift_rule)},
              {"shifts", result.report.shifts},
              {"max_abs_amplitude", result.report.max_abs_amplitude},
              {"max_abs_residual", result.report.max_abs_residual}};
    if (result.report.sup_norm_vs_direct) j["sup_norm_vs_direct"] = *result.report.sup_norm_vs_direct;
    ws.write_json("reconstruct_report.json", j);
}

json inputs_verify(const Workspace& ws) {
    const std::string name = reconstructed_name(ws.config().n_max);
    return {{name, ws.require(name)}, {"zeros", ws.zeros_hash()}};
}

void run_verify(Workspace& ws) {
    const auto& c = ws.config();
    const std::size_t N = c.n_max;
    const auto table = ws.zeros();
    const auto v = read_v(ws, reconstructed_name(N));
    std::vector<double> hints(table.values().begin(), table.values().begin() + static_cast<long>(N));
    const auto eig = lowest_eigenvalues(build_hamiltonian(v), N, hints);
    CsvTable out{{"n", "zero", "eigenvalue", "residual"}, std::vector<std::vector<double>>(4)};
    double worst = 0.0;
    for (std::size_t n = 1; n <= N; ++n) {
        const double r = eig[n - 1] - table.zero(n);
        out.columns[0].push_back(static_cast<double>(n));
        out.columns[1].push_back(table.zero(n));
        out.columns[2].push_back(eig[n - 1]);
        out.columns[3].push_back(r);
        worst = std::max(worst, std::abs(r));
    }
    ws.log("reconstructed spectrum: max |e_n - Z_n| = " + std::to_string(worst));
    ws.write_csv("spectrum_comparison.csv", out);
    ws.write_json("verify_report.json",
                  {{"n_max", N}, {"max_abs_residual", worst}, {"tolerance", 0.1},
                   {"pass", worst <= 0.1}});
}

struct StageImpl {
    json (*inputs)(const Workspace&);
    void (*run)(Workspace&);
};

StageImpl impl_of(Stage s) {
    switch (s) {
        case Stage::smooth: return {inputs_smooth, run_smooth};
        case Stage::refine: return {inputs_refine, run_refine};
        case Stage::match: return {inputs_match, run_match};
        case Stage::analyze: return {inputs_analyze, run_analyze};
        case Stage::reconstruct: return {inputs_reconstruct, run_reconstruct};
        case Stage::verify: return {inputs_verify, run_verify};
    }
    throw ConfigError("unknown stage");
}

StageOutcome run_one(Workspace& ws, Stage stage, bool force) {
    const std::string key = to_string(stage);
    const auto impl = impl_of(stage);
    const json inputs = impl.inputs(ws);
    const json cfg = relevant_config(stage, ws.config());
    if (!force && ws.up_to_date(key, cfg, inputs)) {
        return {stage, true, ws.recorded_outputs(key)};
    }
    ws.begin();
    impl.run(ws);
    return {stage, false, ws.commit("stages", key, cfg, inputs)};
}

}  // namespace

std::vector<StageOutcome> run_stage(Stage stage, const RunConfig& config, bool force,
                                    const LogFn& log) {
    config.validate();
    Workspace ws(config, log);
    std::vector<StageOutcome> out;
    out.push_back(run_one(ws, stage, force));
    if (stage == Stage::smooth) out.push_back(run_one(ws, Stage::refine, force));
    return out;
}

// ---------------------------------------------------------------- plots

const std::vector<std::string>& figure_ids() {
    static const std::vector<std::string> ids = [] {
        std::vector<std::string> v;
        for (int i = 1; i <= 19; ++i) v.push_back("fig" + std::to_string(i));
        return v;
    }();
    return ids;
}

namespace {

std::vector<double> column_of(const SampledPotential& v) {
    return {v.values().begin(), v.values().end()};
}

std::vector<double> abscissae_of(const SampledPotential& v) {
    return {v.grid().abscissae().begin(), v.grid().abscissae().end()};
}

CsvTable potentials_plot(const Workspace& ws, std::size_t from, std::size_t to, char prefix) {
    CsvTable t;
    for (std::size_t n = from; n <= to; ++n) {
        const std::string file = prefix == 'V' ? (n == 0 ? "V0_refined.csv" : v_name(n)) : c_name(n);
        ws.require(file);
        const auto v = read_potential(ws.dir() / file, prefix == 'V' ? "V" : "C");
        if (t.header.empty()) {
            t.header.push_back("x");
            t.columns.push_back(abscissae_of(v));
        }
        t.header.push_back(std::string(1, prefix) + std::to_string(n));
        t.columns.push_back(column_of(v));
    }
    return t;
}

CsvTable pick_columns(const CsvTable& src, const std::vector<std::pair<std::string, std::string>>& map) {
    CsvTable t;
    for (const auto& [from, to] : map) {
        t.header.push_back(to);
        t.columns.push_back(src.column(from));
    }
    return t;
}

void require_n(const RunConfig& c, std::size_t n, const std::string& id) {
    if (c.n_max < n) {
        throw DataError(id + " needs corrections up to C" + std::to_string(n) +
                        "; rerun match with --n-max " + std::to_string(n) + " or more");
    }
}

CsvTable figure_table(const Workspace& ws, const std::string& id) {
    const auto& c = ws.config();
    const std::size_t N = c.n_max;
    auto read = [&](const std::string& f) {
        ws.require(f);
        return read_csv(ws.dir() / f);
    };
    if (id == "fig1") {
        const auto table = load_zeros_file(c.zeros_path);
        const std::size_t count = std::min<std::size_t>(50, table.size());
        CsvTable t{{"n", "zero", "smooth_approx"}, std::vector<std::vector<double>>(3)};
        for (std::size_t n = 1; n <= count; ++n) {
            t.columns[0].push_back(static_cast<double>(n));
            t.columns[1].push_back(table.zero(n));
            t.columns[2].push_back(smooth_zero(n));
        }
        return t;
    }
    if (id == "fig2") {
        const auto raw = read_v(ws, "V0_raw.csv");
        const auto ref = read_v(ws, "V0_refined.csv");
        const auto adj = ref - raw;
        return {{"x", "V0_raw", "V0_refined", "adjustment"},
                {abscissae_of(raw), column_of(raw), column_of(ref), column_of(adj)}};
    }
    if (id == "fig3") {
        require_n(c, 4, id);
        const auto table = ws.zeros();
        const std::size_t k = std::min<std::size_t>({10, N + c.buffer, table.size()});
        CsvTable t{{"n", "zero", "smooth_approx"}, std::vector<std::vector<double>>(3)};
        for (std::size_t n = 1; n <= k; ++n) {
            t.columns[0].push_back(static_cast<double>(n));
            t.columns[1].push_back(table.zero(n));
            t.columns[2].push_back(smooth_zero(n));
        }
        for (std::size_t m = 0; m <= 4; ++m) {
            const auto v = read_v(ws, m == 0 ? "V0_refined.csv" : v_name(m));
            t.header.push_back("e_V" + std::to_string(m));
            t.columns.push_back(lowest_eigenvalues(build_hamiltonian(v), k));
        }
        return t;
    }
    if (id == "fig4") {
        require_n(c, 4, id);
        return potentials_plot(ws, 1, 4, 'C');
    }
    if (id == "fig5") {
        require_n(c, 4, id);
        return potentials_plot(ws, 0, 4, 'V');
    }
    if (id == "fig6") {
        require_n(c, 34, id);
        return potentials_plot(ws, 34, 34, 'C');
    }
    if (id == "fig7") return potentials_plot(ws, N, N, 'C');
    if (id == "fig8") {
        return pick_columns(read("summary.csv"),
                            {{"n", "n"}, {"A_n", "measured_amplitude"}, {"err_n", "approx_error"}});
    }
    if (id == "fig9") {
        auto t = pick_columns(read("summary.csv"), {{"n", "n"}, {"A_n", "measured_amplitude"}});
        auto err = read("summary.csv").column("err_n");
        for (double& e : err) e *= 2.0;
        t.header.push_back("2x_error");
        t.columns.push_back(err);
        return t;
    }
    if (id == "fig10") {
        return pick_columns(read("wavelengths.csv"), {{"n", "n"},
                                                      {"x", "x"},
                                                      {"zero_crossing", "numerical"},
                                                      {"wkb_pointwise", "wkb"},
                                                      {"wkb_interval", "wkb_interval"}});
    }
    if (id == "fig11") {
        require_n(c, 4, id);
        return pick_columns(read("curvature_wavelengths.csv"),
                            {{"x", "x"}, {"curvature", "numerical"}, {"wkb_pointwise", "wkb"}});
    }
    if (id == "fig12") {
        require_n(c, 3, id);
        const auto table = ws.zeros();
        const auto v3 = read_v(ws, v_name(3));
        ws.require(c_name(3));
        const auto c3 = read_potential(ws.dir() / c_name(3), "C");
        const double xt = turning_point(v3, table.zero(3));
        const std::size_t n = v3.size();
        return {{"x", "V3", "C3", "zero", "turning_point"},
                {abscissae_of(v3), column_of(v3), column_of(c3), std::vector<double>(n, table.zero(3)),
                 std::vector<double>(n, xt)}};
    }
    if (id == "fig13") return read("tails.csv");
    if (id == "fig14") {
        auto t = read("tail_template.csv");
        const auto plume = read("tails.csv");
        std::vector<double> spread(t.rows(), 0.0);
        for (std::size_t i = 0; i < t.rows(); ++i) {
            double m = 0.0, s = 0.0;
            const std::size_t k = plume.columns.size() - 1;
            for (std::size_t j = 1; j <= k; ++j) m += plume.columns[j][i];
            m /= static_cast<double>(k);
            for (std::size_t j = 1; j <= k; ++j) s += (plume.columns[j][i] - m) * (plume.columns[j][i] - m);
            spread[i] = std::sqrt(s / static_cast<double>(k));
        }
        t.header.push_back("spread");
        t.columns.push_back(spread);
        return t;
    }
    if (id == "fig15") {
        const auto rec = read("reconstructed_corrections.csv");
        CsvTable t{{"x"}, {rec.column("x")}};
        std::vector<std::size_t> ns;
        for (std::size_t n = 1; n <= std::min<std::size_t>(4, N); ++n) ns.push_back(n);
        if (N > 4) ns.push_back(N);
        for (std::size_t n : ns) {
            ws.require(c_name(n));
            t.header.push_back("C" + std::to_string(n));
            t.columns.push_back(column_of(read_potential(ws.dir() / c_name(n), "C")));
            t.header.push_back("R" + std::to_string(n));
            t.columns.push_back(rec.column("C" + std::to_string(n)));
        }
        return t;
    }
    if (id == "fig16") {
        return pick_columns(read("shifts.csv"),
                            {{"n", "n"}, {"amplitude", "amplitude"}, {"fitted_shift", "fitted_shift"}});
    }
    if (id == "fig17") return read("shifts.csv");
    if (id == "fig18") {
        const auto rec = read_v(ws, reconstructed_name(N));
        CsvTable t{{"x", "V_reconstructed"}, {abscissae_of(rec), column_of(rec)}};
        if (fs::exists(ws.dir() / v_name(N))) {
            t.header.push_back("V_matched");
            t.columns.push_back(column_of(read_v(ws, v_name(N))));
        }
        return t;
    }
    if (id == "fig19") {
        return pick_columns(read("spectrum_comparison.csv"),
                            {{"n", "n"}, {"zero", "zero"}, {"eigenvalue", "eigenvalue"}});
    }
    std::string valid;
    for (const auto& f : figure_ids()) valid += (valid.empty() ? "" : ", ") + f;
    throw ConfigError("unknown figure id '" + id + "'; valid ids: " + valid);
}

}  // namespace

std::vector<std::string> emit_plot_data(const std::string& figure_id, const RunConfig& config) {
    config.validate();
    if (std::find(figure_ids().begin(), figure_ids().end(), figure_id) == figure_ids().end()) {
        std::string valid;
        for (const auto& f : figure_ids()) valid += (valid.empty() ? "" : ", ") + f;
        throw ConfigError("unknown figure id '" + figure_id + "'; valid ids: " + valid);
    }
    Workspace ws(config, {});
    const auto table = figure_table(ws, figure_id);
    ws.begin();
    ws.write_csv("plot_" + figure_id + ".csv", table);
    return ws.commit("plots", figure_id, to_json(config), json::object());
}

}  // namespace zsf
