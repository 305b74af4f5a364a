// Command-line front end: runs channel profiling, BER sweeps and adaptive
// receiver experiments from a JSON config and emits CSV.
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mcsim/analysis.hpp"
#include "mcsim/config_io.hpp"
#include "mcsim/csv.hpp"
#include "mcsim/errors.hpp"
#include "mcsim/simulator.hpp"

namespace {

using namespace mcsim;

struct CommonOptions {
    std::string config_path;
    std::string out_path; // empty writes to stdout
    std::optional<std::uint64_t> seed;
};

// Owns the optional output file; falls back to stdout.
class OutputTarget {
public:
    explicit OutputTarget(const std::string& path) {
        if (path.empty()) return;
        file_.open(path);
        if (!file_) throw std::runtime_error("cannot open output file '" + path + "'");
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

ExperimentConfig load(const CommonOptions& opt) {
    ExperimentConfig cfg = load_config(opt.config_path);
    if (opt.seed) cfg.seed = *opt.seed;
    return cfg;
}

void write_preamble(CsvWriter& csv, const std::string& subcommand, const ExperimentConfig& cfg) {
    csv.comment("mcsim " + subcommand);
    csv.comment("config " + config_to_json(cfg).dump());
}

double fixed_threshold(const ExperimentConfig& cfg) {
    const auto* fixed = std::get_if<FixedReceiver>(&cfg.receiver);
    if (fixed == nullptr) throw ConfigError("this subcommand requires receiver.type \"fixed\"");
    return fixed->threshold;
}

void cmd_channel_profile(const CommonOptions& opt, std::optional<int> max_offset) {
    ExperimentConfig cfg = load(opt);
    if (max_offset) cfg.max_offset = *max_offset;
    cfg.validate();
    const AbsorptionProfile profile = build_profile(cfg.channel, cfg.ligand, cfg.max_offset);

    OutputTarget out(opt.out_path);
    CsvWriter csv(out.stream());
    write_preamble(csv, "channel-profile", cfg);
    csv.comment("time_to_peak_s " +
                format_number(time_to_peak(cfg.channel.distance, cfg.channel.diffusion_coefficient)));
    csv.comment(std::string("slot_condition ") +
                (slot_condition(cfg.channel) ? "satisfied" : "violated"));
    csv.comment("ligand_factor " + format_number(cfg.ligand.factor()) +
                (profile.clamped ? " clamped" : ""));
    csv.comment("truncated_tail " + format_number(profile.truncated_tail));
    csv.header({"offset", "raw_prob", "scaled_prob", "cumulative"});
    double cumulative = 0.0;
    for (int k = 0; k <= cfg.max_offset; ++k) {
        const double raw = slot_absorption_prob(k, cfg.channel);
        const double scaled = profile.at(k);
        cumulative += scaled;
        csv.row({CsvWriter::cell(k), CsvWriter::cell(raw), CsvWriter::cell(scaled),
                 CsvWriter::cell(cumulative)});
    }
}

void cmd_ber_sweep(const CommonOptions& opt) {
    const ExperimentConfig cfg = load(opt);
    fixed_threshold(cfg);
    if (cfg.sweep.empty()) throw ConfigError("ber-sweep requires a non-empty sweep");
    const std::vector<SweepPoint> table = run_sweep(cfg);

    OutputTarget out(opt.out_path);
    CsvWriter csv(out.stream());
    write_preamble(csv, "ber-sweep", cfg);
    std::vector<std::string> columns;
    for (const SweepAxis& axis : cfg.sweep) columns.push_back(axis.path);
    for (const char* c : {"ber_analytical", "ber_empirical", "ci_halfwidth", "sinr",
                          "threshold", "seed"})
        columns.push_back(c);
    csv.header(columns);

    for (const SweepPoint& point : table) {
        const AbsorptionProfile profile =
            build_profile(point.config.channel, point.config.ligand, point.config.max_offset);
        const NoiseParams noise = resolve_noise(point.config, profile);
        const double threshold = fixed_threshold(point.config);
        const BerResult analytical =
            ber_fixed(threshold, profile, point.config.modulation, noise);
        std::vector<std::string> cells;
        for (const auto& coordinate : point.coordinates)
            cells.push_back(CsvWriter::cell(coordinate.second));
        cells.push_back(CsvWriter::cell(analytical.p_e));
        cells.push_back(CsvWriter::cell(point.result.ber_empirical));
        cells.push_back(CsvWriter::cell(point.result.ci_halfwidth));
        cells.push_back(CsvWriter::cell(point.result.sinr_measured.gamma_e));
        cells.push_back(CsvWriter::cell(threshold));
        cells.push_back(CsvWriter::cell(point.config.seed));
        csv.row(cells);
    }
}

void cmd_threshold_sweep(const CommonOptions& opt) {
    ExperimentConfig cfg = load(opt);
    fixed_threshold(cfg);
    if (cfg.sweep.empty()) {
        SweepAxis axis;
        axis.path = "receiver.fixed.threshold";
        for (double t = 50.0; t <= 450.0; t += 10.0) axis.values.push_back(t);
        cfg.sweep.push_back(std::move(axis));
    } else if (cfg.sweep.size() != 1 || cfg.sweep[0].path != "receiver.fixed.threshold") {
        throw ConfigError("threshold-sweep sweeps exactly 'receiver.fixed.threshold'");
    }
    const std::vector<SweepPoint> table = run_sweep(cfg);

    // channel and noise are constant across the sweep
    const AbsorptionProfile profile = build_profile(cfg.channel, cfg.ligand, cfg.max_offset);
    const NoiseParams noise = resolve_noise(cfg, profile);
    const BerEvaluator evaluator(profile, cfg.modulation, noise);

    OutputTarget out(opt.out_path);
    CsvWriter csv(out.stream());
    write_preamble(csv, "threshold-sweep", cfg);
    csv.comment("sigma " + format_number(noise.std_dev));
    csv.header({"threshold", "ber_analytical", "pe_zero_analytical", "pe_one_analytical",
                "ber_empirical", "ci_halfwidth", "sinr", "seed"});
    for (const SweepPoint& point : table) {
        const double threshold = point.coordinates[0].second;
        const BerResult analytical = evaluator.at(threshold);
        csv.row({CsvWriter::cell(threshold), CsvWriter::cell(analytical.p_e),
                 CsvWriter::cell(analytical.p_e_zero), CsvWriter::cell(analytical.p_e_one),
                 CsvWriter::cell(point.result.ber_empirical),
                 CsvWriter::cell(point.result.ci_halfwidth),
                 CsvWriter::cell(point.result.sinr_measured.gamma_e),
                 CsvWriter::cell(point.config.seed)});
    }
}

void cmd_atv_run(const CommonOptions& opt, const std::string& trace_path) {
    const ExperimentConfig cfg = load(opt);
    if (!cfg.is_atv()) throw ConfigError("atv-run requires receiver.type \"atv\"");
    const SimResult adaptive = run_experiment(cfg);

    ExperimentConfig baseline_cfg = cfg;
    baseline_cfg.receiver = FixedReceiver{cfg.modulation.molecules_per_one / 2.0};
    const SimResult baseline = run_experiment(baseline_cfg);

    OutputTarget out(opt.out_path);
    CsvWriter csv(out.stream());
    write_preamble(csv, "atv-run", cfg);
    csv.comment("sigma " + format_number(adaptive.sigma_used));
    csv.header({"ber_atv", "ber_fixed_baseline", "sinr", "errors_one", "errors_zero", "seed"});
    csv.row({CsvWriter::cell(adaptive.ber_empirical), CsvWriter::cell(baseline.ber_empirical),
             CsvWriter::cell(adaptive.sinr_measured.gamma_e),
             CsvWriter::cell(adaptive.errors_one), CsvWriter::cell(adaptive.errors_zero),
             CsvWriter::cell(cfg.seed)});

    if (!trace_path.empty()) {
        std::ofstream trace_file(trace_path);
        if (!trace_file)
            throw std::runtime_error("cannot open trace file '" + trace_path + "'");
        CsvWriter trace(trace_file);
        write_preamble(trace, "atv-run trace", cfg);
        trace.header({"slot", "threshold"});
        for (std::size_t i = 0; i < adaptive.threshold_trace.size(); ++i)
            trace.row({CsvWriter::cell(static_cast<long>(i) + 1),
                       CsvWriter::cell(adaptive.threshold_trace[i])});
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Diffusion molecular communication link simulator"};
    app.require_subcommand(1);

    CommonOptions opt;
    std::optional<int> max_offset;
    std::string trace_path;

    const auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", opt.config_path, "experiment config (JSON)")->required();
        cmd->add_option("--out", opt.out_path, "output CSV path (default stdout)");
        cmd->add_option("--seed", opt.seed, "override the config seed");
    };

    CLI::App* profile_cmd =
        app.add_subcommand("channel-profile", "per-slot absorption probabilities");
    add_common(profile_cmd);
    profile_cmd->add_option("--max-offset", max_offset, "largest slot offset to print");

    CLI::App* ber_cmd = app.add_subcommand("ber-sweep", "analytical and empirical BER over a sweep");
    add_common(ber_cmd);

    CLI::App* threshold_cmd =
        app.add_subcommand("threshold-sweep", "BER against the decision threshold");
    add_common(threshold_cmd);

    CLI::App* atv_cmd =
        app.add_subcommand("atv-run", "adaptive receiver against the fixed-M/2 baseline");
    add_common(atv_cmd);
    atv_cmd->add_option("--trace", trace_path, "write the per-slot threshold trace here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (profile_cmd->parsed()) cmd_channel_profile(opt, max_offset);
        if (ber_cmd->parsed()) cmd_ber_sweep(opt);
        if (threshold_cmd->parsed()) cmd_threshold_sweep(opt);
        if (atv_cmd->parsed()) cmd_atv_run(opt, trace_path);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
