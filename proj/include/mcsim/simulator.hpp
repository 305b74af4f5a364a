#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "mcsim/analysis.hpp"
#include "mcsim/channel.hpp"
#include "mcsim/classified.hpp"
#include "mcsim/modem.hpp"

namespace mcsim {

// How the noise level is specified: directly, or derived from a target
// ratio (Sinr counts the earlier neighbor's interference power in the
// denominator, Snr does not).
struct NoiseSpec {
    enum class Kind { Sigma, TargetSinr, TargetSnr };
    Kind kind = Kind::TargetSnr;
    double value = 10.0;
};

struct FixedReceiver {
    double threshold = 250.0;
};

struct AtvReceiverConfig {
    double tolerance = 30.0;
    std::optional<double> initial_threshold; // default M/2
    int window = 0;
};

enum class BitPattern {
    Random,      // i.i.d. with P(1) = prior_one
    Alternating, // 1,0,1,0,... (debugging aid)
};

struct SweepAxis {
    std::string path;
    std::vector<double> values;
};

struct ExperimentConfig {
    ChannelParams channel;
    LigandParams ligand;
    ModulationParams modulation;
    NoiseSpec noise;
    std::variant<FixedReceiver, AtvReceiverConfig> receiver = FixedReceiver{};
    long num_slots = 10000;
    int num_trials = 1;
    std::uint64_t seed = 1;
    int max_offset = kDefaultMaxOffset;
    BitPattern bit_pattern = BitPattern::Random;
    std::vector<SweepAxis> sweep;

    bool is_atv() const;
    void validate() const;
};

struct SimResult {
    double ber_empirical = 0.0;
    double ci_halfwidth = 0.0; // 95% normal-approximation half width
    SinrResult sinr_measured;  // signal vs earlier-neighbor interference
    std::vector<double> threshold_trace; // first trial, adaptive receiver only
    long errors_one = 0;  // ones decoded as zeros
    long errors_zero = 0; // zeros decoded as ones
    long total_slots = 0;
    double sigma_used = 0.0;
};

// Resolves the configured noise spec against the channel's profile.
NoiseParams resolve_noise(const ExperimentConfig& cfg, const AbsorptionProfile& profile);

// Sets one swept parameter by path (e.g. "channel.slot_length",
// "noise.target_snr", "receiver.fixed.threshold"). Throws ConfigError
// naming the path when it is unknown or does not match the configuration.
void apply_sweep_value(ExperimentConfig& cfg, const std::string& path, double value);

// Runs one experiment: per trial, draws a bit frame, realizes every slot
// through the sampled channel, decodes with the configured receiver and
// aggregates errors, measured powers and (for the adaptive receiver) the
// first trial's threshold trace. Fully reproducible from (seed,
// sweep_index); trials run on thread_count threads (0 = automatic, or the
// MCSIM_THREADS environment variable when set) with bit-identical results
// regardless of the thread count.
SimResult run_experiment(const ExperimentConfig& cfg, int sweep_index = 0, int thread_count = 0);

struct SweepPoint {
    std::vector<std::pair<std::string, double>> coordinates; // axis path -> value
    ExperimentConfig config; // the per-point configuration actually run
    SimResult result;
};

// Cartesian product of the configured sweep axes, in definition order with
// the first axis outermost. Point i runs with sweep_index = i, so every
// point draws from its own seed stream.
std::vector<SweepPoint> run_sweep(const ExperimentConfig& cfg, int thread_count = 0);

} // namespace mcsim
