#include "mcsim/simulator.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <thread>

#include "mcsim/errors.hpp"
#include "mcsim/rng.hpp"

namespace mcsim {

bool ExperimentConfig::is_atv() const {
    return std::holds_alternative<AtvReceiverConfig>(receiver);
}

void ExperimentConfig::validate() const {
    channel.validate();
    ligand.validate();
    modulation.validate();
    if (num_slots < 1) throw ConfigError("num_slots must be >= 1");
    if (num_trials < 1) throw ConfigError("num_trials must be >= 1");
    if (max_offset < 1) throw ConfigError("max_offset must be >= 1");
    switch (noise.kind) {
        case NoiseSpec::Kind::Sigma:
            if (!(noise.value >= 0.0)) throw ConfigError("noise.sigma must be >= 0");
            break;
        case NoiseSpec::Kind::TargetSinr:
            if (!(noise.value > 0.0)) throw ConfigError("noise.target_sinr must be > 0");
            break;
        case NoiseSpec::Kind::TargetSnr:
            if (!(noise.value > 0.0)) throw ConfigError("noise.target_snr must be > 0");
            break;
    }
    if (const auto* fixed = std::get_if<FixedReceiver>(&receiver)) {
        if (!std::isfinite(fixed->threshold))
            throw ConfigError("receiver.threshold must be finite");
    } else {
        const auto& atv = std::get<AtvReceiverConfig>(receiver);
        if (!(atv.tolerance >= 0.0)) throw ConfigError("receiver.tolerance must be >= 0");
        if (atv.window < 0) throw ConfigError("receiver.window must be >= 0");
        if (atv.initial_threshold &&
            !(*atv.initial_threshold >= 0.0 &&
              *atv.initial_threshold <= modulation.molecules_per_one))
            throw ConfigError("receiver.initial_threshold must lie in [0, M]");
    }
}

NoiseParams resolve_noise(const ExperimentConfig& cfg, const AbsorptionProfile& profile) {
    switch (cfg.noise.kind) {
        case NoiseSpec::Kind::Sigma:
            return NoiseParams{cfg.noise.value};
        case NoiseSpec::Kind::TargetSinr:
            return noise_for_target_sinr(profile, cfg.modulation, cfg.modulation.prior_one,
                                         cfg.noise.value);
        case NoiseSpec::Kind::TargetSnr:
            return noise_for_target_snr(profile, cfg.modulation, cfg.modulation.prior_one,
                                        cfg.noise.value);
    }
    throw std::logic_error("resolve_noise: unreachable");
}

void apply_sweep_value(ExperimentConfig& cfg, const std::string& path, double value) {
    if (path == "channel.diffusion_coefficient") {
        cfg.channel.diffusion_coefficient = value;
    } else if (path == "channel.distance") {
        cfg.channel.distance = value;
    } else if (path == "channel.slot_length") {
        cfg.channel.slot_length = value;
    } else if (path == "ligand.binding_rate") {
        cfg.ligand.binding_rate = value;
    } else if (path == "ligand.releasing_rate") {
        cfg.ligand.releasing_rate = value;
    } else if (path == "ligand.receptor_density") {
        cfg.ligand.receptor_density = value;
    } else if (path == "modulation.molecules_per_one") {
        if (!(value >= 1.0) || value != std::floor(value))
            throw ConfigError("sweep path 'modulation.molecules_per_one': values must be "
                              "positive integers");
        cfg.modulation.molecules_per_one = static_cast<int>(value);
    } else if (path == "noise.sigma") {
        cfg.noise = {NoiseSpec::Kind::Sigma, value};
    } else if (path == "noise.target_sinr") {
        cfg.noise = {NoiseSpec::Kind::TargetSinr, value};
    } else if (path == "noise.target_snr") {
        cfg.noise = {NoiseSpec::Kind::TargetSnr, value};
    } else if (path == "receiver.fixed.threshold") {
        auto* fixed = std::get_if<FixedReceiver>(&cfg.receiver);
        if (fixed == nullptr)
            throw ConfigError(
                "sweep path 'receiver.fixed.threshold' requires receiver.type \"fixed\"");
        fixed->threshold = value;
    } else if (path == "receiver.atv.tolerance") {
        auto* atv = std::get_if<AtvReceiverConfig>(&cfg.receiver);
        if (atv == nullptr)
            throw ConfigError("sweep path 'receiver.atv.tolerance' requires receiver.type \"atv\"");
        atv->tolerance = value;
    } else if (path == "receiver.atv.initial_threshold") {
        auto* atv = std::get_if<AtvReceiverConfig>(&cfg.receiver);
        if (atv == nullptr)
            throw ConfigError(
                "sweep path 'receiver.atv.initial_threshold' requires receiver.type \"atv\"");
        atv->initial_threshold = value;
    } else {
        throw ConfigError("unknown sweep path '" + path + "'");
    }
}

namespace {

struct TrialAccum {
    long errors_one = 0;
    long errors_zero = 0;
    double sumsq_signal = 0.0;
    double sumsq_isi = 0.0;
    std::vector<double> trace;
};

BitSequence generate_bits(const ExperimentConfig& cfg, Rng& rng) {
    BitSequence bits(static_cast<std::size_t>(cfg.num_slots));
    if (cfg.bit_pattern == BitPattern::Random) {
        for (auto& b : bits) b = rng.bernoulli(cfg.modulation.prior_one) ? 1 : 0;
    } else {
        for (std::size_t i = 0; i < bits.size(); ++i) bits[i] = i % 2 == 0 ? 1 : 0;
    }
    return bits;
}

TrialAccum simulate_trial(const ExperimentConfig& cfg, const SlotSampler& sampler,
                          std::uint64_t trial_seed, bool want_trace) {
    Rng rng(trial_seed);
    const BitSequence bits = generate_bits(cfg, rng);
    const long n = cfg.num_slots;

    const bool atv = cfg.is_atv();
    AtvConfig atv_cfg;
    AtvState atv_state;
    double fixed_threshold = 0.0;
    if (atv) {
        const auto& rc = std::get<AtvReceiverConfig>(cfg.receiver);
        atv_cfg = AtvConfig::for_modulation(cfg.modulation, rc.tolerance);
        if (rc.initial_threshold) atv_cfg.initial_threshold = *rc.initial_threshold;
        atv_cfg.window = rc.window;
        atv_state = AtvState::initial(atv_cfg);
    } else {
        fixed_threshold = std::get<FixedReceiver>(cfg.receiver).threshold;
    }

    TrialAccum acc;
    if (atv && want_trace) acc.trace.reserve(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i) {
        const std::size_t u = static_cast<std::size_t>(i);
        const Bit prev = i > 0 ? bits[u - 1] : 0;
        const Bit cur = bits[u];
        const Bit next = i + 1 < n ? bits[u + 1] : 0;
        const SlotComposition slot = sampler(prev, cur, next, rng);
        const double total = slot.total();

        Bit decoded = 0;
        if (atv) {
            if (want_trace) acc.trace.push_back(atv_state.threshold);
            AtvStep step = atv_step(atv_state, total, atv_cfg);
            decoded = step.decoded;
            atv_state = std::move(step.state);
        } else {
            decoded = demod_fixed(total, fixed_threshold);
        }

        if (decoded != cur) {
            if (cur == 1)
                ++acc.errors_one;
            else
                ++acc.errors_zero;
        }
        acc.sumsq_signal += static_cast<double>(slot.signal_count) * slot.signal_count;
        acc.sumsq_isi += static_cast<double>(slot.isi_count) * slot.isi_count;
    }
    return acc;
}

int decide_threads(int requested, int trials) {
    int threads = requested;
    if (threads <= 0) {
        if (const char* env = std::getenv("MCSIM_THREADS")) threads = std::atoi(env);
    }
    if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads < 1) threads = 1;
    return std::min(threads, trials);
}

} // namespace

SimResult run_experiment(const ExperimentConfig& cfg, int sweep_index, int thread_count) {
    cfg.validate();
    if (sweep_index < 0) throw std::invalid_argument("run_experiment: sweep_index must be >= 0");
    const AbsorptionProfile profile = build_profile(cfg.channel, cfg.ligand, cfg.max_offset);
    const NoiseParams noise = resolve_noise(cfg, profile);
    // Transmit and receive slots are aligned, so the later neighbor cannot
    // interfere with the current slot.
    const SlotSampler sampler(profile, cfg.modulation, noise, false);

    const int trials = cfg.num_trials;
    std::vector<TrialAccum> per_trial(static_cast<std::size_t>(trials));
    const auto run_one = [&](int t) {
        per_trial[static_cast<std::size_t>(t)] =
            simulate_trial(cfg, sampler,
                           split_seed(cfg.seed, static_cast<std::uint64_t>(sweep_index),
                                      static_cast<std::uint64_t>(t)),
                           t == 0);
    };

    const int threads = decide_threads(thread_count, trials);
    if (threads <= 1) {
        for (int t = 0; t < trials; ++t) run_one(t);
    } else {
        std::atomic<int> next{0};
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        for (int w = 0; w < threads; ++w) {
            pool.emplace_back([&] {
                for (int t = next.fetch_add(1); t < trials; t = next.fetch_add(1)) run_one(t);
            });
        }
        for (auto& th : pool) th.join();
    }

    // Deterministic reduction in trial order, independent of which thread
    // ran which trial.
    SimResult result;
    double sumsq_signal = 0.0;
    double sumsq_isi = 0.0;
    for (const TrialAccum& t : per_trial) {
        result.errors_one += t.errors_one;
        result.errors_zero += t.errors_zero;
        sumsq_signal += t.sumsq_signal;
        sumsq_isi += t.sumsq_isi;
    }
    const double total_slots = static_cast<double>(cfg.num_slots) * trials;
    result.total_slots = cfg.num_slots * trials;
    result.ber_empirical = static_cast<double>(result.errors_one + result.errors_zero) / total_slots;
    result.ci_halfwidth =
        1.96 * std::sqrt(std::max(0.0, result.ber_empirical * (1.0 - result.ber_empirical)) /
                         total_slots);
    result.sinr_measured =
        sinr_from_moments(sumsq_signal / total_slots, sumsq_isi / total_slots, noise);
    result.threshold_trace = std::move(per_trial.front().trace);
    result.sigma_used = noise.std_dev;
    return result;
}

std::vector<SweepPoint> run_sweep(const ExperimentConfig& cfg, int thread_count) {
    cfg.validate();
    if (cfg.sweep.empty()) throw ConfigError("sweep: at least one axis is required");
    std::size_t total = 1;
    for (const SweepAxis& axis : cfg.sweep) {
        if (axis.values.empty())
            throw ConfigError("sweep axis '" + axis.path + "': empty value list");
        total *= axis.values.size();
    }
    if (total > static_cast<std::size_t>(std::numeric_limits<int>::max()))
        throw ConfigError("sweep: too many points");

    std::vector<SweepPoint> points;
    points.reserve(total);
    for (std::size_t p = 0; p < total; ++p) {
        SweepPoint point;
        point.config = cfg;
        point.config.sweep.clear();
        // first axis outermost, last axis fastest
        std::size_t rem = p;
        std::vector<std::size_t> index(cfg.sweep.size(), 0);
        for (std::size_t a = cfg.sweep.size(); a-- > 0;) {
            index[a] = rem % cfg.sweep[a].values.size();
            rem /= cfg.sweep[a].values.size();
        }
        for (std::size_t a = 0; a < cfg.sweep.size(); ++a) {
            const double value = cfg.sweep[a].values[index[a]];
            apply_sweep_value(point.config, cfg.sweep[a].path, value);
            point.coordinates.emplace_back(cfg.sweep[a].path, value);
        }
        point.result = run_experiment(point.config, static_cast<int>(p), thread_count);
        points.push_back(std::move(point));
    }
    return points;
}

} // namespace mcsim
