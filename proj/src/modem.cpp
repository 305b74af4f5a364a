#include "mcsim/modem.hpp"

#include <algorithm>
#include <stdexcept>

namespace mcsim {

int modulate(Bit bit, const ModulationParams& mod) {
    if (bit != 0 && bit != 1) throw std::domain_error("modulate: bit must be 0 or 1");
    mod.validate();
    return bit == 1 ? mod.molecules_per_one : 0;
}

Bit demod_fixed(double n_rx, double threshold) {
    return n_rx >= threshold ? 1 : 0;
}

AtvConfig AtvConfig::for_modulation(const ModulationParams& mod, double tolerance) {
    mod.validate();
    AtvConfig cfg;
    cfg.tolerance = tolerance;
    cfg.threshold_min = 0.0;
    cfg.threshold_max = static_cast<double>(mod.molecules_per_one);
    cfg.initial_threshold = cfg.threshold_max / 2.0;
    cfg.validate();
    return cfg;
}

void AtvConfig::validate() const {
    if (!(tolerance >= 0.0)) throw std::domain_error("atv.tolerance must be >= 0");
    if (!(threshold_min <= initial_threshold && initial_threshold <= threshold_max))
        throw std::domain_error("atv.initial_threshold must lie in [threshold_min, threshold_max]");
    if (window < 0) throw std::domain_error("atv.window must be >= 0");
}

AtvState AtvState::initial(const AtvConfig& cfg) {
    cfg.validate();
    AtvState state;
    state.threshold = cfg.initial_threshold;
    return state;
}

AtvStep atv_step(const AtvState& state, double n_rx, const AtvConfig& cfg) {
    cfg.validate();
    AtvStep step{demod_fixed(n_rx, state.threshold), state};
    AtvState& s = step.state;

    if (step.decoded == 1) {
        s.sum_ones += n_rx;
        ++s.count_ones;
    } else {
        s.sum_zeros += n_rx;
        ++s.count_zeros;
    }
    ++s.slot_index;

    if (cfg.window > 0) {
        s.history.emplace_back(step.decoded, n_rx);
        if (static_cast<long>(s.history.size()) > cfg.window) {
            const auto [old_bit, old_value] = s.history.front();
            s.history.pop_front();
            if (old_bit == 1) {
                s.sum_ones -= old_value;
                --s.count_ones;
            } else {
                s.sum_zeros -= old_value;
                --s.count_zeros;
            }
        }
    }

    // No update until both symbols have been observed; the means are
    // undefined before that.
    if (s.count_ones > 0 && s.count_zeros > 0) {
        const double a = s.threshold - s.sum_zeros / static_cast<double>(s.count_zeros);
        const double b = s.sum_ones / static_cast<double>(s.count_ones) - s.threshold;
        if (a - b > cfg.tolerance)
            s.threshold -= 1.0;
        else if (a - b < -cfg.tolerance)
            s.threshold += 1.0;
        s.threshold = std::clamp(s.threshold, cfg.threshold_min, cfg.threshold_max);
    }
    return step;
}

} // namespace mcsim
