#include "mcsim/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace mcsim {

void ChannelParams::validate() const {
    if (!(diffusion_coefficient > 0.0))
        throw std::domain_error("channel.diffusion_coefficient must be > 0");
    if (!(distance > 0.0)) throw std::domain_error("channel.distance must be > 0");
    if (!(slot_length > 0.0)) throw std::domain_error("channel.slot_length must be > 0");
}

void LigandParams::validate() const {
    if (!(binding_rate > 0.0)) throw std::domain_error("ligand.binding_rate must be > 0");
    if (!(releasing_rate > 0.0)) throw std::domain_error("ligand.releasing_rate must be > 0");
    if (!(receptor_density > 0.0)) throw std::domain_error("ligand.receptor_density must be > 0");
}

double diffusion_coefficient(const PhysicalMedium& medium) {
    if (!(medium.boltzmann_constant > 0.0) || !(medium.temperature > 0.0) ||
        !(medium.dynamic_viscosity > 0.0) || !(medium.hydraulic_radius > 0.0)) {
        throw std::domain_error("medium: all fields must be > 0");
    }
    const double d_si = medium.boltzmann_constant * medium.temperature /
                        (6.0 * M_PI * medium.dynamic_viscosity * medium.hydraulic_radius);
    return d_si * 1e12; // m^2/s -> um^2/s
}

double green_function(double x, double t, double d) {
    if (!(t > 0.0)) throw std::domain_error("green_function: t must be > 0");
    if (!(d > 0.0)) throw std::domain_error("green_function: D must be > 0");
    return std::pow(4.0 * M_PI * d * t, -1.5) * std::exp(-x * x / (4.0 * d * t));
}

double absorption_cdf(double x, double t, double d) {
    if (!(x > 0.0)) throw std::domain_error("absorption_cdf: x must be > 0");
    if (!(d > 0.0)) throw std::domain_error("absorption_cdf: D must be > 0");
    if (!(t >= 0.0)) throw std::domain_error("absorption_cdf: t must be >= 0");
    if (t == 0.0) return 0.0; // limit: erfc(inf)
    return std::erfc(x / std::sqrt(4.0 * d * t));
}

double slot_absorption_prob(int offset, const ChannelParams& ch) {
    if (offset < 0) throw std::domain_error("slot_absorption_prob: offset must be >= 0");
    ch.validate();
    const double upper = absorption_cdf(ch.distance, (offset + 1.0) * ch.slot_length,
                                        ch.diffusion_coefficient);
    const double lower =
        absorption_cdf(ch.distance, offset * ch.slot_length, ch.diffusion_coefficient);
    return std::max(0.0, upper - lower);
}

ScaledProb ligand_scale(double p_raw, double factor) {
    if (!(p_raw >= 0.0 && p_raw <= 1.0))
        throw std::domain_error("ligand_scale: p_raw must be in [0, 1]");
    if (!(factor > 0.0)) throw std::domain_error("ligand_scale: factor must be > 0");
    const double scaled = factor * p_raw;
    if (scaled > 1.0) return {1.0, true};
    return {scaled, false};
}

ScaledProb ligand_scale(double p_raw, const LigandParams& lig) {
    lig.validate();
    return ligand_scale(p_raw, lig.factor());
}

double time_to_peak(double r, double d) {
    if (!(r > 0.0)) throw std::domain_error("time_to_peak: r must be > 0");
    if (!(d > 0.0)) throw std::domain_error("time_to_peak: D must be > 0");
    return r * r / (6.0 * d);
}

double AbsorptionProfile::at(int offset) const {
    if (offset < 0 || offset > max_offset)
        throw std::out_of_range("AbsorptionProfile: offset outside [0, max_offset]");
    return probabilities[static_cast<std::size_t>(offset)];
}

AbsorptionProfile build_profile(const ChannelParams& ch, const LigandParams& lig,
                                int max_offset) {
    if (max_offset < 1) throw std::domain_error("build_profile: max_offset must be >= 1");
    ch.validate();
    lig.validate();
    const double factor = lig.factor();
    AbsorptionProfile profile;
    profile.max_offset = max_offset;
    profile.probabilities.reserve(static_cast<std::size_t>(max_offset) + 1);
    for (int k = 0; k <= max_offset; ++k) {
        const ScaledProb scaled = ligand_scale(slot_absorption_prob(k, ch), factor);
        profile.probabilities.push_back(scaled.value);
        profile.clamped = profile.clamped || scaled.clamped;
    }
    profile.truncated_tail = 1.0 - absorption_cdf(ch.distance, (max_offset + 1.0) * ch.slot_length,
                                                  ch.diffusion_coefficient);
    return profile;
}

} // namespace mcsim
