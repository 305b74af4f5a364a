#pragma once

#include <vector>

namespace mcsim {

// Physical constants of the fluid medium, SI units. Only used to derive the
// diffusion coefficient; everything downstream works in um / s / um^2/s.
struct PhysicalMedium {
    double boltzmann_constant = 1.380649e-23; // J/K
    double temperature = 300.0;               // K
    double dynamic_viscosity = 1e-3;          // Pa*s
    double hydraulic_radius = 1e-9;           // m
};

// Link geometry and slot timing.
struct ChannelParams {
    double diffusion_coefficient = 10.0; // um^2/s
    double distance = 4.0;               // um, transmitter to receiver
    double slot_length = 4.0;            // s

    void validate() const;
};

// Receptor kinetics of the ligand receiver. A raw absorption probability is
// scaled by binding_rate * receptor_density / releasing_rate.
struct LigandParams {
    double binding_rate = 0.1;
    double releasing_rate = 0.08;
    double receptor_density = 1.0; // umol/l

    double factor() const { return binding_rate * receptor_density / releasing_rate; }
    void validate() const;
};

// Stokes-Einstein coefficient k_B T / (6 pi eta R_H), converted to um^2/s.
double diffusion_coefficient(const PhysicalMedium& medium);

// Single-molecule spatial density (4 pi D t)^(-3/2) exp(-x^2 / 4Dt).
double green_function(double x, double t, double d);

// Probability that a molecule released at distance x has been absorbed by
// time t: erfc(x / sqrt(4Dt)). 0 at t = 0, increasing in t, limit 1.
double absorption_cdf(double x, double t, double d);

// Probability of absorption during the slot `offset` slots after release:
// G(r, (offset+1) tau) - G(r, offset tau).
double slot_absorption_prob(int offset, const ChannelParams& ch);

struct ScaledProb {
    double value = 0.0;
    bool clamped = false; // the unscaled product exceeded 1
};

// Applies the receptor factor aQ/b and clamps the result to [0, 1].
ScaledProb ligand_scale(double p_raw, double factor);
ScaledProb ligand_scale(double p_raw, const LigandParams& lig);

// Time at which green_function(r, t, D) peaks: r^2 / (6 D).
double time_to_peak(double r, double d);

inline constexpr int kDefaultMaxOffset = 50;

// Receptor-scaled per-slot absorption probabilities indexed by slot offset.
struct AbsorptionProfile {
    std::vector<double> probabilities; // offsets 0..max_offset
    int max_offset = 0;
    bool clamped = false;        // some entry hit the [0, 1] clamp
    double truncated_tail = 0.0; // raw absorption mass beyond max_offset

    double at(int offset) const;
    double operator[](int offset) const { return at(offset); }
};

AbsorptionProfile build_profile(const ChannelParams& ch, const LigandParams& lig,
                                int max_offset = kDefaultMaxOffset);

} // namespace mcsim
