#pragma once

#include <deque>
#include <utility>

#include "mcsim/classified.hpp"

namespace mcsim {

// OOK mapping: M molecules for a one, silence for a zero.
int modulate(Bit bit, const ModulationParams& mod);

// Fixed-threshold rule; ties decode to one.
Bit demod_fixed(double n_rx, double threshold);

struct AtvConfig {
    double tolerance = 30.0; // mu, molecules
    double initial_threshold = 250.0;
    double threshold_min = 0.0;
    double threshold_max = 500.0;
    // Number of most recent decisions kept in the running sums; 0 keeps all
    // of them (cumulative from the first slot).
    int window = 0;

    // tolerance mu with threshold M/2 clamped to [0, M].
    static AtvConfig for_modulation(const ModulationParams& mod, double tolerance);

    void validate() const;
};

// Learning state of the adaptive receiver. The sums and counters track the
// receiver's own decisions, not ground truth.
struct AtvState {
    double threshold = 0.0;
    long count_ones = 0;
    long count_zeros = 0;
    double sum_ones = 0.0;
    double sum_zeros = 0.0;
    long slot_index = 0;
    std::deque<std::pair<Bit, double>> history; // populated only when window > 0

    static AtvState initial(const AtvConfig& cfg);
};

struct AtvStep {
    Bit decoded = 0;
    AtvState state;
};

// One slot of the adaptive receiver: decode with the incoming threshold,
// fold the observation into the matching running mean, then move the
// threshold by one molecule when the two mean-to-threshold distances
// A = N_T - mean(zeros) and B = mean(ones) - N_T differ by more than the
// tolerance. The threshold never moves until both symbols have been seen,
// and stays inside [threshold_min, threshold_max].
AtvStep atv_step(const AtvState& state, double n_rx, const AtvConfig& cfg);

} // namespace mcsim
