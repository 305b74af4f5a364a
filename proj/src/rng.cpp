#include "mcsim/rng.hpp"

#include <algorithm>
#include <cmath>

#include "mcsim/stats.hpp"

namespace mcsim {

namespace {

std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

} // namespace

std::uint64_t split_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t substream) {
    std::uint64_t z = mix64(master ^ 0xA0761D6478BD642Full);
    z = mix64(z ^ mix64(stream));
    z = mix64(z ^ mix64(substream ^ 0xE7037ED1A0B428DBull));
    return z;
}

double Rng::normal(double sigma) {
    if (sigma == 0.0) return 0.0;
    if (has_spare_) {
        has_spare_ = false;
        return spare_ * sigma;
    }
    // Box-Muller; u1 in (0, 1] keeps the log finite.
    const double u1 = (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * M_PI * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle) * sigma;
}

BinomialSampler::BinomialSampler(int n, double p) : n_(n) {
    const std::vector<double> pmf = binomial_pmf(n, p);
    cdf_.resize(pmf.size());
    double acc = 0.0;
    for (std::size_t k = 0; k < pmf.size(); ++k) {
        acc += pmf[k];
        cdf_[k] = acc;
    }
    cdf_.back() = 1.0; // absorb rounding so inversion always lands
}

int BinomialSampler::operator()(Rng& rng) const {
    const double u = rng.uniform01();
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    return static_cast<int>(it - cdf_.begin());
}

} // namespace mcsim
