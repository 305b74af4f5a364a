#include "mcsim/stats.hpp"

#include <cmath>
#include <stdexcept>

namespace mcsim {

std::vector<double> binomial_pmf(int n, double p) {
    if (n < 0) throw std::domain_error("binomial_pmf: n must be >= 0");
    if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("binomial_pmf: p must be in [0, 1]");
    std::vector<double> pmf(static_cast<std::size_t>(n) + 1, 0.0);
    if (p == 0.0) {
        pmf.front() = 1.0;
        return pmf;
    }
    if (p == 1.0) {
        pmf.back() = 1.0;
        return pmf;
    }
    const double log_p = std::log(p);
    const double log_q = std::log1p(-p);
    const double log_n_fact = std::lgamma(n + 1.0);
    for (int k = 0; k <= n; ++k) {
        const double log_v = log_n_fact - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) +
                             k * log_p + (n - k) * log_q;
        pmf[static_cast<std::size_t>(k)] = std::exp(log_v);
    }
    return pmf;
}

double binomial_pmf_at(int n, int k, double p) {
    if (n < 0) throw std::domain_error("binomial_pmf_at: n must be >= 0");
    if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("binomial_pmf_at: p must be in [0, 1]");
    if (k < 0 || k > n) return 0.0;
    if (p == 0.0) return k == 0 ? 1.0 : 0.0;
    if (p == 1.0) return k == n ? 1.0 : 0.0;
    const double log_v = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) +
                         k * std::log(p) + (n - k) * std::log1p(-p);
    return std::exp(log_v);
}

double normal_cdf(double z) {
    return 0.5 * std::erfc(-z / std::sqrt(2.0));
}

std::vector<double> convolve(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("convolve: empty operand");
    std::vector<double> out(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0.0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    }
    return out;
}

} // namespace mcsim
