#include "clab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace clab::stats {

double mean(const std::vector<double>& x) {
    if (x.empty()) throw std::invalid_argument("mean of empty sample");
    double s = 0.0;
    for (double v : x) s += v;
    return s / static_cast<double>(x.size());
}

double variance(const std::vector<double>& x) {
    if (x.size() < 2) throw std::invalid_argument("variance needs at least two samples");
    const double m = mean(x);
    double s = 0.0;
    for (double v : x) s += (v - m) * (v - m);
    return s / static_cast<double>(x.size() - 1);
}

double correlation(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw std::invalid_argument("correlation: size mismatch");
    const double mx = mean(x), my = mean(y);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

Histogram::Histogram(double lo_, double bin_width_, int n_bins) : lo(lo_), bin_width(bin_width_) {
    if (bin_width_ <= 0.0 || n_bins < 1) throw std::invalid_argument("bad histogram shape");
    counts.assign(static_cast<std::size_t>(n_bins), 0);
}

void Histogram::add(double x) {
    ++total;
    const double u = (x - lo) / bin_width;
    if (u < 0.0 || u >= static_cast<double>(counts.size())) {
        ++overflow;
        return;
    }
    ++counts[static_cast<std::size_t>(u)];
}

double Histogram::mass(int i) const {
    if (total == 0) return 0.0;
    return static_cast<double>(counts[static_cast<std::size_t>(i)]) / static_cast<double>(total);
}

double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
    if (samples.empty()) throw std::invalid_argument("ks: empty sample");
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = cdf(samples[i]);
        d = std::max(d, std::abs(f - static_cast<double>(i) / n));
        d = std::max(d, std::abs(f - static_cast<double>(i + 1) / n));
    }
    return d;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double anderson_darling_normal(std::vector<double> samples) {
    const std::size_t n = samples.size();
    if (n < 8) throw std::invalid_argument("anderson-darling: sample too small");
    const double m = mean(samples);
    const double sd = std::sqrt(variance(samples));
    for (double& v : samples) v = (v - m) / sd;
    std::sort(samples.begin(), samples.end());
    double a2 = -static_cast<double>(n);
    const double nn = static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double fi = normal_cdf(samples[i]);
        const double fj = normal_cdf(samples[n - 1 - i]);
        const double li = std::log(std::max(fi, 1e-300));
        const double lj = std::log(std::max(1.0 - fj, 1e-300));
        a2 -= (2.0 * static_cast<double>(i) + 1.0) / nn * (li + lj);
    }
    return a2 * (1.0 + 0.75 / nn + 2.25 / (nn * nn));
}

Interval binomial_ci(std::uint64_t k, std::uint64_t n, double z) {
    if (n == 0) return {0.0, 1.0};
    const double p = static_cast<double>(k) / static_cast<double>(n);
    const double half = z * std::sqrt(p * (1.0 - p) / static_cast<double>(n));
    return {std::max(0.0, p - half), std::min(1.0, p + half)};
}

} // namespace clab::stats
