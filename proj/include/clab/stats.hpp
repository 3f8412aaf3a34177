#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace clab::stats {

double mean(const std::vector<double>& x);
double variance(const std::vector<double>& x); // unbiased
double correlation(const std::vector<double>& x, const std::vector<double>& y);

struct Histogram {
    double lo = 0.0;
    double bin_width = 1.0;
    std::vector<std::uint64_t> counts;
    std::uint64_t total = 0;    // all samples offered
    std::uint64_t overflow = 0; // samples outside [lo, lo + n*width)

    Histogram() = default;
    Histogram(double lo_, double bin_width_, int n_bins);

    void add(double x);
    int n_bins() const { return static_cast<int>(counts.size()); }
    double bin_lo(int i) const { return lo + i * bin_width; }
    double bin_hi(int i) const { return lo + (i + 1) * bin_width; }
    // Fraction of samples in bin i.
    double mass(int i) const;
};

// Kolmogorov-Smirnov statistic of samples against a reference CDF.
double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);

// Anderson-Darling A*^2 against normality, mean and variance estimated from
// the sample (D'Agostino-Stephens small-sample correction applied).
// Reject normality at the 1% level when the statistic exceeds 1.035.
double anderson_darling_normal(std::vector<double> samples);
inline constexpr double kAndersonDarling1pc = 1.035;

struct Interval {
    double lo = 0.0;
    double hi = 1.0;
};

// Normal-approximation binomial confidence interval around k/n.
Interval binomial_ci(std::uint64_t k, std::uint64_t n, double z);
inline constexpr double kZ99 = 2.5758293035489004;

double normal_cdf(double x);

} // namespace clab::stats
