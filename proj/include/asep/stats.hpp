#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace asep {

/// Survival form ((1 - s/alpha)/2)^(L+1) on [-alpha, alpha]. alpha = gamma
/// for the two-species speed law; a free scale when fitting.
struct SpeedLaw {
    double alpha = 1.0;
    int L = 0;
};

/// P(U >= s) for the speed law: 1 below -alpha, 0 above alpha, else
/// ((1 - s/alpha)/2)^(L+1).
double speed_survival(double s, const SpeedLaw& law);

/// P(U <= s); the complement, convenient for KS comparisons.
inline double speed_cdf(double s, const SpeedLaw& law) { return 1.0 - speed_survival(s, law); }

/// Inverse-survival sampling: alpha * (1 - 2 * V^(1/(L+1))). Agrees in law
/// with the minimum of L+1 independent uniforms on [-alpha, alpha].
template <class Source>
double sample_speed_law(const SpeedLaw& law, Source& stream) {
    if (law.alpha <= 0.0) throw std::domain_error("sample_speed_law: alpha must be > 0");
    const double v = stream.next_uniform();
    return law.alpha * (1.0 - 2.0 * std::pow(v, 1.0 / (law.L + 1)));
}

/// Limiting (L+1)-block probability at speed s: ((1 - s/gamma)/2)^(L+1),
/// i.e. sigma^((L+1)/2) with sigma = ((1 - s/gamma)/2)^2. Requires |s| <= gamma.
double block_prob_target(double s, double gamma, int L);

class EmpiricalCdf {
public:
    explicit EmpiricalCdf(std::vector<double> samples);

    /// F-hat(x) = (#samples <= x) / n.
    double operator()(double x) const;

    std::size_t size() const { return samples_.size(); }
    const std::vector<double>& samples() const { return samples_; }
    double median() const;

private:
    std::vector<double> samples_;  // sorted ascending
};

/// KS statistic against a reference CDF:
/// max_i max(|i/n - F(x_(i))|, |(i-1)/n - F(x_(i))|).
template <class Cdf>
double ks_distance(const EmpiricalCdf& ecdf, Cdf&& cdf) {
    const auto& xs = ecdf.samples();
    const std::size_t n = xs.size();
    if (n == 0) throw std::domain_error("ks_distance: empty sample");
    double d = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double f = cdf(xs[i]);
        d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
        d = std::max(d, std::abs(static_cast<double>(i) / n - f));
    }
    return d;
}

struct AlphaFit {
    double alpha = 0.0;
    double sse = 0.0;
};

/// Least-squares fit of the speed-law scale: minimizes
/// sum_i (F-hat(x_i) - speed_cdf(x_i; alpha, L))^2 over alpha in (0, 1] by
/// golden-section search (tolerance 1e-4), with a 1e-3-step grid scan as
/// fallback when the objective does not look unimodal on a coarse probe.
AlphaFit fit_alpha(const EmpiricalCdf& ecdf, int L);

/// sqrt(phat * (1 - phat) / n).
double binomial_se(double phat, std::size_t n);

}  // namespace asep
