#include "asep/stats.hpp"

namespace asep {

double speed_survival(double s, const SpeedLaw& law) {
    if (law.alpha <= 0.0) throw std::domain_error("speed_survival: alpha must be > 0");
    if (law.L < 0) throw std::domain_error("speed_survival: L must be >= 0");
    if (s <= -law.alpha) return 1.0;
    if (s >= law.alpha) return 0.0;
    return std::pow((1.0 - s / law.alpha) / 2.0, law.L + 1);
}

double block_prob_target(double s, double gamma, int L) {
    if (gamma <= 0.0) throw std::domain_error("block_prob_target: gamma must be > 0");
    if (std::abs(s) > gamma) throw std::domain_error("block_prob_target: |s| must be <= gamma");
    return std::pow((1.0 - s / gamma) / 2.0, L + 1);
}

EmpiricalCdf::EmpiricalCdf(std::vector<double> samples) : samples_(std::move(samples)) {
    if (samples_.empty()) throw std::domain_error("EmpiricalCdf: empty sample");
    std::sort(samples_.begin(), samples_.end());
}

double EmpiricalCdf::operator()(double x) const {
    const auto it = std::upper_bound(samples_.begin(), samples_.end(), x);
    return static_cast<double>(it - samples_.begin()) / static_cast<double>(samples_.size());
}

double EmpiricalCdf::median() const {
    const std::size_t n = samples_.size();
    if (n % 2 == 1) return samples_[n / 2];
    return 0.5 * (samples_[n / 2 - 1] + samples_[n / 2]);
}

namespace {

double fit_sse(const std::vector<double>& xs, const std::vector<double>& fhat, int L,
               double alpha) {
    const SpeedLaw law{alpha, L};
    double sse = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = fhat[i] - speed_cdf(xs[i], law);
        sse += r * r;
    }
    return sse;
}

}  // namespace

AlphaFit fit_alpha(const EmpiricalCdf& ecdf, int L) {
    if (ecdf.size() < 10) throw std::domain_error("fit_alpha: need at least 10 samples");
    const auto& xs = ecdf.samples();
    if (xs.front() == xs.back()) throw std::domain_error("fit_alpha: degenerate sample");

    std::vector<double> fhat(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) fhat[i] = ecdf(xs[i]);

    const double lo = 1e-3, hi = 1.0;
    auto sse = [&](double a) { return fit_sse(xs, fhat, L, a); };

    // coarse unimodality probe; a descending objective at both ends of the
    // bracket means golden-section cannot be trusted
    constexpr int kProbe = 21;
    double best_a = lo, best_v = sse(lo);
    double prev_v = best_v;
    int argmin = 0;
    bool rose_then_fell = false;
    bool rising = false;
    for (int i = 1; i < kProbe; ++i) {
        const double a = lo + (hi - lo) * i / (kProbe - 1);
        const double v = sse(a);
        if (v < best_v) {
            best_v = v;
            best_a = a;
            argmin = i;
        }
        if (v > prev_v) rising = true;
        if (rising && v < prev_v) rose_then_fell = true;
        prev_v = v;
    }

    if (rose_then_fell) {
        // multiple descents detected: exhaustive 1e-3-step grid scan
        for (double a = lo; a <= hi + 1e-12; a += 1e-3) {
            const double v = sse(a);
            if (v < best_v) {
                best_v = v;
                best_a = a;
            }
        }
        return AlphaFit{best_a, best_v};
    }

    // golden-section within the probe neighbours of the coarse minimum
    const double step = (hi - lo) / (kProbe - 1);
    double a = std::max(lo, lo + (argmin - 1) * step);
    double b = std::min(hi, lo + (argmin + 1) * step);
    constexpr double kInvPhi = 0.6180339887498949;
    double x1 = b - kInvPhi * (b - a);
    double x2 = a + kInvPhi * (b - a);
    double f1 = sse(x1), f2 = sse(x2);
    while (b - a > 1e-4) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kInvPhi * (b - a);
            f1 = sse(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kInvPhi * (b - a);
            f2 = sse(x2);
        }
    }
    const double mid = 0.5 * (a + b);
    return AlphaFit{mid, sse(mid)};
}

double binomial_se(double phat, std::size_t n) {
    if (n == 0) throw std::domain_error("binomial_se: n must be >= 1");
    return std::sqrt(phat * (1.0 - phat) / static_cast<double>(n));
}

}  // namespace asep
