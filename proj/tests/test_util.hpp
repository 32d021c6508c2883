#pragma once

#include <algorithm>
#include <deque>
#include <stdexcept>
#include <vector>

#include "asep/lattice.hpp"

// Deterministic uniform source for exercising the exact variate-consumption
// order of the kernels.
struct FakeStream {
    std::deque<double> values;

    double next_uniform() {
        if (values.empty()) throw std::runtime_error("FakeStream exhausted");
        const double v = values.front();
        values.pop_front();
        return v;
    }
};

// Two-sample Kolmogorov-Smirnov statistic (oracle for sampler checks).
inline double two_sample_ks(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double d = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] <= b[j])
            ++i;
        else
            ++j;
        const double fa = static_cast<double>(i) / a.size();
        const double fb = static_cast<double>(j) / b.size();
        d = std::max(d, std::abs(fa - fb));
    }
    return d;
}

// Single particle of the given color at site `at`.
inline asep::Configuration lone_particle(asep::Window w, asep::Site at,
                                         asep::Color color = asep::kSecondClass) {
    return asep::Configuration::from_sites(w, {{at, color}}, false);
}
