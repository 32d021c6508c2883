#include "asep/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace asep {

ModelParams ModelParams::make(double p, int L) {
    if (!(p > 0.5) || !(p <= 1.0))
        throw std::invalid_argument("ModelParams: p must lie in (1/2, 1]");
    if (L < 0) throw std::invalid_argument("ModelParams: L must be non-negative");
    ModelParams m;
    m.p = p;
    m.q = 1.0 - p;
    m.gamma = p - m.q;
    m.L = L;
    return m;
}

Configuration Configuration::from_sites(Window window,
                                        const std::vector<std::pair<Site, Color>>& sites,
                                        bool colored) {
    if (window.lo > window.hi) throw std::invalid_argument("Configuration: empty window");
    Configuration c;
    c.window_ = window;
    c.colored_ = colored;
    c.occ_.assign(static_cast<std::size_t>(window.size()), kEmpty);
    c.site_rank_.assign(static_cast<std::size_t>(window.size()), -1);

    auto sorted = sites;
    std::sort(sorted.begin(), sorted.end());
    c.rank_site_.reserve(sorted.size());
    for (const auto& [s, col] : sorted) {
        if (!window.contains(s)) throw std::invalid_argument("Configuration: site outside window");
        if (col == kEmpty) throw std::invalid_argument("Configuration: color 0 is vacancy");
        if (c.occ_[c.idx(s)] != kEmpty)
            throw std::invalid_argument("Configuration: exclusion violated");
        c.occ_[c.idx(s)] = col;
        c.site_rank_[c.idx(s)] = static_cast<std::int32_t>(c.rank_site_.size());
        c.rank_site_.push_back(s);
        c.max_color_ = std::max(c.max_color_, col);
    }
    if (colored) {
        c.color_site_.assign(static_cast<std::size_t>(c.max_color_) + 1, window.lo - 1);
        for (const auto& [s, col] : sorted) {
            if (c.color_site_[col] >= window.lo)
                throw std::invalid_argument("Configuration: duplicate color in colored mode");
            c.color_site_[col] = s;
        }
    }
    return c;
}

bool Configuration::has_color(Color c) const {
    return colored_ && c >= 1 && c <= max_color_ && color_site_[c] >= window_.lo;
}

Site Configuration::position_of_color(Color c) const {
    if (!has_color(c)) throw std::out_of_range("Configuration: color not present");
    return color_site_[c];
}

bool Configuration::audit() const {
    std::size_t n_occupied = 0;
    for (Site s = window_.lo; s <= window_.hi; ++s) {
        const Color c = occ_[idx(s)];
        const std::int32_t rank = site_rank_[idx(s)];
        if (c == kEmpty) {
            if (rank != -1) return false;
        } else {
            ++n_occupied;
            if (rank < 0 || static_cast<std::size_t>(rank) >= rank_site_.size()) return false;
            if (rank_site_[static_cast<std::size_t>(rank)] != s) return false;
            if (colored_ && color_site_[c] != s) return false;
        }
    }
    if (n_occupied != rank_site_.size()) return false;
    // ranks must enumerate occupied sites left to right
    for (std::size_t k = 1; k < rank_site_.size(); ++k)
        if (rank_site_[k - 1] >= rank_site_[k]) return false;
    if (colored_) {
        std::size_t n_colors = 0;
        for (Color c = 1; c <= max_color_; ++c)
            if (color_site_[c] >= window_.lo) {
                if (occ_[idx(color_site_[c])] != c) return false;
                ++n_colors;
            }
        if (n_colors != n_occupied) return false;
    }
    return true;
}

Window make_window(double t_max, int L, double safety) {
    if (t_max < 0) throw std::invalid_argument("make_window: t_max must be >= 0");
    if (safety < 1) throw std::invalid_argument("make_window: safety must be >= 1");
    const Site reach = static_cast<Site>(std::ceil(safety * t_max));
    return Window{-(reach + L + 10), reach + 10};
}

Configuration init_two_species(const ModelParams& params, Window window) {
    const int L = params.L;
    if (window.lo > -L - 1 || window.hi < 1)
        throw std::invalid_argument("init_two_species: window too small");
    std::vector<std::pair<Site, Color>> sites;
    sites.reserve(static_cast<std::size_t>(-window.lo) + 1);
    for (Site s = window.lo; s <= 0; ++s)
        sites.emplace_back(s, s >= -L ? kSecondClass : kFirstClass);
    return Configuration::from_sites(window, sites, /*colored=*/false);
}

Configuration init_colored_step(Window window) {
    if (window.lo > 0 || window.hi < 0)
        throw std::invalid_argument("init_colored_step: window must contain 0");
    std::vector<std::pair<Site, Color>> sites;
    sites.reserve(static_cast<std::size_t>(-window.lo) + 1);
    for (Site s = window.lo; s <= 0; ++s)
        sites.emplace_back(s, static_cast<Color>(1 - s));  // site -n holds color n+1
    return Configuration::from_sites(window, sites, /*colored=*/true);
}

Configuration init_asep_step(Window window) {
    if (window.lo > 0 || window.hi < 0)
        throw std::invalid_argument("init_asep_step: window must contain 0");
    std::vector<std::pair<Site, Color>> sites;
    sites.reserve(static_cast<std::size_t>(-window.lo) + 1);
    for (Site s = window.lo; s <= 0; ++s) sites.emplace_back(s, kSecondClass);
    return Configuration::from_sites(window, sites, /*colored=*/false);
}

Configuration init_single_second_class(int L, Window window, bool empty_origin) {
    if (L < 0) throw std::invalid_argument("init_single_second_class: L must be >= 0");
    if (window.lo > -L || window.hi < 0)
        throw std::invalid_argument("init_single_second_class: window too small");
    std::vector<std::pair<Site, Color>> sites;
    sites.reserve(static_cast<std::size_t>(-window.lo) + 1);
    for (Site s = window.lo; s <= 0; ++s) {
        if (s == 0 && empty_origin && L > 0) continue;
        sites.emplace_back(s, s == -L ? kSecondClass : kFirstClass);
    }
    return Configuration::from_sites(window, sites, /*colored=*/false);
}

}  // namespace asep
