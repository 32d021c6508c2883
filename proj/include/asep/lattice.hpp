#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace asep {

using Site = std::int64_t;

/// Site content: 0 = empty, k >= 1 = particle of color k. In two-species
/// mode only {0, 1, 2} occur, with 2 = first class and 1 = second class.
using Color = std::uint32_t;

inline constexpr Color kEmpty = 0;
inline constexpr Color kSecondClass = 1;
inline constexpr Color kFirstClass = 2;

/// Inclusive site range [lo, hi] the dynamics are confined to. Jumps that
/// would leave the window are suppressed (wall boundary).
struct Window {
    Site lo = 0;
    Site hi = 0;

    Site size() const { return hi - lo + 1; }
    bool contains(Site s) const { return s >= lo && s <= hi; }
    bool operator==(const Window&) const = default;
};

struct ModelParams {
    double p = 1.0;      // right-jump probability, in (1/2, 1]
    double q = 0.0;      // 1 - p
    double gamma = 1.0;  // asymmetry p - q, in (0, 1]
    int L = 0;

    static ModelParams make(double p, int L);
};

/// A windowed lattice configuration. Keeps three mutually consistent views:
///   occupancy       site -> color
///   rank -> site    the k-th leftmost occupied site (O(1) particle pick)
///   color -> site   inverse occupancy, colored mode only
///
/// Nearest-neighbour exclusion dynamics never reorder occupied sites, so a
/// particle's rank is constant: a move into vacancy rewrites one rank entry
/// and a swap of two adjacent particles touches no rank entry at all. Rank
/// indexing is also what makes a colored trajectory and its two-species
/// projection consume a shared uniform stream identically.
class Configuration {
public:
    Configuration() = default;

    static Configuration from_sites(Window window,
                                    const std::vector<std::pair<Site, Color>>& sites,
                                    bool colored);

    const Window& window() const { return window_; }
    bool colored() const { return colored_; }

    Color at(Site s) const { return occ_[idx(s)]; }
    std::size_t particle_count() const { return rank_site_.size(); }
    Site site_of_rank(std::size_t k) const { return rank_site_[k]; }

    bool has_color(Color c) const;
    Site position_of_color(Color c) const;  // throws if absent
    Color max_color() const { return max_color_; }

    /// Move the particle at `from` to the vacant adjacent site `to`.
    void move_particle(Site from, Site to) {
        const Color c = occ_[idx(from)];
        occ_[idx(to)] = c;
        occ_[idx(from)] = kEmpty;
        const std::int32_t rank = site_rank_[idx(from)];
        rank_site_[static_cast<std::size_t>(rank)] = to;
        site_rank_[idx(to)] = rank;
        site_rank_[idx(from)] = -1;
        if (colored_) color_site_[c] = to;
    }

    /// Exchange the contents of two adjacent occupied sites.
    void swap_adjacent(Site a, Site b) {
        Color& ca = occ_[idx(a)];
        Color& cb = occ_[idx(b)];
        std::swap(ca, cb);
        if (colored_) {
            color_site_[ca] = a;
            color_site_[cb] = b;
        }
    }

    /// Full-scan consistency check of all three views (debug/audit use).
    bool audit() const;

    /// Site-level equality (window and occupancy).
    bool same_occupancy(const Configuration& other) const {
        return window_ == other.window_ && occ_ == other.occ_;
    }

private:
    std::size_t idx(Site s) const { return static_cast<std::size_t>(s - window_.lo); }

    Window window_;
    bool colored_ = false;
    Color max_color_ = 0;
    std::vector<Color> occ_;
    std::vector<std::int32_t> site_rank_;  // -1 = vacant
    std::vector<Site> rank_site_;
    std::vector<Site> color_site_;  // colored mode; index by color, [0] unused
};

/// Light-cone truncation of the infinite lattice:
/// [-(ceil(safety*t_max) + L + 10), ceil(safety*t_max) + 10].
Window make_window(double t_max, int L, double safety = 5.0);

/// Two-species initial data: sites -L..0 second class, sites < -L first
/// class, sites > 0 empty.
Configuration init_two_species(const ModelParams& params, Window window);

/// Colored step initial data: site -n holds color n+1 for all sites in
/// [window.lo, 0], sites > 0 empty.
Configuration init_colored_step(Window window);

/// Single-species step: every site <= 0 occupied (color 1), sites > 0 empty.
Configuration init_asep_step(Window window);

/// One second-class particle at -L, every other site <= 0 first class.
/// With `empty_origin`, site 0 is left vacant instead (the alternative
/// reading of the initial data; only differs for L > 0).
Configuration init_single_second_class(int L, Window window, bool empty_origin = false);

}  // namespace asep
