#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>

#include "asep/lattice.hpp"

namespace asep {

enum class Mode { Single, TwoSpecies, Colored };
enum class Direction : std::uint8_t { Left, Right };

struct Event {
    double time = 0.0;  // absolute
    Site site = 0;      // mover's site before the jump
    Direction dir = Direction::Right;
    bool accepted = false;
};

struct SimState {
    Configuration config;
    ModelParams params;
    Mode mode = Mode::Single;
    double clock = 0.0;
};

/// Colored swap rule: a mover exchanges with the target iff the target's
/// content (vacancy = 0) is strictly lower. Specializes to the single- and
/// two-species rules under the {0,1,2} encoding.
inline bool swap_permitted(Color src, Color dst) { return dst < src; }

/// Uniformization: total rate N, waiting time -ln(u1)/N, mover = the
/// floor(u2*N)-th leftmost particle, direction right iff u3 < p. Exactly
/// three uniforms, in this order; that order is part of the replay contract.
template <class Source>
Event next_event(const SimState& state, Source& stream) {
    const std::size_t n = state.config.particle_count();
    if (n == 0) throw std::runtime_error("next_event: empty configuration");
    const double u1 = stream.next_uniform();
    const double u2 = stream.next_uniform();
    const double u3 = stream.next_uniform();
    const double dt = -std::log(u1 > 0.0 ? u1 : 0x1.0p-64) / static_cast<double>(n);
    std::size_t k = static_cast<std::size_t>(u2 * static_cast<double>(n));
    if (k >= n) k = n - 1;
    return Event{state.clock + dt, state.config.site_of_rank(k),
                 u3 < state.params.p ? Direction::Right : Direction::Left, false};
}

/// Applies an event: if the target lies in the window and the swap rule
/// permits, the two site contents are exchanged; otherwise nothing moves
/// (suppressed moves are recorded as rejected, not errors). Advances the
/// clock either way and sets event.accepted.
inline void apply_event(SimState& state, Event& event) {
    const Site a = event.site;
    const Site b = a + (event.dir == Direction::Right ? 1 : -1);
    state.clock = event.time;
    event.accepted = false;
    if (!state.config.window().contains(b)) return;
    const Color src = state.config.at(a);
    const Color dst = state.config.at(b);
    if (!swap_permitted(src, dst)) return;
    if (dst == kEmpty)
        state.config.move_particle(a, b);
    else
        state.config.swap_adjacent(a, b);
    event.accepted = true;
}

struct NullObserver {
    template <class... Args>
    void operator()(const Args&...) const {}
};

/// Samples and applies events until the next event time would exceed t_end;
/// leaves clock == t_end. The observer sees every applied event in order.
template <class Source, class Observer = NullObserver>
void run_until(SimState& state, double t_end, Source& stream, Observer&& observer = {}) {
    if (t_end < state.clock) throw std::invalid_argument("run_until: t_end before clock");
    for (;;) {
        Event event = next_event(state, stream);
        if (event.time > t_end) break;
        apply_event(state, event);
        observer(event, state);
    }
    state.clock = t_end;
}

inline Site position_of_color(const SimState& state, Color c) {
    return state.config.position_of_color(c);
}

inline Site leftmost_of_colors(const SimState& state, std::span<const Color> colors) {
    if (colors.empty()) throw std::invalid_argument("leftmost_of_colors: empty color set");
    Site best = state.config.window().hi + 1;
    for (Color c : colors) best = std::min(best, state.config.position_of_color(c));
    return best;
}

inline Site leftmost_second_class(const SimState& state) {
    const auto& cfg = state.config;
    for (std::size_t k = 0; k < cfg.particle_count(); ++k) {
        const Site s = cfg.site_of_rank(k);
        if (cfg.at(s) == kSecondClass) return s;
    }
    throw std::runtime_error("leftmost_second_class: no second-class particle");
}

}  // namespace asep
