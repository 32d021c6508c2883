#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "asep/dynamics.hpp"
#include "asep/lattice.hpp"

namespace asep {

/// Two-species particle label: first-class index k >= 1 or starred
/// second-class index k* with k in [0, L].
struct Label {
    enum class Kind : std::uint8_t { First, Second };
    Kind kind = Kind::First;
    int index = 0;

    bool operator==(const Label&) const = default;
};

/// The coupling status f_t: a bijection from colored-particle colors onto
/// two-species labels, with exactly L+1 second-class labels.
struct CouplingStatus {
    std::vector<Label> f;  // indexed by color; entry 0 unused

    bool is_bijection(int L) const;
};

/// A colored trajectory driving a two-species trajectory through f_t.
struct CoupledState {
    SimState colored;  // Mode::Colored
    SimState twospec;  // Mode::TwoSpecies
    CouplingStatus status;
};

/// Colored step data, two-species data, and the initial status:
/// colors 1..L+1 carry second-class labels 0*..L*, color n+L+1 carries
/// first-class index n.
CoupledState init_coupling(const ModelParams& params, Window window);

/// Drives one colored event through the coupling:
///   - move into vacancy: the two-species particle at the same site makes
///     the identical move;
///   - interchange of colors labeled same-class: swap the two labels, the
///     two-species configuration is untouched;
///   - interchange of colors labeled different-class: labels stay, the two
///     two-species particles physically swap.
/// Rejected colored events (wall, higher target color) move nothing in
/// either system. If the sampled event time exceeds t_end the event is
/// discarded unapplied (exact by memorylessness). Returns the sampled event.
template <class Source>
Event coupled_step_bounded(CoupledState& state, double t_end, Source& stream) {
    Event event = next_event(state.colored, stream);
    if (event.time > t_end) return event;
    const Site a = event.site;
    const Site b = a + (event.dir == Direction::Right ? 1 : -1);
    const Color dst =
        state.colored.config.window().contains(b) ? state.colored.config.at(b) : ~Color{0};
    const Color src = state.colored.config.at(a);
    apply_event(state.colored, event);
    state.twospec.clock = event.time;
    if (!event.accepted) return event;
    if (dst == kEmpty) {
        state.twospec.config.move_particle(a, b);
    } else {
        Label& fr = state.status.f[src];
        Label& fs = state.status.f[dst];
        if (fr.kind == fs.kind)
            std::swap(fr, fs);
        else
            state.twospec.config.swap_adjacent(a, b);
    }
    return event;
}

template <class Source>
Event coupled_step(CoupledState& state, Source& stream) {
    return coupled_step_bounded(state, std::numeric_limits<double>::infinity(), stream);
}

/// Like run_until for the coupled pair; the observer sees applied events.
template <class Source, class Observer = NullObserver>
void run_coupled_until(CoupledState& state, double t_end, Source& stream,
                       Observer&& observer = {}) {
    if (t_end < state.colored.clock)
        throw std::invalid_argument("run_coupled_until: t_end before clock");
    for (;;) {
        Event event = coupled_step_bounded(state, t_end, stream);
        if (event.time > t_end) break;
        observer(event, state);
    }
    state.colored.clock = t_end;
    state.twospec.clock = t_end;
}

/// Coupling identity: leftmost second-class position equals the leftmost of
/// colors 1..L+1.
bool check_identity(const CoupledState& state);

/// Site-by-site equality of the class projection (colors <= L+1 -> second,
/// colors >= L+2 -> first) with the two-species configuration.
bool check_projection(const CoupledState& state);

}  // namespace asep
