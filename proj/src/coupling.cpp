#include "asep/coupling.hpp"

#include <stdexcept>

namespace asep {

bool CouplingStatus::is_bijection(int L) const {
    if (f.size() < 2) return false;
    std::vector<bool> seen_first(f.size(), false);
    std::vector<bool> seen_second(static_cast<std::size_t>(L) + 1, false);
    int n_second = 0;
    for (std::size_t c = 1; c < f.size(); ++c) {
        const Label& lab = f[c];
        if (lab.kind == Label::Kind::Second) {
            if (lab.index < 0 || lab.index > L) return false;
            if (seen_second[static_cast<std::size_t>(lab.index)]) return false;
            seen_second[static_cast<std::size_t>(lab.index)] = true;
            ++n_second;
        } else {
            if (lab.index < 1 || static_cast<std::size_t>(lab.index) >= f.size()) return false;
            if (seen_first[static_cast<std::size_t>(lab.index)]) return false;
            seen_first[static_cast<std::size_t>(lab.index)] = true;
        }
    }
    return n_second == L + 1;
}

CoupledState init_coupling(const ModelParams& params, Window window) {
    CoupledState state;
    state.colored = SimState{init_colored_step(window), params, Mode::Colored, 0.0};
    state.twospec = SimState{init_two_species(params, window), params, Mode::TwoSpecies, 0.0};

    const Color n_colors = state.colored.config.max_color();
    if (n_colors < static_cast<Color>(params.L) + 2)
        throw std::invalid_argument("init_coupling: window too small for L");
    state.status.f.resize(static_cast<std::size_t>(n_colors) + 1);
    for (Color c = 1; c <= n_colors; ++c) {
        if (c <= static_cast<Color>(params.L) + 1)
            state.status.f[c] = Label{Label::Kind::Second, static_cast<int>(c) - 1};
        else
            state.status.f[c] = Label{Label::Kind::First,
                                      static_cast<int>(c) - params.L - 1};
    }
    return state;
}

bool check_identity(const CoupledState& state) {
    const int L = state.colored.params.L;
    Site colored_min = state.colored.config.window().hi + 1;
    for (Color c = 1; c <= static_cast<Color>(L) + 1; ++c)
        colored_min = std::min(colored_min, state.colored.config.position_of_color(c));
    return leftmost_second_class(state.twospec) == colored_min;
}

bool check_projection(const CoupledState& state) {
    const int L = state.colored.params.L;
    const Window& w = state.colored.config.window();
    if (!(w == state.twospec.config.window())) return false;
    for (Site s = w.lo; s <= w.hi; ++s) {
        const Color c = state.colored.config.at(s);
        const Color projected =
            c == kEmpty ? kEmpty
                        : (c <= static_cast<Color>(L) + 1 ? kSecondClass : kFirstClass);
        if (projected != state.twospec.config.at(s)) return false;
    }
    return true;
}

}  // namespace asep
