#include <doctest.h>

#include <cmath>
#include <vector>

#include "asep/dynamics.hpp"
#include "asep/rng.hpp"
#include "test_util.hpp"

using namespace asep;

namespace {

SimState single_step_state(double p, Window w) {
    return SimState{init_asep_step(w), ModelParams::make(p, 0), Mode::Single, 0.0};
}

}  // namespace

TEST_CASE("swap rule") {
    CHECK(swap_permitted(2, 0));
    CHECK_FALSE(swap_permitted(1, 2));
    CHECK_FALSE(swap_permitted(1, 1));
    CHECK(swap_permitted(3, 1));
    CHECK_FALSE(swap_permitted(3, 7));
}

TEST_CASE("next_event consumes (dt, mover, direction) in order") {
    SUBCASE("waiting time") {
        SimState st{lone_particle(Window{-2, 2}, 0), ModelParams::make(0.7, 0), Mode::Single,
                    0.0};
        FakeStream fake{{0.5, 0.0, 0.0}};
        const Event ev = next_event(st, fake);
        CHECK(ev.time == doctest::Approx(std::log(2.0)));
    }
    SUBCASE("direction") {
        SimState st{lone_particle(Window{-2, 2}, 0), ModelParams::make(0.7, 0), Mode::Single,
                    0.0};
        FakeStream fake{{0.5, 0.0, 0.3}};
        CHECK(next_event(st, fake).dir == Direction::Right);
        FakeStream fake2{{0.5, 0.0, 0.7}};
        CHECK(next_event(st, fake2).dir == Direction::Left);
    }
    SUBCASE("mover is the floor(u2*N)-th leftmost particle") {
        auto st = single_step_state(0.7, Window{-3, 3});  // particles at -3..0, N=4
        FakeStream fake{{0.5, 0.6, 0.0}};
        CHECK(next_event(st, fake).site == -1);  // rank floor(2.4) = 2
    }
    SUBCASE("empty configuration") {
        SimState st{Configuration::from_sites(Window{-1, 1}, {}, false),
                    ModelParams::make(0.7, 0), Mode::Single, 0.0};
        FakeStream fake{{0.5, 0.5, 0.5}};
        CHECK_THROWS_AS(next_event(st, fake), std::runtime_error);
    }
}

TEST_CASE("apply_event follows the colored swap rule") {
    SUBCASE("colored: 3 overtakes 1") {
        SimState st{Configuration::from_sites(Window{-1, 2}, {{0, 3}, {1, 1}}, true),
                    ModelParams::make(0.7, 0), Mode::Colored, 0.0};
        Event ev{0.1, 0, Direction::Right, false};
        apply_event(st, ev);
        CHECK(ev.accepted);
        CHECK(st.config.at(0) == 1);
        CHECK(st.config.at(1) == 3);
        CHECK(st.config.audit());
    }
    SUBCASE("two-species: second class cannot displace first class") {
        SimState st{Configuration::from_sites(Window{-1, 2}, {{0, 1}, {1, 2}}, false),
                    ModelParams::make(0.7, 0), Mode::TwoSpecies, 0.0};
        Event ev{0.1, 0, Direction::Right, false};
        apply_event(st, ev);
        CHECK_FALSE(ev.accepted);
        CHECK(st.config.at(0) == 1);
        CHECK(st.config.at(1) == 2);
    }
    SUBCASE("move into vacancy") {
        SimState st{Configuration::from_sites(Window{-1, 2}, {{0, 1}}, false),
                    ModelParams::make(0.7, 0), Mode::Single, 0.0};
        Event ev{0.1, 0, Direction::Right, false};
        apply_event(st, ev);
        CHECK(ev.accepted);
        CHECK(st.config.at(1) == 1);
    }
    SUBCASE("wall suppression is a rejection, not an error") {
        SimState st{lone_particle(Window{-1, 0}, 0), ModelParams::make(1.0, 0), Mode::Single,
                    0.0};
        Event ev{0.1, 0, Direction::Right, false};
        apply_event(st, ev);
        CHECK_FALSE(ev.accepted);
        CHECK(st.clock == 0.1);
    }
}

TEST_CASE("run_until with t_end = clock leaves the state unchanged") {
    auto st = single_step_state(0.7, Window{-5, 5});
    RngStream stream(1, 0);
    run_until(st, 0.0, stream);
    CHECK(st.clock == 0.0);
    CHECK(st.config.same_occupancy(init_asep_step(Window{-5, 5})));
    CHECK_THROWS_AS(run_until(st, -1.0, stream), std::invalid_argument);
}

TEST_CASE("two-site chain: P(moved by t=1) = 1 - exp(-1) at p=1") {
    constexpr int kTrials = 100000;
    int moved = 0;
    for (int i = 0; i < kTrials; ++i) {
        RngStream stream(777, static_cast<std::uint64_t>(i));
        SimState st{lone_particle(Window{0, 1}, 0), ModelParams::make(1.0, 0), Mode::Single,
                    0.0};
        run_until(st, 1.0, stream);
        moved += st.config.at(1) != kEmpty;
    }
    const double phat = static_cast<double>(moved) / kTrials;
    const double target = 1.0 - std::exp(-1.0);
    const double se = std::sqrt(target * (1 - target) / kTrials);
    CHECK(std::abs(phat - target) < 3 * se);
}

TEST_CASE("front particle of the TASEP step moves as a Poisson clock") {
    // at p=1 the front particle's right jumps are never blocked, so
    // P(x_1(1) >= 1) = 1 - exp(-1)
    constexpr int kTrials = 100000;
    const Window w = make_window(1.0, 0, 5.0);
    int advanced = 0;
    for (int i = 0; i < kTrials; ++i) {
        RngStream stream(778, static_cast<std::uint64_t>(i));
        auto st = single_step_state(1.0, w);
        run_until(st, 1.0, stream);
        const Site front = st.config.site_of_rank(st.config.particle_count() - 1);
        advanced += front >= 1;
    }
    const double phat = static_cast<double>(advanced) / kTrials;
    const double target = 1.0 - std::exp(-1.0);
    const double se = std::sqrt(target * (1 - target) / kTrials);
    CHECK(std::abs(phat - target) < 3 * se);
    CHECK(phat > 0.3);
    CHECK(phat < 0.7);
}

TEST_CASE("lone particle drifts at gamma") {
    constexpr int kTrials = 10000;
    constexpr double kT = 50.0;
    const Window w = make_window(kT, 0, 5.0);
    double sum = 0.0, sumsq = 0.0;
    for (int i = 0; i < kTrials; ++i) {
        RngStream stream(779, static_cast<std::uint64_t>(i));
        SimState st{lone_particle(w, 0), ModelParams::make(0.7, 0), Mode::Single, 0.0};
        run_until(st, kT, stream);
        const double v = static_cast<double>(st.config.site_of_rank(0)) / kT;
        sum += v;
        sumsq += v * v;
    }
    const double mean = sum / kTrials;
    const double var = sumsq / kTrials - mean * mean;
    const double se = std::sqrt(var / kTrials);
    CHECK(std::abs(mean - 0.4) < 3 * se);
}

TEST_CASE("window is wide enough for every excursion at t=10") {
    // run in a much wider box and check that no site outside the
    // make_window(10, 0, 5) = [-60, 60] box ever changes occupancy: the
    // particle front can only spread right, the vacancy front only left,
    // and both are confined to the Poisson light cone
    const Window wide{-120, 120};
    Site max_front = 0, min_hole = 0;
    for (int i = 0; i < 1000; ++i) {
        RngStream stream(780, static_cast<std::uint64_t>(i));
        auto st = single_step_state(0.7, wide);
        Site front_seen = 0, hole_seen = 0;
        run_until(st, 10.0, stream, [&](const Event& ev, const SimState&) {
            if (!ev.accepted) return;
            const Site dest = ev.site + (ev.dir == Direction::Right ? 1 : -1);
            front_seen = std::max({front_seen, ev.site, dest});
            hole_seen = std::min({hole_seen, ev.site, dest});
        });
        max_front = std::max(max_front, front_seen);
        min_hole = std::min(min_hole, hole_seen);
    }
    const Window target = make_window(10, 0, 5);
    CHECK(max_front <= target.hi);
    CHECK(min_hole >= target.lo);
}

TEST_CASE("order and color counts are conserved along trajectories") {
    const Window w = make_window(20, 2, 5.0);
    const ModelParams params = ModelParams::make(0.7, 2);

    SUBCASE("two-species: per-class order preserved, counts constant") {
        RngStream stream(781, 0);
        SimState st{init_two_species(params, w), params, Mode::TwoSpecies, 0.0};

        // tag every particle and replay tag moves alongside the dynamics
        std::vector<int> tag(static_cast<std::size_t>(w.size()), -1);
        std::size_t n1 = 0, n2 = 0;
        for (std::size_t k = 0; k < st.config.particle_count(); ++k) {
            const Site s = st.config.site_of_rank(k);
            tag[static_cast<std::size_t>(s - w.lo)] = static_cast<int>(k);
            (st.config.at(s) == kSecondClass ? n1 : n2) += 1;
        }
        auto idx = [&](Site s) { return static_cast<std::size_t>(s - w.lo); };
        run_until(st, 20.0, stream, [&](const Event& ev, const SimState& s) {
            if (!ev.accepted) return;
            const Site b = ev.site + (ev.dir == Direction::Right ? 1 : -1);
            std::swap(tag[idx(ev.site)], tag[idx(b)]);
            REQUIRE(s.config.audit());
        });

        // tags within each class must still be ascending left to right
        int last1 = -1, last2 = -1;
        std::size_t m1 = 0, m2 = 0;
        for (std::size_t k = 0; k < st.config.particle_count(); ++k) {
            const Site s = st.config.site_of_rank(k);
            const int id = tag[idx(s)];
            REQUIRE(id >= 0);
            if (st.config.at(s) == kSecondClass) {
                CHECK(id > last1);
                last1 = id;
                ++m1;
            } else {
                CHECK(id > last2);
                last2 = id;
                ++m2;
            }
        }
        CHECK(m1 == n1);
        CHECK(m2 == n2);
    }
    SUBCASE("colored: the multiset of colors is constant") {
        RngStream stream(782, 0);
        SimState st{init_colored_step(w), params, Mode::Colored, 0.0};
        const auto n = st.config.particle_count();
        run_until(st, 20.0, stream);
        CHECK(st.config.particle_count() == n);
        for (Color c = 1; c <= st.config.max_color(); ++c) CHECK(st.config.has_color(c));
        CHECK(st.config.audit());
    }
}

TEST_CASE("colored dynamics projected to classes equals two-species dynamics") {
    const ModelParams params = ModelParams::make(0.7, 2);
    const Window w = make_window(20, 2, 5.0);
    for (int trial = 0; trial < 20; ++trial) {
        RngStream sa(783, static_cast<std::uint64_t>(trial));
        RngStream sb(783, static_cast<std::uint64_t>(trial));
        SimState colored{init_colored_step(w), params, Mode::Colored, 0.0};
        SimState two{init_two_species(params, w), params, Mode::TwoSpecies, 0.0};
        for (int step = 0; step < 2000; ++step) {
            Event ea = next_event(colored, sa);
            Event eb = next_event(two, sb);
            REQUIRE(ea.time == eb.time);
            REQUIRE(ea.site == eb.site);
            apply_event(colored, ea);
            apply_event(two, eb);
            for (Site s = w.lo; s <= w.hi; ++s) {
                const Color c = colored.config.at(s);
                const Color projected =
                    c == kEmpty ? kEmpty
                                : (c <= static_cast<Color>(params.L) + 1 ? kSecondClass
                                                                         : kFirstClass);
                REQUIRE(projected == two.config.at(s));
            }
        }
    }
}

TEST_CASE("position lookups") {
    const auto cfg = init_colored_step(Window{-5, 5});
    SimState st{cfg, ModelParams::make(0.7, 2), Mode::Colored, 0.0};
    CHECK(position_of_color(st, 1) == 0);
    CHECK(position_of_color(st, 4) == -3);
    CHECK_THROWS_AS(position_of_color(st, 99), std::out_of_range);

    const std::vector<Color> colors{1, 2, 3};
    CHECK(leftmost_of_colors(st, colors) == -2);
    const std::vector<Color> one{2};
    CHECK(leftmost_of_colors(st, one) == position_of_color(st, 2));
    CHECK_THROWS_AS(leftmost_of_colors(st, std::vector<Color>{}), std::invalid_argument);

    SimState two{init_two_species(ModelParams::make(0.7, 2), Window{-8, 2}),
                 ModelParams::make(0.7, 2), Mode::TwoSpecies, 0.0};
    CHECK(leftmost_second_class(two) == -2);
    SimState single{init_single_second_class(3, Window{-8, 2}), ModelParams::make(0.7, 3),
                    Mode::TwoSpecies, 0.0};
    CHECK(leftmost_second_class(single) == -3);
}
