#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "smasim/errors.hpp"
#include "smasim/kinetics.hpp"

using namespace smasim;

namespace {

KineticsSpec default_kinetics() {
    KineticsSpec k;
    k.M_f_C = 65.0;
    k.M_s_C = 75.0;
    k.A_s_C = 85.0;
    k.A_f_C = 95.0;
    k.max_strain = 0.04;
    return k;
}

// Feed a temperature trajectory through the tracker and collect xi.
std::vector<double> track(const std::vector<double>& temps, const KineticsSpec& spec,
                          PhaseState* final_state = nullptr) {
    PhaseState s;
    std::vector<double> xi;
    xi.reserve(temps.size());
    for (double T : temps) {
        s = update_phase(s, T, spec);
        xi.push_back(s.xi);
    }
    if (final_state) *final_state = s;
    return xi;
}

std::vector<double> ramp(double from, double to, int n) {
    std::vector<double> t(n);
    for (int i = 0; i < n; ++i)
        t[i] = from + (to - from) * static_cast<double>(i) / static_cast<double>(n - 1);
    return t;
}

}  // namespace

TEST_CASE("holding below M_f keeps full martensite") {
    const KineticsSpec k = default_kinetics();
    auto temps = ramp(23.0, 60.0, 200);
    temps.insert(temps.end(), 200, 60.0);
    for (double xi : track(temps, k)) CHECK(xi == 1.0);
}

TEST_CASE("heating from full martensite reaches xi = 0.5 at the band midpoint") {
    const KineticsSpec k = default_kinetics();
    const auto xi = track(ramp(23.0, 90.0, 1000), k);
    CHECK(xi.back() == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("heating past A_f reaches full austenite") {
    const KineticsSpec k = default_kinetics();
    const auto xi = track(ramp(23.0, 120.0, 500), k);
    CHECK(xi.back() == 0.0);
}

TEST_CASE("displacement map") {
    const KineticsSpec k = default_kinetics();
    TransmissionSpec t;
    t.gain = 4.0;
    t.wire_length_m = 0.015;
    t.bias_offset_m = 0.0;

    CHECK(displacement(1.0, k, t) == 0.0);
    CHECK(displacement(0.0, k, t) == doctest::Approx(2.4e-3).epsilon(1e-12));

    t.bias_offset_m = 1e-3;
    CHECK(displacement(1.0, k, t) == doctest::Approx(1e-3).epsilon(1e-12));

    double prev = displacement(0.0, k, t);
    for (double xi = 0.05; xi <= 1.0; xi += 0.05) {
        const double d = displacement(xi, k, t);
        CHECK(d <= prev + 1e-15);
        prev = d;
    }
}

TEST_CASE("full heat-cool cycle closes the hysteresis loop with positive area") {
    const KineticsSpec k = default_kinetics();
    auto temps = ramp(23.0, 150.0, 2000);
    const auto down = ramp(150.0, 23.0, 2000);
    temps.insert(temps.end(), down.begin(), down.end());

    PhaseState final_state;
    const auto xi = track(temps, k, &final_state);
    CHECK(final_state.xi == doctest::Approx(1.0).epsilon(1e-12));

    // Signed area of the closed xi-vs-T loop; nonzero iff the upward and
    // downward traces differ.
    double area = 0.0;
    for (std::size_t i = 1; i < temps.size(); ++i)
        area += 0.5 * (xi[i] + xi[i - 1]) * (temps[i] - temps[i - 1]);
    CHECK(std::abs(area) > 1.0);

    // Spot check: at 90 degC the heating trace is mid-transformation while
    // the cooling trace is still fully austenitic.
    const auto up_xi = track(ramp(23.0, 90.0, 1000), k);
    auto down_then = ramp(23.0, 150.0, 1000);
    const auto down_part = ramp(150.0, 90.0, 1000);
    down_then.insert(down_then.end(), down_part.begin(), down_part.end());
    const auto down_xi = track(down_then, k);
    CHECK(up_xi.back() == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(down_xi.back() == 0.0);
}

TEST_CASE("xi stays in [0,1] for arbitrary temperature walks") {
    const KineticsSpec k = default_kinetics();
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> step(-8.0, 8.0);
    PhaseState s;
    double T = 23.0;
    for (int i = 0; i < 20000; ++i) {
        T = std::clamp(T + step(rng), -10.0, 180.0);
        s = update_phase(s, T, k);
        CHECK(s.xi >= 0.0);
        CHECK(s.xi <= 1.0);
    }
}

TEST_CASE("xi is monotone within a monotone ramp") {
    const KineticsSpec k = default_kinetics();
    const auto up = track(ramp(23.0, 150.0, 3000), k);
    for (std::size_t i = 1; i < up.size(); ++i) CHECK(up[i] <= up[i - 1] + 1e-15);

    auto cycle = ramp(23.0, 150.0, 100);
    const auto down = ramp(150.0, 23.0, 3000);
    cycle.insert(cycle.end(), down.begin(), down.end());
    const auto xi = track(cycle, k);
    for (std::size_t i = 100; i < xi.size(); ++i) CHECK(xi[i] >= xi[i - 1] - 1e-15);
}

TEST_CASE("kinetics are rate independent") {
    const KineticsSpec k = default_kinetics();
    auto temps = ramp(23.0, 110.0, 400);
    const auto back = ramp(110.0, 40.0, 400);
    temps.insert(temps.end(), back.begin(), back.end());

    // Half-speed trajectory: every temperature visited twice.
    std::vector<double> slow;
    for (double T : temps) {
        slow.push_back(T);
        slow.push_back(T);
    }
    const auto fast_xi = track(temps, k);
    const auto slow_xi = track(slow, k);
    for (std::size_t i = 0; i < temps.size(); ++i) CHECK(fast_xi[i] == slow_xi[2 * i + 1]);
}

TEST_CASE("mid-band reversal keeps xi continuous (minor loop)") {
    const KineticsSpec k = default_kinetics();
    PhaseState s;
    std::vector<double> temps = ramp(23.0, 92.0, 1000);
    double last_xi = 1.0;
    for (double T : temps) {
        s = update_phase(s, T, k);
        CHECK(std::abs(s.xi - last_xi) < 0.02);
        last_xi = s.xi;
    }
    // Reverse inside [A_s, A_f]: no jumps, xi recovers toward 1 on cooling.
    const auto down = ramp(92.0, 40.0, 800);
    for (double T : down) {
        s = update_phase(s, T, k);
        CHECK(std::abs(s.xi - last_xi) < 0.02);
        last_xi = s.xi;
    }
    CHECK(s.xi == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("invalid kinetics are rejected") {
    KineticsSpec k = default_kinetics();
    k.M_s_C = 60.0;  // violates M_f < M_s
    CHECK_THROWS_AS(k.validate(), parameter_error);
    k = default_kinetics();
    k.max_strain = 0.2;
    CHECK_THROWS_WITH_AS(k.validate(), doctest::Contains("max_strain"), parameter_error);
    TransmissionSpec t;
    t.gain = 0.0;
    CHECK_THROWS_WITH_AS(t.validate(), doctest::Contains("gain"), parameter_error);
}
