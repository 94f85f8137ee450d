// SPDX-License-Identifier: MIT
#include <cmath>
#include <map>

#include <gtest/gtest.h>

#include "frames.hpp"
#include "oracles.hpp"
#include "statgeom/maps/identity_maps.hpp"
#include "statgeom/tristate.hpp"

using namespace statgeom;
using namespace statgeom::maps;
using testing_frames::BuiltinFrames;
using testing_frames::flat_frames;

namespace {

const std::map<std::string, std::string> kConstant = {{"111", "0.7"}, {"112", "-0.4"}, {"122", "0.2"}, {"222", "1.1"}};
const std::map<std::string, std::string> kPolynomial = {
    {"111", "x1*x2"}, {"112", "x2*x2 - x1"}, {"122", "1 + x1*x1"}, {"222", "x1*x2 + 2*x2"}};

/// T^k = -1/2 sum_i C_iik for kPolynomial on Euclidean R^2.
double poly_T(const oracle::Point& x, int k) {
    const double C111 = x[0] * x[1], C112 = x[1] * x[1] - x[0], C122 = 1 + x[0] * x[0], C222 = x[0] * x[1] + 2 * x[1];
    return k == 0 ? -0.5 * (C111 + C122) : -0.5 * (C112 + C222);
}

}  // namespace

TEST(MapsTension, ZeroCubicIsHarmonic) {
    const auto f = flat_frames({}, {0.3, 0.4});
    const auto r = identity_map_report(f.geo, f.st);
    EXPECT_EQ(oracle::max_abs(r.tension), 0.0);
    EXPECT_EQ(oracle::max_abs(r.bitension), 0.0);
    EXPECT_EQ(oracle::max_abs(r.conjugate_bitension), 0.0);
}

TEST(MapsTension, TensionIsMinusTchebychev) {
    const BuiltinFrames b(builtins::centroaffine_power_surface(1, 2));
    for (const auto& p : oracle::random_points(b.box(), 20, 41)) {
        const auto f = b.at(p);
        const auto r = identity_map_report(f.geo, f.st);
        // Lowered tau is -eta = (0, 1/x2); lowered tau-bar is eta.
        const auto tau = tensor::lower_index(r.tension, 0, f.geo.g());
        const auto bar = tensor::lower_index(r.conjugate_tension, 0, f.geo.g());
        EXPECT_NEAR(tau(0), 0.0, 1e-12);
        EXPECT_NEAR(tau(1), 1.0 / p[1], 1e-12);
        EXPECT_NEAR(bar(1), -1.0 / p[1], 1e-12);
        EXPECT_LE(r.tension_identity, 1e-12);
    }
}

TEST(MapsTension, DirectTraceOfConnections) {
    const auto f = flat_frames(kPolynomial, {0.2, -0.5});
    const auto t = tension(f.geo.inverse, f.geo.christoffel, f.st.connection);
    EXPECT_LE(tensor::max_abs_difference(tensor::values(t), f.st.T()), 1e-14);
}

TEST(MapsTension, DifftensionVanishes) {
    for (const std::string name : {"flat-poly:2,1", "flat-poly:3,2", "centroaffine:2,3", "sphere:2,1"}) {
        const BuiltinFrames b(name);
        for (const auto& p : oracle::random_points(b.box(), 20, 42))
            EXPECT_LE(identity_map_report(b.at(p).geo, b.at(p).st).difftension, 1e-12) << name;
    }
}

TEST(MapsBitension, FlatConstantCubicIsBiharmonic) {
    for (const auto& p : oracle::random_points({{-1, 1}, {-1, 1}}, 10, 43)) {
        const auto f = flat_frames(kConstant, p);
        const auto r = identity_map_report(f.geo, f.st);
        EXPECT_LE(oracle::max_abs(r.bitension), 1e-10);
        EXPECT_LE(oracle::max_abs(r.conjugate_bitension), 1e-10);
    }
}

TEST(MapsBitension, MatchesFiniteDifferenceOracle) {
    // On Euclidean space: tau2 = -Delta T - dT(T) - div(T) T and
    // tau2-bar = Delta T - dT(T) - div(T) T, component-wise.
    const double h = 1e-4;
    for (const auto& p : oracle::random_points({{-1, 1}, {-1, 1}}, 20, 44)) {
        const auto f = flat_frames(kPolynomial, p);
        const auto r = identity_map_report(f.geo, f.st);
        double div = 0.0;
        for (int l = 0; l < 2; ++l)
            div += oracle::fd_partial([&](const oracle::Point& x) { return poly_T(x, l); }, p, l, h);
        for (int k = 0; k < 2; ++k) {
            const oracle::ScalarFn Tk = [k](const oracle::Point& x) { return poly_T(x, k); };
            const double lap = oracle::fd_second(Tk, p, 0, 0, h) + oracle::fd_second(Tk, p, 1, 1, h);
            double adv = 0.0;
            for (int l = 0; l < 2; ++l) adv += poly_T(p, l) * oracle::fd_partial(Tk, p, l, h);
            EXPECT_NEAR(r.bitension(k), -lap - adv - div * poly_T(p, k), 1e-6);
            EXPECT_NEAR(r.conjugate_bitension(k), lap - adv - div * poly_T(p, k), 1e-6);
        }
    }
}

TEST(MapsBitension, GeneralAndProofFormsAgree) {
    for (const std::string name : {"flat-poly:2,1", "flat-poly:2,9", "flat-poly:3,2", "centroaffine:1,2"}) {
        const BuiltinFrames b(name);
        for (const auto& p : oracle::random_points(b.box(), 20, 45))
            EXPECT_LE(identity_map_report(b.at(p).geo, b.at(p).st).path_agreement, 1e-8) << name;
    }
}

TEST(MapsBitension, DifferenceAndSumIdentities) {
    for (const std::string name : {"flat-poly:2,1", "flat-poly:3,4", "centroaffine:2,3", "flat-cubic:3,7"}) {
        const BuiltinFrames b(name);
        for (const auto& p : oracle::random_points(b.box(), 100, 46)) {
            const auto r = identity_map_report(b.at(p).geo, b.at(p).st);
            EXPECT_LE(r.main1_difference, 1e-8) << name;
            EXPECT_LE(r.main1_sum, 1e-8) << name;
        }
    }
}

TEST(MapsBitension, EquiaffineResidualsVanish) {
    const BuiltinFrames b(builtins::centroaffine_power_surface(1, 1));
    for (const auto& p : oracle::random_points(b.box(), 20, 47)) {
        const auto r = identity_map_report(b.at(p).geo, b.at(p).st);
        EXPECT_LE(oracle::max_abs(r.bitension), 1e-10);
        EXPECT_LE(r.main1_difference, 1e-10);
        EXPECT_LE(r.main1_sum, 1e-10);
    }
}

TEST(MapsSemiEquiaffine, FlagsAgree) {
    auto flag_for = [](const std::string& name) {
        const BuiltinFrames b(name);
        std::vector<IdentityMapReport> reports;
        for (const auto& p : oracle::random_points(b.box(), 30, 48))
            reports.push_back(identity_map_report(b.at(p).geo, b.at(p).st));
        return semi_equiaffine_flag(reports, 1e-8);
    };
    for (const std::string name : {"flat-cubic:2,7", "centroaffine:1,2", "centroaffine:2,3", "flat:2"}) {
        const auto s = flag_for(name);
        EXPECT_EQ(s.semi_equiaffine, TriState::True) << name;
        EXPECT_EQ(s.bitension_vanishing, TriState::True) << name;
        EXPECT_EQ(s.equivalence, TriState::True) << name;
    }
    const auto neg = flag_for("flat-poly:2,1");
    EXPECT_EQ(neg.semi_equiaffine, TriState::False);
    EXPECT_EQ(neg.bitension_vanishing, TriState::False);
    EXPECT_EQ(neg.equivalence, TriState::True);
}

TEST(MapsTriState, Hysteresis) {
    EXPECT_EQ(classify(1e-9, 1e-8), TriState::True);
    EXPECT_EQ(classify(1e-8, 1e-8), TriState::True);
    EXPECT_EQ(classify(5e-8, 1e-8), TriState::Inconclusive);
    EXPECT_EQ(classify(1e-7, 1e-8), TriState::Inconclusive);
    EXPECT_EQ(classify(1.01e-7, 1e-8), TriState::False);
    EXPECT_EQ(agree(TriState::True, TriState::Inconclusive), TriState::Inconclusive);
    EXPECT_EQ(agree(TriState::False, TriState::False), TriState::True);
    EXPECT_EQ(negate(TriState::True), TriState::False);
    EXPECT_EQ(both(TriState::True, TriState::Inconclusive), TriState::Inconclusive);
    EXPECT_EQ(both(TriState::False, TriState::Inconclusive), TriState::False);
}
