// SPDX-License-Identifier: MIT
#include <algorithm>
#include <cmath>
#include <map>

#include <gtest/gtest.h>

#include "frames.hpp"
#include "oracles.hpp"
#include "statgeom/error.hpp"
#include "statgeom/statistical/statistical_frame.hpp"

using namespace statgeom;
using namespace statgeom::statistical;
using testing_frames::BuiltinFrames;
using testing_frames::flat_frames;
using testing_frames::euclidean_table;
using testing_frames::metric_jets;
using tensor::D;
using tensor::U;

namespace {

/// Curvature of a constant connection on flat space, by explicit matrix products.
PointTensor constant_connection_curvature(const PointTensor& K) {
    const int m = K.dim();
    PointTensor R(m, {U, D, D, D});
    for (int q = 0; q < m; ++q)
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                for (int k = 0; k < m; ++k)
                    for (int p = 0; p < m; ++p) R(q, i, j, k) += K(p, j, k) * K(q, i, p) - K(p, i, k) * K(q, j, p);
    return R;
}

/// Centroaffine connection nabla^k_ij = -g_ij x^k in closed form.
PointTensor centroaffine_connection(double a1, double a2, const oracle::Point& x) {
    const Eigen::MatrixXd g = oracle::centroaffine_metric(a1, a2)(x);
    PointTensor A(2, {U, D, D});
    for (int k = 0; k < 2; ++k)
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) A(k, i, j) = -g(i, j) * x[static_cast<std::size_t>(k)];
    return A;
}

const std::vector<std::pair<double, double>> kCentroBox = {{0.5, 3.0}, {0.5, 3.0}};

}  // namespace

TEST(StatisticalDifference, ZeroCubicGivesLeviCivita) {
    const auto f = flat_frames({}, {0.3, -0.2});
    EXPECT_EQ(oracle::max_abs(f.st.K()), 0.0);
    EXPECT_EQ(oracle::max_abs(f.st.T()), 0.0);
    EXPECT_EQ(oracle::max_abs(tensor::values(f.st.curvature)), 0.0);
    EXPECT_EQ(tensor::max_abs_difference(tensor::values(f.st.connection), tensor::values(f.st.conjugate)), 0.0);
}

TEST(StatisticalDifference, SingleEntryCubic) {
    const auto f = flat_frames({{"111", "2"}}, {0.3, -0.2});
    const auto K = f.st.K();
    EXPECT_DOUBLE_EQ(K(0, 0, 0), -1.0);
    EXPECT_EQ(oracle::max_abs(K), 1.0);
    const auto T = f.st.T();
    EXPECT_DOUBLE_EQ(T(0), -1.0);
    EXPECT_DOUBLE_EQ(T(1), 0.0);
}

TEST(StatisticalDifference, CubicRoundTrip) {
    const std::vector<double> p = {0.4, 0.1};
    const auto f = flat_frames({{"111", "x1*x2"}, {"112", "1 + x2"}, {"122", "sin(x1)"}, {"222", "-3"}}, p);
    const auto back = cubic_from_difference(f.geo.metric, f.st.difference);
    EXPECT_LE(tensor::max_abs_difference(tensor::values(back), tensor::values(f.st.cubic)), 1e-12);
}

TEST(StatisticalDifference, AsymmetricCubicRejected) {
    const std::vector<double> p = {0.0, 0.0};
    const auto geo = geometry::build_geometry_frame(p, metric_jets(euclidean_table(2), p));
    JetTensor C(2, {D, D, D});
    C(0, 0, 1) = 1.0;
    try {
        difference_tensor(geo.inverse, C);
        FAIL() << "expected ValidationError";
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("asymmetry 1"), std::string::npos);
    }
}

TEST(StatisticalCodazzi, SymmetricCubicPasses) {
    const auto f = flat_frames({{"111", "x1*x2"}, {"112", "1 + x2*x2"}, {"222", "x1"}}, {0.4, 0.1});
    EXPECT_LE(codazzi_residual(f.geo.metric, f.st.connection), 1e-10);
    const auto zero = flat_frames({}, {0.4, 0.1});
    EXPECT_EQ(codazzi_residual(zero.geo.metric, zero.st.connection), 0.0);
}

TEST(StatisticalCodazzi, NegativeControlFails) {
    const std::vector<double> p = {0.0, 0.0};
    const auto geo = geometry::build_geometry_frame(p, metric_jets(euclidean_table(2), p));
    JetTensor C(2, {D, D, D});
    C(0, 0, 1) = expr::Jet::constant(2, 3, 1.0);
    const JetTensor connection = geo.christoffel + difference_tensor_unchecked(geo.inverse, C);
    EXPECT_NEAR(codazzi_residual(geo.metric, connection), 0.5, 1e-15);
}

TEST(StatisticalCentroaffine, ConnectionMatchesClosedForm) {
    for (const auto& [a1, a2] : std::vector<std::pair<double, double>>{{1, 1}, {1, 2}, {2, 3}}) {
        const BuiltinFrames b(builtins::centroaffine_power_surface(a1, a2));
        for (const auto& p : oracle::random_points(kCentroBox, 30, 21)) {
            const auto f = b.at(p);
            EXPECT_LE(oracle::max_abs_diff(tensor::values(f.st.connection), centroaffine_connection(a1, a2, p)), 1e-10);
            const auto eta = tensor::values(f.st.tchebychev_form);
            EXPECT_NEAR(eta(0), (1 - a1) / p[0], 1e-10);
            EXPECT_NEAR(eta(1), (1 - a2) / p[1], 1e-10);
            EXPECT_LE(oracle::max_abs(tensor::values(f.st.tchebychev_operator)), 1e-8);
            EXPECT_LE(codazzi_residual(f.geo.metric, f.st.connection), 1e-10);
        }
    }
}

TEST(StatisticalCentroaffine, EquiaffineOnlyForUnitExponents) {
    const BuiltinFrames b(builtins::centroaffine_power_surface(1, 1));
    for (const auto& p : oracle::random_points(kCentroBox, 10, 22)) EXPECT_LE(oracle::max_abs(b.at(p).st.T()), 1e-12);
}

TEST(StatisticalCurvature, ConstantDifferenceMatchesMatrixProducts) {
    const std::map<std::string, std::string> c = {{"111", "0.7"}, {"112", "-0.4"}, {"122", "0.2"}, {"222", "1.1"}};
    const auto f = flat_frames(c, {0.1, 0.2});
    EXPECT_LE(oracle::max_abs_diff(tensor::values(f.st.curvature), constant_connection_curvature(f.st.K())), 1e-14);
}

TEST(StatisticalCurvature, CentroaffineMatchesFiniteDifferenceOracle) {
    const BuiltinFrames b(builtins::centroaffine_power_surface(1, 2));
    for (const auto& p : oracle::random_points(kCentroBox, 20, 23)) {
        const auto fd = oracle::riemann([](const oracle::Point& x) { return centroaffine_connection(1, 2, x); }, p);
        EXPECT_LE(oracle::max_abs_diff(tensor::values(b.at(p).st.curvature), fd), 1e-6);
    }
}

TEST(StatisticalCurvature, ZeroCubicCollapses) {
    const auto f = flat_frames({}, {0.1, 0.2});
    const auto R = tensor::values(f.st.curvature);
    EXPECT_EQ(tensor::max_abs_difference(R, f.geo.curvature()), 0.0);
    EXPECT_EQ(tensor::max_abs_difference(R, tensor::values(f.st.conjugate_curvature)), 0.0);
    EXPECT_EQ(tensor::max_abs_difference(R, f.st.interchange), 0.0);
}

TEST(StatisticalCurvature, FitFindsSpaceFormCurvature) {
    for (const auto& [name, lambda] : std::vector<std::pair<std::string, double>>{
             {"sphere:2,1", 1.0}, {"sphere:3,1", 1.0}, {"sphere:2,4", 4.0}, {"hyperbolic:2,-1", -1.0}, {"flat:2", 0.0}}) {
        const BuiltinFrames b(name);
        std::vector<PointTensor> Rs, gs;
        for (const auto& p : oracle::random_points(b.box(), 20, 24)) {
            const auto f = b.at(p);
            Rs.push_back(tensor::values(f.st.curvature));
            gs.push_back(f.geo.g());
        }
        const auto fit = constant_curvature_fit(Rs, gs);
        EXPECT_NEAR(fit.lambda, lambda, 1e-8) << name;
        EXPECT_TRUE(fit.constant()) << name;
    }
}

TEST(StatisticalCurvature, CentroaffineConstantCurvatureSign) {
    for (const auto& [a1, a2] : std::vector<std::pair<double, double>>{{1, 1}, {1, 2}, {2, 3}}) {
        const BuiltinFrames b(builtins::centroaffine_power_surface(a1, a2));
        std::vector<PointTensor> Rs, gs;
        for (const auto& p : oracle::random_points(kCentroBox, 20, 25)) {
            const auto f = b.at(p);
            Rs.push_back(tensor::values(f.st.curvature));
            gs.push_back(f.geo.g());
            EXPECT_LE(scalar_relation_residual(-1.0, f.geo, f.st), 1e-6);
        }
        const auto fit = constant_curvature_fit(Rs, gs);
        EXPECT_NEAR(std::abs(fit.lambda), 1.0, 1e-8);
        EXPECT_LE(fit.residual, 1e-6);
    }
}

TEST(StatisticalCurvature, FitRejectsDegenerateInput) {
    std::vector<PointTensor> none;
    EXPECT_THROW(constant_curvature_fit(none, none), ValidationError);
    std::vector<PointTensor> R1 = {PointTensor(1, {U, D, D, D})};
    std::vector<PointTensor> g1 = {PointTensor(1, {D, D}, 1.0)};
    EXPECT_THROW(constant_curvature_fit(R1, g1), ValidationError);
}

TEST(StatisticalCurvature, PolynomialCubicIsNotConstantCurvature) {
    const BuiltinFrames b(builtins::flat_polynomial_cubic(2, 1));
    std::vector<PointTensor> Rs, gs;
    for (const auto& p : oracle::random_points(b.box(), 20, 26)) {
        const auto f = b.at(p);
        Rs.push_back(tensor::values(f.st.curvature));
        gs.push_back(f.geo.g());
    }
    EXPECT_FALSE(constant_curvature_fit(Rs, gs).constant());
}

TEST(StatisticalScalarRelation, FlatConstantCubicsInTwoDimensions) {
    // Every constant cubic with entries in {-1, 0, 1}: whenever the curvature
    // fit succeeds, lambda m(m-1) = g(T,T) - g(K,K) on flat space.
    const std::vector<double> p = {0.0, 0.0};
    int constant_count = 0;
    for (int code = 0; code < 81; ++code) {
        int c = code;
        std::map<std::string, std::string> entries;
        for (const char* key : {"111", "112", "122", "222"}) {
            entries[key] = std::to_string(c % 3 - 1);
            c /= 3;
        }
        const auto f = flat_frames(entries, p);
        const std::vector<PointTensor> Rs = {tensor::values(f.st.curvature)};
        const std::vector<PointTensor> gs = {f.geo.g()};
        const auto fit = constant_curvature_fit(Rs, gs);
        if (!fit.constant()) continue;
        ++constant_count;
        EXPECT_LE(scalar_relation_residual(fit.lambda, f.geo, f.st), 1e-10);
        const tensor::Metric<double> M = f.geo.point_metric();
        const double tt = tensor::inner(M, f.st.T(), f.st.T());
        const double kk = tensor::inner(M, f.st.K(), f.st.K());
        EXPECT_EQ(std::abs(fit.lambda) <= 1e-10, std::abs(tt - kk) <= 1e-10) << code;
    }
    EXPECT_GT(constant_count, 0);
}

TEST(StatisticalConjugateSymmetry, ZeroAndCentroaffine) {
    EXPECT_EQ(conjugate_symmetry_residuals(flat_frames({}, {0.1, 0.2}).st).max(), 0.0);
    const BuiltinFrames b(builtins::centroaffine_power_surface(1, 2));
    for (const auto& p : oracle::random_points(kCentroBox, 20, 27))
        EXPECT_LE(conjugate_symmetry_residuals(b.at(p).st).max(), 1e-8);
}

TEST(StatisticalConjugateSymmetry, PolynomialCubicBreaksAllThree) {
    const BuiltinFrames b(builtins::flat_polynomial_cubic(2, 1));
    double r_l = 0, r_c = 0, nk = 0;
    for (const auto& p : oracle::random_points(b.box(), 20, 28)) {
        const auto r = conjugate_symmetry_residuals(b.at(p).st);
        r_l = std::max(r_l, r.r_minus_l);
        r_c = std::max(r_c, r.r_minus_conjugate);
        nk = std::max(nk, r.nabla_k_asymmetry);
    }
    EXPECT_GT(r_l, 1e-3);
    EXPECT_GT(r_c, 1e-3);
    EXPECT_GT(nk, 1e-3);
}

TEST(StatisticalSemiEquiaffine, ConstantCubicSatisfiesBothEquations) {
    const std::map<std::string, std::string> c = {{"111", "0.7"}, {"112", "-0.4"}, {"122", "0.2"}, {"222", "1.1"}};
    for (const auto& p : oracle::random_points({{-1, 1}, {-1, 1}}, 10, 29)) {
        const auto f = flat_frames(c, p);
        EXPECT_LE(oracle::max_abs(t1_residual(f.geo, f.st)), 1e-10);
        EXPECT_LE(oracle::max_abs(t2_residual(f.geo, f.st)), 1e-10);
    }
    const BuiltinFrames b(builtins::centroaffine_power_surface(2, 3));
    for (const auto& p : oracle::random_points(kCentroBox, 100, 30)) {
        const auto f = b.at(p);
        EXPECT_LE(oracle::max_abs(t1_residual(f.geo, f.st)), 1e-8);
        EXPECT_LE(oracle::max_abs(t2_residual(f.geo, f.st)), 1e-8);
    }
}

TEST(StatisticalSemiEquiaffine, T2MatchesFiniteDifferenceOracle) {
    // Flat space: T2 = div(T) T + dT(T), with T^k = -1/2 sum_i C_iik.
    const std::map<std::string, std::string> c = {{"111", "x1*x2"}, {"112", "x2*x2"}, {"122", "1 + x1"}, {"222", "x1*x1"}};
    auto T = [](const oracle::Point& x, int k) {
        const double C111 = x[0] * x[1], C112 = x[1] * x[1], C122 = 1 + x[0], C222 = x[0] * x[0];
        return k == 0 ? -0.5 * (C111 + C122) : -0.5 * (C112 + C222);
    };
    for (const auto& p : oracle::random_points({{-1, 1}, {-1, 1}}, 10, 31)) {
        const auto f = flat_frames(c, p);
        const double h = 1e-5;
        const double div = oracle::fd_partial([&](const oracle::Point& x) { return T(x, 0); }, p, 0, h) +
                           oracle::fd_partial([&](const oracle::Point& x) { return T(x, 1); }, p, 1, h);
        const auto t2 = t2_residual(f.geo, f.st);
        for (int k = 0; k < 2; ++k) {
            double expected = div * T(p, k);
            for (int l = 0; l < 2; ++l)
                expected += T(p, l) * oracle::fd_partial([&](const oracle::Point& x) { return T(x, k); }, p, l, h);
            EXPECT_NEAR(t2(k), expected, 1e-8);
        }
    }
}

TEST(StatisticalLapc, TermsVanishIndividuallyForConstantCubic) {
    const std::map<std::string, std::string> c = {{"111", "0.7"}, {"112", "-0.4"}, {"122", "0.2"}, {"222", "1.1"}};
    const auto f = flat_frames(c, {0.2, 0.3});
    const auto t = lapc_terms(f.geo, f.st);
    EXPECT_LE(std::abs(t.laplacian), 1e-10);
    EXPECT_LE(std::abs(t.curvature_term), 1e-10);
    EXPECT_LE(std::abs(t.gradient_term), 1e-10);
    EXPECT_EQ(lapc_terms(flat_frames({}, {0.2, 0.3}).geo, flat_frames({}, {0.2, 0.3}).st).residual(), 0.0);
}

TEST(StatisticalLapc, CentroaffineBalances) {
    for (const auto& [a1, a2] : std::vector<std::pair<double, double>>{{1, 1}, {1, 2}, {2, 3}}) {
        const BuiltinFrames b(builtins::centroaffine_power_surface(a1, a2));
        for (const auto& p : oracle::random_points(kCentroBox, 30, 32))
            EXPECT_LE(lapc_terms(b.at(p).geo, b.at(p).st).residual(), 1e-6);
    }
}

TEST(StatisticalGeodesic, ParallelTchebychev) {
    const auto f = flat_frames({{"111", "2"}}, {0.2, 0.3});
    const auto g = geodesic_potential_check(f.geo, f.st);
    EXPECT_LE(g.residual, 1e-14);
    EXPECT_LE(std::abs(g.potential), 1e-14);
    EXPECT_NEAR(g.tchebychev_norm, 1.0, 1e-14);
    const auto zero = flat_frames({}, {0.2, 0.3});
    EXPECT_EQ(geodesic_potential_check(zero.geo, zero.st).tchebychev_norm, 0.0);
}

TEST(StatisticalGeodesic, ResidualIsTheT2Norm) {
    const BuiltinFrames b(builtins::flat_polynomial_cubic(2, 3));
    for (const auto& p : oracle::random_points(b.box(), 10, 33)) {
        const auto f = b.at(p);
        const auto t2 = t2_residual(f.geo, f.st);
        const double norm = std::sqrt(tensor::inner(f.geo.point_metric(), t2, t2));
        EXPECT_NEAR(geodesic_potential_check(f.geo, f.st).residual, norm, 1e-12);
    }
}

TEST(StatisticalRicci, AsymmetryEqualsClosednessDefect) {
    for (const std::string name : {"flat-poly:2,1", "flat-poly:2,5", "centroaffine:1,2", "flat-cubic:3,7"}) {
        const BuiltinFrames b(name);
        for (const auto& p : oracle::random_points(b.box(), 10, 34)) {
            const auto f = b.at(p);
            const auto r = ricci_symmetry(f.geo, f.st);
            EXPECT_LE(r.identity_residual, 1e-10) << name;
            EXPECT_NEAR(r.ricci_asymmetry, r.closedness_defect, 1e-10) << name;
        }
    }
}

TEST(StatisticalDuality, ConjugateFromDualityAndInvolution) {
    for (const std::string name : {"flat-poly:2,1", "centroaffine:2,3", "flat-cubic:3,7"}) {
        const BuiltinFrames b(name);
        for (const auto& p : oracle::random_points(b.box(), 10, 35)) {
            const auto f = b.at(p);
            const auto conj = conjugate_from_duality(f.geo.metric, f.geo.inverse, f.st.connection);
            EXPECT_LE(tensor::max_abs_difference(tensor::values(conj), tensor::values(f.st.conjugate)), 1e-10);
            const auto back = conjugate_from_duality(f.geo.metric, f.geo.inverse, conj);
            EXPECT_LE(tensor::max_abs_difference(tensor::values(back), tensor::values(f.st.connection)), 1e-10);
            auto mean = tensor::values(f.st.connection) + tensor::values(f.st.conjugate);
            mean *= 0.5;
            EXPECT_LE(tensor::max_abs_difference(mean, f.geo.gamma()), 1e-12);
        }
    }
}

TEST(StatisticalCurvature, AdjointAndInterchangeIdentities) {
    for (const std::string name : {"flat-poly:2,1", "centroaffine:1,2", "flat-poly:3,2"}) {
        const BuiltinFrames b(name);
        for (const auto& p : oracle::random_points(b.box(), 10, 36)) {
            const auto f = b.at(p);
            const int m = f.geo.dim();
            const auto g = f.geo.g();
            const auto R = tensor::values(f.st.curvature);
            const auto Rb = tensor::values(f.st.conjugate_curvature);
            double adjoint = 0.0;
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j)
                    for (int z = 0; z < m; ++z)
                        for (int w = 0; w < m; ++w) {
                            double lhs = 0.0, rhs = 0.0;
                            for (int a = 0; a < m; ++a) {
                                lhs += R(a, i, j, z) * g(a, w);
                                rhs += Rb(a, i, j, w) * g(z, a);
                            }
                            adjoint = std::max(adjoint, std::abs(lhs + rhs));
                        }
            EXPECT_LE(adjoint, 1e-10) << name;
            EXPECT_LE(tensor::max_abs_difference(f.st.interchange + f.st.conjugate_interchange, R + Rb), 1e-10) << name;
            EXPECT_LE(geometry::first_bianchi_residual(R), 1e-10) << name;
        }
    }
}

TEST(StatisticalTraceFactor, HalfNotTwo) {
    for (const std::string name : {"centroaffine:1,2", "centroaffine:2,3", "flat-c111:2", "flat-cubic:3,7"}) {
        const BuiltinFrames b(name);
        for (const auto& p : oracle::random_points(b.box(), 5, 37)) {
            const auto f = b.at(p);
            const auto t = cubic_trace_factor(f.geo, f.st);
            EXPECT_LE(t.residual, 1e-10) << name;
            EXPECT_NEAR(t.fitted_factor, -0.5, 1e-10) << name;
            // The factor -2 is not satisfied whenever the trace is non-zero.
            const auto trace = tensor::trace_g(tensor::values(f.st.cubic), 0, 1, f.geo.g_inv());
            const auto eta = tensor::values(f.st.tchebychev_form);
            double minus_two = 0.0;
            for (int k = 0; k < f.geo.dim(); ++k) minus_two = std::max(minus_two, std::abs(eta(k) + 2.0 * trace(k)));
            EXPECT_GT(minus_two, 1e-3) << name;
        }
    }
}

TEST(StatisticalParallel, CriterionOnFlatConstantCubic) {
    const auto f = flat_frames({{"111", "0.7"}, {"112", "-0.4"}, {"222", "1.1"}}, {0.1, 0.2});
    const auto c = parallel_criterion(f.geo, f.st);
    EXPECT_EQ(c.ricci_tt, 0.0);
    EXPECT_LE(std::abs(c.combination), 1e-14);
    EXPECT_LE(c.operator_norm, 1e-14);
}

TEST(StatisticalParallel, VolumeFormOfCentroaffine) {
    const BuiltinFrames b(builtins::centroaffine_power_surface(2, 3));
    for (const auto& p : oracle::random_points(kCentroBox, 20, 38)) {
        const auto f = b.at(p);
        const auto phi = testing_frames::scalar_jet("(1-2)*log(x1)+(1-3)*log(x2)", p);
        EXPECT_LE(parallel_volume_residual(f.geo, f.st, phi), 1e-10);
        const auto wrong = testing_frames::scalar_jet("log(x1)", p);
        EXPECT_GT(parallel_volume_residual(f.geo, f.st, wrong), 1e-3);
    }
}
