#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ecstel/errors.hpp"
#include "ecstel/landau.hpp"
#include "test_oracles.hpp"

using namespace ecstel;
using namespace ecstel::landau;

namespace {

LandauParams make(double mass, double charge, double field_b, double theta_nc, double hbar = 1.0) {
    LandauParams::Fields f;
    f.mass = mass;
    f.charge = charge;
    f.field_b = field_b;
    f.theta_nc = theta_nc;
    f.hbar = hbar;
    return LandauParams(f);
}

// Random parameters with a prescribed e theta B.
LandauParams random_params(double etb, std::mt19937_64 &rng) {
    std::uniform_real_distribution<double> u(0.5, 2.0);
    const double mass = u(rng);
    const double charge = u(rng);
    const double field_b = u(rng);
    return make(mass, charge, field_b, etb / (charge * field_b));
}

}  // namespace

TEST(Effective, CommutativeLimit) {
    const auto p = make(2.0, 1.5, 0.7, 0.0);
    const auto e = effective_params(p);
    EXPECT_EQ(e.mass_star, 2.0);
    EXPECT_DOUBLE_EQ(e.omega, 1.5 * 0.7 / 2.0);
    EXPECT_EQ(e.omega_star, e.omega);
}

TEST(Effective, HalfExoticFactor) {
    const auto e = effective_params(make(1.0, 1.0, 1.0, 0.5));
    EXPECT_DOUBLE_EQ(e.mass_star, 0.5);
    EXPECT_DOUBLE_EQ(e.omega, 1.0);
    EXPECT_DOUBLE_EQ(e.omega_star, 2.0);
    EXPECT_DOUBLE_EQ(e.mass_star * e.omega_star, 1.0);
}

TEST(Effective, ProductIdentity) {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> etb(-2.0, 0.95);
    for (int trial = 0; trial < 50; ++trial) {
        const auto p = random_params(etb(rng), rng);
        const auto e = effective_params(p);
        const double eb = p.charge() * p.field_b();
        EXPECT_LT(std::abs(e.omega_star * e.mass_star - eb) / std::abs(eb), 1e-12);
    }
}

TEST(Effective, CriticalCaseRejected) {
    const auto p = make(1.0, 1.0, 2.0, 0.5);
    EXPECT_THROW(effective_params(p), CriticalCase);
    EXPECT_THROW(energy_level(0, p), CriticalCase);
    EXPECT_THROW(ladder_spacing(p), CriticalCase);
    try {
        effective_params(p);
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::critical_case);
    }
}

TEST(Effective, KappaRelation) {
    LandauParams::Fields f;
    f.mass = 2.0;
    const auto p = LandauParams::from_kappa(f, 0.8);
    EXPECT_DOUBLE_EQ(p.theta_nc(), 0.2);
    EXPECT_DOUBLE_EQ(make(2.0, 1.0, 1.0, 0.2).kappa(), 0.8);
}

TEST(Levels, GroundAndFirst) {
    const auto p = make(1.3, 0.9, 1.7, 0.2, 0.5);
    const auto e = effective_params(p);
    EXPECT_DOUBLE_EQ(energy_level(0, p), 0.5 * p.hbar() * e.omega_star);

    const auto c = make(1.3, 0.9, 1.7, 0.0, 0.5);
    EXPECT_NEAR(energy_level(1, c), 1.5 * 0.5 * 0.9 * 1.7 / 1.3, 1e-15);
}

TEST(Levels, SpacingIsHbarOmegaStar) {
    std::mt19937_64 rng(4);
    for (double etb : {0.0, 0.3, 0.7, -0.4}) {
        const auto p = random_params(etb, rng);
        const double target = p.hbar() * effective_params(p).omega_star;
        EXPECT_LT(std::abs(ladder_spacing(p) - target) / target, 1e-14);
        for (unsigned n = 0; n < 20; ++n) {
            EXPECT_LT(std::abs(energy_level(n + 1, p) - energy_level(n, p) - target) / target, 1e-13);
        }
    }
}

TEST(Cyclotron, StationaryPoint) {
    const auto p = make(1.0, 1.0, 1.0, 0.3);
    const ClassicalState rest{0.4, -1.1, 0.0, 0.0, 0.0};
    const auto sol = cyclotron_closed_form(rest, p);
    for (double t : {0.0, 1.0, 7.5}) {
        const auto x = sol.position(t);
        EXPECT_DOUBLE_EQ(x[0], 0.4);
        EXPECT_DOUBLE_EQ(x[1], -1.1);
    }
    const auto eff = effective_params(p);
    const auto q = conserved_quantities(rest, p);
    EXPECT_NEAR(q.translation[0], -eff.mass_star * eff.omega_star * -1.1, 1e-15);
    EXPECT_NEAR(q.translation[1], eff.mass_star * eff.omega_star * 0.4, 1e-15);
}

TEST(Cyclotron, ClosedFormMatchesIntegrator) {
    std::mt19937_64 rng(6);
    std::normal_distribution<double> g(0.0, 1.0);
    for (double etb : {0.0, 0.3, 0.7}) {
        const auto p = random_params(etb, rng);
        const ClassicalState init{g(rng), g(rng), g(rng), g(rng), 0.0};
        const auto sol = cyclotron_closed_form(init, p);
        const double period = 2.0 * std::numbers::pi / std::abs(sol.omega_star);
        const auto traj = integrate_eom(init, p, 3.0 * period, period / 1000.0);
        EXPECT_DOUBLE_EQ(traj.back().t, 3.0 * period);
        for (std::size_t k = 0; k < traj.size(); k += 97) {
            const auto x = sol.position(traj[k].t);
            EXPECT_NEAR(traj[k].x1, x[0], 1e-8);
            EXPECT_NEAR(traj[k].x2, x[1], 1e-8);
        }
    }
}

TEST(Cyclotron, EnergyConserved) {
    const auto p = make(1.2, 0.8, 1.5, 0.25);
    const ClassicalState init{0.3, 0.2, -0.7, 1.1, 0.0};
    const auto traj = integrate_eom(init, p, 20.0, 0.005);
    const double e0 = init.p1 * init.p1 + init.p2 * init.p2;
    for (const auto &s : traj) {
        EXPECT_NEAR(s.p1 * s.p1 + s.p2 * s.p2, e0, 1e-9);
    }
}

TEST(Cyclotron, ElectricFieldUnsupported) {
    LandauParams::Fields f;
    f.field_e = {0.1, 0.0};
    const LandauParams p(f);
    EXPECT_THROW(cyclotron_closed_form({}, p), Unsupported);
    EXPECT_THROW(conserved_quantities({}, p), Unsupported);
}

TEST(Cyclotron, WeakFieldDriftsStraight) {
    const auto p = make(2.0, 1.0, 1e-9, 0.0);
    const ClassicalState init{0.0, 0.0, 1.0, -0.5, 0.0};
    const auto traj = integrate_eom(init, p, 10.0, 0.01);
    const auto &last = traj.back();
    EXPECT_NEAR(last.p1, 1.0, 1e-7);
    EXPECT_NEAR(last.p2, -0.5, 1e-7);
    EXPECT_NEAR(last.x1, 5.0, 1e-6);
    EXPECT_NEAR(last.x2, -2.5, 1e-6);
}

TEST(Conservation, DriftBelowBound) {
    std::mt19937_64 rng(13);
    std::normal_distribution<double> g(0.0, 1.0);
    for (double etb : {0.0, 0.3, 0.7}) {
        const auto p = random_params(etb, rng);
        const ClassicalState init{g(rng), g(rng), g(rng), g(rng), 0.0};
        const auto report = conservation_drift(init, p);
        EXPECT_EQ(report.steps, 10000u);
        EXPECT_LT(report.max_drift(), 1e-8) << "e theta B = " << etb;
    }
}

TEST(Conservation, BracketAlgebra) {
    std::mt19937_64 rng(21);
    std::normal_distribution<double> g(0.0, 1.0);
    for (double etb : {0.0, 0.3, 0.7, -0.5}) {
        const auto p = random_params(etb, rng);
        const auto eff = effective_params(p);
        const std::array<double, 4> z{g(rng), g(rng), g(rng), g(rng)};
        auto state = [](const std::array<double, 4> &v) { return ClassicalState{v[0], v[1], v[2], v[3], 0.0}; };
        auto component = [&](int which) {
            return [&, which](const std::array<double, 4> &v) {
                const auto q = conserved_quantities(state(v), p);
                const std::array<double, 4> all{q.translation[0], q.translation[1], q.rotation[0], q.rotation[1]};
                return all[which];
            };
        };
        const auto gp1 = ecstel::testing::numeric_gradient(component(0), z);
        const auto gp2 = ecstel::testing::numeric_gradient(component(1), z);
        const auto gk1 = ecstel::testing::numeric_gradient(component(2), z);
        const auto gk2 = ecstel::testing::numeric_gradient(component(3), z);
        const double scale = eff.mass_star * eff.omega_star;
        EXPECT_NEAR(poisson_bracket(gp1, gp2, p), -scale, 1e-8 * std::abs(scale));
        EXPECT_NEAR(poisson_bracket(gk1, gk2, p), p.exotic_factor() * scale, 1e-8 * std::abs(scale));
        EXPECT_NEAR(poisson_bracket(gp1, gk1, p), 0.0, 1e-8);
        EXPECT_NEAR(poisson_bracket(gp2, gk2, p), 0.0, 1e-8);
        EXPECT_NEAR(poisson_bracket(gp1, gk2, p), 0.0, 1e-8);
    }
}

TEST(Continuity, SmallThetaApproachesCommutative) {
    const auto a = make(1.1, 0.9, 1.3, 1e-8);
    const auto b = make(1.1, 0.9, 1.3, 0.0);
    auto rel = [](double x, double y) { return std::abs(x - y) / std::max(std::abs(y), 1e-300); };
    const auto ea = effective_params(a);
    const auto eb = effective_params(b);
    EXPECT_LT(rel(ea.mass_star, eb.mass_star), 1e-6);
    EXPECT_LT(rel(ea.omega_star, eb.omega_star), 1e-6);
    for (unsigned n = 0; n < 5; ++n) {
        EXPECT_LT(rel(energy_level(n, a), energy_level(n, b)), 1e-6);
    }
    const ClassicalState init{0.5, -0.2, 0.3, 0.9, 0.0};
    const auto xa = cyclotron_closed_form(init, a).position(4.0);
    const auto xb = cyclotron_closed_form(init, b).position(4.0);
    EXPECT_LT(rel(xa[0], xb[0]), 1e-6);
    EXPECT_LT(rel(xa[1], xb[1]), 1e-6);
}

TEST(Integrator, ResourceGuard) {
    const LandauParams p;
    EXPECT_THROW(integrate_eom({}, p, 1.0, 1e-9), ResourceLimit);
    EXPECT_THROW(integrate_eom({}, p, 1.0, 0.0), InvalidArgument);
}
