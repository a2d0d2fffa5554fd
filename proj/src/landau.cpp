#include "ecstel/landau.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ecstel/errors.hpp"

namespace ecstel::landau {

namespace {

constexpr double kCriticalTolerance = 1e-12;
constexpr double kMaxSteps = 1e8;

// R(phi) v, counter-clockwise.
std::array<double, 2> rotate(double phi, const std::array<double, 2> &v) {
    const double c = std::cos(phi);
    const double s = std::sin(phi);
    return {c * v[0] - s * v[1], s * v[0] + c * v[1]};
}

void require_finite(const ClassicalState &s) {
    if (!std::isfinite(s.x1) || !std::isfinite(s.x2) || !std::isfinite(s.p1) || !std::isfinite(s.p2) ||
        !std::isfinite(s.t)) {
        throw InvalidArgument("classical state has non-finite components");
    }
}

void require_pure_magnetic(const LandauParams &p, const char *what) {
    if (!p.pure_magnetic()) {
        throw Unsupported(std::string(what) + " is only defined for E = 0");
    }
}

}  // namespace

LandauParams::LandauParams(const Fields &fields) : f_(fields), kappa_(fields.theta_nc * fields.mass * fields.mass) {
    if (!(f_.mass > 0.0)) {
        throw InvalidArgument("mass must be positive");
    }
    if (!(f_.hbar > 0.0)) {
        throw InvalidArgument("hbar must be positive");
    }
    if (!std::isfinite(f_.charge) || !std::isfinite(f_.field_b) || !std::isfinite(f_.theta_nc) ||
        !std::isfinite(f_.field_e[0]) || !std::isfinite(f_.field_e[1])) {
        throw InvalidArgument("Landau parameters must be finite");
    }
}

LandauParams LandauParams::from_kappa(Fields fields, double kappa) {
    if (!(fields.mass > 0.0)) {
        throw InvalidArgument("mass must be positive");
    }
    fields.theta_nc = kappa / (fields.mass * fields.mass);
    return LandauParams(fields);
}

EffectiveParams effective_params(const LandauParams &p) {
    const double factor = p.exotic_factor();
    if (std::abs(factor) <= kCriticalTolerance) {
        throw CriticalCase("critical case e*theta*B = 1: effective mass vanishes");
    }
    const double omega = p.charge() * p.field_b() / p.mass();
    return {p.mass() * factor, omega, omega / factor};
}

double energy_level(unsigned n, const LandauParams &p) {
    const auto eff = effective_params(p);
    return p.hbar() * eff.omega_star * (static_cast<double>(n) + 0.5);
}

double ladder_spacing(const LandauParams &p) {
    const auto eff = effective_params(p);
    const double factor = p.exotic_factor();
    // [a, a^dag] = 2 hbar (1 - eB theta) M omega ; H = a^dag a / (2 M (1 - eB theta)^2) + ...
    const double commutator = 2.0 * p.hbar() * factor * p.mass() * eff.omega;
    const double prefactor = 1.0 / (2.0 * p.mass() * factor * factor);
    return commutator * prefactor;
}

std::array<double, 2> CyclotronSolution::position(double t) const {
    const auto r = rotate(-omega_star * (t - t0), alpha_vec);
    return {r[0] + beta_vec[0], r[1] + beta_vec[1]};
}

CyclotronSolution cyclotron_closed_form(const ClassicalState &init, const LandauParams &p) {
    require_pure_magnetic(p, "cyclotron closed form");
    require_finite(init);
    const auto eff = effective_params(p);
    const double eb = p.charge() * p.field_b();
    if (eb == 0.0) {
        throw InvalidArgument("cyclotron closed form requires e*B != 0");
    }
    // xdot(t0) = omega* (alpha_2, -alpha_1) = p / M*, and M* omega* = e B.
    const std::array<double, 2> alpha{-init.p2 / eb, init.p1 / eb};
    const std::array<double, 2> beta{init.x1 - alpha[0], init.x2 - alpha[1]};
    return {alpha, beta, eff.omega_star, init.t};
}

std::array<double, 2> velocity(const ClassicalState &s, const LandauParams &p) {
    const auto eff = effective_params(p);
    const auto e_field = p.field_e();
    const double shift = p.mass() * p.charge() * p.theta_nc();
    // eps^{12} = 1: eps^{1j} E^j = E2, eps^{2j} E^j = -E1.
    return {(s.p1 - shift * e_field[1]) / eff.mass_star, (s.p2 + shift * e_field[0]) / eff.mass_star};
}

namespace {

struct Derivative {
    double x1, x2, p1, p2;
};

Derivative rhs(const ClassicalState &s, const LandauParams &p) {
    const auto v = velocity(s, p);
    const double eb = p.charge() * p.field_b();
    const auto e_field = p.field_e();
    return {v[0], v[1], eb * v[1] + p.charge() * e_field[0], -eb * v[0] + p.charge() * e_field[1]};
}

ClassicalState advance(const ClassicalState &s, const Derivative &d, double h) {
    return {s.x1 + h * d.x1, s.x2 + h * d.x2, s.p1 + h * d.p1, s.p2 + h * d.p2, s.t + h};
}

ClassicalState rk4_step(const ClassicalState &s, const LandauParams &p, double h) {
    const auto k1 = rhs(s, p);
    const auto k2 = rhs(advance(s, k1, 0.5 * h), p);
    const auto k3 = rhs(advance(s, k2, 0.5 * h), p);
    const auto k4 = rhs(advance(s, k3, h), p);
    return {s.x1 + h / 6.0 * (k1.x1 + 2.0 * k2.x1 + 2.0 * k3.x1 + k4.x1),
            s.x2 + h / 6.0 * (k1.x2 + 2.0 * k2.x2 + 2.0 * k3.x2 + k4.x2),
            s.p1 + h / 6.0 * (k1.p1 + 2.0 * k2.p1 + 2.0 * k3.p1 + k4.p1),
            s.p2 + h / 6.0 * (k1.p2 + 2.0 * k2.p2 + 2.0 * k3.p2 + k4.p2), s.t + h};
}

}  // namespace

std::vector<ClassicalState> integrate_eom(const ClassicalState &init, const LandauParams &p, double t_end,
                                          double dt) {
    require_finite(init);
    effective_params(p);
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw InvalidArgument("integration step must be positive and finite");
    }
    if (!std::isfinite(t_end) || t_end < init.t) {
        throw InvalidArgument("integration end time must be finite and not before the initial time");
    }
    const double span = t_end - init.t;
    const double steps_real = std::ceil(span / dt * (1.0 - 1e-12));
    if (steps_real > kMaxSteps) {
        throw ResourceLimit("integration would take more than 1e8 steps");
    }
    const auto steps = static_cast<std::size_t>(steps_real);

    std::vector<ClassicalState> trajectory;
    trajectory.reserve(steps + 1);
    trajectory.push_back(init);
    for (std::size_t k = 0; k < steps; ++k) {
        const auto &cur = trajectory.back();
        // Step times are recomputed from the index so rounding does not accumulate.
        const double target = (k + 1 == steps) ? t_end : init.t + static_cast<double>(k + 1) * dt;
        auto next = rk4_step(cur, p, target - cur.t);
        next.t = target;
        trajectory.push_back(next);
    }
    return trajectory;
}

ConservedQuantities conserved_quantities(const ClassicalState &s, const LandauParams &p) {
    require_pure_magnetic(p, "conserved quantities");
    const auto eff = effective_params(p);
    const auto v = velocity(s, p);
    ConservedQuantities q{};
    q.translation = {eff.mass_star * (v[0] - eff.omega_star * s.x2), eff.mass_star * (v[1] + eff.omega_star * s.x1)};
    const auto rotated = rotate(eff.omega_star * s.t, {s.p1, s.p2});
    q.rotation = {eff.mass_star / p.mass() * rotated[0], eff.mass_star / p.mass() * rotated[1]};
    return q;
}

double poisson_bracket(const std::array<double, 4> &gf, const std::array<double, 4> &gg, const LandauParams &p) {
    const auto eff = effective_params(p);
    const double mu = p.mass() / eff.mass_star;
    const double xx = mu * p.theta_nc();
    const double pp = mu * p.charge() * p.field_b();
    // Antisymmetric structure over (x1, x2, p1, p2).
    const double canonical = (gf[0] * gg[2] + gf[1] * gg[3]) - (gg[0] * gf[2] + gg[1] * gf[3]);
    return mu * canonical + xx * (gf[0] * gg[1] - gf[1] * gg[0]) + pp * (gf[2] * gg[3] - gf[3] * gg[2]);
}

double DriftReport::max_drift() const { return *std::max_element(drift.begin(), drift.end()); }

DriftReport conservation_drift(const ClassicalState &init, const LandauParams &p, double periods,
                               std::size_t steps_per_period) {
    require_pure_magnetic(p, "conservation drift");
    const auto eff = effective_params(p);
    if (eff.omega_star == 0.0) {
        throw InvalidArgument("conservation drift needs a nonzero cyclotron frequency");
    }
    if (steps_per_period == 0 || !(periods > 0.0)) {
        throw InvalidArgument("conservation drift needs positive periods and steps");
    }
    const double period = 2.0 * std::numbers::pi / std::abs(eff.omega_star);
    const auto trajectory =
        integrate_eom(init, p, init.t + periods * period, period / static_cast<double>(steps_per_period));

    const auto q0 = conserved_quantities(trajectory.front(), p);
    const std::array<double, 4> ref{q0.translation[0], q0.translation[1], q0.rotation[0], q0.rotation[1]};
    DriftReport report{period, trajectory.size() - 1, {0.0, 0.0, 0.0, 0.0}};
    for (const auto &s : trajectory) {
        const auto q = conserved_quantities(s, p);
        const std::array<double, 4> cur{q.translation[0], q.translation[1], q.rotation[0], q.rotation[1]};
        for (std::size_t k = 0; k < 4; ++k) {
            const double scale = std::max(1.0, std::abs(ref[k]));
            report.drift[k] = std::max(report.drift[k], std::abs(cur[k] - ref[k]) / scale);
        }
    }
    return report;
}

}  // namespace ecstel::landau
