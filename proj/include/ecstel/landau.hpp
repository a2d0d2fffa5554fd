#pragma once

// Exotic Landau problem: a charged particle on the noncommutative plane in a
// constant magnetic field B along z.
//
// Units are natural by default (hbar = M = e = 1). The noncommutative area
// parameter theta_nc and the exotic parameter kappa are tied by
// theta_nc = kappa / M^2.

#include <array>
#include <cstddef>
#include <vector>

namespace ecstel::landau {

class LandauParams {
  public:
    struct Fields {
        double mass = 1.0;
        double charge = 1.0;
        double field_b = 1.0;
        double theta_nc = 0.0;
        double hbar = 1.0;
        std::array<double, 2> field_e{0.0, 0.0};
    };

    /// kappa is derived as theta_nc * M^2.
    explicit LandauParams(const Fields &fields);
    LandauParams() : LandauParams(Fields{}) {}
    /// theta_nc is derived as kappa / M^2.
    static LandauParams from_kappa(Fields fields, double kappa);

    double mass() const noexcept { return f_.mass; }
    double charge() const noexcept { return f_.charge; }
    double field_b() const noexcept { return f_.field_b; }
    double theta_nc() const noexcept { return f_.theta_nc; }
    double kappa() const noexcept { return kappa_; }
    double hbar() const noexcept { return f_.hbar; }
    std::array<double, 2> field_e() const noexcept { return f_.field_e; }
    bool pure_magnetic() const noexcept { return f_.field_e[0] == 0.0 && f_.field_e[1] == 0.0; }

    /// 1 - e theta_nc B.
    double exotic_factor() const noexcept { return 1.0 - f_.charge * f_.theta_nc * f_.field_b; }

  private:
    Fields f_;
    double kappa_;
};

struct EffectiveParams {
    double mass_star;   // M* = M (1 - e theta B)
    double omega;       // eB / M
    double omega_star;  // omega / (1 - e theta B)
};

/// Throws CriticalCase when |1 - e theta B| <= 1e-12.
EffectiveParams effective_params(const LandauParams &p);

/// E_n = hbar omega* (n + 1/2).
double energy_level(unsigned n, const LandauParams &p);

/// Level spacing assembled from the ladder normalisation [a, a^dag] and the
/// prefactor of a^dag a in the Hamiltonian; equals hbar omega*.
double ladder_spacing(const LandauParams &p);

struct ClassicalState {
    double x1 = 0.0;
    double x2 = 0.0;
    double p1 = 0.0;
    double p2 = 0.0;
    double t = 0.0;
};

/// x(t) = R(-omega* t) alpha + beta, with R(phi) the counter-clockwise rotation.
struct CyclotronSolution {
    std::array<double, 2> alpha_vec;
    std::array<double, 2> beta_vec;
    double omega_star;
    double t0;

    std::array<double, 2> position(double t) const;
};

CyclotronSolution cyclotron_closed_form(const ClassicalState &init, const LandauParams &p);

/// Velocity from M* xdot_i = p_i - M e theta eps^{ij} E^j.
std::array<double, 2> velocity(const ClassicalState &s, const LandauParams &p);

/// Fixed-step RK4 from init.t to t_end. The returned trajectory includes the
/// initial state; the last step is shortened to land on t_end.
std::vector<ClassicalState> integrate_eom(const ClassicalState &init, const LandauParams &p, double t_end, double dt);

struct ConservedQuantities {
    std::array<double, 2> translation;  // P_i = M* (xdot_i - omega* eps^{ij} x_j)
    std::array<double, 2> rotation;     // K_i = (M*/M) R(omega* t) p_i
};

ConservedQuantities conserved_quantities(const ClassicalState &s, const LandauParams &p);

/// Poisson bracket {f, g} for the magnetic noncommutative structure
/// {x_i, x_j} = (M/M*) theta eps, {x_i, p_j} = (M/M*) delta, {p_i, p_j} = (M/M*) e B eps,
/// from analytic phase-space gradients ordered (x1, x2, p1, p2).
double poisson_bracket(const std::array<double, 4> &grad_f, const std::array<double, 4> &grad_g,
                       const LandauParams &p);

struct DriftReport {
    double period;          // 2 pi / |omega*|
    std::size_t steps;
    std::array<double, 4> drift;  // P1, P2, K1, K2; relative to max(1, |initial|)
    double max_drift() const;
};

/// Integrates `periods` cyclotron periods at dt = period / steps_per_period and
/// records the worst drift of each conserved quantity.
DriftReport conservation_drift(const ClassicalState &init, const LandauParams &p, double periods = 10.0,
                               std::size_t steps_per_period = 1000);

}  // namespace ecstel::landau
