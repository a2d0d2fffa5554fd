#pragma once

// Teleportation of a qubit over the |Psi_3> quasi-Bell channel.
//
// Each coherent pair is replaced by its symmetric orthonormalisation
//   |e1> = (cos t |a> - sin t |-a>) / cos 2t,   |e2> = (-sin t |a> + cos t |-a>) / cos 2t
// with sin 2t = <a|-a>, so that |a> = cos t |e1> + sin t |e2> and
// |-a> = sin t |e1> + cos t |e2>. Mode B uses t' and {|f1>, |f2>} the same way.
//
// The sender measures (a, e) in {Phi+, Phi-, Psi+, Psi-} built on {|e1>, |e2>}
// and the receiver applies I, sigma_z, sigma_x, i sigma_y respectively, with
//   sigma_x (u, v) = (v, u),  sigma_z (u, v) = (u, -v),  i sigma_y (u, v) = (v, -u).

#include <array>
#include <cstdint>
#include <string_view>

#include "ecstel/fock.hpp"
#include "ecstel/quasi_bell.hpp"

namespace ecstel::teleport {

using Mat2 = std::array<std::array<double, 2>, 2>;
using Qubit = std::array<cplx, 2>;

struct OnbCoeffs {
    /// Rows give |e1>, |e2> in terms of (|a>, |-a>).
    Mat2 forward_a;
    /// Rows give |a>, |-a> in terms of (|e1>, |e2>).
    Mat2 inverse_a;
    Mat2 forward_b;
    Mat2 inverse_b;
};

/// Below pi/4 - 1e-8 the pair is linearly independent enough to orthonormalise.
inline constexpr double kBasisAngleMargin = 1e-8;

bool basis_defined(const ChannelSpec &spec);

/// Throws BasisUndefined when either mixing angle reaches pi/4 (zero label).
OnbCoeffs onb_coeffs(const ChannelSpec &spec);

struct OnbKets {
    TruncatedKet e1, e2, f1, f2;
};

/// The orthonormal kets realised in a truncated Fock space.
OnbKets realize_onb(const ChannelSpec &spec, std::size_t cutoff);

/// |Psi_3> = sum c_jk |e_j>|f_k>; entry [j][k] holds c_{j+1, k+1}.
Mat2 channel_in_onb(const ChannelSpec &spec);

/// 2 |c11 c22 - c12 c21|.
double pure_state_concurrence(const Mat2 &c);

class InputQubit {
  public:
    /// Throws InvalidArgument unless |a1|^2 + |a2|^2 = 1 within 1e-12.
    InputQubit(cplx a1, cplx a2);
    /// cos t |e1> + sin t |e2>, the coordinates of |alpha> itself.
    static InputQubit canonical(const ChannelSpec &spec);

    cplx a1() const noexcept { return amps_[0]; }
    cplx a2() const noexcept { return amps_[1]; }
    const Qubit &amps() const noexcept { return amps_; }

  private:
    Qubit amps_;
};

enum class BellLabel { phi_plus = 0, phi_minus = 1, psi_plus = 2, psi_minus = 3 };

inline constexpr std::array<BellLabel, 4> kBellOrder{BellLabel::phi_plus, BellLabel::phi_minus, BellLabel::psi_plus,
                                                     BellLabel::psi_minus};

std::string_view to_string(BellLabel label);

/// The receiver's correction for a given outcome.
Qubit apply_correction(BellLabel label, const Qubit &v);

struct MeasurementOutcome {
    BellLabel label;
    double probability;
    Qubit raw;        // unnormalised, squared norm equals probability
    Qubit corrected;  // normalised, after the correction
};

/// P1..P4 for the canonical input, in Bell order.
std::array<double, 4> measurement_probabilities(const ChannelSpec &spec);

std::array<MeasurementOutcome, 4> conditional_states(const ChannelSpec &spec, const InputQubit &input);

/// (cos^2(t - t') + sin^2 2t sin^2(t + t')) / (1 + sin 2t sin 2t') for the
/// canonical input. Total in (t, t'), including the formal endpoint t = pi/4.
double fidelity(const ChannelSpec &spec);

/// sum_i P_i |<psi|chi_i>|^2 from the branch states.
double fidelity_from_outcomes(const std::array<MeasurementOutcome, 4> &outcomes, const InputQubit &input);

/// 2C / (1 + C) with C the channel concurrence.
double masfi(const ChannelSpec &spec);

struct TeleportReport {
    ChannelSpec spec;
    /// Empty probabilities/states when formal_limit is set.
    std::array<MeasurementOutcome, 4> outcomes;
    double fidelity;
    double concurrence;
    double masfi;
    /// The orthonormal basis (and so the operational protocol) is undefined;
    /// only the closed forms were evaluated.
    bool formal_limit;
};

TeleportReport teleport_report(const ChannelSpec &spec);

struct Shot {
    BellLabel label;
    Qubit corrected;
};

/// Single seeded shot; inverse-CDF sampling over the Bell order.
Shot teleport_once(const ChannelSpec &spec, const InputQubit &input, std::uint64_t seed);

/// Outcome counts for `shots` draws from one seeded stream.
std::array<std::uint64_t, 4> sample_counts(const ChannelSpec &spec, const InputQubit &input, std::uint64_t shots,
                                           std::uint64_t seed);

}  // namespace ecstel::teleport
