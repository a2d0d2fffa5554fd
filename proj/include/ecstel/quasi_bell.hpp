#pragma once

// Quasi-Bell entangled coherent states built from the coherent pairs
// {|alpha>, |-alpha>} (mode A) and {|beta>, |-beta>} (mode B):
//
//   |Psi_1> ~ |a>|-b> + |-a>|b>      |Psi_3> ~ |a>|b> + |-a>|-b>
//   |Psi_2> ~ |a>|-b> - |-a>|b>      |Psi_4> ~ |a>|b> - |-a>|-b>
//
// Every closed form here depends on the labels only through the overlaps
// s = <alpha|-alpha> = exp(-2|alpha|^2) and s' = exp(-2|beta|^2).

#include <array>
#include <cstddef>
#include <optional>

#include "ecstel/fock.hpp"

namespace ecstel {

/// Channel labels and the derived overlaps and mixing angles
/// (sin 2 theta = s, theta in (0, pi/4]).
struct ChannelSpec {
    cplx alpha;
    cplx beta;
    double s;
    double s_prime;
    double theta;
    double theta_prime;
    /// cos 2 theta = sqrt((1 - s)(1 + s)), kept separately so it is exactly 0 at s = 1.
    double cos_2theta;
    double cos_2theta_prime;
};

ChannelSpec make_channel(cplx alpha, cplx beta);

/// Channel with real labels chosen so that sin 2 theta = s, sin 2 theta' = s'.
/// Both angles must lie in (0, pi/4].
ChannelSpec channel_from_angles(double theta, double theta_prime);

/// Below this |alpha|^2 + |beta|^2 the odd states (2 and 4) vanish.
inline constexpr double kDegenerateLabelNorm = 1e-12;

bool odd_states_degenerate(const ChannelSpec &spec);

struct QuasiBellState {
    int index;
    ChannelSpec spec;
    double norm_const;
    TruncatedKet ket;  // layout [N, N], mode A first

    ModeLayout layout() const;
};

/// Throws InvalidArgument for an index outside 1..4 and DegenerateState for
/// the vanishing odd states.
QuasiBellState quasi_bell_state(int index, const ChannelSpec &spec, std::size_t cutoff);

/// 1 / sqrt(2 (1 +- s s')), + for the even states 1, 3.
double quasi_bell_norm_const(int index, const ChannelSpec &spec);

/// Absolute overlaps |<Psi_i|Psi_j>|, zero-based indices.
struct GramMatrix {
    std::array<std::array<double, 4>, 4> entries;
    /// False when the 2-4 block is undefined (degenerate odd states); those
    /// entries then hold NaN.
    bool odd_block_defined;

    double g13() const { return entries[0][2]; }
    std::optional<double> g24() const;
};

GramMatrix gram_matrix(const ChannelSpec &spec);

/// Reduced-state spectrum {lambda, lambda'} with lambda <= lambda' for the even
/// pair and lambda built on (1 - s) in both cases.
struct EigenPair {
    double lambda;
    double lambda_prime;
};

EigenPair reduced_eigs(int index, const ChannelSpec &spec);

/// -sum lambda log2 lambda with 0 log 0 = 0.
double binary_entropy(const EigenPair &pair);

double entanglement_entropy(int index, const ChannelSpec &spec);

/// C = cos 2theta cos 2theta' / (1 + sin 2theta sin 2theta') for |Psi_3>.
double concurrence_channel(const ChannelSpec &spec);

struct EntanglementReport {
    EigenPair eigen_pair;
    double entropy_bits;
    double concurrence;
};

EntanglementReport entanglement_report(int index, const ChannelSpec &spec);

}  // namespace ecstel
