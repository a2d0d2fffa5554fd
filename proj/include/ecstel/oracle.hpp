#pragma once

// Brute-force reference computations in truncated Fock space.
//
// Nothing here calls the closed forms of quasi_bell or teleport: states are
// assembled from coherent kets and normalised numerically, orthonormal bases
// come from symmetric (Loewdin) orthogonalisation of the numerically computed
// overlap matrix, and every probability, reduced spectrum and overlap is read
// off explicit vectors. Only the labels alpha, beta of a ChannelSpec are used.

#include <array>
#include <cstddef>
#include <vector>

#include "ecstel/fock.hpp"
#include "ecstel/quasi_bell.hpp"

namespace ecstel::oracle {

using Qubit = std::array<cplx, 2>;
using CMat2 = std::array<std::array<cplx, 2>, 2>;

struct OracleConfig {
    std::size_t cutoff;
    double tolerance = 1e-10;
    /// Largest coherent truncation deficit tolerated before refusing.
    double max_deficit = 1e-13;

    /// Three-party layout [2, N, N]: logical qubit a, mode e, mode f.
    ModeLayout layout() const { return ModeLayout{2, cutoff, cutoff}; }

    /// Heuristic cutoff for the larger label of the channel.
    static OracleConfig for_channel(const ChannelSpec &spec);
};

/// Unit-norm quasi-Bell ket on [N, N]. Throws DegenerateState for a vanishing
/// state and TruncationInsufficient when a coherent factor is under-resolved.
TruncatedKet quasi_bell_ket(int index, const ChannelSpec &spec, const OracleConfig &config);

/// |<Psi_i|Psi_j>| from explicit kets. Rows/cols of vanishing odd states are NaN.
std::array<std::array<double, 4>, 4> oracle_gram(const ChannelSpec &spec, const OracleConfig &config);

struct ReducedState {
    DensityMatrix rho;
    std::vector<double> eigenvalues;  // ascending, full spectrum
};

/// Reduced state of |Psi_index> keeping mode A (keep = 0) or mode B (keep = 1).
ReducedState oracle_reduced(const ChannelSpec &spec, int index, const OracleConfig &config, std::size_t keep = 0);

struct OrthonormalPair {
    TruncatedKet first;
    TruncatedKet second;
};

/// Symmetric orthonormalisation of {|label>, |-label>}. Throws BasisUndefined
/// when the pair is numerically dependent.
OrthonormalPair loewdin_pair(cplx label, const OracleConfig &config);

/// Amplitudes <e_j f_k | Psi_3>.
CMat2 oracle_channel_coeffs(const ChannelSpec &spec, const OracleConfig &config);

/// Coordinates of |alpha> in the orthonormalised mode-A basis.
Qubit oracle_canonical_input(const ChannelSpec &spec, const OracleConfig &config);

struct TeleportRun {
    std::array<double, 4> probabilities;  // Phi+, Phi-, Psi+, Psi-
    std::array<Qubit, 4> corrected;       // normalised, in the f basis
    double fidelity;
    /// Largest norm of a branch component outside span{f1, f2}.
    double leakage;
    /// max |G - I| over the Gram matrix of the four Bell vectors on (a, e).
    double projector_defect;
};

/// Full three-party protocol: |input>_a (x) |Psi_3>_ef, Bell projections on
/// (a, e), Pauli corrections on f, weighted overlap with the input.
TeleportRun oracle_teleport(const ChannelSpec &spec, const Qubit &input, const OracleConfig &config);

/// min over phi of |u - e^{i phi} v|.
double phase_distance(const Qubit &u, const Qubit &v);

}  // namespace ecstel::oracle
