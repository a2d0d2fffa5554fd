#include "ecstel/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "ecstel/errors.hpp"

namespace ecstel::oracle {

namespace {

constexpr double kVanishingNormSquared = 1e-20;
constexpr double kDependentPair = 1e-15;

TruncatedKet coherent(cplx label, const OracleConfig &config) {
    return coherent_ket(label, config.cutoff, config.max_deficit).ket;
}

TruncatedKet normalized(TruncatedKet ket, const std::string &what) {
    const double n2 = ket.norm_squared();
    if (n2 <= kVanishingNormSquared) {
        throw DegenerateState(what + " is the zero vector");
    }
    ket *= 1.0 / std::sqrt(n2);
    return ket;
}

// Pauli corrections, kept local so the oracle shares no code with the protocol.
Qubit correct(std::size_t outcome, const Qubit &v) {
    switch (outcome) {
        case 0:
            return v;
        case 1:
            return {v[0], -v[1]};
        case 2:
            return {v[1], v[0]};
        default:
            return {v[1], -v[0]};
    }
}

}  // namespace

OracleConfig OracleConfig::for_channel(const ChannelSpec &spec) {
    return {heuristic_cutoff(std::max(std::abs(spec.alpha), std::abs(spec.beta)))};
}

TruncatedKet quasi_bell_ket(int index, const ChannelSpec &spec, const OracleConfig &config) {
    if (index < 1 || index > 4) {
        throw InvalidArgument("quasi-Bell index must be 1..4");
    }
    const auto a = coherent(spec.alpha, config);
    const auto ma = coherent(-spec.alpha, config);
    const auto b = coherent(spec.beta, config);
    const auto mb = coherent(-spec.beta, config);
    TruncatedKet ket = TruncatedKet::zero(config.cutoff * config.cutoff);
    switch (index) {
        case 1:
            ket = tensor(a, mb) + tensor(ma, b);
            break;
        case 2:
            ket = tensor(a, mb) - tensor(ma, b);
            break;
        case 3:
            ket = tensor(a, b) + tensor(ma, mb);
            break;
        default:
            ket = tensor(a, b) - tensor(ma, mb);
            break;
    }
    return normalized(std::move(ket), "quasi-Bell state " + std::to_string(index));
}

std::array<std::array<double, 4>, 4> oracle_gram(const ChannelSpec &spec, const OracleConfig &config) {
    std::array<std::optional<TruncatedKet>, 4> kets;
    for (int i = 1; i <= 4; ++i) {
        try {
            kets[i - 1] = quasi_bell_ket(i, spec, config);
        } catch (const DegenerateState &) {
        }
    }
    std::array<std::array<double, 4>, 4> g{};
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            g[i][j] = (kets[i] && kets[j]) ? std::abs(inner(*kets[i], *kets[j]))
                                           : std::numeric_limits<double>::quiet_NaN();
        }
    }
    return g;
}

ReducedState oracle_reduced(const ChannelSpec &spec, int index, const OracleConfig &config, std::size_t keep) {
    const auto ket = quasi_bell_ket(index, spec, config);
    auto rho = partial_trace(ket, ModeLayout{config.cutoff, config.cutoff}, keep);
    auto eig = hermitian_eigs(rho);
    return {std::move(rho), std::move(eig.values)};
}

OrthonormalPair loewdin_pair(cplx label, const OracleConfig &config) {
    const std::array<TruncatedKet, 2> k{coherent(label, config), coherent(-label, config)};
    DensityMatrix overlap(2);
    for (std::size_t i = 0; i < 2; ++i) {
        for (std::size_t j = 0; j < 2; ++j) {
            overlap(i, j) = inner(k[i], k[j]);
        }
    }
    const auto eig = hermitian_eigs(overlap);
    if (eig.values[0] <= kDependentPair) {
        throw BasisUndefined("coherent pair is linearly dependent; no orthonormal basis");
    }
    // X = S^{-1/2} = V diag(lambda^{-1/2}) V^dagger; column j builds the j-th basis ket.
    DensityMatrix x(2);
    for (std::size_t i = 0; i < 2; ++i) {
        for (std::size_t j = 0; j < 2; ++j) {
            for (std::size_t m = 0; m < 2; ++m) {
                x(i, j) += eig.vectors(i, m) * std::conj(eig.vectors(j, m)) / std::sqrt(eig.values[m]);
            }
        }
    }
    return {x(0, 0) * k[0] + x(1, 0) * k[1], x(0, 1) * k[0] + x(1, 1) * k[1]};
}

CMat2 oracle_channel_coeffs(const ChannelSpec &spec, const OracleConfig &config) {
    const auto e = loewdin_pair(spec.alpha, config);
    const auto f = loewdin_pair(spec.beta, config);
    const auto psi = quasi_bell_ket(3, spec, config);
    const std::array<const TruncatedKet *, 2> es{&e.first, &e.second};
    const std::array<const TruncatedKet *, 2> fs{&f.first, &f.second};
    CMat2 c{};
    for (std::size_t j = 0; j < 2; ++j) {
        for (std::size_t k = 0; k < 2; ++k) {
            c[j][k] = inner(tensor(*es[j], *fs[k]), psi);
        }
    }
    return c;
}

Qubit oracle_canonical_input(const ChannelSpec &spec, const OracleConfig &config) {
    const auto e = loewdin_pair(spec.alpha, config);
    const auto a = coherent(spec.alpha, config);
    Qubit q{inner(e.first, a), inner(e.second, a)};
    const double n = std::sqrt(std::norm(q[0]) + std::norm(q[1]));
    return {q[0] / n, q[1] / n};
}

TeleportRun oracle_teleport(const ChannelSpec &spec, const Qubit &input, const OracleConfig &config) {
    const std::size_t n = config.cutoff;
    const auto e = loewdin_pair(spec.alpha, config);
    const auto f = loewdin_pair(spec.beta, config);
    const auto channel = quasi_bell_ket(3, spec, config);
    const auto total = tensor(TruncatedKet({input[0], input[1]}), channel);  // [2, N, N]

    const auto q0 = TruncatedKet::basis(2, 0);
    const auto q1 = TruncatedKet::basis(2, 1);
    const double h = 1.0 / std::sqrt(2.0);
    const std::array<TruncatedKet, 4> bell{
        h * (tensor(q0, e.first) + tensor(q1, e.second)),
        h * (tensor(q0, e.first) - tensor(q1, e.second)),
        h * (tensor(q0, e.second) + tensor(q1, e.first)),
        h * (tensor(q0, e.second) - tensor(q1, e.first)),
    };

    TeleportRun run{};
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            const cplx target = (i == j) ? 1.0 : 0.0;
            run.projector_defect = std::max(run.projector_defect, std::abs(inner(bell[i], bell[j]) - target));
        }
    }

    for (std::size_t k = 0; k < 4; ++k) {
        // (<B_k|_{ae} (x) 1_f) |total>
        std::vector<cplx> branch(n);
        for (std::size_t j = 0; j < 2 * n; ++j) {
            const cplx w = std::conj(bell[k][j]);
            if (w == 0.0) {
                continue;
            }
            for (std::size_t m = 0; m < n; ++m) {
                branch[m] += w * total[j * n + m];
            }
        }
        const TruncatedKet v(std::move(branch));
        run.probabilities[k] = v.norm_squared();
        const Qubit coords{inner(f.first, v), inner(f.second, v)};
        const auto residual = v - (coords[0] * f.first + coords[1] * f.second);
        run.leakage = std::max(run.leakage, residual.norm());

        auto corrected = correct(k, coords);
        const double norm = std::sqrt(std::norm(corrected[0]) + std::norm(corrected[1]));
        corrected[0] /= norm;
        corrected[1] /= norm;
        run.corrected[k] = corrected;
        const cplx overlap = std::conj(input[0]) * corrected[0] + std::conj(input[1]) * corrected[1];
        run.fidelity += run.probabilities[k] * std::norm(overlap);
    }
    return run;
}

double phase_distance(const Qubit &u, const Qubit &v) {
    const cplx overlap = std::conj(v[0]) * u[0] + std::conj(v[1]) * u[1];
    const double mag = std::abs(overlap);
    const cplx phase = mag > 0.0 ? overlap / mag : cplx(1.0);
    return std::sqrt(std::norm(u[0] - phase * v[0]) + std::norm(u[1] - phase * v[1]));
}

}  // namespace ecstel::oracle
