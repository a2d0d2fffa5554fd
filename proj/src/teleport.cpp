#include "ecstel/teleport.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "ecstel/errors.hpp"

namespace ecstel::teleport {

namespace {

constexpr double kInputNormTolerance = 1e-12;

Mat2 forward(double t, double cos_2t) {
    const double c = std::cos(t) / cos_2t;
    const double s = std::sin(t) / cos_2t;
    return {{{c, -s}, {-s, c}}};
}

Mat2 inverse(double t) {
    const double c = std::cos(t);
    const double s = std::sin(t);
    return {{{c, s}, {s, c}}};
}

void require_basis(const ChannelSpec &spec) {
    if (!basis_defined(spec)) {
        throw BasisUndefined("orthonormal basis undefined: a coherent label is zero (mixing angle pi/4)");
    }
}

double norm2(const Qubit &q) { return std::norm(q[0]) + std::norm(q[1]); }

// Uniform on [0, 1) from the top 53 bits, independent of the standard
// library's distribution implementation.
double uniform(std::mt19937_64 &rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::size_t pick(const std::array<double, 4> &probabilities, double u) {
    double cumulative = 0.0;
    for (std::size_t k = 0; k < 3; ++k) {
        cumulative += probabilities[k];
        if (u < cumulative) {
            return k;
        }
    }
    return 3;
}

std::array<double, 4> branch_probabilities(const std::array<MeasurementOutcome, 4> &outcomes) {
    return {outcomes[0].probability, outcomes[1].probability, outcomes[2].probability, outcomes[3].probability};
}

}  // namespace

bool basis_defined(const ChannelSpec &spec) {
    constexpr double limit = std::numbers::pi / 4.0 - kBasisAngleMargin;
    return spec.theta < limit && spec.theta_prime < limit;
}

OnbCoeffs onb_coeffs(const ChannelSpec &spec) {
    require_basis(spec);
    return {forward(spec.theta, spec.cos_2theta), inverse(spec.theta), forward(spec.theta_prime, spec.cos_2theta_prime),
            inverse(spec.theta_prime)};
}

OnbKets realize_onb(const ChannelSpec &spec, std::size_t cutoff) {
    const auto coeffs = onb_coeffs(spec);
    const auto a_plus = coherent_ket(spec.alpha, cutoff).ket;
    const auto a_minus = coherent_ket(-spec.alpha, cutoff).ket;
    const auto b_plus = coherent_ket(spec.beta, cutoff).ket;
    const auto b_minus = coherent_ket(-spec.beta, cutoff).ket;
    auto combine = [](const Mat2 &m, std::size_t row, const TruncatedKet &plus, const TruncatedKet &minus) {
        return m[row][0] * plus + m[row][1] * minus;
    };
    return {combine(coeffs.forward_a, 0, a_plus, a_minus), combine(coeffs.forward_a, 1, a_plus, a_minus),
            combine(coeffs.forward_b, 0, b_plus, b_minus), combine(coeffs.forward_b, 1, b_plus, b_minus)};
}

Mat2 channel_in_onb(const ChannelSpec &spec) {
    require_basis(spec);
    const double norm = 1.0 / std::sqrt(2.0 * (1.0 + spec.s * spec.s_prime));
    const double diag = std::cos(spec.theta - spec.theta_prime) * norm;
    const double off = std::sin(spec.theta + spec.theta_prime) * norm;
    return {{{diag, off}, {off, diag}}};
}

double pure_state_concurrence(const Mat2 &c) { return 2.0 * std::abs(c[0][0] * c[1][1] - c[0][1] * c[1][0]); }

InputQubit::InputQubit(cplx a1, cplx a2) : amps_{a1, a2} {
    if (std::abs(norm2(amps_) - 1.0) > kInputNormTolerance) {
        throw InvalidArgument("input qubit must be normalised");
    }
}

InputQubit InputQubit::canonical(const ChannelSpec &spec) { return {std::cos(spec.theta), std::sin(spec.theta)}; }

std::string_view to_string(BellLabel label) {
    switch (label) {
        case BellLabel::phi_plus:
            return "Phi+";
        case BellLabel::phi_minus:
            return "Phi-";
        case BellLabel::psi_plus:
            return "Psi+";
        case BellLabel::psi_minus:
            return "Psi-";
    }
    return "?";
}

Qubit apply_correction(BellLabel label, const Qubit &v) {
    switch (label) {
        case BellLabel::phi_plus:
            return v;
        case BellLabel::phi_minus:
            return {v[0], -v[1]};
        case BellLabel::psi_plus:
            return {v[1], v[0]};
        case BellLabel::psi_minus:
            return {v[1], -v[0]};
    }
    return v;
}

std::array<double, 4> measurement_probabilities(const ChannelSpec &spec) {
    require_basis(spec);
    const double s = spec.s;
    const double sp = spec.s_prime;
    const double bias = 0.25 * (s * s + s * sp) / (1.0 + s * sp);
    return {0.25 + bias, 0.25 - bias, 0.25 + bias, 0.25 - bias};
}

std::array<MeasurementOutcome, 4> conditional_states(const ChannelSpec &spec, const InputQubit &input) {
    const auto c = channel_in_onb(spec);
    const auto x = input.amps();
    const double h = 1.0 / std::numbers::sqrt2;
    // Projecting |x>_a (sum c_jk |j>_e |k>_f) on a Bell pair of (a, e):
    //   Phi+-: (x1 c_1k +- x2 c_2k) / sqrt2,  Psi+-: (x1 c_2k +- x2 c_1k) / sqrt2.
    const std::array<Qubit, 4> raw{{
        {h * (x[0] * c[0][0] + x[1] * c[1][0]), h * (x[0] * c[0][1] + x[1] * c[1][1])},
        {h * (x[0] * c[0][0] - x[1] * c[1][0]), h * (x[0] * c[0][1] - x[1] * c[1][1])},
        {h * (x[0] * c[1][0] + x[1] * c[0][0]), h * (x[0] * c[1][1] + x[1] * c[0][1])},
        {h * (x[0] * c[1][0] - x[1] * c[0][0]), h * (x[0] * c[1][1] - x[1] * c[0][1])},
    }};
    std::array<MeasurementOutcome, 4> out{};
    for (std::size_t k = 0; k < 4; ++k) {
        const double p = norm2(raw[k]);
        auto corrected = apply_correction(kBellOrder[k], raw[k]);
        const double n = std::sqrt(p);
        corrected[0] /= n;
        corrected[1] /= n;
        out[k] = {kBellOrder[k], p, raw[k], corrected};
    }
    return out;
}

double fidelity(const ChannelSpec &spec) {
    const double s = spec.s;
    const double sp = spec.s_prime;
    const double diag = std::cos(spec.theta - spec.theta_prime);
    const double off = std::sin(spec.theta + spec.theta_prime);
    return (diag * diag + s * s * off * off) / (1.0 + s * sp);
}

double fidelity_from_outcomes(const std::array<MeasurementOutcome, 4> &outcomes, const InputQubit &input) {
    const auto x = input.amps();
    double f = 0.0;
    for (const auto &o : outcomes) {
        const cplx overlap = std::conj(x[0]) * o.corrected[0] + std::conj(x[1]) * o.corrected[1];
        f += o.probability * std::norm(overlap);
    }
    return f;
}

double masfi(const ChannelSpec &spec) {
    const double c = concurrence_channel(spec);
    return 2.0 * c / (1.0 + c);
}

TeleportReport teleport_report(const ChannelSpec &spec) {
    TeleportReport report{};
    report.spec = spec;
    report.fidelity = fidelity(spec);
    report.concurrence = concurrence_channel(spec);
    report.masfi = masfi(spec);
    report.formal_limit = !basis_defined(spec);
    if (!report.formal_limit) {
        report.outcomes = conditional_states(spec, InputQubit::canonical(spec));
    }
    return report;
}

Shot teleport_once(const ChannelSpec &spec, const InputQubit &input, std::uint64_t seed) {
    const auto outcomes = conditional_states(spec, input);
    std::mt19937_64 rng(seed);
    const auto k = pick(branch_probabilities(outcomes), uniform(rng));
    return {outcomes[k].label, outcomes[k].corrected};
}

std::array<std::uint64_t, 4> sample_counts(const ChannelSpec &spec, const InputQubit &input, std::uint64_t shots,
                                           std::uint64_t seed) {
    const auto probabilities = branch_probabilities(conditional_states(spec, input));
    std::mt19937_64 rng(seed);
    std::array<std::uint64_t, 4> counts{};
    for (std::uint64_t i = 0; i < shots; ++i) {
        ++counts[pick(probabilities, uniform(rng))];
    }
    return counts;
}

}  // namespace ecstel::teleport
