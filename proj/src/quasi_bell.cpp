#include "ecstel/quasi_bell.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "ecstel/errors.hpp"

namespace ecstel {

namespace {

void require_index(int index) {
    if (index < 1 || index > 4) {
        throw InvalidArgument("quasi-Bell index must be 1..4, got " + std::to_string(index));
    }
}

bool is_even(int index) { return index == 1 || index == 3; }

// 1 - exp(-2 (|alpha|^2 + |beta|^2)) without cancellation.
double one_minus_ss(const ChannelSpec &spec) {
    return -std::expm1(-2.0 * (std::norm(spec.alpha) + std::norm(spec.beta)));
}

void require_non_degenerate(int index, const ChannelSpec &spec) {
    if (!is_even(index) && odd_states_degenerate(spec)) {
        throw DegenerateState("quasi-Bell state " + std::to_string(index) + " vanishes for alpha = beta = 0");
    }
}

}  // namespace

ChannelSpec make_channel(cplx alpha, cplx beta) {
    const double a2 = std::norm(alpha);
    const double b2 = std::norm(beta);
    ChannelSpec spec{};
    spec.alpha = alpha;
    spec.beta = beta;
    spec.s = std::exp(-2.0 * a2);
    spec.s_prime = std::exp(-2.0 * b2);
    spec.cos_2theta = std::sqrt(-std::expm1(-4.0 * a2));
    spec.cos_2theta_prime = std::sqrt(-std::expm1(-4.0 * b2));
    spec.theta = 0.5 * std::atan2(spec.s, spec.cos_2theta);
    spec.theta_prime = 0.5 * std::atan2(spec.s_prime, spec.cos_2theta_prime);
    return spec;
}

ChannelSpec channel_from_angles(double theta, double theta_prime) {
    constexpr double quarter = std::numbers::pi / 4.0;
    for (double t : {theta, theta_prime}) {
        if (!(t > 0.0) || t > quarter) {
            throw InvalidArgument("mixing angle must lie in (0, pi/4]");
        }
    }
    auto side = [](double t, double &s, double &c2, double &label) {
        s = std::sin(2.0 * t);
        // 1 - sin 2t = 2 sin^2(pi/4 - t), exact zero at the endpoint.
        const double gap = std::sin(quarter - t);
        c2 = std::sqrt(2.0 * gap * gap * (1.0 + s));
        label = std::sqrt(std::max(0.0, -0.5 * std::log(s)));
    };
    ChannelSpec spec{};
    double a = 0.0;
    double b = 0.0;
    side(theta, spec.s, spec.cos_2theta, a);
    side(theta_prime, spec.s_prime, spec.cos_2theta_prime, b);
    spec.alpha = a;
    spec.beta = b;
    spec.theta = theta;
    spec.theta_prime = theta_prime;
    return spec;
}

bool odd_states_degenerate(const ChannelSpec &spec) {
    return std::norm(spec.alpha) + std::norm(spec.beta) < kDegenerateLabelNorm;
}

ModeLayout QuasiBellState::layout() const {
    const auto n = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(ket.dim()))));
    return ModeLayout{n, n};
}

double quasi_bell_norm_const(int index, const ChannelSpec &spec) {
    require_index(index);
    require_non_degenerate(index, spec);
    const double ss = spec.s * spec.s_prime;
    return 1.0 / std::sqrt(2.0 * (is_even(index) ? 1.0 + ss : one_minus_ss(spec)));
}

QuasiBellState quasi_bell_state(int index, const ChannelSpec &spec, std::size_t cutoff) {
    const double norm_const = quasi_bell_norm_const(index, spec);
    const auto a_plus = coherent_ket(spec.alpha, cutoff).ket;
    const auto a_minus = coherent_ket(-spec.alpha, cutoff).ket;
    const auto b_plus = coherent_ket(spec.beta, cutoff).ket;
    const auto b_minus = coherent_ket(-spec.beta, cutoff).ket;

    // States 1, 2 pair |a> with |-b>; states 3, 4 pair |a> with |b>.
    const bool crossed = index == 1 || index == 2;
    auto first = tensor(a_plus, crossed ? b_minus : b_plus);
    const auto second = tensor(a_minus, crossed ? b_plus : b_minus);
    if (is_even(index)) {
        first += second;
    } else {
        first -= second;
    }
    first *= norm_const;
    return {index, spec, norm_const, std::move(first)};
}

std::optional<double> GramMatrix::g24() const {
    if (!odd_block_defined) {
        return std::nullopt;
    }
    return entries[1][3];
}

GramMatrix gram_matrix(const ChannelSpec &spec) {
    GramMatrix g{};
    for (auto &row : g.entries) {
        row.fill(0.0);
    }
    for (std::size_t i = 0; i < 4; ++i) {
        g.entries[i][i] = 1.0;
    }
    const double ss = spec.s * spec.s_prime;
    g.entries[0][2] = g.entries[2][0] = (spec.s + spec.s_prime) / (1.0 + ss);
    g.odd_block_defined = !odd_states_degenerate(spec);
    const double g24 = g.odd_block_defined ? std::abs(spec.s - spec.s_prime) / one_minus_ss(spec)
                                           : std::numeric_limits<double>::quiet_NaN();
    g.entries[1][3] = g.entries[3][1] = g24;
    return g;
}

EigenPair reduced_eigs(int index, const ChannelSpec &spec) {
    require_index(index);
    require_non_degenerate(index, spec);
    const double one_minus_s = -std::expm1(-2.0 * std::norm(spec.alpha));
    const double one_minus_sp = -std::expm1(-2.0 * std::norm(spec.beta));
    const double one_plus_s = 1.0 + spec.s;
    const double one_plus_sp = 1.0 + spec.s_prime;
    if (is_even(index)) {
        const double denom = 2.0 * (1.0 + spec.s * spec.s_prime);
        return {one_minus_s * one_minus_sp / denom, one_plus_s * one_plus_sp / denom};
    }
    const double denom = 2.0 * one_minus_ss(spec);
    return {one_minus_s * one_plus_sp / denom, one_plus_s * one_minus_sp / denom};
}

double binary_entropy(const EigenPair &pair) {
    double h = 0.0;
    for (double l : {pair.lambda, pair.lambda_prime}) {
        if (l > 0.0) {
            h -= l * std::log2(l);
        }
    }
    return h;
}

double entanglement_entropy(int index, const ChannelSpec &spec) { return binary_entropy(reduced_eigs(index, spec)); }

double concurrence_channel(const ChannelSpec &spec) {
    return spec.cos_2theta * spec.cos_2theta_prime / (1.0 + spec.s * spec.s_prime);
}

EntanglementReport entanglement_report(int index, const ChannelSpec &spec) {
    const auto pair = reduced_eigs(index, spec);
    return {pair, binary_entropy(pair), concurrence_channel(spec)};
}

}  // namespace ecstel
