#include "ecstel/fock.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

#include "ecstel/errors.hpp"

namespace ecstel {

// ---------------------------------------------------------------------------
// TruncatedKet

TruncatedKet::TruncatedKet(std::vector<cplx> amps) : amps_(std::move(amps)) {
    if (amps_.empty()) {
        throw InvalidArgument("ket dimension must be positive");
    }
}

TruncatedKet TruncatedKet::zero(std::size_t dim) { return TruncatedKet(std::vector<cplx>(dim)); }

TruncatedKet TruncatedKet::basis(std::size_t dim, std::size_t index) {
    if (index >= dim) {
        throw InvalidArgument("basis index " + std::to_string(index) + " out of range for dimension " +
                              std::to_string(dim));
    }
    std::vector<cplx> amps(dim);
    amps[index] = 1.0;
    return TruncatedKet(std::move(amps));
}

double TruncatedKet::norm_squared() const {
    double acc = 0.0;
    for (const auto &a : amps_) {
        acc += std::norm(a);
    }
    return acc;
}

double TruncatedKet::norm() const { return std::sqrt(norm_squared()); }

TruncatedKet &TruncatedKet::operator+=(const TruncatedKet &other) {
    if (other.dim() != dim()) {
        throw InvalidArgument("ket dimension mismatch in sum");
    }
    for (std::size_t i = 0; i < amps_.size(); ++i) {
        amps_[i] += other.amps_[i];
    }
    return *this;
}

TruncatedKet &TruncatedKet::operator-=(const TruncatedKet &other) {
    if (other.dim() != dim()) {
        throw InvalidArgument("ket dimension mismatch in difference");
    }
    for (std::size_t i = 0; i < amps_.size(); ++i) {
        amps_[i] -= other.amps_[i];
    }
    return *this;
}

TruncatedKet &TruncatedKet::operator*=(cplx factor) {
    for (auto &a : amps_) {
        a *= factor;
    }
    return *this;
}

TruncatedKet operator+(TruncatedKet lhs, const TruncatedKet &rhs) { return lhs += rhs; }
TruncatedKet operator-(TruncatedKet lhs, const TruncatedKet &rhs) { return lhs -= rhs; }
TruncatedKet operator*(cplx factor, TruncatedKet ket) { return ket *= factor; }

// ---------------------------------------------------------------------------
// DensityMatrix

DensityMatrix::DensityMatrix(std::size_t dim) : dim_(dim), entries_(dim * dim) {
    if (dim == 0) {
        throw InvalidArgument("matrix dimension must be positive");
    }
}

DensityMatrix::DensityMatrix(std::size_t dim, std::vector<cplx> entries) : dim_(dim), entries_(std::move(entries)) {
    if (dim == 0 || entries_.size() != dim * dim) {
        throw InvalidArgument("matrix entry count does not match dimension " + std::to_string(dim));
    }
}

DensityMatrix DensityMatrix::from_pure(const TruncatedKet &ket) {
    const auto n = ket.dim();
    DensityMatrix rho(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            rho(i, j) = ket[i] * std::conj(ket[j]);
        }
    }
    return rho;
}

DensityMatrix DensityMatrix::diagonal(std::span<const double> values) {
    DensityMatrix m(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        m(i, i) = values[i];
    }
    return m;
}

cplx DensityMatrix::trace() const {
    cplx acc = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) {
        acc += (*this)(i, i);
    }
    return acc;
}

double DensityMatrix::hermiticity_defect() const {
    double worst = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) {
        for (std::size_t j = i; j < dim_; ++j) {
            worst = std::max(worst, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
        }
    }
    return worst;
}

DensityMatrix DensityMatrix::adjoint() const {
    DensityMatrix out(dim_);
    for (std::size_t i = 0; i < dim_; ++i) {
        for (std::size_t j = 0; j < dim_; ++j) {
            out(i, j) = std::conj((*this)(j, i));
        }
    }
    return out;
}

DensityMatrix operator*(const DensityMatrix &lhs, const DensityMatrix &rhs) {
    if (lhs.dim() != rhs.dim()) {
        throw InvalidArgument("matrix dimension mismatch in product");
    }
    const auto n = lhs.dim();
    DensityMatrix out(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            const cplx a = lhs(i, k);
            for (std::size_t j = 0; j < n; ++j) {
                out(i, j) += a * rhs(k, j);
            }
        }
    }
    return out;
}

double max_abs_difference(const DensityMatrix &lhs, const DensityMatrix &rhs) {
    if (lhs.dim() != rhs.dim()) {
        throw InvalidArgument("matrix dimension mismatch in comparison");
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < lhs.entries().size(); ++i) {
        worst = std::max(worst, std::abs(lhs.entries()[i] - rhs.entries()[i]));
    }
    return worst;
}

// ---------------------------------------------------------------------------
// ModeLayout

ModeLayout::ModeLayout(std::initializer_list<std::size_t> dims) : ModeLayout(std::vector<std::size_t>(dims)) {}

ModeLayout::ModeLayout(std::vector<std::size_t> dims) : dims_(std::move(dims)), total_(1) {
    if (dims_.empty()) {
        throw InvalidArgument("mode layout needs at least one factor");
    }
    for (auto d : dims_) {
        if (d == 0) {
            throw InvalidArgument("mode layout factor dimension must be positive");
        }
        total_ *= d;
    }
}

// ---------------------------------------------------------------------------
// Coherent states and products

CoherentExpansion coherent_ket(cplx alpha, std::size_t cutoff, double max_deficit) {
    if (cutoff == 0) {
        throw InvalidArgument("coherent_ket cutoff must be at least 1");
    }
    std::vector<cplx> amps(cutoff);
    amps[0] = std::exp(-0.5 * std::norm(alpha));
    for (std::size_t n = 1; n < cutoff; ++n) {
        amps[n] = amps[n - 1] * alpha / std::sqrt(static_cast<double>(n));
    }
    TruncatedKet ket(std::move(amps));
    const double deficit = std::max(0.0, 1.0 - ket.norm_squared());
    if (deficit > max_deficit) {
        throw TruncationInsufficient(deficit, max_deficit);
    }
    return {std::move(ket), deficit};
}

std::size_t heuristic_cutoff(double max_abs_label) {
    const double x = std::abs(max_abs_label);
    return static_cast<std::size_t>(std::ceil(x * x + 10.0 * x + 20.0));
}

cplx inner(const TruncatedKet &u, const TruncatedKet &v) {
    if (u.dim() != v.dim()) {
        throw InvalidArgument("inner product of kets with cutoffs " + std::to_string(u.dim()) + " and " +
                              std::to_string(v.dim()));
    }
    cplx acc = 0.0;
    for (std::size_t i = 0; i < u.dim(); ++i) {
        acc += std::conj(u[i]) * v[i];
    }
    return acc;
}

TruncatedKet tensor(const TruncatedKet &u, const TruncatedKet &v) {
    std::vector<cplx> amps(u.dim() * v.dim());
    for (std::size_t i = 0; i < u.dim(); ++i) {
        for (std::size_t j = 0; j < v.dim(); ++j) {
            amps[i * v.dim() + j] = u[i] * v[j];
        }
    }
    return TruncatedKet(std::move(amps));
}

DensityMatrix tensor(const DensityMatrix &a, const DensityMatrix &b) {
    const auto na = a.dim();
    const auto nb = b.dim();
    DensityMatrix out(na * nb);
    for (std::size_t i = 0; i < na; ++i) {
        for (std::size_t j = 0; j < na; ++j) {
            const cplx aij = a(i, j);
            for (std::size_t k = 0; k < nb; ++k) {
                for (std::size_t l = 0; l < nb; ++l) {
                    out(i * nb + k, j * nb + l) = aij * b(k, l);
                }
            }
        }
    }
    return out;
}

namespace {

struct Split {
    std::size_t left;
    std::size_t kept;
    std::size_t right;
};

Split split_layout(const ModeLayout &layout, std::size_t keep, std::size_t ambient) {
    if (layout.total() != ambient) {
        throw InvalidArgument("mode layout total " + std::to_string(layout.total()) +
                              " does not match dimension " + std::to_string(ambient));
    }
    if (keep >= layout.factor_count()) {
        throw InvalidArgument("kept factor index out of range");
    }
    const auto dims = layout.dims();
    Split s{1, dims[keep], 1};
    for (std::size_t f = 0; f < keep; ++f) {
        s.left *= dims[f];
    }
    for (std::size_t f = keep + 1; f < dims.size(); ++f) {
        s.right *= dims[f];
    }
    return s;
}

}  // namespace

DensityMatrix partial_trace(const DensityMatrix &rho, const ModeLayout &layout, std::size_t keep) {
    const auto [left, kept, right] = split_layout(layout, keep, rho.dim());
    DensityMatrix out(kept);
    for (std::size_t a = 0; a < kept; ++a) {
        for (std::size_t b = 0; b < kept; ++b) {
            cplx acc = 0.0;
            for (std::size_t l = 0; l < left; ++l) {
                for (std::size_t r = 0; r < right; ++r) {
                    acc += rho((l * kept + a) * right + r, (l * kept + b) * right + r);
                }
            }
            out(a, b) = acc;
        }
    }
    return out;
}

DensityMatrix partial_trace(const TruncatedKet &psi, const ModeLayout &layout, std::size_t keep) {
    const auto [left, kept, right] = split_layout(layout, keep, psi.dim());
    DensityMatrix out(kept);
    for (std::size_t a = 0; a < kept; ++a) {
        for (std::size_t b = a; b < kept; ++b) {
            cplx acc = 0.0;
            for (std::size_t l = 0; l < left; ++l) {
                for (std::size_t r = 0; r < right; ++r) {
                    acc += psi[(l * kept + a) * right + r] * std::conj(psi[(l * kept + b) * right + r]);
                }
            }
            out(a, b) = acc;
            out(b, a) = std::conj(acc);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Jacobi eigensolver

namespace {

constexpr double kHermitianTolerance = 1e-10;
constexpr double kOffDiagonalTarget = 1e-13;
constexpr int kMaxSweeps = 100;

double off_diagonal_mass(const DensityMatrix &a) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) {
        for (std::size_t j = 0; j < a.dim(); ++j) {
            if (i != j) {
                acc += std::norm(a(i, j));
            }
        }
    }
    return std::sqrt(acc);
}

double frobenius(const DensityMatrix &a) {
    double acc = 0.0;
    for (const auto &x : a.entries()) {
        acc += std::norm(x);
    }
    return std::sqrt(acc);
}

// Annihilates a(p, q) with the unitary U = [[c, s e], [-s conj(e), c]] acting
// on rows/columns p, q, where e is the phase of a(p, q).
void rotate(DensityMatrix &a, DensityMatrix &v, std::size_t p, std::size_t q) {
    const cplx apq = a(p, q);
    const double mag = std::abs(apq);
    if (mag == 0.0) {
        return;
    }
    const cplx e = apq / mag;
    const double tau = (a(q, q).real() - a(p, p).real()) / (2.0 * mag);
    const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    const double s = t * c;

    const std::size_t n = a.dim();
    const cplx up = -s * std::conj(e);  // U(q, p)
    const cplx uq = s * e;              // U(p, q)
    for (std::size_t k = 0; k < n; ++k) {
        const cplx akp = a(k, p);
        const cplx akq = a(k, q);
        a(k, p) = akp * c + akq * up;
        a(k, q) = akp * uq + akq * c;
    }
    for (std::size_t k = 0; k < n; ++k) {
        const cplx apk = a(p, k);
        const cplx aqk = a(q, k);
        a(p, k) = c * apk + std::conj(up) * aqk;
        a(q, k) = std::conj(uq) * apk + c * aqk;
    }
    a(p, q) = 0.0;
    a(q, p) = 0.0;
    a(p, p) = a(p, p).real();
    a(q, q) = a(q, q).real();
    for (std::size_t k = 0; k < n; ++k) {
        const cplx vkp = v(k, p);
        const cplx vkq = v(k, q);
        v(k, p) = vkp * c + vkq * up;
        v(k, q) = vkp * uq + vkq * c;
    }
}

}  // namespace

EigenDecomposition hermitian_eigs(const DensityMatrix &m) {
    if (m.hermiticity_defect() > kHermitianTolerance) {
        throw InvalidArgument("hermitian_eigs: matrix is not Hermitian within 1e-10");
    }
    const std::size_t n = m.dim();
    DensityMatrix a(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            a(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));
        }
    }
    DensityMatrix v(n);
    for (std::size_t i = 0; i < n; ++i) {
        v(i, i) = 1.0;
    }

    const double target = kOffDiagonalTarget * std::max(1.0, frobenius(a));
    for (int sweep = 0; sweep < kMaxSweeps && off_diagonal_mass(a) >= target; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                rotate(a, v, p, q);
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return a(x, x).real() < a(y, y).real(); });

    EigenDecomposition out{std::vector<double>(n), DensityMatrix(n)};
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = a(order[k], order[k]).real();
        for (std::size_t i = 0; i < n; ++i) {
            out.vectors(i, k) = v(i, order[k]);
        }
    }
    return out;
}

}  // namespace ecstel
