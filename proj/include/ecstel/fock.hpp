#pragma once

// Dense complex linear algebra over truncated bosonic Fock spaces.
//
// Composite spaces are indexed row-major over their ModeLayout: the leftmost
// factor varies slowest. For a layout [d0, d1, d2] the basis vector
// |i0, i1, i2> sits at index (i0 * d1 + i1) * d2 + i2.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <span>
#include <vector>

namespace ecstel {

using cplx = std::complex<double>;

class TruncatedKet {
  public:
    explicit TruncatedKet(std::vector<cplx> amps);

    static TruncatedKet zero(std::size_t dim);
    static TruncatedKet basis(std::size_t dim, std::size_t index);

    /// Number of retained levels (or total dimension for composite kets).
    std::size_t dim() const noexcept { return amps_.size(); }
    std::span<const cplx> amps() const noexcept { return amps_; }
    cplx operator[](std::size_t i) const { return amps_[i]; }

    double norm_squared() const;
    double norm() const;

    TruncatedKet &operator+=(const TruncatedKet &other);
    TruncatedKet &operator-=(const TruncatedKet &other);
    TruncatedKet &operator*=(cplx factor);

  private:
    std::vector<cplx> amps_;
};

TruncatedKet operator+(TruncatedKet lhs, const TruncatedKet &rhs);
TruncatedKet operator-(TruncatedKet lhs, const TruncatedKet &rhs);
TruncatedKet operator*(cplx factor, TruncatedKet ket);

/// Square complex matrix, row-major. Used for density operators and for
/// general Hermitian matrices handed to the eigensolver.
class DensityMatrix {
  public:
    explicit DensityMatrix(std::size_t dim);
    DensityMatrix(std::size_t dim, std::vector<cplx> entries);

    static DensityMatrix from_pure(const TruncatedKet &ket);
    static DensityMatrix diagonal(std::span<const double> values);

    std::size_t dim() const noexcept { return dim_; }
    cplx &operator()(std::size_t row, std::size_t col) { return entries_[row * dim_ + col]; }
    cplx operator()(std::size_t row, std::size_t col) const { return entries_[row * dim_ + col]; }
    std::span<const cplx> entries() const noexcept { return entries_; }

    cplx trace() const;
    /// max |M - M^dagger| over all entries.
    double hermiticity_defect() const;
    DensityMatrix adjoint() const;

  private:
    std::size_t dim_;
    std::vector<cplx> entries_;
};

DensityMatrix operator*(const DensityMatrix &lhs, const DensityMatrix &rhs);
/// max |lhs - rhs| over all entries.
double max_abs_difference(const DensityMatrix &lhs, const DensityMatrix &rhs);

class ModeLayout {
  public:
    ModeLayout(std::initializer_list<std::size_t> dims);
    explicit ModeLayout(std::vector<std::size_t> dims);

    std::span<const std::size_t> dims() const noexcept { return dims_; }
    std::size_t factor_count() const noexcept { return dims_.size(); }
    std::size_t total() const noexcept { return total_; }

  private:
    std::vector<std::size_t> dims_;
    std::size_t total_;
};

struct CoherentExpansion {
    TruncatedKet ket;
    /// 1 - sum |c_n|^2 over the retained levels.
    double deficit;
};

/// Truncated coherent state, c_n = exp(-|alpha|^2 / 2) alpha^n / sqrt(n!).
/// Throws TruncationInsufficient when the lost norm exceeds max_deficit.
CoherentExpansion coherent_ket(cplx alpha, std::size_t cutoff,
                               double max_deficit = std::numeric_limits<double>::infinity());

/// ceil(|label|^2 + 10 |label| + 20).
std::size_t heuristic_cutoff(double max_abs_label);

cplx inner(const TruncatedKet &u, const TruncatedKet &v);

TruncatedKet tensor(const TruncatedKet &u, const TruncatedKet &v);
DensityMatrix tensor(const DensityMatrix &a, const DensityMatrix &b);

/// Traces out every factor of `layout` except `keep`.
DensityMatrix partial_trace(const DensityMatrix &rho, const ModeLayout &layout, std::size_t keep);
/// Same contraction for rho = |psi><psi| without materialising rho.
DensityMatrix partial_trace(const TruncatedKet &psi, const ModeLayout &layout, std::size_t keep);

struct EigenDecomposition {
    std::vector<double> values;  // ascending
    DensityMatrix vectors;       // column k is the eigenvector of values[k]
};

/// Cyclic Jacobi diagonalisation of a Hermitian matrix. The input is
/// symmetrised first; a defect above 1e-10 is rejected.
EigenDecomposition hermitian_eigs(const DensityMatrix &m);

}  // namespace ecstel
