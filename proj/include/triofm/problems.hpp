#pragma once

#include <cstdint>
#include <vector>

#include "triofm/operator.hpp"
#include "triofm/reference.hpp"

namespace triofm {

enum class SpectrumFamily { kUniform, kLogarithm, kUshape, kExplicit };

/// Random test matrix A = Q diag(lambda) Q^T with a Haar orthogonal Q and one
/// of the prescribed eigenvalue families:
///   uniform:    lambda_i = (i-1)/500 - 1
///   logarithm:  lambda_i = -(2^10/500) / 2^i
///   ushape:     (-14,-10,-8,-7,-5)/16 then -1/16 from the sixth on
/// The uniform family admits a rescaled denominator via `uniform_scale_n`
/// (matching the construction at other sizes); the other families keep their
/// literal constants.
struct SpectrumSpec {
    SpectrumFamily family = SpectrumFamily::kUniform;
    int n = 500;
    std::uint64_t seed = 0;
    int uniform_scale_n = 0;  // 0: the literal 500 denominator
    std::vector<double> explicit_values;
};

std::vector<double> spectrum_values(const SpectrumSpec& spec);

struct RandomMatrixProblem {
    SymmetricOperator op;
    ReferenceEigen reference;
};

RandomMatrixProblem build_random(const SpectrumSpec& spec);

/// One-dimensional periodic Schroedinger operator H = -kappa Lap + diag(V)
/// on the unit interval, discretized with the second-order central
/// difference stencil on grid_points points (h = 1/n). The potential is a
/// sum of four Gaussian wells centered at (2i-1)/8 with depths
/// 850 + 50*mod(i,4) and width 0.03; the kinetic coefficient kappa = 0.02.
/// Periodic images of the wells are not summed. With these constants each
/// well binds exactly one of the four lowest states and the inter-well tails
/// fall below 1e-5, the regime the sparsity comparisons rely on.
struct DftSpec {
    int grid_points = 500;
};

double dft_potential(const DftSpec& spec, double x);
SymmetricOperator build_dft(const DftSpec& spec);

/// Momentum-space Hubbard model on an Lx-by-Ly lattice with N_up + N_dn
/// electrons, hopping t and on-site interaction U.
struct HubbardSpec {
    int lx = 4, ly = 4;
    int n_up = 3, n_dn = 3;
    double t = 1.0;
    double u = 4.0;

    int n_orb() const { return lx * ly; }
};

/// Determinant basis: per spin sector the lexicographically ordered
/// occupation bitsets with the prescribed electron count. The full basis is
/// the product, indexed as up_index * dn_count + dn_index.
struct FciBasis {
    int n_orb = 0;
    int n_up = 0, n_dn = 0;
    std::vector<std::uint32_t> up_dets;
    std::vector<std::uint32_t> dn_dets;

    long dimension() const {
        return static_cast<long>(up_dets.size()) * static_cast<long>(dn_dets.size());
    }
    long index_of(std::uint32_t up, std::uint32_t dn) const;
};

FciBasis enumerate_fci_basis(const HubbardSpec& spec);

/// One Hamiltonian row: the diagonal entry and the (column, value) pairs of
/// the momentum-conserving scattering terms. Deterministic entry order.
struct HubbardRow {
    double diagonal = 0.0;
    std::vector<std::pair<long, double>> off_diagonal;
};

class HubbardHamiltonian {
  public:
    explicit HubbardHamiltonian(HubbardSpec spec);

    const FciBasis& basis() const { return basis_; }
    const HubbardSpec& spec() const { return spec_; }
    long dimension() const { return basis_.dimension(); }

    HubbardRow row(long index) const;

    /// Diagonal entry alone (occupied dispersions plus the zero-transfer
    /// interaction), without generating the scattering list.
    double diagonal_entry(long index) const;

    /// Dispersion -2t (cos k1 + cos k2) of orbital o on the momentum grid
    /// k_j = 2 pi m_j / L_j.
    double dispersion(int orbital) const;

  private:
    HubbardSpec spec_;
    FciBasis basis_;
    std::vector<double> dispersion_;
};

/// Sparse CSR assembly of the Hamiltonian; throws ConfigError when the basis
/// dimension exceeds `max_sparse_dim` (use build_hubbard_matrix_free then).
SymmetricOperator build_hubbard(const HubbardSpec& spec, long max_sparse_dim = 100000);

/// Matrix-free operator evaluating rows on demand; any dimension.
SymmetricOperator build_hubbard_matrix_free(const HubbardSpec& spec);

}  // namespace triofm
