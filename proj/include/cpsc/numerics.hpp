#pragma once

#include <cstddef>
#include <vector>

#include "cpsc/types.hpp"

namespace cpsc::numerics {

/// x delayed cyclically by `shift`: out[i] = x[(i - shift) mod n].
/// Negative shifts advance. shift may exceed n.
cvec cyclic_shift(const cvec& x, long shift);

/// N x N circulant matrix held as its generator (first column).
/// Entry (i, j) = generator[(i - j) mod N], so column j is the generator
/// delayed cyclically by j and multiply() is circular convolution.
class CirculantMatrix {
  public:
    explicit CirculantMatrix(cvec generator);

    std::size_t size() const { return gen_.size(); }
    const cvec& generator() const { return gen_; }

    cd at(std::size_t i, std::size_t j) const;

    /// y = C v. Exact zeros in v are skipped, so multiplying by a sparse
    /// equivalent-CIR vector costs only the populated taps.
    cvec multiply(const cvec& v) const;

    /// y = C^H v (conjugate transpose, without forming it).
    cvec multiply_conj_transpose(const cvec& v) const;

    CMatrix dense() const;

    /// Eigenvalues in DFT-bin order: the plain (non-unitary) DFT of the
    /// generator. C = F^H diag(eigs) F with F the unitary DFT matrix.
    cvec eigenvalues() const;

  private:
    cvec gen_;
};

/// Plain DFT, X[k] = sum_n x[n] e^{-j2\pi nk/N}. No 1/N anywhere.
cvec dft_plain(const cvec& x);
/// Inverse of dft_plain (carries the 1/N).
cvec idft_plain(const cvec& X);
/// Unitary DFT, 1/sqrt(N) both ways.
cvec dft_unitary(const cvec& x);
cvec idft_unitary(const cvec& X);

struct EigResult {
    std::vector<double> eigenvalues;  // descending
    CMatrix u;                        // rows u_l; A = U^H diag(eigenvalues) U
};

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi
/// rotations. Throws std::invalid_argument if A is not Hermitian to 1e-8.
/// Residual ||A - U^H D U|| stays near machine precision for the small
/// matrices used here.
EigResult hermitian_eig(const CMatrix& a);

/// B^H B for a dense matrix (used to form distance Gram matrices).
CMatrix gram(const CMatrix& b);

}  // namespace cpsc::numerics
