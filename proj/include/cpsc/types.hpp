#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace cpsc {

using cd = std::complex<double>;
using cvec = std::vector<cd>;

/// Raised when a scenario description violates one of the documented
/// parameter inequalities. The message names the violated constraint.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when an exhaustive search space exceeds its hard guard.
struct CapacityError : std::runtime_error {
    explicit CapacityError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised on numerically singular inputs (zero spectral bins, deep fades
/// under zero-forcing, non-invertible pilots).
struct SingularityError : std::runtime_error {
    explicit SingularityError(const std::string& what) : std::runtime_error(what) {}
};

/// Minimal dense complex matrix, row-major. Sized for the small blocks
/// used here (N <= 64); no view machinery, no expression templates.
class CMatrix {
  public:
    CMatrix() = default;
    CMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols) {}

    static CMatrix identity(std::size_t n) {
        CMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    cd& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const cd& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    cd* row(std::size_t i) { return data_.data() + i * cols_; }
    const cd* row(std::size_t i) const { return data_.data() + i * cols_; }

    cd* data() { return data_.data(); }
    const cd* data() const { return data_.data(); }

    CMatrix conj_transpose() const {
        CMatrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = std::conj((*this)(i, j));
        return t;
    }

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cd> data_;
};

}  // namespace cpsc
