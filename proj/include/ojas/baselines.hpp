#pragma once

// Comparison algorithms: a FrequentDirections sketch and the exact d×d
// covariance accumulator.

#include "ojas/la_core.hpp"

namespace ojas {

class ZeroSketch : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// FrequentDirections with a 2ℓ-row buffer. When the buffer fills, the rows
/// are replaced by their SVD shrunk by the ℓ-th squared singular value, which
/// keeps ‖XᵀX − BᵀB‖₂ ≤ ‖X‖_F²/ℓ after every insert.
class FdSketch {
public:
    FdSketch(std::size_t d, std::size_t ell);

    void update(VecRef x);
    /// Top right-singular direction of B. Throws ZeroSketch when B = 0.
    UnitVec top_direction() const;

    /// Concatenates b's rows into a copy of a and shrinks as needed.
    static FdSketch merge(const FdSketch& a, const FdSketch& b);

    Eigen::MatrixXd covariance() const;  // BᵀB
    RowMatrix rows() const;              // the occupied part of B
    std::size_t used() const noexcept { return used_; }
    std::size_t ell() const noexcept { return ell_; }
    std::size_t dim() const noexcept { return static_cast<std::size_t>(buf_.cols()); }
    double shrink_total() const noexcept { return shrink_total_; }
    std::size_t shrinks() const noexcept { return shrinks_; }

    /// Buffer (2ℓ·d) plus the shrink total.
    std::size_t space_reals() const noexcept { return buf_.size() + 1; }

private:
    void shrink();

    std::size_t ell_;
    RowMatrix buf_;
    std::size_t used_ = 0;
    double shrink_total_ = 0.0;
    std::size_t shrinks_ = 0;
};

/// Running G = XᵀX.
class CovAccumulator {
public:
    explicit CovAccumulator(std::size_t d);

    void update(VecRef x);
    /// Top eigenvector of G by power iteration. Throws ZeroMatrix when G = 0.
    UnitVec top(const EigenOptions& opts = {}) const;

    const Eigen::MatrixXd& gram() const noexcept { return g_; }
    std::size_t dim() const noexcept { return static_cast<std::size_t>(g_.rows()); }
    std::size_t space_reals() const noexcept { return g_.size(); }

private:
    Eigen::MatrixXd g_;
    double frob2_ = 0.0;
};

}  // namespace ojas
