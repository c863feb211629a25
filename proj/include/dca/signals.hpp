#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>

namespace dca {

/// Row order of the fusion weight matrix and of cytokine vectors.
enum class Output : int { csm = 0, semi = 1, mat = 2 };

/// Column order of the fusion weight matrix.
enum class Input : int { pamp = 0, danger = 1, safe = 2 };

/// Concentrations of the four input signals at one instant.
///
/// PAMP, danger and safe are non-negative; inflammation lies in [0, 2] and
/// scales every fused output by (1 + inflammation) / 2.
template <typename Scalar>
struct BasicSignalVector {
  Scalar pamp{0};
  Scalar danger{0};
  Scalar safe{0};
  Scalar inflammation{0};

  /// (pamp, danger, safe) in weight-matrix column order.
  Eigen::Matrix<Scalar, 3, 1> pds() const { return {pamp, danger, safe}; }

  bool valid() const {
    return pamp >= Scalar(0) && danger >= Scalar(0) && safe >= Scalar(0) &&
           inflammation >= Scalar(0) && inflammation <= Scalar(2);
  }

  friend bool operator==(const BasicSignalVector&, const BasicSignalVector&) = default;
};

/// Cumulative cytokine accumulators of one cell.
template <typename Scalar>
struct BasicCytokineState {
  Scalar csm{0};
  Scalar semi{0};
  Scalar mat{0};

  Eigen::Matrix<Scalar, 3, 1> vector() const { return {csm, semi, mat}; }

  friend bool operator==(const BasicCytokineState&, const BasicCytokineState&) = default;
};

/// 3x3 fusion weights: rows are outputs (csm, semi, mat), columns are inputs
/// (P, D, S). Every row must have a non-zero absolute sum because that sum is
/// the normalisation denominator.
template <typename Scalar>
class BasicWeightMatrix {
 public:
  using Matrix = Eigen::Matrix<Scalar, 3, 3>;

  /// Throws std::invalid_argument when a row's absolute sum is zero.
  explicit BasicWeightMatrix(const Matrix& w) : w_(w) {
    const Eigen::Matrix<Scalar, 3, 1> norms = w_.cwiseAbs().rowwise().sum();
    for (int r = 0; r < 3; ++r) {
      if (!(norms(r) > Scalar(0))) {
        throw std::invalid_argument("weight row " + std::to_string(r) +
                                    " has zero absolute sum");
      }
    }
  }

  /// csm = (2, 1, 2), semi = (0, 0, 3), mat = (2, 1, -3).
  static BasicWeightMatrix standard() {
    Matrix w;
    w << 2, 1, 2,
         0, 0, 3,
         2, 1, -3;
    return BasicWeightMatrix(w);
  }

  Scalar operator()(Output o, Input i) const {
    return w_(static_cast<int>(o), static_cast<int>(i));
  }

  /// Returns a copy with one cell replaced, re-validated.
  BasicWeightMatrix with(Output o, Input i, Scalar value) const {
    Matrix w = w_;
    w(static_cast<int>(o), static_cast<int>(i)) = value;
    return BasicWeightMatrix(w);
  }

  const Matrix& matrix() const { return w_; }

  friend bool operator==(const BasicWeightMatrix& a, const BasicWeightMatrix& b) {
    return a.w_ == b.w_;
  }

 private:
  Matrix w_;
};

/// Weighted-sum signal fusion. For each output row o:
///   delta_o = (W_oP*P + W_oD*D + W_oS*S) / (|W_oP| + |W_oD| + |W_oS|) * (1 + IC) / 2
/// The result is (delta_csm, delta_semi, delta_mat).
template <typename Scalar>
Eigen::Matrix<Scalar, 3, 1> fuse_signals(const BasicSignalVector<Scalar>& s,
                                         const BasicWeightMatrix<Scalar>& w) {
  const auto& m = w.matrix();
  const Scalar amplifier = (Scalar(1) + s.inflammation) / Scalar(2);
  return (m * s.pds()).cwiseQuotient(m.cwiseAbs().rowwise().sum()) * amplifier;
}

using SignalVector = BasicSignalVector<double>;
using CytokineState = BasicCytokineState<double>;
using WeightMatrix = BasicWeightMatrix<double>;

}  // namespace dca
