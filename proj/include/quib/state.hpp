#pragma once

// Pure states, density matrices and the exact (eigendecomposition) entropy
// oracle used to verify every variational estimate.

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "quib/layout.hpp"

namespace quib {

using Cx = std::complex<double>;

enum class LogBase { nats, bits };

class PureState {
  public:
    PureState(RegisterLayout layout, Eigen::VectorXcd amplitudes);

    const RegisterLayout& layout() const { return layout_; }
    const Eigen::VectorXcd& amplitudes() const { return amps_; }
    long dim() const { return amps_.size(); }

  private:
    RegisterLayout layout_;
    Eigen::VectorXcd amps_;
};

class DensityMatrix {
  public:
    DensityMatrix(RegisterLayout layout, Eigen::MatrixXcd matrix,
                  std::optional<int> known_rank = std::nullopt);

    const RegisterLayout& layout() const { return layout_; }
    const Eigen::MatrixXcd& matrix() const { return mat_; }
    long dim() const { return mat_.rows(); }
    std::optional<int> known_rank() const { return known_rank_; }

    // Full validity check including positive semidefiniteness; the
    // constructor only enforces Hermiticity and unit trace.
    void validate(double psd_tol = 1e-10) const;

  private:
    RegisterLayout layout_;
    Eigen::MatrixXcd mat_;
    std::optional<int> known_rank_;
};

struct Spectrum {
    Eigen::VectorXd eigenvalues;   // descending
    Eigen::MatrixXcd eigenvectors; // columns match eigenvalues
};

PureState tensor_product(const PureState& a, const PureState& b);
DensityMatrix tensor_product(const DensityMatrix& a, const DensityMatrix& b);

DensityMatrix to_density(const PureState& psi);

// Partial trace keeping `keep` (declared order preserved).
DensityMatrix reduce(const PureState& psi, const std::vector<std::string>& keep);
DensityMatrix reduce(const DensityMatrix& rho, const std::vector<std::string>& keep);

Spectrum eigensystem(const DensityMatrix& rho);

double entropy_exact(const DensityMatrix& rho, LogBase base = LogBase::bits);
double entropy_of_spectrum(const Eigen::VectorXd& lambda, LogBase base);

// S(X|Y) = S(XY) - S(Y) in the requested base.
double conditional_entropy_exact(const PureState& psi,
                                 const std::vector<std::string>& x,
                                 const std::vector<std::string>& y,
                                 LogBase base = LogBase::bits);

Cx overlap(const PureState& x, const PureState& y);

// Swap the contents of two same-dimension registers.
PureState exchange_ab(const PureState& psi, const std::string& a = "A",
                      const std::string& b = "B");

// Purification with an appended reference register of dimension rank(rho).
PureState purify(const DensityMatrix& rho, const std::string& ref_name = "P");

int numerical_rank(const DensityMatrix& rho, double tol = 1e-10);

// Zero-pad a density matrix to the next power-of-two dimension (single
// register named as the original concatenation); entropy is unchanged.
DensityMatrix pad_to_power_of_two(const DensityMatrix& rho);

}  // namespace quib
