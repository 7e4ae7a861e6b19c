#pragma once

#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace tcsim {

class EigenSolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Real eigenvalues of a Hermitian matrix, ascending. The input is
/// symmetrized as (M + M^H)/2 after checking it is Hermitian to 1e-8
/// relative to its largest entry.
std::vector<double> hermitian_eigenvalues(const Eigen::MatrixXcd& m);

}  // namespace tcsim
