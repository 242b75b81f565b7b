#pragma once

#include <Eigen/Dense>

namespace curldirac {

// Full eigendecomposition of a hermitian matrix, eigenvalues ascending.
// On return the columns of a hold the eigenvectors. Throws NumericalError
// if the backend fails to converge.
void hermitian_eigen(Eigen::MatrixXcd& a, Eigen::VectorXd& w);

}  // namespace curldirac
