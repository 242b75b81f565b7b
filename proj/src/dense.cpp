#include "curldirac/dense.hpp"

#include <string>

#include "curldirac/types.hpp"

#define LAPACK_COMPLEX_CPP
#include <lapacke.h>

namespace curldirac {

void hermitian_eigen(Eigen::MatrixXcd& a, Eigen::VectorXd& w) {
  if (a.rows() != a.cols()) throw InputError("hermitian_eigen: matrix must be square");
  const lapack_int n = static_cast<lapack_int>(a.rows());
  w.resize(n);
  if (n == 0) return;
  // divide and conquer; Eigen's MatrixXcd is column major so the buffer
  // can be handed over directly
  const lapack_int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'L', n,
                                         reinterpret_cast<lapack_complex_double*>(a.data()), n,
                                         w.data());
  if (info != 0)
    throw NumericalError("hermitian_eigen: zheevd failed with info " + std::to_string(info));
}

}  // namespace curldirac
