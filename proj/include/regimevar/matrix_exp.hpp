#pragma once

#include <Eigen/Dense>

namespace regimevar {

/// exp(A) for a dense complex matrix by scaling and squaring with diagonal
/// Pade approximants of degree 3, 5, 7, 9 or 13 chosen from ||A||_1
/// (Higham 2005). Throws NumericalError if the result is not finite.
Eigen::MatrixXcd expm(const Eigen::MatrixXcd& a);

}  // namespace regimevar
