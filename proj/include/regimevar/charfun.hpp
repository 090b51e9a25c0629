#pragma once

#include "regimevar/model.hpp"

#include <complex>
#include <vector>

namespace regimevar {

using cplx = std::complex<double>;

/// Generalized Fourier transform E[exp(i z Y)] of a gaussian log-jump,
/// exp(i z a - z^2 b^2 / 2). Entire in z, so no strip restriction applies.
cplx jump_gft(const JumpLaw& jump, cplx z);

/// vartheta_j(z) = z xi(j) + i z^2 sigma_j^2 / 2 - i lambda_j (phi_j(z) - 1),
/// so that a frozen regime j contributes exp(i vartheta_j(z) T).
std::vector<cplx> regime_exponents(cplx z, const RegimeModel& model);

/// phi_X(z) = 1' exp((Q' + i diag(vartheta(z))) T) e_{alpha0}, any M.
cplx gft_matrix(cplx z, double horizon, const RegimeModel& model);

/// Closed form for M = 2 with generator (-q1, q1; q2, -q2). Uses
/// theta = vartheta_1 - vartheta_2 and the roots y_{1,2} of
/// y^2 + (q1 + q2 - i theta) y - i theta q2 = 0.
cplx gft_two_state(cplx z, double horizon, const RegimeModel& model);

/// Production entry point: closed forms for M <= 2, matrix route otherwise.
cplx characteristic_function(cplx z, double horizon, const RegimeModel& model);

struct LogReturnMoments {
  double mean = 0.0;
  double stdev = 0.0;
};

/// Mean and standard deviation of X_T from central differences of the
/// cumulant generating function log E[exp(t X_T)] at t = 0.
LogReturnMoments log_return_moments(double horizon, const RegimeModel& model);

}  // namespace regimevar
