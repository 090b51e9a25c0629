#include "regimevar/matrix_exp.hpp"

#include "regimevar/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace regimevar {

namespace {

using Mat = Eigen::MatrixXcd;

// Largest 1-norm for which the degree-m approximant reaches unit roundoff.
constexpr std::array<double, 4> kThetaLow = {
    1.495585217958292e-2, 2.539398330063230e-1, 9.504178996162932e-1,
    2.097847961257068e0};
constexpr double kTheta13 = 5.371920351148152e0;

constexpr std::array<double, 4> kB3 = {120.0, 60.0, 12.0, 1.0};
constexpr std::array<double, 6> kB5 = {30240.0, 15120.0, 3360.0,
                                       420.0,   30.0,    1.0};
constexpr std::array<double, 8> kB7 = {17297280.0, 8648640.0, 1995840.0,
                                       277200.0,   25200.0,   1512.0,
                                       56.0,       1.0};
constexpr std::array<double, 10> kB9 = {
    17643225600.0, 8821612800.0, 2075673600.0, 302702400.0, 30270240.0,
    2162160.0,     110880.0,     3960.0,       90.0,        1.0};
constexpr std::array<double, 14> kB13 = {
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
    1187353796428800.0,  129060195264000.0,   10559470521600.0,
    670442572800.0,      33522128640.0,       1323241920.0,
    40840800.0,          960960.0,            16380.0,
    182.0,               1.0};

double norm1(const Mat& a) { return a.cwiseAbs().colwise().sum().maxCoeff(); }

// r_m(A) = (V - U)^{-1} (V + U)
Mat pade_ratio(const Mat& u, const Mat& v) {
  return (v - u).partialPivLu().solve(v + u);
}

template <std::size_t N>
Mat pade_low(const Mat& a, const std::array<double, N>& b) {
  const auto n = a.rows();
  const Mat id = Mat::Identity(n, n);
  const Mat a2 = a * a;
  Mat odd = b[1] * id;
  Mat even = b[0] * id;
  Mat power = id;
  for (std::size_t k = 2; k < N; k += 2) {
    power = power * a2;
    even += b[k] * power;
    if (k + 1 < N) odd += b[k + 1] * power;
  }
  return pade_ratio(a * odd, even);
}

Mat pade13(const Mat& a) {
  const auto n = a.rows();
  const Mat id = Mat::Identity(n, n);
  const Mat a2 = a * a;
  const Mat a4 = a2 * a2;
  const Mat a6 = a4 * a2;
  const auto& b = kB13;
  const Mat u_inner = a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) +
                      b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id;
  const Mat u = a * u_inner;
  const Mat v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 +
                b[4] * a4 + b[2] * a2 + b[0] * id;
  return pade_ratio(u, v);
}

}  // namespace

Eigen::MatrixXcd expm(const Eigen::MatrixXcd& a) {
  if (a.rows() != a.cols()) throw NumericalError("expm: matrix is not square");
  if (a.size() == 0) return a;
  if (!a.allFinite()) throw NumericalError("expm: non-finite input");

  const double nrm = norm1(a);
  Mat result;
  if (nrm <= kThetaLow[0]) {
    result = pade_low(a, kB3);
  } else if (nrm <= kThetaLow[1]) {
    result = pade_low(a, kB5);
  } else if (nrm <= kThetaLow[2]) {
    result = pade_low(a, kB7);
  } else if (nrm <= kThetaLow[3]) {
    result = pade_low(a, kB9);
  } else {
    const int s = std::max(0, static_cast<int>(std::ceil(std::log2(nrm / kTheta13))));
    if (s > 1000) throw NumericalError("expm: norm out of range");
    result = pade13(a * std::ldexp(1.0, -s));
    for (int k = 0; k < s; ++k) result = result * result;
  }
  if (!result.allFinite())
    throw NumericalError("expm: result is not finite (argument too large)");
  return result;
}

}  // namespace regimevar
