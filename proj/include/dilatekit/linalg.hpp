#pragma once

#include <complex>
#include <cstdint>

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>

namespace dilatekit {

using cd = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
/// Extended precision, used where the double factorization is too coarse.
using cx = std::complex<long double>;
using XMatrix = Eigen::Matrix<cx, Eigen::Dynamic, Eigen::Dynamic>;

/// Induced 1-norm: maximum column sum of absolute values. Used for every
/// operator residual in this library.
double induced_one_norm(const CMatrix& M);
/// max_ij |M_ij|
double max_abs(const CMatrix& M);
double max_abs_diff(const CMatrix& A, const CMatrix& B);
/// max |M - M*|
double hermitian_error(const CMatrix& M);
/// ||U* U - I|| in the induced 1-norm (0 for the empty matrix).
double unitarity_error(const CMatrix& U);

/// M^e by binary powering; negative e uses the adjoint (M must be unitary).
CMatrix unitary_power(const CMatrix& M, const boost::multiprecision::cpp_int& e);
/// M^e v; small |e| by repeated mat-vec, large |e| via unitary_power.
CVector apply_power(const CMatrix& M, const boost::multiprecision::cpp_int& e, const CVector& v);

/// exp(i pi q) for q given as an exact rational, with exact values on
/// multiples of 1/4.
cd exp_i_pi(const boost::multiprecision::cpp_rational& q);
/// sin(pi q) for exact rational q, exact on multiples of 1/2.
double sin_pi(const boost::multiprecision::cpp_rational& q);

}  // namespace dilatekit
