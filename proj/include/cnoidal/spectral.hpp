#ifndef CNOIDAL_SPECTRAL_HPP
#define CNOIDAL_SPECTRAL_HPP

#include <Eigen/Dense>

namespace cnoidal {

// Fourier pseudospectral differentiation matrices on the uniform left-closed
// grid x_j = jL/N, N even (Trefethen, Spectral Methods in MATLAB, ch. 3).
// Exact on trigonometric polynomials below the Nyquist mode. The first
// derivative is antisymmetric, the second symmetric.
Eigen::MatrixXd fourier_diff1(int N, double L);
Eigen::MatrixXd fourier_diff2(int N, double L);

}  // namespace cnoidal

#endif
