#include "cnoidal/spectral.hpp"

#include <cmath>
#include <stdexcept>

namespace cnoidal {

namespace {
void check_grid(int N, double L) {
    if (N < 2 || N % 2 != 0) {
        throw std::domain_error("grid size must be even and >= 2");
    }
    if (!(L > 0.0)) {
        throw std::domain_error("period must be positive");
    }
}
}  // namespace

Eigen::MatrixXd fourier_diff1(int N, double L) {
    check_grid(N, L);
    const double h = 2.0 * M_PI / N;
    Eigen::VectorXd col = Eigen::VectorXd::Zero(N);
    for (int j = 1; j < N; ++j) {
        col[j] = 0.5 * ((j % 2 == 0) ? 1.0 : -1.0) / std::tan(0.5 * j * h);
    }
    Eigen::MatrixXd D(N, N);
    for (int i = 0; i < N; ++i) {
        for (int j = 0; j < N; ++j) {
            const int d = i - j;
            D(i, j) = (d >= 0) ? col[d] : -col[-d];
        }
    }
    return D * (2.0 * M_PI / L);
}

Eigen::MatrixXd fourier_diff2(int N, double L) {
    check_grid(N, L);
    const double h = 2.0 * M_PI / N;
    Eigen::VectorXd col(N);
    col[0] = -M_PI * M_PI / (3.0 * h * h) - 1.0 / 6.0;
    for (int j = 1; j < N; ++j) {
        const double s = std::sin(0.5 * j * h);
        col[j] = -((j % 2 == 0) ? 1.0 : -1.0) / (2.0 * s * s);
    }
    Eigen::MatrixXd D(N, N);
    for (int i = 0; i < N; ++i) {
        for (int j = 0; j < N; ++j) {
            D(i, j) = col[std::abs(i - j)];
        }
    }
    const double r = 2.0 * M_PI / L;
    return D * (r * r);
}

}  // namespace cnoidal
