#ifndef CNOIDAL_OPERATORS_HPP
#define CNOIDAL_OPERATORS_HPP

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "cnoidal/waves.hpp"

namespace cnoidal {

// Scalar kinds act on N-vectors, block kinds on 2N-vectors:
//   KgL1     -omega d_xx - 3 phi^2 + 1
//   NlsL2    -d_xx + omega - 3 phi^2
//   NlsL3    -d_xx + omega - phi^2
//   KgBlock  [ -d_xx - 3 phi^2 + 1 ,  c d_x ;  -c d_x , 1 ]
//   NlsBlock diag(L2, L3)
enum class OperatorKind { KgL1, NlsL2, NlsL3, KgBlock, NlsBlock };

bool is_block(OperatorKind kind);
const char* kind_name(OperatorKind kind);

struct OperatorMatrix {
    OperatorKind kind;
    WaveParams params;
    int N;
    Eigen::MatrixXd entries;
};

struct SpectrumReport {
    std::vector<double> eigenvalues;  // ascending
    double zero_tol;                  // absolute tolerance actually applied
    int n_neg;
    int z_dim;
};

struct EigenPair {
    double value;
    std::function<double(double)> sampler;
};

OperatorMatrix build(OperatorKind kind, const WaveParams& params, int N);

// Dense symmetric eigensolve; counts taken with |lambda| <= zero_tol treated
// as kernel. rel_zero_tol scales with the spectral radius.
SpectrumReport spectrum(const OperatorMatrix& M, double rel_zero_tol = 1e-6);

// Same counts on the zero-mean subspace: scalar kinds project off the
// constant vector; KgBlock projects the first component only; NlsBlock both.
SpectrumReport constrained_spectrum(const OperatorMatrix& M,
                                    double rel_zero_tol = 1e-6);

// The five explicitly known eigenpairs of KgL1: two quadratic-in-sn^2 band
// edges and the derivative ladder cn*dn, sn*dn (the kernel direction, a
// multiple of phi'), sn*cn.
std::vector<EigenPair> lame_eigenpairs(Modulus k, const WaveParams& params);

// ||Mv - value*v||_2 / ||v||_2.
double eigen_residual(const OperatorMatrix& M, double value,
                      const std::vector<double>& vec);

// Eigen-decomposition helper shared with the index module: full spectrum plus
// eigenvectors of a symmetric matrix.
struct EigenDecomposition {
    Eigen::VectorXd values;
    Eigen::MatrixXd vectors;
};
EigenDecomposition eigen_decompose(const Eigen::MatrixXd& M);

}  // namespace cnoidal

#endif
