#ifndef CNOIDAL_INDEX_HPP
#define CNOIDAL_INDEX_HPP

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "cnoidal/operators.hpp"
#include "cnoidal/waves.hpp"

namespace cnoidal {

enum class DWhich { D1, D2, D3 };
enum class DMethod { ClosedForm, LinearSolve, IVP };

struct DQuantity {
    DWhich which;
    double value;
    DMethod method;
};

// Counts of the operator restricted to the zero-mean class, both as predicted
// by the index formulas n0/z0(D) and as verified by eigensolving the
// explicitly projected matrix. A disagreement throws: it would falsify the
// module's central consistency statement.
struct IndexReport {
    OperatorKind kind;
    int unconstrained_n;
    int unconstrained_z;
    double d_value;
    int n0;
    int z0;
    int constrained_n;
    int constrained_z;
};

// Solution data of the inhomogeneous Hill problem -p'' + omega p - phi^2 p = 1
// (and of the auxiliary homogeneous problem behind it).
struct GreenSolve {
    std::vector<double> xs;  // steps+1 uniform points on [0,L]
    std::vector<double> p;
    std::optional<double> theta;  // Floquet increment of the auxiliary solution
    double p_period_defect = 0.0;
    double dp_period_defect = 0.0;
    bool periodic_ok = true;  // defects within 1e-6, else flagged
    std::optional<double> wronskian_defect;
    std::optional<double> reconstruction_defect;  // vs the direct IVP route
    std::optional<double> integral_y;             // int_0^L y
    std::optional<double> oddness_defect;         // max |y(-x) + y(x)|
};

// D1 = -L (2k^2-1)/K(k) * (2E(k) - K(k)).
DQuantity d1_closed_form(double L, Modulus k);

// (L_i^{-1} 1, 1)_{L^2} by deflated solve: the numerically detected kernel
// direction is removed from the right-hand side, the kernel eigenvalue is
// replaced by 1, and the solution is projected back off the kernel.
DQuantity d_linear_solve(OperatorKind kind, const WaveParams& params, int N);

// D3 = (p,1)_{L^2} with p from fixed-step RK4 on [0,L], steps >= 1e4.
std::pair<DQuantity, GreenSolve> d3_via_ivp(const WaveParams& params, int steps);

// Integrates the homogeneous problem with y(0)=0, y'(0)=1/phi(0); estimates
// the Floquet increment theta by least squares of y(x+L)-y(x) against phi,
// reconstructs p by variation of parameters, and cross-checks it against
// d3_via_ivp on the same grid.
GreenSolve auxiliary_y(const WaveParams& params, int steps);

IndexReport index_report(OperatorKind kind, const WaveParams& params, int N);

// Constraint matrix of the KG block operator for the directions (1,0), (0,1);
// analytically diag(D1, L).
Eigen::Matrix2d kg_block_dmatrix(const WaveParams& params, int N);

// Root of 2E(k) - K(k) on [0.85, 0.95], bisected to 1e-10.
Modulus find_kstar();

}  // namespace cnoidal

#endif
