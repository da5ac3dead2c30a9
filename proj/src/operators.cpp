#include "cnoidal/operators.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "cnoidal/spectral.hpp"

namespace cnoidal {

bool is_block(OperatorKind kind) {
    return kind == OperatorKind::KgBlock || kind == OperatorKind::NlsBlock;
}

const char* kind_name(OperatorKind kind) {
    switch (kind) {
        case OperatorKind::KgL1: return "L1";
        case OperatorKind::NlsL2: return "L2";
        case OperatorKind::NlsL3: return "L3";
        case OperatorKind::KgBlock: return "kg_block";
        case OperatorKind::NlsBlock: return "nls_block";
    }
    return "?";
}

namespace {

Model model_of(OperatorKind kind) {
    switch (kind) {
        case OperatorKind::KgL1:
        case OperatorKind::KgBlock:
            return Model::KG;
        default:
            return Model::NLS;
    }
}

Eigen::VectorXd profile_squared(const WaveParams& p, int N) {
    Eigen::VectorXd v(N);
    for (int j = 0; j < N; ++j) {
        const double f = profile(p, j * p.L / N);
        v[j] = f * f;
    }
    return v;
}

// Orthonormal basis of the complement of the constant vector, as the trailing
// columns of the Householder reflector sending ones/sqrt(N) to e_0.
Eigen::MatrixXd mean_free_basis(int N) {
    Eigen::VectorXd w = Eigen::VectorXd::Constant(N, 1.0 / std::sqrt(double(N)));
    w[0] -= 1.0;
    w.normalize();
    Eigen::MatrixXd H = Eigen::MatrixXd::Identity(N, N) - 2.0 * w * w.transpose();
    return H.rightCols(N - 1);
}

SpectrumReport report_from_values(const Eigen::VectorXd& ev, double rel_zero_tol) {
    SpectrumReport r;
    r.eigenvalues.assign(ev.data(), ev.data() + ev.size());
    const double radius = std::max(std::abs(ev[0]), std::abs(ev[ev.size() - 1]));
    r.zero_tol = rel_zero_tol * radius;
    r.n_neg = 0;
    r.z_dim = 0;
    for (double v : r.eigenvalues) {
        if (v < -r.zero_tol) ++r.n_neg;
        else if (v <= r.zero_tol) ++r.z_dim;
    }
    return r;
}

}  // namespace

OperatorMatrix build(OperatorKind kind, const WaveParams& params, int N) {
    if (N < 64 || N % 2 != 0) {
        throw std::domain_error("operator grid size must be even and >= 64");
    }
    if (params.model != model_of(kind)) {
        throw std::domain_error(std::string("wave model does not match operator kind ") +
                                kind_name(kind));
    }
    const Eigen::MatrixXd D2 = fourier_diff2(N, params.L);
    const Eigen::VectorXd phi2 = profile_squared(params, N);
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(N, N);

    OperatorMatrix out{kind, params, N, {}};
    switch (kind) {
        case OperatorKind::KgL1:
            out.entries = -params.omega * D2 - (3.0 * phi2).asDiagonal().toDenseMatrix() + I;
            break;
        case OperatorKind::NlsL2:
            out.entries = -D2 + params.omega * I - (3.0 * phi2).asDiagonal().toDenseMatrix();
            break;
        case OperatorKind::NlsL3:
            out.entries = -D2 + params.omega * I - phi2.asDiagonal().toDenseMatrix();
            break;
        case OperatorKind::KgBlock: {
            const double c = params.speed();
            const Eigen::MatrixXd D1 = fourier_diff1(N, params.L);
            out.entries.setZero(2 * N, 2 * N);
            out.entries.topLeftCorner(N, N) =
                -D2 - (3.0 * phi2).asDiagonal().toDenseMatrix() + I;
            out.entries.topRightCorner(N, N) = c * D1;
            out.entries.bottomLeftCorner(N, N) = -c * D1;
            out.entries.bottomRightCorner(N, N) = I;
            break;
        }
        case OperatorKind::NlsBlock: {
            out.entries.setZero(2 * N, 2 * N);
            out.entries.topLeftCorner(N, N) = build(OperatorKind::NlsL2, params, N).entries;
            out.entries.bottomRightCorner(N, N) =
                build(OperatorKind::NlsL3, params, N).entries;
            break;
        }
    }
    return out;
}

EigenDecomposition eigen_decompose(const Eigen::MatrixXd& M) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(M);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("symmetric eigensolver failed to converge");
    }
    return {solver.eigenvalues(), solver.eigenvectors()};
}

SpectrumReport spectrum(const OperatorMatrix& M, double rel_zero_tol) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(M.entries,
                                                          Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("symmetric eigensolver failed to converge");
    }
    return report_from_values(solver.eigenvalues(), rel_zero_tol);
}

SpectrumReport constrained_spectrum(const OperatorMatrix& M, double rel_zero_tol) {
    const int N = M.N;
    const Eigen::MatrixXd Q = mean_free_basis(N);
    Eigen::MatrixXd P;
    if (!is_block(M.kind)) {
        P = Q;
    } else {
        const int rows = 2 * N;
        if (M.kind == OperatorKind::KgBlock) {
            // zero-mean constraint on the first component only
            P.setZero(rows, 2 * N - 1);
            P.topLeftCorner(N, N - 1) = Q;
            P.bottomRightCorner(N, N).setIdentity();
        } else {
            P.setZero(rows, 2 * N - 2);
            P.topLeftCorner(N, N - 1) = Q;
            P.bottomRightCorner(N, N - 1) = Q;
        }
    }
    const Eigen::MatrixXd reduced = P.transpose() * M.entries * P;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(reduced,
                                                          Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("symmetric eigensolver failed to converge");
    }
    return report_from_values(solver.eigenvalues(), rel_zero_tol);
}

std::vector<EigenPair> lame_eigenpairs(Modulus k, const WaveParams& params) {
    const double kv = k.value();
    const double k2 = kv * kv;
    const double s = std::sqrt(1.0 - k2 + k2 * k2);
    const double den = 2.0 * k2 - 1.0;
    const double b = params.scale;
    const Modulus km = params.modulus();

    auto sn2 = [b, km](double x) {
        const double sn = jacobi(b * x, km).sn;
        return sn * sn;
    };

    std::vector<EigenPair> pairs;
    pairs.push_back({(1.0 - 2.0 * k2 - 2.0 * s) / den,
                     [sn2, k2, s](double x) { return k2 * sn2(x) - (1.0 + k2 + s) / 3.0; }});
    pairs.push_back({-3.0 * k2 / den, [b, km](double x) {
                         const JacobiTriple j = jacobi(b * x, km);
                         return j.cn * j.dn;
                     }});
    pairs.push_back({0.0, [b, km](double x) {
                         const JacobiTriple j = jacobi(b * x, km);
                         return j.sn * j.dn;  // proportional to phi'
                     }});
    pairs.push_back({3.0 * (1.0 - k2) / den, [b, km](double x) {
                         const JacobiTriple j = jacobi(b * x, km);
                         return j.sn * j.cn;
                     }});
    pairs.push_back({(1.0 - 2.0 * k2 + 2.0 * s) / den,
                     [sn2, k2, s](double x) { return k2 * sn2(x) - (1.0 + k2 - s) / 3.0; }});
    return pairs;
}

double eigen_residual(const OperatorMatrix& M, double value,
                      const std::vector<double>& vec) {
    if (static_cast<int>(vec.size()) != M.entries.rows()) {
        throw std::domain_error("eigen_residual: vector length does not match matrix");
    }
    Eigen::Map<const Eigen::VectorXd> v(vec.data(), vec.size());
    const double nv = v.norm();
    if (nv == 0.0) {
        throw std::domain_error("eigen_residual: zero vector");
    }
    return (M.entries * v - value * v).norm() / nv;
}

}  // namespace cnoidal
