#ifndef CNOIDAL_ELLIPTIC_HPP
#define CNOIDAL_ELLIPTIC_HPP

// Complete elliptic integrals and Jacobi elliptic functions, computed by
// arithmetic-geometric mean iteration and the descending Landen
// transformation. Everything here is pure and reentrant.

namespace cnoidal {

// Elliptic modulus, restricted to the open interval (0,1). Values with
// k^2 > 1 - 1e-12 are rejected outright instead of being approximated.
class Modulus {
  public:
    explicit Modulus(double k);
    double value() const { return k_; }

  private:
    double k_;
};

// K(k) and E(k). For k in (0,1): K >= pi/2 strictly increasing,
// 0 < E <= pi/2 strictly decreasing.
struct EllipticPair {
    double bigK;
    double bigE;
};

struct JacobiTriple {
    double sn;
    double cn;
    double dn;
};

// Complete integrals of the first and second kind via AGM. Relative error
// is at the 1e-15 iteration tolerance, far below the 1e-12 contract.
EllipticPair complete_elliptic(Modulus k);

// sn, cn, dn at argument u. The argument is reduced modulo the period 4K
// before the Landen chain is climbed, so large |u| stays accurate.
JacobiTriple jacobi(double u, Modulus k);

// dK/dk = (E - (1-k^2)K) / (k(1-k^2)).
double d_bigK_dk(Modulus k);

// dE/dk = (E - K)/k.
double d_bigE_dk(Modulus k);

}  // namespace cnoidal

#endif
