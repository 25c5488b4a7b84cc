#ifndef QVTS_QUANTUM_HPP
#define QVTS_QUANTUM_HPP

#include <array>
#include <complex>
#include <utility>
#include <vector>

#include "qvts/rng.hpp"

namespace qvts {

using Complex = std::complex<double>;

// 2x2 complex matrix, row-major [[a, b], [c, d]].
struct Mat2 {
  Complex a{0.0}, b{0.0}, c{0.0}, d{0.0};

  static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
  static Mat2 zero() { return {}; }

  Mat2 adjoint() const;
  Complex trace() const { return a + d; }

  friend Mat2 operator*(const Mat2& x, const Mat2& y);
  friend Mat2 operator+(const Mat2& x, const Mat2& y);
  friend Mat2 operator-(const Mat2& x, const Mat2& y);
  friend Mat2 operator*(Complex s, const Mat2& x);
};

double max_abs_diff(const Mat2& x, const Mat2& y);

// Pure phon state as coordinates in the {|u>, |d>} basis.
struct PhonState {
  Complex up{1.0};
  Complex down{0.0};

  double norm() const;
};

// Unit vector in the (turbulence, myoelastic, phonation) = (x, y, z) space.
struct Direction {
  double x = 0.0;
  double y = 0.0;
  double z = 1.0;
};

// Unnormalized field vector; also used for integrated fields.
struct FieldVector {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double magnitude() const;
};

enum class Axis { x, y, z };
enum class BasisLabel { u, d, r, l, f, s };

struct Observable {
  Mat2 m;
};

struct Projector {
  Mat2 m;
};

struct Unitary {
  Mat2 m;
};

struct DensityMatrix {
  Mat2 r;
};

struct EigenPair {
  double value;
  PhonState state;
};

// --- construction -----------------------------------------------------------

Observable pauli(Axis axis);
PhonState basis_state(BasisLabel label);

// sigma_n = n_x sigma_x + n_y sigma_y + n_z sigma_z. Requires |n| = 1.
Observable observable_along(const Direction& n);

Projector projector_onto(const PhonState& s);

// --- linear-algebra core ----------------------------------------------------

// Eigenvalues in descending order with orthonormal, phase-fixed eigenstates
// (first nonzero component real-positive). Input must be Hermitian.
std::array<EigenPair, 2> eigensystem(const Observable& o);

Complex inner(const PhonState& bra, const PhonState& ket);
double born_probability(const PhonState& state, const PhonState& target);
double expectation(const Observable& o, const PhonState& state);
Mat2 commutator(const Observable& a, const Observable& b);

// --- measurement ------------------------------------------------------------

struct PureMeasurement {
  int outcome;      // +1 or -1
  PhonState post;   // collapsed eigenstate, phase-fixed
};

PureMeasurement measure_and_collapse(const PhonState& state,
                                     const Observable& o, SeededRng& rng);

struct DensityMeasurement {
  std::size_t outcome;
  DensityMatrix post;
};

// Projector system must be complete (sum = I within 1e-10).
DensityMeasurement measure_density(const DensityMatrix& rho,
                                   const std::vector<Projector>& projectors,
                                   SeededRng& rng);

// --- density matrices -------------------------------------------------------

DensityMatrix density_from_ensemble(
    const std::vector<std::pair<double, PhonState>>& pairs);
DensityMatrix density_from_pure(const PhonState& s);
double purity(const DensityMatrix& rho);

// --- evolution --------------------------------------------------------------

// exp(-i (th_x sigma_x + th_y sigma_y + th_z sigma_z)) in closed form:
// cos|th| I - i sin|th| (n.sigma). Returns I for |th| = 0.
Unitary unitary_from_integrated_field(const FieldVector& theta);

PhonState evolve_pure(const PhonState& state, const Unitary& u);
DensityMatrix evolve_density(const DensityMatrix& rho, const Unitary& u);

// Rotate global phase so the first nonzero amplitude is real-positive.
PhonState fix_phase(const PhonState& s);

}  // namespace qvts

#endif  // QVTS_QUANTUM_HPP
