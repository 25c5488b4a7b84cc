#include "qvts/quantum.hpp"

#include <cmath>
#include <stdexcept>

namespace qvts {

namespace {

constexpr double kHermitianTol = 1e-12;
constexpr double kNormTol = 1e-9;
constexpr double kCompletenessTol = 1e-10;
const Complex kI(0.0, 1.0);

void require_hermitian(const Mat2& m, const char* what) {
  if (std::abs(m.a.imag()) > kHermitianTol ||
      std::abs(m.d.imag()) > kHermitianTol ||
      std::abs(m.b - std::conj(m.c)) > kHermitianTol) {
    throw std::invalid_argument(std::string(what) + ": matrix is not Hermitian");
  }
}

void require_normalized(const PhonState& s, const char* what) {
  if (std::abs(s.norm() - 1.0) > kNormTol) {
    throw std::invalid_argument(std::string(what) + ": state is not normalized");
  }
}

}  // namespace

Mat2 Mat2::adjoint() const {
  return {std::conj(a), std::conj(c), std::conj(b), std::conj(d)};
}

Mat2 operator*(const Mat2& x, const Mat2& y) {
  return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d,
          x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
}

Mat2 operator+(const Mat2& x, const Mat2& y) {
  return {x.a + y.a, x.b + y.b, x.c + y.c, x.d + y.d};
}

Mat2 operator-(const Mat2& x, const Mat2& y) {
  return {x.a - y.a, x.b - y.b, x.c - y.c, x.d - y.d};
}

Mat2 operator*(Complex s, const Mat2& x) {
  return {s * x.a, s * x.b, s * x.c, s * x.d};
}

double max_abs_diff(const Mat2& x, const Mat2& y) {
  return std::max(std::max(std::abs(x.a - y.a), std::abs(x.b - y.b)),
                  std::max(std::abs(x.c - y.c), std::abs(x.d - y.d)));
}

double PhonState::norm() const {
  return std::sqrt(std::norm(up) + std::norm(down));
}

double FieldVector::magnitude() const {
  return std::sqrt(x * x + y * y + z * z);
}

Observable pauli(Axis axis) {
  switch (axis) {
    case Axis::x:
      return {{0.0, 1.0, 1.0, 0.0}};
    case Axis::y:
      return {{0.0, -kI, kI, 0.0}};
    case Axis::z:
    default:
      return {{1.0, 0.0, 0.0, -1.0}};
  }
}

PhonState basis_state(BasisLabel label) {
  const double h = 1.0 / std::sqrt(2.0);
  switch (label) {
    case BasisLabel::u:
      return {1.0, 0.0};
    case BasisLabel::d:
      return {0.0, 1.0};
    case BasisLabel::r:
      return {h, h};
    case BasisLabel::l:
      return {h, -h};
    case BasisLabel::f:
      return {h, kI * h};
    case BasisLabel::s:
    default:
      return {h, -kI * h};
  }
}

Observable observable_along(const Direction& n) {
  const double mag2 = n.x * n.x + n.y * n.y + n.z * n.z;
  if (std::abs(mag2 - 1.0) > kNormTol) {
    throw std::invalid_argument(
        "observable_along: direction must be normalized");
  }
  return {{Complex(n.z), Complex(n.x, -n.y), Complex(n.x, n.y), Complex(-n.z)}};
}

Projector projector_onto(const PhonState& s) {
  return {{s.up * std::conj(s.up), s.up * std::conj(s.down),
           s.down * std::conj(s.up), s.down * std::conj(s.down)}};
}

PhonState fix_phase(const PhonState& s) {
  Complex lead = (std::abs(s.up) > 1e-12) ? s.up : s.down;
  const double mag = std::abs(lead);
  if (mag < 1e-300) return s;
  const Complex phase = std::conj(lead) / mag;
  return {phase * s.up, phase * s.down};
}

std::array<EigenPair, 2> eigensystem(const Observable& o) {
  require_hermitian(o.m, "eigensystem");
  const double a = o.m.a.real();
  const double d = o.m.d.real();
  const Complex b = o.m.b;
  const double mean = 0.5 * (a + d);
  const double disc = std::sqrt(0.25 * (a - d) * (a - d) + std::norm(b));
  const double hi = mean + disc;
  const double lo = mean - disc;

  auto eigenvector = [&](double lambda) -> PhonState {
    // Candidates from the two rows of (M - lambda I); pick the larger.
    PhonState v1{b, Complex(lambda - a)};
    PhonState v2{Complex(lambda - d), std::conj(b)};
    PhonState v = (v1.norm() >= v2.norm()) ? v1 : v2;
    const double n = v.norm();
    if (n < 1e-300) return {1.0, 0.0};
    return fix_phase({v.up / n, v.down / n});
  };

  PhonState vhi, vlo;
  if (disc < 1e-15) {
    // Degenerate (multiple of I): any orthonormal pair.
    vhi = {1.0, 0.0};
    vlo = {0.0, 1.0};
  } else {
    vhi = eigenvector(hi);
    // Orthogonal complement, phase-fixed.
    vlo = fix_phase({-std::conj(vhi.down), std::conj(vhi.up)});
  }
  return {EigenPair{hi, vhi}, EigenPair{lo, vlo}};
}

Complex inner(const PhonState& bra, const PhonState& ket) {
  return std::conj(bra.up) * ket.up + std::conj(bra.down) * ket.down;
}

double born_probability(const PhonState& state, const PhonState& target) {
  require_normalized(state, "born_probability");
  require_normalized(target, "born_probability");
  return std::norm(inner(target, state));
}

double expectation(const Observable& o, const PhonState& state) {
  require_hermitian(o.m, "expectation");
  require_normalized(state, "expectation");
  const PhonState os{o.m.a * state.up + o.m.b * state.down,
                     o.m.c * state.up + o.m.d * state.down};
  return inner(state, os).real();
}

Mat2 commutator(const Observable& a, const Observable& b) {
  return a.m * b.m - b.m * a.m;
}

PureMeasurement measure_and_collapse(const PhonState& state,
                                     const Observable& o, SeededRng& rng) {
  require_normalized(state, "measure_and_collapse");
  const auto eig = eigensystem(o);
  const double p_plus = std::norm(inner(eig[0].state, state));
  const bool plus = rng.uniform() < p_plus;
  const EigenPair& chosen = plus ? eig[0] : eig[1];
  return {plus ? +1 : -1, chosen.state};
}

DensityMeasurement measure_density(const DensityMatrix& rho,
                                   const std::vector<Projector>& projectors,
                                   SeededRng& rng) {
  Mat2 sum = Mat2::zero();
  for (const auto& p : projectors) sum = sum + p.m;
  if (max_abs_diff(sum, Mat2::identity()) > kCompletenessTol) {
    throw std::invalid_argument(
        "measure_density: projector system is incomplete");
  }

  std::vector<double> probs(projectors.size());
  for (std::size_t j = 0; j < projectors.size(); ++j) {
    probs[j] = std::max(0.0, (rho.r * projectors[j].m).trace().real());
  }

  const double draw = rng.uniform();
  double acc = 0.0;
  std::size_t outcome = projectors.size() - 1;
  for (std::size_t j = 0; j < probs.size(); ++j) {
    acc += probs[j];
    if (draw < acc && probs[j] > 0.0) {
      outcome = j;
      break;
    }
  }
  // Guard against trailing zero-probability outcomes after rounding.
  while (outcome > 0 && probs[outcome] <= 0.0) --outcome;

  const Mat2& pi = projectors[outcome].m;
  Mat2 post = pi * rho.r * pi;
  const Complex inv(1.0 / probs[outcome]);
  return {outcome, DensityMatrix{inv * post}};
}

DensityMatrix density_from_ensemble(
    const std::vector<std::pair<double, PhonState>>& pairs) {
  double total = 0.0;
  for (const auto& [p, s] : pairs) {
    if (p < 0.0) {
      throw std::invalid_argument(
          "density_from_ensemble: negative probability");
    }
    require_normalized(s, "density_from_ensemble");
    total += p;
  }
  if (std::abs(total - 1.0) > kNormTol) {
    throw std::invalid_argument(
        "density_from_ensemble: probabilities must sum to 1");
  }
  Mat2 r = Mat2::zero();
  for (const auto& [p, s] : pairs) r = r + Complex(p) * projector_onto(s).m;
  return {r};
}

DensityMatrix density_from_pure(const PhonState& s) {
  return {projector_onto(s).m};
}

double purity(const DensityMatrix& rho) {
  return (rho.r * rho.r).trace().real();
}

Unitary unitary_from_integrated_field(const FieldVector& theta) {
  const double t = theta.magnitude();
  if (t == 0.0) return {Mat2::identity()};
  const double c = std::cos(t);
  const double s = std::sin(t) / t;  // sin|th|/|th| times components
  const Complex sx(s * theta.x), sy(s * theta.y), sz(s * theta.z);
  return {{Complex(c) - kI * sz, -kI * sx - sy, -kI * sx + sy,
           Complex(c) + kI * sz}};
}

PhonState evolve_pure(const PhonState& state, const Unitary& u) {
  return {u.m.a * state.up + u.m.b * state.down,
          u.m.c * state.up + u.m.d * state.down};
}

DensityMatrix evolve_density(const DensityMatrix& rho, const Unitary& u) {
  return {u.m * rho.r * u.m.adjoint()};
}

}  // namespace qvts
