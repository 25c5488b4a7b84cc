#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>

#include "qvts/quantum.hpp"

using namespace qvts;

namespace {

const double kPi = 3.14159265358979323846;

// Independent oracle: exp(-i theta.sigma) as a truncated power series.
// 40 terms keep the truncation error below 1e-19 for |theta| <= 5.
Mat2 series_expm(const FieldVector& theta, int terms = 40) {
  const Complex mi(0.0, -1.0);
  const Mat2 h{Complex(theta.z), Complex(theta.x, -theta.y),
               Complex(theta.x, theta.y), Complex(-theta.z)};
  Mat2 sum = Mat2::identity();
  Mat2 term = Mat2::identity();
  for (int n = 1; n <= terms; ++n) {
    term = (mi / Complex(static_cast<double>(n))) * (term * h);
    sum = sum + term;
  }
  return sum;
}

bool mat_near(const Mat2& x, const Mat2& y, double tol) {
  return max_abs_diff(x, y) < tol;
}

bool state_near(const PhonState& x, const PhonState& y, double tol) {
  return std::abs(x.up - y.up) < tol && std::abs(x.down - y.down) < tol;
}

PhonState random_state(SeededRng& rng) {
  const Complex up(rng.bipolar(), rng.bipolar());
  const Complex down(rng.bipolar(), rng.bipolar());
  const double n = std::sqrt(std::norm(up) + std::norm(down));
  return {up / n, down / n};
}

}  // namespace

TEST_CASE("pauli matrices have their defining entries") {
  const Mat2 z = pauli(Axis::z).m;
  CHECK(z.a == Complex(1.0));
  CHECK(z.b == Complex(0.0));
  CHECK(z.c == Complex(0.0));
  CHECK(z.d == Complex(-1.0));

  const Mat2 x = pauli(Axis::x).m;
  CHECK(x.a == Complex(0.0));
  CHECK(x.b == Complex(1.0));
  CHECK(x.c == Complex(1.0));
  CHECK(x.d == Complex(0.0));

  const Mat2 y = pauli(Axis::y).m;
  CHECK(y.a == Complex(0.0));
  CHECK(y.b == Complex(0.0, -1.0));
  CHECK(y.c == Complex(0.0, 1.0));
  CHECK(y.d == Complex(0.0));
}

TEST_CASE("pauli matrices square to identity") {
  for (Axis ax : {Axis::x, Axis::y, Axis::z}) {
    const Mat2 m = pauli(ax).m;
    CHECK(mat_near(m * m, Mat2::identity(), 1e-12));
  }
}

TEST_CASE("cyclic commutators close as quaternions") {
  const Mat2 sx = pauli(Axis::x).m;
  const Mat2 sy = pauli(Axis::y).m;
  const Mat2 sz = pauli(Axis::z).m;
  const Complex two_i(0.0, 2.0);
  CHECK(mat_near(commutator(pauli(Axis::x), pauli(Axis::y)), two_i * sz, 1e-12));
  CHECK(mat_near(commutator(pauli(Axis::y), pauli(Axis::z)), two_i * sx, 1e-12));
  CHECK(mat_near(commutator(pauli(Axis::z), pauli(Axis::x)), two_i * sy, 1e-12));
  CHECK(mat_near(commutator(pauli(Axis::z), pauli(Axis::z)), Mat2::zero(), 1e-12));

  // Products, not just commutators: sx sy = i sz and cyclic.
  const Complex i(0.0, 1.0);
  CHECK(mat_near(sx * sy, i * sz, 1e-12));
  CHECK(mat_near(sy * sz, i * sx, 1e-12));
  CHECK(mat_near(sz * sx, i * sy, 1e-12));
}

TEST_CASE("basis states") {
  const double h = 1.0 / std::sqrt(2.0);
  CHECK(state_near(basis_state(BasisLabel::u), {1.0, 0.0}, 1e-15));
  CHECK(state_near(basis_state(BasisLabel::d), {0.0, 1.0}, 1e-15));
  CHECK(state_near(basis_state(BasisLabel::r), {h, h}, 1e-15));
  CHECK(state_near(basis_state(BasisLabel::l), {h, -h}, 1e-15));
  CHECK(state_near(basis_state(BasisLabel::f), {h, Complex(0.0, h)}, 1e-15));
  CHECK(state_near(basis_state(BasisLabel::s), {h, Complex(0.0, -h)}, 1e-15));

  for (BasisLabel b : {BasisLabel::u, BasisLabel::d, BasisLabel::r,
                       BasisLabel::l, BasisLabel::f, BasisLabel::s}) {
    CHECK(basis_state(b).norm() == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(std::abs(inner(basis_state(BasisLabel::r), basis_state(BasisLabel::l))) < 1e-12);
  CHECK(std::abs(inner(basis_state(BasisLabel::f), basis_state(BasisLabel::s))) < 1e-12);
}

TEST_CASE("observable_along axis and tilted directions") {
  CHECK(mat_near(observable_along({0.0, 0.0, 1.0}).m, pauli(Axis::z).m, 1e-12));
  CHECK(mat_near(observable_along({1.0, 0.0, 0.0}).m, pauli(Axis::x).m, 1e-12));

  const double th = kPi / 3.0;
  const Mat2 m = observable_along({std::sin(th), 0.0, std::cos(th)}).m;
  CHECK(m.a.real() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(m.b.real() == doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-12));
  CHECK(m.c.real() == doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-12));
  CHECK(m.d.real() == doctest::Approx(-0.5).epsilon(1e-12));

  CHECK_THROWS(observable_along({0.5, 0.5, 0.5}));

  SeededRng rng(3);
  for (int i = 0; i < 50; ++i) {
    double nx = rng.bipolar(), ny = rng.bipolar(), nz = rng.bipolar();
    const double n = std::sqrt(nx * nx + ny * ny + nz * nz);
    if (n < 1e-6) continue;
    const Mat2 s = observable_along({nx / n, ny / n, nz / n}).m;
    CHECK(mat_near(s * s, Mat2::identity(), 1e-12));
  }
}

TEST_CASE("eigensystem of sigma_z and tilted observables") {
  const auto ez = eigensystem(pauli(Axis::z));
  CHECK(ez[0].value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(ez[1].value == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(state_near(ez[0].state, basis_state(BasisLabel::u), 1e-12));
  CHECK(state_near(ez[1].state, basis_state(BasisLabel::d), 1e-12));

  const auto ex = eigensystem(pauli(Axis::x));
  CHECK(state_near(ex[0].state, basis_state(BasisLabel::r), 1e-12));
  CHECK(state_near(ex[1].state, basis_state(BasisLabel::l), 1e-12));

  // z-x plane: +1 eigenvector is [cos(theta/2), sin(theta/2)].
  const double th = kPi / 3.0;
  const auto en = eigensystem(observable_along({std::sin(th), 0.0, std::cos(th)}));
  CHECK(en[0].state.up.real() == doctest::Approx(std::cos(th / 2.0)).epsilon(1e-12));
  CHECK(en[0].state.down.real() == doctest::Approx(std::sin(th / 2.0)).epsilon(1e-12));

  CHECK_THROWS(eigensystem(Observable{{1.0, Complex(0.0, 1.0), Complex(0.0, 1.0), 1.0}}));

  SeededRng rng(7);
  for (int i = 0; i < 50; ++i) {
    double nx = rng.bipolar(), ny = rng.bipolar(), nz = rng.bipolar();
    const double n = std::sqrt(nx * nx + ny * ny + nz * nz);
    if (n < 1e-6) continue;
    const auto e = eigensystem(observable_along({nx / n, ny / n, nz / n}));
    CHECK(e[0].state.norm() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(e[1].state.norm() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::abs(inner(e[0].state, e[1].state)) < 1e-9);
  }
}

TEST_CASE("born probabilities") {
  CHECK(born_probability(basis_state(BasisLabel::r), basis_state(BasisLabel::u)) ==
        doctest::Approx(0.5).epsilon(1e-12));
  CHECK(born_probability(basis_state(BasisLabel::u), basis_state(BasisLabel::u)) ==
        doctest::Approx(1.0).epsilon(1e-12));

  for (int i = 0; i < 50; ++i) {
    const double th = (i + 0.5) * kPi / 50.0;
    const auto e = eigensystem(observable_along({std::sin(th), 0.0, std::cos(th)}));
    const double p = born_probability(basis_state(BasisLabel::u), e[0].state);
    const double c = std::cos(th / 2.0);
    CHECK(std::abs(p - c * c) < 1e-12);
  }
}

TEST_CASE("born probabilities over a complete pair sum to one") {
  SeededRng rng(11);
  for (int i = 0; i < 100; ++i) {
    const PhonState s = random_state(rng);
    const double p = born_probability(s, basis_state(BasisLabel::u)) +
                     born_probability(s, basis_state(BasisLabel::d));
    CHECK(std::abs(p - 1.0) < 1e-12);
  }
}

TEST_CASE("expectation values") {
  for (int i = 0; i < 50; ++i) {
    const double th = i * kPi / 49.0;
    const Observable o = observable_along({std::sin(th), 0.0, std::cos(th)});
    CHECK(std::abs(expectation(o, basis_state(BasisLabel::u)) - std::cos(th)) < 1e-12);
  }
  CHECK(std::abs(expectation(pauli(Axis::z), basis_state(BasisLabel::r))) < 1e-12);
  CHECK(expectation(pauli(Axis::x), basis_state(BasisLabel::r)) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("measurement of an eigenstate is deterministic and phase-fixed") {
  for (std::uint64_t seed : {0ull, 1ull, 42ull}) {
    SeededRng rng(seed);
    const auto m = measure_and_collapse(basis_state(BasisLabel::u), pauli(Axis::z), rng);
    CHECK(m.outcome == 1);
    CHECK(state_near(m.post, basis_state(BasisLabel::u), 1e-12));
  }
  // Phase convention: first nonzero amplitude real-positive.
  SeededRng rng(5);
  const PhonState s{Complex(0.0, 1.0) / std::sqrt(2.0), Complex(0.0, -1.0) / std::sqrt(2.0)};
  const auto m = measure_and_collapse(s, pauli(Axis::z), rng);
  CHECK(m.post.up.imag() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK((m.post.up.real() > 0.0 || m.post.down.real() > 0.0));
}

TEST_CASE("measurement statistics follow the squared amplitudes") {
  const int n = 10000;
  for (BasisLabel b : {BasisLabel::r, BasisLabel::f}) {
    SeededRng rng(2024);
    int plus = 0;
    for (int i = 0; i < n; ++i) {
      plus += measure_and_collapse(basis_state(b), pauli(Axis::z), rng).outcome == 1;
    }
    const double freq = static_cast<double>(plus) / n;
    CHECK(std::abs(freq - 0.5) < 0.02);
  }
}

TEST_CASE("remeasuring a collapsed state repeats the outcome") {
  SeededRng rng(9);
  const Observable o = observable_along({std::sin(1.1), 0.0, std::cos(1.1)});
  for (int i = 0; i < 1000; ++i) {
    const PhonState s = random_state(rng);
    const auto first = measure_and_collapse(s, o, rng);
    const auto second = measure_and_collapse(first.post, o, rng);
    REQUIRE(second.outcome == first.outcome);
    CHECK(state_near(second.post, first.post, 1e-9));
  }
}

TEST_CASE("density matrices from ensembles") {
  const auto rho = density_from_ensemble(
      {{1.0 / 3.0, basis_state(BasisLabel::u)}, {2.0 / 3.0, basis_state(BasisLabel::d)}});
  CHECK(rho.r.a.real() == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(rho.r.d.real() == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(std::abs(rho.r.b) < 1e-15);

  const auto pure = density_from_ensemble({{1.0, basis_state(BasisLabel::u)}});
  CHECK(mat_near(pure.r, {1.0, 0.0, 0.0, 0.0}, 1e-15));

  const auto half = density_from_ensemble(
      {{0.5, basis_state(BasisLabel::r)}, {0.5, basis_state(BasisLabel::l)}});
  CHECK(mat_near(half.r, {0.5, 0.0, 0.0, 0.5}, 1e-12));

  CHECK_THROWS(density_from_ensemble({{0.7, basis_state(BasisLabel::u)}}));
  CHECK_THROWS(density_from_ensemble(
      {{-0.5, basis_state(BasisLabel::u)}, {1.5, basis_state(BasisLabel::d)}}));
}

TEST_CASE("purity") {
  CHECK(std::abs(purity(DensityMatrix{{1.0 / 3.0, 0.0, 0.0, 2.0 / 3.0}}) - 5.0 / 9.0) < 1e-12);
  CHECK(purity(density_from_pure(basis_state(BasisLabel::u))) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(purity(DensityMatrix{{0.5, 0.0, 0.0, 0.5}}) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("density measurement samples the diagonal weights") {
  const std::vector<Projector> zproj = {projector_onto(basis_state(BasisLabel::u)),
                                        projector_onto(basis_state(BasisLabel::d))};
  const DensityMatrix rho{{1.0 / 3.0, 0.0, 0.0, 2.0 / 3.0}};

  SeededRng rng(17);
  int ups = 0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    const auto m = measure_density(rho, zproj, rng);
    if (m.outcome == 0) {
      ++ups;
      CHECK(mat_near(m.post.r, {1.0, 0.0, 0.0, 0.0}, 1e-12));
    } else {
      CHECK(mat_near(m.post.r, {0.0, 0.0, 0.0, 1.0}, 1e-12));
    }
  }
  const double p = 1.0 / 3.0;
  CHECK(std::abs(static_cast<double>(ups) / n - p) < 4.0 * std::sqrt(p * (1 - p) / n));

  SeededRng rng2(18);
  const auto pure = measure_density(density_from_pure(basis_state(BasisLabel::u)), zproj, rng2);
  CHECK(pure.outcome == 0);

  const std::vector<Projector> xproj = {projector_onto(basis_state(BasisLabel::r)),
                                        projector_onto(basis_state(BasisLabel::l))};
  SeededRng rng3(19);
  int rs = 0;
  for (int i = 0; i < n; ++i) {
    rs += measure_density(DensityMatrix{{0.5, 0.0, 0.0, 0.5}}, xproj, rng3).outcome == 0;
  }
  CHECK(std::abs(static_cast<double>(rs) / n - 0.5) < 0.02);

  SeededRng rng4(20);
  CHECK_THROWS(measure_density(rho, {zproj[0]}, rng4));
}

TEST_CASE("closed-form exponential: fixed points") {
  CHECK(mat_near(unitary_from_integrated_field({0.0, 0.0, 0.0}).m, Mat2::identity(), 1e-15));

  const Mat2 u = unitary_from_integrated_field({0.0, 0.0, kPi / 2.0}).m;
  CHECK(std::abs(u.a - Complex(0.0, -1.0)) < 1e-12);
  CHECK(std::abs(u.d - Complex(0.0, 1.0)) < 1e-12);
  CHECK(std::abs(u.b) < 1e-15);
  CHECK(std::abs(u.c) < 1e-15);
  CHECK(mat_near(u, series_expm({0.0, 0.0, kPi / 2.0}), 1e-12));
}

TEST_CASE("closed-form exponential matches the power series") {
  SeededRng rng(23);
  for (int i = 0; i < 1000; ++i) {
    FieldVector th{rng.bipolar(), rng.bipolar(), rng.bipolar()};
    const double scale = 5.0 * rng.uniform() / std::max(th.magnitude(), 1e-12);
    th = {th.x * scale, th.y * scale, th.z * scale};
    CHECK(mat_near(unitary_from_integrated_field(th).m, series_expm(th), 1e-10));
  }
}

TEST_CASE("exponential outputs stay unitary for large fields") {
  SeededRng rng(29);
  for (int i = 0; i < 200; ++i) {
    FieldVector th{rng.bipolar(), rng.bipolar(), rng.bipolar()};
    const double scale = 100.0 * rng.uniform();
    th = {th.x * scale, th.y * scale, th.z * scale};
    const Mat2 u = unitary_from_integrated_field(th).m;
    CHECK(mat_near(u.adjoint() * u, Mat2::identity(), 1e-10));
  }
}

TEST_CASE("pure evolution: identity, precession, invariant pole") {
  SeededRng rng(31);
  const PhonState s = random_state(rng);
  CHECK(state_near(evolve_pure(s, Unitary{Mat2::identity()}), s, 1e-15));

  // H = (w/2) sigma_z rotates |r> about z: <sigma_x>(t) = cos(wt).
  const double w = 2.0;
  for (int i = 0; i < 100; ++i) {
    const double t = i * 0.07;
    const Unitary u = unitary_from_integrated_field({0.0, 0.0, w * t / 2.0});
    const PhonState st = evolve_pure(basis_state(BasisLabel::r), u);
    CHECK(std::abs(expectation(pauli(Axis::x), st) - std::cos(w * t)) < 1e-9);
    CHECK(std::abs(st.norm() - 1.0) < 1e-9);

    const PhonState up = evolve_pure(basis_state(BasisLabel::u), u);
    CHECK(std::abs(expectation(pauli(Axis::z), up) - 1.0) < 1e-12);
  }
}

TEST_CASE("density evolution is consistent with pure evolution") {
  SeededRng rng(37);
  for (int i = 0; i < 50; ++i) {
    FieldVector th{rng.bipolar(), rng.bipolar(), rng.bipolar()};
    const Unitary u = unitary_from_integrated_field(th);
    const PhonState s = random_state(rng);

    const DensityMatrix evolved = evolve_density(density_from_pure(s), u);
    const DensityMatrix direct = density_from_pure(evolve_pure(s, u));
    CHECK(mat_near(evolved.r, direct.r, 1e-9));

    CHECK(std::abs(evolved.r.trace().real() - 1.0) < 1e-9);
    CHECK(std::abs(purity(evolved) - 1.0) < 1e-9);
    CHECK(mat_near(evolved.r, evolved.r.adjoint(), 1e-9));

    const DensityMatrix half{{0.5, 0.0, 0.0, 0.5}};
    CHECK(mat_near(evolve_density(half, u).r, half.r, 1e-12));
  }

  const DensityMatrix rho{{0.3, Complex(0.1, 0.05), Complex(0.1, -0.05), 0.7}};
  CHECK(mat_near(evolve_density(rho, Unitary{Mat2::identity()}).r, rho.r, 1e-15));
  const Unitary u = unitary_from_integrated_field({0.4, -0.2, 0.9});
  CHECK(std::abs(purity(evolve_density(rho, u)) - purity(rho)) < 1e-9);
}

TEST_CASE("fix_phase makes the first nonzero amplitude real-positive") {
  const PhonState a = fix_phase({Complex(0.0, 0.6), Complex(0.8, 0.0)});
  CHECK(a.up.real() == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(std::abs(a.up.imag()) < 1e-12);

  const PhonState b = fix_phase({0.0, Complex(0.0, -1.0)});
  CHECK(b.down.real() == doctest::Approx(1.0).epsilon(1e-12));
}
