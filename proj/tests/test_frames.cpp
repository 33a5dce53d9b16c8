#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <memory>
#include <random>

#include "wloc/frames.hpp"
#include "wloc/geometry.hpp"

using namespace wloc;

namespace {

std::shared_ptr<const SampledDomain> make_domain(Space s, double res,
                                                 double trunc) {
  auto space = s == Space::Euclidean2D   ? MetricMeasureSpace::euclidean2d()
               : s == Space::AffineGroup ? MetricMeasureSpace::affine_group()
                                         : MetricMeasureSpace::bergman_disc();
  return std::make_shared<SampledDomain>(sample_grid(space, res, trunc));
}

Point pt(Space s, double a, double b) { return Point{s, a, b}; }

// 1-D Riemann quadrature oracle for the Gabor pair inner product:
// <psi_{x1,xi1}, psi_{x2,xi2}> with psi(t) = pi^{-1/4} exp(-t^2/2) and
// modulation e^{2 pi i xi t}.
Complex gabor_quadrature_oracle(double x1, double xi1, double x2, double xi2,
                                double dt = 0.005, double half_width = 14.0) {
  Complex acc = 0.0;
  const double n = std::pow(M_PI, -0.25);
  for (double t = -half_width; t <= half_width; t += dt) {
    double g1 = n * std::exp(-0.5 * (t - x1) * (t - x1));
    double g2 = n * std::exp(-0.5 * (t - x2) * (t - x2));
    // integrand f_{x1,xi1}(t) * conj(f_{x2,xi2}(t))
    Complex ph = std::exp(Complex(0.0, 2.0 * M_PI * (xi1 - xi2) * t));
    acc += g1 * g2 * ph * dt;
  }
  return acc;
}

// Brute-force time-grid inner product of two Haar atoms.
double haar_time_grid_oracle(double a1, double b1, double a2, double b2,
                             double dt = 1e-6) {
  auto haar = [](double t) {
    if (t < 0.0 || t >= 1.0) return 0.0;
    return t < 0.5 ? 1.0 : -1.0;
  };
  const double s = std::sqrt(haar_atom_norm_squared());
  double lo = std::min(b1, b2) - 1e-9;
  double hi = std::max(b1 + a1, b2 + a2) + 1e-9;
  double acc = 0.0;
  for (double t = lo + 0.5 * dt; t < hi; t += dt) {
    acc += (s / std::sqrt(a1)) * haar((t - b1) / a1) * (s / std::sqrt(a2)) *
           haar((t - b2) / a2) * dt;
  }
  return acc;
}

}  // namespace

TEST_CASE("Gabor closed-form pair inner products") {
  auto dom = make_domain(Space::Euclidean2D, 0.5, 3.0);
  auto frame = gabor_gaussian_frame(dom);
  auto P = [&](double a, double b, double c, double d) {
    return frame.pair_inner(pt(Space::Euclidean2D, a, b),
                            pt(Space::Euclidean2D, c, d));
  };
  CHECK(std::abs(P(0, 0, 0, 0) - 1.0) <= 1e-14);
  CHECK(std::abs(P(0, 0, 2, 0)) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  CHECK(std::abs(P(0, 0, 0, 1)) ==
        doctest::Approx(std::exp(-M_PI * M_PI)).epsilon(1e-10));
}

TEST_CASE("Gabor pair inner matches 1-D quadrature oracle") {
  auto dom = make_domain(Space::Euclidean2D, 0.5, 3.0);
  auto frame = gabor_gaussian_frame(dom);
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-2.5, 2.5);
  for (int k = 0; k < 25; ++k) {
    double x1 = u(rng), xi1 = u(rng), x2 = u(rng), xi2 = u(rng);
    Complex closed = frame.pair_inner(pt(Space::Euclidean2D, x1, xi1),
                                      pt(Space::Euclidean2D, x2, xi2));
    Complex oracle = gabor_quadrature_oracle(x1, xi1, x2, xi2);
    CHECK(std::abs(closed - oracle) <= 1e-6);
  }
}

TEST_CASE("Gabor pair inner depends only on the offset (covariance)") {
  auto dom = make_domain(Space::Euclidean2D, 0.5, 3.0);
  auto frame = gabor_gaussian_frame(dom);
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int k = 0; k < 50; ++k) {
    double dx = u(rng), dxi = u(rng), sx = u(rng), sxi = u(rng);
    double m1 = std::abs(frame.pair_inner(pt(Space::Euclidean2D, 0, 0),
                                          pt(Space::Euclidean2D, dx, dxi)));
    double m2 = std::abs(frame.pair_inner(pt(Space::Euclidean2D, sx, sxi),
                                          pt(Space::Euclidean2D, sx + dx, sxi + dxi)));
    CHECK(std::abs(m1 - m2) <= 1e-13);
  }
}

TEST_CASE("Haar pair inner products") {
  const double n2 = haar_atom_norm_squared();
  CHECK(n2 == doctest::Approx(1.0 / (2.0 * std::log(2.0))).epsilon(1e-14));
  // Atom norm: admissibility-normalized window.
  CHECK(haar_pair_inner(1.3, 0.4, 1.3, 0.4) == doctest::Approx(n2).epsilon(1e-12));
  // Disjoint supports.
  CHECK(haar_pair_inner(1.0, 0.0, 1.0, 5.0) == 0.0);
  // Against a brute-force time-grid oracle.
  CHECK(haar_pair_inner(1.0, 0.0, 2.0, 0.0) ==
        doctest::Approx(haar_time_grid_oracle(1.0, 0.0, 2.0, 0.0)).epsilon(1e-4));
  double v = haar_pair_inner(0.7, -0.3, 1.9, 0.2);
  CHECK(std::abs(v - haar_time_grid_oracle(0.7, -0.3, 1.9, 0.2)) <= 1e-5);
}

TEST_CASE("Haar frame realization consistency") {
  auto dom = make_domain(Space::AffineGroup, 0.4, 1.6);
  auto frame = haar_wavelet_frame(dom);
  const Eigen::MatrixXcd& V = frame.vectors();
  double worst = 0.0;
  for (int i = 0; i < dom->size(); ++i) {
    for (int j = i; j < dom->size(); ++j) {
      Complex g = V.col(i).dot(V.col(j));  // <col_j, col_i> = <f_j, f_i>
      worst = std::max(worst, std::abs(g - frame.pair_inner(j, i)));
    }
  }
  CHECK(worst <= 1e-8);
}

TEST_CASE("Bergman closed forms and realization consistency") {
  auto dom = make_domain(Space::BergmanDisc, 0.25, 1.2);
  auto frame = bergman_disc_frame(dom, 60);
  CHECK(std::abs(frame.pair_inner(pt(Space::BergmanDisc, 0, 0),
                                  pt(Space::BergmanDisc, 0, 0)) -
                 1.0) <= 1e-14);
  CHECK(std::abs(frame.pair_inner(pt(Space::BergmanDisc, 0, 0),
                                  pt(Space::BergmanDisc, 0.5, 0))) ==
        doctest::Approx(0.75).epsilon(1e-13));
  Point z = pt(Space::BergmanDisc, 0.3, 0.0);
  Eigen::VectorXcd v = frame.realize(z);
  CHECK(std::abs(Complex(v.dot(v)) - frame.pair_inner(z, z)) <= 1e-8);
  Point w = pt(Space::BergmanDisc, 0.0, 0.3);
  Eigen::VectorXcd vw = frame.realize(w);
  CHECK(std::abs(Complex(vw.dot(v)) - frame.pair_inner(z, w)) <= 1e-8);
}

TEST_CASE("Bergman degree cap too small throws") {
  auto dom = make_domain(Space::BergmanDisc, 0.25, 2.0);
  CHECK_THROWS(bergman_disc_frame(dom, 5));
}

TEST_CASE("gram is Hermitian PSD") {
  auto dom = make_domain(Space::BergmanDisc, 0.3, 1.2);
  auto frame = bergman_disc_frame(dom, 60);
  const Eigen::MatrixXcd& G = frame.gram();
  CHECK((G - G.adjoint()).cwiseAbs().maxCoeff() <= 1e-12);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(G);
  CHECK(eig.eigenvalues().minCoeff() >= -1e-10);
}

TEST_CASE("frame bounds: orthonormal family and scaling") {
  auto dom = make_domain(Space::Euclidean2D, 1.0, 2.0);
  auto on = orthonormal_test_frame(dom);
  FrameBounds b = frame_bounds(on);
  CHECK(b.c == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(b.C == doctest::Approx(1.0).epsilon(1e-10));

  // Scaling the atoms by 2 scales the bounds by 4.
  auto scaled = SampledFrame(dom, FrameTag::OrthonormalTest,
                             [&](const Point& x, const Point& y) {
                               return 4.0 * on.pair_inner(x, y);
                             },
                             2.0 * on.vectors());
  FrameBounds b2 = frame_bounds(scaled);
  CHECK(b2.c == doctest::Approx(4.0).epsilon(1e-10));
  CHECK(b2.C == doctest::Approx(4.0).epsilon(1e-10));
}

TEST_CASE("Gabor near-Parseval bounds on an interior subspace") {
  auto dom = make_domain(Space::Euclidean2D, 0.25, 4.0);
  auto frame = gabor_gaussian_frame(dom);
  // Generators: a well-conditioned unit sub-lattice of interior atoms (the
  // full fine lattice has near-dependent combinations whose span leaks far
  // out in phase space).
  std::vector<int> interior;
  for (int i = 0; i < dom->size(); ++i) {
    const Point& p = dom->nodes[i];
    if (dom->radius_of(i) <= 1.5 &&
        std::abs(std::remainder(p.c0, 1.0)) < 1e-9 &&
        std::abs(std::remainder(p.c1, 1.0)) < 1e-9)
      interior.push_back(i);
  }
  Eigen::MatrixXcd gen(frame.realization_dim(), interior.size());
  for (size_t k = 0; k < interior.size(); ++k) {
    gen.col(k) = frame.vectors().col(interior[k]);
  }
  FrameBounds b = frame_bounds_on_span(frame, gen);
  CHECK(b.c >= 0.95);
  CHECK(b.C <= 1.05);
}

TEST_CASE("analysis and synthesis") {
  auto dom = make_domain(Space::BergmanDisc, 0.25, 1.2);
  auto frame = bergman_disc_frame(dom, 80);

  // analysis at a realized atom reproduces pair_inner along the nodes.
  Eigen::VectorXcd f = frame.vectors().col(0);
  Eigen::VectorXcd a = analysis(frame, f);
  CHECK(std::abs(a(0) - frame.pair_inner(0, 0)) <= 1e-10);

  // zero maps to zero both ways.
  CHECK(analysis(frame, Eigen::VectorXcd::Zero(frame.realization_dim()))
            .norm() == 0.0);
  CHECK(synthesis(frame, Eigen::VectorXcd::Zero(dom->size())).norm() == 0.0);

  // adjointness: <synthesis(a), f> = sum w_x a(x) conj(analysis(f)(x)).
  std::mt19937 rng(17);
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::VectorXcd coef(dom->size());
  for (int i = 0; i < dom->size(); ++i) coef(i) = Complex(g(rng), g(rng));
  Eigen::VectorXcd fv(frame.realization_dim());
  for (int i = 0; i < frame.realization_dim(); ++i) fv(i) = Complex(g(rng), g(rng));
  Complex lhs = fv.dot(synthesis(frame, coef));  // <synth, fv>
  Eigen::VectorXcd af = analysis(frame, fv);
  Complex rhs = 0.0;
  for (int i = 0; i < dom->size(); ++i) {
    rhs += dom->weights[i] * coef(i) * std::conj(af(i));
  }
  CHECK(std::abs(lhs - rhs) <= 1e-10);

  // synthesis(analysis(.)) equals the gram-based frame operator action.
  Eigen::MatrixXcd S = frame_operator(frame);
  CHECK((synthesis(frame, analysis(frame, fv)) - S * fv).norm() <= 1e-10);

  CHECK_THROWS(analysis(frame, Eigen::VectorXcd::Zero(3)));
  CHECK_THROWS(synthesis(frame, Eigen::VectorXcd::Zero(3)));
}

TEST_CASE("analysis norm bounded by frame bounds") {
  auto dom = make_domain(Space::BergmanDisc, 0.2, 1.2);
  auto frame = bergman_disc_frame(dom, 80);
  FrameBounds b = frame_bounds(frame);
  std::mt19937 rng(23);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    // Test vectors inside the resolved span: synthesized from coefficients.
    Eigen::VectorXcd coef(dom->size());
    for (int i = 0; i < dom->size(); ++i) coef(i) = Complex(g(rng), g(rng));
    Eigen::VectorXcd f = synthesis(frame, coef);
    Eigen::VectorXcd a = analysis(frame, f);
    double q = 0.0;
    for (int i = 0; i < dom->size(); ++i) q += dom->weights[i] * std::norm(a(i));
    double n2 = f.squaredNorm();
    CHECK(q >= b.c * n2 * (1.0 - 1e-8));
    CHECK(q <= b.C * n2 * (1.0 + 1e-8));
  }
}

TEST_CASE("canonical dual: orthonormal family is self-dual") {
  auto dom = make_domain(Space::Euclidean2D, 1.0, 2.0);
  auto on = std::make_shared<SampledFrame>(orthonormal_test_frame(dom));
  DualFrame dual = canonical_dual(on);
  CHECK((dual.dual_vectors - on->vectors()).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("canonical dual: Bergman near-Parseval self-dual") {
  // The analysis mass of an atom outside a ball at hyperbolic distance R is
  // ~ 4 e^{-2R}, so the atoms compared must sit well inside the truncation.
  auto dom = make_domain(Space::BergmanDisc, 0.15, 2.2);
  auto frame = std::make_shared<SampledFrame>(bergman_disc_frame(dom, 400));
  DualFrame dual = canonical_dual(frame, 1e-2);
  double worst = 0.0;
  for (int i = 0; i < dom->size(); ++i) {
    if (dom->radius_of(i) <= 0.5) {
      worst = std::max(
          worst,
          (dual.dual_vectors.col(i) - frame->vectors().col(i)).norm());
    }
  }
  CHECK(worst <= 0.1);
}

TEST_CASE("canonical dual: Gabor reconstruction residual") {
  auto dom = make_domain(Space::Euclidean2D, 0.2, 4.0);
  auto frame = std::make_shared<SampledFrame>(gabor_gaussian_frame(dom));
  DualFrame dual = canonical_dual(frame);
  std::mt19937 rng(31);
  std::normal_distribution<double> g(0.0, 1.0);
  const Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(
      dom->weights.data(), dom->size());
  // Test vectors in the span of interior atoms.
  std::vector<int> interior;
  for (int i = 0; i < dom->size(); ++i) {
    if (dom->radius_of(i) <= 1.0) interior.push_back(i);
  }
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXcd f = Eigen::VectorXcd::Zero(frame->realization_dim());
    for (int idx : interior) {
      f += Complex(g(rng), g(rng)) * frame->vectors().col(idx);
    }
    f.normalize();
    Eigen::VectorXcd coeff = analysis(*frame, f);
    Eigen::VectorXcd rec =
        dual.dual_vectors * (w.asDiagonal() * coeff);
    // Residual floor comes from the spectral rank cutoff in the dual;
    // components of f along barely-resolved directions are truncated.
    CHECK((rec - f).norm() <= 5e-6);
  }
}

TEST_CASE("canonical dual condition floor is enforceable") {
  auto dom = make_domain(Space::Euclidean2D, 0.5, 3.0);
  auto frame = std::make_shared<SampledFrame>(gabor_gaussian_frame(dom));
  CHECK_THROWS(canonical_dual(frame, 1e-8, 0.5));
}
