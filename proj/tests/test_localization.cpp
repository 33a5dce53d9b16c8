#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <memory>

#include "wloc/frames.hpp"
#include "wloc/geometry.hpp"
#include "wloc/localization.hpp"

using namespace wloc;

namespace {

// 1-D line of nodes (x, 0) inside the Euclidean plane, spacing h, with a
// Gaussian kernel e^{-(x-y)^2/4}.  Margins and tails have erfc closed forms.
struct GaussianLine {
  std::shared_ptr<const SampledDomain> domain;
  KernelMatrix K;
};

GaussianLine gaussian_line(double h = 0.05, double half_width = 12.0) {
  SampledDomain dom{MetricMeasureSpace::euclidean2d(), {}, {}, half_width, h};
  for (double x = -half_width; x <= half_width + 1e-12; x += h) {
    dom.nodes.push_back(Point{Space::Euclidean2D, x, 0.0});
    dom.weights.push_back(h);
  }
  GaussianLine out;
  out.domain = std::make_shared<SampledDomain>(std::move(dom));
  int n = out.domain->size();
  out.K.domain = out.domain;
  out.K.entries.resize(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double d = out.domain->nodes[i].c0 - out.domain->nodes[j].c0;
      out.K.entries(i, j) = std::exp(-d * d / 4.0);
    }
  }
  out.K.provenance = "gaussian line";
  return out;
}

KernelMatrix identity_kernel(std::shared_ptr<const SampledDomain> dom) {
  KernelMatrix K;
  K.domain = dom;
  K.entries = Eigen::MatrixXd::Identity(dom->size(), dom->size());
  K.provenance = "identity";
  return K;
}

}  // namespace

TEST_CASE("kernel_matrix: orthonormal family gives the identity") {
  auto dom = std::make_shared<SampledDomain>(
      sample_grid(MetricMeasureSpace::euclidean2d(), 1.0, 2.0));
  auto on = orthonormal_test_frame(dom);
  KernelMatrix K = kernel_matrix(on);
  CHECK((K.entries - Eigen::MatrixXd::Identity(dom->size(), dom->size()))
            .cwiseAbs()
            .maxCoeff() <= 1e-12);
}

TEST_CASE("kernel_matrix: closed-form entries") {
  auto edom = std::make_shared<SampledDomain>(
      sample_grid(MetricMeasureSpace::euclidean2d(), 1.0, 2.5));
  auto gf = gabor_gaussian_frame(edom);
  KernelMatrix KG = kernel_matrix(gf);
  // locate nodes (0,0) and (2,0)
  int i0 = -1, i2 = -1;
  for (int i = 0; i < edom->size(); ++i) {
    if (std::abs(edom->nodes[i].c0) < 1e-12 && std::abs(edom->nodes[i].c1) < 1e-12)
      i0 = i;
    if (std::abs(edom->nodes[i].c0 - 2.0) < 1e-12 &&
        std::abs(edom->nodes[i].c1) < 1e-12)
      i2 = i;
  }
  REQUIRE(i0 >= 0);
  REQUIRE(i2 >= 0);
  CHECK(KG.entries(i0, i2) == doctest::Approx(std::exp(-1.0)).epsilon(1e-10));

  auto bdom = std::make_shared<SampledDomain>(
      sample_grid(MetricMeasureSpace::bergman_disc(), 0.2, 1.2));
  auto bf = bergman_disc_frame(bdom, 80);
  // entry against hand-picked points via pair_inner (grid may not contain
  // exactly 0.5): check the closed form directly.
  CHECK(std::abs(bf.pair_inner(Point{Space::BergmanDisc, 0, 0},
                               Point{Space::BergmanDisc, 0.5, 0})) ==
        doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("kernel matrices agree between realization and closed form") {
  auto dom = std::make_shared<SampledDomain>(
      sample_grid(MetricMeasureSpace::bergman_disc(), 0.25, 1.2));
  auto f = bergman_disc_frame(dom, 80);
  KernelMatrix from_gram = kernel_matrix(f);
  KernelMatrix from_vectors = kernel_matrix(f, f);
  CHECK((from_gram.entries - from_vectors.entries).cwiseAbs().maxCoeff() <=
        1e-8);
}

TEST_CASE("haar_kernel_matrix matches the frame gram") {
  auto dom = std::make_shared<SampledDomain>(
      sample_grid(MetricMeasureSpace::affine_group(), 0.5, 1.5));
  KernelMatrix fast = haar_kernel_matrix(dom);
  auto frame = haar_wavelet_frame(dom);
  KernelMatrix slow = kernel_matrix(frame);
  CHECK((fast.entries - slow.entries).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("schur margins: identity and Gaussian line") {
  auto dom = std::make_shared<SampledDomain>(
      sample_grid(MetricMeasureSpace::euclidean2d(), 1.0, 2.0));
  SchurMargins mi = schur_margins(identity_kernel(dom), Weight::constant());
  CHECK(mi.row == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(mi.col == doctest::Approx(1.0).epsilon(1e-12));

  GaussianLine g = gaussian_line();
  SchurMargins mg = schur_margins(g.K, Weight::constant());
  CHECK(mg.row == doctest::Approx(2.0 * std::sqrt(M_PI)).epsilon(0.02));
  CHECK(mg.col == doctest::Approx(mg.row).epsilon(1e-12));
}

TEST_CASE("schur margins: weight scaling invariance") {
  GaussianLine g = gaussian_line(0.1, 8.0);
  Weight p = Weight::custom(
      [](const Point& q) { return 1.0 + 0.5 * std::cos(q.c0); }, "wavy");
  Weight lp = Weight::custom(
      [](const Point& q) { return 7.25 * (1.0 + 0.5 * std::cos(q.c0)); },
      "wavy-scaled");
  SchurMargins a = schur_margins(g.K, p);
  SchurMargins b = schur_margins(g.K, lp);
  CHECK(a.row == doctest::Approx(b.row).epsilon(1e-12));
  CHECK(a.col == doctest::Approx(b.col).epsilon(1e-12));
}

TEST_CASE("tail profile: identity kernel vanishes, Gaussian matches erfc") {
  auto dom = std::make_shared<SampledDomain>(
      sample_grid(MetricMeasureSpace::euclidean2d(), 0.5, 3.0));
  auto tails_id =
      tail_profile(identity_kernel(dom), Weight::constant(), {0.5, 1.0, 2.0});
  for (const TailEntry& t : tails_id) {
    REQUIRE(t.available);
    CHECK(t.row_tail == 0.0);
    CHECK(t.col_tail == 0.0);
  }

  GaussianLine g = gaussian_line();
  auto tails = tail_profile(g.K, Weight::constant(), {1.0, 2.0, 3.0, 4.0});
  REQUIRE(tails.size() == 4);
  // tail(R) = 2 sqrt(pi) erfc(R/2)
  CHECK(tails[1].available);
  CHECK(tails[1].row_tail ==
        doctest::Approx(2.0 * std::sqrt(M_PI) * std::erfc(1.0)).epsilon(0.05));
  double prev = 1e300;
  for (const TailEntry& t : tails) {
    REQUIRE(t.available);
    CHECK(t.row_tail <= prev + 1e-15);
    prev = t.row_tail;
  }
}

TEST_CASE("tail profile: radius past the truncation is unavailable") {
  GaussianLine g = gaussian_line(0.25, 4.0);
  auto tails = tail_profile(g.K, Weight::constant(), {1.0, 9.0});
  CHECK(tails[0].available);
  CHECK_FALSE(tails[1].available);
}

TEST_CASE("rho: zero kernel, Gaussian oracle, monotone in eps") {
  auto dom = std::make_shared<SampledDomain>(
      sample_grid(MetricMeasureSpace::euclidean2d(), 0.5, 3.0));
  KernelMatrix Z;
  Z.domain = dom;
  Z.entries = Eigen::MatrixXd::Zero(dom->size(), dom->size());
  RhoResult rz = rho(Z, Weight::constant(), 0.1, 0.5);
  CHECK(rz.achieved);
  CHECK(rz.R_high == 0.0);

  GaussianLine g = gaussian_line();
  RhoResult r01 = rho(g.K, Weight::constant(), 0.1, 0.05);
  REQUIRE(r01.achieved);
  // erfc inversion: 2 sqrt(pi) erfc(R/2) = 0.1  =>  R ~ 3.11
  CHECK(r01.R_high >= 3.11 - 0.06);
  CHECK(r01.R_low <= 3.11 + 0.06);
  CHECK(r01.R_high - r01.R_low <= 0.05 + 1e-12);

  RhoResult r02 = rho(g.K, Weight::constant(), 0.2, 0.05);
  CHECK(r02.R_high <= r01.R_high + 1e-12);
}

TEST_CASE("rho: unreachable eps is marked unachieved") {
  GaussianLine g = gaussian_line(0.25, 3.0);
  RhoResult r = rho(g.K, Weight::constant(), 1e-9, 0.25);
  CHECK_FALSE(r.achieved);
  CHECK(std::isinf(r.R_high));
}

TEST_CASE("build_localization_report invariants") {
  GaussianLine g = gaussian_line(0.1, 8.0);
  LocalizationReport rep = build_localization_report(
      g.K, Weight::constant(), {1.0, 2.0, 3.0}, {0.5, 0.2, 0.1});
  CHECK(rep.margins.row == doctest::Approx(rep.margins.col).epsilon(1e-12));
  for (size_t i = 1; i < rep.tails.size(); ++i) {
    CHECK(rep.tails[i].row_tail <= rep.tails[i - 1].row_tail + 1e-15);
  }
  for (size_t i = 1; i < rep.rho_table.size(); ++i) {
    // eps decreasing down the table => rho nondecreasing
    CHECK(rep.rho_table[i].value.R_high >=
          rep.rho_table[i - 1].value.R_high - 1e-12);
  }
}

TEST_CASE("check_weak_localization verdicts") {
  // Orthonormal pair: localized.
  auto dom = std::make_shared<SampledDomain>(
      sample_grid(MetricMeasureSpace::euclidean2d(), 0.5, 3.0));
  LocalizationReport rep_id = build_localization_report(
      identity_kernel(dom), Weight::constant(), {1.0, 2.0}, {0.1});
  CHECK(check_weak_localization(rep_id).localized);

  // Gabor Gaussian kernel with default caps: localized.
  auto gdom = std::make_shared<SampledDomain>(
      sample_grid(MetricMeasureSpace::euclidean2d(), 0.25, 6.0));
  auto gf = gabor_gaussian_frame(gdom);
  LocalizationReport rep_g = build_localization_report(
      kernel_matrix(gf), Weight::constant(), {1.0, 2.0, 3.0, 4.0}, {0.1});
  CHECK(check_weak_localization(rep_g).localized);

  // All-ones kernel: margin grows with the domain, not localized.
  KernelMatrix ones;
  ones.domain = gdom;
  ones.entries = Eigen::MatrixXd::Ones(gdom->size(), gdom->size());
  LocalizationReport rep_1 = build_localization_report(
      ones, Weight::constant(), {1.0, 2.0, 3.0, 4.0}, {0.1});
  LocalizationVerdict v = check_weak_localization(rep_1);
  CHECK_FALSE(v.localized);
  CHECK_FALSE(v.reasons.empty());

  // And the margin indeed grows with the truncation radius.
  auto gdom_small = std::make_shared<SampledDomain>(
      sample_grid(MetricMeasureSpace::euclidean2d(), 0.25, 3.0));
  KernelMatrix ones_small;
  ones_small.domain = gdom_small;
  ones_small.entries =
      Eigen::MatrixXd::Ones(gdom_small->size(), gdom_small->size());
  SchurMargins m_small = schur_margins(ones_small, Weight::constant());
  SchurMargins m_large = schur_margins(ones, Weight::constant());
  CHECK(m_large.row > 2.0 * m_small.row);
}

TEST_CASE("composed kernels obey the product margin bound") {
  auto dom = std::make_shared<SampledDomain>(
      sample_grid(MetricMeasureSpace::euclidean2d(), 0.5, 4.0));
  auto gf = gabor_gaussian_frame(dom);
  KernelMatrix K = kernel_matrix(gf);
  KernelMatrix K2 = compose_kernels(K, K);
  Weight p = Weight::constant();
  SchurMargins m1 = schur_margins(K, p);
  SchurMargins m2 = schur_margins(K2, p);
  CHECK(m2.row <= m1.row * m1.row * (1.0 + 1e-10));
  CHECK(m2.col <= m1.col * m1.col * (1.0 + 1e-10));
}

TEST_CASE("pointwise localization: Haar fails, exact exponential passes") {
  // The violation needs pairs at large hyperbolic distance: scale ratios
  // where |<psi, psi'>| ~ e^{-d/2} beats C e^{-M d} only once d is past
  // (log C)/(M - 1/2).
  auto dom = std::make_shared<SampledDomain>(
      sample_grid(MetricMeasureSpace::affine_group(), 0.4, 3.6));
  auto frame = haar_wavelet_frame(dom);
  CHECK(pointwise_localization_check(frame, 0.6, 1.0) > 0.0);
  CHECK(pointwise_localization_check(frame, 1.0, 10.0) > 0.0);

  // A kernel constructed to satisfy the bound exactly.
  Eigen::MatrixXd dist = distance_matrix(*dom);
  Eigen::MatrixXd K = (-0.8 * dist.array()).exp().matrix() * 0.5;
  CHECK(pointwise_violation(K, dist, 0.8, 0.5) <= 1e-12);
  CHECK(pointwise_violation(K, dist, 0.8, 0.4) > 0.0);
}
