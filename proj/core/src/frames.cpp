#include "wloc/frames.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace wloc {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kLog2 = 0.69314718055994530942;

void require_space(const SampledDomain& domain, Space expected,
                   const char* what) {
  if (domain.space.tag() != expected) {
    throw std::invalid_argument(std::string(what) + " requires a " +
                                space_name(expected) + " domain");
  }
}

}  // namespace

std::string frame_tag_name(FrameTag t) {
  switch (t) {
    case FrameTag::GaborGaussian: return "gabor_gaussian";
    case FrameTag::HaarWavelet: return "haar_wavelet";
    case FrameTag::BergmanKernel: return "bergman_kernel";
    case FrameTag::OrthonormalTest: return "orthonormal_test";
  }
  return "unknown";
}

SampledFrame::SampledFrame(std::shared_ptr<const SampledDomain> domain,
                           FrameTag tag, PairInnerFn pair_inner,
                           Eigen::MatrixXcd vectors, RealizeFn realize)
    : domain_(std::move(domain)),
      tag_(tag),
      pair_inner_(std::move(pair_inner)),
      vectors_(std::move(vectors)),
      realize_(std::move(realize)) {
  if (vectors_.cols() != domain_->size()) {
    throw std::invalid_argument("realization has wrong number of columns");
  }
}

Eigen::VectorXcd SampledFrame::realize(const Point& p) const {
  if (!realize_) {
    throw std::logic_error("frame family has no off-grid realization");
  }
  return realize_(p);
}

const Eigen::MatrixXcd& SampledFrame::gram() const {
  if (!gram_) {
    const int n = domain_->size();
    auto g = std::make_shared<Eigen::MatrixXcd>(n, n);
    for (int i = 0; i < n; ++i) {
      (*g)(i, i) = pair_inner(i, i);
      for (int j = i + 1; j < n; ++j) {
        const Complex v = pair_inner(j, i);  // <f_j, f_i>
        (*g)(i, j) = v;
        (*g)(j, i) = std::conj(v);
      }
    }
    gram_ = std::move(g);
  }
  return *gram_;
}

SampledFrame gabor_gaussian_frame(std::shared_ptr<const SampledDomain> domain,
                                  const GaborParams& params) {
  require_space(*domain, Space::Euclidean2D, "gabor_gaussian_frame");
  const double dt = params.time_step;
  const double T = domain->truncation_radius + params.time_margin;
  const int half = static_cast<int>(std::ceil(T / dt));
  const int dim = 2 * half + 1;
  const double sqdt = std::sqrt(dt);
  const double amp = std::pow(kPi, -0.25);

  auto realize = [dt, half, dim, sqdt, amp](const Point& p) {
    require_valid(p);
    Eigen::VectorXcd v(dim);
    for (int k = 0; k < dim; ++k) {
      const double t = (k - half) * dt;
      const double g = amp * std::exp(-0.5 * (t - p.c0) * (t - p.c0));
      v(k) = sqdt * g * std::exp(Complex(0.0, 2.0 * kPi * p.c1 * t));
    }
    return v;
  };

  auto pair_inner = [](const Point& x, const Point& y) {
    require_valid(x);
    require_valid(y);
    const double dxt = x.c0 - y.c0;
    const double dxi = x.c1 - y.c1;
    const double mid = 0.5 * (x.c0 + y.c0);
    const double mag = std::exp(-0.25 * dxt * dxt - kPi * kPi * dxi * dxi);
    return mag * std::exp(Complex(0.0, 2.0 * kPi * dxi * mid));
  };

  Eigen::MatrixXcd V(dim, domain->size());
  for (int i = 0; i < domain->size(); ++i) V.col(i) = realize(domain->nodes[i]);
  return SampledFrame(std::move(domain), FrameTag::GaborGaussian,
                      pair_inner, std::move(V), realize);
}

double haar_atom_norm_squared() { return 1.0 / (2.0 * kLog2); }

double haar_pair_inner(double a1, double b1, double a2, double b2) {
  // Atom value at t: s * a^{-1/2} * sign, sign = +1 on [b, b + a/2),
  // -1 on [b + a/2, b + a), 0 elsewhere.
  const double s2 = haar_atom_norm_squared();  // product of the two scales
  const double lo = std::max(b1, b2);
  const double hi = std::min(b1 + a1, b2 + a2);
  if (hi <= lo) return 0.0;
  std::array<double, 6> cuts = {lo, hi, b1 + 0.5 * a1, b2 + 0.5 * a2,
                                b1 + a1, b2 + a2};
  std::sort(cuts.begin(), cuts.end());
  auto sign_at = [](double t, double a, double b) -> double {
    const double u = (t - b) / a;
    if (u < 0.0 || u >= 1.0) return 0.0;
    return u < 0.5 ? 1.0 : -1.0;
  };
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double l = std::max(cuts[k], lo);
    const double r = std::min(cuts[k + 1], hi);
    if (r <= l) continue;
    const double mid = 0.5 * (l + r);
    acc += (r - l) * sign_at(mid, a1, b1) * sign_at(mid, a2, b2);
  }
  return s2 * acc / std::sqrt(a1 * a2);
}

SampledFrame haar_wavelet_frame(std::shared_ptr<const SampledDomain> domain,
                                double rank_tol) {
  require_space(*domain, Space::AffineGroup, "haar_wavelet_frame");
  const int n = domain->size();
  Eigen::MatrixXd gram(n, n);
  for (int i = 0; i < n; ++i) {
    const Point& x = domain->nodes[i];
    gram(i, i) = haar_pair_inner(x.c0, x.c1, x.c0, x.c1);
    for (int j = i + 1; j < n; ++j) {
      const Point& y = domain->nodes[j];
      const double g = haar_pair_inner(x.c0, x.c1, y.c0, y.c1);
      gram(i, j) = g;
      gram(j, i) = g;
    }
  }

  // Exact realization through a Gram root: columns of sqrt(L) U^T reproduce
  // the pairwise inner products up to the dropped eigenvalue mass.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
  const Eigen::VectorXd& lam = eig.eigenvalues();
  const double lmax = lam.maxCoeff();
  int first = 0;
  while (first < n && lam(first) < rank_tol * lmax) ++first;
  const int rank = n - first;
  Eigen::MatrixXd root = lam.tail(rank).cwiseMax(0.0).cwiseSqrt().asDiagonal() *
                         eig.eigenvectors().rightCols(rank).transpose();

  auto pair_inner = [](const Point& x, const Point& y) {
    require_valid(x);
    require_valid(y);
    return Complex(haar_pair_inner(x.c0, x.c1, y.c0, y.c1), 0.0);
  };
  return SampledFrame(std::move(domain), FrameTag::HaarWavelet, pair_inner,
                      root.cast<Complex>());
}

SampledFrame bergman_disc_frame(std::shared_ptr<const SampledDomain> domain,
                                int degree_cap) {
  require_space(*domain, Space::BergmanDisc, "bergman_disc_frame");
  if (degree_cap < 1) throw std::invalid_argument("degree_cap must be >= 1");
  const int dim = degree_cap + 1;

  auto realize = [dim](const Point& p) {
    require_valid(p);
    const Complex z(p.c0, p.c1);
    const double scale = 1.0 - std::norm(z);
    Eigen::VectorXcd v(dim);
    Complex zbar_pow(1.0, 0.0);
    for (int k = 0; k < dim; ++k) {
      v(k) = scale * std::sqrt(static_cast<double>(k + 1)) * zbar_pow;
      zbar_pow *= std::conj(z);
    }
    return v;
  };

  auto pair_inner = [](const Point& x, const Point& y) {
    require_valid(x);
    require_valid(y);
    const Complex z(x.c0, x.c1), w(y.c0, y.c1);
    const Complex den = 1.0 - w * std::conj(z);
    return (1.0 - std::norm(z)) * (1.0 - std::norm(w)) / (den * den);
  };

  Eigen::MatrixXcd V(dim, domain->size());
  for (int i = 0; i < domain->size(); ++i) V.col(i) = realize(domain->nodes[i]);

  // The monomial tail must be resolved at the outermost nodes, otherwise the
  // realization cannot reproduce the closed-form kernel.
  double rho_max = 0.0;
  for (const Point& p : domain->nodes) {
    rho_max = std::max(rho_max, std::hypot(p.c0, p.c1));
  }
  // Squared norm of the dropped tail of a unit-norm atom:
  // (1-x)^2 sum_{n>N} (n+1) x^n = (N+2) x^{N+1} (1-x) + x^{N+2}.
  const double x = rho_max * rho_max;
  const double tail = (degree_cap + 2) * std::pow(x, degree_cap + 1) *
                          (1.0 - x) +
                      std::pow(x, degree_cap + 2);
  if (tail > 1e-6) {
    throw std::invalid_argument(
        "degree_cap too small for the requested truncation radius "
        "(kernel tail " + std::to_string(tail) + ")");
  }
  return SampledFrame(std::move(domain), FrameTag::BergmanKernel, pair_inner,
                      std::move(V), realize);
}

SampledFrame orthonormal_test_frame(std::shared_ptr<const SampledDomain> domain) {
  const int n = domain->size();
  const auto nodes = domain->nodes;
  auto pair_inner = [nodes](const Point& x, const Point& y) {
    const bool same = x.c0 == y.c0 && x.c1 == y.c1 && x.space == y.space;
    return Complex(same ? 1.0 : 0.0, 0.0);
  };
  return SampledFrame(std::move(domain), FrameTag::OrthonormalTest, pair_inner,
                      Eigen::MatrixXcd::Identity(n, n));
}

Eigen::MatrixXcd frame_operator(const SampledFrame& frame) {
  const Eigen::MatrixXcd& V = frame.vectors();
  Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(
      frame.domain().weights.data(), frame.domain().size());
  return V * w.asDiagonal() * V.adjoint();
}

namespace {

FrameBounds bounds_from_eigenvalues(const Eigen::VectorXd& lam,
                                    double rank_cutoff_rel) {
  const double lmax = lam.size() ? lam.maxCoeff() : 0.0;
  if (lmax <= 0.0) throw std::runtime_error("degenerate frame (C = 0)");
  const double cutoff = rank_cutoff_rel * lmax;
  FrameBounds b;
  b.C = lmax;
  b.c = lmax;
  for (int i = 0; i < lam.size(); ++i) {
    if (lam(i) >= cutoff) {
      b.c = std::min(b.c, lam(i));
      ++b.resolved_rank;
    }
  }
  return b;
}

}  // namespace

FrameBounds frame_bounds(const SampledFrame& frame, double rank_cutoff_rel) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(frame_operator(frame));
  return bounds_from_eigenvalues(eig.eigenvalues(), rank_cutoff_rel);
}

FrameBounds frame_bounds_on_span(const SampledFrame& frame,
                                 const Eigen::MatrixXcd& generators,
                                 double rank_cutoff_rel) {
  // Orthonormal basis of the span, discarding numerically dependent
  // generators.
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(generators, Eigen::ComputeThinU);
  const double smax = svd.singularValues().maxCoeff();
  int rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i) {
    if (svd.singularValues()(i) > 1e-10 * smax) ++rank;
  }
  Eigen::MatrixXcd B = svd.matrixU().leftCols(rank);
  Eigen::MatrixXcd S = frame_operator(frame);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(B.adjoint() * S * B);
  return bounds_from_eigenvalues(eig.eigenvalues(), rank_cutoff_rel);
}

Eigen::VectorXcd analysis(const SampledFrame& frame, const Eigen::VectorXcd& f) {
  if (f.size() != frame.realization_dim()) {
    throw std::invalid_argument("analysis: dimension mismatch");
  }
  return frame.vectors().adjoint() * f;
}

Eigen::VectorXcd synthesis(const SampledFrame& frame, const Eigen::VectorXcd& a) {
  if (a.size() != frame.domain().size()) {
    throw std::invalid_argument("synthesis: dimension mismatch");
  }
  Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(
      frame.domain().weights.data(), frame.domain().size());
  return frame.vectors() * (w.asDiagonal() * a);
}

DualFrame canonical_dual(std::shared_ptr<const SampledFrame> frame,
                         double rank_cutoff_rel, double condition_floor) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(frame_operator(*frame));
  const Eigen::VectorXd& lam = eig.eigenvalues();
  FrameBounds bounds = bounds_from_eigenvalues(lam, rank_cutoff_rel);
  if (bounds.c / bounds.C < condition_floor) {
    throw std::runtime_error(
        "ill-conditioned frame operator: resolved bounds (" +
        std::to_string(bounds.c) + ", " + std::to_string(bounds.C) + ")");
  }
  const double cutoff = rank_cutoff_rel * bounds.C;
  Eigen::VectorXd inv(lam.size());
  for (int i = 0; i < lam.size(); ++i) {
    inv(i) = lam(i) >= cutoff ? 1.0 / lam(i) : 0.0;
  }
  Eigen::MatrixXcd pinv =
      eig.eigenvectors() * inv.asDiagonal() * eig.eigenvectors().adjoint();
  DualFrame dual;
  dual.base = std::move(frame);
  dual.dual_vectors = pinv * dual.base->vectors();
  dual.bounds = bounds;
  dual.note = "spectral pseudo-inverse, relative cutoff " +
              std::to_string(rank_cutoff_rel);
  return dual;
}

DualFrame tikhonov_dual(std::shared_ptr<const SampledFrame> frame,
                        double alpha_rel) {
  if (!(alpha_rel > 0.0)) {
    throw std::invalid_argument("tikhonov_dual: alpha must be > 0");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(frame_operator(*frame));
  const Eigen::VectorXd& lam = eig.eigenvalues();
  FrameBounds bounds = bounds_from_eigenvalues(lam, alpha_rel);
  const double alpha = alpha_rel * bounds.C;
  const Eigen::VectorXd inv = (lam.array() + alpha).inverse();
  Eigen::MatrixXcd reg =
      eig.eigenvectors() * inv.asDiagonal() * eig.eigenvectors().adjoint();
  DualFrame dual;
  dual.base = std::move(frame);
  dual.dual_vectors = reg * dual.base->vectors();
  dual.bounds = bounds;
  dual.note =
      "tikhonov inverse, relative ridge " + std::to_string(alpha_rel);
  return dual;
}

}  // namespace wloc
