#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "wloc/geometry.hpp"

namespace wloc {

using Complex = std::complex<double>;

enum class FrameTag { GaborGaussian, HaarWavelet, BergmanKernel, OrthonormalTest };

std::string frame_tag_name(FrameTag t);

/// A frame family sampled on a finite quadrature domain.  Carries the
/// closed-form pairwise inner product and a finite-dimensional vector
/// realization of the atoms (column i of vectors() realizes node i).
class SampledFrame {
 public:
  using PairInnerFn = std::function<Complex(const Point&, const Point&)>;
  using RealizeFn = std::function<Eigen::VectorXcd(const Point&)>;

  SampledFrame(std::shared_ptr<const SampledDomain> domain, FrameTag tag,
               PairInnerFn pair_inner, Eigen::MatrixXcd vectors,
               RealizeFn realize = nullptr);

  const SampledDomain& domain() const { return *domain_; }
  std::shared_ptr<const SampledDomain> domain_ptr() const { return domain_; }
  FrameTag tag() const { return tag_; }

  Complex pair_inner(const Point& x, const Point& y) const {
    return pair_inner_(x, y);
  }
  Complex pair_inner(int i, int j) const {
    return pair_inner_(domain_->nodes[i], domain_->nodes[j]);
  }

  /// Realization matrix, realization_dim x n_nodes.
  const Eigen::MatrixXcd& vectors() const { return vectors_; }
  int realization_dim() const { return static_cast<int>(vectors_.rows()); }

  /// Realizes an arbitrary (off-grid) point; only some families support it.
  bool can_realize_off_grid() const { return static_cast<bool>(realize_); }
  Eigen::VectorXcd realize(const Point& p) const;

  /// Gram matrix G(i, j) = <f_j, f_i> from the closed form.  Computed once
  /// on first use.
  const Eigen::MatrixXcd& gram() const;

 private:
  std::shared_ptr<const SampledDomain> domain_;
  FrameTag tag_;
  PairInnerFn pair_inner_;
  Eigen::MatrixXcd vectors_;
  RealizeFn realize_;
  mutable std::shared_ptr<Eigen::MatrixXcd> gram_;
};

/// Options for the Gabor time-grid realization.
struct GaborParams {
  double time_step = 0.05;
  double time_margin = 4.0;  // extra half-width past the node truncation
};

/// Gaussian-window time-frequency frame over an Euclidean2D domain.
SampledFrame gabor_gaussian_frame(std::shared_ptr<const SampledDomain> domain,
                                  const GaborParams& params = {});

/// Continuous Haar wavelet frame over an AffineGroup domain.  The window is
/// scaled so that the admissibility integral over the full frequency line
/// equals one; atoms then have squared norm 1 / (2 log 2) and the sampled
/// frame is tight with bound 1/2.  The realization is an exact Gram-root
/// factorization (atoms at dyadic-like scales are far too spiky for a
/// shared time grid).
SampledFrame haar_wavelet_frame(std::shared_ptr<const SampledDomain> domain,
                                double rank_tol = 1e-12);

/// Normalized Bergman kernel frame over a BergmanDisc domain, realized in
/// the orthonormal monomial basis up to degree_cap.
SampledFrame bergman_disc_frame(std::shared_ptr<const SampledDomain> domain,
                                int degree_cap);

/// Diagnostic family: node i realizes to the i-th standard basis vector.
SampledFrame orthonormal_test_frame(std::shared_ptr<const SampledDomain> domain);

/// Squared norm of an atom of the admissibility-normalized Haar window,
/// i.e. 1 / (2 log 2).
double haar_atom_norm_squared();

/// Exact inner product of two continuous Haar wavelet atoms
/// psi_{a,b}(t) = s a^{-1/2} haar((t - b) / a) by piecewise integration.
double haar_pair_inner(double a1, double b1, double a2, double b2);

/// Discrete frame operator S = sum_x w_x f_x <., f_x> on the realization
/// space.
Eigen::MatrixXcd frame_operator(const SampledFrame& frame);

struct FrameBounds {
  double c = 0.0;
  double C = 0.0;
  int resolved_rank = 0;
};

/// Extreme eigenvalues of the discrete frame operator on its numerically
/// resolved span (eigenvalues above rank_cutoff_rel * max are kept).
FrameBounds frame_bounds(const SampledFrame& frame,
                         double rank_cutoff_rel = 1e-8);

/// Extreme eigenvalues of the frame operator compressed to the span of the
/// given (not necessarily orthonormal) generating columns.
FrameBounds frame_bounds_on_span(const SampledFrame& frame,
                                 const Eigen::MatrixXcd& generators,
                                 double rank_cutoff_rel = 1e-8);

/// Analysis coefficients ( <f, f_x> )_x.
Eigen::VectorXcd analysis(const SampledFrame& frame, const Eigen::VectorXcd& f);

/// Synthesis sum_x w_x a(x) f_x.
Eigen::VectorXcd synthesis(const SampledFrame& frame, const Eigen::VectorXcd& a);

/// Canonical dual frame, dual_vectors column i = S^+ f_i with a spectrally
/// regularized inverse.
struct DualFrame {
  std::shared_ptr<const SampledFrame> base;
  Eigen::MatrixXcd dual_vectors;
  FrameBounds bounds;
  std::string note;  // provenance of the inversion

  const SampledDomain& domain() const { return base->domain(); }
  int realization_dim() const { return base->realization_dim(); }
};

/// Throws if the resolved condition number c / C falls below
/// `condition_floor`.  The default floor coincides with the rank cutoff, so
/// by construction it only fires when a caller raises it: truncated frames
/// legitimately carry boundary eigenvalues throughout (cutoff, 1] * C.
DualFrame canonical_dual(std::shared_ptr<const SampledFrame> frame,
                         double rank_cutoff_rel = 1e-8,
                         double condition_floor = 1e-8);

/// Tikhonov-regularized approximate dual  f~_x = (S + alpha*C)^{-1} f_x.
/// Unlike the hard spectral cutoff, the smooth filter preserves the
/// off-diagonal decay of the dual Gram, at the price of shrinking
/// barely-resolved directions instead of discarding them.
DualFrame tikhonov_dual(std::shared_ptr<const SampledFrame> frame,
                        double alpha_rel = 1e-2);

}  // namespace wloc
