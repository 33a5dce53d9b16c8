#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "wloc/frames.hpp"
#include "wloc/geometry.hpp"

namespace wloc {

/// A positive weight on the index space.
struct Weight {
  enum class Tag { Constant, PowerAffine, Custom };

  Tag tag = Tag::Constant;
  double delta = 0.0;  // PowerAffine exponent parameter
  std::function<double(const Point&)> eval;
  std::string name = "const";

  static Weight constant();
  /// a^{1/2 - delta} on the affine group.
  static Weight power_affine(double delta);
  /// (1 - |z|^2)^s on the disc; needed for the Bergman kernel family.
  static Weight bergman_power(double s);
  static Weight custom(std::function<double(const Point&)> f, std::string name);

  double operator()(const Point& p) const { return eval(p); }
};

/// Nonnegative kernel |<f_x, g_y>| sampled over the node set; rows index x,
/// columns index y.  Keeps the shared domain and precomputed distances.
struct KernelMatrix {
  std::shared_ptr<const SampledDomain> domain;
  Eigen::MatrixXd entries;
  std::string provenance;

  /// Pairwise node distances, computed lazily by callers that need them.
  int size() const { return static_cast<int>(entries.rows()); }
};

/// Entrywise |<f_x, g_y>| for two families over the same domain, through
/// their realizations.
KernelMatrix kernel_matrix(const SampledFrame& F, const SampledFrame& G);

/// Same-family kernel from the closed-form Gram.
KernelMatrix kernel_matrix(const SampledFrame& F);

/// Haar-wavelet kernel straight from the exact piecewise inner products,
/// skipping the (expensive) realization of the frame itself.
KernelMatrix haar_kernel_matrix(std::shared_ptr<const SampledDomain> domain);

/// Weighted composition  K(y, z) = sum_x w_x K1(y, x) K2(x, z).
KernelMatrix compose_kernels(const KernelMatrix& K1, const KernelMatrix& K2);

struct SchurMargins {
  double row = 0.0;  // sup_x (1/p(x)) sum_y w_y K(x,y) p(y)
  double col = 0.0;  // transposed
};

SchurMargins schur_margins(const KernelMatrix& K, const Weight& p);

struct TailEntry {
  double R = 0.0;
  double row_tail = 0.0;
  double col_tail = 0.0;
  double interior_fraction = 0.0;
  bool available = false;  // false when the interior is empty at this R
};

/// For each radius R, the sup over interior nodes (at distance >= R from
/// the truncation boundary) of the weighted kernel mass outside D(x, R).
std::vector<TailEntry> tail_profile(const KernelMatrix& K, const Weight& p,
                                    const std::vector<double>& radii,
                                    const Eigen::MatrixXd& dist);
std::vector<TailEntry> tail_profile(const KernelMatrix& K, const Weight& p,
                                    const std::vector<double>& radii);

struct RhoResult {
  double R_low = 0.0;
  double R_high = 0.0;
  bool achieved = false;  // tails fell below eps within the truncation
};

/// Smallest grid radius at which both tail ratios fall below eps, bracketed
/// to one radius step.  Radii default to multiples of `step` up to the
/// truncation radius.
RhoResult rho(const KernelMatrix& K, const Weight& p, double eps, double step,
              const Eigen::MatrixXd& dist);
RhoResult rho(const KernelMatrix& K, const Weight& p, double eps, double step);

struct RhoTableEntry {
  double eps = 0.0;
  RhoResult value;
};

struct LocalizationReport {
  std::string weight_name;
  SchurMargins margins;
  std::vector<TailEntry> tails;
  std::vector<RhoTableEntry> rho_table;
};

LocalizationReport build_localization_report(const KernelMatrix& K,
                                             const Weight& p,
                                             const std::vector<double>& radii,
                                             const std::vector<double>& eps_list);

struct LocalizationVerdict {
  bool localized = false;
  std::vector<std::string> reasons;
};

/// Margins below margin_cap and the largest available tail below tail_floor.
LocalizationVerdict check_weak_localization(const LocalizationReport& report,
                                            double margin_cap = 10.0,
                                            double tail_floor = 0.05);

/// Max over sampled pairs of |<f_x, f_y>| - C exp(-M d(x, y)).  Positive
/// values witness failure of a pointwise exponential off-diagonal bound.
double pointwise_localization_check(const SampledFrame& F, double M, double C);

/// Same check for a raw kernel/distance pair.
double pointwise_violation(const Eigen::MatrixXd& K, const Eigen::MatrixXd& dist,
                           double M, double C);

}  // namespace wloc
