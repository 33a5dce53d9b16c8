#include "wloc/operators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wloc {

namespace {

Eigen::VectorXd domain_weights(const SampledDomain& d) {
  return Eigen::Map<const Eigen::VectorXd>(d.weights.data(), d.size());
}

Eigen::VectorXd base_radii(const SampledDomain& d) {
  Eigen::VectorXd r(d.size());
  for (int i = 0; i < d.size(); ++i) r(i) = d.radius_of(i);
  return r;
}

void require_shared_context(const LocalizedOperator& A,
                            const LocalizedOperator& B) {
  if (A.context != B.context) {
    throw std::invalid_argument("operators live over different frame contexts");
  }
}

}  // namespace

Symbol Symbol::one() {
  Symbol s;
  s.eval = [](const Point&) { return Complex(1.0, 0.0); };
  s.class_tag = Class::BoundedOnly;
  s.name = "one";
  return s;
}

Symbol Symbol::indicator_ball(double radius, std::string name) {
  Symbol s;
  s.eval = [radius](const Point& x) {
    const MetricMeasureSpace sp =
        x.space == Space::Euclidean2D  ? MetricMeasureSpace::euclidean2d()
        : x.space == Space::AffineGroup ? MetricMeasureSpace::affine_group()
                                        : MetricMeasureSpace::bergman_disc();
    return Complex(sp.distance(x, sp.basepoint()) <= radius ? 1.0 : 0.0, 0.0);
  };
  s.class_tag = Class::CompactSupport;
  s.name = name.empty() ? "ball(" + std::to_string(radius) + ")" : std::move(name);
  return s;
}

Symbol Symbol::real(std::function<double(const Point&)> f, std::string name,
                    Class tag) {
  Symbol s;
  s.eval = [f = std::move(f)](const Point& x) { return Complex(f(x), 0.0); };
  s.class_tag = tag;
  s.name = std::move(name);
  return s;
}

double Symbol::sup_on(const SampledDomain& domain) const {
  double sup = 0.0;
  for (const Point& x : domain.nodes) sup = std::max(sup, std::abs(eval(x)));
  return sup;
}

LocalizedOperator multiplier(std::shared_ptr<const DualFrame> dual,
                             const Symbol& u) {
  const SampledFrame& F = *dual->base;
  const SampledDomain& d = F.domain();
  Eigen::VectorXcd coef(d.size());
  for (int i = 0; i < d.size(); ++i) coef(i) = d.weights[i] * u(d.nodes[i]);
  LocalizedOperator T;
  T.action = F.vectors() * coef.asDiagonal() * dual->dual_vectors.adjoint();
  T.context = std::move(dual);
  T.provenance = "multiplier(" + u.name + ")";
  return T;
}

LocalizedOperator identity_operator(std::shared_ptr<const DualFrame> dual) {
  // Identity on the resolved span: the orthogonal projection S^+ S.  The
  // ambient realization space carries directions the frame never reaches
  // (truncation junk); no frame-built operator can act there.
  const SampledDomain& dom = dual->domain();
  Eigen::VectorXd w =
      Eigen::Map<const Eigen::VectorXd>(dom.weights.data(), dom.size());
  LocalizedOperator T;
  T.action = dual->dual_vectors * w.asDiagonal() *
             dual->base->vectors().adjoint();
  // Symmetrize: S^+ S is Hermitian up to roundoff.
  T.action = 0.5 * (T.action + T.action.adjoint()).eval();
  T.context = std::move(dual);
  T.provenance = "identity(resolved span)";
  return T;
}

LocalizedOperator from_matrix(std::shared_ptr<const DualFrame> dual,
                              Eigen::MatrixXcd action, std::string provenance) {
  if (action.rows() != dual->realization_dim() ||
      action.cols() != dual->realization_dim()) {
    throw std::invalid_argument("from_matrix: dimension mismatch");
  }
  LocalizedOperator T;
  T.action = std::move(action);
  T.context = std::move(dual);
  T.provenance = std::move(provenance);
  return T;
}

LocalizedOperator compose(const LocalizedOperator& A,
                          const LocalizedOperator& B) {
  require_shared_context(A, B);
  LocalizedOperator T;
  T.action = A.action * B.action;
  T.context = A.context;
  T.provenance = "(" + A.provenance + ")o(" + B.provenance + ")";
  return T;
}

LocalizedOperator adjoint(const LocalizedOperator& T) {
  LocalizedOperator S;
  S.action = T.action.adjoint();
  S.context = T.context;
  S.provenance = "adj(" + T.provenance + ")";
  return S;
}

KernelMatrix frame_kernel(const LocalizedOperator& T) {
  const SampledFrame& F = T.frame();
  KernelMatrix K;
  K.domain = F.domain_ptr();
  // entries(x, y) = |<T f~_x, f_y>| = |(V^H T V~)(y, x)|
  K.entries = (F.vectors().adjoint() * T.action * T.context->dual_vectors)
                  .cwiseAbs()
                  .transpose();
  K.provenance = "frame_kernel(" + T.provenance + ")";
  return K;
}

namespace {

// T_j = V~_F W_F (V_F^H T V~_G) W_G V_G^H over cell F_j, expansion G_j.
Eigen::MatrixXcd block_action(const LocalizedOperator& T, const Cover& cover,
                              int j) {
  const SampledFrame& F = T.frame();
  const Eigen::MatrixXcd& V = F.vectors();
  const Eigen::MatrixXcd& Vd = T.context->dual_vectors;
  const auto& cell = cover.cells.at(j);
  const auto& exp = cover.expansions.at(j);
  const SampledDomain& d = F.domain();

  Eigen::MatrixXcd VF(V.rows(), cell.size()), VdF(V.rows(), cell.size());
  Eigen::VectorXd wF(cell.size());
  for (std::size_t k = 0; k < cell.size(); ++k) {
    VF.col(k) = V.col(cell[k]);
    VdF.col(k) = Vd.col(cell[k]);
    wF(k) = d.weights[cell[k]];
  }
  Eigen::MatrixXcd VG(V.rows(), exp.size()), VdG(V.rows(), exp.size());
  Eigen::VectorXd wG(exp.size());
  for (std::size_t k = 0; k < exp.size(); ++k) {
    VG.col(k) = V.col(exp[k]);
    VdG.col(k) = Vd.col(exp[k]);
    wG(k) = d.weights[exp[k]];
  }
  const Eigen::MatrixXcd M = VF.adjoint() * (T.action * VdG);
  return (VdF * wF.asDiagonal()) * M * (wG.asDiagonal() * VG.adjoint());
}

}  // namespace

LocalizedOperator block_component(const LocalizedOperator& T,
                                  const Cover& cover, int j) {
  if (j < 0 || j >= static_cast<int>(cover.cells.size())) {
    throw std::out_of_range("block_component: invalid cell index");
  }
  LocalizedOperator B;
  B.action = block_action(T, cover, j);
  B.context = T.context;
  B.provenance = "block(" + std::to_string(j) + "," + T.provenance + ")";
  return B;
}

LocalizedOperator approximant(const LocalizedOperator& T, const Cover& cover) {
  LocalizedOperator A;
  A.action = Eigen::MatrixXcd::Zero(T.dim(), T.dim());
  for (int j = 0; j < static_cast<int>(cover.cells.size()); ++j) {
    A.action += block_action(T, cover, j);
  }
  A.context = T.context;
  A.provenance = "approximant(" + T.provenance + ")";
  return A;
}

double operator_norm(const Eigen::MatrixXcd& A, int dense_cutoff) {
  if (A.rows() == 0 || A.cols() == 0) return 0.0;
  if (std::max(A.rows(), A.cols()) <= dense_cutoff) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(A.adjoint() * A,
                                                       Eigen::EigenvaluesOnly);
    return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
  }
  // Power iteration on A^H A with a deterministic start.
  Eigen::VectorXcd v = Eigen::VectorXcd::Ones(A.cols());
  for (int i = 0; i < v.size(); ++i) v(i) += Complex(0.0, 1.0 / (i + 2.0));
  v.normalize();
  double sigma = 0.0;
  for (int it = 0; it < 20000; ++it) {
    Eigen::VectorXcd w = A.adjoint() * (A * v);
    const double lam = w.norm();
    if (lam == 0.0) return 0.0;
    v = w / lam;
    const double next = std::sqrt(lam);
    if (std::abs(next - sigma) <= 1e-10 * std::max(1.0, next)) return next;
    sigma = next;
  }
  return sigma;
}

double operator_norm(const LocalizedOperator& T, int dense_cutoff) {
  return operator_norm(T.action, dense_cutoff);
}

namespace {

struct BoundFactors {
  double column_sup_all = 0.0;
  double scale = 0.0;  // sqrt(N * D_{Kr}) / (1 - eps)
  double ball_mass = 0.0;
};

// column factor at node y: ( sum_{d(x,y) <= (K+1) r} w_x |<T f~_x, f_y>|^2 )^{1/2}
Eigen::VectorXd column_factors(const LocalizedOperator& T, const Cover& cover) {
  const SampledFrame& F = T.frame();
  const SampledDomain& d = F.domain();
  const int n = d.size();
  // M(y, x) = <T f~_x, f_y>
  const Eigen::MatrixXcd M =
      F.vectors().adjoint() * (T.action * T.context->dual_vectors);
  const Eigen::VectorXd w = domain_weights(d);
  const double reach = (cover.diameter_K + 1.0) * cover.r;
  Eigen::VectorXd out(n);
  for (int y = 0; y < n; ++y) {
    double acc = 0.0;
    for (int x = 0; x < n; ++x) {
      if (d.distance(x, y) > reach) continue;
      acc += w(x) * std::norm(M(y, x));
    }
    out(y) = std::sqrt(acc);
  }
  return out;
}

}  // namespace

NormBoundResult norm_bound(const LocalizedOperator& T, const Cover& cover,
                           double eps,
                           const std::optional<RhoResult>& rho_check) {
  if (!(eps > 0.0 && eps < 1.0)) {
    throw std::invalid_argument("norm_bound: eps must lie in (0, 1)");
  }
  const SampledFrame& F = T.frame();
  const SampledDomain& d = F.domain();
  NormBoundResult r;
  r.overlap_N = cover.overlap_N;
  r.ball_mass = ball_measure_sup(d, cover.diameter_K * cover.r);
  const double scale =
      std::sqrt(static_cast<double>(cover.overlap_N) * r.ball_mass) /
      (1.0 - eps);
  r.column_factor = column_factors(T, cover).maxCoeff();
  r.bound = scale * r.column_factor;
  // Corollary-style variant: sup_x ||T^* f_x|| over unit-normalized atoms.
  const Eigen::MatrixXcd TaV = T.action.adjoint() * F.vectors();
  r.adjoint_factor = TaV.colwise().norm().maxCoeff();
  r.adjoint_bound = scale * r.adjoint_factor;
  if (rho_check) {
    r.radius_warning = !rho_check->achieved || cover.r < rho_check->R_high;
  }
  return r;
}

EssentialNormResult essential_norm_bound(const LocalizedOperator& T,
                                         const Cover& cover, double eps,
                                         double boundary_band) {
  if (!(eps > 0.0 && eps < 1.0)) {
    throw std::invalid_argument("essential_norm_bound: eps must lie in (0, 1)");
  }
  const SampledDomain& d = T.domain();
  if (boundary_band <= 0.0 || boundary_band >= d.truncation_radius) {
    throw std::invalid_argument("essential_norm_bound: invalid boundary band");
  }
  EssentialNormResult res;
  res.band_inner = d.truncation_radius - boundary_band;
  const Eigen::VectorXd radii = base_radii(d);
  const Eigen::VectorXd col = column_factors(T, cover);
  double sup = 0.0;
  for (int y = 0; y < d.size(); ++y) {
    if (radii(y) < res.band_inner) continue;
    ++res.band_size;
    sup = std::max(sup, col(y));
  }
  if (res.band_size == 0) {
    throw std::invalid_argument("essential_norm_bound: empty boundary band");
  }
  const double ball = ball_measure_sup(d, cover.diameter_K * cover.r);
  res.column_factor = sup;
  res.bound = std::sqrt(static_cast<double>(cover.overlap_N) * ball) /
              (1.0 - eps) * sup;
  return res;
}

double compactness_margin(const LocalizedOperator& T, double boundary_band) {
  const SampledFrame& F = T.frame();
  const SampledDomain& d = F.domain();
  const double inner = d.truncation_radius - boundary_band;
  double sup = 0.0;
  for (int x = 0; x < d.size(); ++x) {
    if (d.radius_of(x) < inner) continue;
    sup = std::max(sup, (T.action.adjoint() * F.vectors().col(x)).norm());
    sup = std::max(sup, (T.action * F.vectors().col(x)).norm());
  }
  return sup;
}

Eigen::VectorXcd berezin(const LocalizedOperator& T) {
  const SampledFrame& F = T.frame();
  const int n = F.domain().size();
  Eigen::VectorXcd b(n);
  // B(T)(x) = <T f~_x, f_x> = f_x^H T f~_x
  const Eigen::MatrixXcd TVd = T.action * T.context->dual_vectors;
  for (int i = 0; i < n; ++i) b(i) = F.vectors().col(i).dot(TVd.col(i));
  return b;
}

BerezinVerdict berezin_compactness_test(const LocalizedOperator& T,
                                        const LocalizationVerdict& verdict,
                                        double boundary_band,
                                        double threshold) {
  if (!verdict.localized) {
    std::string why = "berezin_compactness_test: operator kernel failed the "
                      "weak-localization check, so boundary Berezin decay is "
                      "inconclusive";
    for (const auto& r : verdict.reasons) why += "; " + r;
    throw std::invalid_argument(why);
  }
  const SampledDomain& d = T.domain();
  const double inner = d.truncation_radius - boundary_band;
  const Eigen::VectorXcd b = berezin(T);
  BerezinVerdict v;
  v.threshold = threshold;
  for (int i = 0; i < d.size(); ++i) {
    const double m = std::abs(b(i));
    if (d.radius_of(i) >= inner) {
      v.boundary_sup = std::max(v.boundary_sup, m);
    } else {
      v.interior_sup = std::max(v.interior_sup, m);
    }
  }
  v.margin = threshold - v.boundary_sup;
  v.compact = v.boundary_sup <= threshold;
  v.heuristic = T.frame().tag() == FrameTag::HaarWavelet;
  return v;
}

LocalizedOperator translation_operator(std::shared_ptr<const DualFrame> dual,
                                       const Point& y, double tol) {
  const SampledFrame& F = *dual->base;
  const SampledDomain& d = F.domain();
  if (y.space != d.space.tag()) {
    throw std::invalid_argument("translation_operator: space mismatch");
  }
  const int n = d.size();
  Eigen::MatrixXcd U =
      Eigen::MatrixXcd::Zero(F.realization_dim(), F.realization_dim());
  int dropped = 0;
  for (int i = 0; i < n; ++i) {
    const Point img = d.space.group_product(y, d.nodes[i]);
    if (d.space.distance(img, d.space.basepoint()) >
        d.truncation_radius + tol) {
      ++dropped;
      continue;
    }
    Eigen::VectorXcd target;
    if (F.can_realize_off_grid()) {
      target = F.realize(img);
    } else {
      int match = -1;
      for (int j = 0; j < n; ++j) {
        if (std::abs(d.nodes[j].c0 - img.c0) <= tol &&
            std::abs(d.nodes[j].c1 - img.c1) <= tol) {
          match = j;
          break;
        }
      }
      if (match < 0) {
        ++dropped;
        continue;
      }
      target = F.vectors().col(match);
    }
    U += d.weights[i] * target * dual->dual_vectors.col(i).adjoint();
  }
  LocalizedOperator T;
  T.action = std::move(U);
  T.context = std::move(dual);
  T.provenance = "translation";
  if (dropped > 0) {
    T.provenance += "(restricted, dropped " + std::to_string(dropped) + ")";
  }
  return T;
}

Eigen::VectorXd singular_value_profile(const Eigen::MatrixXcd& A, int count) {
  Eigen::VectorXd sv;
  if (std::max(A.rows(), A.cols()) <= 600) {
    // Two-sided Jacobi keeps tiny singular values accurate (rank checks).
    sv = Eigen::JacobiSVD<Eigen::MatrixXcd>(A).singularValues();
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(A.adjoint() * A,
                                                       Eigen::EigenvaluesOnly);
    sv = es.eigenvalues().cwiseMax(0.0).cwiseSqrt().reverse();
  }
  if (count >= 0 && count < sv.size()) sv.conservativeResize(count);
  return sv;
}

Eigen::VectorXd singular_value_profile(const LocalizedOperator& T, int count) {
  return singular_value_profile(T.action, count);
}

}  // namespace wloc
