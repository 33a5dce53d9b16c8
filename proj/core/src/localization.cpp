#include "wloc/localization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace wloc {

Weight Weight::constant() {
  Weight w;
  w.tag = Tag::Constant;
  w.eval = [](const Point&) { return 1.0; };
  w.name = "const";
  return w;
}

Weight Weight::power_affine(double delta) {
  Weight w;
  w.tag = Tag::PowerAffine;
  w.delta = delta;
  w.eval = [delta](const Point& p) {
    if (p.space != Space::AffineGroup) {
      throw std::invalid_argument("power_affine weight needs affine points");
    }
    return std::pow(p.c0, 0.5 - delta);
  };
  w.name = "a^(1/2-" + std::to_string(delta) + ")";
  return w;
}

Weight Weight::bergman_power(double s) {
  Weight w;
  w.tag = Tag::Custom;
  w.eval = [s](const Point& p) {
    if (p.space != Space::BergmanDisc) {
      throw std::invalid_argument("bergman_power weight needs disc points");
    }
    return std::pow(1.0 - (p.c0 * p.c0 + p.c1 * p.c1), s);
  };
  w.name = "(1-|z|^2)^" + std::to_string(s);
  return w;
}

Weight Weight::custom(std::function<double(const Point&)> f, std::string name) {
  Weight w;
  w.tag = Tag::Custom;
  w.eval = std::move(f);
  w.name = std::move(name);
  return w;
}

KernelMatrix kernel_matrix(const SampledFrame& F, const SampledFrame& G) {
  if (F.domain_ptr() != G.domain_ptr()) {
    throw std::invalid_argument("kernel_matrix: families share no domain");
  }
  KernelMatrix K;
  K.domain = F.domain_ptr();
  // |<f_x, g_y>| = |g_y^H f_x|
  K.entries = (G.vectors().adjoint() * F.vectors()).cwiseAbs().transpose();
  K.provenance = frame_tag_name(F.tag()) + "/" + frame_tag_name(G.tag());
  return K;
}

KernelMatrix kernel_matrix(const SampledFrame& F) {
  KernelMatrix K;
  K.domain = F.domain_ptr();
  K.entries = F.gram().cwiseAbs();
  K.provenance = frame_tag_name(F.tag());
  return K;
}

KernelMatrix haar_kernel_matrix(std::shared_ptr<const SampledDomain> domain) {
  if (domain->space.tag() != Space::AffineGroup) {
    throw std::invalid_argument("haar_kernel_matrix needs an affine domain");
  }
  const int n = domain->size();
  KernelMatrix K;
  K.entries.resize(n, n);
  for (int i = 0; i < n; ++i) {
    const Point& x = domain->nodes[i];
    for (int j = i; j < n; ++j) {
      const Point& y = domain->nodes[j];
      const double v = std::abs(haar_pair_inner(x.c0, x.c1, y.c0, y.c1));
      K.entries(i, j) = v;
      K.entries(j, i) = v;
    }
  }
  K.domain = std::move(domain);
  K.provenance = frame_tag_name(FrameTag::HaarWavelet);
  return K;
}

KernelMatrix compose_kernels(const KernelMatrix& K1, const KernelMatrix& K2) {
  if (K1.domain != K2.domain) {
    throw std::invalid_argument("compose_kernels: domain mismatch");
  }
  const Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(
      K1.domain->weights.data(), K1.domain->size());
  KernelMatrix K;
  K.domain = K1.domain;
  K.entries = K1.entries * w.asDiagonal() * K2.entries;
  K.provenance = "(" + K1.provenance + ")*(" + K2.provenance + ")";
  return K;
}

namespace {

Eigen::VectorXd weight_values(const KernelMatrix& K, const Weight& p) {
  const int n = K.size();
  Eigen::VectorXd pv(n);
  for (int i = 0; i < n; ++i) {
    pv(i) = p(K.domain->nodes[i]);
    if (!(pv(i) > 0.0)) throw std::domain_error("weight must be positive");
  }
  return pv;
}

}  // namespace

SchurMargins schur_margins(const KernelMatrix& K, const Weight& p) {
  const Eigen::VectorXd pv = weight_values(K, p);
  const Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(
      K.domain->weights.data(), K.domain->size());
  SchurMargins m;
  // row: sup_x (1/p(x)) sum_y w_y K(x,y) p(y)
  Eigen::VectorXd rows = K.entries * (w.cwiseProduct(pv));
  m.row = (rows.cwiseQuotient(pv)).maxCoeff();
  Eigen::VectorXd cols = K.entries.transpose() * (w.cwiseProduct(pv));
  m.col = (cols.cwiseQuotient(pv)).maxCoeff();
  return m;
}

std::vector<TailEntry> tail_profile(const KernelMatrix& K, const Weight& p,
                                    const std::vector<double>& radii,
                                    const Eigen::MatrixXd& dist) {
  for (std::size_t i = 1; i < radii.size(); ++i) {
    if (radii[i] <= radii[i - 1]) {
      throw std::invalid_argument("tail_profile: radii must increase");
    }
  }
  const int n = K.size();
  const Eigen::VectorXd pv = weight_values(K, p);
  const Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(
      K.domain->weights.data(), K.domain->size());
  Eigen::VectorXd base_dist(n);
  for (int i = 0; i < n; ++i) base_dist(i) = K.domain->radius_of(i);
  const double trunc = K.domain->truncation_radius;

  std::vector<TailEntry> out;
  out.reserve(radii.size());
  for (double R : radii) {
    TailEntry e;
    e.R = R;
    int interior = 0;
    bool has_exterior = false;
    double row_sup = 0.0, col_sup = 0.0;
    for (int i = 0; i < n; ++i) {
      if (base_dist(i) > trunc - R) continue;
      ++interior;
      double row_acc = 0.0, col_acc = 0.0;
      for (int j = 0; j < n; ++j) {
        if (dist(i, j) <= R) continue;
        has_exterior = true;
        row_acc += w(j) * K.entries(i, j) * pv(j);
        col_acc += w(j) * K.entries(j, i) * pv(j);
      }
      row_sup = std::max(row_sup, row_acc / pv(i));
      col_sup = std::max(col_sup, col_acc / pv(i));
    }
    e.interior_fraction = static_cast<double>(interior) / n;
    // An entry where no interior node sees any node beyond R measures only
    // the truncation, not the kernel; mark it unavailable.
    e.available = interior > 0 && has_exterior;
    if (e.available) {
      e.row_tail = row_sup;
      e.col_tail = col_sup;
    }
    out.push_back(e);
  }
  return out;
}

std::vector<TailEntry> tail_profile(const KernelMatrix& K, const Weight& p,
                                    const std::vector<double>& radii) {
  return tail_profile(K, p, radii, distance_matrix(*K.domain));
}

RhoResult rho(const KernelMatrix& K, const Weight& p, double eps, double step,
              const Eigen::MatrixXd& dist) {
  if (eps <= 0.0) throw std::invalid_argument("rho: eps must be positive");
  if (step <= 0.0) throw std::invalid_argument("rho: step must be positive");
  std::vector<double> radii;
  for (double R = step; R <= K.domain->truncation_radius + 1e-12; R += step) {
    radii.push_back(R);
  }
  const auto tails = tail_profile(K, p, radii, dist);

  // The zero radius is admissible when even the full weighted row sums fall
  // below eps.
  const SchurMargins m = schur_margins(K, p);
  RhoResult res;
  if (std::max(m.row, m.col) <= eps) {
    res.R_low = 0.0;
    res.R_high = 0.0;
    res.achieved = true;
    return res;
  }
  double prev = 0.0;
  for (const TailEntry& e : tails) {
    if (!e.available) break;
    if (std::max(e.row_tail, e.col_tail) <= eps) {
      res.R_low = prev;
      res.R_high = e.R;
      res.achieved = true;
      return res;
    }
    prev = e.R;
  }
  res.R_low = prev;
  res.R_high = std::numeric_limits<double>::infinity();
  res.achieved = false;
  return res;
}

RhoResult rho(const KernelMatrix& K, const Weight& p, double eps, double step) {
  return rho(K, p, eps, step, distance_matrix(*K.domain));
}

LocalizationReport build_localization_report(
    const KernelMatrix& K, const Weight& p, const std::vector<double>& radii,
    const std::vector<double>& eps_list) {
  const Eigen::MatrixXd dist = distance_matrix(*K.domain);
  LocalizationReport rep;
  rep.weight_name = p.name;
  rep.margins = schur_margins(K, p);
  rep.tails = tail_profile(K, p, radii, dist);
  const double step =
      radii.size() > 1 ? radii[1] - radii[0] : K.domain->resolution;
  for (double eps : eps_list) {
    rep.rho_table.push_back({eps, rho(K, p, eps, step, dist)});
  }
  return rep;
}

LocalizationVerdict check_weak_localization(const LocalizationReport& report,
                                            double margin_cap,
                                            double tail_floor) {
  LocalizationVerdict v;
  v.localized = true;
  if (report.margins.row > margin_cap || report.margins.col > margin_cap) {
    v.localized = false;
    v.reasons.push_back("Schur margin exceeds cap");
  }
  const TailEntry* last = nullptr;
  for (const TailEntry& e : report.tails) {
    if (e.available) last = &e;
  }
  if (last == nullptr) {
    v.localized = false;
    v.reasons.push_back("no tail radius with a nonempty interior");
  } else if (std::max(last->row_tail, last->col_tail) > tail_floor) {
    v.localized = false;
    v.reasons.push_back("largest-radius tail above floor");
  }
  if (v.localized) v.reasons.push_back("margins and tails within caps");
  return v;
}

double pointwise_violation(const Eigen::MatrixXd& K, const Eigen::MatrixXd& dist,
                           double M, double C) {
  return (K - C * (-M * dist).array().exp().matrix()).maxCoeff();
}

double pointwise_localization_check(const SampledFrame& F, double M, double C) {
  if (F.domain().space.tag() != Space::AffineGroup) {
    throw std::invalid_argument(
        "pointwise_localization_check expects an affine-group frame");
  }
  const Eigen::MatrixXd K = F.gram().cwiseAbs();
  const Eigen::MatrixXd dist = distance_matrix(F.domain());
  return pointwise_violation(K, dist, M, C);
}

}  // namespace wloc
