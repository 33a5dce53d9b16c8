#include "wloc/io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace wloc {

using nlohmann::json;

namespace {

json config_json(const ExperimentConfig& c) {
  json j;
  j["experiment"] = c.experiment;
  j["resolution"] = c.resolution;
  j["truncation"] = c.truncation;
  j["time_step"] = c.time_step;
  j["time_margin"] = c.time_margin;
  j["degree_cap"] = c.degree_cap;
  j["symbol"] = c.symbol;
  j["weight"] = c.weight;
  j["cover_radii"] = c.cover_radii;
  j["eps_list"] = c.eps_list;
  j["margin_cap"] = c.margin_cap;
  j["tail_floor"] = c.tail_floor;
  j["dual_mode"] = c.dual_mode;
  j["dual_cutoff"] = c.dual_cutoff;
  j["band_fraction"] = c.band_fraction;
  j["berezin_rel_threshold"] = c.berezin_rel_threshold;
  j["sigma_k0"] = c.sigma_k0;
  j["seed"] = c.seed;
  j["threads"] = c.threads;
  j["out_dir"] = c.out_dir;
  return j;
}

json localization_json(const LocalizationReport& r) {
  json j;
  j["weight"] = r.weight_name;
  j["schur_row_margin"] = r.margins.row;
  j["schur_col_margin"] = r.margins.col;
  json tails = json::array();
  for (const TailEntry& t : r.tails) {
    json e;
    e["R"] = t.R;
    e["available"] = t.available;
    e["interior_fraction"] = t.interior_fraction;
    if (t.available) {
      e["row_tail"] = t.row_tail;
      e["col_tail"] = t.col_tail;
    }
    tails.push_back(e);
  }
  j["tail_profile"] = tails;
  json rho = json::array();
  for (const RhoTableEntry& t : r.rho_table) {
    json e;
    e["eps"] = t.eps;
    e["achieved"] = t.value.achieved;
    e["R_low"] = t.value.R_low;
    if (t.value.achieved) e["R_high"] = t.value.R_high;
    rho.push_back(e);
  }
  j["rho_table"] = rho;
  return j;
}

json verdict_json(const LocalizationVerdict& v) {
  json j;
  j["localized"] = v.localized;
  j["reasons"] = v.reasons;
  return j;
}

}  // namespace

std::string config_to_json(const ExperimentConfig& c) {
  return config_json(c).dump(2) + "\n";
}

ExperimentConfig config_from_json(const std::string& text) {
  const json j = json::parse(text);
  if (!j.contains("experiment")) {
    throw std::invalid_argument("config: missing \"experiment\"");
  }
  ExperimentConfig c =
      ExperimentConfig::defaults(j.at("experiment").get<std::string>());
  static const char* known[] = {
      "experiment", "resolution", "truncation", "time_step", "time_margin",
      "degree_cap", "symbol", "weight", "cover_radii", "eps_list",
      "margin_cap", "tail_floor", "dual_mode", "dual_cutoff", "band_fraction",
      "berezin_rel_threshold",
      "sigma_k0", "seed", "threads", "out_dir"};
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) throw std::invalid_argument("config: unknown key \"" + key + "\"");
    (void)value;
  }
  if (j.contains("resolution")) c.resolution = j.at("resolution");
  if (j.contains("truncation")) c.truncation = j.at("truncation");
  if (j.contains("time_step")) c.time_step = j.at("time_step");
  if (j.contains("time_margin")) c.time_margin = j.at("time_margin");
  if (j.contains("degree_cap")) c.degree_cap = j.at("degree_cap");
  if (j.contains("symbol")) c.symbol = j.at("symbol");
  if (j.contains("weight")) c.weight = j.at("weight");
  if (j.contains("cover_radii")) {
    c.cover_radii = j.at("cover_radii").get<std::vector<double>>();
  }
  if (j.contains("eps_list")) {
    c.eps_list = j.at("eps_list").get<std::vector<double>>();
  }
  if (j.contains("margin_cap")) c.margin_cap = j.at("margin_cap");
  if (j.contains("tail_floor")) c.tail_floor = j.at("tail_floor");
  if (j.contains("dual_mode")) c.dual_mode = j.at("dual_mode");
  if (j.contains("dual_cutoff")) c.dual_cutoff = j.at("dual_cutoff");
  if (j.contains("band_fraction")) c.band_fraction = j.at("band_fraction");
  if (j.contains("berezin_rel_threshold")) {
    c.berezin_rel_threshold = j.at("berezin_rel_threshold");
  }
  if (j.contains("sigma_k0")) c.sigma_k0 = j.at("sigma_k0");
  if (j.contains("seed")) c.seed = j.at("seed");
  if (j.contains("threads")) c.threads = j.at("threads");
  if (j.contains("out_dir")) c.out_dir = j.at("out_dir");
  return c;
}

std::string report_to_json(const ExperimentReport& r) {
  json j;
  j["config"] = config_json(r.config);
  j["localization"] = localization_json(r.localization);
  j["localization_verdict"] = verdict_json(r.localization_verdict);
  j["operator_norm"] = r.operator_norm_value;
  json bounds = json::array();
  for (const BoundsRow& b : r.bounds) {
    json e;
    e["r"] = b.r;
    e["eps"] = b.eps;
    e["norm"] = b.norm;
    e["bound"] = b.bound;
    e["essential_bound"] = b.essential_bound;
    e["radius_warning"] = b.radius_warning;
    bounds.push_back(e);
  }
  j["bounds"] = bounds;
  json approx = json::array();
  for (const ApproxRow& a : r.approximation) {
    approx.push_back({{"r", a.r}, {"rel_error", a.rel_error}});
  }
  j["approximation"] = approx;
  json bz = json::array();
  for (const BerezinSample& s : r.berezin_profile) {
    bz.push_back({{"radius", s.radius}, {"magnitude", s.magnitude}});
  }
  j["berezin_profile"] = bz;
  j["singular_values"] = r.singular_values;
  j["berezin_verdict"] = {{"compact", r.berezin_verdict.compact},
                  {"boundary_sup", r.berezin_verdict.boundary_sup},
                  {"interior_sup", r.berezin_verdict.interior_sup},
                  {"threshold", r.berezin_verdict.threshold},
                  {"heuristic", r.berezin_verdict.heuristic}};
  j["sigma_ratio"] = r.sigma_ratio;
  j["sigma_compact"] = r.sigma_compact;
  if (!r.pointwise.empty()) {
    json pw = json::array();
    for (const PointwiseRow& p : r.pointwise) {
      pw.push_back({{"M", p.M}, {"C", p.C}, {"violation", p.violation}});
    }
    j["pointwise"] = pw;
  }
  if (!r.toeplitz_diagonal.empty()) {
    j["toeplitz_diagonal"] = r.toeplitz_diagonal;
  }
  if (r.has_hankel) j["hankel_residual"] = r.hankel_residual;
  return j.dump(2) + "\n";
}

std::string localization_report_to_json(const LocalizationReport& report,
                                        const LocalizationVerdict& verdict) {
  json j;
  j["localization"] = localization_json(report);
  j["verdict"] = verdict_json(verdict);
  return j.dump(2) + "\n";
}

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string berezin_profile_csv(const ExperimentReport& r) {
  std::string out = "d_to_basepoint,abs_berezin\n";
  for (const BerezinSample& s : r.berezin_profile) {
    out += fmt(s.radius) + "," + fmt(s.magnitude) + "\n";
  }
  return out;
}

std::string singular_values_csv(const ExperimentReport& r) {
  std::string out = "k,sigma\n";
  for (std::size_t k = 0; k < r.singular_values.size(); ++k) {
    out += std::to_string(k) + "," + fmt(r.singular_values[k]) + "\n";
  }
  return out;
}

std::string bounds_csv(const ExperimentReport& r) {
  std::string out = "r,eps,norm,bound,essential_bound\n";
  for (const BoundsRow& b : r.bounds) {
    out += fmt(b.r) + "," + fmt(b.eps) + "," + fmt(b.norm) + "," +
           fmt(b.bound) + "," + fmt(b.essential_bound) + "\n";
  }
  return out;
}

std::string rho_csv(const LocalizationReport& r) {
  std::string out = "eps,R_low,R_high\n";
  for (const RhoTableEntry& t : r.rho_table) {
    out += fmt(t.eps) + "," + fmt(t.value.R_low) + "," +
           (t.value.achieved ? fmt(t.value.R_high) : std::string("inf")) +
           "\n";
  }
  return out;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << content;
}

std::string read_text_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_report_files(const ExperimentReport& report,
                        const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  const auto at = [&](const char* name) {
    return (std::filesystem::path(out_dir) / name).string();
  };
  write_text_file(at("report.json"), report_to_json(report));
  write_text_file(at("berezin_profile.csv"), berezin_profile_csv(report));
  write_text_file(at("singular_values.csv"), singular_values_csv(report));
  write_text_file(at("bounds.csv"), bounds_csv(report));
  write_text_file(at("rho.csv"), rho_csv(report.localization));
}

namespace {

constexpr char kMagic[8] = {'W', 'L', 'O', 'C', 'O', 'P', '0', '1'};

void put_u64_le(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(char((v >> (8 * i)) & 0xff));
}

std::uint64_t get_u64_le(const char* p) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) {
    v |= std::uint64_t(static_cast<unsigned char>(p[i])) << (8 * i);
  }
  return v;
}

void put_double_le(std::string& out, double d) {
  std::uint64_t bits;
  std::memcpy(&bits, &d, 8);
  if constexpr (std::endian::native == std::endian::big) {
    bits = __builtin_bswap64(bits);
  }
  put_u64_le(out, bits);
}

double get_double_le(const char* p) {
  std::uint64_t bits = get_u64_le(p);
  if constexpr (std::endian::native == std::endian::big) {
    bits = __builtin_bswap64(bits);
  }
  double d;
  std::memcpy(&d, &bits, 8);
  return d;
}

}  // namespace

void write_operator_bundle(const std::string& path,
                           const LocalizedOperator& op) {
  json meta;
  meta["provenance"] = op.provenance;
  meta["rows"] = op.action.rows();
  meta["cols"] = op.action.cols();
  meta["frame"] = frame_tag_name(op.frame().tag());
  meta["space"] = space_name(op.domain().space.tag());
  meta["resolution"] = op.domain().resolution;
  meta["truncation"] = op.domain().truncation_radius;
  const std::string mj = meta.dump();

  std::string out(kMagic, sizeof(kMagic));
  put_u64_le(out, mj.size());
  out += mj;
  for (Eigen::Index c = 0; c < op.action.cols(); ++c) {
    for (Eigen::Index r = 0; r < op.action.rows(); ++r) {
      put_double_le(out, op.action(r, c).real());
      put_double_le(out, op.action(r, c).imag());
    }
  }
  write_text_file(path, out);
}

OperatorBundle read_operator_bundle(const std::string& path) {
  const std::string data = read_text_file(path);
  if (data.size() < 16 || std::memcmp(data.data(), kMagic, 8) != 0) {
    throw std::runtime_error("not an operator bundle: " + path);
  }
  const std::uint64_t mlen = get_u64_le(data.data() + 8);
  if (data.size() < 16 + mlen) {
    throw std::runtime_error("truncated bundle metadata: " + path);
  }
  OperatorBundle b;
  b.metadata_json = data.substr(16, mlen);
  const json meta = json::parse(b.metadata_json);
  const Eigen::Index rows = meta.at("rows"), cols = meta.at("cols");
  const std::size_t need =
      16 + mlen + std::size_t(rows) * std::size_t(cols) * 16;
  if (data.size() < need) {
    throw std::runtime_error("truncated bundle payload: " + path);
  }
  b.action.resize(rows, cols);
  const char* p = data.data() + 16 + mlen;
  for (Eigen::Index c = 0; c < cols; ++c) {
    for (Eigen::Index r = 0; r < rows; ++r) {
      const double re = get_double_le(p);
      const double im = get_double_le(p + 8);
      b.action(r, c) = Complex(re, im);
      p += 16;
    }
  }
  return b;
}

}  // namespace wloc
