// prefsense command-line front end.
//
// Every subcommand prints "key: value" lines with 6 significant digits, or a
// single JSON object at full precision with --json. Exit status: 0 on
// success, 1 on invalid input, 2 when `verify` finds a failing criterion.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "prefsense/dataset.hpp"
#include "prefsense/fitting.hpp"
#include "prefsense/oracles.hpp"
#include "prefsense/raster.hpp"
#include "prefsense/sensitivity.hpp"
#include "prefsense/verify.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace prefsense;

namespace {

constexpr int kExitInvalid = 1;
constexpr int kExitVerifyFailed = 2;

std::string sig6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// Text rendering of a flat-ish JSON record.
void print_text(const ordered_json& j, const std::string& indent = "") {
  for (const auto& [key, value] : j.items()) {
    if (value.is_object()) {
      std::cout << indent << key << ":\n";
      print_text(value, indent + "  ");
    } else if (value.is_array() && !value.empty() && value.front().is_object()) {
      std::cout << indent << key << ":\n";
      for (const auto& item : value) {
        std::cout << indent << "  -\n";
        print_text(item, indent + "    ");
      }
    } else if (value.is_array()) {
      std::cout << indent << key << ":";
      for (const auto& v : value) {
        if (v.is_array()) {
          std::cout << "\n" << indent << " ";
          for (const auto& w : v) std::cout << ' ' << (w.is_number() ? sig6(w.get<double>()) : w.dump());
        } else {
          std::cout << ' ' << (v.is_number_float() ? sig6(v.get<double>()) : v.is_string() ? v.get<std::string>() : v.dump());
        }
      }
      std::cout << '\n';
    } else if (value.is_number_float()) {
      std::cout << indent << key << ": " << sig6(value.get<double>()) << '\n';
    } else if (value.is_string()) {
      std::cout << indent << key << ": " << value.get<std::string>() << '\n';
    } else if (value.is_null()) {
      std::cout << indent << key << ": none\n";
    } else {
      std::cout << indent << key << ": " << value.dump() << '\n';
    }
  }
}

struct Emitter {
  bool json = false;
  void operator()(const ordered_json& j) const {
    if (json) {
      std::cout << j.dump(2) << '\n';
    } else {
      print_text(j);
    }
  }
};

ordered_json interval_json(const Interval& iv) {
  if (iv.empty()) return nullptr;
  return ordered_json::array({iv.lo, iv.hi});
}

LinkFunction make_link(const std::string& name) {
  return parse_link_family(name) == LinkFamily::logistic ? LinkFunction::logistic()
                                                         : LinkFunction::probit();
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw ValidationError("not a number: '" + item + "'");
    out.push_back(v);
  }
  return out;
}

std::vector<std::string> split_names(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(item);
  return out;
}

std::array<std::string, 3> parse_permutation(const std::string& text) {
  const auto names = split_names(text);
  if (names.size() != 3) throw ValidationError("--permutation needs exactly three comma-separated names");
  return {names[0], names[1], names[2]};
}

// ---------------------------------------------------------------------------

struct ComposeArgs {
  double p_ik = 0.0;
  double p_kj = 0.0;
  std::string link = "logistic";
};

ordered_json run_compose(const ComposeArgs& a) {
  const auto link = make_link(a.link);
  const Probability p = compose_pairwise(link, Probability::checked(a.p_ik, "--p-ik"),
                                         Probability::checked(a.p_kj, "--p-kj"));
  ordered_json j;
  j["link"] = to_string(link.family());
  j["p_ik"] = a.p_ik;
  j["p_kj"] = a.p_kj;
  j["p_ij"] = p.value();
  if (p.saturated()) j["saturated"] = true;
  return j;
}

struct GradArgs {
  std::string model;
  std::string link = "logistic";
  double p_ik = 0.0, p_kj = 0.0;
  double alpha = 1.0, beta = 1.0;
  std::optional<double> p_uv, p_vu;
  std::string scores, ranking;
  std::size_t u = 0, v = 1;
};

PlSensitivityContext context_from(const std::string& scores, const std::string& ranking,
                                  std::size_t u, std::size_t v, double& p_uv, double& p_vu) {
  const auto s = parse_double_list(scores);
  const auto options = ScoredOptionSet::from_scores(s);
  std::vector<std::size_t> idx;
  if (ranking.empty()) {
    for (std::size_t i = 0; i < s.size(); ++i) idx.push_back(i);
  } else {
    for (double r : parse_double_list(ranking)) {
      if (r < 0 || r != std::floor(r)) throw ValidationError("--ranking entries must be option indices");
      idx.push_back(static_cast<std::size_t>(r));
    }
  }
  const KTuplePreference omega(idx, s.size());
  const auto ctx = pl_context(options, omega, u, v);
  // The swap pair's probabilities, normalized to sum to one.
  const double r = ctx.ratios(u, v);
  p_uv = 1.0 / (1.0 + r);
  p_vu = r / (1.0 + r);
  return ctx;
}

ordered_json run_grad(const GradArgs& a) {
  ordered_json j;
  if (a.model == "bt") {
    const auto link = make_link(a.link);
    const bool logistic = link.family() == LinkFamily::logistic;
    const double d_ik = logistic ? bt_partial(a.p_ik, a.p_kj) : general_partial(link, a.p_ik, a.p_kj);
    const double d_kj = logistic ? bt_partial(a.p_kj, a.p_ik) : general_partial(link, a.p_kj, a.p_ik);
    j["link"] = to_string(link.family());
    j["p_ik"] = a.p_ik;
    j["p_kj"] = a.p_kj;
    j["d_p_ij/d_p_ik"] = d_ik;
    j["d_p_ij/d_p_kj"] = d_kj;
    return j;
  }
  double p_uv = a.p_uv.value_or(0.0), p_vu = a.p_vu.value_or(0.0);
  PlSensitivityContext ctx;
  if (!a.scores.empty()) {
    ctx = context_from(a.scores, a.ranking, a.u, a.v, p_uv, p_vu);
    if (a.p_uv) p_uv = *a.p_uv;
    if (a.p_vu) p_vu = *a.p_vu;
  } else {
    if (!a.p_uv || !a.p_vu) throw ValidationError("grad pl needs --p-uv and --p-vu (or --scores)");
    ctx = pl_context(a.alpha, a.beta);
  }
  const auto d = pl_partials(p_uv, p_vu, ctx);
  j["alpha"] = ctx.alpha;
  j["beta"] = ctx.beta;
  j["p_uv"] = p_uv;
  j["p_vu"] = p_vu;
  j["p_omega"] = ctx.beta * p_uv / (ctx.alpha * p_uv + p_vu);
  j["d_p_omega/d_p_uv"] = d.d_uv;
  j["d_p_omega/d_p_vu"] = d.d_vu;
  return j;
}

struct RegionArgs {
  std::string model;
  double m = 0.0;
  std::optional<double> p_kj;
  double alpha = 1.0, beta = 1.0;
  std::optional<double> p_uv, p_vu;
};

ordered_json run_region(const RegionArgs& a) {
  ordered_json j;
  j["M"] = a.m;
  if (a.model == "bt") {
    if (!a.p_kj) throw ValidationError("region bt needs --p-kj");
    const auto s = bt_region_slice(a.m, *a.p_kj);
    j["p_kj"] = *a.p_kj;
    j["case"] = std::string(to_string(s.region_case));
    j["gamma0"] = s.gamma0 ? ordered_json(*s.gamma0) : ordered_json(nullptr);
    j["p_ik_interval"] = interval_json(s.p_ik_interval);
    return j;
  }
  if (a.p_uv.has_value() == a.p_vu.has_value()) {
    throw ValidationError("region pl needs exactly one of --p-uv or --p-vu");
  }
  const auto ctx = pl_context(a.alpha, a.beta);
  j["alpha"] = a.alpha;
  j["beta"] = a.beta;
  if (a.p_uv) {
    const auto r = pl_region_uv(a.m, ctx, *a.p_uv);
    j["p_uv"] = *a.p_uv;
    j["gamma1"] = r.center;
    j["gamma2"] = r.half_width;
    j["p_uv_limit"] = r.fixed_limit;
    j["p_vu_interval"] = interval_json(r.interval);
  } else {
    const auto r = pl_region_vu(a.m, ctx, *a.p_vu);
    j["p_vu"] = *a.p_vu;
    j["eta1"] = r.center;
    j["eta2"] = r.half_width;
    j["p_vu_limit"] = r.fixed_limit;
    j["p_uv_interval"] = interval_json(r.interval);
  }
  return j;
}

struct AreaArgs {
  std::string model;
  double m = 0.0;
  double alpha = 1.0, beta = 1.0;
  std::string axis = "uv";
  std::uint64_t samples = 1000000;
  std::uint64_t seed = 0;
  std::size_t grid = 100000;
};

ordered_json run_area(const AreaArgs& a) {
  ordered_json j;
  j["M"] = a.m;
  if (a.model == "bt") {
    const double exact = bt_region_area(a.m).closed_form;
    const auto est = oracles::mc_area_bt(a.m, a.samples, a.seed);
    j["closed_form"] = exact;
    j["monte_carlo"] = est.value;
    j["std_error"] = est.std_error;
    j["samples"] = est.n_samples;
    j["seed"] = est.seed;
    j["relative_discrepancy"] = std::abs(est.value - exact) / exact;
    return j;
  }
  if (a.axis != "uv" && a.axis != "vu") throw ValidationError("--axis must be uv or vu");
  const PlAxis axis = a.axis == "uv" ? PlAxis::uv : PlAxis::vu;
  const double exact = pl_region_area(a.m, pl_context(a.alpha, a.beta), axis).closed_form;
  const double quad = oracles::quad_area_pl(a.m, a.alpha, a.beta, axis, a.grid);
  j["alpha"] = a.alpha;
  j["beta"] = a.beta;
  j["axis"] = a.axis;
  j["closed_form"] = exact;
  j["quadrature"] = quad;
  j["grid"] = a.grid;
  j["absolute_discrepancy"] = std::abs(quad - exact);
  return j;
}

struct WitnessArgs {
  std::string link = "logistic";
  double m = 0.0;
  double delta = 1.0;
};

ordered_json run_witness(const WitnessArgs& a) {
  const auto link = make_link(a.link);
  const auto w = theorem1_witness(link, a.m, a.delta);
  const double fd = oracles::finite_diff(
      [&](double p) {
        return compose_pairwise(link, Probability::checked(p), Probability::checked(w.p_kj)).value();
      },
      w.p_ik);
  ordered_json j;
  j["link"] = to_string(link.family());
  j["M"] = a.m;
  j["delta"] = a.delta;
  j["p0"] = w.p0;
  j["p_ik"] = w.p_ik;
  j["p_kj"] = w.p_kj;
  j["derivative"] = w.derivative;
  j["finite_difference"] = fd;
  j["steps"] = w.steps;
  return j;
}

struct RasterArgs {
  std::string model;
  std::string field;
  fs::path out;
  std::string format;
  std::size_t resolution = kDefaultResolution;
  std::string thresholds;
  double alpha = 1.01, beta = 0.99;
};

ordered_json run_raster(const RasterArgs& a) {
  const auto thresholds = a.thresholds.empty() ? default_thresholds() : parse_double_list(a.thresholds);
  std::string format = a.format;
  if (format.empty()) {
    format = a.out.extension() == ".svg" ? "svg" : "csv";
  }
  const ExportFormat fmt = parse_export_format(format);
  RasterGrid grid;
  if (a.model == "bt") {
    const std::string field = a.field.empty() ? "d_pik" : a.field;
    if (field != "d_pik" && field != "d_pkj") throw ValidationError("bt --field must be d_pik or d_pkj");
    grid = raster_bt(field == "d_pik" ? BtField::d_pik : BtField::d_pkj, thresholds, a.resolution);
  } else {
    const std::string field = a.field.empty() ? "d_uv" : a.field;
    if (field != "d_uv" && field != "d_vu") throw ValidationError("pl --field must be d_uv or d_vu");
    grid = raster_pl(field == "d_uv" ? PlField::d_uv : PlField::d_vu, a.alpha, a.beta, thresholds,
                     a.resolution);
  }
  export_grid(grid, fmt, a.out);

  std::vector<std::size_t> per_class(thresholds.size() + 1, 0);
  for (int c : grid.classes) ++per_class[static_cast<std::size_t>(c)];
  ordered_json j;
  j["out"] = a.out.string();
  j["format"] = format;
  j["resolution"] = grid.resolution;
  j["title"] = grid.title;
  j["thresholds"] = thresholds;
  j["cells_per_class"] = per_class;
  return j;
}

struct DataArgs {
  std::string permutation = "dog,cat,bird";
  double p12 = 0.99;
  double p23 = 0.5;
  std::uint64_t n = 10000;
  std::uint64_t seed = 0;
  fs::path out;
};

ordered_json report_json(const dataset::EmpiricalReport& report) {
  ordered_json pairs = ordered_json::array();
  for (const auto& pf : report.pairs) {
    ordered_json p;
    p["pair"] = pf.first + ">" + pf.second;
    p["count"] = pf.count;
    p["empirical"] = pf.empirical;
    p["target"] = std::isnan(pf.target) ? ordered_json(nullptr) : ordered_json(pf.target);
    p["z"] = std::isnan(pf.target) ? ordered_json(nullptr) : ordered_json(pf.z);
    pairs.push_back(p);
  }
  return pairs;
}

ordered_json run_gen_data(const DataArgs& a) {
  dataset::DatasetSpec spec;
  spec.permutation = parse_permutation(a.permutation);
  spec.p12 = a.p12;
  spec.p23 = a.p23;
  spec.n_samples = a.n;
  spec.seed = a.seed;
  const auto samples = dataset::generate(spec);
  dataset::write_jsonl(samples, a.out);
  const auto report = dataset::empirical_check(samples, spec);
  ordered_json j;
  j["out"] = a.out.string();
  j["samples"] = samples.size();
  j["seed"] = spec.seed;
  j["pairs"] = report_json(report);
  return j;
}

ordered_json run_sweep_data(const DataArgs& a) {
  dataset::DatasetSpec base;
  base.permutation = parse_permutation(a.permutation);
  base.n_samples = a.n;
  base.seed = a.seed;
  fs::create_directories(a.out);
  std::vector<dataset::ManifestEntry> entries;
  ordered_json files = ordered_json::array();
  for (const auto& spec : dataset::sweep(base)) {
    char name[64];
    std::snprintf(name, sizeof name, "p23_%03d.jsonl", static_cast<int>(std::lround(spec.p23 * 100)));
    dataset::write_jsonl(dataset::generate(spec), a.out / name);
    entries.push_back({spec, fs::path(name)});
    files.push_back(name);
  }
  const fs::path manifest = a.out / "manifest.csv";
  std::ofstream out(manifest, std::ios::binary | std::ios::trunc);
  out << dataset::to_manifest(entries);
  out.close();
  if (!out) throw IoError("failed writing '" + manifest.string() + "'");
  ordered_json j;
  j["out"] = a.out.string();
  j["manifest"] = manifest.string();
  j["datasets"] = entries.size();
  j["files"] = files;
  return j;
}

struct FitArgs {
  fs::path in;
  fs::path out;
  std::string labels;
};

ordered_json run_fit(const FitArgs& a) {
  PairwiseCounts counts = a.in.extension() == ".jsonl"
                              ? counts_from_samples(dataset::read_jsonl(a.in), split_names(a.labels))
                              : read_counts(a.in);
  if (counts.labels.empty()) {
    for (std::size_t i = 0; i < counts.size(); ++i) counts.labels.push_back(std::to_string(i));
  }
  const auto fit = fit_bt(counts);
  ordered_json j;
  j["labels"] = counts.labels;
  j["scores"] = fit.scores;
  j["log_likelihood"] = fit.log_likelihood;
  j["iterations"] = fit.iterations;
  j["converged"] = fit.converged;
  j["diverged"] = fit.diverged;
  ordered_json matrix = ordered_json::array();
  for (std::size_t i = 0; i < counts.size(); ++i) {
    std::vector<double> row;
    for (std::size_t k = 0; k < counts.size(); ++k) row.push_back(predict(fit, i, k).value());
    matrix.push_back(row);
  }
  j["predicted"] = matrix;
  j["warnings"] = fit.warnings;
  if (!a.out.empty()) {
    std::ofstream out(a.out, std::ios::binary | std::ios::trunc);
    out << j.dump(2) << '\n';
    out.close();
    if (!out) throw IoError("failed writing '" + a.out.string() + "'");
  }
  return j;
}

int run_verify(bool quick, std::uint64_t seed, bool json) {
  verify::SuiteOptions opt;
  opt.quick = quick;
  opt.seed = seed;
  const auto results = verify::run_suite(opt);
  std::vector<int> failed;
  ordered_json j;
  j["quick"] = quick;
  j["criteria"] = ordered_json::array();
  for (const auto& r : results) {
    if (!r.pass) failed.push_back(r.id);
    if (json) {
      ordered_json c;
      c["id"] = r.id;
      c["name"] = r.name;
      c["pass"] = r.pass;
      c["seconds"] = r.seconds;
      c["detail"] = r.detail;
      j["criteria"].push_back(c);
    } else {
      std::cout << verify::format_result(r) << '\n';
    }
  }
  if (json) {
    j["failed"] = failed;
    std::cout << j.dump(2) << '\n';
  } else if (failed.empty()) {
    std::cout << results.size() << "/" << results.size() << " criteria passed\n";
  } else {
    std::cout << "failed criteria:";
    for (int id : failed) std::cout << ' ' << id;
    std::cout << '\n';
  }
  return failed.empty() ? 0 : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sensitivity analysis of pairwise and listwise preference models"};
  app.require_subcommand(1);
  Emitter emit;
  app.add_flag("--json", emit.json, "Emit one JSON object at full precision");

  const auto link_check = CLI::IsMember({"logistic", "bt", "probit", "thurstone"});

  ComposeArgs compose;
  auto* c_compose = app.add_subcommand("compose", "Compose p_ik and p_kj into p_ij");
  c_compose->add_option("--p-ik", compose.p_ik, "P(i over k)")->required();
  c_compose->add_option("--p-kj", compose.p_kj, "P(k over j)")->required();
  c_compose->add_option("--link", compose.link, "logistic or probit")->check(link_check)->capture_default_str();

  GradArgs grad;
  auto* c_grad = app.add_subcommand("grad", "Analytic partial derivatives");
  c_grad->add_option("model", grad.model, "bt or pl")->required()->check(CLI::IsMember({"bt", "pl"}));
  c_grad->add_option("--link", grad.link, "bt: logistic or probit")->check(link_check)->capture_default_str();
  c_grad->add_option("--p-ik", grad.p_ik, "bt: P(i over k)");
  c_grad->add_option("--p-kj", grad.p_kj, "bt: P(k over j)");
  c_grad->add_option("--alpha", grad.alpha, "pl: context constant alpha >= 1")->capture_default_str();
  c_grad->add_option("--beta", grad.beta, "pl: context constant beta in (0,1]")->capture_default_str();
  c_grad->add_option("--p-uv", grad.p_uv, "pl: probability of the ranking");
  c_grad->add_option("--p-vu", grad.p_vu, "pl: probability of the (u,v)-swapped ranking");
  c_grad->add_option("--scores", grad.scores, "pl: comma-separated scores (derives alpha, beta)");
  c_grad->add_option("--ranking", grad.ranking, "pl: comma-separated option indices, best first");
  c_grad->add_option("-u", grad.u, "pl: first swapped position (0-based)")->capture_default_str();
  c_grad->add_option("-v", grad.v, "pl: second swapped position (0-based)")->capture_default_str();

  RegionArgs region;
  auto* c_region = app.add_subcommand("region", "Bounds of the M-sensitive region along one axis");
  c_region->add_option("model", region.model, "bt or pl")->required()->check(CLI::IsMember({"bt", "pl"}));
  c_region->add_option("--M", region.m, "threshold M > 1")->required();
  c_region->add_option("--p-kj", region.p_kj, "bt: fixed p_kj");
  c_region->add_option("--alpha", region.alpha, "pl: alpha")->capture_default_str();
  c_region->add_option("--beta", region.beta, "pl: beta")->capture_default_str();
  c_region->add_option("--p-uv", region.p_uv, "pl: fixed p_uv (region along p_vu)");
  c_region->add_option("--p-vu", region.p_vu, "pl: fixed p_vu (region along p_uv)");

  AreaArgs area;
  auto* c_area = app.add_subcommand("area", "Closed-form sensitive area with an independent oracle");
  c_area->add_option("model", area.model, "bt or pl")->required()->check(CLI::IsMember({"bt", "pl"}));
  c_area->add_option("--M", area.m, "threshold M > 1")->required();
  c_area->add_option("--alpha", area.alpha, "pl: alpha")->capture_default_str();
  c_area->add_option("--beta", area.beta, "pl: beta")->capture_default_str();
  c_area->add_option("--axis", area.axis, "pl: uv or vu")->capture_default_str();
  c_area->add_option("--samples", area.samples, "bt: Monte-Carlo samples")->capture_default_str();
  c_area->add_option("--seed", area.seed, "bt: Monte-Carlo seed")->capture_default_str();
  c_area->add_option("--grid", area.grid, "pl: quadrature intervals")->capture_default_str();

  WitnessArgs witness;
  auto* c_witness = app.add_subcommand("witness", "Construct a point where dp_ij/dp_ik > M");
  c_witness->add_option("--link", witness.link, "logistic or probit")->check(link_check)->capture_default_str();
  c_witness->add_option("--M", witness.m, "threshold M")->required();
  c_witness->add_option("--delta", witness.delta, "offset delta > 0")->capture_default_str();

  RasterArgs raster;
  auto* c_raster = app.add_subcommand("raster", "Rasterize a derivative field and export it");
  c_raster->add_option("model", raster.model, "bt or pl")->required()->check(CLI::IsMember({"bt", "pl"}));
  c_raster->add_option("--out,-o", raster.out, "output file")->required();
  c_raster->add_option("--format", raster.format, "csv or svg (default: from extension)")
      ->check(CLI::IsMember({"csv", "svg"}));
  c_raster->add_option("--field", raster.field, "bt: d_pik|d_pkj, pl: d_uv|d_vu");
  c_raster->add_option("--resolution", raster.resolution, "cells per side (>= 64)")->capture_default_str();
  c_raster->add_option("--thresholds", raster.thresholds, "comma-separated, default 1.01,2,3,5,10");
  c_raster->add_option("--alpha", raster.alpha, "pl: alpha")->capture_default_str();
  c_raster->add_option("--beta", raster.beta, "pl: beta")->capture_default_str();

  DataArgs gen;
  auto* c_gen = app.add_subcommand("gen-data", "Write one preference dataset as JSON lines");
  c_gen->add_option("--permutation", gen.permutation, "three names, best first")->capture_default_str();
  c_gen->add_option("--p12", gen.p12, "P(first over second)")->capture_default_str();
  c_gen->add_option("--p23", gen.p23, "P(second over third)")->capture_default_str();
  c_gen->add_option("--n", gen.n, "number of samples")->capture_default_str();
  c_gen->add_option("--seed", gen.seed, "RNG seed")->capture_default_str();
  c_gen->add_option("--out,-o", gen.out, "output .jsonl")->required();

  DataArgs sweep_args;
  auto* c_sweep = app.add_subcommand("sweep-data", "Write 21 datasets over p23 = 0..1 and a manifest");
  c_sweep->add_option("--permutation", sweep_args.permutation, "three names, best first")->capture_default_str();
  c_sweep->add_option("--n", sweep_args.n, "samples per dataset")->capture_default_str();
  c_sweep->add_option("--seed", sweep_args.seed, "base seed; dataset i uses seed + i")->capture_default_str();
  c_sweep->add_option("--out,-o", sweep_args.out, "output directory")->required();

  FitArgs fit;
  auto* c_fit = app.add_subcommand("fit", "Fit Bradley-Terry scores to comparisons");
  c_fit->add_option("--in,-i", fit.in, "count matrix, or .jsonl preference samples")->required();
  c_fit->add_option("--out,-o", fit.out, "write the fit as JSON");
  c_fit->add_option("--labels", fit.labels, ".jsonl: comma-separated option order");

  bool quick = false;
  std::uint64_t verify_seed = 0;
  auto* c_verify = app.add_subcommand("verify", "Run the numerical acceptance suite");
  c_verify->add_flag("--quick", quick, "smaller dataset sweep and raster");
  c_verify->add_option("--seed", verify_seed, "seed for the stochastic checks")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalid;
  }

  try {
    if (*c_compose) emit(run_compose(compose));
    if (*c_grad) emit(run_grad(grad));
    if (*c_region) emit(run_region(region));
    if (*c_area) emit(run_area(area));
    if (*c_witness) emit(run_witness(witness));
    if (*c_raster) emit(run_raster(raster));
    if (*c_gen) emit(run_gen_data(gen));
    if (*c_sweep) emit(run_sweep_data(sweep_args));
    if (*c_fit) emit(run_fit(fit));
    if (*c_verify) return run_verify(quick, verify_seed, emit.json);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
  return 0;
}
