// Command-line front end: domain configs in, CSV/JSON artifacts out, with an
// on-disk Gram-matrix cache. See README.md for the artifact formats.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>

#include "bkm/bieberbach.hpp"
#include "bkm/experiments.hpp"
#include "bkm/geometry.hpp"
#include "bkm/io.hpp"
#include "bkm/orthopoly.hpp"
#include "bkm/refmaps.hpp"
#include "bkm/version.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace bkm;

namespace {

struct CommonOpts {
  std::string domain_path;
  std::string out_dir = "out";
  std::string cache_dir;
  int precision = 53;
  int order = 24;
  int panels = 8;
  double grading = 0.5;
  int depth = 40;
  int threads = 0;

  std::string cache() const {
    if (!cache_dir.empty()) return cache_dir;
    if (const char* env = std::getenv("BKM_CACHE_DIR")) return env;
    return (fs::path(out_dir) / "cache").string();
  }
};

void add_common(CLI::App* cmd, CommonOpts& o, bool needs_domain = true) {
  auto* d = cmd->add_option("--domain", o.domain_path, "domain config (JSON)");
  if (needs_domain) d->required();
  cmd->add_option("--out", o.out_dir, "output directory");
  cmd->add_option("--cache", o.cache_dir, "gram cache directory (or $BKM_CACHE_DIR)");
  cmd->add_option("--precision", o.precision, "working precision bits: 53, 106, 212");
  cmd->add_option("--order", o.order, "gauss points per panel");
  cmd->add_option("--panels", o.panels, "panels per smooth arc");
  cmd->add_option("--grading", o.grading, "geometric grading ratio toward singular vertices");
  cmd->add_option("--depth", o.depth, "graded subdivision depth");
  cmd->add_option("--threads", o.threads, "worker threads (0 = hardware)");
}

json meta_for(const CommonOpts& o, const DomainSpec& d) {
  json m;
  m["version"] = kVersion;
  m["config_digest"] = d.id_hash;
  m["gallery"] = d.gallery;
  m["precision_bits"] = o.precision;
  m["rule"] = {{"order", o.order},
               {"panels_per_arc", o.panels},
               {"grading_ratio", o.grading},
               {"grading_depth", o.depth}};
  return m;
}

json read_config(const std::string& path) { return json::parse(read_file(path)); }

ReferenceMap reference_for(const json& cfg) {
  const std::string g = cfg.value("gallery", "custom");
  auto z0_or = [&](Cd dflt) {
    if (!cfg.contains("z0")) return dflt;
    const auto& j = cfg["z0"];
    if (j.is_number()) return Cd(j.get<double>(), 0);
    return Cd(j[0].get<double>(), j[1].get<double>());
  };
  if (g == "disk") return ReferenceMap::disk_map(cfg.value("radius", 1.0), z0_or(Cd(0, 0)));
  if (g == "lune") return ReferenceMap::lune_map(z0_or(Cd(1.4, 0)));
  if (g == "drop") return ReferenceMap::drop_map(z0_or(Cd(0, 0)));
  if (g == "lens")
    return ReferenceMap::lens_map(cfg.value("xi", 0.6), cfg.value("alpha", M_SQRT1_2),
                                  z0_or(Cd(0, 0)));
  if (g == "psi_image") {
    std::vector<Cd> coeffs;
    for (const auto& c : cfg.at("coeffs"))
      coeffs.push_back(c.is_number() ? Cd(c.get<double>(), 0)
                                     : Cd(c[0].get<double>(), c[1].get<double>()));
    return ReferenceMap::psi_image_map(coeffs);
  }
  throw ValidationError("no closed-form reference map for gallery '" + g + "'");
}

template <class R>
GramMatrix<R> gram_with_cache(const DomainSpec& d, const CommonOpts& o, int degree,
                              bool* cache_hit = nullptr) {
  const auto rule = build_rule<R>(d, o.order, o.panels, o.grading, o.depth);
  GramCache cache(o.cache());
  const uint64_t dh = fnv1a(d.id_hash);
  if (auto hit = cache.lookup(dh, degree, PrecisionTraits<R>::bits, rule.params_digest())) {
    if (cache_hit) *cache_hit = true;
    return std::get<GramMatrix<R>>(std::move(*hit));
  }
  if (cache_hit) *cache_hit = false;
  GramMatrix<R> g = compute_gram<R>(d, rule, degree, o.threads);
  cache.store(g);
  return g;
}

template <class F>
int with_precision(int bits, F&& f) {
  check_precision_bits(bits);
  if (bits == 53) return f(double{});
  if (bits == 106) return f(Float106{});
  return f(Float212{});
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::string cur;
  for (char ch : s + ",") {
    if (ch == ',') {
      if (!cur.empty()) out.push_back(std::stoi(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  return out;
}

Cd parse_point(const std::string& s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) return Cd(std::stod(s), 0);
  return Cd(std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1)));
}

void write_artifact(const CommonOpts& o, const std::string& name, const std::string& body) {
  write_file_atomic((fs::path(o.out_dir) / name).string(), body);
  std::cout << (fs::path(o.out_dir) / name).string() << "\n";
}

// ---------------------------------------------------------------------------

int cmd_domains(const CommonOpts& o) {
  const DomainSpec d = build_domain_file(o.domain_path);
  json j = meta_for(o, d);
  j["command"] = "domains";
  j["arcs"] = json::array();
  for (const auto& a : d.arcs)
    j["arcs"].push_back({{"kind", a.kind_name()},
                         {"start", {a.start.real(), a.start.imag()}},
                         {"end", {a.end.real(), a.end.imag()}}});
  j["z0"] = {d.z0.real(), d.z0.imag()};
  j["symmetric_real_axis"] = d.symmetric_real_axis;
  j["diameter"] = d.diameter;
  j["cusps"] = d.cusps.size();
  j["corners"] = d.corners.size();
  if (d.xi) j["xi"] = *d.xi;
  write_artifact(o, artifact_name("domains", d.id_hash, int(d.arcs.size()), "json"),
                 j.dump(2) + "\n");
  std::string csv = "re,im\n";
  for (const Cd p : d.boundary_sample)
    csv += real_to_string(p.real()) + "," + real_to_string(p.imag()) + "\n";
  write_artifact(o, artifact_name("domains", d.id_hash, int(d.arcs.size()), "csv"), csv);
  return 0;
}

int cmd_gram(const CommonOpts& o, int degree) {
  const DomainSpec d = build_domain_file(o.domain_path);
  return with_precision(o.precision, [&](auto tag) {
    using R = decltype(tag);
    bool hit = false;
    const GramMatrix<R> g = gram_with_cache<R>(d, o, degree, &hit);
    json j = meta_for(o, d);
    j["command"] = "gram";
    j["degree"] = degree;
    j["area"] = static_cast<double>(g.area());
    j["cache_hit"] = hit;
    write_artifact(o, artifact_name("gram", d.id_hash, degree, "json"), j.dump(2) + "\n");
    write_artifact(o, artifact_name("gram", d.id_hash, degree, "csv"), gram_to_csv(g));
    const std::string bin =
        (fs::path(o.out_dir) / artifact_name("gram", d.id_hash, degree, "bin")).string();
    save_gram_binary(bin, g);
    std::cout << bin << "\n";
    return 0;
  });
}

int cmd_basis(const CommonOpts& o, int degree, const std::string& method) {
  const DomainSpec d = build_domain_file(o.domain_path);
  const json cfg = read_config(o.domain_path);
  return with_precision(o.precision, [&](auto tag) {
    using R = decltype(tag);
    json j = meta_for(o, d);
    j["command"] = "basis";
    j["degree"] = degree;
    std::string csv;
    if (method == "arnoldi") {
      DiscreteMeasure mu;
      const int side = std::max(48, 2 * (degree + 1));
      if (d.gallery == "disk")
        mu = disk_measure(cfg.value("radius", 1.0), side, 2 * side);
      else if (d.gallery == "ellipse")
        mu = ellipse_measure(cfg.value("a", 1.0), cfg.value("b", 0.5), side, 2 * side);
      else if (d.gallery == "lune")
        mu = lune_measure(side, 2 * side);
      else
        throw ValidationError("arnoldi path has interior measures for disk, ellipse, lune");
      const OrthoBasis<double> basis = orthonormalize_arnoldi(d, mu, degree);
      j["method"] = basis.method;
      j["residual"] = basis.residual;
      j["condition_estimate"] = basis.condition_estimate;
      csv = basis_to_csv(basis);
    } else {
      const GramMatrix<R> g = gram_with_cache<R>(d, o, degree);
      const OrthoBasis<R> basis = orthonormalize_cholesky(g);
      j["method"] = basis.method;
      j["residual"] = basis.residual;
      j["condition_estimate"] = basis.condition_estimate;
      csv = basis_to_csv(basis);
    }
    write_artifact(o, artifact_name("basis", d.id_hash, degree, "json"), j.dump(2) + "\n");
    write_artifact(o, artifact_name("basis", d.id_hash, degree, "csv"), csv);
    return 0;
  });
}

int cmd_bieberbach(const CommonOpts& o, int n, const std::string& z0_str,
                   const std::string& eval_str, const std::string& method) {
  const DomainSpec d = build_domain_file(o.domain_path);
  return with_precision(o.precision, [&](auto tag) {
    using R = decltype(tag);
    const Cd z0 = z0_str.empty() ? d.z0 : parse_point(z0_str);
    const GramMatrix<R> g = gram_with_cache<R>(d, o, n - 1);
    BieberbachPoly<R> b;
    R r0n{};
    if (method == "extremal") {
      b = solve_extremal(g, n, Cplx<R>::from_std(z0));
      using std::sqrt;
      using boost::multiprecision::sqrt;
      r0n = R(1) / sqrt(boost::math::constants::pi<R>() * b.s_n);
    } else {
      const OrthoBasis<R> basis = orthonormalize_cholesky(g);
      b = bieberbach_from_basis(basis, n, Cplx<R>::from_std(z0));
      r0n = inner_radius_estimate(basis, n, Cplx<R>::from_std(z0));
    }
    json j = meta_for(o, d);
    j["command"] = "bieberbach";
    j["n"] = n;
    j["method"] = b.method;
    j["z0"] = {z0.real(), z0.imag()};
    j["s_n"] = static_cast<double>(b.s_n);
    j["inner_radius_estimate"] = static_cast<double>(r0n);
    const Cd bz0 = b.eval(Cplx<R>::from_std(z0)).to_std();
    const Cd dbz0 = b.eval_deriv(Cplx<R>::from_std(z0)).to_std();
    j["b_at_z0"] = {bz0.real(), bz0.imag()};
    j["b_prime_at_z0"] = {dbz0.real(), dbz0.imag()};
    if (!eval_str.empty()) {
      const Cd z = parse_point(eval_str);
      const Cd v = b.eval(Cplx<R>::from_std(z)).to_std();
      j["eval_point"] = {z.real(), z.imag()};
      j["eval_value"] = {v.real(), v.imag()};
    }
    write_artifact(o, artifact_name("bieberbach", d.id_hash, n, "json"), j.dump(2) + "\n");
    write_artifact(o, artifact_name("bieberbach", d.id_hash, n, "csv"), poly_to_csv(b));
    return 0;
  });
}

int cmd_error_curve(const CommonOpts& o, const std::string& nlist_str) {
  const DomainSpec d = build_domain_file(o.domain_path);
  const json cfg = read_config(o.domain_path);
  const ReferenceMap ref = reference_for(cfg);
  const auto n_list = parse_int_list(nlist_str);
  if (n_list.empty()) throw ValidationError("empty n-list");
  return with_precision(o.precision, [&](auto tag) {
    using R = decltype(tag);
    const GramMatrix<R> g = gram_with_cache<R>(d, o, n_list.back() - 1);
    const OrthoBasis<R> basis = orthonormalize_cholesky(g);
    const ErrorCurve curve = sup_error_curve(d, basis, ref, n_list);
    json j = meta_for(o, d);
    j["command"] = "error-curve";
    j["boundary_samples"] = curve.boundary_samples;
    j["interior_samples"] = curve.interior_samples;
    j["points"] = json::array();
    for (auto [nn, e] : curve.points) j["points"].push_back({{"n", nn}, {"error", e}});
    write_artifact(o, artifact_name("error-curve", d.id_hash, n_list.back(), "json"),
                   j.dump(2) + "\n");
    std::string csv = "n,error\n";
    for (auto [nn, e] : curve.points) csv += std::to_string(nn) + "," + real_to_string(e) + "\n";
    write_artifact(o, artifact_name("error-curve", d.id_hash, n_list.back(), "csv"), csv);
    return 0;
  });
}

int cmd_rate_fit(const CommonOpts& o, const std::string& curve_path) {
  const std::string text = read_file(curve_path);
  ErrorCurve curve;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || std::isalpha(static_cast<unsigned char>(line[0])))
      continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) continue;
    curve.points.emplace_back(std::stoi(line.substr(0, comma)),
                              std::stod(line.substr(comma + 1)));
  }
  const RateFit fit = fit_rate(curve);
  json j;
  j["version"] = kVersion;
  j["command"] = "rate-fit";
  j["config_digest"] = hex64(fnv1a(text));
  j["C"] = fit.C;
  j["q"] = fit.q;
  j["r"] = fit.r;
  j["r2"] = fit.r2;
  j["n_min"] = fit.n_min;
  j["n_max"] = fit.n_max;
  write_artifact(
      o, artifact_name("rate-fit", hex64(fnv1a(text)), int(curve.points.size()), "json"),
      j.dump(2) + "\n");
  return 0;
}

int cmd_cusp_fit(const CommonOpts& o, double p, double t0, int count) {
  const DomainSpec d = build_domain_file(o.domain_path);
  const json cfg = read_config(o.domain_path);
  const ReferenceMap ref = reference_for(cfg);
  std::vector<Cd> ts;
  for (int jj = 0; jj < count; ++jj) ts.push_back(ref.approach(t0 * std::pow(2.0, -jj)));
  const CuspFit fit = fit_cusp_decay(ref, ref.cusp_vertex(), p, ts);
  const CuspFit alt = fit_cusp_decay(ref, ref.cusp_vertex(), p + 1, ts);
  json j = meta_for(o, d);
  j["command"] = "cusp-fit";
  j["p"] = p;
  j["C"] = fit.C;
  j["c"] = fit.c;
  j["r2"] = fit.r2;
  j["points_used"] = fit.points_used;
  j["alt_p"] = p + 1;
  j["alt_r2"] = alt.r2;
  write_artifact(o, artifact_name("cusp-fit", d.id_hash, int(p), "json"), j.dump(2) + "\n");
  return 0;
}

int cmd_diverge(const CommonOpts& o, double x0, const std::string& nlist_str) {
  const DomainSpec d = build_domain_file(o.domain_path);
  const auto caps = parse_int_list(nlist_str);
  if (caps.empty()) throw ValidationError("empty N-list");
  return with_precision(o.precision, [&](auto tag) {
    using R = decltype(tag);
    const GramMatrix<R> g = gram_with_cache<R>(d, o, caps.back() - 1);
    const OrthoBasis<R> basis = orthonormalize_cholesky(g);
    const DivergenceReport rep = divergence_probe(d, basis, x0, caps);
    json j = meta_for(o, d);
    j["command"] = "diverge";
    j["x0"] = x0;
    j["sup_by_n"] = json::array();
    for (auto [nn, s] : rep.sup_by_n) j["sup_by_n"].push_back({{"N", nn}, {"sup", s}});
    j["growth_factor"] = rep.growth_factor;
    j["verdict"] = rep.verdict;
    write_artifact(o, artifact_name("diverge", d.id_hash, caps.back(), "json"),
                   j.dump(2) + "\n");
    std::string csv = "n,abs_bn\n";
    for (auto [nn, v] : rep.values) csv += std::to_string(nn) + "," + real_to_string(v) + "\n";
    write_artifact(o, artifact_name("diverge", d.id_hash, caps.back(), "csv"), csv);
    return 0;
  });
}

int cmd_keldysh(const CommonOpts& o, int stages, int budget, double xi_step) {
  KeldyshOptions opt;
  opt.stages = stages;
  opt.degree_budget = budget;
  opt.xi_step = xi_step;
  opt.threads = o.threads;
  const KeldyshResult res = keldysh_iterate(opt);
  json j;
  j["version"] = kVersion;
  j["command"] = "keldysh";
  j["degree_budget"] = res.degree_budget;
  j["completed"] = res.completed;
  j["note"] = res.note;
  j["stages"] = json::array();
  for (const auto& s : res.stages) {
    json js;
    js["domain_hash"] = s.domain_hash;
    js["xi_next"] = s.xi_next;
    js["n_m"] = s.n_m;
    js["target"] = s.target;
    js["certificate_value"] = s.certificate_value;
    js["delta"] = s.delta;
    js["stability_max"] = s.stability_max;
    js["stability_bound"] = s.stability_bound;
    js["certificate_coeffs"] = s.certificate_coeffs;
    j["stages"].push_back(js);
  }
  const std::string hash = res.stages.empty() ? "none" : res.stages.front().domain_hash;
  j["config_digest"] = hash;
  write_artifact(o, artifact_name("keldysh", hash, budget, "json"), j.dump(2) + "\n");
  return res.completed ? 0 : 2;
}

int cmd_report(const CommonOpts& o, const std::string& dir) {
  std::vector<std::string> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.path().extension() == ".json" &&
        entry.path().filename().string().rfind("report-", 0) != 0)
      files.push_back(entry.path().filename().string());
  std::sort(files.begin(), files.end());
  json j;
  j["version"] = kVersion;
  j["command"] = "report";
  j["artifacts"] = json::array();
  std::string all;
  for (const auto& f : files) {
    const std::string body = read_file((fs::path(dir) / f).string());
    all += body;
    json e;
    e["file"] = f;
    e["digest"] = hex64(fnv1a(body));
    try {
      json parsed = json::parse(body);
      e["artifact_command"] = parsed.value("command", "");
      e["config_digest"] = parsed.value("config_digest", "");
    } catch (...) {
    }
    j["artifacts"].push_back(e);
  }
  j["config_digest"] = hex64(fnv1a(all));
  write_artifact(o, artifact_name("report", hex64(fnv1a(all)), int(files.size()), "json"),
                 j.dump(2) + "\n");
  std::string csv = "file,digest\n";
  for (const auto& e : j["artifacts"])
    csv += e["file"].get<std::string>() + "," + e["digest"].get<std::string>() + "\n";
  write_artifact(o, artifact_name("report", hex64(fnv1a(all)), int(files.size()), "csv"), csv);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bergman-kernel conformal mapping toolkit"};
  app.require_subcommand(1);

  CommonOpts o;
  int degree = 8, n = 5, stages = 1, budget = 120, count = 7;
  double x0 = 0.8, p = 2, t0 = 0.2, xi_step = 0.2;
  std::string nlist, method = "cholesky", z0_str, eval_str, curve_path, report_dir = "out";

  auto* c_dom = app.add_subcommand("domains", "validate a domain config and dump it");
  add_common(c_dom, o);

  auto* c_gram = app.add_subcommand("gram", "compute the area-moment matrix");
  add_common(c_gram, o);
  c_gram->add_option("--degree", degree, "matrix degree N")->required();

  auto* c_basis = app.add_subcommand("basis", "orthonormal polynomial basis");
  add_common(c_basis, o);
  c_basis->add_option("--degree", degree)->required();
  c_basis->add_option("--method", method, "cholesky or arnoldi");

  auto* c_bb = app.add_subcommand("bieberbach", "Bieberbach polynomial B_n");
  add_common(c_bb, o);
  c_bb->add_option("--n", n)->required();
  c_bb->add_option("--z0", z0_str, "base point override (re[,im])");
  c_bb->add_option("--eval", eval_str, "evaluate B_n at this point");
  c_bb->add_option("--method", method, "formula or extremal");

  auto* c_curve = app.add_subcommand("error-curve", "sup-norm error against the reference");
  add_common(c_curve, o);
  c_curve->add_option("--nlist", nlist, "ascending comma-separated n values")->required();

  auto* c_rate = app.add_subcommand("rate-fit", "fit C*q^(n^r) to an error curve");
  add_common(c_rate, o, false);
  c_rate->add_option("--curve", curve_path, "error-curve CSV")->required();

  auto* c_cusp = app.add_subcommand("cusp-fit", "cusp decay regression on the lune");
  add_common(c_cusp, o);
  c_cusp->add_option("--p", p, "tangency exponent");
  c_cusp->add_option("--t0", t0, "largest sample height");
  c_cusp->add_option("--count", count, "number of dyadic samples");

  auto* c_div = app.add_subcommand("diverge", "Bieberbach growth probe beyond xi");
  add_common(c_div, o);
  c_div->add_option("--x0", x0, "probe point on the real axis")->required();
  c_div->add_option("--N", nlist, "ascending N caps, e.g. 20,40,80")->required();

  auto* c_kel = app.add_subcommand("keldysh", "staged divergence construction");
  add_common(c_kel, o, false);
  c_kel->add_option("--stages", stages);
  c_kel->add_option("--budget", budget);
  c_kel->add_option("--xi-step", xi_step);

  auto* c_rep = app.add_subcommand("report", "aggregate artifact index");
  add_common(c_rep, o, false);
  c_rep->add_option("--dir", report_dir, "artifact directory to scan");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (c_dom->parsed()) return cmd_domains(o);
    if (c_gram->parsed()) return cmd_gram(o, degree);
    if (c_basis->parsed()) return cmd_basis(o, degree, method);
    if (c_bb->parsed()) return cmd_bieberbach(o, n, z0_str, eval_str, method);
    if (c_curve->parsed()) return cmd_error_curve(o, nlist);
    if (c_rate->parsed()) return cmd_rate_fit(o, curve_path);
    if (c_cusp->parsed()) return cmd_cusp_fit(o, p, t0, count);
    if (c_div->parsed()) return cmd_diverge(o, x0, nlist);
    if (c_kel->parsed()) return cmd_keldysh(o, stages, budget, xi_step);
    if (c_rep->parsed()) return cmd_report(o, report_dir);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
