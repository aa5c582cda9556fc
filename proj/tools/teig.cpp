// teig: command-line front end.
//
// Exit codes:
//   0  success
//   1  verification failed, or the inversion did not converge
//   2  schema error in an input file or flag
//   3  D is identically zero (trivial profile)
//   4  regime refusal (inversion not covered, or gamma required)
//   5  any other numerical failure

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include <teig/teig.hpp>

namespace {

using teig::io::json;

struct RunConfig {
  std::string profile_path;
  std::string data_path;
  std::string region_spec;
  double resolution = 1e-4;
  long truncation = -1;
  std::string out_path;
  std::string format = "csv";
  unsigned workers = 0;
  std::string plot_path;
  int plot_n = 64;
  int count = 20;
  // --tol-* overrides
  double tol_rtol = 1e-12;
  double tol_atol = 1e-14;
  double tol_panel = 1e-4;
  double tol_integer = 0.1;
  double tol_zero_on_contour = 1e-12;
  std::optional<double> tol_fit;  // override the file's targets when given
  std::optional<int> max_iterations;
};

int exit_code_for(teig::ErrorCode c) {
  using teig::ErrorCode;
  switch (c) {
    case ErrorCode::SchemaError:
    case ErrorCode::InvalidProfile:
    case ErrorCode::NonPositiveProfile:
      return 2;
    case ErrorCode::IdenticallyZero:
      return 3;
    case ErrorCode::RegimeMismatch:
    case ErrorCode::GammaMissing:
      return 4;
    default:
      return 5;
  }
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw teig::Error(teig::ErrorCode::SchemaError, "cannot write " + path);
  f << text;
}

teig::ShootingTolerances shooting_tol(const RunConfig& c) {
  teig::ShootingTolerances t;
  t.rtol = c.tol_rtol;
  t.atol = c.tol_atol;
  return t;
}

teig::SpectraOptions spectra_opts(const RunConfig& c) {
  teig::SpectraOptions o;
  o.resolution = c.resolution;
  o.panel_tol = c.tol_panel;
  o.integer_tolerance = c.tol_integer;
  o.zero_on_contour_rel = c.tol_zero_on_contour;
  o.workers = c.workers;
  return o;
}

teig::ContourBox parse_region(const std::string& s) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw teig::Error(teig::ErrorCode::SchemaError, "--region: cannot parse '" + tok + "'");
    }
  }
  if (v.size() != 4) throw teig::Error(teig::ErrorCode::SchemaError, "--region needs re_lo,re_hi,im_lo,im_hi");
  for (double x : v)
    if (!std::isfinite(x)) throw teig::Error(teig::ErrorCode::SchemaError, "--region must be finite");
  if (!(v[0] < v[1] && v[2] < v[3])) throw teig::Error(teig::ErrorCode::SchemaError, "--region is empty");
  return teig::ContourBox{v[0], v[1], v[2], v[3]};
}

bool profile_is_trivial(const teig::Profile& p) {
  return p.is_constant(p.kind() == teig::ProfileKind::WaveSpeedRho ? 1.0 : 0.0, 1e-14);
}

[[noreturn]] void trivial_exit(const teig::Profile& p) {
  if (p.kind() == teig::ProfileKind::WaveSpeedRho)
    throw teig::Error(teig::ErrorCode::IdenticallyZero, "D identically zero => rho = 1 (trivial profile)");
  throw teig::Error(teig::ErrorCode::IdenticallyZero, "D identically zero => V = 0 (trivial potential)");
}

std::string plot_csv(const teig::DispersionEvaluator& ev, const teig::ContourBox& r, int n) {
  std::ostringstream o;
  o << "re,im,abs_D,arg_D\n";
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double re = r.re_lo + (r.re_hi - r.re_lo) * i / (n - 1.0);
      const double im = r.im_lo + (r.im_hi - r.im_lo) * j / (n - 1.0);
      const auto d = ev.fn({re, im}).value;
      o << teig::io::fmt(re) << ',' << teig::io::fmt(im) << ',' << teig::io::fmt(std::abs(d)) << ','
        << teig::io::fmt(std::arg(d)) << '\n';
    }
  }
  return o.str();
}

int cmd_forward(const RunConfig& c) {
  const auto p = teig::io::profile_from_json(teig::io::read_json_file(c.profile_path));
  if (profile_is_trivial(p)) trivial_exit(p);
  const auto region = c.region_spec.empty() ? teig::default_search_region(p, c.truncation > 0 ? static_cast<int>(c.truncation) : 4)
                                            : parse_region(c.region_spec);
  const auto ev = teig::make_evaluator(p, shooting_tol(c));
  const auto recs = teig::find_eigenvalues(ev, region, spectra_opts(c));
  if (c.format == "json") write_output(c.out_path, teig::io::records_json(recs).dump(2) + "\n");
  else write_output(c.out_path, teig::io::records_csv(recs));
  if (!c.plot_path.empty()) write_output(c.plot_path, plot_csv(ev, region, c.plot_n));
  return 0;
}

json report_json(const teig::VerifyReport& r) {
  json j;
  j["profile"] = r.profile_name;
  j["trivial"] = r.trivial;
  if (r.trivial) j["note"] = r.trivial_note;
  j["passed"] = r.passed();
  json checks = json::array();
  for (const auto& ch : r.checks) {
    json cj;
    cj["name"] = ch.name;
    cj["status"] = ch.skipped ? "skipped" : (ch.passed ? "pass" : "fail");
    if (!ch.skipped) {
      cj["residual"] = std::isfinite(ch.residual) ? json(ch.residual) : json(nullptr);
      cj["tolerance"] = ch.tolerance;
    }
    if (!ch.note.empty()) cj["note"] = ch.note;
    checks.push_back(cj);
  }
  j["checks"] = checks;
  return j;
}

int cmd_verify(const RunConfig& c) {
  const auto p = teig::io::profile_from_json(teig::io::read_json_file(c.profile_path));
  teig::VerifyOptions o;
  o.shoot = shooting_tol(c);
  o.spectra = spectra_opts(c);
  if (!c.region_spec.empty()) o.region = parse_region(c.region_spec);
  if (c.truncation > 0) o.lattice_indices = static_cast<int>(c.truncation);
  const auto r = teig::run_invariant_suite(p, o);
  write_output(c.out_path, report_json(r).dump(2) + "\n");
  return r.passed() ? 0 : 1;
}

int cmd_invert(const RunConfig& c) {
  auto in = teig::io::inversion_input_from_json(teig::io::read_json_file(c.data_path));
  in.targets.workers = c.workers;
  if (c.tol_fit) in.targets.tolerance = *c.tol_fit;
  if (c.max_iterations) in.targets.max_iterations = *c.max_iterations;
  if (c.truncation > 0) in.targets.zero_groups = static_cast<std::size_t>(c.truncation);
  const auto res = teig::fit_profile(in.problem, in.targets);
  write_output(c.out_path, teig::io::to_json(res).dump(2) + "\n");
  if (!res.converged) std::cerr << "teig: inversion did not converge (misfit " << res.misfit << ")\n";
  return res.converged ? 0 : 1;
}

// Samples of phi(b) and phi'(b) on the sine and cosine lattices, from either
// a profile (direct D) or spectral data (reconstructed D).
int cmd_sample_grid(const RunConfig& c) {
  teig::ComplexFn dsrc;
  double b = 0.0;
  if (!c.profile_path.empty()) {
    const auto p = teig::io::profile_from_json(teig::io::read_json_file(c.profile_path));
    if (profile_is_trivial(p)) trivial_exit(p);
    b = p.b();
    const auto tol = shooting_tol(c);
    if (p.kind() == teig::ProfileKind::WaveSpeedRho) dsrc = [p, tol](teig::cplx l) { return teig::eval_D(p, l, tol).value; };
    else dsrc = [p, tol](teig::cplx l) { return teig::eval_D_schrodinger(p, l, tol).value; };
  } else if (!c.data_path.empty()) {
    const auto j = teig::io::read_json_file(c.data_path);
    const auto s = teig::io::spectral_data_from_json(j);
    if (s.trivial()) throw teig::Error(teig::ErrorCode::IdenticallyZero, "D identically zero => trivial profile");
    if (!j.contains("b")) throw teig::Error(teig::ErrorCode::SchemaError, "sample-grid from spectral data needs 'b'");
    b = j["b"].get<double>();
    const std::size_t trunc = c.truncation > 0 ? static_cast<std::size_t>(c.truncation) : teig::zero_groups(s).size();
    dsrc = [s, trunc](teig::cplx l) { return teig::reconstruct_D(s, l, trunc); };
  } else {
    throw teig::Error(teig::ErrorCode::SchemaError, "sample-grid needs --profile or --spectral-data");
  }
  const auto phi = teig::sample_phi_grid(dsrc, b, c.count);
  const auto dphi = teig::sample_dphi_grid(dsrc, b, c.count);
  if (c.format == "json") {
    json j;
    auto arr = [](const auto& v) {
      json a = json::array();
      for (const auto& [l, x] : v) a.push_back({{"lambda", l}, {"re", x.real()}, {"im", x.imag()}});
      return a;
    };
    j["phi_b"] = arr(phi);
    j["dphi_b"] = arr(dphi);
    write_output(c.out_path, j.dump(2) + "\n");
  } else {
    std::ostringstream o;
    o << "grid,n,lambda,re,im\n";
    for (std::size_t i = 0; i < phi.size(); ++i)
      o << "phi_b," << i + 1 << ',' << teig::io::fmt(phi[i].first) << ',' << teig::io::fmt(phi[i].second.real()) << ','
        << teig::io::fmt(phi[i].second.imag()) << '\n';
    for (std::size_t i = 0; i < dphi.size(); ++i)
      o << "dphi_b," << i + 1 << ',' << teig::io::fmt(dphi[i].first) << ',' << teig::io::fmt(dphi[i].second.real())
        << ',' << teig::io::fmt(dphi[i].second.imag()) << '\n';
    write_output(c.out_path, o.str());
  }
  return 0;
}

// Lattice n^2 pi^2/(a-b)^2 next to the Dirichlet and Dirichlet-Neumann
// spectra and the envelope diagnostics at the lattice points.
int cmd_asymptotics(const RunConfig& c) {
  const auto p = teig::io::profile_from_json(teig::io::read_json_file(c.profile_path));
  if (p.kind() != teig::ProfileKind::WaveSpeedRho)
    throw teig::Error(teig::ErrorCode::SchemaError, "asymptotics needs a rho profile");
  const double a = teig::travel_time(p);
  const auto tol = shooting_tol(c);
  const auto dir = teig::dirichlet_spectrum(p, c.count, tol);
  const auto dn = teig::dirichlet_neumann_spectrum(p, c.count, tol);
  std::optional<teig::LiouvilleImage> img;
  if (p.smoothness() == teig::Smoothness::C1) img = teig::liouville_transform(p);
  std::ostringstream o;
  o << "n,lattice,dirichlet,dirichlet_neumann,envelope_ratio_phi\n";
  const bool has_lattice = teig::classify_regime(a, p.b()) != teig::Regime::AEqualsB;
  for (int n = 1; n <= c.count; ++n) {
    const auto i = static_cast<std::size_t>(n - 1);
    o << n << ',' << (has_lattice ? teig::io::fmt(teig::asymptotic_lattice(p, n)) : std::string{}) << ','
      << teig::io::fmt(dir[i]) << ',' << teig::io::fmt(dn[i]) << ',';
    if (img) o << teig::io::fmt(teig::envelope_check(teig::shoot_wave(p, dir[i], tol), *img).ratio_phi);
    o << '\n';
  }
  write_output(c.out_path, o.str());
  std::cerr << "travel time a = " << teig::io::fmt(a) << ", b = " << teig::io::fmt(p.b()) << ", regime "
            << teig::to_string(teig::classify_regime(a, p.b())) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"teig: transmission eigenvalues of radially symmetric media"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto common = [&cfg](CLI::App* s) {
    s->add_option("--out", cfg.out_path, "Output file (default stdout)");
    s->add_option("--format", cfg.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    s->add_option("--workers", cfg.workers, "Worker threads (default TEIG_WORKERS, else all cores)");
    s->add_option("--truncation", cfg.truncation, "Zero groups / lattice indices to use");
    s->add_option("--resolution", cfg.resolution, "Terminal box diameter relative to max(1,|centre|)")
        ->check(CLI::PositiveNumber);
    s->add_option("--tol-rtol", cfg.tol_rtol, "Shooting relative tolerance");
    s->add_option("--tol-atol", cfg.tol_atol, "Shooting absolute tolerance");
    s->add_option("--tol-panel", cfg.tol_panel, "Contour panel tolerance (winding units)");
    s->add_option("--tol-integer", cfg.tol_integer, "Distance of a winding number from an integer");
    s->add_option("--tol-zero-on-contour", cfg.tol_zero_on_contour, "Relative |D| floor on a contour");
  };

  auto* fwd = app.add_subcommand("forward", "Locate eigenvalues in a region");
  fwd->add_option("--profile", cfg.profile_path, "Profile JSON")->required();
  fwd->add_option("--region", cfg.region_spec, "re_lo,re_hi,im_lo,im_hi");
  fwd->add_option("--plot", cfg.plot_path, "Also write |D| and arg D on a grid over the region");
  fwd->add_option("--plot-n", cfg.plot_n, "Grid points per side for --plot")->check(CLI::Range(2, 10000));
  common(fwd);

  auto* inv = app.add_subcommand("invert", "Fit a profile to spectral data");
  inv->add_option("--spectral-data", cfg.data_path, "Inversion problem JSON")->required();
  inv->add_option("--tol-fit", cfg.tol_fit, "RMS misfit declared as converged");
  inv->add_option("--max-iterations", cfg.max_iterations, "Optimizer iteration cap");
  common(inv);

  auto* ver = app.add_subcommand("verify", "Run the invariant suite on a profile");
  ver->add_option("--profile", cfg.profile_path, "Profile JSON")->required();
  ver->add_option("--region", cfg.region_spec, "Region for the sum-rule zeros");
  common(ver);

  auto* smp = app.add_subcommand("sample-grid", "phi(b) and phi'(b) on the sampling lattices");
  smp->add_option("--profile", cfg.profile_path, "Profile JSON");
  smp->add_option("--spectral-data", cfg.data_path, "Spectral data JSON with field b");
  smp->add_option("--count", cfg.count, "Lattice points per grid")->check(CLI::PositiveNumber);
  common(smp);

  auto* asy = app.add_subcommand("asymptotics", "Lattice against Dirichlet / Dirichlet-Neumann spectra");
  asy->add_option("--profile", cfg.profile_path, "Profile JSON")->required();
  asy->add_option("--count", cfg.count, "Number of indices")->check(CLI::PositiveNumber);
  common(asy);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  if (cfg.workers == 0) cfg.workers = teig::default_workers();

  try {
    if (*fwd) return cmd_forward(cfg);
    if (*inv) return cmd_invert(cfg);
    if (*ver) return cmd_verify(cfg);
    if (*smp) return cmd_sample_grid(cfg);
    if (*asy) return cmd_asymptotics(cfg);
  } catch (const teig::Error& e) {
    std::cerr << "teig: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "teig: " << e.what() << "\n";
    return 5;
  }
  return 0;
}
