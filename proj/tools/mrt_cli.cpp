// Command-line driver: phantoms, transforms, decompositions, identity and
// kernel experiments on symmetric tensor fields.
#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <sstream>

#include "mrt/helmholtz.hpp"
#include "mrt/identity.hpp"
#include "mrt/io.hpp"
#include "mrt/phantom.hpp"
#include "mrt/recover.hpp"
#include "mrt/separation.hpp"

namespace {

using namespace mrt;

struct GlobalOpts {
  int grid = 17;
  std::uint64_t seed = 0;
  double tol = 1e-8;
  std::string out;
  std::string format = "text";
};

void emit_metrics(const GlobalOpts& g, const std::vector<std::pair<std::string, double>>& kv) {
  std::ostringstream os;
  os.precision(12);
  size_t width = 0;
  for (const auto& [k, v] : kv) width = std::max(width, k.size());
  for (const auto& [k, v] : kv) {
    if (g.format == "csv") {
      os << k << "," << v << "\n";
    } else {
      os << k;
      for (size_t i = k.size(); i < width + 2; ++i) os << ' ';
      os << v << "\n";
    }
  }
  std::cout << os.str();
  if (!g.out.empty()) atomic_write(g.out, os.str());
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) out.push_back(std::stod(tok));
  }
  return out;
}

CoefficientSet load_coefficients(const std::string& prefix, int m) {
  CoefficientSet cs;
  cs.m = m;
  for (int l = 0; l < 2 * m; ++l) {
    cs.a.push_back(read_stf(prefix + "_a" + std::to_string(l) + ".stf"));
    if (cs.a.back().rank() != l) throw validation_error("coefficient file rank mismatch at order " + std::to_string(l));
    if (!cs.a.back().grid().same_as(cs.a[0].grid())) throw validation_error("coefficient grids differ");
  }
  return cs;
}

int run_phantom(const GlobalOpts& g, const std::string& kind, int n, bool binary) {
  const GridDomain grid = GridDomain::cube(n, g.grid);
  if (kind == "ball") {
    write_stf(g.out.empty() ? "ball.stf" : g.out, scalar_bump_field(grid), binary);
  } else if (kind == "tracefree") {
    write_stf(g.out.empty() ? "tracefree.stf" : g.out, trace_free_bump_field(grid, g.seed), binary);
  } else if (kind == "divfree") {
    write_stf(g.out.empty() ? "divfree.stf" : g.out, divergence_free_phantom(grid, 2), binary);
  } else if (kind == "gauge") {
    const std::string prefix = g.out.empty() ? "gauge" : g.out;
    const CoefficientSet cs = make_planted_coefficients(
        n == 3 ? grid : GridDomain::cube(3, g.grid), PlantKind::gauge, g.seed);
    for (size_t l = 0; l < cs.a.size(); ++l) {
      write_stf(prefix + "_a" + std::to_string(l) + ".stf", cs.a[l], binary);
    }
  } else {
    throw validation_error("unknown phantom kind '" + kind + "'");
  }
  return 0;
}

int run_mrt(const GlobalOpts& g, const std::vector<std::string>& inputs, int k, int nrays,
            const std::string& rays_in) {
  MixedField F;
  for (const auto& path : inputs) F.push_back(read_stf(path));
  validate_mixed_field(F);
  std::vector<Ray> rays;
  if (!rays_in.empty()) {
    rays = read_ray_table(rays_in, F[0].dim()).first;
    for (auto& r : rays) r.k = k;
  } else {
    rays = make_ray_set(F[0].grid(), nrays, k, g.seed);
  }
  const auto values = transform_rays(F, rays);
  write_ray_table(g.out.empty() ? "rays.csv" : g.out, rays, values);
  return 0;
}

int run_separate(const GlobalOpts& g, int m, const std::string& c_str, const std::string& rhs_str) {
  const auto c = parse_list(c_str);
  const auto rhs_flat = parse_list(rhs_str);
  if (static_cast<int>(rhs_flat.size()) != 2 * (m + 1)) {
    throw validation_error("separate: rhs needs m+1 complex values (re,im pairs)");
  }
  const SeparationMatrix A = separation_matrix(m, c);
  std::vector<cplx> rhs(static_cast<size_t>(m + 1));
  for (int i = 0; i <= m; ++i) rhs[static_cast<size_t>(i)] = cplx(rhs_flat[static_cast<size_t>(2 * i)], rhs_flat[static_cast<size_t>(2 * i + 1)]);
  const auto x = separate_components(A, rhs);
  std::vector<std::pair<std::string, double>> kv;
  const auto det = determinant_check(m, c);
  kv.emplace_back("det_lu", det.computed);
  kv.emplace_back("det_formula", det.formula);
  for (int j = 0; j <= m; ++j) {
    kv.emplace_back("I" + std::to_string(m - j) + "F" + std::to_string(m - j) + "_re", x[static_cast<size_t>(j)].real());
    kv.emplace_back("I" + std::to_string(m - j) + "F" + std::to_string(m - j) + "_im", x[static_cast<size_t>(j)].imag());
  }
  emit_metrics(g, kv);
  return 0;
}

int run_kernel(const GlobalOpts& g, int m, int n, int nrays) {
  const KernelProbeReport rep = kernel_probe(m, n, g.grid, nrays, g.seed);
  emit_metrics(g, rep.as_metrics());
  return 0;
}

int run_gauge(const GlobalOpts& g, int m) {
  const GridDomain grid = GridDomain::cube(2, g.grid);
  const GaugeReport rep = gauge_experiment(m, zero_jet_bump_poly(2, m), grid);
  emit_metrics(g, rep.as_metrics());
  return 0;
}

int run_identity(const GlobalOpts& g, const std::string& prefix, int m, int basis_deg) {
  const CoefficientSet cs = load_coefficients(prefix, m);
  const int n = cs.grid().dim();
  const auto basis = polyharmonic_basis(m, basis_deg, n);
  std::vector<std::pair<std::string, double>> kv;
  double worst = 0.0;
  int idx = 0;
  for (size_t i = 0; i < basis.size(); i += 2) {
    for (size_t j = 0; j < basis.size(); j += 3) {
      const TensorField u = make_field(cs.grid(), 0, [&](std::span<const double> x) {
        return SymTensor::scalar(n, basis[i].eval(x));
      });
      const TensorField v = make_field(cs.grid(), 0, [&](std::span<const double> x) {
        return SymTensor::scalar(n, basis[j].eval(x));
      });
      const IdentityReport rep = integral_identity(cs, u, v);
      kv.emplace_back("value_abs_" + std::to_string(idx), std::abs(rep.value));
      kv.emplace_back("quad_tol_" + std::to_string(idx), rep.quad_tol);
      if (rep.quad_tol > 0.0) worst = std::max(worst, std::abs(rep.value) / rep.quad_tol);
      ++idx;
    }
  }
  kv.emplace_back("max_ratio_to_tol", worst);
  emit_metrics(g, kv);
  return 0;
}

int run_decompose(const GlobalOpts& g, const std::string& in, bool binary) {
  const TensorField f = read_stf(in);
  const DecompositionResult res = helmholtz_trace_free(f, g.tol);
  const std::string prefix = g.out.empty() ? "decomp" : g.out;
  write_stf(prefix + "_ftilde.stf", res.f_tilde, binary);
  if (res.v.has_value()) write_stf(prefix + "_v.stf", *res.v, binary);
  write_stf(prefix + "_phi.stf", res.phi, binary);
  write_report(prefix + "_metrics.txt", res.as_metrics());
  GlobalOpts g2 = g;
  g2.out.clear();
  emit_metrics(g2, res.as_metrics());
  return 0;
}

int run_hypotheses(const GlobalOpts& g, const std::string& in, int m) {
  const TensorField a = read_stf(in);
  const HypothesisReport rep = hypothesis_check(a, m);
  emit_metrics(g, rep.as_metrics());
  return 0;
}

int run_recover(const GlobalOpts& g, const std::string& kind, int dirs) {
  const GridDomain grid = GridDomain::cube(3, g.grid);
  const RecoveryReport rep = moment_recovery_demo(grid, plant_kind_from_string(kind), dirs, g.seed);
  emit_metrics(g, rep.as_metrics());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"symmetric tensor field tomography toolbox"};
  app.require_subcommand(1);

  GlobalOpts g;
  app.add_option("--grid", g.grid, "points per axis")->capture_default_str();
  app.add_option("--seed", g.seed, "random seed")->capture_default_str();
  app.add_option("--tol", g.tol, "solver tolerance")->capture_default_str();
  app.add_option("--out", g.out, "output path or prefix");
  app.add_option("--format", g.format, "report format: text or csv")
      ->check(CLI::IsMember({"text", "csv"}));

  auto* phantom = app.add_subcommand("phantom", "write built-in phantom fields");
  std::string ph_kind = "ball";
  int ph_n = 2;
  bool ph_binary = false;
  phantom->add_option("--kind", ph_kind, "ball | tracefree | gauge | divfree");
  phantom->add_option("--n", ph_n, "dimension")->capture_default_str();
  phantom->add_flag("--binary", ph_binary, "binary STF payload");

  auto* mrtcmd = app.add_subcommand("mrt", "forward momentum ray transform to a ray table");
  std::vector<std::string> mrt_in;
  int mrt_k = 0, mrt_rays = 100;
  std::string mrt_rays_in;
  mrtcmd->add_option("--in", mrt_in, "STF inputs, ranks 0..m in order")->required();
  mrtcmd->add_option("--k", mrt_k, "momentum order");
  mrtcmd->add_option("--rays", mrt_rays, "number of generated rays")->capture_default_str();
  mrtcmd->add_option("--rays-in", mrt_rays_in, "read ray geometry from a ray-table CSV");

  auto* sep = app.add_subcommand("separate", "solve the order-separation system");
  int sep_m = 1;
  std::string sep_c = "1,1", sep_rhs;
  sep->add_option("--m", sep_m, "top order");
  sep->add_option("--c", sep_c, "comma-separated constants c_0..c_m");
  sep->add_option("--rhs", sep_rhs, "comma-separated re,im pairs, m+1 rows")->required();

  auto* kern = app.add_subcommand("kernel", "kernel probe report for I^m");
  int k_m = 2, k_n = 2, k_rays = 200;
  kern->add_option("--m", k_m, "transform order");
  kern->add_option("--n", k_n, "dimension");
  kern->add_option("--rays", k_rays, "ray count")->capture_default_str();

  auto* gauge = app.add_subcommand("gauge-check", "conjugation gauge experiment");
  int gauge_m = 2;
  gauge->add_option("--m", gauge_m, "operator half-order (2 or 3)");

  auto* ident = app.add_subcommand("identity", "integral identity over a polyharmonic basis");
  std::string id_prefix;
  int id_m = 2, id_deg = 4;
  ident->add_option("--coeffs", id_prefix, "coefficient STF prefix (expects <prefix>_a0.stf ...)")->required();
  ident->add_option("--m", id_m, "operator half-order");
  ident->add_option("--basis-deg", id_deg, "polyharmonic degree cap")->capture_default_str();

  auto* dec = app.add_subcommand("decompose", "trace-free Helmholtz decomposition");
  std::string dec_in;
  bool dec_binary = false;
  dec->add_option("--in", dec_in, "input STF field (rank 1 or 2)")->required();
  dec->add_flag("--binary", dec_binary, "binary STF payloads");

  auto* hyp = app.add_subcommand("hypotheses", "divergence/trace/boundary-jet residuals");
  std::string hyp_in;
  int hyp_m = 2;
  hyp->add_option("--in", hyp_in, "top-order coefficient STF (rank 2m-1)")->required();
  hyp->add_option("--m", hyp_m, "operator half-order");

  auto* rec = app.add_subcommand("recover", "moment recovery demonstration (m=2, n=3)");
  std::string rec_kind = "bump";
  int rec_dirs = 64;
  rec->add_option("--kind", rec_kind, "zero | bump | gauge");
  rec->add_option("--dirs", rec_dirs, "number of directions")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (phantom->parsed()) return run_phantom(g, ph_kind, ph_n, ph_binary);
    if (mrtcmd->parsed()) return run_mrt(g, mrt_in, mrt_k, mrt_rays, mrt_rays_in);
    if (sep->parsed()) return run_separate(g, sep_m, sep_c, sep_rhs);
    if (kern->parsed()) return run_kernel(g, k_m, k_n, k_rays);
    if (gauge->parsed()) return run_gauge(g, gauge_m);
    if (ident->parsed()) return run_identity(g, id_prefix, id_m, id_deg);
    if (dec->parsed()) return run_decompose(g, dec_in, dec_binary);
    if (hyp->parsed()) return run_hypotheses(g, hyp_in, hyp_m);
    if (rec->parsed()) return run_recover(g, rec_kind, rec_dirs);
  } catch (const mrt::validation_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const mrt::numeric_guard_error& e) {
    std::cerr << "numeric guard: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
