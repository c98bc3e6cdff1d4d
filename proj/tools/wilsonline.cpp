// wilsonline: command-line driver writing JSON reports.
//
// Exit status: 0 success, 2 invalid input, 3 numerical invariant violated.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include "wilsonline/expansion.hpp"
#include "wilsonline/gaussian.hpp"
#include "wilsonline/geometry.hpp"
#include "wilsonline/lie_rep.hpp"
#include "wilsonline/signature.hpp"
#include "wilsonline/spectral.hpp"
#include "wilsonline/topology.hpp"

#ifndef WILSONLINE_VERSION
#define WILSONLINE_VERSION "0.0.0"
#endif

using namespace wilsonline;
using nlohmann::json;

namespace {

constexpr int kSchemaVersion = 1;

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 failed");
  std::string out;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    out += buf;
  }
  return out;
}

struct Input {
  json doc;
  json record;  // {"path", "sha256"}
};

Input read_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open input file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  const std::string bytes = ss.str();
  Input r;
  try {
    r.doc = json::parse(bytes);
  } catch (const json::parse_error& e) {
    throw ValidationError(path + ": " + e.what());
  }
  r.record = {{"path", path}, {"sha256", sha256_hex(bytes)}};
  return r;
}

json cplx(Complex z) { return json{z.real(), z.imag()}; }

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(cplx(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

// Flat row-major [[re, im], ...] list of n * n entries.
Matrix matrix_from_json(const json& flat, int n) {
  if (!flat.is_array() || flat.size() != static_cast<std::size_t>(n * n))
    throw ValidationError("matrix must be a flat list of n*n [re, im] entries");
  Matrix m(n, n);
  for (int i = 0; i < n * n; ++i) {
    const json& e = flat[i];
    if (!e.is_array() || e.size() != 2) throw ValidationError("matrix entries are [re, im]");
    m(i / n, i % n) = Complex(e[0].get<double>(), e[1].get<double>());
  }
  return m;
}

DrivingPath path_from_json(const json& doc) {
  const int n = doc.at("dim").get<int>();
  if (n < 1 || n > kMaxRepDim) throw ValidationError("path dim must be in 1..8");
  DrivingPath p;
  p.times = doc.at("times").get<std::vector<double>>();
  for (const json& m : doc.at("deterministic")) p.deterministic.push_back(matrix_from_json(m, n));
  for (const json& m : doc.at("stochastic")) p.stochastic.push_back(matrix_from_json(m, n));
  if (p.deterministic.empty()) throw ValidationError("path has no intervals");
  p.validate();
  return p;
}

// {"loops": [{"components": [{"lie_index", "times", "values", "lifted"?}],
//             "background": [flat matrices]?}]}
std::vector<LoopCurrents> currents_from_json(const json& doc, const SpectralModel& model,
                                             const RepBasis& basis) {
  std::vector<LoopCurrents> loops;
  for (const json& l : doc.at("loops")) {
    LoopCurrents lc;
    for (const json& c : l.at("components")) {
      CurrentPath p;
      p.lie_index = c.at("lie_index").get<int>();
      p.times = c.at("times").get<std::vector<double>>();
      const bool lifted = c.value("lifted", false);
      for (const json& v : c.at("values"))
        p.values.push_back(CurrentVector{v.get<std::vector<double>>(), lifted});
      p.validate(model.size());
      if (p.lie_index < 0 || p.lie_index >= basis.dim_algebra())
        throw ValidationError("lie_index outside the basis");
      lc.components.push_back(std::move(p));
    }
    if (l.contains("background"))
      for (const json& m : l.at("background"))
        lc.background.push_back(matrix_from_json(m, basis.dim_rep));
    loops.push_back(std::move(lc));
  }
  if (loops.empty()) throw ValidationError("currents file has no loops");
  return loops;
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json make_report(const std::string& command, json inputs, json parameters, json results,
                 std::uint64_t seed) {
  json r = {{"schema_version", kSchemaVersion},
            {"command", command},
            {"version", {{"wilsonline", WILSONLINE_VERSION},
                         {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                                       std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                       std::to_string(EIGEN_MINOR_VERSION)},
                         {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                               std::to_string(NLOHMANN_JSON_VERSION_MINOR) +
                                               "." +
                                               std::to_string(NLOHMANN_JSON_VERSION_PATCH)}}},
            {"seed", seed},
            {"inputs", std::move(inputs)},
            {"parameters", std::move(parameters)},
            {"results", std::move(results)}};
  // Hash of everything except the timestamp, so reruns can be compared.
  r["report_sha256"] = sha256_hex(r.dump());
  r["timestamp"] = utc_timestamp();
  return r;
}

void emit(const json& report, const std::string& out) {
  const std::string text = report.dump(2) + "\n";
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) throw ValidationError("cannot write report: " + out);
  f << text;
}

// ---------------------------------------------------------------------------

struct LinkArgs {
  std::string loop1, loop2, out;
  int grid = 512;
  std::uint64_t seed = 0;
};

int run_link(const LinkArgs& a) {
  const Input i1 = read_input(a.loop1), i2 = read_input(a.loop2);
  const LoopCurve l1 = loop_from_json(i1.doc), l2 = loop_from_json(i2.doc);
  const LinkResult r = link(l1, l2, a.grid);
  json res = to_json(r);
  res["rounded"] = std::lround(r.value_gauss);
  emit(make_report("link", {{"loop1", i1.record}, {"loop2", i2.record}}, {{"grid", a.grid}},
                   res, a.seed),
       a.out);
  return 0;
}

struct HolonomyArgs {
  std::string path, out;
  int order = 4;
  std::uint64_t seed = 0;
};

int run_holonomy(const HolonomyArgs& a) {
  const Input in = read_input(a.path);
  const DrivingPath p = path_from_json(in.doc);
  const Matrix full = holonomy_full(p);
  const GradedHolonomy g = holonomy_graded(p, a.order);
  json slices = json::array(), traces = json::array();
  for (const Matrix& z : g.slices) {
    slices.push_back(matrix_json(z));
    traces.push_back(cplx(z.trace()));
  }
  const double gap = inf_norm(g.total() - full);
  json res = {{"holonomy", matrix_json(full)},
              {"trace", cplx(full.trace())},
              {"slices", slices},
              {"slice_traces", traces},
              {"truncation_tail_bound", g.truncation_tail_bound},
              {"truncation_error", gap},
              {"deterministic_variation", p.deterministic_variation()},
              {"stochastic_variation", p.stochastic_variation()}};
  emit(make_report("holonomy", {{"path", in.record}}, {{"order", a.order}}, res, a.seed), a.out);
  // The truncated sum must sit inside its own majorant.
  if (gap > g.truncation_tail_bound + 1e-12) {
    std::cerr << "truncation error " << gap << " exceeds tail bound "
              << g.truncation_tail_bound << "\n";
    return 3;
  }
  return 0;
}

struct ExpandArgs {
  double linking = 1.0, k = 1.0;
  int order = 4;
  std::string out;
  std::uint64_t seed = 0;
};

int run_expand(const ExpandArgs& a) {
  if (!(a.k > 0.0)) throw ValidationError("k must be positive");
  if (a.order < 1) throw ValidationError("N must be at least 1");
  const ExpansionReport r = series_su2(a.linking, a.k, a.order);
  emit(make_report("expand", json::object(), {{"L", a.linking}, {"k", a.k}, {"N", a.order}},
                   to_json(r), a.seed),
       a.out);
  return 0;
}

struct McArgs {
  std::string spectrum, currents, basis, out;
  std::size_t samples = 100000;
  std::uint64_t seed = 1;
  int order = 4;
  bool no_rk = false;
};

// Analytic two-loop partial sum when both loops carry the same coefficient
// path in every Lie direction and no background: the Wick pairing reduces to
// the endpoint cross covariance c.
json analytic_comparison(const std::vector<LoopCurrents>& loops, const SpectralModel& model,
                         const RepBasis& basis, int order) {
  if (loops.size() != 2 || model.n.has_value()) return nullptr;
  std::vector<CurrentVector> ends;
  for (const LoopCurrents& l : loops) {
    if (!l.background.empty()) return nullptr;
    if (l.components.size() != static_cast<std::size_t>(basis.dim_algebra())) return nullptr;
    std::vector<bool> seen(basis.dim_algebra(), false);
    for (const CurrentPath& c : l.components) {
      if (seen[c.lie_index]) return nullptr;
      seen[c.lie_index] = true;
      if (c.values.size() != l.components[0].values.size()) return nullptr;
      for (std::size_t i = 0; i < c.values.size(); ++i)
        if (c.values[i].coeffs != l.components[0].values[i].coeffs ||
            c.values[i].lifted != l.components[0].values[i].lifted)
          return nullptr;
      if (c.values.front().lifted) return nullptr;
      for (double v : c.values.front().coeffs)
        if (v != 0.0) return nullptr;
    }
    ends.push_back(l.components[0].values.back());
  }
  const Complex cross = covariance_rk(ends[0], ends[1], model);
  const Complex self1 = covariance_rk(ends[0], ends[0], model);
  const Complex self2 = covariance_rk(ends[1], ends[1], model);
  Complex sum = 0.0;
  json terms = json::array();
  for (int m = 0; m <= order; m += 2) {
    const Complex t = coefficient_jm(cross, basis, m).value;
    terms.push_back({{"m", m}, {"value", cplx(t)}});
    sum += t;
  }
  return {{"cross_covariance", cplx(cross)},
          {"self_covariance", {cplx(self1), cplx(self2)}},
          {"self_pairing_free", std::abs(self1) < 1e-14 && std::abs(self2) < 1e-14},
          {"terms", terms},
          {"partial_sum", cplx(sum)},
          {"note", "valid as an expectation only when both self covariances vanish"}};
}

int run_mc(const McArgs& a) {
  const Input spec = read_input(a.spectrum), cur = read_input(a.currents);
  json inputs = {{"spectrum", spec.record}, {"currents", cur.record}};
  RepBasis basis = su2_basis();
  if (!a.basis.empty()) {
    const Input b = read_input(a.basis);
    basis = basis_from_json(b.doc);
    inputs["basis"] = b.record;
  }
  const SpectralModel model = spectrum_from_json(spec.doc);
  const std::vector<LoopCurrents> loops = currents_from_json(cur.doc, model, basis);
  if (a.samples < 1) throw ValidationError("samples must be positive");
  if (a.order < 0) throw ValidationError("order must be nonnegative");

  const SampleBatch batch = sample(model, a.samples, a.seed, basis.dim_algebra());
  const WilsonEstimate e = mc_wilson(batch, loops, model, basis, a.order, !a.no_rk);
  json res = {{"mean", cplx(e.estimate.mean)},
              {"se", {e.estimate.se_real, e.estimate.se_imag}},
              {"count", e.estimate.count},
              {"batches", e.estimate.batches},
              {"order", e.order},
              {"tail_bound_mean", e.tail_bound_mean},
              {"tail_bound_max", e.tail_bound_max}};
  if (!a.no_rk) {
    const json an = analytic_comparison(loops, model, basis, a.order);
    if (!an.is_null()) res["analytic"] = an;
  }
  emit(make_report("mc", inputs,
                   {{"samples", a.samples}, {"order", a.order}, {"rk", !a.no_rk},
                    {"basis", a.basis.empty() ? "su2" : basis.name}},
                   res, a.seed),
       a.out);
  return 0;
}

struct SpectrumArgs {
  std::string spectrum, out;
  double tol = 1e-6;
  std::uint64_t seed = 0;
};

int run_fresnel(const SpectrumArgs& a) {
  const Input spec = read_input(a.spectrum);
  const SpectralModel m = spectrum_from_json(spec.doc);
  if (!m.n.has_value()) throw ValidationError("fresnel-check needs a finite regulator n");
  json modes = json::array();
  Complex product = 1.0;
  double worst = 0.0;
  for (std::size_t j = 0; j < m.size(); ++j) {
    const double aj = *m.n * m.k * m.weight(j) * m.eigenvalues[j];
    const Complex q = fresnel_quadrature(aj);
    const Complex closed = std::pow(Complex(1.0, -2.0 * aj), -0.5);
    worst = std::max(worst, std::abs(q - closed));
    product *= q;
    modes.push_back({{"lambda", m.eigenvalues[j]},
                     {"a", aj},
                     {"closed_form", cplx(closed)},
                     {"quadrature", cplx(q)},
                     {"error", std::abs(q - closed)}});
  }
  const Complex z = z_normalizer(m);
  worst = std::max(worst, std::abs(z - product));
  const bool ok = worst <= a.tol;
  json res = {{"modes", modes},
              {"z_normalizer", cplx(z)},
              {"quadrature_product", cplx(product)},
              {"max_error", worst},
              {"pass", ok}};
  emit(make_report("fresnel-check", {{"spectrum", spec.record}}, {{"tol", a.tol}}, res, a.seed),
       a.out);
  if (!ok) {
    std::cerr << "Fresnel mismatch " << worst << " exceeds " << a.tol << "\n";
    return 3;
  }
  return 0;
}

int run_spectrum_info(const SpectrumArgs& a) {
  const Input spec = read_input(a.spectrum);
  const SpectralModel m = spectrum_from_json(spec.doc);
  json weights = json::array(), rk = json::array(), args = json::array();
  for (std::size_t j = 0; j < m.size(); ++j) weights.push_back(m.weight(j));
  for (const Complex& r : rk_coefficients(m)) {
    rk.push_back(cplx(r));
    args.push_back(std::arg(r));
  }
  json res = {{"modes", m.size()},
              {"rho", m.rho()},
              {"summability_proxy", m.summability_proxy()},
              {"weights", weights},
              {"rk_coefficients", rk},
              {"rk_arguments", args},
              {"model", spectrum_to_json(m)}};
  if (m.n.has_value()) res["z_normalizer"] = cplx(z_normalizer(m));
  emit(make_report("spectrum-info", {{"spectrum", spec.record}}, json::object(), res, a.seed),
       a.out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wilson-line expansion toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", WILSONLINE_VERSION);

  LinkArgs la;
  auto* link_cmd = app.add_subcommand("link", "Linking number of two loops");
  link_cmd->add_option("--loop1", la.loop1, "First loop JSON")->required();
  link_cmd->add_option("--loop2", la.loop2, "Second loop JSON")->required();
  link_cmd->add_option("--grid", la.grid, "Quadrature grid per loop")->check(CLI::PositiveNumber);
  link_cmd->add_option("--seed", la.seed, "Recorded seed");
  link_cmd->add_option("--out", la.out, "Report path (default stdout)");

  HolonomyArgs ha;
  auto* hol_cmd = app.add_subcommand("holonomy", "Holonomy and graded slices of a driving path");
  hol_cmd->add_option("--path", ha.path, "Driving path JSON")->required();
  hol_cmd->add_option("--order", ha.order, "Maximum stochastic order R")->check(CLI::NonNegativeNumber);
  hol_cmd->add_option("--seed", ha.seed, "Recorded seed");
  hol_cmd->add_option("--out", ha.out, "Report path (default stdout)");

  ExpandArgs ea;
  auto* exp_cmd = app.add_subcommand("expand", "Two-loop SU(2) series in 1/k");
  exp_cmd->add_option("--L", ea.linking, "Linking number")->required();
  exp_cmd->add_option("--k", ea.k, "Level")->required();
  exp_cmd->add_option("--N", ea.order, "Number of grouped terms")->required();
  exp_cmd->add_option("--seed", ea.seed, "Recorded seed");
  exp_cmd->add_option("--out", ea.out, "Report path (default stdout)");

  McArgs ma;
  auto* mc_cmd = app.add_subcommand("mc", "Monte Carlo Wilson-line expectation");
  mc_cmd->add_option("--spectrum", ma.spectrum, "Spectrum JSON")->required();
  mc_cmd->add_option("--currents", ma.currents, "Loop currents JSON")->required();
  mc_cmd->add_option("--basis", ma.basis, "Representation basis JSON (default su(2))");
  mc_cmd->add_option("--samples", ma.samples, "Sample count");
  mc_cmd->add_option("--seed", ma.seed, "Generator seed");
  mc_cmd->add_option("--order", ma.order, "Maximum stochastic order R");
  mc_cmd->add_flag("--no-rk", ma.no_rk, "Sample the plain Gaussian instead of R_k x");
  mc_cmd->add_option("--out", ma.out, "Report path (default stdout)");

  SpectrumArgs fa;
  auto* fr_cmd = app.add_subcommand("fresnel-check", "Compare Z_n with direct quadrature");
  fr_cmd->add_option("--spectrum", fa.spectrum, "Spectrum JSON with finite n")->required();
  fr_cmd->add_option("--tol", fa.tol, "Tolerance");
  fr_cmd->add_option("--seed", fa.seed, "Recorded seed");
  fr_cmd->add_option("--out", fa.out, "Report path (default stdout)");

  SpectrumArgs sa;
  auto* si_cmd = app.add_subcommand("spectrum-info", "Summaries of a spectral model");
  si_cmd->add_option("--spectrum", sa.spectrum, "Spectrum JSON")->required();
  si_cmd->add_option("--seed", sa.seed, "Recorded seed");
  si_cmd->add_option("--out", sa.out, "Report path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*link_cmd) return run_link(la);
    if (*hol_cmd) return run_holonomy(ha);
    if (*exp_cmd) return run_expand(ea);
    if (*mc_cmd) return run_mc(ma);
    if (*fr_cmd) return run_fresnel(fa);
    if (*si_cmd) return run_spectrum_info(sa);
  } catch (const InvariantViolation& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return 3;
  } catch (const ValidationError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
