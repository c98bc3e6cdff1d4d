// Acceptance run: one PASS/FAIL line per criterion.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

#include "fixtures.hpp"
#include "wilsonline/expansion.hpp"
#include "wilsonline/gaussian.hpp"
#include "wilsonline/lie_rep.hpp"
#include "wilsonline/signature.hpp"
#include "wilsonline/spectral.hpp"
#include "wilsonline/topology.hpp"

using namespace wilsonline;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string hex(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", x);
  return buf;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

bool within_se(const Estimate& e, Complex expected) {
  auto ok = [](double d, double se) { return se > 0.0 ? std::abs(d) < 4.0 * se : d == 0.0; };
  return ok(e.mean.real() - expected.real(), e.se_real) &&
         ok(e.mean.imag() - expected.imag(), e.se_imag);
}

std::string describe(const Estimate& e, Complex expected) {
  return fmt("mean %.6f%+.6fi", e.mean.real(), e.mean.imag()) +
         fmt(" expected %.6f%+.6fi", expected.real(), expected.imag()) +
         fmt(" se (%.2e, %.2e)", e.se_real, e.se_imag);
}

SpectralModel make_model(std::vector<double> ev, int p, double k,
                         std::optional<double> n = {}) {
  SpectralModel m;
  m.eigenvalues = std::move(ev);
  m.p = p;
  m.k = k;
  m.n = n;
  m.validate();
  return m;
}

CurrentPath ramp(const std::vector<double>& end, int intervals, int lie_index) {
  CurrentPath c;
  c.lie_index = lie_index;
  for (int i = 0; i <= intervals; ++i) {
    const double t = static_cast<double>(i) / intervals;
    c.times.push_back(t);
    CurrentVector v;
    for (double e : end) v.coeffs.push_back(t * e);
    c.values.push_back(v);
  }
  return c;
}

// ---------------------------------------------------------------------------

Outcome tensor_spectrum() {
  Outcome o;
  const RepBasis b = su2_basis();
  const auto ev = hermitian_eigenvalues(2.0 * casimir_tensor(b).matrix);
  const double expected[] = {-1.0, -1.0, -1.0, 3.0};
  double worst_ev = 0.0;
  for (int i = 0; i < 4; ++i) worst_ev = std::max(worst_ev, std::abs(ev[i] - expected[i]));
  double worst_tr = 0.0;
  for (int m = 0; m <= 12; ++m) {
    const double closed = (3.0 * std::pow(-1.0, m) + std::pow(3.0, m)) / std::pow(2.0, m);
    worst_tr = std::max(worst_tr, std::abs(tensor_trace_power(b, m) - closed));
  }
  o.pass = worst_ev <= 1e-12 && worst_tr <= 1e-10;
  o.detail = fmt("eigenvalue error %.1e, trace-power error %.1e", worst_ev, worst_tr);
  return o;
}

Outcome linking() {
  Outcome o;
  const LoopCurve a = fixtures::hopf_a(), b = fixtures::hopf_b();
  const double hopf = linking_gauss(a, b, 512);
  const long hopf_int = linking_crossing(a.to_polyline(64), b.to_polyline(64));
  const LoopCurve t0 = fixtures::torus_component(0), t1 = fixtures::torus_component(1);
  const double torus = linking_gauss(t0, t1, 512);
  const long torus_int = linking_crossing(t0.to_polyline(256), t1.to_polyline(256));

  double anti = 0.0, sym = 0.0;
  for (const auto& [x, y, v] : {std::tuple{a, b, hopf}, std::tuple{t0, t1, torus}}) {
    anti = std::max(anti, std::abs(linking_gauss(x, y.reversed(), 512) + v));
    sym = std::max(sym, std::abs(linking_gauss(y, x, 512) - v));
  }
  o.pass = std::abs(hopf - static_cast<double>(hopf_int)) <= 1e-4 &&
           std::abs(torus - 2.0) <= 1e-3 && torus_int == 2 && anti <= 1e-8 &&
           sym <= 1e-8;
  o.detail = fmt("hopf %.10f (oracle %.0f)", hopf, static_cast<double>(hopf_int)) +
             fmt(", torus %.10f (oracle %.0f)", torus, static_cast<double>(torus_int)) +
             fmt(", antisymmetry %.1e, symmetry %.1e", anti, sym);
  return o;
}

Outcome fresnel() {
  Outcome o;
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> mag(0.2, 5.0), kk(0.1, 10.0), nn(0.5, 20.0);
  std::uniform_int_distribution<int> pp(0, 3);
  std::bernoulli_distribution sign;
  double worst = 0.0;
  for (int d = 0; d < 20; ++d) {
    const double lam = (sign(rng) ? 1.0 : -1.0) * mag(rng);
    const SpectralModel m = make_model({lam}, pp(rng), kk(rng), nn(rng));
    const double a = m.n.value() * m.k * m.weight(0) * lam;
    worst = std::max(worst, std::abs(z_normalizer(m) - fresnel_quadrature(a)));
  }
  o.pass = worst <= 1e-6;
  o.detail = fmt("20 draws, worst |Z_n - quadrature| %.1e", worst);
  return o;
}

struct McRun {
  Estimate estimate;
  Complex expected;
};

// E[<x, R_k u~> <x, R_k v~>] by sampling, for the pairs (u, v) and (u, u).
std::vector<McRun> covariance_mc(std::uint64_t seed) {
  const SpectralModel m = make_model({1.0, -2.0, 0.5, 3.0}, 1, 2.0);
  const std::vector<double> u{0.8, -0.3, 0.5, 1.2}, v{0.8, 0.3, 0.9, 0.2};
  const CurrentPath pu = ramp(u, 1, 0), pv = ramp(v, 1, 0);
  const std::size_t n = 100000;
  const SampleBatch batch = sample(m, n, seed);
  const ProcessRealization xu = realize_process(batch, pu, m, true);
  const ProcessRealization xv = realize_process(batch, pv, m, true);
  std::vector<Complex> uv(n), uu(n);
  for (std::size_t s = 0; s < n; ++s) {
    uv[s] = xu.value(s, 1) * xv.value(s, 1);
    uu[s] = xu.value(s, 1) * xu.value(s, 1);
  }
  const CurrentVector cu{u, false}, cv{v, false};
  return {{batch_means(uv), covariance_rk(cu, cv, m)},
          {batch_means(uu), covariance_rk(cu, cu, m)}};
}

Outcome covariance() {
  Outcome o;
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> size(1, 12), pp(0, 3);
  std::uniform_real_distribution<double> mag(0.1, 10.0), kk(0.1, 50.0);
  std::normal_distribution<double> g;
  std::bernoulli_distribution sign;
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> ev(size(rng));
    for (double& l : ev) l = (sign(rng) ? 1.0 : -1.0) * mag(rng);
    const SpectralModel m = make_model(ev, pp(rng), kk(rng));
    const auto r = rk_coefficients(m);
    Complex via_r = 0.0, closed = 0.0;
    double scale = 0.0;
    for (std::size_t j = 0; j < m.size(); ++j) {
      const double uj = g(rng), vj = g(rng);
      via_r += r[j] * r[j] * m.weight(j) * uj * vj;
      closed += uj * vj / ev[j];
      scale += std::abs(uj * vj / ev[j]);
    }
    closed *= -1.0 / (2.0 * Complex(0.0, 1.0) * m.k);
    scale /= 2.0 * m.k;
    worst = std::max(worst, std::abs(via_r - closed) / std::max(scale, 1e-300));
  }
  o.pass = worst <= 1e-12;
  o.detail = fmt("1000 models, worst relative route gap %.1e", worst);
  for (const McRun& mc : covariance_mc(4001)) {
    o.pass = o.pass && within_se(mc.estimate, mc.expected);
    o.detail += "; MC " + describe(mc.estimate, mc.expected);
  }
  return o;
}

struct WickRun {
  std::vector<Estimate> estimates;
  std::vector<double> exact;
  bool fourth_exact = true;
};

WickRun wick(std::uint64_t seed) {
  WickRun w;
  std::mt19937_64 rng(5005);
  std::normal_distribution<double> g;
  const std::vector<std::vector<int>> lists{{0, 1, 2, 3}, {0, 0, 1, 2, 3, 3}};
  const std::size_t n = 1000000;
  for (int sys = 0; sys < 3; ++sys) {
    Eigen::MatrixXd a(4, 4);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) a(i, j) = g(rng);
    GaussianSystem gs{a * a.transpose() / 4.0};
    gs.validate();
    const std::vector<int> four{0, 0, 0, 0};
    w.fourth_exact = w.fourth_exact &&
                     wick_moment(gs, four) == 3.0 * gs.covariance(0, 0) * gs.covariance(0, 0);

    const Eigen::MatrixXd b = gs.factor();
    const SampleBatch batch = sample(4, n, seed + sys);
    std::vector<Eigen::Vector4d> xs(n);
    for (std::size_t s = 0; s < n; ++s) {
      const auto row = batch.row(s);
      xs[s] = b * Eigen::Map<const Eigen::Vector4d>(row.data());
    }
    for (const auto& idx : lists) {
      std::vector<Complex> vals(n);
      for (std::size_t s = 0; s < n; ++s) {
        double prod = 1.0;
        for (int i : idx) prod *= xs[s](i);
        vals[s] = prod;
      }
      w.estimates.push_back(batch_means(vals));
      w.exact.push_back(wick_moment(gs, idx));
    }
  }
  return w;
}

Outcome wick_outcome() {
  Outcome o;
  const WickRun w = wick(9001);
  double worst = 0.0;
  for (std::size_t i = 0; i < w.estimates.size(); ++i) {
    const double z = std::abs(w.estimates[i].mean.real() - w.exact[i]) / w.estimates[i].se_real;
    worst = std::max(worst, z);
    o.pass = o.pass && within_se(w.estimates[i], w.exact[i]);
  }
  o.pass = o.pass && w.fourth_exact;
  o.detail = fmt("6 moments (orders 4 and 6, 3 systems, 1e6 samples), worst |z| %.2f", worst) +
             (w.fourth_exact ? ", E[X^4] = 3 sigma^4 exact" : ", E[X^4] != 3 sigma^4");
  return o;
}

Outcome holonomy() {
  Outcome o;
  const RepBasis b = su2_basis();
  std::mt19937_64 rng(606);

  double worst_exp = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix a = fixtures::random_algebra_element(b, rng, 1.5);
    DrivingPath p = DrivingPath::zero(DrivingPath::uniform_grid(64), 2);
    for (auto& d : p.deterministic) d = a / 64.0;
    const Eigen::MatrixXcd ref = Eigen::MatrixXcd(a).exp();
    worst_exp = std::max(worst_exp,
                         (Eigen::MatrixXcd(holonomy_full(p)) - ref).cwiseAbs().maxCoeff());
  }

  double worst_unitary = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const DrivingPath p = fixtures::random_algebra_path(b, 100, rng, 0.3, 0.3);
    const Matrix w = holonomy_full(p);
    worst_unitary = std::max(worst_unitary,
                             (w.adjoint() * w - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff());
  }

  double worst_grading = -1e300;  // max of error - tail bound
  for (int trial = 0; trial < 20; ++trial) {
    const DrivingPath p = fixtures::random_algebra_path(b, 16, rng, 0.05, 0.1);
    const GradedHolonomy g = holonomy_graded(p, 6);
    for (double u : {-2.0, -0.5, 0.7, 1.0, 1.8}) {
      DrivingPath q = p;
      for (auto& s : q.stochastic) s *= u;
      Matrix sum = Matrix::Zero(2, 2);
      for (int i = 6; i >= 0; --i) sum = sum * u + g.slices[i];
      worst_grading = std::max(worst_grading,
                               inf_norm(sum - holonomy_full(q)) - tail_bound(q, 6));
    }
  }
  o.pass = worst_exp <= 1e-10 && worst_unitary <= 1e-10 && worst_grading <= 1e-13;
  o.detail = fmt("exp error %.1e, unitarity defect %.1e, grading error - tail bound %.1e",
                 worst_exp, worst_unitary, worst_grading);
  return o;
}

Outcome decay() {
  Outcome o;
  const std::vector<double> ks{10.0, 100.0, 1000.0};
  std::ostringstream d;
  for (int n : {2, 4, 6}) {
    for (double l : {1.0, 2.0}) {
      const auto s = decay_check(l, ks, n);
      double hi = 0.0;
      for (double v : s) hi = std::max(hi, v);
      o.pass = o.pass && hi <= 2.0 * s[0] && std::isfinite(hi);
      d << "N=" << n << " L=" << l << ": " << fmt("%.4g %.4g %.4g", s[0], s[1], s[2]) << "; ";
    }
  }
  o.detail = d.str() + "bounded by 2x the k=10 value";
  return o;
}

McRun end_to_end(std::uint64_t seed) {
  // lambda = (1, -1); u pairs with v through Q^{-1} to 1, with itself to 0.
  const double k = 5.0;
  const SpectralModel m = make_model({1.0, -1.0}, 1, k);
  const double r = 1.0 / std::sqrt(2.0);
  std::vector<LoopCurrents> loops(2);
  for (int a = 0; a < 3; ++a) {
    loops[0].components.push_back(ramp({r, r}, 8, a));
    loops[1].components.push_back(ramp({r, -r}, 8, a));
  }
  const SampleBatch batch = sample(m, 100000, seed, 3);
  const WilsonEstimate e = mc_wilson(batch, loops, m, su2_basis(), 4);
  Complex expected = 0.0;
  for (int n = 0; n <= 2; ++n) expected += grouped_term_su2(1.0, k, n);
  return {e.estimate, expected};
}

Outcome end_to_end_outcome() {
  Outcome o;
  const McRun run = end_to_end(8008);
  o.pass = within_se(run.estimate, run.expected);
  o.detail = "order 4, 1e5 samples, k = 5, L = 1: " + describe(run.estimate, run.expected);
  return o;
}

std::string fingerprint(const Estimate& e) {
  return hex(e.mean.real()) + " " + hex(e.mean.imag()) + " " + hex(e.se_real) + " " +
         hex(e.se_imag);
}

std::string rerun_all() {
  std::string s;
  for (const McRun& r : covariance_mc(4001)) s += fingerprint(r.estimate) + "\n";
  for (const Estimate& e : wick(9001).estimates) s += fingerprint(e) + "\n";
  s += fingerprint(end_to_end(8008).estimate) + "\n";
  return s;
}

Outcome reproducibility() {
  Outcome o;
  setenv("WILSONLINE_THREADS", "1", 1);
  const std::string a = rerun_all();
  setenv("WILSONLINE_THREADS", "3", 1);
  const std::string b = rerun_all();
  const std::string c = rerun_all();
  unsetenv("WILSONLINE_THREADS");
  o.pass = a == b && b == c;
  o.detail = o.pass ? "criteria 4, 5, 8 estimates byte-identical over 3 reruns (1 and 3 threads)"
                    : "estimates differ between reruns";
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "SU(2) tensor spectrum", 1.0, tensor_spectrum},
      {2, "linking numbers", 5.0, linking},
      {3, "Fresnel normaliser", 10.0, fresnel},
      {4, "covariance identity", 60.0, covariance},
      {5, "Wick moments", 60.0, wick_outcome},
      {6, "holonomy engine", 10.0, holonomy},
      {7, "expansion remainder decay", 1.0, decay},
      {8, "two-loop end-to-end Monte Carlo", 600.0, end_to_end_outcome},
      {9, "reproducibility", 1e300, reproducibility},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs < c.limit_s;
    const bool pass = o.pass && in_time;
    failed += !pass;
    std::string timing = fmt("%.2f s", secs);
    if (c.limit_s < 1e299) timing += fmt(" (limit %.0f s)", c.limit_s);
    std::printf("criterion %d %s: %s | %s | %s\n", c.id, c.name, pass ? "PASS" : "FAIL",
                o.detail.c_str(), timing.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
