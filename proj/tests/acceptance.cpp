// Acceptance runner: `acceptance A<n>` evaluates one criterion, `acceptance all`
// evaluates every one. Each criterion prints a single line
//   A<n> PASS|FAIL <detail> [<seconds> s / limit <seconds> s]
// and the exit status is nonzero if any evaluated criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "sobolev/sobolev.hpp"

using namespace sobolev;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
  std::vector<std::string> notes;  ///< extra informational lines
};

struct Property {
  std::string name;
  double error = 0.0;
  double tolerance = 0.0;
  bool pass() const { return error <= tolerance; }
};

SobolevParams sp(double s, Basis basis = Basis::dft_periodic, Variant variant = Variant::inhomogeneous) {
  SobolevParams p;
  p.s = s;
  p.basis = basis;
  p.variant = variant;
  return p;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), std::numeric_limits<double>::min()); }

Outcome wrap(const reproduce::Check& c) { return {c.pass, c.detail, {}}; }

// ---- property suite --------------------------------------------------------

Property parseval() {
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const Image f = oracle::random_image(9 + seed, 8, seed);
    double energy = 0.0;
    for (const auto& c : oracle::naive_dft(f)) energy += std::norm(c);
    double pixels = 0.0;
    for (double v : f.pixels()) pixels += v * v;
    worst = std::max({worst, rel(hs_norm(f, sp(0.0)), std::sqrt(pixels)), rel(std::sqrt(energy), std::sqrt(pixels)),
                      rel(hs_norm(f, sp(0.0, Basis::dct_neumann)), std::sqrt(pixels))});
  }
  return {"Parseval s=0", worst, 1e-12};
}

Property ps_inverse() {
  double worst = 0.0;
  const Image f = oracle::random_image(12, 10, 5);
  for (Basis b : {Basis::dft_periodic, Basis::dct_neumann})
    for (double s : {-2.0, -1.0, -0.5, 0.5, 1.5})
      worst = std::max(worst, oracle::rel_diff(apply_ps(apply_ps(f, make_multiplier(sp(s, b), 12, 10)),
                                                        make_multiplier(sp(-s, b), 12, 10)),
                                               f));
  return {"P_s P_-s identity", worst, 1e-10};
}

Property norm_monotone() {
  // Violation of ||f||_{H^s} <= ||f||_{H^t} for s < t; zero when monotone.
  double worst = 0.0;
  const Image f = oracle::random_image(10, 10, 6);
  for (Basis b : {Basis::dft_periodic, Basis::dct_neumann}) {
    double previous = 0.0;
    for (double s = -2.0; s <= 2.0; s += 0.25) {
      const double n = hs_norm(f, sp(s, b));
      worst = std::max(worst, (previous - n) / n);
      previous = n;
    }
  }
  return {"norm monotone in s", worst, 0.0};
}

Property adjoints() {
  double worst = 0.0;
  const std::size_t w = 11, h = 9;
  const Image u = oracle::random_image(w, h, 7), v = oracle::random_image(w, h, 8);
  const LinearOperator blur = LinearOperator::convolution(gaussian_kernel(5, 1.2), w, h);
  const LinearOperator sym = LinearOperator::smoothing_symbol(1.5, w, h);
  for (const LinearOperator* a : {&blur, &sym}) {
    const double lhs = dot(apply(*a, u), v), rhs = dot(u, apply_adjoint(*a, v));
    worst = std::max(worst, std::abs(lhs - rhs) / (l2_norm(u) * l2_norm(v)));
  }
  const GradientField p{oracle::random_image(w, h, 9), oracle::random_image(w, h, 10)};
  worst = std::max(worst, std::abs(dot(grad(u), p) + dot(u, div(p))) / (l2_norm(u) * l2_norm(p)));
  for (Basis b : {Basis::dft_periodic, Basis::dct_neumann}) {
    const auto m = make_multiplier(sp(-0.75, b), w, h);
    worst = std::max(worst, std::abs(dot(apply_ps(u, m), v) - dot(u, apply_ps(v, m))) / (l2_norm(u) * l2_norm(v)));
  }
  return {"adjoint identities", worst, 1e-12};
}

Property gradient_fd() {
  double worst = 0.0;
  const double step = 1e-5;
  std::uint64_t seed = 20;
  const LinearOperator ops[] = {LinearOperator::identity(8, 8),
                                LinearOperator::convolution(gaussian_kernel(3, 0.9), 8, 8),
                                LinearOperator::smoothing_symbol(1.0, 8, 8)};
  for (Basis b : {Basis::dft_periodic, Basis::dct_neumann})
    for (double s : {-1.0, -0.5, 0.0, 0.5, 1.0})
      for (const auto& a : ops) {
        const Image u = oracle::random_image(8, 8, ++seed), f = oracle::random_image(8, 8, ++seed);
        const Image d = oracle::random_image(8, 8, ++seed);
        const auto p = sp(s, b);
        const double fd = (objective(u + step * d, a, f, p) - objective(u - step * d, a, f, p)) / (2.0 * step);
        worst = std::max(worst, rel(fd, dot(objective_gradient(u, a, f, p), d)));
      }
  return {"analytic vs finite-difference gradient", worst, 1e-5};
}

Property flow_equivalence() {
  double worst = 0.0;
  const Image f = oracle::random_image(20, 16, 30);
  for (const LinearOperator& a : {LinearOperator::convolution(gaussian_kernel(3, 0.9), 20, 16),
                                  LinearOperator::smoothing_symbol(2.0, 20, 16)}) {
    Image u1(20, 16), u2(20, 16);
    for (int k = 0; k < 50; ++k) {
      u1 = flow_step(u1, FlowKind::h1_flow_of_l2, a, f, 0.7);
      u2 = flow_step(u2, FlowKind::l2_flow_of_hm1, a, f, 0.7);
      for (std::size_t i = 0; i < u1.size(); ++i) worst = std::max(worst, std::abs(u1[i] - u2[i]));
    }
  }
  return {"H1 flow of L2 = L2 flow of H-1 (per step)", worst, 1e-12};
}

Property admm_residual() {
  const Image truth = synth_image(SynthName::square, 100, 100);
  const Image data = add_noise(truth, {NoiseKind::gaussian_white, 0.1, 0.05, 1});
  AdmmParams ap;
  ap.iterations = 3000;
  ap.tol = 1e-6;
  AdmmSolver solver(data, LinearOperator::identity(100, 100), SobolevParams{}, ap);
  solver.run();
  return {"ADMM relative primal residual (" + std::to_string(solver.state().iterations()) + " iterations)",
          solver.relative_residual(), 1e-6};
}

Property shrink_prox() {
  // y = prox(x) iff x - y lies in t * subdifferential of |.| at y.
  double worst = 0.0;
  for (double x = -3.0; x <= 3.0; x += 0.0137)
    for (double t : {0.0, 0.01, 0.3, 1.0, 2.5}) {
      const double y = soft_threshold(x, t);
      const double g = x - y;
      const double violation = y == 0.0 ? std::max(0.0, std::abs(g) - t) : std::abs(g - t * (y > 0 ? 1.0 : -1.0));
      worst = std::max(worst, violation);
    }
  const GradientField field{oracle::random_image(6, 5, 40), oracle::random_image(6, 5, 41)};
  const GradientField out = shrink(field, 0.4);
  for (std::size_t i = 0; i < field.dx.size(); ++i) {
    worst = std::max(worst, std::abs(out.dx[i] - soft_threshold(field.dx[i], 0.4)));
    worst = std::max(worst, std::abs(out.dy[i] - soft_threshold(field.dy[i], 0.4)));
  }
  return {"shrink is the l1 prox", worst, 1e-15};
}

Property pde_dual() {
  double worst = 0.0;
  for (std::uint64_t seed = 50; seed < 53; ++seed) {
    const Image f = oracle::random_image(8 + seed % 3, 8, seed);
    worst = std::max(worst, rel(pde_dual_norm(f, 1), hs_norm(f, sp(-1.0, Basis::dct_neumann))));
  }
  return {"pde_dual_norm = DCT inhomogeneous s=-1", worst, 1e-10};
}

Property closed_form_dense() {
  const std::size_t w = 8, h = 8;
  const BlurKernel k = gaussian_kernel(3, 1.0);
  const Image f = oracle::random_image(w, h, 60);
  const Eigen::MatrixXd A = oracle::convolution_matrix(k, w, h);
  double worst = 0.0;
  for (double s : {-1.0, -0.5, 0.5, 1.0}) {
    std::vector<double> w2(w * h);
    for (std::size_t r = 0; r < h; ++r)
      for (std::size_t c = 0; c < w; ++c) w2[r * w + c] = std::pow(1.0 + oracle::periodic_xi_sq(r, c, h, w), s);
    const Eigen::MatrixXd P2 = oracle::spectral_matrix(w2, w, h);
    const Eigen::VectorXd ref =
        (A.transpose() * P2 * A).colPivHouseholderQr().solve(A.transpose() * P2 * oracle::to_vector(f));
    const Eigen::VectorXd got =
        oracle::to_vector(closed_form_inverse(LinearOperator::convolution(k, w, h), make_multiplier(sp(s), w, h), f));
    worst = std::max(worst, (got - ref).norm() / ref.norm());
  }
  return {"closed form vs dense normal equations (8x8)", worst, 1e-8};
}

Outcome property_suite() {
  const std::function<Property()> props[] = {parseval,   ps_inverse,    norm_monotone, adjoints,  gradient_fd,
                                             flow_equivalence, admm_residual, shrink_prox, pde_dual, closed_form_dense};
  Outcome out{true, {}, {}};
  std::size_t passed = 0;
  for (const auto& run : props) {
    const Property p = run();
    char line[256];
    std::snprintf(line, sizeof line, "  %s %s error=%.3g tol=%.3g", p.pass() ? "ok  " : "FAIL", p.name.c_str(),
                  p.error, p.tolerance);
    out.notes.emplace_back(line);
    out.pass = out.pass && p.pass();
    passed += p.pass();
  }
  out.detail = std::to_string(passed) + "/" + std::to_string(std::size(props)) + " properties hold";
  return out;
}

// ---- criteria ----------------------------------------------------------------

struct Criterion {
  const char* id;
  double limit_seconds;  ///< 0: no runtime bound
  std::function<Outcome()> run;
};

std::vector<Criterion> criteria() {
  static const reproduce::Manifest m;
  return {
      {"A1", 1.0, [] { return wrap(reproduce::check_noise_free(reproduce::noise_free_row(m, m.a1_s), m.a1_s)); }},
      {"A2", 30.0, [] { return wrap(reproduce::check_gd_low_noise(reproduce::gd_row(m, 0.1), m)); }},
      {"A3", 30.0, [] { return wrap(reproduce::check_gd_high_noise(reproduce::gd_row(m, 0.5))); }},
      {"A4", 600.0,
       [] {
         const reproduce::TableRow row = reproduce::tv_row(m, 0.1);
         Outcome o = wrap(reproduce::check_tv(row, m));
         for (std::size_t i = 0; i < m.table_s.size(); ++i) {
           o.notes.push_back("  s=" + reproduce::fmt(m.table_s[i]) + " lambda=" + csv::number(row.best_lambda[i]) +
                             " rho=" + csv::number(row.best_rho[i]) + " paper=" +
                             reproduce::fmt(row.cells[i].mean_paper()) +
                             " standard=" + reproduce::fmt(row.cells[i].mean_standard()));
         }
         return o;
       }},
      {"A5", 0.0, [] { return wrap(reproduce::check_fig5(reproduce::run_fig5(m))); }},
      {"A6", 0.0,
       [] {
         const reproduce::Lowfreq lf = reproduce::run_lowfreq(m);
         Outcome o = wrap(reproduce::check_lowfreq(lf));
         std::string tv;
         for (const auto& cell : lf.tv) tv += " " + reproduce::fmt(cell.mean_standard());
         o.notes.push_back("  info: TV + homogeneous H^s at s=1,2,3, mean standard PSNR" + tv);
         return o;
       }},
      {"A7", 60.0, property_suite},
  };
}

}  // namespace

int main(int argc, char** argv) {
  const std::string want = argc > 1 ? argv[1] : "all";
  bool any = false, all_pass = true;
  for (const Criterion& c : criteria()) {
    if (want != "all" && want != c.id) continue;
    any = true;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what(), {}};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = c.limit_seconds == 0.0 || seconds < c.limit_seconds;
    const bool pass = o.pass && in_time;
    while (!o.detail.empty() && o.detail.back() == ' ') o.detail.pop_back();
    char timing[96];
    if (c.limit_seconds > 0.0) {
      std::snprintf(timing, sizeof timing, "[%.2f s / limit %.0f s%s]", seconds, c.limit_seconds,
                    in_time ? "" : ", over limit");
    } else {
      std::snprintf(timing, sizeof timing, "[%.2f s]", seconds);
    }
    std::printf("%s %s %s %s\n", c.id, pass ? "PASS" : "FAIL", o.detail.c_str(), timing);
    for (const auto& n : o.notes) std::printf("%s\n", n.c_str());
    std::fflush(stdout);
    all_pass = all_pass && pass;
  }
  if (!any) {
    std::fprintf(stderr, "unknown criterion '%s' (A1..A7 or all)\n", want.c_str());
    return 2;
  }
  return all_pass ? 0 : 1;
}
