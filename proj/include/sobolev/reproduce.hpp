#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "sobolev/csv.hpp"
#include "sobolev/experiment.hpp"
#include "sobolev/sweep.hpp"

namespace sobolev::reproduce {

/// Pinned protocol for the reproduction runs. Bump `version` whenever any
/// value changes so stored outputs can be matched to the manifest that made them.
struct Manifest {
  std::string version = "2";
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};

  // Square deblurring (table1, fig5)
  std::size_t size = 100;
  std::size_t kernel_size = 15;
  double kernel_sigma = 1.0;
  double spacing = 0.035;  ///< pixel spacing of the frequency grid
  std::size_t gd_iterations = 100;
  double gd_step = 1.0;
  std::vector<double> table_s{0.0, -0.25, -0.5, -0.75, -1.0};
  std::vector<double> table_sigma{0.1, 0.5};
  std::vector<double> a1_s{-1.0, -0.5, 0.0, 0.5, 1.0};  ///< noise-free closed-form check

  // TV rows: per-s best (lambda, rho) on this grid
  std::vector<double> tv_lambda{1.0, 10.0, 100.0, 1000.0, 10000.0};
  std::vector<double> tv_rho{1.0, 2.0, 5.0, 10.0, 20.0};
  double tv_mu = 1.0;
  std::size_t tv_iterations = 500;

  // fig5
  std::vector<double> fig5_sigma{0.1, 0.5};
  std::size_t fig5_points = 11;
  double fig5_s_min = -1.5;
  double fig5_s_max = 0.0;

  // lowfreq
  std::size_t lf_size = 100;
  double lf_sigma = 0.3;
  double lf_cutoff = 0.05;
  std::vector<double> lf_s{1.0, 2.0, 3.0};
  std::size_t lf_iterations = 100;
  std::vector<double> lf_tv_lambda{1.0, 10.0, 100.0};
  std::vector<double> lf_tv_rho{1.0, 10.0};
  std::size_t lf_tv_iterations = 200;

  std::vector<double> fig5_s_values() const {
    std::vector<double> v(fig5_points);
    for (std::size_t i = 0; i < fig5_points; ++i) {
      v[i] = fig5_s_min + (fig5_s_max - fig5_s_min) * static_cast<double>(i) / static_cast<double>(fig5_points - 1);
    }
    return v;
  }

  std::string text() const {
    std::ostringstream out;
    auto list = [&](const char* name, const auto& xs) {
      out << name << " =";
      for (const auto& x : xs) out << ' ' << csv::number(static_cast<double>(x));
      out << '\n';
    };
    out << "manifest_version = " << version << '\n';
    list("seeds", seeds);
    out << "size = " << size << "\nkernel = " << kernel_size << ' ' << csv::number(kernel_sigma)
        << "\nspacing = " << csv::number(spacing) << "\ngd_iterations = " << gd_iterations
        << "\ngd_step = " << csv::number(gd_step) << '\n';
    list("table_s", table_s);
    list("table_sigma", table_sigma);
    list("a1_s", a1_s);
    list("tv_lambda", tv_lambda);
    list("tv_rho", tv_rho);
    out << "tv_mu = " << csv::number(tv_mu) << "\ntv_iterations = " << tv_iterations << '\n';
    list("fig5_sigma", fig5_sigma);
    list("fig5_s", fig5_s_values());
    out << "lf_size = " << lf_size << "\nlf_sigma = " << csv::number(lf_sigma)
        << "\nlf_cutoff = " << csv::number(lf_cutoff) << '\n';
    list("lf_s", lf_s);
    out << "lf_iterations = " << lf_iterations << '\n';
    list("lf_tv_lambda", lf_tv_lambda);
    list("lf_tv_rho", lf_tv_rho);
    out << "lf_tv_iterations = " << lf_tv_iterations << '\n';
    return out.str();
  }
};

// ---- spec builders -------------------------------------------------------

inline ExperimentSpec square_deblur_base(const Manifest& m) {
  ExperimentSpec spec;
  spec.id = "square";
  spec.source = {SourceKind::synth, SynthName::square, m.size, m.size, {}};
  spec.degradation.kind = DegradationKind::blur;
  spec.degradation.kernel_size = m.kernel_size;
  spec.degradation.kernel_sigma = m.kernel_sigma;
  spec.fidelity.spacing = m.spacing;
  spec.outputs.images = false;
  return spec;
}

inline ExperimentSpec noise_free_spec(const Manifest& m, double s) {
  ExperimentSpec spec = square_deblur_base(m);
  spec.fidelity.s = s;
  spec.solver = SolverKind::closed_form;
  return spec;
}

inline ExperimentSpec gd_spec(const Manifest& m, double sigma, double s, std::uint64_t seed) {
  ExperimentSpec spec = square_deblur_base(m);
  spec.noise.sigma = sigma;
  spec.noise.seed = seed;
  spec.fidelity.s = s;
  spec.solver = SolverKind::gd;
  spec.gd.step = m.gd_step;
  spec.gd.iterations = m.gd_iterations;
  spec.gd.init = GdInit::zero;
  return spec;
}

inline ExperimentSpec tv_spec(const Manifest& m, double sigma, double s, std::uint64_t seed, double lambda,
                              double rho) {
  ExperimentSpec spec = square_deblur_base(m);
  spec.noise.sigma = sigma;
  spec.noise.seed = seed;
  spec.fidelity.s = s;
  spec.solver = SolverKind::admm;
  spec.admm.lambda = lambda;
  spec.admm.mu = m.tv_mu;
  spec.admm.rho = rho;
  spec.admm.iterations = m.tv_iterations;
  return spec;
}

inline ExperimentSpec lowfreq_gd_spec(const Manifest& m, double s, std::uint64_t seed) {
  ExperimentSpec spec;
  spec.id = "lowfreq";
  spec.source = {SourceKind::synth, SynthName::square, m.lf_size, m.lf_size, {}};
  spec.noise = {NoiseKind::lowpass_gaussian, m.lf_sigma, m.lf_cutoff, seed};
  spec.fidelity.s = s;
  spec.fidelity.variant = Variant::homogeneous;
  spec.solver = SolverKind::gd;
  spec.gd.step.reset();
  spec.gd.iterations = m.lf_iterations;
  spec.gd.init = GdInit::mean;
  spec.outputs.images = false;
  return spec;
}

inline ExperimentSpec lowfreq_tv_spec(const Manifest& m, double s, std::uint64_t seed, double lambda, double rho) {
  ExperimentSpec spec = lowfreq_gd_spec(m, s, seed);
  spec.solver = SolverKind::admm;
  spec.admm.lambda = lambda;
  spec.admm.mu = 1.0;
  spec.admm.rho = rho;
  spec.admm.iterations = m.lf_tv_iterations;
  return spec;
}

// ---- results -------------------------------------------------------------

/// PSNRs of one configuration over the seeds.
struct SeedRuns {
  std::vector<Metrics> runs;  ///< one per seed, manifest order
  std::vector<Metrics> inputs;

  double mean_paper() const { return mean([](const Metrics& x) { return x.paper_psnr.db; }, runs); }
  double mean_standard() const { return mean([](const Metrics& x) { return x.standard_psnr.db; }, runs); }
  double mean_input_paper() const { return mean([](const Metrics& x) { return x.paper_psnr.db; }, inputs); }
  double mean_input_standard() const { return mean([](const Metrics& x) { return x.standard_psnr.db; }, inputs); }

 private:
  template <class F>
  static double mean(F f, const std::vector<Metrics>& xs) {
    double acc = 0.0;
    for (const auto& x : xs) acc += f(x);
    return xs.empty() ? 0.0 : acc / static_cast<double>(xs.size());
  }
};

struct TableRow {
  bool tv = false;
  double sigma = 0.0;
  std::vector<SeedRuns> cells;  ///< one per manifest table_s value
  std::vector<double> best_lambda, best_rho;  ///< TV rows only
};

inline std::vector<SeedRuns> run_grid(const std::vector<ExperimentSpec>& specs, std::size_t per_cell, unsigned jobs) {
  std::vector<RunResult> results(specs.size());
  std::vector<std::string> errors(specs.size());
  parallel_for(specs.size(), jobs, [&](std::size_t i) {
    try {
      results[i] = execute(specs[i]);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });
  for (std::size_t i = 0; i < specs.size(); ++i) {
    if (!errors[i].empty()) throw std::runtime_error("cell " + std::to_string(i) + " failed: " + errors[i]);
  }
  std::vector<SeedRuns> out(specs.size() / per_cell);
  for (std::size_t i = 0; i < specs.size(); ++i) {
    out[i / per_cell].runs.push_back(results[i].metrics);
    out[i / per_cell].inputs.push_back(results[i].input_metrics);
  }
  return out;
}

inline TableRow noise_free_row(const Manifest& m, const std::vector<double>& s_values) {
  std::vector<ExperimentSpec> specs;
  for (double s : s_values) specs.push_back(noise_free_spec(m, s));
  TableRow row;
  row.cells = run_grid(specs, 1, 1);
  return row;
}

inline TableRow gd_row(const Manifest& m, double sigma, unsigned jobs = 0) {
  std::vector<ExperimentSpec> specs;
  for (double s : m.table_s)
    for (std::uint64_t seed : m.seeds) specs.push_back(gd_spec(m, sigma, s, seed));
  TableRow row;
  row.sigma = sigma;
  row.cells = run_grid(specs, m.seeds.size(), jobs);
  return row;
}

/// Mean PSNR of every (lambda, rho) grid point for one s, grid-major.
struct TvGrid {
  double s = 0.0;
  std::vector<SeedRuns> points;  ///< index = il * tv_rho.size() + ir
};

/// TV row: for each s the (lambda, rho) with the best mean paper PSNR over seeds.
inline TableRow tv_row(const Manifest& m, double sigma, unsigned jobs = 0, std::vector<TvGrid>* grids = nullptr) {
  std::vector<ExperimentSpec> specs;
  for (double s : m.table_s)
    for (double lambda : m.tv_lambda)
      for (double rho : m.tv_rho)
        for (std::uint64_t seed : m.seeds) specs.push_back(tv_spec(m, sigma, s, seed, lambda, rho));
  const std::vector<SeedRuns> all = run_grid(specs, m.seeds.size(), jobs);
  const std::size_t per_s = m.tv_lambda.size() * m.tv_rho.size();

  TableRow row;
  row.tv = true;
  row.sigma = sigma;
  for (std::size_t is = 0; is < m.table_s.size(); ++is) {
    std::size_t best = 0;
    for (std::size_t g = 1; g < per_s; ++g) {
      if (all[is * per_s + g].mean_paper() > all[is * per_s + best].mean_paper()) best = g;
    }
    row.cells.push_back(all[is * per_s + best]);
    row.best_lambda.push_back(m.tv_lambda[best / m.tv_rho.size()]);
    row.best_rho.push_back(m.tv_rho[best % m.tv_rho.size()]);
    if (grids) grids->push_back({m.table_s[is], std::vector<SeedRuns>(all.begin() + is * per_s, all.begin() + (is + 1) * per_s)});
  }
  return row;
}

inline std::size_t index_of(const std::vector<double>& xs, double v) {
  const auto it = std::find(xs.begin(), xs.end(), v);
  if (it == xs.end()) throw std::invalid_argument("value not in manifest");
  return static_cast<std::size_t>(it - xs.begin());
}

struct Fig5 {
  std::vector<double> sigma;
  std::vector<SweepResult> sweeps;
};

inline SweepSpec fig5_sweep(const Manifest& m, double sigma) {
  SweepSpec sw;
  sw.base = gd_spec(m, sigma, 0.0, m.seeds.front());
  sw.base.id = "fig5";
  sw.axis = SweepAxis::s;
  sw.values = m.fig5_s_values();
  sw.seeds = m.seeds;
  return sw;
}

inline Fig5 run_fig5(const Manifest& m, unsigned jobs = 0) {
  Fig5 f;
  for (double sigma : m.fig5_sigma) {
    f.sigma.push_back(sigma);
    f.sweeps.push_back(run_sweep(fig5_sweep(m, sigma), jobs));
  }
  return f;
}

struct Lowfreq {
  std::vector<SeedRuns> gd;  ///< one per lf_s
  std::vector<SeedRuns> tv;  ///< per-s best over the TV grid (informational)
  std::vector<double> tv_lambda, tv_rho;
};

inline Lowfreq run_lowfreq(const Manifest& m, unsigned jobs = 0, bool with_tv = true) {
  Lowfreq out;
  std::vector<ExperimentSpec> specs;
  for (double s : m.lf_s)
    for (std::uint64_t seed : m.seeds) specs.push_back(lowfreq_gd_spec(m, s, seed));
  out.gd = run_grid(specs, m.seeds.size(), jobs);
  if (!with_tv) return out;

  specs.clear();
  for (double s : m.lf_s)
    for (double lambda : m.lf_tv_lambda)
      for (double rho : m.lf_tv_rho)
        for (std::uint64_t seed : m.seeds) specs.push_back(lowfreq_tv_spec(m, s, seed, lambda, rho));
  const auto all = run_grid(specs, m.seeds.size(), jobs);
  const std::size_t per_s = m.lf_tv_lambda.size() * m.lf_tv_rho.size();
  for (std::size_t is = 0; is < m.lf_s.size(); ++is) {
    std::size_t best = 0;
    for (std::size_t g = 1; g < per_s; ++g) {
      if (all[is * per_s + g].mean_paper() > all[is * per_s + best].mean_paper()) best = g;
    }
    out.tv.push_back(all[is * per_s + best]);
    out.tv_lambda.push_back(m.lf_tv_lambda[best / m.lf_tv_rho.size()]);
    out.tv_rho.push_back(m.lf_tv_rho[best % m.lf_tv_rho.size()]);
  }
  return out;
}

// ---- criteria ------------------------------------------------------------

struct Check {
  std::string id;
  bool pass = false;
  std::string detail;
};

inline std::string fmt(double v, int prec = 2) {
  if (std::isinf(v)) return v > 0 ? "exact" : "-inf";
  std::ostringstream o;
  o.setf(std::ios::fixed);
  o.precision(prec);
  o << v;
  return o.str();
}

/// A1: noise-free closed-form deblurring, paper PSNR > 150 for every s.
inline Check check_noise_free(const TableRow& row, const std::vector<double>& s_values) {
  Check c{"A1", true, {}};
  for (std::size_t i = 0; i < row.cells.size(); ++i) {
    const double p = row.cells[i].mean_paper();
    c.pass = c.pass && p > 150.0;
    c.detail += "s=" + fmt(s_values[i], 2) + ":" + fmt(p) + " ";
  }
  return c;
}

/// A2 (sigma = 0.1): mean PSNR(s=-0.5) > PSNR(0) + 5 dB and > PSNR(-1).
/// Evaluated on conventional PSNR, the scale of the published table.
inline Check check_gd_low_noise(const TableRow& row, const Manifest& m) {
  const double p0 = row.cells[index_of(m.table_s, 0.0)].mean_standard();
  const double ph = row.cells[index_of(m.table_s, -0.5)].mean_standard();
  const double p1 = row.cells[index_of(m.table_s, -1.0)].mean_standard();
  return {"A2", ph > p0 + 5.0 && ph > p1,
          "standard PSNR s=0:" + fmt(p0) + " s=-0.5:" + fmt(ph) + " s=-1:" + fmt(p1) + " (need s=-0.5 > s=0 + 5 and > s=-1)"};
}

/// A3 (sigma = 0.5): PSNR strictly increasing along s = 0, -0.25, ..., -1 in all but at most one seed.
inline Check check_gd_high_noise(const TableRow& row) {
  const std::size_t seeds = row.cells.front().runs.size();
  std::size_t good = 0;
  for (std::size_t k = 0; k < seeds; ++k) {
    bool inc = true;
    for (std::size_t i = 1; i < row.cells.size(); ++i) {
      inc = inc && row.cells[i].runs[k].paper_psnr.db > row.cells[i - 1].runs[k].paper_psnr.db;
    }
    good += inc;
  }
  std::string means;
  for (const auto& cell : row.cells) means += fmt(cell.mean_standard()) + " ";
  return {"A3", good + 1 >= seeds,
          "increasing in " + std::to_string(good) + "/" + std::to_string(seeds) + " seeds; mean standard PSNR " + means};
}

/// A4: TV rows at sigma = 0.1, PSNR(s=-1) > PSNR(s=0) and PSNR(s=-1) >= 35.
inline Check check_tv(const TableRow& row, const Manifest& m) {
  const auto& c0 = row.cells[index_of(m.table_s, 0.0)];
  const auto& c1 = row.cells[index_of(m.table_s, -1.0)];
  const bool pass = c1.mean_paper() > c0.mean_paper() && c1.mean_paper() >= 35.0 && c1.mean_standard() >= 35.0;
  return {"A4", pass,
          "paper PSNR s=0:" + fmt(c0.mean_paper()) + " s=-1:" + fmt(c1.mean_paper()) + "; standard PSNR s=0:" +
              fmt(c0.mean_standard()) + " s=-1:" + fmt(c1.mean_standard())};
}

/// A5: argmax-s at the larger noise level is <= argmax-s at the smaller one.
inline Check check_fig5(const Fig5& f) {
  const auto lo = std::min_element(f.sigma.begin(), f.sigma.end()) - f.sigma.begin();
  const auto hi = std::max_element(f.sigma.begin(), f.sigma.end()) - f.sigma.begin();
  const auto a_lo = f.sweeps[lo].argmax(), a_hi = f.sweeps[hi].argmax();
  const bool pass = a_lo && a_hi && *a_hi <= *a_lo;
  return {"A5", pass,
          "argmax s: sigma=" + fmt(f.sigma[hi], 1) + " -> " + (a_hi ? fmt(*a_hi) : "none") + ", sigma=" +
              fmt(f.sigma[lo], 1) + " -> " + (a_lo ? fmt(*a_lo) : "none")};
}

/// A6: PSNR strictly increasing in s over lf_s in all but at most one seed.
inline Check check_lowfreq(const Lowfreq& lf) {
  const std::size_t seeds = lf.gd.front().runs.size();
  std::size_t good = 0;
  for (std::size_t k = 0; k < seeds; ++k) {
    bool inc = true;
    for (std::size_t i = 1; i < lf.gd.size(); ++i) inc = inc && lf.gd[i].runs[k].paper_psnr.db > lf.gd[i - 1].runs[k].paper_psnr.db;
    good += inc;
  }
  std::string means;
  for (const auto& cell : lf.gd) means += fmt(cell.mean_standard()) + " ";
  return {"A6", good + 1 >= seeds,
          "ordered in " + std::to_string(good) + "/" + std::to_string(seeds) + " seeds; mean standard PSNR " + means};
}

// ---- writers -------------------------------------------------------------

inline void write_table_csv(std::ostream& out, const std::vector<TableRow>& rows, const Manifest& m, bool paper) {
  std::vector<std::string> header{"add_tv", "sigma", "input"};
  for (double s : m.table_s) header.push_back("s=" + csv::number(s));
  csv::row(out, header);
  for (const TableRow& r : rows) {
    std::vector<std::string> cells{r.tv ? "yes" : "no", csv::number(r.sigma)};
    const double in = paper ? r.cells.front().mean_input_paper() : r.cells.front().mean_input_standard();
    cells.push_back(std::isinf(in) ? "exact" : csv::number(in));
    for (const auto& c : r.cells) {
      const double v = paper ? c.mean_paper() : c.mean_standard();
      cells.push_back(std::isinf(v) ? "exact" : csv::number(v));
    }
    csv::row(out, cells);
  }
}

inline void write_summary(const std::filesystem::path& dir, const std::vector<Check>& checks) {
  std::ofstream csv_out(dir / "summary.csv");
  csv_out << "criterion,result,detail\n";
  std::ofstream txt(dir / "summary.txt");
  for (const Check& c : checks) {
    csv::row(csv_out, {c.id, c.pass ? "PASS" : "FAIL", c.detail});
    txt << c.id << ' ' << (c.pass ? "PASS" : "FAIL") << "  " << c.detail << '\n';
  }
}

inline std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream f(p);
  if (!f) throw IoError("cannot write " + p.string());
  return f;
}

/// table1: five rows (noise-free, GD at two noise levels, TV at two noise
/// levels) over the manifest s values, plus per-seed cells and the TV grid.
inline std::vector<Check> reproduce_table1(const Manifest& m, const std::filesystem::path& dir, unsigned jobs = 0) {
  std::filesystem::create_directories(dir);
  std::vector<TableRow> rows{noise_free_row(m, m.table_s)};
  for (double sigma : m.table_sigma) rows.push_back(gd_row(m, sigma, jobs));
  std::vector<std::vector<TvGrid>> grids(m.table_sigma.size());
  for (std::size_t i = 0; i < m.table_sigma.size(); ++i) rows.push_back(tv_row(m, m.table_sigma[i], jobs, &grids[i]));

  {
    auto f = open_out(dir / "table1.csv");
    write_table_csv(f, rows, m, false);
  }
  {
    auto f = open_out(dir / "table1_paper_psnr.csv");
    write_table_csv(f, rows, m, true);
  }
  {
    auto f = open_out(dir / "table1_cells.csv");
    f << "add_tv,sigma,s,seed,lambda,rho,paper_psnr,standard_psnr,l2_error,input_standard_psnr\n";
    for (const TableRow& r : rows) {
      for (std::size_t is = 0; is < r.cells.size(); ++is) {
        for (std::size_t k = 0; k < r.cells[is].runs.size(); ++k) {
          const Metrics& x = r.cells[is].runs[k];
          const std::string seed = r.sigma == 0.0 ? "" : std::to_string(m.seeds[k]);
          csv::row(f, {r.tv ? "yes" : "no", csv::number(r.sigma), csv::number(m.table_s[is]), seed,
                       r.tv ? csv::number(r.best_lambda[is]) : "", r.tv ? csv::number(r.best_rho[is]) : "",
                       csv::psnr(x.paper_psnr), csv::psnr(x.standard_psnr), csv::number(x.l2_error),
                       csv::psnr(r.cells[is].inputs[k].standard_psnr)});
        }
      }
    }
  }
  {
    auto f = open_out(dir / "table1_tv_grid.csv");
    f << "sigma,s,lambda,rho,mean_paper_psnr,mean_standard_psnr\n";
    for (std::size_t i = 0; i < grids.size(); ++i)
      for (const TvGrid& g : grids[i])
        for (std::size_t p = 0; p < g.points.size(); ++p)
          csv::row(f, {csv::number(m.table_sigma[i]), csv::number(g.s), csv::number(m.tv_lambda[p / m.tv_rho.size()]),
                       csv::number(m.tv_rho[p % m.tv_rho.size()]), csv::number(g.points[p].mean_paper()),
                       csv::number(g.points[p].mean_standard())});
  }

  // Restored images for the first seed of each GD cell.
  std::filesystem::create_directories(dir / "images");
  for (double sigma : m.table_sigma) {
    for (double s : m.table_s) {
      const ExperimentSpec spec = gd_spec(m, sigma, s, m.seeds.front());
      const RunResult r = execute(spec);
      save_image(r.restored, dir / "images" / ("gd_sigma" + csv::number(sigma) + "_s" + csv::number(s) + ".pgm"));
      if (s == m.table_s.front()) save_image(r.problem.data, dir / "images" / ("input_sigma" + csv::number(sigma) + ".pgm"));
    }
  }

  std::vector<Check> checks{check_noise_free(noise_free_row(m, m.a1_s), m.a1_s)};
  for (std::size_t i = 0; i < m.table_sigma.size(); ++i) {
    if (m.table_sigma[i] == 0.1) {
      checks.push_back(check_gd_low_noise(rows[1 + i], m));
      checks.push_back(check_tv(rows[1 + m.table_sigma.size() + i], m));
    }
    if (m.table_sigma[i] == 0.5) checks.push_back(check_gd_high_noise(rows[1 + i]));
  }
  std::sort(checks.begin(), checks.end(), [](const Check& a, const Check& b) { return a.id < b.id; });
  return checks;
}

inline std::vector<Check> reproduce_fig5(const Manifest& m, const std::filesystem::path& dir, unsigned jobs = 0) {
  std::filesystem::create_directories(dir);
  const Fig5 f = run_fig5(m, jobs);
  for (std::size_t i = 0; i < f.sigma.size(); ++i) {
    auto out = open_out(dir / ("fig5_sigma" + csv::number(f.sigma[i]) + ".csv"));
    write_sweep_csv(f.sweeps[i], out);
  }
  auto out = open_out(dir / "fig5.csv");
  std::vector<std::string> header{"s"};
  for (double sigma : f.sigma) {
    header.push_back("mean_standard_psnr_sigma" + csv::number(sigma));
    header.push_back("mean_paper_psnr_sigma" + csv::number(sigma));
  }
  csv::row(out, header);
  for (std::size_t j = 0; j < f.sweeps.front().summaries.size(); ++j) {
    std::vector<std::string> cells{csv::number(f.sweeps.front().summaries[j].value)};
    for (const auto& sw : f.sweeps) {
      cells.push_back(csv::number(sw.summaries[j].mean_standard));
      cells.push_back(csv::number(sw.summaries[j].mean_paper));
    }
    csv::row(out, cells);
  }
  return {check_fig5(f)};
}

inline std::vector<Check> reproduce_lowfreq(const Manifest& m, const std::filesystem::path& dir, unsigned jobs = 0) {
  std::filesystem::create_directories(dir);
  const Lowfreq lf = run_lowfreq(m, jobs, true);
  auto out = open_out(dir / "lowfreq.csv");
  out << "method,s,seed,lambda,rho,paper_psnr,standard_psnr,input_standard_psnr\n";
  for (std::size_t i = 0; i < m.lf_s.size(); ++i) {
    for (std::size_t k = 0; k < m.seeds.size(); ++k) {
      const Metrics& x = lf.gd[i].runs[k];
      csv::row(out, {"gd", csv::number(m.lf_s[i]), std::to_string(m.seeds[k]), "", "", csv::psnr(x.paper_psnr),
                     csv::psnr(x.standard_psnr), csv::psnr(lf.gd[i].inputs[k].standard_psnr)});
    }
  }
  for (std::size_t i = 0; i < lf.tv.size(); ++i) {
    for (std::size_t k = 0; k < m.seeds.size(); ++k) {
      const Metrics& x = lf.tv[i].runs[k];
      csv::row(out, {"tv", csv::number(m.lf_s[i]), std::to_string(m.seeds[k]), csv::number(lf.tv_lambda[i]),
                     csv::number(lf.tv_rho[i]), csv::psnr(x.paper_psnr), csv::psnr(x.standard_psnr),
                     csv::psnr(lf.tv[i].inputs[k].standard_psnr)});
    }
  }
  std::vector<Check> checks{check_lowfreq(lf)};
  std::string info;
  for (std::size_t i = 0; i < lf.tv.size(); ++i) info += "s=" + fmt(m.lf_s[i], 0) + ":" + fmt(lf.tv[i].mean_standard()) + " ";
  checks.push_back({"A6-tv-info", true, "TV+homogeneous-H^s mean standard PSNR " + info + "(informational)"});
  return checks;
}

enum class Target { table1, fig5, lowfreq };

inline Target parse_target(std::string_view s) {
  if (s == "table1") return Target::table1;
  if (s == "fig5") return Target::fig5;
  if (s == "lowfreq") return Target::lowfreq;
  throw std::invalid_argument("unknown reproduce target '" + std::string(s) + "' (table1, fig5, lowfreq)");
}

/// Runs the pinned experiment set and writes CSVs, images, manifest.txt and
/// summary.{csv,txt} into `dir`.
inline std::vector<Check> run(Target t, const std::filesystem::path& dir, unsigned jobs = 0, const Manifest& m = {}) {
  std::vector<Check> checks;
  switch (t) {
    case Target::table1: checks = reproduce_table1(m, dir, jobs); break;
    case Target::fig5: checks = reproduce_fig5(m, dir, jobs); break;
    case Target::lowfreq: checks = reproduce_lowfreq(m, dir, jobs); break;
  }
  {
    auto f = open_out(dir / "manifest.txt");
    f << m.text();
  }
  write_summary(dir, checks);
  return checks;
}

}  // namespace sobolev::reproduce
