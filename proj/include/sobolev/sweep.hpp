#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "sobolev/csv.hpp"
#include "sobolev/experiment.hpp"

namespace sobolev {

enum class SweepAxis { s, lambda, rho, sigma };

inline SweepAxis parse_sweep_axis(std::string_view s) {
  if (s == "s") return SweepAxis::s;
  if (s == "lambda") return SweepAxis::lambda;
  if (s == "rho") return SweepAxis::rho;
  if (s == "sigma") return SweepAxis::sigma;
  throw std::invalid_argument("unknown sweep axis '" + std::string(s) + "' (s, lambda, rho, sigma)");
}

inline const char* to_string(SweepAxis a) {
  switch (a) {
    case SweepAxis::s: return "s";
    case SweepAxis::lambda: return "lambda";
    case SweepAxis::rho: return "rho";
    case SweepAxis::sigma: return "sigma";
  }
  return "?";
}

struct SweepSpec {
  ExperimentSpec base;
  SweepAxis axis = SweepAxis::s;
  std::vector<double> values;
  std::vector<std::uint64_t> seeds{1};

  void validate() const {
    base.validate();
    if (values.empty()) throw SpecError("sweep needs at least one value");
    if (seeds.empty()) throw SpecError("sweep needs at least one seed");
    for (double v : values) {
      if (!std::isfinite(v)) throw SpecError("sweep values must be finite");
    }
  }
};

/// Applies one sweep coordinate to a copy of the base spec.
inline ExperimentSpec sweep_cell_spec(const SweepSpec& sweep, double value, std::uint64_t seed) {
  ExperimentSpec spec = sweep.base;
  spec.noise.seed = seed;
  switch (sweep.axis) {
    case SweepAxis::s: spec.fidelity.s = value; break;
    case SweepAxis::lambda: spec.admm.lambda = value; break;
    case SweepAxis::rho: spec.admm.rho = value; break;
    case SweepAxis::sigma: spec.noise.sigma = value; break;
  }
  return spec;
}

struct SweepCell {
  double value = 0.0;
  std::uint64_t seed = 0;
  std::optional<Metrics> metrics;  ///< empty when the cell failed
  Metrics input;
  std::string error;
};

struct SweepSummary {
  double value = 0.0;
  std::size_t count = 0;  ///< successful cells
  double mean_paper = 0.0, std_paper = 0.0;
  double mean_standard = 0.0, std_standard = 0.0;
  double mean_input_standard = 0.0;
};

struct SweepResult {
  SweepAxis axis = SweepAxis::s;
  std::vector<SweepCell> cells;  ///< ordered by (value, seed)
  std::vector<SweepSummary> summaries;

  /// Axis value with the largest mean paper PSNR (ties: the smaller value).
  std::optional<double> argmax() const {
    const SweepSummary* best = nullptr;
    for (const auto& s : summaries) {
      if (s.count && (!best || s.mean_paper > best->mean_paper)) best = &s;
    }
    return best ? std::optional<double>(best->value) : std::nullopt;
  }
};

/// Runs `count` independent jobs on at most `jobs` threads. Job i writes
/// only its own slot, so results do not depend on scheduling.
inline void parallel_for(std::size_t count, unsigned jobs, const std::function<void(std::size_t)>& body) {
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, count));
  if (jobs <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(jobs);
  for (unsigned t = 0; t < jobs; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

namespace detail {
inline void mean_std(const std::vector<double>& xs, double& mean, double& sd) {
  mean = 0.0;
  sd = 0.0;
  if (xs.empty()) return;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  if (xs.size() < 2 || std::isinf(mean)) return;
  for (double x : xs) sd += (x - mean) * (x - mean);
  sd = std::sqrt(sd / static_cast<double>(xs.size() - 1));
}
}  // namespace detail

/// jobs = 0 uses the hardware concurrency.
inline SweepResult run_sweep(const SweepSpec& sweep, unsigned jobs = 0) {
  sweep.validate();
  std::vector<double> values = sweep.values;
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  std::vector<std::uint64_t> seeds = sweep.seeds;
  std::sort(seeds.begin(), seeds.end());
  seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());

  SweepResult result;
  result.axis = sweep.axis;
  for (double v : values)
    for (std::uint64_t seed : seeds) result.cells.push_back({v, seed, std::nullopt, {}, {}});

  parallel_for(result.cells.size(), jobs, [&](std::size_t i) {
    SweepCell& cell = result.cells[i];
    try {
      const ExperimentSpec spec = sweep_cell_spec(sweep, cell.value, cell.seed);
      const RunResult r = execute(spec);
      cell.metrics = r.metrics;
      cell.input = r.input_metrics;
    } catch (const std::exception& e) {
      cell.error = e.what();
    }
  });

  for (double v : values) {
    std::vector<double> paper, standard, input;
    for (const auto& c : result.cells) {
      if (c.value != v || !c.metrics) continue;
      paper.push_back(c.metrics->paper_psnr.db);
      standard.push_back(c.metrics->standard_psnr.db);
      input.push_back(c.input.standard_psnr.db);
    }
    SweepSummary s;
    s.value = v;
    s.count = paper.size();
    double unused = 0.0;
    detail::mean_std(paper, s.mean_paper, s.std_paper);
    detail::mean_std(standard, s.mean_standard, s.std_standard);
    detail::mean_std(input, s.mean_input_standard, unused);
    result.summaries.push_back(s);
  }
  return result;
}

inline constexpr std::string_view kSweepHeader =
    "row,axis,value,seed,paper_psnr,standard_psnr,l2_error,input_paper_psnr,input_standard_psnr,"
    "paper_psnr_std,standard_psnr_std,status";

/// One `cell` row per (value, seed), then one `mean` row per value holding
/// means in the PSNR columns and sample standard deviations in the *_std
/// columns. Failed cells carry status "error: <message>".
inline void write_sweep_csv(const SweepResult& r, std::ostream& out) {
  using csv::number;
  const std::string axis = to_string(r.axis);
  auto psnr_or_exact = [](double db) { return std::isinf(db) ? std::string("exact") : number(db); };
  out << kSweepHeader << '\n';
  for (const SweepCell& c : r.cells) {
    if (c.metrics) {
      csv::row(out, {"cell", axis, number(c.value), std::to_string(c.seed), csv::psnr(c.metrics->paper_psnr),
                     csv::psnr(c.metrics->standard_psnr), number(c.metrics->l2_error), csv::psnr(c.input.paper_psnr),
                     csv::psnr(c.input.standard_psnr), "", "", "ok"});
    } else {
      csv::row(out, {"cell", axis, number(c.value), std::to_string(c.seed), "", "", "", "", "", "", "",
                     "error: " + c.error});
    }
  }
  for (const SweepSummary& s : r.summaries) {
    if (s.count == 0) {
      csv::row(out, {"mean", axis, number(s.value), "", "", "", "", "", "", "", "", "error: no successful cells"});
      continue;
    }
    csv::row(out, {"mean", axis, number(s.value), "", psnr_or_exact(s.mean_paper), psnr_or_exact(s.mean_standard), "",
                   "", psnr_or_exact(s.mean_input_standard), number(s.std_paper), number(s.std_standard),
                   "n=" + std::to_string(s.count)});
  }
}

}  // namespace sobolev
