// Command-line front end for the sobolev library.
//
// Exit codes: 0 success, 1 runtime or I/O failure, 2 invalid spec or
// arguments. `reproduce --strict` exits 3 when a criterion fails.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "sobolev/sobolev.hpp"

namespace fs = std::filesystem;
using namespace sobolev;

namespace {

constexpr int kRuntimeError = 1;
constexpr int kUsageError = 2;
constexpr int kCriterionFailed = 3;

/// Flags shared by every experiment-driven subcommand. Each flag maps onto
/// a spec-file key, so overrides go through set_field like file lines do.
struct ExperimentFlags {
  std::optional<std::string> spec_file;
  std::vector<std::pair<const char*, std::optional<std::string>>> keyed{
      {"id", {}},           {"source", {}},          {"degradation", {}},   {"fidelity.s", {}},
      {"fidelity.variant", {}}, {"fidelity.basis", {}}, {"fidelity.spacing", {}}, {"fidelity.dc_policy", {}},
      {"noise.sigma", {}},  {"noise.seed", {}},      {"noise.kind", {}},    {"noise.cutoff", {}},
      {"solver", {}},       {"admm.lambda", {}},     {"admm.mu", {}},       {"admm.rho", {}},
      {"admm.tol", {}},     {"admm.isotropic", {}},  {"gd.step", {}},       {"gd.init", {}},
      {"closed_form.ridge", {}}, {"outputs.format", {}}};
  std::optional<std::string> iters;
  std::optional<std::size_t> kernel_size;
  std::optional<double> kernel_sigma;
  std::vector<std::string> sets;
  std::string out = "out";
  bool dry_run = false;

  std::optional<std::string>& slot(const char* key) {
    for (auto& [k, v] : keyed)
      if (std::string_view(k) == key) return v;
    throw std::logic_error(key);
  }

  void attach(CLI::App& app) {
    app.add_option("--spec", spec_file, "spec file (key = value lines); flags override it");
    auto opt = [&](const char* flag, const char* key, const char* help) { app.add_option(flag, slot(key), help); };
    opt("--id", "id", "experiment id, names the output directory");
    opt("--source", "source", "synth:<name>:<w>:<h> or file:<path>");
    opt("--s", "fidelity.s", "Sobolev order s");
    opt("--variant", "fidelity.variant", "inhomogeneous | homogeneous");
    opt("--basis", "fidelity.basis", "dft_periodic | dct_neumann | pde_integer");
    opt("--spacing", "fidelity.spacing", "pixel spacing h");
    opt("--dc-policy", "fidelity.dc_policy", "project | reject");
    opt("--sigma", "noise.sigma", "noise standard deviation");
    opt("--seed", "noise.seed", "noise seed");
    opt("--noise-kind", "noise.kind", "gaussian_white | lowpass_gaussian");
    opt("--cutoff", "noise.cutoff", "low-pass cutoff in cycles/pixel");
    opt("--solver", "solver", "gd | admm | closed_form");
    opt("--lambda", "admm.lambda", "ADMM fidelity weight");
    opt("--mu", "admm.mu", "ADMM TV weight");
    opt("--rho", "admm.rho", "ADMM penalty");
    opt("--tol", "admm.tol", "ADMM relative primal residual tolerance (0 = run all iterations)");
    opt("--isotropic", "admm.isotropic", "isotropic TV shrink (true/false)");
    opt("--step", "gd.step", "GD step size or 'auto' (1/L)");
    opt("--init", "gd.init", "GD initial guess: zero | data | adjoint | mean");
    opt("--ridge", "closed_form.ridge", "closed-form ridge");
    opt("--format", "outputs.format", "image format: pgm | png");
    app.add_option("--iters", iters, "iterations of the selected solver");
    app.add_option("--kernel-size", kernel_size, "blur kernel size (odd)");
    app.add_option("--kernel-sigma", kernel_sigma, "blur kernel sigma");
    app.add_option("--set", sets, "extra key=value override (repeatable)");
    app.add_option("--out", out, "output root directory")->capture_default_str();
    app.add_flag("--dry-run", dry_run, "print the resolved spec and exit");
  }

  /// File first, then flags in a fixed order, then --set in command-line order.
  ExperimentSpec build(ExperimentSpec spec) const {
    if (spec_file) {
      std::ifstream in(*spec_file);
      if (!in) throw IoError("cannot open spec file " + *spec_file);
      apply_spec_text(spec, in);
    }
    for (const auto& [key, value] : keyed)
      if (value) set_field(spec, key, *value);
    if (kernel_size || kernel_sigma) {
      spec.degradation.kind = DegradationKind::blur;
      if (kernel_size) spec.degradation.kernel_size = *kernel_size;
      if (kernel_sigma) spec.degradation.kernel_sigma = *kernel_sigma;
    }
    if (iters) set_field(spec, spec.solver == SolverKind::admm ? "admm.iterations" : "gd.iterations", *iters);
    for (const std::string& kv : sets) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw SpecError("--set expects key=value, got '" + kv + "'");
      set_field(spec, std::string_view(kv).substr(0, eq), std::string_view(kv).substr(eq + 1));
    }
    spec.validate();
    return spec;
  }
};

void print_metrics(const std::string& id, const RunResult& r) {
  std::printf("%s paper_psnr=%s standard_psnr=%s l2_error=%s input_standard_psnr=%s\n", id.c_str(),
              csv::psnr(r.metrics.paper_psnr).c_str(), csv::psnr(r.metrics.standard_psnr).c_str(),
              csv::number(r.metrics.l2_error).c_str(), csv::psnr(r.input_metrics.standard_psnr).c_str());
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  for (auto part : detail::split(text, ',')) {
    part = detail::trim(part);
    if (!part.empty()) out.emplace_back(part);
  }
  return out;
}

/// Opens `path` for writing, or returns stdout when path is empty or "-".
struct Sink {
  std::ofstream file;
  std::ostream* stream = &std::cout;

  explicit Sink(const std::string& path) {
    if (path.empty() || path == "-") return;
    if (fs::path(path).has_parent_path()) fs::create_directories(fs::path(path).parent_path());
    file.open(path);
    if (!file) throw IoError("cannot write " + path);
    stream = &file;
  }
};

SobolevParams norm_params(const std::optional<std::string>& s, const std::optional<std::string>& variant,
                          const std::optional<std::string>& basis, const std::optional<std::string>& spacing,
                          const std::optional<std::string>& dc) {
  ExperimentSpec tmp;
  if (s) set_field(tmp, "fidelity.s", *s);
  if (variant) set_field(tmp, "fidelity.variant", *variant);
  if (basis) set_field(tmp, "fidelity.basis", *basis);
  if (spacing) set_field(tmp, "fidelity.spacing", *spacing);
  if (dc) set_field(tmp, "fidelity.dc_policy", *dc);
  tmp.fidelity.validate();
  return tmp.fidelity;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sobolev-norm data fidelity for image denoising and deblurring"};
  app.require_subcommand(1);

  // synth
  auto* synth = app.add_subcommand("synth", "write a synthetic test image");
  std::string synth_name = "square", synth_out;
  std::size_t synth_w = 100, synth_h = 100;
  synth->add_option("--name", synth_name, "square | circles | shape")->capture_default_str();
  synth->add_option("--width", synth_w)->capture_default_str();
  synth->add_option("--height", synth_h)->capture_default_str();
  synth->add_option("--out", synth_out, "output image (.pgm or .png)")->required();

  // noise
  auto* noise = app.add_subcommand("noise", "add seeded noise to an image");
  std::string noise_in, noise_out;
  std::optional<std::string> noise_sigma, noise_seed, noise_kind, noise_cutoff;
  noise->add_option("--in", noise_in, "input image")->required();
  noise->add_option("--out", noise_out, "output image")->required();
  noise->add_option("--sigma", noise_sigma);
  noise->add_option("--seed", noise_seed);
  noise->add_option("--noise-kind", noise_kind, "gaussian_white | lowpass_gaussian");
  noise->add_option("--cutoff", noise_cutoff);

  // norm
  auto* norm = app.add_subcommand("norm", "print the H^s norm of an image");
  std::string norm_in;
  std::optional<std::string> n_s, n_variant, n_basis, n_spacing, n_dc;
  norm->add_option("--in,image", norm_in, "input image")->required();
  norm->add_option("--s", n_s);
  norm->add_option("--variant", n_variant);
  norm->add_option("--basis", n_basis);
  norm->add_option("--spacing", n_spacing);
  norm->add_option("--dc-policy", n_dc);

  // denoise / deblur
  auto* denoise = app.add_subcommand("denoise", "run a denoising experiment (no degradation operator)");
  ExperimentFlags denoise_flags;
  denoise_flags.attach(*denoise);
  auto* deblur = app.add_subcommand("deblur", "run a deblurring experiment (default blur 15x15, sigma 1)");
  ExperimentFlags deblur_flags;
  deblur_flags.attach(*deblur);

  // sweep
  auto* sweep = app.add_subcommand("sweep", "sweep one parameter over values x seeds");
  ExperimentFlags sweep_flags;
  sweep_flags.attach(*sweep);
  std::string sweep_axis = "s", sweep_values, sweep_seeds = "1";
  unsigned sweep_jobs = 0;
  sweep->add_option("--axis", sweep_axis, "s | lambda | rho | sigma")->capture_default_str();
  sweep->add_option("--values", sweep_values, "comma-separated axis values")->required();
  sweep->add_option("--seeds", sweep_seeds, "comma-separated noise seeds")->capture_default_str();
  sweep->add_option("--jobs", sweep_jobs, "worker threads (0 = all cores)")->capture_default_str();

  // reproduce
  auto* reproduce = app.add_subcommand("reproduce", "run a pinned experiment set and check the criteria");
  std::string repro_target;
  std::optional<std::string> repro_out;
  unsigned repro_jobs = 0;
  bool repro_strict = false;
  reproduce->add_option("target", repro_target, "table1 | fig5 | lowfreq")->required();
  reproduce->add_option("--out", repro_out, "output directory (default out/reproduce/<target>)");
  reproduce->add_option("--jobs", repro_jobs, "worker threads (0 = all cores)")->capture_default_str();
  reproduce->add_flag("--strict", repro_strict, "exit 3 if any criterion fails");

  // kernel-dump
  auto* kdump = app.add_subcommand("kernel-dump", "write Gaussian kernel taps as CSV (row,col,weight)");
  std::size_t k_size = 15;
  double k_sigma = 1.0;
  std::string k_out;
  kdump->add_option("--kernel-size", k_size)->capture_default_str();
  kdump->add_option("--kernel-sigma", k_sigma)->capture_default_str();
  kdump->add_option("--out", k_out, "CSV path (default stdout)");

  // multiplier-dump
  auto* mdump = app.add_subcommand("multiplier-dump", "write multiplier weights as CSV (k,l,weight)");
  std::optional<std::string> m_s, m_variant, m_basis, m_spacing;
  std::size_t m_w = 8, m_h = 8;
  std::string m_out;
  mdump->add_option("--s", m_s);
  mdump->add_option("--variant", m_variant);
  mdump->add_option("--basis", m_basis);
  mdump->add_option("--spacing", m_spacing);
  mdump->add_option("--width", m_w)->capture_default_str();
  mdump->add_option("--height", m_h)->capture_default_str();
  mdump->add_option("--out", m_out, "CSV path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*synth) {
      save_image(synth_image(parse_synth_name(synth_name), synth_w, synth_h), synth_out);
    } else if (*noise) {
      ExperimentSpec tmp;
      if (noise_sigma) set_field(tmp, "noise.sigma", *noise_sigma);
      if (noise_seed) set_field(tmp, "noise.seed", *noise_seed);
      if (noise_kind) set_field(tmp, "noise.kind", *noise_kind);
      if (noise_cutoff) set_field(tmp, "noise.cutoff", *noise_cutoff);
      tmp.noise.validate();
      save_image(add_noise(load_image(noise_in), tmp.noise), noise_out);
    } else if (*norm) {
      const SobolevParams p = norm_params(n_s, n_variant, n_basis, n_spacing, n_dc);
      std::printf("%s\n", csv::number(hs_norm(load_image(norm_in), p)).c_str());
    } else if (*denoise) {
      const ExperimentSpec spec = denoise_flags.build(ExperimentSpec{});
      if (spec.degradation.kind != DegradationKind::none) {
        throw SpecError("denoise runs without a degradation operator; use deblur");
      }
      if (denoise_flags.dry_run) {
        std::fputs(to_text(spec).c_str(), stdout);
        return 0;
      }
      print_metrics(spec.id, run(spec, denoise_flags.out));
    } else if (*deblur) {
      ExperimentSpec base;
      base.degradation.kind = DegradationKind::blur;
      const ExperimentSpec spec = deblur_flags.build(base);
      if (spec.degradation.kind == DegradationKind::none) {
        throw SpecError("deblur needs a degradation (blur or symbol); use denoise");
      }
      if (deblur_flags.dry_run) {
        std::fputs(to_text(spec).c_str(), stdout);
        return 0;
      }
      print_metrics(spec.id, run(spec, deblur_flags.out));
    } else if (*sweep) {
      SweepSpec sw;
      sw.base = sweep_flags.build(ExperimentSpec{});
      sw.axis = parse_sweep_axis(sweep_axis);
      for (const auto& v : split_list(sweep_values)) sw.values.push_back(detail::parse_real("--values", v));
      sw.seeds.clear();
      for (const auto& v : split_list(sweep_seeds)) sw.seeds.push_back(detail::parse_u64("--seeds", v));
      const SweepResult r = run_sweep(sw, sweep_jobs);
      const fs::path dir = fs::path(sweep_flags.out) / sw.base.id;
      fs::create_directories(dir);
      std::ofstream f(dir / "sweep.csv");
      if (!f) throw IoError("cannot write " + (dir / "sweep.csv").string());
      write_sweep_csv(r, f);
      for (const auto& s : r.summaries) {
        std::printf("%s=%s n=%zu mean_paper_psnr=%s mean_standard_psnr=%s\n", to_string(r.axis),
                    csv::number(s.value).c_str(), s.count, reproduce::fmt(s.mean_paper, 4).c_str(),
                    reproduce::fmt(s.mean_standard, 4).c_str());
      }
      if (const auto best = r.argmax()) std::printf("argmax %s=%s\n", to_string(r.axis), csv::number(*best).c_str());
    } else if (*reproduce) {
      const auto target = reproduce::parse_target(repro_target);
      const fs::path dir = repro_out ? fs::path(*repro_out) : fs::path("out") / "reproduce" / repro_target;
      const auto checks = reproduce::run(target, dir, repro_jobs);
      bool all = true;
      for (const auto& c : checks) {
        std::printf("%s %s %s\n", c.id.c_str(), c.pass ? "PASS" : "FAIL", c.detail.c_str());
        all = all && c.pass;
      }
      std::printf("wrote %s\n", dir.string().c_str());
      if (repro_strict && !all) return kCriterionFailed;
    } else if (*kdump) {
      const BlurKernel k = gaussian_kernel(k_size, k_sigma);
      Sink sink(k_out);
      *sink.stream << "row,col,weight\n";
      for (std::size_t r = 0; r < k.size; ++r)
        for (std::size_t c = 0; c < k.size; ++c)
          csv::row(*sink.stream, {std::to_string(r), std::to_string(c), csv::number(k.at(r, c))});
    } else if (*mdump) {
      const SobolevParams p = norm_params(m_s, m_variant, m_basis, m_spacing, std::nullopt);
      const SpectralMultiplier mult = make_multiplier(p, m_w, m_h);
      Sink sink(m_out);
      // k: row frequency (signed for the DFT half spectrum), l: column index.
      *sink.stream << "k,l,weight\n";
      for (std::size_t r = 0; r < m_h; ++r) {
        const long k = p.basis == Basis::dft_periodic ? fft::signed_frequency(r, m_h) : static_cast<long>(r);
        for (std::size_t c = 0; c < mult.cols(); ++c)
          csv::row(*sink.stream, {std::to_string(k), std::to_string(c), csv::number(mult.at(r, c))});
      }
    }
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kUsageError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kRuntimeError;
  }
  return 0;
}
