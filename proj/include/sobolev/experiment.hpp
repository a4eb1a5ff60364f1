#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sobolev/admm.hpp"
#include "sobolev/closed_form.hpp"
#include "sobolev/csv.hpp"
#include "sobolev/gradient_descent.hpp"
#include "sobolev/image_io.hpp"
#include "sobolev/kernel.hpp"
#include "sobolev/linear_operator.hpp"
#include "sobolev/metrics.hpp"
#include "sobolev/multiplier.hpp"
#include "sobolev/noise.hpp"
#include "sobolev/objective.hpp"
#include "sobolev/synth.hpp"

namespace sobolev {

/// Invalid experiment description (bad key, value or combination).
class SpecError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class SourceKind { synth, file };
enum class DegradationKind { none, blur, symbol };
enum class SolverKind { gd, admm, closed_form };
enum class GdInit { zero, data, adjoint, mean };

struct SourceSpec {
  SourceKind kind = SourceKind::synth;
  SynthName name = SynthName::square;
  std::size_t width = 100;
  std::size_t height = 100;
  std::string path;
};

struct DegradationSpec {
  DegradationKind kind = DegradationKind::none;
  std::size_t kernel_size = 15;
  double kernel_sigma = 1.0;
  double alpha = 1.0;  ///< smoothing order of the <xi>^{-alpha} symbol
};

struct GdSpec {
  std::optional<double> step = 1.0;  ///< nullopt: 1/L
  std::size_t iterations = 100;
  GdInit init = GdInit::zero;
};

struct OutputFlags {
  bool images = true;
  bool trace = true;
  bool metrics = true;
  std::string image_format = "pgm";  ///< pgm or png
};

/// One restoration run: source -> degrade -> noise -> solve -> metrics.
struct ExperimentSpec {
  std::string id = "experiment";
  SourceSpec source;
  DegradationSpec degradation;
  NoiseSpec noise;
  SobolevParams fidelity;
  SolverKind solver = SolverKind::gd;
  GdSpec gd;
  AdmmParams admm;
  double ridge = 0.0;
  OutputFlags outputs;

  void validate() const;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

inline double parse_real(std::string_view key, std::string_view v) {
  v = trim(v);
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(out)) {
    throw SpecError(std::string(key) + ": expected a number, got '" + std::string(v) + "'");
  }
  return out;
}

inline std::uint64_t parse_u64(std::string_view key, std::string_view v) {
  v = trim(v);
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw SpecError(std::string(key) + ": expected a non-negative integer, got '" + std::string(v) + "'");
  }
  return out;
}

inline bool parse_flag(std::string_view key, std::string_view v) {
  v = trim(v);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw SpecError(std::string(key) + ": expected true/false, got '" + std::string(v) + "'");
}

template <class F>
auto parse_enum(std::string_view key, std::string_view v, F&& parse) {
  try {
    return parse(trim(v));
  } catch (const std::invalid_argument& e) {
    throw SpecError(std::string(key) + ": " + e.what());
  }
}

inline bool filesystem_safe(std::string_view id) {
  if (id.empty() || id == "." || id == ".." || id.size() > 128) return false;
  for (char c : id) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' ||
                    c == '_' || c == '.';
    if (!ok) return false;
  }
  return true;
}

inline const char* to_string(GdInit i) {
  switch (i) {
    case GdInit::zero: return "zero";
    case GdInit::data: return "data";
    case GdInit::adjoint: return "adjoint";
    case GdInit::mean: return "mean";
  }
  return "?";
}

inline const char* to_string(SolverKind k) {
  switch (k) {
    case SolverKind::gd: return "gd";
    case SolverKind::admm: return "admm";
    case SolverKind::closed_form: return "closed_form";
  }
  return "?";
}

}  // namespace detail

inline void ExperimentSpec::validate() const {
  if (!detail::filesystem_safe(id)) {
    throw SpecError("id '" + id + "' must be 1-128 characters from [A-Za-z0-9._-]");
  }
  if (source.kind == SourceKind::synth) {
    if (source.width < kMinSynthSize || source.height < kMinSynthSize) {
      throw SpecError("synthetic source must be at least 16x16");
    }
  } else if (source.path.empty()) {
    throw SpecError("file source needs a path");
  }
  if (degradation.kind == DegradationKind::blur) {
    if (degradation.kernel_size % 2 == 0) throw SpecError("kernel size must be odd");
    if (!(degradation.kernel_sigma > 0.0)) throw SpecError("kernel sigma must be positive");
  }
  try {
    noise.validate();
    fidelity.validate();
    if (solver == SolverKind::admm) admm.validate();
  } catch (const SpecError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw SpecError(e.what());
  }
  if (solver == SolverKind::gd && gd.step && !(*gd.step > 0.0)) throw SpecError("gd.step must be positive or 'auto'");
  if ((solver == SolverKind::admm || solver == SolverKind::closed_form) && fidelity.basis != Basis::dft_periodic) {
    throw SpecError(std::string(detail::to_string(solver)) + " needs fidelity.basis = dft_periodic");
  }
  if (!(ridge >= 0.0)) throw SpecError("closed_form.ridge must be >= 0");
  if (outputs.image_format != "pgm" && outputs.image_format != "png") {
    throw SpecError("outputs.format must be pgm or png");
  }
}

/// Sets one key of the flat `key = value` format. Spec files and command-line
/// overrides both go through here, so every flag has a file equivalent.
inline void set_field(ExperimentSpec& spec, std::string_view key, std::string_view value) {
  using namespace detail;
  const std::string k(trim(key));
  const std::string_view v = trim(value);
  if (k == "id") {
    spec.id = std::string(v);
  } else if (k == "source") {
    const auto parts = split(v, ':');
    if (parts[0] == "synth" && parts.size() == 4) {
      spec.source.kind = SourceKind::synth;
      spec.source.name = parse_enum(k, parts[1], parse_synth_name);
      spec.source.width = parse_u64(k, parts[2]);
      spec.source.height = parse_u64(k, parts[3]);
    } else if (parts[0] == "file" && v.size() > 5) {
      spec.source.kind = SourceKind::file;
      spec.source.path = std::string(v.substr(5));
    } else {
      throw SpecError("source: expected synth:<name>:<w>:<h> or file:<path>, got '" + std::string(v) + "'");
    }
  } else if (k == "degradation") {
    const auto parts = split(v, ':');
    if (parts[0] == "none" && parts.size() == 1) {
      spec.degradation.kind = DegradationKind::none;
    } else if (parts[0] == "blur" && parts.size() == 3) {
      spec.degradation.kind = DegradationKind::blur;
      spec.degradation.kernel_size = parse_u64(k, parts[1]);
      spec.degradation.kernel_sigma = parse_real(k, parts[2]);
    } else if (parts[0] == "symbol" && parts.size() == 2) {
      spec.degradation.kind = DegradationKind::symbol;
      spec.degradation.alpha = parse_real(k, parts[1]);
    } else {
      throw SpecError("degradation: expected none, blur:<size>:<sigma> or symbol:<alpha>, got '" + std::string(v) + "'");
    }
  } else if (k == "noise.kind") {
    spec.noise.kind = parse_enum(k, v, parse_noise_kind);
  } else if (k == "noise.sigma") {
    spec.noise.sigma = parse_real(k, v);
  } else if (k == "noise.cutoff") {
    spec.noise.cutoff = parse_real(k, v);
  } else if (k == "noise.seed") {
    spec.noise.seed = parse_u64(k, v);
  } else if (k == "fidelity.s") {
    spec.fidelity.s = parse_real(k, v);
  } else if (k == "fidelity.variant") {
    spec.fidelity.variant = parse_enum(k, v, parse_variant);
  } else if (k == "fidelity.basis") {
    spec.fidelity.basis = parse_enum(k, v, parse_basis);
  } else if (k == "fidelity.spacing") {
    spec.fidelity.spacing = parse_real(k, v);
  } else if (k == "fidelity.dc_policy") {
    spec.fidelity.dc_policy = parse_enum(k, v, parse_dc_policy);
  } else if (k == "solver") {
    if (v == "gd") spec.solver = SolverKind::gd;
    else if (v == "admm") spec.solver = SolverKind::admm;
    else if (v == "closed_form") spec.solver = SolverKind::closed_form;
    else throw SpecError("solver: expected gd, admm or closed_form, got '" + std::string(v) + "'");
  } else if (k == "gd.step") {
    if (v == "auto") spec.gd.step.reset();
    else spec.gd.step = parse_real(k, v);
  } else if (k == "gd.iterations") {
    spec.gd.iterations = parse_u64(k, v);
  } else if (k == "gd.init") {
    if (v == "zero") spec.gd.init = GdInit::zero;
    else if (v == "data") spec.gd.init = GdInit::data;
    else if (v == "adjoint") spec.gd.init = GdInit::adjoint;
    else if (v == "mean") spec.gd.init = GdInit::mean;
    else throw SpecError("gd.init: expected zero, data, adjoint or mean, got '" + std::string(v) + "'");
  } else if (k == "admm.lambda") {
    spec.admm.lambda = parse_real(k, v);
  } else if (k == "admm.mu") {
    spec.admm.mu = parse_real(k, v);
  } else if (k == "admm.rho") {
    spec.admm.rho = parse_real(k, v);
  } else if (k == "admm.iterations") {
    spec.admm.iterations = parse_u64(k, v);
  } else if (k == "admm.tol") {
    spec.admm.tol = parse_real(k, v);
  } else if (k == "admm.isotropic") {
    spec.admm.isotropic = parse_flag(k, v);
  } else if (k == "closed_form.ridge") {
    spec.ridge = parse_real(k, v);
  } else if (k == "outputs.images") {
    spec.outputs.images = parse_flag(k, v);
  } else if (k == "outputs.trace") {
    spec.outputs.trace = parse_flag(k, v);
  } else if (k == "outputs.metrics") {
    spec.outputs.metrics = parse_flag(k, v);
  } else if (k == "outputs.format") {
    spec.outputs.image_format = std::string(v);
  } else {
    throw SpecError("unknown key '" + k + "'");
  }
}

/// Applies `key = value` lines on top of `spec`. Blank lines and text after
/// '#' are ignored.
inline void apply_spec_text(ExperimentSpec& spec, std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view(line);
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = detail::trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) throw SpecError("line " + std::to_string(lineno) + ": expected key = value");
    try {
      set_field(spec, view.substr(0, eq), view.substr(eq + 1));
    } catch (const SpecError& e) {
      throw SpecError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
}

inline ExperimentSpec parse_spec(std::string_view text) {
  ExperimentSpec spec;
  std::istringstream in{std::string(text)};
  apply_spec_text(spec, in);
  return spec;
}

inline ExperimentSpec load_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open spec file " + path.string());
  ExperimentSpec spec;
  apply_spec_text(spec, in);
  return spec;
}

/// Canonical text form; parse_spec(to_text(s)) reproduces s.
inline std::string to_text(const ExperimentSpec& s) {
  using csv::number;
  std::ostringstream out;
  out << "id = " << s.id << '\n';
  if (s.source.kind == SourceKind::synth) {
    out << "source = synth:" << to_string(s.source.name) << ':' << s.source.width << ':' << s.source.height << '\n';
  } else {
    out << "source = file:" << s.source.path << '\n';
  }
  switch (s.degradation.kind) {
    case DegradationKind::none: out << "degradation = none\n"; break;
    case DegradationKind::blur:
      out << "degradation = blur:" << s.degradation.kernel_size << ':' << number(s.degradation.kernel_sigma) << '\n';
      break;
    case DegradationKind::symbol: out << "degradation = symbol:" << number(s.degradation.alpha) << '\n'; break;
  }
  out << "noise.kind = " << to_string(s.noise.kind) << '\n'
      << "noise.sigma = " << number(s.noise.sigma) << '\n'
      << "noise.cutoff = " << number(s.noise.cutoff) << '\n'
      << "noise.seed = " << s.noise.seed << '\n'
      << "fidelity.s = " << number(s.fidelity.s) << '\n'
      << "fidelity.variant = " << to_string(s.fidelity.variant) << '\n'
      << "fidelity.basis = " << to_string(s.fidelity.basis) << '\n'
      << "fidelity.spacing = " << number(s.fidelity.spacing) << '\n'
      << "fidelity.dc_policy = " << to_string(s.fidelity.dc_policy) << '\n'
      << "solver = " << detail::to_string(s.solver) << '\n'
      << "gd.step = " << (s.gd.step ? number(*s.gd.step) : std::string("auto")) << '\n'
      << "gd.iterations = " << s.gd.iterations << '\n'
      << "gd.init = " << detail::to_string(s.gd.init) << '\n'
      << "admm.lambda = " << number(s.admm.lambda) << '\n'
      << "admm.mu = " << number(s.admm.mu) << '\n'
      << "admm.rho = " << number(s.admm.rho) << '\n'
      << "admm.iterations = " << s.admm.iterations << '\n'
      << "admm.tol = " << number(s.admm.tol) << '\n'
      << "admm.isotropic = " << (s.admm.isotropic ? "true" : "false") << '\n'
      << "closed_form.ridge = " << number(s.ridge) << '\n'
      << "outputs.images = " << (s.outputs.images ? "true" : "false") << '\n'
      << "outputs.trace = " << (s.outputs.trace ? "true" : "false") << '\n'
      << "outputs.metrics = " << (s.outputs.metrics ? "true" : "false") << '\n'
      << "outputs.format = " << s.outputs.image_format << '\n';
  return out.str();
}

/// Ground truth, degradation operator and observed data of one experiment.
struct Problem {
  Image truth;
  LinearOperator op = LinearOperator::identity(1, 1);
  Image data;
};

inline Image load_source(const SourceSpec& src) {
  if (src.kind == SourceKind::synth) return synth_image(src.name, src.width, src.height);
  return load_image(src.path);
}

inline LinearOperator make_operator(const ExperimentSpec& spec, std::size_t width, std::size_t height) {
  switch (spec.degradation.kind) {
    case DegradationKind::none: return LinearOperator::identity(width, height);
    case DegradationKind::blur:
      return LinearOperator::convolution(gaussian_kernel(spec.degradation.kernel_size, spec.degradation.kernel_sigma),
                                         width, height);
    case DegradationKind::symbol:
      return LinearOperator::smoothing_symbol(spec.degradation.alpha, width, height, spec.fidelity.spacing);
  }
  throw SpecError("unknown degradation");
}

inline Problem build_problem(const ExperimentSpec& spec) {
  spec.validate();
  Problem p;
  p.truth = load_source(spec.source);
  p.op = make_operator(spec, p.truth.width(), p.truth.height());
  p.data = add_noise(apply(p.op, p.truth), spec.noise);
  return p;
}

struct TraceRow {
  std::size_t iter = 0;
  double objective = 0.0;
  std::optional<double> primal_residual;
};

struct RunResult {
  Problem problem;
  Image restored;
  Metrics metrics;        ///< restored vs truth
  Metrics input_metrics;  ///< observed data vs truth
  std::vector<TraceRow> trace;
  bool monotone = true;  ///< GD only
};

/// Solves an already-built problem.
inline RunResult solve(const ExperimentSpec& spec, Problem problem) {
  RunResult out;
  const Image& data = problem.data;
  const LinearOperator& op = problem.op;
  switch (spec.solver) {
    case SolverKind::gd: {
      Image init;
      switch (spec.gd.init) {
        case GdInit::zero: init = Image(data.width(), data.height(), 0.0); break;
        case GdInit::data: init = data; break;
        case GdInit::adjoint: init = apply_adjoint(op, data); break;
        case GdInit::mean: init = Image(data.width(), data.height(), data.mean()); break;
      }
      GdParams gp;
      gp.s_params = spec.fidelity;
      gp.iterations = spec.gd.iterations;
      if (spec.gd.step) {
        gp.step = *spec.gd.step;
      } else {
        gp.step = 1.0 / lipschitz_constant(op, make_multiplier(spec.fidelity, data.width(), data.height()));
      }
      GdResult r = gradient_descent(init, op, data, gp);
      for (std::size_t i = 0; i < r.objective.size(); ++i) out.trace.push_back({i, r.objective[i], std::nullopt});
      out.monotone = r.monotone;
      out.restored = std::move(r.u);
      break;
    }
    case SolverKind::admm: {
      AdmmState st = admm_solve(data, op, spec.fidelity, spec.admm);
      for (std::size_t i = 0; i < st.iterations(); ++i) {
        out.trace.push_back({i + 1, st.objective_values[i], st.primal_residuals[i]});
      }
      out.restored = std::move(st.u);
      break;
    }
    case SolverKind::closed_form: {
      const SpectralMultiplier mult = make_multiplier(spec.fidelity, data.width(), data.height());
      out.restored = closed_form_inverse(op, mult, data, spec.ridge);
      out.trace.push_back({0, objective(out.restored, op, data, mult), std::nullopt});
      break;
    }
  }
  out.metrics = compute_metrics(out.restored, problem.truth);
  out.input_metrics = compute_metrics(data, problem.truth);
  out.problem = std::move(problem);
  return out;
}

/// Runs the experiment in memory; nothing is written.
inline RunResult execute(const ExperimentSpec& spec) { return solve(spec, build_problem(spec)); }

inline void write_metrics_row(std::ostream& out, const std::string& id, const ExperimentSpec& spec, const Metrics& m) {
  csv::row(out, {id, csv::number(spec.fidelity.s), csv::number(spec.noise.sigma), csv::psnr(m.paper_psnr),
                 csv::psnr(m.standard_psnr), csv::number(m.l2_error)});
}

/// Writes the requested artifacts of a finished run into `dir`:
/// metrics.csv, trace.csv, spec.txt and truth/data/restored images.
inline void write_artifacts(const ExperimentSpec& spec, const RunResult& r, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto open = [&](const char* name) {
    std::ofstream f(dir / name);
    if (!f) throw IoError("cannot write " + (dir / name).string());
    return f;
  };
  {
    auto f = open("spec.txt");
    f << to_text(spec);
  }
  if (spec.outputs.metrics) {
    auto f = open("metrics.csv");
    f << csv::kMetricsHeader << '\n';
    write_metrics_row(f, spec.id, spec, r.metrics);
  }
  if (spec.outputs.trace) {
    auto f = open("trace.csv");
    f << csv::kTraceHeader << '\n';
    for (const TraceRow& t : r.trace) {
      csv::row(f, {std::to_string(t.iter), csv::number(t.objective),
                   t.primal_residual ? csv::number(*t.primal_residual) : std::string()});
    }
  }
  if (spec.outputs.images) {
    const std::string ext = "." + spec.outputs.image_format;
    save_image(r.problem.truth, dir / ("truth" + ext));
    save_image(r.problem.data, dir / ("data" + ext));
    save_image(r.restored, dir / ("restored" + ext));
  }
}

/// Executes and writes artifacts under out_root/<id>/. The spec is validated
/// and the source loaded before anything is created on disk, so a failing
/// run leaves no partial output.
inline RunResult run(const ExperimentSpec& spec, const std::filesystem::path& out_root) {
  RunResult r = execute(spec);
  write_artifacts(spec, r, out_root / spec.id);
  return r;
}

}  // namespace sobolev
