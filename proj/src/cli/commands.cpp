#include <CLI11.hpp>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <ios>
#include <json.hpp>
#include <ostream>
#include <set>
#include <sstream>

#include "tmef/cli.hpp"
#include "tmef/error.hpp"
#include "tmef/estfun.hpp"
#include "tmef/models/stable_ar1.hpp"
#include "tmef/selection.hpp"
#include "tmef/solver.hpp"

namespace tmef::cli {

namespace {

using json = nlohmann::json;

struct ModelFlags {
  std::string model = "stable-ar1";
  std::optional<double> alpha, phi, lambda, nu, sigma;
  std::string theta;  // comma list, overrides the named parameter flags
};

struct SelectionFlags {
  std::string kernel;
  std::size_t k = 1;
  std::string points;
  std::optional<double> t_lo, t_hi;
  int grid = 200;
  double gain_tol = 1e-3;
  std::string mode = "greedy";
  bool refresh_once = false;
  int max_iter = 50;
};

std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::string_view rest = text;
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    std::string_view field = rest.substr(0, comma);
    while (!field.empty() && field.front() == ' ') field.remove_prefix(1);
    while (!field.empty() && field.back() == ' ') field.remove_suffix(1);
    double v = 0.0;
    const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
    if (field.empty() || res.ec != std::errc() || res.ptr != field.data() + field.size()) {
      throw Error(ErrorCode::InvalidInput, std::string("cannot parse ") + what + " list \"" + text + "\"");
    }
    out.push_back(v);
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return out;
}

ModelId model_id(const ModelFlags& f) {
  const auto id = parse_model_id(f.model);
  if (!id) throw Error(ErrorCode::InvalidInput, "unknown model \"" + f.model + "\"");
  return *id;
}

std::unique_ptr<ProcessModel> build_model(const ModelFlags& f) {
  const ModelId id = model_id(f);
  ModelOptions opts;
  if (id == ModelId::StableAR1 && f.alpha) opts.stable_alpha = *f.alpha;
  if (f.sigma) opts.gaussian_sigma = *f.sigma;
  return make_model(id, opts);
}

// Parameter vector from --theta or the named flags, with model defaults.
Vector model_theta(const ProcessModel& model, ModelId id, const ModelFlags& f) {
  if (!f.theta.empty()) {
    const auto v = parse_list(f.theta, "theta");
    if (v.size() != model.param_dim()) {
      throw Error(ErrorCode::InvalidParams, "--theta needs " + std::to_string(model.param_dim()) + " values");
    }
    return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
  }
  Vector theta = model.default_theta();
  switch (id) {
    case ModelId::StableAR1:
    case ModelId::GaussianAR1:
      if (f.phi) theta(0) = *f.phi;
      break;
    case ModelId::GammaAR1:
      if (f.lambda) theta(0) = *f.lambda;
      if (f.alpha) theta(1) = *f.alpha;
      if (f.nu) theta(2) = *f.nu;
      break;
    case ModelId::BinaryMarkov: break;
  }
  return theta;
}

KernelFamily default_kernel(ModelId id) {
  switch (id) {
    case ModelId::StableAR1: return KernelFamily::CfReal;
    case ModelId::GammaAR1: return KernelFamily::Moment;
    case ModelId::GaussianAR1: return KernelFamily::Moment;
    case ModelId::BinaryMarkov: return KernelFamily::Pgf;
  }
  return KernelFamily::CfReal;
}

KernelFamily kernel_of(const SelectionFlags& s, ModelId id) {
  if (s.kernel.empty()) return default_kernel(id);
  const auto k = parse_kernel_family(s.kernel);
  if (!k) throw Error(ErrorCode::InvalidInput, "unknown kernel \"" + s.kernel + "\"");
  return *k;
}

SelectionConfig selection_config(const SelectionFlags& s, KernelFamily family) {
  SelectionConfig c;
  c.k_max = s.k;
  if (s.t_lo || s.t_hi) {
    const SearchWindow d = default_window(family);
    c.window = SearchWindow{s.t_lo.value_or(d.lo), s.t_hi.value_or(d.hi)};
  }
  c.grid_resolution = s.grid;
  c.rel_gain_tol = s.gain_tol;
  if (s.mode == "greedy") {
    c.mode = SelectionMode::GreedyOptimal;
  } else if (s.mode == "uniform") {
    c.mode = SelectionMode::UniformSpacing;
  } else {
    throw Error(ErrorCode::InvalidInput, "unknown selection mode \"" + s.mode + "\"");
  }
  c.refresh_once = s.refresh_once;
  c.max_iterations = s.max_iter;
  if (!s.points.empty()) c.fixed_points = parse_list(s.points, "points");
  return c;
}

json to_json(const Vector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

json to_json(const Matrix& m) {
  json a = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    a.push_back(std::move(row));
  }
  return a;
}

json to_json(const InfoTrace& trace) {
  json a = json::array();
  for (const auto& e : trace) {
    a.push_back({{"k", e.k}, {"t", e.t}, {"info", e.info}, {"status", to_string(e.status)}});
  }
  return a;
}

json model_config(const ModelFlags& f, const ProcessModel& model) {
  json c;
  c["model"] = model.name();
  if (const auto* s = dynamic_cast<const StableAR1*>(&model)) c["stable_alpha"] = s->alpha();
  if (f.sigma) c["sigma"] = *f.sigma;
  return c;
}

// Efficiency against the score (Gaussian, binary) or the tabulated i.i.d.
// stable Fisher information; null when no reference is known.
json reference_efficiency(const ProcessModel& model, const Vector& theta, const InfoMatrix& info,
                          const TimeSeries& series) {
  try {
    if (const auto* s = dynamic_cast<const StableAR1*>(&model)) {
      const auto fisher = stable_iid_fisher_information(s->alpha());
      if (!fisher || info.dim() != 1) return nullptr;
      const auto y = series.values();
      const double sxx = pairwise_sum<double>(1, y.size(), [&](std::size_t j) { return y[j - 1] * y[j - 1]; });
      return efficiency(info, InfoMatrix(Matrix::Constant(1, 1, *fisher * sxx)));
    }
    if (model.capabilities().analytic_score) {
      return efficiency(info, InfoMatrix(model.score_information(theta, series)));
    }
  } catch (const Error&) {
  }
  return nullptr;
}

void add_model_flags(CLI::App* app, ModelFlags& f) {
  app->add_option("--model", f.model, "stable-ar1 | gar1 | gaussian-ar1 | binary-markov");
  app->add_option("--alpha", f.alpha, "stable index (stable-ar1) or rate (gar1)");
  app->add_option("--phi", f.phi, "autoregressive coefficient");
  app->add_option("--lambda", f.lambda, "gar1 feedback parameter");
  app->add_option("--nu", f.nu, "gar1 shape parameter");
  app->add_option("--sigma", f.sigma, "gaussian-ar1 noise standard deviation");
  app->add_option("--theta", f.theta, "full parameter vector, comma separated");
}

void add_selection_flags(CLI::App* app, SelectionFlags& s) {
  app->add_option("--kernel", s.kernel, "cf | mgf | pgf | laplace | moment");
  app->add_option("--k", s.k, "number of transform points")->check(CLI::PositiveNumber);
  app->add_option("--points", s.points, "explicit comma-separated points (skips selection)");
  app->add_option("--t-lo", s.t_lo, "search window lower end");
  app->add_option("--t-hi", s.t_hi, "search window upper end");
  app->add_option("--grid", s.grid, "grid resolution")->check(CLI::Range(1, 1000000));
  app->add_option("--gain-tol", s.gain_tol, "relative information gain needed to add a point");
  app->add_option("--mode", s.mode, "greedy | uniform");
  app->add_flag("--refresh-once", s.refresh_once, "reselect each point at most once");
  app->add_option("--max-iter", s.max_iter, "two-step iteration cap")->check(CLI::PositiveNumber);
}

void write_json(std::ostream& out, const json& j) { out << j.dump(2) << '\n'; }

int cmd_simulate(const ModelFlags& mf, std::size_t n, std::uint64_t seed, std::size_t burn_in,
                 const std::string& out_path, std::ostream& out) {
  const ModelId id = model_id(mf);
  const auto model = build_model(mf);
  SimSpec spec;
  spec.theta = model_theta(*model, id, mf);
  spec.n = n;
  spec.seed = seed;
  spec.burn_in = burn_in;
  const TimeSeries series = model->simulate(spec);
  if (out_path.empty()) {
    write_series_csv(out, series);
    return kOk;
  }
  std::ofstream file(out_path);
  if (!file) throw std::ios_base::failure("cannot open output file " + out_path);
  write_series_csv(file, series);
  file.flush();
  if (!file) throw std::ios_base::failure("write failed for " + out_path);
  return kOk;
}

Vector start_value(const ProcessModel& model, ModelId id, const ModelFlags& mf,
                   const std::string& theta0, const TimeSeries& series) {
  (void)id;
  (void)mf;
  if (!theta0.empty()) {
    const auto v = parse_list(theta0, "theta0");
    if (v.size() != model.param_dim()) throw Error(ErrorCode::InvalidParams, "--theta0 has the wrong length");
    return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
  }
  return preliminary_estimate(model, series);
}

int cmd_estimate(const ModelFlags& mf, const SelectionFlags& sf, const std::string& input,
                 const std::string& theta0_text, std::optional<std::uint64_t> seed, std::ostream& out) {
  const ModelId id = model_id(mf);
  const auto model = build_model(mf);
  const KernelFamily family = kernel_of(sf, id);
  if (!model->supports(family)) {
    throw Error(ErrorCode::UnsupportedKernel, model->name() + " does not support the " +
                                                  std::string(to_string(family)) + " kernel");
  }
  const TimeSeries series = read_series_csv(input);
  const SelectionConfig config = selection_config(sf, family);
  const Vector theta0 = start_value(*model, id, mf, theta0_text, series);
  const TwoStepResult r = two_step_iterate(*model, family, theta0, series, config);

  json j;
  j["theta_hat"] = to_json(r.theta);
  j["theta0"] = to_json(theta0);
  j["param_names"] = model->param_names();
  j["kernel"] = to_string(family);
  j["points"] = r.points ? json(r.points->points()) : json::array();
  j["info_matrix"] = to_json(r.info.value());
  j["info_det"] = r.info.det();
  j["info_trace"] = to_json(r.trace);
  j["efficiency_vs_reference"] = reference_efficiency(*model, r.theta, r.info, series);
  j["iterations"] = r.iterations;
  j["converged"] = r.converged;
  j["solver_status"] = to_string(r.last_solve.status);
  j["multiple_roots"] = r.multiple_roots;
  j["seed"] = seed ? json(*seed) : json(nullptr);
  json c = model_config(mf, *model);
  c["input"] = input;
  c["kernel"] = to_string(family);
  c["k"] = sf.k;
  c["grid"] = sf.grid;
  c["gain_tol"] = sf.gain_tol;
  c["mode"] = sf.mode;
  c["refresh_once"] = sf.refresh_once;
  c["max_iter"] = sf.max_iter;
  if (config.window) c["window"] = {config.window->lo, config.window->hi};
  if (config.fixed_points) c["points"] = *config.fixed_points;
  j["config"] = std::move(c);
  write_json(out, j);
  return r.converged ? kOk : kNonConvergence;
}

int cmd_select_points(const ModelFlags& mf, const SelectionFlags& sf, const std::string& input,
                      std::ostream& out) {
  const ModelId id = model_id(mf);
  const auto model = build_model(mf);
  const KernelFamily family = kernel_of(sf, id);
  const TimeSeries series = read_series_csv(input);
  const SelectionConfig config = selection_config(sf, family);
  const Vector theta = !mf.theta.empty() || mf.phi || mf.lambda || mf.nu
                           ? model_theta(*model, id, mf)
                           : preliminary_estimate(*model, series);
  const Selection sel = greedy_select(*model, family, theta, series, config);
  json j;
  j["kernel"] = to_string(family);
  j["theta"] = to_json(theta);
  j["points"] = sel.points.points();
  j["info_trace"] = to_json(sel.trace);
  if (sel.rejected) {
    j["rejected"] = {{"k", sel.rejected->k}, {"t", sel.rejected->t}, {"info", sel.rejected->info}};
  } else {
    j["rejected"] = nullptr;
  }
  write_json(out, j);
  return kOk;
}

int cmd_info_curve(const ModelFlags& mf, const SelectionFlags& sf, const std::string& input,
                   std::ostream& out) {
  const ModelId id = model_id(mf);
  const auto model = build_model(mf);
  const KernelFamily family = kernel_of(sf, id);
  const SearchWindow d = default_window(family);
  const double lo = sf.t_lo.value_or(d.lo), hi = sf.t_hi.value_or(d.hi);
  const int m = sf.grid;
  if (m < 1 || (m > 1 && !(lo < hi))) throw Error(ErrorCode::InvalidInput, "need t-lo < t-hi");

  std::optional<TimeSeries> series;
  Vector theta;
  const auto* stable = dynamic_cast<const StableAR1*>(model.get());
  const bool data_free = stable != nullptr && input.empty();
  if (!data_free) {
    if (input.empty()) throw Error(ErrorCode::InvalidInput, "--input is required for this model");
    series = read_series_csv(input);
    theta = !mf.theta.empty() || mf.phi || mf.lambda || mf.nu ? model_theta(*model, id, mf)
                                                               : preliminary_estimate(*model, *series);
  }
  out << "t,information\n";
  for (int i = 0; i < m; ++i) {
    const double t = m == 1 ? lo : lo + (hi - lo) * i / (m - 1);
    double v = std::numeric_limits<double>::quiet_NaN();
    if (data_free) {
      if (t > 0.0) v = stable_information_factor(t, stable->alpha());
    } else if (const auto info = candidate_information(*model, family, {}, t, theta, *series)) {
      v = info->objective();
    }
    out << format_double(t) << ',' << (std::isnan(v) ? std::string("nan") : format_double(v)) << '\n';
  }
  return kOk;
}

int cmd_table1(std::ostream& out) {
  static constexpr double kAlphas[] = {2.0, 1.9, 1.7, 1.5, 1.3, 1.1, 1.0, 0.8};
  out << "alpha   t_star   factor   fisher   efficiency\n";
  char line[128];
  for (double alpha : kAlphas) {
    const StableOptimum opt = stable_optimal_point(alpha);
    const double fisher = *stable_iid_fisher_information(alpha);
    if (opt.at_origin) {
      std::snprintf(line, sizeof line, "%5.1f   %-7s  %6.4f   %6.3f   %6.4f\n", alpha, "t->0",
                    opt.factor, fisher, opt.factor / fisher);
    } else {
      std::snprintf(line, sizeof line, "%5.1f   %7.5f  %6.4f   %6.3f   %6.4f\n", alpha, opt.t,
                    opt.factor, fisher, opt.factor / fisher);
    }
    out << line;
  }
  return kOk;
}

// argv with config-file entries spliced in right after the subcommand, so
// flags given on the command line come later and win.
std::vector<std::string> expand_config(const std::vector<std::string>& args, const CLI::App& app,
                                       std::ostream& err) {
  if (args.size() < 2) return args;
  std::string config_path;
  std::vector<std::string> rest;
  for (std::size_t i = 2; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a == "--config" && i + 1 < args.size()) {
      config_path = args[++i];
    } else if (a.rfind("--config=", 0) == 0) {
      config_path = a.substr(9);
    } else {
      rest.push_back(a);
    }
  }
  std::vector<std::string> out{args[0], args[1]};
  if (!config_path.empty()) {
    const CLI::App* sub = nullptr;
    try {
      sub = app.get_subcommand(args[1]);
    } catch (const CLI::OptionNotFound&) {
    }
    for (const auto& [key, value] : read_config_file(config_path)) {
      if (sub == nullptr || sub->get_option_no_throw("--" + key) == nullptr) {
        err << "warning: config key \"" << key << "\" does not apply to " << args[1] << "; ignored\n";
        continue;
      }
      out.push_back("--" + key + "=" + value);
    }
  }
  out.insert(out.end(), rest.begin(), rest.end());
  return out;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Transform martingale estimating functions"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);

  ModelFlags mf;
  SelectionFlags sf;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> est_seed;
  std::size_t burn_in = 500;
  std::string out_path, input, theta0;

  auto* sim = app.add_subcommand("simulate", "simulate a series and write it as CSV");
  add_model_flags(sim, mf);
  sim->add_option("--n", n, "series length")->required()->check(CLI::Range(std::size_t{2}, std::size_t{1} << 40));
  sim->add_option("--seed", seed, "random seed");
  sim->add_option("--burn-in", burn_in, "discarded initial steps");
  sim->add_option("--out", out_path, "output CSV (default: standard output)");

  auto* est = app.add_subcommand("estimate", "estimate parameters from a CSV series");
  add_model_flags(est, mf);
  add_selection_flags(est, sf);
  est->add_option("--input", input, "input CSV")->required();
  est->add_option("--theta0", theta0, "starting value, comma separated");
  est->add_option("--seed", est_seed, "seed of the data, echoed in the output");

  auto* sel = app.add_subcommand("select-points", "choose information-maximizing transform points");
  add_model_flags(sel, mf);
  add_selection_flags(sel, sf);
  sel->add_option("--input", input, "input CSV")->required();

  auto* curve = app.add_subcommand("info-curve", "information of a single point over a grid");
  add_model_flags(curve, mf);
  add_selection_flags(curve, sf);
  curve->add_option("--input", input, "input CSV (optional for stable-ar1)");

  auto* table = app.add_subcommand("table1", "optimal single CF point for stable AR(1)");

  std::vector<std::string> args(argv, argv + argc);
  try {
    args = expand_config(args, app, err);
  } catch (const std::ios_base::failure& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kValidationError;
  }
  std::vector<const char*> cargs;
  for (const auto& a : args) cargs.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(cargs.size()), cargs.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kValidationError;
  }

  try {
    if (sim->parsed()) return cmd_simulate(mf, n, seed, burn_in, out_path, out);
    if (est->parsed()) return cmd_estimate(mf, sf, input, theta0, est_seed, out);
    if (sel->parsed()) return cmd_select_points(mf, sf, input, out);
    if (curve->parsed()) return cmd_info_curve(mf, sf, input, out);
    if (table->parsed()) return cmd_table1(out);
  } catch (const std::ios_base::failure& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kValidationError;
  }
  return kValidationError;
}

}  // namespace tmef::cli
