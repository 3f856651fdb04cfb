#include "mqs/io/run.hpp"

#include <cmath>
#include <fstream>
#include <json.hpp>
#include <stdexcept>

#include "mqs/errors.hpp"

namespace mqs {

std::string_view to_string(Integrator integrator) {
  return integrator == Integrator::Explicit ? "explicit" : "implicit";
}

Integrator parse_integrator(std::string_view name) {
  if (name == "explicit") return Integrator::Explicit;
  if (name == "implicit") return Integrator::Implicit;
  throw std::invalid_argument("unknown integrator '" + std::string(name) + "' (expected explicit or implicit)");
}

void RunConfig::validate() const {
  auto positive = [](double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument(std::string(what) + " must be positive");
  };
  if (model.empty()) throw std::invalid_argument("model source must be given");
  if (dt) positive(*dt, "dt");
  positive(t_end, "t_end");
  positive(output_period, "output period");
  positive(tol, "tol");
  if (max_iter < 1) throw std::invalid_argument("max_iter must be at least 1");
  if (!(eps_pod > 0.0 && eps_pod < 1.0)) throw std::invalid_argument("eps_pod must lie in (0, 1)");
  if (n_pod < 1) throw std::invalid_argument("n_pod must be at least 1");
  if (max_basis < 1) throw std::invalid_argument("max_basis must be at least 1");
  if (cfl_every < 1) throw std::invalid_argument("cfl_every must be at least 1");
  positive(cfl_safety, "cfl safety");
  if (power_iters < 1) throw std::invalid_argument("power_iters must be at least 1");
  positive(power_tol, "power_tol");
  positive(newton_tol, "newton_tol");
  if (max_newton < 1) throw std::invalid_argument("max_newton must be at least 1");
  positive(implicit_dt, "implicit_dt");
}

SchurOptions RunConfig::schur_options() const {
  SchurOptions o;
  o.inner = PcgConfig{tol, 0.0, max_iter, preconditioner};
  o.start.kind = strategy;
  o.start.max_basis = max_basis;
  o.start.n_pod = n_pod;
  o.start.eps_pod = eps_pod;
  o.cache_source_solve = cache_source;
  return o;
}

ExplicitRunConfig RunConfig::explicit_config() const {
  ExplicitRunConfig c;
  c.t_end = t_end;
  c.dt = dt;
  c.output_period = output_period;
  c.cfl_every = cfl_every;
  c.cfl_safety = cfl_safety;
  c.power_iters = power_iters;
  c.power_tol = power_tol;
  c.seed = seed;
  return c;
}

NewtonConfig RunConfig::newton_config() const {
  NewtonConfig c;
  c.tol = newton_tol;
  c.max_newton = max_newton;
  // the monolithic solve must be tighter than the Newton tolerance
  c.linear = PcgConfig{std::min(tol, newton_tol) * 1e-2, 0.0, std::max<std::size_t>(max_iter, 20000), preconditioner};
  return c;
}

std::optional<double> parse_dt(const std::string& text) {
  if (text == "auto" || text == "auto-cfl") return std::nullopt;
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("dt must be a number or 'auto', got '" + text + "'");
  }
  if (pos != text.size()) throw std::invalid_argument("dt must be a number or 'auto', got '" + text + "'");
  if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument("dt must be positive, got '" + text + "'");
  return v;
}

void apply_config_file(RunConfig& c, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("config " + path.string() + ": " + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config " + path.string() + ": expected a JSON object");
  try {
    for (auto it = j.begin(); it != j.end(); ++it) {
      const std::string& k = it.key();
      const auto& v = it.value();
      if (k == "model") c.model = v.get<std::string>();
      else if (k == "integrator") c.integrator = parse_integrator(v.get<std::string>());
      else if (k == "strategy") c.strategy = parse_strategy(v.get<std::string>());
      else if (k == "dt") c.dt = v.is_string() ? parse_dt(v.get<std::string>()) : std::optional<double>(v.get<double>());
      else if (k == "t_end") c.t_end = v.get<double>();
      else if (k == "output_period") c.output_period = v.get<double>();
      else if (k == "tol") c.tol = v.get<double>();
      else if (k == "max_iter") c.max_iter = v.get<std::size_t>();
      else if (k == "preconditioner") c.preconditioner = parse_preconditioner(v.get<std::string>());
      else if (k == "eps_pod") c.eps_pod = v.get<double>();
      else if (k == "n_pod") c.n_pod = v.get<std::size_t>();
      else if (k == "max_basis") c.max_basis = v.get<std::size_t>();
      else if (k == "cache_source") c.cache_source = v.get<bool>();
      else if (k == "cfl_every") c.cfl_every = v.get<std::size_t>();
      else if (k == "cfl_safety") c.cfl_safety = v.get<double>();
      else if (k == "power_iters") c.power_iters = v.get<std::size_t>();
      else if (k == "power_tol") c.power_tol = v.get<double>();
      else if (k == "newton_tol") c.newton_tol = v.get<double>();
      else if (k == "max_newton") c.max_newton = v.get<std::size_t>();
      else if (k == "implicit_dt") c.implicit_dt = v.get<double>();
      else if (k == "seed") c.seed = v.get<std::uint64_t>();
      else throw std::invalid_argument("config " + path.string() + ": unknown key '" + k + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("config " + path.string() + ": " + e.what());
  }
}

TransientResult run_model(const RunConfig& config, const AssembledModel& model) {
  config.validate();
  const Probe probe = model.probe();
  if (config.integrator == Integrator::Implicit)
    return run_implicit(model.system, config.t_end, config.dt.value_or(config.implicit_dt), config.newton_config(),
                        probe, config.output_period);
  return run_explicit(model.system, config.explicit_config(), config.schur_options(), probe);
}

}  // namespace mqs
