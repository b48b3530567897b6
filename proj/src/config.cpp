#include "ohsolve/config.hpp"

#include <cmath>
#include <string>

#include "ohsolve/errors.hpp"

namespace ohsolve {

std::string_view to_string(Mode m) {
  return m == Mode::DirectPrimitive ? "direct-primitive" : "delta-elliptic";
}

std::string_view to_string(FluxScheme s) {
  switch (s) {
    case FluxScheme::Godunov:
      return "godunov";
    case FluxScheme::LaxFriedrichs:
      return "lax-friedrichs";
    case FluxScheme::Roe:
      return "roe";
  }
  return "?";
}

std::string_view to_string(DiffusionScheme s) {
  return s == DiffusionScheme::Explicit ? "explicit" : "implicit";
}

Mode parse_mode(std::string_view s) {
  if (s == "direct-primitive") return Mode::DirectPrimitive;
  if (s == "delta-elliptic") return Mode::DeltaElliptic;
  throw ConfigError("mode: expected direct-primitive or delta-elliptic, got '" + std::string(s) +
                    "'");
}

FluxScheme parse_flux_scheme(std::string_view s) {
  if (s == "godunov") return FluxScheme::Godunov;
  if (s == "lax-friedrichs") return FluxScheme::LaxFriedrichs;
  throw ConfigError("flux_scheme: expected godunov or lax-friedrichs, got '" + std::string(s) +
                    "'");
}

DiffusionScheme parse_diffusion_scheme(std::string_view s) {
  if (s == "explicit") return DiffusionScheme::Explicit;
  if (s == "implicit") return DiffusionScheme::Implicit;
  throw ConfigError("diffusion_scheme: expected explicit or implicit, got '" + std::string(s) +
                    "'");
}

void validate(const SolverConfig& c) {
  auto finite = [](double v) { return std::isfinite(v); };
  if (!finite(c.gamma)) throw ConfigError("gamma must be finite");
  if (!finite(c.epsilon) || c.epsilon < 0.0) throw ConfigError("epsilon must be >= 0");
  if (!finite(c.delta) || c.delta < 0.0) throw ConfigError("delta must be >= 0");
  if (!(c.cfl > 0.0 && c.cfl <= 1.0)) throw ConfigError("cfl must lie in (0, 1]");
  if (!(c.t_end > 0.0) || !finite(c.t_end)) throw ConfigError("t_end must be positive");
  if (c.mode == Mode::DeltaElliptic && !(c.delta > 0.0)) {
    throw ConfigError("mode = delta-elliptic requires delta > 0");
  }
  const Tolerances& t = c.tolerances;
  for (double v : {t.mass_density, t.support, t.energy, t.linf, t.inequality, t.quadrature,
                   t.entropy_k, t.divided_difference, t.stability, t.pmass_density}) {
    if (!(v >= 0.0) || !finite(v)) throw ConfigError("tolerances must be finite and >= 0");
  }
}

}  // namespace ohsolve
