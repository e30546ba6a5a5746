#include "lossynet/nonlinear_map.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lossynet/errors.hpp"
#include "lossynet/format.hpp"

namespace lossynet {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// h(t) = t^p + t^q on (0, Z], p = v1 - 1 <= q = v2 - 1.
SectorBounds signum_power_bounds(double v1, double v2, double z_max) {
  const double p = std::min(v1, v2) - 1.0;
  const double q = std::max(v1, v2) - 1.0;
  auto h = [&](double t) { return std::pow(t, p) + std::pow(t, q); };
  if (p >= 0.0) {
    // Non-decreasing; the infimum is the limit at 0.
    const double at_zero = (p == 0.0 ? 1.0 : 0.0) + (q == 0.0 ? 1.0 : 0.0);
    return {at_zero, h(z_max)};
  }
  if (q <= 0.0) return {h(z_max), kInf};
  // p < 0 < q: unique interior minimum where p t^(p-1) + q t^(q-1) = 0.
  const double t_min = std::pow(-p / q, 1.0 / (q - p));
  return {h(std::min(t_min, z_max)), kInf};
}

}  // namespace

std::string_view to_string(MapKind kind) {
  switch (kind) {
    case MapKind::identity: return "identity";
    case MapKind::cubic_plus_linear: return "cubic";
    case MapKind::signum_power: return "signum-power";
    case MapKind::log_quantizer: return "log-quantizer";
    case MapKind::uniform_quantizer: return "uniform-quantizer";
  }
  return "identity";
}

std::optional<MapKind> parse_map_kind(std::string_view text) {
  if (text == "identity") return MapKind::identity;
  if (text == "cubic" || text == "cubic-plus-linear") return MapKind::cubic_plus_linear;
  if (text == "signum-power") return MapKind::signum_power;
  if (text == "log-quantizer") return MapKind::log_quantizer;
  if (text == "uniform-quantizer") return MapKind::uniform_quantizer;
  return std::nullopt;
}

NonlinearMap NonlinearMap::identity() { return {}; }

NonlinearMap NonlinearMap::cubic_plus_linear() {
  NonlinearMap g;
  g.kind = MapKind::cubic_plus_linear;
  return g;
}

NonlinearMap NonlinearMap::signum_power(double v1, double v2) {
  NonlinearMap g;
  g.kind = MapKind::signum_power;
  g.v1 = v1;
  g.v2 = v2;
  return g;
}

NonlinearMap NonlinearMap::log_quantizer(double rho) {
  NonlinearMap g;
  g.kind = MapKind::log_quantizer;
  g.rho = rho;
  return g;
}

NonlinearMap NonlinearMap::uniform_quantizer(double rho) {
  NonlinearMap g;
  g.kind = MapKind::uniform_quantizer;
  g.rho = rho;
  return g;
}

double NonlinearMap::operator()(double z) const {
  switch (kind) {
    case MapKind::identity:
      return z;
    case MapKind::cubic_plus_linear:
      return z + z * z * z;
    case MapKind::signum_power: {
      const double m = std::abs(z);
      return std::copysign(std::pow(m, v1) + std::pow(m, v2), z);
    }
    case MapKind::log_quantizer: {
      if (z == 0.0) return 0.0;
      const double level = std::round(std::log(std::abs(z)) / rho);
      return std::copysign(std::exp(rho * level), z);
    }
    case MapKind::uniform_quantizer:
      return rho * std::round(z / rho);
  }
  return z;
}

void NonlinearMap::validate() const {
  if (is_quantizer() && !(rho > 0.0 && std::isfinite(rho))) {
    throw DomainError("quantizer step rho must be positive, got " + format_double(rho));
  }
  if (kind == MapKind::signum_power && !(v1 > 0.0 && v2 > 0.0 && std::isfinite(v1) &&
                                         std::isfinite(v2))) {
    throw DomainError("signum-power exponents must be positive");
  }
}

std::string NonlinearMap::describe() const {
  std::string out(to_string(kind));
  if (kind == MapKind::signum_power) {
    out += "(v1=" + format_double(v1) + ",v2=" + format_double(v2) + ")";
  } else if (is_quantizer()) {
    out += "(rho=" + format_double(rho) + ")";
  }
  return out;
}

SectorBounds sector_bounds(const NonlinearMap& g, double domain_bound) {
  if (!(domain_bound > 0.0)) throw DomainError("sector domain bound Z must be positive");
  g.validate();
  switch (g.kind) {
    case MapKind::identity:
      return {1.0, 1.0};
    case MapKind::cubic_plus_linear:
      return {1.0, 1.0 + domain_bound * domain_bound};
    case MapKind::log_quantizer:
      return {std::exp(-0.5 * g.rho), std::exp(0.5 * g.rho)};
    case MapKind::signum_power:
      return signum_power_bounds(g.v1, g.v2, domain_bound);
    case MapKind::uniform_quantizer:
      break;
  }
  return sample_sector_bounds(g, domain_bound);
}

SectorBounds sample_sector_bounds(const NonlinearMap& g, double domain_bound,
                                  std::size_t samples) {
  if (!(domain_bound > 0.0)) throw DomainError("sector domain bound Z must be positive");
  if (samples < 2) throw DomainError("sector sampler needs at least two samples");
  g.validate();
  SectorBounds out{kInf, -kInf};
  const double decades = 12.0;
  for (std::size_t k = 0; k < samples; ++k) {
    const double exponent = -decades * (1.0 - static_cast<double>(k) /
                                                  static_cast<double>(samples - 1));
    const double mag = domain_bound * std::pow(10.0, exponent);
    for (const double z : {mag, -mag}) {
      const double gz = g(z);
      if (!(gz * z > 0.0)) {
        throw DomainError(g.describe() + " is not sign-preserving at z=" + format_double(z) +
                          " (g(z)=" + format_double(gz) + ")");
      }
      const double ratio = gz / z;
      out.kappa = std::min(out.kappa, ratio);
      out.upper = std::max(out.upper, ratio);
    }
  }
  return out;
}

}  // namespace lossynet
