#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace lossynet {

enum class MapKind { identity, cubic_plus_linear, signum_power, log_quantizer, uniform_quantizer };

std::string_view to_string(MapKind kind);
std::optional<MapKind> parse_map_kind(std::string_view text);

/// Odd scalar map applied to node or link messages.
///
///   identity           z
///   cubic-plus-linear  z + z^3
///   signum-power       z |z|^(v1-1) + z |z|^(v2-1)
///   log-quantizer      sgn(z) exp(rho round(ln|z| / rho))
///   uniform-quantizer  rho round(z / rho)
///
/// round() is half away from zero. Both quantizers map 0 to 0.
struct NonlinearMap {
  MapKind kind = MapKind::identity;
  double v1 = 1.0;
  double v2 = 1.0;
  double rho = 0.0;

  static NonlinearMap identity();
  static NonlinearMap cubic_plus_linear();
  static NonlinearMap signum_power(double v1, double v2);
  static NonlinearMap log_quantizer(double rho);
  static NonlinearMap uniform_quantizer(double rho);

  double operator()(double z) const;
  bool is_quantizer() const {
    return kind == MapKind::log_quantizer || kind == MapKind::uniform_quantizer;
  }
  /// Throws DomainError on non-positive rho or exponents.
  void validate() const;
  /// e.g. "log-quantizer(rho=0.00390625)".
  std::string describe() const;

  bool operator==(const NonlinearMap&) const = default;
};

/// kappa <= g(z)/z <= K for 0 < |z| <= Z. K may be +infinity.
struct SectorBounds {
  double kappa = 0.0;
  double upper = 0.0;
};

/// Analytic bounds for identity (1, 1), cubic-plus-linear (1, 1 + Z^2),
/// log-quantizer (e^-rho/2, e^rho/2) and signum-power; other maps go through
/// sample_sector_bounds. Throws DomainError for Z <= 0.
SectorBounds sector_bounds(const NonlinearMap& g, double domain_bound);

/// Infimum and supremum of g(z)/z over +-z on a log-spaced grid covering
/// [Z 1e-12, Z]. Throws DomainError naming the first z with g(z) z <= 0.
SectorBounds sample_sector_bounds(const NonlinearMap& g, double domain_bound,
                                  std::size_t samples = 4096);

}  // namespace lossynet
