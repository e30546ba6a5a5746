#include "lossynet/kkt_oracle.hpp"

#include <algorithm>
#include <cmath>

#include "lossynet/errors.hpp"
#include "lossynet/format.hpp"

namespace lossynet {

namespace {

constexpr int kMaxExpansions = 200;
constexpr int kMaxBisections = 2000;

double sum_at(std::span<const LocalObjective> objs, double phi, std::vector<double>* x) {
  double s = 0.0;
  for (std::size_t i = 0; i < objs.size(); ++i) {
    const double xi = invert_gradient(objs[i], phi);
    if (x) (*x)[i] = xi;
    s += xi;
  }
  return s;
}

}  // namespace

double invert_gradient(const LocalObjective& f, double phi) {
  // f' is strictly increasing with slope >= a, so |x - x0| <= |f'(x0) - phi| / a.
  const double x0 = f.c;
  const double step = std::abs(f.gradient(x0) - phi) / f.a + 1.0;
  double lo = x0 - step;
  double hi = x0 + step;
  for (int k = 0; f.gradient(lo) > phi; ++k) {
    if (k == kMaxExpansions) throw NumericError("gradient inversion: no lower bracket");
    lo -= 2.0 * (hi - lo);
  }
  for (int k = 0; f.gradient(hi) < phi; ++k) {
    if (k == kMaxExpansions) throw NumericError("gradient inversion: no upper bracket");
    hi += 2.0 * (hi - lo);
  }
  for (int k = 0; k < kMaxBisections; ++k) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    if (f.gradient(mid) < phi) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return std::abs(f.gradient(lo) - phi) <= std::abs(f.gradient(hi) - phi) ? lo : hi;
}

KktSolution kkt_oracle(std::span<const LocalObjective> objs, double b, const KktOptions& options) {
  if (objs.empty()) throw DomainError("KKT oracle needs at least one objective");
  if (!std::isfinite(b)) throw DomainError("demand b must be finite");
  for (const auto& f : objs) f.validate();

  double phi_lo = 0.0;
  double phi_hi = 0.0;
  if (options.phi_range) {
    phi_lo = options.phi_range->lower;
    phi_hi = options.phi_range->upper;
  } else {
    const double share = b / static_cast<double>(objs.size());
    phi_lo = phi_hi = objs[0].gradient(share);
    for (const auto& f : objs) {
      phi_lo = std::min(phi_lo, f.gradient(share));
      phi_hi = std::max(phi_hi, f.gradient(share));
    }
  }
  const double s_lo = sum_at(objs, phi_lo, nullptr);
  const double s_hi = sum_at(objs, phi_hi, nullptr);
  if (!(s_lo <= b && b <= s_hi)) {
    throw NumericError("KKT bracket does not contain the solution: phi in [" +
                       format_double(phi_lo) + ", " + format_double(phi_hi) + "] gives sum in [" +
                       format_double(s_lo) + ", " + format_double(s_hi) + "], b=" +
                       format_double(b));
  }

  const double target = options.tol * std::max(1.0, std::abs(b));
  KktSolution out;
  out.x_star.resize(objs.size());
  double best_gap = std::abs(s_lo - b) <= std::abs(s_hi - b) ? std::abs(s_lo - b)
                                                              : std::abs(s_hi - b);
  double best_phi = std::abs(s_lo - b) <= std::abs(s_hi - b) ? phi_lo : phi_hi;
  for (int k = 0; k < kMaxBisections && best_gap > target; ++k) {
    const double mid = phi_lo + 0.5 * (phi_hi - phi_lo);
    if (mid <= phi_lo || mid >= phi_hi) break;
    const double s = sum_at(objs, mid, nullptr);
    if (std::abs(s - b) < best_gap) {
      best_gap = std::abs(s - b);
      best_phi = mid;
    }
    if (s < b) {
      phi_lo = mid;
    } else {
      phi_hi = mid;
    }
  }
  sum_at(objs, best_phi, &out.x_star);
  out.phi_star = best_phi;
  for (std::size_t i = 0; i < objs.size(); ++i) {
    out.residual = std::max(out.residual, std::abs(objs[i].gradient(out.x_star[i]) - best_phi));
  }
  return out;
}

}  // namespace lossynet
