#include "nfuq/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace nfuq {

double BoundsReport::M(double t) const {
  if (mode == Mode::Nonlinear) return M0;
  return (kappas.v + kappas.g * t) * std::exp(kappas.w * t);
}

BoundsReport theoretical_bounds(const KappaSet& k, Mode mode, double T) {
  BoundsReport r;
  r.mode = mode;
  r.T = T;
  r.kappas = k;
  if (mode == Mode::Linear) {
    r.M0 = (k.v + k.g * T) * std::exp(k.w * T);
    r.M1 = k.g + (2.0 + k.w) * r.M0;
  } else {
    const double forcing_and_synaptic = k.g + k.D * k.w * k.f;
    r.M0 = 2.0 * std::max(k.v, forcing_and_synaptic);
    r.M1 = 2.0 * r.M0 + forcing_and_synaptic;
  }
  return r;
}

namespace {

double relative_gap(double bound, double observed) {
  return (bound - observed) / std::max(bound, 1e-300);
}

}  // namespace

BoundsReport check_bounds(const SolutionPath& path, const Domain& domain, const KappaSet& kappas, Mode mode, double T,
                          double slack) {
  if (path.states.empty() || path.states.size() != path.times.size() || path.derivs.size() != path.times.size())
    throw ValidationError("check_bounds: path has inconsistent times/states/derivs lengths");
  for (const auto& s : path.states) {
    if (s.size() != domain.size())
      throw ValidationError(fmt::format("check_bounds: state has {} values, domain has {} nodes", s.size(),
                                        domain.size()));
  }
  if (std::abs(path.times.back() - T) > 1e-12 * std::max(1.0, T))
    throw ValidationError(fmt::format("check_bounds: path ends at {}, expected T = {}", path.times.back(), T));

  BoundsReport r = theoretical_bounds(kappas, mode, T);
  r.times = path.times;
  r.M_of_t.resize(path.times.size());
  r.pass_pointwise = true;
  r.margin = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < path.times.size(); ++k) {
    const double bound = r.M(path.times[k]);
    const double obs = field_norm(domain, path.space, path.states[k]);
    r.M_of_t[k] = bound;
    if (obs > bound * (1.0 + slack)) r.pass_pointwise = false;
    r.margin = std::min(r.margin, relative_gap(bound, obs));
  }
  r.observed_c0 = path.c0_norm(domain);
  r.observed_c1 = path.c1_norm(domain);
  r.pass_c0 = r.observed_c0 <= r.M0 * (1.0 + slack);
  r.pass_c1 = r.observed_c1 <= r.M1 * (1.0 + slack);
  r.margin = std::min({r.margin, relative_gap(r.M0, r.observed_c0), relative_gap(r.M1, r.observed_c1)});
  return r;
}

LpEstimate lp_regularity_estimate(std::span<const LpSample> samples, int p, Mode mode, double T,
                                  double kappa_w_max) {
  if (samples.empty()) throw ValidationError("lp_regularity_estimate: no samples");
  if (p < 1) throw ValidationError(fmt::format("lp_regularity_estimate: p must be >= 1, got {}", p));

  const double n = static_cast<double>(samples.size());
  auto moment = [&](auto get) {
    double s = 0.0;
    for (const auto& x : samples) s += std::pow(get(x), p);
    return s / n;
  };
  LpEstimate est;
  est.p = p;
  est.empirical = std::pow(moment([](const LpSample& s) { return s.c0; }), 1.0 / p);
  est.empirical_c1 = std::pow(moment([](const LpSample& s) { return s.c1; }), 1.0 / p);

  const double Ev = moment([](const LpSample& s) { return s.kappas.v; });
  const double Eg = moment([](const LpSample& s) { return s.kappas.g; });
  if (mode == Mode::Linear) {
    const double bound_p = std::pow(2.0, p - 1) * std::exp(T * p * kappa_w_max) * (Ev + std::pow(T, p) * Eg);
    est.bound = std::pow(bound_p, 1.0 / p);
  } else {
    const double Ew = moment([](const LpSample& s) { return s.kappas.w; });
    const double Ef = moment([](const LpSample& s) { return s.kappas.f; });
    const double kD = samples.front().kappas.D;
    const double inv = 1.0 / p;
    est.bound = 2.0 * (std::pow(Ev, inv) + std::pow(Eg, inv) + kD * std::pow(Ew, inv) * std::pow(Ef, inv));
  }
  return est;
}

double kappa_w_max(const NoiseSpec& spec, const Domain& domain, Space space) {
  return kernel_norm(kernel_majorant(spec, domain), domain, space);
}

}  // namespace nfuq
