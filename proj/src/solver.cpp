#include "nfuq/solver.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace nfuq {

const char* to_string(Method method) { return method == Method::Picard ? "picard" : "rk"; }

double SolutionPath::c0_norm(const Domain& domain) const {
  double m = 0.0;
  for (const auto& s : states) m = std::max(m, field_norm(domain, space, s));
  return m;
}

double SolutionPath::c1_norm(const Domain& domain) const {
  double m = 0.0;
  for (const auto& d : derivs) m = std::max(m, field_norm(domain, space, d));
  return c0_norm(domain) + m;
}

namespace {

void check_horizon(double T) {
  if (!(T > 0.0) || !std::isfinite(T)) throw ValidationError(fmt::format("final time must be positive, got {}", T));
}

double envelope(double B, double kappa_N, double T, int k) {
  if (B == 0.0) return 0.0;
  return std::exp(std::log(B) + (k - 1) * std::log(kappa_N) + k * std::log(T) - std::lgamma(k + 1.0));
}

}  // namespace

namespace {

struct WindowResult {
  std::vector<double> diffs;
  std::vector<double> envelope;
  bool converged = false;
};

// Picard sweeps on grid points [m0, m1] starting from the state stored at m0.
// `f` and `next` are scratch buffers the size of `y`.
WindowResult picard_window(const Rhs& rhs, std::vector<double>& y, std::vector<double>& f, std::vector<double>& next,
                           std::span<const double> times, std::size_t n, int m0, int m1, const Domain& domain,
                           Space space, const PicardOptions& opts, double B, double kappa_N) {
  auto at = [n](std::vector<double>& a, int m) { return std::span<double>(a.data() + m * n, n); };
  const std::vector<double> start(y.begin() + m0 * n, y.begin() + (m0 + 1) * n);
  const double length = times[m1] - times[m0];
  for (int m = m0 + 1; m <= m1; ++m) {
    if (opts.start_from_zero)
      std::fill_n(y.begin() + m * n, n, 0.0);
    else
      std::copy(start.begin(), start.end(), y.begin() + m * n);
  }

  WindowResult w;
  Field delta(n);
  for (int k = 1; k <= opts.max_iter; ++k) {
    for (int m = m0; m <= m1; ++m) rhs(times[m], at(y, m), at(f, m));
    std::copy(start.begin(), start.end(), next.begin() + m0 * n);
    double diff = 0.0;
    for (int m = m0; m <= m1; ++m) {
      if (m > m0) {
        const double h = times[m] - times[m - 1];
        auto prev = at(next, m - 1), cur = at(next, m);
        auto f0 = at(f, m - 1), f1 = at(f, m);
        for (std::size_t i = 0; i < n; ++i) cur[i] = prev[i] + 0.5 * h * (f0[i] + f1[i]);
      }
      auto cur = at(next, m), old = at(y, m);
      for (std::size_t i = 0; i < n; ++i) delta[i] = cur[i] - old[i];
      const double d = field_norm(domain, space, delta);
      diff = std::isfinite(d) ? std::max(diff, d) : INFINITY;
    }
    std::copy(next.begin() + m0 * n, next.begin() + (m1 + 1) * n, y.begin() + m0 * n);
    w.diffs.push_back(diff);
    w.envelope.push_back(envelope(B, kappa_N, length, k));
    if (!std::isfinite(diff)) break;
    if (diff < opts.tol) {
      w.converged = true;
      break;
    }
  }
  return w;
}

}  // namespace

std::pair<SolutionPath, PicardTrace> picard_integrate(const Rhs& rhs, std::span<const double> v, const Domain& domain,
                                                      Space space, double T, const PicardOptions& opts,
                                                      const KappaSet& kappas, Mode mode) {
  check_horizon(T);
  if (opts.time_steps < 2) throw ValidationError("picard: time_steps must be >= 2");
  if (!(opts.tol > 0.0)) throw ValidationError("picard: tol must be positive");
  if (opts.max_iter < 1) throw ValidationError("picard: max_iter must be >= 1");
  if (!(opts.window_lipschitz > 0.0)) throw ValidationError("picard: window_lipschitz must be positive");
  if (v.size() != domain.size()) throw ValidationError("picard: initial state and domain sizes differ");

  const std::size_t n = v.size();
  const int M = opts.time_steps;
  const auto times = uniform_grid(T, M);
  const int windows = std::clamp(static_cast<int>(std::ceil(kappas.N * T / opts.window_lipschitz)), 1, M);

  std::vector<double> y((M + 1) * n), f(y.size()), next(y.size());
  std::copy(v.begin(), v.end(), y.begin());

  PicardTrace trace;
  trace.B = growth_bound(kappas, field_norm(domain, space, v), mode);
  trace.kappa_N = kappas.N;
  trace.windows = windows;
  trace.converged = true;
  for (int w = 0; w < windows; ++w) {
    const int m0 = static_cast<int>(static_cast<long>(M) * w / windows);
    const int m1 = static_cast<int>(static_cast<long>(M) * (w + 1) / windows);
    const double B = growth_bound(kappas, field_norm(domain, space, {y.data() + m0 * n, n}), mode);
    const auto r = picard_window(rhs, y, f, next, times, n, m0, m1, domain, space, opts, B, kappas.N);
    for (std::size_t k = 0; k < r.diffs.size(); ++k) {
      if (k == trace.iterate_diffs.size()) {
        trace.iterate_diffs.push_back(0.0);
        trace.theoretical_envelope.push_back(0.0);
      }
      trace.iterate_diffs[k] = std::max(trace.iterate_diffs[k], r.diffs[k]);
      trace.theoretical_envelope[k] = std::max(trace.theoretical_envelope[k], r.envelope[k]);
    }
    trace.iterations = static_cast<int>(trace.iterate_diffs.size());
    if (!r.converged) {
      trace.converged = false;
      throw PicardDivergence(
          fmt::format("picard iteration did not reach tol {} in {} iterations on window {} of {} (last diff {})",
                      opts.tol, r.diffs.size(), w + 1, windows, r.diffs.back()),
          std::move(trace));
    }
  }

  SolutionPath path;
  path.space = space;
  path.times = times;
  path.states.resize(M + 1);
  path.derivs.resize(M + 1);
  for (int m = 0; m <= M; ++m) {
    path.states[m].assign(y.begin() + m * n, y.begin() + (m + 1) * n);
    path.derivs[m].resize(n);
    rhs(times[m], path.states[m], path.derivs[m]);
  }
  return {std::move(path), std::move(trace)};
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

void hermite(double t0, std::span<const double> y0, std::span<const double> f0, double t1,
             std::span<const double> y1, std::span<const double> f1, double t, std::span<double> out) {
  const double h = t1 - t0;
  const double s = (t - t0) / h;
  const double s2 = s * s, s3 = s2 * s;
  const double h00 = 2 * s3 - 3 * s2 + 1, h10 = s3 - 2 * s2 + s;
  const double h01 = -2 * s3 + 3 * s2, h11 = s3 - s2;
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = h00 * y0[i] + h10 * h * f0[i] + h01 * y1[i] + h11 * h * f1[i];
}

}  // namespace

SolutionPath rk_integrate(const Rhs& rhs, std::span<const double> v, const Domain& domain, Space space, double T,
                          const RkOptions& opts) {
  check_horizon(T);
  if (!(opts.rtol > 0.0) || !(opts.atol > 0.0)) throw ValidationError("rk: rtol and atol must be positive");
  if (opts.output_steps < 1) throw ValidationError("rk: output_steps must be >= 1");
  if (v.size() != domain.size()) throw ValidationError("rk: initial state and domain sizes differ");

  const std::size_t n = v.size();
  SolutionPath path;
  path.space = space;
  path.times = uniform_grid(T, opts.output_steps);
  path.states.reserve(path.times.size());
  path.states.emplace_back(v.begin(), v.end());

  Field y(v.begin(), v.end()), ynew(n), tmp(n), err(n);
  Field k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n);
  rhs(0.0, y, k1);

  const double h_min = T * 1e-12;
  const double h_max = opts.max_step_per_output * T / opts.output_steps;
  double t = 0.0;
  double h = std::min(opts.initial_step * T, h_max);
  std::size_t next_out = 1;

  while (t < T) {
    if (h < h_min)
      throw NumericalError(fmt::format("rk: step size underflow ({:.3e}) at t = {:.6g}; problem appears stiff", h, t));
    const bool last = t + h >= T;
    const double step = last ? T - t : h;

    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + step * a21 * k1[i];
    rhs(t + c2 * step, tmp, k2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + step * (a31 * k1[i] + a32 * k2[i]);
    rhs(t + c3 * step, tmp, k3);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + step * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    rhs(t + c4 * step, tmp, k4);
    for (std::size_t i = 0; i < n; ++i)
      tmp[i] = y[i] + step * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    rhs(t + c5 * step, tmp, k5);
    for (std::size_t i = 0; i < n; ++i)
      tmp[i] = y[i] + step * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    const double t_new = last ? T : t + step;
    rhs(t_new, tmp, k6);
    for (std::size_t i = 0; i < n; ++i)
      ynew[i] = y[i] + step * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    rhs(t_new, ynew, k7);

    double err_norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double e = step * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      const double scale = opts.atol + opts.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      err_norm = std::max(err_norm, std::abs(e) / scale);
    }
    if (!std::isfinite(err_norm)) {
      h = 0.25 * step;
      continue;
    }

    double factor = err_norm == 0.0 ? opts.max_factor : opts.safety * std::pow(err_norm, -0.2);
    if (err_norm <= 1.0) {
      while (next_out < path.times.size() && path.times[next_out] <= t_new) {
        Field out(n);
        if (path.times[next_out] == t_new)
          out = ynew;
        else
          hermite(t, y, k1, t_new, ynew, k7, path.times[next_out], out);
        path.states.push_back(std::move(out));
        ++next_out;
      }
      t = t_new;
      y.swap(ynew);
      k1.swap(k7);
      factor = std::clamp(factor, opts.min_factor, opts.max_factor);
      h = std::min(step * factor, h_max);
    } else {
      factor = std::clamp(factor, opts.min_factor, 1.0);
      h = step * factor;
    }
  }
  while (path.states.size() < path.times.size()) path.states.push_back(y);

  path.derivs.resize(path.times.size());
  for (std::size_t k = 0; k < path.times.size(); ++k) {
    path.derivs[k].resize(n);
    rhs(path.times[k], path.states[k], path.derivs[k]);
  }
  return path;
}

namespace {

Rhs make_rhs(const DataRealization& real, const Domain& domain) {
  auto N = std::make_shared<VectorField>(real, domain);
  return [N](double t, std::span<const double> u, std::span<double> out) { (*N)(t, u, out); };
}

}  // namespace

std::pair<SolutionPath, PicardTrace> picard_solve(const DataRealization& real, const Domain& domain, Space space,
                                                  double T, const PicardOptions& opts) {
  check_horizon(T);
  if (opts.time_steps < 2) throw ValidationError("picard: time_steps must be >= 2");
  const auto kappas = compute_kappas(real, domain, space, uniform_grid(T, opts.time_steps));
  return picard_integrate(make_rhs(real, domain), real.initial, domain, space, T, opts, kappas, real.mode);
}

SolutionPath rk_solve(const DataRealization& real, const Domain& domain, Space space, double T,
                      const RkOptions& opts) {
  return rk_integrate(make_rhs(real, domain), real.initial, domain, space, T, opts);
}

SolutionPath solve(const DataRealization& real, const Domain& domain, Space space, double T,
                   const SolverOptions& opts) {
  if (opts.method == Method::Picard) return picard_solve(real, domain, space, T, opts.picard).first;
  return rk_solve(real, domain, space, T, opts.rk);
}

double voc_residual(const SolutionPath& path, const DataRealization& real, const Domain& domain) {
  const std::size_t n = real.size();
  if (path.states.empty() || path.states.size() != path.times.size())
    throw ValidationError("voc_residual: path has mismatched times and states");
  if (path.states.front().size() != n) throw ValidationError("voc_residual: path and realisation sizes differ");

  auto source = [&](std::size_t k) {
    // W F(u(t_k)) + g(t_k)
    Field Fu = apply_firing(real, path.states[k]);
    Field s = apply_kernel(real, domain, Fu);
    for (std::size_t i = 0; i < n; ++i) s[i] += real.forcing(i, path.times[k]);
    return s;
  };

  // I_{k+1} = e^{-h} I_k + h/2 (e^{-h} S_k + S_{k+1}) is the trapezoid sum
  // of int_0^{t_{k+1}} e^{-(t_{k+1}-s)} S(s) ds.
  Field integral(n, 0.0), r(n);
  Field s_prev = source(0);
  double residual = 0.0;
  for (std::size_t k = 0; k < path.times.size(); ++k) {
    if (k > 0) {
      const double h = path.times[k] - path.times[k - 1];
      const double decay = std::exp(-h);
      Field s_cur = source(k);
      for (std::size_t i = 0; i < n; ++i)
        integral[i] = decay * integral[i] + 0.5 * h * (decay * s_prev[i] + s_cur[i]);
      s_prev = std::move(s_cur);
    }
    const double e = std::exp(-path.times[k]);
    for (std::size_t i = 0; i < n; ++i) r[i] = path.states[k][i] - e * real.initial[i] - integral[i];
    residual = std::max(residual, field_norm(domain, path.space, r));
  }
  return residual;
}

}  // namespace nfuq
