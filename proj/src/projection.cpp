#include "nfuq/projection.hpp"

#include <cmath>

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <fmt/format.h>

namespace nfuq {

const char* to_string(ProjectorKind kind) {
  return kind == ProjectorKind::Interpolatory ? "interpolatory" : "orthogonal";
}

ProjectorKind natural_projector(Space space) {
  return space == Space::C ? ProjectorKind::Interpolatory : ProjectorKind::Orthogonal;
}

Projector::Projector(ProjectorKind kind, Domain fine, std::vector<std::size_t> coarse_nodes, DenseMatrix basis,
                     DenseMatrix matrix)
    : kind_(kind), fine_(std::move(fine)), coarse_(std::move(coarse_nodes)), basis_(std::move(basis)),
      matrix_(std::move(matrix)) {
  norm_c_ = operator_norm(matrix_, fine_, Space::C);
  norm_l2_ = operator_norm(matrix_, fine_, Space::L2);
}

namespace {

struct HatBasis {
  std::vector<std::size_t> coarse;
  DenseMatrix phi;
};

HatBasis hat_basis(const Domain& fine, int coarse_count) {
  if (fine.kind() != DomainKind::Interval)
    throw ValidationError("projector: hat-function projectors are only available on intervals");
  const auto nf = static_cast<int>(fine.size());
  if (coarse_count < 2 || coarse_count > nf)
    throw ValidationError(fmt::format("projector: coarse_count {} outside [2, {}]", coarse_count, nf));
  if ((nf - 1) % (coarse_count - 1) != 0)
    throw ValidationError(fmt::format("projector: coarse grid of {} nodes does not nest in {} fine nodes",
                                      coarse_count, nf));
  const int stride = (nf - 1) / (coarse_count - 1);

  HatBasis hb;
  hb.phi = DenseMatrix(nf, coarse_count);
  for (int j = 0; j < coarse_count; ++j) hb.coarse.push_back(static_cast<std::size_t>(j) * stride);
  for (int i = 0; i < nf; ++i) {
    const double x = fine.node(i)[0];
    const int cell = std::min(i / stride, coarse_count - 2);
    const double xl = fine.node(hb.coarse[cell])[0];
    const double xr = fine.node(hb.coarse[cell + 1])[0];
    if (i % stride == 0) {
      hb.phi(i, i / stride) = 1.0;
      continue;
    }
    const double s = (x - xl) / (xr - xl);
    hb.phi(i, cell) = 1.0 - s;
    hb.phi(i, cell + 1) = s;
  }
  return hb;
}

}  // namespace

Projector build_interpolatory(const Domain& fine, int coarse_count) {
  auto hb = hat_basis(fine, coarse_count);
  const std::size_t nf = fine.size();
  DenseMatrix P(nf, nf);
  for (std::size_t i = 0; i < nf; ++i) {
    for (std::size_t j = 0; j < hb.coarse.size(); ++j) P(i, hb.coarse[j]) = hb.phi(i, j);
  }
  return Projector(ProjectorKind::Interpolatory, fine, std::move(hb.coarse), std::move(hb.phi), std::move(P));
}

Projector build_orthogonal(const Domain& fine, int coarse_count) {
  auto hb = hat_basis(fine, coarse_count);
  const auto nf = static_cast<Eigen::Index>(fine.size());
  const auto nc = static_cast<Eigen::Index>(hb.coarse.size());
  Eigen::MatrixXd Phi(nf, nc);
  for (Eigen::Index i = 0; i < nf; ++i)
    for (Eigen::Index j = 0; j < nc; ++j) Phi(i, j) = hb.phi(i, j);
  const Eigen::VectorXd q = Eigen::Map<const Eigen::VectorXd>(fine.weights().data(), nf);
  const Eigen::MatrixXd PhiTQ = Phi.transpose() * q.asDiagonal();
  const Eigen::MatrixXd gram = PhiTQ * Phi;
  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  if (llt.info() != Eigen::Success) throw NumericalError("orthogonal projector: Gram matrix is not positive definite");
  const Eigen::MatrixXd Pm = Phi * llt.solve(PhiTQ);

  DenseMatrix P(nf, nf);
  for (Eigen::Index i = 0; i < nf; ++i)
    for (Eigen::Index j = 0; j < nf; ++j) P(i, j) = Pm(i, j);
  return Projector(ProjectorKind::Orthogonal, fine, std::move(hb.coarse), std::move(hb.phi), std::move(P));
}

Projector build_projector(ProjectorKind kind, const Domain& fine, int coarse_count) {
  return kind == ProjectorKind::Interpolatory ? build_interpolatory(fine, coarse_count)
                                              : build_orthogonal(fine, coarse_count);
}

Field project_field(const Projector& P, std::span<const double> v) {
  if (v.size() != P.fine_domain().size()) throw ValidationError("project_field: field and projector sizes differ");
  Field out(v.size());
  kernels::matvec(P.matrix(), v, out);
  return out;
}

double operator_norm(const DenseMatrix& A, const Domain& domain, Space space) {
  const std::size_t n = A.rows();
  if (space == Space::C) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (double a : A.row(i)) s += std::abs(a);
      m = std::max(m, s);
    }
    return m;
  }

  // B = Q^{1/2} A Q^{-1/2}; iterate x <- B^T B x.
  const auto& q = domain.weights();
  std::vector<double> sq(n), isq(n);
  for (std::size_t i = 0; i < n; ++i) {
    sq[i] = std::sqrt(q[i]);
    isq[i] = 1.0 / sq[i];
  }
  DenseMatrix B(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) B(i, j) = sq[i] * A(i, j) * isq[j];

  std::vector<double> x(n), y(n), z(n);
  // deterministic start with components in every direction
  for (std::size_t i = 0; i < n; ++i) x[i] = 1.0 + 0.01 * std::sin(1.0 + 3.7 * static_cast<double>(i));
  auto normalize = [](std::vector<double>& v) {
    double s = 0.0;
    for (double e : v) s += e * e;
    s = std::sqrt(s);
    if (s > 0.0)
      for (double& e : v) e /= s;
    return s;
  };
  normalize(x);
  double sigma = 0.0;
  for (int it = 0; it < 20000; ++it) {
    kernels::matvec(B, x, y);
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += B(i, j) * y[i];
      z[j] = s;
    }
    double ny = 0.0;
    for (double e : y) ny += e * e;
    const double next = std::sqrt(ny);
    const double nz = normalize(z);
    x.swap(z);
    if (nz == 0.0) return 0.0;
    const bool done = std::abs(next - sigma) <= 1e-15 * next;
    sigma = std::max(sigma, next);
    if (done) break;
  }
  return sigma;
}

DenseMatrix projected_kernel_operator(const Projector& P, const DataRealization& real) {
  const auto& q = P.fine_domain().weights();
  DenseMatrix Kq = real.kernel;
  for (std::size_t i = 0; i < Kq.rows(); ++i) {
    auto row = Kq.row(i);
    for (std::size_t j = 0; j < row.size(); ++j) row[j] *= q[j];
  }
  return kernels::matmul(P.matrix(), Kq);
}

KappaSet projected_kappas(const Projector& P, const DataRealization& real, Space space,
                          std::span<const double> times) {
  const Domain& domain = P.fine_domain();
  if (real.size() != domain.size()) throw ValidationError("projected_kappas: realisation and projector sizes differ");
  KappaSet k = compute_kappas(real, domain, space, {});
  k.w = operator_norm(projected_kernel_operator(P, real), domain, space);
  Field g(domain.size());
  k.g = 0.0;
  for (double t : times) {
    real.forcing.sample(t, g);
    k.g = std::max(k.g, field_norm(domain, space, project_field(P, g)));
  }
  k.v = field_norm(domain, space, project_field(P, real.initial));
  k.N = lipschitz_constant(k, real.mode);
  return k;
}

ProjectedSolution solve_projected(const Projector& P, const DataRealization& real, Space space, double T,
                                  const SolverOptions& opts) {
  const Domain& domain = P.fine_domain();
  auto N = std::make_shared<VectorField>(real, domain);
  auto scratch = std::make_shared<Field>(domain.size());
  const DenseMatrix& Pm = P.matrix();
  Rhs rhs = [N, scratch, &Pm](double t, std::span<const double> u, std::span<double> out) {
    (*N)(t, u, *scratch);
    kernels::matvec(Pm, *scratch, out);
  };
  const Field v = project_field(P, real.initial);

  ProjectedSolution sol;
  if (opts.method == Method::Picard) {
    const auto grid = uniform_grid(T, opts.picard.time_steps);
    sol.kappas = projected_kappas(P, real, space, grid);
    sol.path = picard_integrate(rhs, v, domain, space, T, opts.picard, sol.kappas, real.mode).first;
  } else {
    sol.path = rk_integrate(rhs, v, domain, space, T, opts.rk);
    sol.kappas = projected_kappas(P, real, space, sol.path.times);
  }
  sol.report = check_bounds(sol.path, domain, sol.kappas, real.mode, T);
  return sol;
}

}  // namespace nfuq
