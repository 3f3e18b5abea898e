#pragma once

#include <span>
#include <vector>

#include "nfuq/bounds.hpp"
#include "nfuq/domain.hpp"
#include "nfuq/kernels.hpp"
#include "nfuq/operators.hpp"
#include "nfuq/solver.hpp"

namespace nfuq {

enum class ProjectorKind { Interpolatory, Orthogonal };

const char* to_string(ProjectorKind kind);

/// Projector onto piecewise-linear hat functions on a uniform coarse subgrid
/// of an interval. Acts on node values of the fine domain.
class Projector {
 public:
  Projector(ProjectorKind kind, Domain fine, std::vector<std::size_t> coarse_nodes, DenseMatrix basis,
            DenseMatrix matrix);

  ProjectorKind kind() const noexcept { return kind_; }
  const Domain& fine_domain() const noexcept { return fine_; }
  /// Fine-node index of each coarse node.
  const std::vector<std::size_t>& coarse_nodes() const noexcept { return coarse_; }
  /// phi_j(x_i), fine x coarse.
  const DenseMatrix& basis() const noexcept { return basis_; }
  /// P as a fine x fine matrix on node values.
  const DenseMatrix& matrix() const noexcept { return matrix_; }
  /// Operator norm ||P_n|| on the phase space (>= 1).
  double norm(Space space) const noexcept { return space == Space::C ? norm_c_ : norm_l2_; }

 private:
  ProjectorKind kind_;
  Domain fine_;
  std::vector<std::size_t> coarse_;
  DenseMatrix basis_;
  DenseMatrix matrix_;
  double norm_c_ = 1.0;
  double norm_l2_ = 1.0;
};

/// V_j = v(x_j). Requires an interval and (fine - 1) divisible by
/// (coarse_count - 1) so the coarse grid nests in the fine one.
Projector build_interpolatory(const Domain& fine, int coarse_count);

/// Discrete L2 projection: V solves G V = Phi^T Q v with the Gram matrix
/// G = Phi^T Q Phi of the hat basis under the fine quadrature.
Projector build_orthogonal(const Domain& fine, int coarse_count);

Projector build_projector(ProjectorKind kind, const Domain& fine, int coarse_count);

/// Natural pairing: interpolatory on C(D), orthogonal on L2(D).
ProjectorKind natural_projector(Space space);

Field project_field(const Projector& P, std::span<const double> v);

/// Induced operator norm of A acting on node values in the phase space.
/// C: exact max absolute row sum. L2: power iteration on the
/// quadrature-weighted form Q^{1/2} A Q^{-1/2}.
double operator_norm(const DenseMatrix& A, const Domain& domain, Space space);

/// P W as an explicit matrix: (P K diag(q)).
DenseMatrix projected_kernel_operator(const Projector& P, const DataRealization& real);

/// kappa_{w,n} = ||P W||, kappa_{g,n} = max_t ||P g(t)||, kappa_{v,n} = ||P v||;
/// kappa_f, kappa_f', kappa_D unchanged.
KappaSet projected_kappas(const Projector& P, const DataRealization& real, Space space,
                          std::span<const double> times);

struct ProjectedSolution {
  SolutionPath path;
  KappaSet kappas;
  BoundsReport report;
};

/// Solves u_n' = P N(t, u_n), u_n(0) = P v and checks the bounds built from
/// the projected constants.
ProjectedSolution solve_projected(const Projector& P, const DataRealization& real, Space space, double T,
                                  const SolverOptions& opts);

}  // namespace nfuq
