#pragma once

// Global assembly of the coupled (u, phi) system on a quadrilateral mesh.
// Global DOFs are node-interleaved: 3k (ux), 3k+1 (uy), 3k+2 (phi).

#include "letpf/element.hpp"
#include "letpf/laminate.hpp"
#include "letpf/mesh.hpp"
#include "letpf/quad4.hpp"

#include <Eigen/Sparse>

#include <vector>

namespace letpf {

using SparseMatrix = Eigen::SparseMatrix<double>;

struct DirichletBC {
  int dof = 0;
  double value = 0.0;
};

struct State {
  Eigen::VectorXd p;        // all nodal unknowns, node-interleaved
  Eigen::VectorXd phi_prev; // order parameter at the previous step
  double t = 0.0;

  int num_nodes() const { return static_cast<int>(p.size() / 3); }
  double u(int node, int comp) const { return p[3 * node + comp]; }
  double phi(int node) const { return p[3 * node + 2]; }
  Eigen::VectorXd phi_field() const;
  Eigen::VectorXd u_field() const;  // (ux, uy) interleaved
};

State make_state(const Mesh& mesh, const std::vector<double>& phi0);

class System {
 public:
  System(Mesh mesh, Material material, Method method, std::vector<DirichletBC> bcs = {});

  const Mesh& mesh() const { return mesh_; }
  const Material& material() const { return material_; }
  Method method() const { return method_; }
  const std::vector<DirichletBC>& dirichlet() const { return bcs_; }
  const std::vector<quad4::ElementGeometry>& geometry() const { return geometry_; }
  int num_dofs() const { return 3 * mesh_.num_nodes(); }
  bool is_dirichlet(int dof) const { return dirichlet_mask_[dof] != 0; }

  /// Element classification for the order parameter held in `p`
  /// (meaningful for LET-PF; PFM callers may use it for output).
  std::vector<ElementClass> classify(const Eigen::VectorXd& p) const;

  /// Scatter-add of element residuals and tangents. Dirichlet conditions are
  /// not applied here. For LET-PF the classification is recomputed from `p`.
  void assemble(const Eigen::VectorXd& p, const Eigen::VectorXd& phi_prev, double dt,
                Eigen::VectorXd& residual, SparseMatrix& tangent,
                std::vector<ElementClass>* classes = nullptr) const;

  /// Element DOF vector gathered from a global vector.
  Vec12 gather(const Eigen::VectorXd& p, int e) const;

  /// Symmetric elimination of Dirichlet DOFs for the Newton correction
  /// K dp = -R: constrained rows/columns become identity rows and the
  /// prescribed increments (value - p) move to the right-hand side.
  /// Extra DOFs (e.g. frozen phi) are held at their current value.
  Eigen::VectorXd apply_dirichlet(SparseMatrix& K, const Eigen::VectorXd& residual, const Eigen::VectorXd& p,
                                  const std::vector<char>* extra_fixed = nullptr) const;

  /// Fresh matrix with the global sparsity pattern (all values zero).
  SparseMatrix pattern() const { return pattern_; }

 private:
  Mesh mesh_;
  Material material_;
  Method method_;
  std::vector<DirichletBC> bcs_;
  std::vector<char> dirichlet_mask_;
  std::vector<double> dirichlet_value_;
  std::vector<quad4::ElementGeometry> geometry_;
  SparseMatrix pattern_;
  std::vector<std::array<int, 144>> value_index_;
};

}  // namespace letpf
