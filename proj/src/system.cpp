#include "letpf/system.hpp"

#include <algorithm>
#include <stdexcept>

namespace letpf {

Eigen::VectorXd State::phi_field() const {
  const int n = num_nodes();
  Eigen::VectorXd f(n);
  for (int k = 0; k < n; ++k) f[k] = p[3 * k + 2];
  return f;
}

Eigen::VectorXd State::u_field() const {
  const int n = num_nodes();
  Eigen::VectorXd f(2 * n);
  for (int k = 0; k < n; ++k) {
    f[2 * k] = p[3 * k];
    f[2 * k + 1] = p[3 * k + 1];
  }
  return f;
}

State make_state(const Mesh& mesh, const std::vector<double>& phi0) {
  if (static_cast<int>(phi0.size()) != mesh.num_nodes()) {
    throw std::invalid_argument("initial order parameter needs one value per node");
  }
  State s;
  s.p = Eigen::VectorXd::Zero(3 * mesh.num_nodes());
  s.phi_prev.resize(mesh.num_nodes());
  for (int k = 0; k < mesh.num_nodes(); ++k) {
    s.p[3 * k + 2] = phi0[k];
    s.phi_prev[k] = phi0[k];
  }
  return s;
}

System::System(Mesh mesh, Material material, Method method, std::vector<DirichletBC> bcs)
    : mesh_(std::move(mesh)), material_(std::move(material)), method_(method), bcs_(std::move(bcs)) {
  const int ndof = num_dofs();
  dirichlet_mask_.assign(ndof, 0);
  dirichlet_value_.assign(ndof, 0.0);
  for (const auto& bc : bcs_) {
    if (bc.dof < 0 || bc.dof >= ndof) throw std::out_of_range("Dirichlet DOF out of range");
    dirichlet_mask_[bc.dof] = 1;
    dirichlet_value_[bc.dof] = bc.value;
  }
  geometry_ = quad4::mesh_geometry(mesh_);

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(mesh_.elements.size() * 144);
  for (const auto& conn : mesh_.elements) {
    for (int a = 0; a < 4; ++a)
      for (int i = 0; i < 3; ++i)
        for (int b = 0; b < 4; ++b)
          for (int j = 0; j < 3; ++j) trip.emplace_back(3 * conn[a] + i, 3 * conn[b] + j, 0.0);
  }
  pattern_.resize(ndof, ndof);
  pattern_.setFromTriplets(trip.begin(), trip.end());
  pattern_.makeCompressed();

  const int* outer = pattern_.outerIndexPtr();
  const int* inner = pattern_.innerIndexPtr();
  value_index_.resize(mesh_.elements.size());
  for (int e = 0; e < mesh_.num_elements(); ++e) {
    const auto& conn = mesh_.elements[e];
    for (int lj = 0; lj < 12; ++lj) {
      const int col = 3 * conn[lj / 3] + lj % 3;
      const int* begin = inner + outer[col];
      const int* end = inner + outer[col + 1];
      for (int li = 0; li < 12; ++li) {
        const int row = 3 * conn[li / 3] + li % 3;
        const int* pos = std::lower_bound(begin, end, row);
        value_index_[e][lj * 12 + li] = static_cast<int>(pos - inner);
      }
    }
  }
}

Vec12 System::gather(const Eigen::VectorXd& p, int e) const {
  Vec12 d;
  const auto& conn = mesh_.elements[e];
  for (int a = 0; a < 4; ++a)
    for (int i = 0; i < 3; ++i) d[3 * a + i] = p[3 * conn[a] + i];
  return d;
}

std::vector<ElementClass> System::classify(const Eigen::VectorXd& p) const {
  const double tol = degenerate_gradient_tol(mesh_.h);
  std::vector<ElementClass> out(mesh_.elements.size());
  for (int e = 0; e < mesh_.num_elements(); ++e) {
    const auto& conn = mesh_.elements[e];
    const std::array<double, 4> ph = {p[3 * conn[0] + 2], p[3 * conn[1] + 2], p[3 * conn[2] + 2],
                                      p[3 * conn[3] + 2]};
    out[e] = classify_element(ph, geometry_[e].centre, material_.phi_reg, tol);
  }
  return out;
}

void System::assemble(const Eigen::VectorXd& p, const Eigen::VectorXd& phi_prev, double dt,
                      Eigen::VectorXd& residual, SparseMatrix& tangent,
                      std::vector<ElementClass>* classes) const {
  residual.setZero(num_dofs());
  if (tangent.nonZeros() != pattern_.nonZeros() || tangent.rows() != pattern_.rows()) tangent = pattern_;
  std::fill(tangent.valuePtr(), tangent.valuePtr() + tangent.nonZeros(), 0.0);
  double* values = tangent.valuePtr();

  std::vector<ElementClass> local;
  std::vector<ElementClass>& cls = classes ? *classes : local;
  if (method_ == Method::LETPF) cls = classify(p);

  for (int e = 0; e < mesh_.num_elements(); ++e) {
    const auto& conn = mesh_.elements[e];
    const Vec12 dofs = gather(p, e);
    const std::array<double, 4> pn = {phi_prev[conn[0]], phi_prev[conn[1]], phi_prev[conn[2]], phi_prev[conn[3]]};
    const ElementOutput out = method_ == Method::PFM
                                  ? element_pfm(geometry_[e], dofs, pn, material_, dt)
                                  : element_letpf(geometry_[e], dofs, pn, cls[e], material_, dt);
    for (int li = 0; li < 12; ++li) residual[3 * conn[li / 3] + li % 3] += out.residual[li];
    const auto& idx = value_index_[e];
    for (int lj = 0; lj < 12; ++lj)
      for (int li = 0; li < 12; ++li) values[idx[lj * 12 + li]] += out.tangent(li, lj);
  }
}

Eigen::VectorXd System::apply_dirichlet(SparseMatrix& K, const Eigen::VectorXd& residual, const Eigen::VectorXd& p,
                                        const std::vector<char>* extra_fixed) const {
  const int ndof = num_dofs();
  std::vector<char> fixed = dirichlet_mask_;
  if (extra_fixed) {
    for (int i = 0; i < ndof; ++i) fixed[i] = fixed[i] || (*extra_fixed)[i];
  }
  Eigen::VectorXd incr = Eigen::VectorXd::Zero(ndof);
  bool any_nonzero = false;
  for (int i = 0; i < ndof; ++i) {
    if (dirichlet_mask_[i]) {
      incr[i] = dirichlet_value_[i] - p[i];
      any_nonzero = any_nonzero || incr[i] != 0.0;
    }
  }
  Eigen::VectorXd rhs = -residual;
  if (any_nonzero) rhs -= K * incr;

  for (int col = 0; col < K.outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(K, col); it; ++it) {
      const int row = static_cast<int>(it.row());
      if (fixed[row] || fixed[col]) it.valueRef() = (row == col) ? 1.0 : 0.0;
    }
  }
  for (int i = 0; i < ndof; ++i) {
    if (fixed[i]) rhs[i] = incr[i];
  }
  return rhs;
}

}  // namespace letpf
