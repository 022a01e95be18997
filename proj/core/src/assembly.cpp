#include "axifep/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <sstream>
#include <thread>

#include "axifep/cylgeo.hpp"
#include "axifep/kinematics.hpp"
#include "axifep/q8.hpp"
#include "axifep/spectral.hpp"

namespace axifep::fem {

const char* to_string(Formulation f) { return f == Formulation::UL ? "UL" : "TL"; }

namespace {

constexpr int kGpPerElem = 9;
constexpr int kElemDofs = 16;

using ElemVec = Eigen::Matrix<double, kElemDofs, 1>;
using ElemMat = Eigen::Matrix<double, kElemDofs, kElemDofs>;

struct ElemOut {
  ElemVec f = ElemVec::Zero();
  ElemMat K = ElemMat::Zero();
  std::exception_ptr error;
};

Mat2 parent_jacobian(const std::array<Vec2, 8>& x, const Q8Eval& q) {
  Mat2 j = Mat2::Zero();
  for (int a = 0; a < 8; ++a) j += x[a] * q.dparent[a].transpose();
  return j;  // j(i, k) = d x_i / d xi_k
}

std::array<Vec2, 8> physical_gradients(const Mat2& jac, const Q8Eval& q) {
  const Mat2 jinv_t = jac.inverse().transpose();
  std::array<Vec2, 8> d;
  for (int a = 0; a < 8; ++a) d[a] = jinv_t * q.dparent[a];
  return d;
}

[[noreturn]] void rethrow_at(int elem, int gp) {
  try {
    throw;
  } catch (const InvertedElementError& e) {
    std::ostringstream os;
    os << "element " << elem << ", gauss point " << gp << ": " << e.what();
    throw InvertedElementError(os.str(), elem, gp);
  } catch (const ConstitutiveError& e) {
    std::ostringstream os;
    os << "element " << elem << ", gauss point " << gp << ": " << e.what();
    throw ConstitutiveError(os.str(), e.trial_strain(), e.z_prev());
  } catch (const StateError& e) {
    std::ostringstream os;
    os << "element " << elem << ", gauss point " << gp << ": " << e.what();
    throw StateError(os.str());
  }
}

Vec2 nodal(const Eigen::VectorXd& u, int node) {
  return Vec2(u(dof_index(node, 0)), u(dof_index(node, 1)));
}

GpState make_trial(const SpatialResponse& resp, const Mat3& f_mixed, double r_ref, double r,
                   double z, double J) {
  GpState s;
  s.mat = resp.rr.state;
  s.F = f_mixed;
  const Mat3 fp_inv = physical_defgrad(f_mixed, r_ref, r).inverse();
  s.Cp_inv = fp_inv * s.mat.b_e * fp_inv.transpose();
  s.r = r;
  s.z_cur = z;
  s.J = J;
  s.J_p = resp.J_p;
  s.sigma = resp.tau / J;
  return s;
}

void check_parent_det(double det, const char* where) {
  if (!(det > 0.0) || !std::isfinite(det)) {
    std::ostringstream os;
    os << where << ": non-positive in-plane Jacobian " << det;
    throw InvertedElementError(os.str());
  }
}

ElemOut element_ul(const MeshAxi& mesh, int e, std::vector<GpRecord>& gps,
                   const Eigen::VectorXd& u_total, const Eigen::VectorXd& u_inc,
                   const mcc::MatParams& params, bool with_k) {
  ElemOut out;
  const Q8Conn& conn = mesh.elems[static_cast<std::size_t>(e)];
  std::array<Vec2, 8> x;
  std::array<Vec2, 8> du;
  for (int a = 0; a < 8; ++a) {
    x[a] = mesh.nodes[static_cast<std::size_t>(conn[a])] + nodal(u_total, conn[a]);
    du[a] = nodal(u_inc, conn[a]);
  }
  std::array<Mat3, kElemDofs> grad;
  for (int g = 0; g < kGpPerElem; ++g) {
    GpRecord& rec = gps[static_cast<std::size_t>(kGpPerElem * e + g)];
    try {
      const Q8Eval q = q8_shape(rec.xi);
      const Mat2 jac = parent_jacobian(x, q);
      check_parent_det(jac.determinant(), "assemble_ul");
      const auto dndx = physical_gradients(jac, q);
      double r = 0.0;
      double z = 0.0;
      double r_n = 0.0;
      for (int a = 0; a < 8; ++a) {
        r += q.value[a] * x[a].x();
        z += q.value[a] * x[a].y();
        r_n += q.value[a] * (x[a].x() - du[a].x());
      }
      const cylgeo::Christoffel chr(r);
      Mat3 lu = Mat3::Zero();
      for (int a = 0; a < 8; ++a)
        for (int d = 0; d < 2; ++d) {
          const int dir = d == 0 ? kR : kZ;
          grad[2 * a + d] = cylgeo::shape_grad(q.value[a], dndx[a], chr, dir);
          lu += du[a](d) * grad[2 * a + d];
        }
      const Mat3 x_inc_inv = kin::defgrad_inverse_spatial(lu, cylgeo::Shifter(r_n, r));
      const kin::DefGrad f_inc{x_inc_inv.inverse(), r_n, r};
      const kin::DefGrad f{f_inc.comp * rec.committed.F, rec.ref_pos.x(), r};
      const double J = f.jacobian();
      const Mat3 b_tr = kin::trial_elastic_b(f_inc, rec.committed.mat.b_e);
      const SpatialResponse resp =
          spatial_response(b_tr, rec.committed.mat.z, J, params, with_k);
      rec.trial = make_trial(resp, f.comp, rec.ref_pos.x(), r, z, J);

      for (int i = 0; i < kElemDofs; ++i) out.f(i) += rec.dV0 * ddot(resp.tau, grad[i]);
      if (with_k) {
        Eigen::Matrix<double, 9, kElemDofs> gflat;
        for (int i = 0; i < kElemDofs; ++i) gflat.col(i) = flatten(grad[i]);
        out.K.noalias() += rec.dV0 * gflat.transpose() * resp.a * gflat;
      }
    } catch (...) {
      try {
        rethrow_at(e, g);
      } catch (...) {
        out.error = std::current_exception();
        return out;
      }
    }
  }
  return out;
}

ElemOut element_tl(const MeshAxi& mesh, int e, std::vector<GpRecord>& gps,
                   const Eigen::VectorXd& u_total, const mcc::MatParams& params, bool with_k) {
  ElemOut out;
  const Q8Conn& conn = mesh.elems[static_cast<std::size_t>(e)];
  std::array<Vec2, 8> u;
  for (int a = 0; a < 8; ++a) u[a] = nodal(u_total, conn[a]);
  std::array<Mat3, kElemDofs> grad0;
  for (int g = 0; g < kGpPerElem; ++g) {
    GpRecord& rec = gps[static_cast<std::size_t>(kGpPerElem * e + g)];
    try {
      const double R = rec.ref_pos.x();
      double r = R;
      double z = rec.ref_pos.y();
      for (int a = 0; a < 8; ++a) {
        r += rec.shape[a] * u[a].x();
        z += rec.shape[a] * u[a].y();
      }
      const cylgeo::Christoffel chr0(R);
      Mat3 du = Mat3::Zero();
      for (int a = 0; a < 8; ++a)
        for (int d = 0; d < 2; ++d) {
          const int dir = d == 0 ? kR : kZ;
          grad0[2 * a + d] = cylgeo::shape_grad(rec.shape[a], rec.dshape_ref[a], chr0, dir);
          du += u[a](d) * grad0[2 * a + d];
        }
      const kin::DefGrad f = kin::defgrad_total(du, cylgeo::Shifter(R, r));
      const double J = f.jacobian();
      const Mat3 fp = physical_defgrad(f.comp, R, r);
      const Mat3 b_tr = fp * rec.committed.Cp_inv * fp.transpose();
      const SpatialResponse resp =
          spatial_response(b_tr, rec.committed.mat.z, J, params, with_k);
      rec.trial = make_trial(resp, f.comp, R, r, z, J);

      // First Piola-Kirchhoff stress; the spatial tangent pulled back with F^{-1}
      // on both gradient slots gives dP/dF.
      const Mat3 fp_inv = fp.inverse();
      const Mat3 P = resp.tau * fp_inv.transpose();
      for (int i = 0; i < kElemDofs; ++i) out.f(i) += rec.dV0 * ddot(P, grad0[i]);
      if (with_k) {
        Tensor4 A;
        for (int i = 0; i < 3; ++i)
          for (int I = 0; I < 3; ++I)
            for (int k = 0; k < 3; ++k)
              for (int L = 0; L < 3; ++L) {
                double acc = 0.0;
                for (int j = 0; j < 3; ++j)
                  for (int l = 0; l < 3; ++l)
                    acc += resp.a(pair_index(i, j), pair_index(k, l)) * fp_inv(I, j) *
                           fp_inv(L, l);
                A(pair_index(i, I), pair_index(k, L)) = acc;
              }
        Eigen::Matrix<double, 9, kElemDofs> gflat;
        for (int i = 0; i < kElemDofs; ++i) gflat.col(i) = flatten(grad0[i]);
        out.K.noalias() += rec.dV0 * gflat.transpose() * A * gflat;
      }
    } catch (...) {
      try {
        rethrow_at(e, g);
      } catch (...) {
        out.error = std::current_exception();
        return out;
      }
    }
  }
  return out;
}

template <class ElemFn>
AssemblyResult run_assembly(const MeshAxi& mesh, const AssemblyOptions& opt, ElemFn&& fn) {
  const int ne = mesh.num_elems();
  std::vector<ElemOut> outs(static_cast<std::size_t>(ne));
  const int nt = std::min(assembly_threads(opt.threads), std::max(ne, 1));
  if (nt <= 1) {
    for (int e = 0; e < ne; ++e) outs[static_cast<std::size_t>(e)] = fn(e);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(nt));
    for (int t = 0; t < nt; ++t)
      pool.emplace_back([&, t] {
        for (int e = t; e < ne; e += nt) outs[static_cast<std::size_t>(e)] = fn(e);
      });
    for (auto& th : pool) th.join();
  }
  // Serial scatter in element order keeps results bitwise reproducible.
  for (const ElemOut& o : outs)
    if (o.error) std::rethrow_exception(o.error);

  AssemblyResult res;
  res.f_int = Eigen::VectorXd::Zero(mesh.num_dofs());
  std::vector<Eigen::Triplet<double>> trip;
  if (opt.with_stiffness) trip.reserve(static_cast<std::size_t>(ne) * kElemDofs * kElemDofs);
  for (int e = 0; e < ne; ++e) {
    const ElemOut& o = outs[static_cast<std::size_t>(e)];
    const Q8Conn& conn = mesh.elems[static_cast<std::size_t>(e)];
    std::array<int, kElemDofs> dofs;
    for (int a = 0; a < 8; ++a)
      for (int d = 0; d < 2; ++d) dofs[2 * a + d] = dof_index(conn[a], d);
    for (int i = 0; i < kElemDofs; ++i) {
      res.f_int(dofs[i]) += o.f(i);
      if (opt.with_stiffness)
        for (int j = 0; j < kElemDofs; ++j) trip.emplace_back(dofs[i], dofs[j], o.K(i, j));
    }
  }
  if (opt.with_stiffness) {
    res.K.resize(mesh.num_dofs(), mesh.num_dofs());
    res.K.setFromTriplets(trip.begin(), trip.end());
  }
  return res;
}

}  // namespace

int assembly_threads(int requested) {
  if (requested > 0) return requested;
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw <= 0) hw = 1;
  if (const char* env = std::getenv("AXIFEP_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return std::min<int>(hw, static_cast<int>(v));
  }
  return hw;
}

Mat3 physical_defgrad(const Mat3& f_mixed, double r_ref, double r_cur) {
  Mat3 p = f_mixed;
  p.row(kTheta) *= r_cur;
  p.col(kTheta) /= r_ref;
  return p;
}

std::vector<GpRecord> make_gp_records(const MeshAxi& mesh) {
  std::vector<GpRecord> gps;
  gps.reserve(static_cast<std::size_t>(mesh.num_elems()) * kGpPerElem);
  const auto& rule = gauss_3x3();
  for (int e = 0; e < mesh.num_elems(); ++e) {
    const auto xe = element_coords(mesh, e);
    for (int g = 0; g < kGpPerElem; ++g) {
      GpRecord rec;
      rec.elem = e;
      rec.gp = g;
      rec.xi = rule[g].xi;
      rec.weight = rule[g].weight;
      const Q8Eval q = q8_shape(rec.xi);
      const Mat2 jac = parent_jacobian(xe, q);
      const double det = jac.determinant();
      if (!(det > 0.0)) {
        std::ostringstream os;
        os << "element " << e << " has a non-positive reference Jacobian at gauss point " << g;
        throw InvertedElementError(os.str(), e, g);
      }
      rec.dshape_ref = physical_gradients(jac, q);
      rec.shape = q.value;
      for (int a = 0; a < 8; ++a) rec.ref_pos += q.value[a] * xe[a];
      rec.dV0 = rec.ref_pos.x() * rec.weight * det;
      rec.committed.r = rec.ref_pos.x();
      rec.committed.z_cur = rec.ref_pos.y();
      rec.trial = rec.committed;
      gps.push_back(rec);
    }
  }
  return gps;
}

SpatialResponse spatial_response(const Mat3& b_trial, double z_prev, double J,
                                 const mcc::MatParams& params, bool with_tangent) {
  const Mat3 b = 0.5 * (b_trial + b_trial.transpose());
  const spectral::SymEig eig = spectral::sym_eig(b);
  if (!(eig.values.minCoeff() > 0.0))
    throw StateError("trial elastic left Cauchy-Green tensor is not positive definite");
  const Mat3 eps_tr = spectral::apply(eig, [](double v) { return 0.5 * std::log(v); });

  SpatialResponse s;
  s.rr = mcc::return_map_strain(eps_tr, z_prev, params);
  s.J_e = s.rr.state.J_e;
  s.J_p = J / s.J_e;
  s.tau = s.J_p * s.rr.state.zeta;
  s.a.setZero();
  if (!with_tangent) return s;

  const Tensor4 dlog = spectral::derivative(
      eig, [](double v) { return std::log(v); }, [](double v) { return 1.0 / v; });
  // d b = l b + b l^T
  Tensor4 B = Tensor4::Zero();
  for (int m = 0; m < 3; ++m)
    for (int n = 0; n < 3; ++n)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l)
          B(pair_index(m, n), pair_index(k, l)) =
              (m == k ? b(l, n) : 0.0) + (n == k ? b(m, l) : 0.0);
  Flat9 tr_de = Flat9::Zero();
  for (int i = 0; i < 3; ++i) tr_de += s.rr.tangent.dE_dEtr.row(pair_index(i, i)).transpose();
  const Tensor4 dzeta =
      (s.rr.tangent.D_alg - flatten(s.rr.state.zeta) * tr_de.transpose()) * (0.5 * dlog) * B;

  s.a = flatten(s.tau) * flatten(Mat3::Identity()).transpose() + s.J_p * dzeta;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int l = 0; l < 3; ++l) s.a(pair_index(i, j), pair_index(j, l)) -= s.tau(i, l);
  return s;
}

AssemblyResult assemble_ul(const MeshAxi& mesh, std::vector<GpRecord>& gps,
                           const Eigen::VectorXd& u_total, const Eigen::VectorXd& u_inc,
                           const mcc::MatParams& params, const AssemblyOptions& opt) {
  if (u_total.size() != mesh.num_dofs() || u_inc.size() != mesh.num_dofs())
    throw DomainError("assemble_ul: displacement vectors must have 2 dofs per node");
  return run_assembly(mesh, opt, [&](int e) {
    return element_ul(mesh, e, gps, u_total, u_inc, params, opt.with_stiffness);
  });
}

AssemblyResult assemble_tl(const MeshAxi& mesh, std::vector<GpRecord>& gps,
                           const Eigen::VectorXd& u_total, const mcc::MatParams& params,
                           const AssemblyOptions& opt) {
  if (u_total.size() != mesh.num_dofs())
    throw DomainError("assemble_tl: displacement vector must have 2 dofs per node");
  return run_assembly(mesh, opt, [&](int e) {
    return element_tl(mesh, e, gps, u_total, params, opt.with_stiffness);
  });
}

}  // namespace axifep::fem
