#include "axifep/kinematics.hpp"

#include <cmath>
#include <sstream>

#include "axifep/spectral.hpp"

namespace axifep::kin {

namespace {

void check_orientation(const Mat3& comp, const char* where) {
  const double det = comp.determinant();
  if (!(det > 0.0) || !std::isfinite(det)) {
    std::ostringstream os;
    os << where << ": non-positive determinant " << det;
    throw InvertedElementError(os.str());
  }
}

}  // namespace

double DefGrad::jacobian() const { return comp.determinant() * r_cur / r_ref; }

DefGrad defgrad_total(const Mat3& u_partials, const cylgeo::Shifter& s) {
  DefGrad f{s.mat() * (Mat3::Identity() + u_partials), s.r_ref(), s.r_cur()};
  check_orientation(f.comp, "defgrad_total");
  return f;
}

DefGrad defgrad_incremental(const Mat3& u_inc_partials, const cylgeo::Shifter& s_inc,
                            const DefGrad& f_prev) {
  const Mat3 x_inc = s_inc.mat() * (Mat3::Identity() + u_inc_partials);
  check_orientation(x_inc, "defgrad_incremental");
  return DefGrad{x_inc * f_prev.comp, f_prev.r_ref, s_inc.r_cur()};
}

Mat3 defgrad_inverse_spatial(const Mat3& u_partials, const cylgeo::Shifter& s) {
  Mat3 inv = s.inverse() * (Mat3::Identity() - u_partials);
  check_orientation(inv, "defgrad_inverse_spatial");
  return inv;
}

Mat3 transpose(const DefGrad& f) {
  const auto g_ref = cylgeo::metric(f.r_ref);
  const auto g_cur = cylgeo::metric(f.r_cur);
  return g_ref.contra * f.comp.transpose() * g_cur.cov;
}

Mat3 transpose_back(const Mat3& ft, double r_ref, double r_cur) {
  const auto g_ref = cylgeo::metric(r_ref);
  const auto g_cur = cylgeo::metric(r_cur);
  return g_cur.contra * ft.transpose() * g_ref.cov;
}

Mat3 left_cauchy_green(const DefGrad& f) { return f.comp * transpose(f); }

Mat3 right_cauchy_green(const DefGrad& f) { return transpose(f) * f.comp; }

ElasticState log_strain(const Mat3& b_mixed, double r_cur) {
  const Mat3 sym = spectral::symmetrise_mixed(b_mixed, r_cur);
  const spectral::SymEig eig = spectral::sym_eig(sym);
  if (!(eig.values.minCoeff() > 0.0)) {
    std::ostringstream os;
    os << "log_strain: non-positive eigenvalue " << eig.values.minCoeff()
       << " of the left Cauchy-Green tensor";
    throw StateError(os.str());
  }
  const Mat3 eps_sym = spectral::apply(eig, [](double x) { return 0.5 * std::log(x); });
  ElasticState es;
  es.b_e = b_mixed;
  es.eps_e = spectral::unsymmetrise_mixed(eps_sym, r_cur);
  es.J_e = std::exp(es.eps_e.trace());
  return es;
}

Mat3 trial_elastic_b(const DefGrad& f_inc, const Mat3& b_prev) {
  return f_inc.comp * b_prev * transpose(f_inc);
}

JacobianSplit jacobian_split(const DefGrad& f, const ElasticState& es) {
  const double J = f.jacobian();
  const double J_e = std::exp(es.eps_e.trace());
  return {J, J_e, J / J_e};
}

double trace_via_metric(const Mat3& t_mixed, double radius) {
  const auto g = cylgeo::metric(radius);
  const Mat3 contra = t_mixed * g.contra;  // T^{ab} = T^a_c g^{cb}
  return (contra.array() * g.cov.array()).sum();
}

}  // namespace axifep::kin
