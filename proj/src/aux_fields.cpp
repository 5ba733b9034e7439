#include "gapstress/aux_fields.hpp"

#include <cmath>

#include "gapstress/dual.hpp"

namespace gapstress {

double bridge(double t) { return 0.5 * (t - 0.5) * (t - 0.5) - 0.125; }
double bridge_deriv(double t) { return t - 0.5; }

namespace {

void check_chart(const InclusionPairGeometry& g, const Eigen::VectorXd& x, double half_width) {
  if (x.size() != g.d) throw std::invalid_argument("aux field: point dimension mismatch");
  const double xp = g.d == 2 ? std::abs(x(0)) : std::hypot(x(0), x(1));
  if (xp > half_width) throw std::out_of_range("aux field: point outside chart region");
  const auto [lo, hi] = chart_bounds(g, std::min(xp, 2.0 * g.R));
  const double slack = 1e-10 * (1.0 + g.eps) + 1e-14 * std::abs(hi - lo);
  const double xd = x(g.d - 1);
  if (xd < lo - slack || xd > hi + slack)
    throw std::out_of_range("aux field: point outside the narrow region");
}

template <int N>
struct KeelDuals {
  Dual<N> ubar;     // scalar keel
  Dual<N> f;        // bridge of keel
  Dual<N> dslope[2];  // d delta / d x_a, a < N-1 (transverse slope of the gap)
};

// Builds the keel, bridge and gap-slope expressions at x via forward AD.
template <int N>
KeelDuals<N> keel_duals(const InclusionPairGeometry& g, const Eigen::VectorXd& x) {
  using D = Dual<N>;
  const double m = g.m;
  D coords[N];
  for (int i = 0; i < N; ++i) coords[i] = D::variable(i, x(i));
  const D xd = coords[N - 1];

  D rpow_m;  // |x'|^m
  if constexpr (N == 2) {
    rpow_m = abs_pow(coords[0], m);
  } else {
    const D r2 = sqr(coords[0]) + sqr(coords[1]);
    rpow_m = pow_nonneg(r2, 0.5 * m);
  }
  const D delta = g.eps + g.kappa * rpow_m;
  const D h2 = -0.5 * g.kappa * rpow_m;

  KeelDuals<N> out;
  out.ubar = (xd + 0.5 * g.eps - h2) / delta;
  out.f = 0.5 * sqr(out.ubar - 0.5) - 0.125;
  if constexpr (N == 2) {
    // delta'(x1) = kappa m sgn(x1) |x1|^{m-1}
    D s = abs_pow(coords[0], m - 1.0);
    if (x(0) < 0.0) s = -s;
    out.dslope[0] = g.kappa * m * s;
    out.dslope[1] = D(0.0);
  } else {
    const D r2 = sqr(coords[0]) + sqr(coords[1]);
    const D rad = pow_nonneg(r2, 0.5 * m - 1.0);
    out.dslope[0] = g.kappa * m * coords[0] * rad;
    out.dslope[1] = g.kappa * m * coords[1] * rad;
  }
  return out;
}

template <int N>
void mirror_duals(KeelDuals<N>& k) {
  // keel of the lower family: 1 - ubar evaluated on the mirrored geometry is
  // handled by reflecting the point instead; see field assembly below.
  k.ubar = 1.0 - k.ubar;
}

template <int N>
ScalarEval pack_scalar(const Dual<N>& d) {
  ScalarEval e;
  e.value = d.v;
  e.grad = d.g;
  e.hess = d.h;
  return e;
}

// Assembles the components of u_1^alpha as Dual expressions.
template <int N>
std::array<Dual<N>, N> field_components(const LameParams& p, const InclusionPairGeometry& g,
                                        int alpha, const Eigen::VectorXd& x) {
  using D = Dual<N>;
  const KeelDuals<N> k = keel_duals<N>(g, x);
  const double ca = (p.lambda + p.mu) / (p.lambda + 2.0 * p.mu);
  const double cb = (p.lambda + p.mu) / p.mu;
  D coords[N];
  for (int i = 0; i < N; ++i) coords[i] = D::variable(i, x(i));

  std::array<D, N> u;
  if constexpr (N == 2) {
    switch (alpha) {
      case 1:
        u = {k.ubar, ca * k.f * k.dslope[0]};
        break;
      case 2:
        u = {cb * k.f * k.dslope[0], k.ubar};
        break;
      case 3:
        u = {-coords[1] * k.ubar, coords[0] * k.ubar};
        break;
      default:
        throw std::invalid_argument("aux field: invalid alpha for d=2");
    }
  } else {
    switch (alpha) {
      case 1:
        u = {k.ubar, D(0.0), ca * k.f * k.dslope[0]};
        break;
      case 2:
        u = {D(0.0), k.ubar, ca * k.f * k.dslope[1]};
        break;
      case 3:
        u = {cb * k.f * k.dslope[0], cb * k.f * k.dslope[1], k.ubar};
        break;
      case 4:
        u = {-coords[1] * k.ubar, coords[0] * k.ubar, D(0.0)};
        break;
      case 5:
        u = {-coords[2] * k.ubar, D(0.0), coords[0] * k.ubar};
        break;
      case 6:
        u = {D(0.0), -coords[2] * k.ubar, coords[1] * k.ubar};
        break;
      default:
        throw std::invalid_argument("aux field: invalid alpha for d=3");
    }
  }
  return u;
}

// Sign conjugation making the reflected field solve the mirrored problem:
// u_2^alpha(x) = M_alpha u_1^alpha(S x), S = reflection of the last coordinate.
Eigen::VectorXd mirror_signs(int d, int alpha) {
  Eigen::VectorXd s = Eigen::VectorXd::Ones(d);
  s(d - 1) = -1.0;
  bool flip = (d == 2) ? (alpha != 1) : (alpha == 3 || alpha == 5 || alpha == 6);
  if (flip) s = -s;
  return s;
}

template <int N>
FieldEval eval_impl(const LameParams& p, const InclusionPairGeometry& g, int alpha,
                    bool mirror, const Eigen::VectorXd& x) {
  Eigen::VectorXd xe = x;
  if (mirror) xe(N - 1) = -xe(N - 1);
  const auto comps = field_components<N>(p, g, alpha, xe);

  FieldEval e;
  e.value = Eigen::VectorXd::Zero(N);
  e.grad = Eigen::MatrixXd::Zero(N, N);
  e.hess.assign(N, Eigen::MatrixXd::Zero(N, N));
  for (int i = 0; i < N; ++i) {
    e.value(i) = comps[i].v;
    e.grad.row(i) = comps[i].g.transpose();
    e.hess[i] = comps[i].h;
  }
  if (mirror) {
    const Eigen::VectorXd ms = mirror_signs(N, alpha);
    Eigen::VectorXd sx = Eigen::VectorXd::Ones(N);
    sx(N - 1) = -1.0;
    for (int i = 0; i < N; ++i) {
      e.value(i) *= ms(i);
      for (int j = 0; j < N; ++j) e.grad(i, j) *= ms(i) * sx(j);
      for (int a = 0; a < N; ++a)
        for (int b = 0; b < N; ++b) e.hess[i](a, b) *= ms(i) * sx(a) * sx(b);
    }
  }
  return e;
}

}  // namespace

ScalarKeel::ScalarKeel(const InclusionPairGeometry& g, bool mirror) : g_(g), mirror_(mirror) {
  g_.validate();
}

ScalarEval ScalarKeel::eval(const Eigen::VectorXd& x) const {
  check_chart(g_, x, 2.0 * g_.R);
  ScalarEval e;
  if (g_.d == 2) {
    auto k = keel_duals<2>(g_, x);
    if (mirror_) mirror_duals(k);
    e = pack_scalar(k.ubar);
  } else {
    auto k = keel_duals<3>(g_, x);
    if (mirror_) mirror_duals(k);
    e = pack_scalar(k.ubar);
  }
  return e;
}

VectorAuxField::VectorAuxField(const LameParams& p, const InclusionPairGeometry& g, int alpha,
                               bool mirror)
    : p_(p), g_(g), alpha_(alpha), mirror_(mirror) {
  if (p_.d != g_.d) throw std::invalid_argument("VectorAuxField: dimension mismatch");
  if (alpha_ < 1 || alpha_ > rigid_count(g_.d))
    throw std::invalid_argument("VectorAuxField: invalid alpha");
}

FieldEval VectorAuxField::eval(const Eigen::VectorXd& x) const {
  check_chart(g_, x, 2.0 * g_.R);
  return g_.d == 2 ? eval_impl<2>(p_, g_, alpha_, mirror_, x)
                   : eval_impl<3>(p_, g_, alpha_, mirror_, x);
}

Eigen::VectorXd VectorAuxField::lame_residual(const Eigen::VectorXd& x) const {
  check_chart(g_, x, g_.R);
  const FieldEval e = g_.d == 2 ? eval_impl<2>(p_, g_, alpha_, mirror_, x)
                                : eval_impl<3>(p_, g_, alpha_, mirror_, x);
  return lame_operator(p_, e);
}

Eigen::VectorXd lame_operator(const LameParams& p, const FieldEval& f) {
  const int d = static_cast<int>(f.value.size());
  Eigen::VectorXd r = Eigen::VectorXd::Zero(d);
  for (int i = 0; i < d; ++i) {
    double lap = 0.0, graddiv = 0.0;
    for (int j = 0; j < d; ++j) {
      lap += f.hess[i](j, j);
      graddiv += f.hess[j](i, j);  // d_i d_j u^j
    }
    r(i) = p.mu * lap + (p.lambda + p.mu) * graddiv;
  }
  return r;
}

}  // namespace gapstress
