// Ambient 3-metric providers with analytic derivatives: exact spatial
// Schwarzschild, conformally flat metrics with harmonic conformal factor,
// generic tensor perturbations, and linear homotopies between providers.
// Every provider supplies the metric and its coordinate derivatives to third
// order; the shared jet builder derives Christoffels, Riemann, Ricci,
// covariant-derivative-of-Ricci and scalar curvature from them analytically.
#pragma once

#include "willmore/common.hpp"

#include <memory>
#include <vector>

namespace willmore {

using Tens5 = std::array<Tens4, 3>;  // T[e][c][d](a,b)

struct SchwarzschildParams {
  double m = 1.0;  // mass, length units, > 0 (m = 0 allowed as the flat limit)
};

// Raw analytic data a provider must supply at a point.
struct MetricDerivs {
  Mat3 g;      // g_ab
  Tens3 dg;    // dg[c](a,b)      = d_c g_ab
  Tens4 d2g;   // d2g[c][d](a,b)  = d_c d_d g_ab
  Tens5 d3g;   // d3g[e][c][d](a,b) = d_e d_c d_d g_ab
};

// Pointwise curvature bundle.
struct MetricJet {
  Mat3 g;
  Mat3 g_inv;
  Tens3 dg;                              // kept for surface-side chain rules
  Tens4 d2g;
  Tens3 christoffel;                     // christoffel[k](a,b) = Gamma^k_ab
  Tens4 dchristoffel;                    // dchristoffel[c][k](a,b) = d_c Gamma^k_ab
  std::array<std::array<Mat3, 3>, 3> riemann;  // riemann[i][j](k,l) = R_ijkl (lowered)
  Mat3 ricci;
  Tens3 nabla_ricci;                     // nabla_ricci[c](a,b) = (nabla_c Ric)_ab
  double scalar = 0.0;
};

namespace detail {

inline Mat3 sym(const Mat3& m) { return 0.5 * (m + m.transpose()); }

}  // namespace detail

// Derive the full jet from raw metric derivatives.
inline MetricJet build_jet(const MetricDerivs& raw) {
  MetricJet jet;
  jet.g = raw.g;
  jet.dg = raw.dg;
  jet.d2g = raw.d2g;
  Eigen::LLT<Mat3> llt(raw.g);
  if (llt.info() != Eigen::Success)
    throw DomainError("metric is not positive definite at the sample point");
  jet.g_inv = raw.g.inverse();
  const Mat3& gi = jet.g_inv;

  // d(g^-1) and d^2(g^-1)
  Tens3 dgi;
  Tens4 d2gi;
  for (int c = 0; c < 3; ++c) dgi[c] = -gi * raw.dg[c] * gi;
  for (int c = 0; c < 3; ++c)
    for (int d = 0; d < 3; ++d)
      d2gi[c][d] = -(dgi[d] * raw.dg[c] * gi + gi * raw.d2g[c][d] * gi + gi * raw.dg[c] * dgi[d]);

  // C[l](a,b) = d_a g_lb + d_b g_la - d_l g_ab and its derivatives
  auto Cof = [&](const Tens3& D, int l, int a, int b) {
    return D[a](l, b) + D[b](l, a) - D[l](a, b);
  };
  // Gamma^k_ab
  for (int k = 0; k < 3; ++k) {
    jet.christoffel[k].setZero();
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        double acc = 0.0;
        for (int l = 0; l < 3; ++l) acc += gi(k, l) * Cof(raw.dg, l, a, b);
        jet.christoffel[k](a, b) = 0.5 * acc;
      }
  }
  // d_c Gamma^k_ab
  for (int c = 0; c < 3; ++c)
    for (int k = 0; k < 3; ++k) {
      jet.dchristoffel[c][k].setZero();
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
          double acc = 0.0;
          for (int l = 0; l < 3; ++l) {
            double dC = raw.d2g[c][a](l, b) + raw.d2g[c][b](l, a) - raw.d2g[c][l](a, b);
            acc += dgi[c](k, l) * Cof(raw.dg, l, a, b) + gi(k, l) * dC;
          }
          jet.dchristoffel[c][k](a, b) = 0.5 * acc;
        }
    }
  // d_c d_d Gamma^k_ab
  Tens5 d2Gamma;
  for (int c = 0; c < 3; ++c)
    for (int d = 0; d < 3; ++d)
      for (int k = 0; k < 3; ++k) {
        d2Gamma[c][d][k].setZero();
        for (int a = 0; a < 3; ++a)
          for (int b = 0; b < 3; ++b) {
            double acc = 0.0;
            for (int l = 0; l < 3; ++l) {
              double C0 = Cof(raw.dg, l, a, b);
              double dC_d = raw.d2g[d][a](l, b) + raw.d2g[d][b](l, a) - raw.d2g[d][l](a, b);
              double dC_c = raw.d2g[c][a](l, b) + raw.d2g[c][b](l, a) - raw.d2g[c][l](a, b);
              double d2C = raw.d3g[d][c][a](l, b) + raw.d3g[d][c][b](l, a) - raw.d3g[d][c][l](a, b);
              acc += d2gi[c][d](k, l) * C0 + dgi[c](k, l) * dC_d + dgi[d](k, l) * dC_c +
                     gi(k, l) * d2C;
            }
            d2Gamma[c][d][k](a, b) = 0.5 * acc;
          }
      }

  // K^m_ijk = d_i Gamma^m_jk - d_j Gamma^m_ik + Gamma^l_jk Gamma^m_il - Gamma^l_ik Gamma^m_jl
  auto K = [&](int m, int i, int j, int k) {
    double acc = jet.dchristoffel[i][m](j, k) - jet.dchristoffel[j][m](i, k);
    for (int l = 0; l < 3; ++l)
      acc += jet.christoffel[l](j, k) * jet.christoffel[m](i, l) -
             jet.christoffel[l](i, k) * jet.christoffel[m](j, l);
    return acc;
  };
  auto dK = [&](int c, int m, int i, int j, int k) {
    double acc = d2Gamma[c][i][m](j, k) - d2Gamma[c][j][m](i, k);
    for (int l = 0; l < 3; ++l)
      acc += jet.dchristoffel[c][l](j, k) * jet.christoffel[m](i, l) +
             jet.christoffel[l](j, k) * jet.dchristoffel[c][m](i, l) -
             jet.dchristoffel[c][l](i, k) * jet.christoffel[m](j, l) -
             jet.christoffel[l](i, k) * jet.dchristoffel[c][m](j, l);
    return acc;
  };

  // Lowered Riemann: R_ijkl = g_lm K^m_ijk  (curvature-operator convention with
  // R_ijkl antisymmetric in (i,j) and (k,l), Ric_il = g^jk R_ijkl).
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      jet.riemann[i][j].setZero();
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) {
          double acc = 0.0;
          for (int m = 0; m < 3; ++m) acc += raw.g(l, m) * K(m, i, j, k);
          jet.riemann[i][j](k, l) = acc;
        }
    }

  // Ricci and its coordinate derivative via the standard contraction
  Mat3 dric[3];
  jet.ricci.setZero();
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k) {
      double acc = 0.0;
      for (int m = 0; m < 3; ++m) acc += K(m, m, j, k);
      jet.ricci(j, k) = acc;
    }
  jet.ricci = detail::sym(jet.ricci);
  for (int c = 0; c < 3; ++c) {
    dric[c].setZero();
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) {
        double acc = 0.0;
        for (int m = 0; m < 3; ++m) acc += dK(c, m, m, j, k);
        dric[c](j, k) = acc;
      }
    dric[c] = detail::sym(dric[c]);
  }
  // nabla_c Ric_ab = d_c Ric_ab - Gamma^d_ca Ric_db - Gamma^d_cb Ric_ad
  for (int c = 0; c < 3; ++c) {
    jet.nabla_ricci[c].setZero();
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        double acc = dric[c](a, b);
        for (int d = 0; d < 3; ++d)
          acc -= jet.christoffel[d](c, a) * jet.ricci(d, b) +
                 jet.christoffel[d](c, b) * jet.ricci(a, d);
        jet.nabla_ricci[c](a, b) = acc;
      }
  }
  jet.scalar = (gi * jet.ricci).trace();
  return jet;
}

// 3-D identity: Riemann reconstructed from Ricci and scalar curvature,
//   R_ijkl = Ric_il g_jk - Ric_ik g_jl - Ric_jl g_ik + Ric_jk g_il
//            - Sc/2 (g_il g_jk - g_ik g_jl).
inline std::array<std::array<Mat3, 3>, 3> riemann_from_ricci(const MetricJet& jet) {
  std::array<std::array<Mat3, 3>, 3> out;
  const Mat3& R = jet.ricci;
  const Mat3& g = jet.g;
  const double sc = jet.scalar;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l)
          out[i][j](k, l) = R(i, l) * g(j, k) - R(i, k) * g(j, l) - R(j, l) * g(i, k) +
                            R(j, k) * g(i, l) -
                            0.5 * sc * (g(i, l) * g(j, k) - g(i, k) * g(j, l));
  return out;
}

// ---------------------------------------------------------------------------
// Scalar building blocks with derivatives to third order
// ---------------------------------------------------------------------------

struct ScalarJet3 {
  double v = 0.0;
  Vec3 d1 = Vec3::Zero();
  Mat3 d2 = Mat3::Zero();
  Tens3 d3{Mat3::Zero(), Mat3::Zero(), Mat3::Zero()};  // d3[c](d,e), fully symmetric

  ScalarJet3 operator+(const ScalarJet3& o) const {
    ScalarJet3 r = *this;
    r.v += o.v;
    r.d1 += o.d1;
    r.d2 += o.d2;
    for (int c = 0; c < 3; ++c) r.d3[c] += o.d3[c];
    return r;
  }
  ScalarJet3 operator*(double s) const {
    ScalarJet3 r = *this;
    r.v *= s;
    r.d1 *= s;
    r.d2 *= s;
    for (int c = 0; c < 3; ++c) r.d3[c] *= s;
    return r;
  }
  // Leibniz product to third order.
  ScalarJet3 operator*(const ScalarJet3& o) const {
    ScalarJet3 r;
    r.v = v * o.v;
    r.d1 = d1 * o.v + v * o.d1;
    r.d2 = d2 * o.v + d1 * o.d1.transpose() + o.d1 * d1.transpose() + v * o.d2;
    for (int c = 0; c < 3; ++c)
      for (int d = 0; d < 3; ++d)
        for (int e = 0; e < 3; ++e)
          r.d3[c](d, e) = d3[c](d, e) * o.v + d2(c, d) * o.d1[e] + d2(c, e) * o.d1[d] +
                          d2(d, e) * o.d1[c] + d1[c] * o.d2(d, e) + d1[d] * o.d2(c, e) +
                          d1[e] * o.d2(c, d) + v * o.d3[c](d, e);
    return r;
  }
};

// Jet of r^p (p any real, r = |x| > 0).
inline ScalarJet3 radial_power_jet(double p, const Vec3& x) {
  const double r2 = x.squaredNorm();
  if (r2 == 0.0) throw DomainError("radial function evaluated at the origin");
  const double r = std::sqrt(r2);
  const double rp = std::pow(r, p);
  ScalarJet3 jet;
  jet.v = rp;
  const double c1 = p * std::pow(r, p - 2.0);
  const double c2 = p * (p - 2.0) * std::pow(r, p - 4.0);
  const double c3 = p * (p - 2.0) * (p - 4.0) * std::pow(r, p - 6.0);
  jet.d1 = c1 * x;
  jet.d2 = c1 * Mat3::Identity() + c2 * x * x.transpose();
  for (int c = 0; c < 3; ++c)
    for (int d = 0; d < 3; ++d)
      for (int e = 0; e < 3; ++e) {
        double kron = c2 * ((c == d ? x[e] : 0.0) + (c == e ? x[d] : 0.0) + (d == e ? x[c] : 0.0));
        jet.d3[c](d, e) = kron + c3 * x[c] * x[d] * x[e];
      }
  return jet;
}

// Jet of the Schwarzschild conformal factor phi = 1 + m/(2r).
inline ScalarJet3 conformal_factor_jet(double m, const Vec3& x) {
  ScalarJet3 jet = radial_power_jet(-1.0, x) * (0.5 * m);
  jet.v += 1.0;
  return jet;
}

// phi(m, x) = 1 + m/(2|x|), with Euclidean gradient -(m/2 r^2) rho.
inline double conformal_factor(double m, const Vec3& x) { return conformal_factor_jet(m, x).v; }
inline Vec3 conformal_factor_grad(double m, const Vec3& x) { return conformal_factor_jet(m, x).d1; }

// ---------------------------------------------------------------------------
// Trivariate polynomials and real solid harmonics (for harmonic multipoles)
// ---------------------------------------------------------------------------

struct Poly3 {
  // sum of coef * x^e0 y^e1 z^e2
  std::vector<std::array<int, 3>> expo;
  std::vector<double> coef;

  static Poly3 constant(double c) {
    Poly3 p;
    if (c != 0.0) {
      p.expo.push_back({0, 0, 0});
      p.coef.push_back(c);
    }
    return p;
  }
  static Poly3 axis(int a) {
    Poly3 p;
    std::array<int, 3> e{0, 0, 0};
    e[a] = 1;
    p.expo.push_back(e);
    p.coef.push_back(1.0);
    return p;
  }
  Poly3 operator*(double s) const {
    Poly3 r = *this;
    for (double& c : r.coef) c *= s;
    return r;
  }
  Poly3 operator+(const Poly3& o) const {
    Poly3 r = *this;
    for (size_t t = 0; t < o.coef.size(); ++t) r.add_term(o.expo[t], o.coef[t]);
    return r;
  }
  Poly3 operator-(const Poly3& o) const { return *this + o * (-1.0); }
  Poly3 operator*(const Poly3& o) const {
    Poly3 r;
    for (size_t s = 0; s < coef.size(); ++s)
      for (size_t t = 0; t < o.coef.size(); ++t)
        r.add_term({expo[s][0] + o.expo[t][0], expo[s][1] + o.expo[t][1], expo[s][2] + o.expo[t][2]},
                   coef[s] * o.coef[t]);
    return r;
  }
  Poly3 diff(int a) const {
    Poly3 r;
    for (size_t t = 0; t < coef.size(); ++t)
      if (expo[t][a] > 0) {
        std::array<int, 3> e = expo[t];
        double c = coef[t] * e[a];
        e[a] -= 1;
        r.add_term(e, c);
      }
    return r;
  }
  double eval(const Vec3& x) const {
    double acc = 0.0;
    for (size_t t = 0; t < coef.size(); ++t)
      acc += coef[t] * std::pow(x[0], expo[t][0]) * std::pow(x[1], expo[t][1]) *
             std::pow(x[2], expo[t][2]);
    return acc;
  }

 private:
  void add_term(const std::array<int, 3>& e, double c) {
    if (c == 0.0) return;
    for (size_t t = 0; t < coef.size(); ++t)
      if (expo[t] == e) {
        coef[t] += c;
        return;
      }
    expo.push_back(e);
    coef.push_back(c);
  }
};

// Homogeneous real solid harmonic polynomial of degree l and order m, scaled
// so that on the unit sphere it equals the orthonormal basis function Y_{l,m}
// of sphere_basis.hpp (no Condon-Shortley phase).
inline Poly3 solid_harmonic(int l, int m) {
  if (l < 0 || std::abs(m) > l) throw DomainError("solid_harmonic: invalid (l, m)");
  const int ma = std::abs(m);
  // sectoral trig pair: c_m + i s_m = (x + i y)^m
  Poly3 cm = Poly3::constant(1.0), sm;
  const Poly3 X = Poly3::axis(0), Y = Poly3::axis(1), Z = Poly3::axis(2);
  for (int k = 1; k <= ma; ++k) {
    Poly3 c2 = X * cm - Y * sm;
    Poly3 s2 = X * sm + Y * cm;
    cm = c2;
    sm = s2;
  }
  // associated part B_{l,m}: B_{m,m} = (2m-1)!!, standard three-term recurrence
  const Poly3 R2 = X * X + Y * Y + Z * Z;
  double dfact = 1.0;
  for (int k = 3; k <= 2 * ma - 1; k += 2) dfact *= k;
  Poly3 Bprev2 = Poly3::constant(dfact);  // B_{m,m}
  Poly3 B = Bprev2;
  if (l > ma) B = Z * Bprev2 * (2.0 * ma + 1.0);  // B_{m+1,m}
  Poly3 Bprev1 = B;
  for (int ll = ma + 2; ll <= l; ++ll) {
    Poly3 Bn = (Z * Bprev1 * (2.0 * ll - 1.0) - R2 * Bprev2 * double(ll + ma - 1)) *
               (1.0 / double(ll - ma));
    Bprev2 = Bprev1;
    Bprev1 = Bn;
  }
  if (l == ma) Bprev1 = Bprev2;
  // normalization sqrt((2l+1)/(4 pi) (l-|m|)!/(l+|m|)!), sqrt(2) for m != 0
  double ratio = 1.0;
  for (int k = l - ma + 1; k <= l + ma; ++k) ratio /= k;
  double norm = std::sqrt((2.0 * l + 1.0) / (4.0 * PI) * ratio);
  if (m != 0) norm *= std::sqrt(2.0);
  Poly3 ang = (m >= 0) ? cm : sm;
  return Bprev1 * ang * norm;
}

inline ScalarJet3 poly_jet(const Poly3& p, const Vec3& x) {
  ScalarJet3 jet;
  jet.v = p.eval(x);
  std::array<Poly3, 3> d1;
  for (int c = 0; c < 3; ++c) {
    d1[c] = p.diff(c);
    jet.d1[c] = d1[c].eval(x);
  }
  std::array<std::array<Poly3, 3>, 3> d2;
  for (int c = 0; c < 3; ++c)
    for (int d = c; d < 3; ++d) {
      d2[c][d] = d1[c].diff(d);
      jet.d2(c, d) = jet.d2(d, c) = d2[c][d].eval(x);
    }
  for (int c = 0; c < 3; ++c)
    for (int d = c; d < 3; ++d)
      for (int e = d; e < 3; ++e) {
        double v = d2[c][d].diff(e).eval(x);
        // fill all permutations
        int idx[3] = {c, d, e};
        std::sort(idx, idx + 3);
        do {
          jet.d3[idx[0]](idx[1], idx[2]) = v;
        } while (std::next_permutation(idx, idx + 3));
      }
  return jet;
}

// ---------------------------------------------------------------------------
// Providers
// ---------------------------------------------------------------------------

class MetricProvider {
 public:
  virtual ~MetricProvider() = default;
  virtual MetricDerivs raw(const Vec3& x) const = 0;
  MetricJet jet(const Vec3& x) const { return build_jet(raw(x)); }
  // Smallest |x| at which the provider is defined / trusted.
  virtual double exclusion_radius() const { return 0.0; }
};

namespace detail {

// g = psi^4 delta from a conformal-factor jet.
inline MetricDerivs conformal_metric(const ScalarJet3& psi) {
  if (psi.v <= 0.0) throw DomainError("conformal factor is non-positive");
  // F = psi^4 and derivatives
  const double p = psi.v;
  const double F = p * p * p * p;
  Vec3 F1 = 4.0 * p * p * p * psi.d1;
  Mat3 F2 = 12.0 * p * p * psi.d1 * psi.d1.transpose() + 4.0 * p * p * p * psi.d2;
  Tens3 F3;
  for (int c = 0; c < 3; ++c)
    for (int d = 0; d < 3; ++d)
      for (int e = 0; e < 3; ++e)
        F3[c](d, e) = 24.0 * p * psi.d1[c] * psi.d1[d] * psi.d1[e] +
                      12.0 * p * p *
                          (psi.d2(c, d) * psi.d1[e] + psi.d2(c, e) * psi.d1[d] +
                           psi.d2(d, e) * psi.d1[c]) +
                      4.0 * p * p * p * psi.d3[c](d, e);
  MetricDerivs out;
  out.g = F * Mat3::Identity();
  for (int c = 0; c < 3; ++c) out.dg[c] = F1[c] * Mat3::Identity();
  for (int c = 0; c < 3; ++c)
    for (int d = 0; d < 3; ++d) out.d2g[c][d] = F2(c, d) * Mat3::Identity();
  for (int e = 0; e < 3; ++e)
    for (int c = 0; c < 3; ++c)
      for (int d = 0; d < 3; ++d) out.d3g[e][c][d] = F3[e](c, d) * Mat3::Identity();
  return out;
}

}  // namespace detail

class FlatProvider : public MetricProvider {
 public:
  MetricDerivs raw(const Vec3&) const override {
    MetricDerivs out;
    out.g = Mat3::Identity();
    for (int c = 0; c < 3; ++c) out.dg[c].setZero();
    for (int c = 0; c < 3; ++c)
      for (int d = 0; d < 3; ++d) out.d2g[c][d].setZero();
    for (int e = 0; e < 3; ++e)
      for (int c = 0; c < 3; ++c)
        for (int d = 0; d < 3; ++d) out.d3g[e][c][d].setZero();
    return out;
  }
};

class SchwarzschildProvider : public MetricProvider {
 public:
  explicit SchwarzschildProvider(double m) : m_(m) {
    if (m < 0.0) throw DomainError("Schwarzschild mass must be non-negative");
  }
  MetricDerivs raw(const Vec3& x) const override {
    return detail::conformal_metric(conformal_factor_jet(m_, x));
  }
  double exclusion_radius() const override { return 0.5 * m_; }
  double mass() const { return m_; }

 private:
  double m_;
};

struct Multipole {
  int l = 2;
  int order = 0;      // -l..l, real convention (>=0 cos-type, <0 sin-type)
  double coeff = 1.0;
};

// psi = phi + eta * sum_k c_k Y_{l_k, m_k}(direction) r^{-(l_k+1)}; psi is
// Euclidean-harmonic, so the scalar curvature of psi^4 delta vanishes exactly.
class ConformalHarmonicProvider : public MetricProvider {
 public:
  ConformalHarmonicProvider(double m, double eta, std::vector<Multipole> multipoles)
      : m_(m), eta_(eta), multipoles_(std::move(multipoles)) {
    if (eta < 0.0) throw DomainError("eta must be non-negative");
    for (const auto& mp : multipoles_) {
      if (mp.l < 1) throw DomainError("multipole degree must be >= 1");
      polys_.push_back(solid_harmonic(mp.l, mp.order));
    }
  }
  MetricDerivs raw(const Vec3& x) const override {
    return detail::conformal_metric(psi_jet(x));
  }
  ScalarJet3 psi_jet(const Vec3& x) const {
    ScalarJet3 psi = conformal_factor_jet(m_, x);
    for (size_t k = 0; k < multipoles_.size(); ++k) {
      const int l = multipoles_[k].l;
      // Y_lm(omega) r^{-(l+1)} = S_lm(x) r^{-(2l+1)}
      ScalarJet3 term = poly_jet(polys_[k], x) * radial_power_jet(-(2.0 * l + 1.0), x);
      psi = psi + term * (eta_ * multipoles_[k].coeff);
    }
    return psi;
  }
  double exclusion_radius() const override { return 0.5 * m_; }
  double mass() const { return m_; }
  double eta() const { return eta_; }

 private:
  double m_, eta_;
  std::vector<Multipole> multipoles_;
  std::vector<Poly3> polys_;
};

// g = g^S + eta * M * r^{-p} with a constant symmetric amplitude matrix M.
class TensorPerturbProvider : public MetricProvider {
 public:
  TensorPerturbProvider(double m, double eta, const Mat3& amplitude, double power = 2.0)
      : schw_(m), eta_(eta), amp_(detail::sym(amplitude)), power_(power) {}
  MetricDerivs raw(const Vec3& x) const override {
    MetricDerivs out = schw_.raw(x);
    ScalarJet3 f = radial_power_jet(-power_, x) * eta_;
    out.g += f.v * amp_;
    for (int c = 0; c < 3; ++c) out.dg[c] += f.d1[c] * amp_;
    for (int c = 0; c < 3; ++c)
      for (int d = 0; d < 3; ++d) out.d2g[c][d] += f.d2(c, d) * amp_;
    for (int e = 0; e < 3; ++e)
      for (int c = 0; c < 3; ++c)
        for (int d = 0; d < 3; ++d) out.d3g[e][c][d] += f.d3[e](c, d) * amp_;
    return out;
  }
  double exclusion_radius() const override { return schw_.exclusion_radius(); }

 private:
  SchwarzschildProvider schw_;
  double eta_;
  Mat3 amp_;
  double power_;
};

struct HomotopyParam {
  double t = 0.0;  // 0 = first metric, 1 = second
};

// g_t = (1 - t) a + t b, with derived quantities recomputed from the
// interpolated metric derivatives (not interpolated themselves).
class HomotopyProvider : public MetricProvider {
 public:
  HomotopyProvider(std::shared_ptr<const MetricProvider> a, std::shared_ptr<const MetricProvider> b,
                   HomotopyParam t)
      : a_(std::move(a)), b_(std::move(b)), t_(t.t) {
    if (t_ < 0.0 || t_ > 1.0) throw DomainError("homotopy parameter must be in [0,1]");
  }
  MetricDerivs raw(const Vec3& x) const override {
    MetricDerivs A = a_->raw(x);
    if (t_ == 0.0) return A;
    MetricDerivs B = b_->raw(x);
    if (t_ == 1.0) return B;
    MetricDerivs out;
    const double s = 1.0 - t_;
    out.g = s * A.g + t_ * B.g;
    for (int c = 0; c < 3; ++c) out.dg[c] = s * A.dg[c] + t_ * B.dg[c];
    for (int c = 0; c < 3; ++c)
      for (int d = 0; d < 3; ++d) out.d2g[c][d] = s * A.d2g[c][d] + t_ * B.d2g[c][d];
    for (int e = 0; e < 3; ++e)
      for (int c = 0; c < 3; ++c)
        for (int d = 0; d < 3; ++d) out.d3g[e][c][d] = s * A.d3g[e][c][d] + t_ * B.d3g[e][c][d];
    return out;
  }
  double exclusion_radius() const override {
    return std::max(a_->exclusion_radius(), b_->exclusion_radius());
  }

 private:
  std::shared_ptr<const MetricProvider> a_, b_;
  double t_;
};

// ---------------------------------------------------------------------------
// Decay-parameter estimator
// ---------------------------------------------------------------------------

struct EtaReport {
  double sup_g = 0.0;        // sup r^2 |g - g^S|
  double sup_conn = 0.0;     // sup r^3 |Gamma - Gamma^S|
  double sup_ric = 0.0;      // sup r^4 |Ric - Ric^S|
  double sup_dric = 0.0;     // sup r^5 |nabla Ric - nabla^S Ric^S|
  double max = 0.0;
};

// Weighted sup-norm deviations from exact Schwarzschild, componentwise max in
// the Cartesian chart, sampled on the given radii x directions.
inline EtaReport measure_eta(const MetricProvider& provider, double m,
                             const std::vector<double>& radii, const std::vector<Vec3>& dirs) {
  SchwarzschildProvider schw(m);
  EtaReport rep;
  for (double r : radii) {
    if (r <= 0.0) throw DomainError("measure_eta: radii must be positive");
    for (const Vec3& d : dirs) {
      Vec3 x = r * d.normalized();
      MetricJet a = provider.jet(x);
      MetricJet b = schw.jet(x);
      double dg = (a.g - b.g).cwiseAbs().maxCoeff();
      double dconn = 0.0, dric, ddric = 0.0;
      for (int k = 0; k < 3; ++k)
        dconn = std::max(dconn, (a.christoffel[k] - b.christoffel[k]).cwiseAbs().maxCoeff());
      dric = (a.ricci - b.ricci).cwiseAbs().maxCoeff();
      for (int c = 0; c < 3; ++c)
        ddric = std::max(ddric, (a.nabla_ricci[c] - b.nabla_ricci[c]).cwiseAbs().maxCoeff());
      rep.sup_g = std::max(rep.sup_g, r * r * dg);
      rep.sup_conn = std::max(rep.sup_conn, r * r * r * dconn);
      rep.sup_ric = std::max(rep.sup_ric, r * r * r * r * dric);
      rep.sup_dric = std::max(rep.sup_dric, r * r * r * r * r * ddric);
    }
  }
  rep.max = std::max(std::max(rep.sup_g, rep.sup_conn), std::max(rep.sup_ric, rep.sup_dric));
  return rep;
}

}  // namespace willmore
