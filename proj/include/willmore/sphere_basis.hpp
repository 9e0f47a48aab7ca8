// Real spherical-harmonic basis on a Gauss-Legendre x uniform-longitude grid:
// quadrature, analysis/synthesis transforms, and pointwise angular derivatives
// of basis functions up to third order (all evaluated away from the poles).
//
// Conventions:
//   * Fully normalized real harmonics, no Condon-Shortley phase:
//       Y_{l,0}    = Ptilde_{l,0}(cos t)
//       Y_{l,m>0}  = sqrt(2) Ptilde_{l,m}(cos t) cos(m p)
//       Y_{l,m<0}  = sqrt(2) Ptilde_{l,|m|}(cos t) sin(|m| p)
//     with integral of Y^2 over the unit sphere equal to 1.
//   * Coefficient index: k = l^2 + l + m for l = 0..L, m = -l..l.
//   * Grid nodes: i-th Gauss-Legendre colatitude (in cos t), j-th longitude
//     p_j = 2 pi j / Nphi, flattened node index n = i*Nphi + j.
//   * A grid of band B integrates products of two band-B fields exactly and
//     supports analysis of fields up to degree B.
#pragma once

#include "willmore/common.hpp"

#include <map>
#include <memory>
#include <vector>

namespace willmore {

// Gauss-Legendre nodes/weights on [-1,1] by Newton iteration on P_n.
inline void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    // Tricomi-type initial guess for the i-th root (descending order).
    double t = std::cos(PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int k = 0; k < n; ++k) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k + 1.0) * t * p1 - k * p2) / (k + 1.0);
      }
      pp = n * (t * p0 - p1) / (t * t - 1.0);
      double dt = p0 / pp;
      t -= dt;
      if (std::abs(dt) < 1e-15) break;
    }
    x[i] = t;
    w[i] = 2.0 / ((1.0 - t * t) * pp * pp);
  }
}

// Partial-derivative bundle of a scalar field on the parameter sphere.
// d(a,b) = d^{a+b} f / dt^a dp^b evaluated at every node; orders with
// a+b > max_order are left empty.
struct AngularJet {
  int max_order = 0;
  // order <= 3; storage indexed [a][b]
  std::array<std::array<Field, 4>, 4> parts;

  const Field& d(int a, int b) const { return parts[a][b]; }
  Field& d(int a, int b) { return parts[a][b]; }
  const Field& val() const { return parts[0][0]; }
};

class SphereGrid {
 public:
  explicit SphereGrid(int band) : band_(band) {
    if (band < 1) throw DomainError("SphereGrid: band must be >= 1");
    ntheta_ = band + 1;
    nphi_ = 2 * band + 2;
    std::vector<double> xg, wg;
    gauss_legendre(ntheta_, xg, wg);
    theta_.resize(ntheta_);
    wtheta_.resize(ntheta_);
    for (int i = 0; i < ntheta_; ++i) {
      theta_[i] = std::acos(xg[i]);
      wtheta_[i] = wg[i];
    }
    phi_.resize(nphi_);
    for (int j = 0; j < nphi_; ++j) phi_[j] = 2.0 * PI * j / nphi_;

    weights_.resize(nnodes());
    for (int i = 0; i < ntheta_; ++i)
      for (int j = 0; j < nphi_; ++j)
        weights_[i * nphi_ + j] = wtheta_[i] * (2.0 * PI / nphi_);

    build_legendre_tables();
    build_trig_tables();
  }

  int band() const { return band_; }
  int ntheta() const { return ntheta_; }
  int nphi() const { return nphi_; }
  int nnodes() const { return ntheta_ * nphi_; }
  int ncoef() const { return (band_ + 1) * (band_ + 1); }

  double theta(int i) const { return theta_[i]; }
  double phi(int j) const { return phi_[j]; }
  int theta_index(int node) const { return node / nphi_; }

  // Quadrature weights w.r.t. the round unit-sphere measure sin t dt dp.
  const Field& weights() const { return weights_; }

  static int coef_index(int l, int m) { return l * l + l + m; }

  // ---- synthesis ----------------------------------------------------------

  // Evaluate the field with the given coefficients (any degree <= band) and
  // all angular partials up to max_order (<= 3).
  AngularJet synth(const Eigen::VectorXd& coef, int max_order) const {
    const int L = degree_of(coef.size());
    AngularJet out = make_jet(max_order);
    // Per-theta-row accumulators: Fc[d][m], Fs[d][m] with d the t-derivative
    // order of the Legendre part.
    const int nm = L + 1;
    const int nd = max_order + 1;
    std::vector<double> fc(nd * nm), fs(nd * nm);
    for (int i = 0; i < ntheta_; ++i) {
      std::fill(fc.begin(), fc.end(), 0.0);
      std::fill(fs.begin(), fs.end(), 0.0);
      for (int m = 0; m <= L; ++m) {
        const double norm = (m == 0) ? 1.0 : std::sqrt(2.0);
        for (int l = m; l <= L; ++l) {
          const int pi_ = plm_index(l, m);
          const double cc = coef[coef_index(l, m)] * norm;
          const double cs = (m > 0) ? coef[coef_index(l, -m)] * norm : 0.0;
          for (int d = 0; d < nd; ++d) {
            const double lam = ptab_[d][i * nplm_ + pi_];
            fc[d * nm + m] += cc * lam;
            if (m > 0) fs[d * nm + m] += cs * lam;
          }
        }
      }
      assemble_row(i, L, max_order, fc, fs, out);
    }
    return out;
  }

  // Jet of the single basis function Y_{l,m}.
  AngularJet basis_jet(int l, int m, int max_order) const {
    Eigen::VectorXd c = Eigen::VectorXd::Zero((l + 1) * (l + 1));
    c[coef_index(l, m)] = 1.0;
    return synth(c, max_order);
  }

  // ---- analysis -----------------------------------------------------------

  // Project node values onto harmonics of degree <= L (default: grid band).
  // Exact when the field is band-limited within the grid band.
  Eigen::VectorXd analyze(const Field& values, int L = -1) const {
    if (L < 0) L = band_;
    Eigen::VectorXd coef = Eigen::VectorXd::Zero((L + 1) * (L + 1));
    std::vector<double> rc(L + 1), rs(L + 1);
    for (int i = 0; i < ntheta_; ++i) {
      // Fourier sums of the row against cos(m p), sin(m p).
      std::fill(rc.begin(), rc.end(), 0.0);
      std::fill(rs.begin(), rs.end(), 0.0);
      for (int j = 0; j < nphi_; ++j) {
        const double v = values[i * nphi_ + j];
        for (int m = 0; m <= L; ++m) {
          rc[m] += v * costab_[j * (band_ + 1) + m];
          rs[m] += v * sintab_[j * (band_ + 1) + m];
        }
      }
      const double wrow = wtheta_[i] * (2.0 * PI / nphi_);
      for (int m = 0; m <= L; ++m) {
        const double norm = (m == 0) ? 1.0 : std::sqrt(2.0);
        for (int l = m; l <= L; ++l) {
          const double lam = ptab_[0][i * nplm_ + plm_index(l, m)] * norm * wrow;
          coef[coef_index(l, m)] += lam * rc[m];
          if (m > 0) coef[coef_index(l, -m)] += lam * rs[m];
        }
      }
    }
    return coef;
  }

  // Quadrature of a node field over the unit sphere.
  double integrate(const Field& values) const { return (values * weights_).sum(); }

 private:
  static int degree_of(Eigen::Index ncoef) {
    int L = static_cast<int>(std::lround(std::sqrt(double(ncoef)))) - 1;
    if ((L + 1) * (L + 1) != ncoef) throw DomainError("coefficient vector size is not (L+1)^2");
    return L;
  }

  int plm_index(int l, int m) const {
    // triangular storage over m-major blocks, l = m..band
    return m * (band_ + 1) - (m * (m - 1)) / 2 + (l - m);
  }

  AngularJet make_jet(int max_order) const {
    AngularJet jet;
    jet.max_order = max_order;
    for (int a = 0; a <= 3; ++a)
      for (int b = 0; b <= 3 - a; ++b)
        if (a + b <= max_order) jet.parts[a][b] = Field::Zero(nnodes());
    return jet;
  }

  void build_legendre_tables() {
    nplm_ = (band_ + 1) * (band_ + 2) / 2;
    for (int d = 0; d < 4; ++d) ptab_[d].assign(size_t(ntheta_) * nplm_, 0.0);
    std::vector<double> p(nplm_), dp(nplm_);
    for (int i = 0; i < ntheta_; ++i) {
      const double t = theta_[i];
      const double x = std::cos(t), s = std::sin(t);
      // values: stable normalized recurrences
      for (int m = 0; m <= band_; ++m) {
        double pmm;
        if (m == 0) {
          pmm = std::sqrt(1.0 / (4.0 * PI));
        } else {
          pmm = p[plm_index(m - 1, m - 1)] * s * std::sqrt((2.0 * m + 1.0) / (2.0 * m));
        }
        p[plm_index(m, m)] = pmm;
        if (m + 1 <= band_) p[plm_index(m + 1, m)] = std::sqrt(2.0 * m + 3.0) * x * pmm;
        for (int l = m + 2; l <= band_; ++l) {
          const double a = std::sqrt((2.0 * l + 1.0) / double((l - m) * (l + m)));
          const double p1 = std::sqrt(2.0 * l - 1.0) * x * p[plm_index(l - 1, m)];
          const double p2 = std::sqrt((double(l - 1) * (l - 1) - double(m) * m) / (2.0 * l - 3.0)) *
                            p[plm_index(l - 2, m)];
          p[plm_index(l, m)] = a * (p1 - p2);
        }
      }
      // first t-derivative: d/dt Ptilde_lm = (l x Ptilde_lm - s_lm Ptilde_{l-1,m}) / sin t
      for (int m = 0; m <= band_; ++m) {
        for (int l = m; l <= band_; ++l) {
          double below = (l - 1 >= m) ? p[plm_index(l - 1, m)] : 0.0;
          const double slm =
              (l - 1 >= m)
                  ? std::sqrt((double(l) * l - double(m) * m) * (2.0 * l + 1.0) / (2.0 * l - 1.0))
                  : 0.0;
          dp[plm_index(l, m)] = (l * x * p[plm_index(l, m)] - slm * below) / s;
        }
      }
      // second/third derivatives from the associated-Legendre ODE:
      //   P'' = -cot t P' + (m^2/sin^2 t - l(l+1)) P
      for (int m = 0; m <= band_; ++m) {
        for (int l = m; l <= band_; ++l) {
          const int k = plm_index(l, m);
          const double P = p[k], P1 = dp[k];
          const double msq = double(m) * m;
          const double c2 = msq / (s * s) - double(l) * (l + 1);
          const double P2 = -x / s * P1 + c2 * P;
          const double P3 =
              -x / s * P2 + (1.0 / (s * s)) * P1 + c2 * P1 - 2.0 * msq * x / (s * s * s) * P;
          ptab_[0][size_t(i) * nplm_ + k] = P;
          ptab_[1][size_t(i) * nplm_ + k] = P1;
          ptab_[2][size_t(i) * nplm_ + k] = P2;
          ptab_[3][size_t(i) * nplm_ + k] = P3;
        }
      }
    }
  }

  void build_trig_tables() {
    costab_.assign(size_t(nphi_) * (band_ + 1), 0.0);
    sintab_.assign(size_t(nphi_) * (band_ + 1), 0.0);
    for (int j = 0; j < nphi_; ++j)
      for (int m = 0; m <= band_; ++m) {
        costab_[size_t(j) * (band_ + 1) + m] = std::cos(m * phi_[j]);
        sintab_[size_t(j) * (band_ + 1) + m] = std::sin(m * phi_[j]);
      }
  }

  // Combine per-row Legendre sums with the trig factors into node fields.
  void assemble_row(int i, int L, int max_order, const std::vector<double>& fc,
                    const std::vector<double>& fs, AngularJet& out) const {
    const int nm = L + 1;
    for (int j = 0; j < nphi_; ++j) {
      const int node = i * nphi_ + j;
      // accumulate for each (a = t-order, b = p-order)
      for (int a = 0; a <= max_order; ++a) {
        for (int b = 0; a + b <= max_order; ++b) {
          double acc = 0.0;
          for (int m = 0; m <= L; ++m) {
            const double c = costab_[size_t(j) * (band_ + 1) + m];
            const double snv = sintab_[size_t(j) * (band_ + 1) + m];
            const double FC = fc[a * nm + m], FS = fs[a * nm + m];
            // b-th p-derivative of (FC cos mp + FS sin mp)
            const double mb = std::pow(double(m), b);
            double term;
            switch (b % 4) {
              case 0: term = FC * c + FS * snv; break;
              case 1: term = -FC * snv + FS * c; break;
              case 2: term = -FC * c - FS * snv; break;
              default: term = FC * snv - FS * c; break;
            }
            acc += mb * term;
          }
          out.parts[a][b][node] = acc;
        }
      }
    }
  }

  int band_;
  int ntheta_, nphi_;
  int nplm_ = 0;
  std::vector<double> theta_, phi_, wtheta_;
  Field weights_;
  std::array<std::vector<double>, 4> ptab_;  // [deriv][i * nplm + plm_index]
  std::vector<double> costab_, sintab_;      // [j * (band+1) + m]
};

// Process-wide cache: grids are expensive to build and reused across surfaces.
inline std::shared_ptr<const SphereGrid> get_grid(int band) {
  static std::map<int, std::shared_ptr<const SphereGrid>> cache;
  auto it = cache.find(band);
  if (it != cache.end()) return it->second;
  auto g = std::make_shared<SphereGrid>(band);
  cache.emplace(band, g);
  return g;
}

}  // namespace willmore
