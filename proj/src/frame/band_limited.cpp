#include <cmath>
#include <numbers>

#include "dilatekit/errors.hpp"
#include "dilatekit/frame.hpp"
#include "dilatekit/kernels.hpp"

namespace dilatekit::frame {

cd Grid2D::sample(double x, double y) const {
  const double fx = (x - x0) / dx;
  const double fy = (y - y0) / dy;
  if (!(fx > -1.0 && fx < nx && fy > -1.0 && fy < ny)) return 0.0;
  const double gx = std::floor(fx), gy = std::floor(fy);
  const int ix = static_cast<int>(gx), iy = static_cast<int>(gy);
  const double tx = fx - gx, ty = fy - gy;
  auto at = [&](int i, int j) -> cd {
    if (i < 0 || i >= nx || j < 0 || j >= ny) return 0.0;
    return values[static_cast<std::size_t>(j) * nx + i];
  };
  const cd v00 = at(ix, iy);
  if (tx == 0.0 && ty == 0.0) return v00;
  return (1.0 - tx) * (1.0 - ty) * v00 + tx * (1.0 - ty) * at(ix + 1, iy) + (1.0 - tx) * ty * at(ix, iy + 1) +
         tx * ty * at(ix + 1, iy + 1);
}

Grid2D Grid2D::same_shape() const {
  Grid2D g = *this;
  g.values.assign(values.size(), 0.0);
  return g;
}

group::MonomorphismSpec group_of(const RepPreset& rep) {
  if (const auto* s = std::get_if<ShearletRep>(&rep)) return group::MonomorphismSpec::heisenberg(s->a, s->a);
  const auto& h = std::get<HeisenbergMult1Rep>(rep);
  return group::MonomorphismSpec::heisenberg(h.a, h.b);
}

std::string rep_name(const RepPreset& rep) {
  return std::holds_alternative<ShearletRep>(rep) ? "shearlet" : "heisenberg_mult1";
}

namespace {

struct Exps {
  double m, l, k;
};

Exps heis_exponents(const LatticePoint& p) {
  const auto* h = std::get_if<group::HeisTriple>(&p.gamma);
  if (!h) throw InvalidInput("2D presets act through the Heisenberg family");
  return {static_cast<double>(h->m), static_cast<double>(h->l), static_cast<double>(h->k)};
}

}  // namespace

Grid2D apply_rep(const RepPreset& rep, const LatticePoint& p, const Grid2D& f) {
  const Exps e = heis_exponents(p);
  const double j = static_cast<double>(p.j);
  Grid2D g = f.same_shape();
  if (const auto* s = std::get_if<ShearletRep>(&rep)) {
    // D^j T1^m T2^l M^k f (x) = a^{-3j/2} f(y1 - m - k (y2 - l), y2 - l),
    // y = (a^{-2j} x1, a^{-j} x2).
    const double a = s->a;
    const double amp = std::pow(a, -1.5 * j);
    const double s1 = std::pow(a, -2.0 * j), s2 = std::pow(a, -j);
    for (int iy = 0; iy < f.ny; ++iy)
      for (int ix = 0; ix < f.nx; ++ix) {
        const double y1 = s1 * f.x(ix), y2 = s2 * f.y(iy) - e.l;
        g.values[static_cast<std::size_t>(iy) * f.nx + ix] = amp * f.sample(y1 - e.m - e.k * y2, y2);
      }
    return g;
  }
  // D^j t1^m t2^l t3^k f (lambda, t) =
  //   c^j e^{2 pi i m mu} e^{-2 pi i l mu s} f(mu, s - k),  mu = (ab)^j lambda, s = a^{-j} t.
  const auto& h = std::get<HeisenbergMult1Rep>(rep);
  const double a = h.a, b = h.b;
  const double amp = std::pow(b * std::sqrt(a), j);
  const double sl = std::pow(a * b, j), st = std::pow(a, -j);
  for (int iy = 0; iy < f.ny; ++iy)
    for (int ix = 0; ix < f.nx; ++ix) {
      const double mu = sl * f.x(ix), t = st * f.y(iy);
      double phase = e.m * mu - e.l * mu * t;
      phase -= std::floor(phase);
      const cd v = f.sample(mu, t - e.k);
      g.values[static_cast<std::size_t>(iy) * f.nx + ix] = amp * std::polar(1.0, 2.0 * std::numbers::pi * phase) * v;
    }
  return g;
}

std::vector<double> quadrature_weights(const RepPreset& rep, const Grid2D& f) {
  std::vector<double> w(f.values.size(), f.dx * f.dy);
  if (std::holds_alternative<HeisenbergMult1Rep>(rep))
    for (int iy = 0; iy < f.ny; ++iy)
      for (int ix = 0; ix < f.nx; ++ix) w[static_cast<std::size_t>(iy) * f.nx + ix] *= std::abs(f.x(ix));
  return w;
}

double grid_norm(const RepPreset& rep, const Grid2D& f) {
  const auto w = quadrature_weights(rep, f);
  return std::sqrt(simd::weighted_dot(f.values, f.values, w).real());
}

}  // namespace dilatekit::frame
