#include "scalar_function.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <tuple>

namespace specshift {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr int kInternalOrder = ScalarFunction::kMaxDerivative + 2;  // spare orders for margins

using Poly = std::vector<cx>;  // ascending coefficients

cx polyval(const Poly& p, double x) {
  cx acc = 0;
  for (size_t j = p.size(); j-- > 0;) acc = acc * x + p[j];
  return acc;
}

Poly polyder(const Poly& p) {
  if (p.size() <= 1) return {};
  Poly d(p.size() - 1);
  for (size_t j = 1; j < p.size(); ++j) d[j - 1] = p[j] * static_cast<double>(j);
  return d;
}

// p'(u) - 2a u p(u): the derivative recurrence for p(u) exp(-a u^2).
Poly gauss_step(const Poly& p, double a) {
  Poly out(p.size() + 1, cx{});
  const Poly d = polyder(p);
  for (size_t j = 0; j < d.size(); ++j) out[j] += d[j];
  for (size_t j = 0; j < p.size(); ++j) out[j + 1] -= 2.0 * a * p[j];
  while (out.size() > 1 && std::abs(out.back()) == 0.0) out.pop_back();
  return out;
}

// sup_u |u|^j exp(-a u^2) = (j/(2 a e))^{j/2}
double monomial_gauss_peak(int j, double a) {
  if (j == 0) return 1.0;
  return std::pow(j / (2.0 * a * std::exp(1.0)), 0.5 * j);
}

double crude_sup_gauss(const Poly& p, double a) {
  double s = 0;
  for (size_t j = 0; j < p.size(); ++j)
    s += std::abs(p[j]) * monomial_gauss_peak(static_cast<int>(j), a);
  return s;
}

double rising(int m, int k) {
  double r = 1;
  for (int i = 0; i < k; ++i) r *= m + i;
  return r;
}

cx ipow(cx z, int n) {
  cx r = 1;
  for (int i = 0; i < n; ++i) r *= z;
  return r;
}

// Certified sup of g >= 0 over [lo, hi] where |g'| <= lip globally: per-cell
// bound max(g_i, g_{i+1}) + lip*h/2, refined until the margin is < 1% of the
// running bound.  The returned value is always >= the true sup on [lo, hi].
double certified_sup(const std::function<double(double)>& g, double lip, double lo, double hi) {
  if (hi <= lo) return g(lo);
  int cells = 512;
  double bound = 0;
  for (int iter = 0; iter < 14; ++iter) {
    const double h = (hi - lo) / cells;
    double m = 0;
    double prev = g(lo);
    for (int i = 1; i <= cells; ++i) {
      const double cur = g(lo + i * h);
      m = std::max(m, std::max(prev, cur));
      prev = cur;
    }
    bound = m + 0.5 * lip * h;
    if (0.5 * lip * h <= 0.01 * bound || cells >= (1 << 20)) break;
    cells *= 2;
  }
  return bound;
}

struct FourierTerm {
  cx amp;        // includes coef, i^degree, sqrt(pi/a)/(2 pi)
  double beta;   // 1/(4a)
  double shift;  // center b; contributes exp(-i b t)
  Poly q;        // value = amp * q(t) exp(-beta t^2) exp(-i b t)
  Poly qd;       // t-derivative polynomial: q' - 2 beta t q - i b q
};

cx fourier_term_eval(const FourierTerm& ft, double t, bool derivative) {
  const Poly& p = derivative ? ft.qd : ft.q;
  return ft.amp * polyval(p, t) * std::exp(-ft.beta * t * t) *
         std::polar(1.0, -ft.shift * t);
}

}  // namespace

struct ScalarFunction::Impl {
  Kind kind;
  std::vector<GaussianTerm> gterms;
  std::vector<RationalTerm> rterms;
  std::vector<double> pcoeffs;
  bool real_flag = false;

  // gaussian precompute
  std::vector<std::vector<Poly>> gderiv;  // [term][k], k <= kInternalOrder
  std::vector<FourierTerm> fterms;

  mutable std::mutex cache_mu;
  mutable std::array<std::optional<double>, kInternalOrder + 1> sup_cache;
  mutable std::array<std::optional<double>, kMaxAlpha + 1> decay_cache;
  mutable std::array<std::optional<double>, kMaxAlpha + 1> decay_grad_cache;

  cx derivative(double x, int k) const;
  double sup_derivative_uncached(int k) const;
  double fourier_weighted_sup(int alpha, bool grad) const;
  void validate_decay(int alpha, double c, bool grad) const;
  double gaussian_range(int k) const;
};

cx ScalarFunction::Impl::derivative(double x, int k) const {
  switch (kind) {
    case Kind::gaussian: {
      cx acc = 0;
      for (size_t t = 0; t < gterms.size(); ++t) {
        const auto& gt = gterms[t];
        const double u = x - gt.center;
        acc += gt.coef * polyval(gderiv[t][k], u) * std::exp(-gt.width * u * u);
      }
      return acc;
    }
    case Kind::rational: {
      cx acc = 0;
      for (const auto& rt : rterms) {
        const cx w = rt.pole - x;
        acc += rt.coef * rising(rt.order, k) / ipow(w, rt.order + k);
      }
      return acc;
    }
    case Kind::polynomial: {
      double acc = 0;
      for (size_t j = pcoeffs.size(); j-- > static_cast<size_t>(k);) {
        double fall = 1;
        for (int i = 0; i < k; ++i) fall *= static_cast<double>(j - i);
        acc = acc * x + pcoeffs[j] * fall;
      }
      return acc;
    }
  }
  return 0;
}

double ScalarFunction::Impl::gaussian_range(int k) const {
  double lo = 0, hi = 0;
  bool first = true;
  for (size_t t = 0; t < gterms.size(); ++t) {
    const auto& gt = gterms[t];
    const int deg = static_cast<int>(gderiv[t][k].size());
    const double w = std::sqrt((deg + 4.0) / gt.width) + 6.0;
    if (first || gt.center - w < lo) lo = gt.center - w;
    if (first || gt.center + w > hi) hi = gt.center + w;
    first = false;
  }
  return std::max(std::abs(lo), std::abs(hi));
}

double ScalarFunction::Impl::sup_derivative_uncached(int k) const {
  switch (kind) {
    case Kind::gaussian: {
      double lip = 0;
      for (size_t t = 0; t < gterms.size(); ++t)
        lip += std::abs(gterms[t].coef) * crude_sup_gauss(gderiv[t][k + 1], gterms[t].width);
      const double r = gaussian_range(k);
      auto g = [&](double x) { return std::abs(derivative(x, k)); };
      return certified_sup(g, lip, -r, r);
    }
    case Kind::rational: {
      double lip = 0, lo = 0, hi = 0;
      bool first = true;
      for (const auto& rt : rterms) {
        lip += std::abs(rt.coef) * rising(rt.order, k + 1) /
               std::pow(std::abs(rt.pole.imag()), rt.order + k + 1);
        const double re = rt.pole.real();
        if (first || re < lo) lo = re;
        if (first || re > hi) hi = re;
        first = false;
      }
      double w = 8.0 * (1.0 + hi - lo) + 8.0;
      auto g = [&](double x) { return std::abs(derivative(x, k)); };
      for (int iter = 0; iter < 40; ++iter) {
        double tail = 0;  // bound beyond the window: |x - Re z| >= margin
        for (const auto& rt : rterms) {
          const double margin = std::min(std::abs(lo - w - rt.pole.real()),
                                         std::abs(hi + w - rt.pole.real()));
          tail += std::abs(rt.coef) * rising(rt.order, k) / std::pow(margin, rt.order + k);
        }
        const double inside = certified_sup(g, lip, lo - w, hi + w);
        if (tail <= inside || tail < 1e-300) return std::max(inside, tail);
        w *= 2.0;
      }
      return certified_sup(g, lip, lo - w, hi + w);
    }
    case Kind::polynomial: {
      int deg = -1;
      for (size_t j = 0; j < pcoeffs.size(); ++j)
        if (pcoeffs[j] != 0.0) deg = static_cast<int>(j);
      if (deg < k) return 0.0;
      if (deg == k) {
        double fall = 1;
        for (int i = 0; i < k; ++i) fall *= static_cast<double>(deg - i);
        return std::abs(pcoeffs[deg]) * fall;
      }
      return std::numeric_limits<double>::infinity();
    }
  }
  return 0;
}

double ScalarFunction::Impl::fourier_weighted_sup(int alpha, bool grad) const {
  // per-cell certified bound of |Ff|(1+|t|)^alpha; the grid reaches far
  // enough that every term's envelope is decreasing past the ends.
  double range = 8.0;
  double lipschitz = 0;
  for (const auto& ft : fterms) {
    const int deg = static_cast<int>(ft.q.size()) + 1;
    range = std::max(range, std::sqrt((deg + alpha + 4.0) / ft.beta) + 8.0);
    // crude bound on |d/dt [p(t) e^{-beta t^2} e^{-i b t}]|
    const Poly& p = grad ? ft.qd : ft.q;
    double s = crude_sup_gauss(polyder(p), ft.beta);
    Poly tp(p.size() + 1, cx{});
    for (size_t j = 0; j < p.size(); ++j) tp[j + 1] = p[j];
    s += 2.0 * ft.beta * crude_sup_gauss(tp, ft.beta);
    s += std::abs(ft.shift) * crude_sup_gauss(p, ft.beta);
    lipschitz += std::abs(ft.amp) * s;
  }
  auto g = [&](double t) {
    cx acc = 0;
    for (const auto& ft : fterms) acc += fourier_term_eval(ft, t, grad);
    return std::abs(acc);
  };
  int cells = 2048;
  double bound = 0;
  for (int iter = 0; iter < 10; ++iter) {
    const double h = 2.0 * range / cells;
    double m = 0;
    double prev = g(-range);
    for (int i = 1; i <= cells; ++i) {
      const double t1 = -range + i * h;
      const double cur = g(t1);
      const double wcell = std::pow(1.0 + std::max(std::abs(t1), std::abs(t1 - h)), alpha);
      m = std::max(m, wcell * (std::max(prev, cur) + 0.5 * lipschitz * h));
      prev = cur;
    }
    bound = m;
    if (0.5 * lipschitz * (2.0 * range / cells) * std::pow(1.0 + range, alpha) <= 0.01 * bound ||
        cells >= (1 << 19))
      break;
    cells *= 2;
  }
  return bound * 1.0000001 + 1e-300;
}

void ScalarFunction::Impl::validate_decay(int alpha, double c, bool grad) const {
  // spot-check the certificate at 1000 samples
  double range = 8.0;
  for (const auto& ft : fterms)
    range = std::max(range, std::sqrt((ft.q.size() + alpha + 6.0) / ft.beta) + 10.0);
  for (int i = 0; i < 1000; ++i) {
    const double t = -range + (2.0 * range) * (i + 0.5) / 1000.0;
    cx acc = 0;
    for (const auto& ft : fterms) acc += fourier_term_eval(ft, t, grad);
    const double lhs = std::abs(acc) * std::pow(1.0 + std::abs(t), alpha);
    if (lhs > c * (1.0 + 1e-9))
      fail(Errc::inconsistency, "fourier decay certificate violated at a sample point");
  }
}

ScalarFunction ScalarFunction::gaussian(std::vector<GaussianTerm> terms) {
  require(!terms.empty(), Errc::invalid_argument, "gaussian: needs at least one term");
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::gaussian;
  for (const auto& t : terms) {
    require(t.width > 0.0, Errc::invalid_argument, "gaussian: width must be > 0");
    require(t.degree >= 0 && t.degree <= 12, Errc::invalid_argument,
            "gaussian: monomial degree out of range [0,12]");
  }
  impl->gterms = std::move(terms);

  impl->gderiv.resize(impl->gterms.size());
  for (size_t t = 0; t < impl->gterms.size(); ++t) {
    const auto& gt = impl->gterms[t];
    Poly p(gt.degree + 1, cx{});
    p[gt.degree] = 1.0;
    impl->gderiv[t].push_back(p);
    for (int k = 1; k <= kInternalOrder + 1; ++k)
      impl->gderiv[t].push_back(gauss_step(impl->gderiv[t].back(), gt.width));
  }

  for (const auto& gt : impl->gterms) {
    FourierTerm ft;
    ft.beta = 1.0 / (4.0 * gt.width);
    ft.shift = gt.center;
    ft.amp = gt.coef * ipow(cx(0, 1), gt.degree) * std::sqrt(kPi / gt.width) / (2.0 * kPi);
    Poly q{cx(1.0)};
    for (int k = 0; k < gt.degree; ++k) q = gauss_step(q, ft.beta);
    ft.q = q;
    // qd = q' - 2 beta t q - i b q
    Poly qd(q.size() + 1, cx{});
    const Poly dq = polyder(q);
    for (size_t j = 0; j < dq.size(); ++j) qd[j] += dq[j];
    for (size_t j = 0; j < q.size(); ++j) qd[j + 1] -= 2.0 * ft.beta * q[j];
    for (size_t j = 0; j < q.size(); ++j) qd[j] -= cx(0, 1) * gt.center * q[j];
    ft.qd = qd;
    impl->fterms.push_back(std::move(ft));
  }

  // real iff grouped coefficients are real (the basis functions are real)
  std::map<std::tuple<double, double, int>, cx> groups;
  for (const auto& gt : impl->gterms) groups[{gt.width, gt.center, gt.degree}] += gt.coef;
  impl->real_flag = true;
  for (const auto& [key, c] : groups)
    if (std::abs(c.imag()) > 1e-14 * std::max(1.0, std::abs(c))) impl->real_flag = false;

  return ScalarFunction(std::move(impl));
}

ScalarFunction ScalarFunction::rational(std::vector<RationalTerm> terms) {
  require(!terms.empty(), Errc::invalid_argument, "rational: needs at least one term");
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::rational;
  for (const auto& t : terms) {
    require(t.pole.imag() != 0.0, Errc::invalid_argument, "rational: pole must be non-real");
    require(t.order >= 1 && t.order <= 12, Errc::invalid_argument,
            "rational: order out of range [1,12]");
  }
  impl->rterms = std::move(terms);

  // real iff the term multiset is closed under (c, z) -> (conj c, conj z)
  std::map<std::tuple<double, double, int>, cx> groups;
  for (const auto& rt : impl->rterms)
    groups[{rt.pole.real(), rt.pole.imag(), rt.order}] += rt.coef;
  impl->real_flag = true;
  for (const auto& [key, c] : groups) {
    const auto [re, im, m] = key;
    const auto it = groups.find({re, -im, m});
    const cx partner = (it == groups.end()) ? cx{} : it->second;
    if (std::abs(partner - std::conj(c)) > 1e-14 * std::max(1.0, std::abs(c)))
      impl->real_flag = false;
  }
  return ScalarFunction(std::move(impl));
}

ScalarFunction ScalarFunction::polynomial(std::vector<double> coeffs) {
  require(!coeffs.empty(), Errc::invalid_argument, "polynomial: needs coefficients");
  require(coeffs.size() <= 16, Errc::invalid_argument, "polynomial: degree too large");
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::polynomial;
  impl->pcoeffs = std::move(coeffs);
  impl->real_flag = true;
  return ScalarFunction(std::move(impl));
}

ScalarFunction::Kind ScalarFunction::kind() const { return impl_->kind; }
bool ScalarFunction::real_valued() const { return impl_->real_flag; }

cx ScalarFunction::derivative(double x, int k) const {
  require(k >= 0, Errc::invalid_argument, "derivative order must be >= 0");
  require(k <= kMaxDerivative, Errc::unsupported,
          "derivative order exceeds the supported closed forms (k <= 12)");
  return impl_->derivative(x, k);
}

double ScalarFunction::sup_derivative(int k) const {
  require(k >= 0 && k <= kMaxDerivative, Errc::unsupported,
          "sup_derivative order out of supported range");
  std::lock_guard<std::mutex> lock(impl_->cache_mu);
  if (!impl_->sup_cache[k]) impl_->sup_cache[k] = impl_->sup_derivative_uncached(k);
  return *impl_->sup_cache[k];
}

ScalarFunction ScalarFunction::real_part() const {
  switch (impl_->kind) {
    case Kind::gaussian: {
      auto terms = impl_->gterms;
      for (auto& t : terms) t.coef = t.coef.real();
      return gaussian(std::move(terms));
    }
    case Kind::rational: {
      std::vector<RationalTerm> out;
      for (const auto& t : impl_->rterms) {
        out.push_back({0.5 * t.coef, t.pole, t.order});
        out.push_back({0.5 * std::conj(t.coef), std::conj(t.pole), t.order});
      }
      return rational(std::move(out));
    }
    case Kind::polynomial:
      return *this;
  }
  fail(Errc::invalid_argument, "unreachable");
}

ScalarFunction ScalarFunction::imag_part() const {
  switch (impl_->kind) {
    case Kind::gaussian: {
      auto terms = impl_->gterms;
      for (auto& t : terms) t.coef = t.coef.imag();
      return gaussian(std::move(terms));
    }
    case Kind::rational: {
      const cx half_over_i(0.0, -0.5);
      std::vector<RationalTerm> out;
      for (const auto& t : impl_->rterms) {
        out.push_back({half_over_i * t.coef, t.pole, t.order});
        out.push_back({-half_over_i * std::conj(t.coef), std::conj(t.pole), t.order});
      }
      return rational(std::move(out));
    }
    case Kind::polynomial:
      return polynomial(std::vector<double>{0.0});
  }
  fail(Errc::invalid_argument, "unreachable");
}

cx ScalarFunction::fourier(double t) const {
  require(impl_->kind == Kind::gaussian, Errc::unsupported,
          "fourier transform available for the gaussian family only");
  cx acc = 0;
  for (const auto& ft : impl_->fterms) acc += fourier_term_eval(ft, t, false);
  return acc;
}

cx ScalarFunction::fourier_derivative(double t) const {
  require(impl_->kind == Kind::gaussian, Errc::unsupported,
          "fourier transform available for the gaussian family only");
  cx acc = 0;
  for (const auto& ft : impl_->fterms) acc += fourier_term_eval(ft, t, true);
  return acc;
}

double ScalarFunction::fourier_decay_constant(int alpha) const {
  require(impl_->kind == Kind::gaussian, Errc::unsupported,
          "decay certificates available for the gaussian family only");
  require(alpha >= 1 && alpha <= kMaxAlpha, Errc::invalid_argument, "alpha out of range");
  std::lock_guard<std::mutex> lock(impl_->cache_mu);
  if (!impl_->decay_cache[alpha]) {
    const double c = impl_->fourier_weighted_sup(alpha, false);
    impl_->validate_decay(alpha, c, false);
    impl_->decay_cache[alpha] = c;
  }
  return *impl_->decay_cache[alpha];
}

double ScalarFunction::fourier_derivative_decay_constant(int alpha) const {
  require(impl_->kind == Kind::gaussian, Errc::unsupported,
          "decay certificates available for the gaussian family only");
  require(alpha >= 1 && alpha <= kMaxAlpha, Errc::invalid_argument, "alpha out of range");
  std::lock_guard<std::mutex> lock(impl_->cache_mu);
  if (!impl_->decay_grad_cache[alpha]) {
    const double c = impl_->fourier_weighted_sup(alpha, true);
    impl_->validate_decay(alpha, c, true);
    impl_->decay_grad_cache[alpha] = c;
  }
  return *impl_->decay_grad_cache[alpha];
}

const std::vector<ScalarFunction::GaussianTerm>& ScalarFunction::gaussian_terms() const {
  require(impl_->kind == Kind::gaussian, Errc::invalid_argument, "not a gaussian function");
  return impl_->gterms;
}
const std::vector<ScalarFunction::RationalTerm>& ScalarFunction::rational_terms() const {
  require(impl_->kind == Kind::rational, Errc::invalid_argument, "not a rational function");
  return impl_->rterms;
}
const std::vector<double>& ScalarFunction::polynomial_coeffs() const {
  require(impl_->kind == Kind::polynomial, Errc::invalid_argument, "not a polynomial");
  return impl_->pcoeffs;
}

std::string ScalarFunction::describe() const {
  std::ostringstream os;
  switch (impl_->kind) {
    case Kind::gaussian:
      os << "gaussian[" << impl_->gterms.size() << " terms]";
      break;
    case Kind::rational:
      os << "rational[" << impl_->rterms.size() << " terms]";
      break;
    case Kind::polynomial:
      os << "polynomial[deg " << impl_->pcoeffs.size() - 1 << "]";
      break;
  }
  return os.str();
}

}  // namespace specshift
