#include "ptlz/specfun.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace ptlz {

namespace {

// ---------------------------------------------------------------------------
// Double-double scraps (Dekker / Knuth). The Airy Maclaurin combination
// c1*f - c2*g cancels like exp(2 zeta) near the positive real axis, which at
// |z| = 9 eats ~16 digits in plain doubles. Accumulating in double-double
// keeps the series branch at ~1e-14 relative over the whole disc.

struct dd {
  double hi = 0, lo = 0;
};

inline dd two_sum(double a, double b) {
  double s = a + b;
  double bb = s - a;
  return {s, (a - (s - bb)) + (b - bb)};
}

inline dd quick_two_sum(double a, double b) {
  double s = a + b;
  return {s, b - (s - a)};
}

inline dd two_prod(double a, double b) {
  double p = a * b;
  return {p, std::fma(a, b, -p)};
}

inline dd dd_add(dd a, dd b) {
  dd s = two_sum(a.hi, b.hi);
  s.lo += a.lo + b.lo;
  return quick_two_sum(s.hi, s.lo);
}

inline dd dd_neg(dd a) { return {-a.hi, -a.lo}; }

inline dd dd_sub(dd a, dd b) { return dd_add(a, dd_neg(b)); }

inline dd dd_mul(dd a, dd b) {
  dd p = two_prod(a.hi, b.hi);
  p.lo += a.hi * b.lo + a.lo * b.hi;
  return quick_two_sum(p.hi, p.lo);
}

inline dd dd_div_d(dd a, double b) {
  double q1 = a.hi / b;
  dd p = two_prod(q1, b);
  double q2 = (((a.hi - p.hi) - p.lo) + a.lo) / b;
  return quick_two_sum(q1, q2);
}

struct cdd {
  dd re, im;
};

inline cdd cdd_from(cplx z) { return {{z.real(), 0}, {z.imag(), 0}}; }
inline cplx cdd_collapse(cdd z) {
  return {z.re.hi + z.re.lo, z.im.hi + z.im.lo};
}
inline cdd cdd_add(cdd a, cdd b) {
  return {dd_add(a.re, b.re), dd_add(a.im, b.im)};
}
inline cdd cdd_mul(cdd a, cdd b) {
  return {dd_sub(dd_mul(a.re, b.re), dd_mul(a.im, b.im)),
          dd_add(dd_mul(a.re, b.im), dd_mul(a.im, b.re))};
}
inline cdd cdd_scale(cdd a, dd s) { return {dd_mul(a.re, s), dd_mul(a.im, s)}; }
inline cdd cdd_div_d(cdd a, double b) {
  return {dd_div_d(a.re, b), dd_div_d(a.im, b)};
}
inline double cdd_mag(cdd a) { return std::hypot(a.re.hi, a.im.hi); }

// Ai(0), -Ai'(0), sqrt(3) to double-double precision.
const dd kC1 = {0.3550280538878172, 2.05233632436212e-17};
const dd kC2 = {0.2588194037928068, -2.522243111610832e-17};
const dd kSqrt3 = {1.7320508075688772, 1.0035084221806903e-16};

// Hand-off radius: the compensated series keeps ~1e-14 relative out to the
// switch, and past it the optimally truncated expansions sit at the
// exp(-2|zeta|) floor, ~1e-15 at |z| = 9.
constexpr double kAirySwitchRadius = 9.0;
constexpr double kTwoPiThird = 2.0943951023931953;  // 2*pi/3

}  // namespace

namespace detail {

AiryValues airy_series(cplx z) {
  const cdd zc = cdd_from(z);
  const cdd z2 = cdd_mul(zc, zc);
  const cdd z3 = cdd_mul(z2, zc);

  dd fk = {1, 0}, gk = {1, 0};
  cdd A{};                           // z^{3k-1}
  cdd B = {{1, 0}, {0, 0}};          // z^{3k}
  cdd C = zc;                        // z^{3k+1}
  cdd Sf = B, Sg = C;
  cdd Sfp = {{0, 0}, {0, 0}};
  cdd Sgp = {{1, 0}, {0, 0}};

  for (int k = 1; k <= 260; ++k) {
    fk = dd_div_d(fk, double(3 * k) * double(3 * k - 1));
    gk = dd_div_d(gk, double(3 * k + 1) * double(3 * k));
    A = (k == 1) ? z2 : cdd_mul(A, z3);
    B = cdd_mul(A, zc);
    C = cdd_mul(B, zc);
    cdd tf = cdd_scale(B, fk);
    cdd tg = cdd_scale(C, gk);
    cdd tfp = cdd_scale(A, dd_mul(fk, {double(3 * k), 0}));
    cdd tgp = cdd_scale(B, dd_mul(gk, {double(3 * k + 1), 0}));
    Sf = cdd_add(Sf, tf);
    Sg = cdd_add(Sg, tg);
    Sfp = cdd_add(Sfp, tfp);
    Sgp = cdd_add(Sgp, tgp);
    double tmag = cdd_mag(tf) + cdd_mag(tg) + cdd_mag(tfp) + cdd_mag(tgp);
    double smag = cdd_mag(Sf) + cdd_mag(Sg) + cdd_mag(Sfp) + cdd_mag(Sgp);
    if (tmag < 1e-36 * (smag + 1.0)) break;
  }

  AiryValues r;
  r.Ai = cdd_collapse(cdd_add(cdd_scale(Sf, kC1), cdd_scale(Sg, dd_neg(kC2))));
  r.Bi = cdd_collapse(
      cdd_scale(cdd_add(cdd_scale(Sf, kC1), cdd_scale(Sg, kC2)), kSqrt3));
  r.Aip =
      cdd_collapse(cdd_add(cdd_scale(Sfp, kC1), cdd_scale(Sgp, dd_neg(kC2))));
  r.Bip = cdd_collapse(
      cdd_scale(cdd_add(cdd_scale(Sfp, kC1), cdd_scale(Sgp, kC2)), kSqrt3));
  return r;
}

namespace {

struct AiExp {
  cplx ai, aip;
  double relerr;
};

// Single-sector Poincare expansion, optimally truncated. Only call with
// |arg z| <= 2*pi/3: beyond that the dropped subdominant exponential
// contributes exp(-2|Re zeta|) relative, which collapses to O(1) toward the
// negative real axis. relerr reports the smallest term actually reached.
AiExp ai_expansion(cplx z) {
  const cplx lg = std::log(z);
  const cplx z14 = std::exp(0.25 * lg);
  const cplx zeta = (2.0 / 3.0) * std::exp(1.5 * lg);
  const cplx inv = 1.0 / zeta;
  const double sqrtpi = 1.772453850905516;

  cplx Sa = 1.0, Sap = 1.0;
  cplx p = 1.0;
  double u = 1.0;
  double prev = std::numeric_limits<double>::infinity();
  double last = 1.0;
  for (int k = 1; k <= 60; ++k) {
    u *= double(6 * k - 5) * double(6 * k - 3) * double(6 * k - 1) /
         (216.0 * k * double(2 * k - 1));
    double v = u * double(6 * k + 1) / double(1 - 6 * k);
    p *= -inv;
    cplx ta = u * p;
    double mag = std::abs(ta);
    if (mag >= prev) break;  // past optimal truncation
    Sa += ta;
    Sap += v * p;
    prev = mag;
    last = mag;
  }
  AiExp r;
  const cplx damp = std::exp(-zeta);
  r.ai = damp / (2.0 * sqrtpi * z14) * Sa;
  r.aip = -z14 * damp / (2.0 * sqrtpi) * Sap;
  r.relerr = last / std::max(std::abs(Sa), 1e-300);
  return r;
}

const cplx kI{0.0, 1.0};
const cplx kRot = std::exp(kI * kTwoPiThird);    // e^{2 pi i/3}
const cplx kRotI = std::exp(-kI * kTwoPiThird);  // e^{-2 pi i/3}

// Ai at any argument. Past |arg z| = 2*pi/3 the three-fold connection
//   Ai(z) = -[e^{-2 pi i/3} Ai(z e^{-2 pi i/3}) + e^{2 pi i/3} Ai(z e^{2 pi i/3})]
// moves both evaluations back inside the single-exponential sector, so every
// expansion runs at its truncation floor no matter where z sits.
AiExp ai_safe(cplx z) {
  if (std::abs(std::arg(z)) <= kTwoPiThird) return ai_expansion(z);
  AiExp up = ai_expansion(z * kRot);
  AiExp dn = ai_expansion(z * kRotI);
  AiExp r;
  r.ai = -(kRotI * dn.ai + kRot * up.ai);
  r.aip = -(kRot * dn.aip + kRotI * up.aip);
  r.relerr = std::max(up.relerr, dn.relerr);
  return r;
}

}  // namespace

AiryValues airy_asymptotic(cplx z) {
  AiExp a = ai_safe(z);
  AiExp up = ai_safe(z * kRot);
  AiExp dn = ai_safe(z * kRotI);

  AiryValues r;
  r.Ai = a.ai;
  r.Aip = a.aip;
  const cplx e16 = std::exp(kI * (M_PI / 6.0));
  const cplx e56 = std::exp(kI * (5.0 * M_PI / 6.0));
  r.Bi = e16 * up.ai + std::conj(e16) * dn.ai;
  r.Bip = e56 * up.aip + std::conj(e56) * dn.aip;
  r.degraded = std::max({a.relerr, up.relerr, dn.relerr}) > 1e-11;
  return r;
}

}  // namespace detail

AiryValues airy_pair(cplx z) {
  if (std::abs(z) <= kAirySwitchRadius) return detail::airy_series(z);
  return detail::airy_asymptotic(z);
}

// ---------------------------------------------------------------------------

double gamma_fn(double x) {
  // Lanczos, g = 7
  static const double c[9] = {0.99999999999980993,
                              676.5203681218851,
                              -1259.1392167224028,
                              771.32342877765313,
                              -176.61502916214059,
                              12.507343278686905,
                              -0.13857109526572012,
                              9.9843695780195716e-6,
                              1.5056327351493116e-7};
  if (x < 0.5) return M_PI / (std::sin(M_PI * x) * gamma_fn(1.0 - x));
  x -= 1.0;
  double a = c[0];
  for (int k = 1; k < 9; ++k) a += c[k] / (x + k);
  double t = x + 7.5;
  return std::sqrt(2.0 * M_PI) * std::pow(t, x + 0.5) * std::exp(-t) * a;
}

namespace {

void check_lower_params(const std::vector<cplx>& den) {
  for (cplx b : den) {
    double r = std::round(b.real());
    if (std::abs(b.imag()) < 1e-14 && std::abs(b.real() - r) < 1e-12 &&
        r <= 0.0)
      throw std::domain_error(
          "hypergeometric lower parameter at a non-positive integer");
  }
}

HypResult hyp_series(const std::vector<cplx>& num, const std::vector<cplx>& den,
                     cplx x) {
  check_lower_params(den);
  cplx sum = 1.0, term = 1.0;
  int small_streak = 0;
  for (int n = 0; n < 500; ++n) {
    cplx ratio = x / double(n + 1);
    for (cplx a : num) ratio *= a + double(n);
    for (cplx b : den) ratio /= b + double(n);
    term *= ratio;
    sum += term;
    if (!std::isfinite(std::abs(sum))) return {sum, false, n + 1};
    if (std::abs(term) <= 1e-16 * std::abs(sum)) {
      if (++small_streak == 2) return {sum, true, n + 1};
    } else {
      small_streak = 0;
    }
  }
  return {sum, false, 500};
}

}  // namespace

HypResult hyp1f2(cplx a, cplx b1, cplx b2, cplx x) {
  return hyp_series({a}, {b1, b2}, x);
}

HypResult hyp2f3(cplx a1, cplx a2, cplx b1, cplx b2, cplx b3, cplx x) {
  return hyp_series({a1, a2}, {b1, b2, b3}, x);
}

// ---------------------------------------------------------------------------

const char* regime_name(Regime r) {
  switch (r) {
    case Regime::airy:
      return "airy";
    case Regime::quartic_bessel:
      return "quartic-bessel";
    case Regime::generic_series:
      return "generic-series";
  }
  return "?";
}

namespace {

cplx hyp_checked(cplx a, cplx b1, cplx b2, cplx x) {
  HypResult h = hyp1f2(a, b1, b2, x);
  if (!h.converged)
    throw std::runtime_error("quartic pair hypergeometric did not converge");
  return h.value;
}

// stride-6 series sum_n (-1)^n (beta/6)^{2n} Gamma(a)/(Gamma(a+n) n!) t^{base+6n}
TruncatedSeries stride6_series(double beta, double a, int base, double scale,
                               int order) {
  TruncatedSeries s(Var::t, order);
  const double b2 = (beta / 6.0) * (beta / 6.0);
  const double ga = gamma_fn(a);
  double fact = 1.0, pw = 1.0, sign = 1.0;
  for (int n = 0; base + 6 * n <= order; ++n) {
    if (n > 0) {
      fact *= n;
      pw *= b2;
      sign = -sign;
    }
    s.set_coeff(base + 6 * n, scale * sign * pw * ga / (gamma_fn(a + n) * fact));
  }
  return s;
}

}  // namespace

TruncatedSeries quartic_y1_series(double beta, int order) {
  return stride6_series(beta, 7.0 / 6.0, 1, 1.0, order);
}

TruncatedSeries quartic_y2_series(double beta, int order) {
  return stride6_series(beta, 5.0 / 6.0, 0, 1.0, order);
}

TruncatedSeries quartic_dy1_series(double beta, int order) {
  return stride6_series(beta, 1.0 / 6.0, 0, 1.0, order);
}

TruncatedSeries quartic_dy2_series(double beta, int order) {
  return stride6_series(beta, 11.0 / 6.0, 5, -beta * beta / 5.0, order);
}

FundamentalPair quartic_pair(double beta) {
  FundamentalPair p;
  p.regime = Regime::quartic_bessel;
  p.wronskian = -1.0;
  p.potential = pure_quartic(beta);
  const double b2 = beta * beta;
  p.y1 = [b2](cplx t) -> std::pair<cplx, cplx> {
    cplx t6 = std::pow(t, 6);
    cplx x = -b2 * t6 / 36.0;
    return {t * hyp_checked(1.0, 1.0, 7.0 / 6.0, x),
            hyp_checked(1.0, 1.0, 1.0 / 6.0, x)};
  };
  p.y2 = [b2](cplx t) -> std::pair<cplx, cplx> {
    cplx t6 = std::pow(t, 6);
    cplx x = -b2 * t6 / 36.0;
    return {hyp_checked(1.0, 1.0, 5.0 / 6.0, x),
            -(b2 * std::pow(t, 5) / 5.0) * hyp_checked(1.0, 1.0, 11.0 / 6.0, x)};
  };
  return p;
}

FundamentalPair airy_as_pair() {
  FundamentalPair p;
  p.regime = Regime::airy;
  p.wronskian = 1.0 / M_PI;
  p.potential = airy_potential();
  p.y1 = [](cplx z) -> std::pair<cplx, cplx> {
    AiryValues v = airy_pair(z);
    return {v.Ai, v.Aip};
  };
  p.y2 = [](cplx z) -> std::pair<cplx, cplx> {
    AiryValues v = airy_pair(z);
    return {v.Bi, v.Bip};
  };
  return p;
}

}  // namespace ptlz
