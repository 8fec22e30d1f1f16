#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

namespace duda {

/// Tolerances for the adaptive integrator.
struct QuadratureSpec {
  double rel_tol = 1e-8;
  double abs_tol = 1e-12;
  int max_subdivisions = 500;
  /// Probability mass of a density-weighted tail that may be dropped when a
  /// semi-infinite outer integral is truncated to a finite range.
  double tail_cutoff_mass = 1e-14;

  /// Same spec, one decade tighter; used for inner integrals of nested
  /// quadratures.
  QuadratureSpec tightened() const {
    QuadratureSpec s = *this;
    s.rel_tol *= 0.1;
    s.abs_tol *= 0.1;
    return s;
  }
};

template <typename Scalar>
struct QuadratureResult {
  Scalar value = 0;
  Scalar error = 0;
  int subdivisions = 0;
  bool converged = false;
};

/// Thrown by callers that require a converged integral.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double achieved_error)
      : std::runtime_error(what), achieved_error_(achieved_error) {}
  double achieved_error() const { return achieved_error_; }

 private:
  double achieved_error_;
};

bool is_valid(const QuadratureSpec& spec);

namespace detail {

// 7-point Gauss / 15-point Kronrod abscissae and weights on [-1, 1].
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <typename Scalar>
struct Segment {
  Scalar lo, hi, value, error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

/// Kronrod estimate and QUADPACK-style error estimate on [lo, hi].
template <typename Scalar, typename F>
Segment<Scalar> gauss_kronrod_15(const F& f, Scalar lo, Scalar hi) {
  using std::abs;
  using std::min;
  using std::pow;
  const Scalar center = Scalar(0.5) * (lo + hi);
  const Scalar half = Scalar(0.5) * (hi - lo);
  const Scalar fc = f(center);
  Scalar gauss = fc * Scalar(kWg[3]);
  Scalar kronrod = fc * Scalar(kWgk[7]);
  Scalar abs_sum = abs(kronrod);
  std::array<Scalar, 7> f1{}, f2{};
  for (int j = 0; j < 7; ++j) {
    const Scalar dx = half * Scalar(kXgk[j]);
    f1[j] = f(center - dx);
    f2[j] = f(center + dx);
    kronrod += Scalar(kWgk[j]) * (f1[j] + f2[j]);
    abs_sum += Scalar(kWgk[j]) * (abs(f1[j]) + abs(f2[j]));
    if (j % 2 == 1) gauss += Scalar(kWg[j / 2]) * (f1[j] + f2[j]);
  }
  const Scalar mean = Scalar(0.5) * kronrod;
  Scalar asc = Scalar(kWgk[7]) * abs(fc - mean);
  for (int j = 0; j < 7; ++j) {
    asc += Scalar(kWgk[j]) * (abs(f1[j] - mean) + abs(f2[j] - mean));
  }
  const Scalar habs = abs(half);
  Scalar err = abs((kronrod - gauss) * half);
  asc *= habs;
  if (asc != Scalar(0) && err != Scalar(0)) {
    err = asc * min(Scalar(1), pow(Scalar(200) * err / asc, Scalar(1.5)));
  }
  const Scalar eps = std::numeric_limits<Scalar>::epsilon();
  const Scalar round_off = abs_sum * habs * Scalar(50) * eps;
  if (round_off > std::numeric_limits<Scalar>::min() / (Scalar(50) * eps)) {
    if (err < round_off) err = round_off;
  }
  return {lo, hi, kronrod * half, err};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod integration of f over [a, b]: the segment
/// with the largest error estimate is bisected until the summed error meets
/// max(abs_tol, rel_tol * |value|) or max_subdivisions is exhausted.
template <typename Scalar, typename F>
QuadratureResult<Scalar> integrate(const F& f, Scalar a, Scalar b,
                                   const QuadratureSpec& spec) {
  using std::abs;
  using std::max;
  std::priority_queue<detail::Segment<Scalar>> heap;
  auto first = detail::gauss_kronrod_15<Scalar>(f, a, b);
  Scalar value = first.value;
  Scalar error = first.error;
  heap.push(first);
  QuadratureResult<Scalar> out;
  int splits = 0;
  auto done = [&] {
    return error <= max(Scalar(spec.abs_tol), Scalar(spec.rel_tol) * abs(value));
  };
  while (!done() && splits < spec.max_subdivisions) {
    auto worst = heap.top();
    const Scalar mid = Scalar(0.5) * (worst.lo + worst.hi);
    // Interval too narrow to split further in this precision.
    if (!(mid > worst.lo && mid < worst.hi)) break;
    heap.pop();
    auto left = detail::gauss_kronrod_15<Scalar>(f, worst.lo, mid);
    auto right = detail::gauss_kronrod_15<Scalar>(f, mid, worst.hi);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++splits;
  }
  // Re-sum to drop the drift of the incremental updates.
  value = 0;
  error = 0;
  while (!heap.empty()) {
    value += heap.top().value;
    error += heap.top().error;
    heap.pop();
  }
  out.value = value;
  out.error = error;
  out.subdivisions = splits;
  out.converged = done();
  return out;
}

/// Integral of f over [a, inf) through x = a + scale * u / (1 - u), u in [0, 1).
/// `scale` should be of the order of the integrand's decay length.
template <typename Scalar, typename F>
QuadratureResult<Scalar> integrate_semi_infinite(const F& f, Scalar a,
                                                 const QuadratureSpec& spec,
                                                 Scalar scale = Scalar(1)) {
  auto mapped = [&](Scalar u) -> Scalar {
    const Scalar one_minus = Scalar(1) - u;
    if (!(one_minus > Scalar(0))) return Scalar(0);
    const Scalar x = a + scale * u / one_minus;
    const Scalar jac = scale / (one_minus * one_minus);
    const Scalar fx = f(x);
    if (fx == Scalar(0)) return Scalar(0);
    return fx * jac;
  };
  return integrate<Scalar>(mapped, Scalar(0), Scalar(1), spec);
}

/// Integral over [a, inf) of the interference kernel
///   kappa beta r^alpha x^-alpha / (1 + kappa beta r^alpha x^-alpha) * x dx.
/// Substituting x = x0 y with x0 = (kappa beta)^(1/alpha) r turns it into
/// x0^2 * int_{a/x0}^inf y / (1 + y^alpha) dy, which is what is integrated.
/// Throws std::domain_error for alpha <= 2 or invalid arguments.
template <typename Scalar>
QuadratureResult<Scalar> interference_tail_integral(Scalar kappa, Scalar beta,
                                                    Scalar r, Scalar alpha,
                                                    Scalar a,
                                                    const QuadratureSpec& spec) {
  using std::pow;
  if (!(alpha > Scalar(2))) {
    throw std::domain_error(
        "interference_tail_integral: alpha must exceed 2");
  }
  if (!(kappa >= Scalar(0)) || !(beta >= Scalar(0)) || !(r > Scalar(0)) ||
      !(a >= Scalar(0))) {
    throw std::domain_error(
        "interference_tail_integral: kappa, beta >= 0, r > 0, a >= 0 required");
  }
  QuadratureResult<Scalar> out;
  if (kappa == Scalar(0) || beta == Scalar(0)) {
    out.converged = true;
    return out;
  }
  const Scalar x0 = pow(kappa * beta, Scalar(1) / alpha) * r;
  const Scalar lower = a / x0;
  const Scalar area = x0 * x0;
  auto kernel = [alpha](Scalar y) -> Scalar {
    if (y < Scalar(1)) return y / (Scalar(1) + pow(y, alpha));
    const Scalar inv = pow(y, -alpha);
    return y * inv / (inv + Scalar(1));
  };
  QuadratureSpec inner = spec;
  // The result is scaled by x0^2 afterwards; never loosen the absolute target.
  if (area > Scalar(1)) inner.abs_tol = spec.abs_tol / static_cast<double>(area);
  const Scalar scale = lower > Scalar(1) ? lower : Scalar(1);
  auto res = integrate_semi_infinite<Scalar>(kernel, lower, inner, scale);
  out.value = res.value * area;
  out.error = res.error * area;
  out.subdivisions = res.subdivisions;
  out.converged = res.converged;
  return out;
}

}  // namespace duda
