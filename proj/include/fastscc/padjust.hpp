#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "fastscc/stats.hpp"

namespace fastscc {

enum class CorrectionMethod { None, Bonferroni, Holm, Hochberg, Hommel, BH, BY };

namespace detail {

// Stable order by p ascending, ties by input index.
inline std::vector<std::size_t> order_asc(const std::vector<double>& p) {
  std::vector<std::size_t> idx(p.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(),
                   [&p](std::size_t a, std::size_t b) { return p[a] < p[b]; });
  return idx;
}

inline std::vector<double> hommel_adjust(const std::vector<double>& p) {
  const std::size_t n = p.size();
  if (n == 1) return p;
  const auto o = order_asc(p);
  std::vector<double> ps(n);
  for (std::size_t i = 0; i < n; ++i) ps[i] = p[o[i]];

  double qmin = ps[0] * static_cast<double>(n);
  for (std::size_t i = 1; i < n; ++i)
    qmin = std::min(qmin, ps[i] * static_cast<double>(n) /
                              static_cast<double>(i + 1));
  std::vector<double> pa(n, qmin), q(n, qmin);
  for (std::size_t m = n - 1; m >= 2; --m) {
    const std::size_t cut = n - m + 1;  // 1-based boundary
    double q1 = ps[cut] * static_cast<double>(m) / 2.0;
    for (std::size_t i = cut + 1; i < n; ++i)
      q1 = std::min(q1, ps[i] * static_cast<double>(m) /
                            static_cast<double>(i - cut + 2));
    for (std::size_t i = 0; i < cut; ++i)
      q[i] = std::min(static_cast<double>(m) * ps[i], q1);
    for (std::size_t i = cut; i < n; ++i) q[i] = q[cut - 1];
    for (std::size_t i = 0; i < n; ++i) pa[i] = std::max(pa[i], q[i]);
  }
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i)
    out[o[i]] = std::min(1.0, std::max(pa[i], ps[i]));
  return out;
}

}  // namespace detail

// Multiple-testing adjustment; output is in the input order, each value
// capped at 1.
inline std::vector<double> adjust(const std::vector<double>& p,
                                  CorrectionMethod method) {
  if (p.empty()) throw std::invalid_argument("adjust: empty p-value vector");
  for (double v : p)
    if (!(v >= 0.0 && v <= 1.0))
      throw std::invalid_argument("adjust: invalid p-value");

  const std::size_t n = p.size();
  const double m = static_cast<double>(n);
  std::vector<double> out(n);

  switch (method) {
    case CorrectionMethod::None:
      return p;
    case CorrectionMethod::Bonferroni:
      for (std::size_t i = 0; i < n; ++i) out[i] = std::min(1.0, m * p[i]);
      return out;
    case CorrectionMethod::Holm: {
      const auto o = detail::order_asc(p);
      double running = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        running = std::max(running, (m - static_cast<double>(i)) * p[o[i]]);
        out[o[i]] = std::min(1.0, running);
      }
      return out;
    }
    case CorrectionMethod::Hochberg: {
      const auto o = detail::order_asc(p);
      double running = 1.0;
      for (std::size_t i = n; i-- > 0;) {
        running =
            std::min(running, (m - static_cast<double>(i)) * p[o[i]]);
        out[o[i]] = std::min(1.0, running);
      }
      return out;
    }
    case CorrectionMethod::Hommel:
      return detail::hommel_adjust(p);
    case CorrectionMethod::BH:
    case CorrectionMethod::BY: {
      double factor = 1.0;
      if (method == CorrectionMethod::BY) {
        factor = 0.0;
        for (std::size_t i = 1; i <= n; ++i)
          factor += 1.0 / static_cast<double>(i);
      }
      const auto o = detail::order_asc(p);
      double running = 1.0;
      for (std::size_t i = n; i-- > 0;) {
        running = std::min(running,
                           factor * m / static_cast<double>(i + 1) * p[o[i]]);
        out[o[i]] = std::min(1.0, running);
      }
      return out;
    }
  }
  throw std::invalid_argument("adjust: unknown correction method");
}

// Family-wise error rate of m independent tests at individual level alpha'.
inline double fwer_bonferroni(double alpha_prime, int m) {
  if (!(alpha_prime > 0.0 && alpha_prime < 1.0))
    throw std::invalid_argument("fwer_bonferroni: alpha' must be in (0,1)");
  if (m < 1) throw std::invalid_argument("fwer_bonferroni: m must be >= 1");
  return 1.0 - std::pow(1.0 - alpha_prime, static_cast<double>(m));
}

// Standard-normal upper quantile at level alpha/m.
inline double bonferroni_critical_value(double alpha, int m) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("bonferroni_critical_value: alpha in (0,1)");
  if (m < 1)
    throw std::invalid_argument("bonferroni_critical_value: m must be >= 1");
  return normal_quantile(1.0 - alpha / static_cast<double>(m));
}

}  // namespace fastscc
