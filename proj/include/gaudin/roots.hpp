#ifndef GAUDIN_ROOTS_HPP
#define GAUDIN_ROOTS_HPP

#include <algorithm>
#include <cmath>
#include <vector>

#include "gaudin/polynomial.hpp"

namespace gaudin {

namespace detail {

inline void horner_both(const Polynomial<MpComplex>& p, const MpComplex& x,
                        MpComplex& val, MpComplex& der) {
  val = MpComplex(0L);
  der = MpComplex(0L);
  for (int k = p.degree(); k >= 0; --k) {
    der = der * x + val;
    val = val * x + p[k];
  }
}

inline MpReal rebuild_error(const Polynomial<MpComplex>& target_monic,
                            const std::vector<MpComplex>& centers,
                            const std::vector<int>& mult) {
  std::vector<MpComplex> expanded;
  for (std::size_t i = 0; i < centers.size(); ++i)
    for (int m = 0; m < mult[i]; ++m) expanded.push_back(centers[i]);
  Polynomial<MpComplex> rebuilt = from_roots(expanded);
  MpReal err(0L);
  int d = target_monic.degree();
  for (int k = 0; k <= d; ++k) {
    MpReal e = abs(rebuilt[k] - target_monic[k]);
    if (e > err) err = e;
  }
  MpReal scale = target_monic.coeff_scale();
  if (scale.is_zero()) return err;
  return err / scale;
}

}  // namespace detail

// All roots of p with multiplicity, as a vector sorted by (real part,
// imaginary part).  Aberth-Ehrlich simultaneous iteration at the requested
// precision; clusters that stall around a multiple root are consolidated
// into their centroid, accepting a merge only when the polynomial rebuilt
// from the merged multiset still matches p within 2^{-precision/2} relative
// coefficient error.  Deterministic: no randomness anywhere.
inline std::vector<MpComplex> poly_roots(const Polynomial<MpComplex>& p,
                                         unsigned precision) {
  if (p.is_zero()) throw std::invalid_argument("poly_roots of zero polynomial");
  for (const auto& c : p.coeffs())
    if (!c.is_finite())
      throw std::invalid_argument("poly_roots: non-finite coefficient");
  int d = p.degree();
  if (d == 0) return {};

  unsigned wp = precision + 32;
  unsigned saved = config::precision();
  config::set_precision(wp);
  struct Restore {
    unsigned v;
    ~Restore() { config::set_precision(v); }
  } restore{saved};

  // Monic copy at working precision (raise precision before dividing so the
  // quotient is computed with the full mantissa).
  std::vector<MpComplex> mc(p.coeffs().begin(), p.coeffs().end());
  for (auto& c : mc)
    c = MpComplex(MpReal(0L) + c.real(), MpReal(0L) + c.imag());
  MpComplex lead = mc.back();
  for (auto& c : mc) c = c / lead;
  Polynomial<MpComplex> m(mc);

  if (d == 1) {
    std::vector<MpComplex> r{-m[0]};
    return r;
  }

  // Starting points on a circle of Cauchy-bound radius.
  double bound = 0.0;
  for (int k = 0; k < d; ++k)
    bound = std::max(bound, abs(m[k]).to_double());
  double radius = 1.0 + bound;
  if (!std::isfinite(radius)) radius = 1e30;
  std::vector<MpComplex> z(d);
  for (int i = 0; i < d; ++i) {
    double ang = 2.0 * M_PI * i / d + 0.376;
    z[i] = MpComplex(MpReal(radius * std::cos(ang)),
                     MpReal(radius * std::sin(ang)));
  }

  const MpReal tiny = MpReal::pow2(-static_cast<long>(wp) + 8);
  MpReal best_step;
  bool have_best = false;
  int stall = 0;
  const int max_iters = 1000;
  for (int it = 0; it < max_iters; ++it) {
    MpReal max_step(0L);
    for (int i = 0; i < d; ++i) {
      MpComplex val, der;
      detail::horner_both(m, z[i], val, der);
      if (val.is_zero()) continue;
      if (der.is_zero()) {
        // Critical point; deterministic kick off it.
        z[i] += MpComplex(MpReal::pow2(-12) * MpReal(static_cast<long>(i + 1)),
                          MpReal::pow2(-13));
        max_step = MpReal(1L);
        continue;
      }
      MpComplex newton = val / der;
      MpComplex rep(0L);
      bool coincident = false;
      for (int j = 0; j < d; ++j) {
        if (j == i) continue;
        MpComplex diff = z[i] - z[j];
        if (diff.is_zero()) {
          coincident = true;
          break;
        }
        rep += MpComplex(1L) / diff;
      }
      if (coincident) {
        z[i] += MpComplex(MpReal::pow2(-12) * MpReal(static_cast<long>(i + 1)),
                          -MpReal::pow2(-13));
        max_step = MpReal(1L);
        continue;
      }
      MpComplex denom = MpComplex(1L) - newton * rep;
      MpComplex delta = denom.is_zero() ? newton : newton / denom;
      z[i] -= delta;
      MpReal step = abs(delta) / (MpReal(1L) + abs(z[i]));
      if (step > max_step) max_step = step;
    }
    if (max_step <= tiny) break;
    if (!have_best || max_step < best_step) {
      best_step = max_step;
      have_best = true;
      stall = 0;
    } else if (++stall > 30) {
      break;  // multiple roots: the cluster has stopped contracting
    }
  }

  // Consolidate stalled clusters into centroids.
  std::vector<MpComplex> centers = z;
  std::vector<int> mult(d, 1);
  MpReal scale(0L);
  for (const auto& c : centers) {
    MpReal a = abs(c);
    if (a > scale) scale = a;
  }
  if (!scale.is_zero()) {
    const MpReal merge_radius =
        scale * MpReal::pow2(-static_cast<long>(precision) / 3);
    const MpReal floor_radius = scale * MpReal(1000L) *
                                MpReal::pow2(-static_cast<long>(precision));
    const MpReal accept = MpReal::pow2(-static_cast<long>(precision) / 2);
    bool merged = true;
    while (merged && centers.size() > 1) {
      merged = false;
      std::size_t bi = 0, bj = 0;
      MpReal bdist;
      bool have = false;
      for (std::size_t i = 0; i < centers.size(); ++i)
        for (std::size_t j = i + 1; j < centers.size(); ++j) {
          MpReal dist = abs(centers[i] - centers[j]);
          if (!have || dist < bdist) {
            bdist = dist;
            bi = i;
            bj = j;
            have = true;
          }
        }
      if (!have || bdist > merge_radius) break;
      std::vector<MpComplex> trial_c = centers;
      std::vector<int> trial_m = mult;
      long wi = trial_m[bi], wj = trial_m[bj];
      trial_c[bi] = (centers[bi] * MpComplex(wi) + centers[bj] * MpComplex(wj)) /
                    MpComplex(wi + wj);
      trial_m[bi] += trial_m[bj];
      trial_c.erase(trial_c.begin() + bj);
      trial_m.erase(trial_m.begin() + bj);
      bool ok = bdist <= floor_radius ||
                detail::rebuild_error(m, trial_c, trial_m) <= accept;
      if (ok) {
        centers = std::move(trial_c);
        mult = std::move(trial_m);
        merged = true;
      } else {
        break;
      }
    }
  }

  std::vector<MpComplex> out;
  for (std::size_t i = 0; i < centers.size(); ++i)
    for (int k = 0; k < mult[i]; ++k) out.push_back(centers[i]);
  std::sort(out.begin(), out.end(), [](const MpComplex& a, const MpComplex& b) {
    if (a.real() < b.real()) return true;
    if (b.real() < a.real()) return false;
    return a.imag() < b.imag();
  });
  return out;
}

inline std::vector<MpComplex> poly_roots(const Polynomial<Rational>& p,
                                         unsigned precision) {
  return poly_roots(convert_poly<MpComplex>(p), precision);
}

// Partition indices of a point list into groups of pairwise-linked points
// at the given distance threshold (single linkage).  Groups are ordered by
// their smallest member index; deterministic.
inline std::vector<std::vector<int>> cluster_by_distance(
    const std::vector<MpComplex>& pts, const MpReal& threshold) {
  int n = static_cast<int>(pts.size());
  std::vector<int> parent(n);
  for (int i = 0; i < n; ++i) parent[i] = i;
  auto find = [&](int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (abs(pts[i] - pts[j]) <= threshold) {
        int ra = find(i), rb = find(j);
        if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
      }
  std::vector<std::vector<int>> groups;
  std::vector<int> root_to_group(n, -1);
  for (int i = 0; i < n; ++i) {
    int r = find(i);
    if (root_to_group[r] < 0) {
      root_to_group[r] = static_cast<int>(groups.size());
      groups.emplace_back();
    }
    groups[root_to_group[r]].push_back(i);
  }
  return groups;
}

}  // namespace gaudin

#endif
