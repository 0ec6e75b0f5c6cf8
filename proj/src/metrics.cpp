// Copyright 2026 The QSL Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qsl/metrics.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <ostream>
#include <string>

namespace qsl {

namespace {

void require_same_width(int a, int b, const char* what) {
  if (a != b) {
    throw ValidationError(std::string(what) + ": width mismatch (" + std::to_string(a) + " vs " +
                          std::to_string(b) + ")");
  }
}

std::string fmt(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return {buf, static_cast<std::size_t>(r.ptr - buf)};
}

}  // namespace

XebResult xeb(const SampleSet& samples, const ExplicitDistribution& truth) {
  require_same_width(samples.n, truth.n(), "xeb");
  if (samples.empty()) throw ValidationError("xeb of an empty sample set");
  const double dim = static_cast<double>(truth.size());
  // Welford running mean/variance of 2^n truth[s].
  double mean = 0.0;
  double m2 = 0.0;
  std::uint64_t k = 0;
  for (std::uint64_t s : samples.samples) {
    if (s >= truth.size()) throw ValidationError("xeb: sample outside the distribution's range");
    const double v = dim * truth[s];
    ++k;
    const double delta = v - mean;
    mean += delta / static_cast<double>(k);
    m2 += delta * (v - mean);
  }
  XebResult r;
  r.sample_count = k;
  r.fidelity = mean - 1.0;
  r.standard_error = k > 1 ? std::sqrt(m2 / static_cast<double>(k - 1) / static_cast<double>(k)) : 0.0;
  return r;
}

double xeb_raw(const SampleSet& samples, const ExplicitDistribution& truth) {
  require_same_width(samples.n, truth.n(), "xeb_raw");
  double sum = 0.0;
  for (std::uint64_t s : samples.samples) {
    if (s >= truth.size()) throw ValidationError("xeb_raw: sample outside the distribution's range");
    sum += truth[s];
  }
  return 2.0 * sum - 1.0;
}

double expected_xeb(const ExplicitDistribution& generator, const ExplicitDistribution& truth) {
  require_same_width(generator.n(), truth.n(), "expected_xeb");
  double acc = 0.0;
  for (std::uint64_t j = 0; j < truth.size(); ++j) acc += generator[j] * truth[j];
  return static_cast<double>(truth.size()) * acc - 1.0;
}

Chi2Result chi2_test(std::span<const std::uint64_t> observed, const ExplicitDistribution& null) {
  if (observed.size() != null.size()) {
    throw ValidationError("chi2: " + std::to_string(observed.size()) + " bins observed, null has " +
                          std::to_string(null.size()));
  }
  std::uint64_t total = 0;
  for (auto x : observed) total += x;
  if (total == 0) throw ValidationError("chi2: no observations");
  const double N = static_cast<double>(total);
  double stat = 0.0;
  std::uint64_t bins = 0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double p = null[i];
    if (p <= 0.0) {
      if (observed[i] > 0) {
        throw ValidationError("chi2: " + std::to_string(observed[i]) +
                              " observations in bin " + std::to_string(i) +
                              " which has null probability 0");
      }
      continue;
    }
    ++bins;
    const double m = N * p;
    const double d = static_cast<double>(observed[i]) - m;
    stat += d * d / m;
  }
  Chi2Result r;
  r.statistic = stat;
  r.degrees_of_freedom = static_cast<int>(std::max<std::uint64_t>(1, bins - 1));
  r.p_value = stat == 0.0 ? 1.0 : regularized_gamma_q(0.5 * r.degrees_of_freedom, 0.5 * stat);
  return r;
}

Chi2Result chi2_test(const SampleSet& samples, const ExplicitDistribution& null) {
  require_same_width(samples.n, null.n(), "chi2");
  const auto counts = count_samples(samples);
  return chi2_test(counts, null);
}

double entropy(const ExplicitDistribution& dist) {
  // Summed in sorted order so any relabeling of outcomes gives the same bits.
  std::vector<double> sorted(dist.probs().begin(), dist.probs().end());
  std::sort(sorted.begin(), sorted.end());
  double h = 0.0;
  for (double p : sorted) {
    if (p > 0.0) h -= p * std::log(p);
  }
  return h;
}

double pt_reference_entropy(int n) { return n * std::numbers::ln2 - 1.0 + kEulerGamma; }

double l1_distance(const ExplicitDistribution& a, const ExplicitDistribution& b) {
  require_same_width(a.n(), b.n(), "l1_distance");
  double acc = 0.0;
  for (std::uint64_t i = 0; i < a.size(); ++i) acc += std::abs(a[i] - b[i]);
  return acc;
}

double total_variation(const ExplicitDistribution& a, const ExplicitDistribution& b) {
  return 0.5 * l1_distance(a, b);
}

void walsh_hadamard(std::span<double> values) {
  const std::size_t size = values.size();
  for (std::size_t h = 1; h < size; h <<= 1) {
    for (std::size_t i = 0; i < size; i += 2 * h) {
      for (std::size_t j = i; j < i + h; ++j) {
        const double x = values[j];
        const double y = values[j + h];
        values[j] = x + y;
        values[j + h] = x - y;
      }
    }
  }
}

namespace {

// Probability that the bits at `positions` equal `bits` (bit k of `bits` is
// the value at positions[k]), from Walsh coefficients.
double marginal(std::span<const double> coeffs, const std::vector<int>& positions,
                std::uint32_t bits) {
  const auto k = positions.size();
  double acc = 0.0;
  for (std::uint32_t sub = 0; sub < (1U << k); ++sub) {
    std::uint64_t mask = 0;
    for (std::size_t b = 0; b < k; ++b) {
      if ((sub >> b) & 1U) mask |= std::uint64_t{1} << positions[b];
    }
    const int sign = std::popcount(sub & bits) & 1;
    acc += sign ? -coeffs[mask] : coeffs[mask];
  }
  return acc / static_cast<double>(1U << k);
}

void for_each_subset(int n, int size, int exclude, const std::function<void(const std::vector<int>&)>& f) {
  std::vector<int> pool;
  for (int q = 0; q < n; ++q) {
    if (q != exclude) pool.push_back(q);
  }
  if (size > static_cast<int>(pool.size())) return;
  std::vector<int> idx(static_cast<std::size_t>(size));
  for (int i = 0; i < size; ++i) idx[i] = i;
  std::vector<int> chosen(static_cast<std::size_t>(size));
  for (;;) {
    for (int i = 0; i < size; ++i) chosen[i] = pool[idx[i]];
    f(chosen);
    int i = size - 1;
    while (i >= 0 && idx[i] == static_cast<int>(pool.size()) - size + i) --i;
    if (i < 0) return;
    ++idx[i];
    for (int j = i + 1; j < size; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace

ConditionalReport conditional_report(const ExplicitDistribution& dist, int max_order) {
  const int n = dist.n();
  if (max_order < 1 || max_order > 3) throw ValidationError("conditional order must be 1, 2 or 3");
  if (max_order >= n) {
    throw ValidationError("conditional order " + std::to_string(max_order) +
                          " needs more than that many bits, n = " + std::to_string(n));
  }
  if (max_order == 3 && n > 20) throw ResourceError("order-3 conditionals are limited to n <= 20");
  if (n > kDefaultQubitCap) throw ResourceError("conditional report limited to n <= 26");

  std::vector<double> coeffs(dist.probs().begin(), dist.probs().end());
  walsh_hadamard(coeffs);

  ConditionalReport report;
  report.n = n;
  report.max_order = max_order;
  report.max_deviation.assign(static_cast<std::size_t>(max_order), 0.0);
  for (int order = 1; order <= max_order; ++order) {
    double& dev = report.max_deviation[static_cast<std::size_t>(order - 1)];
    for (int target = 0; target < n; ++target) {
      for_each_subset(n, order, target, [&](const std::vector<int>& cond) {
        std::vector<int> joint = cond;
        joint.push_back(target);
        for (std::uint32_t a = 0; a < (1U << order); ++a) {
          ConditionalEntry e;
          e.order = order;
          e.target = target;
          e.conditioning = cond;
          e.assignment = a;
          const double p_cond = marginal(coeffs, cond, a);
          if (p_cond > kConditionalEventFloor) {
            const double p_joint = marginal(coeffs, joint, a | (1U << order));
            const double p = std::clamp(p_joint / p_cond, 0.0, 1.0);
            e.probability = p;
            dev = std::max(dev, std::abs(p - 0.5));
          }
          report.entries.push_back(std::move(e));
        }
      });
    }
  }
  return report;
}

namespace {

struct Line {
  double b, a, c, sse;
};

Line solve_linear(std::span<const std::pair<double, double>> pts, double b) {
  // Least squares for y ~ a u + c with u = exp(b x).
  double su = 0, sy = 0, suu = 0, suy = 0;
  const double m = static_cast<double>(pts.size());
  for (const auto& [x, y] : pts) {
    const double u = std::exp(b * x);
    su += u;
    sy += y;
    suu += u * u;
    suy += u * y;
  }
  const double det = m * suu - su * su;
  Line out{b, 0.0, sy / m, 0.0};
  if (std::abs(det) > 1e-12 * m * suu && std::isfinite(det)) {
    out.a = (m * suy - su * sy) / det;
    out.c = (sy - out.a * su) / m;
  }
  for (const auto& [x, y] : pts) {
    const double r = y - out.a * std::exp(b * x) - out.c;
    out.sse += r * r;
  }
  if (!std::isfinite(out.sse)) out.sse = std::numeric_limits<double>::infinity();
  return out;
}

}  // namespace

ExpFit fit_exponential(std::span<const std::pair<double, double>> points) {
  if (points.size() < 4) throw ValidationError("exponential fit needs at least 4 points");
  std::vector<double> xs;
  for (const auto& p : points) xs.push_back(p.first);
  std::sort(xs.begin(), xs.end());
  if (std::adjacent_find(xs.begin(), xs.end()) != xs.end()) {
    throw ValidationError("exponential fit needs distinct x values");
  }
  double mean = 0.0;
  for (const auto& p : points) mean += p.second;
  mean /= static_cast<double>(points.size());
  bool constant = true;
  for (const auto& p : points) constant = constant && p.second == points.front().second;
  if (constant) return {0.0, 0.0, mean, 0.0, true};

  const double span = xs.back() - xs.front();
  const double bound = 20.0 / span;
  constexpr int kScan = 401;
  std::vector<Line> scan;
  scan.reserve(kScan);
  for (int i = 0; i < kScan; ++i) {
    scan.push_back(solve_linear(points, -bound + 2.0 * bound * i / (kScan - 1)));
  }
  const auto best = static_cast<int>(std::min_element(scan.begin(), scan.end(),
                                                      [](const Line& l, const Line& r) { return l.sse < r.sse; }) -
                                     scan.begin());
  double lo = scan[std::max(0, best - 1)].b;
  double hi = scan[std::min(kScan - 1, best + 1)].b;

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  Line f1 = solve_linear(points, x1);
  Line f2 = solve_linear(points, x2);
  for (int it = 0; it < 200 && (hi - lo) > 1e-15 * (1.0 + std::abs(lo) + std::abs(hi)); ++it) {
    if (f1.sse < f2.sse) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = solve_linear(points, x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = solve_linear(points, x2);
    }
  }
  Line fit = f1.sse < f2.sse ? f1 : f2;
  if (scan[best].sse < fit.sse) fit = scan[best];
  ExpFit out;
  out.a = fit.a;
  out.b = fit.b;
  out.c = fit.c;
  out.rms_residual = std::sqrt(fit.sse / static_cast<double>(points.size()));
  if (out.a == 0.0) out.degenerate = true;
  return out;
}

void write_xeb_csv(std::ostream& out, const XebResult& r) {
  out << "F,N,stderr\n" << fmt(r.fidelity) << ',' << r.sample_count << ',' << fmt(r.standard_error) << '\n';
}

void write_chi2_csv(std::ostream& out, const Chi2Result& r) {
  out << "stat,dof,p\n" << fmt(r.statistic) << ',' << r.degrees_of_freedom << ',' << fmt(r.p_value) << '\n';
}

void write_conditional_csv(std::ostream& out, const ConditionalReport& r) {
  out << "order,target,conditioning,assignment,probability\n";
  for (const auto& e : r.entries) {
    out << e.order << ',' << e.target << ',';
    for (std::size_t k = 0; k < e.conditioning.size(); ++k) {
      if (k) out << ';';
      out << e.conditioning[k];
    }
    out << ',';
    for (std::size_t k = 0; k < e.conditioning.size(); ++k) {
      out << (((e.assignment >> k) & 1U) ? '1' : '0');
    }
    out << ',';
    if (e.probability) out << fmt(*e.probability);
    else out << "undefined";
    out << '\n';
  }
}

}  // namespace qsl
