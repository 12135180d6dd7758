#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>

namespace tritail {

// Compensated summation. Used for the big fixed-order reductions so that
// results do not depend on how work was split across threads.
struct KahanSum {
  double sum = 0.0;
  double carry = 0.0;

  void add(double x) {
    double y = x - carry;
    double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }

  // merging must happen in a fixed block order to stay deterministic
  void merge(const KahanSum& o) {
    add(o.sum);
    add(-o.carry);
  }

  double value() const { return sum; }
};

// One-pass mean/variance (Welford). merge() combines partials exactly like
// processing the right-hand block after the left one, so block-ordered merges
// give the same result on any thread count.
struct RunningStats {
  std::int64_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    count += 1;
    double d = x - mean;
    mean += d / static_cast<double>(count);
    m2 += d * (x - mean);
  }

  void merge(const RunningStats& o) {
    if (o.count == 0) return;
    if (count == 0) {
      *this = o;
      return;
    }
    double d = o.mean - mean;
    std::int64_t total = count + o.count;
    mean += d * static_cast<double>(o.count) / static_cast<double>(total);
    m2 += o.m2 + d * d * static_cast<double>(count) * static_cast<double>(o.count) /
                     static_cast<double>(total);
    count = total;
  }

  // sample variance (n-1 denominator); 0 for fewer than 2 observations
  double variance() const {
    if (count < 2) return 0.0;
    return m2 / static_cast<double>(count - 1);
  }

  double std_error() const {
    if (count < 1) return 0.0;
    return std::sqrt(variance() / static_cast<double>(count));
  }
};

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

// ordinary least squares through (x_i, y_i)
inline LineFit least_squares(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("least_squares: need two equal-length samples of size >= 2");
  double n = static_cast<double>(x.size());
  KahanSum sx, sy;
  for (double v : x) sx.add(v);
  for (double v : y) sy.add(v);
  double mx = sx.value() / n;
  double my = sy.value() / n;
  KahanSum sxx, sxy;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx.add((x[i] - mx) * (x[i] - mx));
    sxy.add((x[i] - mx) * (y[i] - my));
  }
  if (sxx.value() == 0.0) throw std::invalid_argument("least_squares: degenerate x values");
  LineFit f;
  f.slope = sxy.value() / sxx.value();
  f.intercept = my - f.slope * mx;
  return f;
}

// standard error of a binomial frequency estimate
inline double binomial_std_error(double freq, std::int64_t trials) {
  if (trials <= 0) return 0.0;
  double v = freq * (1.0 - freq) / static_cast<double>(trials);
  return v > 0.0 ? std::sqrt(v) : 0.0;
}

}  // namespace tritail
