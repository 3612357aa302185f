// Test functions for correlation sums: boxes of any arity, the triangle
// f(x) = max(0, 1 - |x|) and the pyramid
// g(w1, w2) = max(0, 1 - max(|w1|, |w2|, |w1 + w2|)).
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "corrlab/error.hpp"

namespace corrlab {

class TestKernel {
 public:
  enum class Shape { box, triangle, pyramid };

  /// Indicator of the closed box prod [lo_i, hi_i]; empty when some lo_i >= hi_i.
  static TestKernel box(std::vector<double> lo, std::vector<double> hi) {
    require(!lo.empty() && lo.size() == hi.size(),
            "TestKernel::box: bounds must have equal, positive length");
    for (std::size_t i = 0; i < lo.size(); ++i) {
      require(std::isfinite(lo[i]) && std::isfinite(hi[i]) && lo[i] <= hi[i],
              "TestKernel::box: need finite bounds with lo <= hi");
    }
    TestKernel k(Shape::box, static_cast<int>(lo.size()));
    k.lo_ = std::move(lo);
    k.hi_ = std::move(hi);
    return k;
  }
  static TestKernel box1d(double s, double t) { return box({s}, {t}); }
  static TestKernel box2d(double s1, double t1, double s2, double t2) {
    return box({s1, s2}, {t1, t2});
  }
  static TestKernel triangle() { return TestKernel(Shape::triangle, 1); }
  static TestKernel pyramid() { return TestKernel(Shape::pyramid, 2); }

  Shape shape() const { return shape_; }
  int arity() const { return arity_; }
  bool is_box() const { return shape_ == Shape::box; }
  const std::vector<double>& lo() const { return lo_; }
  const std::vector<double>& hi() const { return hi_; }

  bool empty_support() const {
    if (shape_ != Shape::box) return false;
    for (std::size_t i = 0; i < lo_.size(); ++i) {
      if (!(lo_[i] < hi_[i])) return true;
    }
    return false;
  }

  /// Smallest S with support inside [-S, S]^arity.
  double support_radius() const {
    if (shape_ != Shape::box) return 1.0;
    double s = 0.0;
    for (std::size_t i = 0; i < lo_.size(); ++i) {
      s = std::max({s, std::fabs(lo_[i]), std::fabs(hi_[i])});
    }
    return s;
  }

  /// Box test on one coordinate; used for pruning.
  bool coordinate_inside(std::size_t i, double w) const {
    return lo_[i] < hi_[i] && lo_[i] <= w && w <= hi_[i];
  }

  double operator()(std::span<const double> w) const {
    if (static_cast<int>(w.size()) != arity_) {
      fail(ErrorKind::precondition, "kernel_eval: expected " +
                                        std::to_string(arity_) +
                                        " coordinates, got " +
                                        std::to_string(w.size()));
    }
    switch (shape_) {
      case Shape::box:
        for (std::size_t i = 0; i < w.size(); ++i) {
          if (!coordinate_inside(i, w[i])) return 0.0;
        }
        return 1.0;
      case Shape::triangle: return std::max(0.0, 1.0 - std::fabs(w[0]));
      case Shape::pyramid: {
        const double u = w[0], v = w.size() > 1 ? w[1] : 0.0;
        double spread = std::max({std::fabs(u), std::fabs(v), std::fabs(u + v)});
        return std::max(0.0, 1.0 - spread);
      }
    }
    return 0.0;
  }
  double operator()(std::initializer_list<double> w) const {
    return (*this)(std::span<const double>(w.begin(), w.size()));
  }

  double integral() const {
    switch (shape_) {
      case Shape::box: {
        double v = 1.0;
        for (std::size_t i = 0; i < lo_.size(); ++i) v *= hi_[i] - lo_[i];
        return v;
      }
      case Shape::triangle: return 1.0;
      case Shape::pyramid: return 1.0;
    }
    return 0.0;
  }

  bool has_fourier() const { return shape_ != Shape::pyramid; }

  /// ghat(xi) = integral g(w) e(-xi . w) dw.
  std::complex<double> fourier(std::span<const double> xi) const {
    require(static_cast<int>(xi.size()) == arity_,
            "kernel_fourier: dimension mismatch");
    switch (shape_) {
      case Shape::box: {
        std::complex<double> v = 1.0;
        for (std::size_t i = 0; i < xi.size(); ++i) {
          v *= box_side_fourier(lo_[i], hi_[i], xi[i]);
        }
        return v;
      }
      case Shape::triangle: {
        double s = sinc(xi[0]);
        return s * s;
      }
      case Shape::pyramid: break;
    }
    fail(ErrorKind::precondition, "kernel_fourier: pyramid has no closed form");
  }
  std::complex<double> fourier(std::initializer_list<double> xi) const {
    return fourier(std::span<const double>(xi.begin(), xi.size()));
  }

  std::string name() const {
    switch (shape_) {
      case Shape::triangle: return "triangle";
      case Shape::pyramid: return "pyramid";
      case Shape::box: break;
    }
    std::ostringstream out;
    out << "box" << arity_ << "d(";
    for (std::size_t i = 0; i < lo_.size(); ++i) {
      if (i) out << ',';
      out << lo_[i] << ',' << hi_[i];
    }
    out << ')';
    return out.str();
  }

  static double sinc(double x) {
    if (x == 0.0) return 1.0;
    double px = std::numbers::pi * x;
    return std::sin(px) / px;
  }

 private:
  TestKernel(Shape shape, int arity) : shape_(shape), arity_(arity) {}

  static std::complex<double> box_side_fourier(double s, double t, double xi) {
    if (!(s < t)) return 0.0;
    if (xi == 0.0) return t - s;
    // (e(-xi s) - e(-xi t)) / (2 pi i xi), written through the midpoint
    double mid = 0.5 * (s + t), half = 0.5 * (t - s);
    double amp = (t - s) * sinc(2.0 * xi * half);
    double ang = -2.0 * std::numbers::pi * xi * mid;
    return std::polar(amp, ang);
  }

  Shape shape_;
  int arity_;
  std::vector<double> lo_, hi_;
};

}  // namespace corrlab
