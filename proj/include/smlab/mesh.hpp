#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <sstream>
#include <string>
#include <vector>

#include "smlab/error.hpp"

namespace smlab {

enum class Grading { uniform, toward_left, toward_right, double_graded };

inline const char* to_string(Grading g) {
  switch (g) {
    case Grading::uniform: return "uniform";
    case Grading::toward_left: return "geometric-toward-left";
    case Grading::toward_right: return "geometric-toward-right";
    case Grading::double_graded: return "double-graded";
  }
  return "?";
}

// 1-D node set on [lo, hi].
//
// Every node is stored twice: as its distance from lo and as its distance from
// hi, each accumulated from its own end. Weights that are singular at an
// endpoint are then evaluated from a coordinate that keeps full relative
// precision there (a node at 1 - 1e-60 is representable as distance 1e-60).
class Mesh {
 public:
  Mesh() = default;

  static Mesh uniform(double lo, double hi, std::size_t elements) {
    check_interval(lo, hi, elements);
    std::vector<double> sizes(elements, (hi - lo) / static_cast<double>(elements));
    return Mesh(lo, hi, sizes, Grading::uniform, 1.0);
  }

  // Geometric grading from an element of size h_min at the graded end(s),
  // growing by 1/ratio per element until it meets a uniform interior.
  static Mesh graded(double lo, double hi, std::size_t elements, Grading grading, double ratio,
                     double h_min) {
    check_interval(lo, hi, elements);
    if (grading == Grading::uniform) return uniform(lo, hi, elements);
    check_ratio(ratio);
    const double length = hi - lo;
    if (!(h_min > 0.0) || h_min * elements >= length) {
      throw ParameterError("graded mesh: smallest element must be positive and below the mean size");
    }
    const int ends = grading == Grading::double_graded ? 2 : 1;
    const double growth = 1.0 / ratio;

    std::size_t k = 1;
    double h_u = 0.0;
    for (;; ++k) {
      if (ends * k >= elements) {
        throw ParameterError("graded mesh: too few elements for the requested grading");
      }
      const double graded_len = h_min * (std::pow(growth, static_cast<double>(k)) - 1.0) / (growth - 1.0);
      const double rest = length - ends * graded_len;
      if (rest <= 0.0) {
        throw ParameterError("graded mesh: too few elements for the requested grading");
      }
      h_u = rest / static_cast<double>(elements - ends * k);
      if (h_min * std::pow(growth, static_cast<double>(k)) >= h_u) break;
    }

    std::vector<double> graded_sizes(k);
    for (std::size_t i = 0; i < k; ++i) graded_sizes[i] = h_min * std::pow(growth, static_cast<double>(i));
    std::vector<double> sizes;
    sizes.reserve(elements);
    if (grading != Grading::toward_right) sizes.insert(sizes.end(), graded_sizes.begin(), graded_sizes.end());
    sizes.insert(sizes.end(), elements - ends * k, h_u);
    if (grading != Grading::toward_left) sizes.insert(sizes.end(), graded_sizes.rbegin(), graded_sizes.rend());
    return Mesh(lo, hi, sizes, grading, ratio);
  }

  // Fully geometric mesh: the first element at the graded end has size
  // L*ratio^(elements-1); each following node is a factor 1/ratio further out.
  static Mesh geometric(double lo, double hi, std::size_t elements, Grading side, double ratio) {
    check_interval(lo, hi, elements);
    check_ratio(ratio);
    if (side != Grading::toward_left && side != Grading::toward_right) {
      throw ParameterError("geometric mesh: side must be toward_left or toward_right");
    }
    const double length = hi - lo;
    // distances of the nodes from the graded end
    std::vector<double> dist(elements + 1);
    dist[0] = 0.0;
    for (std::size_t j = 1; j <= elements; ++j) {
      dist[j] = length * std::pow(ratio, static_cast<double>(elements - j));
    }
    dist[elements] = length;
    Mesh m;
    m.lo_ = lo;
    m.hi_ = hi;
    m.grading_ = side;
    m.ratio_ = ratio;
    const std::size_t n = elements + 1;
    m.from_lo_.resize(n);
    m.from_hi_.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t i = side == Grading::toward_left ? j : n - 1 - j;
      (side == Grading::toward_left ? m.from_lo_ : m.from_hi_)[i] = dist[j];
      (side == Grading::toward_left ? m.from_hi_ : m.from_lo_)[i] = length - dist[j];
    }
    // the far coordinate is accurate away from the graded end; near it the
    // near coordinate is what singular weights use
    m.validate();
    return m;
  }

  static Mesh from_nodes(const std::vector<double>& nodes) {
    if (nodes.size() < 2) throw InputError("mesh needs at least two nodes");
    Mesh m;
    m.lo_ = nodes.front();
    m.hi_ = nodes.back();
    m.grading_ = Grading::uniform;
    m.ratio_ = 1.0;
    m.from_lo_.resize(nodes.size());
    m.from_hi_.resize(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      m.from_lo_[i] = nodes[i] - m.lo_;
      m.from_hi_[i] = m.hi_ - nodes[i];
    }
    m.validate();
    return m;
  }

  // Bisect every element. The refined space contains the coarse one.
  Mesh refined() const {
    Mesh m;
    m.lo_ = lo_;
    m.hi_ = hi_;
    m.grading_ = grading_;
    m.ratio_ = ratio_;
    const std::size_t n = size();
    m.from_lo_.resize(2 * n - 1);
    m.from_hi_.resize(2 * n - 1);
    for (std::size_t i = 0; i < n; ++i) {
      m.from_lo_[2 * i] = from_lo_[i];
      m.from_hi_[2 * i] = from_hi_[i];
      if (i + 1 < n) {
        m.from_lo_[2 * i + 1] = 0.5 * (from_lo_[i] + from_lo_[i + 1]);
        m.from_hi_[2 * i + 1] = 0.5 * (from_hi_[i] + from_hi_[i + 1]);
      }
    }
    return m;
  }

  std::size_t size() const { return from_lo_.size(); }
  std::size_t elements() const { return size() - 1; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  Grading grading() const { return grading_; }
  double ratio() const { return ratio_; }

  double from_lo(std::size_t i) const { return from_lo_[i]; }
  double from_hi(std::size_t i) const { return from_hi_[i]; }

  double node(std::size_t i) const {
    return from_lo_[i] <= from_hi_[i] ? lo_ + from_lo_[i] : hi_ - from_hi_[i];
  }

  std::vector<double> nodes() const {
    std::vector<double> out(size());
    for (std::size_t i = 0; i < size(); ++i) out[i] = node(i);
    return out;
  }

  // Element length from whichever coordinate is more accurate.
  double length(std::size_t e) const {
    return from_lo_[e] <= from_hi_[e + 1] ? from_lo_[e + 1] - from_lo_[e] : from_hi_[e] - from_hi_[e + 1];
  }

  double min_length() const {
    double m = length(0);
    for (std::size_t e = 1; e < elements(); ++e) m = std::min(m, length(e));
    return m;
  }

  double max_length() const {
    double m = length(0);
    for (std::size_t e = 1; e < elements(); ++e) m = std::max(m, length(e));
    return m;
  }

  std::string describe() const {
    std::ostringstream os;
    os.precision(6);
    os << to_string(grading_) << " [" << lo_ << "," << hi_ << "] nodes=" << size();
    if (grading_ != Grading::uniform) os << " ratio=" << ratio_;
    os << " h_min=" << min_length() << " h_max=" << max_length();
    return os.str();
  }

 private:
  Mesh(double lo, double hi, const std::vector<double>& sizes, Grading grading, double ratio)
      : lo_(lo), hi_(hi), grading_(grading), ratio_(ratio) {
    const std::size_t n = sizes.size() + 1;
    from_lo_.assign(n, 0.0);
    from_hi_.assign(n, 0.0);
    for (std::size_t i = 1; i < n; ++i) from_lo_[i] = from_lo_[i - 1] + sizes[i - 1];
    for (std::size_t i = n - 1; i-- > 0;) from_hi_[i] = from_hi_[i + 1] + sizes[i];
    from_lo_[n - 1] = hi - lo;
    from_hi_[0] = hi - lo;
    validate();
  }

  static void check_interval(double lo, double hi, std::size_t elements) {
    if (!(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi)) throw ParameterError("mesh: need lo < hi");
    if (elements < 1) throw ParameterError("mesh: need at least one element");
  }

  static void check_ratio(double ratio) {
    if (!(ratio > 0.5 && ratio < 1.0)) throw ParameterError("mesh: geometric grading ratio must lie in (0.5, 1)");
  }

  void validate() const {
    // The far coordinate may round to a constant next to a strongly graded
    // end, so strictness is judged on the accurate one.
    for (std::size_t i = 0; i + 1 < size(); ++i) {
      if (from_lo_[i + 1] < from_lo_[i] || from_hi_[i + 1] > from_hi_[i] || !(length(i) > 0.0)) {
        throw ParameterError("mesh nodes must be strictly increasing");
      }
    }
  }

  double lo_ = 0.0;
  double hi_ = 1.0;
  Grading grading_ = Grading::uniform;
  double ratio_ = 1.0;
  std::vector<double> from_lo_;
  std::vector<double> from_hi_;
};

}  // namespace smlab
