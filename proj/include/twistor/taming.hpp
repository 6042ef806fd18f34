#pragma once

// Pointwise taming inequality |<A t, t>| > |B t| |t| on Lambda+, its
// classification by det(A), the pinching criterion, and sampled region
// scans.

#include <optional>
#include <string>
#include <vector>

#include "twistor/curvature.hpp"

namespace twistor {

enum class TamingClass { TamedJPlus, TamedJMinus, NotTamed };

std::string to_string(TamingClass c);

inline constexpr double kTamingDeadZone = 1e-9;

struct TamingVerdict {
  double margin = 0.0;
  double detA = 0.0;
  TamingClass cls = TamingClass::NotTamed;
  Vec3 argmin_theta = Vec3::UnitX();
  // |margin| <= kTamingDeadZone.
  bool degenerate = false;
};

struct MarginResult {
  double margin = 0.0;
  Vec3 argmin = Vec3::UnitX();
};

// min over unit t of |<A t, t>| - |B t|: Fibonacci lattice of 2048 points,
// Newton on both smooth branches from the 8 best seeds, and a global search
// along the kink <A t, t> = 0.
MarginResult taming_margin(const Mat3& A, const Mat3& B);

// Dense Fibonacci scan without polish (reference for tests).
MarginResult taming_margin_dense(const Mat3& A, const Mat3& B, int n_points);

std::vector<Vec3> fibonacci_sphere(int n);

TamingVerdict classify(const CurvatureBlocks& blocks);

struct PinchingVerdict {
  double kmin = 0.0;
  double kmax = 0.0;
  double ratio = 0.0;  // -infinity when the signs differ or either is zero
  bool two_fifths_pinched = false;
};

PinchingVerdict pinching_verdict(const CurvatureBlocks& blocks, int n_planes = 512);
PinchingVerdict pinching_verdict(const MetricChart& chart, const Point& x,
                                 int n_planes = 512);

// Tensor grid c + w * (-1 + 2k/(n-1)) per axis, keeping points whose
// distance from c lies in [r_min, r_max) (r_max <= 0 means no bound).
struct GridSpec {
  Point center{};
  double half_width = 0.5;
  int n = 4;
  double r_min = 0.0;
  double r_max = 0.0;
};

std::vector<Point> grid_points(const GridSpec& spec);

enum class RegionClass { TamedJPlus, TamedJMinus, Mixed, Untamed };

std::string to_string(RegionClass c);

struct PointVerdict {
  Point x{};
  std::optional<TamingVerdict> verdict;
  std::string error;  // set when the point could not be evaluated
};

struct RegionReport {
  std::vector<PointVerdict> points;
  double min_margin = 0.0;
  Point min_point{};
  RegionClass region = RegionClass::Untamed;
  std::size_t n_plus = 0, n_minus = 0, n_not = 0, n_errors = 0;
};

// OpenMP-parallel over points; identical results to the serial version.
RegionReport region_scan(const MetricChart& chart, const std::vector<Point>& pts);
RegionReport region_scan_serial(const MetricChart& chart, const std::vector<Point>& pts);

}  // namespace twistor
