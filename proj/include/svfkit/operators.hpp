#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "svfkit/config.hpp"
#include "svfkit/geometry.hpp"
#include "svfkit/selections.hpp"
#include "svfkit/svf.hpp"

namespace svfkit {

enum class KernelKind { FejerLike, WindowAverage };

const char* to_string(KernelKind kind) noexcept;

// Quadrature kernel on midpoint nodes of [a, b]. FejerLike of order n uses
// K_n(u) = (sin((n + 1) u / 2) / sin(u / 2))^2 / (n + 1) with
// u = 2 pi (t - x) / (b - a); WindowAverage weighs nodes in [x - h/2, x + h/2]
// equally. Weights are nonnegative and normalized to sum 1.
struct Kernel {
  KernelKind kind = KernelKind::FejerLike;
  int order = 1;        // FejerLike
  double window = 0.1;  // WindowAverage

  static Kernel fejer_like(int n);
  static Kernel window_average(double h);

  std::vector<double> weights(double x, std::span<const double> nodes, double a, double b) const;
  bool symmetric() const noexcept { return true; }
  double parameter() const noexcept;
};

// Midpoints of `count` equal cells of [a, b].
std::vector<double> quadrature_nodes(double a, double b, std::size_t count);

inline constexpr std::size_t kDefaultQuadratureNodes = 2048;

struct OperatorOutput {
  CompactSet set = CompactSet::point(Point{0.0});
  std::vector<Point> points;          // one weighted average per member
  std::vector<std::size_t> witness;   // family member behind each point
};

// { sum_i w_i(x) s(t_i) : s in family }: every output point is the weighted
// average along one selection. Each member is re-chained with its anchor on
// its converged partition refined by the quadrature nodes, so s(t_i) is a
// chain value in F(t_i).
OperatorOutput metric_integral_operator(const SelectionFamily& family, const Kernel& kernel,
                                        double x, const AnalysisConfig& cfg,
                                        std::size_t quadrature = kDefaultQuadratureNodes);

// Builds the family at x and applies the operator.
OperatorOutput metric_integral_operator(const Svf& F, const Kernel& kernel, double x,
                                        const AnalysisConfig& cfg,
                                        std::size_t quadrature = kDefaultQuadratureNodes);

struct StudyRow {
  double parameter = 0.0;  // order n or window h
  double distance = 0.0;   // haus(operator output, target)
  std::size_t output_size = 0;
};

struct ConvergenceStudy {
  double x = 0.0;
  KernelKind kind = KernelKind::FejerLike;
  bool target_is_limit_set = false;  // A_F(x) at breakpoints, F(x) elsewhere
  CompactSet target = CompactSet::point(Point{0.0});
  std::vector<StudyRow> rows;
  bool monotone = true;  // distances never increase along the schedule
};

ConvergenceStudy convergence_study(const Svf& F, double x, KernelKind kind,
                                   std::span<const double> parameters, const AnalysisConfig& cfg,
                                   std::size_t quadrature = kDefaultQuadratureNodes);

}  // namespace svfkit
