#pragma once

#include <span>
#include <vector>

#include "skorohod/cadlag_path.hpp"

namespace skorohod {

/// Chebyshev distance max(|dt|, |dv|) from a point to a closed segment.
double chebyshev_distance(Point a, PlanarSegment const& s);

double d_uniform(CadlagPath const& x1, CadlagPath const& x2);

//---------------------------------------------------------------------------//
/*!
 * M2 distance: Hausdorff distance between the completed graphs under the
 * Chebyshev plane metric.
 *
 * The result r satisfies exact - tol <= r <= exact. Every segment of one graph
 * is either certified to lie within the current lower bound of the other graph
 * (an exact interval-coverage test) or bisected until its own supremum is
 * bracketed to within tol. Throws std::invalid_argument for tol <= 0.
 */
double d_m2(CadlagPath const& x1, CadlagPath const& x2, double tol);

/// Product (weak M2) metric on R^2-valued paths.
double d_p(PathPair const& a, PathPair const& b, double tol);

/// Oscillation function omega(x, delta). The supremum is taken over the
/// closure of the admissible triples, so left limits count as attained.
double oscillation(CadlagPath const& x, double delta);

/// omega(x, e^z) for z < 0 and omega(x, 1) for z >= 0.
double omega_hat(CadlagPath const& x, double z);

//---------------------------------------------------------------------------//
/*!
 * Nondecreasing real function tabulated at sorted abscissae, extended
 * constantly beyond both ends. Step curves are right-continuous (value y_k on
 * [x_k, x_{k+1})); linear curves interpolate.
 */
class MonotoneCurve
{
  public:
    enum class Interpolation
    {
        step,
        linear
    };

    MonotoneCurve(std::vector<double> xs, std::vector<double> ys,
                  Interpolation mode = Interpolation::step);

    static MonotoneCurve constant(double value);

    double operator()(double x) const;
    std::span<double const> xs() const { return xs_; }
    std::span<double const> ys() const { return ys_; }
    Interpolation mode() const { return mode_; }

  private:
    std::vector<double> xs_;
    std::vector<double> ys_;
    Interpolation mode_;
};

/// Levy metric between two nondecreasing curves, accurate to 1e-9.
double levy_metric(MonotoneCurve const& f, MonotoneCurve const& g);

/// z -> omega_hat(x, z) as a step curve on [z_lo, 0], constant outside.
MonotoneCurve omega_hat_curve(CadlagPath const& x, double z_lo);

/// Lower end of the omega_hat tabulation window shared by two paths:
/// log(smallest breakpoint gap of either path) - 1.
double omega_hat_window(CadlagPath const& x1, CadlagPath const& x2);

/// M1-equivalent metric: d_m2 plus the Levy distance of the omega_hat curves.
double d_m1_star(CadlagPath const& x1, CadlagPath const& x2, double tol);

}  // namespace skorohod
