#pragma once

#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace skorohod {

/// Thrown when a serialized path, pair or config cannot be decoded. The
/// message names the offending field.
class ParseError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

struct Point
{
    double t = 0.0;
    double v = 0.0;

    friend bool operator==(Point const&, Point const&) = default;
};

/// Closed planar segment; a == b is a legal (degenerate) segment.
struct PlanarSegment
{
    Point a;
    Point b;

    double t_min() const { return a.t < b.t ? a.t : b.t; }
    double t_max() const { return a.t < b.t ? b.t : a.t; }
    double v_min() const { return a.v < b.v ? a.v : b.v; }
    double v_max() const { return a.v < b.v ? b.v : a.v; }
    Point at(double tau) const
    {
        return {a.t + tau * (b.t - a.t), a.v + tau * (b.v - a.v)};
    }

    friend bool operator==(PlanarSegment const&, PlanarSegment const&) = default;
};

/// Completed graph of a real cadlag path: a connected polygonal chain of path
/// pieces and vertical jump fillers, ordered in time.
struct CompletedGraph
{
    std::vector<PlanarSegment> segments;

    friend bool operator==(CompletedGraph const&, CompletedGraph const&) = default;
};

//---------------------------------------------------------------------------//
/*!
 * Piecewise-linear cadlag function on [0,1].
 *
 * The path is stored as breakpoints 0 = t_0 < t_1 < ... < t_m = 1 with a left
 * limit and a (right) value at each breakpoint. On [t_k, t_{k+1}) the path is
 * linear from right(k) to left(k+1). A jump at t_k is left(k) != right(k);
 * left(0) always equals right(0). A jump at t = 1 is allowed.
 */
class CadlagPath
{
  public:
    // Zero path
    CadlagPath();

    CadlagPath(std::vector<double> breakpoints,
               std::vector<double> left,
               std::vector<double> right);

    static CadlagPath constant(double value);

    /// Step path: `initial` on [0, times[0]), then values[k] from times[k].
    /// Times must be strictly increasing in (0, 1].
    static CadlagPath step(double initial,
                           std::span<double const> times,
                           std::span<double const> values);

    /// Continuous piecewise-linear path through the given nodes; the nodes
    /// must start at t = 0 and end at t = 1.
    static CadlagPath linear(std::span<Point const> nodes);

    std::span<double const> breakpoints() const { return times_; }
    std::span<double const> left_values() const { return left_; }
    std::span<double const> right_values() const { return right_; }
    std::size_t size() const { return times_.size(); }

    double operator()(double t) const;
    double left_limit(double t) const;

    bool is_continuous() const;
    bool is_step() const;
    bool is_nondecreasing() const;
    bool is_monotone() const;

    /// Smallest positive gap between consecutive breakpoints.
    double min_gap() const;

    friend bool operator==(CadlagPath const&, CadlagPath const&) = default;

  private:
    // Index k with t_k <= t < t_{k+1}; the last piece is closed at 1.
    std::size_t piece_index(double t) const;

    std::vector<double> times_;
    std::vector<double> left_;
    std::vector<double> right_;
};

/// Element of D([0,1], R^2) stored coordinate-wise.
struct PathPair
{
    CadlagPath first;
    CadlagPath second;

    friend bool operator==(PathPair const&, PathPair const&) = default;
};

CompletedGraph completed_graph(CadlagPath const& x);

/// Pointwise sum of x and a continuous piecewise-linear y; jumps of the
/// result are those of x.
CadlagPath add_continuous(CadlagPath const& x, CadlagPath const& y);

//---------------------------------------------------------------------------//
// Serialization
//---------------------------------------------------------------------------//
nlohmann::json to_json(CadlagPath const& x);
nlohmann::json to_json(PathPair const& x);
CadlagPath path_from_json(nlohmann::json const& j);
PathPair pair_from_json(nlohmann::json const& j);

/// Writes "t,value" rows on a uniform grid with `points` nodes (>= 2).
void write_sampled_csv(std::ostream& os, CadlagPath const& x, std::size_t points);

}  // namespace skorohod
