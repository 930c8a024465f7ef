#include "skorohod/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace skorohod {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

// Parameter slack when testing whether coverage intervals leave a gap.
constexpr double coverage_slack = 1e-11;

//---------------------------------------------------------------------------//
// Time-ordered view of a completed graph for window queries.
class GraphIndex
{
  public:
    explicit GraphIndex(CompletedGraph const& g) : segs_(g.segments)
    {
        t_lo_.reserve(segs_.size());
        t_hi_.reserve(segs_.size());
        double running = -inf;
        for (auto const& s : segs_)
        {
            t_lo_.push_back(s.t_min());
            running = std::max(running, s.t_max());
            t_hi_.push_back(running);
        }
    }

    std::size_t size() const { return segs_.size(); }
    PlanarSegment const& operator[](std::size_t k) const { return segs_[k]; }
    double t_lo(std::size_t k) const { return t_lo_[k]; }
    double t_hi(std::size_t k) const { return t_hi_[k]; }

    // First segment whose time range reaches t.
    std::size_t first_reaching(double t) const
    {
        auto it = std::lower_bound(t_hi_.begin(), t_hi_.end(), t);
        return static_cast<std::size_t>(it - t_hi_.begin());
    }

  private:
    std::vector<PlanarSegment> const& segs_;
    std::vector<double> t_lo_;
    std::vector<double> t_hi_;
};

double point_distance(Point p, GraphIndex const& g)
{
    double best = inf;
    std::size_t start = std::min(g.first_reaching(p.t), g.size() - 1);
    for (std::size_t k = start; k < g.size(); ++k)
    {
        if (g.t_lo(k) - p.t >= best)
        {
            break;
        }
        best = std::min(best, chebyshev_distance(p, g[k]));
    }
    for (std::size_t k = start; k-- > 0;)
    {
        if (p.t - g.t_hi(k) >= best)
        {
            break;
        }
        best = std::min(best, chebyshev_distance(p, g[k]));
    }
    return best;
}

//---------------------------------------------------------------------------//
// Parameters tau in [0,1] with dist(a(tau), b) <= eps, by eliminating the
// parameter of b from the linear system |a(tau) - b(sigma)|_inf <= eps.
// Rows read c * sigma <= d + e * tau.
bool coverage_interval(PlanarSegment const& a, PlanarSegment const& b, double eps,
                       double& lo, double& hi)
{
    double pt = a.a.t, dt = a.b.t - a.a.t, pv = a.a.v, dv = a.b.v - a.a.v;
    double qt = b.a.t, et = b.b.t - b.a.t, qv = b.a.v, ev = b.b.v - b.a.v;

    struct Row
    {
        double c, d, e;
    };
    std::array<Row, 6> rows{{{-et, eps - pt + qt, -dt},
                             {et, eps + pt - qt, dt},
                             {-ev, eps - pv + qv, -dv},
                             {ev, eps + pv - qv, dv},
                             {-1.0, 0.0, 0.0},
                             {1.0, 1.0, 0.0}}};

    lo = 0.0;
    hi = 1.0;
    auto apply = [&lo, &hi](double A, double B) {
        // 0 <= A + B * tau
        if (B > 0.0)
        {
            lo = std::max(lo, -A / B);
        }
        else if (B < 0.0)
        {
            hi = std::min(hi, -A / B);
        }
        else if (A < 0.0)
        {
            hi = -1.0;
        }
    };
    for (auto const& r : rows)
    {
        if (r.c == 0.0)
        {
            apply(r.d, r.e);
        }
    }
    for (auto const& l : rows)
    {
        if (l.c >= 0.0)
        {
            continue;
        }
        for (auto const& u : rows)
        {
            if (u.c <= 0.0)
            {
                continue;
            }
            apply(u.c * l.d - l.c * u.d, u.c * l.e - l.c * u.e);
        }
    }
    return lo <= hi;
}

// True when every point of `a` lies within eps of the graph.
bool covered(PlanarSegment const& a, GraphIndex const& g, double eps,
             std::vector<std::pair<double, double>>& scratch)
{
    double t0 = a.t_min() - eps, t1 = a.t_max() + eps;
    double v0 = a.v_min() - eps, v1 = a.v_max() + eps;
    scratch.clear();
    for (std::size_t k = g.first_reaching(t0); k < g.size() && g.t_lo(k) <= t1; ++k)
    {
        auto const& b = g[k];
        if (b.v_min() > v1 || b.v_max() < v0)
        {
            continue;
        }
        double lo, hi;
        if (coverage_interval(a, b, eps, lo, hi))
        {
            if (lo <= coverage_slack && hi >= 1.0 - coverage_slack)
            {
                return true;
            }
            scratch.emplace_back(lo, hi);
        }
    }
    std::sort(scratch.begin(), scratch.end());
    double reach = 0.0;
    for (auto const& [lo, hi] : scratch)
    {
        if (lo > reach + coverage_slack)
        {
            return false;
        }
        reach = std::max(reach, hi);
    }
    return reach >= 1.0 - coverage_slack;
}

double coordinate_scale(CompletedGraph const& g)
{
    double s = 1.0;
    for (auto const& seg : g.segments)
    {
        s = std::max({s, std::abs(seg.a.v), std::abs(seg.b.v)});
    }
    return s;
}

// Certified lower estimate of sup_{a in A} dist(a, B), within tol.
double directed_hausdorff(CompletedGraph const& A, CompletedGraph const& B, double tol,
                          double eps_pad)
{
    GraphIndex index(B);
    double lower = 0.0;
    for (auto const& s : A.segments)
    {
        lower = std::max(lower, point_distance(s.a, index));
    }
    lower = std::max(lower, point_distance(A.segments.back().b, index));

    std::vector<std::pair<double, double>> scratch;
    for (auto const& s : A.segments)
    {
        if (covered(s, index, lower + eps_pad, scratch))
        {
            continue;
        }
        double length = std::max(std::abs(s.b.t - s.a.t), std::abs(s.b.v - s.a.v));
        double lo = lower;
        double hi = lower + 0.5 * length;
        while (hi - lo > tol)
        {
            double mid = 0.5 * (lo + hi);
            if (covered(s, index, mid + eps_pad, scratch))
            {
                hi = mid;
            }
            else
            {
                lo = mid;
            }
        }
        lower = std::max(lower, lo);
    }
    return lower;
}

}  // namespace

//---------------------------------------------------------------------------//
double chebyshev_distance(Point a, PlanarSegment const& s)
{
    double a1 = s.a.t - a.t, b1 = s.b.t - s.a.t;
    double a2 = s.a.v - a.v, b2 = s.b.v - s.a.v;
    auto f = [&](double sigma) {
        return std::max(std::abs(a1 + b1 * sigma), std::abs(a2 + b2 * sigma));
    };
    double best = std::min(f(0.0), f(1.0));
    auto consider = [&](double num, double den) {
        if (den != 0.0)
        {
            double sigma = num / den;
            if (sigma > 0.0 && sigma < 1.0)
            {
                best = std::min(best, f(sigma));
            }
        }
    };
    consider(-a1, b1);
    consider(-a2, b2);
    consider(a2 - a1, b1 - b2);
    consider(-(a1 + a2), b1 + b2);
    return best;
}

double d_uniform(CadlagPath const& x1, CadlagPath const& x2)
{
    std::vector<double> merged;
    std::merge(x1.breakpoints().begin(), x1.breakpoints().end(),
               x2.breakpoints().begin(), x2.breakpoints().end(),
               std::back_inserter(merged));
    merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
    double sup = 0.0;
    for (double t : merged)
    {
        sup = std::max({sup, std::abs(x1(t) - x2(t)),
                        std::abs(x1.left_limit(t) - x2.left_limit(t))});
    }
    return sup;
}

double d_m2(CadlagPath const& x1, CadlagPath const& x2, double tol)
{
    if (!(tol > 0.0))
    {
        throw std::invalid_argument("d_m2: tolerance must be positive");
    }
    if (x1 == x2)
    {
        return 0.0;
    }
    auto g1 = completed_graph(x1);
    auto g2 = completed_graph(x2);
    if (g1 == g2)
    {
        return 0.0;
    }
    double pad = 1e-12 * std::max(coordinate_scale(g1), coordinate_scale(g2));
    return std::max(directed_hausdorff(g1, g2, tol, pad),
                    directed_hausdorff(g2, g1, tol, pad));
}

double d_p(PathPair const& a, PathPair const& b, double tol)
{
    return std::max(d_m2(a.first, b.first, tol), d_m2(a.second, b.second, tol));
}

//---------------------------------------------------------------------------//
// Oscillation
//---------------------------------------------------------------------------//
namespace {

// Path values in graph order: each jump contributes its left limit and then
// its value. Consecutive events with distinct times bound one linear piece.
std::vector<Point> events_of(CadlagPath const& x)
{
    auto t = x.breakpoints();
    auto left = x.left_values();
    auto right = x.right_values();
    std::vector<Point> ev;
    ev.reserve(2 * t.size());
    ev.push_back({t[0], right[0]});
    for (std::size_t k = 1; k < t.size(); ++k)
    {
        if (left[k] != right[k])
        {
            ev.push_back({t[k], left[k]});
        }
        ev.push_back({t[k], right[k]});
    }
    return ev;
}

// Distance of `mid_hi`/`mid_lo` (extremes of the middle values) from the
// interval spanned by the outer values.
double spread_excess(double outer1, double outer2, double mid_hi, double mid_lo)
{
    return std::max({0.0, mid_hi - std::max(outer1, outer2), std::min(outer1, outer2) - mid_lo});
}

class RangeExtrema
{
  public:
    explicit RangeExtrema(std::vector<Point> const& ev)
    {
        std::size_t n = ev.size();
        std::size_t levels = 1;
        while ((std::size_t{1} << levels) <= n)
        {
            ++levels;
        }
        hi_.assign(levels, std::vector<double>(n));
        lo_.assign(levels, std::vector<double>(n));
        for (std::size_t i = 0; i < n; ++i)
        {
            hi_[0][i] = lo_[0][i] = ev[i].v;
        }
        for (std::size_t l = 1; l < levels; ++l)
        {
            std::size_t half = std::size_t{1} << (l - 1);
            for (std::size_t i = 0; i + (std::size_t{1} << l) <= n; ++i)
            {
                hi_[l][i] = std::max(hi_[l - 1][i], hi_[l - 1][i + half]);
                lo_[l][i] = std::min(lo_[l - 1][i], lo_[l - 1][i + half]);
            }
        }
    }

    // Extremes over the inclusive index range [i, j], i <= j.
    std::pair<double, double> query(std::size_t i, std::size_t j) const
    {
        std::size_t len = j - i + 1;
        std::size_t l = 0;
        while ((std::size_t{2} << l) <= len)
        {
            ++l;
        }
        std::size_t k = j + 1 - (std::size_t{1} << l);
        return {std::max(hi_[l][i], hi_[l][k]), std::min(lo_[l][i], lo_[l][k])};
    }

  private:
    std::vector<std::vector<double>> hi_;
    std::vector<std::vector<double>> lo_;
};

double interpolate(Point const& p, Point const& q, double t)
{
    double w = (t - p.t) / (q.t - p.t);
    return p.v + (q.v - p.v) * w;
}

// Index a such that ev[a].t < t < ev[a+1].t, or npos.
std::size_t piece_containing(std::vector<Point> const& ev, double t)
{
    auto it = std::lower_bound(ev.begin(), ev.end(), t,
                               [](Point const& p, double s) { return p.t < s; });
    auto j = static_cast<std::size_t>(it - ev.begin());
    if (j == 0 || j == ev.size() || ev[j].t == t)
    {
        return static_cast<std::size_t>(-1);
    }
    return j - 1;
}

double oscillation_general(std::vector<Point> const& ev, double width, bool linear_pieces)
{
    std::size_t const m = ev.size();
    double best = 0.0;

    // Triples made of events only.
    for (std::size_t i = 0; i < m; ++i)
    {
        double mid_hi = -inf, mid_lo = inf;
        for (std::size_t k = i + 2; k < m && ev[k].t - ev[i].t <= width; ++k)
        {
            mid_hi = std::max(mid_hi, ev[k - 1].v);
            mid_lo = std::min(mid_lo, ev[k - 1].v);
            best = std::max(best, spread_excess(ev[i].v, ev[k].v, mid_hi, mid_lo));
        }
    }
    if (!linear_pieces)
    {
        return best;
    }

    // Outer points inside linear pieces at exactly the window width.
    RangeExtrema rmq(ev);
    constexpr auto npos = static_cast<std::size_t>(-1);
    for (std::size_t k = 0; k < m; ++k)
    {
        // t1 = t_k - width inside piece (a, a+1); middle events a+1 .. k-1.
        std::size_t a = piece_containing(ev, ev[k].t - width);
        if (a != npos && k >= 1 && a + 1 <= k - 1)
        {
            double v1 = interpolate(ev[a], ev[a + 1], ev[k].t - width);
            auto [h, l] = rmq.query(a + 1, k - 1);
            best = std::max(best, spread_excess(v1, ev[k].v, h, l));
        }
        // t3 = t_k + width inside piece (b, b+1); middle events k+1 .. b.
        std::size_t b = piece_containing(ev, ev[k].t + width);
        if (b != npos && b >= k + 1)
        {
            double v3 = interpolate(ev[b], ev[b + 1], ev[k].t + width);
            auto [h, l] = rmq.query(k + 1, b);
            best = std::max(best, spread_excess(ev[k].v, v3, h, l));
        }
    }

    // Both outer points interior to linear pieces, t3 - t1 = width, sliding
    // together: the outer maximum/minimum is optimized where the two linear
    // values cross.
    for (std::size_t a = 0; a + 1 < m; ++a)
    {
        if (ev[a].t == ev[a + 1].t)
        {
            continue;
        }
        double s_lo = ev[a].t, s_hi = ev[a + 1].t;
        std::size_t b = a + 1;
        while (b + 1 < m && ev[b + 1].t <= s_lo + width)
        {
            ++b;
        }
        for (; b + 1 < m && ev[b].t < s_hi + width; ++b)
        {
            if (ev[b].t == ev[b + 1].t || b < a + 1)
            {
                continue;
            }
            double lo = std::max(s_lo, ev[b].t - width);
            double hi = std::min(s_hi, ev[b + 1].t - width);
            if (!(lo < hi))
            {
                continue;
            }
            // x1(s) and x3(s) = x(s + width) are linear in s on [lo, hi].
            double slope1 = (ev[a + 1].v - ev[a].v) / (ev[a + 1].t - ev[a].t);
            double slope3 = (ev[b + 1].v - ev[b].v) / (ev[b + 1].t - ev[b].t);
            double d0 = interpolate(ev[a], ev[a + 1], lo) - interpolate(ev[b], ev[b + 1], lo + width);
            double ds = slope1 - slope3;
            if (ds == 0.0)
            {
                continue;
            }
            double s = lo - d0 / ds;
            if (s <= lo || s >= hi)
            {
                continue;
            }
            double v1 = interpolate(ev[a], ev[a + 1], s);
            double v3 = interpolate(ev[b], ev[b + 1], s + width);
            auto [h, l] = rmq.query(a + 1, b);
            best = std::max(best, spread_excess(v1, v3, h, l));
        }
    }
    return best;
}

}  // namespace

double oscillation(CadlagPath const& x, double delta)
{
    if (!(delta > 0.0))
    {
        throw std::invalid_argument("oscillation: delta must be positive");
    }
    if (x.is_monotone())
    {
        return 0.0;
    }
    return oscillation_general(events_of(x), 2.0 * delta, !x.is_step());
}

double omega_hat(CadlagPath const& x, double z)
{
    return oscillation(x, z < 0.0 ? std::exp(z) : 1.0);
}

//---------------------------------------------------------------------------//
// Levy metric
//---------------------------------------------------------------------------//
MonotoneCurve::MonotoneCurve(std::vector<double> xs, std::vector<double> ys,
                             Interpolation mode)
    : xs_(std::move(xs)), ys_(std::move(ys)), mode_(mode)
{
    if (xs_.empty() || xs_.size() != ys_.size())
    {
        throw std::invalid_argument("monotone curve: need matching, nonempty abscissae and values");
    }
    for (std::size_t k = 1; k < xs_.size(); ++k)
    {
        if (!(xs_[k - 1] < xs_[k]))
        {
            throw std::invalid_argument("monotone curve: abscissae must be strictly increasing");
        }
        if (ys_[k] < ys_[k - 1])
        {
            throw std::invalid_argument("monotone curve: values must be nondecreasing");
        }
    }
}

MonotoneCurve MonotoneCurve::constant(double value)
{
    return MonotoneCurve({0.0}, {value});
}

double MonotoneCurve::operator()(double x) const
{
    if (x <= xs_.front())
    {
        return ys_.front();
    }
    if (x >= xs_.back())
    {
        return ys_.back();
    }
    auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
    auto k = static_cast<std::size_t>(it - xs_.begin()) - 1;
    if (mode_ == Interpolation::step)
    {
        return ys_[k];
    }
    double w = (x - xs_[k]) / (xs_[k + 1] - xs_[k]);
    return ys_[k] + (ys_[k + 1] - ys_[k]) * w;
}

namespace {

bool levy_feasible(MonotoneCurve const& f, MonotoneCurve const& g, double eps,
                   std::vector<double>& cand)
{
    cand.clear();
    cand.insert(cand.end(), f.xs().begin(), f.xs().end());
    for (double b : g.xs())
    {
        cand.push_back(b - eps);
        cand.push_back(b + eps);
    }
    std::sort(cand.begin(), cand.end());
    auto violated = [&](double x) {
        double fx = f(x);
        return fx > g(x + eps) + eps || g(x - eps) - eps > fx;
    };
    if (violated(cand.front() - 1.0 - eps))
    {
        return false;
    }
    for (std::size_t k = 0; k < cand.size(); ++k)
    {
        // Midpoints guard against shifted breakpoints rounding across a jump.
        if (violated(cand[k]) || (k + 1 < cand.size() && violated(0.5 * (cand[k] + cand[k + 1]))))
        {
            return false;
        }
    }
    return true;
}

}  // namespace

double levy_metric(MonotoneCurve const& f, MonotoneCurve const& g)
{
    std::vector<double> grid(f.xs().begin(), f.xs().end());
    grid.insert(grid.end(), g.xs().begin(), g.xs().end());
    grid.push_back(std::min(f.xs().front(), g.xs().front()) - 1.0);
    double hi = 0.0;
    for (double x : grid)
    {
        hi = std::max(hi, std::abs(f(x) - g(x)));
    }
    if (hi == 0.0)
    {
        return 0.0;
    }
    std::vector<double> cand;
    double lo = 0.0;
    while (hi - lo > 1e-10)
    {
        double mid = 0.5 * (lo + hi);
        if (levy_feasible(f, g, mid, cand))
        {
            hi = mid;
        }
        else
        {
            lo = mid;
        }
    }
    return hi;
}

double omega_hat_window(CadlagPath const& x1, CadlagPath const& x2)
{
    return std::log(std::min(x1.min_gap(), x2.min_gap())) - 1.0;
}

MonotoneCurve omega_hat_curve(CadlagPath const& x, double z_lo)
{
    if (!(z_lo < 0.0))
    {
        throw std::invalid_argument("omega_hat_curve: window must start below zero");
    }
    if (x.is_monotone())
    {
        return MonotoneCurve::constant(0.0);
    }
    std::vector<double> zs{z_lo};
    std::vector<double> ys{omega_hat(x, z_lo)};

    if (x.is_step())
    {
        // omega(x, .) only changes where 2*delta crosses a spread between two
        // events; collect the per-origin record improvements.
        auto ev = events_of(x);
        std::vector<std::pair<double, double>> records;
        for (std::size_t i = 0; i < ev.size(); ++i)
        {
            double mid_hi = -inf, mid_lo = inf, record = 0.0;
            for (std::size_t k = i + 2; k < ev.size(); ++k)
            {
                mid_hi = std::max(mid_hi, ev[k - 1].v);
                mid_lo = std::min(mid_lo, ev[k - 1].v);
                double val = spread_excess(ev[i].v, ev[k].v, mid_hi, mid_lo);
                if (val > record)
                {
                    record = val;
                    records.emplace_back(ev[k].t - ev[i].t, val);
                }
            }
        }
        std::sort(records.begin(), records.end());
        for (auto const& [spread, val] : records)
        {
            double z = std::log(0.5 * spread);
            double y = std::max(ys.back(), val);
            if (z <= zs.back())
            {
                ys.back() = std::max(ys.back(), y);
            }
            else if (y > ys.back())
            {
                zs.push_back(z);
                ys.push_back(y);
            }
        }
    }
    else
    {
        constexpr int grid = 256;
        for (int i = 1; i <= grid; ++i)
        {
            double z = z_lo * (1.0 - static_cast<double>(i) / grid);
            double y = std::max(ys.back(), omega_hat(x, z));
            zs.push_back(z);
            ys.push_back(y);
        }
    }
    // Values at z >= 0 are omega(x, 1).
    double top = std::max(ys.back(), omega_hat(x, 0.0));
    if (zs.back() < 0.0)
    {
        zs.push_back(0.0);
        ys.push_back(top);
    }
    else
    {
        ys.back() = top;
    }
    return MonotoneCurve(std::move(zs), std::move(ys));
}

double d_m1_star(CadlagPath const& x1, CadlagPath const& x2, double tol)
{
    double m2 = d_m2(x1, x2, tol);
    double z_lo = omega_hat_window(x1, x2);
    return m2 + levy_metric(omega_hat_curve(x1, z_lo), omega_hat_curve(x2, z_lo));
}

}  // namespace skorohod
