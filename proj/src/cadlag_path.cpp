#include "skorohod/cadlag_path.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <set>

namespace skorohod {

namespace {

void require(bool cond, char const* msg)
{
    if (!cond)
    {
        throw std::invalid_argument(msg);
    }
}

}  // namespace

CadlagPath::CadlagPath() : times_{0.0, 1.0}, left_{0.0, 0.0}, right_{0.0, 0.0} {}

CadlagPath::CadlagPath(std::vector<double> breakpoints,
                       std::vector<double> left,
                       std::vector<double> right)
    : times_(std::move(breakpoints)), left_(std::move(left)), right_(std::move(right))
{
    require(times_.size() >= 2, "cadlag path needs at least the breakpoints 0 and 1");
    require(left_.size() == times_.size() && right_.size() == times_.size(),
            "cadlag path: breakpoints, left and right must have equal length");
    require(times_.front() == 0.0, "cadlag path: first breakpoint must be 0");
    require(times_.back() == 1.0, "cadlag path: last breakpoint must be 1");
    for (std::size_t k = 1; k < times_.size(); ++k)
    {
        require(times_[k - 1] < times_[k], "cadlag path: breakpoints must be strictly increasing");
    }
    for (std::size_t k = 0; k < times_.size(); ++k)
    {
        require(std::isfinite(left_[k]) && std::isfinite(right_[k]),
                "cadlag path: values must be finite");
    }
    require(left_.front() == right_.front(), "cadlag path: left[0] must equal right[0]");
}

CadlagPath CadlagPath::constant(double value)
{
    return CadlagPath({0.0, 1.0}, {value, value}, {value, value});
}

CadlagPath CadlagPath::step(double initial,
                            std::span<double const> times,
                            std::span<double const> values)
{
    require(times.size() == values.size(), "step path: times and values differ in length");
    std::vector<double> bp{0.0};
    std::vector<double> left{initial};
    std::vector<double> right{initial};
    bp.reserve(times.size() + 2);
    left.reserve(times.size() + 2);
    right.reserve(times.size() + 2);
    double current = initial;
    for (std::size_t k = 0; k < times.size(); ++k)
    {
        require(times[k] > bp.back() && times[k] <= 1.0,
                "step path: jump times must be strictly increasing in (0, 1]");
        bp.push_back(times[k]);
        left.push_back(current);
        right.push_back(values[k]);
        current = values[k];
    }
    if (bp.back() < 1.0)
    {
        bp.push_back(1.0);
        left.push_back(current);
        right.push_back(current);
    }
    return CadlagPath(std::move(bp), std::move(left), std::move(right));
}

CadlagPath CadlagPath::linear(std::span<Point const> nodes)
{
    std::vector<double> bp, val;
    bp.reserve(nodes.size());
    val.reserve(nodes.size());
    for (auto const& p : nodes)
    {
        bp.push_back(p.t);
        val.push_back(p.v);
    }
    auto copy = val;
    return CadlagPath(std::move(bp), std::move(copy), std::move(val));
}

std::size_t CadlagPath::piece_index(double t) const
{
    auto it = std::upper_bound(times_.begin(), times_.end(), t);
    auto k = static_cast<std::size_t>(it - times_.begin());
    return k == 0 ? 0 : k - 1;
}

double CadlagPath::operator()(double t) const
{
    if (t <= 0.0)
    {
        return right_.front();
    }
    if (t >= 1.0)
    {
        return right_.back();
    }
    std::size_t k = piece_index(t);
    if (times_[k] == t)
    {
        return right_[k];
    }
    double w = (t - times_[k]) / (times_[k + 1] - times_[k]);
    return right_[k] + (left_[k + 1] - right_[k]) * w;
}

double CadlagPath::left_limit(double t) const
{
    if (t <= 0.0)
    {
        return right_.front();
    }
    auto it = std::lower_bound(times_.begin(), times_.end(), t);
    auto j = static_cast<std::size_t>(it - times_.begin());
    if (j >= times_.size())
    {
        return right_.back();
    }
    if (times_[j] == t)
    {
        return left_[j];
    }
    std::size_t k = j - 1;
    double w = (t - times_[k]) / (times_[k + 1] - times_[k]);
    return right_[k] + (left_[k + 1] - right_[k]) * w;
}

bool CadlagPath::is_continuous() const
{
    for (std::size_t k = 0; k < times_.size(); ++k)
    {
        if (left_[k] != right_[k])
        {
            return false;
        }
    }
    return true;
}

bool CadlagPath::is_step() const
{
    for (std::size_t k = 0; k + 1 < times_.size(); ++k)
    {
        if (right_[k] != left_[k + 1])
        {
            return false;
        }
    }
    return true;
}

bool CadlagPath::is_nondecreasing() const
{
    for (std::size_t k = 0; k < times_.size(); ++k)
    {
        if (right_[k] < left_[k] || (k + 1 < times_.size() && left_[k + 1] < right_[k]))
        {
            return false;
        }
    }
    return true;
}

bool CadlagPath::is_monotone() const
{
    if (is_nondecreasing())
    {
        return true;
    }
    for (std::size_t k = 0; k < times_.size(); ++k)
    {
        if (right_[k] > left_[k] || (k + 1 < times_.size() && left_[k + 1] > right_[k]))
        {
            return false;
        }
    }
    return true;
}

double CadlagPath::min_gap() const
{
    double gap = 1.0;
    for (std::size_t k = 1; k < times_.size(); ++k)
    {
        gap = std::min(gap, times_[k] - times_[k - 1]);
    }
    return gap;
}

CompletedGraph completed_graph(CadlagPath const& x)
{
    auto t = x.breakpoints();
    auto left = x.left_values();
    auto right = x.right_values();

    CompletedGraph g;
    g.segments.reserve(2 * t.size());
    auto push = [&g](Point a, Point b) {
        // Extend a horizontal run instead of adding a collinear piece.
        if (a.v == b.v && !g.segments.empty())
        {
            auto& last = g.segments.back();
            if (last.a.v == last.b.v && last.b == a && last.a.t < last.b.t)
            {
                last.b = b;
                return;
            }
        }
        g.segments.push_back({a, b});
    };
    for (std::size_t k = 0; k + 1 < t.size(); ++k)
    {
        push({t[k], right[k]}, {t[k + 1], left[k + 1]});
        if (left[k + 1] != right[k + 1])
        {
            g.segments.push_back({{t[k + 1], left[k + 1]}, {t[k + 1], right[k + 1]}});
        }
    }
    return g;
}

CadlagPath add_continuous(CadlagPath const& x, CadlagPath const& y)
{
    if (!y.is_continuous())
    {
        throw std::invalid_argument("add_continuous: the added path must be continuous");
    }
    std::vector<double> merged;
    merged.reserve(x.size() + y.size());
    std::merge(x.breakpoints().begin(), x.breakpoints().end(),
               y.breakpoints().begin(), y.breakpoints().end(),
               std::back_inserter(merged));
    merged.erase(std::unique(merged.begin(), merged.end()), merged.end());

    std::vector<double> left(merged.size()), right(merged.size());
    for (std::size_t k = 0; k < merged.size(); ++k)
    {
        double yv = y(merged[k]);
        right[k] = x(merged[k]) + yv;
        left[k] = k == 0 ? right[k] : x.left_limit(merged[k]) + yv;
    }
    return CadlagPath(std::move(merged), std::move(left), std::move(right));
}

//---------------------------------------------------------------------------//
nlohmann::json to_json(CadlagPath const& x)
{
    nlohmann::json j;
    j["breakpoints"] = std::vector<double>(x.breakpoints().begin(), x.breakpoints().end());
    j["left"] = std::vector<double>(x.left_values().begin(), x.left_values().end());
    j["right"] = std::vector<double>(x.right_values().begin(), x.right_values().end());
    return j;
}

nlohmann::json to_json(PathPair const& x)
{
    return {{"first", to_json(x.first)}, {"second", to_json(x.second)}};
}

namespace {

std::vector<double> number_array(nlohmann::json const& j, char const* field)
{
    auto it = j.find(field);
    if (it == j.end())
    {
        throw ParseError(std::string("missing field '") + field + "'");
    }
    if (!it->is_array())
    {
        throw ParseError(std::string("field '") + field + "' must be an array of numbers");
    }
    std::vector<double> out;
    out.reserve(it->size());
    for (auto const& v : *it)
    {
        if (!v.is_number())
        {
            throw ParseError(std::string("field '") + field + "' contains a non-numeric entry");
        }
        out.push_back(v.get<double>());
    }
    return out;
}

}  // namespace

CadlagPath path_from_json(nlohmann::json const& j)
{
    if (!j.is_object())
    {
        throw ParseError("path must be a JSON object with 'breakpoints', 'left', 'right'");
    }
    auto bp = number_array(j, "breakpoints");
    auto left = number_array(j, "left");
    auto right = number_array(j, "right");
    try
    {
        return CadlagPath(std::move(bp), std::move(left), std::move(right));
    }
    catch (std::invalid_argument const& e)
    {
        throw ParseError(e.what());
    }
}

PathPair pair_from_json(nlohmann::json const& j)
{
    if (!j.is_object() || !j.contains("first") || !j.contains("second"))
    {
        throw ParseError("path pair must be a JSON object with fields 'first' and 'second'");
    }
    PathPair out;
    try
    {
        out.first = path_from_json(j.at("first"));
    }
    catch (ParseError const& e)
    {
        throw ParseError(std::string("first: ") + e.what());
    }
    try
    {
        out.second = path_from_json(j.at("second"));
    }
    catch (ParseError const& e)
    {
        throw ParseError(std::string("second: ") + e.what());
    }
    return out;
}

void write_sampled_csv(std::ostream& os, CadlagPath const& x, std::size_t points)
{
    if (points < 2)
    {
        throw std::invalid_argument("sampled CSV needs at least two grid points");
    }
    os << "t,value\n" << std::setprecision(17);
    for (std::size_t i = 0; i < points; ++i)
    {
        double t = static_cast<double>(i) / static_cast<double>(points - 1);
        os << t << ',' << x(t) << '\n';
    }
}

}  // namespace skorohod
