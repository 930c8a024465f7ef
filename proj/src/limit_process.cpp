#include "skorohod/limit_process.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

namespace skorohod {

PointMeasureAtoms sample_poisson_lepage(TailModel const& model, double u_min, Rng& rng,
                                        std::size_t atom_cap)
{
    if (!(u_min > 0.0))
    {
        throw std::invalid_argument("sample_poisson_lepage: u_min must be positive");
    }
    PointMeasureAtoms out;
    out.u_min = u_min;
    double const inv_alpha = 1.0 / model.alpha();
    double gamma = 0.0;
    while (true)
    {
        gamma += rng.standard_exponential();
        double magnitude = std::pow(gamma, -inv_alpha);
        if (magnitude < u_min)
        {
            break;
        }
        if (out.atoms.size() == atom_cap)
        {
            throw AtomCapError("sample_poisson_lepage: atom cap exceeded; raise u_min or the cap");
        }
        double t = rng.uniform_open_closed();
        double sign = rng.uniform_open_closed() <= model.p() ? 1.0 : -1.0;
        out.atoms.push_back({t, sign * magnitude});
    }
    return out;
}

PathPair phi_u(PointMeasureAtoms const& atoms, double u, double beta, double phi_plus,
               double phi_minus)
{
    if (u < atoms.u_min)
    {
        throw std::invalid_argument("phi_u: u is below the sampling level u_min");
    }
    auto const& a = atoms.atoms;
    std::vector<std::size_t> order(a.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&a](std::size_t l, std::size_t r) { return a[l].t < a[r].t; });

    std::vector<double> times;
    std::vector<double> sums;
    std::vector<double> maxima;
    double sum = 0.0;
    double running = 0.0;
    for (std::size_t idx : order)
    {
        Atom const& at = a[idx];
        if (std::abs(at.j) > u)
        {
            sum += beta * at.j;
        }
        double w = at.j > 0.0 ? phi_plus * at.j : phi_minus * -at.j;
        running = std::max(running, w);
        if (!times.empty() && times.back() == at.t)
        {
            sums.back() = sum;
            maxima.back() = running;
        }
        else
        {
            times.push_back(at.t);
            sums.push_back(sum);
            maxima.push_back(running);
        }
    }
    return {CadlagPath::step(0.0, times, sums), CadlagPath::step(0.0, times, maxima)};
}

double truncation_variance(TailModel const& model, double beta, double u)
{
    double a = model.alpha();
    return beta * beta * a * std::pow(u, 2.0 - a) / (2.0 - a);
}

LimitSample limit_pair_sample(TailModel const& model, CoefficientReport const& report, double u,
                              Rng& rng, std::size_t atom_cap)
{
    if (!(u > 0.0 && u < 1.0))
    {
        throw std::invalid_argument("limit_pair_sample: u must lie in (0, 1)");
    }
    LimitSample out;
    out.atoms = sample_poisson_lepage(model, u, rng, atom_cap);
    PathPair jumps = phi_u(out.atoms, u, report.beta, report.phi_plus, report.phi_minus);

    double const drift = LevyTriple::of(model).drift_b;
    double const slope = report.beta * (drift - karamata_band_integral(model, u));
    std::vector<Point> nodes{{0.0, 0.0}, {1.0, slope}};
    out.paths.first = add_continuous(jumps.first, CadlagPath::linear(nodes));
    out.paths.second = std::move(jumps.second);
    out.truncation_variance = truncation_variance(model, report.beta, u);
    return out;
}

void write_atoms_csv(std::ostream& os, PointMeasureAtoms const& atoms)
{
    auto const old_precision = os.precision(17);
    os << "t,j\n";
    for (auto const& a : atoms.atoms)
    {
        os << a.t << ',' << a.j << '\n';
    }
    os.precision(old_precision);
}

}  // namespace skorohod
