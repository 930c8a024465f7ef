#pragma once

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <vector>

#include "skorohod/cadlag_path.hpp"
#include "skorohod/linear_process.hpp"
#include "skorohod/random.hpp"
#include "skorohod/tail_model.hpp"

namespace skorohod {

class AtomCapError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

struct Atom
{
    double t = 0.0;
    double j = 0.0;

    friend bool operator==(Atom const&, Atom const&) = default;
};

/// Atoms of the limiting Poisson point process with |j| >= u_min, in
/// generation order (nonincreasing |j|).
struct PointMeasureAtoms
{
    std::vector<Atom> atoms;
    double u_min = 0.0;
};

inline constexpr std::size_t default_atom_cap = 1'000'000;

/// LePage series: P_i = Gamma_i^(-1/alpha) for cumulative standard
/// exponentials Gamma_i, stopping at the first P_i < u_min. Each retained atom
/// gets t uniform on (0, 1] and sign +1 with probability p.
PointMeasureAtoms sample_poisson_lepage(TailModel const& model, double u_min, Rng& rng,
                                        std::size_t atom_cap = default_atom_cap);

/// Sum-maximum functional: first coordinate jumps by beta j at t for atoms with
/// |j| > u; second is the running max of |j| (phi_+ 1{j>0} + phi_- 1{j<0}),
/// 0 before the first atom. Throws std::invalid_argument if u < u_min.
PathPair phi_u(PointMeasureAtoms const& atoms, double u, double beta, double phi_plus,
               double phi_minus);

struct LimitSample
{
    PathPair paths;
    PointMeasureAtoms atoms;
    /// Variance at t = 1 of the discarded compensated jumps below u.
    double truncation_variance = 0.0;
};

/// Approximate draw of (beta V, W) truncated at u in (0, 1).
LimitSample limit_pair_sample(TailModel const& model, CoefficientReport const& report, double u,
                              Rng& rng, std::size_t atom_cap = default_atom_cap);

/// beta^2 alpha u^(2-alpha) / (2-alpha).
double truncation_variance(TailModel const& model, double beta, double u);

/// Writes "t,j" rows.
void write_atoms_csv(std::ostream& os, PointMeasureAtoms const& atoms);

}  // namespace skorohod
