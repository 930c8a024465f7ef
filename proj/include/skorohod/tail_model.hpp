#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>

#include <json.hpp>

#include "skorohod/random.hpp"

namespace skorohod {

/// Signed Pareto innovation law: P(|Z| > x) = x^-alpha for x >= 1, sign +1
/// with probability p and -1 with probability r = 1 - p.
class TailModel
{
  public:
    /// Throws std::invalid_argument unless alpha in (0,2), p, r >= 0,
    /// p + r = 1, and p = r = 1/2 when alpha = 1.
    TailModel(double alpha, double p, double r);

    double alpha() const { return alpha_; }
    double p() const { return p_; }
    double r() const { return r_; }
    bool symmetric() const { return p_ == 0.5 && r_ == 0.5; }

  private:
    double alpha_;
    double p_;
    double r_;
};

nlohmann::json to_json(TailModel const& m);
TailModel tail_model_from_json(nlohmann::json const& j);

/// Characteristic triple (0, mu, b) of the stable limit.
struct LevyTriple
{
    TailModel model;
    double drift_b;

    static LevyTriple of(TailModel const& model);
    double gaussian_part() const { return 0.0; }
};

/// Innovation from two uniforms on (0, 1]: |Z| = u_mag^(-1/alpha), positive
/// when u_sign <= p.
double innovation_from_uniforms(TailModel const& model, double u_mag, double u_sign);
double sample_innovation(TailModel const& model, Rng& rng);

/// a_n = n^(1/alpha), the exact solution of n P(|Z| > a) = 1.
double norming_a_n(TailModel const& model, std::int64_t n);

/// E(Z) = (p - r) alpha / (alpha - 1); alpha must exceed 1.
double innovation_mean(TailModel const& model);

/// 0 for alpha <= 1, beta E(Z) otherwise.
double centering_b_n(TailModel const& model, double beta);

/// mu((x, inf)) for x > 0, mu((-inf, x)) for x < 0.
double mu_tail(TailModel const& model, double x);

/// Integral of x over u < |x| <= 1 against mu, for u in (0, 1).
double karamata_band_integral(TailModel const& model, double u);

/// Reported when adaptive quadrature misses its error target.
class QuadratureError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// psi(z) with E exp(i z V(1)) = exp(psi(z)), evaluated by quadrature of the
/// compensated Levy-Khintchine integral. Absolute accuracy about 1e-8.
std::complex<double> levy_exponent(LevyTriple const& triple, double z);

/// P(W(t) <= x) = exp(-t nu_scale x^-alpha).
double extremal_cdf(double nu_scale, double alpha, double t, double x);

}  // namespace skorohod
