#include "skorohod/tail_model.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "skorohod/cadlag_path.hpp"

namespace skorohod {

TailModel::TailModel(double alpha, double p, double r) : alpha_(alpha), p_(p), r_(r)
{
    if (!(alpha > 0.0 && alpha < 2.0))
    {
        throw std::invalid_argument("tail model: alpha must lie in (0, 2)");
    }
    if (!(p >= 0.0 && r >= 0.0) || std::abs(p + r - 1.0) > 1e-12)
    {
        throw std::invalid_argument("tail model: p and r must be nonnegative with p + r = 1");
    }
    if (alpha == 1.0 && !(p == 0.5 && r == 0.5))
    {
        throw std::invalid_argument("tail model: alpha = 1 requires symmetric innovations (p = r = 1/2)");
    }
}

nlohmann::json to_json(TailModel const& m)
{
    return {{"alpha", m.alpha()}, {"p", m.p()}, {"r", m.r()}};
}

TailModel tail_model_from_json(nlohmann::json const& j)
{
    if (!j.is_object())
    {
        throw ParseError("model must be an object with 'alpha', 'p', 'r'");
    }
    auto number = [&j](char const* key) {
        auto it = j.find(key);
        if (it == j.end() || !it->is_number())
        {
            throw ParseError(std::string("model field '") + key + "' missing or not a number");
        }
        return it->get<double>();
    };
    double alpha = number("alpha");
    double p = number("p");
    double r = j.contains("r") ? number("r") : 1.0 - p;
    return TailModel(alpha, p, r);
}

LevyTriple LevyTriple::of(TailModel const& model)
{
    double a = model.alpha();
    double b = a == 1.0 ? 0.0 : (model.p() - model.r()) * a / (1.0 - a);
    return {model, b};
}

double innovation_from_uniforms(TailModel const& model, double u_mag, double u_sign)
{
    double magnitude = std::pow(u_mag, -1.0 / model.alpha());
    return u_sign <= model.p() ? magnitude : -magnitude;
}

double sample_innovation(TailModel const& model, Rng& rng)
{
    double u_mag = rng.uniform_open_closed();
    double u_sign = rng.uniform_open_closed();
    return innovation_from_uniforms(model, u_mag, u_sign);
}

double norming_a_n(TailModel const& model, std::int64_t n)
{
    if (n < 1)
    {
        throw std::invalid_argument("norming constant needs n >= 1");
    }
    return std::pow(static_cast<double>(n), 1.0 / model.alpha());
}

double innovation_mean(TailModel const& model)
{
    double a = model.alpha();
    if (!(a > 1.0))
    {
        throw std::invalid_argument("innovation mean is infinite for alpha <= 1");
    }
    return (model.p() - model.r()) * a / (a - 1.0);
}

double centering_b_n(TailModel const& model, double beta)
{
    return model.alpha() <= 1.0 ? 0.0 : beta * innovation_mean(model);
}

double mu_tail(TailModel const& model, double x)
{
    if (x == 0.0)
    {
        throw std::invalid_argument("mu_tail: x must be nonzero");
    }
    double mass = std::pow(std::abs(x), -model.alpha());
    return x > 0.0 ? model.p() * mass : model.r() * mass;
}

double karamata_band_integral(TailModel const& model, double u)
{
    if (!(u > 0.0 && u < 1.0))
    {
        throw std::invalid_argument("karamata_band_integral: u must lie in (0, 1)");
    }
    double a = model.alpha();
    if (a == 1.0)
    {
        return 0.0;
    }
    return (model.p() - model.r()) * a / (1.0 - a) * (1.0 - std::pow(u, 1.0 - a));
}

//---------------------------------------------------------------------------//
namespace {

constexpr double quad_target = 1e-10;

// w X at which the oscillatory tail switches to its asymptotic series.
constexpr double tail_phase = 64.0;

// Integral over [X, inf) of exp(i w x) x^(-s), by repeated integration by
// parts; requires w X >= tail_phase so the series terms decay quickly.
std::complex<double> oscillatory_tail(double w, double X, double s)
{
    std::complex<double> const iw(0.0, w);
    std::complex<double> factor = 1.0;
    std::complex<double> sum = 0.0;
    double power = std::pow(X, -s);
    for (int k = 0; k < 80; ++k)
    {
        std::complex<double> term = factor * power;
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum))
        {
            break;
        }
        factor *= (s + k) / iw;
        power /= X;
    }
    return -std::exp(iw * X) / iw * sum;
}

template<class F>
double integrate_panel(F f, double a, double b)
{
    double err = 0.0;
    double l1 = 0.0;
    double v = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        f, a, b, 25, quad_target, &err, &l1);
    if (!(err <= quad_target * std::max(1.0, l1)))
    {
        throw QuadratureError("levy_exponent: Gauss-Kronrod panel failed to converge");
    }
    return v;
}

// Integral over (0, inf) of (exp(i w x) - 1 - i w x 1{x <= 1}) alpha x^(-alpha-1).
std::complex<double> positive_half(double alpha, double w)
{
    double const s = alpha + 1.0;
    double const X = std::max(1.0, tail_phase / w);

    // Small-argument forms keep the integrands finite where x^-s overflows.
    auto re_core = [=](double x) {
        double y = w * x;
        if (y < 1e-2)
        {
            double y2 = y * y;
            return -0.5 * w * w * alpha * std::pow(x, 1.0 - alpha)
                   * (1.0 - y2 / 12.0 * (1.0 - y2 / 30.0));
        }
        double h = std::sin(0.5 * y);
        return -2.0 * h * h * alpha * std::pow(x, -s);
    };
    auto im_core = [=](double x) {
        double y = w * x;
        if (y < 1e-2)
        {
            double y2 = y * y;
            return -w * w * w / 6.0 * alpha * std::pow(x, 2.0 - alpha)
                   * (1.0 - y2 / 20.0 * (1.0 - y2 / 42.0 * (1.0 - y2 / 72.0)));
        }
        return (std::sin(y) - y) * alpha * std::pow(x, -s);
    };

    boost::math::quadrature::tanh_sinh<double> ts;
    double err_re = 0.0, err_im = 0.0, l1_re = 0.0, l1_im = 0.0;
    double re = ts.integrate(re_core, 0.0, 1.0, quad_target, &err_re, &l1_re);
    double im = ts.integrate(im_core, 0.0, 1.0, quad_target, &err_im, &l1_im);
    if (!(err_re <= 1e-9 * std::max(1.0, l1_re)) || !(err_im <= 1e-9 * std::max(1.0, l1_im)))
    {
        throw QuadratureError("levy_exponent: tanh-sinh failed to converge near the origin");
    }

    // Geometric panels on [1, X]; past 1 the compensator is absent.
    auto re_mid = [=](double x) { return (std::cos(w * x) - 1.0) * alpha * std::pow(x, -s); };
    auto im_mid = [=](double x) { return std::sin(w * x) * alpha * std::pow(x, -s); };
    for (double a = 1.0; a < X;)
    {
        double b = std::min(2.0 * a, X);
        re += integrate_panel(re_mid, a, b);
        im += integrate_panel(im_mid, a, b);
        a = b;
    }

    std::complex<double> tail = alpha * oscillatory_tail(w, X, s);
    re += tail.real() - std::pow(X, -alpha);
    im += tail.imag();
    return {re, im};
}

}  // namespace

std::complex<double> levy_exponent(LevyTriple const& triple, double z)
{
    if (z == 0.0)
    {
        return {0.0, 0.0};
    }
    auto const& m = triple.model;
    std::complex<double> half = positive_half(m.alpha(), std::abs(z));
    if (z < 0.0)
    {
        half = std::conj(half);
    }
    // The negative half-line mirrors the positive one.
    std::complex<double> psi = m.p() * half + m.r() * std::conj(half);
    return psi + std::complex<double>(0.0, triple.drift_b * z);
}

double extremal_cdf(double nu_scale, double alpha, double t, double x)
{
    if (!(x > 0.0))
    {
        throw std::invalid_argument("extremal_cdf: x must be positive");
    }
    if (!(nu_scale > 0.0))
    {
        throw std::invalid_argument("extremal_cdf: exponent scale must be positive");
    }
    if (t < 0.0)
    {
        throw std::invalid_argument("extremal_cdf: t must be nonnegative");
    }
    return std::exp(-t * nu_scale * std::pow(x, -alpha));
}

}  // namespace skorohod
