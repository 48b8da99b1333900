#include "pxfem/exact_solutions.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "pxfem/integrate.hpp"

namespace pxfem {

BenchmarkCase make_benchmark(double b) {
    if (!(b >= 0.0) || !std::isfinite(b)) {
        throw std::invalid_argument("make_benchmark: b must be finite and >= 0");
    }
    const double sqrt2 = std::numbers::sqrt2;
    if (b == 0.0) {
        const double slope = sqrt2 * std::numbers::e / 2.0;
        return BenchmarkCase{
            0.0,
            constant_exponent(2.0),
            [slope](Vec2 x) { return slope * (x.x + x.y); },
            [slope](Vec2) { return Vec2{slope, slope}; },
            [](Vec2) { return 0.0; },
        };
    }
    const double amp = sqrt2 * std::exp(b + 1.0) / b;
    const double half_b = 0.5 * b;
    const double p1 = 1.0 + 1.0 / (1.0 + 2.0 * b);  // attained at x1 + x2 = 2
    const double p2 = 2.0;                          // attained at x1 + x2 = -2
    return BenchmarkCase{
        b,
        VariableExponent(
            [half_b, b](Vec2 x) {
                return 1.0 + 1.0 / (half_b * (x.x + x.y) + 1.0 + b);
            },
            p1, p2),
        [amp, half_b](Vec2 x) {
            return amp * (std::exp(half_b * (x.x + x.y)) - 1.0);
        },
        [amp, half_b](Vec2 x) {
            const double d = amp * half_b * std::exp(half_b * (x.x + x.y));
            return Vec2{d, d};
        },
        [](Vec2) { return 0.0; },
    };
}

namespace {

constexpr double kZRelTol = 1e-10;
constexpr double kURelTol = 1e-8;

double z_of(const std::function<double(double)>& F, double r) {
    if (r == 0.0) return 0.0;
    const double integral = adaptive_simpson(
        [&F](double t) { return t * F(t); }, 0.0, r, 1e-300, kZRelTol);
    return -integral / r;
}

// Z |Z|^((2-P)/(P-1)) = sign(Z) |Z|^(1/(P-1)), the solution slope U'.
double slope_from_flux(double z, double p) {
    if (z == 0.0) return 0.0;
    const double mag = std::pow(std::abs(z), 1.0 / (p - 1.0));
    return z > 0.0 ? mag : -mag;
}

}  // namespace

RadialCase::RadialCase(std::function<double(double)> P,
                       std::function<double(double)> F, double g,
                       std::optional<std::function<double(double)>> P_prime,
                       int check_samples)
    : P_(std::move(P)), F_(std::move(F)), g_(g), P_prime_(std::move(P_prime)) {
    if (check_samples < 2) {
        throw std::invalid_argument("RadialCase: need at least 2 check samples");
    }
    bool any_nonzero = false;
    for (int i = 1; i <= check_samples; ++i) {
        const double r = static_cast<double>(i) / check_samples;
        const double p = P_(r);
        if (!(p > 1.0) || !(p <= 2.0)) {
            throw std::invalid_argument(
                "RadialCase: P(r) must lie in (1, 2]; violated at r = " +
                std::to_string(r));
        }
        const double z = z_of(F_, r);
        if (z == 0.0) {
            if (p == 2.0) {
                throw std::invalid_argument(
                    "RadialCase: profile flux vanishes at r = " + std::to_string(r) +
                    " where P(r) = 2");
            }
        } else {
            any_nonzero = true;
        }
    }
    if (!any_nonzero) {
        throw std::invalid_argument(
            "RadialCase: degenerate data, the source integrates to zero at every sampled radius");
    }
}

double RadialCase::P_prime(double r) const {
    if (P_prime_) return (*P_prime_)(r);
    const double h = 1e-6 * std::max(1.0, r);
    return (P_(r + h) - P_(r - h)) / (2.0 * h);
}

double radial_Z(const RadialCase& c, double r) {
    if (!(r >= 0.0) || !(r <= 1.0)) {
        throw std::invalid_argument("radial_Z: r must lie in [0, 1]");
    }
    return z_of([&c](double t) { return c.F(t); }, r);
}

double radial_Z_prime(const RadialCase& c, double r) {
    if (r == 0.0) return -0.5 * c.F(0.0);
    return -c.F(r) - radial_Z(c, r) / r;
}

double radial_U(const RadialCase& c, double r) {
    if (!(r >= 0.0) || !(r <= 1.0)) {
        throw std::invalid_argument("radial_U: r must lie in [0, 1]");
    }
    if (r == 1.0) return c.g();
    const double integral = adaptive_simpson(
        [&c](double t) { return radial_U_prime(c, t); }, r, 1.0, 1e-300,
        kURelTol);
    return c.g() - integral;
}

double radial_U_prime(const RadialCase& c, double r) {
    // Z |Z|^((2-P)/(P-1)) vanishes with Z for every admissible P (0^0 = 1
    // at P = 2 leaves the factor Z = 0).
    return slope_from_flux(radial_Z(c, r), c.P(r));
}

double radial_U_second(const RadialCase& c, double r) {
    const double z = radial_Z(c, r);
    const double p = c.P(r);
    if (z == 0.0) {
        // r = 0 is structural (Z(0) = 0 always); the continuous extension
        // gives Z'(0) for P = 2 (where |Z|^0 = 1) and 0 for P < 2.
        if (r == 0.0) {
            return p == 2.0 ? radial_Z_prime(c, 0.0) : 0.0;
        }
        if (p == 2.0) {
            throw std::domain_error(
                "radial_U_second: profile flux vanishes at r = " +
                std::to_string(r) + " where P(r) = 2");
        }
        return 0.0;  // |Z|^((2-P)/(P-1)) and log|Z| Z both vanish with Z
    }
    const double zp = radial_Z_prime(c, r);
    const double pm1 = p - 1.0;
    const double zpow = std::pow(std::abs(z), (2.0 - p) / pm1);
    const double first = zp / pm1 * zpow;
    const double second =
        zpow * c.P_prime(r) * std::log(std::abs(z)) * z / (pm1 * pm1);
    return first - second;
}

double regularity_integral(const RadialCase& c) {
    // (U'')^2 |U'|^(P-2) combined into one power of |Z| so isolated zeros of
    // Z stay finite: |Z|^((2-P)/(P-1)) (Z'/(P-1) - P' log|Z| Z/(P-1)^2)^2.
    const auto integrand = [&c](double r) -> double {
        if (r == 0.0) return 0.0;  // both terms vanish in the limit
        const double z = radial_Z(c, r);
        const double p = c.P(r);
        if (z == 0.0) {
            if (p == 2.0) {
                throw std::domain_error(
                    "regularity_integral: profile flux vanishes at r = " +
                    std::to_string(r) + " where P(r) = 2");
            }
            return 0.0;
        }
        const double pm1 = p - 1.0;
        const double az = std::abs(z);
        const double bracket = radial_Z_prime(c, r) / pm1 -
                               c.P_prime(r) * std::log(az) * z / (pm1 * pm1);
        const double curvature_part =
            std::pow(az, (2.0 - p) / pm1) * bracket * bracket * r;
        const double slope_part = std::pow(az, p / pm1) / r;
        return curvature_part + slope_part;
    };
    const double value =
        2.0 * std::numbers::pi *
        adaptive_simpson(integrand, 0.0, 1.0, 1e-300, 1e-9);
    if (!std::isfinite(value)) {
        throw std::domain_error("regularity_integral: integral is not finite");
    }
    return value;
}

}  // namespace pxfem
