#pragma once

#include <cmath>
#include <functional>
#include <utility>
#include <variant>
#include <vector>

#include "cellflux/errors.hpp"

namespace cellflux {

/// A p-periodic function sampled on the closed uniform grid t_k = k*p/N,
/// k = 0..N, with values[0] == values[N]. N must be even (composite Simpson).
/// All computed periodic functions in the pipeline live on one shared grid,
/// so pointwise arithmetic needs no resampling.
class GridFunction {
public:
    GridFunction(double period, std::vector<double> values);

    static GridFunction constant(double period, int n, double value);
    static GridFunction zeros(double period, int n) { return constant(period, n, 0.0); }

    double period() const { return period_; }
    int n() const { return static_cast<int>(values_.size()) - 1; }
    double spacing() const { return period_ / n(); }
    double node(int k) const { return k * period_ / n(); }

    const std::vector<double>& values() const { return values_; }
    double operator[](int k) const { return values_[k]; }
    double& operator[](int k) { return values_[k]; }

    /// Periodic linear interpolation at arbitrary t.
    double operator()(double t) const;

    double max() const;
    double min() const;
    double sup_norm() const;

    GridFunction& operator+=(const GridFunction& o);
    GridFunction& operator-=(const GridFunction& o);
    GridFunction& operator+=(double c);
    GridFunction& operator*=(double c);

    friend GridFunction operator+(GridFunction a, const GridFunction& b) { return a += b; }
    friend GridFunction operator-(GridFunction a, const GridFunction& b) { return a -= b; }
    friend GridFunction operator+(GridFunction a, double c) { return a += c; }
    friend GridFunction operator*(double c, GridFunction a) { return a *= c; }

    /// Map a scalar function over the nodes.
    GridFunction map(const std::function<double(double)>& fn) const;

private:
    double period_;
    std::vector<double> values_;
};

/// sup_k |a_k - b_k| on the shared grid.
double sup_diff(const GridFunction& a, const GridFunction& b);

/// 4th-order central difference derivative with periodic wrap.
GridFunction differentiate(const GridFunction& g);

namespace forcing {
struct Constant {
    double value;
};
struct Sinusoid {
    double offset, amplitude, omega, phase;
};
struct RaisedCos2 { // offset + amplitude * cos^2(omega t + phase)
    double offset, amplitude, omega, phase;
};
struct Harmonic { // sum_k cos_coeffs[k] cos(2 pi k t / p) + sin_coeffs[k-1] sin(2 pi k t / p)
    std::vector<double> cos_coeffs; // index 0 is the constant term
    std::vector<double> sin_coeffs; // index 0 multiplies sin(2 pi t / p)
};
struct Table { // N+1 samples on the closed uniform grid; linearly interpolated
    std::vector<double> values;
};
using Spec = std::variant<Constant, Sinusoid, RaisedCos2, Harmonic, Table>;
} // namespace forcing

/// A continuous p-periodic scalar function with exact period metadata.
/// Analytic specs with an angular frequency are checked for genuine
/// p-periodicity (omega * p must be an integer multiple of 2 pi).
class PeriodicForcing {
public:
    PeriodicForcing(double period, forcing::Spec spec);

    static PeriodicForcing constant(double period, double value);
    static PeriodicForcing sinusoid(double period, double offset, double amplitude,
                                    double omega, double phase = 0.0);
    static PeriodicForcing raised_cos2(double period, double offset, double amplitude,
                                       double omega, double phase = 0.0);
    static PeriodicForcing harmonic(double period, std::vector<double> cos_coeffs,
                                    std::vector<double> sin_coeffs);
    static PeriodicForcing table(double period, std::vector<double> values);

    double period() const { return period_; }
    const forcing::Spec& spec() const { return spec_; }
    bool is_table() const { return std::holds_alternative<forcing::Table>(spec_); }

    double operator()(double t) const;

private:
    double period_;
    forcing::Spec spec_;
};

/// Evaluate a forcing on the uniform closed grid with N intervals.
/// N must be even and >= 4. Table specs at a different native resolution are
/// linearly interpolated (second-order accuracy only).
GridFunction sample(const PeriodicForcing& f, int n);

/// Composite Simpson integral over one full period, O(N^-4) for smooth g.
double integrate_period(const GridFunction& g);

/// Split f into its period mean and the zero-mean remainder sampled on the grid.
std::pair<double, GridFunction> mean_decompose(const PeriodicForcing& f, int n);

/// The unique zero-mean p-periodic primitive Y of a zero-mean grid function,
/// i.e. Y' = tilde with integral_period(Y) = 0. Throws PeriodicityViolation if
/// the input mean exceeds tol (default 1e-8 * p * max|tilde|): y' = b has a
/// periodic solution iff b has zero mean.
GridFunction zero_mean_primitive(const GridFunction& tilde, double tol_mean = -1.0);

} // namespace cellflux
