#include "cellflux/periodic.hpp"

#include <algorithm>
#include <numbers>

namespace cellflux {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

void check_commensurate(double omega, double period) {
    if (omega == 0.0)
        return;
    const double cycles = omega * period / two_pi;
    const double nearest = std::round(cycles);
    if (nearest == 0.0 || std::abs(cycles - nearest) > 1e-9 * std::max(1.0, std::abs(nearest)))
        throw ConfigError("forcing is not p-periodic: omega*p = " +
                          std::to_string(omega * period) + " is not a multiple of 2*pi");
}

} // namespace

GridFunction::GridFunction(double period, std::vector<double> values)
    : period_(period), values_(std::move(values)) {
    if (period_ <= 0.0)
        throw ConfigError("GridFunction: period must be positive");
    const int n = static_cast<int>(values_.size()) - 1;
    if (n < 4 || n % 2 != 0)
        throw ConfigError("GridFunction: need an even number of intervals >= 4, got " +
                          std::to_string(n));
    const double scale = std::max(1.0, std::max(std::abs(values_.front()), std::abs(values_.back())));
    if (std::abs(values_.front() - values_.back()) > 1e-10 * scale)
        throw ConfigError("GridFunction: endpoint values differ; function is not periodic");
}

GridFunction GridFunction::constant(double period, int n, double value) {
    return GridFunction(period, std::vector<double>(static_cast<size_t>(n) + 1, value));
}

double GridFunction::operator()(double t) const {
    const int n_ = n();
    double u = std::fmod(t, period_);
    if (u < 0.0)
        u += period_;
    const double s = u / spacing();
    int k = static_cast<int>(std::floor(s));
    if (k >= n_)
        k = n_ - 1;
    const double w = s - k;
    return values_[k] * (1.0 - w) + values_[k + 1] * w;
}

double GridFunction::max() const { return *std::max_element(values_.begin(), values_.end()); }
double GridFunction::min() const { return *std::min_element(values_.begin(), values_.end()); }

double GridFunction::sup_norm() const {
    double m = 0.0;
    for (double v : values_)
        m = std::max(m, std::abs(v));
    return m;
}

GridFunction& GridFunction::operator+=(const GridFunction& o) {
    for (size_t i = 0; i < values_.size(); ++i)
        values_[i] += o.values_[i];
    return *this;
}

GridFunction& GridFunction::operator-=(const GridFunction& o) {
    for (size_t i = 0; i < values_.size(); ++i)
        values_[i] -= o.values_[i];
    return *this;
}

GridFunction& GridFunction::operator+=(double c) {
    for (double& v : values_)
        v += c;
    return *this;
}

GridFunction& GridFunction::operator*=(double c) {
    for (double& v : values_)
        v *= c;
    return *this;
}

GridFunction GridFunction::map(const std::function<double(double)>& fn) const {
    std::vector<double> out(values_.size());
    for (size_t i = 0; i < values_.size(); ++i)
        out[i] = fn(values_[i]);
    out.back() = out.front();
    return GridFunction(period_, std::move(out));
}

double sup_diff(const GridFunction& a, const GridFunction& b) {
    double m = 0.0;
    for (size_t i = 0; i < a.values().size(); ++i)
        m = std::max(m, std::abs(a.values()[i] - b.values()[i]));
    return m;
}

GridFunction differentiate(const GridFunction& g) {
    const int n = g.n();
    const double h = g.spacing();
    std::vector<double> out(static_cast<size_t>(n) + 1);
    auto at = [&](int k) { return g[((k % n) + n) % n]; };
    for (int k = 0; k < n; ++k)
        out[k] = (8.0 * (at(k + 1) - at(k - 1)) - (at(k + 2) - at(k - 2))) / (12.0 * h);
    out[n] = out[0];
    return GridFunction(g.period(), std::move(out));
}

PeriodicForcing::PeriodicForcing(double period, forcing::Spec spec)
    : period_(period), spec_(std::move(spec)) {
    if (period_ <= 0.0)
        throw ConfigError("PeriodicForcing: period must be positive");
    if (const auto* s = std::get_if<forcing::Sinusoid>(&spec_))
        check_commensurate(s->omega, period_);
    else if (const auto* r = std::get_if<forcing::RaisedCos2>(&spec_))
        check_commensurate(r->omega, period_);
    else if (const auto* t = std::get_if<forcing::Table>(&spec_)) {
        if (t->values.size() < 2)
            throw ConfigError("PeriodicForcing: table needs at least 2 samples");
        const double scale =
            std::max(1.0, std::max(std::abs(t->values.front()), std::abs(t->values.back())));
        if (std::abs(t->values.front() - t->values.back()) > 1e-12 * scale)
            throw ConfigError("PeriodicForcing: table endpoints differ; not periodic");
    }
}

PeriodicForcing PeriodicForcing::constant(double period, double value) {
    return {period, forcing::Constant{value}};
}
PeriodicForcing PeriodicForcing::sinusoid(double period, double offset, double amplitude,
                                          double omega, double phase) {
    return {period, forcing::Sinusoid{offset, amplitude, omega, phase}};
}
PeriodicForcing PeriodicForcing::raised_cos2(double period, double offset, double amplitude,
                                             double omega, double phase) {
    return {period, forcing::RaisedCos2{offset, amplitude, omega, phase}};
}
PeriodicForcing PeriodicForcing::harmonic(double period, std::vector<double> cos_coeffs,
                                          std::vector<double> sin_coeffs) {
    return {period, forcing::Harmonic{std::move(cos_coeffs), std::move(sin_coeffs)}};
}
PeriodicForcing PeriodicForcing::table(double period, std::vector<double> values) {
    return {period, forcing::Table{std::move(values)}};
}

double PeriodicForcing::operator()(double t) const {
    return std::visit(
        [&](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, forcing::Constant>) {
                return s.value;
            } else if constexpr (std::is_same_v<T, forcing::Sinusoid>) {
                return s.offset + s.amplitude * std::sin(s.omega * t + s.phase);
            } else if constexpr (std::is_same_v<T, forcing::RaisedCos2>) {
                const double c = std::cos(s.omega * t + s.phase);
                return s.offset + s.amplitude * c * c;
            } else if constexpr (std::is_same_v<T, forcing::Harmonic>) {
                double acc = 0.0;
                for (size_t k = 0; k < s.cos_coeffs.size(); ++k)
                    acc += s.cos_coeffs[k] * std::cos(two_pi * static_cast<double>(k) * t / period_);
                for (size_t k = 0; k < s.sin_coeffs.size(); ++k)
                    acc += s.sin_coeffs[k] *
                           std::sin(two_pi * static_cast<double>(k + 1) * t / period_);
                return acc;
            } else { // Table
                const int n = static_cast<int>(s.values.size()) - 1;
                double u = std::fmod(t, period_);
                if (u < 0.0)
                    u += period_;
                const double pos = u * n / period_;
                int k = static_cast<int>(std::floor(pos));
                if (k >= n)
                    k = n - 1;
                const double w = pos - k;
                return s.values[k] * (1.0 - w) + s.values[k + 1] * w;
            }
        },
        spec_);
}

GridFunction sample(const PeriodicForcing& f, int n) {
    if (n < 4 || n % 2 != 0)
        throw ConfigError("sample: N must be even and >= 4, got " + std::to_string(n));
    std::vector<double> vals(static_cast<size_t>(n) + 1);
    const double p = f.period();
    for (int k = 0; k <= n; ++k)
        vals[k] = f(k * p / n);
    vals[n] = vals[0];
    return GridFunction(p, std::move(vals));
}

double integrate_period(const GridFunction& g) {
    const int n = g.n();
    const double h = g.spacing();
    double odd = 0.0, even = 0.0;
    for (int k = 1; k < n; k += 2)
        odd += g[k];
    for (int k = 2; k < n; k += 2)
        even += g[k];
    return h / 3.0 * (g[0] + g[n] + 4.0 * odd + 2.0 * even);
}

std::pair<double, GridFunction> mean_decompose(const PeriodicForcing& f, int n) {
    GridFunction grid = sample(f, n);
    const double mean = integrate_period(grid) / grid.period();
    grid += -mean;
    return {mean, std::move(grid)};
}

GridFunction zero_mean_primitive(const GridFunction& tilde, double tol_mean) {
    const int n = tilde.n();
    const double p = tilde.period();
    const double h = tilde.spacing();
    if (tol_mean < 0.0)
        // The 1e-13*p floor keeps pure-roundoff remainders (e.g. from a
        // constant forcing after mean subtraction) from tripping the check.
        tol_mean = 1e-8 * p * tilde.sup_norm() + 1e-13 * p;
    const double mean_integral = integrate_period(tilde);
    if (std::abs(mean_integral) > tol_mean)
        throw PeriodicityViolation("zero_mean_primitive: forcing mean " +
                                   std::to_string(mean_integral / p) +
                                   " is nonzero; y' = b has no periodic solution");

    // Cumulative integral: each interval integrated by the 4-point interpolatory
    // rule with periodic wrap, which keeps 4th-order accuracy at every node.
    auto at = [&](int k) { return tilde[((k % n) + n) % n]; };
    std::vector<double> acc(static_cast<size_t>(n) + 1);
    acc[0] = 0.0;
    for (int k = 0; k < n; ++k) {
        const double step =
            h / 24.0 * (-at(k - 1) + 13.0 * at(k) + 13.0 * at(k + 1) - at(k + 2));
        acc[k + 1] = acc[k] + step;
    }
    // Remove the residual closure drift (bounded by tol_mean), then shift to zero mean.
    const double drift = acc[n];
    for (int k = 0; k <= n; ++k)
        acc[k] -= drift * k / n;
    GridFunction prim(p, std::move(acc));
    const double mean = integrate_period(prim) / p;
    prim += -mean;
    return prim;
}

} // namespace cellflux
