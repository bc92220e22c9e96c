#include "fujita/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace fujita {

RadialGrid::RadialGrid(int n, double L, int M) : n_(n), L_(L), M_(M), h_(0.0) {
    if (n < 1) {
        throw std::invalid_argument("RadialGrid: n must be >= 1");
    }
    if (!std::isfinite(L) || !(L > 0.0)) {
        throw std::invalid_argument("RadialGrid: L must be positive");
    }
    if (M < 1) {
        throw std::invalid_argument("RadialGrid: M must be >= 1");
    }
    h_ = L / (M + 1);
}

double RadialGrid::node(std::size_t i) const {
    // Exact endpoint so that r_{M+1} == L.
    if (i == boundary_index()) {
        return L_;
    }
    return static_cast<double>(i) * h_;
}

double RadialGrid::sphere_area() const {
    return 2.0 * std::pow(std::numbers::pi, 0.5 * n_) / std::tgamma(0.5 * n_);
}

Field::Field(RadialGrid grid) : grid_(grid), values_(grid.size(), 0.0) {}

Field::Field(RadialGrid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size()) {
        throw std::invalid_argument("Field: value count does not match grid size");
    }
}

bool Field::all_finite() const {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

namespace profile {

namespace {

double bump(double r, double c, double w) {
    const double s = (r - c) / w;
    return std::exp(-s * s);
}

}  // namespace

double evaluate(const Primitive& prim, double r) {
    struct Visitor {
        double r;
        double operator()(const Gaussian& g) const { return g.amplitude * std::exp(-r * r / 4.0); }
        double operator()(const Algebraic& a) const { return a.eps * std::pow(1.0 + r * r, -a.k); }
        double operator()(const AnnularBump& a) const {
            return a.amplitude * bump(r, a.center, a.width);
        }
        double operator()(const SignedDipole& d) const {
            return d.a_plus * bump(r, d.c_plus, d.w_plus) - d.a_minus * bump(r, d.c_minus, d.w_minus);
        }
        double operator()(const Zero&) const { return 0.0; }
    };
    return std::visit(Visitor{r}, prim);
}

}  // namespace profile

ProfileSpec::ProfileSpec(profile::Primitive prim) : terms_{prim} {}

ProfileSpec::ProfileSpec(std::vector<profile::Primitive> terms) : terms_(std::move(terms)) {
    if (terms_.size() > kMaxTerms) {
        throw std::invalid_argument("ProfileSpec: at most 4 primitives may be composed");
    }
}

double ProfileSpec::operator()(double r) const {
    double sum = 0.0;
    for (const auto& t : terms_) {
        sum += profile::evaluate(t, r);
    }
    return sum;
}

Field sample_profile(const ProfileSpec& spec, const RadialGrid& grid) {
    Field f(grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        f[i] = spec(grid.node(i));
    }
    return f;
}

double integrate(const Field& f) {
    if (!f.all_finite()) {
        throw std::invalid_argument("integrate: field has non-finite values");
    }
    const auto& g = f.grid();
    const int n = g.dim();
    const std::size_t last = g.boundary_index();
    double sum = 0.0;
    for (std::size_t i = 0; i <= last; ++i) {
        const double w = (i == 0 || i == last) ? 0.5 : 1.0;
        const double r = g.node(i);
        const double jac = (n == 1) ? 1.0 : std::pow(r, n - 1);
        sum += w * f[i] * jac;
    }
    return g.sphere_area() * g.spacing() * sum;
}

double sup_norm(const Field& f) {
    double m = 0.0;
    for (double v : f.values()) {
        m = std::max(m, std::abs(v));
    }
    return m;
}

double l1_norm(const Field& f) {
    Field a(f.grid());
    for (std::size_t i = 0; i < f.size(); ++i) {
        a[i] = std::abs(f[i]);
    }
    return integrate(a);
}

double mean(const Field& f) { return integrate(f); }

Field multiply(const Field& a, const Field& b) {
    if (!(a.grid() == b.grid())) {
        throw std::invalid_argument("multiply: fields live on different grids");
    }
    Field out(a.grid());
    for (std::size_t i = 0; i < a.size(); ++i) {
        out[i] = a[i] * b[i];
    }
    return out;
}

profile::SignedDipole tune_dipole_mean(const profile::SignedDipole& dipole,
                                       const RadialGrid& grid, double target_mean) {
    // The mean is affine in a_minus, so a secant step through two probes lands on the root.
    auto mean_at = [&](double a_minus) {
        auto d = dipole;
        d.a_minus = a_minus;
        return mean(sample_profile(ProfileSpec(d), grid)) - target_mean;
    };
    const double x0 = 0.0;
    const double x1 = std::max(1.0, std::abs(dipole.a_minus));
    const double f0 = mean_at(x0);
    const double f1 = mean_at(x1);
    if (f1 == f0) {
        throw std::invalid_argument("tune_dipole_mean: negative lobe has zero mass on this grid");
    }
    auto out = dipole;
    out.a_minus = x1 - f1 * (x1 - x0) / (f1 - f0);
    return out;
}

void write_field_csv(std::ostream& os, const Field& f) {
    os << "r,value\n";
    char buf[96];
    for (std::size_t i = 0; i < f.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.10e,%.17g\n", f.grid().node(i), f[i]);
        os << buf;
    }
}

}  // namespace fujita
