#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <variant>
#include <vector>

namespace fujita {

/// Uniform radial grid on [0, L] with M interior nodes: r_i = i*L/(M+1), i = 0..M+1.
/// Node 0 is the center, node M+1 the Dirichlet boundary.
class RadialGrid {
public:
    RadialGrid() : RadialGrid(1, 1.0, 1) {}
    RadialGrid(int n, double L, int M);

    int dim() const { return n_; }
    double radius() const { return L_; }
    int interior() const { return M_; }
    std::size_t size() const { return static_cast<std::size_t>(M_) + 2; }
    double spacing() const { return h_; }
    double node(std::size_t i) const;
    std::size_t boundary_index() const { return size() - 1; }

    /// Area of the unit sphere S^{n-1}: 2π^{n/2}/Γ(n/2).
    double sphere_area() const;

    bool operator==(const RadialGrid& other) const = default;

private:
    int n_;
    double L_;
    int M_;
    double h_;
};

/// Radial profile sampled on a grid.
class Field {
public:
    Field() : Field(RadialGrid{}) {}
    explicit Field(RadialGrid grid);
    Field(RadialGrid grid, std::vector<double> values);

    const RadialGrid& grid() const { return grid_; }
    std::size_t size() const { return values_.size(); }
    std::span<const double> values() const { return values_; }
    std::span<double> values() { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }
    double& operator[](std::size_t i) { return values_[i]; }

    bool all_finite() const;
    double boundary_value() const { return values_.back(); }
    void zero_boundary() { values_.back() = 0.0; }

private:
    RadialGrid grid_;
    std::vector<double> values_;
};

namespace profile {

/// amplitude * exp(-r^2/4)
struct Gaussian {
    double amplitude = 1.0;
};
/// eps * (1 + r^2)^(-k)
struct Algebraic {
    double eps = 1.0;
    double k = 1.0;
};
/// amplitude * exp(-(r - center)^2 / width^2)
struct AnnularBump {
    double amplitude = 1.0;
    double center = 0.0;
    double width = 1.0;
};
/// a_plus * bump(c_plus, w_plus) - a_minus * bump(c_minus, w_minus)
struct SignedDipole {
    double a_plus = 1.0;
    double a_minus = 1.0;
    double c_plus = 0.0;
    double c_minus = 3.0;
    double w_plus = 1.0;
    double w_minus = 1.0;
};
struct Zero {};

using Primitive = std::variant<Gaussian, Algebraic, AnnularBump, SignedDipole, Zero>;

double evaluate(const Primitive& prim, double r);

}  // namespace profile

/// Sum of at most four profile primitives.
class ProfileSpec {
public:
    static constexpr std::size_t kMaxTerms = 4;

    ProfileSpec() = default;
    ProfileSpec(profile::Primitive prim);  // NOLINT(google-explicit-constructor)
    explicit ProfileSpec(std::vector<profile::Primitive> terms);

    const std::vector<profile::Primitive>& terms() const { return terms_; }
    double operator()(double r) const;

private:
    std::vector<profile::Primitive> terms_;
};

Field sample_profile(const ProfileSpec& spec, const RadialGrid& grid);

/// ω_{n-1} ∫_0^L f(r) r^{n-1} dr by the composite trapezoid rule.
double integrate(const Field& f);
double sup_norm(const Field& f);
double l1_norm(const Field& f);
double mean(const Field& f);

/// Pointwise product of two fields on the same grid.
Field multiply(const Field& a, const Field& b);

/// Returns a copy of `dipole` with a_minus chosen so that the sampled profile
/// integrates to `target_mean` on `grid`.
profile::SignedDipole tune_dipole_mean(const profile::SignedDipole& dipole,
                                       const RadialGrid& grid, double target_mean);

/// CSV with header "r,value".
void write_field_csv(std::ostream& os, const Field& f);

}  // namespace fujita
