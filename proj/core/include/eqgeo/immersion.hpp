#pragma once

#include <Eigen/Core>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "eqgeo/autodiff.hpp"

namespace eqgeo {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

struct Interval {
    double lo{0.0};
    double hi{0.0};

    double width() const { return hi - lo; }
    bool contains(double x) const { return x >= lo && x <= hi; }
};

/// Axis-aligned parameter box. Every stencil evaluation is checked against it.
class Box {
public:
    Box() = default;
    explicit Box(std::vector<Interval> ranges) : ranges_(std::move(ranges)) {}

    int dim() const { return static_cast<int>(ranges_.size()); }
    const Interval& operator[](int i) const { return ranges_[static_cast<size_t>(i)]; }
    const std::vector<Interval>& ranges() const { return ranges_; }

    bool contains(const Vec& x) const;
    bool interior(const Vec& x) const;
    /// Largest h with x ± h·e_i inside the box for every i.
    double clearance(const Vec& x) const;
    /// Point at fractions u ∈ [0,1]^m of each side.
    Vec lerp(const Vec& u) const;

private:
    std::vector<Interval> ranges_;
};

/// An evaluable map from an m-dimensional parameter box into R^n.
///
/// The map is stored once per scalar type so that the same definition feeds
/// plain evaluation, first-derivative duals and second-order jets.  Build it
/// from a generic callable taking `const std::vector<T>&` and returning
/// `std::vector<T>` of length n.
class ImmersionMap {
public:
    template <class T>
    using Fn = std::function<std::vector<T>(const std::vector<T>&)>;

    template <class F>
    ImmersionMap(std::string name, int dim_param, int dim_ambient, Box domain, F f)
        : name_(std::move(name)),
          dim_param_(dim_param),
          dim_ambient_(dim_ambient),
          domain_(std::move(domain)),
          fns_(std::make_shared<Fns>(Fns{Fn<double>(f), Fn<Dual>(f), Fn<Jet2>(f)})) {
        validate();
    }

    const std::string& name() const { return name_; }
    int dim_param() const { return dim_param_; }
    int dim_ambient() const { return dim_ambient_; }
    const Box& domain() const { return domain_; }

    Vec eval(const Vec& x) const;
    std::vector<Dual> eval(const std::vector<Dual>& x) const { return fns_->dual(x); }
    std::vector<Jet2> eval(const std::vector<Jet2>& x) const { return fns_->jet(x); }

    /// Same map restricted to (or extended over) another box.
    ImmersionMap with_domain(Box domain) const;

private:
    struct Fns {
        Fn<double> plain;
        Fn<Dual> dual;
        Fn<Jet2> jet;
    };
    ImmersionMap() = default;
    void validate() const;

    std::string name_;
    int dim_param_{0};
    int dim_ambient_{0};
    Box domain_;
    std::shared_ptr<const Fns> fns_;
};

/// Ambient position, velocity and acceleration of s ↦ f(x + s·u) at s = 0.
struct AmbientJet {
    Vec position;
    Vec velocity;
    Vec acceleration;
};

AmbientJet directional_jet(const ImmersionMap& f, const Vec& x, const Vec& u);

/// Ambient jet of f along a parameter-space curve given as per-coordinate jets.
AmbientJet curve_jet(const ImmersionMap& f, const std::vector<Jet2>& x);

}  // namespace eqgeo
