#include "eqgeo/immersion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "eqgeo/errors.hpp"

namespace eqgeo {

std::string format_point(const Eigen::VectorXd& x) {
    std::ostringstream os;
    os.precision(17);
    os << '(';
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        if (i) os << ", ";
        os << x[i];
    }
    os << ')';
    return os.str();
}

bool Box::contains(const Vec& x) const {
    if (x.size() != dim()) return false;
    for (int i = 0; i < dim(); ++i) {
        if (!ranges_[static_cast<size_t>(i)].contains(x[i])) return false;
    }
    return true;
}

bool Box::interior(const Vec& x) const {
    if (x.size() != dim()) return false;
    for (int i = 0; i < dim(); ++i) {
        const auto& r = ranges_[static_cast<size_t>(i)];
        if (!(x[i] > r.lo && x[i] < r.hi)) return false;
    }
    return true;
}

double Box::clearance(const Vec& x) const {
    double c = std::numeric_limits<double>::infinity();
    for (int i = 0; i < dim(); ++i) {
        const auto& r = ranges_[static_cast<size_t>(i)];
        c = std::min({c, x[i] - r.lo, r.hi - x[i]});
    }
    return c;
}

Vec Box::lerp(const Vec& u) const {
    Vec x(dim());
    for (int i = 0; i < dim(); ++i) {
        const auto& r = ranges_[static_cast<size_t>(i)];
        x[i] = r.lo + u[i] * r.width();
    }
    return x;
}

void ImmersionMap::validate() const {
    if (dim_param_ < 1 || dim_ambient_ < dim_param_) {
        throw InvalidInput("immersion '" + name_ + "': need 1 <= m <= n");
    }
    if (domain_.dim() != dim_param_) {
        throw InvalidInput("immersion '" + name_ + "': domain dimension does not match m");
    }
    for (const auto& r : domain_.ranges()) {
        if (!(r.lo < r.hi)) throw InvalidInput("immersion '" + name_ + "': empty domain side");
    }
}

Vec ImmersionMap::eval(const Vec& x) const {
    std::vector<double> in(x.data(), x.data() + x.size());
    const auto out = fns_->plain(in);
    return Eigen::Map<const Vec>(out.data(), static_cast<Eigen::Index>(out.size()));
}

ImmersionMap ImmersionMap::with_domain(Box domain) const {
    ImmersionMap copy = *this;
    copy.domain_ = std::move(domain);
    copy.validate();
    return copy;
}

AmbientJet curve_jet(const ImmersionMap& f, const std::vector<Jet2>& x) {
    const auto out = f.eval(x);
    const auto n = static_cast<Eigen::Index>(out.size());
    AmbientJet jet{Vec(n), Vec(n), Vec(n)};
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& o = out[static_cast<size_t>(i)];
        jet.position[i] = o.v;
        jet.velocity[i] = o.d;
        jet.acceleration[i] = o.dd;
    }
    return jet;
}

AmbientJet directional_jet(const ImmersionMap& f, const Vec& x, const Vec& u) {
    std::vector<Jet2> in(static_cast<size_t>(x.size()));
    for (Eigen::Index i = 0; i < x.size(); ++i) in[static_cast<size_t>(i)] = Jet2{x[i], u[i], 0.0};
    return curve_jet(f, in);
}

}  // namespace eqgeo
