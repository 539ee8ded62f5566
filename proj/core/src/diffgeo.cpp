#include "eqgeo/diffgeo.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>
#include <Eigen/SVD>
#include <algorithm>
#include <array>
#include <cmath>

#include "eqgeo/errors.hpp"

namespace eqgeo {

namespace {

void require_in_domain(const ImmersionMap& f, const Vec& x, const char* what) {
    if (x.size() != f.dim_param()) {
        throw InvalidInput(std::string(what) + ": point has wrong dimension");
    }
    if (!f.domain().contains(x)) {
        throw DomainError(std::string(what) + ": point " + format_point(x) +
                          " outside the domain of '" + f.name() + "'");
    }
}

double default_step(double base, double coord) { return base * (1.0 + std::abs(coord)); }

// Metric at a stencil point; the caller has already checked containment.
Mat metric_at(const ImmersionMap& f, const Vec& x) {
    const Mat jac = jacobian_unchecked(f, x);
    Mat g = jac.transpose() * jac;
    Eigen::LLT<Mat> llt(g);
    if (llt.info() != Eigen::Success) {
        throw ImmersionError("metric is not positive definite at " + format_point(x), x);
    }
    return g;
}

std::vector<Mat> metric_derivatives_cd(const ImmersionMap& f, const Vec& x, double step) {
    const int m = f.dim_param();
    std::vector<Mat> dg;
    dg.reserve(static_cast<size_t>(m));
    for (int h = 0; h < m; ++h) {
        const double s = step > 0.0 ? step : default_step(1e-5, x[h]);
        Vec xp = x, xm = x;
        xp[h] += s;
        xm[h] -= s;
        if (!f.domain().contains(xp) || !f.domain().contains(xm)) {
            throw DomainError("finite-difference step " + std::to_string(s) +
                              " leaves the domain around " + format_point(x));
        }
        dg.push_back((metric_at(f, xp) - metric_at(f, xm)) / (2.0 * s));
    }
    return dg;
}

std::vector<Mat> metric_derivatives_dual(const ImmersionMap& f, const Vec& x) {
    const int m = f.dim_param();
    const Mat jac = jacobian_unchecked(f, x);
    const auto hess = second_partials(f, x);
    std::vector<Mat> dg(static_cast<size_t>(m), Mat::Zero(m, m));
    for (int h = 0; h < m; ++h) {
        for (int i = 0; i < m; ++i) {
            for (int j = i; j < m; ++j) {
                const double v = hess[static_cast<size_t>(h * m + i)].dot(jac.col(j)) +
                                 jac.col(i).dot(hess[static_cast<size_t>(h * m + j)]);
                dg[static_cast<size_t>(h)](i, j) = v;
                dg[static_cast<size_t>(h)](j, i) = v;
            }
        }
    }
    return dg;
}

}  // namespace

ChristoffelSymbols::ChristoffelSymbols(Vec point, int dim)
    : point_(std::move(point)), dim_(dim), data_(static_cast<size_t>(dim * dim * dim), 0.0) {}

void ChristoffelSymbols::set(int k, int i, int j, double value) {
    data_[index(k, i, j)] = value;
    data_[index(k, j, i)] = value;
}

Vec ChristoffelSymbols::contract(const Vec& u, const Vec& w) const {
    Vec out = Vec::Zero(dim_);
    for (int k = 0; k < dim_; ++k) {
        double acc = 0.0;
        for (int i = 0; i < dim_; ++i) {
            for (int j = 0; j < dim_; ++j) acc += (*this)(k, i, j) * u[i] * w[j];
        }
        out[k] = acc;
    }
    return out;
}

double ChristoffelSymbols::max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
}

Mat jacobian_unchecked(const ImmersionMap& f, const Vec& x) {
    const int m = f.dim_param();
    const int n = f.dim_ambient();
    Mat jac(n, m);
    std::vector<Dual> in(static_cast<size_t>(m));
    for (int j = 0; j < m; ++j) {
        for (int i = 0; i < m; ++i) in[static_cast<size_t>(i)] = Dual{x[i], i == j ? 1.0 : 0.0};
        const auto out = f.eval(in);
        if (static_cast<int>(out.size()) != n) {
            throw InvalidInput("immersion '" + f.name() + "' returned wrong ambient dimension");
        }
        for (int i = 0; i < n; ++i) jac(i, j) = out[static_cast<size_t>(i)].d;
    }
    return jac;
}

Mat jacobian(const ImmersionMap& f, const Vec& x) {
    require_in_domain(f, x, "jacobian");
    Mat jac = jacobian_unchecked(f, x);
    Eigen::JacobiSVD<Mat> svd(jac);
    const auto& sv = svd.singularValues();
    const double smax = sv.size() ? sv[0] : 0.0;
    const double smin = sv.size() ? sv[sv.size() - 1] : 0.0;
    if (!(smin > 1e-12 * std::max(1.0, smax))) {
        throw ImmersionError("not an immersion here: Jacobian rank deficient at " + format_point(x),
                             x);
    }
    return jac;
}

std::vector<Vec> second_partials(const ImmersionMap& f, const Vec& x) {
    const int m = f.dim_param();
    std::vector<Vec> h(static_cast<size_t>(m * m));
    Vec u = Vec::Zero(m);
    for (int i = 0; i < m; ++i) {
        u.setZero();
        u[i] = 1.0;
        h[static_cast<size_t>(i * m + i)] = directional_jet(f, x, u).acceleration;
    }
    for (int i = 0; i < m; ++i) {
        for (int j = i + 1; j < m; ++j) {
            u.setZero();
            u[i] = 1.0;
            u[j] = 1.0;
            const Vec both = directional_jet(f, x, u).acceleration;
            Vec mixed = 0.5 * (both - h[static_cast<size_t>(i * m + i)] - h[static_cast<size_t>(j * m + j)]);
            h[static_cast<size_t>(i * m + j)] = mixed;
            h[static_cast<size_t>(j * m + i)] = std::move(mixed);
        }
    }
    return h;
}

MetricTensor induced_metric(const ImmersionMap& f, const Vec& x) {
    const Mat jac = jacobian(f, x);
    const int m = f.dim_param();
    Mat g = jac.transpose() * jac;
    Eigen::LLT<Mat> llt(g);
    if (llt.info() != Eigen::Success) {
        throw ImmersionError("metric is not positive definite at " + format_point(x), x);
    }
    Mat g_inv = llt.solve(Mat::Identity(m, m));
    const double defect = (g * g_inv - Mat::Identity(m, m)).cwiseAbs().maxCoeff();
    if (!(defect <= 1e-10)) {
        throw ImmersionError("metric is numerically singular at " + format_point(x), x);
    }
    return {x, std::move(g), std::move(g_inv)};
}

ChristoffelSymbols christoffel_from_metric(const ImmersionMap& f, const Vec& x,
                                           const ChristoffelOptions& options) {
    const int m = f.dim_param();
    const MetricTensor metric = induced_metric(f, x);
    const auto dg = options.engine == DerivativeEngine::Dual
                        ? metric_derivatives_dual(f, x)
                        : metric_derivatives_cd(f, x, options.step);
    auto d = [&](int h, int i, int j) { return dg[static_cast<size_t>(h)](i, j); };

    ChristoffelSymbols gamma(x, m);
    for (int k = 0; k < m; ++k) {
        for (int i = 0; i < m; ++i) {
            for (int j = i; j < m; ++j) {
                double acc = 0.0;
                for (int h = 0; h < m; ++h) {
                    acc += metric.g_inv(h, k) * (d(i, j, h) + d(j, h, i) - d(h, i, j));
                }
                gamma.set(k, i, j, 0.5 * acc);
            }
        }
    }
    return gamma;
}

std::vector<double> riemann_tensor(const ImmersionMap& f, const Vec& x,
                                   const CurvatureOptions& options) {
    require_in_domain(f, x, "riemann_tensor");
    const int m = f.dim_param();
    const auto mm = static_cast<size_t>(m);
    const ChristoffelSymbols gamma = christoffel_from_metric(f, x, options.christoffel);

    // dgamma[i] holds ∂_i Γ^l_jk.
    std::vector<std::vector<double>> dgamma(mm, std::vector<double>(mm * mm * mm, 0.0));
    for (int i = 0; i < m; ++i) {
        const double s = options.step > 0.0 ? options.step : default_step(1e-4, x[i]);
        // Fourth-order stencil: Γ itself carries O(h²) error only when
        // computed by differences, so the outer derivative should not add more.
        std::array<Vec, 4> pts{x, x, x, x};
        const std::array<double, 4> off{2.0 * s, s, -s, -2.0 * s};
        const std::array<double, 4> wt{-1.0, 8.0, -8.0, 1.0};
        for (size_t q = 0; q < 4; ++q) {
            pts[q][i] += off[q];
            if (!f.domain().contains(pts[q])) {
                throw DomainError("curvature stencil leaves the domain around " + format_point(x));
            }
        }
        for (size_t q = 0; q < 4; ++q) {
            const auto gq = christoffel_from_metric(f, pts[q], options.christoffel);
            for (int l = 0; l < m; ++l) {
                for (int j = 0; j < m; ++j) {
                    for (int k = 0; k < m; ++k) {
                        dgamma[static_cast<size_t>(i)][static_cast<size_t>((l * m + j) * m + k)] +=
                            wt[q] * gq(l, j, k) / (12.0 * s);
                    }
                }
            }
        }
    }
    auto dG = [&](int i, int l, int j, int k) {
        return dgamma[static_cast<size_t>(i)][static_cast<size_t>((l * m + j) * m + k)];
    };

    std::vector<double> r(mm * mm * mm * mm, 0.0);
    for (int l = 0; l < m; ++l) {
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j < m; ++j) {
                for (int k = 0; k < m; ++k) {
                    double v = dG(i, l, j, k) - dG(j, l, i, k);
                    for (int p = 0; p < m; ++p) {
                        v += gamma(l, i, p) * gamma(p, j, k) - gamma(l, j, p) * gamma(p, i, k);
                    }
                    r[static_cast<size_t>(((l * m + i) * m + j) * m + k)] = v;
                }
            }
        }
    }
    return r;
}

CurvatureReport sectional_curvature(const ImmersionMap& f, const Vec& x, const Vec& u,
                                    const Vec& v, const CurvatureOptions& options) {
    const int m = f.dim_param();
    if (u.size() != m || v.size() != m) throw InvalidInput("sectional_curvature: bad direction size");
    const MetricTensor metric = induced_metric(f, x);
    const double uu = u.dot(metric.g * u);
    const double vv = v.dot(metric.g * v);
    const double uv = u.dot(metric.g * v);
    const double area = uu * vv - uv * uv;
    if (!(area > 1e-14 * uu * vv)) {
        throw InvalidInput("sectional_curvature: degenerate plane (u parallel to v)");
    }
    const auto r = riemann_tensor(f, x, options);
    Vec rv = Vec::Zero(m);  // R(u,v)v
    double rmax = 0.0;
    for (int l = 0; l < m; ++l) {
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j < m; ++j) {
                for (int k = 0; k < m; ++k) {
                    const double rl = r[static_cast<size_t>(((l * m + i) * m + j) * m + k)];
                    rmax = std::max(rmax, std::abs(rl));
                    rv[l] += rl * u[i] * v[j] * v[k];
                }
            }
        }
    }
    return {x, u, v, u.dot(metric.g * rv) / area, rmax};
}

Vec unit_normal(const ImmersionMap& f, const Vec& x) {
    const int m = f.dim_param();
    const int n = f.dim_ambient();
    if (n != m + 1) {
        throw UnsupportedError("unit normal needs a hypersurface (n = m + 1); '" + f.name() +
                               "' has m=" + std::to_string(m) + ", n=" + std::to_string(n));
    }
    require_in_domain(f, x, "unit_normal");
    const Mat jac = jacobian_unchecked(f, x);
    Vec normal(n);
    for (int i = 0; i < n; ++i) {
        Mat minor(m, m);
        for (int r = 0, row = 0; r < n; ++r) {
            if (r == i) continue;
            minor.row(row++) = jac.row(r);
        }
        normal[i] = ((i % 2) ? -1.0 : 1.0) * minor.determinant();
    }
    const double len = normal.norm();
    const double scale = std::max(1.0, jac.colwise().norm().prod());
    if (!(len > 1e-14 * scale)) {
        throw ImmersionError("degenerate normal at " + format_point(x), x);
    }
    return normal / len;
}

}  // namespace eqgeo
