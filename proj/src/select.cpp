#include "phasereg/select.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

#include "phasereg/fft.hpp"
#include "phasereg/filters.hpp"
#include "phasereg/parallel.hpp"
#include "phasereg/quadrature.hpp"
#include "phasereg/spectral.hpp"

namespace phasereg {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kFourPi2 = 4.0 * kPi * kPi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double relative_gap(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

void check_positive_ell(double ell) {
    if (!(ell > 0.0) || !std::isfinite(ell))
        throw InputError("xi: ell must be positive (the residual form is singular at 0)");
}

} // namespace

double PhysicalParams::mu() const { return 4.0 * kPi * beta / lambda; }

double physical_L(const PhysicalParams& p) {
    if (!(p.beta > 0.0) || !(p.lambda > 0.0))
        throw InputError("physical_L: beta and lambda must be positive");
    if (p.delta < 0.0 || p.d < 0.0)
        throw InputError("physical_L: delta and d must be nonnegative");
    return p.d * p.delta * p.lambda / (4.0 * kPi * p.beta);
}

SpectralEnergy SpectralEnergy::of_frame(const Frame& f, Mode mode) {
    SpectralEnergy e;
    e.mode_ = mode;
    e.delta_ = f.grid.delta;
    e.extent_ = static_cast<double>(std::max(f.grid.rows, f.grid.cols)) * f.grid.delta;
    const Grid1D ra = f.grid.row_axis();
    const Grid1D ca = f.grid.col_axis();
    const double cell = f.grid.cell_area();
    if (mode == Mode::Frame) {
        const ComplexArray2D spec = fft2(f.data);
        for (std::size_t r = 0; r < f.grid.rows; ++r) {
            const double q2 = ra.frequency(r);
            for (std::size_t c = 0; c < f.grid.cols; ++c) {
                const double q1 = ca.frequency(c);
                e.key_.push_back(std::max(std::abs(q1), std::abs(q2)));
                e.symbol_.push_back(kFourPi2 * (q1 * q1 + q2 * q2));
                e.weight_.push_back(cell * std::norm(spec(r, c)));
            }
        }
    } else {
        ComplexArray2D spec(f.grid.rows, f.grid.cols);
        for (std::size_t i = 0; i < f.data.size(); ++i)
            spec.values()[i] = -std::log(f.data.values()[i]);
        fft_rows_inplace(spec, Direction::Forward);
        for (std::size_t r = 0; r < f.grid.rows; ++r)
            for (std::size_t c = 0; c < f.grid.cols; ++c) {
                const double q1 = ca.frequency(c);
                e.key_.push_back(std::abs(q1));
                e.symbol_.push_back(kFourPi2 * q1 * q1);
                e.weight_.push_back(cell * std::norm(spec(r, c)));
            }
    }
    e.finalize();
    return e;
}

SpectralEnergy SpectralEnergy::of_sinogram(const Sinogram& g) {
    SpectralEnergy e;
    e.mode_ = Mode::Slice;
    e.delta_ = g.t_grid.delta;
    e.extent_ = g.t_grid.length();
    ComplexArray2D spec = to_complex(g.data);
    fft_rows_inplace(spec, Direction::Forward);
    const double cell = g.t_grid.delta * kPi / static_cast<double>(g.angles.size());
    for (std::size_t r = 0; r < spec.rows(); ++r)
        for (std::size_t c = 0; c < spec.cols(); ++c) {
            const double s = g.t_grid.frequency(c);
            e.key_.push_back(std::abs(s));
            e.symbol_.push_back(kFourPi2 * s * s);
            e.weight_.push_back(cell * std::norm(spec(r, c)));
        }
    e.finalize();
    return e;
}

SpectralEnergy SpectralEnergy::of_signal(const Signal1D& f, Mode mode) {
    SpectralEnergy e;
    e.mode_ = mode;
    e.delta_ = f.grid.delta;
    e.extent_ = f.grid.length();
    std::vector<double> src = f.data;
    if (mode == Mode::Slice)
        for (auto& v : src)
            v = -std::log(v);
    const auto spec = fft(src);
    for (std::size_t j = 0; j < spec.size(); ++j) {
        const double s = f.grid.frequency(j);
        e.key_.push_back(std::abs(s));
        e.symbol_.push_back(kFourPi2 * s * s);
        e.weight_.push_back(f.grid.delta * std::norm(spec[j]));
    }
    e.finalize();
    return e;
}

void SpectralEnergy::finalize() {
    min_frequency_ = 1.0 / extent_;
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < key_.size(); ++i)
        if (symbol_[i] > 0.0)
            order.push_back(i);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return key_[a] < key_[b]; });
    std::vector<double> k, s, w;
    k.reserve(order.size());
    s.reserve(order.size());
    w.reserve(order.size());
    for (std::size_t i : order) {
        k.push_back(key_[i]);
        s.push_back(symbol_[i]);
        w.push_back(weight_[i]);
    }
    key_ = std::move(k);
    symbol_ = std::move(s);
    weight_ = std::move(w);
}

std::size_t SpectralEnergy::admitted(const CutoffMask& mask) const {
    if (mask.is_full())
        return key_.size();
    const double limit = mask.q_c() * (1.0 + 1e-12);
    return static_cast<std::size_t>(std::upper_bound(key_.begin(), key_.end(), limit) - key_.begin());
}

std::pair<double, double> SpectralEnergy::cutoff_plateau(const CutoffMask& mask) const {
    const std::size_t n = admitted(mask);
    const double lo = n == 0 ? 0.0 : key_[n - 1];
    const double hi = n == key_.size() ? std::numeric_limits<double>::infinity() : key_[n];
    return {lo, hi};
}

XiBundle SpectralEnergy::evaluate(double ell, const CutoffMask& mask) const {
    if (!(ell >= 0.0) || !std::isfinite(ell))
        throw InputError("xi: ell must be finite and nonnegative");
    const std::size_t n = admitted(mask);
    double xi = 0.0, d1 = 0.0, d2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double a = symbol_[i];
        const double k = 1.0 / (1.0 + a * ell);
        const double t = weight_[i] * (a * k) * (a * k);
        xi += t;
        d1 += t * a * k;
        d2 += t * (a * k) * (a * k);
    }
    return {ell, xi, -2.0 * d1, 6.0 * d2};
}

XiBundle xi_frame(const Frame& f, double ell, const CutoffMask& mask) {
    check_positive_ell(ell);
    const XiBundle b = SpectralEnergy::of_frame(f, Mode::Frame).evaluate(ell, mask);
    const double residual = xi_residual_frame(f, ell, mask);
    if (relative_gap(b.xi, residual) > 1e-8 && std::abs(b.xi - residual) > 1e-300)
        throw NumericalError("xi_frame: spectral and residual routes disagree");
    return b;
}

XiBundle xi_slice(const Sinogram& g, double ell, const CutoffMask& mask) {
    check_positive_ell(ell);
    const XiBundle b = SpectralEnergy::of_sinogram(g).evaluate(ell, mask);
    const double residual = xi_residual_slice(g, ell, mask);
    if (relative_gap(b.xi, residual) > 1e-8 && std::abs(b.xi - residual) > 1e-300)
        throw NumericalError("xi_slice: spectral and residual routes disagree");
    return b;
}

double xi_residual_frame(const Frame& f, double ell, const CutoffMask& mask) {
    check_positive_ell(ell);
    const Array2D u = smooth_frame(f, ell, mask);
    const Array2D pf = apply_multiplier(f.data, f.grid, [&](double q1, double q2) {
        return mask.admits(q1, q2) ? 1.0 : 0.0;
    });
    double sum = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double r = u.values()[i] - pf.values()[i];
        sum += r * r;
    }
    return sum * f.grid.cell_area() / (ell * ell);
}

double xi_residual_slice(const Sinogram& g, double ell, const CutoffMask& mask) {
    check_positive_ell(ell);
    const Array2D p = filter_sinogram(g, ell, mask).data;
    const Array2D pg = apply_multiplier_rows(g.data, g.t_grid, [&](double s) { return mask.admits(s) ? 1.0 : 0.0; });
    double sum = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double r = p.values()[i] - pg.values()[i];
        sum += r * r;
    }
    const double cell = g.t_grid.delta * kPi / static_cast<double>(g.angles.size());
    return sum * cell / (ell * ell);
}

double curvature(const XiBundle& b) {
    if (!(b.xi > 0.0))
        throw InputError("curvature: xi must be positive");
    const double slope = b.dxi / b.xi;
    const double num = std::abs(b.d2xi * b.xi - b.dxi * b.dxi) / (b.xi * b.xi);
    return num / std::pow(1.0 + slope * slope, 1.5);
}

XiBundle to_log_axis(const XiBundle& b) {
    return {b.ell, b.xi, b.ell * b.dxi, b.ell * b.ell * b.d2xi + b.ell * b.dxi};
}

double curvature_at(const SpectralEnergy& data, double ell, const CutoffMask& mask, CurvatureAxis axis) {
    const XiBundle b = data.evaluate(ell, mask);
    return curvature(axis == CurvatureAxis::LogEll ? to_log_axis(b) : b);
}

namespace {

struct Bracket {
    double lo;
    double hi;
};

Bracket resolve_bracket(const SpectralEnergy& data, const FindEllOptions& o) {
    const double scale = data.extent() * data.extent();
    Bracket b{o.ell_lo > 0.0 ? o.ell_lo : 1e-7 * scale, o.ell_hi > 0.0 ? o.ell_hi : scale};
    if (!(b.lo > 0.0) || !(b.hi > b.lo))
        throw InputError("find_ell: bracket must satisfy 0 < ell_lo < ell_hi");
    return b;
}

// Maximizes kappa(exp(s)) on [a, b]; returns (s, kappa).
std::pair<double, double> golden_max(const std::function<double(double)>& kappa_of_s, double a, double b,
                                     double tol) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = kappa_of_s(x1);
    double f2 = kappa_of_s(x2);
    for (int it = 0; it < 200 && (b - a) > tol; ++it) {
        // >= keeps the left point on ties, biasing toward smaller ell.
        if (f1 >= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = kappa_of_s(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = kappa_of_s(x2);
        }
    }
    return f1 >= f2 ? std::make_pair(x1, f1) : std::make_pair(x2, f2);
}

std::optional<std::pair<double, double>> newton_max(const std::function<double(double)>& kappa_of_s, double s0,
                                                    double a, double b, double tol) {
    const double h = 1e-3;
    double s = s0;
    for (int it = 0; it < 50; ++it) {
        const double fm = kappa_of_s(s - h), f0 = kappa_of_s(s), fp = kappa_of_s(s + h);
        const double g = (fp - fm) / (2.0 * h);
        const double H = (fp - 2.0 * f0 + fm) / (h * h);
        if (!(H < 0.0))
            return std::nullopt;
        const double step = -g / H;
        s += step;
        if (s < a || s > b)
            return std::nullopt;
        if (std::abs(step) < tol)
            return std::make_pair(s, kappa_of_s(s));
    }
    return std::nullopt;
}

} // namespace

CurvatureProfile find_ell(const SpectralEnergy& data, const CutoffMask& mask, const FindEllOptions& options) {
    if (options.grid_points < 16)
        throw InputError("find_ell: grid_points must be at least 16");
    const Bracket br = resolve_bracket(data, options);
    if (!(data.evaluate(br.lo, mask).xi > 0.0))
        throw NumericalError("find_ell: constant input data (xi is identically zero)");

    const auto n = static_cast<std::size_t>(options.grid_points);
    const std::vector<double> ells = log_space(br.lo, br.hi, n);
    CurvatureProfile profile;
    profile.mode = data.mode();
    profile.records.resize(n);
    parallel_for(n, [&](std::size_t i) {
        const XiBundle b = data.evaluate(ells[i], mask);
        const XiBundle used = options.axis == CurvatureAxis::LogEll ? to_log_axis(b) : b;
        profile.records[i] = {ells[i], b.xi, curvature(used)};
    });

    std::size_t best = 0;
    for (std::size_t i = 1; i < n; ++i)
        if (profile.records[i].kappa > profile.records[best].kappa)
            best = i;
    if (best == 0 || best == n - 1) {
        std::ostringstream msg;
        msg << "find_ell: curvature has no interior maximum in [" << br.lo << ", " << br.hi << "]";
        throw NumericalError(msg.str());
    }

    auto kappa_of_s = [&](double s) { return curvature_at(data, std::exp(s), mask, options.axis); };
    const double a = std::log(ells[best - 1]);
    const double b = std::log(ells[best + 1]);
    std::optional<std::pair<double, double>> refined;
    if (options.refinement == Refinement::Newton)
        refined = newton_max(kappa_of_s, std::log(ells[best]), a, b, options.rel_tol);
    if (!refined)
        refined = golden_max(kappa_of_s, a, b, options.rel_tol);

    profile.argmax_ell = ells[best];
    profile.argmax_kappa = profile.records[best].kappa;
    if (refined->second > profile.argmax_kappa) {
        profile.argmax_ell = std::exp(refined->first);
        profile.argmax_kappa = refined->second;
    }
    return profile;
}

CurvatureProfile find_ell(const Frame& f, Mode mode, const CutoffMask& mask, const FindEllOptions& options) {
    return find_ell(SpectralEnergy::of_frame(f, mode), mask, options);
}

CurvatureProfile find_ell(const Sinogram& g, const CutoffMask& mask, const FindEllOptions& options) {
    return find_ell(SpectralEnergy::of_sinogram(g), mask, options);
}

CurvatureProfile find_ell(const Signal1D& f, Mode mode, const CutoffMask& mask, const FindEllOptions& options) {
    return find_ell(SpectralEnergy::of_signal(f, mode), mask, options);
}

namespace {

void check_dispersion_args(double ell, double sigma_c) {
    if (!(ell > 0.0) || !(sigma_c > 0.0))
        throw InputError("dispersion: ell and sigma_c must be positive");
}

double dispersion_moment(double ell, double sigma_c, int order) {
    check_dispersion_args(ell, sigma_c);
    const double c = kFourPi2 * ell;
    // order-th ell-derivative of s^4 / (1 + c s^2)^2.
    auto integrand = [c, order](double s) {
        const double s2 = s * s;
        const double k = 1.0 / (1.0 + c * s2);
        const double base = s2 * s2 * k * k;
        const double ak = kFourPi2 * s2 * k;
        if (order == 0)
            return base;
        if (order == 1)
            return -2.0 * base * ak;
        return 6.0 * base * ak * ak;
    };
    return integrate(integrand, 0.0, sigma_c, 1e-10, 1e-13).value;
}

} // namespace

double dispersion_D(double ell, double sigma_c) { return dispersion_moment(ell, sigma_c, 0); }

double dispersion_D_closed(double ell, double sigma_c) {
    check_dispersion_args(ell, sigma_c);
    const double c = kFourPi2 * ell;
    const double s = sigma_c;
    return s * (3.0 + 2.0 * c * s * s) / (2.0 * c * c * (1.0 + c * s * s)) -
           3.0 * std::atan(std::sqrt(c) * s) / (2.0 * std::pow(c, 2.5));
}

double dispersion_D_printed(double ell, double sigma_c) {
    check_dispersion_args(ell, sigma_c);
    const double c = kFourPi2 * ell;
    const double s = sigma_c;
    return (3.0 * s + 8.0 * kPi * kPi * ell * s * s) / (32.0 * std::pow(kPi, 4) * ell * ell * (c * s * s + 1.0)) -
           3.0 * std::atan(2.0 * kPi * std::sqrt(s)) / (2.0 * std::pow(c, 2.5));
}

XiBundle dispersion_bundle(double ell, double sigma_c) {
    return {ell, dispersion_moment(ell, sigma_c, 0), dispersion_moment(ell, sigma_c, 1),
            dispersion_moment(ell, sigma_c, 2)};
}

std::vector<MSweepPoint> ell_sweep(const SpectralEnergy& data, std::span<const double> m_values,
                                   const FindEllOptions& options) {
    for (std::size_t i = 0; i < m_values.size(); ++i) {
        if (!(m_values[i] > 0.0))
            throw InputError("m_sweep: m values must be positive");
        if (i > 0 && !(m_values[i] > m_values[i - 1]))
            throw InputError("m_sweep: m values must be increasing");
    }
    std::vector<MSweepPoint> points(m_values.size());
    for (std::size_t i = 0; i < m_values.size(); ++i) {
        points[i].m = m_values[i];
        try {
            points[i].ell = find_ell(data, CutoffMask(m_values[i], data.delta()), options).argmax_ell;
        } catch (const NumericalError& e) {
            warn(std::string("m_sweep: m = ") + std::to_string(m_values[i]) + ": " + e.what());
            points[i].ell = kNaN;
        }
    }
    return points;
}

MSweepResult m_sweep(const SpectralEnergy& data, std::span<const double> m_values, double reference_L,
                     const FindEllOptions& options) {
    if (!(reference_L > 0.0))
        throw InputError("m_sweep: reference L must be positive");
    MSweepResult result;
    result.points = ell_sweep(data, m_values, options);

    const MSweepPoint* prev = nullptr;
    std::optional<std::size_t> crossing;
    for (std::size_t i = 0; i < result.points.size(); ++i) {
        const auto& p = result.points[i];
        if (std::isnan(p.ell))
            continue;
        if (prev) {
            result.nonincreasing = result.nonincreasing && p.ell <= prev->ell;
            result.strictly_decreasing = result.strictly_decreasing && p.ell < prev->ell;
            if (!crossing && (prev->ell - reference_L) * (p.ell - reference_L) <= 0.0)
                crossing = static_cast<std::size_t>(prev - result.points.data());
        }
        prev = &p;
    }
    if (!crossing)
        throw NumericalError("m_sweep: ell*(m) does not cross the reference L in the sweep range");

    MSweepPoint lo = result.points[*crossing];
    std::size_t next = *crossing + 1;
    while (std::isnan(result.points[next].ell))
        ++next;
    MSweepPoint hi = result.points[next];
    for (int it = 0; it < 80 && hi.m / lo.m - 1.0 > 1e-10; ++it) {
        const double mid = std::sqrt(lo.m * hi.m);
        double ell;
        try {
            ell = find_ell(data, CutoffMask(mid, data.delta()), options).argmax_ell;
        } catch (const NumericalError&) {
            break;
        }
        if ((ell - reference_L) * (lo.ell - reference_L) > 0.0)
            lo = {mid, ell};
        else
            hi = {mid, ell};
    }
    const MSweepPoint& pick = std::abs(lo.ell - reference_L) <= std::abs(hi.ell - reference_L) ? lo : hi;
    const auto [q_lo, q_hi] = data.cutoff_plateau(CutoffMask(pick.m, data.delta()));
    result.plateau_lo = std::max(2.0 * data.delta() * q_lo, m_values.front());
    result.plateau_hi = std::isfinite(q_hi) ? 2.0 * data.delta() * q_hi : pick.m;
    result.m_star = result.plateau_lo > 0.0 ? std::sqrt(result.plateau_lo * result.plateau_hi) : pick.m;
    result.ell_at_m_star = find_ell(data, CutoffMask(*result.m_star, data.delta()), options).argmax_ell;
    return result;
}

AffineFit fit_affine(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw InputError("fit_affine: need at least two paired samples");
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    AffineFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r2 = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
    return fit;
}

std::vector<double> log_space(double lo, double hi, std::size_t count) {
    if (!(lo > 0.0) || !(hi > lo) || count < 2)
        throw InputError("log_space: need 0 < lo < hi and count >= 2");
    std::vector<double> out(count);
    const double a = std::log(lo), b = std::log(hi);
    for (std::size_t i = 0; i < count; ++i)
        out[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1));
    out.front() = lo;
    out.back() = hi;
    return out;
}

} // namespace phasereg
