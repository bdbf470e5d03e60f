#pragma once

#include <optional>
#include <span>
#include <vector>

#include "phasereg/types.hpp"

namespace phasereg {

struct PhysicalParams {
    double delta = 0.0;   // refractive decrement
    double beta = 0.0;    // absorption index
    double lambda = 0.0;  // wavelength
    double d = 0.0;       // propagation distance

    double mu() const;
};

// L = d delta lambda / (4 pi beta).
double physical_L(const PhysicalParams& p);

struct XiBundle {
    double ell = 0.0;
    double xi = 0.0;
    double dxi = 0.0;
    double d2xi = 0.0;
};

// Power spectrum of the data a curvature functional is built from, with
// modes sorted by their cutoff key |q|_inf so any mask is a prefix.
//   frame mode: xi = |Lap(K * f)|^2 on the 2D frame (or T * f on a line)
//   slice mode: xi = |d_t^2 (T * g)|^2 row by row, g = -ln f
class SpectralEnergy {
public:
    static SpectralEnergy of_frame(const Frame& f, Mode mode);
    static SpectralEnergy of_sinogram(const Sinogram& g);
    static SpectralEnergy of_signal(const Signal1D& f, Mode mode);

    Mode mode() const { return mode_; }
    // Sample spacing of the data, used to turn m into a cutoff.
    double delta() const { return delta_; }
    // Length scale of the data window, used for the default bracket.
    double extent() const { return extent_; }
    double min_frequency() const { return min_frequency_; }
    std::size_t admitted(const CutoffMask& mask) const;
    // Range of cutoffs [lo, hi) admitting the same modes as mask; hi is infinite past the last mode.
    std::pair<double, double> cutoff_plateau(const CutoffMask& mask) const;
    XiBundle evaluate(double ell, const CutoffMask& mask) const;

private:
    void finalize();

    Mode mode_ = Mode::Frame;
    double delta_ = 0.0;
    double extent_ = 0.0;
    double min_frequency_ = 0.0;
    std::vector<double> key_;
    std::vector<double> symbol_;
    std::vector<double> weight_;
};

// Spectral route checked against the residual route |u_ell - P f|^2 / ell^2.
XiBundle xi_frame(const Frame& f, double ell, const CutoffMask& mask);
XiBundle xi_slice(const Sinogram& g, double ell, const CutoffMask& mask);
double xi_residual_frame(const Frame& f, double ell, const CutoffMask& mask);
double xi_residual_slice(const Sinogram& g, double ell, const CutoffMask& mask);

// Curvature of the graph of ln xi, on whatever axis the bundle derivatives use.
double curvature(const XiBundle& b);
// Re-expresses the derivatives with respect to s = ln ell.
XiBundle to_log_axis(const XiBundle& b);

enum class CurvatureAxis { LogEll, LinearEll };
enum class Refinement { GoldenSection, Newton };

struct FindEllOptions {
    // Zero means the default bracket [1e-7, 1] * extent^2.
    double ell_lo = 0.0;
    double ell_hi = 0.0;
    int grid_points = 48;
    double rel_tol = 1e-4;
    CurvatureAxis axis = CurvatureAxis::LogEll;
    Refinement refinement = Refinement::GoldenSection;
};

struct CurvatureRecord {
    double ell = 0.0;
    double xi = 0.0;
    double kappa = 0.0;
};

struct CurvatureProfile {
    std::vector<CurvatureRecord> records;
    double argmax_ell = 0.0;
    double argmax_kappa = 0.0;
    Mode mode = Mode::Frame;
};

double curvature_at(const SpectralEnergy& data, double ell, const CutoffMask& mask, CurvatureAxis axis);
CurvatureProfile find_ell(const SpectralEnergy& data, const CutoffMask& mask, const FindEllOptions& options = {});
CurvatureProfile find_ell(const Frame& f, Mode mode, const CutoffMask& mask, const FindEllOptions& options = {});
CurvatureProfile find_ell(const Sinogram& g, const CutoffMask& mask, const FindEllOptions& options = {});
CurvatureProfile find_ell(const Signal1D& f, Mode mode, const CutoffMask& mask, const FindEllOptions& options = {});

// D(ell, sigma_c) = int_0^sigma_c s^4 / (1 + 4 pi^2 ell s^2)^2 ds, by adaptive quadrature.
double dispersion_D(double ell, double sigma_c);
double dispersion_D_closed(double ell, double sigma_c);
// The closed form with the two misprints left in, for mismatch reports.
double dispersion_D_printed(double ell, double sigma_c);
// Analytic ell-derivatives of D, for curvature profiles.
XiBundle dispersion_bundle(double ell, double sigma_c);

struct MSweepPoint {
    double m = 0.0;
    double ell = 0.0;  // NaN when no interior curvature maximum exists
};

struct MSweepResult {
    std::vector<MSweepPoint> points;
    std::optional<double> m_star;
    double ell_at_m_star = 0.0;
    // m values admitting the same modes as m_star; m_star is their geometric centre.
    double plateau_lo = 0.0, plateau_hi = 0.0;
    bool nonincreasing = true;
    bool strictly_decreasing = true;
};

std::vector<MSweepPoint> ell_sweep(const SpectralEnergy& data, std::span<const double> m_values,
                                   const FindEllOptions& options = {});
// Sweeps m, then refines the crossing of ell*(m) = reference_L by bisection.
MSweepResult m_sweep(const SpectralEnergy& data, std::span<const double> m_values,
                     double reference_L, const FindEllOptions& options = {});

struct AffineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

AffineFit fit_affine(std::span<const double> x, std::span<const double> y);
std::vector<double> log_space(double lo, double hi, std::size_t count);

} // namespace phasereg
