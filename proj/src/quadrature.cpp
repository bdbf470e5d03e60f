#include "phasereg/quadrature.hpp"

#include <array>
#include <cmath>

#include "phasereg/errors.hpp"

namespace phasereg {

namespace {

constexpr std::array<double, 8> kNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

constexpr std::array<double, 8> kKronrod = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

// Gauss weights for the odd-indexed Kronrod nodes (and the centre).
constexpr std::array<double, 4> kGauss = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                          0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double kronrod;
    double error;
};

Segment gk15(const std::function<double(double)>& f, double a, double b, int& evals) {
    const double centre = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(centre);
    double k = kKronrod[7] * fc;
    double g = kGauss[3] * fc;
    for (int i = 0; i < 7; ++i) {
        const double dx = half * kNodes[i];
        const double s = f(centre - dx) + f(centre + dx);
        k += kKronrod[i] * s;
        if (i % 2 == 1)
            g += kGauss[i / 2] * s;
    }
    evals += 15;
    return {k * half, std::abs((k - g) * half)};
}

double refine(const std::function<double(double)>& f, double a, double b, double tol, int depth, int max_depth,
              QuadratureResult& out) {
    const Segment s = gk15(f, a, b, out.evaluations);
    if (s.error <= tol || depth >= max_depth) {
        if (s.error > tol)
            warn("integrate: maximum subdivision depth reached");
        out.error += s.error;
        return s.kronrod;
    }
    const double mid = 0.5 * (a + b);
    return refine(f, a, mid, 0.5 * tol, depth + 1, max_depth, out) +
           refine(f, mid, b, 0.5 * tol, depth + 1, max_depth, out);
}

} // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b, double abs_tol,
                           double rel_tol, int max_depth) {
    QuadratureResult out;
    if (a == b)
        return out;
    const Segment coarse = gk15(f, a, b, out.evaluations);
    const double tol = std::max(abs_tol, rel_tol * std::abs(coarse.kronrod));
    out.evaluations = 0;
    out.value = refine(f, a, b, tol, 0, max_depth, out);
    return out;
}

} // namespace phasereg
