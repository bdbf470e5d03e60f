#include <cmath>
#include <cstdio>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "phasereg/filters.hpp"
#include "phasereg/io.hpp"
#include "phasereg/parallel.hpp"
#include "phasereg/select.hpp"
#include "phasereg/simulate.hpp"
#include "phasereg/spectral.hpp"
#include "phasereg/tomo.hpp"
#include "phasereg/variational.hpp"

using namespace phasereg;

namespace {

struct Common {
    std::uint64_t seed = 20240611;
    unsigned threads = 0;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--seed", c.seed, "Seed for randomized steps");
    cmd->add_option("--threads", c.threads, "Worker threads (0 = all cores)");
}

void print_scalar(double v) { std::cout << format_double(v) << '\n'; }

std::string join(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i)
        out += (i ? "," : "") + format_double(v[i]);
    return out;
}

// ---- filter -------------------------------------------------------------

struct FilterArgs {
    Common common;
    std::string in, out, mode = "frame";
    std::optional<double> ell;
    bool autosel = false;
    double m = 1.0, c = 1.0;
    double ell_lo = 0.0, ell_hi = 0.0;
    int grid_points = 48;
};

FindEllOptions ell_options(double lo, double hi, int points) {
    FindEllOptions o;
    o.ell_lo = lo;
    o.ell_hi = hi;
    o.grid_points = points;
    return o;
}

int run_filter(const FilterArgs& a) {
    if (a.ell.has_value() == a.autosel)
        throw InputError("filter: give exactly one of --ell or --auto");
    const Mode mode = parse_mode(a.mode);
    const ArrayFile file = read_array(a.in);
    const auto& h = file.header;
    const CutoffMask mask(a.m, h.delta);
    const FindEllOptions opts = ell_options(a.ell_lo, a.ell_hi, a.grid_points);

    ArrayFile result;
    result.header = h;
    double ell = a.ell.value_or(0.0);
    if (h.kind == ArrayKind::Sinogram) {
        if (mode != Mode::Slice)
            throw InputError("filter: sinogram input requires --mode slice");
        const Sinogram g = sinogram_from(file);
        if (a.autosel)
            ell = find_ell(g, mask, opts).argmax_ell;
        result.values = filter_sinogram(g, ell, mask).data.values();
    } else if (h.kind == ArrayKind::Frame && h.shape.size() == 1) {
        const Signal1D s = signal_from(file);
        if (a.autosel)
            ell = find_ell(s, mode, mask, opts).argmax_ell;
        result.values = retrieve_signal(s, ell, mask, mode, a.c);
    } else if (h.kind == ArrayKind::Frame && h.shape.size() == 2) {
        const Frame f = frame_from(file);
        if (a.autosel)
            ell = find_ell(f, mode, mask, opts).argmax_ell;
        if (mode == Mode::Frame) {
            result.values = filter_frame(f, ell, mask, a.c).data.values();
        } else {
            Array2D g(f.grid.rows, f.grid.cols);
            for (std::size_t i = 0; i < g.size(); ++i)
                g.values()[i] = -a.c * std::log(f.data.values()[i]);
            Sinogram rows(std::move(g), f.grid.col_axis(), uniform_angles(f.grid.rows));
            result.values = filter_sinogram(rows, ell, mask).data.values();
        }
    } else {
        throw InputError("filter: input must be a FRAME (1D or 2D) or SINOGRAM array");
    }
    result.header.meta["mode"] = to_string(mode);
    result.header.meta["ell"] = format_double(ell);
    result.header.meta["m"] = format_double(a.m);
    result.header.meta["c"] = format_double(a.c);
    result.header.meta["auto"] = a.autosel ? "1" : "0";
    result.header.meta["source"] = a.in;
    write_array(a.out, result.header, result.values);
    if (a.autosel)
        print_scalar(ell);
    return 0;
}

// ---- find-ell -----------------------------------------------------------

struct FindArgs {
    Common common;
    std::string in, mode = "frame", curve, axis = "log";
    double m = 1.0;
    double ell_lo = 0.0, ell_hi = 0.0;
    int grid_points = 48;
    bool newton = false;
};

SpectralEnergy energy_from_file(const ArrayFile& file, Mode mode) {
    const auto& h = file.header;
    if (h.kind == ArrayKind::Sinogram) {
        if (mode != Mode::Slice)
            throw InputError("sinogram input requires --mode slice");
        return SpectralEnergy::of_sinogram(sinogram_from(file));
    }
    if (h.kind == ArrayKind::Frame && h.shape.size() == 1)
        return SpectralEnergy::of_signal(signal_from(file), mode);
    if (h.kind == ArrayKind::Frame && h.shape.size() == 2)
        return SpectralEnergy::of_frame(frame_from(file), mode);
    throw InputError("input must be a FRAME (1D or 2D) or SINOGRAM array");
}

int run_find_ell(const FindArgs& a) {
    const Mode mode = parse_mode(a.mode);
    const ArrayFile file = read_array(a.in);
    const SpectralEnergy e = energy_from_file(file, mode);
    FindEllOptions o = ell_options(a.ell_lo, a.ell_hi, a.grid_points);
    if (a.axis == "linear")
        o.axis = CurvatureAxis::LinearEll;
    else if (a.axis != "log")
        throw InputError("find-ell: --axis must be log or linear");
    if (a.newton)
        o.refinement = Refinement::Newton;
    const CurvatureProfile p = find_ell(e, CutoffMask(a.m, e.delta()), o);
    if (!a.curve.empty()) {
        CurveColumn ell{"ell", {}}, xi{"xi", {}}, kappa{"kappa", {}};
        for (const auto& r : p.records) {
            ell.values.push_back(r.ell);
            xi.values.push_back(r.xi);
            kappa.values.push_back(r.kappa);
        }
        write_curve(a.curve, {ell, xi, kappa});
    }
    print_scalar(p.argmax_ell);
    return 0;
}

// ---- recon / radon / phantom ---------------------------------------------

struct ReconArgs {
    Common common;
    std::string in, out, curve, backend = "direct";
    std::vector<double> ells{0.0};
    std::size_t size = 0;
    double delta = 0.0, m = 0.0;
};

double laplacian_norm(const Slice& s) {
    const Array2D lap = laplacian(s.data, s.grid);
    return std::sqrt(l2_norm_squared(lap.values(), s.grid.cell_area()));
}

std::string indexed_path(const std::string& base, std::size_t k) {
    const auto dot = base.find_last_of('.');
    const auto slash = base.find_last_of('/');
    const std::string suffix = "_" + std::to_string(k);
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
        return base + suffix;
    return base.substr(0, dot) + suffix + base.substr(dot);
}

int run_recon(const ReconArgs& a) {
    const Sinogram g = sinogram_from(read_array(a.in));
    const std::size_t n = a.size ? a.size : g.t_grid.n;
    const double delta = a.delta > 0.0 ? a.delta : g.t_grid.delta;
    const Grid2D grid(n, n, delta);
    Backprojector backend;
    if (a.backend == "direct")
        backend = Backprojector::Direct;
    else if (a.backend == "bst")
        backend = Backprojector::Bst;
    else
        throw InputError("recon: --backend must be direct or bst");
    const CutoffMask mask = a.m > 0.0 ? CutoffMask(a.m, g.t_grid.delta) : CutoffMask::full();
    CurveColumn ell_col{"ell", {}}, sharp_col{"laplacian_norm", {}};
    for (std::size_t k = 0; k < a.ells.size(); ++k) {
        const Slice s = recon_fbp(g, a.ells[k], grid, mask, backend);
        ArrayFile file = to_file(s);
        file.header.meta["ell"] = format_double(a.ells[k]);
        file.header.meta["backend"] = a.backend;
        file.header.meta["source"] = a.in;
        write_array(a.ells.size() == 1 ? a.out : indexed_path(a.out, k), file.header, file.values);
        ell_col.values.push_back(a.ells[k]);
        sharp_col.values.push_back(laplacian_norm(s));
    }
    if (!a.curve.empty())
        write_curve(a.curve, {ell_col, sharp_col});
    return 0;
}

struct RadonArgs {
    Common common;
    std::string in, out;
    std::size_t angles = 180, rays = 0;
};

int run_radon(const RadonArgs& a) {
    const Slice s = slice_from(read_array(a.in));
    const std::size_t rays = a.rays ? a.rays : static_cast<std::size_t>(std::ceil(std::sqrt(2.0) * static_cast<double>(std::max(s.grid.rows, s.grid.cols)))) + 2;
    const double half_diag = 0.5 * std::hypot(static_cast<double>(s.grid.rows), static_cast<double>(s.grid.cols)) * s.grid.delta;
    const Grid1D t_grid(rays, 2.0 * half_diag / static_cast<double>(rays - 2));
    const Sinogram g = radon(s, uniform_angles(a.angles), t_grid);
    ArrayFile file = to_file(g);
    file.header.meta["source"] = a.in;
    write_array(a.out, file.header, file.values);
    return 0;
}

struct PhantomArgs {
    Common common;
    std::string out;
    std::size_t size = 256;
    double delta = 2.0 / 256.0;
    std::vector<std::string> disks;
};

int run_phantom(const PhantomArgs& a) {
    std::vector<Disk> disks;
    for (const auto& spec : a.disks) {
        std::vector<double> v;
        std::stringstream ss(spec);
        std::string tok;
        while (std::getline(ss, tok, ','))
            v.push_back(parse_double(tok));
        if (v.size() != 4)
            throw InputError("phantom: --disk expects x,y,radius,value");
        disks.push_back({v[0], v[1], v[2], v[3]});
    }
    if (disks.empty())
        disks.push_back({0.0, 0.0, 0.6, 1.0});
    const Slice s = disk_phantom_2d(Grid2D(a.size, a.size, a.delta), disks);
    const ArrayFile file = to_file(s);
    write_array(a.out, file.header, file.values);
    return 0;
}

// ---- simulation ------------------------------------------------------------

struct Sim1DArgs {
    Common common;
    std::string out, curve;
    double w = 300.0, n = 1e4, L = 0.0163522409163, noise = 0.0;
    std::size_t samples = 32768;
    double delta = 1.0 / 1024.0;
};

int run_simulate_1d(const Sim1DArgs& a) {
    const Grid1D grid(a.samples, a.delta);
    const RectProfile prof = rect_phantom({a.w, a.n, grid});
    std::vector<double> I = propagate_1d(prof, a.L);
    if (a.noise > 0.0)
        add_noise(I, a.noise, a.common.seed);
    for (double v : I)
        if (!(v > 0.0))
            throw NumericalError("simulate-1d: intensity not positive; L too large for this phantom");
    ArrayFile file = to_file(Signal1D(I, grid));
    file.header.meta["w"] = format_double(a.w);
    file.header.meta["n"] = format_double(a.n);
    file.header.meta["L"] = format_double(a.L);
    file.header.meta["noise"] = format_double(a.noise);
    write_array(a.out, file.header, file.values);
    if (!a.curve.empty())
        write_curve(a.curve, {{"t", coordinates(grid)}, {"p", prof.p}, {"intensity", I}});
    return 0;
}

struct Sim2DArgs {
    Common common;
    std::string out, phase_out;
    std::size_t size = 256;
    double delta = 0.0, L = 0.0163522409163, amplitude = 0.05, edge = 0.05;
    int objects = 5;
};

Array2D random_phase(const Grid2D& grid, int objects, double amplitude, double edge, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> pos(-0.5, 0.5), rad(0.1, 0.35), val(0.5, 1.0);
    const double extent = static_cast<double>(std::min(grid.rows, grid.cols)) * grid.delta;
    std::vector<Disk> disks;
    for (int k = 0; k < objects; ++k)
        disks.push_back({pos(rng) * extent * 0.6, pos(rng) * extent * 0.6, rad(rng) * extent * 0.5,
                         amplitude * val(rng)});
    return soft_disks(grid, disks, edge);
}

int run_simulate_2d(const Sim2DArgs& a) {
    const Grid2D grid(a.size, a.size, a.delta > 0.0 ? a.delta : 4.0 / static_cast<double>(a.size));
    const Array2D p = random_phase(grid, a.objects, a.amplitude, a.edge, a.common.seed);
    const Frame f = propagate_2d(p, grid, a.L);
    ArrayFile file = to_file(f);
    file.header.meta["L"] = format_double(a.L);
    file.header.meta["seed"] = std::to_string(a.common.seed);
    write_array(a.out, file.header, file.values);
    if (!a.phase_out.empty()) {
        ArrayFile pf;
        pf.header = file.header;
        pf.values = p.values();
        write_array(a.phase_out, pf.header, pf.values);
    }
    return 0;
}

struct SeriesArgs {
    Common common;
    std::string out;
    double refr = 1.043e-6, beta = 3.553e-10, lambda = 1.4e-10, d_max = 5e5;
    std::size_t count = 29, size = 0;
};

int run_distance_series(const SeriesArgs& a) {
    DistanceSeries series{spread_distances(a.d_max, a.count), {a.refr, a.beta, a.lambda, 0.0}};
    const auto Ls = series.L_values();
    ArrayFile file;
    file.header.kind = ArrayKind::Series;
    if (a.size == 0) {
        const Grid1D grid = default_line_grid();
        const auto frames = distance_series(rect_phantom({300.0, 1e4, grid}), grid, series);
        file.header.shape = {frames.size(), grid.n};
        file.header.delta = grid.delta;
        for (const auto& f : frames)
            file.values.insert(file.values.end(), f.data.begin(), f.data.end());
    } else {
        const Grid2D grid(a.size, a.size, 4.0 / static_cast<double>(a.size));
        const Array2D p = random_phase(grid, 5, 0.05, 0.05, a.common.seed);
        const auto frames = distance_series(p, grid, series);
        file.header.shape = {frames.size(), a.size, a.size};
        file.header.delta = grid.delta;
        for (const auto& f : frames)
            file.values.insert(file.values.end(), f.data.values().begin(), f.data.values().end());
    }
    file.header.meta["distances"] = join(series.distances);
    file.header.meta["L"] = join(Ls);
    write_array(a.out, file.header, file.values);
    return 0;
}

// ---- checks ------------------------------------------------------------------

struct DeltaArgs {
    Common common;
    std::string in, out;
    double ell = 4e-4, m = 0.0;
};

int run_delta_bound(const DeltaArgs& a) {
    const Frame f = frame_from(read_array(a.in));
    const CutoffMask mask = a.m > 0.0 ? CutoffMask(a.m, f.grid.delta) : CutoffMask::full();
    const DeltaReport r = delta_field(f, a.ell, mask);
    if (!a.out.empty()) {
        ArrayFile file = to_file(f);
        file.values = r.delta.values();
        file.header.meta["ell"] = format_double(a.ell);
        write_array(a.out, file.header, file.values);
    }
    std::cout << format_double(r.max_abs) << ' ' << format_double(r.bound) << '\n';
    if (!r.bound_holds) {
        std::cerr << "delta-bound: max |delta| exceeds the bound\n";
        return 3;
    }
    return 0;
}

struct DispersionArgs {
    Common common;
    std::string curve;
    std::vector<double> sigma_c{5.0, 10.0, 20.0};
    double ell_lo = 1e-6, ell_hi = 1e-1;
    int count = 64;
};

int run_dispersion(const DispersionArgs& a) {
    const auto ells = log_space(a.ell_lo, a.ell_hi, static_cast<std::size_t>(a.count));
    std::vector<CurveColumn> cols{{"ell", ells}};
    for (std::size_t k = 0; k < a.sigma_c.size(); ++k) {
        CurveColumn d{"D_" + std::to_string(k), {}}, kap{"kappa_" + std::to_string(k), {}};
        std::size_t best = 0;
        for (std::size_t i = 0; i < ells.size(); ++i) {
            const XiBundle b = dispersion_bundle(ells[i], a.sigma_c[k]);
            d.values.push_back(b.xi);
            kap.values.push_back(curvature(to_log_axis(b)));
            if (kap.values.back() > kap.values[best])
                best = i;
        }
        std::cerr << "sigma_c = " << format_double(a.sigma_c[k]) << ": curvature peak at ell = "
                  << format_double(ells[best]) << '\n';
        cols.push_back(d);
        cols.push_back(kap);
    }
    if (!a.curve.empty())
        write_curve(a.curve, cols);
    return 0;
}

struct SweepArgs {
    Common common;
    std::string in, mode = "frame", curve;
    double L = 0.0163522409163, m_min = 5e-4, m_max = 5e-2, ell_lo = 1e-6, ell_hi = 1.0;
    int count = 32;
};

int run_m_sweep(const SweepArgs& a) {
    const SpectralEnergy e = energy_from_file(read_array(a.in), parse_mode(a.mode));
    const auto ms = log_space(a.m_min, a.m_max, static_cast<std::size_t>(a.count));
    const MSweepResult r = m_sweep(e, ms, a.L, ell_options(a.ell_lo, a.ell_hi, 48));
    if (!a.curve.empty()) {
        CurveColumn m{"m", {}}, ell{"ell", {}}, mark{"crossing", {}};
        for (const auto& p : r.points) {
            m.values.push_back(p.m);
            ell.values.push_back(p.ell);
            mark.values.push_back(0.0);
        }
        m.values.push_back(*r.m_star);
        ell.values.push_back(r.ell_at_m_star);
        mark.values.push_back(1.0);
        write_curve(a.curve, {m, ell, mark});
    }
    std::cerr << "m* = " << format_double(*r.m_star) << ", ell*(m*) = " << format_double(r.ell_at_m_star)
              << ", relative gap " << format_double(std::abs(r.ell_at_m_star - a.L) / a.L) << ", plateau ["
              << format_double(r.plateau_lo) << ", " << format_double(r.plateau_hi) << ")\n";
    print_scalar(*r.m_star);
    return 0;
}

struct VerifyArgs {
    Common common;
    std::string report;
    std::size_t size = 64;
    double ell = 1e-3;
    int directions = 200;
};

Array2D random_smooth(const Grid2D& grid, std::mt19937_64& rng, double width) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Array2D a(grid.rows, grid.cols);
    for (auto& v : a.values())
        v = normal(rng);
    const double k = 2.0 * M_PI * M_PI * width * width;
    Array2D s = apply_multiplier(a, grid, [k](double q1, double q2) { return std::exp(-k * (q1 * q1 + q2 * q2)); });
    const double norm = std::sqrt(l2_norm_squared(s.values(), grid.cell_area()));
    for (auto& v : s.values())
        v /= norm;
    return s;
}

int run_verify(const VerifyArgs& a) {
    std::mt19937_64 rng(a.common.seed);
    const Grid2D grid(a.size, a.size, 4.0 / static_cast<double>(a.size));
    const Array2D p = random_phase(grid, 5, 0.3, 0.15, a.common.seed);
    const Frame f = propagate_2d(p, grid, a.ell);
    const Array2D p_bar = filter_frame(f, a.ell, CutoffMask::full()).data;
    Array2D g = p;
    for (auto& v : g.values())
        v *= 0.8;

    std::vector<Array2D> dirs;
    for (int k = 0; k < a.directions; ++k)
        dirs.push_back(random_smooth(grid, rng, 0.1));

    const auto e_reports = frechet_check_E(p, g, grid, dirs);
    const auto r_reports = frechet_check_R(p, grid, dirs);
    double worst_e = 0.0, worst_r = 0.0, worst_h = 0.0;
    for (const auto& r : e_reports)
        worst_e = std::max(worst_e, r.rel_error);
    for (const auto& r : r_reports)
        worst_r = std::max(worst_r, r.rel_error);
    for (const auto& h : dirs) {
        const double scale = std::abs(derivative_E(p_bar, g, grid, h)) + a.ell * std::abs(derivative_R(p_bar, grid, h)) + 1e-300;
        worst_h = std::max(worst_h, std::abs(derivative_H(p_bar, f, a.ell, h)) / scale);
    }
    const SecondOrderReport so = second_order_check(p_bar, f, a.ell, dirs);

    std::cerr << "E' worst rel error " << format_double(worst_e) << '\n'
              << "R' worst rel error " << format_double(worst_r) << '\n'
              << "H' worst |H'h| / scale " << format_double(worst_h) << '\n'
              << "min second difference / |v|^2 " << format_double(so.min_normalized) << '\n';
    if (!a.report.empty()) {
        CurveColumn idx{"direction", {}}, ce{"rel_error_E", {}}, cr{"rel_error_R", {}}, cq{"second_difference", {}};
        for (std::size_t k = 0; k < dirs.size(); ++k) {
            idx.values.push_back(static_cast<double>(k));
            ce.values.push_back(e_reports[k].rel_error);
            cr.values.push_back(r_reports[k].rel_error);
            cq.values.push_back(so.quotients[k]);
        }
        write_curve(a.report, {idx, ce, cr, cq});
    }
    const bool ok = worst_e <= 1e-5 && worst_r <= 1e-4 && so.nonnegative;
    if (!ok) {
        std::cerr << "verify: FAILED\n";
        return 3;
    }
    std::cerr << "verify: ok\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Phase retrieval filters, curvature-based parameter selection and regularized FBP"};
    app.require_subcommand(1);

    FilterArgs fa;
    auto* filter = app.add_subcommand("filter", "Retrieve a phase map from a frame or sinogram");
    add_common(filter, fa.common);
    filter->add_option("--in", fa.in, "Input array")->required();
    filter->add_option("--out", fa.out, "Output array")->required();
    filter->add_option("--mode", fa.mode, "frame or slice")->check(CLI::IsMember({"frame", "slice"}));
    filter->add_option("--ell", fa.ell, "Filter parameter (length^2)");
    filter->add_flag("--auto", fa.autosel, "Select ell by maximum curvature");
    filter->add_option("--m", fa.m, "Cutoff multiplier, q_c = m / (2 delta)");
    filter->add_option("--c", fa.c, "Log scale constant");
    filter->add_option("--ell-lo", fa.ell_lo, "Lower end of the ell bracket for --auto");
    filter->add_option("--ell-hi", fa.ell_hi, "Upper end of the ell bracket for --auto");
    filter->add_option("--grid-points", fa.grid_points, "Coarse sweep size for --auto");

    FindArgs fi;
    auto* find = app.add_subcommand("find-ell", "Maximum-curvature selection of ell");
    add_common(find, fi.common);
    find->add_option("--in", fi.in, "Input array")->required();
    find->add_option("--mode", fi.mode, "frame or slice")->check(CLI::IsMember({"frame", "slice"}));
    find->add_option("--m", fi.m, "Cutoff multiplier");
    find->add_option("--curve", fi.curve, "Write the (ell, xi, kappa) profile here");
    find->add_option("--ell-lo", fi.ell_lo, "Bracket lower end");
    find->add_option("--ell-hi", fi.ell_hi, "Bracket upper end");
    find->add_option("--grid-points", fi.grid_points, "Coarse sweep size");
    find->add_option("--axis", fi.axis, "Curvature axis: log or linear");
    find->add_flag("--newton", fi.newton, "Refine with Newton on ln ell instead of golden section");

    ReconArgs ra;
    auto* recon = app.add_subcommand("recon", "Regularized filtered backprojection");
    add_common(recon, ra.common);
    recon->add_option("--in", ra.in, "Input sinogram")->required();
    recon->add_option("--out", ra.out, "Output slice (indexed when several --ell are given)")->required();
    recon->add_option("--ell", ra.ells, "One or more ell values");
    recon->add_option("--size", ra.size, "Output grid size (default: ray count)");
    recon->add_option("--delta", ra.delta, "Output pixel size (default: ray spacing)");
    recon->add_option("--backend", ra.backend, "direct or bst");
    recon->add_option("--m", ra.m, "Cutoff multiplier on the row spectrum (default: none)");
    recon->add_option("--curve", ra.curve, "Write |Lap s_ell| against ell here");

    RadonArgs rd;
    auto* rad = app.add_subcommand("radon", "Parallel-beam projection of a slice");
    add_common(rad, rd.common);
    rad->add_option("--in", rd.in, "Input slice")->required();
    rad->add_option("--out", rd.out, "Output sinogram")->required();
    rad->add_option("--angles", rd.angles, "Number of angles over [0, pi)");
    rad->add_option("--rays", rd.rays, "Number of rays (default covers the diagonal)");

    PhantomArgs pa;
    auto* phantom = app.add_subcommand("phantom", "Piecewise-constant disk slice");
    add_common(phantom, pa.common);
    phantom->add_option("--out", pa.out, "Output slice")->required();
    phantom->add_option("--size", pa.size, "Grid size");
    phantom->add_option("--delta", pa.delta, "Pixel size");
    phantom->add_option("--disk", pa.disks, "x,y,radius,value (repeatable)");

    Sim1DArgs s1;
    auto* sim1 = app.add_subcommand("simulate-1d", "Rect phantom line intensity");
    add_common(sim1, s1.common);
    sim1->add_option("--out", s1.out, "Output 1D frame")->required();
    sim1->add_option("--curve", s1.curve, "Write t, p, intensity columns here");
    sim1->add_option("--w", s1.w, "Amplitude divisor");
    sim1->add_option("--n", s1.n, "Edge smoothing parameter");
    sim1->add_option("--L", s1.L, "Propagation parameter");
    sim1->add_option("--samples", s1.samples, "Number of samples");
    sim1->add_option("--delta", s1.delta, "Sample spacing");
    sim1->add_option("--noise", s1.noise, "Relative multiplicative Gaussian noise");

    Sim2DArgs s2;
    auto* sim2 = app.add_subcommand("simulate-2d", "Random soft-disk phase map propagated to a frame");
    add_common(sim2, s2.common);
    sim2->add_option("--out", s2.out, "Output frame")->required();
    sim2->add_option("--phase-out", s2.phase_out, "Also write the phase map");
    sim2->add_option("--size", s2.size, "Grid size");
    sim2->add_option("--delta", s2.delta, "Pixel size (default: the grid spans [-2, 2])");
    sim2->add_option("--L", s2.L, "Propagation parameter");
    sim2->add_option("--amplitude", s2.amplitude, "Phase amplitude");
    sim2->add_option("--edge", s2.edge, "Disk edge width");
    sim2->add_option("--objects", s2.objects, "Number of disks");

    SeriesArgs sa;
    auto* series = app.add_subcommand("distance-series", "Frames over evenly spread propagation distances");
    add_common(series, sa.common);
    series->add_option("--out", sa.out, "Output SERIES array")->required();
    series->add_option("--refr-delta", sa.refr, "Refractive decrement");
    series->add_option("--beta", sa.beta, "Absorption index");
    series->add_option("--lambda", sa.lambda, "Wavelength");
    series->add_option("--d-max", sa.d_max, "Largest distance");
    series->add_option("--count", sa.count, "Number of distances");
    series->add_option("--size", sa.size, "2D grid size (0: 1D rect phantom line)");

    DeltaArgs da;
    auto* delta = app.add_subcommand("delta-bound", "Frame-vs-slice difference and its bound");
    add_common(delta, da.common);
    delta->add_option("--in", da.in, "Input frame")->required();
    delta->add_option("--out", da.out, "Write the difference field here");
    delta->add_option("--ell", da.ell, "Filter parameter");
    delta->add_option("--m", da.m, "Cutoff multiplier (default: none)");

    DispersionArgs di;
    auto* disp = app.add_subcommand("dispersion", "Dispersion function and its curvature over ell");
    add_common(disp, di.common);
    disp->add_option("--curve", di.curve, "Write ell, D_k, kappa_k columns here");
    disp->add_option("--sigma-c", di.sigma_c, "Cutoff frequencies");
    disp->add_option("--ell-lo", di.ell_lo, "Smallest ell");
    disp->add_option("--ell-hi", di.ell_hi, "Largest ell");
    disp->add_option("--count", di.count, "Number of ell samples");

    SweepArgs sw;
    auto* sweep = app.add_subcommand("m-sweep", "Calibrate the cutoff multiplier against a known L");
    add_common(sweep, sw.common);
    sweep->add_option("--in", sw.in, "Input frame or sinogram")->required();
    sweep->add_option("--mode", sw.mode, "frame or slice")->check(CLI::IsMember({"frame", "slice"}));
    sweep->add_option("--L", sw.L, "Reference L");
    sweep->add_option("--m-min", sw.m_min, "Smallest m");
    sweep->add_option("--m-max", sw.m_max, "Largest m");
    sweep->add_option("--count", sw.count, "Number of m values (log spaced)");
    sweep->add_option("--ell-lo", sw.ell_lo, "Bracket lower end");
    sweep->add_option("--ell-hi", sw.ell_hi, "Bracket upper end");
    sweep->add_option("--curve", sw.curve, "Write m, ell, crossing columns here");

    VerifyArgs va;
    auto* verify = app.add_subcommand("verify", "Frechet-derivative and optimality checks on a random frame");
    add_common(verify, va.common);
    verify->add_option("--size", va.size, "Grid size");
    verify->add_option("--ell", va.ell, "Filter parameter");
    verify->add_option("--directions", va.directions, "Number of random directions");
    verify->add_option("--report", va.report, "Write per-direction errors here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        CLI::App* cmd = app.get_subcommands().front();
        const std::vector<std::pair<CLI::App*, Common*>> commons{
            {filter, &fa.common}, {find, &fi.common},   {recon, &ra.common},  {rad, &rd.common},
            {phantom, &pa.common}, {sim1, &s1.common},  {sim2, &s2.common},   {series, &sa.common},
            {delta, &da.common},  {disp, &di.common},   {sweep, &sw.common},  {verify, &va.common}};
        for (const auto& [c, common] : commons)
            if (c == cmd)
                set_thread_count(common->threads);

        if (cmd == filter)
            return run_filter(fa);
        if (cmd == find)
            return run_find_ell(fi);
        if (cmd == recon)
            return run_recon(ra);
        if (cmd == rad)
            return run_radon(rd);
        if (cmd == phantom)
            return run_phantom(pa);
        if (cmd == sim1)
            return run_simulate_1d(s1);
        if (cmd == sim2)
            return run_simulate_2d(s2);
        if (cmd == series)
            return run_distance_series(sa);
        if (cmd == delta)
            return run_delta_bound(da);
        if (cmd == disp)
            return run_dispersion(di);
        if (cmd == sweep)
            return run_m_sweep(sw);
        if (cmd == verify)
            return run_verify(va);
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 2;
}
