// murmur: command-line front end for the murmuration library.
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <type_traits>
#include <vector>

#include <CLI11.hpp>

#include "murmur/murmur.hpp"

namespace fs = std::filesystem;
using namespace murmur;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string num(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

// Opens PATH for writing, or stdout when PATH is empty or "-".
class Output {
public:
    explicit Output(const std::string& path)
    {
        if (!path.empty() && path != "-") {
            file_.open(path);
            if (!file_) throw std::runtime_error("cannot write " + path);
        }
    }
    std::ostream& os() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

fs::path cache_dir()
{
    if (const char* d = std::getenv("MURMUR_CACHE_DIR"); d && *d) return d;
    if (const char* h = std::getenv("HOME"); h && *h) return fs::path(h) / ".cache" / "murmur";
    return fs::path(".murmur-cache");
}

std::string default_cache_path() { return (cache_dir() / "hurwitz.bin").string(); }

CachedHurwitz open_hurwitz(const std::string& path)
{
    if (!path.empty() && fs::exists(path)) return CachedHurwitz(load_table(path));
    return CachedHurwitz();
}

std::vector<double> parse_grid(const std::string& spec)
{
    std::vector<double> parts;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ':')) {
        try {
            parts.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw UsageError("bad --y-grid component: " + item);
        }
    }
    if (parts.size() != 3 || !(parts[2] > 0) || parts[1] < parts[0] || parts[0] < 0)
        throw UsageError("--y-grid wants start:stop:step with 0 <= start <= stop, step > 0");
    const u64 n = u64(std::llround((parts[1] - parts[0]) / parts[2])) + 1;
    std::vector<double> ys;
    for (u64 i = 0; i < n; ++i) ys.push_back(parts[0] + double(i) * parts[2]);
    return ys;
}

template <class T>
std::vector<T> parse_list(const std::string& s)
{
    std::vector<T> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        try {
            if constexpr (std::is_same_v<T, double>)
                out.push_back(std::stod(item));
            else
                out.push_back(T(std::stoull(item)));
        } catch (const std::exception&) {
            throw UsageError("bad list entry: " + item);
        }
    }
    return out;
}

void write_svg(const std::string& path, const std::vector<double>& xs, const std::vector<double>& ys,
               const std::string& title)
{
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write " + path);
    const double W = 800, H = 400, pad = 40;
    double x0 = xs.front(), x1 = xs.back();
    double y0 = *std::min_element(ys.begin(), ys.end()), y1 = *std::max_element(ys.begin(), ys.end());
    if (x1 == x0) x1 = x0 + 1;
    if (y1 == y0) y1 = y0 + 1;
    auto px = [&](double x) { return pad + (x - x0) / (x1 - x0) * (W - 2 * pad); };
    auto py = [&](double y) { return H - pad - (y - y0) / (y1 - y0) * (H - 2 * pad); };
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 "
       << W << ' ' << H << "\">\n";
    os << "<title>" << title << "</title>\n";
    if (y0 < 0 && y1 > 0)
        os << "<line x1=\"" << pad << "\" y1=\"" << num(py(0)) << "\" x2=\"" << W - pad << "\" y2=\""
           << num(py(0)) << "\" stroke=\"gray\"/>\n";
    os << "<polyline fill=\"none\" stroke=\"black\" points=\"";
    for (std::size_t i = 0; i < xs.size(); ++i) os << (i ? " " : "") << num(px(xs[i])) << ',' << num(py(ys[i]));
    os << "\"/>\n</svg>\n";
}

void trace_csv(std::ostream& os, const TraceReport& r)
{
    os << "N_low,N_high,P,k,numerator,denominator,average,predicted,residual,predicted_window,residual_window\n";
    os << r.N_low << ',' << r.N_high << ',' << r.P << ',' << r.k << ',' << num(r.numerator) << ','
       << num(r.denominator) << ',' << num(r.average) << ',' << num(r.predicted) << ',' << num(r.residual) << ','
       << num(r.predicted_window) << ',' << num(r.residual_window) << '\n';
}

int verify_multfns(std::ostream& os)
{
    os << "check,cases,mismatches\n";
    u64 total_bad = 0;
    auto row = [&](const char* name, u64 cases, u64 bad) {
        os << name << ',' << cases << ',' << bad << '\n';
        total_bad += bad;
    };
    {
        u64 cases = 0, bad = 0;
        for (u64 P : {5, 7, 11, 101})
            for (u64 r = 1; r <= 12; ++r)
                for (u64 m = 1; m <= 500; ++m) {
                    if (int v = v2(m); v == 1 || v == 2) continue;
                    if (std::gcd(m, P) != 1) continue;
                    ++cases;
                    if (theta(r, m, P) != theta_bruteforce(r, m, P)) ++bad;
                }
        row("theta", cases, bad);
    }
    {
        const u64 P = 401;
        u64 cases = 0, bad = 0;
        for (u64 d = 1; d <= 40; ++d) {
            std::vector<u64> gs;
            for (u64 g = 1; g <= 10000; ++g) {
                if (int v = v2(g); v == 1 || v == 2) continue;
                u64 x = g;
                for (auto [p, e] : trial_factor(d))
                    while (x % p == 0) x /= p;
                if (x == 1) gs.push_back(g);
            }
            for (u64 r = 1; r <= 2 * d; ++r) {
                if (!remainder_set(r, d, P).admissible) continue;
                for (u64 g : gs) {
                    ++cases;
                    if (phi_circ(r, d, g, P) != phi_circ_bruteforce(r, d, g, P)) ++bad;
                }
            }
        }
        row("phi_circ", cases, bad);
    }
    {
        u64 cases = 0, bad = 0;
        for (u64 P : {7, 11, 13, 101})
            for (u64 r = 1; r <= 24; ++r)
                for (u64 d = 1; d * d <= 4 * P && d <= 24; ++d) {
                    ++cases;
                    if (remainder_set(r, d, P).residues != remainder_set_bruteforce(r, d, P).residues) ++bad;
                }
        row("remainder_set", cases, bad);
    }
    {
        u64 cases = 0, bad = 0;
        for (u64 r = 1; r <= 10000; ++r) {
            double s = 0;
            for (u64 d = 1; d * d <= r; ++d) {
                if (r % d) continue;
                s += Q_value(d);
                if (d * d != r) s += Q_value(r / d);
            }
            ++cases;
            if (std::abs(s - nu(r)) > 1e-12 * nu(r)) ++bad;
        }
        row("nu_divisor_sum", cases, bad);
    }
    return total_bad == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Murmuration densities, trace-formula averages and sign-change certificates"};
    app.fallthrough();
    app.require_subcommand(1);
    unsigned threads = default_threads();
    app.add_option("--threads", threads, "Worker threads (output does not depend on this)")->check(CLI::PositiveNumber);

    std::string out;

    // sieve-classnumbers
    auto* sieve = app.add_subcommand("sieve-classnumbers", "Tabulate H_1(-d) for d in [dmin, dmax] into the cache");
    u64 dmin = 1, dmax = 0;
    std::string cache = default_cache_path();
    sieve->add_option("--dmin", dmin)->check(CLI::PositiveNumber);
    sieve->add_option("--dmax", dmax)->required();
    sieve->add_option("--hurwitz-cache", cache, "Cache file (default $MURMUR_CACHE_DIR/hurwitz.bin)");
    sieve->add_option("--csv", out, "Also write d,H1 as CSV");

    // trace-average / dyadic-average
    u64 X = 0, Y = 0, P = 0;
    int k = 2;
    double c = 2;
    u64 pmax = default_pmax;
    auto* tavg = app.add_subcommand("trace-average",
                                    "Average of the trace over square-free N in [X, X+Y]. CSV columns: N_low, N_high, "
                                    "P, k, numerator, denominator, average, predicted, residual, predicted_window, "
                                    "residual_window");
    tavg->add_option("--X", X)->required();
    tavg->add_option("--Y", Y)->required();
    tavg->add_option("--P", P)->required();
    tavg->add_option("--k", k);
    tavg->add_option("--hurwitz-cache", cache);
    tavg->add_option("--pmax", pmax, "Euler-product cutoff for the predicted density");
    tavg->add_option("--out", out);
    auto* davg = app.add_subcommand("dyadic-average", "Average over square-free N in [X, cX]; same CSV columns");
    davg->add_option("--X", X)->required();
    davg->add_option("--c", c)->required();
    davg->add_option("--P", P)->required();
    davg->add_option("--k", k);
    davg->add_option("--hurwitz-cache", cache);
    davg->add_option("--pmax", pmax);
    davg->add_option("--out", out);

    // density
    std::string grid, form = "chebyshev", svg;
    auto* dens = app.add_subcommand("density", "M_k on a y-grid. CSV columns: y, value, tail_bound");
    dens->add_option("--k", k);
    dens->add_option("--y-grid", grid, "start:stop:step")->required();
    dens->add_option("--form", form)->check(CLI::IsMember({"chebyshev", "bessel", "asymptotic"}));
    dens->add_option("--pmax", pmax);
    dens->add_option("--svg", svg, "Also write a polyline plot");
    dens->add_option("--out", out);

    // signcheck
    std::string offsets = "0,0.5,0.162", dlist, signs;
    u64 S = 1000000;
    bool peak = false;
    auto* sc = app.add_subcommand("signcheck",
                                  "Certified sign checks of M_D over one period. Report CSV columns: offset, sign, "
                                  "worst_margin, worst_k, failures, pass");
    sc->add_option("--offsets", offsets);
    sc->add_option("--signs", signs, "Claimed sign per offset (default -1,-1,1 for the default offsets)");
    sc->add_option("--D", dlist, "Comma-separated truncation set");
    sc->add_option("--S", S)->check(CLI::PositiveNumber);
    sc->add_option("--report", out);
    sc->add_flag("--second-peak", peak, "Also run the d <= 5000 probe on [15014.5, 15015]");

    // verify-constants
    u64 nth = 0;
    auto* vc = app.add_subcommand("verify-constants",
                                  "Euler-product constants with tails and identity residuals. CSV columns: name, "
                                  "value, pmax, tail_bound");
    vc->add_option("--pmax", pmax);
    vc->add_option("--nth-prime", nth, "Also evaluate prod(1 + Q(p) sqrt p) over the first n primes");
    vc->add_option("--out", out);

    auto* vm = app.add_subcommand("verify-multfns", "Closed forms against brute force. CSV: check, cases, mismatches");
    vm->add_option("--out", out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*sieve) {
            if (dmax < dmin) throw UsageError("--dmax must be >= --dmin");
            auto t = hurwitz_sieve(dmin, dmax, threads);
            fs::path p(cache);
            if (p.has_parent_path()) fs::create_directories(p.parent_path());
            save_table(t, cache);
            if (!out.empty()) {
                Output o(out);
                o.os() << "d,H1\n";
                for (u64 d = dmin; d <= dmax; ++d) o.os() << d << ',' << t.at(d) << '\n';
            }
            std::cerr << "wrote " << cache << " [" << dmin << ", " << dmax << "]\n";
            return 0;
        }
        if (*tavg || *davg) {
            auto H = open_hurwitz(cache);
            auto rep = *tavg ? interval_average(X, Y, P, k, H, threads, pmax)
                             : dyadic_average(X, c, P, k, H, threads, pmax);
            Output o(out);
            trace_csv(o.os(), rep);
            return 0;
        }
        if (*dens) {
            DensityConfig cfg;
            cfg.k = k;
            cfg.pmax = pmax;
            cfg.validate();
            auto ys = parse_grid(grid);
            std::vector<double> vals;
            Output o(out);
            o.os() << "y,value,tail_bound\n";
            for (double y : ys) {
                DensityValue v;
                if (y > 0) {
                    if (form == "chebyshev")
                        v = {murmuration_density(cfg, y), 0, 0};
                    else if (form == "bessel")
                        v = murmuration_density_bessel(cfg, y);
                    else
                        v = asymptotic_density(cfg, y);
                }
                vals.push_back(v.value);
                o.os() << num(y) << ',' << num(v.value) << ',' << num(v.tail_bound) << '\n';
            }
            if (!svg.empty()) write_svg(svg, ys, vals, "M_" + std::to_string(k) + " (" + form + ")");
            return 0;
        }
        if (*sc) {
            SignCheckConfig cfg;
            cfg.S = S;
            cfg.threads = threads;
            cfg.offsets = parse_list<double>(offsets);
            if (!dlist.empty()) cfg.D = parse_list<u64>(dlist);
            if (!signs.empty()) {
                cfg.expected_signs.clear();
                for (double s : parse_list<double>(signs)) cfg.expected_signs.push_back(s < 0 ? -1 : 1);
            } else if (offsets != "0,0.5,0.162") {
                cfg.expected_signs.clear();
            }
            try {
                cfg.validate();
            } catch (const std::domain_error& e) {
                throw UsageError(e.what());
            }
            auto cert = grid_verify(cfg);
            Output o(out);
            o.os() << "offset,sign,worst_margin,worst_k,failures,pass\n";
            for (const auto& v : cert.offsets)
                o.os() << num(v.offset) << ',' << v.sign << ',' << num(v.worst_margin) << ',' << v.worst_k << ','
                       << v.failures << ',' << (v.pass ? 1 : 0) << '\n';
            std::cerr << "period " << cert.period << ", grid " << cert.grid_size << ", budget "
                      << num(cert.error_budget) << " from sum bound " << num(cert.full_sum_upper) << '\n';
            bool ok = cert.pass();
            if (peak) {
                auto sp = second_peak_probe(15014.5, 15015, 5000, 4000, 0, threads);
                std::cerr << "second peak: max " << num(sp.max_value) << " at " << num(sp.argmax) << ", error bound "
                          << num(sp.error_bound) << (sp.certified_negative ? ", negative" : ", not certified")
                          << '\n';
            }
            return ok ? 0 : 1;
        }
        if (*vc) {
            Output o(out);
            auto& os = o.os();
            os << "name,value,pmax,tail_bound\n";
            using K = ConstantKind;
            const std::vector<K> kinds{K::alpha, K::beta, K::gamma, K::A, K::B, K::dimC, K::Delta};
            auto vals = euler_constants(kinds, pmax);
            for (std::size_t i = 0; i < kinds.size(); ++i)
                os << name(kinds[i]) << ',' << num(vals[i].value) << ',' << pmax << ',' << num(vals[i].tail_bound)
                   << '\n';
            auto sq = sqrtQ_product(pmax);
            os << "sqrtQ_product," << num(sq.value) << ',' << pmax << ',' << num(sq.tail_bound) << '\n';
            if (nth) {
                auto sn = sqrtQ_product_first_primes(nth);
                os << "sqrtQ_product_first_" << nth << "_primes," << num(sn.value) << ',' << sn.pmax << ','
                   << num(sn.tail_bound) << '\n';
            }
            const double alpha = vals[0].value, beta = vals[1].value, gamma = vals[2].value;
            const double A = vals[3].value, B = vals[4].value, dimC = vals[5].value;
            auto qs = q_partial_sums(1000000);
            os << "residual_sumQ_minus_beta_over_alpha," << num(qs.sum_Q - beta / alpha) << ",1000000,\n";
            os << "residual_alpha_over_gamma_sumQd_minus_inv_pi,"
               << num(alpha / gamma * qs.sum_Q_over_d - 1 / std::numbers::pi) << ",1000000,\n";
            os << "residual_beta_minus_12A_over_pi_dimC," << num(beta - 12 * A / (std::numbers::pi * dimC)) << ','
               << pmax << ",\n";
            os << "residual_alpha_minus_12B_over_pi_dimC," << num(alpha - 12 * B / (std::numbers::pi * dimC)) << ','
               << pmax << ",\n";
            os << "residual_gamma_minus_12_over_dimC," << num(gamma - 12 / dimC) << ',' << pmax << ",\n";
            return 0;
        }
        if (*vm) {
            Output o(out);
            return verify_multfns(o.os());
        }
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
