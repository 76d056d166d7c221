#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <queue>
#include <type_traits>
#include <stdexcept>
#include <vector>

namespace murmur {

template <class V>
struct QuadResult {
    V value{};
    double error = 0;
};

namespace detail {

// Gauss-Kronrod 7/15 nodes and weights on [-1, 1].
inline constexpr double gk_x[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                                   0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                                   0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                                   0.207784955007898467600689403773245, 0.0};
inline constexpr double gk_wk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                                    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                                    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                                    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double gk_wg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class V, class F>
QuadResult<V> gk15(F& f, double a, double b)
{
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    V fc = f(c);
    V k = fc * gk_wk[7];
    V g = fc * gk_wg[3];
    for (int i = 0; i < 7; ++i) {
        V s = f(c - h * gk_x[i]) + f(c + h * gk_x[i]);
        k += s * gk_wk[i];
        if (i % 2 == 1) g += s * gk_wg[i / 2];
    }
    return {k * h, std::abs((k - g) * h)};
}

}  // namespace detail

// Adaptive Gauss-Kronrod on [a, b], split first at every breakpoint inside
// (a, b). Subintervals are bisected largest-error first until the summed error
// estimate drops below max(abs_tol, rel_tol * |value|) or max_intervals is hit.
template <class F, class V = std::invoke_result_t<F&, double>>
QuadResult<V> integrate(F f, double a, double b, double abs_tol, double rel_tol = 0,
                        std::vector<double> breaks = {}, int max_intervals = 4000)
{
    if (!(a <= b)) throw std::domain_error("integrate: need a <= b");
    struct Piece {
        double a, b;
        QuadResult<V> r;
        bool operator<(const Piece& o) const { return r.error < o.r.error; }
    };
    std::vector<double> pts{a};
    std::sort(breaks.begin(), breaks.end());
    for (double x : breaks)
        if (x > pts.back() && x < b) pts.push_back(x);
    pts.push_back(b);

    std::priority_queue<Piece> q;
    V total{};
    double err = 0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        auto r = detail::gk15<V>(f, pts[i], pts[i + 1]);
        total += r.value;
        err += r.error;
        q.push({pts[i], pts[i + 1], r});
    }
    int n = int(q.size());
    while (err > std::max(abs_tol, rel_tol * std::abs(total)) && n < max_intervals) {
        Piece p = q.top();
        q.pop();
        const double m = 0.5 * (p.a + p.b);
        if (!(m > p.a && m < p.b)) {
            q.push(p);
            break;
        }
        auto l = detail::gk15<V>(f, p.a, m);
        auto r = detail::gk15<V>(f, m, p.b);
        total += l.value + r.value - p.r.value;
        err += l.error + r.error - p.r.error;
        q.push({p.a, m, l});
        q.push({m, p.b, r});
        n += 1;
    }
    // Recompute from the leaves to shed accumulated update roundoff.
    V v{};
    double e = 0;
    while (!q.empty()) {
        v += q.top().r.value;
        e += q.top().r.error;
        q.pop();
    }
    return {v, e};
}

}  // namespace murmur
