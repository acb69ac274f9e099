#include "pwaves/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "pwaves/errors.hpp"

namespace pwaves {

QuadResult integrate(const RealFn& f, double a, double b, const QuadOptions& opt, const char* what) {
    QuadResult r;
    if (a == b) return r;
    using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
    struct Seg {
        double lo, hi, val, err, l1;
        bool operator<(const Seg& o) const { return err < o.err; }
    };
    // one 15/31 rule on [lo,hi]; the segment is mapped to [-1,1] here so the error estimate
    // is scaled consistently (Boost 1.74 leaves it unscaled on the non-recursive path)
    auto rule = [&](double lo, double hi) {
        Seg s{lo, hi, 0.0, 0.0, 0.0};
        const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
        auto g = [&](double t) { return f(mid + half * t); };
        s.val = half * GK::integrate(g, -1.0, 1.0, 0, 0.0, &s.err, &s.l1);
        s.err *= half;
        s.l1 *= half;
        return s;
    };
    // globally adaptive: always bisect the segment with the largest error estimate
    std::priority_queue<Seg> heap;
    heap.push(rule(a, b));
    double val = heap.top().val, err = heap.top().err, l1 = heap.top().l1;
    const std::size_t max_segments = std::size_t(1) << std::min(opt.max_depth, 16u);
    while (err > opt.tol * l1 && heap.size() < max_segments) {
        Seg s = heap.top();
        const double mid = 0.5 * (s.lo + s.hi);
        if (!(mid > s.lo && mid < s.hi)) break;
        heap.pop();
        Seg left = rule(s.lo, mid), right = rule(mid, s.hi);
        val += left.val + right.val - s.val;
        err += left.err + right.err - s.err;
        l1 += left.l1 + right.l1 - s.l1;
        heap.push(left);
        heap.push(right);
    }
    // re-sum to shed the drift of the running totals
    r.value = r.error = r.l1 = 0.0;
    while (!heap.empty()) {
        r.value += heap.top().val;
        r.error += heap.top().err;
        r.l1 += heap.top().l1;
        heap.pop();
    }
    const double allowed = 10.0 * opt.tol * std::max(r.l1, 1e-300) + 1e-300;
    if (!std::isfinite(r.value) || r.error > allowed) throw QuadratureError(what, r.error, allowed);
    return r;
}

QuadResult integrate_split(const RealFn& f, double a, double b, std::span<const double> breaks,
                           const QuadOptions& opt, const char* what) {
    std::vector<double> pts{a};
    for (double c : breaks)
        if (c > a && c < b) pts.push_back(c);
    pts.push_back(b);
    std::sort(pts.begin() + 1, pts.end() - 1);
    QuadResult total;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        if (pts[i + 1] - pts[i] <= 0.0) continue;
        QuadResult r = integrate(f, pts[i], pts[i + 1], opt, what);
        total.value += r.value;
        total.error += r.error;
        total.l1 += r.l1;
    }
    return total;
}

QuadResult integrate_endpoint(const RealFn& f, double a, double b, double tol, const char* what) {
    QuadResult r;
    if (a == b) return r;
    thread_local boost::math::quadrature::tanh_sinh<double> ts(18);
    std::size_t levels = 0;
    r.value = ts.integrate(f, a, b, tol, &r.error, &r.l1, &levels);
    const double allowed = 100.0 * tol * std::max(r.l1, 1e-300) + 1e-300;
    if (!std::isfinite(r.value) || r.error > allowed) throw QuadratureError(what, r.error, allowed);
    return r;
}

namespace {

template <int N>
GaussRule make_rule() {
    using G = boost::math::quadrature::gauss<double, N>;
    const auto& x = G::abscissa();
    const auto& w = G::weights();
    GaussRule r;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] == 0.0) {
            r.nodes.push_back(0.0);
            r.weights.push_back(w[i]);
            continue;
        }
        r.nodes.push_back(-x[i]);
        r.weights.push_back(w[i]);
        r.nodes.push_back(x[i]);
        r.weights.push_back(w[i]);
    }
    std::vector<std::size_t> idx(r.nodes.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](auto p, auto q) { return r.nodes[p] < r.nodes[q]; });
    GaussRule s;
    for (auto i : idx) {
        s.nodes.push_back(r.nodes[i]);
        s.weights.push_back(r.weights[i]);
    }
    return s;
}

}  // namespace

const GaussRule& gauss_legendre(int order) {
    static const GaussRule r4 = make_rule<4>();
    static const GaussRule r8 = make_rule<8>();
    static const GaussRule r10 = make_rule<10>();
    static const GaussRule r16 = make_rule<16>();
    static const GaussRule r20 = make_rule<20>();
    switch (order) {
        case 4: return r4;
        case 8: return r8;
        case 10: return r10;
        case 16: return r16;
        case 20: return r20;
        default: throw PreconditionError("gauss_legendre: unsupported order " + std::to_string(order));
    }
}

}  // namespace pwaves
