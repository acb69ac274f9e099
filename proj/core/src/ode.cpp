#include "pwaves/ode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pwaves/errors.hpp"

namespace pwaves {

namespace {

constexpr double kTailTol = 1e-18;

// Truncation index: last coefficient whose term at |t| = reach is still visible, plus one.
int truncation(const std::vector<double>& a, const std::vector<double>& l, double reach) {
    const double lg = 1.0 + std::abs(std::log(std::max(reach, 1e-300)));
    double scale = 1.0, p = 1.0;
    std::vector<double> tau(a.size());
    for (std::size_t j = 0; j < a.size(); ++j) {
        const double lj = j < l.size() ? std::abs(l[j]) : 0.0;
        tau[j] = (std::abs(a[j]) + lj * lg) * p;
        scale = std::max(scale, tau[j]);
        p *= reach;
    }
    int last = 0;
    for (std::size_t j = 0; j < tau.size(); ++j)
        if (tau[j] > kTailTol * scale) last = static_cast<int>(j);
    return last + 1;
}

// True once the last `run` terms at |t| = reach are all negligible.
bool settled(const std::vector<double>& a, const std::vector<double>* l, double reach, int run) {
    const int m = static_cast<int>(a.size());
    if (m < run + 4) return false;
    double scale = 1.0;
    double p = 1.0;
    const double lg = 1.0 + std::abs(std::log(std::max(reach, 1e-300)));
    std::vector<double> tau(m);
    for (int j = 0; j < m; ++j) {
        const double lj = (l && j < static_cast<int>(l->size())) ? std::abs((*l)[j]) : 0.0;
        tau[j] = (std::abs(a[j]) + lj * lg) * p;
        scale = std::max(scale, tau[j]);
        p *= reach;
    }
    for (int j = m - run; j < m; ++j)
        if (!(tau[j] <= kTailTol * scale)) return false;
    return true;
}

void check_finite(const std::vector<double>& a, const char* what) {
    for (std::size_t j = 0; j < a.size(); ++j)
        if (!std::isfinite(a[j])) throw SeriesDivergence(std::string(what) + ": coefficient overflow", int(j));
}

}  // namespace

FrobeniusSeries::FrobeniusSeries(Kind kind, double center, double pole, double k, std::vector<double> analytic,
                                 std::vector<double> logc, int order)
    : kind_(kind), x0_(center), s_(pole), k_(k), a_(std::move(analytic)), l_(std::move(logc)), order_(order) {
    a_.resize(static_cast<std::size_t>(order_), 0.0);
    if (!l_.empty()) l_.resize(static_cast<std::size_t>(order_), 0.0);
}

double FrobeniusSeries::radius() const {
    if (kind_ == Kind::patch) return std::min(std::abs(x0_ - s_), std::abs(x0_ + s_));
    return 2.0 * x0_;
}

double FrobeniusSeries::value(double x) const {
    const double t = x - x0_;
    double sa = 0.0;
    for (int j = order_ - 1; j >= 0; --j) sa = sa * t + a_[j];
    if (l_.empty() || t == 0.0) return sa;
    double sl = 0.0;
    for (int j = order_ - 1; j >= 0; --j) sl = sl * t + l_[j];
    return sa + std::log(std::abs(t)) * sl;
}

double FrobeniusSeries::derivative(double x) const {
    const double t = x - x0_;
    double sa = 0.0;
    for (int j = order_ - 1; j >= 1; --j) sa = sa * t + j * a_[j];
    if (l_.empty()) return sa;
    if (t == 0.0) {
        if (l_.size() > 1 && l_[1] != 0.0) return -std::copysign(std::numeric_limits<double>::infinity(), l_[1]);
        return sa;
    }
    double sl = 0.0, sm = 0.0;
    for (int j = order_ - 1; j >= 1; --j) {
        sl = sl * t + j * l_[j];
        sm = sm * t + l_[j];
    }
    return sa + std::log(std::abs(t)) * sl + sm;
}

double FrobeniusSeries::second_derivative(double x) const {
    const double t = x - x0_;
    double sa = 0.0;
    for (int j = order_ - 1; j >= 2; --j) sa = sa * t + double(j) * (j - 1) * a_[j];
    if (l_.empty()) return sa;
    if (t == 0.0) return std::numeric_limits<double>::quiet_NaN();
    double sl = 0.0, sm = 0.0;
    for (int j = order_ - 1; j >= 2; --j) {
        sl = sl * t + double(j) * (j - 1) * l_[j];
        sm = sm * t + (2.0 * j - 1.0) * l_[j];
    }
    // j = 1 term of the (2j-1) l_j t^(j-2) sum
    return sa + std::log(std::abs(t)) * sl + sm + l_[1] / t;
}

double FrobeniusSeries::ode_residual(double x) const {
    const double q = x * x - s_ * s_;
    return q * second_derivative(x) - (2.0 + k_ * k_ * q) * value(x);
}

FrobeniusSeries FrobeniusSeries::combine(double p, const FrobeniusSeries& u, double q, const FrobeniusSeries& v) {
    const int n = std::max(u.order_, v.order_);
    std::vector<double> a(n, 0.0), l;
    for (int j = 0; j < n; ++j) {
        if (j < u.order_) a[j] += p * u.a_[j];
        if (j < v.order_) a[j] += q * v.a_[j];
    }
    if (!u.l_.empty() || !v.l_.empty()) {
        l.assign(n, 0.0);
        for (int j = 0; j < n; ++j) {
            if (!u.l_.empty() && j < u.order_) l[j] += p * u.l_[j];
            if (!v.l_.empty() && j < v.order_) l[j] += q * v.l_[j];
        }
    }
    const Kind kind = l.empty() ? (u.kind_ == Kind::patch ? Kind::patch : Kind::analytic) : Kind::logarithmic;
    return FrobeniusSeries(kind, u.x0_, u.s_, u.k_, std::move(a), std::move(l), n);
}

std::array<double, 2> indicial_roots(double x0, double k) {
    if (!(x0 > 0.0)) throw PreconditionError("indicial_roots: center must be > 0");
    // f'' + P(t)/t f' + Q(t)/t^2 f = 0 with P = 0, Q(t) = -t^2 (2/(t (t + 2 x0)) + k^2)
    // P(0) = 0, Q(0) = lim -t (2/(t + 2 x0) + k^2 t) = 0 for every k
    (void)k;
    const double p0 = 0.0, q0 = 0.0;
    const double b = p0 - 1.0;
    const double disc = std::sqrt(b * b - 4.0 * q0);
    return {(-b - disc) / 2.0, (-b + disc) / 2.0};
}

std::pair<FrobeniusSeries, FrobeniusSeries> frobenius_pair(double x0, double k, double reach, int max_order) {
    if (!(x0 > 0.0)) throw PreconditionError("frobenius_pair: center must be > 0");
    if (!(k >= 0.0)) throw PreconditionError("frobenius_pair: k must be >= 0");
    if (reach <= 0.0) reach = x0;
    max_order = std::clamp(max_order, 8, kMaxSeriesOrder + 1);
    const double k2 = k * k, L = 1.0 / x0;
    const int run = 8;

    // g1 = t + ..., g2 = 1 + 0 t + ... + L g1 log|t|
    std::vector<double> g1{0.0, 1.0}, g2{1.0, 0.0}, lg{0.0, L};
    auto step = [&](int m) {
        // coefficient m+1 from the t^m balance of (2 x0 t + t^2) f'' = (2 + 2 x0 k^2 t + k^2 t^2) f
        const double den = 2.0 * x0 * (m + 1.0) * m;
        const double c = 2.0 - double(m) * (m - 1);
        const double b1 = (c * g1[m] + 2.0 * x0 * k2 * (m >= 1 ? g1[m - 1] : 0.0) +
                           k2 * (m >= 2 ? g1[m - 2] : 0.0)) / den;
        g1.push_back(b1);
        lg.push_back(L * b1);
        const double b2 = (c * g2[m] + 2.0 * x0 * k2 * (m >= 1 ? g2[m - 1] : 0.0) +
                           k2 * (m >= 2 ? g2[m - 2] : 0.0) - 2.0 * x0 * (2.0 * m + 1.0) * lg[m + 1] -
                           (2.0 * m - 1.0) * lg[m]) / den;
        g2.push_back(b2);
    };
    while (static_cast<int>(g1.size()) < max_order &&
           !(settled(g1, nullptr, reach, run) && settled(g2, &lg, reach, run)))
        step(static_cast<int>(g1.size()) - 1);
    check_finite(g1, "frobenius_pair g1");
    check_finite(g2, "frobenius_pair g2");
    if (!(settled(g1, nullptr, reach, run) && settled(g2, &lg, reach, run)) && static_cast<int>(g1.size()) >= max_order)
        throw SeriesDivergence("frobenius_pair: tail not negligible at reach " + std::to_string(reach),
                               static_cast<int>(g1.size()) - 1);

    const int n = std::max(truncation(g1, {}, reach), truncation(g2, lg, reach));
    FrobeniusSeries s1(FrobeniusSeries::Kind::analytic, x0, x0, k, g1, {}, n);
    FrobeniusSeries s2(FrobeniusSeries::Kind::logarithmic, x0, x0, k, g2, lg, n);
    return {s1, s2};
}

FrobeniusSeries taylor_patch(double x1, double s, double k, double f, double df, double reach, int max_order) {
    const double p0 = x1 * x1 - s * s, p1 = 2.0 * x1, k2 = k * k;
    if (std::abs(p0) < 1e-300) throw PreconditionError("taylor_patch: center on a pole");
    if (reach >= std::min(std::abs(x1 - s), std::abs(x1 + s)))
        throw PreconditionError("taylor_patch: reach exceeds the convergence radius");
    max_order = std::clamp(max_order, 8, kMaxSeriesOrder + 1);
    std::vector<double> a{f, df};
    const int run = 8;
    while (static_cast<int>(a.size()) < max_order && !settled(a, nullptr, reach, run)) {
        const int m = static_cast<int>(a.size()) - 2;
        const double am = a[m], am1 = m >= 1 ? a[m - 1] : 0.0, am2 = m >= 2 ? a[m - 2] : 0.0;
        a.push_back(((2.0 + k2 * p0 - double(m) * (m - 1)) * am + k2 * p1 * am1 + k2 * am2 -
                     p1 * (m + 1.0) * m * a[m + 1]) /
                    (p0 * (m + 2.0) * (m + 1.0)));
    }
    check_finite(a, "taylor_patch");
    if (!settled(a, nullptr, reach, run) && static_cast<int>(a.size()) >= max_order)
        throw SeriesDivergence("taylor_patch: tail not negligible", static_cast<int>(a.size()) - 1);
    const int n = truncation(a, {}, reach);
    return FrobeniusSeries(FrobeniusSeries::Kind::patch, x1, s, k, a, {}, n);
}

ModeSolution::ModeSolution(Side side, int n, double epsilon, double s, double k, std::vector<Piece> pieces)
    : side_(side), n_(n), eps_(epsilon), s_(s), k_(k), pieces_(std::move(pieces)) {
    if (side == Side::left && !(s >= 0.5))
        throw PreconditionError("left mode: pole " + std::to_string(s) + " inside (0,1/2)");
    if (side == Side::right && !(s <= 0.5))
        throw PreconditionError("right mode: pole " + std::to_string(s) + " inside (1/2,1)");
    if (pieces_.empty()) throw PreconditionError("ModeSolution: no pieces");
}

const ModeSolution::Piece& ModeSolution::piece(double x) const {
    if (!(x >= lo() - 1e-12 && x <= hi() + 1e-12))
        throw PreconditionError("ModeSolution: x = " + std::to_string(x) + " outside the half-interval");
    for (const auto& p : pieces_)
        if (x <= p.hi) return p;
    return pieces_.back();
}

double ModeSolution::value(double x) const {
    x = std::clamp(x, lo(), hi());
    return piece(x).series.value(x);
}

double ModeSolution::derivative(double x) const {
    x = std::clamp(x, lo(), hi());
    return piece(x).series.derivative(x);
}

double ModeSolution::boundary_value() const { return value(side_ == Side::left ? 0.0 : 1.0); }
double ModeSolution::interface_value() const { return value(0.5); }
double ModeSolution::interface_derivative() const {
    // for the right side the first piece owns x = 1/2; for the left the last one does
    const auto& p = side_ == Side::left ? pieces_.back() : pieces_.front();
    return p.series.derivative(0.5);
}

namespace {

struct Basis {
    double lo, hi;
    FrobeniusSeries u, v;
};

ModeSolution assemble(Side side, int n, double eps, double s, double k, const std::vector<Basis>& bases) {
    auto eval = [&](double x, bool second) {
        for (const auto& b : bases)
            if (x <= b.hi + 1e-15) return second ? b.v.value(x) : b.u.value(x);
        return second ? bases.back().v.value(x) : bases.back().u.value(x);
    };
    const double xe = side == Side::left ? 0.0 : 1.0;
    const double m11 = eval(xe, false), m12 = eval(xe, true);
    const double m21 = eval(0.5, false), m22 = eval(0.5, true);
    const double det = m11 * m22 - m12 * m21;
    const double scale = std::max({std::abs(m11 * m22), std::abs(m12 * m21), 1e-300});
    if (!(std::abs(det) > 1e-13 * scale))
        throw SolverError("solve_mode_ode: singular boundary system (n=" + std::to_string(n) + ")");
    // rows: f(xe) = 0, f(1/2) = 1
    const double c1 = -m12 / det, c2 = m11 / det;
    std::vector<ModeSolution::Piece> pieces;
    for (const auto& b : bases) pieces.push_back({b.lo, b.hi, FrobeniusSeries::combine(c1, b.u, c2, b.v)});
    return ModeSolution(side, n, eps, s, k, std::move(pieces));
}

std::vector<Basis> right_bases(double s, double k) {
    std::vector<Basis> out;
    const double q = (1.0 - s) / (2.0 * s);
    if (s == 0.5 || q <= 0.7) {
        auto [g1, g2] = frobenius_pair(s, k, std::max(1.0 - s, std::abs(0.5 - s)));
        out.push_back({0.5, 1.0, g1, g2});
        return out;
    }
    if (!(s > 1e-6)) throw PreconditionError("right mode: nu_tilde too close to 0");
    const double xa = 2.0 * s;
    auto [g1, g2] = frobenius_pair(s, k, s);
    if (xa > 0.5) out.push_back({0.5, xa, g1, g2});
    double x = xa;
    double u = g1.value(x), du = g1.derivative(x), v = g2.value(x), dv = g2.derivative(x);
    while (x < 1.0) {
        const double step = 0.5 * (x - s);
        const double next = std::min(1.0, x + step);
        FrobeniusSeries pu = taylor_patch(x, s, k, u, du, step);
        FrobeniusSeries pv = taylor_patch(x, s, k, v, dv, step);
        if (next > 0.5) out.push_back({std::max(x, 0.5), next, pu, pv});
        u = pu.value(next);
        du = pu.derivative(next);
        v = pv.value(next);
        dv = pv.derivative(next);
        x = next;
    }
    return out;
}

}  // namespace

ModeSolution solve_mode_ode(Side side, int n, double epsilon, double mu_tilde) {
    if (n < 1) throw PreconditionError("solve_mode_ode: mode must be >= 1");
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw PreconditionError("solve_mode_ode: epsilon must lie in (0,1)");
    if (!(mu_tilde > 0.5)) throw PreconditionError("solve_mode_ode: mu_tilde must exceed 1/2");
    const double k = (1.0 - epsilon) * n;
    if (side == Side::left) {
        auto [g1, g2] = frobenius_pair(mu_tilde, k, mu_tilde);
        return assemble(side, n, epsilon, mu_tilde, k, {{0.0, 0.5, g1, g2}});
    }
    const double nu2 = mu_tilde * mu_tilde - epsilon / (1.0 - epsilon);
    if (!(nu2 > 0.0)) throw PreconditionError("solve_mode_ode: nu_tilde^2 = mu_tilde^2 - eps/(1-eps) <= 0");
    const double nu = std::sqrt(nu2);
    if (!(nu < 0.5)) throw PreconditionError("solve_mode_ode: nu_tilde must be below 1/2");
    return assemble(side, n, epsilon, nu, k, right_bases(nu, k));
}

LimitSolution solve_f0(int n) {
    if (n < 1) throw PreconditionError("solve_f0: mode must be >= 1");
    const double k = n;
    auto [g1, g2] = frobenius_pair(0.5, k, 0.5);
    ModeSolution left = assemble(Side::left, n, 0.0, 0.5, k, {{0.0, 0.5, g1, g2}});
    ModeSolution right = assemble(Side::right, n, 0.0, 0.5, k, {{0.5, 1.0, g1, g2}});
    return {left, right, g1};
}

LimitDistance difference_to_limit(double epsilon, const ModeSolution& f, int grid) {
    const LimitSolution lim = solve_f0(f.mode());
    const ModeSolution& f0 = f.side() == Side::left ? lim.left : lim.right;
    LimitDistance d;
    for (int i = 0; i <= grid; ++i) {
        double x = f.lo() + (f.hi() - f.lo()) * i / grid;
        if (std::abs(x - 0.5) < 1e-6) x = f.side() == Side::left ? 0.5 - 1e-6 : 0.5 + 1e-6;
        d.sup = std::max(d.sup, std::abs(f.value(x) - f0.value(x)));
    }
    d.ratio = d.sup / (epsilon * std::log(1.0 / epsilon));
    return d;
}

}  // namespace pwaves
