#include "chordarc/bmo.hpp"

#include <algorithm>
#include <cmath>

#include "chordarc/quadrature.hpp"

namespace chordarc {

namespace {

constexpr double kEtaMin = -27.631021115928547;  // log(1e-12)
constexpr double kEtaMax = 27.631021115928547;   // log(1e12)
constexpr double kGolden = 0.6180339887498949;

void require_interval(Interval I) {
    if (!(I.b > I.a) || !std::isfinite(I.a) || !std::isfinite(I.b))
        throw PreconditionError("mean oscillation: interval must be bounded with positive length");
}

// integral_0^1 |p + q t| dt
double abs_linear_integral(cplx p, cplx q) {
    if (p.imag() == 0.0 && q.imag() == 0.0) {
        double a = p.real(), b = a + q.real();
        if (a * b >= 0.0) return 0.5 * (std::abs(a) + std::abs(b));
        double t0 = a / (a - b);
        return 0.5 * (std::abs(a) * t0 + std::abs(b) * (1.0 - t0));
    }
    double aq = std::abs(q);
    if (aq == 0.0) return std::abs(p);
    double A = aq * aq;
    double s0 = (p * std::conj(q)).real() / A;
    double tstar = std::clamp(-s0, 0.0, 1.0);
    double dmin = std::abs(p + q * tstar);
    if (dmin > aq) {
        static const quad::Rule gl = quad::gauss_legendre(20);
        double acc = 0.0;
        for (std::size_t k = 0; k < gl.nodes.size(); ++k)
            acc += gl.weights[k] * std::abs(p + q * (0.5 + 0.5 * gl.nodes[k]));
        return 0.5 * acc;
    }
    double cross = (std::conj(q) * p).imag() / A;
    double k = cross * cross;
    double rk = std::abs(cross);
    auto G = [&](double s) {
        double R = std::hypot(s, rk);
        return 0.5 * (s * R + (k > 0.0 ? k * std::asinh(s / rk) : 0.0));
    };
    return aq * (G(1.0 + s0) - G(s0));
}

// Integral of a real function over [l,r] with optional singular endpoints.
// g(x, dl, dr) receives exact distances to l and r.
double integrate_piece(const std::function<double(double, double, double)>& g, double l, double r,
                       bool singular) {
    if (singular) return quad::tanh_sinh(g, l, r, 1e-12);
    return quad::gauss_kronrod([&](double x) { return g(x, x - l, r - x); }, l, r, 1e-11);
}

}  // namespace

// ----------------------------------------------------------- FunctionCombination

FunctionCombination& FunctionCombination::add(const Function& f, cplx c) {
    terms_.push_back({&f, c});
    return *this;
}

cplx FunctionCombination::operator()(double x) const {
    cplx acc = 0.0;
    for (const auto& t : terms_) acc += t.c * evaluate(*t.f, x);
    return acc;
}

bool FunctionCombination::is_real() const {
    for (const auto& t : terms_)
        if (t.c.imag() != 0.0 || !chordarc::is_real(*t.f)) return false;
    return true;
}

std::vector<FunctionCombination::Piece> FunctionCombination::pieces(Interval I) const {
    std::vector<double> pts;
    for (const auto& t : terms_) collect_breaks(*t.f, I.a, I.b, pts);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    pts.insert(pts.begin(), I.a);
    pts.push_back(I.b);

    std::vector<Piece> out;
    out.reserve(pts.size() - 1);
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
        Piece p{pts[k], pts[k + 1], true, 0.0, 0.0, false, false};
        double mid = 0.5 * (p.l + p.r);
        for (const auto& t : terms_) {
            if (auto* s = std::get_if<StepFunction>(t.f)) {
                cplx v = t.c * (*s)(mid);
                p.vl += v;
                p.vr += v;
            } else if (auto* s = std::get_if<SampledFunction>(t.f)) {
                bool in_log_tail = (p.l < s->grid().front() && s->left_tail().kind == Tail::Kind::Log) ||
                                   (p.r > s->grid().back() && s->right_tail().kind == Tail::Kind::Log);
                if (in_log_tail) {
                    p.linear = false;
                } else {
                    p.vl += t.c * (*s)(p.l);
                    p.vr += t.c * (*s)(p.r);
                }
            } else {
                const auto& ls = std::get<LogSumFunction>(*t.f);
                if (!ls.terms().empty()) {
                    p.linear = false;
                    p.sing_l = p.sing_l || ls.is_singular_at(p.l);
                    p.sing_r = p.sing_r || ls.is_singular_at(p.r);
                } else {
                    p.vl += t.c * ls.constant();
                    p.vr += t.c * ls.constant();
                }
            }
        }
        out.push_back(p);
    }
    return out;
}

cplx FunctionCombination::eval_in_piece(const Piece& p, double x, double dl, double dr) const {
    double mid = 0.5 * (p.l + p.r);
    x = std::clamp(x, p.l, p.r);
    cplx acc = 0.0;
    for (const auto& t : terms_) {
        if (auto* s = std::get_if<StepFunction>(t.f))
            acc += t.c * (*s)(mid);
        else if (auto* s = std::get_if<SampledFunction>(t.f))
            acc += t.c * (*s)(x);
        else
            acc += t.c * std::get<LogSumFunction>(*t.f).eval_with_distances(x, p.l, dl, p.r, dr);
    }
    return acc;
}

cplx FunctionCombination::mean(Interval I) const {
    require_interval(I);
    cplx acc = 0.0;
    for (const auto& p : pieces(I)) {
        double len = p.r - p.l;
        if (p.linear) {
            acc += 0.5 * (p.vl + p.vr) * len;
            continue;
        }
        bool sing = p.sing_l || p.sing_r;
        double re = integrate_piece(
            [&](double x, double dl, double dr) { return eval_in_piece(p, x, dl, dr).real(); }, p.l,
            p.r, sing);
        double im = integrate_piece(
            [&](double x, double dl, double dr) { return eval_in_piece(p, x, dl, dr).imag(); }, p.l,
            p.r, sing);
        acc += cplx(re, im);
    }
    return acc / I.length();
}

double FunctionCombination::mean_oscillation(Interval I) const {
    require_interval(I);
    cplx m = mean(I);
    bool real = is_real();
    double acc = 0.0;
    for (const auto& p : pieces(I)) {
        double len = p.r - p.l;
        if (p.linear) {
            acc += abs_linear_integral(p.vl - m, p.vr - m - (p.vl - m)) * len;
            continue;
        }
        auto dev = [&](double x, double dl, double dr) {
            return std::abs(eval_in_piece(p, x, dl, dr) - m);
        };
        if (!real) {
            acc += integrate_piece(dev, p.l, p.r, p.sing_l || p.sing_r);
            continue;
        }
        // Split at sign changes of the real deviation so each part is smooth.
        auto sgn = [&](double x) { return eval_in_piece(p, x, x - p.l, p.r - x).real() - m.real(); };
        std::vector<double> cuts{p.l};
        const int M = 64;
        double prev_x = p.l + len / (2 * M);
        double prev = sgn(prev_x);
        for (int k = 1; k < M; ++k) {
            double x = p.l + len * (k + 0.5) / M;
            double val = sgn(x);
            if ((prev < 0) != (val < 0)) {
                double lo = prev_x, hi = x;
                // bisect to adjacent doubles: a kink left inside a part stalls the quadrature
                for (int it = 0; it < 1100; ++it) {
                    double c = 0.5 * (lo + hi);
                    if (c <= lo || c >= hi) break;
                    if ((sgn(c) < 0) == (prev < 0))
                        lo = c;
                    else
                        hi = c;
                }
                cuts.push_back(0.5 * (lo + hi));
            }
            prev = val;
            prev_x = x;
        }
        cuts.push_back(p.r);
        for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
            double l = cuts[c], r = cuts[c + 1];
            bool sing = (c == 0 && p.sing_l) || (c + 2 == cuts.size() && p.sing_r);
            acc += integrate_piece(
                [&](double x, double da, double db) {
                    double dl = (c == 0) ? da : x - p.l;
                    double dr = (c + 2 == cuts.size()) ? db : p.r - x;
                    return std::abs(eval_in_piece(p, x, dl, dr) - m);
                },
                l, r, sing);
        }
    }
    return acc / I.length();
}

// ------------------------------------------------------------ mean oscillation

double mean_oscillation(const StepFunction& f, Interval I) {
    require_interval(I);
    const auto& bp = f.breakpoints();
    const auto& v = f.values();
    double L = I.length();
    cplx m = f.integral(I.a, I.b) / L;
    double acc = 0.0;
    std::size_t i = f.piece(I.a);
    double x = I.a;
    while (x < I.b) {
        double next = i < bp.size() ? std::min(bp[i], I.b) : I.b;
        acc += std::abs(v[i] - m) * (next - x);
        x = next;
        ++i;
    }
    return acc / L;
}

double mean_oscillation(const Function& f, Interval I) {
    if (auto* s = std::get_if<StepFunction>(&f)) return mean_oscillation(*s, I);
    return FunctionCombination(f).mean_oscillation(I);
}

// ------------------------------------------------------------------ exact mode

namespace {

class ExactSearch {
public:
    explicit ExactSearch(const StepFunction& f) : bp_(f.breakpoints()), v_(f.values()) {
        std::size_t B = bp_.size();
        scale_ = B > 1 ? bp_.back() - bp_.front() : 1.0;
        prefix_.assign(B + 1, 0.0);  // prefix_[k] = sum_{m=1}^{k-1} v_m (bp_m - bp_{m-1})
        for (std::size_t k = 2; k <= B; ++k)
            prefix_[k] = prefix_[k - 1] + v_[k - 1] * (bp_[k - 1] - bp_[k - 2]);
    }

    std::size_t cells() const { return bp_.size() + 1; }
    bool unbounded(std::size_t cell) const { return cell == 0 || cell == bp_.size(); }

    double endpoint(std::size_t cell, double t) const {
        std::size_t B = bp_.size();
        if (cell == 0) return bp_[0] - scale_ * std::exp(kEtaMin + t * (kEtaMax - kEtaMin));
        if (cell == B) return bp_[B - 1] + scale_ * std::exp(kEtaMin + t * (kEtaMax - kEtaMin));
        return bp_[cell - 1] + t * (bp_[cell] - bp_[cell - 1]);
    }

    // Mean oscillation of [a,b] with a in cell i, b in cell j, i < j.
    double mo(std::size_t i, double a, std::size_t j, double b) const {
        double L = b - a;
        double li = bp_[i] - a;
        double lj = b - bp_[j - 1];
        cplx sum = v_[i] * li + v_[j] * lj + (prefix_[j] - prefix_[i + 1]);
        cplx m = sum / L;
        double acc = std::abs(v_[i] - m) * li + std::abs(v_[j] - m) * lj;
        for (std::size_t k = i + 1; k < j; ++k) acc += std::abs(v_[k] - m) * (bp_[k] - bp_[k - 1]);
        return acc / L;
    }

    struct CellResult {
        double value = 0.0;
        double a = 0.0, b = 1.0;
        std::size_t evals = 0;
    };

    // Coarse scan followed by golden-section refinement on [0,1].
    template <class G>
    static std::pair<double, double> maximize(G&& g, bool unbounded, std::size_t& evals) {
        const int K = unbounded ? 49 : 17;
        double best_t = 0.0, best = -1.0;
        std::vector<double> vals(K);
        for (int k = 0; k < K; ++k) {
            double t = static_cast<double>(k) / (K - 1);
            vals[k] = g(t);
            ++evals;
            if (vals[k] > best) {
                best = vals[k];
                best_t = t;
            }
        }
        int kb = static_cast<int>(std::lround(best_t * (K - 1)));
        double lo = static_cast<double>(std::max(kb - 1, 0)) / (K - 1);
        double hi = static_cast<double>(std::min(kb + 1, K - 1)) / (K - 1);
        double x1 = hi - kGolden * (hi - lo), x2 = lo + kGolden * (hi - lo);
        double f1 = g(x1), f2 = g(x2);
        evals += 2;
        while (hi - lo > 1e-11) {
            if (f1 < f2) {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + kGolden * (hi - lo);
                f2 = g(x2);
            } else {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - kGolden * (hi - lo);
                f1 = g(x1);
            }
            ++evals;
            if (f1 > best) { best = f1; best_t = x1; }
            if (f2 > best) { best = f2; best_t = x2; }
        }
        return {best, best_t};
    }

    CellResult search(std::size_t i, std::size_t j) const {
        CellResult res;
        std::size_t evals = 0;
        double best_tb = 0.0;
        auto outer = [&](double ta) {
            double a = endpoint(i, ta);
            auto inner = [&](double tb) { return mo(i, a, j, endpoint(j, tb)); };
            auto [val, tb] = maximize(inner, unbounded(j), evals);
            best_tb = tb;
            return val;
        };
        double ta_best = 0.0;
        double tb_at_best = 0.0;
        auto outer_track = [&](double ta) {
            double val = outer(ta);
            if (val > res.value) {
                res.value = val;
                ta_best = ta;
                tb_at_best = best_tb;
            }
            return val;
        };
        maximize(outer_track, unbounded(i), evals);
        res.a = endpoint(i, ta_best);
        res.b = endpoint(j, tb_at_best);
        res.evals = evals;
        return res;
    }

private:
    const std::vector<double>& bp_;
    const std::vector<cplx>& v_;
    std::vector<cplx> prefix_;
    double scale_ = 1.0;
};

std::vector<std::pair<std::size_t, std::size_t>> cell_pairs(std::size_t cells) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t i = 0; i < cells; ++i)
        for (std::size_t j = i + 1; j < cells; ++j) out.emplace_back(i, j);
    return out;
}

BmoResult reduce_cells(const std::vector<ExactSearch::CellResult>& res) {
    BmoResult out;
    out.mode = BmoMode::Exact;
    out.certified = true;
    for (const auto& r : res) {
        out.evaluations += r.evals;
        if (r.value > out.value) {
            out.value = r.value;
            out.witness = {r.a, r.b};
        }
    }
    return out;
}

}  // namespace

BmoResult bmo_norm_exact_serial(const StepFunction& f) {
    if (f.is_constant()) return {0.0, {0.0, 1.0}, true, BmoMode::Exact, 0};
    ExactSearch s(f);
    auto pairs = cell_pairs(s.cells());
    std::vector<ExactSearch::CellResult> res(pairs.size());
    for (std::size_t k = 0; k < pairs.size(); ++k) res[k] = s.search(pairs[k].first, pairs[k].second);
    return reduce_cells(res);
}

BmoResult bmo_norm_exact(const StepFunction& f) {
    if (f.is_constant()) return {0.0, {0.0, 1.0}, true, BmoMode::Exact, 0};
    ExactSearch s(f);
    auto pairs = cell_pairs(s.cells());
    std::vector<ExactSearch::CellResult> res(pairs.size());
    const long n = static_cast<long>(pairs.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (long k = 0; k < n; ++k) res[k] = s.search(pairs[k].first, pairs[k].second);
    return reduce_cells(res);
}

// ----------------------------------------------------------------- family mode

namespace {
BmoResult reduce_family(const std::vector<double>& vals, const IntervalFamily& family) {
    BmoResult out;
    out.mode = BmoMode::Family;
    out.certified = false;
    out.evaluations = vals.size();
    for (std::size_t k = 0; k < vals.size(); ++k) {
        if (vals[k] > out.value) {
            out.value = vals[k];
            out.witness = family.intervals()[k];
        }
    }
    return out;
}
}  // namespace

BmoResult bmo_norm_family_serial(const FunctionCombination& h, const IntervalFamily& family) {
    const auto& iv = family.intervals();
    std::vector<double> vals(iv.size());
    for (std::size_t k = 0; k < iv.size(); ++k) vals[k] = h.mean_oscillation(iv[k]);
    return reduce_family(vals, family);
}

BmoResult bmo_norm_family(const FunctionCombination& h, const IntervalFamily& family) {
    const auto& iv = family.intervals();
    std::vector<double> vals(iv.size());
    const long n = static_cast<long>(iv.size());
#pragma omp parallel for schedule(dynamic, 16)
    for (long k = 0; k < n; ++k) vals[k] = h.mean_oscillation(iv[k]);
    return reduce_family(vals, family);
}

BmoResult bmo_norm_family(const Function& f, const IntervalFamily& family) {
    if (auto* s = std::get_if<StepFunction>(&f)) {
        const auto& iv = family.intervals();
        std::vector<double> vals(iv.size());
        const long n = static_cast<long>(iv.size());
#pragma omp parallel for schedule(static)
        for (long k = 0; k < n; ++k) vals[k] = mean_oscillation(*s, iv[k]);
        return reduce_family(vals, family);
    }
    return bmo_norm_family(FunctionCombination(f), family);
}

BmoResult bmo_norm(const Function& f, BmoMode mode, const IntervalFamily* family) {
    if (mode == BmoMode::Exact) {
        auto* s = std::get_if<StepFunction>(&f);
        if (!s) throw UnsupportedModeError("exact BMO norm is only available for step functions");
        return bmo_norm_exact(*s);
    }
    if (!family) throw PreconditionError("family mode requires an interval family");
    return bmo_norm_family(f, *family);
}

BmoResult bmo_distance(const Function& f, const Function& g, BmoMode mode,
                       const IntervalFamily* family) {
    auto* sf = std::get_if<StepFunction>(&f);
    auto* sg = std::get_if<StepFunction>(&g);
    if (mode == BmoMode::Exact) {
        if (!sf || !sg) throw UnsupportedModeError("exact BMO distance needs two step functions");
        return bmo_norm_exact(*sf - *sg);
    }
    if (!family) throw PreconditionError("family mode requires an interval family");
    if (sf && sg) return bmo_norm_family(Function(*sf - *sg), *family);
    FunctionCombination h;
    h.add(f, 1.0).add(g, -1.0);
    return bmo_norm_family(h, *family);
}

// ---------------------------------------------------------------------- jn tail

JnTailReport jn_tail(const Function& f, Interval I, const std::vector<double>& lambdas) {
    require_interval(I);
    for (double l : lambdas)
        if (!(l > 0)) throw PreconditionError("jn_tail: lambda values must be positive");
    JnTailReport rep;
    double L = I.length();
    if (auto* s = std::get_if<StepFunction>(&f)) {
        rep.exact = true;
        rep.norm = bmo_norm_exact(*s).value;
        cplx m = s->mean(I.a, I.b);
        const auto& bp = s->breakpoints();
        const auto& v = s->values();
        for (double lam : lambdas) {
            double meas = 0.0;
            std::size_t i = s->piece(I.a);
            double x = I.a;
            while (x < I.b) {
                double next = i < bp.size() ? std::min(bp[i], I.b) : I.b;
                if (std::abs(v[i] - m) >= lam) meas += next - x;
                x = next;
                ++i;
            }
            rep.tail.emplace_back(lam, meas / L);
        }
    } else {
        // Midpoint sub-sampling; reported as approximate.
        FunctionCombination h(f);
        cplx m = h.mean(I);
        const int M = 1 << 14;
        std::vector<double> dev(M);
        for (int k = 0; k < M; ++k) dev[k] = std::abs(h(I.a + L * (k + 0.5) / M) - m);
        IntervalFamily fam = IntervalFamily::dyadic(I.a, I.b, 10);
        rep.norm = bmo_norm_family(h, fam).value;
        for (double lam : lambdas) {
            int cnt = 0;
            for (double d : dev) cnt += d >= lam;
            rep.tail.emplace_back(lam, static_cast<double>(cnt) / M);
        }
    }
    // Least squares of log(fraction) against lambda/||f||.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    if (rep.norm > 0) {
        for (auto [lam, frac] : rep.tail) {
            if (frac <= 0) continue;
            double x = lam / rep.norm, y = std::log(frac);
            sx += x; sy += y; sxx += x * x; sxy += x * y;
            ++n;
        }
    }
    double den = n * sxx - sx * sx;
    if (n >= 2 && den > 0) {
        rep.rate = -(n * sxy - sx * sy) / den;
        rep.rate_valid = true;
    }
    return rep;
}

}  // namespace chordarc
