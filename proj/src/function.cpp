#include "chordarc/function.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace chordarc {

namespace {

void require_increasing(const std::vector<double>& xs, const char* what) {
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!std::isfinite(xs[i])) throw PreconditionError(std::string(what) + ": non-finite entry");
        if (i > 0 && !(xs[i - 1] < xs[i]))
            throw PreconditionError(std::string(what) + ": not strictly increasing");
    }
}

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

double clamp_sign(double c) {
    const double inf = std::numeric_limits<double>::infinity();
    return c > 0 ? -inf : (c < 0 ? inf : 0.0);
}

}  // namespace

// ---------------------------------------------------------------- StepFunction

StepFunction::StepFunction(std::vector<double> breakpoints, std::vector<cplx> values)
    : breakpoints_(std::move(breakpoints)), values_(std::move(values)) {
    if (values_.size() != breakpoints_.size() + 1)
        throw PreconditionError("step function: need len(values) = len(breakpoints) + 1");
    require_increasing(breakpoints_, "step function breakpoints");
    for (const auto& v : values_)
        if (!finite(v)) throw PreconditionError("step function: non-finite value");
    canonicalize();
}

void StepFunction::canonicalize() {
    std::vector<double> bp;
    std::vector<cplx> vals;
    bp.reserve(breakpoints_.size());
    vals.reserve(values_.size());
    vals.push_back(values_[0]);
    for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
        if (values_[i + 1] == vals.back()) continue;
        bp.push_back(breakpoints_[i]);
        vals.push_back(values_[i + 1]);
    }
    breakpoints_ = std::move(bp);
    values_ = std::move(vals);
}

StepFunction StepFunction::indicator(double a, double b, cplx c) {
    if (!(a < b)) throw PreconditionError("indicator: need a < b");
    return StepFunction({a, b}, {0.0, c, 0.0});
}

StepFunction StepFunction::heaviside(double a, cplx c) { return StepFunction({a}, {0.0, c}); }

std::size_t StepFunction::piece(double x) const {
    return static_cast<std::size_t>(std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x) -
                                    breakpoints_.begin());
}

bool StepFunction::is_real() const {
    return std::all_of(values_.begin(), values_.end(), [](cplx v) { return v.imag() == 0.0; });
}

StepFunction StepFunction::real_part() const {
    std::vector<cplx> v;
    for (auto z : values_) v.emplace_back(z.real(), 0.0);
    return StepFunction(breakpoints_, std::move(v));
}

StepFunction StepFunction::imag_part() const {
    std::vector<cplx> v;
    for (auto z : values_) v.emplace_back(z.imag(), 0.0);
    return StepFunction(breakpoints_, std::move(v));
}

cplx StepFunction::integral(double a, double b) const {
    if (a == b) return 0.0;
    if (a > b) return -integral(b, a);
    cplx acc = 0.0;
    std::size_t i = piece(a);
    double x = a;
    while (x < b) {
        double next = i < breakpoints_.size() ? std::min(breakpoints_[i], b) : b;
        acc += values_[i] * (next - x);
        x = next;
        ++i;
    }
    return acc;
}

cplx StepFunction::mean(double a, double b) const {
    if (!(b > a)) throw PreconditionError("mean: degenerate interval");
    return integral(a, b) / (b - a);
}

StepFunction StepFunction::translated(double s) const {
    std::vector<double> bp = breakpoints_;
    for (auto& b : bp) b += s;
    return StepFunction(std::move(bp), values_);
}

StepFunction StepFunction::dilated(double c) const {
    if (!(c > 0)) throw PreconditionError("dilated: need c > 0");
    std::vector<double> bp = breakpoints_;
    for (auto& b : bp) b *= c;
    return StepFunction(std::move(bp), values_);
}

StepFunction StepFunction::canonical_representative() const { return *this + (-mean(0.0, 1.0)); }

StepFunction StepFunction::operator-() const { return cplx(-1.0) * *this; }

StepFunction StepFunction::operator+(cplx c) const {
    std::vector<cplx> v = values_;
    for (auto& z : v) z += c;
    return StepFunction(breakpoints_, std::move(v));
}

StepFunction operator+(const StepFunction& f, const StepFunction& g) {
    std::vector<double> bp;
    bp.reserve(f.breakpoints_.size() + g.breakpoints_.size());
    std::set_union(f.breakpoints_.begin(), f.breakpoints_.end(), g.breakpoints_.begin(),
                   g.breakpoints_.end(), std::back_inserter(bp));
    std::vector<cplx> vals(bp.size() + 1);
    std::size_t i = 0, j = 0;
    vals[0] = f.values_[0] + g.values_[0];
    for (std::size_t k = 0; k < bp.size(); ++k) {
        if (i < f.breakpoints_.size() && f.breakpoints_[i] == bp[k]) ++i;
        if (j < g.breakpoints_.size() && g.breakpoints_[j] == bp[k]) ++j;
        vals[k + 1] = f.values_[i] + g.values_[j];
    }
    return StepFunction(std::move(bp), std::move(vals));
}

StepFunction operator-(const StepFunction& f, const StepFunction& g) { return f + (-g); }

StepFunction operator*(cplx c, const StepFunction& f) {
    std::vector<cplx> v = f.values_;
    for (auto& z : v) z *= c;
    return StepFunction(f.breakpoints_, std::move(v));
}

bool equal_mod_constant(const StepFunction& f, const StepFunction& g, double tol) {
    StepFunction d = f - g;
    const auto& v = d.values();
    for (const auto& z : v)
        if (std::abs(z - v[0]) > tol) return false;
    return true;
}

double sup_deviation_mod_constant(const StepFunction& f, const StepFunction& g) {
    StepFunction d = f - g;
    cplx c = d(0.0);
    double m = 0.0;
    for (const auto& z : d.values()) m = std::max(m, std::abs(z - c));
    return m;
}

// ------------------------------------------------------------- SampledFunction

SampledFunction::SampledFunction(std::vector<double> grid, std::vector<cplx> values, Tail left,
                                 Tail right)
    : grid_(std::move(grid)), values_(std::move(values)), left_(left), right_(right) {
    if (grid_.empty()) throw PreconditionError("sampled function: empty grid");
    if (grid_.size() != values_.size())
        throw PreconditionError("sampled function: grid/value size mismatch");
    require_increasing(grid_, "sampled function grid");
    for (const auto& v : values_)
        if (!finite(v)) throw PreconditionError("sampled function: non-finite value");
    if (left_.kind == Tail::Kind::Log && !(grid_.front() < 0.0))
        throw PreconditionError("sampled function: logarithmic left tail needs grid start < 0");
    if (right_.kind == Tail::Kind::Log && !(grid_.back() > 0.0))
        throw PreconditionError("sampled function: logarithmic right tail needs grid end > 0");
}

SampledFunction SampledFunction::from_callable(std::vector<double> grid,
                                               const std::function<cplx(double)>& f, Tail left,
                                               Tail right) {
    std::vector<cplx> v(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) v[i] = f(grid[i]);
    return SampledFunction(std::move(grid), std::move(v), left, right);
}

cplx SampledFunction::operator()(double x) const {
    if (x <= grid_.front()) {
        if (x == grid_.front() || left_.kind == Tail::Kind::Hold) return values_.front();
        return values_.front() + left_.coef * std::log(x / grid_.front());
    }
    if (x >= grid_.back()) {
        if (x == grid_.back() || right_.kind == Tail::Kind::Hold) return values_.back();
        return values_.back() + right_.coef * std::log(x / grid_.back());
    }
    std::size_t i =
        static_cast<std::size_t>(std::upper_bound(grid_.begin(), grid_.end(), x) - grid_.begin()) - 1;
    double t = (x - grid_[i]) / (grid_[i + 1] - grid_[i]);
    return values_[i] + t * (values_[i + 1] - values_[i]);
}

bool SampledFunction::is_real() const {
    return std::all_of(values_.begin(), values_.end(), [](cplx v) { return v.imag() == 0.0; }) &&
           left_.coef.imag() == 0.0 && right_.coef.imag() == 0.0;
}

SampledFunction SampledFunction::real_part() const {
    std::vector<cplx> v;
    for (auto z : values_) v.emplace_back(z.real(), 0.0);
    Tail l = left_, r = right_;
    l.coef = l.coef.real();
    r.coef = r.coef.real();
    return SampledFunction(grid_, std::move(v), l, r);
}

SampledFunction SampledFunction::imag_part() const {
    std::vector<cplx> v;
    for (auto z : values_) v.emplace_back(z.imag(), 0.0);
    Tail l = left_, r = right_;
    l.coef = l.coef.imag();
    r.coef = r.coef.imag();
    return SampledFunction(grid_, std::move(v), l, r);
}

SampledFunction SampledFunction::scaled(cplx c) const {
    std::vector<cplx> v = values_;
    for (auto& z : v) z *= c;
    Tail l = left_, r = right_;
    l.coef *= c;
    r.coef *= c;
    return SampledFunction(grid_, std::move(v), l, r);
}

SampledFunction SampledFunction::operator+(cplx c) const {
    std::vector<cplx> v = values_;
    for (auto& z : v) z += c;
    return SampledFunction(grid_, std::move(v), left_, right_);
}

// -------------------------------------------------------------- LogSumFunction

LogSumFunction::LogSumFunction(std::vector<LogTerm> terms, cplx constant) : constant_(constant) {
    std::sort(terms.begin(), terms.end(), [](const LogTerm& a, const LogTerm& b) { return a.at < b.at; });
    for (const auto& t : terms) {
        if (!std::isfinite(t.at) || !finite(t.coef))
            throw PreconditionError("log-sum function: non-finite term");
        if (!terms_.empty() && terms_.back().at == t.at)
            terms_.back().coef += t.coef;
        else
            terms_.push_back(t);
    }
    std::erase_if(terms_, [](const LogTerm& t) { return t.coef == cplx(0.0); });
}

bool LogSumFunction::is_singular_at(double x) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), x,
                               [](const LogTerm& t, double v) { return t.at < v; });
    return it != terms_.end() && it->at == x;
}

cplx LogSumFunction::operator()(double x) const {
    cplx acc = constant_;
    for (const auto& t : terms_) {
        if (x == t.at) return {clamp_sign(t.coef.real()), clamp_sign(t.coef.imag())};
        acc += t.coef * std::log(std::abs(x - t.at));
    }
    return acc;
}

cplx LogSumFunction::eval_with_distances(double x, double a_end, double da, double b_end,
                                         double db) const {
    cplx acc = constant_;
    for (const auto& t : terms_) {
        double dist = t.at == a_end ? da : (t.at == b_end ? db : std::abs(x - t.at));
        acc += t.coef * std::log(dist);
    }
    return acc;
}

cplx LogSumFunction::total_coef() const {
    cplx c = 0.0;
    for (const auto& t : terms_) c += t.coef;
    return c;
}

bool LogSumFunction::is_real() const {
    return constant_.imag() == 0.0 &&
           std::all_of(terms_.begin(), terms_.end(), [](const LogTerm& t) { return t.coef.imag() == 0.0; });
}

SampledFunction LogSumFunction::sampled_on(std::vector<double> grid) const {
    std::vector<cplx> v(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (is_singular_at(grid[i])) throw PreconditionError("log-sum sampling hits a singular point");
        v[i] = (*this)(grid[i]);
    }
    cplx c = total_coef();
    Tail left = grid.front() < 0 && c != cplx(0.0) ? Tail::log(c) : Tail::hold();
    Tail right = grid.back() > 0 && c != cplx(0.0) ? Tail::log(c) : Tail::hold();
    return SampledFunction(std::move(grid), std::move(v), left, right);
}

// -------------------------------------------------------------------- Function

cplx evaluate(const Function& f, double x) {
    return std::visit([x](const auto& g) { return cplx(g(x)); }, f);
}

bool is_real(const Function& f) {
    return std::visit([](const auto& g) { return g.is_real(); }, f);
}

const char* kind_name(const Function& f) {
    switch (f.index()) {
        case 0: return "step";
        case 1: return "sampled";
        default: return "logsum";
    }
}

Function real_part(const Function& f) {
    if (auto* s = std::get_if<StepFunction>(&f)) return s->real_part();
    if (auto* s = std::get_if<SampledFunction>(&f)) return s->real_part();
    const auto& l = std::get<LogSumFunction>(f);
    std::vector<LogTerm> t;
    for (auto term : l.terms()) t.push_back({term.at, term.coef.real()});
    return LogSumFunction(std::move(t), l.constant().real());
}

Function imag_part(const Function& f) {
    if (auto* s = std::get_if<StepFunction>(&f)) return s->imag_part();
    if (auto* s = std::get_if<SampledFunction>(&f)) return s->imag_part();
    const auto& l = std::get<LogSumFunction>(f);
    std::vector<LogTerm> t;
    for (auto term : l.terms()) t.push_back({term.at, term.coef.imag()});
    return LogSumFunction(std::move(t), l.constant().imag());
}

Function scale(const Function& f, cplx c) {
    if (auto* s = std::get_if<StepFunction>(&f)) return c * *s;
    if (auto* s = std::get_if<SampledFunction>(&f)) return s->scaled(c);
    const auto& l = std::get<LogSumFunction>(f);
    std::vector<LogTerm> t;
    for (auto term : l.terms()) t.push_back({term.at, term.coef * c});
    return LogSumFunction(std::move(t), l.constant() * c);
}

void collect_breaks(const Function& f, double a, double b, std::vector<double>& out) {
    auto add_range = [&](const std::vector<double>& xs) {
        auto lo = std::upper_bound(xs.begin(), xs.end(), a);
        auto hi = std::lower_bound(xs.begin(), xs.end(), b);
        if (lo < hi) out.insert(out.end(), lo, hi);
    };
    if (auto* s = std::get_if<StepFunction>(&f)) {
        add_range(s->breakpoints());
    } else if (auto* s = std::get_if<SampledFunction>(&f)) {
        add_range(s->grid());
    } else {
        for (const auto& t : std::get<LogSumFunction>(f).terms())
            if (t.at > a && t.at < b) out.push_back(t.at);
    }
}

}  // namespace chordarc
