#include "hk/exactnum.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace hk {

Rational parse_rational(std::string_view s) {
    std::string str;
    for (char ch : s)
        if (!std::isspace(static_cast<unsigned char>(ch))) str.push_back(ch);
    auto bad = [&]() { return UserError("malformed rational '" + std::string(s) + "'"); };
    if (str.empty()) throw bad();
    auto slash = str.find('/');
    std::string num = str.substr(0, slash);
    std::string den = slash == std::string::npos ? "1" : str.substr(slash + 1);
    auto is_int = [](const std::string& x, bool allow_sign) {
        size_t i = 0;
        if (allow_sign && !x.empty() && (x[0] == '-' || x[0] == '+')) i = 1;
        if (i >= x.size()) return false;
        for (; i < x.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(x[i]))) return false;
        return true;
    };
    if (!is_int(num, true) || !is_int(den, false)) throw bad();
    if (num[0] == '+') num.erase(0, 1);
    Integer n(num), d(den);
    if (d == 0) throw UserError("zero denominator in '" + std::string(s) + "'");
    Rational q(n, d);
    q.canonicalize();
    return q;
}

std::string to_string(const Rational& q) { return q.get_str(); }

Integer floor_z(const Rational& q) {
    Integer r;
    mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return r;
}

Rational floor_q(const Rational& q) { return Rational(floor_z(q)); }

Rational rat(long num, long den) {
    Rational q(num, den);
    q.canonicalize();
    return q;
}

// ---------------------------------------------------------------- Poly

Poly::Poly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

Poly Poly::constant(const Rational& c) { return Poly({c}); }

Poly Poly::monomial(const Rational& c, int deg) {
    std::vector<Rational> v(deg + 1);
    v[deg] = c;
    return Poly(std::move(v));
}

void Poly::trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Rational Poly::coeff(int i) const {
    return (i >= 0 && i < static_cast<int>(c_.size())) ? c_[i] : Rational(0);
}

Rational Poly::operator()(const Rational& x) const {
    Rational acc = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

Poly Poly::derivative() const {
    std::vector<Rational> v;
    for (size_t i = 1; i < c_.size(); ++i) v.push_back(c_[i] * static_cast<long>(i));
    return Poly(std::move(v));
}

Poly Poly::antiderivative() const {
    std::vector<Rational> v(c_.size() + 1);
    for (size_t i = 0; i < c_.size(); ++i) v[i + 1] = c_[i] / static_cast<long>(i + 1);
    return Poly(std::move(v));
}

Poly Poly::compose_affine(const Rational& a, const Rational& b) const {
    Poly lin({b, a}), acc;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * lin + Poly::constant(*it);
    return acc;
}

Poly& Poly::operator+=(const Poly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
    for (size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
    trim();
    return *this;
}

Poly& Poly::operator-=(const Poly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
    for (size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
    trim();
    return *this;
}

Poly& Poly::operator*=(const Rational& s) {
    for (auto& x : c_) x *= s;
    trim();
    return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly();
    std::vector<Rational> v(a.c_.size() + b.c_.size() - 1);
    for (size_t i = 0; i < a.c_.size(); ++i)
        for (size_t j = 0; j < b.c_.size(); ++j) v[i + j] += a.c_[i] * b.c_[j];
    return Poly(std::move(v));
}

std::string Poly::str(const char* var) const {
    if (c_.empty()) return "0";
    std::string out;
    for (size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0) continue;
        std::string term = to_string(c_[i]);
        if (i >= 1) term += std::string("*") + var;
        if (i >= 2) term += "^" + std::to_string(i);
        if (!out.empty()) out += " + ";
        out += term;
    }
    return out;
}

Poly interpolate(const std::vector<Rational>& xs, const std::vector<Rational>& ys) {
    size_t n = xs.size();
    if (n != ys.size() || n == 0) throw InvariantError("interpolate: bad node count");
    std::vector<Rational> dd = ys;
    for (size_t k = 1; k < n; ++k)
        for (size_t i = n - 1; i >= k; --i) {
            Rational den = xs[i] - xs[i - k];
            if (den == 0) throw InvariantError("interpolate: repeated node");
            dd[i] = (dd[i] - dd[i - 1]) / den;
        }
    Poly acc = Poly::constant(dd[n - 1]);
    for (size_t i = n - 1; i-- > 0;) acc = acc * Poly({-xs[i], Rational(1)}) + Poly::constant(dd[i]);
    return acc;
}

// ---------------------------------------------------------------- PiecewisePoly

PiecewisePoly::PiecewisePoly(std::vector<Rational> breakpoints, std::vector<Poly> pieces,
                             Rational left, Rational right)
    : bp_(std::move(breakpoints)),
      pieces_(std::move(pieces)),
      left_(std::move(left)),
      right_(std::move(right)) {
    if (bp_.size() < 2 || pieces_.size() + 1 != bp_.size())
        throw UserError("piecewise polynomial needs k+1 breakpoints for k >= 1 pieces");
    for (size_t i = 1; i < bp_.size(); ++i)
        if (!(bp_[i - 1] < bp_[i])) throw UserError("breakpoints must be strictly increasing");
}

PiecewisePoly PiecewisePoly::from_poly(const Poly& p, const Rational& lo, const Rational& hi) {
    return PiecewisePoly({lo, hi}, {p}, p(lo), p(hi));
}

size_t PiecewisePoly::piece_index(const Rational& x) const {
    auto it = std::upper_bound(bp_.begin(), bp_.end(), x);
    size_t i = static_cast<size_t>(it - bp_.begin());
    if (i == 0) return 0;
    return std::min(i - 1, pieces_.size() - 1);
}

Rational PiecewisePoly::value_left_of(const Rational& x) const {
    if (x <= bp_.front()) return left_;
    if (x > bp_.back()) return right_;
    auto it = std::lower_bound(bp_.begin(), bp_.end(), x);
    size_t i = static_cast<size_t>(it - bp_.begin()) - 1;
    return pieces_[i](x);
}

Rational PiecewisePoly::value_right_of(const Rational& x) const {
    if (x < bp_.front()) return left_;
    if (x >= bp_.back()) return right_;
    return pieces_[piece_index(x)](x);
}

bool PiecewisePoly::is_continuous() const {
    for (const auto& b : bp_)
        if (value_left_of(b) != value_right_of(b)) return false;
    return true;
}

Rational PiecewisePoly::operator()(const Rational& x) const {
    if (x < bp_.front()) return left_;
    if (x > bp_.back()) return right_;
    if (std::binary_search(bp_.begin(), bp_.end(), x)) {
        Rational l = value_left_of(x), r = value_right_of(x);
        if (l != r)
            throw UserError("ambiguous evaluation at breakpoint " + to_string(x) +
                            " of a discontinuous function");
        return l;
    }
    return pieces_[piece_index(x)](x);
}

Rational PiecewisePoly::integral(const Rational& a, const Rational& b) const {
    if (b < a) return -integral(b, a);
    Rational total = 0;
    std::vector<Rational> cuts{a};
    for (const auto& x : bp_)
        if (a < x && x < b) cuts.push_back(x);
    cuts.push_back(b);
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
        const Rational &u = cuts[i], &v = cuts[i + 1];
        if (v <= bp_.front()) {
            total += left_ * (v - u);
        } else if (u >= bp_.back()) {
            total += right_ * (v - u);
        } else {
            Poly F = pieces_[piece_index(u)].antiderivative();
            total += F(v) - F(u);
        }
    }
    return total;
}

Rational PiecewisePoly::derivative_side(const Rational& x, Side side) const {
    if (side == Side::Plus) {
        if (x < bp_.front() || x >= bp_.back()) return 0;
        return pieces_[piece_index(x)].derivative()(x);
    }
    if (x <= bp_.front() || x > bp_.back()) return 0;
    auto it = std::lower_bound(bp_.begin(), bp_.end(), x);
    size_t i = static_cast<size_t>(it - bp_.begin()) - 1;
    return pieces_[i].derivative()(x);
}

PiecewisePoly PiecewisePoly::derivative() const {
    std::vector<Poly> d;
    for (const auto& p : pieces_) d.push_back(p.derivative());
    return PiecewisePoly(bp_, std::move(d), 0, 0);
}

PiecewisePoly PiecewisePoly::refined(const std::vector<Rational>& extra) const {
    std::set<Rational> all(bp_.begin(), bp_.end());
    all.insert(extra.begin(), extra.end());
    std::vector<Rational> nb(all.begin(), all.end());
    std::vector<Poly> np;
    for (size_t i = 0; i + 1 < nb.size(); ++i) {
        const Rational& u = nb[i];
        if (nb[i + 1] <= bp_.front())
            np.push_back(Poly::constant(left_));
        else if (u >= bp_.back())
            np.push_back(Poly::constant(right_));
        else
            np.push_back(pieces_[piece_index(u)]);
    }
    return PiecewisePoly(std::move(nb), std::move(np), left_, right_);
}

PiecewisePoly PiecewisePoly::simplified() const {
    std::vector<Rational> nb{bp_.front()};
    std::vector<Poly> np;
    for (size_t i = 0; i < pieces_.size(); ++i) {
        if (!np.empty() && np.back() == pieces_[i]) {
            nb.back() = bp_[i + 1];
        } else {
            np.push_back(pieces_[i]);
            nb.push_back(bp_[i + 1]);
        }
    }
    return PiecewisePoly(std::move(nb), std::move(np), left_, right_);
}

PiecewisePoly PiecewisePoly::scaled(const Rational& s) const {
    std::vector<Poly> np;
    for (const auto& p : pieces_) np.push_back(p * s);
    return PiecewisePoly(bp_, std::move(np), left_ * s, right_ * s);
}

int PiecewisePoly::max_degree() const {
    int d = -1;
    for (const auto& p : pieces_) d = std::max(d, p.degree());
    return d;
}

PiecewisePoly operator+(const PiecewisePoly& a, const PiecewisePoly& b) {
    PiecewisePoly ra = a.refined(b.bp_), rb = b.refined(a.bp_);
    std::vector<Poly> np;
    for (size_t i = 0; i < ra.pieces_.size(); ++i) np.push_back(ra.pieces_[i] + rb.pieces_[i]);
    return PiecewisePoly(ra.bp_, std::move(np), a.left_ + b.left_, a.right_ + b.right_);
}

bool operator==(const PiecewisePoly& a, const PiecewisePoly& b) {
    if (a.left_ != b.left_ || a.right_ != b.right_) return false;
    PiecewisePoly ra = a.refined(b.bp_), rb = b.refined(a.bp_);
    return ra.pieces_ == rb.pieces_;
}

Rational pp_eval(const PiecewisePoly& f, const Rational& x) { return f(x); }
Rational pp_integral(const PiecewisePoly& f, const Rational& a, const Rational& b) {
    return f.integral(a, b);
}
Rational pp_derivative_side(const PiecewisePoly& f, const Rational& x, Side side) {
    return f.derivative_side(x, side);
}

PiecewisePoly pp_from_evaluator(const std::function<Rational(const Rational&)>& f,
                                std::vector<Rational> cuts, int deg, const Rational& left,
                                const Rational& right) {
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    if (cuts.size() < 2) throw InvariantError("pp_from_evaluator: need an interval");
    deg = std::max(deg, 0);
    std::vector<Poly> pieces;
    const long slots = deg + 3;
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
        const Rational &u = cuts[i], &v = cuts[i + 1];
        std::vector<Rational> xs, ys;
        for (long k = 1; k <= deg + 1; ++k) {
            xs.push_back(u + (v - u) * rat(k, slots));
            ys.push_back(f(xs.back()));
        }
        Poly p = interpolate(xs, ys);
        Rational probe = u + (v - u) * rat(deg + 2, slots);
        if (p(probe) != f(probe))
            throw InvariantError("piece on [" + to_string(u) + ", " + to_string(v) +
                                 "] exceeds the degree bound " + std::to_string(deg));
        pieces.push_back(std::move(p));
    }
    return PiecewisePoly(std::move(cuts), std::move(pieces), left, right).simplified();
}

// ---------------------------------------------------------------- Measure

Measure::Measure(std::vector<Atom> atoms, std::optional<PiecewisePoly> density, SignedEndpoint lo,
                 SignedEndpoint hi)
    : density_(std::move(density)), lo_(std::move(lo)), hi_(std::move(hi)) {
    std::sort(atoms.begin(), atoms.end(),
              [](const Atom& a, const Atom& b) { return a.loc < b.loc; });
    for (auto& a : atoms) {
        if (!atoms_.empty() && atoms_.back().loc == a.loc)
            atoms_.back().mass += a.mass;
        else
            atoms_.push_back(a);
    }
}

bool Measure::includes_atom_at(const Rational& t) const {
    if (lo_.value < t && t < hi_.value) return true;
    if (t == lo_.value) return lo_.sign == EndSign::Minus;
    if (t == hi_.value) return hi_.sign == EndSign::Plus;
    return false;
}

bool Measure::has_density() const {
    if (!density_) return false;
    for (const auto& p : density_->pieces())
        if (!p.is_zero()) return true;
    return false;
}

Measure Measure::without_zero_atoms() const {
    std::vector<Atom> kept;
    for (const auto& a : atoms_)
        if (a.mass != 0) kept.push_back(a);
    std::optional<PiecewisePoly> d;
    if (has_density()) d = density_->simplified();
    return Measure(std::move(kept), std::move(d), lo_, hi_);
}

Rational Measure::support_sup() const {
    Rational best = 0;
    bool any = false;
    for (const auto& a : atoms_)
        if (a.mass != 0 && (!any || a.loc > best)) best = a.loc, any = true;
    if (has_density()) {
        const auto& d = *density_;
        for (size_t i = d.pieces().size(); i-- > 0;)
            if (!d.pieces()[i].is_zero()) {
                if (!any || d.breakpoints()[i + 1] > best) best = d.breakpoints()[i + 1];
                break;
            }
    }
    return best;
}

bool operator==(const Measure& a, const Measure& b) {
    Measure x = a.without_zero_atoms(), y = b.without_zero_atoms();
    if (x.atoms().size() != y.atoms().size()) return false;
    for (size_t i = 0; i < x.atoms().size(); ++i)
        if (x.atoms()[i].loc != y.atoms()[i].loc || x.atoms()[i].mass != y.atoms()[i].mass)
            return false;
    if (x.has_density() != y.has_density()) return false;
    return !x.has_density() || *x.density() == *y.density();
}

Measure neg_dh_measure(const PiecewisePoly& h) {
    std::vector<Atom> atoms;
    for (const auto& b : h.breakpoints())
        atoms.push_back({b, h.derivative_side(b, Side::Minus) - h.derivative_side(b, Side::Plus)});
    std::vector<Poly> dens;
    bool nonzero = false;
    for (const auto& p : h.pieces()) {
        dens.push_back(p.derivative().derivative() * Rational(-1));
        nonzero = nonzero || !dens.back().is_zero();
    }
    std::optional<PiecewisePoly> d;
    if (nonzero) d = PiecewisePoly(h.breakpoints(), std::move(dens), 0, 0);
    return Measure(std::move(atoms), std::move(d), {h.lo(), EndSign::Minus},
                   {h.hi(), EndSign::Plus});
}

Rational measure_pair(const PiecewisePoly& f, const Measure& mu) {
    Rational total = 0;
    for (const auto& a : mu.atoms())
        if (a.mass != 0 && mu.includes_atom_at(a.loc)) total += a.mass * f(a.loc);
    if (mu.has_density()) {
        const PiecewisePoly& rho = *mu.density();
        PiecewisePoly r = rho.refined(f.breakpoints());
        for (size_t i = 0; i < r.pieces().size(); ++i) {
            const Rational &u = r.breakpoints()[i], &v = r.breakpoints()[i + 1];
            if (u < rho.lo() || v > rho.hi() || r.pieces()[i].is_zero()) continue;
            Rational mid = (u + v) / 2;
            Poly fp;
            if (mid < f.lo()) {
                fp = Poly::constant(f.left());
            } else if (mid > f.hi()) {
                fp = Poly::constant(f.right());
            } else {
                const auto& fb = f.breakpoints();
                size_t j = static_cast<size_t>(std::upper_bound(fb.begin(), fb.end(), mid) -
                                               fb.begin()) - 1;
                fp = f.pieces()[j];
            }
            Poly F = (fp * r.pieces()[i]).antiderivative();
            total += F(v) - F(u);
        }
    }
    return total;
}

// ---------------------------------------------------------------- Piecewise2D

Rational Poly2::operator()(const Rational& x, const Rational& t) const {
    Rational acc = 0;
    for (size_t i = c.size(); i-- > 0;) {
        Rational row = 0;
        for (size_t j = c[i].size(); j-- > 0;) row = row * t + c[i][j];
        acc = acc * x + row;
    }
    return acc;
}

int Poly2::total_degree() const {
    int d = -1;
    for (size_t i = 0; i < c.size(); ++i)
        for (size_t j = 0; j < c[i].size(); ++j)
            if (c[i][j] != 0) d = std::max(d, static_cast<int>(i + j));
    return d;
}

bool HalfPlane::contains(const Rational& x, const Rational& t) const {
    return a * x + b * t <= c;
}

bool Region::contains(const Rational& x, const Rational& t) const {
    for (const auto& h : ineqs)
        if (!h.contains(x, t)) return false;
    return true;
}

namespace {

Line normalise_line(int a, int b, const Rational& c) {
    if (a < -1 || a > 1 || b < -1 || b > 1 || (a == 0 && b == 0))
        throw UserError("unsupported boundary slope: only lines of slope 0, +-1 or vertical");
    if (a < 0 || (a == 0 && b < 0)) return {-a, -b, -c};
    return {a, b, c};
}

}  // namespace

Piecewise2D::Piecewise2D(Rational x_lo, Rational x_hi, Rational t_lo, std::optional<Rational> t_hi,
                         std::vector<Region> regions)
    : x_lo_(std::move(x_lo)),
      x_hi_(std::move(x_hi)),
      t_lo_(std::move(t_lo)),
      t_hi_(std::move(t_hi)),
      regions_(std::move(regions)) {
    if (!(x_lo_ < x_hi_)) throw UserError("empty kernel x-domain");
    for (const auto& r : regions_)
        for (const auto& h : r.ineqs) normalise_line(h.a, h.b, h.c);
}

Rational Piecewise2D::operator()(const Rational& x, const Rational& t) const {
    for (const auto& r : regions_)
        if (r.contains(x, t)) return r.poly(x, t);
    throw UserError("point (" + to_string(x) + ", " + to_string(t) + ") lies in no region");
}

Rational Piecewise2D::eval_checked(const Rational& x, const Rational& t) const {
    std::optional<Rational> v;
    for (const auto& r : regions_) {
        if (!r.contains(x, t)) continue;
        Rational w = r.poly(x, t);
        if (v && *v != w)
            throw InvariantError("regions disagree at (" + to_string(x) + ", " + to_string(t) +
                                 ")");
        v = w;
    }
    if (!v) throw UserError("point lies in no region");
    return *v;
}

std::vector<Line> Piecewise2D::lines() const {
    std::vector<Line> out;
    auto add = [&](const Line& l) {
        for (const auto& o : out)
            if (o.a == l.a && o.b == l.b && o.c == l.c) return;
        out.push_back(l);
    };
    for (const auto& r : regions_)
        for (const auto& h : r.ineqs) add(normalise_line(h.a, h.b, h.c));
    add({1, 0, x_lo_});
    add({1, 0, x_hi_});
    add({0, 1, t_lo_});
    if (t_hi_) add({0, 1, *t_hi_});
    return out;
}

int Piecewise2D::degree() const {
    int d = 0;
    for (const auto& r : regions_) d = std::max(d, r.poly.total_degree());
    return d;
}

SliceKernel Piecewise2D::kernel() const {
    Piecewise2D copy = *this;
    return {x_lo_, x_hi_, lines(), degree(),
            [copy](const Rational& x, const Rational& t) { return copy(x, t); }};
}

Piecewise2D Piecewise2D::scaled(const Rational& s) const {
    Piecewise2D out = *this;
    for (auto& r : out.regions_)
        for (auto& row : r.poly.c)
            for (auto& v : row) v *= s;
    return out;
}

// ---------------------------------------------------------------- slice_pair

namespace {

// \int K(x, t) rho(t) dt at fixed x, exactly.
Rational density_pair_at(const SliceKernel& K, const PiecewisePoly& rho, const Rational& x) {
    std::vector<Rational> cuts = rho.breakpoints();
    for (const auto& l : K.lines) {
        if (l.b == 0) continue;
        Rational t = (l.c - l.a * x) / l.b;
        if (rho.lo() < t && t < rho.hi()) cuts.push_back(t);
    }
    PiecewisePoly r = rho.refined(cuts);
    const int dk = K.degree;
    const long slots = dk + 3;
    Rational total = 0;
    for (size_t i = 0; i < r.pieces().size(); ++i) {
        const Poly& rp = r.pieces()[i];
        if (rp.is_zero()) continue;
        const Rational &u = r.breakpoints()[i], &v = r.breakpoints()[i + 1];
        std::vector<Rational> ts, ks;
        for (long k = 1; k <= dk + 1; ++k) {
            ts.push_back(u + (v - u) * rat(k, slots));
            ks.push_back(K.eval(x, ts.back()));
        }
        Poly kp = interpolate(ts, ks);
        Rational probe = u + (v - u) * rat(dk + 2, slots);
        if (kp(probe) != K.eval(x, probe))
            throw InvariantError("kernel is not polynomial of degree " + std::to_string(dk) +
                                 " along t on [" + to_string(u) + ", " + to_string(v) +
                                 "] at x = " + to_string(x));
        Poly F = (kp * rp).antiderivative();
        total += F(v) - F(u);
    }
    return total;
}

}  // namespace

PiecewisePoly slice_pair(const SliceKernel& K, const Measure& mu) {
    std::vector<Rational> taus{0};
    std::vector<Atom> atoms;
    for (const auto& a : mu.atoms())
        if (a.mass != 0 && mu.includes_atom_at(a.loc)) {
            atoms.push_back(a);
            taus.push_back(a.loc);
        }
    const bool dens = mu.has_density();
    if (dens)
        for (const auto& b : mu.density()->breakpoints()) taus.push_back(b);
    for (const auto& l : K.lines)
        if (l.a == 0) taus.push_back(l.c / l.b);

    std::vector<Rational> cand{K.x_lo, K.x_hi};
    for (const auto& l : K.lines) {
        if (l.b == 0) {
            cand.push_back(l.c);
        } else if (l.a != 0) {
            for (const auto& tau : taus) cand.push_back(l.c - l.b * tau);
            for (const auto& m : K.lines)
                if (m.a != 0 && m.b == -l.b) cand.push_back((l.c + m.c) / 2);
        }
    }
    std::vector<Rational> cuts;
    for (const auto& x : cand)
        if (K.x_lo <= x && x <= K.x_hi) cuts.push_back(x);

    auto g = [&](const Rational& x) {
        Rational v = 0;
        for (const auto& a : atoms) v += a.mass * K.eval(x, a.loc);
        if (dens) v += density_pair_at(K, *mu.density(), x);
        return v;
    };
    int deg = K.degree + (dens ? mu.density()->max_degree() + 1 : 0);
    return pp_from_evaluator(g, cuts, deg, g(K.x_lo), g(K.x_hi));
}

PiecewisePoly slice_pair(const Piecewise2D& K, const Measure& mu) {
    return slice_pair(K.kernel(), mu);
}

}  // namespace hk
