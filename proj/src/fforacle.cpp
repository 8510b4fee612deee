#include "hk/fforacle.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <mutex>
#include <unordered_map>

#include "json.hpp"

namespace hk {

// ---------------------------------------------------------------- MPoly

MPoly MPoly::variable(int n_vars, int i) {
    MPoly m;
    m.n_vars = n_vars;
    std::vector<int> e(n_vars, 0);
    e[i] = 1;
    m.terms[e] = 1;
    return m;
}

MPoly MPoly::constant(int n_vars, const Integer& c) {
    MPoly m;
    m.n_vars = n_vars;
    if (c != 0) m.terms[std::vector<int>(n_vars, 0)] = c;
    return m;
}

MPoly MPoly::widened(int n) const { return shifted(0, n); }

MPoly MPoly::shifted(int offset, int n) const {
    if (offset + n_vars > n) throw UserError("polynomial does not fit in the requested variables");
    MPoly m;
    m.n_vars = n;
    for (const auto& [e, c] : terms) {
        std::vector<int> f(n, 0);
        std::copy(e.begin(), e.end(), f.begin() + offset);
        m.terms[f] = c;
    }
    return m;
}

bool MPoly::has_constant_term() const {
    auto it = terms.find(std::vector<int>(n_vars, 0));
    return it != terms.end() && it->second != 0;
}

std::string MPoly::str() const {
    if (terms.empty()) return "0";
    std::string out;
    for (auto it = terms.rbegin(); it != terms.rend(); ++it) {
        const auto& [e, c] = *it;
        Integer a = abs(c);
        out += out.empty() ? (c < 0 ? "-" : "") : (c < 0 ? " - " : " + ");
        bool mono = std::any_of(e.begin(), e.end(), [](int k) { return k > 0; });
        if (a != 1 || !mono) out += a.get_str() + (mono ? "*" : "");
        bool first = true;
        for (int i = 0; i < static_cast<int>(e.size()); ++i) {
            if (e[i] == 0) continue;
            if (!first) out += "*";
            first = false;
            out += "x" + std::to_string(i);
            if (e[i] > 1) out += "^" + std::to_string(e[i]);
        }
    }
    return out;
}

MPoly operator+(const MPoly& a, const MPoly& b) {
    int n = std::max(a.n_vars, b.n_vars);
    MPoly r = a.widened(n);
    for (const auto& [e, c] : b.widened(n).terms) {
        Integer& s = r.terms[e];
        s += c;
        if (s == 0) r.terms.erase(e);
    }
    return r;
}

MPoly operator*(const MPoly& a, const MPoly& b) {
    int n = std::max(a.n_vars, b.n_vars);
    MPoly x = a.widened(n), y = b.widened(n), r;
    r.n_vars = n;
    for (const auto& [e1, c1] : x.terms)
        for (const auto& [e2, c2] : y.terms) {
            std::vector<int> e(n);
            for (int i = 0; i < n; ++i) e[i] = e1[i] + e2[i];
            r.terms[e] += c1 * c2;
        }
    for (auto it = r.terms.begin(); it != r.terms.end();)
        it = it->second == 0 ? r.terms.erase(it) : std::next(it);
    return r;
}

MPoly MPoly::pow(unsigned k) const {
    MPoly r = constant(n_vars, 1), b = *this;
    for (; k; k >>= 1) {
        if (k & 1) r = r * b;
        if (k > 1) b = b * b;
    }
    return r;
}

namespace {

class PolyParser {
public:
    explicit PolyParser(std::string_view s) {
        for (char c : s)
            if (!std::isspace(static_cast<unsigned char>(c))) s_ += c;
    }

    MPoly run() {
        if (s_.empty()) throw UserError("empty polynomial");
        MPoly p = sum();
        if (pos_ != s_.size()) fail("unexpected character");
        return p;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw UserError("cannot parse polynomial '" + s_ + "' at position " +
                        std::to_string(pos_) + ": " + what);
    }
    bool peek(char c) const { return pos_ < s_.size() && s_[pos_] == c; }
    bool digit() const {
        return pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]));
    }
    Integer number() {
        std::size_t b = pos_;
        while (digit()) ++pos_;
        if (b == pos_) fail("expected a number");
        return Integer(s_.substr(b, pos_ - b));
    }

    MPoly sum() {
        MPoly acc = MPoly::constant(0, 0);
        bool first = true;
        while (true) {
            bool neg = false;
            if (peek('+') || peek('-')) {
                neg = peek('-');
                ++pos_;
            } else if (!first) {
                break;
            }
            MPoly t = term();
            if (neg) t = t * MPoly::constant(0, -1);
            acc = acc + t;
            first = false;
            if (pos_ >= s_.size() || peek(')')) break;
        }
        return acc;
    }

    MPoly term() {
        MPoly acc = MPoly::constant(0, 1);
        bool any = false;
        while (pos_ < s_.size()) {
            if (peek('*')) {
                if (!any) fail("dangling '*'");
                ++pos_;
            } else if (peek('+') || peek('-') || peek(')')) {
                break;
            }
            acc = acc * factor();
            any = true;
        }
        if (!any) fail("expected a term");
        return acc;
    }

    MPoly factor() {
        MPoly base;
        if (digit()) {
            base = MPoly::constant(0, number());
        } else if (peek('(')) {
            ++pos_;
            base = sum();
            if (!peek(')')) fail("missing ')'");
            ++pos_;
        } else {
            if (pos_ >= s_.size()) fail("expected a factor");
            char c = s_[pos_++];
            int idx;
            if (c == 'x' && digit()) {
                idx = static_cast<int>(number().get_si());
            } else if (c == 'x' || c == 'y' || c == 'z' || c == 'w') {
                idx = c == 'x' ? 0 : c == 'y' ? 1 : c == 'z' ? 2 : 3;
            } else {
                --pos_;
                fail("unknown symbol");
            }
            if (idx > 63) fail("too many variables");
            base = MPoly::variable(idx + 1, idx);
        }
        if (peek('^')) {
            ++pos_;
            Integer k = number();
            if (k > 4096) fail("exponent too large");
            base = base.pow(static_cast<unsigned>(k.get_ui()));
        }
        return base;
    }

    std::string s_;
    std::size_t pos_ = 0;
};

}  // namespace

MPoly parse_mpoly(std::string_view s) { return PolyParser(s).run(); }

// ---------------------------------------------------------------- quotients

StaircaseQuotient::StaircaseQuotient(unsigned p_, std::vector<int> b) : p(p_), bounds(std::move(b)) {
    for (int a : bounds)
        if (a < 1) throw UserError("staircase bounds must be positive");
    if (p == 1) throw UserError("characteristic must be 0 or a prime");
    for (unsigned d = 2; d * d <= p; ++d)
        if (p % d == 0) throw UserError("characteristic " + std::to_string(p) + " is not prime");
}

long StaircaseQuotient::dimension() const {
    long d = 1;
    for (int a : bounds) d *= a;
    return d;
}

namespace {

struct Layout {
    std::vector<int> bounds;
    std::vector<long> stride;
    long dim = 1;

    explicit Layout(const std::vector<int>& b) : bounds(b), stride(b.size()) {
        for (int i = static_cast<int>(b.size()) - 1; i >= 0; --i) {
            stride[i] = dim;
            dim *= b[i];
        }
    }
    void decode(long idx, std::vector<int>& e) const {
        e.resize(bounds.size());
        for (std::size_t i = 0; i < bounds.size(); ++i) {
            e[i] = static_cast<int>(idx / stride[i]);
            idx %= stride[i];
        }
    }
    bool fits(const std::vector<int>& e) const {
        for (std::size_t i = 0; i < bounds.size(); ++i)
            if (e[i] >= bounds[i]) return false;
        return true;
    }
    long encode(const std::vector<int>& e) const {
        long idx = 0;
        for (std::size_t i = 0; i < bounds.size(); ++i) idx += e[i] * stride[i];
        return idx;
    }
};

std::uint64_t mod_pow(std::uint64_t b, std::uint64_t k, std::uint64_t p) {
    std::uint64_t r = 1 % p;
    b %= p;
    for (; k; k >>= 1) {
        if (k & 1) r = r * b % p;
        b = b * b % p;
    }
    return r;
}

std::uint64_t reduce(const Integer& c, unsigned p) {
    Integer m = c % p;
    if (m < 0) m += p;
    return m.get_ui();
}

long rank_mod(std::vector<std::vector<std::uint64_t>>& m, unsigned p) {
    if (m.empty()) return 0;
    std::size_t rows = m.size(), cols = m[0].size();
    long rank = 0;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t piv = r;
        while (piv < rows && m[piv][c] == 0) ++piv;
        if (piv == rows) continue;
        std::swap(m[piv], m[r]);
        std::uint64_t inv = mod_pow(m[r][c], p - 2, p);
        for (std::size_t k = c; k < cols; ++k) m[r][k] = m[r][k] * inv % p;
        for (std::size_t i = r + 1; i < rows; ++i) {
            std::uint64_t f = m[i][c];
            if (f == 0) continue;
            std::uint64_t nf = p - f;
            for (std::size_t k = c; k < cols; ++k)
                if (m[r][k]) m[i][k] = (m[i][k] + nf * m[r][k]) % p;
        }
        ++r;
        ++rank;
    }
    return rank;
}

long rank_bareiss(std::vector<std::vector<Integer>>& m) {
    if (m.empty()) return 0;
    std::size_t rows = m.size(), cols = m[0].size();
    Integer prev = 1;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t piv = r;
        while (piv < rows && m[piv][c] == 0) ++piv;
        if (piv == rows) continue;
        std::swap(m[piv], m[r]);
        for (std::size_t i = r + 1; i < rows; ++i) {
            for (std::size_t k = c + 1; k < cols; ++k) {
                m[i][k] = m[r][c] * m[i][k] - m[i][c] * m[r][k];
                mpz_divexact(m[i][k].get_mpz_t(), m[i][k].get_mpz_t(), prev.get_mpz_t());
            }
            m[i][c] = 0;
        }
        prev = m[r][c];
        ++r;
    }
    return static_cast<long>(r);
}

// Integer weight vectors w with w.m constant on the support of f; the
// multiplication matrix is block diagonal for the induced grading.
std::vector<std::vector<long>> grading(const MPoly& f) {
    int n = f.n_vars;
    std::vector<std::vector<Rational>> rows;
    const std::vector<int>* first = nullptr;
    for (const auto& [e, c] : f.terms) {
        if (!first) {
            first = &e;
            continue;
        }
        std::vector<Rational> row(n);
        for (int i = 0; i < n; ++i) row[i] = e[i] - (*first)[i];
        rows.push_back(row);
    }
    std::vector<int> pivcol;
    std::size_t r = 0;
    for (int c = 0; c < n && r < rows.size(); ++c) {
        std::size_t piv = r;
        while (piv < rows.size() && rows[piv][c] == 0) ++piv;
        if (piv == rows.size()) continue;
        std::swap(rows[piv], rows[r]);
        Rational inv = 1 / rows[r][c];
        for (auto& v : rows[r]) v *= inv;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i == r || rows[i][c] == 0) continue;
            Rational f2 = rows[i][c];
            for (int k = 0; k < n; ++k) rows[i][k] -= f2 * rows[r][k];
        }
        pivcol.push_back(c);
        ++r;
    }
    std::vector<std::vector<long>> basis;
    for (int fc = 0; fc < n; ++fc) {
        if (std::find(pivcol.begin(), pivcol.end(), fc) != pivcol.end()) continue;
        std::vector<Rational> w(n, 0);
        w[fc] = 1;
        for (std::size_t i = 0; i < pivcol.size(); ++i) w[pivcol[i]] = -rows[i][fc];
        Integer den = 1;
        for (auto& v : w) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), v.get_den_mpz_t());
        std::vector<long> wi(n);
        for (int i = 0; i < n; ++i) wi[i] = Rational(w[i] * den).get_num().get_si();
        basis.push_back(wi);
    }
    return basis;
}

struct Term {
    long idx;
    std::vector<int> e;
    Integer c;
};

class Engine {
public:
    Engine(const StaircaseQuotient& q, const MPoly& f) : q_(q), lay_(q.bounds) {
        if (static_cast<int>(q.bounds.size()) < f.n_vars)
            throw UserError("polynomial uses more variables than the quotient has");
        f_ = f.widened(static_cast<int>(q.bounds.size()));
        if (f_.has_constant_term()) throw UserError("f is a unit: nonzero constant term");
        if (q.p > (1u << 31)) throw UserError("characteristic too large");
        w_ = grading(f_);
        for (const auto& [e, c] : f_.terms) {
            Integer cc = q.p ? Integer(reduce(c, q.p)) : c;
            if (cc != 0) fterms_.push_back({0, e, cc});
        }
        g_.assign(lay_.dim, 0);
        g_[0] = 1;
        group_rows();
    }

    void advance() {
        std::vector<Integer> next(lay_.dim, 0);
        std::vector<int> e, t(lay_.bounds.size());
        for (long i = 0; i < lay_.dim; ++i) {
            if (g_[i] == 0) continue;
            lay_.decode(i, e);
            for (const auto& ft : fterms_) {
                bool ok = true;
                for (std::size_t k = 0; k < e.size() && ok; ++k) {
                    t[k] = e[k] + ft.e[k];
                    ok = t[k] < lay_.bounds[k];
                }
                if (!ok) continue;
                Integer& s = next[lay_.encode(t)];
                s += g_[i] * ft.c;
                if (q_.p) s %= q_.p;
            }
        }
        g_.swap(next);
        ++power_;
    }

    long power() const { return power_; }
    bool g_zero() const {
        return std::all_of(g_.begin(), g_.end(), [](const Integer& c) { return c == 0; });
    }

    long rank() const {
        std::vector<Term> gt;
        for (long i = 0; i < lay_.dim; ++i) {
            if (g_[i] == 0) continue;
            Term t{i, {}, g_[i]};
            lay_.decode(i, t.e);
            gt.push_back(std::move(t));
        }
        if (gt.empty()) return 0;
        long total = 0;
        std::vector<int> e;
        for (const auto& rows : groups_) {
            std::unordered_map<long, std::size_t> col;
            std::vector<std::vector<std::pair<std::size_t, const Integer*>>> sparse(rows.size());
            for (std::size_t r = 0; r < rows.size(); ++r) {
                lay_.decode(rows[r], e);
                for (const auto& t : gt) {
                    bool ok = true;
                    for (std::size_t k = 0; k < e.size() && ok; ++k)
                        ok = e[k] + t.e[k] < lay_.bounds[k];
                    if (!ok) continue;
                    auto [it, fresh] = col.emplace(rows[r] + t.idx, col.size());
                    sparse[r].push_back({it->second, &t.c});
                }
            }
            if (col.empty()) continue;
            if (q_.p) {
                std::vector<std::vector<std::uint64_t>> m(rows.size(),
                                                          std::vector<std::uint64_t>(col.size(), 0));
                for (std::size_t r = 0; r < rows.size(); ++r)
                    for (auto [c, v] : sparse[r]) m[r][c] = reduce(*v, q_.p);
                total += rank_mod(m, q_.p);
            } else {
                std::vector<std::vector<Integer>> m(rows.size(), std::vector<Integer>(col.size(), 0));
                for (std::size_t r = 0; r < rows.size(); ++r)
                    for (auto [c, v] : sparse[r]) m[r][c] = *v;
                total += rank_bareiss(m);
            }
        }
        return total;
    }

    long length() const { return lay_.dim - rank(); }
    long dim() const { return lay_.dim; }

private:
    void group_rows() {
        std::map<std::vector<long>, std::vector<long>> by_key;
        std::vector<int> e;
        for (long i = 0; i < lay_.dim; ++i) {
            lay_.decode(i, e);
            std::vector<long> key(w_.size(), 0);
            for (std::size_t k = 0; k < w_.size(); ++k)
                for (std::size_t j = 0; j < e.size(); ++j) key[k] += w_[k][j] * e[j];
            by_key[key].push_back(i);
        }
        for (auto& [k, v] : by_key) groups_.push_back(std::move(v));
    }

    StaircaseQuotient q_;
    Layout lay_;
    std::vector<std::vector<long>> w_;
    MPoly f_;
    std::vector<Term> fterms_;
    std::vector<Integer> g_;
    long power_ = 0;
    std::vector<std::vector<long>> groups_;
};

}  // namespace

long quotient_length(const StaircaseQuotient& q, const MPoly& f, long r) {
    if (r < 0) throw UserError("power must be nonnegative");
    if (f.has_constant_term()) throw UserError("f is a unit: nonzero constant term");
    if (r == 0) return 0;
    Engine eng(q, f);
    while (eng.power() < r) {
        eng.advance();
        if (eng.g_zero()) return eng.dim();
    }
    return eng.length();
}

JordanProfile jordan_profile(const StaircaseQuotient& q, const MPoly& f) {
    Engine eng(q, f);
    JordanProfile jp;
    jp.l.push_back(0);
    const long cap = eng.dim() + 1;
    while (true) {
        eng.advance();
        if (eng.g_zero()) {
            jp.l.push_back(eng.dim());
            break;
        }
        jp.l.push_back(eng.length());
        if (eng.power() > cap) throw InvariantError("multiplication by f is not nilpotent");
    }
    jp.nilpotency = static_cast<long>(jp.l.size()) - 1;
    auto l = [&](long i) { return i < static_cast<long>(jp.l.size()) ? jp.l[i] : eng.dim(); };
    for (long i = 1; i <= jp.nilpotency; ++i) {
        long e = 2 * l(i) - l(i + 1) - l(i - 1);
        if (e < 0) throw InvariantError("negative Jordan multiplicity");
        if (e) jp.e[i] = e;
    }
    return jp;
}

Rational h_e_point(unsigned p, int e, const MPoly& f, const Rational& t) {
    if (p < 2) throw UserError("h_e_point needs a prime characteristic");
    if (e < 0) throw UserError("exponent e must be nonnegative");
    Integer q = 1;
    for (int i = 0; i < e; ++i) q *= p;
    Rational tq = t * q;
    if (tq.get_den() != 1)
        throw UserError("t*q is not an integer for t = " + to_string(t) + ", q = " + q.get_str() +
                        "; raise e");
    if (tq <= 0) return 0;
    if (q > 1 << 20) throw UserError("q too large");
    int n = f.n_vars;
    StaircaseQuotient sq(p, std::vector<int>(n, static_cast<int>(q.get_si())));
    long len = quotient_length(sq, f, tq.get_num().get_si());
    Integer qn = 1;
    for (int i = 0; i < n; ++i) qn *= q;
    return Rational(len) / Rational(qn);
}

Rational f_threshold_at_q(const StaircaseQuotient& q, const MPoly& f, long qpow) {
    if (qpow < 1) throw UserError("q must be positive");
    Engine eng(q, f);
    while (eng.power() <= eng.dim() + 1) {
        eng.advance();
        if (eng.g_zero()) return Rational(eng.power()) / qpow;
    }
    throw InvariantError("f is not nilpotent on the quotient");
}

namespace {

std::mutex memo_mu;
std::map<std::pair<unsigned, std::vector<long>>, long> d_memo;
std::map<std::pair<unsigned, std::vector<long>>, HanData> han_memo;

}  // namespace

long d_integer(unsigned ch, const std::vector<long>& t, long r) {
    if (r <= 0) return 0;
    long prod = 1, excess = 1;
    for (long a : t) {
        if (a <= 0) return 0;
        prod *= a;
        excess += a - 1;
    }
    if (r >= excess) return prod;
    std::vector<long> key = t;
    key.push_back(r);
    {
        std::lock_guard<std::mutex> lk(memo_mu);
        auto it = d_memo.find({ch, key});
        if (it != d_memo.end()) return it->second;
    }
    std::vector<int> b(t.begin(), t.end());
    int s = static_cast<int>(t.size());
    MPoly f = MPoly::constant(s, 0);
    for (int i = 0; i < s; ++i) f = f + MPoly::variable(s, i);
    long v = quotient_length(StaircaseQuotient(ch, b), f, r);
    std::lock_guard<std::mutex> lk(memo_mu);
    d_memo.emplace(std::make_pair(ch, key), v);
    return v;
}

Rational HanData::phi_at(const std::vector<Rational>& r) const {
    Rational s = 0;
    for (std::size_t mask = 0; mask < phi.size(); ++mask) {
        if (phi[mask] == 0) continue;
        Rational m = phi[mask];
        for (std::size_t i = 0; i < r.size(); ++i)
            if (mask >> i & 1) m *= r[i];
        s += m;
    }
    return s;
}

HanData han_data(unsigned ch, const std::vector<long>& t) {
    if (t.size() < 2 || t.size() > 8) throw UserError("han_data needs 2 to 8 coordinates");
    for (long a : t)
        if (a < 0) throw UserError("han_data needs a nonnegative integer vector");
    {
        std::lock_guard<std::mutex> lk(memo_mu);
        auto it = han_memo.find({ch, t});
        if (it != han_memo.end()) return it->second;
    }
    const std::size_t n = t.size(), full = (std::size_t{1} << n) - 1;
    std::vector<Integer> val(full + 1);
    for (std::size_t mask = 0; mask <= full; ++mask) {
        std::vector<long> pt(t);
        for (std::size_t i = 0; i < n; ++i) pt[i] += mask >> i & 1;
        long r = pt.back();
        pt.pop_back();
        val[mask] = d_integer(ch, pt, r);
    }
    std::vector<Integer> c = val;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t mask = 0; mask <= full; ++mask)
            if (mask >> i & 1) c[mask] -= c[mask ^ (std::size_t{1} << i)];
    HanData h;
    long sum = 0;
    for (long a : t) sum += a;
    h.odd = sum % 2 != 0;
    Integer top = c[full];
    if (!h.odd) {
        h.l = top.get_si();
        c[full] = 0;
    } else {
        h.l = Integer(-top).get_si();
        c[full ^ 1] -= h.l;
        c[full] += h.l;
    }
    if (c[full] != 0) throw InvariantError("Han interpolation left a top coefficient");
    h.phi = c;
    std::size_t corner = h.odd ? full ^ 1 : full;
    for (std::size_t mask = 0; mask <= full; ++mask) {
        Integer v = 0;
        for (std::size_t sub = mask;; sub = (sub - 1) & mask) {
            v += h.phi[sub];
            if (sub == 0) break;
        }
        if (mask == corner) v += h.l;
        if (v != val[mask]) throw InvariantError("Han data does not reproduce corner values");
    }
    std::lock_guard<std::mutex> lk(memo_mu);
    han_memo.emplace(std::make_pair(ch, t), h);
    return h;
}

long bphi_coeff(unsigned ch, const std::vector<long>& t, long r) {
    if (r < 1) throw UserError("bphi_coeff needs r >= 1");
    return 2 * d_integer(ch, t, r) - d_integer(ch, t, r + 1) - d_integer(ch, t, r - 1);
}

bool discrete_multilinear_check(unsigned p, int e, const std::vector<MPoly>& factors, long r) {
    if (factors.empty()) throw UserError("need at least one factor");
    long q = 1;
    for (int i = 0; i < e; ++i) q *= p;
    int total = 0;
    for (const auto& f : factors) total += f.n_vars;
    MPoly f = MPoly::constant(total, 0);
    int off = 0;
    for (const auto& fi : factors) {
        f = f + fi.shifted(off, total);
        off += fi.n_vars;
    }
    long lhs = quotient_length(StaircaseQuotient(p, std::vector<int>(total, q)), f, r);

    std::vector<std::map<long, long>> mult;
    for (const auto& fi : factors)
        mult.push_back(
            jordan_profile(StaircaseQuotient(p, std::vector<int>(fi.n_vars, q)), fi).e);

    long rhs = 0;
    std::vector<long> t(factors.size());
    std::function<void(std::size_t, long)> walk = [&](std::size_t i, long weight) {
        if (i == factors.size()) {
            rhs += weight * d_integer(p, t, r);
            return;
        }
        for (auto [size, m] : mult[i]) {
            t[i] = size;
            walk(i + 1, weight * m);
        }
    };
    walk(0, 1);
    return lhs == rhs;
}

void han_cache_load(const std::string& path) {
    std::ifstream in(path);
    if (!in) return;
    nlohmann::json j;
    try {
        in >> j;
        std::lock_guard<std::mutex> lk(memo_mu);
        for (const auto& e : j.at("han")) {
            HanData h;
            h.l = e.at("l").get<long>();
            h.odd = e.at("odd").get<bool>();
            for (const auto& c : e.at("phi")) h.phi.emplace_back(c.get<std::string>());
            han_memo.emplace(std::make_pair(e.at("char").get<unsigned>(),
                                            e.at("t").get<std::vector<long>>()),
                             std::move(h));
        }
    } catch (const std::exception& ex) {
        throw UserError("corrupt cache file " + path + ": " + ex.what());
    }
}

void han_cache_save(const std::string& path) {
    nlohmann::json arr = nlohmann::json::array();
    {
        std::lock_guard<std::mutex> lk(memo_mu);
        for (const auto& [k, h] : han_memo) {
            nlohmann::json phi = nlohmann::json::array();
            for (const auto& c : h.phi) phi.push_back(c.get_str());
            arr.push_back({{"char", k.first}, {"t", k.second}, {"l", h.l}, {"odd", h.odd},
                           {"phi", phi}});
        }
    }
    std::ofstream out(path);
    if (!out) throw UserError("cannot write cache file " + path);
    out << nlohmann::json{{"han", arr}}.dump(1) << "\n";
}

std::size_t han_cache_size() {
    std::lock_guard<std::mutex> lk(memo_mu);
    return han_memo.size();
}

}  // namespace hk
