#include "hk/hk_api.h"

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <mutex>
#include <new>
#include <sstream>

#include "hk/compose.hpp"
#include "hk/fermat.hpp"
#include "hk/fforacle.hpp"
#include "hk/kernels.hpp"
#include "hk/orbit.hpp"
#include "hk/plot.hpp"
#include "hk/verify.hpp"

struct hk_hfunction {
    hk::HFunction h;
};

struct hk_lazy {
    hk::LazyHEvaluator h;
};

namespace {

using namespace hk;

thread_local std::string last_error;
std::mutex cache_mu;
std::string cache_dir;

template <class F>
hk_status guard(F&& f) {
    try {
        last_error.clear();
        f();
        return HK_OK;
    } catch (const UserError& e) {
        last_error = e.what();
        return HK_USER_ERROR;
    } catch (const nlohmann::json::exception& e) {
        last_error = e.what();
        return HK_USER_ERROR;
    } catch (const std::bad_alloc&) {
        last_error = "out of memory";
        return HK_INTERNAL_ERROR;
    } catch (const std::exception& e) {
        last_error = e.what();
        return HK_INTERNAL_ERROR;
    }
}

void need(const void* p, const char* what) {
    if (!p) throw UserError(std::string(what) + " must not be null");
}

char* dup(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

void put(char** out, const std::string& s) {
    need(out, "output pointer");
    *out = dup(s);
}

void put(char** out, const Json& j) { put(out, j.dump(2)); }

std::vector<int> int_list(std::string_view s) {
    std::vector<int> out;
    std::stringstream ss{std::string(s)};
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(item, &used);
        } catch (const std::exception&) {
            throw UserError("malformed integer list: " + std::string(s));
        }
        if (used != item.size()) throw UserError("malformed integer list: " + std::string(s));
        out.push_back(v);
    }
    if (out.empty()) throw UserError("empty integer list");
    return out;
}

Rational parse(const char* s) {
    need(s, "rational");
    return parse_rational(s);
}

Vec3 point(const char* s) {
    need(s, "point");
    return parse_point(s);
}

std::vector<int> degree_vec(const int* degrees, std::size_t n) {
    need(degrees, "degrees");
    if (n == 0) throw UserError("need at least one degree");
    return std::vector<int>(degrees, degrees + n);
}

Json rationals(const std::vector<Rational>& v) {
    Json a = Json::array();
    for (const auto& q : v) a.push_back(to_string(q));
    return a;
}

}  // namespace

extern "C" {

const char* hk_last_error(void) { return last_error.c_str(); }
void hk_string_free(char* s) { std::free(s); }
const char* hk_version(void) { return "1.0.0"; }

hk_status hk_set_cache_dir(const char* dir) {
    return guard([&] {
        std::lock_guard<std::mutex> lk(cache_mu);
        cache_dir = dir ? dir : "";
        if (cache_dir.empty()) return;
        std::error_code ec;
        std::filesystem::create_directories(cache_dir, ec);
        if (ec) throw UserError("cannot create cache directory " + cache_dir);
        han_cache_load((std::filesystem::path(cache_dir) / "han_cache.json").string());
    });
}

hk_status hk_cache_flush(void) {
    return guard([&] {
        std::lock_guard<std::mutex> lk(cache_mu);
        if (cache_dir.empty()) return;
        han_cache_save((std::filesystem::path(cache_dir) / "han_cache.json").string());
    });
}

hk_status hk_set_orbit_cap(size_t cap) {
    return guard([&] {
        if (cap == 0) throw UserError("orbit cap must be positive");
        set_orbit_cap(cap);
    });
}

hk_status hk_dp_eval(unsigned p, const char* pt, char** out) {
    return guard([&] { put(out, to_string(dp_eval(p, point(pt)))); });
}

hk_status hk_dinf_eval(const char* pt, char** out) {
    return guard([&] { put(out, to_string(dinf_eval(point(pt)))); });
}

hk_status hk_syzygy_gap(unsigned p, const char* pt, char** out) {
    return guard([&] { put(out, to_string(syzygy_gap(p, point(pt)))); });
}

hk_status hk_is_attached(unsigned p, const char* pt, int* out) {
    return guard([&] {
        need(out, "output pointer");
        *out = is_attached(p, point(pt)) ? 1 : 0;
    });
}

hk_status hk_dinf_slice_json(const char* c, char** out) {
    return guard([&] { put(out, to_json(dinf_slice(parse(c)))); });
}

hk_status hk_dinf_slice_csv(const char* c, int resolution, char** out) {
    return guard([&] {
        Piecewise2D k = dinf_slice(parse(c));
        Rational clip = k.x_hi() + 1;
        auto rows = slice_polylines(k, clip);
        auto g = slice_grid(k, resolution, clip);
        rows.insert(rows.end(), g.begin(), g.end());
        put(out, csv(k, rows));
    });
}

hk_status hk_oracle_length(unsigned p, const char* bounds, const char* poly, long r, char** out) {
    return guard([&] {
        need(bounds, "bounds");
        need(poly, "polynomial");
        StaircaseQuotient q(p, int_list(bounds));
        MPoly f = parse_mpoly(poly);
        long len = quotient_length(q, f, r);
        Json j;
        j["p"] = p;
        j["bounds"] = q.bounds;
        j["poly"] = f.str();
        j["r"] = r;
        j["dimension"] = q.dimension();
        j["length"] = len;
        put(out, j);
    });
}

hk_status hk_oracle_jordan(unsigned p, const char* bounds, const char* poly, char** out) {
    return guard([&] {
        need(bounds, "bounds");
        need(poly, "polynomial");
        StaircaseQuotient q(p, int_list(bounds));
        MPoly f = parse_mpoly(poly);
        JordanProfile jp = jordan_profile(q, f);
        Json j;
        j["p"] = p;
        j["bounds"] = q.bounds;
        j["poly"] = f.str();
        j["lengths"] = jp.l;
        Json blocks = Json::object();
        for (const auto& [size, mult] : jp.e) blocks[std::to_string(size)] = mult;
        j["blocks"] = blocks;
        j["nilpotency"] = jp.nilpotency;
        put(out, j);
    });
}

hk_status hk_oracle_h_point(unsigned p, int e, const char* poly, const char* t, char** out) {
    return guard([&] {
        need(poly, "polynomial");
        MPoly f = parse_mpoly(poly);
        Rational tt = parse(t);
        Json j;
        j["p"] = p;
        j["e"] = e;
        j["poly"] = f.str();
        j["t"] = to_string(tt);
        j["h"] = to_string(h_e_point(p, e, f, tt));
        put(out, j);
    });
}

hk_status hk_oracle_threshold(unsigned p, int e, const char* poly, char** out) {
    return guard([&] {
        need(poly, "polynomial");
        if (e < 0) throw UserError("exponent e must be nonnegative");
        MPoly f = parse_mpoly(poly);
        long q = 1;
        for (int i = 0; i < e; ++i) {
            q *= p;
            if (q > (1L << 20)) throw UserError("q too large");
        }
        StaircaseQuotient sq(p, std::vector<int>(f.n_vars, int(q)));
        Json j;
        j["p"] = p;
        j["e"] = e;
        j["poly"] = f.str();
        j["threshold_at_q"] = to_string(f_threshold_at_q(sq, f, q));
        put(out, j);
    });
}

hk_status hk_diagonal_inf(const int* degrees, size_t n, hk_hfunction** out) {
    return guard([&] {
        need(out, "output pointer");
        *out = new hk_hfunction{diagonal_inf(degree_vec(degrees, n))};
    });
}

hk_status hk_binomial_inf(int a, int b, int u, int v, int c, hk_hfunction** out) {
    return guard([&] {
        need(out, "output pointer");
        *out = new hk_hfunction{h_binomial_inf({a, b, u, v, c})};
    });
}

hk_status hk_fermat_phi(int d, int n, hk_hfunction** out) {
    return guard([&] {
        need(out, "output pointer");
        if (d < 1) throw UserError("degree must be positive");
        *out = new hk_hfunction{fermat_phi(d, n)};
    });
}

hk_status hk_hfunction_json(const hk_hfunction* h, char** out) {
    return guard([&] {
        need(h, "h-function");
        put(out, to_json(h->h));
    });
}

hk_status hk_hfunction_eval(const hk_hfunction* h, const char* t, char** out) {
    return guard([&] {
        need(h, "h-function");
        put(out, to_string(h->h(parse(t))));
    });
}

hk_status hk_hfunction_csv(const hk_hfunction* h, int resolution, char** out) {
    return guard([&] {
        need(h, "h-function");
        put(out, csv(plot_dump(h->h, resolution)));
    });
}

void hk_hfunction_free(hk_hfunction* h) { delete h; }

hk_status hk_diagonal_p(unsigned p, const int* degrees, size_t n, hk_lazy** out) {
    return guard([&] {
        need(out, "output pointer");
        *out = new hk_lazy{diagonal_p(p, degree_vec(degrees, n))};
    });
}

hk_status hk_binomial_p(unsigned p, int a, int b, int u, int v, int c, hk_lazy** out) {
    return guard([&] {
        need(out, "output pointer");
        *out = new hk_lazy{h_binomial_p(p, {a, b, u, v, c})};
    });
}

hk_status hk_lazy_eval(const hk_lazy* h, const char* t, char** out) {
    return guard([&] {
        need(h, "evaluator");
        put(out, to_string(h->h(parse(t))));
    });
}

hk_status hk_lazy_csv(const hk_lazy* h, int resolution, char** out) {
    return guard([&] {
        need(h, "evaluator");
        put(out, csv(plot_dump(h->h, resolution)));
    });
}

void hk_lazy_free(hk_lazy* h) { delete h; }

hk_status hk_compose_verify(unsigned p, int e, int* passed, char** out) {
    return guard([&] {
        need(passed, "passed");
        require_prime(p);
        if (e < 1 || e > 3) throw UserError("compose verify needs 1 <= e <= 3");
        long q = 1;
        for (int i = 0; i < e; ++i) q *= p;
        auto grid = grid_points(rat(1, q), 1);
        Json cases = Json::array();
        bool all = true;
        auto record = [&](const std::string& name, const std::function<Rational(const Rational&)>& f,
                          const MPoly& poly) {
            CompareReport c = oracle_compare(f, poly, p, e, grid);
            all = all && c.max_abs == 0;
            cases.push_back({{"case", name}, {"poly", poly.str()}, {"points", c.rows.size()},
                             {"max_abs", to_string(c.max_abs)}, {"pass", c.max_abs == 0}});
        };
        for (const auto& B : binomial_suite()) {
            std::ostringstream name;
            name << "binomial " << B.a << "," << B.b << "," << B.u << "," << B.v << "," << B.c;
            record(name.str(), h_binomial_p(p, B).fn, binomial_poly(B));
        }
        for (std::vector<int> degs : {std::vector<int>{2, 2}, {2, 3}, {3, 3}, {2, 5}, {4, 3}}) {
            std::string name = "diagonal";
            for (int d : degs) name += " " + std::to_string(d);
            record(name, diagonal_p(p, degs).fn, diagonal_poly(degs));
        }
        *passed = all ? 1 : 0;
        Json j;
        j["p"] = p;
        j["e"] = e;
        j["pass"] = all;
        j["cases"] = cases;
        put(out, j);
    });
}

hk_status hk_fermat_series(int d, int order, char** out) {
    return guard([&] {
        if (d != 2 && d != 3) throw UserError("generating functions exist for d = 2 and d = 3");
        SeriesPair sp = d == 2 ? series_d2(order) : series_d3(order);
        Json j;
        j["d"] = d;
        j["order"] = order;
        if (d == 2) {
            j["e_hk"] = rationals(sp.ehk);
            j["fsig"] = rationals(sp.fsig);
        } else {
            j["c"] = rationals(sp.ehk);
            j["c_prime"] = rationals(sp.fsig);
        }
        put(out, j);
    });
}

hk_status hk_fermat_iterate(int d, int levels, char** out) {
    return guard([&] {
        if (d < 1) throw UserError("degree must be positive");
        if (levels < 1 || levels > 40) throw UserError("levels must be in 1..40");
        Json arr = Json::array();
        for (int n = 0; n < levels; ++n) {
            Json lv = to_json(fermat_phi(d, n));
            lv["n"] = n;
            arr.push_back(lv);
        }
        Json j;
        j["d"] = d;
        j["levels"] = arr;
        put(out, j);
    });
}

hk_status hk_fermat_char2_cubic(char** out) {
    return guard([&] {
        Char2CubicReport rep = char2_cubic(8);
        Char2TwoCubes two = char2_sum_two_cubes();
        Json j;
        j["poly"] = "x^3+y^3+z^3";
        j["p"] = 2;
        j["h_dyadic"] = rationals(rep.h_dyadic);
        j["e_hk"] = to_string(rep.e_hk);
        Json tc = Json::array();
        for (int k = 0; k <= 8; ++k) {
            Rational t = rat(k, 8);
            tc.push_back({{"t", to_string(t)}, {"h", to_string(two.h(t))}});
        }
        j["two_cubes_h"] = tc;
        put(out, j);
    });
}

hk_status hk_fermat_verify(int d, int order, int* passed, char** out) {
    return guard([&] {
        need(passed, "passed");
        PhiConsistencyReport rep = verify_phi_consistency(d, order, default_phi_samples());
        SeriesPair sp = d == 2 ? series_d2(order) : series_d3(order);
        bool ehk_ok = true, fsig_ok = true, fsig_neg = true;
        for (int n = 0; n <= order; ++n) {
            HFunction h = fermat_phi(d, n);
            Rational e = d == 2 ? h.e_hk : h.e_hk - 1;
            if (e != sp.ehk[n]) ehk_ok = false;
            if (!h.fsig || *h.fsig != sp.fsig[n]) fsig_ok = false;
            if (!h.fsig || *h.fsig != -sp.fsig[n]) fsig_neg = false;
        }
        Json j;
        j["d"] = d;
        j["order"] = order;
        j["closed_form_checks"] = rep.checks;
        j["closed_form_ok"] = rep.ok;
        if (!rep.ok) j["first_mismatch"] = rep.first_mismatch;
        j["e_hk_matches_series"] = ehk_ok;
        j["fsig_matches_series"] = fsig_ok;
        if (d == 3) j["fsig_matches_negated_series"] = fsig_neg;
        *passed = rep.ok && ehk_ok && fsig_ok ? 1 : 0;
        j["pass"] = *passed == 1;
        put(out, j);
    });
}

int hk_criterion_count(void) { return criterion_count(); }

hk_status hk_verify(int id, int* passed, char** table, char** json) {
    return guard([&] {
        need(passed, "passed");
        std::vector<CriterionResult> rs;
        if (id == 0)
            rs = run_all_criteria();
        else
            rs.push_back(run_criterion(id));
        std::string text;
        Json arr = Json::array();
        bool all = true;
        int ok = 0;
        for (const auto& r : rs) {
            text += format_result(r);
            arr.push_back(to_json(r));
            all = all && r.pass();
            ok += r.pass() ? 1 : 0;
        }
        text += std::to_string(ok) + "/" + std::to_string(rs.size()) + " criteria pass\n";
        *passed = all ? 1 : 0;
        if (table) *table = dup(text);
        if (json) {
            Json j;
            j["pass"] = all;
            j["criteria"] = arr;
            *json = dup(j.dump(2));
        }
    });
}

}  // extern "C"
