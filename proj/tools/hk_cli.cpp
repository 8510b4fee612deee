#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hk/hk_api.h"
#include "json.hpp"

namespace {

using Json = nlohmann::ordered_json;

enum class Format { Text, Json, Csv };

struct Globals {
    bool json = false, csv = false;
    std::string out, cache_dir;
    std::size_t orbit_cap = 0;
    Format format() const { return json ? Format::Json : csv ? Format::Csv : Format::Text; }
};

// Carries an API status out of a command body.
struct ApiFailure {
    hk_status status;
    std::string message;
};

void check(hk_status s) {
    if (s != HK_OK) throw ApiFailure{s, hk_last_error()};
}

std::string take(char* s) {
    std::string out = s ? s : "";
    hk_string_free(s);
    return out;
}

std::vector<int> int_list(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(item, &used);
        } catch (const std::exception&) {
            throw ApiFailure{HK_USER_ERROR, "malformed integer list: " + s};
        }
        if (used != item.size()) throw ApiFailure{HK_USER_ERROR, "malformed integer list: " + s};
        out.push_back(v);
    }
    if (out.empty()) throw ApiFailure{HK_USER_ERROR, "empty integer list"};
    return out;
}

std::string csv_cell(const Json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_null()) return "";
    return v.dump();
}

// Flat objects become key,value rows; arrays of flat objects become tables.
std::string json_to_csv(const Json& j) {
    std::ostringstream o;
    if (j.is_array() && !j.empty() && j.front().is_object()) {
        bool first = true;
        for (const auto& [k, v] : j.front().items()) o << (first ? "" : ",") << k, first = false;
        o << "\n";
        for (const auto& row : j) {
            first = true;
            for (const auto& [k, v] : row.items()) o << (first ? "" : ",") << csv_cell(v), first = false;
            o << "\n";
        }
        return o.str();
    }
    o << "key,value\n";
    for (const auto& [k, v] : j.items()) o << k << "," << csv_cell(v) << "\n";
    return o.str();
}

class Emitter {
public:
    explicit Emitter(const Globals& g) : g_(g) {}

    void scalar(const std::string& name, const std::string& value, Json context) {
        context[name] = value;
        switch (g_.format()) {
            case Format::Text: write(value + "\n"); break;
            case Format::Json: write(context.dump(2) + "\n"); break;
            case Format::Csv: write(json_to_csv(context)); break;
        }
    }
    void object(const Json& j, const std::function<std::string()>& csv = nullptr) {
        if (g_.format() == Format::Csv)
            write(csv ? csv() : json_to_csv(j));
        else
            write(j.dump(2) + "\n");
    }
    void write(const std::string& s) {
        if (g_.out.empty()) {
            std::cout << s;
            return;
        }
        std::ofstream f(g_.out, std::ios::app);
        if (!f) throw ApiFailure{HK_USER_ERROR, "cannot write " + g_.out};
        f << s;
    }

private:
    const Globals& g_;
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact Hilbert-Kunz kernels, h-functions and Fermat towers"};
    app.require_subcommand(1);
    Globals g;
    auto* fmt = app.add_option_group("format");
    fmt->add_flag("--json", g.json, "JSON output");
    fmt->add_flag("--csv", g.csv, "CSV output");
    fmt->require_option(0, 1);
    app.add_option("--out", g.out, "write output to PATH instead of stdout");
    app.add_option("--cache-dir", g.cache_dir, "persistent cache directory")->envname("HK_CACHE_DIR");
    app.add_option("--orbit-cap", g.orbit_cap, "maximum orbit size for self-similar evaluation");

    Emitter emit(g);
    std::function<void()> action;
    CLI::App* failing = &app;

    auto bind = [&](CLI::App* sub, std::function<void()> fn) {
        sub->callback([&, sub, fn] {
            failing = sub;
            action = fn;
        });
    };

    std::string point, c = "1/2", poly, bounds, t, degrees, ch = "inf";
    unsigned p = 2;
    int e = 1, resolution = 12, d = 2, order = 6, levels = 8, id = 0;
    long r = 0;
    int ba = 0, bb = 0, bu = 1, bv = 1, bc = 1;

    // dp / dinf / gap / attached
    auto* dp = app.add_subcommand("dp", "characteristic-p kernel D_p of T1 + T2");
    dp->require_subcommand(1);
    auto* dp_eval = dp->add_subcommand("eval", "evaluate D_p at a point of the unit cube");
    dp_eval->add_option("--p", p, "prime")->required();
    dp_eval->add_option("--point", point, "a/b,c/d,e/f")->required();
    bind(dp_eval, [&] {
        char* out = nullptr;
        check(hk_dp_eval(p, point.c_str(), &out));
        emit.scalar("value", take(out), {{"kernel", "D_p"}, {"p", p}, {"point", point}});
    });

    auto* dinf = app.add_subcommand("dinf", "limit kernel D_inf of T1 + T2");
    dinf->require_subcommand(1);
    auto* dinf_eval = dinf->add_subcommand("eval", "evaluate D_inf at a point");
    dinf_eval->add_option("--point", point, "a/b,c/d,e/f")->required();
    bind(dinf_eval, [&] {
        char* out = nullptr;
        check(hk_dinf_eval(point.c_str(), &out));
        emit.scalar("value", take(out), {{"kernel", "D_inf"}, {"point", point}});
    });
    auto* dinf_slice = dinf->add_subcommand("slice", "region table of (x, t) -> D_inf(x, t, c)");
    dinf_slice->add_option("--c", c, "third coordinate");
    dinf_slice->add_option("--resolution", resolution, "grid subdivisions per unit for --csv");
    bind(dinf_slice, [&] {
        char* out = nullptr;
        if (g.format() == Format::Csv) {
            check(hk_dinf_slice_csv(c.c_str(), resolution, &out));
            emit.write(take(out));
            return;
        }
        check(hk_dinf_slice_json(c.c_str(), &out));
        emit.object(Json::parse(take(out)));
    });

    auto* gap = app.add_subcommand("gap", "syzygy gap D_p - D_inf");
    gap->add_option("--p", p, "prime")->required();
    gap->add_option("--point", point, "a/b,c/d,e/f")->required();
    bind(gap, [&] {
        char* out = nullptr;
        check(hk_syzygy_gap(p, point.c_str(), &out));
        emit.scalar("gap", take(out), {{"p", p}, {"point", point}});
    });

    auto* att = app.add_subcommand("attached", "whether D_p = D_inf at a point");
    att->add_option("--p", p, "prime")->required();
    att->add_option("--point", point, "a/b,c/d,e/f")->required();
    bind(att, [&] {
        int v = 0;
        check(hk_is_attached(p, point.c_str(), &v));
        emit.scalar("attached", v ? "true" : "false", {{"p", p}, {"point", point}});
    });

    // oracle
    auto* oracle = app.add_subcommand("oracle", "finite-field brute-force oracle");
    oracle->require_subcommand(1);
    auto* o_len = oracle->add_subcommand("length", "length of k[x]/(x_i^{a_i}, f^r)");
    o_len->add_option("--p", p, "characteristic")->required();
    o_len->add_option("--bounds", bounds, "a_1,...,a_n")->required();
    o_len->add_option("--poly", poly, "polynomial, e.g. x0^3+x1^3")->required();
    o_len->add_option("--r", r, "power of f")->required();
    bind(o_len, [&] {
        char* out = nullptr;
        check(hk_oracle_length(p, bounds.c_str(), poly.c_str(), r, &out));
        emit.object(Json::parse(take(out)));
    });
    auto* o_jor = oracle->add_subcommand("jordan", "Jordan profile of multiplication by f");
    o_jor->add_option("--p", p, "characteristic")->required();
    o_jor->add_option("--bounds", bounds, "a_1,...,a_n")->required();
    o_jor->add_option("--poly", poly, "polynomial")->required();
    bind(o_jor, [&] {
        char* out = nullptr;
        check(hk_oracle_jordan(p, bounds.c_str(), poly.c_str(), &out));
        emit.object(Json::parse(take(out)));
    });
    auto* o_h = oracle->add_subcommand("h-point", "h(t) from lengths at q = p^e");
    o_h->add_option("--p", p, "prime")->required();
    o_h->add_option("--e", e, "q = p^e")->required();
    o_h->add_option("--poly", poly, "polynomial")->required();
    o_h->add_option("--t", t, "rational with t*q integral")->required();
    bind(o_h, [&] {
        char* out = nullptr;
        check(hk_oracle_h_point(p, e, poly.c_str(), t.c_str(), &out));
        emit.object(Json::parse(take(out)));
    });
    auto* o_thr = oracle->add_subcommand("threshold", "min{i : f^i in m^[q]} / q");
    o_thr->add_option("--p", p, "prime")->required();
    o_thr->add_option("--e", e, "q = p^e")->required();
    o_thr->add_option("--poly", poly, "polynomial")->required();
    bind(o_thr, [&] {
        char* out = nullptr;
        check(hk_oracle_threshold(p, e, poly.c_str(), &out));
        emit.object(Json::parse(take(out)));
    });

    // compose
    auto closed = [&](hk_hfunction* h) {
        char* out = nullptr;
        hk_status s = g.format() == Format::Csv ? hk_hfunction_csv(h, resolution, &out)
                                                : hk_hfunction_json(h, &out);
        hk_hfunction_free(h);
        check(s);
        std::string body = take(out);
        if (g.format() == Format::Csv)
            emit.write(body);
        else
            emit.object(Json::parse(body));
    };
    auto lazy = [&](hk_lazy* h, const Json& head) {
        char* out = nullptr;
        hk_status s = hk_lazy_csv(h, resolution, &out);
        hk_lazy_free(h);
        check(s);
        std::string body = take(out);
        if (g.format() == Format::Csv) {
            emit.write(body);
            return;
        }
        Json j = head;
        Json rows = Json::array();
        std::stringstream ss(body);
        std::string line;
        std::getline(ss, line);
        while (std::getline(ss, line)) {
            auto comma = line.find(',');
            rows.push_back({{"t", line.substr(0, comma)}, {"h", line.substr(comma + 1)}});
        }
        j["values"] = rows;
        emit.object(j);
    };
    auto char_of = [&]() -> unsigned {
        if (ch == "inf") return 0;
        try {
            std::size_t used = 0;
            unsigned long v = std::stoul(ch, &used);
            if (used == ch.size() && v > 0 && v < (1UL << 31)) return unsigned(v);
        } catch (const std::exception&) {
        }
        throw ApiFailure{HK_USER_ERROR, "--char must be 'inf' or a prime, got " + ch};
    };

    auto* compose = app.add_subcommand("compose", "h-functions by Stieltjes composition");
    compose->require_subcommand(1);
    auto* c_diag = compose->add_subcommand("diagonal", "h of x_1^{d_1} + ... + x_k^{d_k}");
    c_diag->add_option("--degrees", degrees, "d_1,...,d_k")->required();
    c_diag->add_option("--char", ch, "inf or a prime");
    c_diag->add_option("--resolution", resolution, "grid subdivisions for value dumps");
    bind(c_diag, [&] {
        auto degs = int_list(degrees);
        unsigned pc = char_of();
        if (pc == 0) {
            hk_hfunction* h = nullptr;
            check(hk_diagonal_inf(degs.data(), degs.size(), &h));
            closed(h);
        } else {
            hk_lazy* h = nullptr;
            check(hk_diagonal_p(pc, degs.data(), degs.size(), &h));
            lazy(h, {{"char", pc}, {"degrees", degs}});
        }
    });
    auto* c_bin = compose->add_subcommand("binomial", "h of x^a y^b (x^u + y^v)^c");
    c_bin->add_option("--a", ba, "exponent of x")->required();
    c_bin->add_option("--b", bb, "exponent of y")->required();
    c_bin->add_option("--u", bu, "inner exponent of x")->required();
    c_bin->add_option("--v", bv, "inner exponent of y")->required();
    c_bin->add_option("--c", bc, "outer power")->required();
    c_bin->add_option("--char", ch, "inf or a prime");
    c_bin->add_option("--resolution", resolution, "grid subdivisions for value dumps");
    bind(c_bin, [&] {
        unsigned pc = char_of();
        if (pc == 0) {
            hk_hfunction* h = nullptr;
            check(hk_binomial_inf(ba, bb, bu, bv, bc, &h));
            closed(h);
        } else {
            hk_lazy* h = nullptr;
            check(hk_binomial_p(pc, ba, bb, bu, bv, bc, &h));
            lazy(h, {{"char", pc}, {"binomial", {ba, bb, bu, bv, bc}}});
        }
    });
    int passed = 0;
    auto* c_ver = compose->add_subcommand("verify", "binomial suite and diagonals vs the oracle");
    c_ver->add_option("--p", p, "prime")->required();
    c_ver->add_option("--e", e, "q = p^e")->required();
    bind(c_ver, [&] {
        char* out = nullptr;
        check(hk_compose_verify(p, e, &passed, &out));
        Json j = Json::parse(take(out));
        emit.object(j, [&] { return json_to_csv(j["cases"]); });
        if (!passed) throw ApiFailure{HK_INTERNAL_ERROR, "engine disagrees with the oracle"};
    });

    // fermat
    auto* fermat = app.add_subcommand("fermat", "Fermat hypersurface towers");
    fermat->require_subcommand(1);
    auto* f_ser = fermat->add_subcommand("series", "limit generating-function coefficients");
    f_ser->add_option("--d", d, "degree, 2 or 3")->required();
    f_ser->add_option("--order", order, "highest coefficient");
    bind(f_ser, [&] {
        char* out = nullptr;
        check(hk_fermat_series(d, order, &out));
        Json j = Json::parse(take(out));
        emit.object(j, [&] {
            std::ostringstream o;
            const char* a = d == 2 ? "e_hk" : "c";
            const char* b = d == 2 ? "fsig" : "c_prime";
            o << "n," << a << "," << b << "\n";
            for (std::size_t n = 0; n < j[a].size(); ++n)
                o << n << "," << j[a][n].get<std::string>() << "," << j[b][n].get<std::string>() << "\n";
            return o.str();
        });
    });
    auto* f_it = fermat->add_subcommand("iterate", "iterate x^d compositions");
    f_it->add_option("--d", d, "degree")->required();
    f_it->add_option("--levels", levels, "number of levels");
    bind(f_it, [&] {
        char* out = nullptr;
        check(hk_fermat_iterate(d, levels, &out));
        Json j = Json::parse(take(out));
        emit.object(j, [&] {
            std::ostringstream o;
            o << "n,e_hk,fsig,threshold\n";
            for (const auto& lv : j["levels"])
                o << lv["n"].get<int>() << "," << csv_cell(lv["e_hk"]) << "," << csv_cell(lv["fsig"])
                  << "," << csv_cell(lv["threshold"]) << "\n";
            return o.str();
        });
    });
    auto* f_c2 = fermat->add_subcommand("char2-cubic", "x^3 + y^3 + z^3 in characteristic 2");
    bind(f_c2, [&] {
        char* out = nullptr;
        check(hk_fermat_char2_cubic(&out));
        Json j = Json::parse(take(out));
        if (g.format() != Format::Text) {
            emit.object(j, [&] {
                std::ostringstream o;
                o << "i,h\n";
                for (std::size_t i = 0; i < j["h_dyadic"].size(); ++i)
                    o << i << "," << j["h_dyadic"][i].get<std::string>() << "\n";
                return o.str();
            });
            return;
        }
        std::ostringstream o;
        o << "x^3+y^3+z^3 over F_2\n";
        for (std::size_t i = 0; i < j["h_dyadic"].size(); ++i)
            o << "h(1/" << (1u << i) << ") = " << j["h_dyadic"][i].get<std::string>() << "\n";
        o << "e_hk = " << j["e_hk"].get<std::string>() << "\n";
        emit.write(o.str());
    });
    auto* f_ver = fermat->add_subcommand("verify", "closed forms vs iteration");
    f_ver->add_option("--d", d, "degree, 2 or 3")->required();
    f_ver->add_option("--order", order, "highest level");
    bind(f_ver, [&] {
        char* out = nullptr;
        check(hk_fermat_verify(d, order, &passed, &out));
        emit.object(Json::parse(take(out)));
        if (!passed) throw ApiFailure{HK_INTERNAL_ERROR, "closed forms disagree with iteration"};
    });

    // verify
    auto* ver = app.add_subcommand("verify", "acceptance suite");
    ver->require_subcommand(1);
    auto* v_all = ver->add_subcommand("all", "run every criterion");
    auto* v_one = ver->add_subcommand("criterion", "run one criterion");
    v_one->add_option("--id", id, "criterion number")->required();
    auto run_verify = [&](int which) {
        char* table = nullptr;
        char* json = nullptr;
        check(hk_verify(which, &passed, &table, &json));
        std::string t = take(table), js = take(json);
        if (g.format() == Format::Text) {
            emit.write(t);
        } else {
            Json j = Json::parse(js);
            emit.object(j, [&] {
                std::ostringstream o;
                o << "id,title,pass\n";
                for (const auto& cr : j["criteria"])
                    o << cr["id"].get<int>() << "," << cr["title"].get<std::string>() << ","
                      << (cr["pass"].get<bool>() ? "PASS" : "FAIL") << "\n";
                return o.str();
            });
        }
        if (!passed) throw ApiFailure{HK_INTERNAL_ERROR, "acceptance criteria failed"};
    };
    bind(v_all, [&] { run_verify(0); });
    bind(v_one, [&] { run_verify(id); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& ex) {
        return app.exit(ex);
    } catch (const CLI::CallForAllHelp& ex) {
        return app.exit(ex);
    } catch (const CLI::ParseError& ex) {
        app.exit(ex);
        return 1;
    }

    try {
        if (!g.out.empty()) std::ofstream(g.out, std::ios::trunc);
        if (g.orbit_cap) check(hk_set_orbit_cap(g.orbit_cap));
        if (!g.cache_dir.empty()) check(hk_set_cache_dir(g.cache_dir.c_str()));
        action();
        if (!g.cache_dir.empty()) check(hk_cache_flush());
    } catch (const ApiFailure& f) {
        std::cerr << "error: " << f.message << "\n";
        if (f.status == HK_USER_ERROR) {
            std::cerr << failing->help();
            return 1;
        }
        return 2;
    } catch (const Json::exception& ex) {
        std::cerr << "error: malformed library output: " << ex.what() << "\n";
        return 2;
    }
    return 0;
}
