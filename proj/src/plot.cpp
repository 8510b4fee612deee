#include "hk/plot.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace hk {

namespace {

std::vector<PlotRow> rows_on(const std::function<Rational(const Rational&)>& f,
                             const std::set<Rational>& ts) {
    std::vector<PlotRow> out;
    for (const auto& t : ts) out.emplace_back(t, f(t));
    return out;
}

std::set<Rational> grid(int resolution, const Rational& hi) {
    if (resolution < 1) throw UserError("resolution must be positive");
    std::set<Rational> ts;
    for (long k = 0; Rational(k, resolution) <= hi; ++k) ts.insert(rat(k, resolution));
    ts.insert(hi);
    return ts;
}

struct Edge {
    Rational a, b, c;  // a x + b t <= c
};

}  // namespace

std::vector<PlotRow> plot_dump(const HFunction& h, int resolution) {
    Rational hi = std::max(Rational(1), h.h.hi());
    std::set<Rational> ts = grid(resolution, hi);
    for (const auto& b : h.h.breakpoints())
        if (b >= 0 && b <= hi) ts.insert(b);
    return rows_on([&](const Rational& t) { return h(t); }, ts);
}

std::vector<PlotRow> plot_dump(const LazyHEvaluator& h, int resolution) {
    return rows_on([&](const Rational& t) { return h(t); }, grid(resolution, 1));
}

std::vector<SliceVertex> slice_polylines(const Piecewise2D& k, const Rational& t_clip) {
    Rational t_hi = k.t_hi() ? *k.t_hi() : t_clip;
    std::vector<SliceVertex> out;
    for (std::size_t i = 0; i < k.regions().size(); ++i) {
        const Region& reg = k.regions()[i];
        std::vector<Edge> es = {{1, 0, k.x_hi()}, {-1, 0, -k.x_lo()}, {0, 1, t_hi}, {0, -1, -k.t_lo()}};
        for (const auto& h : reg.ineqs) es.push_back({h.a, h.b, h.c});
        std::vector<std::pair<Rational, Rational>> pts;
        for (std::size_t u = 0; u < es.size(); ++u)
            for (std::size_t v = u + 1; v < es.size(); ++v) {
                Rational det = es[u].a * es[v].b - es[u].b * es[v].a;
                if (det == 0) continue;
                Rational x = (es[u].c * es[v].b - es[u].b * es[v].c) / det;
                Rational t = (es[u].a * es[v].c - es[u].c * es[v].a) / det;
                bool inside = true;
                for (const auto& e : es)
                    if (e.a * x + e.b * t > e.c) inside = false;
                if (inside && std::find(pts.begin(), pts.end(), std::make_pair(x, t)) == pts.end())
                    pts.emplace_back(x, t);
            }
        if (pts.size() < 3) continue;
        // Convex polygon: order by angle around the centroid, exactly, via half-plane then cross.
        Rational cx = 0, ct = 0;
        for (const auto& [x, t] : pts) cx += x, ct += t;
        cx /= Rational(long(pts.size()));
        ct /= Rational(long(pts.size()));
        auto half = [&](const std::pair<Rational, Rational>& p) {
            Rational dx = p.first - cx, dt = p.second - ct;
            return dt > 0 || (dt == 0 && dx > 0) ? 0 : 1;
        };
        std::sort(pts.begin(), pts.end(), [&](const auto& p, const auto& q) {
            int hp = half(p), hq = half(q);
            if (hp != hq) return hp < hq;
            Rational cross = (p.first - cx) * (q.second - ct) - (p.second - ct) * (q.first - cx);
            return cross > 0;
        });
        pts.push_back(pts.front());
        for (const auto& [x, t] : pts) out.push_back({i, x, t, reg.poly(x, t), true});
    }
    return out;
}

std::vector<SliceVertex> slice_grid(const Piecewise2D& k, int resolution, const Rational& t_clip) {
    if (resolution < 1) throw UserError("resolution must be positive");
    Rational t_hi = k.t_hi() ? *k.t_hi() : t_clip;
    std::vector<SliceVertex> out;
    for (Rational x = k.x_lo(); x <= k.x_hi(); x += rat(1, resolution))
        for (Rational t = k.t_lo(); t <= t_hi; t += rat(1, resolution)) {
            std::size_t idx = k.regions().size();
            for (std::size_t i = 0; i < k.regions().size() && idx == k.regions().size(); ++i)
                if (k.regions()[i].contains(x, t)) idx = i;
            out.push_back({idx, x, t, k(x, t), false});
        }
    return out;
}

std::string csv(const std::vector<PlotRow>& rows) {
    std::ostringstream o;
    o << "t,value\n";
    for (const auto& [t, v] : rows) o << to_string(t) << "," << to_string(v) << "\n";
    return o.str();
}

std::string csv(const Piecewise2D& k, const std::vector<SliceVertex>& verts) {
    std::ostringstream o;
    o << "kind,region,x,t,value\n";
    for (const auto& v : verts)
        o << (v.boundary ? "boundary," : "grid,")
          << (v.region < k.regions().size() ? k.regions()[v.region].label : std::string("-"))
          << "," << to_string(v.x) << "," << to_string(v.t) << "," << to_string(v.value) << "\n";
    return o.str();
}

}  // namespace hk
