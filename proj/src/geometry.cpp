#include "lab/geometry.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

namespace lab::geom {
namespace {

using json = nlohmann::json;

// Cut coordinate along the outward direction e^{i theta}.
double cut_coord(const Cut& c, cplx z) {
    return std::real(z * std::polar(1.0, -c.theta));
}

std::vector<cplx> as_polygon_vertices(const Window& w) {
    if (auto* p = std::get_if<Polygon>(&w.shape())) return p->vertices;
    if (auto* r = std::get_if<Rect>(&w.shape())) {
        return {r->corner, r->corner + cplx(r->width, 0.0),
                r->corner + cplx(r->width, r->height), r->corner + cplx(0.0, r->height)};
    }
    throw InvalidArgumentError("window is not polygonal");
}

double shoelace(const std::vector<cplx>& v) {
    double a = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const cplx& p = v[i];
        const cplx& q = v[(i + 1) % v.size()];
        a += p.real() * q.imag() - q.real() * p.imag();
    }
    return 0.5 * a;
}

// Sutherland-Hodgman clip against {Re(z e^{-i theta}) <= l}.
std::vector<cplx> clip_halfplane(const std::vector<cplx>& poly, double theta, double l) {
    const cplx u = std::polar(1.0, -theta);
    auto coord = [&](cplx z) { return std::real(z * u); };
    std::vector<cplx> out;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        cplx a = poly[i], b = poly[(i + 1) % poly.size()];
        double sa = coord(a) - l, sb = coord(b) - l;
        if (sa <= 0.0) out.push_back(a);
        if ((sa < 0.0) != (sb < 0.0) && sa != sb) {
            double t = sa / (sa - sb);
            out.push_back(a + t * (b - a));
        }
    }
    return out;
}

// Inside-intervals of the cut line within a polygon, as parameters along the
// line z = l*e^{i theta} + t*i*e^{i theta}.
std::vector<std::pair<double, double>> line_intervals(const std::vector<cplx>& poly,
                                                      double theta, double l) {
    const cplx u = std::polar(1.0, theta);
    const cplx v = u * cplx(0.0, 1.0);
    std::vector<double> ts;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        cplx a = poly[i], b = poly[(i + 1) % poly.size()];
        double sa = std::real(a * std::conj(u)) - l;
        double sb = std::real(b * std::conj(u)) - l;
        // half-open rule so vertices on the line are counted once
        bool ca = sa < 0.0, cb = sb < 0.0;
        if (ca != cb) {
            double t = sa / (sa - sb);
            cplx q = a + t * (b - a);
            ts.push_back(std::real((q - l * u) * std::conj(v)));
        }
    }
    std::sort(ts.begin(), ts.end());
    std::vector<std::pair<double, double>> out;
    for (std::size_t i = 0; i + 1 < ts.size(); i += 2) out.emplace_back(ts[i], ts[i + 1]);
    return out;
}

double disk_cut_area(const Disk& d, double signed_dist) {
    // area of the disk part at cut coordinate <= center coordinate + signed_dist
    double r = d.radius;
    if (signed_dist >= r) return kPi * r * r;
    if (signed_dist <= -r) return 0.0;
    double s = signed_dist;
    return s * std::sqrt(r * r - s * s) + r * r * std::asin(s / r) + 0.5 * kPi * r * r;
}

void append_subdivided(BoundarySet& out, cplx a, cplx b, double max_spacing) {
    double len = std::abs(b - a);
    int n = std::max(1, static_cast<int>(std::ceil(len / max_spacing)));
    for (int i = 0; i < n; ++i) {
        double t0 = static_cast<double>(i) / n, t1 = static_cast<double>(i + 1) / n;
        out.push_back({a + t0 * (b - a), a + t1 * (b - a)});
    }
}

double point_segment_dist(cplx z, const Segment& s) {
    cplx d = s[1] - s[0];
    double dd = std::norm(d);
    double t = dd > 0.0 ? std::clamp(std::real((z - s[0]) * std::conj(d)) / dd, 0.0, 1.0) : 0.0;
    return std::abs(z - (s[0] + t * d));
}

// Length of segment inside the closed ball B_r(z).
double segment_in_ball(const Segment& s, cplx z, double r) {
    cplx d = s[1] - s[0];
    double dd = std::norm(d);
    if (dd == 0.0) return 0.0;
    cplx a = s[0] - z;
    double b = std::real(a * std::conj(d));
    double c = std::norm(a) - r * r;
    double disc = b * b - dd * c;
    if (disc <= 0.0) return 0.0;
    double sq_disc = std::sqrt(disc);
    double t0 = std::max(0.0, (-b - sq_disc) / dd);
    double t1 = std::min(1.0, (-b + sq_disc) / dd);
    return t1 > t0 ? (t1 - t0) * std::abs(d) : 0.0;
}

}  // namespace

Window Window::disk(cplx center, double radius) {
    if (!(radius > 0.0)) throw InvalidArgumentError("disk radius must be positive");
    return Window(Disk{center, radius});
}

Window Window::rect(cplx corner, double width, double height) {
    if (!(width > 0.0) || !(height > 0.0))
        throw InvalidArgumentError("rect sides must be positive");
    return Window(Rect{corner, width, height});
}

Window Window::polygon(std::vector<cplx> vertices) {
    if (vertices.size() < 3) throw InvalidArgumentError("polygon needs >= 3 vertices");
    double a = shoelace(vertices);
    if (!(a > 1e-14)) throw InvalidArgumentError("degenerate or clockwise polygon");
    return Window(Polygon{std::move(vertices)});
}

Window Window::cut(Window base, double theta, double l) {
    if (std::holds_alternative<Cut>(base.shape()))
        throw InvalidArgumentError("nested cut windows are not supported");
    return Window(Cut{std::make_shared<Window>(std::move(base)), theta, l});
}

CutState cut_state(const Cut& c) {
    // exact range of the cut coordinate over the base window
    double smin = 1e300, smax = -1e300;
    if (auto* d = std::get_if<Disk>(&c.base->shape())) {
        double sc = cut_coord(c, d->center);
        smin = sc - d->radius;
        smax = sc + d->radius;
    } else {
        for (cplx v : as_polygon_vertices(*c.base)) {
            double s = cut_coord(c, v);
            smin = std::min(smin, s);
            smax = std::max(smax, s);
        }
    }
    if (c.l >= smax) return CutState::full;
    if (c.l <= smin) return CutState::empty;
    return CutState::proper;
}

double area(const Window& w) {
    return std::visit(
        [](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Disk>) {
                return kPi * s.radius * s.radius;
            } else if constexpr (std::is_same_v<T, Rect>) {
                return s.width * s.height;
            } else if constexpr (std::is_same_v<T, Polygon>) {
                return shoelace(s.vertices);
            } else {
                if (auto* d = std::get_if<Disk>(&s.base->shape()))
                    return disk_cut_area(*d, s.l - cut_coord(s, d->center));
                auto clipped = clip_halfplane(as_polygon_vertices(*s.base), s.theta, s.l);
                return clipped.size() < 3 ? 0.0 : shoelace(clipped);
            }
        },
        w.shape());
}

double perimeter(const Window& w) {
    return std::visit(
        [](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Disk>) {
                return 2.0 * kPi * s.radius;
            } else if constexpr (std::is_same_v<T, Rect>) {
                return 2.0 * (s.width + s.height);
            } else if constexpr (std::is_same_v<T, Polygon>) {
                double p = 0.0;
                for (std::size_t i = 0; i < s.vertices.size(); ++i)
                    p += std::abs(s.vertices[(i + 1) % s.vertices.size()] - s.vertices[i]);
                return p;
            } else {
                double chord = 0.0;
                if (auto* d = std::get_if<Disk>(&s.base->shape())) {
                    double sd = s.l - cut_coord(s, d->center);
                    if (std::abs(sd) < d->radius)
                        chord = 2.0 * std::sqrt(d->radius * d->radius - sd * sd);
                } else {
                    for (auto [t0, t1] : line_intervals(as_polygon_vertices(*s.base), s.theta, s.l))
                        chord += t1 - t0;
                }
                return perimeter(*s.base) + chord;
            }
        },
        w.shape());
}

bool contains(const Window& w, cplx z) {
    return std::visit(
        [&](const auto& s) -> bool {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Disk>) {
                return std::abs(z - s.center) <= s.radius;
            } else if constexpr (std::is_same_v<T, Rect>) {
                return z.real() >= s.corner.real() && z.real() <= s.corner.real() + s.width &&
                       z.imag() >= s.corner.imag() && z.imag() <= s.corner.imag() + s.height;
            } else if constexpr (std::is_same_v<T, Polygon>) {
                // ray cast; boundary points count as inside within tolerance
                const auto& v = s.vertices;
                bool in = false;
                for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) {
                    if (point_segment_dist(z, {v[j], v[i]}) < 1e-12) return true;
                    if ((v[i].imag() > z.imag()) != (v[j].imag() > z.imag())) {
                        double x = v[j].real() + (z.imag() - v[j].imag()) /
                                                     (v[i].imag() - v[j].imag()) *
                                                     (v[i].real() - v[j].real());
                        if (z.real() < x) in = !in;
                    }
                }
                return in;
            } else {
                return cut_coord(s, z) <= s.l + 1e-12 && contains(*s.base, z);
            }
        },
        w.shape());
}

std::array<cplx, 2> bounding_box(const Window& w) {
    return std::visit(
        [](const auto& s) -> std::array<cplx, 2> {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Disk>) {
                cplx r(s.radius, s.radius);
                return {s.center - r, s.center + r};
            } else if constexpr (std::is_same_v<T, Rect>) {
                return {s.corner, s.corner + cplx(s.width, s.height)};
            } else if constexpr (std::is_same_v<T, Polygon>) {
                double x0 = 1e300, y0 = 1e300, x1 = -1e300, y1 = -1e300;
                for (cplx v : s.vertices) {
                    x0 = std::min(x0, v.real());
                    y0 = std::min(y0, v.imag());
                    x1 = std::max(x1, v.real());
                    y1 = std::max(y1, v.imag());
                }
                return {cplx(x0, y0), cplx(x1, y1)};
            } else {
                return bounding_box(*s.base);  // cut only shrinks the set
            }
        },
        w.shape());
}

double diameter(const Window& w) {
    auto [lo, hi] = bounding_box(w);
    return std::abs(hi - lo);
}

Window translated(const Window& w, cplx shift) {
    return std::visit(
        [&](const auto& s) -> Window {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Disk>) {
                return Window(Disk{s.center + shift, s.radius});
            } else if constexpr (std::is_same_v<T, Rect>) {
                return Window(Rect{s.corner + shift, s.width, s.height});
            } else if constexpr (std::is_same_v<T, Polygon>) {
                auto v = s.vertices;
                for (auto& z : v) z += shift;
                return Window(Polygon{std::move(v)});
            } else {
                double dl = std::real(shift * std::polar(1.0, -s.theta));
                return Window(Cut{std::make_shared<Window>(translated(*s.base, shift)), s.theta,
                                  s.l + dl});
            }
        },
        w.shape());
}

Window scaled(const Window& w, double factor) {
    if (!(factor > 0.0)) throw InvalidArgumentError("scale factor must be positive");
    return std::visit(
        [&](const auto& s) -> Window {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Disk>) {
                return Window(Disk{s.center * factor, s.radius * factor});
            } else if constexpr (std::is_same_v<T, Rect>) {
                return Window(Rect{s.corner * factor, s.width * factor, s.height * factor});
            } else if constexpr (std::is_same_v<T, Polygon>) {
                auto v = s.vertices;
                for (auto& z : v) z *= factor;
                return Window(Polygon{std::move(v)});
            } else {
                return Window(Cut{std::make_shared<Window>(scaled(*s.base, factor)), s.theta,
                                  s.l * factor});
            }
        },
        w.shape());
}

BoundarySet boundary_polyline(const Window& w, double max_spacing) {
    if (!(max_spacing > 0.0)) throw InvalidArgumentError("spacing must be positive");
    BoundarySet out;
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Disk>) {
                int n = std::max(8, static_cast<int>(std::ceil(2.0 * kPi * s.radius / max_spacing)));
                for (int i = 0; i < n; ++i) {
                    double a0 = 2.0 * kPi * i / n, a1 = 2.0 * kPi * (i + 1) / n;
                    out.push_back({s.center + std::polar(s.radius, a0),
                                   s.center + std::polar(s.radius, a1)});
                }
            } else if constexpr (std::is_same_v<T, Rect> || std::is_same_v<T, Polygon>) {
                auto v = as_polygon_vertices(Window(s));
                for (std::size_t i = 0; i < v.size(); ++i)
                    append_subdivided(out, v[i], v[(i + 1) % v.size()], max_spacing);
            } else {
                out = boundary_polyline(*s.base, max_spacing);
                const cplx u = std::polar(1.0, s.theta);
                const cplx v = u * cplx(0.0, 1.0);
                if (auto* d = std::get_if<Disk>(&s.base->shape())) {
                    double sd = s.l - cut_coord(s, d->center);
                    if (std::abs(sd) < d->radius) {
                        double half = std::sqrt(d->radius * d->radius - sd * sd);
                        cplx mid = d->center + sd * u;
                        append_subdivided(out, mid - half * v, mid + half * v, max_spacing);
                    }
                } else {
                    for (auto [t0, t1] :
                         line_intervals(as_polygon_vertices(*s.base), s.theta, s.l))
                        append_subdivided(out, s.l * u + t0 * v, s.l * u + t1 * v, max_spacing);
                }
            }
        },
        w.shape());
    return out;
}

double boundary_length(const BoundarySet& e) {
    double len = 0.0;
    for (const auto& s : e) len += std::abs(s[1] - s[0]);
    return len;
}

double regularity_kappa(const BoundarySet& e, double eta) {
    if (e.empty()) throw InvalidArgumentError("empty boundary set");
    if (!(eta > 0.0)) throw InvalidArgumentError("eta must be positive");
    double spacing = 0.0;
    std::vector<cplx> centers;
    centers.reserve(e.size());
    for (const auto& s : e) {
        spacing = std::max(spacing, std::abs(s[1] - s[0]));
        centers.push_back(s[0]);
    }
    // radii below a few sample spacings are not resolved by the polyline
    double r_min = std::min(eta, 5.0 * spacing);
    double kappa = 1e300;
    for (double r = eta; r >= r_min * 0.999; r /= 1.05) {
        for (cplx z : centers) {
            double h1 = 0.0;
            for (const auto& s : e) h1 += segment_in_ball(s, z, r);
            kappa = std::min(kappa, h1 / r);
        }
    }
    return kappa;
}

double parallel_area(const BoundarySet& e, double r) {
    if (!(r > 0.0)) throw InvalidArgumentError("r must be positive");
    double x0 = 1e300, y0 = 1e300, x1 = -1e300, y1 = -1e300;
    for (const auto& s : e)
        for (cplx z : s) {
            x0 = std::min(x0, z.real());
            y0 = std::min(y0, z.imag());
            x1 = std::max(x1, z.real());
            y1 = std::max(y1, z.imag());
        }
    x0 -= r; y0 -= r; x1 += r; y1 += r;
    double g = std::max(r / 15.0, std::sqrt((x1 - x0) * (y1 - y0) / 4e6));
    long nx = std::lround(std::ceil((x1 - x0) / g));
    long ny = std::lround(std::ceil((y1 - y0) / g));
    long count = 0;
    for (long i = 0; i < nx; ++i) {
        double x = x0 + (i + 0.5) * g;
        for (long j = 0; j < ny; ++j) {
            cplx z(x, y0 + (j + 0.5) * g);
            for (const auto& s : e) {
                if (point_segment_dist(z, s) <= r) {
                    ++count;
                    break;
                }
            }
        }
    }
    return count * g * g;
}

QuadratureGrid quadrature(const Window& w, double h, const QuadratureOptions& opt) {
    double cap_h = std::min(0.25, diameter(w) / 4.0);
    if (!(h > 0.0) || h > cap_h * (1.0 + 1e-12))
        throw InvalidArgumentError("quadrature spacing out of range");
    auto [lo, hi] = bounding_box(w);
    QuadratureGrid grid;
    grid.spacing = h;
    grid.weight = h * h / kPi;
    long nx = std::lround(std::ceil((hi.real() - lo.real()) / h));
    long ny = std::lround(std::ceil((hi.imag() - lo.imag()) / h));
    for (long i = 0; i < nx; ++i) {
        double x = lo.real() + (i + 0.5) * h;
        for (long j = 0; j < ny; ++j) {
            cplx z(x, lo.imag() + (j + 0.5) * h);
            if (contains(w, z)) {
                grid.nodes.push_back(z);
                if (grid.nodes.size() > opt.node_cap)
                    throw ResourceError("quadrature node cap exceeded");
            }
        }
    }
    return grid;
}

void to_json(json& j, const Window& w) {
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Disk>) {
                j = json{{"type", "disk"},
                         {"center", {s.center.real(), s.center.imag()}},
                         {"radius", s.radius}};
            } else if constexpr (std::is_same_v<T, Rect>) {
                j = json{{"type", "rect"},
                         {"corner", {s.corner.real(), s.corner.imag()}},
                         {"width", s.width},
                         {"height", s.height}};
            } else if constexpr (std::is_same_v<T, Polygon>) {
                json verts = json::array();
                for (cplx v : s.vertices) verts.push_back({v.real(), v.imag()});
                j = json{{"type", "polygon"}, {"vertices", verts}};
            } else {
                json base;
                to_json(base, *s.base);
                j = json{{"type", "cut"}, {"base", base}, {"theta", s.theta}, {"l", s.l}};
            }
        },
        w.shape());
}

void from_json(const json& j, Window& w) {
    const std::string type = j.at("type").get<std::string>();
    auto get_c = [](const json& a) { return cplx(a.at(0).get<double>(), a.at(1).get<double>()); };
    if (type == "disk") {
        w = Window::disk(get_c(j.at("center")), j.at("radius").get<double>());
    } else if (type == "rect") {
        w = Window::rect(get_c(j.at("corner")), j.at("width").get<double>(),
                         j.at("height").get<double>());
    } else if (type == "polygon") {
        std::vector<cplx> v;
        for (const auto& e : j.at("vertices")) v.push_back(get_c(e));
        w = Window::polygon(std::move(v));
    } else if (type == "cut") {
        Window base = j.at("base").get<Window>();
        w = Window::cut(std::move(base), j.at("theta").get<double>(), j.at("l").get<double>());
    } else {
        throw InvalidArgumentError("unknown window type: " + type);
    }
}

}  // namespace lab::geom
