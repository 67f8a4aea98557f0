#include "specfrac/weight.hpp"

#include "specfrac/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace specfrac {

namespace {

// Compensated accumulator; node counts reach 1e5 and the report
// tolerances sit near machine precision, so plain sums are not enough.
struct KahanSum {
    double sum = 0.0, c = 0.0;
    void add(double v) {
        const double y = v - c;
        const double t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
};

enum class Overlap { Outside, Inside, Straddle };

struct PanelBox {
    std::array<double, 3> lo{0, 0, 0}, hi{0, 0, 0};
};

Overlap classify_ball(const PanelBox& b, const BallRegion& ball, int dim) {
    double dmin2 = 0.0, dmax2 = 0.0;
    for (int d = 0; d < dim; ++d) {
        const std::size_t i = static_cast<std::size_t>(d);
        const double c = ball.center[i];
        const double lo = b.lo[i], hi = b.hi[i];
        const double dlo = lo - c, dhi = c - hi;
        const double near = std::max({0.0, dlo, dhi});
        const double far = std::max(std::abs(lo - c), std::abs(hi - c));
        dmin2 += near * near;
        dmax2 += far * far;
    }
    const double r2 = ball.radius * ball.radius;
    if (dmin2 >= r2) return Overlap::Outside;
    if (dmax2 <= r2) return Overlap::Inside;
    return Overlap::Straddle;
}

class NodeBuilder {
public:
    NodeBuilder(const Weight& w, const BoxDomain& domain, const QuadratureSpec& spec)
        : w_(w), domain_(domain), dim_(domain.dim) {
        gauss_legendre(spec.order, ref_x_, ref_w_);
        for (const auto& s : w.shapes())
            if (const auto* ball = std::get_if<BallRegion>(&s.region)) balls_.push_back(*ball);

        out_.dim = dim_;
        out_.boundary_resolved = !balls_.empty();

        // Per-dimension breakpoints: uniform panels plus box shape faces,
        // so axis-aligned discontinuities never cross a panel.
        std::array<std::vector<double>, 3> breaks;
        for (int d = 0; d < dim_; ++d) {
            const std::size_t i = static_cast<std::size_t>(d);
            const double l = domain.lengths[i];
            auto& bp = breaks[i];
            for (int p = 0; p <= spec.panels; ++p) bp.push_back(l * p / spec.panels);
            for (const auto& s : w.shapes())
                if (const auto* box = std::get_if<BoxRegion>(&s.region)) {
                    for (double v : {box->lo[i], box->hi[i]})
                        if (v > 0.0 && v < l) bp.push_back(v);
                }
            std::sort(bp.begin(), bp.end());
            const double tol = 1e-12 * l;
            bp.erase(std::unique(bp.begin(), bp.end(),
                                 [tol](double a, double b) { return std::abs(a - b) < tol; }),
                     bp.end());
        }

        std::array<std::size_t, 3> idx{0, 0, 0};
        emit_panels(breaks, idx, 0);
    }

    WeightedNodes take() { return std::move(out_); }

private:
    void emit_panels(const std::array<std::vector<double>, 3>& breaks,
                     std::array<std::size_t, 3>& idx, int d) {
        if (d == dim_) {
            PanelBox box;
            for (int dd = 0; dd < dim_; ++dd) {
                const std::size_t i = static_cast<std::size_t>(dd);
                box.lo[i] = breaks[i][idx[i]];
                box.hi[i] = breaks[i][idx[i] + 1];
            }
            emit_panel(box, 0);
            return;
        }
        const std::size_t i = static_cast<std::size_t>(d);
        for (idx[i] = 0; idx[i] + 1 < breaks[i].size(); ++idx[i]) emit_panels(breaks, idx, d + 1);
        idx[i] = 0;
    }

    void emit_panel(const PanelBox& box, int depth) {
        const BallRegion* straddle = nullptr;
        int straddle_count = 0;
        for (const auto& ball : balls_)
            if (classify_ball(box, ball, dim_) == Overlap::Straddle) {
                straddle = &ball;
                ++straddle_count;
            }

        if (straddle_count == 0) {
            emit_tensor(box);
            return;
        }

        double width = 0.0;
        for (int d = 0; d < dim_; ++d)
            width = std::max(width, box.hi[static_cast<std::size_t>(d)] - box.lo[static_cast<std::size_t>(d)]);

        if (straddle_count == 1 && width <= 0.5 * straddle->radius) {
            emit_cut(box, *straddle);
            return;
        }
        if (depth >= 24) {
            // Pathological overlap of several ball boundaries; sample as is.
            emit_tensor(box);
            return;
        }

        // Bisect every dimension and recurse.
        std::array<double, 3> mid{0, 0, 0};
        for (int d = 0; d < dim_; ++d) {
            const std::size_t i = static_cast<std::size_t>(d);
            mid[i] = 0.5 * (box.lo[i] + box.hi[i]);
        }
        const int children = 1 << dim_;
        for (int c = 0; c < children; ++c) {
            PanelBox child = box;
            for (int d = 0; d < dim_; ++d) {
                const std::size_t i = static_cast<std::size_t>(d);
                if (c & (1 << d))
                    child.lo[i] = mid[i];
                else
                    child.hi[i] = mid[i];
            }
            emit_panel(child, depth + 1);
        }
    }

    void push_node(const std::array<double, 3>& x, double w) {
        for (int d = 0; d < dim_; ++d) out_.coords.push_back(x[static_cast<std::size_t>(d)]);
        out_.weights.push_back(w);
        out_.m.push_back(eval_weight(w_, std::span<const double>(x.data(), static_cast<std::size_t>(dim_))));
    }

    void emit_tensor(const PanelBox& box) {
        std::array<std::vector<double>, 3> xs, ws;
        for (int d = 0; d < dim_; ++d) {
            const std::size_t i = static_cast<std::size_t>(d);
            map_gauss(box.lo[i], box.hi[i], xs[i], ws[i]);
        }
        std::array<double, 3> x{0, 0, 0};
        const std::size_t n = ref_x_.size();
        for (std::size_t a = 0; a < n; ++a) {
            x[0] = xs[0][a];
            if (dim_ == 1) {
                push_node(x, ws[0][a]);
                continue;
            }
            for (std::size_t b = 0; b < n; ++b) {
                x[1] = xs[1][b];
                const double wab = ws[0][a] * ws[1][b];
                if (dim_ == 2) {
                    push_node(x, wab);
                    continue;
                }
                for (std::size_t c = 0; c < n; ++c) {
                    x[2] = xs[2][c];
                    push_node(x, wab * ws[2][c]);
                }
            }
        }
    }

    // Panel crossed by a single ball boundary, small enough that the
    // boundary is a graph over the most transverse axis. Each quadrature
    // line along that axis is split exactly at the circle crossing.
    void emit_cut(const PanelBox& box, const BallRegion& ball) {
        int axis = 0;
        double best = -1.0;
        for (int d = 0; d < dim_; ++d) {
            const std::size_t i = static_cast<std::size_t>(d);
            const double dist = std::abs(0.5 * (box.lo[i] + box.hi[i]) - ball.center[i]);
            if (dist > best) {
                best = dist;
                axis = d;
            }
        }

        std::vector<int> outer;
        for (int d = 0; d < dim_; ++d)
            if (d != axis) outer.push_back(d);

        const std::size_t iaxis = static_cast<std::size_t>(axis);
        std::array<std::vector<double>, 2> ox, ow;
        if (dim_ == 2) {
            // In the plane the outer integrand kinks where a crossing
            // leaves the panel and has sqrt behavior at tangency; split
            // there so each outer piece is smooth.
            const std::size_t io = static_cast<std::size_t>(outer[0]);
            split_outer(box.lo[io], box.hi[io], ball.center[io], ball.radius, box.lo[iaxis],
                        box.hi[iaxis], ball.center[iaxis], ox[0], ow[0]);
        } else {
            for (std::size_t j = 0; j < outer.size(); ++j) {
                const std::size_t i = static_cast<std::size_t>(outer[j]);
                map_gauss(box.lo[i], box.hi[i], ox[j], ow[j]);
            }
        }

        const std::size_t ia = iaxis;
        const double lo = box.lo[ia], hi = box.hi[ia];
        const double span = hi - lo;
        const double r2 = ball.radius * ball.radius;

        std::array<double, 3> x{0, 0, 0};
        const std::size_t n_outer = outer.empty() ? 1 : ox[0].size();
        const std::size_t n_outer2 = outer.size() < 2 ? 1 : ox[1].size();

        std::vector<double> cuts, sx, sw;
        for (std::size_t a = 0; a < n_outer; ++a) {
            for (std::size_t b = 0; b < n_outer2; ++b) {
                double wo = 1.0;
                double rem = r2;
                if (!outer.empty()) {
                    const std::size_t i = static_cast<std::size_t>(outer[0]);
                    x[i] = ox[0][a];
                    wo *= ow[0][a];
                    const double dx = x[i] - ball.center[i];
                    rem -= dx * dx;
                }
                if (outer.size() > 1) {
                    const std::size_t i = static_cast<std::size_t>(outer[1]);
                    x[i] = ox[1][b];
                    wo *= ow[1][b];
                    const double dx = x[i] - ball.center[i];
                    rem -= dx * dx;
                }

                cuts.clear();
                cuts.push_back(lo);
                if (rem > 0.0) {
                    const double root = std::sqrt(rem);
                    for (double cut : {ball.center[ia] - root, ball.center[ia] + root})
                        if (cut > lo + 1e-14 * span && cut < hi - 1e-14 * span) cuts.push_back(cut);
                }
                cuts.push_back(hi);
                std::sort(cuts.begin(), cuts.end());

                for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
                    if (cuts[s + 1] - cuts[s] <= 1e-15 * span) continue;
                    map_gauss(cuts[s], cuts[s + 1], sx, sw);
                    for (std::size_t t = 0; t < sx.size(); ++t) {
                        x[ia] = sx[t];
                        push_node(x, wo * sw[t]);
                    }
                }
            }
        }
    }

    void map_gauss(double lo, double hi, std::vector<double>& xs, std::vector<double>& ws) const {
        const double h = 0.5 * (hi - lo);
        const double c = 0.5 * (hi + lo);
        xs.resize(ref_x_.size());
        ws.resize(ref_x_.size());
        for (std::size_t i = 0; i < ref_x_.size(); ++i) {
            xs[i] = c + h * ref_x_[i];
            ws[i] = h * ref_w_[i];
        }
    }

    // Gauss nodes under y = from + (to-from) t^2: the Jacobian factor t
    // absorbs a sqrt(y-from) endpoint singularity exactly.
    void map_gauss_graded(double from, double to, std::vector<double>& xs,
                          std::vector<double>& ws) const {
        const double d = to - from;
        xs.resize(ref_x_.size());
        ws.resize(ref_x_.size());
        for (std::size_t i = 0; i < ref_x_.size(); ++i) {
            const double t = 0.5 * (1.0 + ref_x_[i]);
            xs[i] = from + d * t * t;
            ws[i] = std::abs(d) * t * ref_w_[i];
        }
    }

    // Outer-axis rule for a cut panel: piecewise Gauss split at circle
    // tangency (c +- r) and at the points where a crossing enters or
    // leaves the inner extent [alo, ahi], graded toward tangency.
    void split_outer(double olo, double ohi, double co, double r, double alo, double ahi,
                     double ca, std::vector<double>& xs, std::vector<double>& ws) const {
        const double span = ohi - olo;
        const double tan_lo = co - r, tan_hi = co + r;
        std::vector<double> brk{olo, ohi};
        auto add = [&](double y) {
            if (y > olo + 1e-12 * span && y < ohi - 1e-12 * span) brk.push_back(y);
        };
        add(tan_lo);
        add(tan_hi);
        for (double edge : {alo, ahi}) {
            const double rem = r * r - (edge - ca) * (edge - ca);
            if (rem > 0.0) {
                const double q = std::sqrt(rem);
                add(co - q);
                add(co + q);
            }
        }
        std::sort(brk.begin(), brk.end());

        xs.clear();
        ws.clear();
        std::vector<double> gx, gw;
        auto near_tangency = [&](double y) {
            return std::abs(y - tan_lo) <= 1e-10 * r || std::abs(y - tan_hi) <= 1e-10 * r;
        };
        for (std::size_t i = 0; i + 1 < brk.size(); ++i) {
            const double y0 = brk[i], y1 = brk[i + 1];
            if (y1 - y0 <= 1e-12 * span) continue;
            if (near_tangency(y0))
                map_gauss_graded(y0, y1, gx, gw);
            else if (near_tangency(y1))
                map_gauss_graded(y1, y0, gx, gw);
            else
                map_gauss(y0, y1, gx, gw);
            xs.insert(xs.end(), gx.begin(), gx.end());
            ws.insert(ws.end(), gw.begin(), gw.end());
        }
        if (xs.empty()) map_gauss(olo, ohi, xs, ws);
    }

    const Weight& w_;
    const BoxDomain& domain_;
    int dim_;
    std::vector<double> ref_x_, ref_w_;
    std::vector<BallRegion> balls_;
    WeightedNodes out_;
};

} // namespace

Weight Weight::sampled(std::shared_ptr<const QuadratureGrid> grid, std::vector<double> values) {
    if (!grid) throw std::invalid_argument("Weight::sampled: null grid");
    if (values.size() != grid->size())
        throw std::invalid_argument("Weight::sampled: value count does not match grid size");
    Weight w;
    w.grid_ = std::move(grid);
    w.values_ = std::move(values);
    return w;
}

Weight& Weight::add_ball(std::span<const double> center, double radius, double value) {
    if (is_sampled()) throw std::invalid_argument("Weight: cannot add shapes to a sampled weight");
    if (center.empty() || center.size() > 3)
        throw std::invalid_argument("Weight::add_ball: center dimension must be 1..3");
    if (!(radius > 0.0)) throw std::invalid_argument("Weight::add_ball: radius must be positive");
    BallRegion b;
    for (std::size_t i = 0; i < center.size(); ++i) b.center[i] = center[i];
    b.radius = radius;
    shapes_.push_back(Shape{b, value});
    return *this;
}

Weight& Weight::add_box(std::span<const double> lo, std::span<const double> hi, double value) {
    if (is_sampled()) throw std::invalid_argument("Weight: cannot add shapes to a sampled weight");
    if (lo.size() != hi.size() || lo.empty() || lo.size() > 3)
        throw std::invalid_argument("Weight::add_box: corner dimensions must match and be 1..3");
    BoxRegion b;
    for (std::size_t i = 0; i < lo.size(); ++i) {
        if (!(lo[i] < hi[i]))
            throw std::invalid_argument("Weight::add_box: need lo < hi in every dimension");
        b.lo[i] = lo[i];
        b.hi[i] = hi[i];
    }
    shapes_.push_back(Shape{b, value});
    return *this;
}

double eval_weight(const Weight& w, std::span<const double> x) {
    if (w.is_sampled()) return w.values()[w.grid()->nearest(x)];

    for (auto it = w.shapes().rbegin(); it != w.shapes().rend(); ++it) {
        if (const auto* ball = std::get_if<BallRegion>(&it->region)) {
            double d2 = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) {
                const double dx = x[i] - ball->center[i];
                d2 += dx * dx;
            }
            if (d2 < ball->radius * ball->radius) return it->value;
        } else {
            const auto& box = std::get<BoxRegion>(it->region);
            bool inside = true;
            for (std::size_t i = 0; i < x.size() && inside; ++i)
                inside = box.lo[i] <= x[i] && x[i] <= box.hi[i];
            if (inside) return it->value;
        }
    }
    return w.background();
}

WeightedNodes build_weighted_nodes(const Weight& w, const BoxDomain& domain,
                                   const QuadratureSpec& spec) {
    if (w.is_sampled()) {
        const auto& grid = *w.grid();
        if (grid.domain().dim != domain.dim)
            throw std::invalid_argument("build_weighted_nodes: sampled grid dimension mismatch");
        for (int d = 0; d < domain.dim; ++d)
            if (std::abs(grid.domain().lengths[static_cast<std::size_t>(d)] -
                         domain.lengths[static_cast<std::size_t>(d)]) >
                1e-12 * domain.lengths[static_cast<std::size_t>(d)])
                throw std::invalid_argument("build_weighted_nodes: sampled grid domain mismatch");

        WeightedNodes out;
        out.dim = domain.dim;
        out.boundary_resolved = false;
        const std::size_t q_total = grid.size();
        out.coords.reserve(q_total * static_cast<std::size_t>(domain.dim));
        out.weights.reserve(q_total);
        for (std::size_t q = 0; q < q_total; ++q) {
            const auto x = grid.node(q);
            for (int d = 0; d < domain.dim; ++d) out.coords.push_back(x[static_cast<std::size_t>(d)]);
            out.weights.push_back(grid.weight(q));
        }
        out.m = w.values();
        return out;
    }

    if (spec.panels < 1 || spec.order < 1)
        throw std::invalid_argument("build_weighted_nodes: invalid quadrature spec");
    NodeBuilder builder(w, domain, spec);
    return builder.take();
}

WeightReport analyze_weight(const Weight& w, const BoxDomain& domain, const QuadratureSpec& spec,
                            const BallCertificate* certificate) {
    const WeightedNodes nodes = build_weighted_nodes(w, domain, spec);

    WeightReport rep;
    KahanSum integral, positive, l2;
    double sup = nodes.m.empty() ? 0.0 : nodes.m[0];
    double inf = sup;
    for (std::size_t q = 0; q < nodes.size(); ++q) {
        const double m = nodes.m[q];
        const double wq = nodes.weights[q];
        integral.add(wq * m);
        if (m > 0.0) positive.add(wq * m);
        l2.add(wq * m * m);
        sup = std::max(sup, m);
        inf = std::min(inf, m);
    }

    const double volume = domain.volume();
    rep.integral = integral.sum;
    rep.average = integral.sum / volume;
    rep.sup = sup;
    rep.inf = inf;
    rep.positive_mass = positive.sum;
    rep.l2_sq = l2.sum;

    const double scale = std::max(std::abs(sup), std::abs(inf));
    const double tol = 1e-10 * volume * scale;
    rep.in_class_M = rep.integral < -tol && rep.positive_mass > tol;

    if (certificate) {
        verify_certificate(nodes, domain, *certificate);
        rep.certificate = *certificate;
    }
    return rep;
}

void verify_certificate(const WeightedNodes& nodes, const BoxDomain& domain,
                        const BallCertificate& cert) {
    if (!(cert.radius > 0.0) || !(cert.delta > 0.0) || !(cert.bound > 0.0))
        throw CertificateRejected("certificate: radius, delta and bound must be positive");

    for (int d = 0; d < domain.dim; ++d) {
        const std::size_t i = static_cast<std::size_t>(d);
        const double l = domain.lengths[i];
        const double slack = 1e-12 * l;
        if (cert.center[i] - cert.radius < -slack || cert.center[i] + cert.radius > l + slack)
            throw CertificateRejected("certificate: ball does not fit inside the domain");
    }

    const double tol = 1e-12 * std::max({1.0, cert.delta, cert.bound});
    const double r2 = cert.radius * cert.radius * (1.0 - 1e-12);
    for (std::size_t q = 0; q < nodes.size(); ++q) {
        const double m = nodes.m[q];
        if (m < -cert.bound - tol)
            throw CertificateRejected("certificate: weight drops below -bound at a sample node");
        const auto x = nodes.point(q);
        double d2 = 0.0;
        for (int d = 0; d < nodes.dim; ++d) {
            const double dx = x[static_cast<std::size_t>(d)] - cert.center[static_cast<std::size_t>(d)];
            d2 += dx * dx;
        }
        if (d2 < r2 && m < cert.delta - tol)
            throw CertificateRejected("certificate: weight drops below delta inside the ball");
    }
}

} // namespace specfrac
