#include "m3s/report.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "m3s/cone.hpp"
#include "m3s/errors.hpp"
#include "m3s/exterior.hpp"
#include "m3s/rng.hpp"
#include "m3s/structures.hpp"
#include "m3s/symmetry.hpp"

namespace m3s {

namespace {

struct Acc {
    double mx = 0.0;
    double mn = std::numeric_limits<double>::infinity();
    double sum = 0.0;
    long cnt = 0;
    void add(double v) {
        v = std::abs(v);
        mx = std::max(mx, v);
        mn = std::min(mn, v);
        sum += v;
        ++cnt;
    }
    double maxv() const { return cnt ? mx : 0.0; }
    double minv() const { return cnt ? mn : 0.0; }
    double meanv() const { return cnt ? sum / static_cast<double>(cnt) : 0.0; }
};

struct Ctx {
    const SuiteConfig& cfg;
    SphereMixedSystem& sys;
    std::vector<Vec> points;
    DiffParams dp;
    double scale;
    std::vector<CheckResult>* out;

    const Hypersurface& m() const { return sys.surface(); }
    std::uint64_t seed_for(const std::string& tag) const { return mix_seed(cfg.seed, tag); }
};

std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(9) << v;
    return os.str();
}

std::string sa(int a) { return ".a" + std::to_string(a + 1); }

void emit(Ctx& c, const std::string& id, const std::string& anchor, const Acc& acc,
          double base_tol, std::string notes = "") {
    CheckResult r;
    r.check_id = id;
    r.paper_anchor = anchor;
    r.n = c.cfg.n;
    r.samples = c.cfg.samples;
    r.max_residual = acc.maxv();
    r.mean_residual = acc.meanv();
    r.tolerance = base_tol * c.scale;
    r.status = r.max_residual <= r.tolerance ? "pass" : "fail";
    r.notes = std::move(notes);
    c.out->push_back(std::move(r));
}

// measured-but-not-asserted quantity; never flips the exit code
void emit_reported(Ctx& c, const std::string& id, const std::string& anchor, const Acc& acc,
                   std::string notes) {
    CheckResult r;
    r.check_id = id;
    r.paper_anchor = anchor;
    r.n = c.cfg.n;
    r.samples = c.cfg.samples;
    r.max_residual = acc.maxv();
    r.mean_residual = acc.meanv();
    r.tolerance = 0.0;
    r.status = "reported";
    r.notes = std::move(notes);
    c.out->push_back(std::move(r));
}

// negative control: the claim is existential (the identity visibly breaks
// somewhere), so the defect is the shortfall of the strongest observed
// violation below the floor
void emit_control(Ctx& c, const std::string& id, const std::string& anchor, const Acc& measured,
                  double floor, const std::string& what) {
    Acc defect;
    defect.add(std::max(0.0, floor - measured.maxv()));
    emit(c, id, anchor, defect, 0.0,
         what + "; floor " + fmt(floor) + ", measured in [" + fmt(measured.minv()) + ", " +
             fmt(measured.maxv()) + "]");
}

Vec random_ambient(Rng& rng, int dim) {
    Vec v(dim);
    for (int i = 0; i < dim; ++i) v[i] = rng.sym();
    return v;
}

Vec random_tangent(const Hypersurface& m, const Vec& p, Rng& rng) {
    return m.project_tangent(p, random_ambient(rng, m.space().dim));
}

Vec random_tangent_causal(const Hypersurface& m, const Vec& p, Rng& rng, bool spacelike) {
    for (int tries = 0; tries < 1000; ++tries) {
        const Vec v = random_tangent(m, p, rng);
        const double s = m.metric(v, v);
        if (spacelike ? s > 0.1 : s < -0.1) return v;
    }
    throw SamplingExhausted("causal velocity draw: rejection cap reached");
}

double frame_gram_residual(const Hypersurface& m, const Frame& f) {
    double worst = 0.0;
    for (std::size_t i = 0; i < f.vectors.size(); ++i)
        for (std::size_t j = 0; j < f.vectors.size(); ++j) {
            const double want = i == j ? f.signs[i] : 0.0;
            worst = std::max(worst, std::abs(m.metric(f.vectors[i], f.vectors[j]) - want));
        }
    return worst;
}

bool signature_ok(const Frame& f, int n) {
    int plus = 0, minus = 0;
    for (double s : f.signs) (s > 0.0 ? plus : minus) += 1;
    return plus == 2 * n + 1 && minus == 2 * n + 2;
}

// direction/argument enumeration: the exhaustive mode contracts low arities
// against the full frame instead of sampling
template <typename Fn>
void each_direction_tuple(Ctx& c, const Frame& f, const Vec& p, Rng& rng, int arity, Fn&& fn) {
    if (c.cfg.exhaustive && arity <= 3) {
        const int d = static_cast<int>(f.vectors.size());
        for (const Vec& x : f.vectors) {
            std::vector<int> t(static_cast<std::size_t>(arity));
            for (int i = 0; i < arity; ++i) t[static_cast<std::size_t>(i)] = i;
            bool more = true;
            while (more) {
                std::vector<Vec> args;
                args.reserve(t.size());
                for (int i : t) args.push_back(f.vectors[static_cast<std::size_t>(i)]);
                fn(x, args);
                more = arity > 0 && next_increasing_tuple(d, t);
            }
        }
        return;
    }
    for (int k = 0; k < c.cfg.probes; ++k) {
        std::vector<Vec> args;
        args.reserve(static_cast<std::size_t>(arity));
        for (int i = 0; i < arity; ++i) args.push_back(random_tangent(c.m(), p, rng));
        fn(random_tangent(c.m(), p, rng), args);
    }
}

void suite_axioms(Ctx& c) {
    auto& sys = c.sys;
    const Hypersurface& m = c.m();
    {
        Acc a;
        for (const auto& chk : check_para_hypercomplex(m.space(), sys.ambient_triple()))
            a.add(static_cast<double>(chk.residual));
        emit(c, "axioms.ambient_algebra", "ex:3", a, 0.0,
             "exact integer residuals of the ambient operator relations");
    }
    {
        Acc a;
        std::string worst_rel;
        double worst = -1.0;
        Rng rng(c.seed_for("axioms.definition1"));
        for (const Vec& p : c.points) {
            std::vector<Vec> probes;
            for (int k = 0; k < c.cfg.probes; ++k) probes.push_back(random_tangent(m, p, rng));
            for (const auto& [label, r] : definition1_residuals(sys, p, probes)) {
                a.add(r);
                if (r > worst) {
                    worst = r;
                    worst_rel = label;
                }
            }
        }
        emit(c, "axioms.definition1", "def:1", a, 1e-9, "worst relation: " + worst_rel);
    }
    for (int al = 0; al < 3; ++al) {
        Acc a;
        Rng rng(c.seed_for("axioms.compatibility" + sa(al)));
        for (const Vec& p : c.points)
            for (int k = 0; k < c.cfg.probes; ++k)
                a.add(metric_compat_residual(sys, al, p, random_tangent(m, p, rng),
                                             random_tangent(m, p, rng)));
        emit(c, "axioms.compatibility" + sa(al), "eq:11", a, 1e-9);
    }
    for (int al = 0; al < 3; ++al) {
        Acc a;
        Rng rng(c.seed_for("axioms.nabla_xi" + sa(al)));
        for (const Vec& p : c.points)
            for (int k = 0; k < c.cfg.probes / 2 + 1; ++k) {
                const Vec x = random_tangent(m, p, rng);
                a.add((m.covariant_derivative(sys.xi_field(al), p, x, c.dp) + sys.phi(al, p, x))
                          .norm());
            }
        emit(c, "axioms.nabla_xi" + sa(al), "ex:4", a, 1e-6, "nabla_X xi_a = -phi_a X");
    }
    for (int al = 0; al < 3; ++al) {
        Acc plus, minus;
        Rng rng(c.seed_for("axioms.structure_eq" + sa(al)));
        for (const Vec& p : c.points)
            for (int k = 0; k < c.cfg.probes / 2 + 1; ++k) {
                const auto [rp, rm] = structure_equation_residuals(
                    sys, al, p, random_tangent(m, p, rng), random_tangent(m, p, rng), c.dp);
                plus.add(rp);
                minus.add(rm);
            }
        const char* anchor = al == 0 ? "eq:12" : "eq:13-14";
        emit(c, "axioms.structure_eq.plus" + sa(al), anchor, plus, 1e-6,
             "(nabla_X phi_a) Y = g(X,Y) xi_a - eta_a(Y) X");
        if (al > 0)
            emit_reported(c, "axioms.structure_eq.branch" + sa(al), anchor, minus,
                          "residual against the anchored right-hand side, which is the eps_a "
                          "multiple of the branch that holds; the measured derivative follows "
                          "the plus branch for every a");
    }
    for (int al = 0; al < 3; ++al) {
        Acc a, two;
        const AlternatingForm de = d_eta_matrix(sys, al);
        Rng rng(c.seed_for("axioms.normality" + sa(al)));
        for (const Vec& p : c.points) {
            const Vec xi = sys.xi(al, p);
            for (int k = 0; k < c.cfg.probes / 4 + 1; ++k) {
                const Vec x = random_tangent(m, p, rng), y = random_tangent(m, p, rng);
                const Vec nij = nijenhuis(sys, al, p, x, y, c.dp);
                const std::vector<Vec> args{x, y};
                const double dxy = de.eval(args);
                a.add((nij + dxy * xi).norm());
                two.add((nij + 2.0 * dxy * xi).norm());
            }
        }
        emit(c, "axioms.normality" + sa(al), "sec:3-nijenhuis", a, 1e-6,
             "N_phi + d eta_a (x) xi_a = 0 under the determinant convention for d");
        if (al == 0)
            emit_reported(c, "axioms.normality_convention", "sec:3-nijenhuis", two,
                          "residual of N_phi + 2 d eta (x) xi; the anchored factor 2 belongs to "
                          "the alternate d convention carrying 1/2, under which both statements "
                          "coincide");
    }
    for (int al = 0; al < 3; ++al) {
        Acc a;
        const AlternatingForm de = d_eta_matrix(sys, al);
        Rng rng(c.seed_for("axioms.omega_ratio" + sa(al)));
        for (const Vec& p : c.points)
            for (int k = 0; k < c.cfg.probes / 2 + 1; ++k) {
                const Vec x = random_tangent(m, p, rng), y = random_tangent(m, p, rng);
                const std::vector<Vec> args{x, y};
                a.add(fundamental_two_form(sys, al, p, x, y) + 0.5 * de.eval(args));
            }
        emit_reported(c, "axioms.omega_ratio" + sa(al), "sec:3-nijenhuis", a,
                      "measured proportionality Omega_a = -(1/2) d eta_a on tangent probes");
    }
    {
        Acc a;
        bool counts = true;
        for (const Vec& p : c.points) {
            const Frame f = build_structured_frame(sys, p, c.seed_for("axioms.frame.structured"));
            a.add(frame_gram_residual(m, f));
            counts = counts && signature_ok(f, c.cfg.n);
        }
        if (!counts) a.add(1.0);
        emit(c, "axioms.frame.structured", "ex:4", a, 1e-9,
             counts ? "orbits {E, phi_1 E, phi_2 E, phi_3 E} then {xi}; signature (2n+1, 2n+2)"
                    : "sign multiset mismatch");
    }
    {
        Acc a;
        bool counts = true;
        for (const Vec& p : c.points) {
            const Frame f = m.build_frame(p, c.seed_for("axioms.frame.unstructured"));
            a.add(frame_gram_residual(m, f));
            counts = counts && signature_ok(f, c.cfg.n);
        }
        if (!counts) a.add(1.0);
        emit(c, "axioms.frame.unstructured", "ex:4", a, 1e-9,
             counts ? "greedy pivoted Gram-Schmidt; signature (2n+1, 2n+2)"
                    : "sign multiset mismatch");
    }
    {
        Acc a;
        Rng rng(c.seed_for("axioms.antipodal"));
        for (const Vec& p : c.points) {
            const Vec q = -p;
            const Vec x = random_tangent(m, p, rng), y = random_tangent(m, p, rng);
            for (int al = 0; al < 3; ++al) {
                a.add(metric_compat_residual(sys, al, p, x, y) -
                      metric_compat_residual(sys, al, q, x, y));
                a.add((sys.xi(al, q) + sys.xi(al, p)).norm());
            }
        }
        emit(c, "axioms.antipodal", "ex:5", a, 1e-9,
             "residuals agree at p and -p; xi_a(-p) = -xi_a(p), so the structure descends to "
             "the antipodal quotient");
    }
}

void suite_einstein(Ctx& c) {
    auto& sys = c.sys;
    const Hypersurface& m = c.m();
    const double lambda = 4.0 * c.cfg.n + 2.0;
    Rng rng(c.seed_for("einstein"));
    Acc ric, sym, scal, dual, sec_xi, sec_gen;
    std::array<Acc, 3> rxi;
    const int planes_per_point = std::max(1, (50 + c.cfg.samples - 1) / c.cfg.samples);
    for (const Vec& p : c.points) {
        const Frame f = m.build_frame(p, c.seed_for("einstein.frame"));
        for (int k = 0; k < c.cfg.probes; ++k) {
            const Vec x = random_tangent(m, p, rng), y = random_tangent(m, p, rng);
            const double rxy = m.ricci(f, p, x, y, c.dp);
            ric.add(rxy - lambda * m.metric(x, y));
            if (k < 5) sym.add(rxy - m.ricci(f, p, y, x, c.dp));
        }
        scal.add(m.scalar_curvature(f, p, c.dp) - lambda * (4.0 * c.cfg.n + 3.0));
        for (int k = 0; k < std::max(1, c.cfg.probes / 4); ++k) {
            // unit Euclidean probes: the nested path amplifies step noise with
            // the cube of the probe size
            const Vec x = random_tangent(m, p, rng).normalized(),
                      y = random_tangent(m, p, rng).normalized(),
                      z = random_tangent(m, p, rng).normalized();
            dual.add(
                (m.curvature(p, x, y, z, c.dp) - m.curvature_via_derivatives(p, x, y, z, c.dp))
                    .norm());
        }
        for (int al = 0; al < 3; ++al) {
            const Vec xi = sys.xi(al, p);
            for (int k = 0; k < 3; ++k) {
                const Vec x = random_tangent(m, p, rng), y = random_tangent(m, p, rng);
                rxi[static_cast<std::size_t>(al)].add(
                    (m.curvature(p, x, xi, y, c.dp) - (m.metric(xi, y) * x - m.metric(x, y) * xi))
                        .norm());
            }
        }
        for (int k = 0; k < planes_per_point; ++k) {
            for (int tries = 0; tries < 100; ++tries) {
                try {
                    sec_xi.add(m.sectional_curvature(p, sys.xi(k % 3, p),
                                                     random_tangent(m, p, rng), c.dp) -
                               1.0);
                    break;
                } catch (const DegeneratePlane&) {
                }
            }
            for (int tries = 0; tries < 100; ++tries) {
                try {
                    sec_gen.add(m.sectional_curvature(p, random_tangent(m, p, rng),
                                                      random_tangent(m, p, rng), c.dp) -
                                1.0);
                    break;
                } catch (const DegeneratePlane&) {
                }
            }
        }
    }
    emit(c, "einstein.ricci", "thm:einstein", ric, 1e-6, "Ric = (4n+2) g");
    emit(c, "einstein.ricci_symmetry", "thm:einstein", sym, 1e-8);
    emit(c, "einstein.scalar", "thm:einstein", scal, 1e-6, "scal = (4n+2)(4n+3)");
    emit(c, "einstein.curvature_dual_path", "thm:4.1", dual, 1e-4,
         "Gauss-equation path against the nested-derivative path; both sides are "
         "finite-difference, so the budget is noise-dominated");
    for (int al = 0; al < 3; ++al)
        emit(c, "einstein.curvature_xi" + sa(al), "thm:4.1", rxi[static_cast<std::size_t>(al)],
             1e-6, "R(X, xi_a) Y = g(xi_a, Y) X - g(X, Y) xi_a");
    emit(c, "einstein.sectional_xi_planes", "thm:4.1", sec_xi, 1e-6,
         "K = 1 on planes containing a xi_a");
    emit(c, "einstein.sectional_generic", "thm:4.1", sec_gen, 1e-6,
         "K = 1 on generic non-degenerate planes");
    {
        const Vec& p = c.points.front();
        const Vec x = sys.xi(0, p) + sys.xi(1, p);  // lightlike
        const Vec y = sys.xi(2, p);                 // orthogonal to x
        Acc a;
        bool threw = false, finite = true;
        try {
            finite = std::isfinite(m.sectional_curvature(p, x, y, c.dp));
        } catch (const DegeneratePlane&) {
            threw = true;
        }
        a.add(threw && finite ? 0.0 : 1.0);
        emit(c, "einstein.sectional_degenerate_guard", "thm:4.1", a, 0.0,
             threw ? "DegeneratePlane raised for the null-spanned plane; no NaN escapes"
                   : "expected DegeneratePlane was not raised");
    }
}

void suite_killing(Ctx& c) {
    auto& sys = c.sys;
    const Hypersurface& m = c.m();
    for (int al = 0; al < 3; ++al) {
        Acc a;
        Rng rng(c.seed_for("killing.xi" + sa(al)));
        for (const Vec& p : c.points)
            for (int k = 0; k < c.cfg.probes / 2 + 1; ++k)
                a.add(killing_residual(m, sys.xi_field(al), p, random_tangent(m, p, rng),
                                       random_tangent(m, p, rng), c.dp));
        emit(c, "killing.xi" + sa(al), "cor:4.2", a, 1e-8);
    }
    for (const auto& [other, tag] : {std::pair{1, std::string("c12")}, {2, std::string("c13")}}) {
        Acc kr, nr;
        const int o = other;
        const VectorField f = [&sys, o](const Vec& q) { return Vec(sys.xi(0, q) + sys.xi(o, q)); };
        Rng rng(c.seed_for("killing.lightlike." + tag));
        for (const Vec& p : c.points) {
            const Vec v = f(p);
            nr.add(m.metric(v, v));
            for (int k = 0; k < 3; ++k)
                kr.add(killing_residual(m, f, p, random_tangent(m, p, rng),
                                        random_tangent(m, p, rng), c.dp));
        }
        emit(c, "killing.lightlike." + tag, "sec:4-lightlike", kr, 1e-8,
             "xi_1 + xi_" + std::to_string(o + 1) + " is a lightlike Killing field");
        emit(c, "killing.lightlike_norm." + tag, "sec:4-lightlike", nr, 1e-12,
             "g(v, v) = eps_1 + eps_" + std::to_string(o + 1) + " = 0");
    }
    {
        Acc measured;
        Rng rng(c.seed_for("killing.negative_control"));
        for (const Vec& p : c.points) {
            Vec w;
            for (int tries = 0;; ++tries) {
                if (tries >= 1000) throw SamplingExhausted("killing control: w draw");
                w = random_ambient(rng, m.space().dim);
                if (std::abs(m.metric(w, p)) > 0.3) break;
            }
            Vec y;
            for (int tries = 0;; ++tries) {
                if (tries >= 1000) throw SamplingExhausted("killing control: probe draw");
                y = random_tangent(m, p, rng);
                if (std::abs(m.metric(y, y)) > 0.3) break;
            }
            measured.add(killing_residual(m, m.extend_canonical(w), p, y, y, c.dp));
        }
        emit_control(c, "killing.negative_control", "eq:1", measured, 1e-2,
                     "canonical extension of a non-tangent vector is conformal but not Killing; "
                     "draws are rejected until |<w,p>| and |g(Y,Y)| exceed 0.3");
    }
    for (int al = 0; al < 3; ++al) {
        Acc a;
        Rng rng(c.seed_for("killing.conformal_mechanism" + sa(al)));
        for (const Vec& p : c.points)
            for (int k = 0; k < c.cfg.probes; ++k) {
                const Vec v = random_tangent(m, p, rng);
                a.add(lie_metric_xi_check(sys, m.extend_canonical(v), p, al, c.dp));
            }
        emit(c, "killing.conformal_mechanism" + sa(al), "thm:conformal-killing", a, 1e-6,
             "(L_X g)(xi_a, xi_a) = 0 for canonical extensions of tangent vectors");
    }
    {
        Acc dev;
        Rng rng(c.seed_for("killing.conformal_mechanism_offsurface"));
        for (const Vec& p : c.points) {
            const Vec w = random_ambient(rng, m.space().dim);
            for (int al = 0; al < 3; ++al) {
                const double got = lie_metric_xi_check(sys, m.extend_canonical(w), p, al, c.dp);
                dev.add(got - 2.0 * std::abs(m.metric(w, p)));
            }
        }
        emit_reported(c, "killing.conformal_mechanism_offsurface", "thm:conformal-killing", dev,
                      "for non-tangent w the extension gives (L_X g)(xi_a, xi_a) = -2<w,p> eps_a "
                      "rather than 0; shown is the deviation from that closed form");
    }
    {
        Acc a;
        for (const Vec& p : c.points)
            a.add(killing_tensor_residual(m, metric_tensor_field(m), p,
                                          m.build_frame(p, c.seed_for("killing.tensor.frame")),
                                          c.dp));
        emit(c, "killing.tensor.metric", "sec:2-assoc", a, 1e-8, "rho = g is parallel");
    }
    for (int al = 0; al < 3; ++al) {
        Acc a;
        for (const Vec& p : c.points)
            a.add(killing_tensor_residual(m, eta_squared_field(sys, al), p,
                                          m.build_frame(p, c.seed_for("killing.tensor.frame")),
                                          c.dp));
        emit(c, "killing.tensor.eta_sq" + sa(al), "sec:2-assoc", a, 1e-6,
             "rho = eta_a (x) eta_a (associated tensor of the Killing-Yano 1-form)");
    }
    {
        Acc a;
        const SymmetricTensorField rho =
            associated_tensor(m, ky_family_field(sys, 0, 1), c.seed_for("killing.tensor.assoc"));
        for (const Vec& p : c.points)
            a.add(killing_tensor_residual(
                m, rho, p, m.build_frame(p, c.seed_for("killing.tensor.frame")), c.dp));
        emit(c, "killing.tensor.assoc_eta_deta", "sec:2-assoc", a, 1e-5,
             "associated tensor of eta_1 ^ d eta_1");
    }
    {
        Acc a;
        const SymmetricTensorField r1 =
            associated_tensor(m, ky_family_field(sys, 0, 1), c.seed_for("assoc.frame.one"));
        const SymmetricTensorField r2 =
            associated_tensor(m, ky_family_field(sys, 0, 1), c.seed_for("assoc.frame.two"));
        Rng rng(c.seed_for("killing.tensor.frame_independence"));
        for (const Vec& p : c.points) {
            const Vec x = random_tangent(m, p, rng), y = random_tangent(m, p, rng);
            a.add(r1.eval(p, x, y) - r2.eval(p, x, y));
        }
        emit(c, "killing.tensor.frame_independence", "sec:2-assoc", a, 1e-6,
             "associated tensor agrees across two independently seeded frames");
    }
    {
        Acc measured;
        Rng rng(c.seed_for("killing.tensor.negative_control"));
        Mat s(m.space().dim, m.space().dim);
        for (int i = 0; i < m.space().dim; ++i)
            for (int j = 0; j <= i; ++j) s(i, j) = s(j, i) = rng.sym();
        const SymmetricTensorField rho = constant_symmetric_field(s);
        for (const Vec& p : c.points)
            measured.add(killing_tensor_residual(
                m, rho, p, m.build_frame(p, c.seed_for("killing.tensor.frame")), c.dp));
        emit_control(c, "killing.tensor.negative_control", "sec:2-assoc", measured, 1e-2,
                     "restriction of a generic parallel symmetric tensor has non-zero "
                     "symmetrized derivative");
    }
}

void suite_cky(Ctx& c) {
    auto& sys = c.sys;
    const Hypersurface& m = c.m();
    const int dim_m = m.dim();
    for (int al = 0; al < 3; ++al) {
        const FormField eta = eta_field(sys, al);
        const FormField deta = d_eta_field(sys, al);
        const AlternatingForm de = d_eta_matrix(sys, al);
        const AlternatingForm zero3(m.space().dim, 3);
        Acc a_eta, a_dform, a_cocl, a_deta, a_dd, a_disp, a_prop, wit_measured;
        std::vector<double> cs;
        Rng rng(c.seed_for("cky" + sa(al)));
        for (const Vec& p : c.points) {
            const Frame f = m.build_frame(p, c.seed_for("cky.frame"));
            each_direction_tuple(c, f, p, rng, 1, [&](const Vec& x, const std::vector<Vec>& args) {
                a_eta.add(cky_residual(m, f, eta, p, x, args, c.dp, &de));
            });
            each_direction_tuple(c, f, p, rng, 2, [&](const Vec& x, const std::vector<Vec>& args) {
                a_deta.add(cky_residual(m, f, deta, p, x, args, c.dp, &zero3));
                a_disp.add(covariant_derivative_form(m, deta, p, x, args, c.dp) +
                           x_flat_wedge_codiff(m, f, deta, p, x, args, c.dp) /
                               (4.0 * c.cfg.n + 2.0));
            });
            for (int k = 0; k < std::max(1, c.cfg.probes / 2); ++k) {
                const Vec x = random_tangent(m, p, rng), y = random_tangent(m, p, rng),
                          z = random_tangent(m, p, rng);
                const std::vector<Vec> xy{x, y};
                a_dform.add(exterior_derivative_value(m, eta, p, xy, c.dp) +
                            2.0 * m.metric(sys.phi(al, p, x), y));
                const std::vector<Vec> xyz{x, y, z};
                a_dd.add(exterior_derivative_value(m, deta, p, xyz, c.dp));
            }
            a_cocl.add(codifferential_value(m, f, eta, p, {}, c.dp));
            {
                const std::size_t d = f.vectors.size();
                std::vector<double> tau(d), ec(d);
                double num = 0.0, den = 0.0;
                for (std::size_t i = 0; i < d; ++i) {
                    tau[i] = codifferential_value(m, f, deta, p, {f.vectors[i]}, c.dp);
                    ec[i] = form_value(eta, p, {f.vectors[i]});
                    num += tau[i] * ec[i];
                    den += ec[i] * ec[i];
                }
                const double cp = num / den;
                cs.push_back(cp);
                double norm2 = 0.0;
                for (std::size_t i = 0; i < d; ++i) {
                    a_prop.add(tau[i] - cp * ec[i]);
                    norm2 += tau[i] * tau[i];
                }
                wit_measured.add(std::sqrt(norm2));
            }
        }
        for (double v : cs) a_prop.add(v - cs.front());
        double cbar = 0.0;
        for (double v : cs) cbar += v;
        cbar /= static_cast<double>(cs.size());
        emit(c, "cky.eta" + sa(al), "cor:4.2", a_eta, 1e-6,
             "eta_a satisfies the conformal Killing-Yano equation");
        emit(c, "cky.deta_formula" + sa(al), "cor:4.2", a_dform, 1e-6,
             "finite-difference d eta_a against -2 g(phi_a X, Y)");
        emit(c, "cky.eta_coclosed" + sa(al), "cor:4.2", a_cocl, 1e-6, "d* eta_a = 0");
        emit(c, "cky.deta" + sa(al), "cor:4.2", a_deta, 1e-5,
             "d eta_a satisfies the conformal Killing-Yano equation (closed, hence the d term "
             "vanishes)");
        emit(c, "cky.ddeta_zero" + sa(al), "cor:4.2", a_dd, 1e-6,
             "finite-difference witness that d(d eta_a) = 0");
        emit(c, "cky.deta_displayed" + sa(al), "cor:4.2", a_disp, 1e-5,
             "nabla_X d eta_a = -(1/(4n+2)) X_flat ^ d* d eta_a");
        emit(c, "cky.dstar_deta_proportional" + sa(al), "cor:4.2", a_prop, 1e-5,
             "fit residual and point-to-point spread of c in d* d eta_a = c eta_a");
        {
            Acc cd;
            cd.add(cbar - (8.0 * c.cfg.n + 4.0));
            emit_reported(c, "cky.dstar_deta_constant" + sa(al), "cor:4.2", cd,
                          "measured c = " + fmt(cbar) + "; matches 8n+4 = " +
                              fmt(8.0 * c.cfg.n + 4.0) + " = 2(dim - 1)");
        }
        emit_control(c, "cky.coclosure_witness" + sa(al), "cor:4.2", wit_measured, 1.0,
                     "d* d eta_a is genuinely non-zero (frame-component norm)");
    }
    {
        Acc measured;
        Rng rng(c.seed_for("cky.negative_control"));
        const SemiEuclideanSpace space = m.space();
        AlternatingForm cf(space.dim, 2);
        for (int i = 0; i < cf.coefficient_count(); ++i) cf.raw(i) = rng.sym();
        const Vec u = random_ambient(rng, space.dim);
        // constant forms restrict to CKY forms (see cky.constant_form), so the
        // control needs position dependence to leave the CKY space
        const FormField mod{2, [cf, u, space](const Vec& q) {
                                AlternatingForm w = cf;
                                w *= space.inner(u, q);
                                return w;
                            }};
        for (const Vec& p : c.points) {
            const Frame f = m.build_frame(p, c.seed_for("cky.frame"));
            double worst = 0.0;
            for (int k = 0; k < 5; ++k)
                worst = std::max(
                    worst, cky_residual(m, f, mod, p, random_tangent(m, p, rng),
                                        {random_tangent(m, p, rng), random_tangent(m, p, rng)},
                                        c.dp));
            measured.add(worst);
        }
        emit_control(c, "cky.negative_control", "eq:4", measured, 1e-2,
                     "<u,q>-modulated constant 2-form is not conformal Killing-Yano");
    }
    {
        Acc a;
        Rng rng(c.seed_for("cky.constant_form"));
        AlternatingForm cf(m.space().dim, 2);
        for (int i = 0; i < cf.coefficient_count(); ++i) cf.raw(i) = rng.sym();
        const FormField cff = constant_form_field(cf);
        for (const Vec& p : c.points) {
            const Frame f = m.build_frame(p, c.seed_for("cky.frame"));
            for (int k = 0; k < 5; ++k)
                a.add(cky_residual(m, f, cff, p, random_tangent(m, p, rng),
                                   {random_tangent(m, p, rng), random_tangent(m, p, rng)}, c.dp));
        }
        emit(c, "cky.constant_form", "eq:4", a, 1e-5,
             "restrictions of parallel ambient 2-forms are conformal Killing-Yano; exercises "
             "the finite-difference d and the codifferential with no closed-form shortcut");
    }
    {
        Acc a;
        const FormField deta = d_eta_field(sys, 0);
        Rng rng(c.seed_for("cky.dstar_frame_independence"));
        for (const Vec& p : c.points) {
            const Frame f1 = m.build_frame(p, c.seed_for("cky.frame.one"));
            const Frame f2 = m.build_frame(p, c.seed_for("cky.frame.two"));
            const Vec y = random_tangent(m, p, rng);
            a.add(codifferential_value(m, f1, deta, p, {y}, c.dp) -
                  codifferential_value(m, f2, deta, p, {y}, c.dp));
        }
        emit(c, "cky.dstar_frame_independence", "eq:4", a, 1e-6,
             "codifferential agrees across two independently seeded frames");
    }
    (void)dim_m;
}

void suite_ky_family(Ctx& c) {
    auto& sys = c.sys;
    const Hypersurface& m = c.m();
    for (int al = 0; al < 3; ++al) {
        Rng rng(c.seed_for("ky.family" + sa(al)));
        {
            Acc a;
            const FormField eta = eta_field(sys, al);
            const AlternatingForm de = d_eta_matrix(sys, al);
            for (const Vec& p : c.points) {
                const Frame f = m.build_frame(p, c.seed_for("ky.frame"));
                each_direction_tuple(c, f, p, rng, 1,
                                     [&](const Vec& x, const std::vector<Vec>& args) {
                                         a.add(ky_residual(m, eta, p, x, args, c.dp, &de));
                                     });
            }
            emit(c, "ky.eta" + sa(al), "cor:4.2", a, 1e-6,
                 "eta_a satisfies the Killing-Yano equation");
        }
        for (int k = 0; k <= 2 * c.cfg.n + 1; ++k) {
            Acc a;
            const FormField wk = ky_family_field(sys, al, k);
            const AlternatingForm dwk = d_eta_power(sys, al, k + 1);
            for (const Vec& p : c.points) {
                const Frame f = m.build_frame(p, c.seed_for("ky.frame"));
                each_direction_tuple(c, f, p, rng, 2 * k + 1,
                                     [&](const Vec& x, const std::vector<Vec>& args) {
                                         a.add(ky_residual(m, wk, p, x, args, c.dp, &dwk));
                                     });
            }
            emit(c, "ky.family" + sa(al) + ".k" + std::to_string(k), "cor:4.2", a, 1e-5,
                 k == 2 * c.cfg.n + 1
                     ? "top degree: (d eta)^{k+1} vanishes identically, omega_k is parallel"
                     : "omega_k = eta_a ^ (d eta_a)^k with nabla_X omega_k = "
                       "iota_X (d eta_a)^{k+1} / (2k+2)");
        }
        {
            Acc measured;
            const FormField deta = d_eta_field(sys, al);
            const AlternatingForm zero3(m.space().dim, 3);
            Rng rng2(c.seed_for("ky.deta_strict" + sa(al)));
            for (const Vec& p : c.points) {
                double worst = 0.0;
                for (int k = 0; k < 5; ++k)
                    worst = std::max(
                        worst,
                        ky_residual(m, deta, p, random_tangent(m, p, rng2),
                                    {random_tangent(m, p, rng2), random_tangent(m, p, rng2)},
                                    c.dp, &zero3));
                measured.add(worst);
            }
            emit_control(c, "ky.deta_strict" + sa(al), "cor:4.2", measured, 1e-2,
                         "d eta_a is conformal Killing-Yano but strictly not Killing-Yano");
        }
        if (c.cfg.n >= 1) {
            // at n = 0 the xi's span the whole tangent space and no horizontal
            // probe exists, so the witness only makes sense for n >= 1
            Acc measured;
            for (const Vec& p : c.points) {
                const double ratio =
                    phi_not_ky_ratio_min(sys, al, p, c.seed_for("ky.phi_witness"), 10, c.dp);
                measured.add(ratio);
            }
            emit_control(c, "ky.phi_witness" + sa(al), "prop:3.4", measured, 0.5,
                         "|(nabla_X phi_a) X| / |g(X,X)| over non-lightlike X orthogonal to all "
                         "xi; a Killing-Yano phi_a would make this vanish");
        }
        {
            Acc measured;
            const FormField om = omega_field(sys, al);
            Rng rng2(c.seed_for("ky.omega_not_ky" + sa(al)));
            for (const Vec& p : c.points) {
                double worst = 0.0;
                for (int k = 0; k < 3; ++k)
                    worst = std::max(
                        worst,
                        ky_residual(m, om, p, random_tangent(m, p, rng2),
                                    {random_tangent(m, p, rng2), random_tangent(m, p, rng2)},
                                    c.dp));
                measured.add(worst);
            }
            emit_control(c, "ky.omega_not_ky" + sa(al), "prop:3.4", measured, 1e-2,
                         "the fundamental 2-form Omega_a = -(1/2) d eta_a fails the Killing-Yano "
                         "equation");
        }
    }
    {
        Acc measured;
        Rng rng(c.seed_for("ky.negative_control"));
        AlternatingForm cf(m.space().dim, 3);
        for (int i = 0; i < cf.coefficient_count(); ++i) cf.raw(i) = rng.sym();
        const FormField cff = constant_form_field(cf);
        for (const Vec& p : c.points) {
            double worst = 0.0;
            for (int k = 0; k < 3; ++k)
                worst = std::max(worst, ky_residual(m, cff, p, random_tangent(m, p, rng),
                                                    {random_tangent(m, p, rng),
                                                     random_tangent(m, p, rng),
                                                     random_tangent(m, p, rng)},
                                                    c.dp));
            measured.add(worst);
        }
        emit_control(c, "ky.negative_control", "eq:4", measured, 1e-2,
                     "restriction of a parallel ambient 3-form has a symmetric derivative part, "
                     "so it is conformal Killing-Yano but not Killing-Yano");
    }
}

void suite_geodesic(Ctx& c) {
    auto& sys = c.sys;
    const Hypersurface& m = c.m();
    std::vector<double> times;
    for (int i = 1; i <= 10; ++i) times.push_back(0.1 * i);
    Acc on_surf, ode, velcons, ginv, assoc_drift, ctrl_measured, antipode;
    std::array<Acc, 3> eta_drift;
    Rng rng(c.seed_for("geodesic"));
    struct Geo {
        Vec p, v;
        int causal;  // +1 spacelike, -1 timelike, 0 null
    };
    std::vector<Geo> geos;
    const int per_type = 10;
    for (int i = 0; i < per_type; ++i) {
        const Vec& p = c.points[static_cast<std::size_t>(i) % c.points.size()];
        geos.push_back({p, random_tangent_causal(m, p, rng, true), +1});
        geos.push_back({p, random_tangent_causal(m, p, rng, false), -1});
        geos.push_back({p, Vec(sys.xi(0, p) + sys.xi(i % 2 ? 1 : 2, p)), 0});
    }
    const SymmetricTensorField rho_g = metric_tensor_field(m);
    const std::array<SymmetricTensorField, 3> rho_eta{
        eta_squared_field(sys, 0), eta_squared_field(sys, 1), eta_squared_field(sys, 2)};
    const SymmetricTensorField rho_assoc =
        associated_tensor(m, ky_family_field(sys, 0, 1), c.seed_for("geodesic.assoc_frame"));
    Mat s(m.space().dim, m.space().dim);
    for (int i = 0; i < m.space().dim; ++i)
        for (int j = 0; j <= i; ++j) s(i, j) = s(j, i) = rng.sym();
    const SymmetricTensorField rho_ctrl = constant_symmetric_field(s);
    for (const auto& geo : geos) {
        for (double t : times) {
            const auto [pt, vt] = m.geodesic(geo.p, geo.v, t);
            on_surf.add(m.f_value(pt) - 1.0);
            ode.add((m.geodesic_acceleration(geo.p, geo.v, t) + m.metric(vt, vt) * pt).norm());
            velcons.add((derivative_at_zero(std::function<Vec(double)>([&](double h) {
                                                return m.geodesic(geo.p, geo.v, t + h).first;
                                            }),
                                            c.dp.step) -
                         vt)
                            .norm());
        }
        ginv.add(geodesic_invariant_drift(m, rho_g, geo.p, geo.v, times));
        for (int al = 0; al < 3; ++al)
            eta_drift[static_cast<std::size_t>(al)].add(
                geodesic_invariant_drift(m, rho_eta[static_cast<std::size_t>(al)], geo.p, geo.v,
                                         times));
        assoc_drift.add(geodesic_invariant_drift(m, rho_assoc, geo.p, geo.v, times));
        if (geo.causal != 0) {
            // constant rho is trivially conserved on null lines (velocity is
            // literally constant), so the control uses the curved types only
            ctrl_measured.add(geodesic_invariant_drift(m, rho_ctrl, geo.p, geo.v, times));
        }
        if (geo.causal > 0)
            antipode.add((m.geodesic(geo.p, geo.v, std::acos(-1.0)).first + geo.p).norm());
    }
    emit(c, "geodesic.on_surface", "prop:1", on_surf, 1e-9,
         "closed forms stay on the level set for all three causal types");
    emit(c, "geodesic.ode_residual", "prop:1", ode, 1e-8, "c'' + g(c', c') c = 0");
    emit(c, "geodesic.velocity_consistency", "prop:1", velcons, 1e-8,
         "finite-difference derivative of the point curve matches the closed-form velocity");
    emit(c, "geodesic.invariant.metric", "prop:1", ginv, 1e-10, "g(c', c') is constant");
    for (int al = 0; al < 3; ++al)
        emit(c, "geodesic.invariant.eta_sq" + sa(al), "prop:1",
             eta_drift[static_cast<std::size_t>(al)], 1e-7,
             "eta_a(c')^2 is a first integral (10 geodesics per causal type)");
    emit(c, "geodesic.invariant.assoc", "prop:1", assoc_drift, 1e-7,
         "the associated tensor of eta_1 ^ d eta_1 is a first integral");
    emit_control(c, "geodesic.invariant.negative_control", "prop:1", ctrl_measured, 1e-2,
                 "a generic constant symmetric tensor is not conserved (spacelike and "
                 "timelike geodesics)");
    emit(c, "geodesic.antipode", "ex:5", antipode, 1e-12,
         "spacelike unit-speed geodesics reach the antipode at t = pi");
}

void suite_foliation(Ctx& c) {
    auto& sys = c.sys;
    Acc inv, b23, tg, leaf, fitres;
    std::array<double, 3> consts{};
    for (const Vec& p : c.points) {
        const auto table = bracket_table(sys, p);
        for (const auto& fit : table) fitres.add(fit.residual);
        inv.add(involutivity_residual(sys, p));
        b23.add((table[1].value - 2.0 * sys.xi(0, p)).norm());
        tg.add(total_geodesy_residual(sys, p, c.dp));
        leaf.add(leaf_curvature_deviation(sys, p, c.seed_for("fol.leaf"), 10));
        consts = {table[0].c[2], table[1].c[0], table[2].c[1]};
    }
    emit(c, "fol.involutivity", "cor:4.3", inv, 1e-9,
         "[xi_a, xi_b] stays in span{xi_1, xi_2, xi_3} (exact for the linear fields)");
    emit(c, "fol.bracket23", "cor:4.3", b23, 1e-12, "[xi_2, xi_3] = 2 xi_1");
    emit(c, "fol.total_geodesy", "cor:4.3", tg, 1e-6,
         "nabla_{xi_a} xi_b stays in span{xi}; the leaves are totally geodesic");
    emit(c, "fol.leaf_curvature", "cor:4.3", leaf, 1e-6,
         "sectional curvature 1 on non-degenerate planes inside span{xi}");
    emit_reported(c, "fol.bracket_table", "eq:17", fitres,
                  "measured [xi_1,xi_2] = " + fmt(consts[0]) + " xi_3, [xi_2,xi_3] = " +
                      fmt(consts[1]) + " xi_1, [xi_3,xi_1] = " + fmt(consts[2]) +
                      " xi_2; the anchored display (eps_a + eps_b) eps_c xi_c predicts "
                      "(0, -2, 0) and the corollary derivation uses (0, +2, 0); only the "
                      "(2,3) pair is corroborated, so the constants are reported, not asserted");
}

void suite_flat(Ctx& c) {
    {
        Acc a;
        for (const auto& chk : check_definition1_flat(example_r3()))
            a.add(static_cast<double>(chk.residual));
        emit(c, "flat.r3_definition1", "ex:1", a, 0.0,
             "exact integer residuals of every defining relation");
    }
    if (c.cfg.n >= 1) {
        Acc a;
        for (const auto& chk : check_definition1_flat(example_flat(c.cfg.n)))
            a.add(static_cast<double>(chk.residual));
        emit(c, "flat.block_definition1", "ex:1", a, 0.0,
             "3-dimensional block plus the canonical operators on R^{4n}");
    }
}

void suite_cone(Ctx& c) {
    auto& sys = c.sys;
    const Hypersurface& m = c.m();
    const std::array<double, 3> radii{0.5, 1.0, 2.0};
    const auto vsub = [](const ConeVec& x, const ConeVec& y) {
        return ConeVec{x.h - y.h, x.a - y.a};
    };
    const auto vadd = [](const ConeVec& x, const ConeVec& y) {
        return ConeVec{x.h + y.h, x.a + y.a};
    };
    Rng rng(c.seed_for("cone"));
    for (const auto br : {ConeBranch::displayed, ConeBranch::parallel}) {
        const bool par = br == ConeBranch::parallel;
        const std::string name = par ? "parallel" : "displayed";
        Acc alg, compat, match, rt;
        for (const Vec& p : c.points) {
            for (double r : radii) {
                const ConePoint cp{p, r};
                const auto J = [&](int a, const ConeVec& w) {
                    return cone_apply(sys, br, a, cp, w);
                };
                for (int k = 0; k < 3; ++k) {
                    const ConeVec u{random_tangent(m, p, rng), rng.sym()};
                    const ConeVec v{random_tangent(m, p, rng), rng.sym()};
                    alg.add(cone_vec_norm(vadd(J(0, J(0, u)), u)));
                    alg.add(cone_vec_norm(vsub(J(1, J(1, u)), u)));
                    alg.add(cone_vec_norm(vsub(J(2, J(2, u)), u)));
                    alg.add(cone_vec_norm(vsub(J(1, J(0, u)), J(2, u))));
                    alg.add(cone_vec_norm(vadd(J(0, J(1, J(2, u))), u)));
                    for (int a = 0; a < 3; ++a) {
                        compat.add(cone_metric(m, cp, J(a, u), J(a, v)) -
                                   sys.eps(a) * cone_metric(m, cp, u, v));
                        const Vec wu = r * u.h + u.a * p;  // ambient vector under y = r p
                        const ConeVec ju = J(a, u);
                        match.add((sys.j(a) * wu - (r * ju.h + ju.a * p)).norm());
                    }
                }
            }
            const ConePoint cp1{p, 1.0};
            const double sgn = par ? -1.0 : 1.0;
            for (int a = 0; a < 3; ++a) {
                const ConeVec jd = cone_apply(sys, br, a, cp1, ConeVec{Vec::Zero(p.size()), 1.0});
                const Vec xi_r = sgn * jd.h;
                rt.add((xi_r - sys.xi(a, p)).norm());
                rt.add(std::abs(jd.a));
                for (int k = 0; k < 3; ++k) {
                    const Vec x = random_tangent(m, p, rng);
                    const ConeVec jx = cone_apply(sys, br, a, cp1, ConeVec{x, 0.0});
                    rt.add((jx.h - sys.phi(a, p, x)).norm());
                    rt.add(m.metric(x, xi_r) - sys.eta(a, p, x));
                }
            }
        }
        emit(c, "cone.algebra." + name, "eq:18", alg, 1e-9,
             "J_1^2 = -id, J_2^2 = J_3^2 = +id, J_2 J_1 = J_3, J_1 J_2 J_3 = -id on cone "
             "tangents at r in {1/2, 1, 2}");
        emit(c, "cone.compat." + name, "eq:15", compat, 1e-9,
             "cone metric compatibility g(J_a U, J_a V) = eps_a g(U, V)");
        if (par)
            emit(c, "cone.ambient_match.parallel", "thm:4.1", match, 1e-9,
                 "under y = r p the triple is the constant ambient one; r-independent by "
                 "construction");
        else
            emit_reported(c, "cone.ambient_match.displayed", "eq:18", match,
                          "deviation from the constant ambient operator; the anchored signs "
                          "conjugate it by the reflection through the slice tangent space");
        emit(c, "cone.roundtrip." + name, "eq:19", rt, 1e-10,
             "restriction at r = 1 returns xi_a, eta_a and phi_a exactly");
    }
    for (const auto br : {ConeBranch::displayed, ConeBranch::parallel}) {
        const bool par = br == ConeBranch::parallel;
        Acc a, fit;
        for (const Vec& p : c.points) {
            for (double r : radii) {
                const ConePoint cp{p, r};
                const Vec w = random_tangent(m, p, rng);
                const std::array<ConeField, 3> fields{lift_field(m.extend_canonical(w)),
                                                      radial_unit_field(), euler_field()};
                const ConeVec u{random_tangent(m, p, rng), rng.sym()};
                for (int a2 = 0; a2 < 3; ++a2)
                    for (const auto& f : fields)
                        a.add(cone_parallel_residual(sys, br, a2, cp, u, f, c.dp));
                if (!par)
                    for (int a2 = 0; a2 < 3; ++a2) {
                        const ConeVec dj = cone_connection(
                            m, u, cone_apply_field(sys, br, a2, radial_unit_field()), cp, c.dp);
                        const ConeVec jd = cone_apply(
                            sys, br, a2, cp, cone_connection(m, u, radial_unit_field(), cp, c.dp));
                        fit.add(cone_vec_norm(
                            {dj.h - jd.h + (2.0 / r) * sys.phi(a2, cp.p, u.h), dj.a - jd.a}));
                    }
            }
        }
        if (par)
            emit(c, "cone.parallel_check.parallel", "thm:4.1", a, 1e-5,
                 "nabla J = 0 for the sign-matched extension at r in {1/2, 1, 2}");
        else
            emit_reported(c, "cone.parallel_check.displayed", "eq:18", a,
                          "max |(nabla_U J_a) V| for the anchored signs; the defect on d_r "
                          "equals -(2/r) phi_a U_h (closed-form fit residual " +
                              fmt(fit.maxv()) + "), so this extension is not parallel");
    }
    {
        Acc a;
        const ConeField phi_f = euler_field();
        for (const Vec& p : c.points)
            for (double r : radii) {
                const ConeVec u{random_tangent(m, p, rng), rng.sym()};
                const ConeVec du = cone_connection(m, u, phi_f, {p, r}, c.dp);
                a.add(cone_vec_norm({du.h - u.h, du.a - u.a}));
            }
        emit(c, "cone.euler", "eq:20", a, 1e-8, "nabla_U (r d_r) = U");
    }
    {
        Acc a;
        double dev1 = 0.0, dev23 = 0.0;
        for (const Vec& p : c.points) {
            const Vec x = random_tangent(m, p, rng);
            for (int al = 0; al < 3; ++al) {
                const double dev =
                    (-static_cast<double>(sys.eps(al)) *
                         m.covariant_derivative(sys.xi_field(al), p, x, c.dp) -
                     sys.phi(al, p, x))
                        .norm();
                a.add(dev);
                (al == 0 ? dev1 : dev23) = std::max(al == 0 ? dev1 : dev23, dev);
            }
        }
        emit_reported(c, "cone.eq19_middle", "eq:19", a,
                      "phi_a = -eps_a nabla xi_a reproduces phi_1 (deviation " + fmt(dev1) +
                          ") but gives -phi_a for a in {2,3} (deviation " + fmt(dev23) +
                          "); measured nabla_X xi_a = -phi_a X for every a, and the tangential "
                          "part of J_a recovers phi_a for all a");
    }
}

std::vector<std::string> effective_suites(const SuiteConfig& cfg) {
    if (cfg.suites.empty()) return suite_names();
    std::vector<std::string> out;
    for (const auto& s : suite_names())
        if (std::find(cfg.suites.begin(), cfg.suites.end(), s) != cfg.suites.end())
            out.push_back(s);
    return out;
}

} // namespace

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"axioms",   "einstein",  "killing",
                                                "cky",      "ky_family", "cone",
                                                "foliation", "flat_examples", "geodesic"};
    return names;
}

const std::set<std::string>& anchor_registry() {
    static const std::set<std::string> reg{
        "def:1",        "eq:1",      "eq:4",          "eq:11",
        "eq:12",        "eq:13-14",  "eq:15",         "eq:17",
        "eq:18",        "eq:19",     "eq:20",         "prop:1",
        "prop:3.4",     "sec:2-assoc", "sec:3-nijenhuis", "sec:4-lightlike",
        "thm:einstein", "thm:conformal-killing", "thm:4.1", "cor:4.2",
        "cor:4.3",      "ex:1",      "ex:3",          "ex:4",
        "ex:5"};
    return reg;
}

void SuiteConfig::validate() const {
    if (n < 0) throw ConfigError("n must be >= 0");
    if (samples < 1) throw ConfigError("samples must be >= 1");
    if (probes < 1) throw ConfigError("probes must be >= 1");
    if (!(tol > 0.0)) throw ConfigError("tol must be > 0");
    if (!(fd_step > 0.0)) throw ConfigError("fd_step must be > 0");
    for (const auto& s : suites)
        if (std::find(suite_names().begin(), suite_names().end(), s) == suite_names().end())
            throw ConfigError("unknown suite: " + s);
}

Report run_suites(const SuiteConfig& cfg) {
    cfg.validate();
    const auto t0 = std::chrono::steady_clock::now();
    Report rep;
    rep.config = cfg;
    rep.version = k_version;
    SphereMixedSystem sys(cfg.n);
    if (cfg.inject_fault) sys.set_eta_fault(0.01);
    Ctx c{cfg,
          sys,
          sys.surface().sample_points(mix_seed(cfg.seed, "sample-points"), cfg.samples),
          DiffParams{cfg.fd_step},
          cfg.tol / 1e-6,
          &rep.results};
    const auto want = effective_suites(cfg);
    for (const auto& s : want) {
        if (s == "axioms") suite_axioms(c);
        else if (s == "einstein") suite_einstein(c);
        else if (s == "killing") suite_killing(c);
        else if (s == "cky") suite_cky(c);
        else if (s == "ky_family") suite_ky_family(c);
        else if (s == "cone") suite_cone(c);
        else if (s == "foliation") suite_foliation(c);
        else if (s == "flat_examples") suite_flat(c);
        else if (s == "geodesic") suite_geodesic(c);
    }
    std::sort(rep.results.begin(), rep.results.end(),
              [](const CheckResult& a, const CheckResult& b) { return a.check_id < b.check_id; });
    rep.config.suites = want;
    rep.duration_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

std::string to_json(const Report& rep) {
    using njson = nlohmann::ordered_json;
    njson j;
    j["config"] = njson{{"n", rep.config.n},
                        {"seed", rep.config.seed},
                        {"samples", rep.config.samples},
                        {"probes", rep.config.probes},
                        {"tol", rep.config.tol},
                        {"fd_step", rep.config.fd_step},
                        {"suites", rep.config.suites},
                        {"exhaustive", rep.config.exhaustive},
                        {"inject_fault", rep.config.inject_fault}};
    njson arr = njson::array();
    for (const auto& r : rep.results)
        arr.push_back(njson{{"check_id", r.check_id},
                            {"paper_anchor", r.paper_anchor},
                            {"n", r.n},
                            {"samples", r.samples},
                            {"max_residual", r.max_residual},
                            {"mean_residual", r.mean_residual},
                            {"tolerance", r.tolerance},
                            {"status", r.status},
                            {"notes", r.notes}});
    j["results"] = std::move(arr);
    j["duration_seconds"] = rep.duration_seconds;
    j["version"] = rep.version;
    return j.dump(2) + "\n";
}

std::string to_text(const Report& rep) {
    std::ostringstream os;
    std::size_t w = 8;
    for (const auto& r : rep.results) w = std::max(w, r.check_id.size());
    int pass = 0, fail = 0, reported = 0;
    for (const auto& r : rep.results) {
        if (r.status == "pass") ++pass;
        else if (r.status == "fail") ++fail;
        else ++reported;
        os << std::left << std::setw(static_cast<int>(w) + 2) << r.check_id << std::setw(10)
           << r.status << std::scientific << std::setprecision(3) << r.max_residual << "  (tol "
           << r.tolerance << ")  " << r.paper_anchor << "\n";
    }
    os << rep.results.size() << " checks: " << pass << " pass, " << fail << " fail, " << reported
       << " reported; n=" << rep.config.n << " seed=" << rep.config.seed << std::defaultfloat
       << " duration=" << rep.duration_seconds << "s\n";
    return os.str();
}

int exit_code(const Report& rep) {
    for (const auto& r : rep.results)
        if (r.status == "fail") return 1;
    return 0;
}

} // namespace m3s
