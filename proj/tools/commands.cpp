#include "commands.hpp"

#include <algorithm>
#include <cmath>

#include "mopkit/errors.hpp"

namespace mopkit::cli {

using io::chop;
using io::fmt;
using io::Report;
using io::Table;

namespace {

std::string yes_no(bool b) { return b ? "yes" : "no"; }

std::string deg(const MatrixPolynomial& P) {
    auto d = P.degree();
    return d ? std::to_string(*d) : "-inf";
}

void residual_verdict(Report& r, const std::string& name, double value, double limit = kViolation) {
    r.verdicts.push_back({name, fmt(value) + (value <= limit ? " <= " : " > ") + fmt(limit), !(value <= limit)});
}

const PearsonSpec& need_pearson(const io::LoadedSpec& s) {
    if (!s.pearson) throw ParseError("this command needs a spec with a Pearson pair (phi/psi or a gallery entry that has one)");
    return *s.pearson;
}

bool det_vanishes(const MatrixPolynomial& Phi) {
    const MatrixPolynomial det = poly_det_adj(Phi).det;
    for (double x : {-0.9, -0.31, 0.17, 0.62, 1.3}) {
        const double scale = std::pow(std::max(Phi(x).norm(), 1e-300), static_cast<double>(Phi.dim()));
        if (std::abs(det(x)(0, 0)) > 1e-8 * scale) return false;
    }
    return true;
}

// The zero-class data of a spec, or a scalar-ideal derived one when deg alpha <= 2, deg Psi <= 1.
std::optional<ZeroClassSpec> zero_class_of(const io::LoadedSpec& s, const Tolerance& tol, std::string& why) {
    if (s.zero_class) return s.zero_class;
    try {
        ClassReport c = scalar_ideal(s.u, s.pearson, 4, std::nullopt, tol);
        if (c.s != 0) {
            why = "class s = " + std::to_string(c.s);
            return std::nullopt;
        }
        std::array<cplx, 3> a{};
        for (std::size_t k = 0; k < 3; ++k) a[k] = c.alpha.coeff(k)(0, 0);
        return ZeroClassSpec(a, c.Psi.coeff(0), c.Psi.coeff(1), s.u.moment(0));
    } catch (const NoGeneratorFound& e) {
        why = e.what();
        return std::nullopt;
    }
}

}  // namespace

Report moments(const io::LoadedSpec& s, std::size_t n, const Tolerance& tol) {
    Report r;
    Table t{"moments", io::fmt_tol(tol), {"n", "mu_n"}, {}};
    std::vector<std::string> flat;
    for (std::size_t k = 0; k <= n; ++k) {
        CMatrix mu;
        try {
            mu = s.u.moment(k);
        } catch (const MomentUnavailable& e) {
            r.notes.push_back(std::string("stopped: ") + e.what());
            break;
        } catch (const RecurrenceBlocked& e) {
            r.notes.push_back(std::string("stopped: ") + e.what());
            break;
        }
        t.rows.push_back({std::to_string(k), fmt(mu)});
        flat.push_back(fmt(mu));
    }
    r.verdicts.push_back({"source", to_string(s.u.kind()), false});
    r.tables.push_back(t);
    r.certificates.emplace_back("moments computed", std::to_string(t.rows.size()));
    if (s.u.dim() == 1 && !flat.empty()) {
        std::string line;
        for (const auto& f : flat) line += (line.empty() ? "" : ", ") + f;
        r.notes.push_back(line);
    }
    return r;
}

Report mop(const io::LoadedSpec& s, std::size_t n, const Tolerance& tol) {
    Report r;
    SegmentOptions opts;
    opts.truncate_on_blocked_recurrence = true;
    const MonicSegment seg = compute_segment(s.u, n, tol, opts);
    const std::size_t d = seg.length() - 1;
    if (seg.horizon_flag)
        r.verdicts.push_back({"segment", "maximal segment P_0..P_" + std::to_string(d) + " (" + to_string(seg.reason) +
                                             (seg.blocked_at ? ", blocked at " + std::to_string(*seg.blocked_at) : "") + ")",
                              false});
    else
        r.verdicts.push_back({"segment", "complete through degree " + std::to_string(d), false});
    Table e{"leading data", io::fmt_tol(tol), {"n", "E_n", "pi_n"}, {}};
    for (std::size_t k = 0; k <= d; ++k) e.rows.push_back({std::to_string(k), fmt(seg.E[k]), fmt(seg.pi[k])});
    Table rec{"three-term recurrence", io::fmt_tol(tol), {"n", "beta_n", "gamma_n"}, {}};
    for (std::size_t k = 0; k < seg.beta.size(); ++k)
        rec.rows.push_back({std::to_string(k), fmt(seg.beta[k]), k < seg.gamma.size() && k > 0 ? fmt(seg.gamma[k]) : "-"});
    Table p{"polynomials", io::fmt_tol(tol), {"n", "P_n"}, {}};
    for (std::size_t k = 0; k <= d; ++k) p.rows.push_back({std::to_string(k), fmt(chop(seg.polys[k]))});
    r.tables = {e, rec, p};
    residual_verdict(r, "orthogonality residual", seg.orthogonality_residual);
    residual_verdict(r, "recurrence residual", seg.recurrence_residual);
    r.certificates.emplace_back("requested degree", std::to_string(n));
    return r;
}

Report check_pearson(const io::LoadedSpec& s, std::size_t n, const Tolerance& tol) {
    Report r;
    std::vector<std::pair<std::string, PearsonPair>> pairs;
    const PearsonSpec& spec = need_pearson(s);
    pairs.push_back({"(Phi, Psi)", {spec.Phi, spec.Psi}});
    if (s.entry) {
        if (s.entry->class_pair) pairs.push_back({"(alpha I, Psi)", {s.entry->class_pair->Phi, s.entry->class_pair->Psi}});
        for (const auto& [k, v] : s.entry->pairs) pairs.push_back({k, v});
    }
    Table t{"Pearson residuals n <= " + std::to_string(n), io::fmt_tol(tol), {"pair", "deg Phi", "deg Psi", "residual"}, {}};
    double worst = 0.0;
    for (const auto& [name, pp] : pairs) {
        const double res = pearson_certificate(s.u, pp.Phi, pp.Psi, n);
        worst = std::isnan(res) ? res : std::max(worst, res);
        t.rows.push_back({name, deg(pp.Phi), deg(pp.Psi), fmt(res)});
    }
    r.tables.push_back(t);
    residual_verdict(r, "Pearson equation D(u Phi) = u Psi", worst, 1e-8);
    r.certificates.emplace_back("horizon", std::to_string(n));
    return r;
}

Report derivatives(const io::LoadedSpec& s, std::size_t depth, std::size_t n, const Tolerance& tol) {
    Report r;
    if (!s.pearson) {
        SegmentOptions opts;
        opts.truncate_on_blocked_recurrence = true;
        const MonicSegment seg = compute_segment(s.u, n + 2, tol, opts);
        const std::vector<double> defect = derivative_recurrence_defect(seg);
        Table t{"derivative recurrence defect", io::fmt_tol(tol), {"k", "defect"}, {}};
        double worst = 0.0;
        for (std::size_t k = 0; k < defect.size(); ++k) {
            t.rows.push_back({std::to_string(k), fmt(defect[k])});
            worst = std::max(worst, defect[k]);
        }
        r.tables.push_back(t);
        r.verdicts.push_back({"derivatives orthogonal", yes_no(worst <= 1e-6) + " (max defect " + fmt(worst) + ")", false});
        r.notes.push_back("no Pearson pair supplied; tested whether P'_{k+1}/(k+1) obey a three-term recurrence");
        return r;
    }
    Table t{"derivative chain", io::fmt_tol(tol), {"level", "deg Phi", "deg Psi", "Phi", "Psi", "orthogonality"}, {}};
    double worst = 0.0;
    try {
        for (const auto& link : derivative_chain(*s.pearson, s.u, depth, n, tol)) {
            t.rows.push_back({std::to_string(link.level), deg(link.spec.Phi), deg(link.spec.Psi), fmt(chop(link.spec.Phi)),
                              fmt(chop(link.spec.Psi)), fmt(link.orthogonality_residual)});
            worst = std::max(worst, link.orthogonality_residual);
        }
        r.verdicts.push_back({"chain", "complete to depth " + std::to_string(depth), false});
    } catch (const ChainBroken& e) {
        r.verdicts.push_back({"chain", "broken at level " + std::to_string(e.index()) + ": " + e.what(), false});
    }
    r.tables.push_back(t);
    residual_verdict(r, "derivative orthogonality", worst, 1e-6);
    r.certificates.emplace_back("polynomials per level", std::to_string(n));
    return r;
}

Report module_basis(const io::LoadedSpec& s, std::size_t p, std::size_t q, std::optional<std::size_t> horizon,
                    const Tolerance& tol) {
    Report r;
    const ModuleBasis b = mopkit::module_basis(s.u, p, q, horizon, tol);
    r.verdicts.push_back({"rank", std::to_string(b.rank), false});
    Table t{"generators of M_{" + std::to_string(p) + "," + std::to_string(q) + "}", io::fmt_tol(tol),
            {"i", "Phi", "Psi", "det Phi = 0"}, {}};
    for (std::size_t i = 0; i < b.generators.size(); ++i)
        t.rows.push_back({std::to_string(i), fmt(chop(b.generators[i].Phi)), fmt(chop(b.generators[i].Psi)),
                          yes_no(det_vanishes(b.generators[i].Phi))});
    r.tables.push_back(t);
    residual_verdict(r, "generator residual", b.certificate_residual, 1e-8);
    r.certificates.emplace_back("horizon (equations)", std::to_string(b.horizon));
    r.certificates.emplace_back("nullity", std::to_string(b.nullity));
    r.certificates.emplace_back("singular value gap", fmt(b.gap));
    r.notes.push_back("rank(M_{" + std::to_string(p) + "," + std::to_string(q) + "}) = " + std::to_string(b.rank));
    return r;
}

Report class_of(const io::LoadedSpec& s, std::size_t d_max, const Tolerance& tol) {
    Report r;
    try {
        std::optional<PearsonSpec> known = s.pearson;
        if (!known && s.entry && s.entry->class_pair) known = s.entry->class_pair;
        const ClassReport c = scalar_ideal(s.u, known, d_max, std::nullopt, tol);
        r.verdicts.push_back({"class", std::to_string(c.s), false});
        Table t{"scalar generator", io::fmt_tol(tol), {"alpha", "Psi"}, {{fmt(chop(c.alpha)), fmt(chop(c.Psi))}}};
        r.tables.push_back(t);
        residual_verdict(r, "generator residual", c.residual, 1e-8);
        r.certificates.emplace_back("certified to n", std::to_string(c.certified_to));
        if (c.seed_alpha) r.certificates.emplace_back("det Phi", fmt(*c.seed_alpha));
        r.notes.push_back("class s = " + std::to_string(c.s));
    } catch (const NoGeneratorFound& e) {
        r.verdicts.push_back({"class", std::string("no scalar generator found (") + e.what() + ")", false});
    }
    return r;
}

Report zeroclass(const std::string& action, const io::LoadedSpec& s, std::size_t n, const Tolerance& tol) {
    Report r;
    std::string why;
    const std::optional<ZeroClassSpec> zc = zero_class_of(s, tol, why);
    if (!zc) {
        r.verdicts.push_back({"zero class", "no (" + why + ")", false});
        return r;
    }
    r.verdicts.push_back({"zero class", "yes, alpha = " + fmt(chop(zc->alpha_poly())) + ", Psi = " + fmt(chop(zc->Psi())), false});

    if (action == "check") {
        const ExistenceReport e = existence_check(*zc, n, tol);
        r.verdicts.push_back({"quasi-definite through n_max", yes_no(e.quasi_definite), false});
        r.verdicts.push_back({"segment degree", std::to_string(e.segment_degree), false});
        if (e.blocked_index) r.verdicts.push_back({"blocked", "index " + std::to_string(*e.blocked_index) + ": " + e.reason, false});
        if (e.cross_checked)
            r.verdicts.push_back({"Hankel cross-check",
                                  (e.agrees ? "agrees" : "disagrees") + std::string(" (Hankel degree ") +
                                      std::to_string(e.hankel_degree) + ", " + to_string(e.hankel_reason) + ")",
                                  !e.agrees});
        r.certificates.emplace_back("n_max", std::to_string(e.n_max));
        return r;
    }

    if (action == "diag") {
        const DiagReport d = diagonalizability_report(s.u, tol, n);
        r.verdicts.push_back({"diagonalizability", to_string(d.verdict), false});
        if (!d.witness.empty()) r.verdicts.push_back({"witness", d.witness, false});
        r.verdicts.push_back({"mu_0 positive definite", yes_no(d.mu0_positive), false});
        r.verdicts.push_back({"Delta_2 positive definite", yes_no(d.delta2_positive), false});
        if (d.T) r.tables.push_back({"unitary T", io::fmt_tol(tol), {"T"}, {{fmt(chop(*d.T))}}});
        if (d.congruence) r.tables.push_back({"congruence C", io::fmt_tol(tol), {"C"}, {{fmt(chop(*d.congruence))}}});
        if (d.verdict == DiagVerdict::UnitarilyDiagonalizable) residual_verdict(r, "max off-diagonal", d.max_offdiag, 1e-8);
        r.certificates.emplace_back("moments tested", std::to_string(d.n_test));
        return r;
    }

    if (action == "guard") {
        try {
            const GuardVerdict g = bessel_positivity_guard(*zc, s.u, tol);
            r.verdicts.push_back({"Bessel positivity guard", g.consistent ? "consistent (Delta_2 not positive definite)"
                                                                           : "inconsistent: " + g.detail,
                                  !g.consistent});
            Table t{"Hankel definiteness", io::fmt_tol(tol), {"k", "Delta_k"}, {}};
            for (std::size_t k = 0; k < g.delta.size(); ++k) t.rows.push_back({std::to_string(k), to_string(g.delta[k])});
            r.tables.push_back(t);
        } catch (const PreconditionViolated& e) {
            r.verdicts.push_back({"Bessel positivity guard", std::string("not applicable: ") + e.what(), false});
        }
        return r;
    }

    Ladders L(*zc, tol);
    SegmentOptions opts;
    opts.truncate_on_blocked_recurrence = true;
    const MonicSegment seg = compute_segment(s.u, n + 1, tol, opts);
    const std::size_t top = std::min(n, seg.length() - 1);
    if (top < n) r.notes.push_back("Hankel segment stops at degree " + std::to_string(seg.length() - 1));

    if (action == "closed-forms") {
        Table t{"closed forms vs Hankel", io::fmt_tol(tol), {"n", "E_n", "rel E_n", "rel Pi_n", "rel ratio"}, {}};
        double worst = 0.0;
        for (std::size_t k = 0; k <= top; ++k) {
            try {
                const CMatrix E = closed_form_E(L, k);
                const double dE = rel_diff(E, seg.E[k]);
                std::string dPi = "-", dR = "-";
                const ClosedFormRatios cr = closed_form_ratios(L, k);
                const CMatrix Einv = inverse(seg.E[k], tol);
                if (k >= 1) {
                    const double a = rel_diff(cr.Pi, Einv * seg.pi[k] * seg.E[k]);
                    dPi = fmt(a);
                    worst = std::max(worst, a);
                }
                if (k + 1 < seg.length()) {
                    const double b = rel_diff(cr.ratio, Einv * seg.E[k + 1]);
                    dR = fmt(b);
                    worst = std::max(worst, b);
                }
                worst = std::max(worst, dE);
                t.rows.push_back({std::to_string(k), fmt(E), fmt(dE), dPi, dR});
            } catch (const ClosedFormBlocked& e) {
                t.rows.push_back({std::to_string(k), std::string("blocked at ") + std::to_string(e.index()), "-", "-", "-"});
            }
        }
        r.tables.push_back(t);
        residual_verdict(r, "closed forms agree", worst);
        return r;
    }

    if (action == "ode") {
        Table t{"ODE residuals", io::fmt_tol(tol), {"n", "monic", "normalized", "right-sided"}, {}};
        double worst = 0.0;
        for (std::size_t k = 1; k <= top; ++k) {
            const OdeReport o = ode_coefficients(L, s.u, seg, k, tol);
            worst = std::max({worst, o.L1.residual, o.L2.residual});
            std::string right = o.R_skipped.empty() ? "-" : "skipped";
            if (o.R) {
                right = fmt(o.R->residual);
                worst = std::max(worst, o.R->residual);
            }
            t.rows.push_back({std::to_string(k), fmt(o.L1.residual), fmt(o.L2.residual), right});
        }
        r.tables.push_back(t);
        residual_verdict(r, "ODE residual", worst);
        return r;
    }

    throw ParseError("unknown zeroclass action: " + action);
}

Report gallery_list() {
    Report r;
    Table t{"gallery", "-", {"name", "description"}, {}};
    for (const auto& n : gallery::names()) t.rows.push_back({n, gallery::describe(n)});
    r.tables.push_back(t);
    return r;
}

Report gallery_show(const std::string& name) {
    Report r;
    const gallery::GalleryEntry e = gallery::build(name);
    r.verdicts.push_back({"description", e.description, false});
    if (e.pearson) {
        r.verdicts.push_back({"Phi", fmt(e.pearson->Phi), false});
        r.verdicts.push_back({"Psi", fmt(e.pearson->Psi), false});
    }
    if (e.class_pair) r.verdicts.push_back({"scalar pair", "alpha = " + fmt(e.class_pair->Phi) + ", Psi = " + fmt(e.class_pair->Psi), false});
    for (const auto& [k, v] : e.expected) r.certificates.emplace_back("expected " + k, fmt(v));
    Table t{"moments", "weight oracle", {"n", "mu_n"}, {}};
    for (std::size_t k = 0; k <= 3; ++k) t.rows.push_back({std::to_string(k), fmt(e.functional.moment(k))});
    r.tables.push_back(t);
    return r;
}

}  // namespace mopkit::cli
