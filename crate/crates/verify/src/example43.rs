// SPDX-License-Identifier: Apache-2.0

//! The Picard-number-two pipeline for `(E x F)`, `S`, `A_n` and `E1 x F`,
//! reported as ten checks.

use num_traits::Zero;
use twistlat::brauer::{exp_b_onto, kappa};
use twistlat::isometry::{find_hodge_isometry, find_isometry, genus_equal, GenusVerdict};
use twistlat::kummer::{
    t_equivalence, theta, transport_isometry, KummerPair, TVerdict, TwistedSurface,
};
use twistlat::normal_form::smith;
use twistlat::{picard_two as p2, BField, Int, IsometryMap, Lattice, Rat, Sublattice};

use crate::report::{Check, Report, Verdict};
use crate::SpecDocument;

fn disc(l: &Lattice) -> String {
    l.discriminant_form().to_string()
}

fn bool_verdict(ok: bool) -> Verdict {
    if ok {
        Verdict::Verified
    } else {
        Verdict::Refuted
    }
}

/// Verdict for "these lattices are isometric" from the invariants and a
/// bounded witness search.
fn isometry_check(name: &str, l1: &Lattice, l2: &Lattice, bound: u32) -> Check {
    let mut c = match genus_equal(l1, l2) {
        GenusVerdict::Differ(m) => Check::new(name, Verdict::Refuted).with("invariant", m),
        GenusVerdict::MatchOrUnknown => match find_isometry(l1, l2, bound) {
            Some(w) => Check::new(name, Verdict::Verified).with("witness", w.matrix()),
            None => Check::new(name, Verdict::Inconclusive).with("bound", bound),
        },
    };
    c.add("disc source", disc(l1));
    c.add("disc target", disc(l2));
    c
}

fn witness_entries(c: &mut Check, w: &IsometryMap) {
    c.add("witness", w.matrix());
    if let Some(l) = w.lambda() {
        c.add("lambda", l);
    }
}

pub fn run_example43(n: i64, bound: u32) -> Report {
    let mut r = Report::new(format!("example43 --n {n} --bound {bound}"));
    r.value("theta", p2::theta_matrix(n));
    r.value("wedge theta", p2::wedge_theta(n));

    let s = p2::surface_s(n);
    let exf = p2::surface_exf();
    let symbols = p2::symbols();

    // 1
    let sq_s = s.period_square();
    let sq_e = exf.period_square();
    let zero = |v: &twistlat::Result<Vec<Rat>>| {
        v.as_ref()
            .map(|x| x.iter().all(Zero::is_zero))
            .unwrap_or(false)
    };
    let mut c = Check::new("period-isotropy", bool_verdict(zero(&sq_s) && zero(&sq_e)))
        .expect(Verdict::Verified);
    c.add("sigma_S", describe_period(&s));
    c.add("sigma_ExF", describe_period(&exf));
    for (k, v) in [("sigma_S^2", &sq_s), ("sigma_ExF^2", &sq_e)] {
        match v {
            Ok(v) => c.add(k, symbols.format_element(v)),
            Err(e) => c.add(k, e),
        }
    }
    r.push(c);

    // 2
    let moved = s.period().map(&p2::wedge_theta(n));
    let scale = Rat::from_integer(Int::from(n));
    let ok = moved
        .as_ref()
        .map(|m| *m == exf.period().scaled(&scale))
        .unwrap_or(false);
    let mut c = Check::new("wedge-theta-period", bool_verdict(ok)).expect(Verdict::Verified);
    c.add(
        "relation",
        format!("wedge^2 theta (sigma_S) = {n} sigma_ExF"),
    );
    r.push(c);

    // 3
    let (ns, rho) = s.ns_and_picard();
    let target = Lattice::hyperbolic_scaled(n);
    let mut c = match ns.to_lattice() {
        Ok(l) => isometry_check("ns-s", &l, &target, bound),
        Err(e) => Check::new("ns-s", Verdict::Refuted).with("error", e),
    }
    .expect(Verdict::Verified);
    c.add("basis", ns.basis());
    c.add("gram", ns.gram());
    c.add("picard number", rho);
    r.push(c);

    // 4
    let t_s = s.transcendental_lattice();
    let t_a = p2::t_a(n);
    let mut c = match s.restrict(&t_s) {
        Ok(h) => match genus_equal(h.lattice(), t_a.lattice()) {
            GenusVerdict::Differ(m) => Check::new("t-s", Verdict::Refuted).with("invariant", m),
            GenusVerdict::MatchOrUnknown => match find_hodge_isometry(&h, &t_a, bound) {
                Some(w) => {
                    let mut c = Check::new("t-s", Verdict::Verified);
                    witness_entries(&mut c, &w);
                    c
                }
                None => Check::new("t-s", Verdict::Inconclusive).with("bound", bound),
            },
        },
        Err(e) => Check::new("t-s", Verdict::Refuted).with("error", e),
    }
    .expect(Verdict::Verified);
    c.add("basis", t_s.basis());
    c.add("gram", t_s.gram());
    r.push(c);

    // 5
    let t_exf = exf.transcendental_lattice();
    let expected = if n == 1 {
        Verdict::Verified
    } else {
        Verdict::Refuted
    };
    let c = match t_exf.to_lattice() {
        Ok(l) => isometry_check("t-a-vs-t-exf", t_a.lattice(), &l, bound),
        Err(e) => Check::new("t-a-vs-t-exf", Verdict::Refuted).with("error", e),
    }
    .expect(expected);
    r.push(c);

    // 6
    let a = p2::abelian_a(n);
    let e = p2::e1_times_f(n);
    let b = p2::brauer_field(n);
    let i1 = IsometryMap::certify_embedding(
        Sublattice::full(t_a.lattice().clone()),
        Sublattice::full(e.h2().lattice().clone()),
        p2::i1_matrix(n),
    );
    let image =
        Sublattice::new(e.h2().lattice().clone(), p2::i1_matrix(n)).expect("independent rows");
    let c = match (&i1, e.transcendental().coordinates_of_rows(image.basis())) {
        (Ok(i1), Ok(coords)) => {
            let divisors = smith(&coords).elementary_divisors();
            let want: Vec<Int> = if n == 1 { vec![] } else { vec![Int::from(n)] };
            Check::new("i1-embedding", bool_verdict(divisors == want))
                .with("matrix", i1.matrix())
                .with("cokernel in T(E1xF)", render_group(&divisors))
        }
        (Err(e), _) => Check::new("i1-embedding", Verdict::Refuted).with("error", e),
        (_, Err(e)) => Check::new("i1-embedding", Verdict::Refuted).with("error", e),
    }
    .expect(Verdict::Verified);
    r.push(c);

    // 7
    let c = match kappa(&b, e.transcendental()) {
        Ok(alpha) => {
            let k = alpha.kernel_lattice();
            let ok = alpha.order() == Int::from(n) && k.same_span(&image);
            Check::new("brauer-class", bool_verdict(ok))
                .with("B", render_rats(b.coords()))
                .with("values", render_rats(alpha.values()))
                .with("order", alpha.order())
                .with("kernel", k.basis())
        }
        Err(e) => Check::new("brauer-class", Verdict::Refuted).with("error", e),
    }
    .expect(Verdict::Verified);
    r.push(c);

    // 8
    let twisted_e = TwistedSurface::new(e.h2().clone(), b.clone());
    let c = match &twisted_e {
        Ok(te) => {
            let up = exp_b_onto(te.kernel(), &b, 1, te.generalized());
            let expected = Sublattice::new(
                te.generalized().ambient().clone(),
                p2::expected_twisted_t(n),
            )
            .expect("independent rows");
            match up {
                Ok(m) => Check::new(
                    "exp-b-image",
                    bool_verdict(te.generalized().same_span(&expected)),
                )
                .with("T(E1xF,B)", te.generalized().basis())
                .with("gram", te.generalized().gram())
                .with("exp(B) matrix", m.matrix()),
                Err(err) => Check::new("exp-b-image", Verdict::Refuted).with("error", err),
            }
        }
        Err(err) => Check::new("exp-b-image", Verdict::Refuted).with("error", err),
    }
    .expect(Verdict::Verified);
    r.push(c);

    // 9
    let zero_b = BField::zero(a.h2().lattice().clone());
    let twisted_a = TwistedSurface::new(a.h2().clone(), zero_b.clone());
    let mut witness = None;
    let c = match (&twisted_a, &twisted_e) {
        (Ok(ta), Ok(te)) => match t_equivalence(ta, te, bound) {
            Ok(v) => {
                let c = verdict_check("t-equivalence", &v);
                if let TVerdict::Equivalent(w) = v {
                    witness = Some(w);
                }
                c
            }
            Err(err) => Check::new("t-equivalence", Verdict::Refuted).with("error", err),
        },
        (Err(err), _) | (_, Err(err)) => {
            Check::new("t-equivalence", Verdict::Refuted).with("error", err)
        }
    }
    .expect(Verdict::Verified);
    r.push(c);

    // 10
    let c = kummer_check(&a, &zero_b, &e, &b, n, witness.as_ref()).expect(Verdict::Verified);
    r.push(c);
    r
}

fn kummer_check(
    a: &twistlat::AbelianSurfaceModel,
    zero_b: &BField,
    e: &twistlat::AbelianSurfaceModel,
    b: &BField,
    n: i64,
    witness: Option<&IsometryMap>,
) -> Check {
    const NAME: &str = "kummer-class";
    let pairs = KummerPair::new(a, zero_b).and_then(|pa| Ok((pa, KummerPair::new(e, b)?)));
    let (pa, pe) = match pairs {
        Ok(p) => p,
        Err(err) => return Check::new(NAME, Verdict::Refuted).with("error", err),
    };
    let beta = match theta(&pe.model, b) {
        Ok(t) => t,
        Err(err) => return Check::new(NAME, Verdict::Refuted).with("error", err),
    };
    let mut c = Check::new(NAME, Verdict::Verified)
        .with("T_km gram", pe.model.t_km().gram())
        .with("Theta values", render_rats(beta.values()))
        .with("order", beta.order());
    if beta.order() != Int::from(n) {
        c.verdict = Verdict::Refuted;
        return c;
    }
    let Some(g) = witness else {
        c.verdict = Verdict::Inconclusive;
        c.add("transport", "no T-equivalence witness to transport");
        return c;
    };
    match transport_isometry(&pa, &pe, g) {
        Ok(t) => {
            c.add("transported", t.map.matrix());
            if let Some(l) = t.map.lambda() {
                c.add("lambda", l);
            }
            c.add("diagram commutes", t.commutes());
            if !t.commutes() {
                c.verdict = Verdict::Refuted;
            }
        }
        Err(err) => {
            c.verdict = Verdict::Refuted;
            c.add("error", err);
        }
    }
    c
}

/// Report entry for a T-equivalence verdict.
pub fn verdict_check(name: &str, v: &TVerdict) -> Check {
    match v {
        TVerdict::Equivalent(w) => {
            let mut c = Check::new(name, Verdict::Verified);
            witness_entries(&mut c, w);
            c
        }
        TVerdict::Refuted(m) => Check::new(name, Verdict::Refuted).with("invariant", m),
        TVerdict::Inconclusive { bound } => {
            Check::new(name, Verdict::Inconclusive).with("bound exhausted", bound)
        }
    }
}

fn describe_period(h: &twistlat::HodgeLattice) -> String {
    let l = h.lattice();
    let mut terms = Vec::new();
    for i in 0..l.rank() {
        let coeffs: Vec<Rat> = h.period().columns().iter().map(|c| c[i].clone()).collect();
        if coeffs.iter().all(Zero::is_zero) {
            continue;
        }
        let c = h.symbols().format_element(&coeffs);
        let wrapped = if coeffs.iter().filter(|x| !x.is_zero()).count() > 1 {
            format!("({c})")
        } else {
            c
        };
        terms.push(format!("{wrapped} {}", l.label(i)));
    }
    terms.join(" + ")
}

pub(crate) fn render_rats(v: &[Rat]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

pub(crate) fn render_group(d: &[Int]) -> String {
    if d.is_empty() {
        return "trivial".into();
    }
    d.iter()
        .map(|x| format!("Z/{x}"))
        .collect::<Vec<_>>()
        .join(" + ")
}

/// The two sides of the twisted comparison as documents: `A_n` with no
/// B-field and `E1 x F` with `B = k2 / n`.
pub fn example43_documents(n: i64) -> (SpecDocument, SpecDocument) {
    let a = p2::abelian_a(n);
    let e = p2::e1_times_f(n);
    let b = p2::brauer_field(n);
    (
        SpecDocument::from_surface("A", a.h2(), None),
        SpecDocument::from_surface("E1xF", e.h2(), Some(&b)),
    )
}
