// SPDX-License-Identifier: Apache-2.0

//! Report generators for the document-driven subcommands.

use twistlat::brauer::kappa;
use twistlat::brauer::{exp_b_onto, exp_neg_b};
use twistlat::isometry::verify;
use twistlat::kummer::{kummer_transcendental, t_equivalence, theta, TwistedSurface};
use twistlat::{AbelianSurfaceModel, Int};

use crate::doc::{LookupError, SpecDocument};
use crate::example43::{render_group, render_rats, verdict_check};
use crate::report::{Check, Report, Verdict};

/// Anything that makes a command unable to run; mapped to exit code 3.
#[derive(Debug, thiserror::Error)]
pub enum InputError {
    #[error(transparent)]
    Parse(#[from] crate::doc::DocError),
    #[error(transparent)]
    Lookup(#[from] LookupError),
    #[error("{0}")]
    Math(#[from] twistlat::Error),
    #[error("{0}")]
    Other(String),
}

fn bool_check(name: &str, ok: bool) -> Check {
    Check::new(
        name,
        if ok {
            Verdict::Verified
        } else {
            Verdict::Refuted
        },
    )
}

fn lattice_names<'a>(
    doc: &'a SpecDocument,
    name: Option<&'a str>,
) -> Result<Vec<&'a str>, InputError> {
    match name {
        Some(n) => {
            doc.lattice(n)?;
            Ok(vec![n])
        }
        None if doc.names("lattice").is_empty() => {
            Err(InputError::Other("document has no lattice section".into()))
        }
        None => Ok(doc.names("lattice")),
    }
}

pub fn lattice_info(doc: &SpecDocument, name: Option<&str>) -> Result<Report, InputError> {
    let mut r = Report::new(command("lattice-info", name));
    for n in lattice_names(doc, name)? {
        let l = doc.lattice(n)?;
        r.value(format!("lattice {n}"), &l);
        r.value(
            format!("{n} parity"),
            if l.is_even() { "even" } else { "odd" },
        );
    }
    Ok(r)
}

pub fn disc(doc: &SpecDocument, name: Option<&str>) -> Result<Report, InputError> {
    let mut r = Report::new(command("disc", name));
    for n in lattice_names(doc, name)? {
        let l = doc.lattice(n)?;
        let d = l.discriminant_form();
        r.value(format!("{n} group"), render_group(&d.elementary_divisors));
        r.value(format!("{n} form"), &d);
        r.push(
            bool_check(
                &format!("{n} order = |det|"),
                d.order() == num_traits::Signed::abs(&l.det()),
            )
            .with("order", d.order()),
        );
    }
    Ok(r)
}

pub fn transcendental(doc: &SpecDocument, surface: Option<&str>) -> Result<Report, InputError> {
    let (name, h, _) = doc.pick_surface(surface)?;
    let mut r = Report::new(command("transcendental", Some(&name)));
    let t = h.transcendental_lattice();
    let (ns, rho) = h.ns_and_picard();
    r.value("T basis", t.basis());
    r.value("T gram", t.gram());
    r.value("NS basis", ns.basis());
    r.value("NS gram", ns.gram());
    r.value("picard number", rho);
    let sq = h.period_square()?;
    r.push(
        bool_check("period isotropic", sq.iter().all(num_traits::Zero::is_zero))
            .with("sigma^2", h.symbols().format_element(&sq)),
    );
    let ranks_add = t.rank() + ns.rank() == h.lattice().rank();
    r.push(
        bool_check("T and NS ranks add up", ranks_add)
            .with("rank T", t.rank())
            .with("rank NS", ns.rank()),
    );
    r.push(bool_check("T primitive", t.is_primitive()));
    Ok(r)
}

/// `T(X,B)` inside the Mukai lattice together with `exp(B)` checks.
pub fn twist(doc: &SpecDocument, surface: Option<&str>) -> Result<Report, InputError> {
    let (name, h, b) = doc.pick_surface(surface)?;
    let mut r = Report::new(command("twist", Some(&name)));
    let x = TwistedSurface::new(h, b.clone())?;
    r.value("B", render_rats(b.coords()));
    r.value("T(X,B) basis", x.generalized().basis());
    r.value("T(X,B) gram", x.generalized().gram());
    let up = exp_b_onto(x.kernel(), &b, 1, x.generalized());
    let c = match &up {
        Ok(m) => bool_check("exp(B) maps the kernel onto T(X,B)", verify(m).is_ok())
            .with("matrix", m.matrix()),
        Err(e) => {
            Check::new("exp(B) maps the kernel onto T(X,B)", Verdict::Refuted).with("error", e)
        }
    };
    r.push(c);
    let down = exp_neg_b(x.generalized(), &b, 1, x.kernel());
    let c = match &down {
        Ok(m) => bool_check("exp(-B) returns to the kernel", verify(m).is_ok())
            .with("matrix", m.matrix()),
        Err(e) => Check::new("exp(-B) returns to the kernel", Verdict::Refuted).with("error", e),
    };
    r.push(c);
    Ok(r)
}

pub fn kernel(doc: &SpecDocument, surface: Option<&str>) -> Result<Report, InputError> {
    let (name, h, b) = doc.pick_surface(surface)?;
    let mut r = Report::new(command("kernel", Some(&name)));
    let t = h.transcendental_lattice();
    let alpha = kappa(&b, &t)?;
    let k = alpha.kernel_lattice();
    r.value("values on T", render_rats(alpha.values()));
    r.value("order", alpha.order());
    r.value("kernel basis", k.basis());
    r.value("kernel gram", k.gram());
    let coords = t.coordinates_of_rows(k.basis())?;
    let index = num_traits::Signed::abs(&coords.det()?);
    r.push(
        bool_check("index equals order", index == alpha.order())
            .with("index", &index)
            .with("order", alpha.order()),
    );
    Ok(r)
}

pub fn theta_report(doc: &SpecDocument, surface: Option<&str>) -> Result<Report, InputError> {
    let (name, h, b) = doc.pick_surface(surface)?;
    let mut r = Report::new(command("theta", Some(&name)));
    let a = AbelianSurfaceModel::new(h)?;
    let km = kummer_transcendental(&a)?;
    let t = a.transcendental();
    r.value("T(A) gram", t.gram());
    r.value("T_km gram", km.t_km().gram());
    let doubled = t.gram().scale(&Int::from(2));
    r.push(bool_check(
        "T_km gram is twice T(A) gram",
        &doubled == km.t_km().gram(),
    ));
    let alpha_order = kappa(&b, t)?.order();
    let beta = theta(&km, &b)?;
    r.value("Theta values", render_rats(beta.values()));
    r.push(
        bool_check("Theta keeps the order", beta.order() == alpha_order)
            .with("order on A", &alpha_order)
            .with("order on Km", beta.order()),
    );
    Ok(r)
}

/// T-equivalence of two twisted surfaces given by documents.
pub fn t_equiv_report(
    doc1: &SpecDocument,
    doc2: &SpecDocument,
    names: (Option<&str>, Option<&str>),
    bound: u32,
) -> Result<Report, InputError> {
    let (n1, h1, b1) = doc1.pick_surface(names.0)?;
    let (n2, h2, b2) = doc2.pick_surface(names.1)?;
    let mut r = Report::new(format!("tequiv {n1} {n2} --bound {bound}"));
    let s1 = TwistedSurface::new(h1, b1)?;
    let s2 = TwistedSurface::new(h2, b2)?;
    r.value(format!("T({n1},B) gram"), s1.generalized().gram());
    r.value(format!("T({n2},B) gram"), s2.generalized().gram());
    let v = t_equivalence(&s1, &s2, bound)?;
    r.push(verdict_check("t-equivalence", &v));
    Ok(r)
}

fn command(name: &str, arg: Option<&str>) -> String {
    match arg {
        Some(a) => format!("{name} {a}"),
        None => name.to_string(),
    }
}
