// SPDX-License-Identifier: Apache-2.0

//! The structured text input format.
//!
//! ```text
//! # comment
//! [lattice U]
//! gram = 0 1; 1 0
//! labels = e f
//!
//! [symbols periods]
//! symbols = 1 w1 w2 w1w2
//! product = w1 w2 : 1 w1w2
//!
//! [period sigma]
//! lattice = U
//! symbols = periods
//! coeff 1 = 1 0
//! coeff w1 = 1/2 0
//!
//! [bfield B]
//! lattice = U
//! coords = 1/2 0
//!
//! [sublattice T]
//! ambient = U
//! basis = 1 0; 0 2
//!
//! [surface X]
//! period = sigma
//! bfield = B
//! ```
//!
//! Section names are unique per kind. A `product` line declares
//! `a * b` as a sum of `coefficient symbol` terms separated by commas.

use std::collections::BTreeSet;
use std::fmt::{self, Write as _};

use num_traits::Zero;
use twistlat::hodge::{HodgeLattice, PeriodVector, SymbolBasis};
use twistlat::{BField, Int, IntMatrix, Lattice, Rat, Sublattice};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct DocError {
    pub line: usize,
    pub message: String,
}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, DocError> {
    Err(DocError {
        line,
        message: message.into(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductDecl {
    pub left: String,
    pub right: String,
    pub terms: Vec<(Rat, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Section {
    Lattice {
        name: String,
        gram: IntMatrix,
        labels: Option<Vec<String>>,
    },
    Symbols {
        name: String,
        symbols: Vec<String>,
        products: Vec<ProductDecl>,
    },
    Period {
        name: String,
        lattice: String,
        symbols: String,
        coeffs: Vec<(String, Vec<Rat>)>,
    },
    BField {
        name: String,
        lattice: String,
        coords: Vec<Rat>,
    },
    Sublattice {
        name: String,
        ambient: String,
        basis: IntMatrix,
    },
    Surface {
        name: String,
        period: String,
        bfield: Option<String>,
    },
}

impl Section {
    pub fn kind(&self) -> &'static str {
        match self {
            Self::Lattice { .. } => "lattice",
            Self::Symbols { .. } => "symbols",
            Self::Period { .. } => "period",
            Self::BField { .. } => "bfield",
            Self::Sublattice { .. } => "sublattice",
            Self::Surface { .. } => "surface",
        }
    }

    pub fn name(&self) -> &str {
        match self {
            Self::Lattice { name, .. }
            | Self::Symbols { name, .. }
            | Self::Period { name, .. }
            | Self::BField { name, .. }
            | Self::Sublattice { name, .. }
            | Self::Surface { name, .. } => name,
        }
    }
}

/// A parsed and validated document.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SpecDocument {
    sections: Vec<Section>,
}

/// Lookup failures after validation are impossible for parsed documents;
/// this error covers documents assembled in code.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LookupError {
    #[error("no {0} named `{1}`")]
    Missing(&'static str, String),
    #[error("{0}")]
    Invalid(String),
}

fn invalid(e: impl fmt::Display) -> LookupError {
    LookupError::Invalid(e.to_string())
}

impl SpecDocument {
    pub fn sections(&self) -> &[Section] {
        &self.sections
    }

    pub fn names(&self, kind: &str) -> Vec<&str> {
        self.sections
            .iter()
            .filter(|s| s.kind() == kind)
            .map(Section::name)
            .collect()
    }

    fn find(&self, kind: &'static str, name: &str) -> Result<&Section, LookupError> {
        self.sections
            .iter()
            .find(|s| s.kind() == kind && s.name() == name)
            .ok_or_else(|| LookupError::Missing(kind, name.to_string()))
    }

    pub fn lattice(&self, name: &str) -> Result<Lattice, LookupError> {
        let Section::Lattice { gram, labels, .. } = self.find("lattice", name)? else {
            unreachable!()
        };
        let l = Lattice::new(gram.clone()).map_err(invalid)?;
        match labels {
            Some(ls) => l.with_labels(ls.clone()).map_err(invalid),
            None => Ok(l),
        }
    }

    pub fn symbol_basis(&self, name: &str) -> Result<SymbolBasis, LookupError> {
        let Section::Symbols {
            symbols, products, ..
        } = self.find("symbols", name)?
        else {
            unreachable!()
        };
        let mut b = SymbolBasis::new(symbols.clone()).map_err(invalid)?;
        for p in products {
            let terms: Vec<(Rat, &str)> = p
                .terms
                .iter()
                .map(|(c, s)| (c.clone(), s.as_str()))
                .collect();
            b.declare_product(&p.left, &p.right, &terms)
                .map_err(invalid)?;
        }
        Ok(b)
    }

    pub fn hodge(&self, period: &str) -> Result<HodgeLattice, LookupError> {
        let Section::Period {
            lattice,
            symbols,
            coeffs,
            ..
        } = self.find("period", period)?
        else {
            unreachable!()
        };
        let l = self.lattice(lattice)?;
        let b = self.symbol_basis(symbols)?;
        let mut columns = vec![vec![Rat::zero(); l.rank()]; b.len()];
        for (s, v) in coeffs {
            if v.len() != l.rank() {
                return Err(LookupError::Invalid(format!(
                    "coefficient of `{s}` has length {}, lattice `{lattice}` has rank {}",
                    v.len(),
                    l.rank()
                )));
            }
            columns[b.index_of(s).map_err(invalid)?] = v.clone();
        }
        let p = PeriodVector::new(l.rank(), columns).map_err(invalid)?;
        HodgeLattice::new(l, b, p).map_err(invalid)
    }

    pub fn bfield(&self, name: &str) -> Result<BField, LookupError> {
        let Section::BField {
            lattice, coords, ..
        } = self.find("bfield", name)?
        else {
            unreachable!()
        };
        BField::new(self.lattice(lattice)?, coords.clone()).map_err(invalid)
    }

    pub fn sublattice(&self, name: &str) -> Result<Sublattice, LookupError> {
        let Section::Sublattice { ambient, basis, .. } = self.find("sublattice", name)? else {
            unreachable!()
        };
        Sublattice::new(self.lattice(ambient)?, basis.clone()).map_err(invalid)
    }

    /// The Hodge lattice of a surface and its B-field (zero when absent).
    pub fn surface(&self, name: &str) -> Result<(HodgeLattice, BField), LookupError> {
        let Section::Surface { period, bfield, .. } = self.find("surface", name)? else {
            unreachable!()
        };
        let h = self.hodge(period)?;
        let b = match bfield {
            Some(b) => {
                let b = self.bfield(b)?;
                if b.ambient().gram() != h.lattice().gram() {
                    return Err(LookupError::Invalid(format!(
                        "surface `{name}`: B-field and period live on different lattices"
                    )));
                }
                b
            }
            None => BField::zero(h.lattice().clone()),
        };
        Ok((h, b))
    }

    /// The only surface, or the named one.
    pub fn pick_surface(
        &self,
        name: Option<&str>,
    ) -> Result<(String, HodgeLattice, BField), LookupError> {
        let name = match name {
            Some(n) => n.to_string(),
            None => {
                let all = self.names("surface");
                match all.as_slice() {
                    [one] => one.to_string(),
                    [] => {
                        return Err(LookupError::Invalid(
                            "document has no surface section".into(),
                        ))
                    }
                    _ => {
                        return Err(LookupError::Invalid(format!(
                            "document has {} surfaces; choose one by name",
                            all.len()
                        )))
                    }
                }
            }
        };
        let (h, b) = self.surface(&name)?;
        Ok((name, h, b))
    }

    /// Adds a section; fails if the name is taken for its kind.
    pub fn push(&mut self, section: Section) -> Result<(), LookupError> {
        if self
            .sections
            .iter()
            .any(|s| s.kind() == section.kind() && s.name() == section.name())
        {
            return Err(LookupError::Invalid(format!(
                "duplicate {} `{}`",
                section.kind(),
                section.name()
            )));
        }
        self.sections.push(section);
        Ok(())
    }

    /// A document describing one surface: lattice, symbols, period,
    /// optional B-field and the surface section, all named after `name`.
    pub fn from_surface(name: &str, h: &HodgeLattice, b: Option<&BField>) -> Self {
        let mut doc = Self::default();
        let l = h.lattice();
        let labels = l.labels().map(<[String]>::to_vec);
        let sections = [
            Section::Lattice {
                name: format!("{name}_h2"),
                gram: l.gram().clone(),
                labels,
            },
            Section::Symbols {
                name: format!("{name}_symbols"),
                symbols: h.symbols().symbols().to_vec(),
                products: declared_products(h.symbols()),
            },
            Section::Period {
                name: format!("{name}_period"),
                lattice: format!("{name}_h2"),
                symbols: format!("{name}_symbols"),
                coeffs: h
                    .symbols()
                    .symbols()
                    .iter()
                    .zip(h.period().columns())
                    .filter(|(_, c)| c.iter().any(|x| !x.is_zero()))
                    .map(|(s, c)| (s.clone(), c.clone()))
                    .collect(),
            },
        ];
        for s in sections {
            doc.push(s).expect("fresh names");
        }
        if let Some(b) = b {
            doc.push(Section::BField {
                name: format!("{name}_b"),
                lattice: format!("{name}_h2"),
                coords: b.coords().to_vec(),
            })
            .expect("fresh name");
        }
        doc.push(Section::Surface {
            name: name.to_string(),
            period: format!("{name}_period"),
            bfield: b.map(|_| format!("{name}_b")),
        })
        .expect("fresh name");
        doc
    }

    /// Canonical text; parsing it yields an equal document.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (i, s) in self.sections.iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            let _ = writeln!(out, "[{} {}]", s.kind(), s.name());
            match s {
                Section::Lattice { gram, labels, .. } => {
                    let _ = writeln!(out, "gram = {}", render_matrix(gram));
                    if let Some(ls) = labels {
                        let _ = writeln!(out, "labels = {}", ls.join(" "));
                    }
                }
                Section::Symbols {
                    symbols, products, ..
                } => {
                    let _ = writeln!(out, "symbols = {}", symbols.join(" "));
                    for p in products {
                        let terms: Vec<String> =
                            p.terms.iter().map(|(c, s)| format!("{c} {s}")).collect();
                        let _ = writeln!(
                            out,
                            "product = {} {} : {}",
                            p.left,
                            p.right,
                            terms.join(", ")
                        );
                    }
                }
                Section::Period {
                    lattice,
                    symbols,
                    coeffs,
                    ..
                } => {
                    let _ = writeln!(out, "lattice = {lattice}");
                    let _ = writeln!(out, "symbols = {symbols}");
                    for (s, v) in coeffs {
                        let _ = writeln!(out, "coeff {s} = {}", render_vec(v));
                    }
                }
                Section::BField {
                    lattice, coords, ..
                } => {
                    let _ = writeln!(out, "lattice = {lattice}");
                    let _ = writeln!(out, "coords = {}", render_vec(coords));
                }
                Section::Sublattice { ambient, basis, .. } => {
                    let _ = writeln!(out, "ambient = {ambient}");
                    let _ = writeln!(out, "basis = {}", render_matrix(basis));
                }
                Section::Surface { period, bfield, .. } => {
                    let _ = writeln!(out, "period = {period}");
                    if let Some(b) = bfield {
                        let _ = writeln!(out, "bfield = {b}");
                    }
                }
            }
        }
        out
    }
}

fn declared_products(b: &SymbolBasis) -> Vec<ProductDecl> {
    b.declared_products()
        .map(|(l, r, v)| ProductDecl {
            left: l.to_string(),
            right: r.to_string(),
            terms: b
                .symbols()
                .iter()
                .zip(v)
                .filter(|(_, c)| !c.is_zero())
                .map(|(s, c)| (c.clone(), s.clone()))
                .collect(),
        })
        .collect()
}

fn render_vec<T: fmt::Display>(v: &[T]) -> String {
    v.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

fn render_matrix(m: &IntMatrix) -> String {
    m.row_iter().map(render_vec).collect::<Vec<_>>().join("; ")
}

fn parse_int(tok: &str, line: usize) -> Result<Int, DocError> {
    tok.parse::<Int>()
        .or_else(|_| err(line, format!("`{tok}` is not an integer")))
}

fn parse_rat(tok: &str, line: usize) -> Result<Rat, DocError> {
    match tok.split_once('/') {
        Some((p, q)) => {
            let p = parse_int(p, line)?;
            let q = parse_int(q, line)?;
            if q.is_zero() {
                return err(line, format!("`{tok}` has zero denominator"));
            }
            Ok(Rat::new(p, q))
        }
        None => Ok(Rat::from_integer(parse_int(tok, line)?)),
    }
}

fn parse_rats(value: &str, line: usize) -> Result<Vec<Rat>, DocError> {
    value
        .split_whitespace()
        .map(|t| parse_rat(t, line))
        .collect()
}

fn parse_matrix(value: &str, line: usize) -> Result<IntMatrix, DocError> {
    let rows: Vec<Vec<Int>> = value
        .split(';')
        .map(|r| r.split_whitespace().map(|t| parse_int(t, line)).collect())
        .collect::<Result<_, _>>()?;
    let cols = rows.first().map_or(0, Vec::len);
    if cols == 0 {
        return err(line, "empty matrix row");
    }
    if rows.iter().any(|r| r.len() != cols) {
        return err(line, "matrix rows have different lengths");
    }
    IntMatrix::from_rows(rows, cols).or_else(|e| err(line, e.to_string()))
}

fn parse_name(value: &str, line: usize) -> Result<String, DocError> {
    let mut it = value.split_whitespace();
    match (it.next(), it.next()) {
        (Some(n), None) => Ok(n.to_string()),
        _ => err(line, format!("expected a single name, found `{value}`")),
    }
}

fn parse_product(value: &str, line: usize) -> Result<ProductDecl, DocError> {
    let Some((lhs, rhs)) = value.split_once(':') else {
        return err(line, "product needs `a b : c s, ...`");
    };
    let names: Vec<&str> = lhs.split_whitespace().collect();
    let [left, right] = names.as_slice() else {
        return err(line, "product needs exactly two factors before `:`");
    };
    let mut terms = Vec::new();
    for t in rhs.split(',') {
        let parts: Vec<&str> = t.split_whitespace().collect();
        match parts.as_slice() {
            [c, s] => terms.push((parse_rat(c, line)?, s.to_string())),
            [] if rhs.trim().is_empty() => {}
            _ => {
                return err(
                    line,
                    format!("product term `{}` is not `coefficient symbol`", t.trim()),
                )
            }
        }
    }
    Ok(ProductDecl {
        left: left.to_string(),
        right: right.to_string(),
        terms,
    })
}

/// Key/value pairs of one section, with line numbers.
struct Raw {
    kind: String,
    name: String,
    line: usize,
    entries: Vec<(String, String, usize)>,
}

impl Raw {
    fn allow(&self, keys: &[&str]) -> Result<(), DocError> {
        let mut seen = BTreeSet::new();
        for (k, _, line) in &self.entries {
            let head = k.split_whitespace().next().unwrap_or("");
            if !keys.contains(&head) {
                return err(
                    *line,
                    format!("unknown key `{k}` in [{} {}]", self.kind, self.name),
                );
            }
            if head != "product" && !seen.insert(k.clone()) {
                return err(*line, format!("duplicate key `{k}`"));
            }
        }
        Ok(())
    }

    fn get(&self, key: &str) -> Option<(&str, usize)> {
        self.entries
            .iter()
            .find(|(k, _, _)| k == key)
            .map(|(_, v, l)| (v.as_str(), *l))
    }

    fn require(&self, key: &str) -> Result<(&str, usize), DocError> {
        self.get(key).map_or_else(
            || {
                err(
                    self.line,
                    format!("[{} {}] is missing `{key}`", self.kind, self.name),
                )
            },
            Ok,
        )
    }
}

fn split_sections(text: &str) -> Result<Vec<Raw>, DocError> {
    let mut out: Vec<Raw> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let t = raw.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        if let Some(inner) = t.strip_prefix('[') {
            let Some(inner) = inner.strip_suffix(']') else {
                return err(line, "section header must end with `]`");
            };
            let parts: Vec<&str> = inner.split_whitespace().collect();
            let [kind, name] = parts.as_slice() else {
                return err(line, "section header must be `[kind name]`");
            };
            const KINDS: [&str; 6] = [
                "lattice",
                "symbols",
                "period",
                "bfield",
                "sublattice",
                "surface",
            ];
            if !KINDS.contains(kind) {
                return err(line, format!("unknown section kind `{kind}`"));
            }
            out.push(Raw {
                kind: kind.to_string(),
                name: name.to_string(),
                line,
                entries: Vec::new(),
            });
            continue;
        }
        let Some((k, v)) = t.split_once('=') else {
            return err(line, "expected `key = value`");
        };
        let Some(section) = out.last_mut() else {
            return err(line, "key outside of any section");
        };
        let key = k.split_whitespace().collect::<Vec<_>>().join(" ");
        if key.is_empty() {
            return err(line, "empty key");
        }
        section.entries.push((key, v.trim().to_string(), line));
    }
    Ok(out)
}

fn build(raw: &Raw) -> Result<Section, DocError> {
    let name = raw.name.clone();
    Ok(match raw.kind.as_str() {
        "lattice" => {
            raw.allow(&["gram", "labels"])?;
            let (g, gl) = raw.require("gram")?;
            let gram = parse_matrix(g, gl)?;
            if !gram.is_square() {
                return err(
                    gl,
                    format!("gram is {}x{}, not square", gram.rows(), gram.cols()),
                );
            }
            if let Some((i, j)) = gram.asymmetry() {
                return err(
                    gl,
                    format!("gram is not symmetric at ({}, {})", i + 1, j + 1),
                );
            }
            if gram.det().map(|d| d.is_zero()).unwrap_or(true) {
                return err(gl, "gram is degenerate");
            }
            let labels = match raw.get("labels") {
                Some((v, l)) => {
                    let ls: Vec<String> = v.split_whitespace().map(str::to_string).collect();
                    if ls.len() != gram.rows()
                        || ls.iter().collect::<BTreeSet<_>>().len() != ls.len()
                    {
                        return err(l, format!("need {} distinct labels", gram.rows()));
                    }
                    Some(ls)
                }
                None => None,
            };
            Section::Lattice { name, gram, labels }
        }
        "symbols" => {
            raw.allow(&["symbols", "product"])?;
            let (v, _) = raw.require("symbols")?;
            let symbols = v.split_whitespace().map(str::to_string).collect();
            let products = raw
                .entries
                .iter()
                .filter(|(k, _, _)| k == "product")
                .map(|(_, v, l)| parse_product(v, *l))
                .collect::<Result<_, _>>()?;
            Section::Symbols {
                name,
                symbols,
                products,
            }
        }
        "period" => {
            raw.allow(&["lattice", "symbols", "coeff"])?;
            let (l, ll) = raw.require("lattice")?;
            let (s, sl) = raw.require("symbols")?;
            let mut coeffs = Vec::new();
            for (k, v, line) in &raw.entries {
                let mut parts = k.split_whitespace();
                if parts.next() != Some("coeff") {
                    continue;
                }
                let (Some(sym), None) = (parts.next(), parts.next()) else {
                    return err(*line, "expected `coeff SYMBOL = ...`");
                };
                coeffs.push((sym.to_string(), parse_rats(v, *line)?));
            }
            Section::Period {
                name,
                lattice: parse_name(l, ll)?,
                symbols: parse_name(s, sl)?,
                coeffs,
            }
        }
        "bfield" => {
            raw.allow(&["lattice", "coords"])?;
            let (l, ll) = raw.require("lattice")?;
            let (c, cl) = raw.require("coords")?;
            Section::BField {
                name,
                lattice: parse_name(l, ll)?,
                coords: parse_rats(c, cl)?,
            }
        }
        "sublattice" => {
            raw.allow(&["ambient", "basis"])?;
            let (a, al) = raw.require("ambient")?;
            let (b, bl) = raw.require("basis")?;
            Section::Sublattice {
                name,
                ambient: parse_name(a, al)?,
                basis: parse_matrix(b, bl)?,
            }
        }
        "surface" => {
            raw.allow(&["period", "bfield"])?;
            let (p, pl) = raw.require("period")?;
            let bfield = match raw.get("bfield") {
                Some((b, bl)) => Some(parse_name(b, bl)?),
                None => None,
            };
            Section::Surface {
                name,
                period: parse_name(p, pl)?,
                bfield,
            }
        }
        _ => unreachable!("kinds are checked while splitting"),
    })
}

/// Parses and fully validates a document.
pub fn parse_spec(text: &str) -> Result<SpecDocument, DocError> {
    let raws = split_sections(text)?;
    let mut doc = SpecDocument::default();
    for raw in &raws {
        let section = build(raw)?;
        doc.push(section)
            .or_else(|e| err(raw.line, e.to_string()))?;
    }
    // references resolve to earlier or later sections alike
    for (raw, s) in raws.iter().zip(doc.sections()) {
        let r = match s {
            Section::Lattice { name, .. } => doc.lattice(name).map(drop),
            Section::Symbols { name, .. } => doc.symbol_basis(name).map(drop),
            Section::Period { name, .. } => doc.hodge(name).map(drop),
            Section::BField { name, .. } => doc.bfield(name).map(drop),
            Section::Sublattice { name, .. } => doc.sublattice(name).map(drop),
            Section::Surface { name, .. } => doc.surface(name).map(drop),
        };
        r.or_else(|e| err(raw.line, format!("[{} {}]: {e}", s.kind(), s.name())))?;
    }
    Ok(doc)
}
