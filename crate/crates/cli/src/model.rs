//! The parsed contents of a definition file and its canonical rendering.

use std::fmt::{self, Write as _};

use diracwb_core::geometry::{AlgebroidStructure, Bivector, Endomorphism, TwoForm};
use diracwb_core::proto::{DoubleSubbundle, ProtoStructure};
use diracwb_core::{Matrix, Names, Poly, Superfunction};

/// The version written in the `diracwb` header line.
pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DefinitionFile {
    pub version: u32,
    pub names: Names,
    pub mu: Superfunction,
    pub phi: Superfunction,
    pub gamma: Superfunction,
    pub psi: Superfunction,
    pub structures: Vec<Declaration>,
    pub checks: Vec<Invocation>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Declaration {
    pub name: String,
    pub value: Structure,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Structure {
    Bivector(Superfunction),
    TwoForm(Superfunction),
    /// Row-major in the frame order.
    Endo(Matrix),
    /// Columns span a subbundle of `A` or `A*`.
    Span(Matrix),
    /// Columns span a subbundle of `A ⊕ A*`, vector part on top.
    Subbundle(Matrix),
    /// The graph of a declared bivector or two-form.
    Graph(String),
}

impl Structure {
    pub fn keyword(&self) -> &'static str {
        match self {
            Structure::Bivector(_) => "bivector",
            Structure::TwoForm(_) => "twoform",
            Structure::Endo(_) => "endo",
            Structure::Span(_) => "span",
            Structure::Subbundle(_) | Structure::Graph(_) => "subbundle",
        }
    }
}

/// A named check with `key=value` parameters in written order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Invocation {
    pub check: String,
    pub params: Vec<(String, String)>,
}

impl Invocation {
    pub fn new(check: impl Into<String>) -> Self {
        Self {
            check: check.into(),
            params: Vec::new(),
        }
    }

    pub fn with(mut self, key: &str, value: impl Into<String>) -> Self {
        self.params.push((key.to_string(), value.into()));
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.params.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }
}

impl fmt::Display for Invocation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.check)?;
        for (k, v) in &self.params {
            write!(f, " {k}={v}")?;
        }
        Ok(())
    }
}

impl DefinitionFile {
    pub fn base_dim(&self) -> usize {
        self.names.base.len()
    }

    pub fn rank(&self) -> usize {
        self.names.frames.len()
    }

    pub fn lookup(&self, name: &str) -> Option<&Structure> {
        self.structures.iter().find(|d| d.name == name).map(|d| &d.value)
    }

    pub fn algebroid(&self) -> diracwb_core::Result<AlgebroidStructure> {
        AlgebroidStructure::from_mu(self.base_dim(), self.rank(), self.mu.clone())
    }

    pub fn proto(&self) -> diracwb_core::Result<ProtoStructure> {
        ProtoStructure::new(
            self.base_dim(),
            self.rank(),
            self.phi.clone(),
            self.gamma.clone(),
            self.mu.clone(),
            self.psi.clone(),
        )
    }

    pub fn bivector(&self, name: &str) -> Option<Bivector> {
        match self.lookup(name)? {
            Structure::Bivector(e) => Bivector::new(self.rank(), e.clone()).ok(),
            _ => None,
        }
    }

    pub fn two_form(&self, name: &str) -> Option<TwoForm> {
        match self.lookup(name)? {
            Structure::TwoForm(e) => TwoForm::new(self.rank(), e.clone()).ok(),
            _ => None,
        }
    }

    pub fn endomorphism(&self, name: &str) -> Option<Endomorphism> {
        match self.lookup(name)? {
            Structure::Endo(m) => Some(Endomorphism::new(m.clone())),
            _ => None,
        }
    }

    pub fn span(&self, name: &str) -> Option<Matrix> {
        match self.lookup(name)? {
            Structure::Span(m) => Some(m.clone()),
            _ => None,
        }
    }

    /// A subbundle of `A ⊕ A*`: declared directly, or the graph of a
    /// bivector or two-form.
    pub fn subbundle(&self, name: &str) -> Option<DoubleSubbundle> {
        match self.lookup(name)? {
            Structure::Bivector(_) => Some(DoubleSubbundle::graph_of_bivector(&self.bivector(name)?)),
            Structure::TwoForm(_) => Some(DoubleSubbundle::graph_of_form(&self.two_form(name)?)),
            Structure::Subbundle(m) => DoubleSubbundle::new(self.rank(), m).ok(),
            Structure::Graph(target) => self.subbundle(target),
            _ => None,
        }
    }

    fn expr(&self, e: &Superfunction) -> String {
        e.render(&self.names)
    }

    fn poly(&self, p: &Poly) -> String {
        Superfunction::from_poly(p).render(&self.names)
    }

    fn matrix_block(&self, out: &mut String, m: &Matrix) {
        for i in 0..m.nrows() {
            let row: Vec<String> = m.row(i).iter().map(|p| self.poly(p)).collect();
            let _ = writeln!(out, "  {}", row.join(", "));
        }
        out.push_str("end\n");
    }

    /// The canonical text of the file; parsing it gives back `self`.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "diracwb {}", self.version);
        let line = |kw: &str, names: &[String]| {
            if names.is_empty() {
                kw.to_string()
            } else {
                format!("{kw} {}", names.join(" "))
            }
        };
        let _ = writeln!(out, "{}", line("base", &self.names.base));
        if !self.names.momenta.is_empty() {
            let _ = writeln!(out, "{}", line("momenta", &self.names.momenta));
        }
        let _ = writeln!(out, "{} dual{}", line("fiber", &self.names.frames), {
            let mut s = String::new();
            for c in &self.names.coframes {
                s.push(' ');
                s.push_str(c);
            }
            s
        });
        let _ = writeln!(out, "mu = {}", self.expr(&self.mu));
        for (kw, e) in [("phi", &self.phi), ("gamma", &self.gamma), ("psi", &self.psi)] {
            if !e.is_zero() {
                let _ = writeln!(out, "{kw} = {}", self.expr(e));
            }
        }
        for d in &self.structures {
            match &d.value {
                Structure::Bivector(e) | Structure::TwoForm(e) => {
                    let _ = writeln!(out, "{} {} = {}", d.value.keyword(), d.name, self.expr(e));
                }
                Structure::Graph(target) => {
                    let _ = writeln!(out, "subbundle {} = graph {target}", d.name);
                }
                Structure::Endo(m) | Structure::Span(m) | Structure::Subbundle(m) => {
                    let _ = writeln!(out, "{} {}", d.value.keyword(), d.name);
                    self.matrix_block(&mut out, m);
                }
            }
        }
        for c in &self.checks {
            let _ = writeln!(out, "check {c}");
        }
        out
    }
}
