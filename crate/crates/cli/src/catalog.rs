//! The checks a definition file can invoke, their parameters, and dispatch
//! into the verifiers.

use std::time::Instant;

use diracwb_core::pairs;
use diracwb_core::proto::{self, CharacteristicPair};
use diracwb_core::relations::SamplingOptions;
use diracwb_core::{CheckReport, Error};

use crate::model::{DefinitionFile, Invocation, Structure};

/// What a parameter must name.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Param {
    Bivector,
    TwoForm,
    Endo,
    Span,
    /// A bivector or two-form.
    Tensor,
    /// A subbundle of `A ⊕ A*`, or a bivector or two-form taken as its graph.
    Dirac,
    /// A positive integer.
    Count,
}

impl Param {
    pub fn describe(&self) -> &'static str {
        match self {
            Param::Bivector => "a bivector",
            Param::TwoForm => "a two-form",
            Param::Endo => "an endomorphism",
            Param::Span => "a span",
            Param::Tensor => "a bivector or two-form",
            Param::Dirac => "a subbundle, bivector or two-form",
            Param::Count => "a positive integer",
        }
    }

    pub fn accepts(&self, s: &Structure) -> bool {
        matches!(
            (self, s),
            (Param::Bivector | Param::Tensor | Param::Dirac, Structure::Bivector(_))
                | (Param::TwoForm | Param::Tensor | Param::Dirac, Structure::TwoForm(_))
                | (Param::Endo, Structure::Endo(_))
                | (Param::Span, Structure::Span(_))
                | (Param::Dirac, Structure::Subbundle(_) | Structure::Graph(_))
        )
    }
}

pub struct CheckSpec {
    pub name: &'static str,
    /// `(key, kind, required)`.
    pub params: &'static [(&'static str, Param, bool)],
    pub summary: &'static str,
}

const PAIR: &[(&str, Param, bool)] = &[("first", Param::Bivector, true), ("second", Param::Bivector, true)];
const FORMS: &[(&str, Param, bool)] = &[("first", Param::TwoForm, true), ("second", Param::TwoForm, true)];
const FORM_ENDO: &[(&str, Param, bool)] = &[("first", Param::TwoForm, true), ("endo", Param::Endo, true)];

pub const CATALOG: &[CheckSpec] = &[
    CheckSpec { name: "lie-algebroid", params: &[], summary: "{mu,mu} = 0, with the Jacobi and anchor identities" },
    CheckSpec { name: "proto", params: &[], summary: "{Theta,Theta} = 0 for (phi, gamma, mu, psi)" },
    CheckSpec { name: "poisson", params: &[("first", Param::Bivector, true)], summary: "[pi,pi] = 0" },
    CheckSpec { name: "hamiltonian-pair", params: PAIR, summary: "[pi,pi'] = 0 for two Poisson bivectors" },
    CheckSpec { name: "poisson-pair", params: PAIR, summary: "N(pi,pi') is a Nijenhuis relation" },
    CheckSpec { name: "torsion-identity", params: PAIR, summary: "relation torsion against [pi,pi] terms on admissible chains" },
    CheckSpec { name: "nijenhuis-from-pair", params: PAIR, summary: "torsion of pi' pi^-1" },
    CheckSpec { name: "nijenhuis", params: &[("endo", Param::Endo, true)], summary: "vanishing Nijenhuis torsion" },
    CheckSpec { name: "dirac", params: &[("first", Param::Dirac, true)], summary: "maximal isotropy and Dorfman closure" },
    CheckSpec {
        name: "dirac-pair",
        params: &[("first", Param::Dirac, true), ("second", Param::Dirac, true)],
        summary: "two Dirac structures with a Nijenhuis relation",
    },
    CheckSpec { name: "presymplectic-pair", params: FORMS, summary: "closed forms with Dirac-pair graphs" },
    CheckSpec { name: "symplectic-pair", params: FORMS, summary: "presymplectic pair with the first form non-degenerate" },
    CheckSpec {
        name: "pomega",
        params: &[("first", Param::Bivector, true), ("second", Param::TwoForm, true)],
        summary: "[pi,pi] = 0, d omega = 0, d_N omega = 0 for N = pi omega",
    },
    CheckSpec { name: "omegan", params: FORM_ENDO, summary: "omega N skew, omega and omega N closed, N Nijenhuis" },
    CheckSpec { name: "weak-omegan", params: FORM_ENDO, summary: "the weak compatibility of omega and N" },
    CheckSpec { name: "nplus", params: FORM_ENDO, summary: "the relation N+ equals the dual of N" },
    CheckSpec { name: "chain-identity", params: FORM_ENDO, summary: "the alternating chain identity for (omega, N)" },
    CheckSpec {
        name: "lenard",
        params: &[("first", Param::TwoForm, true), ("endo", Param::Endo, true), ("k", Param::Count, false)],
        summary: "omega N^j closed for j <= k (default 5)",
    },
    CheckSpec {
        name: "poisson-function",
        params: &[("first", Param::Bivector, true)],
        summary: "the bivector twist has phi = 0",
    },
    CheckSpec {
        name: "presymplectic-function",
        params: &[("first", Param::TwoForm, true)],
        summary: "the form twist has psi = 0",
    },
    CheckSpec {
        name: "poisson-function-mod",
        params: &[("first", Param::Bivector, true), ("span", Param::Span, true)],
        summary: "twisted phi and psi vanish modulo D",
    },
    CheckSpec {
        name: "presymplectic-function-mod",
        params: &[("first", Param::TwoForm, true), ("span", Param::Span, true)],
        summary: "twisted phi and psi vanish modulo F",
    },
    CheckSpec {
        name: "characteristic-pair",
        params: &[("first", Param::Tensor, true), ("span", Param::Span, true)],
        summary: "the induced subbundle is Dirac, by conditions and by direct closure",
    },
];

pub fn spec(name: &str) -> Option<&'static CheckSpec> {
    CATALOG.iter().find(|s| s.name == name)
}

/// Where an invocation fails to fit the catalog or the file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InvocationError {
    UnknownCheck(String),
    UnknownParam(String),
    Duplicate(String),
    Missing(&'static str),
    Undeclared { key: String, name: String },
    WrongKind { key: String, name: String, expected: &'static str },
    BadCount { key: String, value: String },
}

impl std::fmt::Display for InvocationError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            InvocationError::UnknownCheck(c) => write!(f, "unknown check `{c}`"),
            InvocationError::UnknownParam(k) => write!(f, "unknown parameter `{k}`"),
            InvocationError::Duplicate(k) => write!(f, "parameter `{k}` given twice"),
            InvocationError::Missing(k) => write!(f, "missing parameter `{k}`"),
            InvocationError::Undeclared { key, name } => write!(f, "`{key}` names `{name}`, which is not declared"),
            InvocationError::WrongKind { key, name, expected } => write!(f, "`{key}` must name {expected}, but `{name}` is not"),
            InvocationError::BadCount { key, value } => write!(f, "`{key}` must be an integer from 1 to 16, got `{value}`"),
        }
    }
}

/// Checks the invocation against its spec and against the declarations of
/// `file`.
pub fn validate(file: &DefinitionFile, inv: &Invocation) -> Result<(), InvocationError> {
    let spec = spec(&inv.check).ok_or_else(|| InvocationError::UnknownCheck(inv.check.clone()))?;
    for (i, (key, value)) in inv.params.iter().enumerate() {
        if inv.params[..i].iter().any(|(k, _)| k == key) {
            return Err(InvocationError::Duplicate(key.clone()));
        }
        let (_, kind, _) = spec
            .params
            .iter()
            .find(|(k, _, _)| k == key)
            .ok_or_else(|| InvocationError::UnknownParam(key.clone()))?;
        if *kind == Param::Count {
            if parse_count(value).is_none() {
                return Err(InvocationError::BadCount {
                    key: key.clone(),
                    value: value.clone(),
                });
            }
            continue;
        }
        let s = file.lookup(value).ok_or_else(|| InvocationError::Undeclared {
            key: key.clone(),
            name: value.clone(),
        })?;
        if !kind.accepts(s) {
            return Err(InvocationError::WrongKind {
                key: key.clone(),
                name: value.clone(),
                expected: kind.describe(),
            });
        }
    }
    for (key, _, required) in spec.params {
        if *required && inv.get(key).is_none() {
            return Err(InvocationError::Missing(key));
        }
    }
    Ok(())
}

fn parse_count(s: &str) -> Option<u32> {
    s.parse::<u32>().ok().filter(|k| (1..=16).contains(k))
}

/// Runs one validated invocation. Verifier errors (a precondition such as
/// "both bivectors are Poisson" not holding) become FAIL reports whose
/// witness is the error.
pub fn run(file: &DefinitionFile, inv: &Invocation, opts: &SamplingOptions, timing: bool) -> CheckReport {
    let start = Instant::now();
    let mut report = match dispatch(file, inv, opts) {
        Ok(r) => r,
        Err(e) => {
            let mut r = CheckReport::new(inv.check.clone());
            r.fail(format!("error: {e}"));
            r
        }
    };
    if timing {
        report.timing_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    }
    report
}

fn missing(what: &str) -> Error {
    Error::Precondition(format!("`{what}` does not name a usable structure"))
}

fn dispatch(file: &DefinitionFile, inv: &Invocation, opts: &SamplingOptions) -> diracwb_core::Result<CheckReport> {
    validate(file, inv).map_err(|e| Error::Precondition(e.to_string()))?;
    let name = |k: &str| inv.get(k).unwrap_or_default();
    let bivector = |k: &str| file.bivector(name(k)).ok_or_else(|| missing(name(k)));
    let two_form = |k: &str| file.two_form(name(k)).ok_or_else(|| missing(name(k)));
    let endo = |k: &str| file.endomorphism(name(k)).ok_or_else(|| missing(name(k)));
    let span = |k: &str| file.span(name(k)).ok_or_else(|| missing(name(k)));
    let subbundle = |k: &str| file.subbundle(name(k)).ok_or_else(|| missing(name(k)));
    let alg = file.algebroid()?;
    let rename = |mut r: CheckReport| {
        r.check = inv.check.clone();
        r
    };
    let r = match inv.check.as_str() {
        "lie-algebroid" => alg.check(),
        "proto" => proto::check_proto(&file.proto()?),
        "poisson" => pairs::is_poisson(&alg, &bivector("first")?),
        "hamiltonian-pair" => pairs::is_hamiltonian_pair(&alg, &bivector("first")?, &bivector("second")?)?,
        "poisson-pair" => pairs::is_poisson_pair(&alg, &bivector("first")?, &bivector("second")?, opts)?,
        "torsion-identity" => pairs::torsion_identity_check(&alg, &bivector("first")?, &bivector("second")?, opts),
        "nijenhuis-from-pair" => pairs::nijenhuis_from_pair(&alg, &bivector("first")?, &bivector("second")?, opts)?.report,
        "nijenhuis" => alg.torsion_report(&endo("endo")?),
        "dirac" => proto::is_dirac(&file.proto()?, &subbundle("first")?, opts),
        "dirac-pair" => pairs::dirac_pair_check(&alg, &subbundle("first")?, &subbundle("second")?, opts)?,
        "presymplectic-pair" => pairs::presymplectic_pair_check(&alg, &two_form("first")?, &two_form("second")?, opts)?,
        "symplectic-pair" => pairs::symplectic_pair_check(&alg, &two_form("first")?, &two_form("second")?, opts)?,
        "pomega" => pairs::pomega_check(&alg, &bivector("first")?, &two_form("second")?, opts)?,
        "omegan" => pairs::omegan_check(&alg, &two_form("first")?, &endo("endo")?)?,
        "weak-omegan" => pairs::weak_omegan_check(&alg, &two_form("first")?, &endo("endo")?)?,
        "nplus" => pairs::nplus_equals_nstar(&two_form("first")?, &endo("endo")?)?,
        "chain-identity" => pairs::chain_identity_check(&alg, &two_form("first")?, &endo("endo")?, opts)?,
        "lenard" => {
            let k = inv.get("k").and_then(parse_count).unwrap_or(5);
            let mut r = CheckReport::new("lenard");
            for sub in pairs::lenard_chain(&alg, &two_form("first")?, &endo("endo")?, k)? {
                r.absorb(&sub);
            }
            r
        }
        "poisson-function" => proto::is_poisson_function(&file.proto()?, &bivector("first")?, opts)?,
        "presymplectic-function" => proto::is_presymplectic_function(&file.proto()?, &two_form("first")?, opts)?,
        "poisson-function-mod" => proto::poisson_function_mod(&file.proto()?, &bivector("first")?, &span("span")?)?,
        "presymplectic-function-mod" => {
            proto::presymplectic_function_mod(&file.proto()?, &two_form("first")?, &span("span")?)?
        }
        "characteristic-pair" => {
            let pair = match file.lookup(name("first")) {
                Some(Structure::Bivector(_)) => CharacteristicPair::Poisson {
                    pi: bivector("first")?,
                    d: span("span")?,
                },
                _ => CharacteristicPair::Dual {
                    omega: two_form("first")?,
                    f: span("span")?,
                },
            };
            proto::characteristic_pair_dirac(&file.proto()?, &pair, opts)?
        }
        other => return Err(Error::Precondition(format!("unknown check `{other}`"))),
    };
    Ok(rename(r))
}
