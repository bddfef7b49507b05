use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Stable identifiers of every inequality in the catalog.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BoundId {
    B0,
    Kit,
    Sq,
    Lem1Plus,
    Lem1Minus,
    T1,
    LemSum,
    T2,
    LemPosDiff,
    T3,
    T3Printed,
    Func,
    Cor,
}

impl BoundId {
    pub const ALL: [BoundId; 13] = [
        BoundId::B0,
        BoundId::Kit,
        BoundId::Sq,
        BoundId::Lem1Plus,
        BoundId::Lem1Minus,
        BoundId::T1,
        BoundId::LemSum,
        BoundId::T2,
        BoundId::LemPosDiff,
        BoundId::T3,
        BoundId::T3Printed,
        BoundId::Func,
        BoundId::Cor,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            BoundId::B0 => "B0",
            BoundId::Kit => "KIT",
            BoundId::Sq => "SQ",
            BoundId::Lem1Plus => "LEM1+",
            BoundId::Lem1Minus => "LEM1-",
            BoundId::T1 => "T1",
            BoundId::LemSum => "LEM-SUM",
            BoundId::T2 => "T2",
            BoundId::LemPosDiff => "LEM-POSDIFF",
            BoundId::T3 => "T3",
            BoundId::T3Printed => "T3-PRINTED",
            BoundId::Func => "FUNC",
            BoundId::Cor => "COR",
        }
    }

    /// Number of matrix operands.
    pub fn arity(self) -> usize {
        match self {
            BoundId::LemSum | BoundId::LemPosDiff => 2,
            _ => 1,
        }
    }

    /// Chains report several ordered terms; the rest are single inequalities.
    pub fn is_chain(self) -> bool {
        matches!(
            self,
            BoundId::B0 | BoundId::Sq | BoundId::T1 | BoundId::T2 | BoundId::Func | BoundId::Cor
        )
    }

    /// Diagnostic entries are expected to fail and never count as violations
    /// for exit codes.
    pub fn is_diagnostic(self) -> bool {
        self == BoundId::T3Printed
    }

    pub fn description(self) -> &'static str {
        match self {
            BoundId::B0 => "||A||/2 <= w(A) <= ||A||",
            BoundId::Kit => "w(A) <= ||(|A| + |A*|)||/2",
            BoundId::Sq => "||(|A|^2 + |A*|^2)||/4 <= w(A)^2 <= ||(|A|^2 + |A*|^2)||/2",
            BoundId::Lem1Plus => "||A + A*||/2 <= w(A)",
            BoundId::Lem1Minus => "||A - A*||/2 <= w(A)",
            BoundId::T1 => {
                "||(|A|^2 + |A*|^2)||/4 <= (||A + A*||^2 + ||A - A*||^2)/8 <= w(A)^2"
            }
            BoundId::LemSum => "||A + B|| <= sqrt(||A*A + B*B|| + 2 w(B*A))",
            BoundId::T2 => {
                "||(|A|^2 + |A*|^2)||/4 <= sqrt(2 w(A)^4 + w((A*-A)^2 (A*+A)^2)/8)/2 <= w(A)^2"
            }
            BoundId::LemPosDiff => "||P - Q|| <= max(||P||, ||Q||) - min(m(P), m(Q)) for P, Q >= 0",
            BoundId::T3 => "w(A)^2 <= ||(|A|^2 + |A*|^2)/2|| - m(((|A| - |A*|)/2)^2)",
            BoundId::T3Printed => {
                "w(A)^2 <= (||(|A|^2 + |A*|^2)|| - m((|A| - |A*|)^2))/2 (over-strong variant, diagnostic)"
            }
            BoundId::Func => {
                "f(w(A)) <= ||g^-1((g(f(|A|)) + g(f(|A*|)))/2)|| <= ||f(|A|) + f(|A*|)||/2"
            }
            BoundId::Cor => {
                "w(A)^r <= ||X + I - sqrt(2X + I)||/2 <= |||A|^r + |A*|^r||/2, X = |A|^r + |A*|^r + |A|^(r/2) + |A*|^(r/2)"
            }
        }
    }

    /// Where the inequality comes from.
    pub fn origin(self) -> &'static str {
        match self {
            BoundId::B0 => "classical norm equivalence",
            BoundId::Kit => "Kittaneh's estimate",
            BoundId::Sq => "Kittaneh's two-sided square estimate",
            BoundId::Lem1Plus | BoundId::Lem1Minus => "lemma: Hermitian and skew parts",
            BoundId::T1 => "theorem: parallelogram refinement",
            BoundId::LemSum => "lemma: norm of a sum",
            BoundId::T2 => "theorem: Cartesian refinement",
            BoundId::LemPosDiff => "lemma: difference of positive operators",
            BoundId::T3 => "theorem: upper refinement (abstract and proof form)",
            BoundId::T3Printed => "theorem: upper refinement (over-strong variant)",
            BoundId::Func => "theorem: concave/convex functional chain",
            BoundId::Cor => "corollary: f = x^r, g = x + sqrt(x)",
        }
    }
}

impl fmt::Display for BoundId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BoundId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().to_ascii_uppercase().replace('\u{2212}', "-");
        BoundId::ALL
            .into_iter()
            .find(|id| id.as_str() == norm)
            .ok_or_else(|| Error::UnknownBound(s.trim().to_string()))
    }
}

impl Serialize for BoundId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for BoundId {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CatalogEntry {
    pub id: &'static str,
    pub description: &'static str,
    pub arity: usize,
    pub origin: &'static str,
}

/// The registry in its stable order.
pub fn catalog_list() -> Vec<CatalogEntry> {
    BoundId::ALL
        .iter()
        .map(|&id| CatalogEntry {
            id: id.as_str(),
            description: id.description(),
            arity: id.arity(),
            origin: id.origin(),
        })
        .collect()
}

pub fn catalog_lookup(id: &str) -> Result<CatalogEntry> {
    let id: BoundId = id.parse()?;
    Ok(catalog_list()
        .into_iter()
        .find(|e| e.id == id.as_str())
        .expect("registered"))
}

/// Parses `"all"` or a comma-separated list of ids.
pub fn parse_bound_list(list: &str) -> Result<Vec<BoundId>> {
    if list.trim().eq_ignore_ascii_case("all") {
        return Ok(BoundId::ALL.to_vec());
    }
    let mut out = Vec::new();
    for tok in list.split(',').filter(|t| !t.trim().is_empty()) {
        let id: BoundId = tok.parse()?;
        if !out.contains(&id) {
            out.push(id);
        }
    }
    if out.is_empty() {
        return Err(Error::InvalidParameter("empty bound list".into()));
    }
    Ok(out)
}

/// A catalog entry together with its free parameter, if any.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Probe {
    pub id: BoundId,
    /// Corollary exponent `r`; ignored for other ids.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exponent: Option<f64>,
}

pub const DEFAULT_COR_EXPONENT: f64 = 2.0;

impl Probe {
    pub fn new(id: BoundId) -> Self {
        Self {
            id,
            exponent: (id == BoundId::Cor).then_some(DEFAULT_COR_EXPONENT),
        }
    }

    pub fn corollary(r: f64) -> Self {
        Self {
            id: BoundId::Cor,
            exponent: Some(r),
        }
    }

    /// Expands ids into probes, one corollary probe per exponent.
    pub fn expand(ids: &[BoundId], cor_exponents: &[f64]) -> Vec<Probe> {
        let mut out = Vec::new();
        for &id in ids {
            if id == BoundId::Cor && !cor_exponents.is_empty() {
                out.extend(cor_exponents.iter().map(|&r| Probe::corollary(r)));
            } else {
                out.push(Probe::new(id));
            }
        }
        out
    }

    pub fn label(&self) -> String {
        match (self.id, self.exponent) {
            (BoundId::Cor, Some(r)) => format!("COR(r={r})"),
            _ => self.id.as_str().to_string(),
        }
    }
}
