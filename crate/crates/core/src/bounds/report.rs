use serde::{Deserialize, Serialize};

/// One inequality instance `lhs <= rhs`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub bound_id: String,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub violated: bool,
    pub tolerance_used: f64,
}

impl BoundReport {
    pub fn new(bound_id: impl Into<String>, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        Self {
            bound_id: bound_id.into(),
            lhs,
            rhs,
            slack: rhs - lhs,
            violated: lhs - rhs > tolerance,
            tolerance_used: tolerance,
        }
    }

    /// `slack / max(1, |rhs|)`.
    pub fn relative_slack(&self) -> f64 {
        self.slack / self.rhs.abs().max(1.0)
    }

    /// How far past its tolerance the bound is; positive means violated.
    pub(crate) fn excess(&self) -> f64 {
        self.lhs - self.rhs - self.tolerance_used
    }
}

/// An identity that must hold to tolerance, checked alongside a chain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub check_id: String,
    pub left: f64,
    pub right: f64,
    pub tolerance_used: f64,
    pub holds: bool,
}

impl IdentityCheck {
    pub fn new(check_id: impl Into<String>, left: f64, right: f64, tolerance: f64) -> Self {
        Self {
            check_id: check_id.into(),
            left,
            right,
            tolerance_used: tolerance,
            holds: (left - right).abs() <= tolerance,
        }
    }
}

/// Ordered chain `terms[0] <= terms[1] <= ...`, one link per adjacent pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainReport {
    pub chain_id: String,
    pub terms: Vec<f64>,
    pub links: Vec<BoundReport>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<IdentityCheck>,
}

impl ChainReport {
    pub fn violated(&self) -> bool {
        self.links.iter().any(|l| l.violated) || self.checks.iter().any(|c| !c.holds)
    }

    /// The link closest to failing (or failing by the most).
    pub fn binding_link(&self) -> &BoundReport {
        self.links
            .iter()
            .reduce(|best, l| if l.excess() > best.excess() { l } else { best })
            .expect("chains have at least one link")
    }
}

/// A quantity whose value is known only up to the radius enclosure.
/// Every term is monotone non-decreasing in `w(A)`, so evaluating at both
/// enclosure ends brackets it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Term {
    pub lo: f64,
    pub hi: f64,
}

impl Term {
    pub fn exact(x: f64) -> Self {
        Self { lo: x, hi: x }
    }

    pub fn map(self, f: impl Fn(f64) -> f64) -> Self {
        let (a, b) = (f(self.lo), f(self.hi));
        Self {
            lo: a.min(b),
            hi: a.max(b),
        }
    }

    pub fn width(self) -> f64 {
        self.hi - self.lo
    }
}

/// `lhs <= rhs` with point values at the lower enclosure ends. The check
/// passes whenever it would pass at the upper end of `rhs`, so the radius
/// uncertainty widens the tolerance by the width of `rhs`.
pub(crate) fn compare(id: impl Into<String>, lhs: Term, rhs: Term, tolerance: f64) -> BoundReport {
    BoundReport::new(id, lhs.lo, rhs.lo, tolerance + rhs.width())
}

pub(crate) fn chain(id: &str, terms: &[Term], tolerance: f64) -> ChainReport {
    let links = terms
        .windows(2)
        .enumerate()
        .map(|(k, w)| compare(format!("{id}[{k}]"), w[0], w[1], tolerance))
        .collect();
    ChainReport {
        chain_id: id.to_string(),
        terms: terms.iter().map(|t| t.lo).collect(),
        links,
        checks: Vec::new(),
    }
}
