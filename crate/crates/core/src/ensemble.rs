//! Seeded random matrix ensembles and catalog studies over them.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bounds::{self, BoundId, MatrixContext, Probe};
use crate::error::{Error, Result};
use crate::exec::map_indexed;
use crate::linalg::ComplexMatrix;
use crate::radius::RadiusConfig;
use crate::rng::{self, StreamRng};

pub const MAX_DIMENSION: usize = 512;
pub const MAX_COUNT: usize = 1_000_000;

/// Relative slack below which a bound counts as tight.
pub const TIGHT_THRESHOLD: f64 = 1e-6;

const MATRIX_SALT: u64 = 0x6d61_7472_6978;
const PARTNER_SALT: u64 = 0x7061_7274_6e72;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Ginibre,
    Gue,
    NilpotentShiftRandom,
    Normal,
    RealGaussian,
    Rank1,
    HermitianPsd,
}

impl Family {
    pub const ALL: [Family; 7] = [
        Family::Ginibre,
        Family::Gue,
        Family::NilpotentShiftRandom,
        Family::Normal,
        Family::RealGaussian,
        Family::Rank1,
        Family::HermitianPsd,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Family::Ginibre => "ginibre",
            Family::Gue => "gue",
            Family::NilpotentShiftRandom => "nilpotent-shift-random",
            Family::Normal => "normal",
            Family::RealGaussian => "real-gaussian",
            Family::Rank1 => "rank1",
            Family::HermitianPsd => "hermitian-psd",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        if lower == "nilpotent" {
            return Ok(Family::NilpotentShiftRandom);
        }
        Family::ALL
            .into_iter()
            .find(|f| f.as_str() == lower)
            .ok_or_else(|| {
                let names: Vec<_> = Family::ALL.iter().map(|f| f.as_str()).collect();
                Error::InvalidParameter(format!(
                    "unknown family '{s}', expected one of {}",
                    names.join(", ")
                ))
            })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub family: Family,
    pub dimension: usize,
    pub count: usize,
    pub seed: u64,
}

impl EnsembleSpec {
    pub fn new(family: Family, dimension: usize, count: usize, seed: u64) -> Result<Self> {
        let spec = Self {
            family,
            dimension,
            count,
            seed,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.dimension == 0 || self.dimension > MAX_DIMENSION {
            return Err(Error::InvalidParameter(format!(
                "dimension must be in 1..={MAX_DIMENSION}, got {}",
                self.dimension
            )));
        }
        if self.count == 0 || self.count > MAX_COUNT {
            return Err(Error::InvalidParameter(format!(
                "count must be in 1..={MAX_COUNT}, got {}",
                self.count
            )));
        }
        Ok(())
    }

    /// Seed of the stream that produces matrix `index`.
    pub fn matrix_seed(&self, index: usize) -> u64 {
        rng::derive_seed(self.seed, index as u64, MATRIX_SALT)
    }
}

/// Matrix `index` of the ensemble; a pure function of `(family, dimension, seed, index)`.
pub fn generate(spec: &EnsembleSpec, index: usize) -> Result<ComplexMatrix> {
    spec.validate()?;
    if index >= spec.count {
        return Err(Error::IndexOutOfRange {
            index,
            count: spec.count,
        });
    }
    let mut rng = rng::stream(spec.seed, index as u64, MATRIX_SALT);
    Ok(draw(spec.family, spec.dimension, &mut rng))
}

/// Matrix `index` together with an independent partner from the same family,
/// used by the two-operand lemmas.
pub fn generate_pair(spec: &EnsembleSpec, index: usize) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let first = generate(spec, index)?;
    let mut rng = rng::stream(spec.seed, index as u64, PARTNER_SALT);
    Ok((first, draw(spec.family, spec.dimension, &mut rng)))
}

fn ginibre(n: usize, rng: &mut StreamRng) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |_, _| rng::complex_gaussian(rng))
}

/// Haar unitary from Gram-Schmidt on a Ginibre matrix (positive `R` diagonal).
fn haar_unitary(n: usize, rng: &mut StreamRng) -> ComplexMatrix {
    let g = ginibre(n, rng);
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut v = g.column(j);
        for _ in 0..2 {
            for q in &cols {
                let proj: Complex64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= proj * qi;
                }
            }
        }
        let norm = crate::linalg::vec_norm(&v);
        cols.push(v.into_iter().map(|z| z / norm).collect());
    }
    ComplexMatrix::from_fn(n, n, |i, j| cols[j][i])
}

fn draw(family: Family, n: usize, rng: &mut StreamRng) -> ComplexMatrix {
    match family {
        Family::Ginibre => ginibre(n, rng),
        Family::Gue => {
            let g = ginibre(n, rng);
            ComplexMatrix::from_fn(n, n, |i, j| match i.cmp(&j) {
                std::cmp::Ordering::Equal => {
                    Complex64::new(g[(i, i)].re * std::f64::consts::SQRT_2, 0.0)
                }
                std::cmp::Ordering::Less => g[(i, j)],
                std::cmp::Ordering::Greater => g[(j, i)].conj(),
            })
        }
        Family::NilpotentShiftRandom => {
            let g = ginibre(n, rng);
            ComplexMatrix::from_fn(n, n, |i, j| {
                if j > i {
                    g[(i, j)]
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
        }
        Family::Normal => {
            let u = haar_unitary(n, rng);
            let d: Vec<Complex64> = (0..n).map(|_| rng::complex_gaussian(rng)).collect();
            // U D U*
            ComplexMatrix::from_fn(n, n, |i, j| {
                (0..n).map(|k| u[(i, k)] * d[k] * u[(j, k)].conj()).sum()
            })
        }
        Family::RealGaussian => {
            ComplexMatrix::from_fn(n, n, |_, _| Complex64::new(rng::real_gaussian(rng), 0.0))
        }
        Family::Rank1 => {
            let u = rng::haar_unit_vector(rng, n);
            let v = rng::haar_unit_vector(rng, n);
            ComplexMatrix::from_fn(n, n, |i, j| u[i] * v[j].conj())
        }
        Family::HermitianPsd => {
            let g = ginibre(n, rng);
            let p = g.adjoint().mul_unchecked(&g);
            p.hermitian_part()
        }
    }
}

/// One result row: a bound, a chain's binding link, or an identity check
/// (labelled `"<chain>:<check>"`, with `slack = right - left`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyRow {
    pub index: usize,
    pub bound_id: String,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub violated: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlackStats {
    pub min: f64,
    pub median: f64,
    pub max: f64,
}

/// A matrix/probe combination that raised an error instead of a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyFailure {
    pub index: usize,
    pub bound_id: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyReport {
    pub spec: EnsembleSpec,
    pub bound_ids: Vec<String>,
    pub rows: Vec<StudyRow>,
    /// Violation count per label.
    pub violations: BTreeMap<String, usize>,
    pub slack_stats: BTreeMap<String, SlackStats>,
    /// Fraction of non-violated rows per label with relative slack below
    /// [`TIGHT_THRESHOLD`].
    pub tight_fraction: BTreeMap<String, f64>,
    pub failures: Vec<StudyFailure>,
    pub elapsed_seconds: f64,
    pub seeds_used: Vec<u64>,
}

impl StudyReport {
    pub fn total_violations(&self) -> usize {
        self.violations.values().sum()
    }

    /// Violations outside the diagnostic entries.
    pub fn counted_violations(&self) -> usize {
        self.violations
            .iter()
            .filter(|(label, _)| !is_diagnostic_label(label))
            .map(|(_, n)| n)
            .sum()
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::InvalidParameter(e.to_string()))
    }

    /// Rows as CSV; no timing data, so equal seeds give equal bytes.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,bound_id,lhs,rhs,slack,violated\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{:.16e},{:.16e},{:.16e},{}\n",
                r.index, r.bound_id, r.lhs, r.rhs, r.slack, r.violated
            ));
        }
        out
    }
}

pub fn is_diagnostic_label(label: &str) -> bool {
    label
        .split(':')
        .next()
        .and_then(|id| id.parse::<BoundId>().ok())
        .is_some_and(BoundId::is_diagnostic)
}

type MatrixRows = (Vec<StudyRow>, Vec<StudyFailure>);

fn study_matrix(
    spec: &EnsembleSpec,
    index: usize,
    probes: &[Probe],
    cfg: &RadiusConfig,
) -> MatrixRows {
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    let fail = |failures: &mut Vec<StudyFailure>, label: String, e: Error| {
        failures.push(StudyFailure {
            index,
            bound_id: label,
            message: e.to_string(),
        })
    };
    let needs_pair = probes.iter().any(|p| p.id.arity() == 2);
    let drawn = if needs_pair {
        generate_pair(spec, index).map(|(a, b)| (a, Some(b)))
    } else {
        generate(spec, index).map(|a| (a, None))
    };
    let ctx = match drawn.and_then(|(a, b)| Ok((MatrixContext::new(&a, cfg)?, b))) {
        Ok(v) => v,
        Err(e) => {
            fail(&mut failures, "*".into(), e);
            return (rows, failures);
        }
    };
    let (ctx, partner) = ctx;
    for probe in probes {
        let label = probe.label();
        match bounds::evaluate(&ctx, probe, partner.as_ref()) {
            Ok(outcome) => {
                let s = outcome.summary();
                rows.push(StudyRow {
                    index,
                    bound_id: label.clone(),
                    lhs: s.lhs,
                    rhs: s.rhs,
                    slack: s.slack,
                    violated: s.violated,
                });
                for c in outcome.checks() {
                    rows.push(StudyRow {
                        index,
                        bound_id: format!("{label}:{}", c.check_id),
                        lhs: c.left,
                        rhs: c.right,
                        slack: c.right - c.left,
                        violated: !c.holds,
                    });
                }
            }
            Err(e) => fail(&mut failures, label, e),
        }
    }
    (rows, failures)
}

/// Evaluates every probe on every matrix of the ensemble. Matrices run in
/// parallel under `cfg.execution`; rows always come back in index order.
pub fn run_study(spec: &EnsembleSpec, probes: &[Probe], cfg: &RadiusConfig) -> Result<StudyReport> {
    spec.validate()?;
    cfg.validate()?;
    if probes.is_empty() {
        return Err(Error::InvalidParameter("no bounds selected".into()));
    }
    let start = Instant::now();
    let per_matrix = map_indexed(cfg.execution, spec.count, 1, |i| {
        study_matrix(spec, i, probes, cfg)
    });
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for (r, f) in per_matrix {
        rows.extend(r);
        failures.extend(f);
    }

    let mut violations = BTreeMap::new();
    let mut slacks: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    let mut tight: BTreeMap<String, usize> = BTreeMap::new();
    for p in probes {
        violations.insert(p.label(), 0);
    }
    for r in &rows {
        if r.violated {
            *violations.entry(r.bound_id.clone()).or_insert(0) += 1;
        }
        if r.bound_id.contains(':') {
            continue;
        }
        slacks.entry(r.bound_id.clone()).or_default().push(r.slack);
        if !r.violated && r.slack / r.rhs.abs().max(1.0) < TIGHT_THRESHOLD {
            *tight.entry(r.bound_id.clone()).or_insert(0) += 1;
        }
    }
    let mut slack_stats = BTreeMap::new();
    let mut tight_fraction = BTreeMap::new();
    for (label, mut v) in slacks {
        v.sort_by(f64::total_cmp);
        let n = v.len();
        let median = if n % 2 == 1 {
            v[n / 2]
        } else {
            0.5 * (v[n / 2 - 1] + v[n / 2])
        };
        tight_fraction.insert(
            label.clone(),
            *tight.get(&label).unwrap_or(&0) as f64 / n as f64,
        );
        slack_stats.insert(
            label,
            SlackStats {
                min: v[0],
                median,
                max: v[n - 1],
            },
        );
    }
    Ok(StudyReport {
        spec: spec.clone(),
        bound_ids: probes.iter().map(Probe::label).collect(),
        rows,
        violations,
        slack_stats,
        tight_fraction,
        failures,
        elapsed_seconds: start.elapsed().as_secs_f64(),
        seeds_used: (0..spec.count).map(|i| spec.matrix_seed(i)).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::herm_eigenvalues;

    fn spec(family: Family) -> EnsembleSpec {
        EnsembleSpec::new(family, 5, 4, 42).unwrap()
    }

    #[test]
    fn generation_is_deterministic() {
        for family in Family::ALL {
            let s = spec(family);
            let a = generate(&s, 2).unwrap();
            let b = generate(&s, 2).unwrap();
            assert_eq!(a.as_slice(), b.as_slice(), "{family}");
            assert_ne!(a, generate(&s, 3).unwrap(), "{family}");
        }
    }

    #[test]
    fn family_structure() {
        let nil = generate(&spec(Family::NilpotentShiftRandom), 0).unwrap();
        for i in 0..5 {
            for j in 0..=i {
                assert_eq!(nil[(i, j)], Complex64::new(0.0, 0.0));
            }
        }
        // strictly triangular: A^n = 0
        assert_eq!(nil.pow(5).unwrap().max_abs(), 0.0);

        let gue = generate(&spec(Family::Gue), 1).unwrap();
        assert_eq!(gue.hermitian_deviation(), 0.0);

        let psd = generate(&spec(Family::HermitianPsd), 1).unwrap();
        assert!(herm_eigenvalues(&psd).unwrap()[0] > -1e-12);

        let real = generate(&spec(Family::RealGaussian), 0).unwrap();
        assert!(real.as_slice().iter().all(|z| z.im == 0.0));

        let r1 = generate(&spec(Family::Rank1), 0).unwrap();
        let s = crate::linalg::svd(&r1).unwrap();
        assert!((s.singular_values[0] - 1.0).abs() < 1e-13);
        assert!(s.singular_values[1] < 1e-13);

        let normal = generate(&spec(Family::Normal), 0).unwrap();
        let lhs = normal.adjoint().mul_unchecked(&normal);
        let rhs = normal.mul_unchecked(&normal.adjoint());
        assert!((&lhs - &rhs).max_abs() < 1e-12);
    }

    #[test]
    fn spec_limits_and_index_range() {
        assert!(EnsembleSpec::new(Family::Gue, 0, 1, 0).is_err());
        assert!(EnsembleSpec::new(Family::Gue, 513, 1, 0).is_err());
        assert!(EnsembleSpec::new(Family::Gue, 2, 0, 0).is_err());
        assert!(EnsembleSpec::new(Family::Gue, 2, MAX_COUNT + 1, 0).is_err());
        let s = spec(Family::Ginibre);
        assert!(matches!(
            generate(&s, 4),
            Err(Error::IndexOutOfRange { index: 4, count: 4 })
        ));
    }

    #[test]
    fn family_names_parse() {
        for family in Family::ALL {
            assert_eq!(family.as_str().parse::<Family>().unwrap(), family);
        }
        assert_eq!(
            "nilpotent".parse::<Family>().unwrap(),
            Family::NilpotentShiftRandom
        );
        assert!("wishart".parse::<Family>().is_err());
    }
    #[test]
    fn study_is_deterministic_and_ordered() {
        let spec = EnsembleSpec::new(Family::Ginibre, 3, 6, 7).unwrap();
        let probes = Probe::expand(&[BoundId::B0, BoundId::T2, BoundId::LemSum], &[]);
        let cfg = RadiusConfig::default();
        let a = run_study(&spec, &probes, &cfg).unwrap();
        let b = run_study(
            &spec,
            &probes,
            &RadiusConfig {
                execution: crate::Execution::Sequential,
                ..cfg
            },
        )
        .unwrap();
        assert_eq!(a.to_csv(), b.to_csv());
        assert_eq!(a.total_violations(), 0);
        assert!(a.failures.is_empty());
        assert_eq!(a.rows.len(), 6 * 4);
        assert!(a.rows.windows(2).all(|w| w[0].index <= w[1].index));
        assert!(a.rows.iter().any(|r| r.bound_id == "T2:P-CB"));
        assert_eq!(a.seeds_used.len(), 6);
    }

    #[test]
    fn diagnostic_labels() {
        assert!(is_diagnostic_label("T3-PRINTED"));
        assert!(!is_diagnostic_label("T3"));
        assert!(!is_diagnostic_label("COR(r=2)"));
    }
}
