use once_cell::unsync::OnceCell;
use serde::Serialize;

use super::catalog::{BoundId, Probe, DEFAULT_COR_EXPONENT};
use super::functional::FunctionPair;
use super::report::{chain, compare, BoundReport, ChainReport, IdentityCheck, Term};
use crate::error::{Error, Result};
use crate::linalg::{
    apply_herm_fn, cartesian_decomp, eigh, herm_norm, m_min, operator_norm, symmetrize_checked,
    ComplexMatrix, PolarParts,
};
use crate::radius::{numerical_radius, RadiusConfig};
use crate::tolerance;

/// Radius enclosure `[lower, upper]`; a capped run still yields a valid,
/// wider enclosure.
pub fn radius_enclosure(a: &ComplexMatrix, cfg: &RadiusConfig) -> Result<(f64, f64)> {
    let cfg = RadiusConfig {
        oracle_samples: 0,
        ..cfg.clone()
    };
    match numerical_radius(a, &cfg) {
        Ok(est) => Ok((est.lower, est.upper)),
        Err(Error::EnclosureNotReached { best, .. }) => Ok((best.lower, best.upper)),
        Err(e) => Err(e),
    }
}

fn enclosure_term(a: &ComplexMatrix, cfg: &RadiusConfig) -> Result<Term> {
    let (lo, hi) = radius_enclosure(a, cfg)?;
    Ok(Term { lo, hi })
}

/// Lazily computed quantities shared by every bound evaluated on one matrix.
pub struct MatrixContext {
    a: ComplexMatrix,
    cfg: RadiusConfig,
    polar: OnceCell<PolarParts>,
    cartesian: OnceCell<(ComplexMatrix, ComplexMatrix)>,
    omega: OnceCell<Term>,
    square_sum: OnceCell<(ComplexMatrix, f64)>,
}

impl MatrixContext {
    pub fn new(a: &ComplexMatrix, cfg: &RadiusConfig) -> Result<Self> {
        a.ensure_square()?;
        Ok(Self {
            a: a.clone(),
            cfg: cfg.clone(),
            polar: OnceCell::new(),
            cartesian: OnceCell::new(),
            omega: OnceCell::new(),
            square_sum: OnceCell::new(),
        })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.a
    }

    pub fn config(&self) -> &RadiusConfig {
        &self.cfg
    }

    pub fn polar(&self) -> Result<&PolarParts> {
        self.polar.get_or_try_init(|| PolarParts::new(&self.a))
    }

    pub fn norm(&self) -> Result<f64> {
        Ok(self.polar()?.norm())
    }

    fn cartesian(&self) -> Result<&(ComplexMatrix, ComplexMatrix)> {
        self.cartesian.get_or_try_init(|| cartesian_decomp(&self.a))
    }

    /// Enclosure of `w(A)`.
    pub fn omega(&self) -> Result<(f64, f64)> {
        let t = self.omega_term()?;
        Ok((t.lo, t.hi))
    }

    fn omega_term(&self) -> Result<Term> {
        self.omega
            .get_or_try_init(|| enclosure_term(&self.a, &self.cfg))
            .copied()
    }

    /// `(|A|^2 + |A*|^2, its norm)`.
    fn square_sum(&self) -> Result<&(ComplexMatrix, f64)> {
        self.square_sum.get_or_try_init(|| {
            let polar = self.polar()?;
            let s = &polar.left_fn(|x| x * x)? + &polar.right_fn(|x| x * x)?;
            let norm = herm_norm(&s)?;
            Ok((s, norm))
        })
    }
}

fn scale_of(terms: &[Term]) -> f64 {
    terms
        .iter()
        .fold(0.0f64, |m, t| m.max(t.hi.abs()).max(t.lo.abs()))
}

/// `||A||/2 <= w(A) <= ||A||`
pub fn chain_b0(ctx: &MatrixContext) -> Result<ChainReport> {
    let norm = ctx.norm()?;
    let omega = ctx.omega_term()?;
    let terms = [Term::exact(0.5 * norm), omega, Term::exact(norm)];
    Ok(chain("B0", &terms, tolerance(scale_of(&terms))))
}

/// `w(A) <= ||(|A| + |A*|)||/2`
pub fn bound_kit(ctx: &MatrixContext) -> Result<BoundReport> {
    let polar = ctx.polar()?;
    let rhs = 0.5 * herm_norm(&(&polar.abs_left() + &polar.abs_right()))?;
    let lhs = ctx.omega_term()?;
    let rhs = Term::exact(rhs);
    Ok(compare("KIT", lhs, rhs, tolerance(scale_of(&[lhs, rhs]))))
}

pub fn chain_sq(ctx: &MatrixContext) -> Result<ChainReport> {
    let (_, s_norm) = *ctx.square_sum()?;
    let omega_sq = ctx.omega_term()?.map(|w| w * w);
    let terms = [
        Term::exact(0.25 * s_norm),
        omega_sq,
        Term::exact(0.5 * s_norm),
    ];
    Ok(chain("SQ", &terms, tolerance(scale_of(&terms))))
}

/// `||A + sign A*||/2 <= w(A)`; `||A + A*|| = 2||B||`, `||A - A*|| = 2||C||`.
pub fn bound_lem1(ctx: &MatrixContext, plus: bool) -> Result<BoundReport> {
    let (b, c) = ctx.cartesian()?;
    let lhs = Term::exact(herm_norm(if plus { b } else { c })?);
    let rhs = ctx.omega_term()?;
    let id = if plus { "LEM1+" } else { "LEM1-" };
    Ok(compare(id, lhs, rhs, tolerance(scale_of(&[lhs, rhs]))))
}

pub fn chain_t1(ctx: &MatrixContext) -> Result<ChainReport> {
    let (_, s_norm) = *ctx.square_sum()?;
    let (b, c) = ctx.cartesian()?;
    let (nb, nc) = (herm_norm(b)?, herm_norm(c)?);
    // (||A+A*||^2 + ||A-A*||^2)/8 = (||B||^2 + ||C||^2)/2
    let middle = 0.5 * (nb * nb + nc * nc);
    let terms = [
        Term::exact(0.25 * s_norm),
        Term::exact(middle),
        ctx.omega_term()?.map(|w| w * w),
    ];
    Ok(chain("T1", &terms, tolerance(scale_of(&terms))))
}

/// `||A + B|| <= sqrt(||A*A + B*B|| + 2 w(B*A))`
pub fn bound_lem_sum(ctx: &MatrixContext, b: &ComplexMatrix) -> Result<BoundReport> {
    let a = ctx.matrix();
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return Err(Error::DimensionMismatch(format!(
            "LEM-SUM operands are {}x{} and {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    let lhs = Term::exact(operator_norm(&(a + b))?);
    let gram = &a.adjoint().mul_unchecked(a) + &b.adjoint().mul_unchecked(b);
    let gram_norm = herm_norm(&gram.hermitian_part())?;
    let cross = enclosure_term(&b.adjoint().mul_unchecked(a), ctx.config())?;
    let rhs = cross.map(|w| (gram_norm + 2.0 * w).max(0.0).sqrt());
    Ok(compare(
        "LEM-SUM",
        lhs,
        rhs,
        tolerance(scale_of(&[lhs, rhs])),
    ))
}

/// Middle term `sqrt(2 w^4 + w(P)/8)/2` with `P = (A* - A)^2 (A* + A)^2`,
/// plus the identity `w(C^2 B^2) = w(P)/16`.
pub fn chain_t2(ctx: &MatrixContext) -> Result<ChainReport> {
    let a = ctx.matrix();
    let (_, s_norm) = *ctx.square_sum()?;
    let adj = a.adjoint();
    let skew = &adj - a;
    let herm = &adj + a;
    let product = skew
        .mul_unchecked(&skew)
        .mul_unchecked(&herm.mul_unchecked(&herm));
    let omega_product = enclosure_term(&product, ctx.config())?;
    let omega = ctx.omega_term()?;
    let middle = Term {
        lo: 0.5 * (2.0 * omega.lo.powi(4) + omega_product.lo / 8.0).sqrt(),
        hi: 0.5 * (2.0 * omega.hi.powi(4) + omega_product.hi / 8.0).sqrt(),
    };
    let terms = [Term::exact(0.25 * s_norm), middle, omega.map(|w| w * w)];
    let mut report = chain("T2", &terms, tolerance(scale_of(&terms)));

    let (b, c) = ctx.cartesian()?;
    let cb = c.mul_unchecked(c).mul_unchecked(&b.mul_unchecked(b));
    let (cb_lower, _) = radius_enclosure(&cb, ctx.config())?;
    let cb_tol = tolerance(operator_norm(&cb)?);
    report.checks.push(IdentityCheck::new(
        "P-CB",
        cb_lower,
        omega_product.lo / 16.0,
        cb_tol,
    ));
    Ok(report)
}

/// Clips eigenvalues in `[-tol, 0)` to zero; rejects anything more negative.
fn clip_psd(p: &ComplexMatrix, tol: f64) -> Result<ComplexMatrix> {
    let eig = eigh(&symmetrize_checked(p)?)?;
    let min = eig.min();
    if min < -tol {
        return Err(Error::NotPositive {
            min_eigenvalue: min,
            tolerance: tol,
        });
    }
    if min >= 0.0 {
        return Ok(p.hermitian_part());
    }
    let clipped: Vec<f64> = eig.eigenvalues.iter().map(|&x| x.max(0.0)).collect();
    Ok(eig.reconstruct_with(&clipped))
}

/// `||P - Q|| <= max(||P||, ||Q||) - min(m(P), m(Q))` for positive `P`, `Q`.
pub fn bound_lem_pos_diff(p: &ComplexMatrix, q: &ComplexMatrix) -> Result<BoundReport> {
    if p.rows() != q.rows() || p.cols() != q.cols() {
        return Err(Error::DimensionMismatch(format!(
            "LEM-POSDIFF operands are {}x{} and {}x{}",
            p.rows(),
            p.cols(),
            q.rows(),
            q.cols()
        )));
    }
    let gate = tolerance(p.max_abs().max(q.max_abs()) * p.rows() as f64);
    let p = clip_psd(p, gate)?;
    let q = clip_psd(q, gate)?;
    let (np, nq) = (herm_norm(&p)?, herm_norm(&q)?);
    let lhs = herm_norm(&(&p - &q))?;
    let rhs = np.max(nq) - m_min(&p)?.min(m_min(&q)?);
    Ok(BoundReport::new(
        "LEM-POSDIFF",
        lhs,
        rhs,
        tolerance(np.max(nq).max(lhs)),
    ))
}

/// `(|A| - |A*|)` and `|A|^2 + |A*|^2` norm, shared by both T3 forms.
fn t3_parts(ctx: &MatrixContext) -> Result<(ComplexMatrix, f64)> {
    let polar = ctx.polar()?;
    let diff = &polar.abs_left() - &polar.abs_right();
    let (_, s_norm) = *ctx.square_sum()?;
    Ok((diff, s_norm))
}

/// `w^2 <= ||(|A|^2 + |A*|^2)/2|| - m(((|A| - |A*|)/2)^2)`
pub fn bound_t3(ctx: &MatrixContext) -> Result<BoundReport> {
    let (diff, s_norm) = t3_parts(ctx)?;
    let half = diff.scale_real(0.5);
    let m = m_min(&half.mul_unchecked(&half))?;
    let lhs = ctx.omega_term()?.map(|w| w * w);
    let rhs = Term::exact(0.5 * s_norm - m);
    let scale = scale_of(&[lhs, rhs]).max(0.5 * s_norm);
    Ok(compare("T3", lhs, rhs, tolerance(scale)))
}

/// Variant weighting the defect term by 1/2 instead of 1/4,
/// `w^2 <= (||(|A|^2 + |A*|^2)|| - m((|A| - |A*|)^2))/2`. Diagnostic only.
pub fn bound_t3_printed(ctx: &MatrixContext) -> Result<BoundReport> {
    let (diff, s_norm) = t3_parts(ctx)?;
    let m = m_min(&diff.mul_unchecked(&diff))?;
    let lhs = ctx.omega_term()?.map(|w| w * w);
    let rhs = Term::exact(0.5 * (s_norm - m));
    let scale = scale_of(&[lhs, rhs]).max(0.5 * s_norm);
    Ok(compare("T3-PRINTED", lhs, rhs, tolerance(scale)))
}

fn functional_terms(ctx: &MatrixContext, fp: &FunctionPair) -> Result<[Term; 3]> {
    fp.check_hypotheses()?;
    let polar = ctx.polar()?;
    let left = ctx.omega_term()?.map(|w| (fp.f)(w));
    let gf = |x: f64| fp.compose(x);
    let mean = (&polar.left_fn(gf)? + &polar.right_fn(gf)?).scale_real(0.5);
    let middle = herm_norm(&apply_herm_fn(&mean, |x| (fp.g_inverse)(x))?)?;
    let f_sum = &polar.left_fn(|x| (fp.f)(x))? + &polar.right_fn(|x| (fp.f)(x))?;
    let right = 0.5 * herm_norm(&f_sum)?;
    Ok([left, Term::exact(middle), Term::exact(right)])
}

/// `f(w) <= ||g^-1((g f(|A|) + g f(|A*|))/2)|| <= ||f(|A|) + f(|A*|)||/2`
pub fn chain_functional(ctx: &MatrixContext, fp: &FunctionPair) -> Result<ChainReport> {
    let terms = functional_terms(ctx, fp)?;
    Ok(chain("FUNC", &terms, tolerance(scale_of(&terms))))
}

/// Corollary chain for `r >= 2` with the closed-form `g^-1`, cross-checked
/// against the generic functional chain.
pub fn chain_cor(ctx: &MatrixContext, r: f64) -> Result<ChainReport> {
    if !(r >= 2.0) || !r.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "corollary needs r >= 2, got {r}"
        )));
    }
    let polar = ctx.polar()?;
    let pow_r = &polar.left_fn(|x| x.powf(r))? + &polar.right_fn(|x| x.powf(r))?;
    let half_r = 0.5 * r;
    let pow_half = &polar.left_fn(|x| x.powf(half_r))? + &polar.right_fn(|x| x.powf(half_r))?;
    let x = &pow_r + &pow_half;
    let root = apply_herm_fn(&x.scale_real(2.0).shift_diag(1.0), f64::sqrt)?;
    let inner = &x.shift_diag(1.0) - &root;
    let middle = 0.5 * herm_norm(&inner)?;
    let right = 0.5 * herm_norm(&pow_r)?;
    let left = ctx.omega_term()?.map(|w| w.powf(r));
    let terms = [left, Term::exact(middle), Term::exact(right)];
    let tol = tolerance(scale_of(&terms));
    let mut report = chain(&Probe::corollary(r).label(), &terms, tol);

    let generic = functional_terms(ctx, &FunctionPair::power_sqrt(r))?;
    report
        .checks
        .push(IdentityCheck::new("FUNC", middle, generic[1].lo, tol));
    Ok(report)
}

/// Result of evaluating one catalog probe.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ProbeOutcome {
    Bound(BoundReport),
    Chain(ChainReport),
}

impl ProbeOutcome {
    pub fn violated(&self) -> bool {
        match self {
            ProbeOutcome::Bound(b) => b.violated,
            ProbeOutcome::Chain(c) => c.violated(),
        }
    }

    /// Single-row summary: the bound itself, or a chain's binding link.
    pub fn summary(&self) -> &BoundReport {
        match self {
            ProbeOutcome::Bound(b) => b,
            ProbeOutcome::Chain(c) => c.binding_link(),
        }
    }

    pub fn checks(&self) -> &[IdentityCheck] {
        match self {
            ProbeOutcome::Bound(_) => &[],
            ProbeOutcome::Chain(c) => &c.checks,
        }
    }
}

/// Evaluates `probe` on the context matrix. Two-operand lemmas take their
/// second operand from `partner`: `LEM-SUM` uses `(A, B)`, `LEM-POSDIFF`
/// uses `(|A|, |B|)`.
pub fn evaluate(
    ctx: &MatrixContext,
    probe: &Probe,
    partner: Option<&ComplexMatrix>,
) -> Result<ProbeOutcome> {
    use ProbeOutcome::{Bound, Chain};
    let need_partner = || {
        partner
            .ok_or_else(|| Error::InvalidParameter(format!("{} needs a second matrix", probe.id)))
    };
    Ok(match probe.id {
        BoundId::B0 => Chain(chain_b0(ctx)?),
        BoundId::Kit => Bound(bound_kit(ctx)?),
        BoundId::Sq => Chain(chain_sq(ctx)?),
        BoundId::Lem1Plus => Bound(bound_lem1(ctx, true)?),
        BoundId::Lem1Minus => Bound(bound_lem1(ctx, false)?),
        BoundId::T1 => Chain(chain_t1(ctx)?),
        BoundId::LemSum => Bound(bound_lem_sum(ctx, need_partner()?)?),
        BoundId::T2 => Chain(chain_t2(ctx)?),
        BoundId::LemPosDiff => {
            let b = need_partner()?;
            let p = ctx.polar()?.abs_left();
            let q = PolarParts::new(b)?.abs_left();
            Bound(bound_lem_pos_diff(&p, &q)?)
        }
        BoundId::T3 => Bound(bound_t3(ctx)?),
        BoundId::T3Printed => Bound(bound_t3_printed(ctx)?),
        BoundId::Func => Chain(chain_functional(ctx, &FunctionPair::power_sqrt(2.0))?),
        BoundId::Cor => Chain(chain_cor(
            ctx,
            probe.exponent.unwrap_or(DEFAULT_COR_EXPONENT),
        )?),
    })
}

/// Side-by-side lower and upper refinements of `w(A)^2` for one matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TightnessRecord {
    pub omega_sq: f64,
    /// `(||A||/2)^2`
    pub b0_lower_sq: f64,
    pub t1_middle: f64,
    pub t2_middle: f64,
    pub sq_lower: f64,
    pub sq_upper: f64,
    pub t3_rhs: f64,
    /// `(||(|A| + |A*|)||/2)^2`
    pub kit_rhs_sq: f64,
    pub sharpest_lower: &'static str,
    pub sharpest_upper: &'static str,
}

pub fn tightness_compare(a: &ComplexMatrix, cfg: &RadiusConfig) -> Result<TightnessRecord> {
    let ctx = MatrixContext::new(a, cfg)?;
    let b0 = chain_b0(&ctx)?;
    let t1 = chain_t1(&ctx)?;
    let t2 = chain_t2(&ctx)?;
    let sq = chain_sq(&ctx)?;
    let t3 = bound_t3(&ctx)?;
    let kit = bound_kit(&ctx)?;
    let lowers = [
        ("B0", b0.terms[0] * b0.terms[0]),
        ("T1", t1.terms[1]),
        ("T2", t2.terms[1]),
        ("SQ", sq.terms[0]),
    ];
    let uppers = [
        ("SQ", sq.terms[2]),
        ("T3", t3.rhs),
        ("KIT", kit.rhs * kit.rhs),
    ];
    let sharpest_lower = lowers
        .iter()
        .reduce(|a, b| if b.1 > a.1 { b } else { a })
        .unwrap()
        .0;
    let sharpest_upper = uppers
        .iter()
        .reduce(|a, b| if b.1 < a.1 { b } else { a })
        .unwrap()
        .0;
    Ok(TightnessRecord {
        omega_sq: sq.terms[1],
        b0_lower_sq: lowers[0].1,
        t1_middle: lowers[1].1,
        t2_middle: lowers[2].1,
        sq_lower: lowers[3].1,
        sq_upper: uppers[0].1,
        t3_rhs: uppers[1].1,
        kit_rhs_sq: uppers[2].1,
        sharpest_lower,
        sharpest_upper,
    })
}
