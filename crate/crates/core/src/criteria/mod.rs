//! Explicit contraction criteria.
//!
//! Every check returns a [`Verdict`] whose residuals are `rhs - lhs` of the
//! polynomial inequalities involved. Conditions are labelled by what they
//! bound:
//!
//! | label              | meaning                                                  |
//! |--------------------|----------------------------------------------------------|
//! | `alphaN_bound`     | `|alpha_N|^2 <= (1-|omega_N|^2)(1-|omega_{N+1}|^2)`      |
//! | `alpha2_strict`    | the same bound for `alpha2`, required strictly           |
//! | `betaN_bound`      | second-order bound on `beta_N` (3×3 compression)          |
//! | `betaN_alignment`  | `beta_N` pinned to its value when `alpha2` is extremal    |
//! | `gamma_bound`      | third-order bound on the corner                          |
//! | `xN_zero`          | entry forced to vanish by a unimodular diagonal entry    |
//!
//! Equality-type conditions are encoded as `-|x|^2 >= 0` so that every residual
//! has the same sign convention.

mod disk;

pub use disk::{beta_disk_3x3, gamma_disk, Disk};

use crate::error::{Error, Result};
use crate::scalar::{defect, ComplexScalar, ZERO};
use crate::tolerance::Tolerances;
use crate::tri::{TriMatrix3, TriMatrix4};
use crate::verdict::{Branch, Verdict};

/// Closed-form 2×2 test: the largest singular value of `[[a, b], [c, d]]`
/// is the larger root of the Gram characteristic polynomial
/// `x^2 - tr x + |ad - bc|^2`.
pub fn check_contraction_2x2(
    a: ComplexScalar,
    b: ComplexScalar,
    c: ComplexScalar,
    d: ComplexScalar,
    tol: &Tolerances,
) -> Verdict {
    let trace = a.norm_sqr() + b.norm_sqr() + c.norm_sqr() + d.norm_sqr();
    let det = (a * d - b * c).norm_sqr();
    let disc = (trace * trace - 4.0 * det).max(0.0);
    let sigma_max = ((trace + disc.sqrt()) / 2.0).sqrt();
    let sigma_min = if sigma_max > 0.0 {
        det.sqrt() / sigma_max
    } else {
        0.0
    };
    let mut v = Verdict::new(Branch::Main);
    v.record("norm_margin", 1.0 - sigma_max);
    v.note(format!(
        "singular values {sigma_max:.15}, {sigma_min:.15}"
    ));
    v.settle(tol.residual)
}

pub(crate) fn modulus_exceeds_one(z: ComplexScalar, tol: &Tolerances) -> bool {
    let m = z.norm_sqr();
    m > 1.0 && !tol.on_boundary(m, 1.0)
}

pub(crate) fn is_unimodular(z: ComplexScalar, tol: &Tolerances) -> bool {
    tol.on_boundary(z.norm_sqr(), 1.0)
}

/// Records every diagonal entry of modulus above one; returns whether any did.
fn record_modulus_failures(v: &mut Verdict, omega: &[ComplexScalar], tol: &Tolerances) -> bool {
    let mut failed = false;
    for (i, &w) in omega.iter().enumerate() {
        if modulus_exceeds_one(w, tol) {
            v.record(&format!("omega{}_modulus", i + 1), defect(w));
            failed = true;
        }
    }
    if failed {
        v.note("a diagonal entry has modulus above one");
    }
    failed
}

/// Criterion for `[[w1, a1, b], [0, w2, a2], [0, 0, w3]]`.
pub fn check_contraction_3x3(t: &TriMatrix3, tol: &Tolerances) -> Result<Verdict> {
    t.ensure_finite()?;
    let [w1, w2, w3] = t.omega;
    let [a1, a2] = t.alpha;
    let b = t.beta;

    let mut v = Verdict::new(Branch::PreconditionFailed);
    if record_modulus_failures(&mut v, &t.omega, tol) {
        return Ok(v.settle(tol.residual));
    }
    let (d1, d2, d3) = (defect(w1), defect(w2), defect(w3));

    if is_unimodular(w2, tol) {
        v.branch = Branch::Omega2Unimodular;
        v.record("alpha1_zero", -a1.norm_sqr());
        v.record("alpha2_zero", -a2.norm_sqr());
        v.record("beta_bound", d1 * d3 - b.norm_sqr());
    } else {
        v.branch = Branch::Main;
        let f1 = d1 * d2 - a1.norm_sqr();
        let f2 = d2 * d3 - a2.norm_sqr();
        v.record("alpha1_bound", f1);
        v.record("alpha2_bound", f2);
        let lhs = (b * d2 + a1 * a2 * w2.conj()).norm_sqr();
        v.record("beta_bound", f1 * f2 - lhs);
    }
    Ok(v.settle(tol.residual))
}

/// Scalar quantities shared by the 4×4 criterion and the corner disk.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Terms4 {
    pub d: [f64; 4],
    /// `(1-|w2|^2)(1-|w3|^2)`.
    pub p: f64,
    /// `p - |a2|^2`.
    pub k: f64,
    /// `(1-|w1|^2)(1-|w2|^2) - |a1|^2`.
    pub f1: f64,
    /// `(1-|w3|^2)(1-|w4|^2) - |a3|^2`.
    pub f3: f64,
    /// `b1 (1-|w2|^2) + a1 a2 conj(w2)`.
    pub x1: ComplexScalar,
    /// `b2 (1-|w3|^2) + a2 a3 conj(w3)`.
    pub x2: ComplexScalar,
    /// Second-order margins `f1 k - |x1|^2` and `k f3 - |x2|^2`.
    pub q: f64,
    pub r: f64,
    /// Constant part of the corner expression `gamma k + l`.
    pub l: ComplexScalar,
    /// `conj(w2 w3) a1 a2 a3`.
    pub chain: ComplexScalar,
}

impl Terms4 {
    pub fn new(t: &TriMatrix4) -> Self {
        let [w1, w2, w3, w4] = t.omega;
        let [a1, a2, a3] = t.alpha;
        let [b1, b2] = t.beta;
        let d = [defect(w1), defect(w2), defect(w3), defect(w4)];
        let p = d[1] * d[2];
        let k = p - a2.norm_sqr();
        let f1 = d[0] * d[1] - a1.norm_sqr();
        let f3 = d[2] * d[3] - a3.norm_sqr();
        let x1 = b1 * d[1] + a1 * a2 * w2.conj();
        let x2 = b2 * d[2] + a2 * a3 * w3.conj();
        let chain = (w2 * w3).conj() * a1 * a2 * a3;
        let l = a1 * b2 * w2.conj() * d[2] + a3 * b1 * w3.conj() * d[1] + b1 * b2 * a2.conj() + chain;
        Terms4 {
            d,
            p,
            k,
            f1,
            f3,
            x1,
            x2,
            q: f1 * k - x1.norm_sqr(),
            r: k * f3 - x2.norm_sqr(),
            l,
            chain,
        }
    }
}

/// Which alternative of the 4×4 criterion applies, before looking at gamma.
pub(crate) fn classify_4x4(t: &TriMatrix4, terms: &Terms4, tol: &Tolerances) -> Branch {
    if t.omega.iter().any(|&w| modulus_exceeds_one(w, tol)) {
        return Branch::PreconditionFailed;
    }
    match (is_unimodular(t.omega[1], tol), is_unimodular(t.omega[2], tol)) {
        (true, true) => Branch::BothUnimodular,
        (true, false) => Branch::Omega2Unimodular,
        (false, true) => Branch::Omega3Unimodular,
        (false, false) => {
            if tol.on_boundary(t.alpha[1].norm_sqr(), terms.p) {
                Branch::BoundaryAlpha2
            } else {
                Branch::Main
            }
        }
    }
}

/// Records every condition of the active branch except the corner one.
fn record_non_corner(v: &mut Verdict, t: &TriMatrix4, s: &Terms4) {
    let [a1, a2, a3] = t.alpha;
    let [b1, b2] = t.beta;
    let d = s.d;
    match v.branch {
        Branch::Main => {
            v.record("alpha1_bound", s.f1);
            v.record("alpha3_bound", s.f3);
            v.record("alpha2_strict", s.k);
            v.record("beta1_bound", s.q);
            v.record("beta2_bound", s.r);
        }
        Branch::BoundaryAlpha2 => {
            v.record("alpha1_bound", s.f1);
            v.record("alpha3_bound", s.f3);
            // At k = 0 these reduce to beta_i = -a_i a_{i+1} conj(w_{i+1}) / (1 - |w_{i+1}|^2);
            // keeping the k term makes the band continuous with the main branch.
            let k = s.k.max(0.0);
            v.record("beta1_alignment", s.f1 * k - s.x1.norm_sqr());
            v.record("beta2_alignment", k * s.f3 - s.x2.norm_sqr());
            v.note(format!("alpha2 gap {:.3e} inside boundary band", s.k));
        }
        Branch::Omega2Unimodular => {
            v.record("alpha1_zero", -a1.norm_sqr());
            v.record("alpha2_zero", -a2.norm_sqr());
            v.record("beta2_zero", -b2.norm_sqr());
            v.record("alpha3_bound", s.f3);
            v.record("beta1_bound", d[0] * d[2] - b1.norm_sqr());
        }
        Branch::Omega3Unimodular => {
            v.record("alpha2_zero", -a2.norm_sqr());
            v.record("alpha3_zero", -a3.norm_sqr());
            v.record("beta1_zero", -b1.norm_sqr());
            v.record("alpha1_bound", s.f1);
            v.record("beta2_bound", d[1] * d[3] - b2.norm_sqr());
        }
        Branch::BothUnimodular => {
            v.record("alpha1_zero", -a1.norm_sqr());
            v.record("alpha2_zero", -a2.norm_sqr());
            v.record("alpha3_zero", -a3.norm_sqr());
            v.record("beta1_bound", d[0] * d[2] - b1.norm_sqr());
            v.record("beta2_bound", d[1] * d[3] - b2.norm_sqr());
        }
        _ => {}
    }
}

/// The corner condition of the active branch, as `rhs - lhs`.
fn corner_residual(branch: Branch, t: &TriMatrix4, s: &Terms4) -> Option<f64> {
    let [a1, _, a3] = t.alpha;
    let [b1, b2] = t.beta;
    let [_, w2, w3, _] = t.omega;
    let g = t.gamma;
    let d = s.d;
    let r = match branch {
        Branch::Main => s.q * s.r - (g * s.k + s.l).norm_sqr() * s.p,
        Branch::BoundaryAlpha2 => s.p * s.f1 * s.f3 - (g * s.p - s.chain).norm_sqr(),
        Branch::Omega2Unimodular => {
            let b1_margin = d[0] * d[2] - b1.norm_sqr();
            s.f3 * b1_margin - (g * d[2] + a3 * b1 * w3.conj()).norm_sqr()
        }
        Branch::Omega3Unimodular => {
            let b2_margin = d[1] * d[3] - b2.norm_sqr();
            s.f1 * b2_margin - (g * d[1] + a1 * b2 * w2.conj()).norm_sqr()
        }
        Branch::BothUnimodular => d[0] * d[3] - g.norm_sqr(),
        _ => return None,
    };
    Some(r)
}

/// Criterion for the full 4×4 upper-triangular matrix, dispatching over the
/// five alternatives on `|w2|`, `|w3|` and `|a2|^2`.
pub fn check_contraction_4x4(t: &TriMatrix4, tol: &Tolerances) -> Result<Verdict> {
    t.ensure_finite()?;
    let terms = Terms4::new(t);
    let mut v = Verdict::new(classify_4x4(t, &terms, tol));
    if v.branch == Branch::PreconditionFailed {
        record_modulus_failures(&mut v, &t.omega, tol);
        return Ok(v.settle(tol.residual));
    }
    record_non_corner(&mut v, t, &terms);
    if let Some(r) = corner_residual(v.branch, t, &terms) {
        v.record("gamma_bound", r);
    }
    Ok(v.settle(tol.residual))
}

/// Criterion specialised to `omega3 = 0`, written directly in the entries of
/// the matrix rather than through the general branch formulas.
///
/// Requires `omega3 == 0` exactly and `|omega2| < 1`.
pub fn check_4x4_omega3_zero(t: &TriMatrix4, tol: &Tolerances) -> Result<Verdict> {
    t.ensure_finite()?;
    if t.omega[2] != ZERO {
        return Err(Error::domain(format!(
            "omega3 must be exactly zero, got {}",
            t.omega[2]
        )));
    }
    let [w1, w2, _, w4] = t.omega;
    if w2.norm_sqr() >= 1.0 || is_unimodular(w2, tol) {
        return Err(Error::domain(format!(
            "|omega2| must be below one, got {}",
            w2.norm()
        )));
    }
    let [a1, a2, a3] = t.alpha;
    let [b1, b2] = t.beta;
    let g = t.gamma;

    let mut v = Verdict::new(Branch::PreconditionFailed);
    if record_modulus_failures(&mut v, &t.omega, tol) {
        return Ok(v.settle(tol.residual));
    }

    let d1 = defect(w1);
    let d2 = defect(w2);
    let d4 = defect(w4);
    let first = d1 * d2 - a1.norm_sqr();
    let last = d4 - a3.norm_sqr();
    let gap = d2 - a2.norm_sqr();
    v.record("alpha1_bound", first);
    v.record("alpha3_bound", last);

    let x1 = b1 * d2 + a1 * a2 * w2.conj();
    if tol.on_boundary(a2.norm_sqr(), d2) {
        v.branch = Branch::BoundaryAlpha2;
        let k = gap.max(0.0);
        v.record("beta1_alignment", first * k - x1.norm_sqr());
        v.record("beta2_alignment", k * last - b2.norm_sqr());
        v.record("gamma_bound", first * last - g.norm_sqr() * d2);
    } else {
        v.branch = Branch::Main;
        v.record("alpha2_strict", gap);
        let beta1 = first * gap - x1.norm_sqr();
        let beta2 = gap * last - b2.norm_sqr();
        v.record("beta1_bound", beta1);
        v.record("beta2_bound", beta2);
        let corner = g * gap + b2 * (w2.conj() * a1 + a2.conj() * b1);
        v.record("gamma_bound", beta1 * beta2 - corner.norm_sqr() * d2);
    }
    Ok(v.settle(tol.residual))
}
