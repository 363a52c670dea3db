//! Feasible sets for the corner entry.
//!
//! With every other entry fixed, the corner conditions are of the form
//! `|corner * k + l|^2 <= m`, so the admissible corners form a closed disk.

use serde::{Deserialize, Serialize};

use super::{classify_4x4, is_unimodular, modulus_exceeds_one, Terms4};
use crate::error::Result;
use crate::scalar::{defect, ComplexScalar, ZERO};
use crate::tolerance::Tolerances;
use crate::tri::{TriMatrix3, TriMatrix4};
use crate::verdict::Branch;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Disk {
    pub center: ComplexScalar,
    pub radius: f64,
    pub empty: bool,
    pub whole_plane: bool,
    pub notes: Vec<String>,
}

impl Disk {
    pub fn new(center: ComplexScalar, radius: f64) -> Self {
        Disk {
            center: ComplexScalar::new(center.re + 0.0, center.im + 0.0),
            radius,
            empty: false,
            whole_plane: false,
            notes: Vec::new(),
        }
    }

    pub fn empty(note: impl Into<String>) -> Self {
        Disk {
            center: ZERO,
            radius: 0.0,
            empty: true,
            whole_plane: false,
            notes: vec![note.into()],
        }
    }

    pub fn whole_plane() -> Self {
        Disk {
            center: ZERO,
            radius: f64::INFINITY,
            empty: false,
            whole_plane: true,
            notes: Vec::new(),
        }
    }

    /// `|z - center| <= radius + slack`.
    pub fn contains(&self, z: ComplexScalar, slack: f64) -> bool {
        if self.empty {
            return false;
        }
        self.whole_plane || (z - self.center).norm() <= self.radius + slack
    }

    /// Point on the boundary circle at angle `theta`.
    pub fn boundary_point(&self, theta: f64) -> ComplexScalar {
        self.center + ComplexScalar::from_polar(self.radius, theta)
    }

    /// `sqrt(max(m, 0)) / scale`; a negative `m` only arises from rounding
    /// once the non-corner conditions have passed.
    fn radius_from(m: f64, scale: f64) -> f64 {
        m.max(0.0).sqrt() / scale
    }

    pub(crate) fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }
}

fn empty_if_failing(failures: &[(&str, f64)], tol: &Tolerances) -> Option<Disk> {
    let failing: Vec<String> = failures
        .iter()
        .filter(|(_, r)| !tol.passes(*r))
        .map(|(name, r)| format!("{name} fails (residual {r:.6e})"))
        .collect();
    if failing.is_empty() {
        None
    } else {
        Some(Disk::empty(failing.join("; ")))
    }
}

/// Admissible corners `gamma` for a 4×4 record; `t.gamma` is ignored.
pub fn gamma_disk(t: &TriMatrix4, tol: &Tolerances) -> Result<Disk> {
    let t = t.with_gamma(ZERO);
    t.ensure_finite()?;
    let s = Terms4::new(&t);
    let [a1, a2, a3] = t.alpha;
    let [b1, b2] = t.beta;
    let [_, w2, w3, _] = t.omega;
    let d = s.d;

    let branch = classify_4x4(&t, &s, tol);
    let disk = match branch {
        Branch::PreconditionFailed => {
            let which: Vec<String> = t
                .omega
                .iter()
                .enumerate()
                .filter(|(_, &w)| modulus_exceeds_one(w, tol))
                .map(|(i, _)| format!("omega{}_modulus", i + 1))
                .collect();
            return Ok(Disk::empty(format!("{} fails", which.join(", "))));
        }
        Branch::Main => {
            if let Some(e) = empty_if_failing(
                &[
                    ("alpha1_bound", s.f1),
                    ("alpha3_bound", s.f3),
                    ("alpha2_strict", s.k),
                    ("beta1_bound", s.q),
                    ("beta2_bound", s.r),
                ],
                tol,
            ) {
                return Ok(e);
            }
            Disk::new(-s.l / s.k, Disk::radius_from(s.q * s.r / s.p, s.k))
        }
        Branch::BoundaryAlpha2 => {
            let k = s.k.max(0.0);
            if let Some(e) = empty_if_failing(
                &[
                    ("alpha1_bound", s.f1),
                    ("alpha3_bound", s.f3),
                    ("beta1_alignment", s.f1 * k - s.x1.norm_sqr()),
                    ("beta2_alignment", k * s.f3 - s.x2.norm_sqr()),
                ],
                tol,
            ) {
                return Ok(e);
            }
            Disk::new(s.chain / s.p, Disk::radius_from(s.f1 * s.f3 / s.p, 1.0))
        }
        Branch::Omega2Unimodular => {
            let b1_margin = d[0] * d[2] - b1.norm_sqr();
            if let Some(e) = empty_if_failing(
                &[
                    ("alpha1_zero", -a1.norm_sqr()),
                    ("alpha2_zero", -a2.norm_sqr()),
                    ("beta2_zero", -b2.norm_sqr()),
                    ("alpha3_bound", s.f3),
                    ("beta1_bound", b1_margin),
                ],
                tol,
            ) {
                return Ok(e);
            }
            Disk::new(
                -a3 * b1 * w3.conj() / d[2],
                Disk::radius_from(s.f3 * b1_margin, d[2]),
            )
        }
        Branch::Omega3Unimodular => {
            let b2_margin = d[1] * d[3] - b2.norm_sqr();
            if let Some(e) = empty_if_failing(
                &[
                    ("alpha2_zero", -a2.norm_sqr()),
                    ("alpha3_zero", -a3.norm_sqr()),
                    ("beta1_zero", -b1.norm_sqr()),
                    ("alpha1_bound", s.f1),
                    ("beta2_bound", b2_margin),
                ],
                tol,
            ) {
                return Ok(e);
            }
            Disk::new(
                -a1 * b2 * w2.conj() / d[1],
                Disk::radius_from(s.f1 * b2_margin, d[1]),
            )
        }
        Branch::BothUnimodular => {
            if let Some(e) = empty_if_failing(
                &[
                    ("alpha1_zero", -a1.norm_sqr()),
                    ("alpha2_zero", -a2.norm_sqr()),
                    ("alpha3_zero", -a3.norm_sqr()),
                    ("beta1_bound", d[0] * d[2] - b1.norm_sqr()),
                    ("beta2_bound", d[1] * d[3] - b2.norm_sqr()),
                ],
                tol,
            ) {
                return Ok(e);
            }
            Disk::new(ZERO, Disk::radius_from(d[0] * d[3], 1.0))
        }
        Branch::Oracle | Branch::Parrott => unreachable!("not produced by classify_4x4"),
    };
    Ok(disk.with_note(format!("branch {branch}")))
}

/// Admissible corners `beta` for a 3×3 record; `t.beta` is ignored.
pub fn beta_disk_3x3(t: &TriMatrix3, tol: &Tolerances) -> Result<Disk> {
    let t = t.with_beta(ZERO);
    t.ensure_finite()?;
    let [w1, w2, w3] = t.omega;
    let [a1, a2] = t.alpha;
    if let Some((i, _)) = t
        .omega
        .iter()
        .enumerate()
        .find(|(_, &w)| modulus_exceeds_one(w, tol))
    {
        return Ok(Disk::empty(format!("omega{}_modulus fails", i + 1)));
    }
    let (d1, d2, d3) = (defect(w1), defect(w2), defect(w3));

    if is_unimodular(w2, tol) {
        if let Some(e) = empty_if_failing(
            &[
                ("alpha1_zero", -a1.norm_sqr()),
                ("alpha2_zero", -a2.norm_sqr()),
            ],
            tol,
        ) {
            return Ok(e);
        }
        return Ok(Disk::new(ZERO, Disk::radius_from(d1 * d3, 1.0))
            .with_note(format!("branch {}", Branch::Omega2Unimodular)));
    }

    let f1 = d1 * d2 - a1.norm_sqr();
    let f2 = d2 * d3 - a2.norm_sqr();
    if let Some(e) = empty_if_failing(&[("alpha1_bound", f1), ("alpha2_bound", f2)], tol) {
        return Ok(e);
    }
    Ok(
        Disk::new(-a1 * a2 * w2.conj() / d2, Disk::radius_from(f1 * f2, d2))
            .with_note(format!("branch {}", Branch::Main)),
    )
}
