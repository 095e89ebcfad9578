//! Seeded sampling of surface-group representations.
//!
//! Random matrices come from exponentiating traceless matrices with
//! uniform entries, which spreads samples across elliptic, parabolic and
//! hyperbolic classes. Relations are closed exactly by solving for the
//! last boundary generator.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::components::{BoundaryClass, Signature};
use crate::psl2::{
    canonical_lift, classify, euler_number, rot, IsometryClass, Mat2, Psl2Error, Representation,
    CLASS_TOL, INT_TOL, RELATION_TOL,
};
use crate::rat;

#[derive(Debug, Error)]
pub enum SampleError {
    #[error("no sample matched the boundary classes within {0} tries")]
    NotFound(u32),
    #[error("no sign assignment reaches Euler number 1; best candidate measured {0}")]
    NoMaximalSigns(f64),
    #[error("invalid sampling config: {0}")]
    Config(String),
    #[error(transparent)]
    Numeric(#[from] Psl2Error),
}

/// Knobs for seeded rejection sampling.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(default)]
pub struct SampleConfig {
    pub seed: u64,
    pub max_tries: u32,
    pub spread: f64,
    pub relation_tol: f64,
    pub int_tol: f64,
}

impl Default for SampleConfig {
    fn default() -> Self {
        SampleConfig {
            seed: 0,
            max_tries: 1000,
            spread: 1.0,
            relation_tol: RELATION_TOL,
            int_tol: INT_TOL,
        }
    }
}

impl SampleConfig {
    fn check(&self) -> Result<(), SampleError> {
        if self.max_tries < 1 {
            return Err(SampleError::Config("max_tries must be at least 1".into()));
        }
        if !self.spread.is_finite() || self.spread <= 0.0 {
            return Err(SampleError::Config("spread must be positive".into()));
        }
        Ok(())
    }
}

/// Exponential of `[[x, b], [c, -x]]`, in closed form: the square of a
/// traceless 2x2 matrix is `-det` times the identity, so the series splits
/// into a circular or hyperbolic part.
fn exp_traceless(x: f64, b: f64, c: f64) -> Mat2 {
    let det = -x * x - b * c;
    let (even, odd) = if det > 0.0 {
        let w = det.sqrt();
        (w.cos(), w.sin() / w)
    } else if det < 0.0 {
        let w = (-det).sqrt();
        (w.cosh(), w.sinh() / w)
    } else {
        (1.0, 1.0)
    };
    Mat2::new(even + odd * x, odd * b, odd * c, even - odd * x)
        .expect("exponentials have unit determinant")
}

/// Random element of PSL(2,R): `exp X` for a traceless `X` with entries
/// uniform in `[-spread, spread]`.
pub fn random_psl2(rng: &mut impl Rng, spread: f64) -> Mat2 {
    let x = rng.gen_range(-spread..spread);
    let b = rng.gen_range(-spread..spread);
    let c = rng.gen_range(-spread..spread);
    exp_traceless(x, b, c)
}

/// A standard representative of the class.
pub fn class_representative(class: &IsometryClass) -> Mat2 {
    match class {
        IsometryClass::Identity => Mat2::identity(),
        IsometryClass::Elliptic { frac_rot } => {
            Mat2::rotation(2.0 * std::f64::consts::PI * frac_rot)
        }
        IsometryClass::PositiveUnipotent => Mat2::unipotent_pos(),
        IsometryClass::NegativeUnipotent => Mat2::unipotent_neg(),
        IsometryClass::Hyperbolic { length } => {
            Mat2::diagonal((length / 2.0).exp()).expect("positive eigenvalue")
        }
    }
}

/// Random element of the given conjugacy class: a representative conjugated
/// by a random element.
pub fn random_in_class(class: &IsometryClass, rng: &mut impl Rng, spread: f64) -> Mat2 {
    let g = random_psl2(rng, spread);
    g.mul(&class_representative(class)).mul(&g.inverse())
}

/// The unique last boundary generator closing the surface-group relation.
pub fn complete_relation(handles: &[(Mat2, Mat2)], boundaries: &[Mat2]) -> Mat2 {
    let mut p = Mat2::identity();
    for (a, b) in handles {
        p = p.mul(a).mul(b).mul(&a.inverse()).mul(&b.inverse());
    }
    for c in boundaries {
        p = p.mul(c);
    }
    p.inverse()
}

/// Unconstrained random representation of a genus `g` surface with `n >= 1`
/// punctures; the last boundary image closes the relation.
pub fn random_rep(
    genus: u32,
    punctures: usize,
    rng: &mut impl Rng,
    spread: f64,
) -> Result<Representation, Psl2Error> {
    if punctures == 0 {
        return Err(Psl2Error::InvalidSurface(
            "sampling needs at least one puncture to close the relation".into(),
        ));
    }
    let handles: Vec<(Mat2, Mat2)> = (0..genus)
        .map(|_| (random_psl2(rng, spread), random_psl2(rng, spread)))
        .collect();
    let mut boundaries: Vec<Mat2> = (0..punctures - 1)
        .map(|_| random_psl2(rng, spread))
        .collect();
    boundaries.push(complete_relation(&handles, &boundaries));
    Representation::new(genus, handles, boundaries)
}

/// Random representation whose boundary monodromies land in the prescribed
/// classes. The first `n - 1` boundaries are drawn inside their classes;
/// the forced last one is accepted when its class tag matches, so elliptic
/// targets constrain the tag but not the angle there.
pub fn sample_in_classes(
    genus: u32,
    targets: &[IsometryClass],
    rng: &mut impl Rng,
    spread: f64,
    max_tries: u32,
) -> Result<Representation, Psl2Error> {
    let n = targets.len();
    if n == 0 {
        return Err(Psl2Error::InvalidSurface(
            "sampling needs at least one puncture to close the relation".into(),
        ));
    }
    for _ in 0..max_tries {
        let handles: Vec<(Mat2, Mat2)> = (0..genus)
            .map(|_| (random_psl2(rng, spread), random_psl2(rng, spread)))
            .collect();
        let mut boundaries: Vec<Mat2> = targets[..n - 1]
            .iter()
            .map(|t| random_in_class(t, rng, spread))
            .collect();
        let last = complete_relation(&handles, &boundaries);
        let matches = classify(&last, CLASS_TOL)
            .map(|cl| cl.tag() == targets[n - 1].tag())
            .unwrap_or(false);
        if matches {
            boundaries.push(last);
            return Representation::new(genus, handles, boundaries);
        }
    }
    Err(Psl2Error::InvalidSurface(format!(
        "no sample matched the last boundary class in {max_tries} tries"
    )))
}

/// Numeric sampling target for an exact boundary class. Hyperbolic classes
/// carry no preferred length, so one is drawn fresh per call.
fn numeric_target(class: &BoundaryClass, rng: &mut impl Rng, spread: f64) -> IsometryClass {
    match class {
        BoundaryClass::Identity => IsometryClass::Identity,
        BoundaryClass::Elliptic { frac_rot } => IsometryClass::Elliptic {
            frac_rot: rat::to_f64(*frac_rot),
        },
        BoundaryClass::Hyperbolic => IsometryClass::Hyperbolic {
            length: rng.gen_range(0.3..2.0 * spread + 0.8),
        },
        BoundaryClass::PositiveUnipotent => IsometryClass::PositiveUnipotent,
        BoundaryClass::NegativeUnipotent => IsometryClass::NegativeUnipotent,
    }
}

/// Seeded rejection sampling of a representation with the signature's
/// boundary classes. All boundaries but the last are drawn inside their
/// classes; a draw is accepted when the forced last boundary lands in the
/// right class by tag, so an elliptic last slot matches any rotation angle
/// and the achieved one is reported, not prescribed.
pub fn sample_rep(sig: &Signature, cfg: &SampleConfig) -> Result<Representation, SampleError> {
    cfg.check()?;
    let n = sig.punctures();
    if n == 0 {
        return Err(SampleError::Config(
            "sampling needs at least one puncture to close the relation".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let want_tag = numeric_target(&sig.boundary[n - 1], &mut rng, cfg.spread).tag();
    for _ in 0..cfg.max_tries {
        let handles: Vec<(Mat2, Mat2)> = (0..sig.genus)
            .map(|_| {
                (
                    random_psl2(&mut rng, cfg.spread),
                    random_psl2(&mut rng, cfg.spread),
                )
            })
            .collect();
        let mut boundaries: Vec<Mat2> = sig.boundary[..n - 1]
            .iter()
            .map(|t| {
                let target = numeric_target(t, &mut rng, cfg.spread);
                random_in_class(&target, &mut rng, cfg.spread)
            })
            .collect();
        let last = complete_relation(&handles, &boundaries);
        let matches = classify(&last, CLASS_TOL)
            .map(|cl| cl.tag() == want_tag)
            .unwrap_or(false);
        if matches {
            boundaries.push(last);
            let rep = Representation {
                genus: sig.genus,
                handles,
                boundaries,
            };
            if rep.validate(cfg.relation_tol).is_ok() {
                return Ok(rep);
            }
        }
    }
    Err(SampleError::NotFound(cfg.max_tries))
}

/// Holonomy of a hyperbolic three-holed sphere with boundary traces of
/// absolute value `|x|, |y|, |z| >= 2`, normalized to Euler number +1.
/// Boundary curves are hyperbolic for |trace| above 2 and parabolic at 2.
///
/// Only the trace magnitudes are geometric; all eight sign assignments
/// (and their orientation reversals) are searched for the one whose
/// measured Euler number is maximal.
pub fn pants_rep(x: f64, y: f64, z: f64) -> Result<Representation, SampleError> {
    for t in [x, y, z] {
        if !t.is_finite() || t.abs() < 2.0 {
            return Err(SampleError::Numeric(Psl2Error::InvalidSurface(format!(
                "pants traces need |tr| >= 2, got {t}"
            ))));
        }
    }
    let mut best = f64::NEG_INFINITY;
    for signs in 0..8u8 {
        let sx = if signs & 1 == 0 { x } else { -x };
        let sy = if signs & 2 == 0 { y } else { -y };
        let sz = if signs & 4 == 0 { z } else { -z };
        let xi = (sz + (sz * sz - 4.0).sqrt()) / 2.0;
        let a = Mat2::new(sx, -1.0, 1.0, 0.0)?;
        let b = Mat2::new(0.0, xi, -1.0 / xi, sy)?;
        let c = a.mul(&b).inverse();
        let Ok(rep) = Representation::new(0, vec![], vec![a, b, c]) else {
            continue;
        };
        let Ok(eu) = euler_number(&rep) else { continue };
        if (eu - 1.0).abs() <= INT_TOL {
            return Ok(rep);
        }
        if (eu + 1.0).abs() <= INT_TOL {
            // conjugating by diag(1,-1) reverses orientation and negates
            // the Euler number while keeping every trace
            let flipped: Vec<Mat2> = rep.boundaries.iter().map(Mat2::reflected).collect();
            return Ok(Representation::new(0, vec![], flipped)?);
        }
        best = best.max(eu.abs());
    }
    Err(SampleError::NoMaximalSigns(best))
}

/// Boundary summary of a sampled representation, for reporting.
#[derive(Debug, Clone, serde::Serialize)]
pub struct RepInvariants {
    pub euler: f64,
    pub boundary_classes: Vec<String>,
    pub boundary_rots: Vec<f64>,
}

pub fn rep_invariants(rep: &Representation) -> Result<RepInvariants, Psl2Error> {
    let euler = euler_number(rep)?;
    let mut tags = Vec::new();
    let mut rots = Vec::new();
    for c in &rep.boundaries {
        tags.push(classify(c, CLASS_TOL)?.tag().to_string());
        rots.push(rot(&canonical_lift(c))?);
    }
    Ok(RepInvariants {
        euler,
        boundary_classes: tags,
        boundary_rots: rots,
    })
}
