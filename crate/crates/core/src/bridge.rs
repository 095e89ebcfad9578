//! Reconciliation of the two exact engines: a PSL(2,R) boundary class
//! lifts to SL(2,R) in exactly two ways, and collecting the stratum Euler
//! numbers over all lift assignments (with trivial determinant bundle)
//! must reproduce the component Euler set of the signature.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::components::{self, BoundaryClass, ComponentError, Signature};
use crate::higgs::{self, HiggsError, Residue, SigmaFixedStratum, Sign, StratumEntry, Weight};
use crate::rat::{self, Rat};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BridgeError {
    #[error(transparent)]
    Higgs(#[from] HiggsError),
    #[error(transparent)]
    Component(#[from] ComponentError),
}

/// One SL(2,R) lift of a PSL(2,R) conjugacy class: the parabolic weight
/// and residue class it induces at the puncture, plus whatever stratum
/// data the lift pins down there.
#[derive(Debug, Clone, PartialEq)]
pub struct SlLift {
    pub weight: Weight,
    pub residue: Residue,
    /// Forced nilpotent sign (unipotent classes only).
    pub eps: Option<Sign>,
    /// Forced flag-jump bit (elliptic classes only).
    pub a: Option<u8>,
}

/// The two SL(2,R) lifts of a class. Central, unipotent and hyperbolic
/// classes lift with degenerate weight 0 or 1/2; an elliptic rotation by
/// r lifts to the half-angle rotations by r/2 and (r+1)/2, which carry
/// nondegenerate weights r/2 and (1-r)/2 and pin the flag-jump bit to 1
/// and 0 respectively.
pub fn class_lifts(class: &BoundaryClass) -> Result<[SlLift; 2], HiggsError> {
    let zero = rat::rat(0, 1);
    let half = rat::rat(1, 2);
    let deg_pair = |residue: Residue, eps: Option<Sign>| -> Result<[SlLift; 2], HiggsError> {
        Ok([
            SlLift {
                weight: Weight::degenerate(zero)?,
                residue: residue.clone(),
                eps,
                a: None,
            },
            SlLift {
                weight: Weight::degenerate(half)?,
                residue,
                eps,
                a: None,
            },
        ])
    };
    match class {
        BoundaryClass::Identity => deg_pair(Residue::Zero, None),
        BoundaryClass::PositiveUnipotent => deg_pair(Residue::Nilpotent, Some(Sign::Plus)),
        BoundaryClass::NegativeUnipotent => deg_pair(Residue::Nilpotent, Some(Sign::Minus)),
        // the length scale of the boundary geodesic does not move strata;
        // any positive residue determinant represents the class
        BoundaryClass::Hyperbolic => deg_pair(
            Residue::Invertible {
                det: rat::rat(1, 64),
            },
            None,
        ),
        BoundaryClass::Elliptic { frac_rot } => {
            let r = *frac_rot;
            Ok([
                SlLift {
                    weight: Weight::non_degenerate((Rat::from_integer(1) - r) / 2)?,
                    residue: Residue::Zero,
                    eps: None,
                    a: Some(0),
                },
                SlLift {
                    weight: Weight::non_degenerate(r / 2)?,
                    residue: Residue::Zero,
                    eps: None,
                    a: Some(1),
                },
            ])
        }
    }
}

/// Whether the stratum realizes every datum the lift assignment pins:
/// flag-jump bits at elliptic punctures, nilpotent signs at unipotent
/// ones.
fn lift_accepts(lifts: &[&SlLift], stratum: &SigmaFixedStratum) -> bool {
    let mut nil_pos = 0;
    for (i, lift) in lifts.iter().enumerate() {
        if let Some(a) = lift.a {
            if stratum.a[i] != a {
                return false;
            }
        }
        if stratum.residues[i] == Residue::Nilpotent {
            if let Some(eps) = lift.eps {
                if stratum.eps[nil_pos] != eps {
                    return false;
                }
            }
            nil_pos += 1;
        }
    }
    true
}

/// All positive strata compatible with some lift assignment of the
/// signature, at trivial determinant bundle.
pub fn strata_via_lifts(sig: &Signature) -> Result<Vec<SigmaFixedStratum>, HiggsError> {
    let n = sig.punctures();
    let lifts: Vec<[SlLift; 2]> = sig
        .boundary
        .iter()
        .map(class_lifts)
        .collect::<Result<_, _>>()?;
    let mut out = Vec::new();
    for mask in 0..(1u64 << n) {
        let chosen: Vec<&SlLift> = (0..n)
            .map(|i| &lifts[i][((mask >> i) & 1) as usize])
            .collect();
        let weights: Vec<Weight> = chosen.iter().map(|l| l.weight.clone()).collect();
        let residues: Vec<Residue> = chosen.iter().map(|l| l.residue.clone()).collect();
        let entries = match higgs::enumerate_strata(&weights, &residues, 0, sig.genus) {
            Ok(entries) => entries,
            // compatibility only depends on the signature, not the lift
            // choice; an incompatible signature has no strata at all
            Err(HiggsError::IncompatibleInput(_)) => continue,
            Err(e) => return Err(e),
        };
        for entry in entries {
            if let StratumEntry::Stratum(st) = entry {
                if lift_accepts(&chosen, &st) {
                    out.push(st);
                }
            }
        }
    }
    Ok(out)
}

/// Euler numbers of the lift-compatible strata, so each stratum
/// contributes e = 2d + 2||w_L||. Sorted ascending, deduplicated.
pub fn euler_values_via_strata(sig: &Signature) -> Result<Vec<Rat>, HiggsError> {
    let values: BTreeSet<Rat> = strata_via_lifts(sig)?
        .iter()
        .map(SigmaFixedStratum::e)
        .collect();
    Ok(values.into_iter().collect())
}

/// Both engines' Euler numbers for the signature, side by side.
#[derive(Debug, Clone, PartialEq)]
pub struct EulerCrossCheck {
    pub components: Vec<Rat>,
    pub strata: Vec<Rat>,
    pub agree: bool,
}

pub fn euler_cross_check(sig: &Signature) -> Result<EulerCrossCheck, BridgeError> {
    let components = components::euler_set(sig)?;
    let strata = euler_values_via_strata(sig)?;
    let agree = components == strata;
    Ok(EulerCrossCheck {
        components,
        strata,
        agree,
    })
}
