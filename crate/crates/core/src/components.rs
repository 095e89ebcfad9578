//! Connected components of relative representation spaces, over exact
//! rationals.
//!
//! A signature prescribes the genus and the conjugacy class of each
//! boundary monodromy. Admissible Euler numbers form a finite arithmetic
//! progression determined by the fractional rotation numbers, and each
//! admissible value labels one connected component, described here as an
//! affine bundle over a punctured symmetric product of the surface.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rat::{self, Rat};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ComponentError {
    #[error("invalid signature: {0}")]
    InvalidSignature(String),
    #[error("Euler number {0} is not admissible for this signature")]
    NotAdmissible(String),
    #[error("puncture {0} is not unipotent")]
    NotDegenerate(usize),
}

fn not_admissible(e: Rat) -> ComponentError {
    ComponentError::NotAdmissible(rat::format_rat(e))
}

/// Prescribed conjugacy class of a boundary monodromy, with exact data.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "WireClass", into = "WireClass")]
pub enum BoundaryClass {
    Identity,
    Elliptic { frac_rot: Rat },
    Hyperbolic,
    PositiveUnipotent,
    NegativeUnipotent,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct WireClass {
    #[serde(rename = "type")]
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    frac_rot: Option<rat::WireRat>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    sign: Option<String>,
}

impl TryFrom<WireClass> for BoundaryClass {
    type Error = String;
    fn try_from(w: WireClass) -> Result<Self, String> {
        match w.kind.as_str() {
            "identity" => Ok(BoundaryClass::Identity),
            "hyperbolic" => Ok(BoundaryClass::Hyperbolic),
            "elliptic" => {
                let r = w.frac_rot.ok_or("elliptic class requires frac_rot")?.0;
                if r <= Rat::from_integer(0) || r >= Rat::from_integer(1) {
                    return Err(format!(
                        "elliptic frac_rot must lie strictly between 0 and 1, got {}",
                        rat::format_rat(r)
                    ));
                }
                Ok(BoundaryClass::Elliptic { frac_rot: r })
            }
            "unipotent" => match w.sign.as_deref() {
                Some("+") => Ok(BoundaryClass::PositiveUnipotent),
                Some("-") => Ok(BoundaryClass::NegativeUnipotent),
                other => Err(format!(
                    "unipotent sign must be \"+\" or \"-\", got {other:?}"
                )),
            },
            other => Err(format!("unknown boundary class type {other:?}")),
        }
    }
}

impl From<BoundaryClass> for WireClass {
    fn from(b: BoundaryClass) -> WireClass {
        let (kind, frac_rot, sign) = match b {
            BoundaryClass::Identity => ("identity", None, None),
            BoundaryClass::Hyperbolic => ("hyperbolic", None, None),
            BoundaryClass::Elliptic { frac_rot } => {
                ("elliptic", Some(rat::WireRat(frac_rot)), None)
            }
            BoundaryClass::PositiveUnipotent => ("unipotent", None, Some("+".into())),
            BoundaryClass::NegativeUnipotent => ("unipotent", None, Some("-".into())),
        };
        WireClass {
            kind: kind.into(),
            frac_rot,
            sign,
        }
    }
}

impl BoundaryClass {
    /// Fractional rotation number of the class: nonzero only for elliptics.
    pub fn frac_rot(&self) -> Rat {
        match self {
            BoundaryClass::Elliptic { frac_rot } => *frac_rot,
            _ => Rat::from_integer(0),
        }
    }

    /// Real dimension of the conjugacy class inside PSL(2,R).
    pub fn class_dim(&self) -> i64 {
        match self {
            BoundaryClass::Identity => 0,
            _ => 2,
        }
    }

    pub fn is_unipotent(&self) -> bool {
        matches!(
            self,
            BoundaryClass::PositiveUnipotent | BoundaryClass::NegativeUnipotent
        )
    }
}

/// Genus plus the ordered list of boundary class prescriptions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signature {
    pub genus: u32,
    pub boundary: Vec<BoundaryClass>,
}

impl Signature {
    pub fn new(genus: u32, boundary: Vec<BoundaryClass>) -> Self {
        Signature { genus, boundary }
    }

    pub fn punctures(&self) -> usize {
        self.boundary.len()
    }

    /// Euler characteristic of the closed surface.
    pub fn chi_closed(&self) -> i64 {
        2 - 2 * self.genus as i64
    }

    /// Euler characteristic of the punctured surface.
    pub fn chi_punctured(&self) -> i64 {
        self.chi_closed() - self.punctures() as i64
    }

    /// Sum of the fractional rotation numbers of the elliptic punctures.
    pub fn frac_rot_norm(&self) -> Rat {
        self.boundary.iter().map(|b| b.frac_rot()).sum()
    }

    pub fn count_identity(&self) -> i64 {
        self.count(|b| matches!(b, BoundaryClass::Identity))
    }

    pub fn count_neg_unipotent(&self) -> i64 {
        self.count(|b| matches!(b, BoundaryClass::NegativeUnipotent))
    }

    pub fn count_pos_unipotent(&self) -> i64 {
        self.count(|b| matches!(b, BoundaryClass::PositiveUnipotent))
    }

    fn count(&self, pred: impl Fn(&BoundaryClass) -> bool) -> i64 {
        self.boundary.iter().filter(|b| pred(b)).count() as i64
    }
}

/// Topology of one connected component: an affine bundle over a symmetric
/// product of the surface with some punctures removed, minus some affine
/// subbundles.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComponentDescriptor {
    #[serde(with = "crate::rat::serde_rat")]
    pub euler: Rat,
    /// Degree of the symmetric product before removing marked punctures.
    pub m: i64,
    /// Degree after accounting for the punctures pinned by identity and
    /// negative-unipotent prescriptions.
    pub base_sym_degree: i64,
    /// Punctures removed from the surface underlying the symmetric product.
    pub base_removed: Vec<usize>,
    pub bundle_rank: i64,
    /// Number of codimension-1 affine subbundles removed from the total
    /// space (one per negative-unipotent puncture, open variant only).
    pub removed_subbundles: i64,
    pub smooth: bool,
    pub closure_variant: bool,
}

/// Admissible Euler numbers of the signature, ascending.
///
/// e is admissible when `e + ||{r}|| + s_0 + s_-` is an integer in
/// `(0, -chi]` of the punctured surface; the associated symmetric-product
/// degree is then automatically large enough to carry the base.
pub fn euler_set(sig: &Signature) -> Result<Vec<Rat>, ComponentError> {
    if sig.boundary.is_empty() {
        return Err(ComponentError::InvalidSignature(
            "at least one puncture is required".into(),
        ));
    }
    if sig.chi_punctured() >= 0 {
        return Err(ComponentError::InvalidSignature(format!(
            "punctured Euler characteristic {} is not negative",
            sig.chi_punctured()
        )));
    }
    let f =
        sig.frac_rot_norm() + Rat::from_integer(sig.count_identity() + sig.count_neg_unipotent());
    let top = -sig.chi_punctured();
    let mut out = Vec::new();
    for k in (rat::floor(f) + 1)..=top {
        out.push(Rat::from_integer(k) - f);
    }
    Ok(out)
}

/// Descriptor of the component of the given admissible Euler number, for
/// the open component or its closure.
pub fn describe_component(
    sig: &Signature,
    euler: Rat,
    closure: bool,
) -> Result<ComponentDescriptor, ComponentError> {
    if !euler_set(sig)?.contains(&euler) {
        return Err(not_admissible(euler));
    }
    let s0 = sig.count_identity();
    let sm = sig.count_neg_unipotent();
    let m_rat = Rat::from_integer(-sig.chi_punctured()) - euler - sig.frac_rot_norm();
    let m = rat::to_integer(m_rat).expect("admissible Euler number forces integral m");
    let base_sym_degree = m - s0 - sm;
    let bundle_rank = -3 * sig.chi_closed() / 2 + sig.punctures() as i64 - m + sm;
    let base_removed: Vec<usize> = sig
        .boundary
        .iter()
        .enumerate()
        .filter(|(_, b)| {
            matches!(b, BoundaryClass::Hyperbolic)
                || (!closure && matches!(b, BoundaryClass::PositiveUnipotent))
        })
        .map(|(i, _)| i)
        .collect();
    let has_unipotent = sig.boundary.iter().any(|b| b.is_unipotent());
    let desc = ComponentDescriptor {
        euler,
        m,
        base_sym_degree,
        base_removed,
        bundle_rank,
        removed_subbundles: if closure { 0 } else { sm },
        smooth: !closure || !has_unipotent,
        closure_variant: closure,
    };
    debug_assert_eq!(
        2 * (desc.bundle_rank + desc.base_sym_degree),
        rep_dimension(
            sig.genus,
            sig.punctures(),
            3,
            &sig.boundary
                .iter()
                .map(|b| b.class_dim())
                .collect::<Vec<_>>(),
        )
        .expect("signature already validated")
    );
    Ok(desc)
}

/// How the component with puncture `i` degenerated to the identity sits
/// inside the closure of the component of `sig` at the same Euler number.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InclusionRecord {
    /// "preimage" of a shifted symmetric product (positive unipotent) or a
    /// codimension-1 affine "subbundle" (negative unipotent).
    pub kind: &'static str,
    pub base_shift: i64,
}

/// The caller asserts that `_euler` labels a component whose closure is
/// meant; only the unipotent tag decides the shape of the inclusion.
pub fn degenerate_inclusion(
    sig: &Signature,
    i: usize,
    _euler: Rat,
) -> Result<InclusionRecord, ComponentError> {
    let spec = sig.boundary.get(i).ok_or_else(|| {
        ComponentError::InvalidSignature(format!("puncture index {i} out of range"))
    })?;
    let (kind, base_shift) = match spec {
        BoundaryClass::PositiveUnipotent => ("preimage", -1),
        BoundaryClass::NegativeUnipotent => ("subbundle", 0),
        _ => return Err(ComponentError::NotDegenerate(i)),
    };
    Ok(InclusionRecord { kind, base_shift })
}

/// Component descriptor for a closed surface of genus at least 2 with
/// integer Euler number in `(0, 2g-2]`.
pub fn closed_component(genus: u32, euler: i64) -> Result<ComponentDescriptor, ComponentError> {
    if genus < 2 {
        return Err(ComponentError::InvalidSignature(
            "closed surfaces need genus at least 2".into(),
        ));
    }
    let top = 2 * genus as i64 - 2;
    if euler <= 0 || euler > top {
        return Err(not_admissible(Rat::from_integer(euler)));
    }
    let m = top - euler;
    Ok(ComponentDescriptor {
        euler: Rat::from_integer(euler),
        m,
        base_sym_degree: m,
        base_removed: vec![],
        bundle_rank: 3 * (genus as i64 - 1) - m,
        removed_subbundles: 0,
        smooth: true,
        closure_variant: false,
    })
}

/// Dimension of the representation variety before the conjugation quotient:
/// the closed-surface term plus the dimensions of the prescribed classes.
pub fn rep_dimension(
    genus: u32,
    n: usize,
    dim_g: i64,
    class_dims: &[i64],
) -> Result<i64, ComponentError> {
    if class_dims.len() != n {
        return Err(ComponentError::InvalidSignature(
            "class_dims length must equal the number of punctures".into(),
        ));
    }
    if 2 - 2 * (genus as i64) - n as i64 >= 0 {
        return Err(ComponentError::InvalidSignature(
            "punctured Euler characteristic must be negative".into(),
        ));
    }
    let chi_closed = 2 - 2 * genus as i64;
    Ok(-chi_closed * dim_g + class_dims.iter().sum::<i64>())
}

/// The signature of the inverse classes: elliptic angles reflect and
/// unipotent signs swap. Its admissible Euler numbers are the negatives of
/// the admissible negative Euler numbers of the original signature.
pub fn dualize(sig: &Signature) -> Signature {
    let boundary = sig
        .boundary
        .iter()
        .map(|b| match b {
            BoundaryClass::Elliptic { frac_rot } => BoundaryClass::Elliptic {
                frac_rot: Rat::from_integer(1) - frac_rot,
            },
            BoundaryClass::PositiveUnipotent => BoundaryClass::NegativeUnipotent,
            BoundaryClass::NegativeUnipotent => BoundaryClass::PositiveUnipotent,
            other => other.clone(),
        })
        .collect();
    Signature {
        genus: sig.genus,
        boundary,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    fn ell(num: i64, den: i64) -> BoundaryClass {
        BoundaryClass::Elliptic {
            frac_rot: rat(num, den),
        }
    }

    fn sig(genus: u32, boundary: Vec<BoundaryClass>) -> Signature {
        Signature::new(genus, boundary)
    }

    #[test]
    fn euler_set_examples() {
        let pants = sig(0, vec![BoundaryClass::Hyperbolic; 3]);
        assert_eq!(euler_set(&pants).unwrap(), vec![rat(1, 1)]);

        let quarter = sig(0, vec![ell(1, 4); 4]);
        assert_eq!(euler_set(&quarter).unwrap(), vec![rat(1, 1)]);

        let half = sig(0, vec![ell(1, 2); 4]);
        assert_eq!(euler_set(&half).unwrap(), vec![]);

        let torus = sig(1, vec![ell(1, 3)]);
        assert_eq!(euler_set(&torus).unwrap(), vec![rat(2, 3)]);
    }

    #[test]
    fn euler_set_rejects_non_hyperbolic_signatures() {
        let flat = sig(0, vec![BoundaryClass::Hyperbolic; 2]);
        assert!(matches!(
            euler_set(&flat),
            Err(ComponentError::InvalidSignature(_))
        ));
        let closed = sig(2, vec![]);
        assert!(matches!(
            euler_set(&closed),
            Err(ComponentError::InvalidSignature(_))
        ));
    }

    #[test]
    fn euler_set_entries_are_positive_and_congruent() {
        let menu = [
            BoundaryClass::Identity,
            BoundaryClass::Hyperbolic,
            BoundaryClass::PositiveUnipotent,
            BoundaryClass::NegativeUnipotent,
            ell(1, 4),
            ell(1, 3),
        ];
        for g in 0..=2u32 {
            for n in 1..=4usize {
                if 2 - 2 * (g as i64) - (n as i64) >= 0 {
                    continue;
                }
                for pick in 0..menu.len().pow(n as u32) {
                    let mut idx = pick;
                    let boundary: Vec<_> = (0..n)
                        .map(|_| {
                            let b = menu[idx % menu.len()].clone();
                            idx /= menu.len();
                            b
                        })
                        .collect();
                    let s = sig(g, boundary);
                    let f = s.frac_rot_norm()
                        + Rat::from_integer(s.count_identity() + s.count_neg_unipotent());
                    for e in euler_set(&s).unwrap() {
                        assert!(e > rat(0, 1));
                        assert!(crate::rat::is_integer(e + f));
                        assert!(e + f <= Rat::from_integer(-s.chi_punctured()));
                    }
                }
            }
        }
    }

    #[test]
    fn describe_component_examples() {
        let torus = sig(1, vec![BoundaryClass::Hyperbolic]);
        let d = describe_component(&torus, rat(1, 1), false).unwrap();
        assert_eq!((d.m, d.bundle_rank, d.base_sym_degree), (0, 1, 0));
        assert_eq!(d.base_removed, vec![0]);
        assert!(d.smooth);

        let quarter = sig(0, vec![ell(1, 4); 4]);
        let d = describe_component(&quarter, rat(1, 1), false).unwrap();
        assert_eq!((d.m, d.bundle_rank, d.base_sym_degree), (0, 1, 0));
        assert!(d.base_removed.is_empty());

        let unip = sig(2, vec![BoundaryClass::PositiveUnipotent]);
        let d = describe_component(&unip, rat(3, 1), false).unwrap();
        assert_eq!((d.m, d.bundle_rank), (0, 4));
        assert_eq!(d.base_removed, vec![0]);
    }

    #[test]
    fn closure_variant_keeps_subbundles_and_positive_unipotent_points() {
        let s = sig(
            1,
            vec![
                BoundaryClass::PositiveUnipotent,
                BoundaryClass::NegativeUnipotent,
                BoundaryClass::Hyperbolic,
            ],
        );
        let e = *euler_set(&s).unwrap().last().unwrap();
        let open = describe_component(&s, e, false).unwrap();
        assert_eq!(open.base_removed, vec![0, 2]);
        assert_eq!(open.removed_subbundles, 1);
        assert!(open.smooth);
        let closure = describe_component(&s, e, true).unwrap();
        assert_eq!(closure.base_removed, vec![2]);
        assert_eq!(closure.removed_subbundles, 0);
        assert!(!closure.smooth);
    }

    #[test]
    fn describe_component_rejects_inadmissible_euler() {
        let torus = sig(1, vec![BoundaryClass::Hyperbolic]);
        assert!(matches!(
            describe_component(&torus, rat(2, 1), false),
            Err(ComponentError::NotAdmissible(_))
        ));
        assert!(matches!(
            describe_component(&torus, rat(1, 2), false),
            Err(ComponentError::NotAdmissible(_))
        ));
    }

    #[test]
    fn degenerate_inclusion_records() {
        let plus = sig(1, vec![BoundaryClass::PositiveUnipotent]);
        let rec = degenerate_inclusion(&plus, 0, rat(1, 1)).unwrap();
        assert_eq!((rec.kind, rec.base_shift), ("preimage", -1));

        let minus = sig(1, vec![BoundaryClass::NegativeUnipotent]);
        let rec = degenerate_inclusion(&minus, 0, rat(1, 1)).unwrap();
        assert_eq!((rec.kind, rec.base_shift), ("subbundle", 0));

        let hyp = sig(1, vec![BoundaryClass::Hyperbolic]);
        assert_eq!(
            degenerate_inclusion(&hyp, 0, rat(1, 1)),
            Err(ComponentError::NotDegenerate(0))
        );
        assert!(matches!(
            degenerate_inclusion(&plus, 3, rat(1, 1)),
            Err(ComponentError::InvalidSignature(_))
        ));
    }

    #[test]
    fn closed_component_examples() {
        let d = closed_component(2, 2).unwrap();
        assert_eq!((d.m, d.bundle_rank, d.base_sym_degree), (0, 3, 0));
        let d = closed_component(2, 1).unwrap();
        assert_eq!((d.m, d.bundle_rank, d.base_sym_degree), (1, 2, 1));
        assert!(matches!(
            closed_component(2, 3),
            Err(ComponentError::NotAdmissible(_))
        ));
        assert!(matches!(
            closed_component(2, 0),
            Err(ComponentError::NotAdmissible(_))
        ));
        assert!(matches!(
            closed_component(1, 1),
            Err(ComponentError::InvalidSignature(_))
        ));
    }

    #[test]
    fn rep_dimension_examples() {
        assert_eq!(rep_dimension(2, 0, 3, &[]).unwrap(), 6);
        assert_eq!(rep_dimension(0, 3, 3, &[2, 2, 2]).unwrap(), 0);
        assert_eq!(rep_dimension(1, 1, 3, &[2]).unwrap(), 2);
        assert!(rep_dimension(1, 1, 3, &[2, 2]).is_err());
        assert!(rep_dimension(0, 2, 3, &[2, 2]).is_err());
    }

    #[test]
    fn dualize_reflects_angles_and_swaps_signs() {
        let s = sig(
            1,
            vec![
                ell(1, 4),
                BoundaryClass::PositiveUnipotent,
                BoundaryClass::Hyperbolic,
                BoundaryClass::Identity,
            ],
        );
        let d = dualize(&s);
        assert_eq!(
            d.boundary,
            vec![
                ell(3, 4),
                BoundaryClass::NegativeUnipotent,
                BoundaryClass::Hyperbolic,
                BoundaryClass::Identity,
            ]
        );
        assert_eq!(dualize(&d), s);
    }

    #[test]
    fn self_dual_signatures_have_symmetric_euler_sets() {
        let s = sig(
            0,
            vec![ell(1, 2), ell(1, 4), ell(3, 4), BoundaryClass::Hyperbolic],
        );
        assert_eq!(euler_set(&s).unwrap(), euler_set(&dualize(&s)).unwrap());
    }

    #[test]
    fn signature_json_round_trip() {
        let js = r#"{"genus":1,"boundary":[
            {"type":"elliptic","frac_rot":"1/3"},
            {"type":"unipotent","sign":"+"},
            {"type":"unipotent","sign":"-"},
            {"type":"hyperbolic"},
            {"type":"identity"}]}"#;
        let s: Signature = serde_json::from_str(js).unwrap();
        assert_eq!(s.genus, 1);
        assert_eq!(s.boundary[0], ell(1, 3));
        assert_eq!(s.boundary[1], BoundaryClass::PositiveUnipotent);
        let back = serde_json::to_string(&s).unwrap();
        let again: Signature = serde_json::from_str(&back).unwrap();
        assert_eq!(again, s);
        assert!(back.contains(r#""frac_rot":"1/3""#));

        for bad in [
            r#"{"genus":0,"boundary":[{"type":"elliptic","frac_rot":"5/4"}]}"#,
            r#"{"genus":0,"boundary":[{"type":"elliptic","frac_rot":"1/0"}]}"#,
            r#"{"genus":0,"boundary":[{"type":"unipotent","sign":"x"}]}"#,
            r#"{"genus":0,"boundary":[{"type":"loxodromic"}]}"#,
        ] {
            assert!(serde_json::from_str::<Signature>(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn dimension_identity_holds_across_small_signatures() {
        let menu = [
            BoundaryClass::Identity,
            BoundaryClass::Hyperbolic,
            BoundaryClass::PositiveUnipotent,
            BoundaryClass::NegativeUnipotent,
            ell(1, 4),
        ];
        for g in 0..=2u32 {
            for n in 1..=3usize {
                if 2 - 2 * (g as i64) - (n as i64) >= 0 {
                    continue;
                }
                for pick in 0..menu.len().pow(n as u32) {
                    let mut idx = pick;
                    let boundary: Vec<_> = (0..n)
                        .map(|_| {
                            let b = menu[idx % menu.len()].clone();
                            idx /= menu.len();
                            b
                        })
                        .collect();
                    let s = sig(g, boundary);
                    let dims: Vec<i64> = s.boundary.iter().map(|b| b.class_dim()).collect();
                    let want = rep_dimension(g, n, 3, &dims).unwrap();
                    for e in euler_set(&s).unwrap() {
                        for closure in [false, true] {
                            let d = describe_component(&s, e, closure).unwrap();
                            assert_eq!(2 * (d.bundle_rank + d.base_sym_degree), want);
                        }
                    }
                }
            }
        }
    }
}
