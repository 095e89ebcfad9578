//! Gauss-Bonnet arithmetic for hyperbolic surfaces with cone points,
//! cusps, and geodesic boundaries, and the map from geometric boundary
//! data to monodromy conjugacy classes.
//!
//! Cone angles are rational multiples of pi, so areas and Euler numbers
//! stay exact.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::components::{self, BoundaryClass, ComponentError, Signature};
use crate::rat::{self, Rat};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum UniformError {
    #[error("no hyperbolic metric exists: {0}")]
    NotHyperbolizable(String),
    #[error("g=0 with n = 3 + s_0 is excluded from the compactness criterion")]
    ExcludedCase,
    #[error(transparent)]
    Component(#[from] ComponentError),
}

/// Geometric datum at one end of the surface: a cone point of angle
/// theta = pi * theta_over_pi, a geodesic boundary of given length, or a
/// cusp.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "WireGeometry", into = "WireGeometry")]
pub enum BoundaryGeometry {
    Cone { theta_over_pi: Rat },
    Boundary { length: Rat },
    Cusp,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct WireGeometry {
    #[serde(rename = "type")]
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    theta_over_pi: Option<rat::WireRat>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    length: Option<rat::WireRat>,
}

impl TryFrom<WireGeometry> for BoundaryGeometry {
    type Error = String;
    fn try_from(w: WireGeometry) -> Result<Self, String> {
        match w.kind.as_str() {
            "cusp" => Ok(BoundaryGeometry::Cusp),
            "cone" => {
                let t = w.theta_over_pi.ok_or("cone requires theta_over_pi")?.0;
                if t <= rat::rat(0, 1) {
                    return Err(format!(
                        "cone angle must be positive, got {}*pi",
                        rat::format_rat(t)
                    ));
                }
                Ok(BoundaryGeometry::Cone { theta_over_pi: t })
            }
            "boundary" => {
                let l = w.length.ok_or("boundary requires length")?.0;
                if l <= rat::rat(0, 1) {
                    return Err(format!(
                        "boundary length must be positive, got {}",
                        rat::format_rat(l)
                    ));
                }
                Ok(BoundaryGeometry::Boundary { length: l })
            }
            other => Err(format!("unknown boundary geometry type {other:?}")),
        }
    }
}

impl From<BoundaryGeometry> for WireGeometry {
    fn from(b: BoundaryGeometry) -> WireGeometry {
        let (kind, theta, length) = match b {
            BoundaryGeometry::Cusp => ("cusp", None, None),
            BoundaryGeometry::Cone { theta_over_pi } => {
                ("cone", Some(rat::WireRat(theta_over_pi)), None)
            }
            BoundaryGeometry::Boundary { length } => ("boundary", None, Some(rat::WireRat(length))),
        };
        WireGeometry {
            kind: kind.into(),
            theta_over_pi: theta,
            length,
        }
    }
}

impl BoundaryGeometry {
    /// Cone angle divided by 2 pi; zero for cusps and boundaries.
    fn turns(&self) -> Rat {
        match self {
            BoundaryGeometry::Cone { theta_over_pi } => *theta_over_pi / Rat::from_integer(2),
            _ => rat::rat(0, 1),
        }
    }
}

/// Area over 2 pi of a hyperbolic metric with the prescribed geometry:
/// -chi of the punctured surface minus the cone angles over 2 pi. The
/// metric exists precisely when this is positive.
pub fn gauss_bonnet_e(genus: u32, specs: &[BoundaryGeometry]) -> Rat {
    let chi = 2 - 2 * genus as i64 - specs.len() as i64;
    Rat::from_integer(-chi) - specs.iter().map(|s| s.turns()).sum::<Rat>()
}

/// Conjugacy class of the monodromy around one end: full-turn cones are
/// trivial, other cones rotate by the fractional part of the turn count,
/// cusps are positively unipotent, geodesic boundaries hyperbolic.
pub fn length_to_class(spec: &BoundaryGeometry) -> BoundaryClass {
    match spec {
        BoundaryGeometry::Cusp => BoundaryClass::PositiveUnipotent,
        BoundaryGeometry::Boundary { .. } => BoundaryClass::Hyperbolic,
        BoundaryGeometry::Cone { .. } => {
            let frac = rat::fract(spec.turns());
            if frac == rat::rat(0, 1) {
                BoundaryClass::Identity
            } else {
                BoundaryClass::Elliptic { frac_rot: frac }
            }
        }
    }
}

/// Signature of the monodromy classes of the prescribed geometry.
pub fn geometry_signature(genus: u32, specs: &[BoundaryGeometry]) -> Signature {
    Signature::new(genus, specs.iter().map(length_to_class).collect())
}

/// Shape of the component containing the uniformizing holonomies:
/// a rank-(3g-3+n-m) bundle over the degree-(m-s0) symmetric product of
/// the surface with cusps and boundary ends removed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UniformizationComponent {
    #[serde(with = "crate::rat::serde_rat")]
    pub e: Rat,
    pub m: i64,
    pub s0: i64,
    pub rank: i64,
    pub base_degree: i64,
    pub removed_open: Vec<usize>,
    pub removed_closure: Vec<usize>,
}

pub fn uniformization_component(
    genus: u32,
    specs: &[BoundaryGeometry],
) -> Result<UniformizationComponent, UniformError> {
    let e = gauss_bonnet_e(genus, specs);
    if e <= rat::rat(0, 1) {
        return Err(UniformError::NotHyperbolizable(format!(
            "Gauss-Bonnet area 2*pi*({}) is not positive",
            rat::format_rat(e)
        )));
    }
    let n = specs.len() as i64;
    let m: i64 = specs.iter().map(|s| rat::floor(s.turns())).sum();
    let s0 = specs
        .iter()
        .filter(|s| matches!(s, BoundaryGeometry::Cone { .. }) && rat::is_integer(s.turns()))
        .count() as i64;
    let removed_open: Vec<usize> = specs
        .iter()
        .enumerate()
        .filter(|(_, s)| !matches!(s, BoundaryGeometry::Cone { .. }))
        .map(|(i, _)| i)
        .collect();
    let removed_closure: Vec<usize> = specs
        .iter()
        .enumerate()
        .filter(|(_, s)| matches!(s, BoundaryGeometry::Boundary { .. }))
        .map(|(i, _)| i)
        .collect();
    Ok(UniformizationComponent {
        e,
        m,
        s0,
        rank: 3 * (genus as i64) - 3 + n - m,
        base_degree: m - s0,
        removed_open,
        removed_closure,
    })
}

/// Verdict of the geometric compactness criterion for a component of the
/// given signature and Euler number.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeometricCompactness {
    pub compact: bool,
    pub all_monodromies_geometric: bool,
}

/// A component is compact exactly on spheres whose ends are all cone-type
/// (no hyperbolic or negative-unipotent classes) at the top Euler number
/// 1 - ||{r}||; every representation in it then uniformizes.
pub fn compact_geometric(sig: &Signature, e: Rat) -> Result<GeometricCompactness, UniformError> {
    let s0 = sig.count_identity();
    if (sig.punctures() as i64) <= 3 + s0 {
        return Err(UniformError::ExcludedCase);
    }
    if e <= rat::rat(0, 1) {
        return Err(UniformError::NotHyperbolizable(
            "compactness criterion requires e > 0".into(),
        ));
    }
    let excluded = sig.boundary.iter().any(|b| {
        matches!(
            b,
            BoundaryClass::Hyperbolic | BoundaryClass::NegativeUnipotent
        )
    });
    let compact = sig.genus == 0 && !excluded && e == Rat::from_integer(1) - sig.frac_rot_norm();
    Ok(GeometricCompactness {
        compact,
        all_monodromies_geometric: compact,
    })
}

/// Component descriptor of the mapped signature at the Gauss-Bonnet Euler
/// number, for cross-checking against the geometric record.
pub fn mapped_component(
    genus: u32,
    specs: &[BoundaryGeometry],
    closure: bool,
) -> Result<components::ComponentDescriptor, UniformError> {
    let e = gauss_bonnet_e(genus, specs);
    if e <= rat::rat(0, 1) {
        return Err(UniformError::NotHyperbolizable(
            "mapped component needs positive Gauss-Bonnet area".into(),
        ));
    }
    Ok(components::describe_component(
        &geometry_signature(genus, specs),
        e,
        closure,
    )?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    fn cone(num: i64, den: i64) -> BoundaryGeometry {
        BoundaryGeometry::Cone {
            theta_over_pi: rat(num, den),
        }
    }

    fn boundary(num: i64, den: i64) -> BoundaryGeometry {
        BoundaryGeometry::Boundary {
            length: rat(num, den),
        }
    }

    #[test]
    fn gauss_bonnet_examples() {
        assert_eq!(
            gauss_bonnet_e(0, &[cone(1, 2), cone(1, 2), cone(1, 2)]),
            rat(1, 4)
        );
        assert_eq!(gauss_bonnet_e(2, &[cone(5, 1)]), rat(1, 2));
        assert_eq!(gauss_bonnet_e(1, &[BoundaryGeometry::Cusp]), rat(1, 1));
    }

    #[test]
    fn length_to_class_examples() {
        assert_eq!(length_to_class(&cone(4, 1)), BoundaryClass::Identity);
        assert_eq!(
            length_to_class(&BoundaryGeometry::Cusp),
            BoundaryClass::PositiveUnipotent
        );
        assert_eq!(
            length_to_class(&cone(1, 1)),
            BoundaryClass::Elliptic {
                frac_rot: rat(1, 2)
            }
        );
        assert_eq!(length_to_class(&boundary(3, 2)), BoundaryClass::Hyperbolic);
        assert_eq!(
            length_to_class(&cone(9, 2)),
            BoundaryClass::Elliptic {
                frac_rot: rat(1, 4)
            }
        );
    }

    #[test]
    fn uniformization_examples() {
        let c = uniformization_component(2, &[cone(5, 1)]).unwrap();
        assert_eq!(
            (c.e, c.m, c.s0, c.rank, c.base_degree),
            (rat(1, 2), 2, 0, 2, 2)
        );
        assert!(c.removed_open.is_empty());

        let pants = uniformization_component(0, &[cone(1, 2), cone(1, 2), cone(1, 2)]).unwrap();
        assert_eq!(
            (pants.e, pants.m, pants.rank, pants.base_degree),
            (rat(1, 4), 0, 0, 0)
        );

        assert!(matches!(
            uniformization_component(0, &[cone(3, 2), cone(3, 2), cone(3, 2)]),
            Err(UniformError::NotHyperbolizable(_))
        ));
    }

    #[test]
    fn descriptor_agrees_with_component_classifier() {
        let cases: Vec<(u32, Vec<BoundaryGeometry>)> = vec![
            (2, vec![cone(5, 1)]),
            (0, vec![cone(1, 2), cone(1, 2), cone(1, 2)]),
            (1, vec![BoundaryGeometry::Cusp, boundary(2, 1)]),
            (
                0,
                vec![
                    cone(2, 1),
                    cone(1, 3),
                    BoundaryGeometry::Cusp,
                    boundary(1, 2),
                ],
            ),
            (1, vec![cone(5, 3)]),
        ];
        for (g, specs) in cases {
            let u = uniformization_component(g, &specs).unwrap();
            let d = mapped_component(g, &specs, false).unwrap();
            assert_eq!(u.e, d.euler);
            assert_eq!(u.m, d.m);
            assert_eq!(u.base_degree, d.base_sym_degree);
            assert_eq!(u.rank, d.bundle_rank);
            assert_eq!(u.removed_open, d.base_removed);
            let dc = mapped_component(g, &specs, true).unwrap();
            assert_eq!(u.removed_closure, dc.base_removed);
        }
    }

    #[test]
    fn compact_geometric_examples() {
        let sig = Signature::new(
            0,
            vec![
                BoundaryClass::Elliptic {
                    frac_rot: rat(1, 4),
                },
                BoundaryClass::Elliptic {
                    frac_rot: rat(1, 4),
                },
                BoundaryClass::Elliptic {
                    frac_rot: rat(1, 8),
                },
                BoundaryClass::Elliptic {
                    frac_rot: rat(1, 8),
                },
            ],
        );
        let v = compact_geometric(&sig, rat(1, 4)).unwrap();
        assert!(v.compact && v.all_monodromies_geometric);

        let torus = Signature::new(
            1,
            vec![
                BoundaryClass::Elliptic {
                    frac_rot: rat(1, 4)
                };
                4
            ],
        );
        assert!(!compact_geometric(&torus, rat(1, 4)).unwrap().compact);

        let mut with_hyp = sig.clone();
        with_hyp.boundary[3] = BoundaryClass::Hyperbolic;
        assert!(!compact_geometric(&with_hyp, rat(1, 2)).unwrap().compact);

        let rigid = Signature::new(0, vec![BoundaryClass::Hyperbolic; 3]);
        assert!(matches!(
            compact_geometric(&rigid, rat(1, 1)),
            Err(UniformError::ExcludedCase)
        ));
    }

    #[test]
    fn geometry_json_round_trip() {
        let js = r#"[{"type":"cone","theta_over_pi":"5/1"},{"type":"boundary","length":"3/2"},{"type":"cusp"}]"#;
        let specs: Vec<BoundaryGeometry> = serde_json::from_str(js).unwrap();
        assert_eq!(specs[0], cone(5, 1));
        assert_eq!(specs[1], boundary(3, 2));
        assert_eq!(specs[2], BoundaryGeometry::Cusp);
        let back = serde_json::to_string(&specs).unwrap();
        assert_eq!(
            serde_json::from_str::<Vec<BoundaryGeometry>>(&back).unwrap(),
            specs
        );
        assert!(serde_json::from_str::<BoundaryGeometry>(
            r#"{"type":"cone","theta_over_pi":"-1/2"}"#
        )
        .is_err());
    }
}
