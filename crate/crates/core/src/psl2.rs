//! Numeric engine for PSL(2,R) acting on the circle.
//!
//! A matrix acts on directions in the plane; the boundary circle RP^1 is
//! parametrized by `v(t) = (cos pi t, sin pi t)` with `t` taken mod 1, so
//! the deck transformation of the universal cover is translation by 1 and
//! the rotation matrix through angle `theta/2` displaces `t` by
//! `theta/(2 pi)`. A lifted isometry is a matrix together with the value of
//! its monotone lift at 0; rotation numbers, Euler numbers of surface-group
//! representations and Milnor-Wood slack are all computed from that data.
//!
//! Branch bookkeeping is exact (integers enter only through `floor`/`ceil`),
//! so the only numerical noise comes from matrix products and `atan2`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Determinants this far from 1 after normalization indicate bad input.
pub const DET_TOL: f64 = 1e-9;
/// Half-width of the trace band around |tr| = 2 used by [`classify`].
pub const CLASS_TOL: f64 = 1e-9;
/// Tolerance for the surface-group relation (product of generators vs id).
pub const RELATION_TOL: f64 = 1e-6;
/// Branch displacements must be integers within this tolerance.
pub const INT_TOL: f64 = 1e-6;

/// Branch windows `[u, u+1)` are half-open; a value this close below the
/// open edge is snapped onto the closed edge of the next window. Exact
/// configurations (fixed directions of diagonal matrices, half-turns) land
/// on window edges up to rounding, and without the snap an error of one ulp
/// would flip a whole deck translation.
const BRANCH_SNAP: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Psl2Error {
    #[error("matrix determinant must be positive, got {0}")]
    NonPositiveDet(f64),
    #[error("matrix entries must be finite")]
    NonFiniteEntry,
    #[error("conjugacy class is numerically ambiguous: {0}")]
    AmbiguousClass(String),
    #[error("surface-group relation violated: defect {0:.3e}")]
    RelationViolation(f64),
    #[error("invalid surface data: {0}")]
    InvalidSurface(String),
}

/// An element of PSL(2,R): determinant normalized to 1, overall sign fixed
/// by making the first nonzero entry (scanning a, b, c, d) positive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[[f64; 2]; 2]", into = "[[f64; 2]; 2]")]
pub struct Mat2 {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
}

impl TryFrom<[[f64; 2]; 2]> for Mat2 {
    type Error = Psl2Error;
    fn try_from(m: [[f64; 2]; 2]) -> Result<Self, Psl2Error> {
        Mat2::new(m[0][0], m[0][1], m[1][0], m[1][1])
    }
}

impl From<Mat2> for [[f64; 2]; 2] {
    fn from(m: Mat2) -> Self {
        [[m.a, m.b], [m.c, m.d]]
    }
}

impl Mat2 {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self, Psl2Error> {
        if !(a.is_finite() && b.is_finite() && c.is_finite() && d.is_finite()) {
            return Err(Psl2Error::NonFiniteEntry);
        }
        let det = a * d - b * c;
        if det <= 0.0 {
            return Err(Psl2Error::NonPositiveDet(det));
        }
        let s = det.sqrt();
        Ok(Self::sign_normalized(a / s, b / s, c / s, d / s))
    }

    fn sign_normalized(a: f64, b: f64, c: f64, d: f64) -> Self {
        let lead = [a, b, c, d].into_iter().find(|e| *e != 0.0).unwrap_or(1.0);
        if lead < 0.0 {
            Mat2 {
                a: -a,
                b: -b,
                c: -c,
                d: -d,
            }
        } else {
            Mat2 { a, b, c, d }
        }
    }

    pub fn identity() -> Self {
        Mat2 {
            a: 1.0,
            b: 0.0,
            c: 0.0,
            d: 1.0,
        }
    }

    /// The elliptic element `R_theta`, acting on direction vectors as the
    /// plane rotation through `theta/2`.
    pub fn rotation(theta: f64) -> Self {
        let (s, c) = (theta / 2.0).sin_cos();
        Self::sign_normalized(c, -s, s, c)
    }

    /// `diag(lambda, 1/lambda)`; hyperbolic of length `2 ln lambda` when
    /// `lambda > 1`.
    pub fn diagonal(lambda: f64) -> Result<Self, Psl2Error> {
        Self::new(lambda, 0.0, 0.0, 1.0 / lambda)
    }

    /// The positive unipotent `[[1,0],[1,1]]`.
    pub fn unipotent_pos() -> Self {
        Mat2 {
            a: 1.0,
            b: 0.0,
            c: 1.0,
            d: 1.0,
        }
    }

    /// The negative unipotent `[[1,0],[-1,1]]`.
    pub fn unipotent_neg() -> Self {
        Mat2 {
            a: 1.0,
            b: 0.0,
            c: -1.0,
            d: 1.0,
        }
    }

    pub fn entries(&self) -> [[f64; 2]; 2] {
        [[self.a, self.b], [self.c, self.d]]
    }

    pub fn trace_abs(&self) -> f64 {
        (self.a + self.d).abs()
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        let (a, b) = (self.a * o.a + self.b * o.c, self.a * o.b + self.b * o.d);
        let (c, d) = (self.c * o.a + self.d * o.c, self.c * o.b + self.d * o.d);
        // products of unit-determinant matrices drift; renormalize
        let s = (a * d - b * c).sqrt();
        Self::sign_normalized(a / s, b / s, c / s, d / s)
    }

    pub fn inverse(&self) -> Mat2 {
        Self::sign_normalized(self.d, -self.b, -self.c, self.a)
    }

    /// Conjugation by `diag(1, -1)`, the orientation-reversing involution.
    /// Preserves traces and conjugacy type but negates rotation direction.
    pub fn reflected(&self) -> Mat2 {
        Self::sign_normalized(self.a, -self.b, -self.c, self.d)
    }

    /// Distance in PSL(2,R): entrywise max deviation minimized over the
    /// common sign.
    pub fn dist(&self, o: &Mat2) -> f64 {
        let direct = (self.a - o.a)
            .abs()
            .max((self.b - o.b).abs())
            .max((self.c - o.c).abs())
            .max((self.d - o.d).abs());
        let flipped = (self.a + o.a)
            .abs()
            .max((self.b + o.b).abs())
            .max((self.c + o.c).abs())
            .max((self.d + o.d).abs());
        direct.min(flipped)
    }

    pub fn approx_eq(&self, o: &Mat2, tol: f64) -> bool {
        self.dist(o) <= tol
    }

    /// The induced circle map: `t` is the direction angle divided by pi,
    /// taken mod 1. Values lie in `[0, 1)`.
    pub fn circle_map(&self, t: f64) -> f64 {
        let (sy, cy) = (std::f64::consts::PI * t).sin_cos();
        let wx = self.a * cy + self.b * sy;
        let wy = self.c * cy + self.d * sy;
        (wy.atan2(wx) / std::f64::consts::PI).rem_euclid(1.0)
    }
}

impl std::ops::Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: Mat2) -> Mat2 {
        Mat2::mul(&self, &rhs)
    }
}

/// Conjugacy class of an element of PSL(2,R).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IsometryClass {
    Identity,
    Elliptic { frac_rot: f64 },
    PositiveUnipotent,
    NegativeUnipotent,
    Hyperbolic { length: f64 },
}

impl IsometryClass {
    pub fn tag(&self) -> &'static str {
        match self {
            IsometryClass::Identity => "identity",
            IsometryClass::Elliptic { .. } => "elliptic",
            IsometryClass::PositiveUnipotent => "positive_unipotent",
            IsometryClass::NegativeUnipotent => "negative_unipotent",
            IsometryClass::Hyperbolic { .. } => "hyperbolic",
        }
    }
}

/// Angle parameter in `(0, 1]` of a real eigendirection.
fn fixed_direction(m: &Mat2) -> Result<f64, Psl2Error> {
    let tr = m.a + m.d;
    let s = (tr * tr - 4.0).max(0.0).sqrt();
    let lambda = (tr + if tr >= 0.0 { s } else { -s }) / 2.0;
    let v1 = (m.b, lambda - m.a);
    let v2 = (lambda - m.d, m.c);
    let n1 = v1.0 * v1.0 + v1.1 * v1.1;
    let n2 = v2.0 * v2.0 + v2.1 * v2.1;
    let (vx, vy) = if n1 >= n2 { v1 } else { v2 };
    if vx == 0.0 && vy == 0.0 {
        return Err(Psl2Error::AmbiguousClass(
            "no isolated eigendirection (central element)".into(),
        ));
    }
    let t = (vy.atan2(vx) / std::f64::consts::PI).rem_euclid(1.0);
    Ok(if t == 0.0 { 1.0 } else { t })
}

/// Classify up to conjugacy. `tol` bounds the band around |tr| = 2 inside
/// which the parabolic/identity discrimination runs.
pub fn classify(m: &Mat2, tol: f64) -> Result<IsometryClass, Psl2Error> {
    let tr = m.trace_abs();
    if tr < 2.0 - tol {
        return Ok(IsometryClass::Elliptic {
            frac_rot: frac_rot(m)?,
        });
    }
    if tr > 2.0 + tol {
        let x = tr / 2.0;
        let length = 2.0 * (x + (x * x - 1.0).max(0.0).sqrt()).ln();
        return Ok(IsometryClass::Hyperbolic { length });
    }
    let scale = m.b.abs().max(m.c.abs()).max((m.a - m.d).abs());
    if scale <= tol / 100.0 {
        return Ok(IsometryClass::Identity);
    }
    // Unipotent sign: displacement of the lift fixing the eigendirection,
    // probed away from it. A genuine unipotent displaces every non-fixed
    // point the same way; sign changes or sub-tolerance displacements mean
    // the matrix is too close to the boundary of several classes to call.
    let tstar = fixed_direction(m)?;
    let mut sign = 0.0f64;
    for offset in [0.25, 0.5, 0.75] {
        let p = tstar + offset;
        let w = m.circle_map(p.rem_euclid(1.0));
        // representative in [tstar, tstar + 1)
        let rep = w + (tstar - w - BRANCH_SNAP).ceil();
        let disp = rep - p;
        if disp.abs() <= tol {
            return Err(Psl2Error::AmbiguousClass(format!(
                "unipotent displacement {disp:.3e} below tolerance"
            )));
        }
        if sign != 0.0 && sign != disp.signum() {
            return Err(Psl2Error::AmbiguousClass(
                "displacement changes sign near the trace-2 band".into(),
            ));
        }
        sign = disp.signum();
    }
    Ok(if sign > 0.0 {
        IsometryClass::PositiveUnipotent
    } else {
        IsometryClass::NegativeUnipotent
    })
}

/// Fractional rotation number in `(0, 1)` of an elliptic element.
///
/// The fixed point `x + iy` of the slope action is moved to `i` by an
/// affine map, which conjugates the matrix into the rotation group exactly;
/// the angle is then read off with `atan2`.
pub fn frac_rot(m: &Mat2) -> Result<f64, Psl2Error> {
    let tr = m.a + m.d;
    if tr * tr >= 4.0 {
        return Err(Psl2Error::AmbiguousClass(
            "frac_rot is defined on elliptic classes only".into(),
        ));
    }
    // fixed point of z -> (c + dz)/(a + bz): b z^2 + (a - d) z - c = 0
    let x = (m.d - m.a) / (2.0 * m.b);
    let y = (4.0 - tr * tr).sqrt() / (2.0 * m.b.abs());
    let sy = y.sqrt();
    let n = Mat2 {
        a: sy,
        b: 0.0,
        c: -x / sy,
        d: 1.0 / sy,
    };
    let r = n.mul(m).mul(&n.inverse());
    let psi = (r.c - r.b).atan2(r.a + r.d);
    let fr = (psi / std::f64::consts::PI).rem_euclid(1.0);
    debug_assert!(fr > 0.0 && fr < 1.0);
    Ok(fr)
}

/// An element of the universal cover: a matrix plus the value at 0 of the
/// chosen monotone lift of its circle map.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LiftedIsometry {
    pub matrix: Mat2,
    pub lifted_value: f64,
}

impl LiftedIsometry {
    /// The identity of the cover (central element 0).
    pub fn unit() -> Self {
        LiftedIsometry {
            matrix: Mat2::identity(),
            lifted_value: 0.0,
        }
    }

    /// Evaluate the monotone lift at any real `t`: for `t` in `[0, 1)` the
    /// value is the representative of `f(t)` mod 1 in
    /// `[lifted_value, lifted_value + 1)`, extended by `f(t + k) = f(t) + k`.
    pub fn eval(&self, t: f64) -> f64 {
        let near = t.round();
        if (t - near).abs() <= BRANCH_SNAP {
            // t is numerically a deck translate of 0, where the window
            // arithmetic below is edge-unstable. Use f(t + m) = f(t) + m
            // exactly and add the residual angle between the images of
            // v(m) and v(t), measured in one atan2 frame so it cannot
            // wrap around the coordinate seam.
            let sign = if (near as i64).rem_euclid(2) == 0 {
                1.0
            } else {
                -1.0
            };
            let (w0x, w0y) = (sign * self.matrix.a, sign * self.matrix.c);
            let (sy, cy) = (std::f64::consts::PI * t).sin_cos();
            let w1x = self.matrix.a * cy + self.matrix.b * sy;
            let w1y = self.matrix.c * cy + self.matrix.d * sy;
            let delta = (w0x * w1y - w0y * w1x).atan2(w0x * w1x + w0y * w1y) / std::f64::consts::PI;
            return self.lifted_value + near + delta;
        }
        let k = t.floor();
        let w = self.matrix.circle_map(t - k);
        w + (self.lifted_value - w - BRANCH_SNAP).ceil() + k
    }
}

/// The lift with value in `[0, 1)`.
pub fn canonical_lift(m: &Mat2) -> LiftedIsometry {
    LiftedIsometry {
        matrix: *m,
        lifted_value: m.circle_map(0.0),
    }
}

/// Compose with the central deck element `m` times (translation by `m`).
pub fn shift_branch(g: &LiftedIsometry, m: i64) -> LiftedIsometry {
    LiftedIsometry {
        matrix: g.matrix,
        lifted_value: g.lifted_value + m as f64,
    }
}

pub fn compose(g: &LiftedIsometry, h: &LiftedIsometry) -> LiftedIsometry {
    LiftedIsometry {
        matrix: g.matrix.mul(&h.matrix),
        lifted_value: g.eval(h.lifted_value),
    }
}

pub fn invert(g: &LiftedIsometry) -> LiftedIsometry {
    let minv = g.matrix.inverse();
    let t0 = minv.circle_map(0.0);
    // f~(t0) is an integer K; the inverse lift takes 0 to t0 - K
    let k = g.eval(t0).round();
    LiftedIsometry {
        matrix: minv,
        lifted_value: t0 - k,
    }
}

/// Translation (rotation) number of a lifted isometry.
///
/// Elliptic: branch integer plus the fractional rotation number. Otherwise:
/// the integer displacement from the lift fixing the eigendirection.
pub fn rot(g: &LiftedIsometry) -> Result<f64, Psl2Error> {
    rot_with_tol(g, CLASS_TOL)
}

pub fn rot_with_tol(g: &LiftedIsometry, tol: f64) -> Result<f64, Psl2Error> {
    match classify(&g.matrix, tol)? {
        IsometryClass::Elliptic { frac_rot } => Ok(g.lifted_value.floor() + frac_rot),
        IsometryClass::Identity => {
            let r = g.lifted_value.round();
            if (g.lifted_value - r).abs() > INT_TOL {
                return Err(Psl2Error::AmbiguousClass(format!(
                    "lift of the identity with non-integer value {}",
                    g.lifted_value
                )));
            }
            Ok(r)
        }
        _ => rot_nonelliptic(g),
    }
}

fn rot_nonelliptic(g: &LiftedIsometry) -> Result<f64, Psl2Error> {
    let tstar = fixed_direction(&g.matrix)?;
    if tstar.min(1.0 - tstar) < 1e-6 {
        // The fixed direction sits numerically on the coordinate seam
        // (true for every triangular matrix), which makes the anchor
        // window below unstable under entry noise. rot is invariant under
        // conjugation, so rotate the fixed direction away first.
        let r = canonical_lift(&Mat2::rotation(2.0 * std::f64::consts::PI * 0.237));
        let moved = compose(&compose(&r, g), &invert(&r));
        return rot_nonelliptic(&moved);
    }
    let f0 = g.matrix.circle_map(0.0);
    // representative of f(0) mod 1 in [tstar - 1, tstar): the value at 0
    // of the lift fixing the eigendirection
    let ustar = f0 - (f0 - tstar + 1.0 + BRANCH_SNAP).floor();
    let m = g.lifted_value - ustar;
    let r = m.round();
    if (m - r).abs() > INT_TOL {
        return Err(Psl2Error::AmbiguousClass(format!(
            "non-integer branch displacement {m}"
        )));
    }
    Ok(r)
}

/// A surface-group representation: genus handles `(A_i, B_i)` and boundary
/// images `C_j`, subject to `prod [A_i, B_i] prod C_j = id` in PSL(2,R) and
/// `2 - 2g - n < 0`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Representation {
    pub genus: u32,
    pub handles: Vec<(Mat2, Mat2)>,
    pub boundaries: Vec<Mat2>,
}

impl Representation {
    pub fn new(
        genus: u32,
        handles: Vec<(Mat2, Mat2)>,
        boundaries: Vec<Mat2>,
    ) -> Result<Self, Psl2Error> {
        let rep = Representation {
            genus,
            handles,
            boundaries,
        };
        rep.validate(RELATION_TOL)?;
        Ok(rep)
    }

    pub fn chi(&self) -> i64 {
        2 - 2 * self.genus as i64 - self.boundaries.len() as i64
    }

    pub fn validate(&self, relation_tol: f64) -> Result<(), Psl2Error> {
        if self.handles.len() != self.genus as usize {
            return Err(Psl2Error::InvalidSurface(format!(
                "genus {} but {} handle pairs",
                self.genus,
                self.handles.len()
            )));
        }
        if self.chi() >= 0 {
            return Err(Psl2Error::InvalidSurface(format!(
                "Euler characteristic {} is not negative",
                self.chi()
            )));
        }
        let defect = self.relation_defect();
        if defect > relation_tol {
            return Err(Psl2Error::RelationViolation(defect));
        }
        Ok(())
    }

    /// Distance of the relation word from the identity in PSL(2,R).
    pub fn relation_defect(&self) -> f64 {
        let mut p = Mat2::identity();
        for (a, b) in &self.handles {
            p = p.mul(a).mul(b).mul(&a.inverse()).mul(&b.inverse());
        }
        for c in &self.boundaries {
            p = p.mul(c);
        }
        p.dist(&Mat2::identity())
    }
}

/// Euler number from canonical lifts: minus the sum of rotation numbers of
/// the boundary lifts, the last one forced by the relation in the cover.
///
/// Closed input (no boundaries) is handled by reading the relation defect
/// off an added identity puncture.
pub fn euler_number(rep: &Representation) -> Result<f64, Psl2Error> {
    let zero_h = vec![(0i64, 0i64); rep.handles.len()];
    let zero_b = vec![0i64; rep.boundaries.len().saturating_sub(1)];
    euler_number_shifted(rep, &zero_h, &zero_b)
}

/// Euler number with explicit branch choices: lift of handle generators and
/// of the first n-1 boundary generators shifted by the given integers. The
/// result does not depend on the shifts; exposing them makes that property
/// testable.
pub fn euler_number_shifted(
    rep: &Representation,
    handle_shifts: &[(i64, i64)],
    boundary_shifts: &[i64],
) -> Result<f64, Psl2Error> {
    let n = rep.boundaries.len();
    if handle_shifts.len() != rep.handles.len() || boundary_shifts.len() != n.saturating_sub(1) {
        return Err(Psl2Error::InvalidSurface(
            "branch shift lists must match generator counts".into(),
        ));
    }
    rep.validate(RELATION_TOL)?;

    let mut q = LiftedIsometry::unit();
    for ((a, b), (sa, sb)) in rep.handles.iter().zip(handle_shifts) {
        let at = shift_branch(&canonical_lift(a), *sa);
        let bt = shift_branch(&canonical_lift(b), *sb);
        let comm = compose(&compose(&at, &bt), &compose(&invert(&at), &invert(&bt)));
        q = compose(&q, &comm);
    }
    let mut rot_sum = 0.0;
    for (c, s) in rep
        .boundaries
        .iter()
        .take(n.saturating_sub(1))
        .zip(boundary_shifts)
    {
        let ct = shift_branch(&canonical_lift(c), *s);
        rot_sum += rot(&ct)?;
        q = compose(&q, &ct);
    }
    let forced = invert(&q);
    if let Some(last) = rep.boundaries.last() {
        let defect = forced.matrix.dist(last);
        if defect > RELATION_TOL {
            return Err(Psl2Error::RelationViolation(defect));
        }
        rot_sum += rot(&forced)?;
    } else {
        // closed surface: the forced lift belongs to an identity puncture
        let defect = forced.matrix.dist(&Mat2::identity());
        if defect > RELATION_TOL {
            return Err(Psl2Error::RelationViolation(defect));
        }
        rot_sum += rot(&forced)?;
    }
    Ok(-rot_sum)
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct MilnorWood {
    pub euler: f64,
    pub bound: f64,
    pub slack: f64,
}

/// Euler number against the Milnor-Wood bound `2g - 2 + n` (with `n = 0`
/// this is the closed-surface bound).
pub fn milnor_wood(rep: &Representation) -> Result<MilnorWood, Psl2Error> {
    let euler = euler_number(rep)?;
    let bound = (2 * rep.genus as i64 - 2 + rep.boundaries.len() as i64) as f64;
    Ok(MilnorWood {
        euler,
        bound,
        slack: bound - euler.abs(),
    })
}
