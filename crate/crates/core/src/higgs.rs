//! Exact calculus of sigma-fixed strata of parabolic rank-2 Higgs moduli.
//!
//! A stratum is indexed by a line-bundle degree d, a vector a of 0/1
//! branch choices, and a sign per nilpotent-residue puncture. Everything
//! here is arithmetic over exact rationals: admissibility windows, the
//! dimension pair (m, m'), affine-bundle topology descriptors,
//! wall-crossing between weight chambers, compactness, and the dictionary
//! between boundary monodromy classes and puncture data.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rat::{self, Rat};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HiggsError {
    #[error("incompatible weight/residue data: {0}")]
    IncompatibleInput(String),
    #[error("stratum is not admissible: {0}")]
    NotAdmissible(String),
    #[error("stratum is empty: {0}")]
    EmptyStratum(String),
    #[error("invalid wall crossing: {0}")]
    InvalidCrossing(String),
    #[error("g=0 with n = 3 + s_0 is excluded from the compactness criterion")]
    ExcludedCase,
    #[error("no boundary class matches this puncture data: {0}")]
    UnmappedClass(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn as_str(self) -> &'static str {
        match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        }
    }

    pub fn parse(s: &str) -> Result<Sign, String> {
        match s {
            "+" => Ok(Sign::Plus),
            "-" => Ok(Sign::Minus),
            other => Err(format!("sign must be \"+\" or \"-\", got {other:?}")),
        }
    }
}

/// Per-puncture parabolic weight datum of an integral rank-2 system: the
/// smaller weight w1, with the tag recording whether the two weights
/// coincide mod 1 (degenerate, w1 in {0, 1/2}) or split (w1 in (0, 1/2)).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "WireWeight", into = "WireWeight")]
pub enum Weight {
    Degenerate { w1: Rat },
    NonDegenerate { w1: Rat },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct WireWeight {
    kind: String,
    w1: rat::WireRat,
}

impl TryFrom<WireWeight> for Weight {
    type Error = String;
    fn try_from(w: WireWeight) -> Result<Self, String> {
        let w1 = w.w1.0;
        match w.kind.as_str() {
            "deg" => Weight::degenerate(w1).map_err(|e| e.to_string()),
            "nondeg" => Weight::non_degenerate(w1).map_err(|e| e.to_string()),
            other => Err(format!("unknown weight kind {other:?}")),
        }
    }
}

impl From<Weight> for WireWeight {
    fn from(w: Weight) -> WireWeight {
        let (kind, w1) = match w {
            Weight::Degenerate { w1 } => ("deg", w1),
            Weight::NonDegenerate { w1 } => ("nondeg", w1),
        };
        WireWeight {
            kind: kind.into(),
            w1: rat::WireRat(w1),
        }
    }
}

impl Weight {
    pub fn degenerate(w1: Rat) -> Result<Weight, HiggsError> {
        if w1 != rat::rat(0, 1) && w1 != rat::rat(1, 2) {
            return Err(HiggsError::IncompatibleInput(format!(
                "degenerate weight must be 0 or 1/2, got {}",
                rat::format_rat(w1)
            )));
        }
        Ok(Weight::Degenerate { w1 })
    }

    pub fn non_degenerate(w1: Rat) -> Result<Weight, HiggsError> {
        if w1 <= rat::rat(0, 1) || w1 >= rat::rat(1, 2) {
            return Err(HiggsError::IncompatibleInput(format!(
                "non-degenerate weight must lie strictly between 0 and 1/2, got {}",
                rat::format_rat(w1)
            )));
        }
        Ok(Weight::NonDegenerate { w1 })
    }

    pub fn w1(&self) -> Rat {
        match self {
            Weight::Degenerate { w1 } | Weight::NonDegenerate { w1 } => *w1,
        }
    }

    pub fn is_degenerate(&self) -> bool {
        matches!(self, Weight::Degenerate { .. })
    }
}

/// Conjugacy class of the Higgs-field residue at a puncture. The sign of
/// a nilpotent residue is stratum data, kept separately (`eps`); an
/// invertible residue enters only through its determinant, whose sign is
/// the invariant (the value is recorded in units of pi^-2).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "WireResidue", into = "WireResidue")]
pub enum Residue {
    Zero,
    Nilpotent,
    Invertible { det: Rat },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct WireResidue {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    det: Option<rat::WireRat>,
}

impl TryFrom<WireResidue> for Residue {
    type Error = String;
    fn try_from(r: WireResidue) -> Result<Self, String> {
        match r.kind.as_str() {
            "zero" => Ok(Residue::Zero),
            "nilpotent" => Ok(Residue::Nilpotent),
            "invertible" => {
                let det = r.det.ok_or("invertible residue requires det")?.0;
                if det == rat::rat(0, 1) {
                    return Err("invertible residue must have nonzero det".into());
                }
                Ok(Residue::Invertible { det })
            }
            other => Err(format!("unknown residue kind {other:?}")),
        }
    }
}

impl From<Residue> for WireResidue {
    fn from(r: Residue) -> WireResidue {
        let (kind, det) = match r {
            Residue::Zero => ("zero", None),
            Residue::Nilpotent => ("nilpotent", None),
            Residue::Invertible { det } => ("invertible", Some(rat::WireRat(det))),
        };
        WireResidue {
            kind: kind.into(),
            det,
        }
    }
}

/// A line bundle with a rational weight in [0,1) at finitely many
/// punctures; missing punctures carry weight 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParabolicLineBundle {
    pub degree: i64,
    pub weights: std::collections::BTreeMap<usize, Rat>,
}

impl ParabolicLineBundle {
    pub fn new(degree: i64, weights: &[(usize, Rat)]) -> Result<Self, HiggsError> {
        let mut map = std::collections::BTreeMap::new();
        for &(p, w) in weights {
            if w < rat::rat(0, 1) || w >= rat::rat(1, 1) {
                return Err(HiggsError::IncompatibleInput(format!(
                    "parabolic weight must lie in [0,1), got {}",
                    rat::format_rat(w)
                )));
            }
            if w != rat::rat(0, 1) {
                map.insert(p, w);
            }
        }
        Ok(ParabolicLineBundle {
            degree,
            weights: map,
        })
    }

    pub fn pdeg(&self) -> Rat {
        Rat::from_integer(self.degree) + self.weights.values().sum::<Rat>()
    }

    pub fn tensor(&self, other: &ParabolicLineBundle) -> ParabolicLineBundle {
        let punctures: std::collections::BTreeSet<usize> = self
            .weights
            .keys()
            .chain(other.weights.keys())
            .copied()
            .collect();
        let mut degree = self.degree + other.degree;
        let mut weights = std::collections::BTreeMap::new();
        for p in punctures {
            let zero = rat::rat(0, 1);
            let sum =
                *self.weights.get(&p).unwrap_or(&zero) + *other.weights.get(&p).unwrap_or(&zero);
            degree += rat::floor(sum);
            let frac = rat::fract(sum);
            if frac != zero {
                weights.insert(p, frac);
            }
        }
        ParabolicLineBundle { degree, weights }
    }

    pub fn dual(&self) -> ParabolicLineBundle {
        let weights: std::collections::BTreeMap<usize, Rat> = self
            .weights
            .iter()
            .map(|(&p, &w)| (p, Rat::from_integer(1) - w))
            .collect();
        ParabolicLineBundle {
            degree: -self.degree - weights.len() as i64,
            weights,
        }
    }
}

/// Weight of the parabolic structure induced on a line subbundle F of a
/// rank-2 bundle at one puncture, from the position of F relative to the
/// flag line.
pub fn sub_bundle_jump(degenerate: bool, w1: Rat, restricts_to_flag_line: bool) -> Rat {
    if degenerate || !restricts_to_flag_line {
        w1
    } else {
        Rat::from_integer(1) - w1
    }
}

/// Euler number of the stratum (d, a) against the weight system:
/// 2d - d0 + 2 sum(a_i + (-1)^{a_i} w1_i).
pub fn e_of(d: i64, a: &[u8], w: &[Weight], d0: i64) -> Rat {
    assert_eq!(
        a.len(),
        w.len(),
        "branch vector and weight system lengths differ"
    );
    let wl: Rat = a.iter().zip(w).map(|(&ai, wi)| w_l_term(ai, wi.w1())).sum();
    Rat::from_integer(2 * d - d0) + Rat::from_integer(2) * wl
}

fn w_l_term(a: u8, w1: Rat) -> Rat {
    debug_assert!(a <= 1);
    if a == 0 {
        w1
    } else {
        Rat::from_integer(1) - w1
    }
}

/// True when the residue prescription can coexist with the weight system
/// under the real involution: split weights force zero residue, equal
/// weights force residues of nonnegative determinant type, and the
/// identity-monodromy count leaves the punctured surface hyperbolic.
pub fn is_compatible(w: &[Weight], res: &[Residue], g: u32) -> bool {
    if w.len() != res.len() {
        return false;
    }
    for (wi, ri) in w.iter().zip(res) {
        match (wi.is_degenerate(), ri) {
            (false, Residue::Zero) => {}
            (false, _) => return false,
            (true, Residue::Invertible { det }) if *det <= rat::rat(0, 1) => return false,
            (true, _) => {}
        }
    }
    let s0 = count_zero_degenerate(w, res);
    s0 + 2 - 2 * (g as i64) - (w.len() as i64) < 0
}

fn count_zero_degenerate(w: &[Weight], res: &[Residue]) -> i64 {
    w.iter()
        .zip(res)
        .filter(|(wi, ri)| wi.is_degenerate() && **ri == Residue::Zero)
        .count() as i64
}

/// Admissibility of (d, a): a vanishes at degenerate punctures, the Euler
/// number is nonnegative, and d is small enough that the symmetric-product
/// degree m stays >= s_0.
pub fn is_admissible(
    d: i64,
    a: &[u8],
    w: &[Weight],
    res: &[Residue],
    d0: i64,
    g: u32,
) -> Result<bool, HiggsError> {
    if !is_compatible(w, res, g) {
        return Err(HiggsError::IncompatibleInput(
            "weight/residue data fails compatibility".into(),
        ));
    }
    if a.len() != w.len() || a.iter().any(|&ai| ai > 1) {
        return Ok(false);
    }
    if a.iter()
        .zip(w)
        .any(|(&ai, wi)| wi.is_degenerate() && ai != 0)
    {
        return Ok(false);
    }
    if e_of(d, a, w, d0) < rat::rat(0, 1) {
        return Ok(false);
    }
    let norm_a: i64 = a.iter().map(|&x| x as i64).sum();
    let s_even = w
        .iter()
        .filter(|wi| wi.is_degenerate() && wi.w1() == rat::rat(0, 1))
        .count() as i64;
    let s0 = count_zero_degenerate(w, res);
    Ok(2 * d <= d0 + 2 * (g as i64) - 2 - norm_a + s_even - s0)
}

/// One sigma-fixed stratum: fixed moduli data (genus, determinant degree,
/// weights, residue classes) plus the stratum index (d, a, eps), where
/// eps lists the signs of the nilpotent residues in puncture order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "WireStratum", into = "WireStratum")]
pub struct SigmaFixedStratum {
    pub g: u32,
    pub d0: i64,
    pub weights: Vec<Weight>,
    pub residues: Vec<Residue>,
    pub d: i64,
    pub a: Vec<u8>,
    pub eps: Vec<Sign>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct WireStratum {
    g: u32,
    d0: i64,
    weights: Vec<Weight>,
    residues: Vec<Residue>,
    d: i64,
    a: Vec<u8>,
    eps: Vec<String>,
}

impl TryFrom<WireStratum> for SigmaFixedStratum {
    type Error = String;
    fn try_from(w: WireStratum) -> Result<Self, String> {
        let eps = w
            .eps
            .iter()
            .map(|s| Sign::parse(s))
            .collect::<Result<Vec<_>, _>>()?;
        SigmaFixedStratum::new(w.g, w.d0, w.weights, w.residues, w.d, w.a, eps)
            .map_err(|e| e.to_string())
    }
}

impl From<SigmaFixedStratum> for WireStratum {
    fn from(s: SigmaFixedStratum) -> WireStratum {
        WireStratum {
            g: s.g,
            d0: s.d0,
            weights: s.weights,
            residues: s.residues,
            d: s.d,
            a: s.a,
            eps: s.eps.iter().map(|e| e.as_str().to_string()).collect(),
        }
    }
}

impl SigmaFixedStratum {
    pub fn new(
        g: u32,
        d0: i64,
        weights: Vec<Weight>,
        residues: Vec<Residue>,
        d: i64,
        a: Vec<u8>,
        eps: Vec<Sign>,
    ) -> Result<Self, HiggsError> {
        let nil = residues
            .iter()
            .filter(|r| **r == Residue::Nilpotent)
            .count();
        if eps.len() != nil {
            return Err(HiggsError::IncompatibleInput(format!(
                "expected {nil} nilpotent signs, got {}",
                eps.len()
            )));
        }
        if !is_admissible(d, &a, &weights, &residues, d0, g)? {
            return Err(HiggsError::NotAdmissible(format!(
                "(d, a) = ({d}, {a:?}) violates the admissibility window"
            )));
        }
        Ok(SigmaFixedStratum {
            g,
            d0,
            weights,
            residues,
            d,
            a,
            eps,
        })
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    /// Weight of the destabilizing line subbundle at puncture i.
    pub fn w_l(&self, i: usize) -> Rat {
        w_l_term(self.a[i], self.weights[i].w1())
    }

    pub fn e(&self) -> Rat {
        e_of(self.d, &self.a, &self.weights, self.d0)
    }

    pub fn s(&self) -> i64 {
        self.weights.iter().filter(|w| w.is_degenerate()).count() as i64
    }

    pub fn s_even(&self) -> i64 {
        self.weights
            .iter()
            .filter(|w| w.is_degenerate() && w.w1() == rat::rat(0, 1))
            .count() as i64
    }

    pub fn s_odd(&self) -> i64 {
        self.s() - self.s_even()
    }

    pub fn s_zero(&self) -> i64 {
        count_zero_degenerate(&self.weights, &self.residues)
    }

    pub fn s_inv(&self) -> i64 {
        self.residues
            .iter()
            .filter(|r| matches!(r, Residue::Invertible { .. }))
            .count() as i64
    }

    pub fn s_plus(&self) -> i64 {
        self.eps.iter().filter(|e| **e == Sign::Plus).count() as i64
    }

    pub fn s_minus(&self) -> i64 {
        self.eps.iter().filter(|e| **e == Sign::Minus).count() as i64
    }

    fn norm_a(&self) -> i64 {
        self.a.iter().map(|&x| x as i64).sum()
    }

    /// Puncture indices whose residue satisfies the predicate, with the
    /// nilotent sign supplied where one exists.
    fn residue_indices(&self, pred: impl Fn(&Residue, Option<Sign>) -> bool) -> Vec<usize> {
        let mut nil_seen = 0;
        self.residues
            .iter()
            .enumerate()
            .filter_map(|(i, r)| {
                let sign = if *r == Residue::Nilpotent {
                    let s = self.eps[nil_seen];
                    nil_seen += 1;
                    Some(s)
                } else {
                    None
                };
                pred(r, sign).then_some(i)
            })
            .collect()
    }
}

/// Symmetric-product degree and section count of a stratum with e > 0:
/// m = d0 + 2g - 2 - 2d - |a| + s_even and m' = -d0 + g - 1 + n + 2d +
/// |a| + s_odd, with m + m' = 3g - 3 + n + s.
pub fn stratum_dims(stratum: &SigmaFixedStratum) -> Result<(i64, i64), HiggsError> {
    if stratum.e() <= rat::rat(0, 1) {
        return Err(HiggsError::NotAdmissible(
            "dimension formulas require e > 0".into(),
        ));
    }
    let g = stratum.g as i64;
    let n = stratum.n() as i64;
    let m = stratum.d0 + 2 * g - 2 - 2 * stratum.d - stratum.norm_a() + stratum.s_even();
    let m_prime = -stratum.d0 + g - 1 + n + 2 * stratum.d + stratum.norm_a() + stratum.s_odd();
    debug_assert_eq!(m + m_prime, 3 * g - 3 + n + stratum.s());
    debug_assert!(m >= 0 && m_prime >= 0);
    Ok((m, m_prime))
}

/// Affine-bundle shape of one stratum: a rank-`fiber_rank` bundle over a
/// degree-`base_sym_degree` symmetric product of the curve minus
/// `base_removed`, with `removed_subbundles` codimension-1 affine
/// subbundles taken out in the open variant.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StratumTopology {
    pub base_sym_degree: i64,
    pub base_removed: Vec<usize>,
    pub fiber_rank: i64,
    pub removed_subbundles: i64,
    pub quotient: bool,
    pub compact: bool,
}

pub fn stratum_topology(
    stratum: &SigmaFixedStratum,
    quotient: bool,
    closure: bool,
) -> Result<StratumTopology, HiggsError> {
    let (m, m_prime) = stratum_dims(stratum)?;
    let base_sym_degree = m - stratum.s_zero() - stratum.s_minus();
    let fiber_rank = m_prime - stratum.s_inv() - stratum.s_zero() - stratum.s_plus();
    if base_sym_degree < 0 {
        return Err(HiggsError::EmptyStratum(format!(
            "base degree {m} cannot absorb {} pinned punctures",
            stratum.s_zero() + stratum.s_minus()
        )));
    }
    if fiber_rank < 0 {
        return Err(HiggsError::EmptyStratum(format!(
            "fiber rank {m_prime} cannot absorb {} pinned directions",
            stratum.s_inv() + stratum.s_zero() + stratum.s_plus()
        )));
    }
    let base_removed = stratum.residue_indices(|r, sign| {
        matches!(r, Residue::Invertible { .. }) || (!closure && sign == Some(Sign::Plus))
    });
    let compact = match is_compact(stratum, !closure) {
        Ok(c) => c.compact,
        // g=0 with n = 3 + s_0: a single point whenever nonempty.
        Err(HiggsError::ExcludedCase) => true,
        Err(other) => return Err(other),
    };
    Ok(StratumTopology {
        base_sym_degree,
        base_removed,
        fiber_rank,
        removed_subbundles: if closure { 0 } else { stratum.s_minus() },
        quotient,
        compact,
    })
}

/// Enumeration output: positive-Euler strata, zero-Euler boundary strata
/// (admissible but outside the affine-bundle description), and the marker
/// for the zero-Higgs-field locus when every residue closure contains 0.
#[derive(Debug, Clone, PartialEq)]
pub enum StratumEntry {
    Stratum(SigmaFixedStratum),
    ZeroEuler(SigmaFixedStratum),
    ZeroHiggsLocus,
}

/// All strata of the moduli data: every sign assignment on nilpotent
/// punctures, every branch vector vanishing on degenerate punctures, and
/// every d with e >= 0 and nonnegative punctured base degree.
pub fn enumerate_strata(
    weights: &[Weight],
    residues: &[Residue],
    d0: i64,
    g: u32,
) -> Result<Vec<StratumEntry>, HiggsError> {
    if !is_compatible(weights, residues, g) {
        return Err(HiggsError::IncompatibleInput(
            "weight/residue data fails compatibility".into(),
        ));
    }
    let n = weights.len();
    let free_a: Vec<usize> = (0..n).filter(|&i| !weights[i].is_degenerate()).collect();
    let nil_count = residues
        .iter()
        .filter(|r| **r == Residue::Nilpotent)
        .count();
    let s_even = weights
        .iter()
        .filter(|w| w.is_degenerate() && w.w1() == rat::rat(0, 1))
        .count() as i64;
    let s0 = count_zero_degenerate(weights, residues);
    let mut out = Vec::new();
    for a_bits in 0..(1u64 << free_a.len()) {
        let mut a = vec![0u8; n];
        for (bit, &idx) in free_a.iter().enumerate() {
            a[idx] = ((a_bits >> bit) & 1) as u8;
        }
        let norm_a: i64 = a.iter().map(|&x| x as i64).sum();
        let two_wl = e_of(0, &a, weights, 0); // 2 sum w_L
        for eps_bits in 0..(1u64 << nil_count) {
            let eps: Vec<Sign> = (0..nil_count)
                .map(|b| {
                    if (eps_bits >> b) & 1 == 0 {
                        Sign::Plus
                    } else {
                        Sign::Minus
                    }
                })
                .collect();
            let s_minus = eps.iter().filter(|e| **e == Sign::Minus).count() as i64;
            // e >= 0 bounds d below, base degree m - s0 - s_minus >= 0 above
            let d_min = ceil_div_2(Rat::from_integer(d0) - two_wl);
            let d_max = (d0 + 2 * (g as i64) - 2 - norm_a + s_even - s0 - s_minus).div_euclid(2);
            for d in d_min..=d_max {
                let stratum = SigmaFixedStratum::new(
                    g,
                    d0,
                    weights.to_vec(),
                    residues.to_vec(),
                    d,
                    a.clone(),
                    eps.clone(),
                )?;
                if stratum.e() > rat::rat(0, 1) {
                    out.push(StratumEntry::Stratum(stratum));
                } else {
                    out.push(StratumEntry::ZeroEuler(stratum));
                }
            }
        }
    }
    if residues
        .iter()
        .all(|r| !matches!(r, Residue::Invertible { .. }))
    {
        out.push(StratumEntry::ZeroHiggsLocus);
    }
    Ok(out)
}

/// Smallest integer d with 2d >= x.
fn ceil_div_2(x: Rat) -> i64 {
    let two = Rat::from_integer(2);
    -rat::floor(-x / two)
}

/// Move the weight of a nondegenerate zero-residue puncture: inside the
/// open chamber nothing else changes; onto a chamber wall (w1 in {0,1/2})
/// the puncture degenerates to a signed nilpotent residue per the
/// crossing table, possibly shifting d.
pub fn wall_cross(
    stratum: &SigmaFixedStratum,
    i: usize,
    target_w1: Rat,
) -> Result<SigmaFixedStratum, HiggsError> {
    if i >= stratum.n() {
        return Err(HiggsError::InvalidCrossing(format!(
            "puncture {i} out of range"
        )));
    }
    if stratum.weights[i].is_degenerate() {
        return Err(HiggsError::InvalidCrossing(format!(
            "puncture {i} is already degenerate"
        )));
    }
    if stratum.residues[i] != Residue::Zero {
        return Err(HiggsError::InvalidCrossing(format!(
            "puncture {i} must carry a zero residue"
        )));
    }
    if stratum.e() <= rat::rat(0, 1) {
        return Err(HiggsError::InvalidCrossing(
            "source stratum has e <= 0".into(),
        ));
    }
    let zero = rat::rat(0, 1);
    let half = rat::rat(1, 2);
    let mut weights = stratum.weights.clone();
    let mut residues = stratum.residues.clone();
    let mut a = stratum.a.clone();
    let mut eps = stratum.eps.clone();
    let mut d = stratum.d;
    if target_w1 > zero && target_w1 < half {
        weights[i] = Weight::NonDegenerate { w1: target_w1 };
    } else if target_w1 == zero || target_w1 == half {
        let (new_eps, new_d) = match (stratum.a[i], target_w1 == half) {
            (0, false) => (Sign::Minus, d),
            (0, true) => (Sign::Plus, d),
            (1, false) => (Sign::Plus, d + 1),
            (1, true) => (Sign::Minus, d),
            _ => unreachable!("a entries are 0 or 1"),
        };
        weights[i] = Weight::Degenerate { w1: target_w1 };
        residues[i] = Residue::Nilpotent;
        a[i] = 0;
        d = new_d;
        let nil_before = residues[..i]
            .iter()
            .filter(|r| **r == Residue::Nilpotent)
            .count();
        eps.insert(nil_before, new_eps);
    } else {
        return Err(HiggsError::InvalidCrossing(format!(
            "target weight {} outside [0, 1/2]",
            rat::format_rat(target_w1)
        )));
    }
    if e_of(d, &a, &weights, stratum.d0) <= zero {
        return Err(HiggsError::InvalidCrossing(
            "target stratum would have e <= 0".into(),
        ));
    }
    SigmaFixedStratum::new(stratum.g, stratum.d0, weights, residues, d, a, eps)
        .map_err(|e| HiggsError::InvalidCrossing(e.to_string()))
}

/// Compactness verdict for a stratum, with the projective space it forms
/// when compact.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Compactness {
    pub compact: bool,
    pub projective_space_dim: Option<i64>,
}

/// A stratum is compact exactly in genus 0 when no direction escapes:
/// no negative nilpotent signs, no invertible residues, and the Euler
/// number takes the unique supermaximal value 1 - sum of the elliptic
/// rotation amounts; the open variant also forbids positive signs.
pub fn is_compact(
    stratum: &SigmaFixedStratum,
    open_variant: bool,
) -> Result<Compactness, HiggsError> {
    if stratum.e() <= rat::rat(0, 1) {
        return Err(HiggsError::NotAdmissible(
            "compactness requires e > 0".into(),
        ));
    }
    if stratum.g == 0 && stratum.n() as i64 == 3 + stratum.s_zero() {
        return Err(HiggsError::ExcludedCase);
    }
    let one = Rat::from_integer(1);
    let two = Rat::from_integer(2);
    let supermax: Rat = one
        - stratum
            .weights
            .iter()
            .enumerate()
            .filter(|(_, w)| !w.is_degenerate())
            .map(|(i, w)| {
                if stratum.a[i] == 0 {
                    one - two * w.w1()
                } else {
                    two * w.w1()
                }
            })
            .sum::<Rat>();
    let mut compact = stratum.g == 0
        && stratum.s_minus() == 0
        && stratum.s_inv() == 0
        && stratum.e() == supermax
        && stratum.e() <= one;
    if open_variant {
        compact = compact && stratum.s_plus() == 0;
    }
    Ok(Compactness {
        compact,
        projective_space_dim: compact.then(|| stratum.n() as i64 - 3 - stratum.s_zero()),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stability {
    Stable,
    PolystableStrict,
    Unstable,
    NotSigmaFixed,
}

/// Stability of L-dagger-plus-L split Higgs data from the two degrees and
/// which half of the field survives: pdeg(det) below twice pdeg(L) makes
/// a nonzero field stable outright; on the wall both halves must survive.
pub fn stability_split(
    det_pdeg: Rat,
    line_pdeg: Rat,
    phi_nonzero: bool,
    psi_nonzero: bool,
) -> Stability {
    let two = Rat::from_integer(2);
    if det_pdeg < two * line_pdeg {
        if phi_nonzero {
            Stability::Stable
        } else {
            Stability::Unstable
        }
    } else if det_pdeg == two * line_pdeg {
        if phi_nonzero && psi_nonzero {
            Stability::PolystableStrict
        } else if phi_nonzero || psi_nonzero {
            Stability::Unstable
        } else {
            Stability::NotSigmaFixed
        }
    } else {
        Stability::NotSigmaFixed
    }
}

/// SL(2,R) boundary monodromy class, with the sign of the lift recorded
/// through w1 (the class is (-1)^{2 w1} times the named representative).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Sl2Boundary {
    Center { w1: Rat },
    Unipotent { w1: Rat, eps: Sign },
    Hyperbolic { w1: Rat, length: Rat },
    Elliptic { w_l: Rat },
}

/// Puncture data of the Higgs side of the dictionary.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PunctureData {
    pub weight: Weight,
    pub residue: Residue,
    pub eps: Option<Sign>,
    pub a: u8,
}

pub fn boundary_to_higgs(class: &Sl2Boundary) -> Result<PunctureData, HiggsError> {
    let data = match class {
        Sl2Boundary::Center { w1 } => PunctureData {
            weight: Weight::degenerate(*w1)?,
            residue: Residue::Zero,
            eps: None,
            a: 0,
        },
        Sl2Boundary::Unipotent { w1, eps } => PunctureData {
            weight: Weight::degenerate(*w1)?,
            residue: Residue::Nilpotent,
            eps: Some(*eps),
            a: 0,
        },
        Sl2Boundary::Hyperbolic { w1, length } => {
            if *length <= rat::rat(0, 1) {
                return Err(HiggsError::UnmappedClass(
                    "hyperbolic class requires positive length".into(),
                ));
            }
            let mu = *length / Rat::from_integer(8);
            PunctureData {
                weight: Weight::degenerate(*w1)?,
                residue: Residue::Invertible { det: mu * mu },
                eps: None,
                a: 0,
            }
        }
        Sl2Boundary::Elliptic { w_l } => {
            let (a, w1) = if *w_l > rat::rat(0, 1) && *w_l < rat::rat(1, 2) {
                (0, *w_l)
            } else if *w_l > rat::rat(1, 2) && *w_l < rat::rat(1, 1) {
                (1, Rat::from_integer(1) - *w_l)
            } else {
                return Err(HiggsError::UnmappedClass(format!(
                    "elliptic subbundle weight must lie in (0,1) away from 1/2, got {}",
                    rat::format_rat(*w_l)
                )));
            };
            PunctureData {
                weight: Weight::NonDegenerate { w1 },
                residue: Residue::Zero,
                eps: None,
                a,
            }
        }
    };
    Ok(data)
}

pub fn higgs_to_boundary(data: &PunctureData) -> Result<Sl2Boundary, HiggsError> {
    match (&data.weight, &data.residue) {
        (Weight::Degenerate { w1 }, Residue::Zero) => Ok(Sl2Boundary::Center { w1: *w1 }),
        (Weight::Degenerate { w1 }, Residue::Nilpotent) => {
            let eps = data.eps.ok_or_else(|| {
                HiggsError::UnmappedClass("nilpotent residue carries no sign".into())
            })?;
            Ok(Sl2Boundary::Unipotent { w1: *w1, eps })
        }
        (Weight::Degenerate { w1 }, Residue::Invertible { det }) => {
            if *det <= rat::rat(0, 1) {
                return Err(HiggsError::UnmappedClass(
                    "real boundary classes need positive residue determinant".into(),
                ));
            }
            let mu = rat::sqrt_exact(*det).ok_or_else(|| {
                HiggsError::UnmappedClass(format!(
                    "residue determinant {} is not a rational square",
                    rat::format_rat(*det)
                ))
            })?;
            Ok(Sl2Boundary::Hyperbolic {
                w1: *w1,
                length: Rat::from_integer(8) * mu,
            })
        }
        (Weight::NonDegenerate { w1 }, Residue::Zero) => {
            let w_l = w_l_term(data.a, *w1);
            Ok(Sl2Boundary::Elliptic { w_l })
        }
        (Weight::NonDegenerate { .. }, _) => Err(HiggsError::UnmappedClass(
            "split weights force a zero residue".into(),
        )),
    }
}

/// Twist by the k-th power of a square root of a degree-2k line bundle:
/// shifts (d, d0) by (k, 2k) and leaves every stratum invariant
/// (e, m, m', topology).
pub fn twist_by_square(stratum: &SigmaFixedStratum, k: i64) -> SigmaFixedStratum {
    let mut out = stratum.clone();
    out.d += k;
    out.d0 += 2 * k;
    out
}
