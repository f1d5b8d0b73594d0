//! Right and left approximations of totally acyclic `R`-complexes by
//! complexes of the form `SD`, minimality of approximations, the cone of the
//! counit, and iterated approximation towers.

use crate::complex::{ChainComplex, ChainMap, Homotopy};
use crate::constructions::{cone_with_maps, dual_base_change_iso, Cone, DualBaseChange};
use crate::error::{Error, Result};
use crate::functors::{BaseChange, Counit};
use crate::homotopy::{find_equivalence, find_homotopy_on, homotopy_inverse, Equivalence};
use crate::resolution::CompleteResolution;

/// Seed for the randomized equivalence searches; fixed so runs reproduce.
const EQUIVALENCE_SEED: u64 = 0x7ac;

/// `ε_C: STC -> C` on `[lo, hi]`.
pub fn right_approximation(bc: &BaseChange, c: &ChainComplex, lo: i64, hi: i64) -> Result<Counit> {
    bc.counit(c, lo, hi)
}

/// Spot-checks the right approximation property on `f: SD -> C`: factors
/// `f` as `ε_C o ST[f] o Sη_D` and returns the homotopy to `f` on `[lo, hi]`.
/// The counit must be known on `[lo - 1, hi + 1]`.
pub fn factor_through_right(
    bc: &BaseChange,
    counit: &Counit,
    d: &ChainComplex,
    f: &ChainMap,
    lo: i64,
    hi: i64,
) -> Result<Option<Homotopy>> {
    let g = bc.adjunction_backward(f, d, &counit.tc, lo - 1, hi + 1)?;
    let back = bc.adjunction_forward(&g, counit)?;
    Ok(find_homotopy_on(&back, f, lo, hi))
}

/// `C -> (S T C*)*`, the dual of the right approximation of `C*`.
#[derive(Clone, Debug)]
pub struct LeftApproximation {
    /// Right approximation of `C*`.
    pub dual_counit: Counit,
    /// `(S T C*)* = S((T C*)*)` on the window.
    pub target: ChainComplex,
    pub map: ChainMap,
    /// Identification of `S((TC*)*)` with `(STC*)*`.
    pub dual_iso: DualBaseChange,
}

pub fn left_approximation(bc: &BaseChange, c: &ChainComplex, lo: i64, hi: i64) -> Result<LeftApproximation> {
    let cd = c.dualize();
    let dual_counit = bc.counit(&cd, -hi, -lo)?;
    let map = dual_counit.map.dualize()?;
    let tcd = dual_counit.tc.complex.extend_to(-hi, -lo)?;
    let dual_iso = dual_base_change_iso(&tcd, &bc.r)?;
    if !dual_iso.composites_are_identities() {
        return Err(Error::Shape("dual and base change do not commute on the window".into()));
    }
    let source = c.extend_to(lo, hi)?;
    let target = dual_iso.dual_then_base.clone();
    let map = ChainMap::new(&source, &target, lo, map.components().to_vec())?;
    Ok(LeftApproximation { dual_counit, target, map, dual_iso })
}

/// Spot-checks the left approximation property on `g: C -> SE` by
/// dualizing to the right approximation problem for `C*`; returns the
/// homotopy certifying the dual factorization on `[-hi, -lo]`.
pub fn factor_through_left(
    bc: &BaseChange,
    left: &LeftApproximation,
    e: &ChainComplex,
    g: &ChainMap,
    lo: i64,
    hi: i64,
) -> Result<Option<Homotopy>> {
    let gd = g.dualize()?;
    let ed = e.dualize();
    factor_through_right(bc, &left.dual_counit, &ed, &gd, -hi, -lo)
}

/// Outcome of testing an endomorphism `f` of the source of `ε` against right
/// minimality.
#[derive(Clone, Debug)]
pub enum MinimalityVerdict {
    /// `ε f ~ ε` but `f` is not a homotopy equivalence: the source is
    /// minimal and `f` is singular modulo the maximal ideal in `degree`.
    Witness { factorization: Homotopy, degree: i64 },
    /// `f` is a homotopy equivalence, so it witnesses nothing.
    Equivalence(Equivalence),
    /// `ε f` is not homotopic to `ε`.
    NotFactoring,
    /// Neither an inverse nor a certificate of non-invertibility was found.
    Undecided,
}

impl MinimalityVerdict {
    pub fn is_witness(&self) -> bool {
        matches!(self, MinimalityVerdict::Witness { .. })
    }
}

/// Decides whether `f` witnesses that `ε` is not right minimal. Between
/// minimal complexes a homotopy equivalence is invertible degreewise, so a
/// component of deficient rank modulo the maximal ideal is a certificate.
pub fn minimality_witness(eps: &ChainMap, f: &ChainMap) -> Result<MinimalityVerdict> {
    let x = eps.source();
    let (lo, hi) = (eps.lo().max(f.lo()), eps.hi().min(f.hi()));
    if lo > hi {
        return Err(Error::Shape("maps share no degree".into()));
    }
    for n in lo..=hi {
        let (r, c) = (f.try_component(n)?.rows(), f.try_component(n)?.cols());
        if r != c || c != x.try_rank(n)? {
            return Err(Error::Shape(format!("f is not an endomorphism of the source in degree {n}")));
        }
    }
    let ef = f.then(eps)?;
    let Some(factorization) = find_homotopy_on(&ef, eps, lo, hi) else {
        return Ok(MinimalityVerdict::NotFactoring);
    };
    let fw = f.restrict(lo, hi)?;
    let minimal = (lo + 1..=hi).all(|n| x.try_d(n).is_ok_and(|d| d.is_minimal()));
    if minimal {
        if let Some(n) = (lo..=hi).find(|&n| {
            let m = fw.component(n);
            m.residue_rank() < m.rows()
        }) {
            return Ok(MinimalityVerdict::Witness { factorization, degree: n });
        }
    }
    Ok(match homotopy_inverse(&fw) {
        Some(e) => MinimalityVerdict::Equivalence(e),
        None => MinimalityVerdict::Undecided,
    })
}

/// `cone(ε_C)` and, when `pd_Q R = 1`, a homotopy equivalence with `Σ²C`.
#[derive(Clone, Debug)]
pub struct ConeOfCounit {
    pub counit: Counit,
    pub cone: Cone,
    pub shifted: ChainComplex,
    pub equivalence: Option<Equivalence>,
    /// Whether an equivalence was attempted (only for `pd_Q R = 1`).
    pub attempted: bool,
}

pub fn cone_of_counit(bc: &BaseChange, c: &ChainComplex, lo: i64, hi: i64) -> Result<ConeOfCounit> {
    let counit = bc.counit(c, lo - 3, hi + 3)?;
    let cone = cone_with_maps(&counit.map)?;
    let shifted = c.shift(2);
    let attempted = bc.pd() == 1;
    let equivalence =
        if attempted { find_equivalence(&cone.complex, &shifted, lo, hi, EQUIVALENCE_SEED) } else { None };
    Ok(ConeOfCounit { counit, cone, shifted, equivalence, attempted })
}

/// One step `B_i -> X_i` of a tower of approximations.
#[derive(Clone, Debug)]
pub struct TowerLevel {
    /// `X_0 = C`, `X_{i+1} = Σ^{-1} cone(B_i -> X_i)`.
    pub approximated: ChainComplex,
    pub tc: CompleteResolution,
    /// `ε: B_i -> X_i`.
    pub approximation: ChainMap,
    /// `B_i -> B_{i-1}` (or `B_0 -> C`).
    pub map: ChainMap,
}

impl TowerLevel {
    pub fn complex(&self) -> &ChainComplex {
        self.approximation.source()
    }
}

/// The tower `... -> B_2 -> B_1 -> B_0 -> C` with its checks.
#[derive(Clone, Debug)]
pub struct TriangleResolution {
    pub levels: Vec<TowerLevel>,
    /// Null-homotopies of consecutive composites `B_{i+1} -> B_i -> B_{i-1}`
    /// (`B_{-1} = C`).
    pub null_homotopies: Vec<Option<Homotopy>>,
    /// `B_i ≃ Σ^{-i} STC` when `pd_Q R = 1`.
    pub equivalences: Vec<Option<Equivalence>>,
    pub window: (i64, i64),
}

/// Iterates right approximations `depth` times; checks are made on
/// `[lo, hi]`, larger windows are used internally since each cone and
/// counit consumes a degree at each end.
pub fn triangle_resolution(
    bc: &BaseChange,
    c: &ChainComplex,
    depth: usize,
    lo: i64,
    hi: i64,
) -> Result<TriangleResolution> {
    let margin = 3 * (depth as i64 + 1);
    let mut x = c.extend_to(lo - margin, hi + margin)?;
    let mut levels: Vec<TowerLevel> = Vec::new();
    let mut back: Option<ChainMap> = None;
    for _ in 0..=depth {
        let (xlo, xhi) = x.window();
        let counit = bc.counit(&x, xlo + 1, xhi - 1)?;
        let eps = counit.map.clone();
        let map = match &back {
            Some(b) => eps.then(b)?,
            None => eps.clone(),
        };
        let cone = cone_with_maps(&eps)?;
        let b_complex = eps.source().clone();
        // Σ^{-1} of the projection cone -> Σ B is a map Σ^{-1} cone -> B
        let proj = cone.projection.shift(-1);
        let next = cone.complex.shift(-1);
        let (plo, phi) = proj.window();
        let b_w = b_complex.restrict(plo.max(b_complex.lo()), phi.min(b_complex.hi()))?;
        back = Some(proj.restrict(b_w.lo(), b_w.hi())?.retarget(&next.restrict(b_w.lo(), b_w.hi())?, &b_w)?);
        levels.push(TowerLevel { approximated: x.clone(), tc: counit.tc, approximation: eps, map });
        x = next;
    }
    let null_homotopies = levels
        .windows(2)
        .map(|w| {
            let comp = w[1].map.then(&w[0].map).ok()?;
            let z = ChainMap::zero(comp.source(), comp.target(), comp.lo(), comp.hi()).ok()?;
            find_homotopy_on(&comp, &z, lo, hi)
        })
        .collect();
    let stc = levels[0].complex().clone();
    let equivalences = levels
        .iter()
        .enumerate()
        .map(|(i, l)| {
            if bc.pd() != 1 {
                return None;
            }
            find_equivalence(l.complex(), &stc.shift(-(i as i64)), lo, hi, EQUIVALENCE_SEED)
        })
        .collect();
    Ok(TriangleResolution { levels, null_homotopies, equivalences, window: (lo, hi) })
}
