//! Minimal free resolutions, comparison lifts, extension of chain maps
//! across degrees, periodicity detection, and complete resolutions.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use crate::complex::{ChainComplex, ChainMap, ModulePresentation, Tail};
use crate::constructions::first_inexact_degree;
use crate::error::{Error, Result};
use crate::linalg::{irredundant_columns, solve_left, solve_right, syzygies, FreeMap};
use crate::ring::{QuotientRing, RingClass};

/// Longest resolution computed while looking for periodicity.
pub const MAX_RESOLUTION_LENGTH: usize = 20;

/// `M` over `R` regarded over `Q`: relations lifted, plus `g_i e_j` for the
/// generators `g_i` of `ker(Q -> R)`.
pub fn restrict_scalars(m: &ModulePresentation, q: &QuotientRing) -> Result<ModulePresentation> {
    let r = m.ring();
    let extra = r.kernel_from(q)?;
    let g = m.generator_rank();
    let mut cols: Vec<Vec<_>> =
        m.relations().columns().iter().map(|c| c.iter().map(|p| q.reduce(p)).collect()).collect();
    for e in &extra {
        for j in 0..g {
            let mut c = vec![q.zero(); g];
            c[j] = e.clone();
            cols.push(c);
        }
    }
    Ok(ModulePresentation::new(FreeMap::from_columns(q, g, cols)?))
}

/// A presentation with unit entries struck and redundant relations removed,
/// with the induced isomorphism on generators.
#[derive(Clone, Debug)]
pub struct MinimalPresentation {
    pub presentation: ModulePresentation,
    /// Old generators expressed in the new ones (`new x old`).
    pub to_min: FreeMap,
    /// New generators as old ones (`old x new`).
    pub from_min: FreeMap,
}

/// Repeatedly pivots on a nonzero constant entry (scanning rows, then
/// columns), deleting its row and column; then drops relations lying in the
/// span of the others.
pub fn minimal_presentation(m: &ModulePresentation) -> MinimalPresentation {
    let ring = m.ring().clone();
    let f = *ring.field();
    let g = m.generator_rank();
    let mut rel = m.relations().clone();
    let mut gens: Vec<usize> = (0..g).collect(); // surviving original generator indices
    let mut to_min = FreeMap::identity(&ring, g);
    loop {
        let mut pivot = None;
        'scan: for i in 0..rel.rows() {
            for j in 0..rel.cols() {
                if ring.is_constant_unit(rel.entry(i, j)) {
                    pivot = Some((i, j));
                    break 'scan;
                }
            }
        }
        let Some((i, j)) = pivot else { break };
        let c = rel.entry(i, j).as_constant().unwrap();
        let cinv = ring.constant(f.to_signed(f.inv(c)));
        let pcol = rel.column(j).to_vec();
        // clear row i in the other columns
        for l in 0..rel.cols() {
            if l == j || rel.entry(i, l).is_zero() {
                continue;
            }
            let factor = ring.mul(rel.entry(i, l), &cinv);
            for k in 0..rel.rows() {
                let v = ring.sub(rel.entry(k, l), &ring.mul(&factor, &pcol[k]));
                rel.set(k, l, v);
            }
        }
        // e_i = -c^{-1} sum_{k != i} a_kj e_k in the module
        let keep: Vec<usize> = (0..rel.rows()).filter(|&k| k != i).collect();
        let mut step = FreeMap::zero(&ring, keep.len(), rel.rows());
        for (nk, &k) in keep.iter().enumerate() {
            step.set(nk, k, ring.one());
            step.set(nk, i, ring.neg(&ring.mul(&cinv, &pcol[k])));
        }
        to_min = step.mul(&to_min);
        let cols: Vec<usize> = (0..rel.cols()).filter(|&l| l != j).collect();
        rel = rel.select_columns(&cols).select_rows(&keep);
        gens.remove(i);
    }
    let cols = irredundant_columns(rel.columns().to_vec(), rel.rows(), &ring);
    let rel = FreeMap::from_columns(&ring, gens.len(), cols).unwrap();
    let mut from_min = FreeMap::zero(&ring, g, gens.len());
    for (nk, &k) in gens.iter().enumerate() {
        from_min.set(k, nk, ring.one());
    }
    MinimalPresentation { presentation: ModulePresentation::new(rel), to_min, from_min }
}

/// Minimal free resolution `F` with `F_0 = ` generators of the minimal
/// presentation. The complex continues by syzygies above its window unless
/// the resolution terminated, in which case `pd` is set.
#[derive(Clone, Debug)]
pub struct Resolution {
    pub complex: ChainComplex,
    pub module: ModulePresentation,
    pub minimal: MinimalPresentation,
    pub pd: Option<usize>,
}

impl Resolution {
    pub fn ring(&self) -> &QuotientRing {
        self.complex.ring()
    }

    /// Ranks `F_0, ..., F_len`.
    pub fn betti(&self, len: usize) -> Result<Vec<usize>> {
        (0..=len as i64).map(|n| self.complex.try_rank(n)).collect()
    }
}

pub fn minimal_free_resolution(m: &ModulePresentation, length: usize) -> Result<Resolution> {
    let ring = m.ring().clone();
    let minimal = minimal_presentation(m);
    let rel = minimal.presentation.relations().clone();
    let g = rel.rows();
    let mut ranks = vec![g];
    let mut diffs = Vec::new();
    let mut pd = None;
    if g == 0 || rel.cols() == 0 {
        pd = Some(0);
    } else {
        ranks.push(rel.cols());
        diffs.push(rel.clone());
        let mut d = rel;
        for n in 2..=length.max(1) {
            let s = syzygies(&d);
            if s.cols() == 0 {
                pd = Some(n - 1);
                break;
            }
            ranks.push(s.cols());
            diffs.push(s.clone());
            d = s;
        }
        if pd.is_none() && length <= 1 && syzygies(&d).cols() == 0 {
            pd = Some(1);
        }
    }
    let above = if pd.is_some() { Tail::Zero } else { Tail::Syzygy { sign: 1 } };
    let complex = ChainComplex::from_parts(&ring, 0, ranks, diffs, above, Tail::Zero)?
        .with_augmentation(minimal.presentation.clone());
    Ok(Resolution { complex, module: m.clone(), minimal, pd })
}

/// Projective dimension if the resolution terminates within `limit` steps.
pub fn projective_dimension(m: &ModulePresentation, limit: usize) -> Result<Option<usize>> {
    Ok(minimal_free_resolution(m, limit)?.pd)
}

/// Lifts `mu0: F_0 -> G_0` to `mu_n` for `n` in `[0, hi]` with
/// `d^G_n mu_n = mu_{n-1} d^F_n`, solving `d^G_n X = mu_{n-1} d^F_n`.
/// `mu0` must induce a map `coker d^F_1 -> coker d^G_1` and `G` must be exact
/// in degrees `1..hi-1`.
pub fn lift_through(f: &ChainComplex, g: &ChainComplex, mu0: &FreeMap, hi: i64) -> Result<ChainMap> {
    let ring = f.ring();
    let mut comps = vec![mu0.clone()];
    for n in 1..=hi {
        let rhs = comps[(n - 1) as usize].mul(&f.try_d(n)?);
        let dg = g.try_d(n)?;
        let x = if rhs.cols() == 0 {
            FreeMap::zero(ring, dg.cols(), 0)
        } else if rhs.is_zero() {
            FreeMap::zero(ring, dg.cols(), rhs.cols())
        } else {
            solve_right(&dg, &rhs).ok_or_else(|| Error::SolveFailed {
                degree: n,
                context: "composite does not lie in the image of the next differential".into(),
            })?
        };
        comps.push(x);
    }
    let fw = f.extend_to(0, hi)?;
    let gw = g.extend_to(0, hi)?;
    ChainMap::from_parts(&fw, &gw, 0, comps)
}

/// Extends a chain map to `[lo, hi]`: downward by solving
/// `X d^C_n = d^D_n f_n` (source totally acyclic), upward by solving
/// `d^D_{n+1} X = f_n d^C_{n+1}` (target exact).
pub fn extend_morphism(f: &ChainMap, lo: i64, hi: i64) -> Result<ChainMap> {
    let (flo, fhi) = f.window();
    let src = f.source().extend_to(lo, hi)?;
    let tgt = f.target().extend_to(lo, hi)?;
    let ring = src.ring().clone();
    let mut comps: std::collections::VecDeque<FreeMap> = f.components().iter().cloned().collect();
    let mut cur_lo = flo;
    while cur_lo > lo {
        let n = cur_lo;
        let a = src.try_d(n)?;
        let b = tgt.try_d(n)?.mul(&comps[0]);
        let x = solve_zero_aware_left(&a, &b, &ring).ok_or_else(|| Error::SolveFailed {
            degree: n - 1,
            context: "downward extension; the source is not totally acyclic here".into(),
        })?;
        comps.push_front(x);
        cur_lo -= 1;
    }
    let mut cur_hi = fhi;
    while cur_hi < hi {
        let n = cur_hi;
        let a = tgt.try_d(n + 1)?;
        let b = comps[comps.len() - 1].mul(&src.try_d(n + 1)?);
        let x = solve_zero_aware_right(&a, &b, &ring).ok_or_else(|| Error::SolveFailed {
            degree: n + 1,
            context: "upward extension; the target is not exact here".into(),
        })?;
        comps.push_back(x);
        cur_hi += 1;
    }
    let out = ChainMap::from_parts(&src, &tgt, cur_lo.min(flo), comps.into_iter().collect())?;
    let out = if out.lo() < lo || out.hi() > hi { out.restrict(lo.max(out.lo()), hi.min(out.hi()))? } else { out };
    if let Some(n) = out.commutation_failure() {
        return Err(Error::NotAChainMap(n));
    }
    Ok(out)
}

pub(crate) fn solve_zero_aware_right(a: &FreeMap, b: &FreeMap, ring: &QuotientRing) -> Option<FreeMap> {
    if b.is_zero() || a.cols() == 0 {
        return b.is_zero().then(|| FreeMap::zero(ring, a.cols(), b.cols()));
    }
    solve_right(a, b)
}

pub(crate) fn solve_zero_aware_left(a: &FreeMap, b: &FreeMap, ring: &QuotientRing) -> Option<FreeMap> {
    if b.is_zero() || a.rows() == 0 {
        return b.is_zero().then(|| FreeMap::zero(ring, b.rows(), a.rows()));
    }
    solve_left(a, b)
}

/// Smallest `p <= 2` and onset `d >= lo+1` with `d(n+p) = d(n)` for all
/// `n >= d`, found by bit-exact comparison; `None` if the complex terminates
/// or no repetition shows up below `MAX_RESOLUTION_LENGTH`.
pub fn detect_periodicity(f: &ChainComplex) -> Option<(usize, i64)> {
    let lo = f.lo();
    if !matches!(f.above(), Tail::Syzygy { .. } | Tail::Periodic { .. }) && f.hi() - lo < 2 {
        return None;
    }
    let top = lo + MAX_RESOLUTION_LENGTH as i64;
    let mut prev: Vec<FreeMap> = Vec::new();
    for m in lo + 1..=top {
        let Ok(d) = f.try_d(m) else { return None };
        if d.cols() == 0 && d.rows() == 0 {
            return None;
        }
        if d.cols() == 0 && f.above() == Tail::Zero && m > f.hi() {
            return None;
        }
        for p in 1..=2usize {
            if prev.len() >= p && prev[prev.len() - p] == d && m - p as i64 > lo {
                return Some((p, m - p as i64));
            }
        }
        prev.push(d);
    }
    None
}

/// A totally acyclic `U` with `rho: U -> F`, `rho_n` the identity for
/// `n >= agreement`.
#[derive(Clone, Debug)]
pub struct CompleteResolution {
    pub complex: ChainComplex,
    pub resolution: Resolution,
    pub agreement: i64,
    /// `rho_n` for `n` in `[0, agreement]`; identity above, zero below 0.
    rho_low: Vec<FreeMap>,
    pub period: Option<usize>,
    pub method: CompleteMethod,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CompleteMethod {
    /// The module has finite projective dimension; `U = 0`.
    FinitePd,
    /// Periodic continuation of an eventually periodic resolution.
    Periodic,
    /// Splice of a high syzygy with the resolution of its dual.
    Splice,
    /// `D (x) K` for a totally acyclic `D` over `Q` and the resolution `K`
    /// of `R`.
    Tensor,
}

impl CompleteResolution {
    /// Assembles a complete resolution from its parts; `rho_low[n]` is
    /// `rho_n` for `n` in `[0, agreement]`.
    pub fn from_parts(
        complex: ChainComplex,
        resolution: Resolution,
        agreement: i64,
        rho_low: Vec<FreeMap>,
        method: CompleteMethod,
    ) -> CompleteResolution {
        CompleteResolution { complex, resolution, agreement, rho_low, period: None, method }
    }

    pub fn is_zero(&self) -> bool {
        self.method == CompleteMethod::FinitePd
    }

    pub fn module(&self) -> &ModulePresentation {
        &self.resolution.module
    }

    pub fn rho(&self, n: i64) -> FreeMap {
        let ring = self.complex.ring();
        if self.is_zero() {
            return FreeMap::zero(ring, self.resolution.complex.rank(n), 0);
        }
        if n < 0 {
            return FreeMap::zero(ring, 0, self.complex.rank(n));
        }
        if n >= self.agreement {
            return FreeMap::identity(ring, self.complex.rank(n));
        }
        self.rho_low[n as usize].clone()
    }

    /// `rho` as a chain map on `[lo, hi]`.
    pub fn rho_map(&self, lo: i64, hi: i64) -> Result<ChainMap> {
        let u = self.complex.extend_to(lo, hi)?;
        let f = self.resolution.complex.extend_to(lo, hi)?;
        let comps = (lo..=hi).map(|n| self.rho(n)).collect();
        ChainMap::from_parts(&u, &f, lo, comps)
    }
}

fn finite_pd(resolution: Resolution) -> CompleteResolution {
    let ring = resolution.ring().clone();
    CompleteResolution {
        complex: ChainComplex::zero(&ring),
        resolution,
        agreement: 0,
        rho_low: Vec::new(),
        period: None,
        method: CompleteMethod::FinitePd,
    }
}

/// Fills `rho_n` for `n` from `agreement - 1` down to 0 by left solves.
fn rho_below(u: &ChainComplex, f: &ChainComplex, agreement: i64) -> Result<Vec<FreeMap>> {
    let ring = u.ring().clone();
    let mut rho: Vec<FreeMap> = Vec::new();
    let mut upper = FreeMap::identity(&ring, u.try_rank(agreement)?);
    let mut out = vec![upper.clone()];
    for n in (0..agreement).rev() {
        // rho_n d^U_{n+1} = d^F_{n+1} rho_{n+1}
        let a = u.try_d(n + 1)?;
        let b = f.try_d(n + 1)?.mul(&upper);
        let x = solve_zero_aware_left(&a, &b, &ring).ok_or_else(|| {
            Error::CompleteResolution(format!(
                "comparison map to the resolution fails in degree {n}; the ring is not Gorenstein or the syzygy is not deep enough"
            ))
        })?;
        out.push(x.clone());
        upper = x;
    }
    out.reverse();
    rho.extend(out);
    Ok(rho)
}

/// Complete resolution of `M` over its ring. Hypersurfaces use the periodic
/// continuation of the minimal resolution; Artinian rings and complete
/// intersections use the splice at syzygy depth `nvars + 1`. A module of
/// finite projective dimension gives the zero complex.
pub fn complete_resolution(m: &ModulePresentation) -> Result<CompleteResolution> {
    let ring = m.ring().clone();
    let class = ring.class();
    let depth = ring.nvars() + 1;
    let probe = minimal_free_resolution(m, depth + 1)?;
    if probe.pd.is_some() {
        return Ok(finite_pd(probe));
    }
    match class {
        RingClass::Regular => {
            // regular rings have finite global dimension
            Err(Error::CompleteResolution("resolution over a regular ring did not terminate".into()))
        }
        RingClass::Hypersurface => match periodic_path(&probe)? {
            Some(cr) => Ok(cr),
            None => splice_path(probe, depth),
        },
        RingClass::Artinian | RingClass::CompleteIntersection { .. } => splice_path(probe, depth),
        RingClass::Other => Err(Error::UnsupportedRing(format!(
            "{} is neither a hypersurface, an Artinian ring nor a complete intersection",
            ring.describe()
        ))),
    }
}

/// Complete resolution by a prescribed method: `Periodic` fails with an
/// error when no periodicity shows up, `Splice` skips the ring
/// classification (the exactness checks still guard the result).
pub fn complete_resolution_with(m: &ModulePresentation, method: CompleteMethod) -> Result<CompleteResolution> {
    let depth = m.ring().nvars() + 1;
    let probe = minimal_free_resolution(m, depth + 1)?;
    if probe.pd.is_some() {
        return Ok(finite_pd(probe));
    }
    match method {
        CompleteMethod::Periodic => periodic_path(&probe)?
            .ok_or_else(|| Error::CompleteResolution("no periodicity within the resolution length".into())),
        CompleteMethod::Splice => splice_path(probe, depth),
        CompleteMethod::FinitePd | CompleteMethod::Tensor => {
            Err(Error::Precondition(format!("{method:?} is not a method that can be requested")))
        }
    }
}

fn periodic_path(res: &Resolution) -> Result<Option<CompleteResolution>> {
    let f = &res.complex;
    let Some((p, d)) = detect_periodicity(f) else { return Ok(None) };
    let a = d - 1;
    let ring = f.ring();
    let ranks: Vec<usize> = (a..=a + p as i64).map(|n| f.rank(n)).collect();
    let diffs: Vec<FreeMap> = (a + 1..=a + p as i64).map(|n| f.d(n)).collect();
    let tail = Tail::Periodic { period: p };
    let u = ChainComplex::from_parts(ring, a, ranks, diffs, tail, tail)?;
    if !u.validate().valid {
        return Ok(None);
    }
    let rho_low = rho_below(&u, f, a)?;
    Ok(Some(CompleteResolution {
        complex: u,
        resolution: res.clone(),
        agreement: a,
        rho_low,
        period: Some(p),
        method: CompleteMethod::Periodic,
    }))
}

fn splice_path(res: Resolution, depth: usize) -> Result<CompleteResolution> {
    let f = &res.complex;
    let ring = f.ring().clone();
    let s = depth as i64;
    let u = ChainComplex::from_parts(
        &ring,
        s,
        vec![f.try_rank(s)?, f.try_rank(s + 1)?],
        vec![f.try_d(s + 1)?],
        Tail::Syzygy { sign: 1 },
        Tail::Cosyzygy { sign: 1 },
    )?;
    let check_lo = s - 3;
    if let Some(n) = first_inexact_degree(&u, check_lo, s + 1) {
        return Err(Error::CompleteResolution(format!(
            "spliced complex is not exact in degree {n}; the ring is not Gorenstein or the syzygy is not deep enough"
        )));
    }
    if let Some(n) = first_inexact_degree(&u.dualize(), -s - 1, -check_lo) {
        return Err(Error::CompleteResolution(format!("dual of the spliced complex is not exact in degree {n}")));
    }
    let rho_low = rho_below(&u, f, s)?;
    Ok(CompleteResolution {
        complex: u,
        resolution: res,
        agreement: s,
        rho_low,
        period: None,
        method: CompleteMethod::Splice,
    })
}

/// `(Omega^d M, d)` with `d = nvars + 1`, presented as `coker d(d+1)` of the
/// minimal resolution.
pub fn mcm_syzygy(m: &ModulePresentation) -> Result<(ModulePresentation, usize)> {
    let d = m.ring().nvars() + 1;
    let res = minimal_free_resolution(m, d + 1)?;
    let f = &res.complex;
    let ring = m.ring();
    let rank = f.try_rank(d as i64)?;
    let rel = if rank == 0 { FreeMap::zero(ring, 0, 0) } else { f.try_d(d as i64 + 1)? };
    Ok((ModulePresentation::new(rel), d))
}

type KCache = Mutex<HashMap<(u64, u64), Resolution>>;

/// Minimal resolution `K` of `R` over `Q`, computed once per ring pair;
/// fails if `pd_Q R` is infinite.
pub fn ring_resolution(q: &QuotientRing, r: &QuotientRing) -> Result<Resolution> {
    static CACHE: OnceLock<KCache> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let key = (q.id(), r.id());
    if let Some(k) = cache.lock().unwrap().get(&key) {
        return Ok(k.clone());
    }
    let extra = r.kernel_from(q)?;
    let rel = FreeMap::from_columns(q, 1, extra.into_iter().map(|p| vec![p]).collect())?;
    let k = minimal_free_resolution(&ModulePresentation::new(rel), MAX_RESOLUTION_LENGTH)?;
    if k.pd.is_none() {
        return Err(Error::Precondition(format!(
            "{} has infinite projective dimension over {}",
            r.describe(),
            q.describe()
        )));
    }
    cache.lock().unwrap().insert(key, k.clone());
    Ok(k)
}

/// `pd_Q R`.
pub fn ring_pd(q: &QuotientRing, r: &QuotientRing) -> Result<usize> {
    Ok(ring_resolution(q, r)?.pd.unwrap())
}
