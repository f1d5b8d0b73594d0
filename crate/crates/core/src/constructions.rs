//! Constructions on complexes: cone, truncated cone, tensor product with a
//! bounded complex, the dual base-change identification, and exactness
//! checks.
//!
//! Sign conventions, in one place:
//!
//! | construction | convention |
//! |---|---|
//! | shift | `(Sigma^k C)_n = C_{n-k}`, `d = (-1)^k d^C` |
//! | dual | `(C*)_n = (C_{-n})*`, `d*(n) = d(1-n)^T` |
//! | cone of `f: F -> G` | `cone_n = G_n + F_{n-1}`, `d = [[d^G, f], [0, -d^F]]` |
//! | tensor `D (x) K` | `(D (x) K)_n = sum_i D_{n-i} (x) K_i`, blocks by ascending `i`, `D`-major basis; `d(a (x) b) = (-1)^i da (x) b + a (x) d^K b` |

use crate::complex::{ChainComplex, ChainMap, Tail};
use crate::error::{Error, Result};
use crate::linalg::{solve_right, syzygies, FreeMap, Solver};
use crate::ring::QuotientRing;

/// Mapping cone, with the inclusion of the target and the projection onto
/// the shifted source.
#[derive(Clone, Debug)]
pub struct Cone {
    pub complex: ChainComplex,
    pub inclusion: ChainMap,
    pub projection: ChainMap,
}

fn periodic_period(t: Tail) -> Option<usize> {
    match t {
        Tail::Periodic { period } => Some(period),
        _ => None,
    }
}

/// `cone(f)` on degrees `[lo+1, hi]` of the window of `f`.
pub fn cone(f: &ChainMap) -> Result<ChainComplex> {
    Ok(cone_with_maps(f)?.complex)
}

pub fn cone_with_maps(f: &ChainMap) -> Result<Cone> {
    let (flo, fhi) = f.window();
    let (src, tgt) = (f.source(), f.target());
    let ring = src.ring().clone();
    let lo = flo + 1;
    let hi = fhi;
    if lo > hi {
        return Err(Error::Shape("cone needs a map window of at least two degrees".into()));
    }
    let mut ranks = Vec::new();
    let mut diffs = Vec::new();
    for n in lo..=hi {
        ranks.push(tgt.try_rank(n)? + src.try_rank(n - 1)?);
        if n > lo {
            let dg = tgt.try_d(n)?;
            let df = src.try_d(n - 1)?;
            let zero = FreeMap::zero(&ring, df.rows(), dg.cols());
            diffs.push(FreeMap::blocks(&[vec![dg, f.try_component(n - 1)?], vec![zero, df.neg()]]));
        }
    }
    let zero_above = src.above() == Tail::Zero && tgt.above() == Tail::Zero && hi >= tgt.hi() && hi > src.hi();
    let zero_below = src.below() == Tail::Zero && tgt.below() == Tail::Zero && lo <= tgt.lo() && lo - 1 <= src.lo();
    let period = f.period().filter(|&p| {
        [src.above(), src.below(), tgt.above(), tgt.below()]
            .iter()
            .all(|t| periodic_period(*t).is_some_and(|q| p % q == 0))
            && (hi - lo) as usize >= p
    });
    let above = if zero_above { Tail::Zero } else { period.map_or(Tail::Opaque, |p| Tail::Periodic { period: p }) };
    let below = if zero_below { Tail::Zero } else { period.map_or(Tail::Opaque, |p| Tail::Periodic { period: p }) };
    let complex = ChainComplex::from_parts(&ring, lo, ranks, diffs, above, below)?;
    debug_assert!(complex.validate().valid);

    let mut inc = Vec::new();
    let mut proj = Vec::new();
    for n in lo..=hi {
        let (g, fr) = (tgt.try_rank(n)?, src.try_rank(n - 1)?);
        inc.push(FreeMap::identity(&ring, g).vstack(&FreeMap::zero(&ring, fr, g)));
        proj.push(FreeMap::zero(&ring, fr, g).hstack(&FreeMap::identity(&ring, fr)));
    }
    let tgt_w = tgt.extend_to(lo, hi)?;
    let shifted = src.shift(1);
    let inclusion = ChainMap::from_parts(&tgt_w, &complex, lo, inc)?;
    let projection = ChainMap::from_parts(&complex, &shifted, lo, proj)?;
    Ok(Cone { complex, inclusion, projection })
}

/// Truncated cone of a lift `f: F -> G` of a surjection `Y -> Z` between
/// resolutions (concentrated in degrees `>= 0`). Degree 1 is replaced by the
/// kernel `W` of `[d^G_1, f_0]: G_1 + F_0 -> G_0`, given by a free basis; the
/// result shifted by `-1` resolves `ker(Y -> Z)`.
#[derive(Clone, Debug)]
pub struct TruncatedCone {
    pub complex: ChainComplex,
    /// `W -> cone_1`, the chosen basis of the kernel.
    pub kernel_basis: FreeMap,
}

pub fn truncated_cone(f: &ChainMap) -> Result<TruncatedCone> {
    let (src, tgt) = (f.source(), f.target());
    let ring = src.ring().clone();
    let (_, fhi) = f.window();
    if f.lo() > 0 || fhi < 1 {
        return Err(Error::Shape("truncated cone needs map components in degrees 0 and 1".into()));
    }
    let cone_full = cone(&f.restrict(0, fhi)?)?;
    // cone_1 = G_1 + F_0 -> G_0
    let d1 = tgt.try_d(1)?.hstack(&f.try_component(0)?);
    let g0 = d1.rows();
    if g0 > 0 && solve_right(&d1, &FreeMap::identity(&ring, g0)).is_none() {
        return Err(Error::Precondition("f_0 together with d^G_1 does not map onto G_0".into()));
    }
    let w = syzygies(&d1);
    let expected = d1.cols() - g0;
    let w = if d1.cols() == 0 { FreeMap::zero(&ring, 0, 0) } else { w };
    if w.cols() != expected {
        return Err(Error::Precondition(format!(
            "kernel of the degree-1 map has {} generators, expected a free module of rank {expected}",
            w.cols()
        )));
    }
    let mut ranks = vec![w.cols()];
    let mut diffs = Vec::new();
    for n in 2..=cone_full.hi() {
        ranks.push(cone_full.rank(n));
        if n == 2 {
            let d2 = cone_full.d(2);
            let x = if w.cols() == 0 {
                FreeMap::zero(&ring, 0, d2.cols())
            } else {
                solve_right(&w, &d2).ok_or_else(|| Error::SolveFailed {
                    degree: 2,
                    context: "cone differential does not factor through the kernel".into(),
                })?
            };
            diffs.push(x);
        } else {
            diffs.push(cone_full.d(n));
        }
    }
    let above = if cone_full.above() == Tail::Zero { Tail::Zero } else { Tail::Opaque };
    let complex = ChainComplex::new(&ring, 1, ranks, diffs, above, Tail::Zero)?;
    Ok(TruncatedCone { complex, kernel_basis: w })
}

fn kron(a: &FreeMap, b: &FreeMap) -> FreeMap {
    let ring = a.ring();
    let mut m = FreeMap::zero(ring, a.rows() * b.rows(), a.cols() * b.cols());
    for ar in 0..a.rows() {
        for ac in 0..a.cols() {
            let x = a.entry(ar, ac);
            if x.is_zero() {
                continue;
            }
            for br in 0..b.rows() {
                for bc in 0..b.cols() {
                    let y = b.entry(br, bc);
                    if !y.is_zero() {
                        m.set(ar * b.rows() + br, ac * b.cols() + bc, ring.mul(x, y));
                    }
                }
            }
        }
    }
    m
}

/// `D (x) K` for bounded `K`, on the degrees where every block of `D` is
/// known inside its window.
pub fn tensor_complexes(d: &ChainComplex, k: &ChainComplex) -> Result<ChainComplex> {
    let (klo, khi) = k.support().ok_or_else(|| Error::Precondition("second factor must be bounded".into()))?;
    let ring = d.ring().clone();
    if k.ring() != &ring {
        return Err(Error::RingMismatch("tensor factors over different rings".into()));
    }
    if klo > khi {
        return Ok(ChainComplex::zero(&ring));
    }
    // cheap tails are unrolled so the product window loses nothing
    let width = khi - klo;
    let cheap = |t: Tail| matches!(t, Tail::Zero | Tail::Periodic { .. });
    let (dlo, dhi) = d.window();
    let d = &d.extend_to(
        if cheap(d.below()) { dlo - width } else { dlo },
        if cheap(d.above()) { dhi + width } else { dhi },
    )?;
    let (dlo, dhi) = d.window();
    let lo = dlo + khi;
    let hi = dhi + klo;
    if lo > hi {
        return Err(Error::Shape("window too small for the tensor product".into()));
    }
    let block_rank = |n: i64, i: i64| -> Result<usize> { Ok(d.try_rank(n - i)? * k.rank(i)) };
    let mut ranks = Vec::new();
    let mut diffs = Vec::new();
    for n in lo..=hi {
        let mut total = 0;
        for i in klo..=khi {
            total += block_rank(n, i)?;
        }
        ranks.push(total);
        if n == lo {
            continue;
        }
        // rows: blocks of degree n-1, columns: blocks of degree n
        let mut grid = Vec::new();
        for ri in klo..=khi {
            let mut row = Vec::new();
            for ci in klo..=khi {
                let (r, c) = (block_rank(n - 1, ri)?, block_rank(n, ci)?);
                let blk = if ri == ci {
                    let dd = d.try_d(n - ci)?;
                    let sign = if ci.rem_euclid(2) == 1 { -1 } else { 1 };
                    kron(&dd, &FreeMap::identity(&ring, k.rank(ci))).scale_sign(sign)
                } else if ri == ci - 1 {
                    kron(&FreeMap::identity(&ring, d.try_rank(n - ci)?), &k.d(ci))
                } else {
                    FreeMap::zero(&ring, r, c)
                };
                row.push(blk);
            }
            grid.push(row);
        }
        diffs.push(FreeMap::blocks(&grid));
    }
    let tail = |t: Tail| match t {
        Tail::Zero => Tail::Zero,
        Tail::Periodic { period } if (hi - lo) as usize >= period => t,
        _ => Tail::Opaque,
    };
    let c = ChainComplex::from_parts(&ring, lo, ranks, diffs, tail(d.above()), tail(d.below()))?;
    let rep = c.validate();
    if let Some(n) = rep.failure {
        return Err(Error::NotAComplex(n));
    }
    Ok(c)
}

/// Which side of a total acyclicity check failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AcyclicityFailure {
    /// `H_n(C) != 0`.
    Complex(i64),
    /// `H_n(C*) != 0`.
    Dual(i64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AcyclicityReport {
    pub window: (i64, i64),
    pub failure: Option<AcyclicityFailure>,
}

impl AcyclicityReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// First degree in `[lo, hi]` where `ker d(n) != im d(n+1)`, using tails to
/// reach `d(lo)` and `d(hi+1)`; degrees whose neighbours are unknown are
/// skipped.
pub fn first_inexact_degree(c: &ChainComplex, lo: i64, hi: i64) -> Option<i64> {
    for n in lo..=hi {
        let (Ok(dn), Ok(dn1)) = (c.try_d(n), c.try_d(n + 1)) else { continue };
        if dn.cols() == 0 {
            continue;
        }
        let ker = syzygies(&dn);
        if ker.cols() == 0 {
            continue;
        }
        if dn1.cols() == 0 {
            return Some(n);
        }
        let solver = Solver::cached(&dn1);
        if !ker.columns().iter().all(|v| solver.contains(v)) {
            return Some(n);
        }
    }
    None
}

/// Exactness of `C` and `C*` on `[lo, hi]` (of `C`, mirrored for `C*`).
pub fn total_acyclicity_check(c: &ChainComplex, lo: i64, hi: i64) -> AcyclicityReport {
    let failure = first_inexact_degree(c, lo, hi)
        .map(AcyclicityFailure::Complex)
        .or_else(|| first_inexact_degree(&c.dualize(), -hi, -lo).map(AcyclicityFailure::Dual));
    AcyclicityReport { window: (lo, hi), failure }
}

/// `d^2 = 0` report.
pub fn validate_complex(c: &ChainComplex) -> crate::complex::ValidationReport {
    c.validate()
}

/// `Hom_Q(C, Q) (x) R` and `Hom_R(C (x) R, R)` with the canonical maps between
/// them (identity matrices on the standard bases).
#[derive(Clone, Debug)]
pub struct DualBaseChange {
    pub dual_then_base: ChainComplex,
    pub base_then_dual: ChainComplex,
    pub alpha: ChainMap,
    pub beta: ChainMap,
}

impl DualBaseChange {
    /// `alpha o beta` and `beta o alpha` are identities entrywise.
    pub fn composites_are_identities(&self) -> bool {
        let ab = self.beta.then(&self.alpha);
        let ba = self.alpha.then(&self.beta);
        match (ab, ba) {
            (Ok(ab), Ok(ba)) => {
                ab.components().iter().all(FreeMap::is_identity) && ba.components().iter().all(FreeMap::is_identity)
            }
            _ => false,
        }
    }
}

pub fn dual_base_change_iso(c: &ChainComplex, target: &QuotientRing) -> Result<DualBaseChange> {
    let left = c.dualize().base_change(target)?;
    let right = c.base_change(target)?.dualize();
    let (lo, hi) = left.window();
    if right.window() != (lo, hi) {
        return Err(Error::Shape("dual windows disagree".into()));
    }
    for n in lo + 1..=hi {
        if left.d(n) != right.d(n) {
            return Err(Error::Shape(format!("dual differentials disagree in degree {n}")));
        }
    }
    let comps = |_: ()| (lo..=hi).map(|n| FreeMap::identity(target, left.rank(n))).collect::<Vec<_>>();
    let alpha = ChainMap::new(&left, &right, lo, comps(()))?;
    let beta = ChainMap::new(&right, &left, lo, comps(()))?;
    Ok(DualBaseChange { dual_then_base: left, base_then_dual: right, alpha, beta })
}
