//! Homotopies between chain maps and homotopy equivalences.
//!
//! The search for a null-homotopy of `h = f - g` solves one small system at
//! the lowest degree `t` of the window, `h_t = s_{t-1} d_t + d'_{t+1} s_t`,
//! and then extends upward with `d'_{n+1} s_n = h_n - s_{n-1} d_n`. Over an
//! exact target each upward step is solvable whatever the pivot solution
//! was, so a failure is decisive. If the target is not exact the search
//! falls back to solving all degrees of the window at once.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::complex::{ChainComplex, ChainMap, Homotopy};
use crate::error::Result;
use crate::linalg::{FreeMap, LinearSystem, Unknown};
use crate::resolution::{extend_morphism, solve_zero_aware_right};

/// Largest number of scalar unknowns attempted in the all-degrees fallback.
const GLOBAL_SOLVE_LIMIT: usize = 600;

fn effective_window(src: &ChainComplex, tgt: &ChainComplex, lo: i64, hi: i64) -> (i64, i64) {
    let lo = if src.try_d(lo).is_ok() { lo } else { lo + 1 };
    let hi = if tgt.try_d(hi + 1).is_ok() { hi } else { hi - 1 };
    (lo, hi)
}

/// Homotopy `f ~ g` on the common window of `f` and `g`, trimmed to the
/// degrees where the needed differentials are known.
pub fn find_homotopy(f: &ChainMap, g: &ChainMap) -> Option<Homotopy> {
    let lo = f.lo().max(g.lo());
    let hi = f.hi().min(g.hi());
    find_homotopy_on(f, g, lo, hi)
}

pub fn find_homotopy_on(f: &ChainMap, g: &ChainMap, lo: i64, hi: i64) -> Option<Homotopy> {
    let src = f.source();
    let tgt = f.target();
    let (lo, hi) = effective_window(src, tgt, lo, hi);
    if lo > hi {
        return None;
    }
    let h: Vec<FreeMap> =
        (lo..=hi).map(|n| Some(f.try_component(n).ok()?.minus(&g.try_component(n).ok()?))).collect::<Option<_>>()?;
    if h.iter().all(FreeMap::is_zero) {
        return Homotopy::zero(src, tgt, lo, hi).ok();
    }
    let out = pivot_homotopy(src, tgt, &h, lo, hi).or_else(|| global_homotopy(src, tgt, &h, lo, hi))?;
    debug_assert!(out.certifies(f, g));
    Some(out)
}

fn pivot_homotopy(src: &ChainComplex, tgt: &ChainComplex, h: &[FreeMap], lo: i64, hi: i64) -> Option<Homotopy> {
    let ring = src.ring();
    let t = lo;
    let r = |c: &ChainComplex, n: i64| c.try_rank(n).ok();
    let mut sys = LinearSystem::new(
        ring,
        vec![Unknown { rows: r(tgt, t)?, cols: r(src, t - 1)? }, Unknown { rows: r(tgt, t + 1)?, cols: r(src, t)? }],
    );
    let (st, tt) = (r(src, t)?, r(tgt, t)?);
    sys.equation(
        tt,
        st,
        vec![
            (FreeMap::identity(ring, tt), 0, src.try_d(t).ok()?),
            (tgt.try_d(t + 1).ok()?, 1, FreeMap::identity(ring, st)),
        ],
    );
    let sol = sys.solve(&[h[0].clone()])?;
    let mut comps = sol;
    for n in t + 1..=hi {
        let rhs = h[(n - lo) as usize].minus(&comps[comps.len() - 1].mul(&src.try_d(n).ok()?));
        let x = solve_zero_aware_right(&tgt.try_d(n + 1).ok()?, &rhs, ring)?;
        comps.push(x);
    }
    Some(Homotopy::new(lo, comps))
}

fn global_homotopy(src: &ChainComplex, tgt: &ChainComplex, h: &[FreeMap], lo: i64, hi: i64) -> Option<Homotopy> {
    let ring = src.ring();
    let unknowns: Vec<Unknown> = (lo - 1..=hi)
        .map(|n| Some(Unknown { rows: tgt.try_rank(n + 1).ok()?, cols: src.try_rank(n).ok()? }))
        .collect::<Option<_>>()?;
    let size: usize = unknowns.iter().map(|u| u.rows * u.cols).sum();
    if size > GLOBAL_SOLVE_LIMIT {
        return None;
    }
    let mut sys = LinearSystem::new(ring, unknowns);
    for n in lo..=hi {
        let (sn, tn) = (src.try_rank(n).ok()?, tgt.try_rank(n).ok()?);
        let k = (n - lo) as usize;
        sys.equation(
            tn,
            sn,
            vec![
                (FreeMap::identity(ring, tn), k, src.try_d(n).ok()?),
                (tgt.try_d(n + 1).ok()?, k + 1, FreeMap::identity(ring, sn)),
            ],
        );
    }
    let sol = sys.solve(h)?;
    Some(Homotopy::new(lo, sol))
}

/// Homotopy equivalence data: `backward o forward ~ id` and
/// `forward o backward ~ id`.
#[derive(Clone, Debug)]
pub struct Equivalence {
    pub forward: ChainMap,
    pub backward: ChainMap,
    /// `backward o forward ~ id_source`.
    pub source_homotopy: Homotopy,
    /// `forward o backward ~ id_target`.
    pub target_homotopy: Homotopy,
}

impl Equivalence {
    /// Re-checks both homotopies.
    pub fn verify(&self) -> bool {
        let (Ok(bf), Ok(fb)) = (self.forward.then(&self.backward), self.backward.then(&self.forward)) else {
            return false;
        };
        let (slo, shi) = self.source_homotopy.window();
        let (tlo, thi) = self.target_homotopy.window();
        let (Ok(ids), Ok(idt)) =
            (ChainMap::identity(self.forward.source(), slo, shi), ChainMap::identity(self.forward.target(), tlo, thi))
        else {
            return false;
        };
        self.source_homotopy.certifies(&bf, &ids) && self.target_homotopy.certifies(&fb, &idt)
    }

    pub fn window(&self) -> (i64, i64) {
        let (a, b) = self.source_homotopy.window();
        let (c, d) = self.target_homotopy.window();
        (a.max(c), b.min(d))
    }
}

/// Decides whether `phi: U -> V` is a homotopy equivalence on its window and
/// returns an inverse with both homotopies.
///
/// At a pivot degree `t` it solves, for `Psi_t`, `Psi_{t+1}`, `s_{t-1}`,
/// `s_t`: `phi_t Psi_t - s_{t-1} d^V_t - d^V_{t+1} s_t = 1` and
/// `Psi_t d^V_{t+1} - d^U_{t+1} Psi_{t+1} = 0`; then extends `Psi` to the
/// window and checks both composites with [`find_homotopy_on`]. The pivot is
/// the degree with the smallest system; the lowest degree is the fallback,
/// since it needs no downward extension.
pub fn homotopy_inverse(phi: &ChainMap) -> Option<Equivalence> {
    let (u, v) = (phi.source(), phi.target());
    let (lo, hi) = phi.window();
    let (lo, hi) = effective_window(v, v, lo, hi);
    let (lo, hi) = (lo.max(effective_window(u, u, lo, hi).0), hi.min(effective_window(u, u, lo, hi).1));
    if lo >= hi {
        return None;
    }
    let cost = |t: i64| -> Option<usize> {
        let r = |c: &ChainComplex, n: i64| c.try_rank(n).ok();
        let (ut, vt, ut1, vt1, vtm) = (r(u, t)?, r(v, t)?, r(u, t + 1)?, r(v, t + 1)?, r(v, t - 1)?);
        Some(ut * vt + ut1 * vt1 + vt * vtm + vt1 * vt)
    };
    let best = (lo..hi).filter_map(|t| Some((cost(t)?, t))).min().map(|(_, t)| t)?;
    if best != lo {
        if let Some(e) = inverse_with_pivot(phi, best, lo, hi) {
            return Some(e);
        }
    }
    inverse_with_pivot(phi, lo, lo, hi)
}

fn inverse_with_pivot(phi: &ChainMap, t: i64, lo: i64, hi: i64) -> Option<Equivalence> {
    let (u, v) = (phi.source(), phi.target());
    let ring = u.ring();
    let r = |c: &ChainComplex, n: i64| c.try_rank(n).ok();
    let (ut, vt, ut1, vt1, vtm) = (r(u, t)?, r(v, t)?, r(u, t + 1)?, r(v, t + 1)?, r(v, t - 1)?);
    let mut sys = LinearSystem::new(
        ring,
        vec![
            Unknown { rows: ut, cols: vt },
            Unknown { rows: ut1, cols: vt1 },
            Unknown { rows: vt, cols: vtm },
            Unknown { rows: vt1, cols: vt },
        ],
    );
    let dv_t = v.try_d(t).ok()?;
    let dv_t1 = v.try_d(t + 1).ok()?;
    let du_t1 = u.try_d(t + 1).ok()?;
    sys.equation(
        vt,
        vt,
        vec![
            (phi.try_component(t).ok()?, 0, FreeMap::identity(ring, vt)),
            (FreeMap::identity(ring, vt).neg(), 2, dv_t),
            (dv_t1.neg(), 3, FreeMap::identity(ring, vt)),
        ],
    );
    sys.equation(
        ut,
        vt1,
        vec![(FreeMap::identity(ring, ut), 0, dv_t1.clone()), (du_t1.neg(), 1, FreeMap::identity(ring, vt1))],
    );
    let sol = sys.solve(&[FreeMap::identity(ring, vt), FreeMap::zero(ring, ut, vt1)])?;
    let seed = ChainMap::from_parts(v, u, t, vec![sol[0].clone(), sol[1].clone()]).ok()?;
    if seed.commutation_failure().is_some() {
        return None;
    }
    let psi = extend_morphism(&seed, lo, hi).ok()?;
    let phi = phi.restrict(lo, hi).ok()?;
    let pf = phi.then(&psi).ok()?;
    let fp = psi.then(&phi).ok()?;
    let source_homotopy = find_homotopy_on(&pf, &ChainMap::identity(u, lo, hi).ok()?, lo, hi)?;
    let target_homotopy = find_homotopy_on(&fp, &ChainMap::identity(v, lo, hi).ok()?, lo, hi)?;
    Some(Equivalence { forward: phi, backward: psi, source_homotopy, target_homotopy })
}

/// Generators `(g_t, g_{t+1})` of the pairs commuting in degree `t+1`,
/// i.e. of the kernel of `(g, y) -> g d^U_{t+1} - d^V_{t+1} y`.
pub fn hom_generators(u: &ChainComplex, v: &ChainComplex, t: i64) -> Result<Vec<(FreeMap, FreeMap)>> {
    let ring = u.ring();
    let (ut, vt, ut1, vt1) = (u.try_rank(t)?, v.try_rank(t)?, u.try_rank(t + 1)?, v.try_rank(t + 1)?);
    let mut sys = LinearSystem::new(ring, vec![Unknown { rows: vt, cols: ut }, Unknown { rows: vt1, cols: ut1 }]);
    sys.equation(
        vt,
        ut1,
        vec![
            (FreeMap::identity(ring, vt), 0, u.try_d(t + 1)?),
            (v.try_d(t + 1)?.neg(), 1, FreeMap::identity(ring, ut1)),
        ],
    );
    if vt * ut + vt1 * ut1 == 0 {
        return Ok(Vec::new());
    }
    Ok(sys.kernel().into_iter().map(|mut p| (p.remove(0), p.remove(0))).collect())
}

/// A chain map `U -> V` on `[lo, hi]` from a random combination (field
/// coefficients) of Hom generators, seeded at the degree with the smallest
/// Hom system and extended both ways.
pub fn random_chain_map(u: &ChainComplex, v: &ChainComplex, lo: i64, hi: i64, rng: &mut impl Rng) -> Result<ChainMap> {
    let ring = u.ring();
    let f = *ring.field();
    let size =
        |t: i64| -> Result<usize> { Ok(v.try_rank(t)? * u.try_rank(t)? + v.try_rank(t + 1)? * u.try_rank(t + 1)?) };
    let mut t = lo;
    let mut best = size(lo)?;
    for n in lo + 1..hi {
        let c = size(n)?;
        if c < best {
            (t, best) = (n, c);
        }
    }
    let gens = hom_generators(u, v, t)?;
    let mut g0 = FreeMap::zero(ring, v.try_rank(t)?, u.try_rank(t)?);
    let mut g1 = FreeMap::zero(ring, v.try_rank(t + 1)?, u.try_rank(t + 1)?);
    for (a, b) in &gens {
        let c = ring.constant(f.to_signed(rng.gen_range(0..f.characteristic())));
        g0 = g0.plus(&a.scale(&c));
        g1 = g1.plus(&b.scale(&c));
    }
    let seed = ChainMap::from_parts(&u.extend_to(t, t + 1)?, &v.extend_to(t, t + 1)?, t, vec![g0, g1])?;
    extend_morphism(&seed, lo, hi)
}

/// Searches for a homotopy equivalence `U -> V` on `[lo, hi]` by trying
/// random chain maps; `None` after `attempts` failures.
pub fn find_equivalence(u: &ChainComplex, v: &ChainComplex, lo: i64, hi: i64, seed: u64) -> Option<Equivalence> {
    let u = u.extend_to(lo - 1, hi + 1).ok()?;
    let v = v.extend_to(lo - 1, hi + 1).ok()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..4 {
        let Ok(phi) = random_chain_map(&u, &v, lo, hi, &mut rng) else { continue };
        if let Some(e) = homotopy_inverse(&phi) {
            return Some(e);
        }
    }
    None
}

/// Null-homotopy of a map whose components are `s d + d s` for `s` given.
pub fn build_null_homotopic(src: &ChainComplex, tgt: &ChainComplex, s: &Homotopy) -> Result<ChainMap> {
    let (lo, hi) = s.window();
    let comps = (lo..=hi)
        .map(|n| Ok(s.component(n - 1).mul(&src.try_d(n)?).plus(&tgt.try_d(n + 1)?.mul(s.component(n)))))
        .collect::<Result<Vec<_>>>()?;
    ChainMap::new(src, tgt, lo, comps)
}
