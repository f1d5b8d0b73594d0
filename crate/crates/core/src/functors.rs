//! The adjoint pair between totally acyclic complexes over `Q` and over a
//! quotient `R = Q / (g_1..g_r)` of finite projective dimension: base change
//! `S`, restriction `T` (complete resolution of `Im d_0` over `Q`), the unit
//! `D -> D (x) K` and the counit `STC -> C`.
//!
//! Infinite complexes are handled on finite degree windows; every map is
//! produced on the window requested by the caller.

use crate::complex::Homotopy;
use crate::complex::{ChainComplex, ChainMap, ModulePresentation};
use crate::constructions::tensor_complexes;
use crate::error::{Error, Result};
use crate::homotopy::{find_homotopy_on, homotopy_inverse, Equivalence};
use crate::linalg::FreeMap;
use crate::resolution::{
    complete_resolution, extend_morphism, lift_through, restrict_scalars, ring_resolution, CompleteMethod,
    CompleteResolution, MinimalPresentation, Resolution,
};
use crate::ring::QuotientRing;

/// A surjection `Q -> R` with the cached resolution `K` of `R` over `Q`.
#[derive(Clone, Debug)]
pub struct BaseChange {
    pub q: QuotientRing,
    pub r: QuotientRing,
    pub k: Resolution,
}

/// `ε_C` together with the complete resolution it was built from.
#[derive(Clone, Debug)]
pub struct Counit {
    pub tc: CompleteResolution,
    /// `S(TC)` on the map's window.
    pub stc: ChainComplex,
    pub map: ChainMap,
}

/// `coker d_1` of a complex, i.e. `Im d_0` for an exact complex.
pub fn image_module(c: &ChainComplex) -> Result<ModulePresentation> {
    Ok(ModulePresentation::new(c.try_d(1)?))
}

/// Comparison map between complete resolutions induced by `mu0: F_0 -> F'_0`
/// (a map of generators inducing a module map): lift over the resolutions,
/// keep the degrees where both complete resolutions agree with them, and
/// extend to `[lo, hi]`.
pub fn comparison_map(
    src: &CompleteResolution,
    dst: &CompleteResolution,
    mu0: &FreeMap,
    lo: i64,
    hi: i64,
) -> Result<ChainMap> {
    let u = &src.complex;
    let v = &dst.complex;
    if src.is_zero() || dst.is_zero() {
        let u = u.extend_to(lo, hi)?;
        let v = v.extend_to(lo, hi)?;
        return ChainMap::zero(&u, &v, lo, hi);
    }
    let m = src.agreement.max(dst.agreement);
    let top = hi.max(m + 1);
    let mu = lift_through(&src.resolution.complex, &dst.resolution.complex, mu0, top)?;
    let comps: Vec<FreeMap> = (m..=top).map(|n| mu.component(n)).collect();
    let uw = u.extend_to(m, top)?;
    let vw = v.extend_to(m, top)?;
    let seed = ChainMap::from_parts(&uw, &vw, m, comps)?;
    if let Some(n) = seed.commutation_failure() {
        return Err(Error::NotAChainMap(n));
    }
    extend_morphism(&seed, lo.min(m), top)?.restrict(lo, hi)
}

fn lift_matrix(m: &FreeMap, q: &QuotientRing) -> FreeMap {
    m.reinterpret(q)
}

impl BaseChange {
    pub fn new(q: &QuotientRing, r: &QuotientRing) -> Result<Self> {
        if !r.is_quotient_of(q) {
            return Err(Error::RingMismatch(format!("{} is not a quotient of {}", r.describe(), q.describe())));
        }
        let k = ring_resolution(q, r)?;
        Ok(BaseChange { q: q.clone(), r: r.clone(), k })
    }

    /// `pd_Q R`.
    pub fn pd(&self) -> usize {
        self.k.pd.unwrap()
    }

    /// `K` as a bounded complex.
    pub fn k_complex(&self) -> &ChainComplex {
        &self.k.complex
    }

    /// `SD = D (x)_Q R` on `[lo, hi]` (tails kept where ring-independent).
    pub fn apply_s(&self, d: &ChainComplex, lo: i64, hi: i64) -> Result<ChainComplex> {
        self.check_q(d)?;
        d.extend_to(lo, hi)?.base_change(&self.r)
    }

    /// `S[f]`, entrywise reduction.
    pub fn apply_s_morphism(&self, f: &ChainMap) -> Result<ChainMap> {
        let (lo, hi) = f.window();
        let src = self.apply_s(f.source(), lo, hi)?;
        let tgt = self.apply_s(f.target(), lo, hi)?;
        let comps = f.components().iter().map(|c| c.base_change(&self.r)).collect::<Result<Vec<_>>>()?;
        ChainMap::new(&src, &tgt, lo, comps)
    }

    fn check_q(&self, d: &ChainComplex) -> Result<()> {
        if d.ring() != &self.q {
            return Err(Error::RingMismatch("complex is not over the base ring".into()));
        }
        Ok(())
    }

    fn check_r(&self, c: &ChainComplex) -> Result<()> {
        if c.ring() != &self.r {
            return Err(Error::RingMismatch("complex is not over the quotient ring".into()));
        }
        Ok(())
    }

    /// `Im d_0^C` over `Q`, as presented by `coker d_1^C` with the ideal of
    /// `R` appended.
    pub fn restricted_image(&self, c: &ChainComplex) -> Result<ModulePresentation> {
        self.check_r(c)?;
        restrict_scalars(&image_module(c)?, &self.q)
    }

    /// `TC`: a minimal complete resolution of `Im d_0^C` over `Q`.
    pub fn apply_t(&self, c: &ChainComplex) -> Result<CompleteResolution> {
        complete_resolution(&self.restricted_image(c)?)
    }

    fn minimal(tc: &CompleteResolution) -> &MinimalPresentation {
        &tc.resolution.minimal
    }

    /// `T[f]` for `f: C -> C'`, given `TC` and `TC'`, on `[lo, hi]`.
    pub fn apply_t_morphism(
        &self,
        f: &ChainMap,
        tc: &CompleteResolution,
        tc2: &CompleteResolution,
        lo: i64,
        hi: i64,
    ) -> Result<ChainMap> {
        let f0 = lift_matrix(&f.try_component(0)?, &self.q);
        let mu0 = Self::minimal(tc2).to_min.mul(&f0).mul(&Self::minimal(tc).from_min);
        comparison_map(tc, tc2, &mu0, lo, hi)
    }

    /// `η_D: D -> D (x) K`, inclusion of the `K_0` block, on `[lo, hi]`.
    pub fn unit(&self, d: &ChainComplex, lo: i64, hi: i64) -> Result<ChainMap> {
        self.check_q(d)?;
        let c = self.pd() as i64;
        let dw = d.extend_to(lo - c - 1, hi + 1)?;
        let dk = tensor_complexes(&dw, self.k_complex())?;
        let dk = dk.restrict(lo.max(dk.lo()), hi.min(dk.hi()))?;
        let q = &self.q;
        let comps = (dk.lo()..=dk.hi())
            .map(|n| {
                let r = dw.rank(n);
                FreeMap::identity(q, r).vstack(&FreeMap::zero(q, dk.rank(n) - r, r))
            })
            .collect();
        ChainMap::new(&dw.restrict(dk.lo(), dk.hi())?, &dk, dk.lo(), comps)
    }

    /// `D (x) K` viewed as a complete resolution of `coker d_1^{SD}` over
    /// `Q`: the resolution is `D_{>=0} (x) K`, agreeing with `D (x) K` from
    /// degree `pd_Q R` on. `[lo, hi]` is the window to materialize.
    pub fn tensor_resolution(&self, d: &ChainComplex, lo: i64, hi: i64) -> Result<CompleteResolution> {
        self.check_q(d)?;
        let q = &self.q;
        let c = self.pd() as i64;
        let k = self.k_complex();
        let dw = d.extend_to(lo.min(0) - c - 2, hi.max(c) + 2)?;
        let u = tensor_complexes(&dw, k)?;
        let p_full = tensor_complexes(&dw.truncate_below(0)?, k)?;
        let p = p_full.truncate_below(0)?.restrict(0, p_full.hi())?;
        let p = ChainComplex::from_parts_public(q, 0, p.window_ranks().to_vec(), p.window_differentials().to_vec())?;
        let krank = |i: i64| k.rank(i);
        let mut rho_low = Vec::new();
        for n in 0..=c {
            // keep the blocks D_{n-i} (x) K_i with n - i >= 0
            let mut keep = Vec::new();
            let mut off = 0;
            for i in 0..=c {
                let sz = dw.rank(n - i) * krank(i);
                if n - i >= 0 {
                    keep.extend(off..off + sz);
                }
                off += sz;
            }
            rho_low.push(FreeMap::identity(q, u.rank(n)).select_rows(&keep));
        }
        let module = ModulePresentation::new(p.try_d(1)?);
        let g = p.rank(0);
        let resolution = Resolution {
            complex: p,
            module,
            minimal: MinimalPresentation {
                presentation: ModulePresentation::new(FreeMap::zero(q, g, 0)),
                to_min: FreeMap::identity(q, g),
                from_min: FreeMap::identity(q, g),
            },
            pd: None,
        };
        Ok(CompleteResolution::from_parts(u, resolution, c, rho_low, CompleteMethod::Tensor))
    }

    /// `ε_C: S(TC) -> C` for the complete resolution `tc` of `Im d_0^C` over
    /// `Q`, where `mu0: S(F_0) -> C_0` maps the resolution's generators to
    /// `C_0`. Built as the lift `S F -> C_{>=0}` composed with `S rho`, then
    /// extended below degree 0.
    pub fn counit_with(
        &self,
        c: &ChainComplex,
        tc: &CompleteResolution,
        mu0: &FreeMap,
        lo: i64,
        hi: i64,
    ) -> Result<ChainMap> {
        self.check_r(c)?;
        let cw = c.extend_to(lo - 1, hi + 1)?;
        if tc.is_zero() {
            let z = ChainComplex::zero(&self.r).extend_to(lo, hi)?;
            return ChainMap::zero(&z, &cw.restrict(lo, hi)?, lo, hi);
        }
        let top = hi.max(1);
        let sf = tc.resolution.complex.extend_to(0, top)?.base_change(&self.r)?;
        let mu = lift_through(&sf, &cw, &mu0.base_change(&self.r)?, top)?;
        let stc = tc.complex.extend_to(lo.min(0) - 1, top + 1)?.base_change(&self.r)?;
        let comps =
            (0..=top).map(|n| Ok(mu.component(n).mul(&tc.rho(n).base_change(&self.r)?))).collect::<Result<Vec<_>>>()?;
        let seed = ChainMap::from_parts(&stc, &cw, 0, comps)?;
        if let Some(n) = seed.commutation_failure() {
            return Err(Error::NotAChainMap(n));
        }
        extend_morphism(&seed, lo.min(0), top)?.restrict(lo, hi)
    }

    /// `ε_C` on `[lo, hi]`.
    pub fn counit(&self, c: &ChainComplex, lo: i64, hi: i64) -> Result<Counit> {
        let tc = self.apply_t(c)?;
        let mu0 = Self::minimal(&tc).from_min.clone();
        let map = self.counit_with(c, &tc, &mu0, lo, hi)?;
        Ok(Counit { stc: map.source().clone(), tc, map })
    }

    /// `g: D -> TC` to `ε_C o S[g]: SD -> C`.
    pub fn adjunction_forward(&self, g: &ChainMap, counit: &Counit) -> Result<ChainMap> {
        let sg = self.apply_s_morphism(g)?;
        sg.then(&counit.map)
    }

    /// `f: SD -> C` to `T[f] o η_D: D -> TC`, with `T(SD)` realized as
    /// `D (x) K`.
    pub fn adjunction_backward(
        &self,
        f: &ChainMap,
        d: &ChainComplex,
        tc: &CompleteResolution,
        lo: i64,
        hi: i64,
    ) -> Result<ChainMap> {
        let tk = self.tensor_resolution(d, lo - 1, hi + 1)?;
        let f0 = lift_matrix(&f.try_component(0)?, &self.q);
        let mu0 = Self::minimal(tc).to_min.mul(&f0);
        let tf = comparison_map(&tk, tc, &mu0, lo, hi)?;
        let eta = self.unit(d, lo, hi)?;
        eta.then(&tf)
    }

    /// Homotopy equivalence between the minimal `T(SD)` and `D (x) K`.
    pub fn ts_identification(&self, d: &ChainComplex, lo: i64, hi: i64) -> Result<TsIdentification> {
        let sd = self.apply_s(d, lo - 2, hi.max(1) + 2)?;
        let tsd = self.apply_t(&sd)?;
        let tk = self.tensor_resolution(d, lo - 1, hi + 1)?;
        let mp = Self::minimal(&tsd);
        let forward = comparison_map(&tsd, &tk, &mp.from_min, lo - 1, hi + 1)?;
        let backward = comparison_map(&tk, &tsd, &mp.to_min, lo - 1, hi + 1)?;
        let equivalence = equivalence_from_pair(&forward, &backward, lo, hi);
        Ok(TsIdentification { tsd, tensor: tk, forward, backward, equivalence })
    }

    /// Both triangle identities for `C` and `D = TC`:
    /// `Tε_C o η_TC ~ id_TC` over `Q` and `ε_SD o Sη_D ~ id_SD` over `R`.
    pub fn triangle_identities(&self, c: &ChainComplex, lo: i64, hi: i64) -> Result<TriangleIdentities> {
        let tc = self.apply_t(c)?;
        let d = &tc.complex;
        let mp = Self::minimal(&tc);
        // first identity
        let eps = self.counit_with(c, &tc, &mp.from_min, lo - 2, hi + 2)?;
        let tk = self.tensor_resolution(d, lo - 1, hi + 1)?;
        let mu0 = mp.to_min.mul(&lift_matrix(&eps.component(0), &self.q));
        let t_eps = comparison_map(&tk, &tc, &mu0, lo - 1, hi + 1)?;
        let eta = self.unit(d, lo - 1, hi + 1)?;
        let first_map = eta.then(&t_eps)?;
        let id_tc = ChainMap::identity(first_map.source(), lo, hi)?;
        let first = find_homotopy_on(&first_map, &id_tc, lo, hi);
        // second identity
        let sd = self.apply_s(d, lo - 2, hi + 2)?;
        let g = sd.rank(0);
        let eps_sd = self.counit_with(&sd, &tk, &FreeMap::identity(&self.q, g), lo - 1, hi + 1)?;
        let s_eta = self.apply_s_morphism(&eta)?;
        let second_map = s_eta.then(&eps_sd)?;
        let id_sd = ChainMap::identity(second_map.source(), lo, hi)?;
        let second = find_homotopy_on(&second_map, &id_sd, lo, hi);
        Ok(TriangleIdentities { first_map, first, second_map, second })
    }
}

/// Builds equivalence data from maps both ways if both composites are
/// homotopic to identities on `[lo, hi]`.
pub fn equivalence_from_pair(forward: &ChainMap, backward: &ChainMap, lo: i64, hi: i64) -> Option<Equivalence> {
    let bf = forward.then(backward).ok()?;
    let fb = backward.then(forward).ok()?;
    let ids = ChainMap::identity(forward.source(), lo, hi).ok()?;
    let idt = ChainMap::identity(forward.target(), lo, hi).ok()?;
    let source_homotopy = find_homotopy_on(&bf, &ids, lo, hi)?;
    let target_homotopy = find_homotopy_on(&fb, &idt, lo, hi)?;
    Some(Equivalence {
        forward: forward.restrict(lo, hi).ok()?,
        backward: backward.restrict(lo, hi).ok()?,
        source_homotopy,
        target_homotopy,
    })
}

#[derive(Clone, Debug)]
pub struct TsIdentification {
    pub tsd: CompleteResolution,
    pub tensor: CompleteResolution,
    pub forward: ChainMap,
    pub backward: ChainMap,
    pub equivalence: Option<Equivalence>,
}

#[derive(Clone, Debug)]
pub struct TriangleIdentities {
    /// `Tε_C o η_TC`.
    pub first_map: ChainMap,
    /// Homotopy `Tε_C o η_TC ~ id`.
    pub first: Option<Homotopy>,
    /// `ε_SD o Sη_D`.
    pub second_map: ChainMap,
    /// Homotopy `ε_SD o Sη_D ~ id`.
    pub second: Option<Homotopy>,
}

/// Outcome of comparing `S`, `T` for `Q -> R1 -> R` against the composite.
#[derive(Clone, Debug)]
pub struct CompositionReport {
    /// `S_{psi phi} D` equals `S_psi S_phi D` on the window.
    pub s_equal: bool,
    /// Equivalence `T_phi T_psi C -> T_{psi phi} C`, if certified.
    pub t_equivalence: Option<Equivalence>,
    pub t_direct: CompleteResolution,
    pub t_iterated: CompleteResolution,
}

/// Checks `S_{ψφ} = S_ψ S_φ` bit-exactly on `D` and `T_{ψφ} ≃ T_φ T_ψ` on `C`
/// for the tower `q -> mid -> r`.
pub fn compose_functors_check(
    q: &QuotientRing,
    mid: &QuotientRing,
    r: &QuotientRing,
    d: &ChainComplex,
    c: &ChainComplex,
    lo: i64,
    hi: i64,
) -> Result<CompositionReport> {
    let phi = BaseChange::new(q, mid)?;
    let psi = BaseChange::new(mid, r)?;
    let whole = BaseChange::new(q, r)?;
    let direct_s = whole.apply_s(d, lo, hi)?;
    let iterated_s = psi.apply_s(&phi.apply_s(d, lo, hi)?, lo, hi)?;
    let s_equal = direct_s == iterated_s;

    let t_direct = whole.apply_t(c)?;
    let u1 = psi.apply_t(c)?;
    let u1c = u1.complex.extend_to(lo - 2, hi.max(1) + 2)?;
    let t_iterated = phi.apply_t(&u1c)?;
    // the map Im d_0 of T_psi C -> Im d_0 C induced by the counit of psi in degree 0
    let eps = psi.counit_with(c, &u1, &u1.resolution.minimal.from_min, -1, 1)?;
    let e0 = lift_matrix(&eps.component(0), q);
    let mu0 = t_direct.resolution.minimal.to_min.mul(&e0).mul(&t_iterated.resolution.minimal.from_min);
    let t_equivalence = if t_direct.is_zero() && t_iterated.is_zero() {
        None
    } else {
        let phi_map = comparison_map(&t_iterated, &t_direct, &mu0, lo - 1, hi + 1)?;
        homotopy_inverse(&phi_map)
    };
    Ok(CompositionReport { s_equal, t_equivalence, t_direct, t_iterated })
}
