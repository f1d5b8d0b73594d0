//! Chain complexes of free modules stored as a finite window of ranks and
//! differentials plus a rule ([`Tail`]) for each side describing how the
//! complex continues, chain maps and homotopies between them, and module
//! presentations.
//!
//! Grading is homological: `d(n): C_n -> C_{n-1}`, a `rank(n-1) x rank(n)`
//! matrix.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::linalg::{syzygies, FreeMap};
use crate::ring::QuotientRing;

/// How a complex continues beyond its window on one side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Tail {
    /// All further modules are zero.
    Zero,
    /// `d(n + period) = d(n)` beyond the window.
    Periodic { period: usize },
    /// Above only: `d(n+1) = sign * syzygies(d(n))`.
    Syzygy { sign: i8 },
    /// Below only: `d(n) = sign * syzygies(d(n+1)^T)^T`.
    Cosyzygy { sign: i8 },
    /// Only the window is known.
    Opaque,
}

impl Tail {
    fn flip(self, odd: bool) -> Tail {
        match self {
            Tail::Syzygy { sign } if odd => Tail::Syzygy { sign: -sign },
            Tail::Cosyzygy { sign } if odd => Tail::Cosyzygy { sign: -sign },
            t => t,
        }
    }

    fn dual(self) -> Tail {
        match self {
            Tail::Syzygy { sign } => Tail::Cosyzygy { sign },
            Tail::Cosyzygy { sign } => Tail::Syzygy { sign },
            t => t,
        }
    }

    pub fn is_known(self) -> bool {
        !matches!(self, Tail::Opaque)
    }
}

/// Cokernel presentation `generators <- relations`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModulePresentation {
    relations: FreeMap,
}

impl ModulePresentation {
    pub fn new(relations: FreeMap) -> Self {
        ModulePresentation { relations }
    }

    /// The free module itself, no relations.
    pub fn free(ring: &QuotientRing, rank: usize) -> Self {
        ModulePresentation { relations: FreeMap::zero(ring, rank, 0) }
    }

    pub fn ring(&self) -> &QuotientRing {
        self.relations.ring()
    }

    pub fn generator_rank(&self) -> usize {
        self.relations.rows()
    }

    pub fn relations(&self) -> &FreeMap {
        &self.relations
    }
}

/// Extra differentials generated from tails, memoized. Deterministic, so
/// sharing between clones is harmless.
type Memo = Arc<Mutex<BTreeMap<i64, FreeMap>>>;

#[derive(Clone)]
pub struct ChainComplex {
    ring: QuotientRing,
    lo: i64,
    ranks: Vec<usize>,
    diffs: Vec<FreeMap>,
    above: Tail,
    below: Tail,
    augmentation: Option<ModulePresentation>,
    memo: Memo,
}

impl PartialEq for ChainComplex {
    fn eq(&self, o: &Self) -> bool {
        self.ring == o.ring
            && self.lo == o.lo
            && self.ranks == o.ranks
            && self.diffs == o.diffs
            && self.above == o.above
            && self.below == o.below
    }
}

impl Eq for ChainComplex {}

impl fmt::Debug for ChainComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ChainComplex[{}..{}] above={:?} below={:?}", self.lo, self.hi(), self.above, self.below)?;
        for n in (self.lo..=self.hi()).rev() {
            write!(f, "  {n}: rank {}", self.rank(n))?;
            if n > self.lo {
                write!(f, " d = {}", self.diffs[(n - self.lo - 1) as usize])?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Result of [`ChainComplex::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub valid: bool,
    /// Degree `n` where `d(n-1) d(n)` is nonzero.
    pub failure: Option<i64>,
    pub checked: (i64, i64),
}

impl ChainComplex {
    /// Builds and validates a complex: `ranks[k]` is the rank in degree
    /// `lo + k`, `diffs[k]` is `d(lo + k + 1)`.
    pub fn new(
        ring: &QuotientRing,
        lo: i64,
        ranks: Vec<usize>,
        diffs: Vec<FreeMap>,
        above: Tail,
        below: Tail,
    ) -> Result<Self> {
        let c = Self::from_parts(ring, lo, ranks, diffs, above, below)?;
        let rep = c.validate();
        if let Some(n) = rep.failure {
            return Err(Error::NotAComplex(n));
        }
        Ok(c)
    }

    /// Shape checks only; the caller guarantees `d^2 = 0`.
    pub(crate) fn from_parts(
        ring: &QuotientRing,
        lo: i64,
        ranks: Vec<usize>,
        diffs: Vec<FreeMap>,
        above: Tail,
        below: Tail,
    ) -> Result<Self> {
        if ranks.is_empty() {
            return Err(Error::Shape("a window needs at least one degree".into()));
        }
        if diffs.len() + 1 != ranks.len() {
            return Err(Error::Shape(format!(
                "{} ranks need {} differentials, found {}",
                ranks.len(),
                ranks.len() - 1,
                diffs.len()
            )));
        }
        for (k, d) in diffs.iter().enumerate() {
            if d.ring() != ring {
                return Err(Error::RingMismatch(format!("differential in degree {}", lo + k as i64 + 1)));
            }
            if d.rows() != ranks[k] || d.cols() != ranks[k + 1] {
                return Err(Error::Shape(format!(
                    "differential in degree {} is {}x{}, expected {}x{}",
                    lo + k as i64 + 1,
                    d.rows(),
                    d.cols(),
                    ranks[k],
                    ranks[k + 1]
                )));
            }
        }
        let hi = lo + ranks.len() as i64 - 1;
        if let Tail::Periodic { period } = above {
            if period == 0 || hi - lo < period as i64 {
                return Err(Error::Shape(format!("period {period} needs at least {period} differentials")));
            }
        }
        if let Tail::Periodic { period } = below {
            if period == 0 || hi - lo < period as i64 {
                return Err(Error::Shape(format!("period {period} needs at least {period} differentials")));
            }
            if ranks[0] != ranks[period] {
                return Err(Error::Shape("periodic ranks disagree below the window".into()));
            }
        }
        if let Tail::Periodic { period } = above {
            if ranks[ranks.len() - 1] != ranks[ranks.len() - 1 - period] {
                return Err(Error::Shape("periodic ranks disagree above the window".into()));
            }
        }
        if matches!(above, Tail::Cosyzygy { .. }) || matches!(below, Tail::Syzygy { .. }) {
            return Err(Error::Shape("syzygy tails go above, cosyzygy tails below".into()));
        }
        if matches!(above, Tail::Syzygy { .. }) && hi == lo {
            return Err(Error::Shape("syzygy tail needs a differential".into()));
        }
        if matches!(below, Tail::Cosyzygy { .. }) && hi == lo {
            return Err(Error::Shape("cosyzygy tail needs a differential".into()));
        }
        Ok(ChainComplex {
            ring: ring.clone(),
            lo,
            ranks,
            diffs,
            above,
            below,
            augmentation: None,
            memo: Arc::default(),
        })
    }

    /// Window with a zero lower tail and an opaque upper side, shapes checked
    /// but `d^2 = 0` trusted; for resolutions assembled elsewhere.
    pub fn from_parts_public(ring: &QuotientRing, lo: i64, ranks: Vec<usize>, diffs: Vec<FreeMap>) -> Result<Self> {
        Self::from_parts(ring, lo, ranks, diffs, Tail::Opaque, Tail::Zero)
    }

    /// The zero complex, known to be zero everywhere.
    pub fn zero(ring: &QuotientRing) -> Self {
        Self::from_parts(ring, 0, vec![0], vec![], Tail::Zero, Tail::Zero).unwrap()
    }

    /// Bounded complex from a list of differentials `d(lo+1), ..., d(hi)`.
    pub fn bounded(ring: &QuotientRing, lo: i64, ranks: Vec<usize>, diffs: Vec<FreeMap>) -> Result<Self> {
        Self::new(ring, lo, ranks, diffs, Tail::Zero, Tail::Zero)
    }

    pub fn with_augmentation(mut self, m: ModulePresentation) -> Self {
        self.augmentation = Some(m);
        self
    }

    pub fn augmentation(&self) -> Option<&ModulePresentation> {
        self.augmentation.as_ref()
    }

    pub fn ring(&self) -> &QuotientRing {
        &self.ring
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.ranks.len() as i64 - 1
    }

    pub fn window(&self) -> (i64, i64) {
        (self.lo, self.hi())
    }

    pub fn above(&self) -> Tail {
        self.above
    }

    pub fn below(&self) -> Tail {
        self.below
    }

    pub fn window_ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn window_differentials(&self) -> &[FreeMap] {
        &self.diffs
    }

    /// Every module is zero, inside and outside the window.
    pub fn is_zero(&self) -> bool {
        self.ranks.iter().all(|&r| r == 0) && self.above.is_known() && self.below.is_known()
    }

    /// Both tails are zero.
    pub fn is_bounded(&self) -> bool {
        self.above == Tail::Zero && self.below == Tail::Zero
    }

    pub fn try_rank(&self, n: i64) -> Result<usize> {
        let hi = self.hi();
        if (self.lo..=hi).contains(&n) {
            return Ok(self.ranks[(n - self.lo) as usize]);
        }
        if n > hi {
            match self.above {
                Tail::Zero => Ok(0),
                Tail::Periodic { period } => {
                    let p = period as i64;
                    let k = hi - p + 1 + (n - hi - 1).rem_euclid(p);
                    Ok(self.ranks[(k - self.lo) as usize])
                }
                Tail::Syzygy { .. } => Ok(self.try_d(n)?.cols()),
                _ => Err(Error::OutsideWindow { degree: n, lo: self.lo, hi }),
            }
        } else {
            match self.below {
                Tail::Zero => Ok(0),
                Tail::Periodic { period } => {
                    let p = period as i64;
                    let k = self.lo + (n - self.lo).rem_euclid(p);
                    Ok(self.ranks[(k - self.lo) as usize])
                }
                Tail::Cosyzygy { .. } => Ok(self.try_d(n + 1)?.rows()),
                _ => Err(Error::OutsideWindow { degree: n, lo: self.lo, hi }),
            }
        }
    }

    /// Rank in degree `n`; panics where the complex is unknown.
    pub fn rank(&self, n: i64) -> usize {
        self.try_rank(n).expect("degree outside the known range")
    }

    /// `d(n): C_n -> C_{n-1}`.
    pub fn try_d(&self, n: i64) -> Result<FreeMap> {
        let hi = self.hi();
        if n > self.lo && n <= hi {
            return Ok(self.diffs[(n - self.lo - 1) as usize].clone());
        }
        let hit = self.memo.lock().unwrap().get(&n).cloned();
        if let Some(d) = hit {
            return Ok(d);
        }
        let out = if n > hi {
            match self.above {
                Tail::Zero => FreeMap::zero(&self.ring, self.try_rank(n - 1)?, 0),
                Tail::Periodic { period } => {
                    let p = period as i64;
                    let k = hi - p + 1 + (n - hi - 1).rem_euclid(p);
                    self.diffs[(k - self.lo - 1) as usize].clone()
                }
                Tail::Syzygy { sign } => {
                    let mut d = self.diffs.last().unwrap().clone();
                    for m in hi + 1..=n {
                        let hit = self.memo.lock().unwrap().get(&m).cloned();
                        d = match hit {
                            Some(x) => x,
                            None => {
                                let x = syzygies(&d).scale_sign(sign as i64);
                                self.memo.lock().unwrap().insert(m, x.clone());
                                x
                            }
                        };
                    }
                    d
                }
                _ => return Err(Error::OutsideWindow { degree: n, lo: self.lo, hi }),
            }
        } else {
            // n <= lo
            match self.below {
                Tail::Zero => FreeMap::zero(&self.ring, 0, self.try_rank(n)?),
                Tail::Periodic { period } => {
                    let p = period as i64;
                    let k = self.lo + 1 + (n - self.lo - 1).rem_euclid(p);
                    self.diffs[(k - self.lo - 1) as usize].clone()
                }
                Tail::Cosyzygy { sign } => {
                    let mut d = self.diffs[0].clone();
                    for m in (n..=self.lo).rev() {
                        let hit = self.memo.lock().unwrap().get(&m).cloned();
                        d = match hit {
                            Some(x) => x,
                            None => {
                                let x = syzygies(&d.transpose()).transpose().scale_sign(sign as i64);
                                self.memo.lock().unwrap().insert(m, x.clone());
                                x
                            }
                        };
                    }
                    d
                }
                _ => return Err(Error::OutsideWindow { degree: n, lo: self.lo, hi }),
            }
        };
        Ok(out)
    }

    /// Differential in degree `n`; panics where the complex is unknown.
    pub fn d(&self, n: i64) -> FreeMap {
        self.try_d(n).expect("degree outside the known range")
    }

    /// `true` when degree `n` is known (inside the window or generated).
    pub fn knows(&self, n: i64) -> bool {
        let (lo, hi) = self.window();
        (lo..=hi).contains(&n) || (n > hi && self.above.is_known()) || (n < lo && self.below.is_known())
    }

    /// Same complex with the window grown to contain `[lo, hi]`.
    pub fn extend_to(&self, lo: i64, hi: i64) -> Result<ChainComplex> {
        let nlo = lo.min(self.lo);
        let nhi = hi.max(self.hi());
        if nlo == self.lo && nhi == self.hi() {
            return Ok(self.clone());
        }
        let mut ranks = Vec::new();
        let mut diffs = Vec::new();
        for n in nlo..=nhi {
            ranks.push(self.try_rank(n)?);
            if n > nlo {
                diffs.push(self.try_d(n)?);
            }
        }
        let mut c = Self::from_parts(&self.ring, nlo, ranks, diffs, self.above, self.below)?;
        c.augmentation = self.augmentation.clone();
        c.memo = self.memo.clone();
        Ok(c)
    }

    /// The window `[lo, hi]` alone; tails become opaque unless the cut
    /// leaves a zero tail zero.
    pub fn restrict(&self, lo: i64, hi: i64) -> Result<ChainComplex> {
        let c = self.extend_to(lo, hi)?;
        let (s, e) = ((lo - c.lo) as usize, (hi - c.lo) as usize);
        let above = if hi >= self.hi() && self.above == Tail::Zero { Tail::Zero } else { Tail::Opaque };
        let below = if lo <= self.lo && self.below == Tail::Zero { Tail::Zero } else { Tail::Opaque };
        let mut out = Self::from_parts(&self.ring, lo, c.ranks[s..=e].to_vec(), c.diffs[s..e].to_vec(), above, below)?;
        out.augmentation = self.augmentation.clone();
        Ok(out)
    }

    /// Degrees below `lo` replaced by zero; the upper tail is kept.
    pub fn truncate_below(&self, lo: i64) -> Result<ChainComplex> {
        let c = self.extend_to(lo, lo)?;
        let hi = c.hi().max(lo);
        let c = c.extend_to(lo, hi)?;
        let s = (lo - c.lo) as usize;
        let above = if hi == self.hi() || self.above.is_known() { self.above } else { Tail::Opaque };
        Self::from_parts(&self.ring, lo, c.ranks[s..].to_vec(), c.diffs[s..].to_vec(), above, Tail::Zero)
    }

    /// Brutal truncation: degrees outside `[lo, hi]` replaced by zero.
    pub fn brutal_truncation(&self, lo: i64, hi: i64) -> Result<ChainComplex> {
        let c = self.restrict(lo, hi)?;
        Self::from_parts(&self.ring, lo, c.ranks, c.diffs, Tail::Zero, Tail::Zero)
    }

    /// Checks `d(n-1) d(n) = 0` across the window and one wrap of each known
    /// tail.
    pub fn validate(&self) -> ValidationReport {
        let (lo, hi) = self.window();
        let top = match self.above {
            Tail::Periodic { period } => hi + period as i64 + 1,
            Tail::Syzygy { .. } => hi + 1,
            _ => hi,
        };
        let bottom = match self.below {
            Tail::Periodic { period } => lo - period as i64 - 1,
            Tail::Cosyzygy { .. } => lo - 1,
            _ => lo,
        };
        for n in bottom + 2..=top {
            let (Ok(a), Ok(b)) = (self.try_d(n - 1), self.try_d(n)) else { continue };
            if a.cols() != b.rows() || !a.mul(&b).is_zero() {
                return ValidationReport { valid: false, failure: Some(n), checked: (bottom, top) };
            }
        }
        ValidationReport { valid: true, failure: None, checked: (bottom, top) }
    }

    /// `Sigma^k C`: `(Sigma^k C)_n = C_{n-k}`, differentials times `(-1)^k`.
    pub fn shift(&self, k: i64) -> ChainComplex {
        let odd = k.rem_euclid(2) == 1;
        let diffs = self.diffs.iter().map(|d| if odd { d.neg() } else { d.clone() }).collect();
        let mut c = Self::from_parts(
            &self.ring,
            self.lo + k,
            self.ranks.clone(),
            diffs,
            self.above.flip(odd),
            self.below.flip(odd),
        )
        .unwrap();
        c.augmentation = None;
        c
    }

    /// `C* = Hom(C, ring)`: `(C*)_n = (C_{-n})*`, `d*(n) = d(1-n)^T`.
    pub fn dualize(&self) -> ChainComplex {
        let (lo, hi) = self.window();
        let ranks: Vec<usize> = (-hi..=-lo).map(|n| self.rank(-n)).collect();
        let diffs: Vec<FreeMap> = (-hi + 1..=-lo).map(|n| self.d(1 - n).transpose()).collect();
        Self::from_parts(&self.ring, -hi, ranks, diffs, self.below.dual(), self.above.dual()).unwrap()
    }

    /// Degreewise reduction into a quotient ring.
    pub fn base_change(&self, target: &QuotientRing) -> Result<ChainComplex> {
        let diffs = self.diffs.iter().map(|d| d.base_change(target)).collect::<Result<Vec<_>>>()?;
        // syzygy rules depend on the ring, so only ring-free tails survive
        let tail = |t: Tail| match t {
            Tail::Zero | Tail::Periodic { .. } => t,
            _ => Tail::Opaque,
        };
        Self::from_parts(target, self.lo, self.ranks.clone(), diffs, tail(self.above), tail(self.below))
    }

    /// Smallest window containing every nonzero module, if both tails are zero.
    pub fn support(&self) -> Option<(i64, i64)> {
        if !self.is_bounded() {
            return None;
        }
        let (lo, hi) = self.window();
        let nz: Vec<i64> = (lo..=hi).filter(|&n| self.rank(n) > 0).collect();
        Some(match (nz.first(), nz.last()) {
            (Some(&a), Some(&b)) => (a, b),
            _ => (0, -1),
        })
    }
}

/// Family of maps `f_n: C_n -> D_n` on a window, commuting with differentials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMap {
    source: ChainComplex,
    target: ChainComplex,
    lo: i64,
    comps: Vec<FreeMap>,
    /// `f_{n+p} = f_n` for all `n`, when declared.
    period: Option<usize>,
}

impl ChainMap {
    /// Builds and checks commutation on the window.
    pub fn new(source: &ChainComplex, target: &ChainComplex, lo: i64, comps: Vec<FreeMap>) -> Result<ChainMap> {
        let m = Self::from_parts(source, target, lo, comps)?;
        if let Some(n) = m.commutation_failure() {
            return Err(Error::NotAChainMap(n));
        }
        Ok(m)
    }

    pub(crate) fn from_parts(
        source: &ChainComplex,
        target: &ChainComplex,
        lo: i64,
        comps: Vec<FreeMap>,
    ) -> Result<ChainMap> {
        if source.ring() != target.ring() {
            return Err(Error::RingMismatch("chain map between complexes over different rings".into()));
        }
        for (k, f) in comps.iter().enumerate() {
            let n = lo + k as i64;
            let (s, t) = (source.try_rank(n)?, target.try_rank(n)?);
            if f.cols() != s || f.rows() != t {
                return Err(Error::Shape(format!(
                    "component in degree {n} is {}x{}, expected {t}x{s}",
                    f.rows(),
                    f.cols()
                )));
            }
        }
        Ok(ChainMap { source: source.clone(), target: target.clone(), lo, comps, period: None })
    }

    /// Declares `f_{n+p} = f_n`; the window must hold at least `p` components.
    pub fn with_period(mut self, p: usize) -> Result<ChainMap> {
        if p == 0 || self.comps.len() < p {
            return Err(Error::Shape(format!("period {p} needs {p} components")));
        }
        self.period = Some(p);
        Ok(self)
    }

    pub fn period(&self) -> Option<usize> {
        self.period
    }

    pub fn identity(c: &ChainComplex, lo: i64, hi: i64) -> Result<ChainMap> {
        let comps = (lo..=hi).map(|n| c.try_rank(n).map(|r| FreeMap::identity(c.ring(), r))).collect::<Result<_>>()?;
        Self::from_parts(c, c, lo, comps)
    }

    pub fn zero(source: &ChainComplex, target: &ChainComplex, lo: i64, hi: i64) -> Result<ChainMap> {
        let r = source.ring();
        let comps =
            (lo..=hi).map(|n| Ok(FreeMap::zero(r, target.try_rank(n)?, source.try_rank(n)?))).collect::<Result<_>>()?;
        Self::from_parts(source, target, lo, comps)
    }

    pub fn source(&self) -> &ChainComplex {
        &self.source
    }

    pub fn target(&self) -> &ChainComplex {
        &self.target
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.comps.len() as i64 - 1
    }

    pub fn window(&self) -> (i64, i64) {
        (self.lo, self.hi())
    }

    pub fn components(&self) -> &[FreeMap] {
        &self.comps
    }

    /// `f_n`; zero where either side vanishes, periodic wrap when declared.
    pub fn try_component(&self, n: i64) -> Result<FreeMap> {
        let (lo, hi) = self.window();
        if (lo..=hi).contains(&n) {
            return Ok(self.comps[(n - lo) as usize].clone());
        }
        if let Some(p) = self.period {
            let k = lo + (n - lo).rem_euclid(p as i64);
            return Ok(self.comps[(k - lo) as usize].clone());
        }
        let s = self.source.try_rank(n)?;
        let t = self.target.try_rank(n)?;
        if s == 0 || t == 0 {
            return Ok(FreeMap::zero(self.source.ring(), t, s));
        }
        Err(Error::OutsideWindow { degree: n, lo, hi })
    }

    pub fn component(&self, n: i64) -> FreeMap {
        self.try_component(n).expect("component outside the known range")
    }

    /// First degree `n` in the window where `f_{n-1} d(n) != d'(n) f_n`.
    pub fn commutation_failure(&self) -> Option<i64> {
        let (lo, hi) = self.window();
        for n in lo + 1..=hi {
            let (Ok(s), Ok(t)) = (self.source.try_d(n), self.target.try_d(n)) else { continue };
            let l = self.comps[(n - lo - 1) as usize].mul(&s);
            let r = t.mul(&self.comps[(n - lo) as usize]);
            if l != r {
                return Some(n);
            }
        }
        None
    }

    /// Components on `[lo, hi]`, generating them from tails or the period
    /// where possible.
    pub fn restrict(&self, lo: i64, hi: i64) -> Result<ChainMap> {
        let comps = (lo..=hi).map(|n| self.try_component(n)).collect::<Result<Vec<_>>>()?;
        let src = self.source.extend_to(lo, hi)?;
        let tgt = self.target.extend_to(lo, hi)?;
        Self::from_parts(&src, &tgt, lo, comps)
    }

    /// `g o f` on the common window.
    pub fn then(&self, g: &ChainMap) -> Result<ChainMap> {
        let lo = self.lo.max(g.lo);
        let hi = self.hi().min(g.hi());
        if lo > hi {
            return Err(Error::Shape("composable maps share no degree".into()));
        }
        let comps =
            (lo..=hi).map(|n| g.try_component(n)?.compose(&self.try_component(n)?)).collect::<Result<Vec<_>>>()?;
        Self::from_parts(&self.source, &g.target, lo, comps)
    }

    fn zip(&self, other: &ChainMap, op: impl Fn(&FreeMap, &FreeMap) -> Result<FreeMap>) -> Result<ChainMap> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi().min(other.hi());
        let comps =
            (lo..=hi).map(|n| op(&self.try_component(n)?, &other.try_component(n)?)).collect::<Result<Vec<_>>>()?;
        Self::from_parts(&self.source, &self.target, lo, comps)
    }

    pub fn sub(&self, other: &ChainMap) -> Result<ChainMap> {
        self.zip(other, |a, b| a.sub(b))
    }

    pub fn add(&self, other: &ChainMap) -> Result<ChainMap> {
        self.zip(other, |a, b| a.add(b))
    }

    pub fn neg(&self) -> ChainMap {
        ChainMap { comps: self.comps.iter().map(FreeMap::neg).collect(), ..self.clone() }
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(FreeMap::is_zero)
    }

    /// `f*: Y* -> X*` for `f: X -> Y`, with `(f*)_n = (f_{-n})^T`.
    pub fn dualize(&self) -> Result<ChainMap> {
        let (lo, hi) = self.window();
        let src = self.target.extend_to(lo, hi)?.dualize();
        let tgt = self.source.extend_to(lo, hi)?.dualize();
        let comps = (-hi..=-lo).map(|n| self.comps[(-n - lo) as usize].transpose()).collect();
        Self::from_parts(&src, &tgt, -hi, comps)
    }

    /// `Sigma^k f`, with `(Sigma^k f)_n = f_{n-k}`.
    pub fn shift(&self, k: i64) -> ChainMap {
        ChainMap {
            source: self.source.shift(k),
            target: self.target.shift(k),
            lo: self.lo + k,
            comps: self.comps.clone(),
            period: self.period,
        }
    }

    /// Same components regarded between replacement complexes with equal
    /// ranks (e.g. an extended window of the same complex).
    pub fn retarget(&self, source: &ChainComplex, target: &ChainComplex) -> Result<ChainMap> {
        Self::from_parts(source, target, self.lo, self.comps.clone())
    }
}

/// Maps `s_n: C_n -> D_{n+1}` for `n` in `[lo - 1, hi]`, certifying
/// `f_n - g_n = s_{n-1} d(n) + d'(n+1) s_n` for `n` in `[lo, hi]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Homotopy {
    lo: i64,
    comps: Vec<FreeMap>,
}

impl Homotopy {
    /// `comps[k]` is `s_{lo - 1 + k}`.
    pub fn new(lo: i64, comps: Vec<FreeMap>) -> Homotopy {
        Homotopy { lo, comps }
    }

    pub fn zero(source: &ChainComplex, target: &ChainComplex, lo: i64, hi: i64) -> Result<Homotopy> {
        let r = source.ring();
        let comps = (lo - 1..=hi)
            .map(|n| Ok(FreeMap::zero(r, target.try_rank(n + 1)?, source.try_rank(n)?)))
            .collect::<Result<_>>()?;
        Ok(Homotopy { lo, comps })
    }

    /// Certified window `[lo, hi]`.
    pub fn window(&self) -> (i64, i64) {
        (self.lo, self.lo + self.comps.len() as i64 - 2)
    }

    pub fn component(&self, n: i64) -> &FreeMap {
        &self.comps[(n - self.lo + 1) as usize]
    }

    pub fn components(&self) -> &[FreeMap] {
        &self.comps
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(FreeMap::is_zero)
    }

    /// Checks the homotopy identity for `f - g` on the certified window.
    pub fn certifies(&self, f: &ChainMap, g: &ChainMap) -> bool {
        let (lo, hi) = self.window();
        let (src, tgt) = (f.source(), f.target());
        (lo..=hi).all(|n| {
            let (Ok(fa), Ok(ga), Ok(dn), Ok(dn1)) =
                (f.try_component(n), g.try_component(n), src.try_d(n), tgt.try_d(n + 1))
            else {
                return false;
            };
            let lhs = fa.minus(&ga);
            let rhs = self.component(n - 1).mul(&dn).plus(&dn1.mul(self.component(n)));
            lhs == rhs
        })
    }

    pub fn neg(&self) -> Homotopy {
        Homotopy { lo: self.lo, comps: self.comps.iter().map(FreeMap::neg).collect() }
    }
}
