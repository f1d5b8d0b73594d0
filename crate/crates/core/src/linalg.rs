//! Matrices over presented rings and the linear algebra built on module
//! Gröbner bases: normal forms, membership with witnesses, syzygies, and
//! solving `A X = B`, `X A = B` and small block systems.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::field::Coeff;
use crate::groebner::{ModVec, ModuleGb};
use crate::poly::Poly;
use crate::ring::QuotientRing;

/// An element of `ring^rank`, components reduced.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VectorElement {
    pub components: Vec<Poly>,
}

impl VectorElement {
    pub fn new(components: Vec<Poly>) -> Self {
        VectorElement { components }
    }

    pub fn zero(rank: usize) -> Self {
        VectorElement { components: vec![Poly::zero(); rank] }
    }

    pub fn rank(&self) -> usize {
        self.components.len()
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Poly::is_zero)
    }
}

fn check_ranks(vs: &[&VectorElement], rank: usize) -> Result<()> {
    for v in vs {
        if v.rank() != rank {
            return Err(Error::RankMismatch { expected: rank, found: v.rank() });
        }
    }
    Ok(())
}

/// Reduced Gröbner basis of `<generators> + I * ring^rank`, reported without
/// the pure elements `h * e_i` already implied by the ideal.
pub fn buchberger(generators: &[VectorElement], ring: &QuotientRing) -> Result<Vec<VectorElement>> {
    let Some(first) = generators.first() else { return Ok(Vec::new()) };
    let rank = first.rank();
    check_ranks(&generators.iter().collect::<Vec<_>>(), rank)?;
    let vecs: Vec<ModVec> = generators.iter().map(|g| ModVec::from_components(&g.components)).collect();
    let gb = ModuleGb::compute(&vecs, rank, ring.ideal_basis(), ring.field());
    Ok(gb.generators().map(|v| VectorElement::new(v.to_components(rank))).collect())
}

/// Reduced Gröbner basis including the pure ideal elements, which is what the
/// ambient-ring computation returns.
pub fn buchberger_ambient(generators: &[VectorElement], ring: &QuotientRing) -> Result<Vec<VectorElement>> {
    let Some(first) = generators.first() else { return Ok(Vec::new()) };
    let rank = first.rank();
    check_ranks(&generators.iter().collect::<Vec<_>>(), rank)?;
    let vecs: Vec<ModVec> = generators.iter().map(|g| ModVec::from_components(&g.components)).collect();
    let gb = ModuleGb::compute(&vecs, rank, ring.ideal_basis(), ring.field());
    Ok(gb.basis().map(|v| VectorElement::new(v.to_components(rank))).collect())
}

/// Remainder of `v` modulo a Gröbner basis (as returned by [`buchberger`]) and
/// the ring's ideal.
pub fn normal_form(v: &VectorElement, basis: &[VectorElement], ring: &QuotientRing) -> Result<VectorElement> {
    let rank = v.rank();
    check_ranks(&basis.iter().collect::<Vec<_>>(), rank)?;
    let vecs: Vec<ModVec> = basis.iter().map(|g| ModVec::from_components(&g.components)).collect();
    // recomputing is cheap on a reduced basis and restores the reducer index
    let gb = ModuleGb::compute(&vecs, rank, ring.ideal_basis(), ring.field());
    Ok(VectorElement::new(gb.reduce(&ModVec::from_components(&v.components)).to_components(rank)))
}

/// Coefficients `c` with `v = sum c_i generators_i` in the ring, or
/// [`Error::NotMember`].
pub fn membership_with_witness(
    v: &VectorElement,
    generators: &[VectorElement],
    ring: &QuotientRing,
) -> Result<Vec<Poly>> {
    let rank = v.rank();
    check_ranks(&generators.iter().collect::<Vec<_>>(), rank)?;
    let cols: Vec<Vec<Poly>> = generators.iter().map(|g| g.components.clone()).collect();
    let a = FreeMap::from_columns(ring, rank, cols)?;
    let x = Solver::cached(&a).solve_vector(&v.components).ok_or(Error::NotMember)?;
    debug_assert_eq!(a.apply(&x), v.components.iter().map(|p| ring.reduce(p)).collect::<Vec<_>>());
    Ok(x)
}

/// Matrix of reduced polynomials; column-major storage.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FreeMap {
    ring: QuotientRing,
    rows: usize,
    cols: Vec<Vec<Poly>>,
}

impl FreeMap {
    pub fn zero(ring: &QuotientRing, rows: usize, cols: usize) -> Self {
        FreeMap { ring: ring.clone(), rows, cols: vec![vec![Poly::zero(); rows]; cols] }
    }

    pub fn identity(ring: &QuotientRing, n: usize) -> Self {
        let mut m = Self::zero(ring, n, n);
        for i in 0..n {
            m.cols[i][i] = ring.one();
        }
        m
    }

    /// Scalar matrix `c * I`.
    pub fn scalar(ring: &QuotientRing, n: usize, c: &Poly) -> Self {
        let mut m = Self::zero(ring, n, n);
        let c = ring.reduce(c);
        for i in 0..n {
            m.cols[i][i] = c.clone();
        }
        m
    }

    /// Row-major input; entries are reduced into the ring.
    pub fn from_rows(ring: &QuotientRing, rows: usize, cols: usize, data: Vec<Vec<Poly>>) -> Result<Self> {
        if data.len() != rows || data.iter().any(|r| r.len() != cols) {
            return Err(Error::Shape(format!("expected {rows}x{cols} entries")));
        }
        let mut m = Self::zero(ring, rows, cols);
        for (i, r) in data.into_iter().enumerate() {
            for (j, e) in r.into_iter().enumerate() {
                m.cols[j][i] = ring.reduce(&e);
            }
        }
        Ok(m)
    }

    pub fn from_columns(ring: &QuotientRing, rows: usize, cols: Vec<Vec<Poly>>) -> Result<Self> {
        if cols.iter().any(|c| c.len() != rows) {
            return Err(Error::Shape(format!("every column needs {rows} entries")));
        }
        let cols = cols.into_iter().map(|c| c.iter().map(|p| ring.reduce(p)).collect()).collect();
        Ok(FreeMap { ring: ring.clone(), rows, cols })
    }

    /// Parses rows of polynomial text.
    pub fn parse_rows(ring: &QuotientRing, rows: usize, cols: usize, text: &[Vec<&str>]) -> Result<Self> {
        let data = text
            .iter()
            .map(|r| r.iter().map(|s| ring.parse(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(ring, rows, cols, data)
    }

    pub(crate) fn from_reduced_columns(ring: &QuotientRing, rows: usize, cols: Vec<Vec<Poly>>) -> Self {
        FreeMap { ring: ring.clone(), rows, cols }
    }

    pub fn ring(&self) -> &QuotientRing {
        &self.ring
    }

    /// Target rank.
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Source rank.
    pub fn cols(&self) -> usize {
        self.cols.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> &Poly {
        &self.cols[j][i]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Poly) {
        self.cols[j][i] = self.ring.reduce(&p);
    }

    pub fn column(&self, j: usize) -> &[Poly] {
        &self.cols[j]
    }

    pub fn columns(&self) -> &[Vec<Poly>] {
        &self.cols
    }

    pub fn row(&self, i: usize) -> Vec<Poly> {
        self.cols.iter().map(|c| c[i].clone()).collect()
    }

    pub fn rows_data(&self) -> Vec<Vec<Poly>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.iter().all(Poly::is_zero))
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols() && *self == Self::identity(&self.ring, self.rows)
    }

    pub fn same_shape(&self, other: &FreeMap) -> bool {
        self.rows == other.rows && self.cols() == other.cols()
    }

    fn check_ring(&self, other: &FreeMap) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch("matrices over different rings".into()));
        }
        Ok(())
    }

    pub fn apply(&self, v: &[Poly]) -> Vec<Poly> {
        let r = &self.ring;
        let f = r.field();
        let mut out = vec![Poly::zero(); self.rows];
        for (j, c) in self.cols.iter().enumerate() {
            if v[j].is_zero() {
                continue;
            }
            for (i, e) in c.iter().enumerate() {
                if !e.is_zero() {
                    out[i] = out[i].add(&e.mul(&v[j], f), f);
                }
            }
        }
        out.iter().map(|p| r.reduce(p)).collect()
    }

    /// `self * other`.
    pub fn compose(&self, other: &FreeMap) -> Result<FreeMap> {
        self.check_ring(other)?;
        if self.cols() != other.rows {
            return Err(Error::Shape(format!(
                "cannot compose {}x{} with {}x{}",
                self.rows,
                self.cols(),
                other.rows,
                other.cols()
            )));
        }
        let cols = other.cols.iter().map(|c| self.apply(c)).collect();
        Ok(FreeMap { ring: self.ring.clone(), rows: self.rows, cols })
    }

    /// Panicking composition for internally consistent shapes.
    pub fn mul(&self, other: &FreeMap) -> FreeMap {
        self.compose(other).expect("matrix shapes agree")
    }

    fn zip(&self, other: &FreeMap, op: impl Fn(&Poly, &Poly) -> Poly) -> Result<FreeMap> {
        self.check_ring(other)?;
        if !self.same_shape(other) {
            return Err(Error::Shape("matrix sizes differ".into()));
        }
        let cols =
            self.cols.iter().zip(&other.cols).map(|(a, b)| a.iter().zip(b).map(|(x, y)| op(x, y)).collect()).collect();
        Ok(FreeMap { ring: self.ring.clone(), rows: self.rows, cols })
    }

    pub fn add(&self, other: &FreeMap) -> Result<FreeMap> {
        let f = *self.ring.field();
        self.zip(other, |a, b| a.add(b, &f))
    }

    pub fn sub(&self, other: &FreeMap) -> Result<FreeMap> {
        let f = *self.ring.field();
        self.zip(other, |a, b| a.sub(b, &f))
    }

    pub fn plus(&self, other: &FreeMap) -> FreeMap {
        self.add(other).expect("matrix shapes agree")
    }

    pub fn minus(&self, other: &FreeMap) -> FreeMap {
        self.sub(other).expect("matrix shapes agree")
    }

    pub fn neg(&self) -> FreeMap {
        let f = *self.ring.field();
        self.map_entries(|p| p.neg(&f))
    }

    pub fn scale(&self, c: &Poly) -> FreeMap {
        let r = self.ring.clone();
        self.map_entries(|p| r.mul(p, c))
    }

    pub fn scale_sign(&self, sign: i64) -> FreeMap {
        if sign >= 0 {
            self.clone()
        } else {
            self.neg()
        }
    }

    fn map_entries(&self, f: impl Fn(&Poly) -> Poly) -> FreeMap {
        let cols = self.cols.iter().map(|c| c.iter().map(&f).collect()).collect();
        FreeMap { ring: self.ring.clone(), rows: self.rows, cols }
    }

    pub fn transpose(&self) -> FreeMap {
        let cols = (0..self.rows).map(|i| self.row(i)).collect();
        FreeMap { ring: self.ring.clone(), rows: self.cols(), cols }
    }

    /// Entries reduced into `target`, which must be a quotient of this ring.
    pub fn base_change(&self, target: &QuotientRing) -> Result<FreeMap> {
        if !target.is_quotient_of(&self.ring) {
            return Err(Error::RingMismatch("base change target is not a quotient".into()));
        }
        let cols = self.cols.iter().map(|c| c.iter().map(|p| target.reduce(p)).collect()).collect();
        Ok(FreeMap { ring: target.clone(), rows: self.rows, cols })
    }

    /// Same entries regarded over `target` without re-reduction; used when the
    /// entries are already reduced there (e.g. lifting to a parent ring).
    pub fn reinterpret(&self, target: &QuotientRing) -> FreeMap {
        let cols = self.cols.iter().map(|c| c.iter().map(|p| target.reduce(p)).collect()).collect();
        FreeMap { ring: target.clone(), rows: self.rows, cols }
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> FreeMap {
        let c = self.cols[cols].iter().map(|c| c[rows.clone()].to_vec()).collect();
        FreeMap { ring: self.ring.clone(), rows: rows.len(), cols: c }
    }

    pub fn select_columns(&self, idx: &[usize]) -> FreeMap {
        FreeMap { ring: self.ring.clone(), rows: self.rows, cols: idx.iter().map(|&j| self.cols[j].clone()).collect() }
    }

    pub fn select_rows(&self, idx: &[usize]) -> FreeMap {
        let cols = self.cols.iter().map(|c| idx.iter().map(|&i| c[i].clone()).collect()).collect();
        FreeMap { ring: self.ring.clone(), rows: idx.len(), cols }
    }

    /// `[self other]`.
    pub fn hstack(&self, other: &FreeMap) -> FreeMap {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        let mut cols = self.cols.clone();
        cols.extend(other.cols.iter().cloned());
        FreeMap { ring: self.ring.clone(), rows: self.rows, cols }
    }

    /// `[self; other]`.
    pub fn vstack(&self, other: &FreeMap) -> FreeMap {
        assert_eq!(self.cols(), other.cols(), "vstack column mismatch");
        let cols = self.cols.iter().zip(&other.cols).map(|(a, b)| a.iter().chain(b).cloned().collect()).collect();
        FreeMap { ring: self.ring.clone(), rows: self.rows + other.rows, cols }
    }

    /// Block matrix from a row-major grid of blocks with consistent sizes.
    pub fn blocks(grid: &[Vec<FreeMap>]) -> FreeMap {
        let rows: Vec<FreeMap> = grid
            .iter()
            .map(|r| {
                let mut acc = r[0].clone();
                for b in &r[1..] {
                    acc = acc.hstack(b);
                }
                acc
            })
            .collect();
        let mut acc = rows[0].clone();
        for r in &rows[1..] {
            acc = acc.vstack(r);
        }
        acc
    }

    pub fn block_diag(&self, other: &FreeMap) -> FreeMap {
        let r = &self.ring;
        FreeMap::blocks(&[
            vec![self.clone(), FreeMap::zero(r, self.rows, other.cols())],
            vec![FreeMap::zero(r, other.rows, self.cols()), other.clone()],
        ])
    }

    /// `true` when no entry has a nonzero constant term.
    pub fn is_minimal(&self) -> bool {
        self.cols.iter().all(|c| c.iter().all(|p| self.ring.in_maximal_ideal(p)))
    }

    /// Rank of the matrix of constant terms, i.e. the rank over the residue
    /// field `k`.
    pub fn residue_rank(&self) -> usize {
        let f = self.ring.field();
        let mut m: Vec<Vec<Coeff>> =
            (0..self.rows).map(|i| self.cols.iter().map(|c| c[i].constant_term()).collect()).collect();
        let mut rank = 0;
        for j in 0..self.cols() {
            let Some(p) = (rank..self.rows).find(|&i| m[i][j] != 0) else { continue };
            m.swap(rank, p);
            let inv = f.inv(m[rank][j]);
            for i in 0..self.rows {
                if i != rank && m[i][j] != 0 {
                    let c = f.mul(m[i][j], inv);
                    for k in j..self.cols() {
                        let v = f.mul(c, m[rank][k]);
                        m[i][k] = f.sub(m[i][k], v);
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    /// Row-major text using the ring's polynomial grammar, e.g. `[[x, -y], [0, x]]`.
    pub fn to_text(&self) -> String {
        let rows: Vec<String> = (0..self.rows)
            .map(|i| {
                let es: Vec<String> = self.cols.iter().map(|c| self.ring.format(&c[i])).collect();
                format!("[{}]", es.join(", "))
            })
            .collect();
        format!("[{}]", rows.join(", "))
    }
}

impl fmt::Debug for FreeMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FreeMap{}x{}{}", self.rows, self.cols(), self.to_text())
    }
}

impl fmt::Display for FreeMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Membership and syzygy engine for the column module of a fixed matrix `A`
/// (`t x s`). Works in `P^{t+s}` with generators `(A_j ; e_j)`, target
/// components first, so that normal forms of `(v ; 0)` expose both membership
/// and a witness.
pub struct Solver {
    a: FreeMap,
    gb: ModuleGb,
    syz: OnceLock<Vec<Vec<Poly>>>,
}

type SolverCache = Mutex<HashMap<FreeMap, Arc<Solver>>>;

fn cache() -> &'static SolverCache {
    static CACHE: OnceLock<SolverCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

impl Solver {
    pub fn new(a: &FreeMap) -> Solver {
        let t = a.rows();
        let s = a.cols();
        let nv = a.ring().nvars();
        let gens: Vec<ModVec> = (0..s)
            .map(|j| {
                let mut comps = a.column(j).to_vec();
                comps.extend((0..s).map(|k| if k == j { Poly::one(nv) } else { Poly::zero() }));
                ModVec::from_components(&comps)
            })
            .collect();
        let gb = ModuleGb::compute(&gens, t + s, a.ring().ideal_basis(), a.ring().field());
        Solver { a: a.clone(), gb, syz: OnceLock::new() }
    }

    /// Shared solver for `a`; entries are computed once per matrix.
    pub fn cached(a: &FreeMap) -> Arc<Solver> {
        let hit = cache().lock().unwrap().get(a).cloned();
        if let Some(s) = hit {
            return s;
        }
        let s = Arc::new(Solver::new(a));
        cache().lock().unwrap().entry(a.clone()).or_insert(s).clone()
    }

    pub fn matrix(&self) -> &FreeMap {
        &self.a
    }

    /// `x` with `A x = v`, if `v` is in the column module.
    pub fn solve_vector(&self, v: &[Poly]) -> Option<Vec<Poly>> {
        let t = self.a.rows();
        let s = self.a.cols();
        let ring = self.a.ring();
        let mut comps: Vec<Poly> = v.iter().map(|p| ring.reduce(p)).collect();
        comps.extend(std::iter::repeat_n(Poly::zero(), s));
        let nf = self.gb.reduce(&ModVec::from_components(&comps));
        if !nf.supported_from(t as u32) {
            return None;
        }
        let mut parts = nf.to_components(t + s);
        let bottom = parts.split_off(t);
        Some(bottom.iter().map(|p| ring.reduce(&ring.neg(p))).collect())
    }

    pub fn contains(&self, v: &[Poly]) -> bool {
        self.solve_vector(v).is_some()
    }

    /// Generators of `ker A`, before minimization, ordered by ascending degree
    /// of the leading term and then by descending POT order.
    fn raw_syzygies(&self) -> &[Vec<Poly>] {
        self.syz.get_or_init(|| {
            let t = self.a.rows() as u32;
            let s = self.a.cols();
            let ring = self.a.ring();
            let mut found: Vec<(u32, usize, Vec<Poly>)> = self
                .gb
                .generators()
                .filter(|v| v.lead_comp().is_some_and(|c| c >= t))
                .enumerate()
                .map(|(k, v)| {
                    let deg = v.lead().unwrap().mono.degree();
                    let mut comps = v.to_components(t as usize + s);
                    comps.drain(..t as usize).for_each(drop);
                    (deg, k, comps.iter().map(|p| ring.reduce(p)).collect::<Vec<_>>())
                })
                .filter(|(_, _, c)| c.iter().any(|p| !p.is_zero()))
                .collect();
            found.sort_by_key(|(deg, k, _)| (*deg, *k));
            found.into_iter().map(|(_, _, c)| c).collect()
        })
    }
}

/// Right solve `A X = B`.
pub fn solve_right(a: &FreeMap, b: &FreeMap) -> Option<FreeMap> {
    if a.rows() != b.rows() {
        return None;
    }
    let solver = Solver::cached(a);
    let cols = b.columns().iter().map(|c| solver.solve_vector(c)).collect::<Option<Vec<_>>>()?;
    Some(FreeMap::from_reduced_columns(a.ring(), a.cols(), cols))
}

/// Left solve `X A = B`, via `A^T X^T = B^T`.
pub fn solve_left(a: &FreeMap, b: &FreeMap) -> Option<FreeMap> {
    if a.cols() != b.cols() {
        return None;
    }
    solve_right(&a.transpose(), &b.transpose()).map(|x| x.transpose())
}

/// Makes the leading coefficient of the last nonzero component 1.
fn normalize_last(col: &mut [Poly], ring: &QuotientRing) {
    if let Some(p) = col.iter().rev().find(|p| !p.is_zero()) {
        let c = p.lead().unwrap().coeff;
        if c != 1 {
            let inv = ring.field().inv(c);
            for q in col.iter_mut() {
                *q = q.scale(inv, ring.field());
            }
        }
    }
}

/// Drops columns lying in the span of the remaining ones, scanning from the
/// last column backwards.
pub fn irredundant_columns(cols: Vec<Vec<Poly>>, rows: usize, ring: &QuotientRing) -> Vec<Vec<Poly>> {
    let mut keep: Vec<bool> = cols.iter().map(|c| c.iter().any(|p| !p.is_zero())).collect();
    for k in (0..cols.len()).rev() {
        if !keep[k] {
            continue;
        }
        let others: Vec<Vec<Poly>> = (0..cols.len()).filter(|&j| j != k && keep[j]).map(|j| cols[j].clone()).collect();
        if others.is_empty() {
            continue;
        }
        let m = FreeMap::from_reduced_columns(ring, rows, others);
        if Solver::cached(&m).contains(&cols[k]) {
            keep[k] = false;
        }
    }
    cols.into_iter().zip(keep).filter(|(_, k)| *k).map(|(c, _)| c).collect()
}

/// Columns generating `ker m`, irredundant, each scaled so its last nonzero
/// component has leading coefficient 1. `m * syzygies(m)` is zero.
pub fn syzygies(m: &FreeMap) -> FreeMap {
    let ring = m.ring();
    let s = m.cols();
    if s == 0 {
        return FreeMap::zero(ring, 0, 0);
    }
    let raw = Solver::cached(m).raw_syzygies().to_vec();
    let mut cols = irredundant_columns(raw, s, ring);
    for c in &mut cols {
        normalize_last(c, ring);
    }
    FreeMap::from_reduced_columns(ring, s, cols)
}

/// Unknown block `X_k` of a [`LinearSystem`], of size `rows x cols`.
#[derive(Clone, Copy, Debug)]
pub struct Unknown {
    pub rows: usize,
    pub cols: usize,
}

/// Systems `sum_k L_k X_{u_k} R_k = C` (one or more equations) in matrix
/// unknowns, solved by vectorizing: `vec(L X R) = (R^T (x) L) vec(X)`.
pub struct LinearSystem {
    ring: QuotientRing,
    unknowns: Vec<Unknown>,
    equations: Vec<(usize, usize, Vec<(FreeMap, usize, FreeMap)>)>,
}

impl LinearSystem {
    pub fn new(ring: &QuotientRing, unknowns: Vec<Unknown>) -> Self {
        LinearSystem { ring: ring.clone(), unknowns, equations: Vec::new() }
    }

    /// Adds the equation `sum L X_u R = C`-shaped block of size `rows x cols`;
    /// the right-hand side is supplied in [`LinearSystem::solve`].
    pub fn equation(&mut self, rows: usize, cols: usize, terms: Vec<(FreeMap, usize, FreeMap)>) -> usize {
        for (l, u, r) in &terms {
            let x = self.unknowns[*u];
            assert!(l.rows() == rows && l.cols() == x.rows && r.rows() == x.cols && r.cols() == cols);
        }
        self.equations.push((rows, cols, terms));
        self.equations.len() - 1
    }

    fn offsets(&self) -> (Vec<usize>, usize) {
        let mut off = Vec::new();
        let mut acc = 0;
        for u in &self.unknowns {
            off.push(acc);
            acc += u.rows * u.cols;
        }
        (off, acc)
    }

    /// The coefficient matrix of the vectorized system.
    pub fn matrix(&self) -> FreeMap {
        let (off, nunk) = self.offsets();
        let neq: usize = self.equations.iter().map(|(r, c, _)| r * c).sum();
        let mut m = FreeMap::zero(&self.ring, neq, nunk);
        let f = *self.ring.field();
        let mut row0 = 0;
        for (rows, cols, terms) in &self.equations {
            for (l, u, r) in terms {
                let x = self.unknowns[*u];
                // entry (a + b*rows, i + j*x.rows) += R[j][b] * L[a][i]
                for b in 0..*cols {
                    for j in 0..x.cols {
                        let rjb = r.entry(j, b);
                        if rjb.is_zero() {
                            continue;
                        }
                        for a in 0..*rows {
                            for i in 0..x.rows {
                                let lai = l.entry(a, i);
                                if lai.is_zero() {
                                    continue;
                                }
                                let (ri, ci) = (row0 + a + b * rows, off[*u] + i + j * x.rows);
                                let cur = m.cols[ci][ri].clone();
                                m.cols[ci][ri] = cur.add(&rjb.mul(lai, &f), &f);
                            }
                        }
                    }
                }
            }
            row0 += rows * cols;
        }
        for c in &mut m.cols {
            for p in c.iter_mut() {
                *p = self.ring.reduce(p);
            }
        }
        m
    }

    fn unpack(&self, sol: &[Poly]) -> Vec<FreeMap> {
        let (off, _) = self.offsets();
        self.unknowns
            .iter()
            .zip(off)
            .map(|(u, o)| {
                let cols = (0..u.cols).map(|j| sol[o + j * u.rows..o + (j + 1) * u.rows].to_vec()).collect();
                FreeMap::from_reduced_columns(&self.ring, u.rows, cols)
            })
            .collect()
    }

    /// Solves with right-hand sides `rhs[e]` for each equation.
    pub fn solve(&self, rhs: &[FreeMap]) -> Option<Vec<FreeMap>> {
        let m = self.matrix();
        let mut v = Vec::new();
        for ((rows, cols, _), c) in self.equations.iter().zip(rhs) {
            assert!(c.rows() == *rows && c.cols() == *cols);
            for j in 0..*cols {
                v.extend(c.column(j).iter().cloned());
            }
        }
        let sol = Solver::cached(&m).solve_vector(&v)?;
        Some(self.unpack(&sol))
    }

    /// Generators of the solution module of the homogeneous system.
    pub fn kernel(&self) -> Vec<Vec<FreeMap>> {
        let m = self.matrix();
        let k = syzygies(&m);
        k.columns().iter().map(|c| self.unpack(c)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;

    fn q() -> QuotientRing {
        QuotientRing::new(PrimeField::default(), &["x", "y"], &["x^2"]).unwrap()
    }

    fn vecs(r: &QuotientRing, rows: &[&[&str]]) -> Vec<VectorElement> {
        rows.iter().map(|row| VectorElement::new(row.iter().map(|s| r.parse(s).unwrap()).collect())).collect()
    }

    #[test]
    fn membership_examples() {
        let p = QuotientRing::polynomial(PrimeField::default(), &["x", "y"]).unwrap();
        let w = membership_with_witness(&vecs(&p, &[&["x*y"]])[0], &vecs(&p, &[&["x"]]), &p).unwrap();
        assert_eq!(p.format(&w[0]), "y");
        let gens = vecs(&p, &[&["x^2"], &["y^2"]]);
        assert_eq!(membership_with_witness(&vecs(&p, &[&["y"]])[0], &gens, &p), Err(Error::NotMember));
        let q = q();
        let w = membership_with_witness(&vecs(&q, &[&["x*y"]])[0], &vecs(&q, &[&["x"]]), &q).unwrap();
        assert_eq!(q.format(&w[0]), "y");
    }

    #[test]
    fn syzygy_examples() {
        let p = QuotientRing::polynomial(PrimeField::default(), &["x", "y"]).unwrap();
        let a = FreeMap::parse_rows(&p, 1, 2, &[vec!["x", "y"]]).unwrap();
        let s = syzygies(&a);
        assert_eq!(s.cols(), 1);
        assert!(a.mul(&s).is_zero());
        let q = q();
        let a = FreeMap::parse_rows(&q, 1, 1, &[vec!["x"]]).unwrap();
        assert_eq!(syzygies(&a).to_text(), "[[x]]");
        let a = FreeMap::parse_rows(&q, 1, 2, &[vec!["x", "y"]]).unwrap();
        assert_eq!(syzygies(&a).to_text(), "[[x, -y], [0, x]]");
    }

    #[test]
    fn left_solve() {
        let q = q();
        let a = FreeMap::parse_rows(&q, 1, 2, &[vec!["x", "y"]]).unwrap();
        let b = FreeMap::parse_rows(&q, 1, 2, &[vec!["x*y", "y^2"]]).unwrap();
        let x = solve_left(&a, &b).unwrap();
        assert_eq!(x.mul(&a), b);
    }

    #[test]
    fn block_system() {
        let q = q();
        let a = FreeMap::parse_rows(&q, 2, 2, &[vec!["x", "y"], vec!["0", "x"]]).unwrap();
        let c = a.mul(&a.transpose());
        let mut sys = LinearSystem::new(&q, vec![Unknown { rows: 2, cols: 2 }]);
        sys.equation(2, 2, vec![(a.clone(), 0, FreeMap::identity(&q, 2))]);
        let x = sys.solve(&[c.clone()]).unwrap();
        assert_eq!(a.mul(&x[0]), c);
    }
}
