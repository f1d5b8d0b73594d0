//! Presented rings `F_p[x_0..x_{n-1}] / I`.
//!
//! A ring keeps the reduced Gröbner basis of its ideal from construction on.
//! Rings built with [`QuotientRing::quotient`] remember their parent and the
//! extra generators, which is how the surjection `Q -> R` is presented.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::groebner::{ModVec, ModuleGb};
use crate::poly::{Poly, PolyRing};

static NEXT_ID: AtomicU64 = AtomicU64::new(1);

/// Shape of a ring relevant to complete resolutions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RingClass {
    /// The ideal is zero.
    Regular,
    /// The ideal is principal and nonzero.
    Hypersurface,
    /// Homogeneous ideal whose Gröbner basis has pairwise coprime leading
    /// monomials, so the basis is a regular sequence.
    CompleteIntersection {
        artinian: bool,
    },
    /// Finite dimensional over the field.
    Artinian,
    Other,
}

impl RingClass {
    pub fn is_artinian(self) -> bool {
        matches!(self, RingClass::Artinian | RingClass::CompleteIntersection { artinian: true })
    }
}

struct RingData {
    id: u64,
    name: String,
    poly: PolyRing,
    gens: Vec<Poly>,
    gb: Vec<Poly>,
    parent: Option<(QuotientRing, Vec<Poly>)>,
    class: OnceLock<RingClass>,
}

/// Cheap to clone; equality is identity of the constructed ring.
#[derive(Clone)]
pub struct QuotientRing(Arc<RingData>);

impl QuotientRing {
    pub fn polynomial(field: PrimeField, names: &[&str]) -> Result<Self> {
        Self::new(field, names, &[])
    }

    /// Ring with ideal generated by `relations`, each parsed in the ambient ring.
    pub fn new(field: PrimeField, names: &[&str], relations: &[&str]) -> Result<Self> {
        let poly = PolyRing::new(field, names.iter().map(|s| s.to_string()).collect())?;
        let gens = relations.iter().map(|r| poly.parse(r)).collect::<Result<Vec<_>>>()?;
        Ok(Self::from_parts(poly, gens, None))
    }

    pub fn from_polys(poly: PolyRing, gens: Vec<Poly>) -> Self {
        Self::from_parts(poly, gens, None)
    }

    fn from_parts(poly: PolyRing, gens: Vec<Poly>, parent: Option<(QuotientRing, Vec<Poly>)>) -> Self {
        let gens: Vec<Poly> = gens.into_iter().filter(|g| !g.is_zero()).collect();
        let gb = ideal_basis(&gens, poly.field());
        let id = NEXT_ID.fetch_add(1, Ordering::Relaxed);
        QuotientRing(Arc::new(RingData { id, name: String::new(), poly, gens, gb, parent, class: OnceLock::new() }))
    }

    /// `self / (extra)`; the result records `self` as its parent.
    pub fn quotient(&self, extra: &[Poly]) -> QuotientRing {
        let mut gens = self.0.gens.clone();
        gens.extend(extra.iter().cloned());
        let extra: Vec<Poly> = extra.iter().map(|p| self.reduce(p)).collect();
        Self::from_parts(self.0.poly.clone(), gens, Some((self.clone(), extra)))
    }

    pub fn quotient_str(&self, extra: &[&str]) -> Result<QuotientRing> {
        let ps = extra.iter().map(|s| self.0.poly.parse(s)).collect::<Result<Vec<_>>>()?;
        Ok(self.quotient(&ps))
    }

    /// Same ring with a display name attached.
    pub fn named(self, name: &str) -> QuotientRing {
        let d = &self.0;
        QuotientRing(Arc::new(RingData {
            id: d.id,
            name: name.to_string(),
            poly: d.poly.clone(),
            gens: d.gens.clone(),
            gb: d.gb.clone(),
            parent: d.parent.clone(),
            class: d.class.clone(),
        }))
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    pub fn id(&self) -> u64 {
        self.0.id
    }

    pub fn poly_ring(&self) -> &PolyRing {
        &self.0.poly
    }

    pub fn field(&self) -> &PrimeField {
        self.0.poly.field()
    }

    pub fn nvars(&self) -> usize {
        self.0.poly.nvars()
    }

    pub fn names(&self) -> &[String] {
        self.0.poly.names()
    }

    /// Generators as declared, parent generators first.
    pub fn ideal_generators(&self) -> &[Poly] {
        &self.0.gens
    }

    /// Reduced Gröbner basis of the ideal, descending by leading monomial.
    pub fn ideal_basis(&self) -> &[Poly] {
        &self.0.gb
    }

    pub fn parent(&self) -> Option<&QuotientRing> {
        self.0.parent.as_ref().map(|(p, _)| p)
    }

    /// Generators of the kernel of `parent -> self`, reduced in the parent.
    pub fn extra_generators(&self) -> &[Poly] {
        self.0.parent.as_ref().map(|(_, e)| e.as_slice()).unwrap_or(&[])
    }

    /// `true` when `self` is `other` or a quotient of it over the same
    /// ambient ring.
    pub fn is_quotient_of(&self, other: &QuotientRing) -> bool {
        if self.0.poly != other.0.poly {
            return false;
        }
        other.0.gb.iter().all(|g| self.reduce(g).is_zero())
    }

    /// Reduced generators of `ker(other -> self)`; requires `is_quotient_of`.
    pub fn kernel_from(&self, other: &QuotientRing) -> Result<Vec<Poly>> {
        if !self.is_quotient_of(other) {
            return Err(Error::RingMismatch("target is not a quotient of the source ring".into()));
        }
        if let Some((p, e)) = &self.0.parent {
            if p == other {
                return Ok(e.iter().filter(|g| !g.is_zero()).cloned().collect());
            }
        }
        Ok(self.0.gb.iter().map(|g| other.reduce(g)).filter(|g| !g.is_zero()).collect())
    }

    pub fn reduce(&self, p: &Poly) -> Poly {
        reduce_by(p, &self.0.gb, self.field())
    }

    pub fn is_zero(&self, p: &Poly) -> bool {
        self.reduce(p).is_zero()
    }

    pub fn zero(&self) -> Poly {
        Poly::zero()
    }

    pub fn one(&self) -> Poly {
        self.reduce(&Poly::one(self.nvars()))
    }

    pub fn constant(&self, c: i64) -> Poly {
        self.reduce(&self.0.poly.constant(c))
    }

    pub fn var(&self, i: usize) -> Poly {
        self.reduce(&self.0.poly.var(i))
    }

    pub fn add(&self, a: &Poly, b: &Poly) -> Poly {
        a.add(b, self.field())
    }

    pub fn sub(&self, a: &Poly, b: &Poly) -> Poly {
        a.sub(b, self.field())
    }

    pub fn neg(&self, a: &Poly) -> Poly {
        a.neg(self.field())
    }

    pub fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        self.reduce(&a.mul(b, self.field()))
    }

    pub fn parse(&self, text: &str) -> Result<Poly> {
        Ok(self.reduce(&self.0.poly.parse(text)?))
    }

    pub fn format(&self, p: &Poly) -> String {
        self.0.poly.format(p)
    }

    /// Nonzero constant, hence a unit in every presented ring we handle.
    pub fn is_constant_unit(&self, p: &Poly) -> bool {
        p.as_constant().is_some_and(|c| c != 0)
    }

    /// Zero or a constant-free polynomial: lies in the ideal of the origin.
    pub fn in_maximal_ideal(&self, p: &Poly) -> bool {
        p.constant_term() == 0
    }

    /// The ideal is homogeneous, i.e. generated by its homogeneous basis.
    pub fn is_graded(&self) -> bool {
        self.0.gb.iter().all(|g| g.is_homogeneous())
    }

    pub fn class(&self) -> RingClass {
        *self.0.class.get_or_init(|| classify(&self.0.gb, self.nvars()))
    }

    /// Compact description, e.g. `F_32003[x,y]/(x^2, y^2)`.
    pub fn describe(&self) -> String {
        let vars = self.names().join(",");
        let p = self.field().characteristic();
        if self.0.gb.is_empty() {
            format!("F_{p}[{vars}]")
        } else {
            let ideal: Vec<String> = self.0.gb.iter().map(|g| self.format(g)).collect();
            format!("F_{p}[{vars}]/({})", ideal.join(", "))
        }
    }
}

impl PartialEq for QuotientRing {
    fn eq(&self, other: &Self) -> bool {
        self.0.id == other.0.id
    }
}

impl Eq for QuotientRing {}

impl Hash for QuotientRing {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.id.hash(state);
    }
}

impl fmt::Debug for QuotientRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QuotientRing#{}({})", self.0.id, self.describe())
    }
}

fn ideal_basis(gens: &[Poly], field: &PrimeField) -> Vec<Poly> {
    if gens.is_empty() {
        return Vec::new();
    }
    let vecs: Vec<ModVec> = gens.iter().map(|g| ModVec::from_components(std::slice::from_ref(g))).collect();
    let gb = ModuleGb::compute(&vecs, 1, &[], field);
    gb.basis().map(|v| v.to_components(1).pop().unwrap()).collect()
}

/// Full reduction of a polynomial by a reduced basis.
pub(crate) fn reduce_by(p: &Poly, basis: &[Poly], f: &PrimeField) -> Poly {
    if basis.is_empty() || p.is_zero() {
        return p.clone();
    }
    let mut rem = Vec::new();
    let mut cur = p.clone();
    while let Some(t) = cur.lead().cloned() {
        match basis.iter().find(|g| g.lead_mono().unwrap().divides(&t.mono)) {
            Some(g) => {
                let lt = g.lead().unwrap();
                let q = lt.mono.quotient_of(&t.mono);
                let c = f.neg(f.mul(t.coeff, f.inv(lt.coeff)));
                cur = cur.add_scaled(c, &q, g, f);
            }
            None => {
                rem.push(t);
                cur = Poly::from_sorted_terms(cur.into_terms().split_off(1));
            }
        }
    }
    Poly::from_sorted_terms(rem)
}

fn classify(gb: &[Poly], nvars: usize) -> RingClass {
    if gb.is_empty() {
        return RingClass::Regular;
    }
    if gb.len() == 1 {
        return RingClass::Hypersurface;
    }
    let leads: Vec<_> = gb.iter().map(|g| g.lead_mono().unwrap().clone()).collect();
    let artinian = (0..nvars).all(|i| leads.iter().any(|m| m.pure_power_of() == Some(i)));
    let coprime = leads.iter().enumerate().all(|(i, a)| leads[i + 1..].iter().all(|b| a.is_coprime(b)));
    let graded = gb.iter().all(|g| g.is_homogeneous());
    if coprime && graded {
        RingClass::CompleteIntersection { artinian }
    } else if artinian {
        RingClass::Artinian
    } else {
        RingClass::Other
    }
}
