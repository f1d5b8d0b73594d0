//! Buchberger's algorithm for submodules of `P^r`, `P = F_p[x_0..x_{n-1}]`.
//!
//! Module terms `m * e_i` are ordered position-over-term: a smaller component
//! index is larger, ties broken by grevlex on `m`. Computation modulo an ideal
//! `I` is done by seeding the basis with `h * e_i` for every `h` in a reduced
//! Gröbner basis of `I` and every component `i`; those seeds are mutually
//! reduced already, so their pairwise S-vectors are never formed.
//!
//! Pair handling follows the Gebauer-Möller update. The coprime-leading-term
//! criterion is only applied to pairs of single-component vectors, where it
//! remains valid for modules.

use std::cmp::Ordering;

use crate::field::{Coeff, PrimeField};
use crate::monomial::Monomial;
use crate::poly::{Poly, Term};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModTerm {
    pub coeff: Coeff,
    pub comp: u32,
    pub mono: Monomial,
}

#[inline]
fn pos_cmp(ac: u32, am: &Monomial, bc: u32, bm: &Monomial) -> Ordering {
    bc.cmp(&ac).then_with(|| am.cmp(bm))
}

/// A vector of `P^r` as a POT-sorted list of module terms.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ModVec {
    terms: Vec<ModTerm>,
}

impl ModVec {
    pub fn zero() -> Self {
        ModVec { terms: Vec::new() }
    }

    /// Concatenates components; polynomial terms are already descending and
    /// components ascend, so the result is POT-sorted.
    pub fn from_components(components: &[Poly]) -> Self {
        let mut terms = Vec::new();
        for (i, p) in components.iter().enumerate() {
            for t in p.terms() {
                terms.push(ModTerm { coeff: t.coeff, comp: i as u32, mono: t.mono.clone() });
            }
        }
        ModVec { terms }
    }

    pub fn to_components(&self, rank: usize) -> Vec<Poly> {
        let mut buckets: Vec<Vec<Term>> = vec![Vec::new(); rank];
        for t in &self.terms {
            buckets[t.comp as usize].push(Term { coeff: t.coeff, mono: t.mono.clone() });
        }
        buckets.into_iter().map(Poly::from_sorted_terms).collect()
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    #[inline]
    pub fn terms(&self) -> &[ModTerm] {
        &self.terms
    }

    #[inline]
    pub fn lead(&self) -> Option<&ModTerm> {
        self.terms.first()
    }

    /// Component index of the leading term.
    pub fn lead_comp(&self) -> Option<u32> {
        self.terms.first().map(|t| t.comp)
    }

    /// `true` when every term lies in one component.
    pub fn is_single_component(&self) -> bool {
        match self.terms.first() {
            None => true,
            Some(t) => self.terms.iter().all(|s| s.comp == t.comp),
        }
    }

    /// All terms lie in components `>= from`.
    pub fn supported_from(&self, from: u32) -> bool {
        self.terms.iter().all(|t| t.comp >= from)
    }

    pub fn monic(&mut self, f: &PrimeField) {
        if let Some(t) = self.terms.first() {
            let inv = f.inv(t.coeff);
            if inv != 1 {
                for t in &mut self.terms {
                    t.coeff = f.mul(t.coeff, inv);
                }
            }
        }
    }

    pub fn scale(&mut self, c: Coeff, f: &PrimeField) {
        if c == 0 {
            self.terms.clear();
        } else {
            for t in &mut self.terms {
                t.coeff = f.mul(t.coeff, c);
            }
        }
    }

    /// Replaces `terms[from..]` with `terms[from..] + c * m * other`. The caller
    /// guarantees every term of `c * m * other` is at most `terms[from]`.
    fn add_scaled_from(
        &mut self,
        from: usize,
        c: Coeff,
        m: &Monomial,
        comp: Option<u32>,
        other: &[ModTerm],
        f: &PrimeField,
    ) {
        let tail = self.terms.split_off(from);
        let mut out = Vec::with_capacity(tail.len() + other.len());
        let mut a = tail.into_iter().peekable();
        let mut b = other
            .iter()
            .map(|t| ModTerm { coeff: f.mul(t.coeff, c), comp: comp.unwrap_or(t.comp), mono: t.mono.mul(m) })
            .peekable();
        loop {
            let ord = match (a.peek(), b.peek()) {
                (None, None) => break,
                (Some(_), None) => Ordering::Greater,
                (None, Some(_)) => Ordering::Less,
                (Some(x), Some(y)) => pos_cmp(x.comp, &x.mono, y.comp, &y.mono),
            };
            match ord {
                Ordering::Greater => out.push(a.next().unwrap()),
                Ordering::Less => out.push(b.next().unwrap()),
                Ordering::Equal => {
                    let x = a.next().unwrap();
                    let y = b.next().unwrap();
                    let s = f.add(x.coeff, y.coeff);
                    if s != 0 {
                        out.push(ModTerm { coeff: s, comp: x.comp, mono: x.mono });
                    }
                }
            }
        }
        self.terms.extend(out);
    }

    pub fn add_scaled(&mut self, c: Coeff, m: &Monomial, other: &ModVec, f: &PrimeField) {
        self.add_scaled_from(0, c, m, None, &other.terms, f);
    }

    pub fn add(&self, other: &ModVec, f: &PrimeField) -> ModVec {
        match other.terms.first() {
            None => self.clone(),
            Some(t) => {
                let mut out = self.clone();
                out.add_scaled(1, &Monomial::one(t.mono.nvars()), other, f);
                out
            }
        }
    }
}

/// One element of the working basis. Pure ideal seeds are flagged so the
/// caller can drop them from results.
#[derive(Clone, Debug)]
struct Elem {
    vec: ModVec,
    lead_comp: u32,
    lead_mono: Monomial,
    single: bool,
    ideal_seed: bool,
}

#[derive(Clone, Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    comp: u32,
}

/// Normal-form engine over a fixed set of reducers.
#[derive(Clone, Debug)]
pub struct Reducer {
    field: PrimeField,
    elems: Vec<Elem>,
    by_comp: Vec<Vec<usize>>,
}

impl Reducer {
    fn new(field: PrimeField, rank: usize) -> Self {
        Reducer { field, elems: Vec::new(), by_comp: vec![Vec::new(); rank] }
    }

    fn find_divisor(&self, comp: u32, mono: &Monomial) -> Option<usize> {
        self.by_comp[comp as usize].iter().copied().find(|&k| self.elems[k].lead_mono.divides(mono))
    }

    /// Full reduction: no term of the result is divisible by a leading term.
    pub fn reduce(&self, v: &ModVec) -> ModVec {
        self.reduce_impl(v.clone(), true)
    }

    fn reduce_impl(&self, mut v: ModVec, full: bool) -> ModVec {
        let f = &self.field;
        let mut i = 0;
        while i < v.terms.len() {
            let t = &v.terms[i];
            match self.find_divisor(t.comp, &t.mono) {
                Some(k) => {
                    let e = &self.elems[k];
                    let q = e.lead_mono.quotient_of(&t.mono);
                    // reducers are monic
                    let c = f.neg(t.coeff);
                    let other = e.vec.terms.clone();
                    v.add_scaled_from(i, c, &q, None, &other, f);
                }
                None => {
                    if !full {
                        return v;
                    }
                    i += 1;
                }
            }
        }
        v
    }

    fn push(&mut self, mut vec: ModVec, ideal_seed: bool) -> usize {
        vec.monic(&self.field);
        let lead = vec.lead().expect("nonzero basis element").clone();
        let idx = self.elems.len();
        self.elems.push(Elem {
            single: vec.is_single_component(),
            vec,
            lead_comp: lead.comp,
            lead_mono: lead.mono,
            ideal_seed,
        });
        self.by_comp[lead.comp as usize].push(idx);
        idx
    }

    fn deactivate(&mut self, idx: usize) {
        let c = self.elems[idx].lead_comp as usize;
        self.by_comp[c].retain(|&k| k != idx);
    }

    /// Active elements in POT-descending order of leading terms.
    fn active_sorted(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = self.by_comp.iter().flatten().copied().collect();
        idx.sort_by(|&a, &b| {
            let (ea, eb) = (&self.elems[a], &self.elems[b]);
            pos_cmp(eb.lead_comp, &eb.lead_mono, ea.lead_comp, &ea.lead_mono)
        });
        idx
    }
}

/// Output of a Gröbner basis computation.
#[derive(Clone, Debug)]
pub struct ModuleGb {
    rank: usize,
    reducer: Reducer,
    /// Reduced basis, POT-descending, together with the ideal-seed flag.
    basis: Vec<(ModVec, bool)>,
}

impl ModuleGb {
    /// Reduced Gröbner basis of `<gens> + I * P^rank`, where `ideal` is a reduced
    /// Gröbner basis of `I`.
    pub fn compute(gens: &[ModVec], rank: usize, ideal: &[Poly], field: &PrimeField) -> ModuleGb {
        let mut red = Reducer::new(*field, rank);
        if let Some(nv) = ideal.first().and_then(|h| h.lead_mono()).map(|m| m.nvars()) {
            let one = Monomial::one(nv);
            for c in 0..rank {
                for h in ideal {
                    let mut v = ModVec::zero();
                    let terms: Vec<ModTerm> = h
                        .terms()
                        .iter()
                        .map(|t| ModTerm { coeff: t.coeff, comp: c as u32, mono: t.mono.clone() })
                        .collect();
                    v.add_scaled_from(0, 1, &one, None, &terms, field);
                    red.push(v, true);
                }
            }
        }
        let mut pairs: Vec<Pair> = Vec::new();
        for g in gens {
            let r = red.reduce_impl(g.clone(), true);
            if !r.is_zero() {
                let idx = red.push(r, false);
                update(&mut red, &mut pairs, idx);
            }
        }
        while !pairs.is_empty() {
            let (k, _) = pairs
                .iter()
                .enumerate()
                .min_by(|(_, a), (_, b)| {
                    a.lcm
                        .degree()
                        .cmp(&b.lcm.degree())
                        .then(a.comp.cmp(&b.comp))
                        .then(a.lcm.cmp(&b.lcm))
                        .then(a.i.cmp(&b.i))
                        .then(a.j.cmp(&b.j))
                })
                .unwrap();
            let p = pairs.swap_remove(k);
            let s = s_vector(&red, &p);
            let r = red.reduce_impl(s, false);
            if r.is_zero() {
                continue;
            }
            let r = red.reduce_impl(r, true);
            let idx = red.push(r, false);
            update(&mut red, &mut pairs, idx);
        }
        // interreduce the active (minimal) set
        let active = red.active_sorted();
        let mut basis = Vec::with_capacity(active.len());
        for &k in &active {
            let e = &red.elems[k];
            let lead = e.vec.terms[0].clone();
            let mut tail = ModVec { terms: e.vec.terms[1..].to_vec() };
            tail = red.reduce_impl(tail, true);
            let mut v = ModVec { terms: Vec::with_capacity(tail.terms.len() + 1) };
            v.terms.push(lead);
            v.terms.extend(tail.terms);
            basis.push((v, e.ideal_seed));
        }
        let mut final_red = Reducer::new(*field, rank);
        for (v, seed) in &basis {
            final_red.push(v.clone(), *seed);
        }
        ModuleGb { rank, reducer: final_red, basis }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Reduced basis including surviving ideal seeds `h * e_i`.
    pub fn basis(&self) -> impl Iterator<Item = &ModVec> {
        self.basis.iter().map(|(v, _)| v)
    }

    /// Reduced basis with the ideal seeds removed.
    pub fn generators(&self) -> impl Iterator<Item = &ModVec> {
        self.basis.iter().filter(|(_, s)| !s).map(|(v, _)| v)
    }

    pub fn reduce(&self, v: &ModVec) -> ModVec {
        self.reducer.reduce(v)
    }

    pub fn contains(&self, v: &ModVec) -> bool {
        self.reducer.reduce_impl(v.clone(), false).is_zero()
    }
}

fn s_vector(red: &Reducer, p: &Pair) -> ModVec {
    let f = &red.field;
    let (a, b) = (&red.elems[p.i], &red.elems[p.j]);
    let qa = a.lead_mono.quotient_of(&p.lcm);
    let qb = b.lead_mono.quotient_of(&p.lcm);
    let mut s = ModVec::zero();
    s.add_scaled_from(0, 1, &qa, None, &a.vec.terms, f);
    s.add_scaled_from(0, f.neg(1), &qb, None, &b.vec.terms, f);
    s
}

fn product_criterion(red: &Reducer, i: usize, j: usize) -> bool {
    let (a, b) = (&red.elems[i], &red.elems[j]);
    a.single && b.single && a.lead_mono.is_coprime(&b.lead_mono)
}

/// Gebauer-Möller update after inserting element `h`.
fn update(red: &mut Reducer, pairs: &mut Vec<Pair>, h: usize) {
    let comp = red.elems[h].lead_comp;
    let hm = red.elems[h].lead_mono.clone();
    let partners: Vec<usize> = red.by_comp[comp as usize].iter().copied().filter(|&g| g != h).collect();
    let mut cand: Vec<(usize, Monomial, bool)> =
        partners.iter().map(|&g| (g, hm.lcm(&red.elems[g].lead_mono), product_criterion(red, h, g))).collect();

    // criterion M/F: keep (h, g) only if no other candidate lcm properly divides
    // it, keeping one representative among equal lcms.
    let mut keep: Vec<(usize, Monomial, bool)> = Vec::new();
    for k in 0..cand.len() {
        let (g, ref l, coprime) = cand[k];
        let dominated = cand.iter().enumerate().any(|(k2, (_, l2, c2))| {
            if k2 == k {
                return false;
            }
            if l2 == l {
                // equal lcm: prefer a coprime one, else the earliest
                (*c2 && !coprime) || (*c2 == coprime && k2 < k)
            } else {
                l2.divides(l)
            }
        });
        if !dominated {
            keep.push((g, l.clone(), coprime));
        }
    }
    cand.clear();

    // criterion B on existing pairs
    pairs.retain(|p| {
        if p.comp != comp || !hm.divides(&p.lcm) {
            return true;
        }
        let li = red.elems[p.i].lead_mono.lcm(&hm);
        let lj = red.elems[p.j].lead_mono.lcm(&hm);
        li == p.lcm || lj == p.lcm
    });

    for (g, lcm, coprime) in keep {
        if !coprime {
            pairs.push(Pair { i: g, j: h, lcm, comp });
        }
    }

    // drop now-redundant elements from the active set
    let redundant: Vec<usize> =
        red.by_comp[comp as usize].iter().copied().filter(|&g| g != h && hm.divides(&red.elems[g].lead_mono)).collect();
    for g in redundant {
        red.deactivate(g);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::PolyRing;

    fn ring() -> PolyRing {
        PolyRing::new(PrimeField::default(), vec!["x".into(), "y".into()]).unwrap()
    }

    fn vecs(r: &PolyRing, rows: &[&[&str]]) -> Vec<ModVec> {
        rows.iter()
            .map(|row| {
                let comps: Vec<Poly> = row.iter().map(|s| r.parse(s).unwrap()).collect();
                ModVec::from_components(&comps)
            })
            .collect()
    }

    #[test]
    fn ideal_already_reduced() {
        let r = ring();
        let gb = ModuleGb::compute(&vecs(&r, &[&["x^2"], &["y^2"]]), 1, &[], r.field());
        let out: Vec<Vec<Poly>> = gb.basis().map(|v| v.to_components(1)).collect();
        assert_eq!(out, vec![vec![r.parse("x^2").unwrap()], vec![r.parse("y^2").unwrap()]]);
    }

    #[test]
    fn ideal_nontrivial() {
        // (x^2 - y, y^2) has reduced basis {x^2 - y, x*y, y^2}? check membership instead
        let r = ring();
        let gb = ModuleGb::compute(&vecs(&r, &[&["x^2 - y"], &["y^2"]]), 1, &[], r.field());
        for p in ["x^2 - y", "y^2", "x^2*y", "x^4"] {
            assert!(gb.contains(&vecs(&r, &[&[p]])[0]), "{p}");
        }
        assert!(!gb.contains(&vecs(&r, &[&["y"]])[0]));
        assert!(!gb.contains(&vecs(&r, &[&["x*y"]])[0]));
    }

    #[test]
    fn module_membership() {
        let r = ring();
        let gens = vecs(&r, &[&["x", "y"]]);
        let gb = ModuleGb::compute(&gens, 2, &[], r.field());
        assert!(gb.contains(&vecs(&r, &[&["x*y", "y^2"]])[0]));
        assert!(!gb.contains(&vecs(&r, &[&["x", "0"]])[0]));
    }
}
