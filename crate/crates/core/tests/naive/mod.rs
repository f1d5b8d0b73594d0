//! Reference Gröbner engine used as an oracle: a deliberately naive
//! Buchberger with its own polynomial arithmetic. All pairs, no criteria,
//! full reduction at the end. Keys carry the component index in front, so
//! the same code handles ideals (component 0) and submodules of `A^r`.
#![allow(dead_code)]

use std::cmp::Ordering;
use std::collections::BTreeMap;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use tac_core::*;

pub const P: u64 = 32003;

pub type Exps = Vec<u16>;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Key(pub Exps);

pub fn grevlex(a: &[u16], b: &[u16]) -> Ordering {
    let da: u32 = a.iter().map(|&e| e as u32).sum();
    let db: u32 = b.iter().map(|&e| e as u32).sum();
    if da != db {
        return da.cmp(&db);
    }
    for (x, y) in a.iter().zip(b).rev() {
        if x != y {
            return y.cmp(x);
        }
    }
    Ordering::Equal
}

/// Position over term: a smaller component is larger, then grevlex.
pub fn pot(a: &Exps, b: &Exps) -> Ordering {
    b[0].cmp(&a[0]).then_with(|| grevlex(&a[1..], &b[1..]))
}

/// Sparse vector as `[component, exponents..]` -> coefficient in `[1, P)`.
#[derive(Clone, Debug, PartialEq)]
pub struct NPoly(pub BTreeMap<Exps, u64>);

pub fn inv(a: u64) -> u64 {
    let (mut r, mut b, mut e) = (1u64, a % P, P - 2);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % P;
        }
        b = b * b % P;
        e >>= 1;
    }
    r
}

impl NPoly {
    fn lead(&self) -> Option<(Exps, u64)> {
        self.0.iter().max_by(|a, b| pot(a.0, b.0)).map(|(e, c)| (e.clone(), *c))
    }

    fn add_scaled(&mut self, c: u64, shift: &Exps, other: &NPoly) {
        for (e, v) in &other.0 {
            let m: Exps = e.iter().zip(shift).map(|(a, b)| a + b).collect();
            let cur = self.0.get(&m).copied().unwrap_or(0);
            let new = (cur + c * v) % P;
            if new == 0 {
                self.0.remove(&m);
            } else {
                self.0.insert(m, new);
            }
        }
    }

    fn monic(&self) -> NPoly {
        let Some((_, c)) = self.lead() else { return self.clone() };
        let i = inv(c);
        NPoly(self.0.iter().map(|(e, v)| (e.clone(), v * i % P)).collect())
    }
}

pub fn divides(a: &Exps, b: &Exps) -> bool {
    a[0] == b[0] && a[1..].iter().zip(&b[1..]).all(|(x, y)| x <= y)
}

/// `b / a` as a shift with component 0.
fn quotient(b: &Exps, a: &Exps) -> Exps {
    std::iter::once(0).chain(b[1..].iter().zip(&a[1..]).map(|(x, y)| x - y)).collect()
}

pub fn reduce(f: &NPoly, g: &[NPoly]) -> NPoly {
    let mut f = f.clone();
    let mut rem = NPoly(BTreeMap::new());
    while let Some((e, c)) = f.lead() {
        if let Some(h) = g.iter().find(|h| divides(&h.lead().unwrap().0, &e)) {
            let (he, hc) = h.lead().unwrap();
            f.add_scaled(P - c * inv(hc) % P, &quotient(&e, &he), h);
        } else {
            f.0.remove(&e);
            rem.0.insert(e, c);
        }
    }
    rem
}

pub fn s_poly(f: &NPoly, g: &NPoly) -> NPoly {
    let (fe, fc) = f.lead().unwrap();
    let (ge, gc) = g.lead().unwrap();
    let mut s = NPoly(BTreeMap::new());
    if fe[0] != ge[0] {
        return s;
    }
    let l: Exps = fe.iter().zip(&ge).map(|(a, b)| *a.max(b)).collect();
    s.add_scaled(inv(fc), &quotient(&l, &fe), f);
    s.add_scaled(P - inv(gc), &quotient(&l, &ge), g);
    s
}

pub fn naive_buchberger(gens: &[NPoly]) -> Vec<NPoly> {
    let mut g: Vec<NPoly> = gens.iter().filter(|p| !p.0.is_empty()).cloned().collect();
    let mut pairs: Vec<(usize, usize)> = (0..g.len()).flat_map(|j| (0..j).map(move |i| (i, j))).collect();
    while let Some((i, j)) = pairs.pop() {
        let r = reduce(&s_poly(&g[i], &g[j]), &g);
        if !r.0.is_empty() {
            g.push(r);
            let k = g.len() - 1;
            pairs.extend((0..k).map(|i| (i, k)));
        }
    }
    // minimalize, then inter-reduce
    let mut min: Vec<NPoly> = Vec::new();
    for (k, p) in g.iter().enumerate() {
        let e = p.lead().unwrap().0;
        let redundant = g.iter().enumerate().any(|(m, q)| {
            let qe = q.lead().unwrap().0;
            m != k && divides(&qe, &e) && (qe != e || m < k)
        });
        if !redundant {
            min.push(p.monic());
        }
    }
    let mut out = Vec::new();
    for k in 0..min.len() {
        let others: Vec<NPoly> = min.iter().enumerate().filter(|(m, _)| *m != k).map(|(_, p)| p.clone()).collect();
        let (e, _) = min[k].lead().unwrap();
        let mut tail = min[k].clone();
        tail.0.remove(&e);
        let mut r = reduce(&tail, &others);
        r.0.insert(e, 1);
        out.push(r);
    }
    out
}

pub fn to_naive(p: &Poly) -> NPoly {
    to_naive_at(p, 0)
}

fn to_naive_at(p: &Poly, comp: u16) -> NPoly {
    let key = |t: &Term| std::iter::once(comp).chain(t.mono.exponents().iter().copied()).collect();
    NPoly(p.terms().iter().map(|t| (key(t), t.coeff as u64)).collect())
}

pub fn to_naive_vec(v: &VectorElement) -> NPoly {
    let mut out = BTreeMap::new();
    for (i, p) in v.components.iter().enumerate() {
        out.extend(to_naive_at(p, i as u16).0);
    }
    NPoly(out)
}

pub fn canonical(mut v: Vec<NPoly>) -> Vec<Vec<(Exps, u64)>> {
    let mut out: Vec<Vec<(Exps, u64)>> = v.drain(..).map(|p| p.0.into_iter().collect()).collect();
    out.sort();
    out
}

/// Up to three terms, each squarefree: keeps the naive oracle tractable.
pub fn random_poly(ring: &QuotientRing, rng: &mut ChaCha8Rng) -> Poly {
    let n = ring.nvars();
    let terms = rng.gen_range(1..=3);
    let mut text = Vec::new();
    for _ in 0..terms {
        let c: i64 = rng.gen_range(1..5);
        let mono: Vec<String> = (0..n)
            .filter_map(|i| {
                let e = rng.gen_range(0..2);
                (e > 0).then(|| format!("{}^{}", ring.names()[i], e))
            })
            .collect();
        text.push(if mono.is_empty() { c.to_string() } else { format!("{c}*{}", mono.join("*")) });
    }
    ring.parse(&text.join(" + ")).unwrap()
}

pub fn engine_module_basis(gens: &[VectorElement], ring: &QuotientRing) -> Vec<NPoly> {
    buchberger(gens, ring).unwrap().iter().map(to_naive_vec).collect()
}

pub fn engine_basis(gens: &[Poly], ring: &QuotientRing) -> Vec<NPoly> {
    let vs: Vec<VectorElement> = gens.iter().map(|p| VectorElement::new(vec![p.clone()])).collect();
    buchberger(&vs, ring).unwrap().iter().map(|v| to_naive(&v.components[0])).collect()
}

/// A vector of `A^rank` with one to two nonzero entries from `random_poly`.
pub fn random_vector(ring: &QuotientRing, rank: usize, rng: &mut ChaCha8Rng) -> VectorElement {
    let mut v = vec![ring.zero(); rank];
    for _ in 0..rng.gen_range(1..=2) {
        v[rng.gen_range(0..rank)] = random_poly(ring, rng);
    }
    VectorElement::new(v)
}
