#![allow(dead_code)]

use std::sync::OnceLock;

use tac_core::*;

/// `Q = k[x,y]/(x^2)` and `R = Q/(y^2)`.
pub fn rings() -> (QuotientRing, QuotientRing) {
    static RINGS: OnceLock<(QuotientRing, QuotientRing)> = OnceLock::new();
    RINGS
        .get_or_init(|| {
            let q = QuotientRing::new(PrimeField::default(), &["x", "y"], &["x^2"]).unwrap();
            let r = q.quotient_str(&["y^2"]).unwrap();
            (q, r)
        })
        .clone()
}

pub fn base_change() -> BaseChange {
    let (q, r) = rings();
    BaseChange::new(&q, &r).unwrap()
}

pub fn mat(r: &QuotientRing, rows: &[&[&str]]) -> FreeMap {
    let cols = rows.first().map_or(0, |x| x.len());
    let data: Vec<Vec<&str>> = rows.iter().map(|x| x.to_vec()).collect();
    FreeMap::parse_rows(r, rows.len(), cols, &data).unwrap()
}

/// `... -> R -e-> R -e-> R -> ...`.
pub fn periodic(r: &QuotientRing, e: &str) -> ChainComplex {
    ChainComplex::new(
        r,
        0,
        vec![1, 1],
        vec![mat(r, &[&[e]])],
        Tail::Periodic { period: 1 },
        Tail::Periodic { period: 1 },
    )
    .unwrap()
}

/// Complete resolution of `k` over `R`, with `Im d_0 = R xy`.
pub fn residue_complex(r: &QuotientRing) -> ChainComplex {
    let k = ModulePresentation::new(mat(r, &[&["x", "y"]]));
    complete_resolution(&k).unwrap().complex
}

/// First example: `C` with `Im d_0 = k`.
pub fn example_one() -> ChainComplex {
    residue_complex(&rings().1)
}

/// Second example: multiplication by `y`.
pub fn example_two() -> ChainComplex {
    periodic(&rings().1, "y")
}

/// Third example: multiplication by `x`.
pub fn example_three() -> ChainComplex {
    periodic(&rings().1, "x")
}

pub fn text(c: &ChainComplex, n: i64) -> String {
    c.d(n).to_text()
}
