//! Seeded generators of exact test data: random dg spaces, dg associative and
//! Lie algebras from triangular matrix models, and contractible Frobenius
//! data. Everything is deterministic given the RNG seed.

use std::sync::Arc;

use rand::Rng;

use crate::hodge::{DgSpace, InnerProduct};
use crate::linalg::{scalar, GradedMap, GradedSpace, MultiMap, Parity, Scalar, Vector, Word};

/// Random parity-even invertible map on the space (small integer entries).
pub fn random_even_automorphism<R: Rng>(rng: &mut R, space: &Arc<GradedSpace>) -> GradedMap {
    loop {
        let mut m = GradedMap::zero(space, space, Parity::Even);
        for o in 0..space.dim() {
            for i in 0..space.dim() {
                if space.parity(o) == space.parity(i) {
                    let c = rng.gen_range(-2i64..=2);
                    let c = if o == i && c == 0 { 1 } else { c };
                    if c != 0 {
                        m.set(o, i, scalar(c, 1)).unwrap();
                    }
                }
            }
        }
        if m.rank() == space.dim() {
            return m;
        }
    }
}

/// Random dg space of the given dimension: a shift model `d(u_i) = v_i` on
/// randomly assigned parities, conjugated by a random even automorphism.
pub fn random_dg_space<R: Rng>(rng: &mut R, dim: usize) -> DgSpace {
    assert!(dim >= 1);
    let rank = if dim >= 2 { rng.gen_range(1..=dim / 2) } else { 0 };
    let mut basis = Vec::new();
    for i in 0..rank {
        let p = Parity::from_u8(rng.gen_range(0..2));
        basis.push((format!("u{i}"), p));
        basis.push((format!("v{i}"), p.flip()));
    }
    for i in 0..dim - 2 * rank {
        basis.push((format!("h{i}"), Parity::from_u8(rng.gen_range(0..2))));
    }
    let space = GradedSpace::new(basis).unwrap();
    let mut d = GradedMap::zero(&space, &space, Parity::Odd);
    for i in 0..rank {
        d.set(2 * i + 1, 2 * i, scalar(1, 1)).unwrap();
    }
    let g = random_even_automorphism(rng, &space);
    let ginv = g.inverse().unwrap();
    let d = g.compose(&d).unwrap().compose(&ginv).unwrap();
    DgSpace::new(space, d).unwrap()
}

/// A small associative graded matrix model: the strictly upper triangular
/// n x n matrices (n = 3 or 4) with parities `|E_ij| = p_i + p_j` for a random
/// assignment `p`, equipped with the inner differential `d = [x, -]` for a
/// random odd strictly-upper `x` with `x^2 = 0`.
///
/// Returns the underlying space `A`, its product, and the differential, all
/// unshifted (parities as in `A`, product even, `d` odd).
pub struct MatrixDgAlgebra {
    pub space: Arc<GradedSpace>,
    pub product: MultiMap,
    pub d: GradedMap,
}

pub fn matrix_dg_algebra<R: Rng>(rng: &mut R, n: usize, strict: bool) -> MatrixDgAlgebra {
    assert!((2..=4).contains(&n));
    // retry parities until an odd strictly-upper unit exists
    let (p, units) = loop {
        let p: Vec<u8> = (0..n).map(|_| rng.gen_range(0..2)).collect();
        let units: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| if strict { i < j } else { i <= j })
            .collect();
        if units
            .iter()
            .any(|&(i, j)| i < j && (p[i] + p[j]) % 2 == 1)
        {
            break (p, units);
        }
    };
    let space = GradedSpace::new(
        units
            .iter()
            .map(|&(i, j)| (format!("e{}{}", i + 1, j + 1), Parity::from_u8(p[i] + p[j])))
            .collect(),
    )
    .unwrap();
    let pos = |i: usize, j: usize| units.iter().position(|&u| u == (i, j));
    // product: E_ij E_jk = E_ik
    let mut product = MultiMap::zero(&space, &space, 2, 1, Parity::Even);
    for (a, &(i, j)) in units.iter().enumerate() {
        for (b, &(k, l)) in units.iter().enumerate() {
            if j == k {
                if let Some(c) = pos(i, l) {
                    product
                        .add_to(
                            Word::from_slice(&[c as u16]),
                            Word::from_slice(&[a as u16, b as u16]),
                            scalar(1, 1),
                        )
                        .unwrap();
                }
            }
        }
    }
    // x: random odd strictly-upper element supported on non-composable slots
    // (if x has entries only in a single "column band", x^2 = 0 is automatic;
    // we instead sample and reject until x^2 = 0)
    let x = loop {
        let mut coords = Vec::new();
        for (a, &(i, j)) in units.iter().enumerate() {
            if i < j && (p[i] + p[j]) % 2 == 1 && rng.gen_bool(0.6) {
                let c = rng.gen_range(-2i64..=2);
                if c != 0 {
                    coords.push((a, scalar(c, 1)));
                }
            }
        }
        let x = Vector::from_coords(&space, &coords);
        if x.is_zero() {
            continue;
        }
        let x2 = product.apply(&[&x, &x]);
        if x2.is_zero() {
            break x;
        }
    };
    // d = [x, -] (graded commutator: d(a) = x a - (-1)^{|a|} a x)
    let mut d = GradedMap::zero(&space, &space, Parity::Odd);
    for a in 0..space.dim() {
        let ea = Vector::basis(&space, a);
        let xa = product.apply(&[&x, &ea]);
        let ax = product.apply(&[&ea, &x]);
        let sign = if space.parity(a).is_odd() { 1 } else { -1 };
        let da = xa.add(&ax.scale(&scalar(sign, 1)));
        for (o, c) in da.coords() {
            d.add_to(*o as usize, a, c.clone()).unwrap();
        }
    }
    MatrixDgAlgebra { space, product, d }
}

/// A contractible commutative dg Frobenius datum: the exterior algebra on two
/// odd generators with `d = ∂/∂(first generator)` and trace picking the top
/// component, conjugated by a random even automorphism. The pairing has even
/// parity. Returns `(dg space, pairing, product, unit)`.
pub struct FrobeniusDatum {
    pub dg: DgSpace,
    pub ip: InnerProduct,
    pub product: MultiMap,
    pub unit: Vector,
}

pub fn contractible_frobenius_4d<R: Rng>(rng: &mut R, conjugate: bool) -> FrobeniusDatum {
    // basis: 1, t1, t2, t1 t2 with t_i odd
    let space = GradedSpace::from_pairs(&[("one", 0), ("t1", 1), ("t2", 1), ("tt", 0)]);
    let mut product = MultiMap::zero(&space, &space, 2, 1, Parity::Even);
    let e = |i: u16| Word::from_slice(&[i]);
    let w = |a: u16, b: u16| Word::from_slice(&[a, b]);
    let one = scalar(1, 1);
    // unital commutative: t1 t2 = tt, t2 t1 = -tt, t_i^2 = 0
    for i in 0..4u16 {
        product.add_to(e(i), w(0, i), one.clone()).unwrap();
        if i != 0 {
            product.add_to(e(i), w(i, 0), one.clone()).unwrap();
        }
    }
    product.add_to(e(3), w(1, 2), one.clone()).unwrap();
    product.add_to(e(3), w(2, 1), scalar(-1, 1)).unwrap();
    // d = derivative by t1: d(t1) = 1, d(tt) = d(t1 t2) = t2
    let d = GradedMap::from_named(
        &space,
        &space,
        Parity::Odd,
        &[("one", "t1", scalar(1, 1)), ("t2", "tt", scalar(1, 1))],
    )
    .unwrap();
    // trace: top component; pairing <a, b> = trace(a b), even parity
    let ip = InnerProduct::new(
        &space,
        Parity::Even,
        vec![
            (0, 3, scalar(1, 1)),
            (3, 0, scalar(1, 1)),
            (1, 2, scalar(1, 1)),
            (2, 1, scalar(-1, 1)),
        ],
    )
    .unwrap();
    let dg = DgSpace::new(Arc::clone(&space), d).unwrap();
    let unit = Vector::basis(&space, 0);
    let datum = FrobeniusDatum {
        dg,
        ip,
        product,
        unit,
    };
    if conjugate {
        conjugate_frobenius(rng, datum)
    } else {
        datum
    }
}

/// The two-dimensional contractible Frobenius datum: `span{one (even),
/// th (odd)}` with `d(th) = one`, trace picking `th`, odd pairing
/// `<th, one> = 1`.
pub fn contractible_frobenius_2d() -> FrobeniusDatum {
    let space = GradedSpace::from_pairs(&[("one", 0), ("th", 1)]);
    let mut product = MultiMap::zero(&space, &space, 2, 1, Parity::Even);
    let e = |i: u16| Word::from_slice(&[i]);
    let w = |a: u16, b: u16| Word::from_slice(&[a, b]);
    for i in 0..2u16 {
        product.add_to(e(i), w(0, i), scalar(1, 1)).unwrap();
        if i != 0 {
            product.add_to(e(i), w(i, 0), scalar(1, 1)).unwrap();
        }
    }
    let d = GradedMap::from_named(&space, &space, Parity::Odd, &[("one", "th", scalar(1, 1))])
        .unwrap();
    let ip = InnerProduct::new(
        &space,
        Parity::Odd,
        vec![(0, 1, scalar(1, 1)), (1, 0, scalar(1, 1))],
    )
    .unwrap();
    let dg = DgSpace::new(Arc::clone(&space), d).unwrap();
    FrobeniusDatum {
        dg,
        ip,
        product,
        unit: Vector::basis(&space, 0),
    }
}

/// Transport a Frobenius datum along a random even automorphism `g`:
/// `d' = g d g^{-1}`, `m'(x, y) = g m(g^{-1} x, g^{-1} y)`,
/// `<x, y>' = <g^{-1} x, g^{-1} y>`.
pub fn conjugate_frobenius<R: Rng>(rng: &mut R, datum: FrobeniusDatum) -> FrobeniusDatum {
    let space = datum.dg.space().clone();
    let g = random_even_automorphism(rng, &space);
    let ginv = g.inverse().unwrap();
    let d = g
        .compose(datum.dg.d())
        .unwrap()
        .compose(&ginv)
        .unwrap();
    let gm = MultiMap::from_graded(&g);
    let ginvm = MultiMap::from_graded(&ginv);
    let product = gm
        .compose(&datum.product)
        .unwrap()
        .compose(&MultiMap::tensor(&[&ginvm, &ginvm]).unwrap())
        .unwrap();
    let mut ip_entries = Vec::new();
    for a in 0..space.dim() {
        for b in 0..space.dim() {
            let va = ginv.column(a);
            let vb = ginv.column(b);
            let c = datum.ip.pair(&va, &vb);
            if !num::Zero::is_zero(&c) {
                ip_entries.push((a, b, c));
            }
        }
    }
    let ip = InnerProduct::new(&space, datum.ip.parity(), ip_entries).unwrap();
    let dg = DgSpace::new(Arc::clone(&space), d).unwrap();
    let unit = g.apply(&datum.unit);
    FrobeniusDatum {
        dg,
        ip,
        product,
        unit,
    }
}

/// Small rational scalars for randomized entries.
pub fn small_scalar<R: Rng>(rng: &mut R) -> Scalar {
    scalar(rng.gen_range(-3i64..=3), 1)
}

/// Build a product table on a named basis from `(out, left, right, coeff)`
/// rows, adding the two-sided unit products for `unit`.
fn product_table(
    space: &Arc<GradedSpace>,
    unit: &str,
    rows: &[(&str, &str, &str, i64)],
) -> MultiMap {
    let mut m = MultiMap::zero(space, space, 2, 1, Parity::Even);
    let ix = |n: &str| space.index_of(n).unwrap() as u16;
    let u = ix(unit);
    for i in 0..space.dim() as u16 {
        m.add_to(Word::from_slice(&[i]), Word::from_slice(&[u, i]), scalar(1, 1))
            .unwrap();
        if i != u {
            m.add_to(Word::from_slice(&[i]), Word::from_slice(&[i, u]), scalar(1, 1))
                .unwrap();
        }
    }
    for (out, l, r, c) in rows {
        m.add_to(
            Word::from_slice(&[ix(out)]),
            Word::from_slice(&[ix(l), ix(r)]),
            scalar(*c, 1),
        )
        .unwrap();
    }
    m
}

/// A noncommutative weight-truncated dg algebra whose homology carries a
/// nonzero transferred triple product on the degree-one generator:
/// generators `x` (even) and `y` (odd) with `d y = x^2`, words of weight
/// four and higher set to zero (weight x = 1, weight y = 2).
pub fn massey_algebra() -> (Arc<GradedSpace>, MultiMap, GradedMap) {
    let space = GradedSpace::from_pairs(&[
        ("one", 0),
        ("x", 0),
        ("y", 1),
        ("x2", 0),
        ("x3", 0),
        ("xy", 1),
        ("yx", 1),
    ]);
    let product = product_table(
        &space,
        "one",
        &[
            ("x2", "x", "x", 1),
            ("x3", "x", "x2", 1),
            ("x3", "x2", "x", 1),
            ("xy", "x", "y", 1),
            ("yx", "y", "x", 1),
        ],
    );
    let d = GradedMap::from_named(
        &space,
        &space,
        Parity::Odd,
        &[
            ("x2", "y", scalar(1, 1)),
            ("x3", "xy", scalar(1, 1)),
            ("x3", "yx", scalar(1, 1)),
        ],
    )
    .unwrap();
    (space, product, d)
}

/// The commutative cousin: `k[x] ⊗ Λ[y] / (x^3)` with `d y = x^2`.
pub fn commutative_massey_algebra() -> (Arc<GradedSpace>, MultiMap, GradedMap) {
    let space = GradedSpace::from_pairs(&[
        ("one", 0),
        ("x", 0),
        ("x2", 0),
        ("y", 1),
        ("xy", 1),
        ("x2y", 1),
    ]);
    let product = product_table(
        &space,
        "one",
        &[
            ("x2", "x", "x", 1),
            ("xy", "x", "y", 1),
            ("xy", "y", "x", 1),
            ("x2y", "x", "xy", 1),
            ("x2y", "xy", "x", 1),
            ("x2y", "x2", "y", 1),
            ("x2y", "y", "x2", 1),
        ],
    );
    let d = GradedMap::from_named(&space, &space, Parity::Odd, &[("x2", "y", scalar(1, 1))])
        .unwrap();
    (space, product, d)
}

/// A random nilpotent dg Lie algebra: the strictly upper triangular 4 x 4
/// matrices modulo the corner entry, with parities `|e_ij| = p_i + p_j` and
/// the inner differential `d = [x, -]` for a random odd square-zero `x`.
/// Dimension 5.
pub fn matrix_dg_lie<R: Rng>(rng: &mut R) -> (Arc<GradedSpace>, MultiMap, GradedMap) {
    // units e12 e13 e23 e24 e34; e14 is set to zero
    let units = [(1usize, 2usize), (1, 3), (2, 3), (2, 4), (3, 4)];
    let p: Vec<u8> = loop {
        let p: Vec<u8> = (0..5).map(|_| rng.gen_range(0..2)).collect();
        // p indexed 1..=4; ensure some strictly-upper unit is odd
        if units.iter().any(|&(i, j)| (p[i] + p[j]) % 2 == 1) {
            break p;
        }
    };
    let space = GradedSpace::new(
        units
            .iter()
            .map(|&(i, j)| (format!("e{i}{j}"), Parity::from_u8(p[i] + p[j])))
            .collect(),
    )
    .unwrap();
    let pos = |i: usize, j: usize| units.iter().position(|&u| u == (i, j));
    // associative product in the quotient
    let mut product = MultiMap::zero(&space, &space, 2, 1, Parity::Even);
    for (a, &(i, j)) in units.iter().enumerate() {
        for (b, &(k, l)) in units.iter().enumerate() {
            if j == k {
                if let Some(c) = pos(i, l) {
                    product
                        .add_to(
                            Word::from_slice(&[c as u16]),
                            Word::from_slice(&[a as u16, b as u16]),
                            scalar(1, 1),
                        )
                        .unwrap();
                }
            }
        }
    }
    // graded commutator bracket
    let mut bracket = MultiMap::zero(&space, &space, 2, 1, Parity::Even);
    for a in 0..space.dim() {
        for b in 0..space.dim() {
            let ea = Vector::basis(&space, a);
            let eb = Vector::basis(&space, b);
            let ab = product.apply(&[&ea, &eb]);
            let ba = product.apply(&[&eb, &ea]);
            let sign = if space.parity(a).is_odd() && space.parity(b).is_odd() {
                1
            } else {
                -1
            };
            let val = ab.add(&ba.scale(&scalar(sign, 1)));
            for (o, c) in val.coords() {
                bracket
                    .add_to(
                        Word::from_slice(&[*o]),
                        Word::from_slice(&[a as u16, b as u16]),
                        c.clone(),
                    )
                    .unwrap();
            }
        }
    }
    // random odd x with x * x = 0 in the quotient
    let x = loop {
        let mut coords = Vec::new();
        for (a, &(i, j)) in units.iter().enumerate() {
            if (p[i] + p[j]) % 2 == 1 && rng.gen_bool(0.6) {
                let c = rng.gen_range(-2i64..=2);
                if c != 0 {
                    coords.push((a, scalar(c, 1)));
                }
            }
        }
        let x = Vector::from_coords(&space, &coords);
        if x.is_zero() {
            continue;
        }
        if product.apply(&[&x, &x]).is_zero() {
            break x;
        }
    };
    let mut d = GradedMap::zero(&space, &space, Parity::Odd);
    for a in 0..space.dim() {
        let ea = Vector::basis(&space, a);
        let da = bracket.apply(&[&x, &ea]);
        for (o, c) in da.coords() {
            d.add_to(*o as usize, a, c.clone()).unwrap();
        }
    }
    (space, bracket, d)
}

/// A length-truncated free graded Lie algebra on two odd generators `a`, `y`
/// with `d y = [a, a]`: the homology is abelian but the transferred ternary
/// bracket is nonzero.
pub fn whitehead_lie() -> (Arc<GradedSpace>, MultiMap, GradedMap) {
    let space = GradedSpace::from_pairs(&[
        ("a", 1),
        ("y", 1),
        ("aa", 0),
        ("ay", 0),
        ("yy", 0),
    ]);
    let mut bracket = MultiMap::zero(&space, &space, 2, 1, Parity::Even);
    let mut put = |out: &str, l: &str, r: &str, c: i64| {
        let o = space.index_of(out).unwrap() as u16;
        let a = space.index_of(l).unwrap() as u16;
        let b = space.index_of(r).unwrap() as u16;
        bracket
            .add_to(Word::from_slice(&[o]), Word::from_slice(&[a, b]), scalar(c, 1))
            .unwrap();
    };
    put("aa", "a", "a", 1);
    put("ay", "a", "y", 1);
    put("ay", "y", "a", 1); // [y,a] = -(-1)^{1*1}[a,y] = +[a,y]
    put("yy", "y", "y", 1);
    let d = GradedMap::from_named(&space, &space, Parity::Odd, &[("aa", "y", scalar(1, 1))])
        .unwrap();
    (space, bracket, d)
}
