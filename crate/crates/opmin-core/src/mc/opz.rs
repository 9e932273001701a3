//! Operator-valued polynomials in `(z, dz)` and the two explicit homotopies
//! verified at operator level: the interpolation between a Hodge
//! decomposition and the trivial one, and the interpolation between two
//! contracting homotopies of a contractible space.

use num::Zero;

use crate::hodge::{DgSpace, HodgeData};
use crate::linalg::{GradedMap, Parity, Scalar};
use crate::report::CheckReport;

/// A polynomial `Σ_k A_k z^k` of graded maps of one fixed parity.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorPoly {
    pub coeffs: Vec<GradedMap>,
}

impl OperatorPoly {
    pub fn zero(model: &GradedMap) -> OperatorPoly {
        OperatorPoly {
            coeffs: vec![GradedMap::zero(model.source(), model.target(), model.parity())],
        }
    }

    pub fn constant(a: GradedMap) -> OperatorPoly {
        OperatorPoly { coeffs: vec![a] }
    }

    pub fn parity(&self) -> Parity {
        self.coeffs[0].parity()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &OperatorPoly) -> OperatorPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let model = &self.coeffs[0];
        let mut coeffs = Vec::with_capacity(n);
        for k in 0..n {
            let mut c = GradedMap::zero(model.source(), model.target(), model.parity());
            if k < self.coeffs.len() {
                c = c.add(&self.coeffs[k]).unwrap();
            }
            if k < other.coeffs.len() {
                c = c.add(&other.coeffs[k]).unwrap();
            }
            coeffs.push(c);
        }
        OperatorPoly { coeffs }
    }

    pub fn neg(&self) -> OperatorPoly {
        OperatorPoly {
            coeffs: self
                .coeffs
                .iter()
                .map(|c| c.scale(&Scalar::from_integer((-1).into())))
                .collect(),
        }
    }

    pub fn sub(&self, other: &OperatorPoly) -> OperatorPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &OperatorPoly) -> OperatorPoly {
        let model = self.coeffs[0].compose(&other.coeffs[0]).unwrap();
        let mut coeffs =
            vec![
                GradedMap::zero(model.source(), model.target(), model.parity());
                self.coeffs.len() + other.coeffs.len() - 1
            ];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].add(&a.compose(b).unwrap()).unwrap();
            }
        }
        OperatorPoly { coeffs }
    }

    /// `∂_z`.
    pub fn z_derivative(&self) -> OperatorPoly {
        let model = &self.coeffs[0];
        if self.coeffs.len() == 1 {
            return OperatorPoly::zero(model);
        }
        OperatorPoly {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.scale(&Scalar::from_integer((k as i64).into())))
                .collect(),
        }
    }

    pub fn eval(&self, z: &Scalar) -> GradedMap {
        let model = &self.coeffs[0];
        let mut acc = GradedMap::zero(model.source(), model.target(), model.parity());
        let mut power = Scalar::from_integer(1.into());
        for c in &self.coeffs {
            acc = acc.add(&c.scale(&power)).unwrap();
            power *= z;
        }
        acc
    }
}

/// An element `A(z) + B(z) dz` of operator-valued polynomial forms, with
/// homogeneous total parity: `|B| = |A| + 1` since `dz` is odd.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorDz {
    pub a: OperatorPoly,
    pub b: OperatorPoly,
}

impl OperatorDz {
    pub fn from_poly(a: OperatorPoly) -> OperatorDz {
        let model = GradedMap::zero(
            a.coeffs[0].source(),
            a.coeffs[0].target(),
            a.parity().flip(),
        );
        OperatorDz {
            a,
            b: OperatorPoly::constant(model),
        }
    }

    pub fn new(a: OperatorPoly, b: OperatorPoly) -> OperatorDz {
        assert_eq!(b.parity(), a.parity().flip(), "dz-part parity mismatch");
        OperatorDz { a, b }
    }

    pub fn parity(&self) -> Parity {
        self.a.parity()
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn add(&self, other: &OperatorDz) -> OperatorDz {
        OperatorDz {
            a: self.a.add(&other.a),
            b: self.b.add(&other.b),
        }
    }

    pub fn sub(&self, other: &OperatorDz) -> OperatorDz {
        OperatorDz {
            a: self.a.sub(&other.a),
            b: self.b.sub(&other.b),
        }
    }

    /// `(A + B dz)(C + D dz) = AC + (AD + (-1)^{|C|} BC) dz`, moving `dz`
    /// past `C` with a Koszul sign; `dz^2 = 0`.
    pub fn mul(&self, other: &OperatorDz) -> OperatorDz {
        let a = self.a.mul(&other.a);
        let ad = self.a.mul(&other.b);
        let bc = self.b.mul(&other.a);
        let bc = if other.parity().is_odd() { bc.neg() } else { bc };
        OperatorDz {
            a,
            b: ad.add(&bc),
        }
    }

    /// The total differential: commutator with `d` plus the de Rham part,
    /// `D(A + B dz) = [d, A] + ((-1)^{|A|} ∂_z A + [d, B]) dz`
    /// with `[d, X] = d X - (-1)^{|X|} X d`.
    pub fn total_differential(&self, d: &GradedMap) -> OperatorDz {
        let comm = |p: &OperatorPoly| -> OperatorPoly {
            let sign = if p.parity().is_odd() { 1 } else { -1 };
            OperatorPoly {
                coeffs: p
                    .coeffs
                    .iter()
                    .map(|x| {
                        d.compose(x)
                            .unwrap()
                            .add(&x.compose(d).unwrap().scale(&Scalar::from_integer(sign.into())))
                            .unwrap()
                    })
                    .collect(),
            }
        };
        let da = comm(&self.a);
        let dz_part = {
            let deriv = self.a.z_derivative();
            let deriv = if self.a.parity().is_odd() {
                deriv.neg()
            } else {
                deriv
            };
            deriv.add(&comm(&self.b))
        };
        OperatorDz { a: da, b: dz_part }
    }

    pub fn eval(&self, z: &Scalar) -> GradedMap {
        self.a.eval(z)
    }
}

/// Verify, exactly as polynomial operator identities, that the interpolation
/// `u(s) = S (1 - z^2)`, `u(t) = T + (1 - T) z - S dz` connects a Hodge
/// decomposition at `z = 0` to the trivial one at `z = 1`:
/// `D(u(s)) = 1 - u(t)^2` and `D(u(t)) = 0`.
pub fn verify_bvhat_homotopy(h: &HodgeData) -> CheckReport {
    let mut rep = CheckReport::new();
    let d = h.base.d();
    let space = h.base.space();
    let id = GradedMap::identity(space);
    let minus_one = Scalar::from_integer((-1).into());

    let u_s = OperatorDz::from_poly(OperatorPoly {
        coeffs: vec![
            h.s.clone(),
            GradedMap::zero(space, space, Parity::Odd),
            h.s.scale(&minus_one),
        ],
    });
    let u_t = OperatorDz::new(
        OperatorPoly {
            coeffs: vec![h.t.clone(), id.sub(&h.t).unwrap()],
        },
        OperatorPoly::constant(h.s.scale(&minus_one)),
    );
    let one = OperatorDz::from_poly(OperatorPoly::constant(id.clone()));

    let lhs = u_s.total_differential(d);
    let rhs = one.sub(&u_t.mul(&u_t));
    let diff = lhs.sub(&rhs);
    rep.record(
        "D(u(s)) = 1 - u(t)^2",
        diff.is_zero(),
        (!diff.is_zero()).then(|| "polynomial identity fails".to_string()),
    );
    let dut = u_t.total_differential(d);
    rep.record(
        "D(u(t)) = 0",
        dut.is_zero(),
        (!dut.is_zero()).then(|| "polynomial identity fails".to_string()),
    );
    let zero = Scalar::zero();
    let onev = Scalar::from_integer(1.into());
    rep.record("u(s)(0) = S", u_s.eval(&zero) == h.s, None);
    rep.record("u(t)(0) = T", u_t.eval(&zero) == h.t, None);
    rep.record("u(s)(1) = 0", u_s.eval(&onev).is_zero(), None);
    rep.record("u(t)(1) = id", u_t.eval(&onev) == id, None);
    rep
}

/// Verify the interpolation `h(s) = S + (S' - S)(z - S dz)` between two
/// square-zero contracting homotopies of a contractible dg space:
/// `D(h(s)) = 1`, with endpoints `S` and `S'`. The preconditions
/// `S^2 = S'^2 = 0` and `[d, S] = [d, S'] = 1` are gated first.
pub fn verify_dual_gauge_homotopy(
    v: &DgSpace,
    s1: &GradedMap,
    s2: &GradedMap,
) -> CheckReport {
    let mut rep = CheckReport::new();
    let d = v.d();
    let space = v.space();
    let id = GradedMap::identity(space);
    let gate = |rep: &mut CheckReport, name: &str, s: &GradedMap| -> bool {
        let sq = s.compose(s).unwrap();
        rep.record(format!("{name}^2 = 0"), sq.is_zero(), None);
        let comm = d
            .compose(s)
            .unwrap()
            .add(&s.compose(d).unwrap())
            .unwrap()
            .sub(&id)
            .unwrap();
        rep.record(format!("[d, {name}] = id"), comm.is_zero(), None);
        sq.is_zero() && comm.is_zero()
    };
    let ok1 = gate(&mut rep, "S", s1);
    let ok2 = gate(&mut rep, "S'", s2);
    if !(ok1 && ok2) {
        return rep;
    }
    let diff = s2.sub(s1).unwrap();
    // h(s) = S + (S'-S) z - (S'-S) S dz
    let hs = OperatorDz::new(
        OperatorPoly {
            coeffs: vec![s1.clone(), diff.clone()],
        },
        OperatorPoly::constant(
            diff.compose(s1)
                .unwrap()
                .scale(&Scalar::from_integer((-1).into())),
        ),
    );
    let one = OperatorDz::from_poly(OperatorPoly::constant(id));
    let lhs = hs.total_differential(d);
    let residual = lhs.sub(&one);
    rep.record(
        "D(h(s)) = 1",
        residual.is_zero(),
        (!residual.is_zero()).then(|| "polynomial identity fails".to_string()),
    );
    rep.record("h(s)(0) = S", &hs.eval(&Scalar::zero()) == s1, None);
    rep.record(
        "h(s)(1) = S'",
        &hs.eval(&Scalar::from_integer(1.into())) == s2,
        None,
    );
    rep
}
