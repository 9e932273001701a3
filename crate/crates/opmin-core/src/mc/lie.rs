//! Nilpotent dg Lie algebras, the master equation, the gauge action, and
//! polynomial one-parameter families of solutions.

use std::sync::Arc;

use num::Zero;
use thiserror::Error;

use crate::hodge::echelon_basis;
use crate::linalg::{scalar, GradedMap, GradedSpace, LinError, MultiMap, Parity, Scalar, Vector};
use crate::report::CheckReport;

#[derive(Debug, Error)]
pub enum McError {
    #[error("bracket must be an even binary map on the space")]
    BadBracket,
    #[error("bracket is not graded-antisymmetric")]
    NotAntisymmetric,
    #[error("graded Jacobi identity fails")]
    Jacobi,
    #[error("differential is not an odd square-zero derivation of the bracket")]
    BadDifferential,
    #[error("brackets do not vanish at the declared nilpotency class {0}")]
    NotNilpotent(usize),
    #[error("a Maurer-Cartan element must be odd")]
    NotOdd,
    #[error("gauge parameter must be even")]
    NotEven,
    #[error(transparent)]
    Lin(#[from] LinError),
}

/// A nilpotent dg Lie algebra: an even graded-antisymmetric bracket, an odd
/// square-zero derivation, and a nilpotency class bound (all `c+1`-fold
/// nested brackets vanish). All axioms are verified exactly on construction.
#[derive(Debug, Clone)]
pub struct NilpotentDgLie {
    space: Arc<GradedSpace>,
    bracket: MultiMap,
    d: GradedMap,
    class_bound: usize,
}

impl NilpotentDgLie {
    pub fn new(
        space: Arc<GradedSpace>,
        bracket: MultiMap,
        d: GradedMap,
        class_bound: usize,
    ) -> Result<NilpotentDgLie, McError> {
        if bracket.arity_in() != 2
            || bracket.arity_out() != 1
            || bracket.parity() != Parity::Even
            || bracket.ins() != &space
            || bracket.outs() != &space
        {
            return Err(McError::BadBracket);
        }
        // graded antisymmetry: bracket ∘ (signed swap) = -bracket
        if bracket.precompose_route(&[1, 0]) != bracket.neg() {
            return Err(McError::NotAntisymmetric);
        }
        // graded Jacobi: the cyclic sum of [[x, y], z] with Koszul rotations
        let inner = MultiMap::compose_tensor(
            &bracket,
            &[&bracket, &MultiMap::identity(&space)],
        )
        .map_err(McError::from)?;
        let mut jac = inner.clone();
        jac = jac
            .add(&inner.precompose_route(&[1, 2, 0]))
            .map_err(McError::from)?;
        jac = jac
            .add(&inner.precompose_route(&[2, 0, 1]))
            .map_err(McError::from)?;
        if !jac.is_zero() {
            return Err(McError::Jacobi);
        }
        // d: odd, square-zero, derivation of the bracket
        if d.parity() != Parity::Odd || !d.compose(&d).map_err(McError::from)?.is_zero() {
            return Err(McError::BadDifferential);
        }
        let dm = MultiMap::from_graded(&d);
        let id = MultiMap::identity(&space);
        let leibniz = dm
            .compose(&bracket)
            .and_then(|l| {
                let r1 = MultiMap::compose_tensor(&bracket, &[&dm, &id])?;
                let r2 = MultiMap::compose_tensor(&bracket, &[&id, &dm])?;
                l.sub(&r1)?.sub(&r2)
            })
            .map_err(McError::from)?;
        if !leibniz.is_zero() {
            return Err(McError::BadDifferential);
        }
        let lie = NilpotentDgLie {
            space,
            bracket,
            d,
            class_bound,
        };
        if !lie.series_vanishes(class_bound) {
            return Err(McError::NotNilpotent(class_bound));
        }
        Ok(lie)
    }

    pub fn space(&self) -> &Arc<GradedSpace> {
        &self.space
    }

    pub fn bracket_map(&self) -> &MultiMap {
        &self.bracket
    }

    pub fn d_map(&self) -> &GradedMap {
        &self.d
    }

    pub fn class_bound(&self) -> usize {
        self.class_bound
    }

    pub fn bracket(&self, x: &Vector, y: &Vector) -> Vector {
        self.bracket.apply(&[x, y])
    }

    pub fn d(&self, x: &Vector) -> Vector {
        self.d.apply(x)
    }

    /// Lower central series check: nested brackets of depth `class + 1`
    /// vanish.
    fn series_vanishes(&self, class: usize) -> bool {
        let mut layer: Vec<Vector> = (0..self.space.dim())
            .map(|i| Vector::basis(&self.space, i))
            .collect();
        for _ in 0..class {
            let mut next = Vec::new();
            for i in 0..self.space.dim() {
                let ei = Vector::basis(&self.space, i);
                for w in &layer {
                    let b = self.bracket(&ei, w);
                    if !b.is_zero() {
                        next.push(b);
                    }
                }
            }
            layer = echelon_basis(&next, &self.space);
            if layer.is_empty() {
                return true;
            }
        }
        layer.is_empty()
    }
}

/// An odd element together with its ambient algebra.
#[derive(Debug, Clone)]
pub struct MCElement {
    pub algebra: Arc<NilpotentDgLie>,
    pub x: Vector,
}

impl MCElement {
    pub fn new(algebra: Arc<NilpotentDgLie>, x: Vector) -> Result<MCElement, McError> {
        if !x.is_zero() && x.parity() != Some(Parity::Odd) {
            return Err(McError::NotOdd);
        }
        Ok(MCElement { algebra, x })
    }

    /// The master-equation residual `d x + (1/2) [x, x]`.
    pub fn residual(&self) -> Vector {
        let half = scalar(1, 2);
        self.algebra
            .d(&self.x)
            .add(&self.algebra.bracket(&self.x, &self.x).scale(&half))
    }
}

/// Exact check of the master equation.
pub fn check_mc(x: &MCElement) -> CheckReport {
    let mut rep = CheckReport::new();
    let r = x.residual();
    rep.record(
        "dx + (1/2)[x, x] = 0",
        r.is_zero(),
        (!r.is_zero()).then(|| format!("residual = {r}")),
    );
    rep
}

fn factorial(k: u64) -> Scalar {
    let mut acc = Scalar::from_integer(1.into());
    for i in 2..=k {
        acc *= Scalar::from_integer(i.into());
    }
    acc
}

/// The gauge action in closed form:
/// `exp(ad ξ)(x) - Σ_{k>=0} (ad ξ)^k / (k+1)! (d ξ)`,
/// with both series finite by nilpotency.
pub fn gauge(xi: &Vector, x: &MCElement) -> Result<MCElement, McError> {
    if !xi.is_zero() && xi.parity() != Some(Parity::Even) {
        return Err(McError::NotEven);
    }
    let lie = &x.algebra;
    let cap = 2 * lie.class_bound() + 2;
    let mut out = Vector::zero(lie.space());
    // exp(ad xi)(x)
    let mut term = x.x.clone();
    let mut k = 0u64;
    while !term.is_zero() {
        out = out.add(&term.scale(&factorial(k).recip()));
        term = lie.bracket(xi, &term);
        k += 1;
        assert!(k as usize <= cap, "nilpotency bound exceeded");
    }
    // - Σ (ad xi)^k / (k+1)! (d xi)
    let mut term = lie.d(xi);
    let mut k = 0u64;
    while !term.is_zero() {
        out = out.add(&term.scale(&-factorial(k + 1).recip()));
        term = lie.bracket(xi, &term);
        k += 1;
        assert!(k as usize <= cap, "nilpotency bound exceeded");
    }
    MCElement::new(Arc::clone(lie), out)
}

/// A polynomial family `x(z) + y(z) dz` of odd/even elements.
#[derive(Debug, Clone)]
pub struct PolyPath {
    pub algebra: Arc<NilpotentDgLie>,
    pub x_coeffs: Vec<Vector>,
    pub y_coeffs: Vec<Vector>,
}

impl PolyPath {
    pub fn x_at_zero(&self) -> Vector {
        self.x_coeffs
            .first()
            .cloned()
            .unwrap_or_else(|| Vector::zero(self.algebra.space()))
    }

    pub fn x_at_one(&self) -> Vector {
        let mut acc = Vector::zero(self.algebra.space());
        for c in &self.x_coeffs {
            acc = acc.add(c);
        }
        acc
    }

    /// Both defining identities, coefficientwise:
    /// `d x(z) + (1/2)[x(z), x(z)] = 0` and
    /// `∂_z x(z) = -d y(z) + [y(z), x(z)]`.
    pub fn verify(&self) -> CheckReport {
        let mut rep = CheckReport::new();
        let lie = &self.algebra;
        let deg = self.x_coeffs.len();
        let half = scalar(1, 2);
        let mut master_ok = true;
        let mut master_detail = None;
        for k in 0..(2 * deg) {
            let mut coeff = Vector::zero(lie.space());
            if k < deg {
                coeff = coeff.add(&lie.d(&self.x_coeffs[k]));
            }
            for a in 0..deg {
                if k >= a && k - a < deg {
                    coeff = coeff.add(
                        &lie
                            .bracket(&self.x_coeffs[a], &self.x_coeffs[k - a])
                            .scale(&half),
                    );
                }
            }
            if !coeff.is_zero() {
                master_ok = false;
                master_detail = Some(format!("z^{k} coefficient = {coeff}"));
                break;
            }
        }
        rep.record(
            "dx(z) + (1/2)[x(z), x(z)] = 0",
            master_ok,
            master_detail,
        );
        let ydeg = self.y_coeffs.len();
        let mut flow_ok = true;
        let mut flow_detail = None;
        for k in 0..(deg + ydeg) {
            let mut coeff = Vector::zero(lie.space());
            if k + 1 < deg {
                let f = Scalar::from_integer(((k + 1) as i64).into());
                coeff = coeff.add(&self.x_coeffs[k + 1].scale(&f));
            }
            if k < ydeg {
                coeff = coeff.add(&lie.d(&self.y_coeffs[k]));
            }
            for a in 0..ydeg {
                if k >= a && k - a < deg {
                    coeff = coeff.sub(&lie.bracket(&self.y_coeffs[a], &self.x_coeffs[k - a]));
                }
            }
            if !coeff.is_zero() {
                flow_ok = false;
                flow_detail = Some(format!("z^{k} coefficient = {coeff}"));
                break;
            }
        }
        rep.record("∂_z x(z) = -dy(z) + [y(z), x(z)]", flow_ok, flow_detail);
        rep
    }
}

/// The polynomial family realizing a gauge transformation: solve
/// `∂_z x = [ξ, x] - dξ` degree by degree with `x(0) = x_0` and constant
/// `y(z) = ξ`. Its endpoints are `x_0` and `gauge(ξ, x_0)`.
pub fn sullivan_from_gauge(xi: &Vector, x0: &MCElement) -> Result<PolyPath, McError> {
    if !xi.is_zero() && xi.parity() != Some(Parity::Even) {
        return Err(McError::NotEven);
    }
    let lie = &x0.algebra;
    let cap = 2 * lie.class_bound() + 2;
    let dxi = lie.d(xi);
    let mut coeffs = vec![x0.x.clone()];
    loop {
        let k = coeffs.len() - 1;
        let mut next = lie.bracket(xi, &coeffs[k]);
        if k == 0 {
            next = next.sub(&dxi);
        }
        let next = next.scale(&Scalar::from_integer(((k + 1) as i64).into()).recip());
        if next.is_zero() {
            break;
        }
        coeffs.push(next);
        assert!(coeffs.len() <= cap, "nilpotency bound exceeded");
    }
    Ok(PolyPath {
        algebra: Arc::clone(lie),
        x_coeffs: coeffs,
        y_coeffs: vec![xi.clone()],
    })
}
