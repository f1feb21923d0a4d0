//! The curve E(a): y^2 = x^3 + x^2 - a over GF(3^m).
//!
//! In Weierstrass terms the coefficients are (a1, a2, a3, a4, a6) =
//! (0, 1, 0, 0, -a). Characteristic 3 kills the 3x^2 term of the tangent
//! slope, which leaves 2x / 2y = x / y. The curve is nonsingular for every
//! nonzero a: x^3 + x^2 - a and its derivative 2x only share the root 0,
//! where the cubic is -a.

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};

/// Default number of tries for the point samplers.
pub const DEFAULT_SAMPLING_ATTEMPTS: usize = 256;

/// Largest degree for which cubic roots are found by trying every element.
pub const CUBIC_SEARCH_MAX_DEGREE: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CurvePoint {
    Infinity,
    Affine { x: FieldElement, y: FieldElement },
}

impl CurvePoint {
    pub fn x(&self) -> Option<FieldElement> {
        match self {
            CurvePoint::Infinity => None,
            CurvePoint::Affine { x, .. } => Some(*x),
        }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, CurvePoint::Infinity)
    }
}

/// A field, a nonzero parameter `a`, and its cube root.
#[derive(Clone, Copy, Debug)]
pub struct CurveParams<'f> {
    field: &'f FieldSpec,
    a: FieldElement,
    a_cuberoot: FieldElement,
}

impl<'f> CurveParams<'f> {
    pub fn new(field: &'f FieldSpec, a: FieldElement) -> Result<CurveParams<'f>> {
        if !field.contains(&a) {
            return Err(Error::MixedFields);
        }
        if a.is_zero() {
            return Err(Error::ZeroParameter);
        }
        Ok(CurveParams {
            field,
            a,
            a_cuberoot: field.cube_root(&a),
        })
    }

    pub fn field(&self) -> &'f FieldSpec {
        self.field
    }

    pub fn a(&self) -> FieldElement {
        self.a
    }

    /// a^(1/3), the x-coordinate shared by the two points of order 3.
    pub fn a_cuberoot(&self) -> FieldElement {
        self.a_cuberoot
    }

    /// x^3 + x^2 - a.
    pub fn rhs(&self, x: &FieldElement) -> FieldElement {
        let f = self.field;
        let x2 = f.square(x);
        f.sub(&f.add(&f.mul(&x2, x), &x2), &self.a)
    }

    pub fn on_curve(&self, p: &CurvePoint) -> bool {
        match p {
            CurvePoint::Infinity => true,
            CurvePoint::Affine { x, y } => {
                self.field.contains(x)
                    && self.field.contains(y)
                    && self.field.square(y) == self.rhs(x)
            }
        }
    }

    /// A point with the given x-coordinate, if one exists.
    pub fn lift_x(&self, x: &FieldElement) -> Option<CurvePoint> {
        let y = self.field.sqrt(&self.rhs(x)).ok()?;
        Some(CurvePoint::Affine { x: *x, y })
    }

    pub fn negate(&self, p: &CurvePoint) -> CurvePoint {
        match p {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine { x, y } => CurvePoint::Affine {
                x: *x,
                y: self.field.neg(y),
            },
        }
    }

    pub fn add(&self, p: &CurvePoint, q: &CurvePoint) -> Result<CurvePoint> {
        if !self.on_curve(p) || !self.on_curve(q) {
            return Err(Error::PointNotOnCurve);
        }
        Ok(self.add_unchecked(p, q))
    }

    fn add_unchecked(&self, p: &CurvePoint, q: &CurvePoint) -> CurvePoint {
        let f = self.field;
        let (x1, y1, x2, y2) = match (p, q) {
            (CurvePoint::Infinity, _) => return *q,
            (_, CurvePoint::Infinity) => return *p,
            (CurvePoint::Affine { x: x1, y: y1 }, CurvePoint::Affine { x: x2, y: y2 }) => {
                (x1, y1, x2, y2)
            }
        };
        let lambda = if x1 == x2 {
            if f.add(y1, y2).is_zero() {
                // P + (-P), including doubling a point with y = 0
                return CurvePoint::Infinity;
            }
            // tangent: (3x^2 + 2x) / 2y = x / y in characteristic 3
            f.mul(x1, &f.safe_inv(y1))
        } else {
            f.mul(&f.sub(y2, y1), &f.safe_inv(&f.sub(x2, x1)))
        };
        let x3 = f.sub(&f.sub(&f.sub(&f.square(&lambda), &f.one()), x1), x2);
        let y3 = f.sub(&f.mul(&lambda, &f.sub(x1, &x3)), y1);
        CurvePoint::Affine { x: x3, y: y3 }
    }

    /// n * P by double-and-add.
    pub fn scalar_mul(&self, n: u64, p: &CurvePoint) -> Result<CurvePoint> {
        if !self.on_curve(p) {
            return Err(Error::PointNotOnCurve);
        }
        let mut acc = CurvePoint::Infinity;
        let mut base = *p;
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.add_unchecked(&acc, &base);
            }
            n >>= 1;
            if n > 0 {
                base = self.add_unchecked(&base, &base);
            }
        }
        Ok(acc)
    }

    /// x(3P) from x(P) = u:  ((u^3 - a)^3 + a u^3) / (u^3 - a)^2.
    pub fn triple_x(&self, u: &FieldElement) -> Result<FieldElement> {
        let f = self.field;
        let u3 = f.frobenius(u);
        let t = f.sub(&u3, &self.a);
        if t.is_zero() {
            return Err(Error::OrderThreePoint);
        }
        let num = f.add(&f.frobenius(&t), &f.mul(&self.a, &u3));
        f.div(&num, &f.square(&t))
    }

    /// Tr(a * sqrt(xi^3 + xi^2 - a) / xi^3).
    ///
    /// Zero exactly when the points with x-coordinate `xi` are divisible by
    /// 3 in E(a). The sign of the square root only flips the sign of the
    /// result.
    pub fn div3_obstruction(&self, xi: &FieldElement) -> Result<u8> {
        if xi.is_zero() {
            return Err(Error::ZeroXCoordinate);
        }
        let root = self
            .field
            .sqrt(&self.rhs(xi))
            .map_err(|_| Error::NotOnCurve)?;
        Ok(self.obstruction_with_root(xi, &root))
    }

    /// The same trace with a caller-chosen root `y` of x^3 + x^2 - a.
    pub fn div3_obstruction_at(&self, p: &CurvePoint) -> Result<u8> {
        match p {
            CurvePoint::Infinity => Err(Error::NotOnCurve),
            CurvePoint::Affine { x, y } => {
                if !self.on_curve(p) {
                    return Err(Error::NotOnCurve);
                }
                if x.is_zero() {
                    return Err(Error::ZeroXCoordinate);
                }
                Ok(self.obstruction_with_root(x, y))
            }
        }
    }

    fn obstruction_with_root(&self, xi: &FieldElement, root: &FieldElement) -> u8 {
        let f = self.field;
        let xi3 = f.frobenius(xi);
        let arg = f.mul(&f.mul(&self.a, root), &f.safe_inv(&xi3));
        f.trace(&arg)
    }

    /// Roots of x^3 - xi^(1/3) x^2 + (a(1 - xi))^(1/3) x - (a^2 (a + xi))^(1/3).
    ///
    /// Returned in canonical order. These are the x-coordinates of the points Q with 3Q = (xi, *) up to
    /// sign: none, or exactly three (two when xi is the x-coordinate of a
    /// point of order 2, where the cubic has a double root). Found by
    /// evaluating at every field element.
    pub fn solve_tripling_cubic(&self, xi: &FieldElement) -> Result<Vec<FieldElement>> {
        let f = self.field;
        if f.degree() > CUBIC_SEARCH_MAX_DEGREE {
            return Err(Error::CapExceeded {
                what: "exhaustive cubic root search",
                degree: f.degree(),
                cap: CUBIC_SEARCH_MAX_DEGREE,
            });
        }
        let a = &self.a;
        let c2 = f.neg(&f.cube_root(xi));
        let c1 = f.cube_root(&f.mul(a, &f.sub(&f.one(), xi)));
        let c0 = f.neg(&f.cube_root(&f.mul(&f.square(a), &f.add(a, xi))));
        let mut roots: Vec<FieldElement> = f
            .elements()
            .filter(|x| {
                // Horner: ((x + c2) x + c1) x + c0
                let v = f.add(&f.mul(&f.add(&f.mul(&f.add(x, &c2), x), &c1), x), &c0);
                v.is_zero()
            })
            .collect();
        roots.sort();
        Ok(roots)
    }

    /// Every point of E(a), infinity first, then by x index.
    pub fn points(&self) -> Vec<CurvePoint> {
        let f = self.field;
        let mut out = vec![CurvePoint::Infinity];
        for x in f.elements() {
            if let Some(CurvePoint::Affine { x, y }) = self.lift_x(&x) {
                out.push(CurvePoint::Affine { x, y });
                if !y.is_zero() {
                    out.push(CurvePoint::Affine { x, y: f.neg(&y) });
                }
            }
        }
        out
    }

    /// (a^(1/3), a^(1/3)) and (a^(1/3), -a^(1/3)).
    pub fn order_three_points(&self) -> [CurvePoint; 2] {
        let c = self.a_cuberoot;
        [
            CurvePoint::Affine { x: c, y: c },
            CurvePoint::Affine {
                x: c,
                y: self.field.neg(&c),
            },
        ]
    }

    /// A curve point with uniformly drawn x.
    pub fn sample_point<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        attempts: usize,
    ) -> Result<CurvePoint> {
        for _ in 0..attempts {
            let x = self.field.random(rng);
            if let Some(p) = self.lift_x(&x) {
                return Ok(p);
            }
        }
        Err(Error::SamplingExhausted(attempts))
    }

    /// A curve point with x != 0 that is not divisible by 3 in E(a), i.e.
    /// whose obstruction trace is nonzero.
    pub fn sample_generator_candidate<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        attempts: usize,
    ) -> Result<CurvePoint> {
        for _ in 0..attempts {
            let x = self.field.random(rng);
            if x.is_zero() {
                continue;
            }
            if let Some(p) = self.lift_x(&x) {
                if self.div3_obstruction_at(&p)? != 0 {
                    return Ok(p);
                }
            }
        }
        Err(Error::SamplingExhausted(attempts))
    }
}
