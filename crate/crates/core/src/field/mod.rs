//! Arithmetic in GF(3^m) with a polynomial basis.
//!
//! Elements are stored bit-sliced: one 64-bit plane marks the coefficients
//! equal to 1, another the coefficients equal to 2. Every element is kept
//! reduced modulo the field's monic irreducible modulus, so equality is
//! plain structural equality. Besides ring arithmetic the module provides
//! the maps that only make sense in characteristic 3: Frobenius, unique
//! cube and ninth roots, the absolute trace, square roots, and a solver for
//! the Artin-Schreier equation w^3 - w = a.

mod format;
mod linalg;
pub(crate) mod numtheory;
mod poly;

use std::cmp::Ordering;
use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};

pub use format::DiscreteLog;
pub(crate) use linalg::solve as solve_f3;

/// Largest supported extension degree; keeps 3^m below 2^64.
pub const MAX_DEGREE: usize = 40;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
struct Planes {
    ones: u64,
    twos: u64,
}

impl Planes {
    const ZERO: Planes = Planes { ones: 0, twos: 0 };

    #[inline]
    fn add(self, o: Planes) -> Planes {
        let t = (self.ones | o.twos) ^ (self.twos | o.ones);
        Planes {
            ones: (self.twos | o.twos) ^ t,
            twos: (self.ones | o.ones) ^ t,
        }
    }

    #[inline]
    fn neg(self) -> Planes {
        Planes {
            ones: self.twos,
            twos: self.ones,
        }
    }

    #[inline]
    fn sub(self, o: Planes) -> Planes {
        self.add(o.neg())
    }

    #[inline]
    fn scale(self, c: u8) -> Planes {
        match c % 3 {
            0 => Planes::ZERO,
            1 => self,
            _ => self.neg(),
        }
    }

    #[inline]
    fn trit(self, i: usize) -> u8 {
        ((self.ones >> i) & 1) as u8 | ((((self.twos >> i) & 1) as u8) << 1)
    }

    fn with_trit(mut self, i: usize, c: u8) -> Planes {
        let bit = 1u64 << i;
        self.ones &= !bit;
        self.twos &= !bit;
        match c {
            1 => self.ones |= bit,
            2 => self.twos |= bit,
            _ => {}
        }
        self
    }

    fn from_trits(trits: &[u8]) -> Planes {
        trits
            .iter()
            .enumerate()
            .fold(Planes::ZERO, |p, (i, &c)| p.with_trit(i, c))
    }

    fn is_zero(self) -> bool {
        self.ones == 0 && self.twos == 0
    }
}

/// Multiplication in F_3[x]/(f) where `reduction` holds x^m mod f.
#[inline]
fn mul_planes(a: Planes, b: Planes, m: usize, reduction: Planes) -> Planes {
    let mask = (1u64 << m) - 1;
    let top = m - 1;
    let mut acc = Planes::ZERO;
    for i in (0..m).rev() {
        let carry = acc.trit(top);
        acc = Planes {
            ones: (acc.ones << 1) & mask,
            twos: (acc.twos << 1) & mask,
        };
        if carry != 0 {
            acc = acc.add(reduction.scale(carry));
        }
        match b.trit(i) {
            1 => acc = acc.add(a),
            2 => acc = acc.sub(a),
            _ => {}
        }
    }
    acc
}

fn apply_linear(images: &[Planes], x: Planes) -> Planes {
    let mut acc = Planes::ZERO;
    let mut ones = x.ones;
    while ones != 0 {
        let i = ones.trailing_zeros() as usize;
        acc = acc.add(images[i]);
        ones &= ones - 1;
    }
    let mut twos = x.twos;
    while twos != 0 {
        let i = twos.trailing_zeros() as usize;
        acc = acc.sub(images[i]);
        twos &= twos - 1;
    }
    acc
}

/// An element of some GF(3^m).
///
/// The value carries a fingerprint of its field so that accidental mixing
/// of elements from different fields is caught.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    planes: Planes,
    degree: u8,
    tag: u32,
}

impl FieldElement {
    pub fn is_zero(&self) -> bool {
        self.planes.is_zero()
    }

    /// Coefficient of x^i.
    pub fn trit(&self, i: usize) -> u8 {
        assert!(i < self.degree as usize, "trit index out of range");
        self.planes.trit(i)
    }

    /// All m coefficients, x^0 first.
    pub fn trits(&self) -> Vec<u8> {
        (0..self.degree as usize)
            .map(|i| self.planes.trit(i))
            .collect()
    }

    /// Position in the base-3 enumeration of the field: sum of c_i 3^i.
    pub fn index(&self) -> u64 {
        (0..self.degree as usize)
            .rev()
            .fold(0u64, |acc, i| acc * 3 + self.planes.trit(i) as u64)
    }

    pub fn degree(&self) -> usize {
        self.degree as usize
    }
}

/// Canonical order: lexicographic on the trit vector, coefficient of x^0
/// compared first.
impl Ord for FieldElement {
    fn cmp(&self, other: &Self) -> Ordering {
        let diff = (self.planes.ones ^ other.planes.ones) | (self.planes.twos ^ other.planes.twos);
        if diff == 0 {
            return self.tag.cmp(&other.tag);
        }
        let i = diff.trailing_zeros() as usize;
        self.planes.trit(i).cmp(&other.planes.trit(i))
    }
}

impl PartialOrd for FieldElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("t:")?;
        for i in 0..self.degree as usize {
            write!(f, "{}", self.planes.trit(i))?;
        }
        Ok(())
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A concrete GF(3^m): degree, validated modulus and cached tables.
///
/// Immutable once built.
#[derive(Clone, Debug)]
pub struct FieldSpec {
    m: usize,
    modulus: Vec<u8>,
    order: u64,
    tag: u32,
    reduction: Planes,
    frobenius_images: Vec<Planes>,
    cube_root_images: Vec<Planes>,
    trace_row: Planes,
    group_factors: Option<Vec<u64>>,
    alpha_primitive: bool,
    generator: Option<FieldElement>,
    non_residue: Option<FieldElement>,
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.modulus == other.modulus
    }
}

impl Eq for FieldSpec {}

fn fingerprint(modulus: &[u8]) -> u32 {
    // FNV-1a over the coefficient list
    let mut h: u32 = 0x811c_9dc5;
    for &c in modulus {
        h ^= c as u32 + 1;
        h = h.wrapping_mul(0x0100_0193);
    }
    h
}

impl FieldSpec {
    /// Builds GF(3^m) from a monic modulus given as m+1 trits, x^0 first.
    ///
    /// Irreducibility is checked with gcd(f, x^(3^k) - x) = 1 for
    /// k <= m/2. Primitivity of the residue of x is decided from the prime
    /// divisors of 3^m - 1 when they can be found.
    pub fn new(m: usize, modulus: &[u8]) -> Result<FieldSpec> {
        if !(2..=MAX_DEGREE).contains(&m) {
            return Err(Error::UnsupportedDegree(m));
        }
        if let Some(&bad) = modulus.iter().find(|&&c| c > 2) {
            return Err(Error::InvalidTrit(bad));
        }
        let mut trimmed = modulus.to_vec();
        poly::trim(&mut trimmed);
        let got = trimmed.len().saturating_sub(1);
        if got != m || modulus.len() != m + 1 {
            return Err(Error::DegreeMismatch { expected: m, got });
        }
        if modulus[m] != 1 {
            return Err(Error::NotMonic);
        }

        let reduction = Planes::from_trits(&modulus[..m]).neg();
        let x = Planes::ZERO.with_trit(1, 1);

        let mut frobenius_images = Vec::with_capacity(m);
        let mut x_pow = Planes::ZERO.with_trit(0, 1);
        let x_cubed = mul_planes(mul_planes(x, x, m, reduction), x, m, reduction);
        for _ in 0..m {
            frobenius_images.push(x_pow);
            x_pow = mul_planes(x_pow, x_cubed, m, reduction);
        }

        // x^(3^k) - x must be coprime to f for every k <= m/2
        let mut conj = x;
        for _ in 1..=m / 2 {
            conj = apply_linear(&frobenius_images, conj);
            let diff = conj.sub(x);
            let diff_poly: Vec<u8> = (0..m).map(|i| diff.trit(i)).collect();
            if poly::gcd(modulus, &diff_poly).len() > 1 {
                return Err(Error::ReducibleModulus);
            }
        }

        let cube_root_images: Vec<Planes> = (0..m)
            .map(|i| {
                let mut v = Planes::ZERO.with_trit(i, 1);
                for _ in 0..m - 1 {
                    v = apply_linear(&frobenius_images, v);
                }
                v
            })
            .collect();

        let mut trace_row = Planes::ZERO;
        for i in 0..m {
            let mut v = Planes::ZERO.with_trit(i, 1);
            let mut sum = Planes::ZERO;
            for _ in 0..m {
                sum = sum.add(v);
                v = apply_linear(&frobenius_images, v);
            }
            debug_assert!(sum.ones >> 1 == 0 && sum.twos >> 1 == 0);
            trace_row = trace_row.with_trit(i, sum.trit(0));
        }

        let order = numtheory::pow3(m);
        let mut field = FieldSpec {
            m,
            modulus: modulus.to_vec(),
            order,
            tag: fingerprint(modulus),
            reduction,
            frobenius_images,
            cube_root_images,
            trace_row,
            group_factors: numtheory::prime_divisors(order - 1),
            alpha_primitive: false,
            generator: None,
            non_residue: None,
        };

        if field.group_factors.is_some() {
            let alpha = field.alpha();
            if field.is_primitive(&alpha) {
                field.alpha_primitive = true;
                field.generator = Some(alpha);
            } else {
                field.generator = (2..order)
                    .map(|i| field.element(i))
                    .find(|g| field.is_primitive(g));
            }
        }
        if m % 2 == 0 {
            field.non_residue = (1..order)
                .map(|i| field.element(i))
                .find(|x| !field.is_square(x));
        }
        Ok(field)
    }

    /// Parses a modulus trit string (optionally prefixed by `t:`) of length
    /// m+1 and builds the field.
    pub fn from_modulus_str(m: usize, s: &str) -> Result<FieldSpec> {
        let body = s.strip_prefix("t:").unwrap_or(s);
        let trits = format::parse_trits(body).map_err(|reason| Error::Parse {
            input: s.to_string(),
            reason,
        })?;
        FieldSpec::new(m, &trits)
    }

    /// The field from the builtin modulus table (2 <= m <= 12).
    pub fn builtin(m: usize) -> Result<FieldSpec> {
        let modulus = crate::builtin::builtin_modulus(m).ok_or(Error::CapExceeded {
            what: "builtin modulus table",
            degree: m,
            cap: crate::builtin::BUILTIN_MAX_DEGREE,
        })?;
        FieldSpec::new(m, modulus)
    }

    pub fn degree(&self) -> usize {
        self.m
    }

    /// Modulus coefficients, x^0 first, length m+1.
    pub fn modulus(&self) -> &[u8] {
        &self.modulus
    }

    /// Number of elements, 3^m.
    pub fn order(&self) -> u64 {
        self.order
    }

    /// Whether the residue of x generates the multiplicative group.
    pub fn alpha_primitive(&self) -> bool {
        self.alpha_primitive
    }

    /// Prime divisors of 3^m - 1, when factoring succeeded.
    pub fn group_factors(&self) -> Option<&[u64]> {
        self.group_factors.as_deref()
    }

    /// A generator of the multiplicative group: the residue of x when it is
    /// primitive, otherwise the first primitive element by index.
    pub fn generator(&self) -> Option<FieldElement> {
        self.generator
    }

    fn wrap(&self, planes: Planes) -> FieldElement {
        FieldElement {
            planes,
            degree: self.m as u8,
            tag: self.tag,
        }
    }

    #[inline]
    fn own(&self, x: &FieldElement) -> Planes {
        assert!(
            x.tag == self.tag && x.degree as usize == self.m,
            "element from a different field"
        );
        x.planes
    }

    /// Whether `x` was produced by this field.
    pub fn contains(&self, x: &FieldElement) -> bool {
        x.tag == self.tag && x.degree as usize == self.m
    }

    fn check(&self, x: &FieldElement) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::MixedFields)
        }
    }

    pub fn zero(&self) -> FieldElement {
        self.wrap(Planes::ZERO)
    }

    pub fn one(&self) -> FieldElement {
        self.wrap(Planes::ZERO.with_trit(0, 1))
    }

    /// The residue of x, written alpha.
    pub fn alpha(&self) -> FieldElement {
        self.wrap(Planes::ZERO.with_trit(1, 1))
    }

    /// Embeds an element of F_3.
    pub fn from_prime(&self, c: u8) -> FieldElement {
        self.wrap(Planes::ZERO.with_trit(0, c % 3))
    }

    pub fn from_trits(&self, trits: &[u8]) -> Result<FieldElement> {
        if trits.len() != self.m {
            return Err(Error::DegreeMismatch {
                expected: self.m,
                got: trits.len(),
            });
        }
        if let Some(&bad) = trits.iter().find(|&&c| c > 2) {
            return Err(Error::InvalidTrit(bad));
        }
        Ok(self.wrap(Planes::from_trits(trits)))
    }

    /// Element with the given base-3 index.
    ///
    /// # Panics
    /// If `index >= 3^m`.
    pub fn element(&self, mut index: u64) -> FieldElement {
        assert!(index < self.order, "element index out of range");
        let mut p = Planes::ZERO;
        let mut i = 0;
        while index > 0 {
            p = p.with_trit(i, (index % 3) as u8);
            index /= 3;
            i += 1;
        }
        self.wrap(p)
    }

    /// All elements in ascending index order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.order).map(move |i| self.element(i))
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElement {
        self.element(rng.random_range(0..self.order))
    }

    #[inline]
    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.wrap(self.own(a).add(self.own(b)))
    }

    #[inline]
    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.wrap(self.own(a).sub(self.own(b)))
    }

    #[inline]
    pub fn neg(&self, a: &FieldElement) -> FieldElement {
        self.wrap(self.own(a).neg())
    }

    #[inline]
    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.wrap(mul_planes(self.own(a), self.own(b), self.m, self.reduction))
    }

    /// Multiplies by an element of F_3.
    pub fn scale(&self, a: &FieldElement, c: u8) -> FieldElement {
        self.wrap(self.own(a).scale(c))
    }

    pub fn square(&self, a: &FieldElement) -> FieldElement {
        self.mul(a, a)
    }

    pub fn checked_add(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.add(a, b))
    }

    pub fn checked_sub(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.sub(a, b))
    }

    pub fn checked_mul(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.mul(a, b))
    }

    pub fn pow(&self, base: &FieldElement, mut exp: u64) -> FieldElement {
        let m = self.m;
        let red = self.reduction;
        let mut b = self.own(base);
        let mut acc = Planes::ZERO.with_trit(0, 1);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = mul_planes(acc, b, m, red);
            }
            exp >>= 1;
            if exp > 0 {
                b = mul_planes(b, b, m, red);
            }
        }
        self.wrap(acc)
    }

    /// Multiplicative inverse.
    pub fn inv(&self, a: &FieldElement) -> Result<FieldElement> {
        self.check(a)?;
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(a, self.order - 2))
    }

    /// x^(q-2): the inverse for x != 0 and 0 for x = 0.
    pub fn safe_inv(&self, a: &FieldElement) -> FieldElement {
        self.pow(a, self.order - 2)
    }

    pub fn div(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        let inv = self.inv(b)?;
        self.check(a)?;
        Ok(self.mul(a, &inv))
    }

    /// x -> x^3.
    pub fn frobenius(&self, x: &FieldElement) -> FieldElement {
        self.wrap(apply_linear(&self.frobenius_images, self.own(x)))
    }

    /// The unique y with y^3 = x, i.e. x^(3^(m-1)).
    pub fn cube_root(&self, x: &FieldElement) -> FieldElement {
        self.wrap(apply_linear(&self.cube_root_images, self.own(x)))
    }

    /// The unique y with y^9 = x.
    pub fn ninth_root(&self, x: &FieldElement) -> FieldElement {
        self.cube_root(&self.cube_root(x))
    }

    /// Absolute trace Tr(x) = x + x^3 + ... + x^(3^(m-1)) as a trit.
    #[inline]
    pub fn trace(&self, x: &FieldElement) -> u8 {
        let p = self.own(x);
        let t = self.trace_row;
        let plus = (p.ones & t.ones).count_ones() + (p.twos & t.twos).count_ones();
        let minus = (p.ones & t.twos).count_ones() + (p.twos & t.ones).count_ones();
        ((plus + 2 * minus) % 3) as u8
    }

    /// Trace computed directly as a sum of conjugates. Slow; kept as a
    /// reference for the table-driven [`FieldSpec::trace`].
    pub fn trace_by_conjugates(&self, x: &FieldElement) -> FieldElement {
        let mut sum = self.zero();
        let mut c = *x;
        for _ in 0..self.m {
            sum = self.add(&sum, &c);
            c = self.mul(&self.mul(&c, &c), &c);
        }
        sum
    }

    pub fn is_square(&self, x: &FieldElement) -> bool {
        if x.is_zero() {
            return true;
        }
        self.pow(x, (self.order - 1) / 2) == self.one()
    }

    /// A square root of `x`: of the two roots +-y, the one with the
    /// smaller index.
    pub fn sqrt(&self, x: &FieldElement) -> Result<FieldElement> {
        let y = self.any_sqrt(x)?;
        let minus = self.neg(&y);
        Ok(if minus.index() < y.index() { minus } else { y })
    }

    fn any_sqrt(&self, x: &FieldElement) -> Result<FieldElement> {
        self.check(x)?;
        if x.is_zero() {
            return Ok(*x);
        }
        if self.m % 2 == 1 {
            // q = 3 mod 4
            let y = self.pow(x, (self.order + 1) / 4);
            return if self.square(&y) == *x {
                Ok(y)
            } else {
                Err(Error::NonResidue)
            };
        }
        if !self.is_square(x) {
            return Err(Error::NonResidue);
        }
        self.tonelli_shanks(x)
    }

    fn tonelli_shanks(&self, x: &FieldElement) -> Result<FieldElement> {
        let nr = self
            .non_residue
            .expect("even degree fields cache a non-residue");
        let q1 = self.order - 1;
        let s = q1.trailing_zeros();
        let odd = q1 >> s;
        let one = self.one();

        let mut m = s;
        let mut c = self.pow(&nr, odd);
        let mut t = self.pow(x, odd);
        let mut r = self.pow(x, odd.div_ceil(2));
        while t != one {
            let mut i = 0;
            let mut t2 = t;
            while t2 != one {
                t2 = self.square(&t2);
                i += 1;
                if i == m {
                    return Err(Error::NonResidue);
                }
            }
            let mut b = c;
            for _ in 0..m - i - 1 {
                b = self.square(&b);
            }
            m = i;
            c = self.square(&b);
            t = self.mul(&t, &c);
            r = self.mul(&r, &b);
        }
        Ok(r)
    }

    /// All w with w^3 - w = a.
    ///
    /// The map w -> w^3 - w is F_3-linear with kernel F_3, so the solution
    /// set is either empty (exactly when Tr(a) != 0) or a coset
    /// {w, w+1, w+2}. Returned in canonical order.
    pub fn solve_artin_schreier(&self, a: &FieldElement) -> Result<Vec<FieldElement>> {
        self.check(a)?;
        let m = self.m;
        let columns: Vec<Planes> = (0..m)
            .map(|i| {
                let e = Planes::ZERO.with_trit(i, 1);
                apply_linear(&self.frobenius_images, e).sub(e)
            })
            .collect();
        let rows: Vec<Vec<u8>> = (0..m)
            .map(|r| columns.iter().map(|col| col.trit(r)).collect())
            .collect();
        let rhs = a.trits();
        let (particular, kernel) = linalg::solve(&rows, &rhs).ok_or(Error::NoSolution)?;

        let base = self.wrap(Planes::from_trits(&particular));
        let kernel: Vec<FieldElement> = kernel
            .iter()
            .map(|k| self.wrap(Planes::from_trits(k)))
            .collect();
        let mut out = vec![base];
        for k in &kernel {
            let mut next = Vec::with_capacity(out.len() * 3);
            for w in &out {
                next.push(*w);
                next.push(self.add(w, k));
                next.push(self.sub(w, k));
            }
            out = next;
        }
        out.sort();
        Ok(out)
    }

    /// Multiplicative order test against the cached prime divisors.
    pub fn is_primitive(&self, x: &FieldElement) -> bool {
        let Some(factors) = &self.group_factors else {
            return false;
        };
        if x.is_zero() {
            return false;
        }
        let q1 = self.order - 1;
        factors.iter().all(|p| self.pow(x, q1 / p) != self.one())
    }

    /// Parses `t:<m trits>` or `p:<k>` (alpha^k, needs a primitive alpha).
    pub fn parse_element(&self, s: &str) -> Result<FieldElement> {
        let err = |reason: String| Error::Parse {
            input: s.to_string(),
            reason,
        };
        if let Some(body) = s.strip_prefix("t:") {
            let trits = format::parse_trits(body).map_err(err)?;
            if trits.len() != self.m {
                return Err(err(format!(
                    "expected {} trits, found {}",
                    self.m,
                    trits.len()
                )));
            }
            self.from_trits(&trits)
        } else if let Some(body) = s.strip_prefix("p:") {
            if !self.alpha_primitive {
                return Err(Error::PowerNotationUnavailable);
            }
            let k: u64 = body
                .parse()
                .map_err(|e: std::num::ParseIntError| err(e.to_string()))?;
            Ok(self.pow(&self.alpha(), k % (self.order - 1)))
        } else {
            Err(err("expected a t: or p: prefix".to_string()))
        }
    }
}
