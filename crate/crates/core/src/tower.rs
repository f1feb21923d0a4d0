//! Lifting to extension fields.
//!
//! GF(3^mn) is built with its own modulus; the [`Embedding`] maps the base
//! field into it by sending the base residue of x to a root of the base
//! modulus. For a in the base field, K_n(a) is the Kloosterman sum of the
//! embedded element over the extension (same whole-field convention), and
//! H, H_n are the 3-adic valuations with zero conventions m and mn.

use rand::Rng;

use crate::builtin::{builtin_modulus, find_primitive_modulus, BUILTIN_MAX_DEGREE};
use crate::curve::CurveParams;
use crate::error::{Error, Result};
use crate::field::{solve_f3, FieldElement, FieldSpec, MAX_DEGREE};
use crate::oracle::{val3, Oracle, ORACLE_MAX_DEGREE};
use crate::valuation::{is_kloosterman_zero, kval};

/// Up to this extension degree the embedding root is found by trying
/// every element; above it, by walking the subgroup of order 3^m - 1.
pub const EXHAUSTIVE_ROOT_MAX_DEGREE: usize = 12;

/// Field homomorphism from a base field into one of its extensions.
#[derive(Clone, Debug)]
pub struct Embedding {
    base: FieldSpec,
    ext: FieldSpec,
    /// Images of 1, x, ..., x^(m-1).
    images: Vec<FieldElement>,
}

impl Embedding {
    pub fn base(&self) -> &FieldSpec {
        &self.base
    }

    pub fn ext(&self) -> &FieldSpec {
        &self.ext
    }

    /// Image of the base residue of x.
    pub fn root(&self) -> FieldElement {
        self.images
            .get(1)
            .copied()
            .unwrap_or_else(|| self.ext.zero())
    }

    pub fn embed(&self, x: &FieldElement) -> FieldElement {
        assert!(self.base.contains(x), "element is not in the base field");
        let mut acc = self.ext.zero();
        for (i, img) in self.images.iter().enumerate() {
            acc = self.ext.add(&acc, &self.ext.scale(img, x.trit(i)));
        }
        acc
    }

    /// The base element mapping to `y`, if there is one.
    pub fn preimage(&self, y: &FieldElement) -> Option<FieldElement> {
        let m = self.base.degree();
        let rows: Vec<Vec<u8>> = (0..self.ext.degree())
            .map(|j| (0..m).map(|i| self.images[i].trit(j)).collect())
            .collect();
        let (x, _) = solve_f3(&rows, &y.trits())?;
        self.base.from_trits(&x).ok()
    }
}

fn eval_modulus(ext: &FieldSpec, modulus: &[u8], x: &FieldElement) -> FieldElement {
    modulus.iter().rev().fold(ext.zero(), |acc, &c| {
        ext.add(&ext.mul(&acc, x), &ext.from_prime(c))
    })
}

fn root_by_search(ext: &FieldSpec, modulus: &[u8]) -> Option<FieldElement> {
    ext.elements()
        .filter(|x| eval_modulus(ext, modulus, x).is_zero())
        .min()
}

fn root_by_generator(ext: &FieldSpec, base_order: u64, modulus: &[u8]) -> Option<FieldElement> {
    let g = ext.generator()?;
    let beta = ext.pow(&g, (ext.order() - 1) / (base_order - 1));
    std::iter::successors(Some(ext.one()), |x| Some(ext.mul(x, &beta)))
        .take((base_order - 1) as usize)
        .filter(|x| eval_modulus(ext, modulus, x).is_zero())
        .min()
}

/// Builds GF(3^mn) and the embedding of `base` into it.
pub fn build_extension(base: &FieldSpec, n: usize) -> Result<(FieldSpec, Embedding)> {
    let m = base.degree();
    let degree = m * n;
    if n < 2 || degree > MAX_DEGREE {
        return Err(Error::CapExceeded {
            what: "extension field",
            degree,
            cap: MAX_DEGREE,
        });
    }
    let ext = match builtin_modulus(degree) {
        Some(f) if degree <= BUILTIN_MAX_DEGREE => FieldSpec::new(degree, f)?,
        _ => find_primitive_modulus(degree)?,
    };
    let root = if degree <= EXHAUSTIVE_ROOT_MAX_DEGREE {
        root_by_search(&ext, base.modulus())
    } else {
        root_by_generator(&ext, base.order(), base.modulus())
    }
    .ok_or(Error::NoRootFound)?;
    let images = std::iter::successors(Some(ext.one()), |x| Some(ext.mul(x, &root)))
        .take(m)
        .collect();
    let embedding = Embedding {
        base: base.clone(),
        ext: ext.clone(),
        images,
    };
    Ok((ext, embedding))
}

/// Tr_{q^n -> q}(x) = x + x^q + ... + x^(q^(n-1)) with q = |base|.
pub fn rel_trace(ext: &FieldSpec, base: &FieldSpec, x: &FieldElement) -> FieldElement {
    let (m, mn) = (base.degree(), ext.degree());
    assert_eq!(mn % m, 0, "not an extension of the base field");
    let mut term = *x;
    let mut acc = ext.zero();
    for _ in 0..mn / m {
        acc = ext.add(&acc, &term);
        for _ in 0..m {
            term = ext.frobenius(&term);
        }
    }
    acc
}

/// Valuations of K(a) and K_n(a) side by side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerReport {
    pub a: FieldElement,
    pub m: usize,
    pub n: usize,
    /// n = 3^h s with 3 not dividing s.
    pub h: usize,
    pub s: usize,
    pub big_h: usize,
    pub big_h_n: usize,
    /// Whether the oracle valuations agree with the walks, when computed.
    pub oracle_agrees: Option<bool>,
    /// H_n = H + h, and the oracle agrees if it ran.
    pub consistent: bool,
}

/// n = 3^h s.
pub fn split_three(n: usize) -> (usize, usize) {
    let h = val3(n as i64, 0);
    (h, n / 3usize.pow(h as u32))
}

/// Which right-hand side matched the brute-force K_3(a).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum K3Formula {
    /// K^3 - 3K^2 + 3K - 3qK.
    Uncentered,
    /// (K - 1)^3 - 3q(K - 1) + 1.
    Centered,
}

impl K3Formula {
    pub fn as_str(self) -> &'static str {
        match self {
            K3Formula::Uncentered => "uncentered",
            K3Formula::Centered => "centered",
        }
    }
}

/// K_3(a) from the oracle next to both candidate closed forms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct K3Check {
    pub a: FieldElement,
    pub k: i64,
    pub k3: i64,
    pub uncentered: i64,
    pub centered: i64,
}

/// Outcome of comparing both K_3 forms over a whole base field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct K3Verdict {
    pub m: usize,
    pub checks: Vec<K3Check>,
    pub uncentered_matches: usize,
    pub centered_matches: usize,
    /// The form that matched every a while the other did not, if any.
    pub winner: Option<K3Formula>,
}

fn uncentered_rhs(k: i64, q: i64) -> i64 {
    k.pow(3) - 3 * k.pow(2) + 3 * k - 3 * q * k
}

fn centered_rhs(k: i64, q: i64) -> i64 {
    (k - 1).pow(3) - 3 * q * (k - 1) + 1
}

/// A base field, an extension, and optional brute-force tables for both.
#[derive(Clone, Debug)]
pub struct Tower {
    n: usize,
    embedding: Embedding,
    oracles: Option<(Oracle, Oracle)>,
}

impl Tower {
    pub fn new(base: &FieldSpec, n: usize) -> Result<Tower> {
        let (_, embedding) = build_extension(base, n)?;
        Ok(Tower {
            n,
            embedding,
            oracles: None,
        })
    }

    /// Builds oracle tables for both fields; fails above `cap`.
    pub fn with_oracles(mut self, cap: usize) -> Result<Tower> {
        let degree = self.ext().degree();
        let cap = cap.min(ORACLE_MAX_DEGREE);
        if degree > cap {
            return Err(Error::CapExceeded {
                what: "extension oracle",
                degree,
                cap,
            });
        }
        self.oracles = Some((Oracle::new(self.base())?, Oracle::new(self.ext())?));
        Ok(self)
    }

    pub fn has_oracles(&self) -> bool {
        self.oracles.is_some()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn base(&self) -> &FieldSpec {
        self.embedding.base()
    }

    pub fn ext(&self) -> &FieldSpec {
        self.embedding.ext()
    }

    pub fn embedding(&self) -> &Embedding {
        &self.embedding
    }

    pub fn embed(&self, x: &FieldElement) -> FieldElement {
        self.embedding.embed(x)
    }

    pub fn rel_trace(&self, x: &FieldElement) -> FieldElement {
        rel_trace(self.ext(), self.base(), x)
    }

    /// K_n(a) by brute force; needs oracles.
    pub fn lifted_sum(&self, a: &FieldElement) -> Result<i64> {
        let (_, ext) = self.oracles_or_cap()?;
        Ok(ext.kloosterman_sum(&self.embed(a))?.value)
    }

    fn oracles_or_cap(&self) -> Result<(&Oracle, &Oracle)> {
        self.oracles
            .as_ref()
            .map(|(b, e)| (b, e))
            .ok_or(Error::CapExceeded {
                what: "extension oracle",
                degree: self.ext().degree(),
                cap: ORACLE_MAX_DEGREE,
            })
    }

    /// Compares H_n(a) with H(a) + h, both from tripling walks.
    pub fn check<R: Rng + ?Sized>(&self, a: &FieldElement, rng: &mut R) -> Result<TowerReport> {
        let (m, n) = (self.base().degree(), self.n);
        let (h, s) = split_three(n);
        let base_curve = CurveParams::new(self.base(), *a)?;
        let ext_a = self.embed(a);
        let ext_curve = CurveParams::new(self.ext(), ext_a)?;
        let big_h = kval(&base_curve, rng)?.k;
        let big_h_n = kval(&ext_curve, rng)?.k;
        let oracle_agrees = match &self.oracles {
            Some((bo, eo)) => {
                let k = bo.kloosterman_sum(a)?.value;
                let kn = eo.kloosterman_sum(&ext_a)?.value;
                Some(val3(k, m) == big_h && val3(kn, m * n) == big_h_n)
            }
            None => None,
        };
        Ok(TowerReport {
            a: *a,
            m,
            n,
            h,
            s,
            big_h,
            big_h_n,
            oracle_agrees,
            consistent: big_h_n == big_h + h && oracle_agrees != Some(false),
        })
    }

    /// Oracle K_3(a) against both closed forms; needs n = 3 and oracles.
    pub fn k3_check(&self, a: &FieldElement) -> Result<K3Check> {
        assert_eq!(self.n, 3, "K_3 needs a cubic extension");
        if a.is_zero() {
            return Err(Error::ZeroParameter);
        }
        let (bo, eo) = self.oracles_or_cap()?;
        let k = bo.kloosterman_sum(a)?.value;
        let k3 = eo.kloosterman_sum(&self.embed(a))?.value;
        let q = self.base().order() as i64;
        Ok(K3Check {
            a: *a,
            k,
            k3,
            uncentered: uncentered_rhs(k, q),
            centered: centered_rhs(k, q),
        })
    }

    /// Base elements a with K_n(a) = 0 according to the walk.
    pub fn nonzero_violations<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Vec<FieldElement>> {
        let mut out = Vec::new();
        for a in self.base().elements().skip(1) {
            let curve = CurveParams::new(self.ext(), self.embed(&a))?;
            if is_kloosterman_zero(&curve, rng)? {
                out.push(a);
            }
        }
        Ok(out)
    }
}

/// H_n(a) = H(a) + h, with an oracle cross-check when the extension is
/// small enough.
pub fn lifting_law_check<R: Rng + ?Sized>(
    base: &FieldSpec,
    a: &FieldElement,
    n: usize,
    rng: &mut R,
) -> Result<TowerReport> {
    let tower = Tower::new(base, n)?;
    let tower = if tower.ext().degree() <= ORACLE_MAX_DEGREE {
        tower.with_oracles(ORACLE_MAX_DEGREE)?
    } else {
        tower
    };
    tower.check(a, rng)
}

/// (oracle K_3(a), uncentered form, centered form).
pub fn k3_identity_check(base: &FieldSpec, a: &FieldElement) -> Result<(i64, i64, i64)> {
    let c = Tower::new(base, 3)?
        .with_oracles(ORACLE_MAX_DEGREE)?
        .k3_check(a)?;
    Ok((c.k3, c.uncentered, c.centered))
}

/// Runs [`Tower::k3_check`] for every nonzero a of the base field.
pub fn adjudicate_k3(base: &FieldSpec) -> Result<K3Verdict> {
    let tower = Tower::new(base, 3)?.with_oracles(ORACLE_MAX_DEGREE)?;
    let checks = base
        .elements()
        .skip(1)
        .map(|a| tower.k3_check(&a))
        .collect::<Result<Vec<_>>>()?;
    let uncentered_matches = checks.iter().filter(|c| c.k3 == c.uncentered).count();
    let centered_matches = checks.iter().filter(|c| c.k3 == c.centered).count();
    let total = checks.len();
    let winner = match (uncentered_matches == total, centered_matches == total) {
        (true, false) => Some(K3Formula::Uncentered),
        (false, true) => Some(K3Formula::Centered),
        _ => None,
    };
    Ok(K3Verdict {
        m: base.degree(),
        checks,
        uncentered_matches,
        centered_matches,
        winner,
    })
}

/// Nonzero a in `base` whose lift has K_n(a) = 0 (expected: none).
pub fn subfield_nonzero_scan<R: Rng + ?Sized>(
    base: &FieldSpec,
    n: usize,
    rng: &mut R,
) -> Result<Vec<FieldElement>> {
    Tower::new(base, n)?.nonzero_violations(rng)
}
