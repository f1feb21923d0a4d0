//! Builtin moduli for 2 <= m <= 12.
//!
//! Each entry is the first monic irreducible polynomial, in base-3 index
//! order of its lower coefficients, whose root is primitive. The entry for
//! m = 5 is pinned to x^5 + x^4 + x^2 + 1. `kloos3 moduli` regenerates the
//! table.

use crate::error::Result;
use crate::field::FieldSpec;

pub const BUILTIN_MAX_DEGREE: usize = 12;

/// x^5 + x^4 + x^2 + 1, coefficient of x^0 first.
pub const PHI_5: [u8; 6] = [1, 0, 1, 0, 1, 1];

const TABLE: [&[u8]; 11] = [
    &[2, 1, 1],
    &[1, 2, 0, 1],
    &[2, 1, 0, 0, 1],
    &PHI_5,
    &[2, 1, 0, 0, 0, 0, 1],
    &[1, 2, 1, 0, 0, 0, 0, 1],
    &[2, 0, 0, 1, 0, 0, 0, 0, 1],
    &[1, 0, 1, 2, 0, 0, 0, 0, 0, 1],
    &[2, 1, 0, 1, 0, 0, 0, 0, 0, 0, 1],
    &[1, 2, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1],
    &[2, 2, 2, 1, 2, 0, 0, 0, 0, 0, 0, 0, 1],
];

/// Builtin modulus for degree `m`, coefficient of x^0 first.
pub fn builtin_modulus(m: usize) -> Option<&'static [u8]> {
    (2..=BUILTIN_MAX_DEGREE).contains(&m).then(|| TABLE[m - 2])
}

/// Searches for the first monic irreducible modulus of degree `m` with a
/// primitive root, scanning lower coefficients in base-3 index order.
pub fn find_primitive_modulus(m: usize) -> Result<FieldSpec> {
    let count = crate::field::numtheory::pow3(m);
    let mut last_err = None;
    for idx in 0..count {
        let mut modulus = Vec::with_capacity(m + 1);
        let mut rest = idx;
        for _ in 0..m {
            modulus.push((rest % 3) as u8);
            rest /= 3;
        }
        modulus.push(1);
        if modulus[0] == 0 {
            continue;
        }
        match FieldSpec::new(m, &modulus) {
            Ok(field) if field.alpha_primitive() => return Ok(field),
            Ok(_) => {}
            Err(e) => last_err = Some(e),
        }
    }
    Err(last_err.unwrap_or(crate::error::Error::ReducibleModulus))
}

/// The full builtin table as it would be regenerated now.
pub fn regenerate_table() -> Result<Vec<Vec<u8>>> {
    (2..=BUILTIN_MAX_DEGREE)
        .map(|m| {
            if m == 5 {
                Ok(PHI_5.to_vec())
            } else {
                find_primitive_modulus(m).map(|f| f.modulus().to_vec())
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_matches_regeneration() {
        let fresh = regenerate_table().unwrap();
        for (m, modulus) in (2..=BUILTIN_MAX_DEGREE).zip(fresh) {
            assert_eq!(builtin_modulus(m).unwrap(), modulus.as_slice(), "m = {m}");
        }
    }

    #[test]
    fn builtin_fields_have_primitive_alpha() {
        for m in 2..=BUILTIN_MAX_DEGREE {
            let f = FieldSpec::builtin(m).unwrap();
            assert!(f.alpha_primitive(), "m = {m}");
        }
        assert!(FieldSpec::builtin(13).is_err());
        assert!(builtin_modulus(1).is_none());
    }
}
